"""归约实例生成器与植入解的随机实例

每个生成器的输出都可以在小规模上用枚举校验：解集与源对象的见证一一对应。
"""

from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..config import get_settings
from ..core.conversions import PafInstance
from ..core.errors import ReductionError
from ..core.f2 import AffineForm, AffineSubspace, BitVec, EchelonForm, LinearSystem
from ..core.formula import Clause, CnfFormula, Literal, SubSatInstance, enumerate_solutions
from ..utils.logger import logger
from ..utils.rng import random_bits
from .graphs import Graph, PartitionedGraph

OxrConstraint = Tuple[int, int, int]


def color_variables(vertex: int) -> Tuple[int, int]:
    """顶点v的两位颜色编码对应变量(2v, 2v+1)"""
    return 2 * vertex, 2 * vertex + 1


def four_coloring_to_2paf(graph: Graph) -> PafInstance:
    """4-着色 → 二次PAF方程组

    每条边(u, v)给出方程 (x_{u,1} + x_{v,1} + 1)(x_{u,2} + x_{v,2} + 1) = 0，
    即u、v的两位颜色编码至少有一位不同。
    """
    n = 2 * graph.vertex_count
    equations = []
    for u, v in graph.edges:
        (u1, u2), (v1, v2) = color_variables(u), color_variables(v)
        equations.append((
            AffineForm.from_indices(n, (u1, v1), 1),
            AffineForm.from_indices(n, (u2, v2), 1),
        ))
    return PafInstance(n, tuple(equations))


def decode_coloring(point: BitVec) -> List[int]:
    """由赋值读出每个顶点的颜色0..3"""
    return [point[2 * v] | (point[2 * v + 1] << 1) for v in range(point.length // 2)]


def multicolored_clique_to_2subsat(pg: PartitionedGraph) -> SubSatInstance:
    """多色团 → 余维t的2-Sub-SAT实例

    每个顶点一个变量；同一部分内任意两点、不同部分间的非边各给出子句
    (¬x_u ∨ ¬x_v)；每个部分V_i给出方程 Σ_{u∈V_i} x_u = 1。
    """
    n = pg.graph.vertex_count
    clauses = []
    for part in pg.parts:
        for u, v in combinations(part, 2):
            clauses.append(Clause((Literal(u, True), Literal(v, True))))
    part_of = {v: i for i, part in enumerate(pg.parts) for v in part}
    for u, v in pg.graph.non_edges():
        if part_of[u] != part_of[v]:
            clauses.append(Clause((Literal(u, True), Literal(v, True))))
    rows = [AffineForm.from_indices(n, part, 1) for part in pg.parts]
    space = AffineSubspace.from_system(LinearSystem(n, tuple(rows)))
    logger.debug(f"多色团归约: {n}个变量, {len(clauses)}个子句, t={pg.t}")
    return SubSatInstance(CnfFormula(n, tuple(clauses)), space)


def _literal_form(n: int, value: int) -> AffineForm:
    if value == 0 or abs(value) > n:
        raise ReductionError(f"文字{value}超出变量范围[1, {n}]")
    return Literal.from_dimacs(value).form(n)


def oxr_holds(constraint: OxrConstraint, point: BitVec) -> bool:
    """OXR(l1, l2, l3) = l1 ∨ (l2 ⊕ l3)"""
    l1, l2, l3 = (Literal.from_dimacs(v).value(point.bits) for v in constraint)
    return bool(l1 or (l2 ^ l3))


def oxr_to_2paf(n: int, constraints: Sequence[OxrConstraint]) -> PafInstance:
    """OXR约束 → (ℓ1 + 1)(ℓ2 + ℓ3 + 1) = 0，否定文字折入常数项

    Args:
        n: 变量数
        constraints: DIMACS风格的有符号文字三元组
    """
    equations = []
    for constraint in constraints:
        if len(constraint) != 3:
            raise ReductionError(f"OXR约束必须恰有3个文字: {constraint}")
        f1, f2, f3 = (_literal_form(n, v) for v in constraint)
        equations.append((f1 + 1, f2 + f3 + 1))
    return PafInstance(n, tuple(equations))


def maxlin2_to_e2paf(forms: Sequence[AffineForm]) -> PafInstance:
    """线性方程组{A_i = 0} → 全部C(m,2)个方程 A_i·A_j = 0

    违反r个原方程的赋值恰好违反C(r,2)个新方程。

    Raises:
        ReductionError: 形式有重复
    """
    forms = list(forms)
    if not forms:
        raise ReductionError("方程组不能为空")
    n = forms[0].n
    if len(set(forms)) != len(forms):
        raise ReductionError("输入的仿射形式必须两两不同")
    if any(form.n != n for form in forms):
        raise ReductionError("输入的仿射形式维数不一致")
    return PafInstance(n, tuple((a, b) for a, b in combinations(forms, 2)))


def _random_equations(n: int, t: int, planted: int, rng: np.random.Generator) -> List[AffineForm]:
    """t个线性无关、在planted处成立的随机方程"""
    echelon = EchelonForm(n)
    rows = []
    while len(rows) < t:
        mask = random_bits(rng, n)
        if mask == 0:
            continue
        const = (mask & planted).bit_count() & 1
        if echelon.add(mask, const):
            if echelon.rank > len(rows):
                rows.append(AffineForm(BitVec(n, mask), const))
    return rows


def _random_clause(n: int, k: int, planted: int, rng: np.random.Generator) -> Clause:
    variables = rng.choice(n, size=k, replace=False)
    signs = random_bits(rng, k)
    literals = [Literal(int(v), bool((signs >> i) & 1)) for i, v in enumerate(variables)]
    if not any(lit.value(planted) for lit in literals):
        # 均匀选一个文字取反，使子句在植入点处成立
        flip = int(rng.integers(0, k))
        literals[flip] = literals[flip].complement()
    return Clause(tuple(literals))


def _has_unique_solution(inst: SubSatInstance) -> bool:
    count = 0
    for _ in enumerate_solutions(inst):
        count += 1
        if count > 1:
            return False
    return count == 1


def planted_instance(
    n: int,
    k: int,
    m: int,
    t: int,
    rng: np.random.Generator,
    unique: bool = False,
) -> Tuple[SubSatInstance, BitVec]:
    """生成带植入解ā的随机实例

    先随机取ā，再取t个线性无关且在ā处成立的方程（因此codim(A) = t），
    最后取m个宽度k的随机子句，不被ā满足的子句随机翻转一个文字。

    Args:
        n: 变量数
        k: 子句宽度
        m: 子句数
        t: 余维
        rng: 随机数生成器
        unique: 是否拒绝采样到恰有唯一解为止

    Returns:
        Tuple[SubSatInstance, BitVec]: 实例与植入解

    Raises:
        ReductionError: 参数不合法，唯一解要求超出规模上限，或拒绝采样次数耗尽
    """
    if not 0 <= t <= n:
        raise ReductionError(f"余维t={t}必须在[0, n={n}]内")
    if m > 0 and not 1 <= k <= n:
        raise ReductionError(f"子句宽度k={k}必须在[1, n={n}]内")
    settings = get_settings()
    if unique and n > settings.unique_cap:
        raise ReductionError(f"唯一解校验要求n ≤ {settings.unique_cap}，当前n={n}")

    attempts = settings.max_rejection_attempts if unique else 1
    for attempt in range(attempts):
        planted = random_bits(rng, n)
        rows = _random_equations(n, t, planted, rng)
        clauses = tuple(_random_clause(n, k, planted, rng) for _ in range(m))
        space = AffineSubspace.from_system(LinearSystem(n, tuple(rows)))
        inst = SubSatInstance(CnfFormula(n, clauses), space)
        if not unique or _has_unique_solution(inst):
            if unique:
                logger.debug(f"第{attempt + 1}次采样得到唯一解实例")
            return inst, BitVec(n, planted)
    raise ReductionError(f"{attempts}次采样都没有得到唯一解实例(n={n}, k={k}, m={m}, t={t})")


def chain_instance(r: int, rng: np.random.Generator) -> Tuple[SubSatInstance, BitVec]:
    """随机分支的紧实例：dim(A) = r，2-CNF，恰有唯一解ā

    变量x_0..x_{r-1}占下标0..r-1，z_0..z_{r-2}占下标r..2r-2；A由z_i = x_i + x_{i+1}给出。
    子句(x_i ∨ z_i)的两个文字都在ā处为真，最后一个子句是单元子句x_{r-1}。
    分支时每个二元子句的两个形式都不被此前的选择确定，3种选择里恰有2种保留ā，
    所以单次迭代成功率恰为(2/3)^{r-1}。

    Returns:
        Tuple[SubSatInstance, BitVec]: 实例(n = 2r - 1, t = r - 1, m = r)与唯一解

    Raises:
        ReductionError: r < 1
    """
    if r < 1:
        raise ReductionError(f"链实例要求r ≥ 1，当前r={r}")
    n = 2 * r - 1
    x = random_bits(rng, r)
    planted = x
    rows = []
    for i in range(r - 1):
        z = ((x >> i) ^ (x >> (i + 1))) & 1
        planted |= z << (r + i)
        rows.append(AffineForm.from_indices(n, (r + i, i, i + 1), 0))

    def true_literal(index: int) -> Literal:
        return Literal(index, not (planted >> index) & 1)

    clauses = [Clause((true_literal(i), true_literal(r + i))) for i in range(r - 1)]
    clauses.append(Clause((true_literal(r - 1),)))
    space = AffineSubspace.from_system(LinearSystem(n, tuple(rows)))
    return SubSatInstance(CnfFormula(n, tuple(clauses)), space), BitVec(n, planted)


def planted_paf(
    n: int,
    m: int,
    degree: int,
    rng: np.random.Generator,
    planted: Optional[int] = None,
) -> Tuple[PafInstance, BitVec]:
    """生成在ā处成立的随机PAF方程组：每个方程取degree个随机仿射因子，
    若它们在ā处都为1就随机挑一个加1使其为0
    """
    if degree < 1:
        raise ReductionError(f"方程次数必须至少为1: {degree}")
    if planted is None:
        planted = random_bits(rng, n)
    point = BitVec(n, planted)
    equations = []
    for _ in range(m):
        factors = [AffineForm(BitVec(n, random_bits(rng, n)), int(rng.integers(0, 2))) for _ in range(degree)]
        if all(f.evaluate(point) for f in factors):
            j = int(rng.integers(0, degree))
            factors[j] = factors[j] + 1
        equations.append(tuple(factors))
    return PafInstance(n, tuple(equations)), point
