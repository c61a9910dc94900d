"""Max-Sub-SAT近似算法

A中均匀随机的点期望满足每个非常量子句至少1/2的概率（两个文字形式在A上
独立时为3/4）。条件期望法按升序逐个固定A的自由变量（即核系数），
得到确定性算法。
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Union

from ..core.errors import FormulaError, PremiseViolated
from ..core.f2 import AffineForm, AffineSubspace, BitVec, LinearSystem, iter_point_bits
from ..core.formula import Clause, CnfFormula, Literal, SubSatInstance
from ..core.models import MaxResult
from ..utils.logger import logger
from ..utils.rng import RandomSource, ensure_rng, random_bits

ClauseLike = Union[Clause, Sequence[AffineForm]]


def _require_space(inst: SubSatInstance) -> AffineSubspace:
    if not isinstance(inst.space, AffineSubspace):
        raise FormulaError("Max-Sub-SAT要求子空间A非空")
    return inst.space


def _clause_forms(clause: ClauseLike, n: int) -> List[AffineForm]:
    if isinstance(clause, Clause):
        return clause.forms(n)
    return list(clause)


def clause_sat_probability(clause: ClauseLike, space: AffineSubspace) -> Fraction:
    """A中均匀随机点满足子句的精确概率 1 − |A ∩ {所有形式为0}| / |A|

    Args:
        clause: 子句，或仿射形式的析取
        space: 非空仿射子空间

    Returns:
        Fraction: 分母为2的幂的有理数
    """
    falsifying = space.intersect(_clause_forms(clause, space.n))
    if not isinstance(falsifying, AffineSubspace):
        return Fraction(1)
    return 1 - Fraction(1, 2 ** (space.dim - falsifying.dim))


def expected_satisfied(phi: CnfFormula, space: AffineSubspace) -> Fraction:
    return sum((clause_sat_probability(c, space) for c in phi.clauses), Fraction(0))


@dataclass(frozen=True)
class ForcedPreprocessing:
    """去除A上取常值的变量后的实例

    kept[j]是约简实例第j个变量的原编号；always_satisfied/always_falsified
    统计在A上恒真/恒假、因此从约简实例中删去的子句数。
    """
    instance: SubSatInstance
    fixed: Dict[int, int]
    kept: Tuple[int, ...]
    always_satisfied: int
    always_falsified: int
    n_original: int

    def lift(self, point: BitVec) -> BitVec:
        """约简实例的赋值 → 原实例的赋值"""
        bits = 0
        for var, value in self.fixed.items():
            if value:
                bits |= 1 << var
        for new_index, old_index in enumerate(self.kept):
            if (point.bits >> new_index) & 1:
                bits |= 1 << old_index
        return BitVec(self.n_original, bits)


def preprocess_forced(inst: SubSatInstance) -> ForcedPreprocessing:
    """固定并删除在A上取常值的变量

    Args:
        inst: 子空间非空的实例

    Returns:
        ForcedPreprocessing: 约简实例及回代信息
    """
    space = _require_space(inst)
    n = inst.n
    echelon = space.echelon()
    fixed: Dict[int, int] = {}
    for var in range(n):
        mask, const = echelon.reduce(1 << var, 0)
        if mask == 0:
            fixed[var] = const
    fixed_mask = sum(1 << v for v in fixed)
    fixed_bits = sum(1 << v for v, value in fixed.items() if value)
    kept = tuple(v for v in range(n) if v not in fixed)
    index_of = {old: new for new, old in enumerate(kept)}

    rows = []
    for row in space.rows:
        const = row.constant ^ ((row.mask & fixed_bits).bit_count() & 1)
        rest = AffineForm(BitVec(n, row.mask & ~fixed_mask), const)
        rows.append(rest.project(kept))
    reduced_space = AffineSubspace.from_system(LinearSystem(len(kept), tuple(rows)))

    clauses = []
    always_satisfied = always_falsified = 0
    for clause in inst.phi.clauses:
        if any(lit.variable in fixed and lit.value(fixed_bits) for lit in clause.literals):
            always_satisfied += 1
            continue
        literals = tuple(
            Literal(index_of[lit.variable], lit.negated)
            for lit in clause.literals
            if lit.variable not in fixed
        )
        if not literals:
            always_falsified += 1
            continue
        clauses.append(Clause(literals))

    if fixed:
        logger.debug(f"预处理固定了{len(fixed)}个变量")
    return ForcedPreprocessing(
        instance=SubSatInstance(CnfFormula(len(kept), tuple(clauses)), reduced_space),
        fixed=fixed,
        kept=kept,
        always_satisfied=always_satisfied,
        always_falsified=always_falsified,
        n_original=n,
    )


def _guarantee(inst: SubSatInstance) -> float:
    """预处理后的保证下界：恒真子句计1，剩余子句都有两个在A上不同的文字形式时各计3/4，否则各计1/2"""
    prep = preprocess_forced(inst)
    reduced = prep.instance
    if not reduced.phi.clauses:
        return float(prep.always_satisfied)
    echelon = reduced.space.echelon()
    independent = all(
        len({echelon.reduce(lit.form(reduced.n).mask, 0)[0] for lit in clause.literals}) >= 2
        for clause in reduced.phi.clauses
    )
    ratio = 0.75 if independent else 0.5
    return prep.always_satisfied + ratio * reduced.phi.m


def approx_max_random(inst: SubSatInstance, rng: RandomSource) -> MaxResult:
    """A中均匀随机取一个点"""
    space = _require_space(inst)
    generator = ensure_rng(rng)
    point = space.point_from_coefficients(random_bits(generator, space.dim))
    return MaxResult(
        assignment=point.to_list(),
        satisfied=inst.phi.satisfied_count(point),
        total=inst.phi.m,
        bound=_guarantee(inst),
        algorithm="max-rand",
    )


def _derandomize(phi: CnfFormula, space: AffineSubspace) -> BitVec:
    """条件期望法：按升序固定自由变量，取条件期望较大的值，相等时取0"""
    current = space
    for var in space.free_variables:
        branches = []
        for value in (0, 1):
            restricted = current.fix(var, value)
            branches.append((expected_satisfied(phi, restricted), restricted))
        current = branches[1][1] if branches[1][0] > branches[0][0] else branches[0][1]
    return current.parameterization.particular


def approx_max_derand(inst: SubSatInstance) -> MaxResult:
    """条件期望法去随机化的近似算法

    Returns:
        MaxResult: 满足子句数不少于⌈E⌉，E为A上均匀随机点的期望满足数
    """
    space = _require_space(inst)
    point = _derandomize(inst.phi, space)
    return MaxResult(
        assignment=point.to_list(),
        satisfied=inst.phi.satisfied_count(point),
        total=inst.phi.m,
        bound=_guarantee(inst),
        algorithm="max-derand",
    )


def exact_max(inst: SubSatInstance) -> Tuple[int, BitVec]:
    """枚举A求最优值（测试基准）

    Raises:
        EnumerationCapExceeded: dim(A)超过枚举上限
    """
    space = _require_space(inst)
    best_count = -1
    best = 0
    for bits in iter_point_bits(space):
        count = inst.phi.satisfied_count(bits)
        if count > best_count:
            best_count, best = count, bits
            if count == inst.phi.m:
                break
    return best_count, BitVec(inst.n, best)


def _absorb_units(inst: SubSatInstance) -> Tuple[AffineSubspace, List[Clause], int]:
    """把单位子句（以及在A上退化为单个文字的子句）并入A，直到不动点

    Returns:
        Tuple[AffineSubspace, List[Clause], int]: 加强后的子空间、剩余子句、被吸收的子句数

    Raises:
        PremiseViolated: 加强后A为空或出现恒假子句
    """
    n = inst.n
    space = _require_space(inst)
    remaining = list(inst.phi.clauses)
    absorbed = 0
    changed = True
    while changed:
        changed = False
        echelon = space.echelon()
        kept: List[Clause] = []
        for clause in remaining:
            reduced = [echelon.reduce(lit.form(n).mask, lit.form(n).constant) for lit in clause.literals]
            if any(mask == 0 and const == 1 for mask, const in reduced):
                absorbed += 1
                continue
            free = {(mask, const) for mask, const in reduced if mask}
            if not free:
                raise PremiseViolated(f"子句{clause}在加强后的子空间上恒为假，实例不可满足")
            masks = {mask for mask, _ in free}
            if len(masks) == 1 and len(free) == 2:
                # ℓ与ℓ+1在A上同时出现，子句恒真
                absorbed += 1
                continue
            if len(masks) == 1:
                mask, const = next(iter(free))
                space = space.intersect([AffineForm(BitVec(n, mask), const ^ 1)])
                if not isinstance(space, AffineSubspace):
                    raise PremiseViolated("吸收单位子句后子空间为空，实例不可满足")
                echelon = space.echelon()
                absorbed += 1
                changed = True
                continue
            kept.append(clause)
        remaining = kept
    return space, remaining, absorbed


def satisfiable_threequarters(inst: SubSatInstance) -> MaxResult:
    """可满足实例的3/4近似：吸收单位子句后对剩余部分做去随机化

    Returns:
        MaxResult: 满足数不少于m₁ + ⌈3m₂/4⌉

    Raises:
        PremiseViolated: 吸收过程中发现实例不可满足
    """
    space, remaining, absorbed = _absorb_units(inst)
    residual = CnfFormula(inst.n, tuple(remaining))
    point = _derandomize(residual, space)
    logger.debug(f"吸收{absorbed}个子句，剩余{len(remaining)}个")
    return MaxResult(
        assignment=point.to_list(),
        satisfied=inst.phi.satisfied_count(point),
        total=inst.phi.m,
        bound=absorbed + 0.75 * len(remaining),
        algorithm="max-sat34",
    )
