"""等价问题表示之间的转换

Sub-SAT、仿射子句形式Ψ、PAF方程组（仿射形式乘积等于0）与
子空间并集回避问题(USA)之间互相转换，解集保持不变。
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import FormulaError
from .f2 import AffineForm, AffineSubspace, BitVec, EmptySubspace, LinearSystem, Point, as_bits
from .formula import Clause, CnfFormula, Literal, SubSatInstance


def _parity(mask: int) -> int:
    return mask.bit_count() & 1


@dataclass(frozen=True)
class AffineClauseFormula:
    """仿射形式的析取的合取Ψ，定义在r个自由变量上

    trivially_unsat为True表示某个子句化简后所有形式恒为0。
    """
    r: int
    clauses: Tuple[Tuple[AffineForm, ...], ...] = ()
    trivially_unsat: bool = False

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        for clause in self.clauses:
            for form in clause:
                if form.n != self.r:
                    raise FormulaError(f"仿射形式维数{form.n}与自由变量数{self.r}不一致")
            if not clause:
                object.__setattr__(self, "trivially_unsat", True)

    @property
    def k(self) -> int:
        return max((len(c) for c in self.clauses), default=0)

    def evaluate(self, point: Point) -> bool:
        if self.trivially_unsat:
            return False
        bits = as_bits(point, self.r)
        return all(any(form.evaluate(bits) for form in clause) for clause in self.clauses)

    def __str__(self) -> str:
        if not self.clauses:
            return "⊥" if self.trivially_unsat else "⊤"
        return " ∧ ".join("(" + " ∨ ".join(str(f) for f in c) + ")" for c in self.clauses)


@dataclass(frozen=True)
class PafInstance:
    """仿射因子乘积方程组：每个方程断言其因子之积等于0"""
    n: int
    equations: Tuple[Tuple[AffineForm, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "equations", tuple(tuple(e) for e in self.equations))
        for index, equation in enumerate(self.equations):
            if not equation:
                raise FormulaError(f"第{index}个方程没有因子")
            for factor in equation:
                if factor.n != self.n:
                    raise FormulaError(f"因子维数{factor.n}与变量数{self.n}不一致")

    @property
    def m(self) -> int:
        return len(self.equations)

    @property
    def degree(self) -> int:
        return max((len(e) for e in self.equations), default=0)

    def equation_holds(self, index: int, point: Point) -> bool:
        bits = as_bits(point, self.n)
        return any(factor.evaluate(bits) == 0 for factor in self.equations[index])

    def violated_count(self, point: Point) -> int:
        bits = as_bits(point, self.n)
        return sum(1 for i in range(self.m) if not self.equation_holds(i, bits))

    def is_solution(self, point: Point) -> bool:
        return self.violated_count(point) == 0

    def __str__(self) -> str:
        return "; ".join(
            " * ".join(f"({f})" for f in equation) + " = 0" for equation in self.equations
        )


@dataclass(frozen=True)
class UsaInstance:
    """子空间并集回避：求不属于任何spaces[i]的点"""
    n: int
    spaces: Tuple[AffineSubspace, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "spaces", tuple(self.spaces))
        for space in self.spaces:
            if space.n != self.n:
                raise FormulaError(f"子空间维数{space.n}与变量数{self.n}不一致")

    def avoids(self, point: Point) -> bool:
        return not any(space.contains(point) for space in self.spaces)


@dataclass(frozen=True)
class SubstitutionTrace:
    """Ψ的变量y_i对应A的第i个自由变量"""
    space: AffineSubspace

    @property
    def r(self) -> int:
        return self.space.dim

    def lift(self, point: Point) -> BitVec:
        """Ψ的赋值 → A中的点"""
        return self.space.point_from_coefficients(point)

    def project(self, point: Point) -> BitVec:
        """A中的点 → Ψ的赋值"""
        return self.space.coefficients_of(point)


def _simplify_clause(forms: Iterable[AffineForm]) -> Optional[Tuple[AffineForm, ...]]:
    """化简一个仿射子句：恒真返回None，删除恒0形式并去重"""
    by_mask: Dict[int, AffineForm] = {}
    for form in forms:
        if form.is_constant:
            if form.constant:
                return None
            continue
        previous = by_mask.get(form.mask)
        if previous is not None and previous.constant != form.constant:
            # ℓ与ℓ+1总有一个为1
            return None
        by_mask[form.mask] = form
    return tuple(by_mask[mask] for mask in sorted(by_mask))


def _collect(r: int, clauses: Iterable[Iterable[AffineForm]]) -> AffineClauseFormula:
    kept = []
    unsat = False
    for forms in clauses:
        simplified = _simplify_clause(forms)
        if simplified is None:
            continue
        if not simplified:
            unsat = True
        kept.append(simplified)
    return AffineClauseFormula(r, tuple(kept), unsat)


def substitute_form(space: AffineSubspace, form: AffineForm) -> AffineForm:
    """把原坐标上的仿射形式改写成A的自由参数上的形式"""
    param = space.parameterization
    coeffs = 0
    for i, basis in enumerate(param.kernel_basis):
        if _parity(basis.bits & form.mask):
            coeffs |= 1 << i
    constant = _parity(param.particular.bits & form.mask) ^ form.constant
    return AffineForm(BitVec(space.dim, coeffs), constant)


def to_affine_clause_form(inst: SubSatInstance) -> Tuple[AffineClauseFormula, SubstitutionTrace]:
    """用A的自由变量参数化，把(Φ, A)改写成Ψ

    Args:
        inst: 子空间非空的实例

    Returns:
        Tuple[AffineClauseFormula, SubstitutionTrace]: Ψ与代换记录
    """
    space = inst.space
    if not isinstance(space, AffineSubspace):
        raise FormulaError("空子空间无法参数化")
    clauses = (
        [substitute_form(space, lit.form(inst.n)) for lit in clause.literals]
        for clause in inst.phi.clauses
    )
    return _collect(space.dim, clauses), SubstitutionTrace(space)


def subsat_to_usa(inst: SubSatInstance) -> UsaInstance:
    """每个子句的违反集与A的每个“补”超平面构成要回避的子空间"""
    n = inst.n
    spaces: List[AffineSubspace] = []
    if isinstance(inst.space, EmptySubspace):
        spaces.append(AffineSubspace.full(n))
    else:
        for row in inst.space.rows:
            spaces.append(AffineSubspace.from_forms(n, [row + 1]))
    for clause in inst.phi.clauses:
        # 子句被违反当且仅当所有文字形式都为0
        spaces.append(AffineSubspace.from_forms(n, clause.forms(n)))
    return UsaInstance(n, tuple(spaces))


def usa_to_subsat(usa: UsaInstance) -> AffineClauseFormula:
    """x不在{rows = 0}中当且仅当某个row取1"""
    return _collect(usa.n, (space.rows for space in usa.spaces))


def subsat_to_paf(inst: SubSatInstance) -> PafInstance:
    """子句C → ∏_{ℓ∈C}(ℓ+1) = 0，A的每个方程row → row = 0"""
    n = inst.n
    equations = []
    if isinstance(inst.space, EmptySubspace):
        equations.append((AffineForm.constant_form(n, 1),))
    else:
        equations.extend((row,) for row in inst.space.rows)
    for clause in inst.phi.clauses:
        if clause.width == 0:
            equations.append((AffineForm.constant_form(n, 1),))
        else:
            equations.append(tuple(form + 1 for form in clause.forms(n)))
    return PafInstance(n, tuple(equations))


def paf_to_subsat(paf: PafInstance) -> AffineClauseFormula:
    """∏f = 0 当且仅当某个f+1取1"""
    return _collect(paf.n, (tuple(f + 1 for f in equation) for equation in paf.equations))


def affine_clause_to_subsat(psi: AffineClauseFormula) -> SubSatInstance:
    """为每个非文字的仿射形式引入新变量y = form，得到等价的Sub-SAT实例

    结果的前r个坐标就是Ψ的变量；新变量由A唯一确定。
    """
    r = psi.r
    fresh: Dict[int, int] = {}
    for clause in psi.clauses:
        for form in clause:
            if form.mask.bit_count() > 1 and form.mask not in fresh:
                fresh[form.mask] = r + len(fresh)
    n = r + len(fresh)

    clauses = []
    for clause in psi.clauses:
        simplified = _simplify_clause(clause)
        if simplified is None:
            continue
        literals = []
        for form in simplified:
            if form.mask.bit_count() == 1:
                var = form.mask.bit_length() - 1
            else:
                var = fresh[form.mask]
            # 形式取1 ⇔ 文字为真：常数项1对应否定文字
            literals.append(Literal(var, bool(form.constant)))
        clauses.append(Clause(tuple(literals)))
    if psi.trivially_unsat and all(c.width for c in clauses):
        clauses.append(Clause(()))

    rows = []
    for mask, var in fresh.items():
        rows.append(AffineForm(BitVec(n, mask | (1 << var)), 0))
    space = AffineSubspace.from_system(LinearSystem(n, tuple(rows)))
    return SubSatInstance(CnfFormula(n, tuple(clauses)), space)


def project_witness(witness: BitVec, r: int) -> BitVec:
    """取前r个坐标"""
    return BitVec(r, witness.bits & ((1 << r) - 1))
