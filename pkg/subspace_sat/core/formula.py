"""问题表示：文字、子句、CNF公式与子空间内可满足性实例

以及拔除(pluck)、消元与临界变量等基本操作。变量在内部从0开始编号，
显示和DIMACS文件中从1开始。
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, List, Optional, Sequence, Set, Tuple, Union

from .errors import EmptyClauseProduced, FormulaError, PluckFailed
from .f2 import (
    AffineForm,
    AffineSubspace,
    BitVec,
    EmptySubspace,
    LinearSystem,
    Point,
    Subspace,
    iter_point_bits,
)


@dataclass(frozen=True, order=True)
class Literal:
    """文字 x_i 或其否定"""
    variable: int
    negated: bool = False

    def __post_init__(self):
        if self.variable < 0:
            raise FormulaError(f"变量下标不能为负: {self.variable}")

    @classmethod
    def from_dimacs(cls, value: int) -> "Literal":
        if value == 0:
            raise FormulaError("DIMACS文字不能为0")
        return cls(abs(value) - 1, value < 0)

    def to_dimacs(self) -> int:
        return -(self.variable + 1) if self.negated else self.variable + 1

    def complement(self) -> "Literal":
        return Literal(self.variable, not self.negated)

    def value(self, bits: int) -> int:
        """在打包的赋值bits下的真值"""
        return ((bits >> self.variable) & 1) ^ int(self.negated)

    def form(self, n: int) -> AffineForm:
        """取值与文字真值相同的仿射形式 x_i (+1)"""
        return AffineForm.variable(n, self.variable, self.negated)

    def __str__(self) -> str:
        return f"¬x{self.variable + 1}" if self.negated else f"x{self.variable + 1}"


@dataclass(frozen=True)
class Clause:
    """子句（文字的析取）；重复文字在构造时合并，文字按变量排序"""
    literals: Tuple[Literal, ...]

    def __post_init__(self):
        object.__setattr__(self, "literals", tuple(sorted(set(self.literals))))

    @classmethod
    def of(cls, *values: int) -> "Clause":
        """由DIMACS整数构造，例如Clause.of(1, -2)"""
        return cls(tuple(Literal.from_dimacs(v) for v in values))

    @property
    def width(self) -> int:
        return len(self.literals)

    @cached_property
    def is_tautology(self) -> bool:
        return bool(self.pos_mask & self.neg_mask)

    @cached_property
    def pos_mask(self) -> int:
        mask = 0
        for lit in self.literals:
            if not lit.negated:
                mask |= 1 << lit.variable
        return mask

    @cached_property
    def neg_mask(self) -> int:
        mask = 0
        for lit in self.literals:
            if lit.negated:
                mask |= 1 << lit.variable
        return mask

    @property
    def variable_mask(self) -> int:
        return self.pos_mask | self.neg_mask

    def variables(self) -> Tuple[int, ...]:
        return tuple(sorted({lit.variable for lit in self.literals}))

    @property
    def is_horn(self) -> bool:
        return self.pos_mask.bit_count() <= 1

    def satisfied_by(self, point: Point) -> bool:
        bits = point.bits if isinstance(point, BitVec) else point
        return bool((bits & self.pos_mask) or (~bits & self.neg_mask))

    def forms(self, n: int) -> List[AffineForm]:
        return [lit.form(n) for lit in self.literals]

    def to_dimacs(self) -> List[int]:
        return [lit.to_dimacs() for lit in self.literals]

    def __str__(self) -> str:
        if not self.literals:
            return "()"
        return "(" + " ∨ ".join(str(lit) for lit in self.literals) + ")"


@dataclass(frozen=True)
class CnfFormula:
    """k-CNF公式Φ；重言式子句在构造时删除"""
    n: int
    clauses: Tuple[Clause, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise FormulaError(f"变量数不能为负: {self.n}")
        kept = []
        for clause in self.clauses:
            for lit in clause.literals:
                if lit.variable >= self.n:
                    raise FormulaError(f"子句{clause}中的变量x{lit.variable + 1}超出变量数{self.n}")
            if not clause.is_tautology:
                kept.append(clause)
        object.__setattr__(self, "clauses", tuple(kept))

    @classmethod
    def from_dimacs(cls, n: int, clauses: Iterable[Sequence[int]]) -> "CnfFormula":
        return cls(n, tuple(Clause.of(*c) for c in clauses))

    @property
    def m(self) -> int:
        return len(self.clauses)

    @property
    def k(self) -> int:
        return max((c.width for c in self.clauses), default=0)

    @cached_property
    def masks(self) -> Tuple[Tuple[int, int], ...]:
        """每个子句的(正文字掩码, 负文字掩码)"""
        return tuple((c.pos_mask, c.neg_mask) for c in self.clauses)

    def evaluate(self, point: Point) -> bool:
        bits = point.bits if isinstance(point, BitVec) else point
        for pos, neg in self.masks:
            if not ((bits & pos) or (~bits & neg)):
                return False
        return True

    def satisfied_count(self, point: Point) -> int:
        bits = point.bits if isinstance(point, BitVec) else point
        return sum(1 for pos, neg in self.masks if (bits & pos) or (~bits & neg))

    def has_empty_clause(self) -> bool:
        return any(c.width == 0 for c in self.clauses)

    def __str__(self) -> str:
        if not self.clauses:
            return "⊤"
        return " ∧ ".join(str(c) for c in self.clauses)


@dataclass(frozen=True)
class SubSatInstance:
    """子空间内可满足性实例(Φ, A)"""
    phi: CnfFormula
    space: Subspace

    def __post_init__(self):
        if self.phi.n != self.space.n:
            raise FormulaError(f"公式变量数{self.phi.n}与子空间维数{self.space.n}不一致")

    @classmethod
    def unrestricted(cls, phi: CnfFormula) -> "SubSatInstance":
        return cls(phi, AffineSubspace.full(phi.n))

    @property
    def n(self) -> int:
        return self.phi.n

    @property
    def k(self) -> int:
        return self.phi.k

    @property
    def r(self) -> int:
        return self.space.dim

    @property
    def t(self) -> int:
        return self.space.codim

    @property
    def v_in(self) -> Tuple[int, ...]:
        return self.space.v_in

    @property
    def v_out(self) -> Tuple[int, ...]:
        return self.space.v_out

    @property
    def trivially_unsat(self) -> bool:
        return isinstance(self.space, EmptySubspace) or self.phi.has_empty_clause()

    def is_solution(self, point: Point) -> bool:
        return self.space.contains(point) and self.phi.evaluate(point)

    def with_space(self, space: Subspace) -> "SubSatInstance":
        return SubSatInstance(self.phi, space)

    def __str__(self) -> str:
        return f"Φ = {self.phi}, A = {self.space}"


def is_critical(phi: CnfFormula, assignment: BitVec, var: int) -> bool:
    """判断var在满足赋值assignment下是否为临界变量

    Args:
        phi: CNF公式
        assignment: 满足phi的赋值
        var: 变量下标

    Returns:
        bool: 翻转var后phi是否被违反

    Raises:
        FormulaError: assignment不满足phi
    """
    if not phi.evaluate(assignment):
        raise FormulaError("临界性只对满足赋值有定义")
    return not phi.evaluate(assignment.flip(var))


def _drop_variables(phi: CnfFormula, dropped: int, kept: Sequence[int]) -> CnfFormula:
    """删去dropped掩码中变量的全部出现，剩余变量按kept重新编号"""
    index_of = {old: new for new, old in enumerate(kept)}
    clauses = []
    for index, clause in enumerate(phi.clauses):
        literals = tuple(
            Literal(index_of[lit.variable], lit.negated)
            for lit in clause.literals
            if not (dropped >> lit.variable) & 1
        )
        if not literals:
            raise EmptyClauseProduced(f"拔除后子句{clause}变为空子句", clause_index=index)
        clauses.append(Clause(literals))
    return CnfFormula(len(kept), tuple(clauses))


def pluck(phi: CnfFormula, var: int) -> CnfFormula:
    """从公式中拔除变量var，编号大于var的变量下移一位

    Raises:
        EmptyClauseProduced: 某个子句只含var的文字
    """
    if not 0 <= var < phi.n:
        raise FormulaError(f"变量x{var + 1}超出变量数{phi.n}")
    kept = [i for i in range(phi.n) if i != var]
    return _drop_variables(phi, 1 << var, kept)


@dataclass(frozen=True)
class EliminationTrace:
    """拔除/消元记录

    kept[j]是结果实例第j个变量在原实例中的编号；steps按处理顺序记录
    (被拔除变量, 消元所用方程)，方程用原坐标表示。
    """
    n_original: int
    kept: Tuple[int, ...]
    steps: Tuple[Tuple[int, AffineForm], ...]

    def extend_bits(self, bits: int) -> int:
        full = 0
        for new_index, old_index in enumerate(self.kept):
            if (bits >> new_index) & 1:
                full |= 1 << old_index
        # 后处理的方程不含先处理的变量，因此倒序回代
        for var, row in reversed(self.steps):
            others = row.mask & ~(1 << var)
            value = ((full & others).bit_count() & 1) ^ row.constant
            if value:
                full |= 1 << var
        return full

    def extend(self, solution: BitVec) -> BitVec:
        """把结果实例的解扩展成原实例的赋值"""
        if solution.length != len(self.kept):
            raise FormulaError(f"解的长度{solution.length}与保留变量数{len(self.kept)}不一致")
        return BitVec(self.n_original, self.extend_bits(solution.bits))

    def describe(self) -> List[str]:
        lines = []
        for var, row in self.steps:
            rest = row + AffineForm.variable(row.n, var)
            lines.append(f"x{var + 1} = {rest}")
        return lines


def pluck_and_eliminate(
    inst: SubSatInstance,
    variables: Iterable[int],
) -> Tuple[SubSatInstance, EliminationTrace]:
    """依次对变量做拔除+消元

    变量按编号升序处理；每个变量用当前第一个含它的方程消去，然后丢弃该方程。

    Args:
        inst: 子空间内可满足性实例
        variables: 待拔除变量集合U

    Returns:
        Tuple[SubSatInstance, EliminationTrace]: (Φ_U, A_U)与回代记录

    Raises:
        PluckFailed: 某个变量不出现在任何剩余方程中
        EmptyClauseProduced: 拔除后出现空子句
    """
    if not isinstance(inst.space, AffineSubspace):
        raise PluckFailed("空子空间上无法拔除变量")
    n = inst.n
    order = sorted(set(variables))
    rows = list(inst.space.rows)
    steps = []
    for var in order:
        if not 0 <= var < n:
            raise PluckFailed(f"变量x{var + 1}超出变量数{n}", variable=var)
        chosen = next((i for i, row in enumerate(rows) if (row.mask >> var) & 1), None)
        if chosen is None:
            raise PluckFailed(f"变量x{var + 1}不出现在任何剩余方程中", variable=var)
        pivot_row = rows.pop(chosen)
        rows = [row + pivot_row if (row.mask >> var) & 1 else row for row in rows]
        steps.append((var, pivot_row))

    dropped = 0
    for var in order:
        dropped |= 1 << var
    kept = tuple(i for i in range(n) if not (dropped >> i) & 1)
    phi = _drop_variables(inst.phi, dropped, kept)
    space = AffineSubspace.from_system(
        LinearSystem(len(kept), tuple(row.project(kept) for row in rows))
    )
    trace = EliminationTrace(n, kept, tuple(steps))
    return SubSatInstance(phi, space), trace


def enumerate_solutions(inst: SubSatInstance, cap: Optional[int] = None) -> Iterator[BitVec]:
    """枚举实例的全部解（测试和小规模校验用）"""
    if isinstance(inst.space, EmptySubspace):
        return
    for bits in iter_point_bits(inst.space, cap):
        if inst.phi.evaluate(bits):
            yield BitVec(inst.n, bits)


def count_solutions(inst: SubSatInstance, cap: Optional[int] = None) -> int:
    return sum(1 for _ in enumerate_solutions(inst, cap))


def _as_bits(point: Union[BitVec, int]) -> int:
    return point.bits if isinstance(point, BitVec) else point


def i_out(point: Union[BitVec, int], points: Set[int], v_out: Iterable[int]) -> Tuple[int, ...]:
    """I_out(a) = {i ∈ V_out : a + e_i ∉ S}

    Args:
        point: S中的点
        points: 点集S（打包整数）
        v_out: 变量集合V_out
    """
    bits = _as_bits(point)
    return tuple(i for i in v_out if bits ^ (1 << i) not in points)


def isoperimetry_sum(points: Iterable[Union[BitVec, int]], v_out: Iterable[int]) -> Fraction:
    """Σ_{a∈S} 2^{|I_out(a)| − |V_out|}，对任意非空S都不小于1"""
    point_set = {_as_bits(p) for p in points}
    if not point_set:
        raise FormulaError("点集S不能为空")
    v_out = tuple(v_out)
    total = Fraction(0)
    for bits in point_set:
        total += Fraction(2) ** (len(i_out(bits, point_set, v_out)) - len(v_out))
    return total
