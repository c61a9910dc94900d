"""GF(2)线性代数：比特向量、仿射形式、线性方程组与仿射子空间

向量按位打包在Python整数里，第i位对应坐标x_i（从0开始编号）。
消元时以每行最高位作为主元，因此自由变量总是编号较小的那些，
依赖变量由它们线性表示。
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import EnumerationCapExceeded, F2Error


class Implied(str, Enum):
    """仿射形式在子空间上的取值情况"""
    ZERO = "zero"
    ONE = "one"
    FREE = "free"


def _parity(mask: int) -> int:
    return mask.bit_count() & 1


@dataclass(frozen=True)
class BitVec:
    """F2^n中的点"""
    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise F2Error(f"向量长度不能为负: {self.length}")
        if self.bits < 0 or self.bits >> self.length:
            raise F2Error(f"比特位超出向量长度{self.length}")

    @classmethod
    def zeros(cls, length: int) -> "BitVec":
        return cls(length, 0)

    @classmethod
    def unit(cls, length: int, index: int) -> "BitVec":
        """第index个单位向量e_index"""
        if not 0 <= index < length:
            raise F2Error(f"坐标{index}超出范围[0, {length})")
        return cls(length, 1 << index)

    @classmethod
    def from_list(cls, values: Sequence[int]) -> "BitVec":
        bits = 0
        for i, value in enumerate(values):
            if value not in (0, 1, True, False):
                raise F2Error(f"GF(2)取值只能是0或1: {value}")
            if value:
                bits |= 1 << i
        return cls(len(values), bits)

    @classmethod
    def from_indices(cls, length: int, indices: Iterable[int]) -> "BitVec":
        bits = 0
        for i in indices:
            if not 0 <= i < length:
                raise F2Error(f"坐标{i}超出范围[0, {length})")
            bits |= 1 << i
        return cls(length, bits)

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, index: int) -> int:
        if not 0 <= index < self.length:
            raise F2Error(f"坐标{index}超出范围[0, {self.length})")
        return (self.bits >> index) & 1

    def __iter__(self) -> Iterator[int]:
        for i in range(self.length):
            yield (self.bits >> i) & 1

    def __xor__(self, other: "BitVec") -> "BitVec":
        if self.length != other.length:
            raise F2Error(f"向量长度不一致: {self.length} != {other.length}")
        return BitVec(self.length, self.bits ^ other.bits)

    __add__ = __xor__

    def flip(self, index: int) -> "BitVec":
        return self ^ BitVec.unit(self.length, index)

    def with_bit(self, index: int, value: int) -> "BitVec":
        if self[index] == (value & 1):
            return self
        return self.flip(index)

    def dot(self, other: "BitVec") -> int:
        if self.length != other.length:
            raise F2Error(f"向量长度不一致: {self.length} != {other.length}")
        return _parity(self.bits & other.bits)

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.length) if (self.bits >> i) & 1)

    def to_list(self) -> List[int]:
        return list(self)

    def __str__(self) -> str:
        return "".join(str(b) for b in self)


Point = Union[BitVec, int]


def as_bits(point: Point, n: int) -> int:
    if isinstance(point, BitVec):
        if point.length != n:
            raise F2Error(f"点的维数{point.length}与{n}不一致")
        return point.bits
    return point


@dataclass(frozen=True)
class AffineForm:
    """仿射线性形式 <coeffs, x> + constant"""
    coeffs: BitVec
    constant: int = 0

    def __post_init__(self):
        if self.constant not in (0, 1):
            raise F2Error(f"常数项只能是0或1: {self.constant}")

    @classmethod
    def from_indices(cls, n: int, variables: Iterable[int], constant: int = 0) -> "AffineForm":
        """由变量下标集合构造；重复出现的下标按GF(2)相消"""
        bits = 0
        for i in variables:
            if not 0 <= i < n:
                raise F2Error(f"变量x{i}超出范围[0, {n})")
            bits ^= 1 << i
        return cls(BitVec(n, bits), constant & 1)

    @classmethod
    def variable(cls, n: int, index: int, negated: bool = False) -> "AffineForm":
        """文字x_i（negated时为x_i + 1）"""
        return cls(BitVec.unit(n, index), int(negated))

    @classmethod
    def constant_form(cls, n: int, value: int) -> "AffineForm":
        return cls(BitVec(n, 0), value & 1)

    @property
    def n(self) -> int:
        return self.coeffs.length

    @property
    def mask(self) -> int:
        return self.coeffs.bits

    @property
    def is_constant(self) -> bool:
        return self.coeffs.bits == 0

    def variables(self) -> Tuple[int, ...]:
        return self.coeffs.support()

    def evaluate(self, point: Point) -> int:
        return _parity(self.coeffs.bits & as_bits(point, self.n)) ^ self.constant

    def __add__(self, other: Union["AffineForm", int]) -> "AffineForm":
        if isinstance(other, int):
            return AffineForm(self.coeffs, self.constant ^ (other & 1))
        if other.n != self.n:
            raise F2Error(f"仿射形式维数不一致: {self.n} != {other.n}")
        return AffineForm(self.coeffs ^ other.coeffs, self.constant ^ other.constant)

    __radd__ = __add__

    def project(self, kept: Sequence[int]) -> "AffineForm":
        """只保留kept中的坐标并按其顺序重新编号（其余系数丢弃）"""
        bits = 0
        for new_index, old_index in enumerate(kept):
            if (self.coeffs.bits >> old_index) & 1:
                bits |= 1 << new_index
        return AffineForm(BitVec(len(kept), bits), self.constant)

    def __str__(self) -> str:
        terms = [f"x{i + 1}" for i in self.variables()]
        if self.constant or not terms:
            terms.append(str(self.constant))
        return " + ".join(terms)


@dataclass(frozen=True)
class LinearSystem:
    """线性方程组，每行表示方程 form = 0"""
    n: int
    rows: Tuple[AffineForm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        for row in self.rows:
            if row.n != self.n:
                raise F2Error(f"方程维数{row.n}与方程组维数{self.n}不一致")

    def __len__(self) -> int:
        return len(self.rows)

    def is_satisfied_by(self, point: Point) -> bool:
        bits = as_bits(point, self.n)
        return all(row.evaluate(bits) == 0 for row in self.rows)

    def __str__(self) -> str:
        if not self.rows:
            return "{}"
        return "{" + ", ".join(f"{row} = 0" for row in self.rows) + "}"


@dataclass(frozen=True)
class RrefResult:
    reduced: LinearSystem
    rank: int
    pivots: Tuple[int, ...]


@dataclass(frozen=True)
class Inconsistent:
    """方程组无解；row为发现矛盾的原始行号"""
    row: Optional[int] = None


class EchelonForm:
    """增量维护的简化行阶梯形

    rows[p] = (mask, const) 表示方程 <mask, x> + const = 0，主元p为mask最高位，
    且主元列只在本行出现。
    """

    def __init__(self, n: int):
        self.n = n
        self.rows: Dict[int, Tuple[int, int]] = {}

    def copy(self) -> "EchelonForm":
        clone = EchelonForm(self.n)
        clone.rows = dict(self.rows)
        return clone

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, mask: int, const: int) -> Tuple[int, int]:
        """用已有主元行消去mask中的主元列"""
        for pivot, (row_mask, row_const) in self.rows.items():
            if (mask >> pivot) & 1:
                mask ^= row_mask
                const ^= row_const
        return mask, const

    def implied(self, mask: int, const: int) -> Implied:
        mask, const = self.reduce(mask, const)
        if mask:
            return Implied.FREE
        return Implied.ONE if const else Implied.ZERO

    def add(self, mask: int, const: int) -> bool:
        """加入方程<mask,x>+const=0；返回False表示与已有方程矛盾"""
        mask, const = self.reduce(mask, const)
        if mask == 0:
            return const == 0
        pivot = mask.bit_length() - 1
        for other, (row_mask, row_const) in list(self.rows.items()):
            if (row_mask >> pivot) & 1:
                self.rows[other] = (row_mask ^ mask, row_const ^ const)
        self.rows[pivot] = (mask, const)
        return True

    def pivots(self) -> Tuple[int, ...]:
        return tuple(sorted(self.rows))

    def to_system(self) -> LinearSystem:
        return LinearSystem(self.n, tuple(
            AffineForm(BitVec(self.n, self.rows[p][0]), self.rows[p][1])
            for p in self.pivots()
        ))

    def particular(self) -> int:
        """自由变量取0时的解"""
        bits = 0
        for pivot, (_, const) in self.rows.items():
            if const:
                bits |= 1 << pivot
        return bits


def rref(system: LinearSystem) -> Union[RrefResult, Inconsistent]:
    """化为简化行阶梯形

    Args:
        system: 线性方程组

    Returns:
        RrefResult | Inconsistent: 约化结果（秩、主元列），或无解标记
    """
    echelon = EchelonForm(system.n)
    for index, row in enumerate(system.rows):
        if not echelon.add(row.mask, row.constant):
            return Inconsistent(index)
    return RrefResult(echelon.to_system(), echelon.rank, echelon.pivots())


@dataclass(frozen=True)
class EmptySubspace:
    """空仿射子空间（定义方程组无解）"""
    n: int
    source: Optional[LinearSystem] = None

    is_empty = True

    # 空集的维数按惯例记为-1
    dim = -1

    @property
    def codim(self) -> int:
        return self.n + 1

    @property
    def v_in_mask(self) -> int:
        mask = 0
        if self.source is not None:
            for row in self.source.rows:
                mask |= row.mask
        return mask

    @property
    def v_in(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.n) if (self.v_in_mask >> i) & 1)

    @property
    def v_out(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.n) if not (self.v_in_mask >> i) & 1)

    def contains(self, point: Point) -> bool:
        return False

    def __str__(self) -> str:
        return f"∅ ⊂ F2^{self.n}"


@dataclass(frozen=True)
class Parameterization:
    """A = particular + span(kernel_basis)，第i个基向量对应自由变量free_variables[i]"""
    particular: BitVec
    kernel_basis: Tuple[BitVec, ...]
    free_variables: Tuple[int, ...]


@dataclass(frozen=True)
class AffineSubspace:
    """非空仿射子空间，定义方程组以简化行阶梯形保存"""
    system: LinearSystem
    pivots: Tuple[int, ...] = field(default=())

    is_empty = False

    def __post_init__(self):
        object.__setattr__(self, "pivots", tuple(self.pivots))
        if len(self.pivots) != len(self.system.rows):
            raise F2Error("主元个数与方程个数不一致，请使用AffineSubspace.from_system构造")
        for pivot, row in zip(self.pivots, self.system.rows):
            if row.mask.bit_length() - 1 != pivot:
                raise F2Error("方程组不是简化行阶梯形，请使用AffineSubspace.from_system构造")

    @classmethod
    def full(cls, n: int) -> "AffineSubspace":
        return cls(LinearSystem(n))

    @classmethod
    def from_system(cls, system: LinearSystem) -> Union["AffineSubspace", EmptySubspace]:
        reduced = rref(system)
        if isinstance(reduced, Inconsistent):
            return EmptySubspace(system.n, system)
        return cls(reduced.reduced, reduced.pivots)

    @classmethod
    def from_forms(cls, n: int, forms: Iterable[AffineForm]) -> Union["AffineSubspace", EmptySubspace]:
        return cls.from_system(LinearSystem(n, tuple(forms)))

    @classmethod
    def from_echelon(cls, echelon: EchelonForm) -> "AffineSubspace":
        return cls(echelon.to_system(), echelon.pivots())

    def echelon(self) -> EchelonForm:
        echelon = EchelonForm(self.n)
        for pivot, row in zip(self.pivots, self.system.rows):
            echelon.rows[pivot] = (row.mask, row.constant)
        return echelon

    @property
    def n(self) -> int:
        return self.system.n

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def dim(self) -> int:
        return self.n - self.rank

    @property
    def codim(self) -> int:
        return self.rank

    @property
    def rows(self) -> Tuple[AffineForm, ...]:
        return self.system.rows

    @cached_property
    def v_in_mask(self) -> int:
        """出现在某个定义方程中的变量集合"""
        mask = 0
        for row in self.system.rows:
            mask |= row.mask
        return mask

    @property
    def v_in(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.n) if (self.v_in_mask >> i) & 1)

    @property
    def v_out(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.n) if not (self.v_in_mask >> i) & 1)

    @property
    def free_variables(self) -> Tuple[int, ...]:
        pivot_set = set(self.pivots)
        return tuple(i for i in range(self.n) if i not in pivot_set)

    def contains(self, point: Point) -> bool:
        return self.system.is_satisfied_by(point)

    def intersect(self, forms: Iterable[AffineForm]) -> Union["AffineSubspace", EmptySubspace]:
        """与方程组{form = 0}求交"""
        echelon = self.echelon()
        for form in forms:
            if form.n != self.n:
                raise F2Error(f"方程维数{form.n}与子空间维数{self.n}不一致")
            if not echelon.add(form.mask, form.constant):
                return EmptySubspace(self.n, LinearSystem(self.n, self.system.rows + (form,)))
        return AffineSubspace.from_echelon(echelon)

    def fix(self, variable: int, value: int) -> Union["AffineSubspace", EmptySubspace]:
        """与超平面x_variable = value求交"""
        return self.intersect([AffineForm.variable(self.n, variable) + value])

    @cached_property
    def parameterization(self) -> Parameterization:
        free = self.free_variables
        particular = 0
        for pivot, row in zip(self.pivots, self.system.rows):
            if row.constant:
                particular |= 1 << pivot
        basis = []
        for f in free:
            bits = 1 << f
            for pivot, row in zip(self.pivots, self.system.rows):
                if (row.mask >> f) & 1:
                    bits |= 1 << pivot
            basis.append(BitVec(self.n, bits))
        return Parameterization(BitVec(self.n, particular), tuple(basis), free)

    def point_from_coefficients(self, coefficients: Point) -> BitVec:
        """由核系数c得到点particular + Σ c_i·basis_i"""
        param = self.parameterization
        c = as_bits(coefficients, self.dim)
        bits = param.particular.bits
        i = 0
        while c:
            if c & 1:
                bits ^= param.kernel_basis[i].bits
            c >>= 1
            i += 1
        return BitVec(self.n, bits)

    def coefficients_of(self, point: Point) -> BitVec:
        """point_from_coefficients的逆：核系数就是自由变量的取值"""
        bits = as_bits(point, self.n)
        c = 0
        for i, f in enumerate(self.parameterization.free_variables):
            if (bits >> f) & 1:
                c |= 1 << i
        return BitVec(self.dim, c)

    def __str__(self) -> str:
        return str(self.system)


Subspace = Union[AffineSubspace, EmptySubspace]


def solve_affine(subspace: AffineSubspace) -> Tuple[BitVec, List[BitVec]]:
    """参数化非空仿射子空间

    Args:
        subspace: 仿射子空间

    Returns:
        Tuple[BitVec, List[BitVec]]: 特解与核空间的一组基（长度为dim）
    """
    if not isinstance(subspace, AffineSubspace):
        raise F2Error("空子空间没有参数化")
    param = subspace.parameterization
    return param.particular, list(param.kernel_basis)


def implied_value(subspace: AffineSubspace, form: AffineForm) -> Implied:
    """判断仿射形式在子空间上是否恒为0、恒为1或两者都取

    Args:
        subspace: 非空仿射子空间
        form: 仿射形式

    Returns:
        Implied: ZERO / ONE / FREE
    """
    if form.n != subspace.n:
        raise F2Error(f"仿射形式维数{form.n}与子空间维数{subspace.n}不一致")
    return subspace.echelon().implied(form.mask, form.constant)


def eliminate_variable(system: LinearSystem, var: int, row: int) -> LinearSystem:
    """用第row个方程从其余方程中消去变量var，并删除该方程

    Args:
        system: 线性方程组
        var: 被消去的变量
        row: 用来消元的方程下标

    Returns:
        LinearSystem: 不含var、少一个方程的新方程组
    """
    if not 0 <= row < len(system.rows):
        raise F2Error(f"方程下标{row}超出范围")
    if not 0 <= var < system.n:
        raise F2Error(f"变量x{var}超出范围[0, {system.n})")
    pivot_row = system.rows[row]
    if not (pivot_row.mask >> var) & 1:
        raise F2Error(f"方程{row}中变量x{var}的系数为0，无法消元")
    remaining = []
    for index, other in enumerate(system.rows):
        if index == row:
            continue
        if (other.mask >> var) & 1:
            other = other + pivot_row
        remaining.append(other)
    return LinearSystem(system.n, tuple(remaining))


def iter_point_bits(subspace: AffineSubspace, cap: Optional[int] = None) -> Iterator[int]:
    """按Gray码顺序枚举子空间中的点（打包为整数）"""
    if cap is None:
        from ..config import get_settings
        cap = get_settings().enumeration_cap
    dim = subspace.dim
    if dim > cap:
        raise EnumerationCapExceeded(dim, cap)
    param = subspace.parameterization
    basis = [b.bits for b in param.kernel_basis]
    point = param.particular.bits
    yield point
    for i in range(1, 1 << dim):
        point ^= basis[(i & -i).bit_length() - 1]
        yield point


def enumerate_points(subspace: AffineSubspace, cap: Optional[int] = None) -> Iterator[BitVec]:
    """枚举仿射子空间中的全部点，每个点恰好出现一次

    Args:
        subspace: 仿射子空间
        cap: 维数上限，默认取配置中的enumeration_cap

    Returns:
        Iterator[BitVec]: 2^dim个点
    """
    n = subspace.n
    for bits in iter_point_bits(subspace, cap):
        yield BitVec(n, bits)
