"""易扩展约束：给定部分赋值，在约束内寻找一个与之一致的完整赋值"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, Optional

from ..core.errors import FormulaError
from ..core.f2 import AffineForm, AffineSubspace, BitVec, Point, as_bits
from ..core.formula import CnfFormula


@dataclass(frozen=True)
class PartialAssignment:
    """部分赋值：mask中为1的坐标已设定，取值见bits"""
    n: int
    mask: int = 0
    bits: int = 0

    def __post_init__(self):
        if self.bits & ~self.mask:
            raise FormulaError("部分赋值在未设定的坐标上不能取1")
        if self.mask >> self.n:
            raise FormulaError(f"部分赋值坐标超出变量数{self.n}")

    @classmethod
    def from_dict(cls, n: int, values: Dict[int, int]) -> "PartialAssignment":
        mask = bits = 0
        for var, value in values.items():
            mask |= 1 << var
            if value:
                bits |= 1 << var
        return cls(n, mask, bits)

    @classmethod
    def empty(cls, n: int) -> "PartialAssignment":
        return cls(n)

    def is_set(self, var: int) -> bool:
        return bool((self.mask >> var) & 1)

    def agrees_with(self, point: Point) -> bool:
        return (as_bits(point, self.n) & self.mask) == self.bits


class EasyConstraint(ABC):
    """可在多项式时间内扩展部分赋值的全局约束"""

    is_affine = False

    def __init__(self, n: int):
        self.n = n

    @abstractmethod
    def extend(self, partial: PartialAssignment) -> Optional[BitVec]:
        """返回与partial一致且满足约束的赋值，不存在时返回None"""
        pass

    @abstractmethod
    def contains(self, point: Point) -> bool:
        pass


class HornExtender(EasyConstraint):
    """Horn公式：固定部分赋值后求最小模型"""

    def __init__(self, horn: CnfFormula):
        for clause in horn.clauses:
            if not clause.is_horn:
                raise FormulaError(f"子句{clause}含多于一个正文字，不是Horn子句")
        super().__init__(horn.n)
        self.horn = horn

    def extend(self, partial: PartialAssignment) -> Optional[BitVec]:
        bits = partial.bits
        fixed = partial.mask
        changed = True
        while changed:
            changed = False
            for pos, neg in self.horn.masks:
                # 子句被违反：负文字的变量全为1且正文字（若有）为0
                if (neg & ~bits) or (pos & bits):
                    continue
                if not pos or (pos & fixed):
                    return None
                bits |= pos
                changed = True
        return BitVec(self.n, bits)

    def contains(self, point: Point) -> bool:
        return self.horn.evaluate(point)


class AffineExtender(EasyConstraint):
    """仿射子空间成员约束：固定坐标后解线性方程组"""

    is_affine = True

    def __init__(self, space: AffineSubspace):
        super().__init__(space.n)
        self.space = space

    def extend(self, partial: PartialAssignment) -> Optional[BitVec]:
        fixes = [
            AffineForm.variable(self.n, var) + ((partial.bits >> var) & 1)
            for var in range(self.n)
            if partial.is_set(var)
        ]
        restricted = self.space.intersect(fixes)
        if not isinstance(restricted, AffineSubspace):
            return None
        return restricted.parameterization.particular

    def contains(self, point: Point) -> bool:
        return self.space.contains(point)


def horn_extender(horn: CnfFormula) -> HornExtender:
    """Horn约束的扩展器

    Raises:
        FormulaError: 输入含非Horn子句
    """
    return HornExtender(horn)


def affine_extender(space: AffineSubspace) -> AffineExtender:
    return AffineExtender(space)
