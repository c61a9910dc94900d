"""穷举求解器：按Gray码顺序枚举A中全部点"""

from typing import Optional

from ..core.f2 import BitVec, iter_point_bits
from ..core.formula import SubSatInstance
from ..core.models import SolveResult, SolverBudget, Verdict
from .base_solver import BaseSolver, SearchOutcome
from .registry import register_solver


def first_solution(inst: SubSatInstance, cap: Optional[int] = None) -> Optional[BitVec]:
    """枚举顺序下的第一个解；A为空时返回None"""
    if inst.trivially_unsat:
        return None
    phi = inst.phi
    for bits in iter_point_bits(inst.space, cap):
        if phi.evaluate(bits):
            return BitVec(inst.n, bits)
    return None


@register_solver("brute")
class BruteForceSolver(BaseSolver):
    """穷举A中的2^dim(A)个点，给出确定性的SAT/UNSAT结论"""

    def _search(self, inst: SubSatInstance, budget: SolverBudget) -> SearchOutcome:
        phi = inst.phi
        iterations = 0
        for bits in iter_point_bits(inst.space):
            iterations += 1
            if phi.evaluate(bits):
                return SearchOutcome(Verdict.SAT, BitVec(inst.n, bits), iterations)
        return SearchOutcome(Verdict.UNSAT, iterations=iterations)


def brute_force(inst: SubSatInstance) -> SolveResult:
    """穷举求解（测试基准）

    Raises:
        EnumerationCapExceeded: dim(A)超过枚举上限
    """
    return BruteForceSolver("brute").solve(inst)
