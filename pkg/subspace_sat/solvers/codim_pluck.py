"""余维t算法：枚举V_in的小子集U做拔除+消元，再在(Φ_U, A_U)上运行PPZ"""

from itertools import combinations
from typing import Iterator, Optional, Sequence, Tuple

from ..core.errors import PluckError
from ..core.formula import EliminationTrace, SubSatInstance, pluck_and_eliminate
from ..core.models import SolveResult, SolverBudget, Verdict
from ..utils.logger import logger
from ..utils.rng import make_rng
from .base_solver import BaseSolver, SearchOutcome
from .ppz import ppz_iterations, run_ppz_filtered
from .registry import register_solver


def subsets_up_to(variables: Sequence[int], size: int) -> Iterator[Tuple[int, ...]]:
    """按大小递增、同大小按字典序枚举子集"""
    for s in range(min(size, len(variables)) + 1):
        yield from combinations(variables, s)


def plucked_instances(inst: SubSatInstance) -> Iterator[Tuple[Tuple[int, ...], SubSatInstance, EliminationTrace]]:
    """依次给出每个可行子集U对应的(Φ_U, A_U)；失败的子集跳过"""
    for subset in subsets_up_to(inst.v_in, inst.t):
        try:
            reduced, trace = pluck_and_eliminate(inst, subset)
        except PluckError as e:
            logger.debug(f"子集{subset}跳过: {e.message}")
            continue
        yield subset, reduced, trace


@register_solver("codim")
class CodimPluckSolver(BaseSolver):
    """对每个|U| ≤ t的U ⊆ V_in，在拔除后的实例上运行PPZ"""

    randomized = True

    def _search(self, inst: SubSatInstance, budget: SolverBudget) -> SearchOutcome:
        total = 0
        tried = 0
        for index, (subset, reduced, trace) in enumerate(plucked_instances(inst)):
            tried += 1
            planned = budget.cap(ppz_iterations(reduced.n, reduced.k, budget.delta))
            rng = make_rng(budget.seed, index)
            candidate, used = run_ppz_filtered(
                reduced, planned, rng, accept=lambda c: inst.is_solution(trace.extend(c))
            )
            total += used
            if candidate is not None:
                logger.debug(f"子集{subset}上找到解")
                return SearchOutcome(Verdict.SAT, trace.extend(candidate), total, [f"U={list(subset)}"])
        return SearchOutcome(Verdict.UNKNOWN, iterations=total, notes=[f"已尝试{tried}个子集"])


def solve_codim_pluck(inst: SubSatInstance, budget: Optional[SolverBudget] = None) -> SolveResult:
    """余维t拔除算法，只给出SAT或UNKNOWN"""
    return CodimPluckSolver("codim").solve(inst, budget)
