"""余维t的确定性2-Sub-SAT算法

对V_in中大小不超过t的子集U做拔除+消元，计算Φ_U的规范满足赋值；
若它落在A_U中且回代后满足原实例即得到解。搜索无果时，在配置的规模上限内
用受限枚举兜底校验，超出上限时直接采信搜索结论并记录警告：
规范赋值未必落在A中，此时的UNSAT结论可能有误。
"""

from typing import Optional

from ..config import get_settings
from ..core.errors import WidthError
from ..core.formula import SubSatInstance
from ..core.implication import canonical_assignment
from ..core.models import SolveResult, SolverBudget, Verdict
from ..utils.logger import logger
from .base_solver import BaseSolver, SearchOutcome
from .brute_force import first_solution
from .codim_pluck import plucked_instances
from .registry import register_solver


@register_solver("det2")
class TwoSubSatSolver(BaseSolver):
    """宽度不超过2时的确定性子集搜索"""

    def _search(self, inst: SubSatInstance, budget: SolverBudget) -> SearchOutcome:
        if inst.k > 2:
            raise WidthError(f"det2只支持宽度不超过2的公式，当前k={inst.k}")

        tried = 0
        for subset, reduced, trace in plucked_instances(inst):
            tried += 1
            canonical = canonical_assignment(reduced.phi)
            if canonical is None or not reduced.space.contains(canonical.assignment):
                continue
            witness = trace.extend(canonical.assignment)
            if inst.is_solution(witness):
                logger.debug(f"子集{subset}的规范赋值给出解")
                return SearchOutcome(Verdict.SAT, witness, tried, [f"U={list(subset)}"])

        return self._backstop(inst, tried)

    def _backstop(self, inst: SubSatInstance, tried: int) -> SearchOutcome:
        settings = get_settings()
        if inst.t <= settings.det2_backstop_t_cap and inst.n <= settings.det2_backstop_n_cap:
            witness = first_solution(inst)
            if witness is not None:
                logger.warning(f"子集搜索未找到解，但兜底枚举找到了解: n={inst.n}, t={inst.t}")
                return SearchOutcome(Verdict.SAT, witness, tried + 1, ["兜底枚举找到解"])
            return SearchOutcome(Verdict.UNSAT, iterations=tried + 1, notes=["子集搜索与兜底枚举均无解"])
        logger.warning(
            f"子集搜索未找到解，实例超出兜底校验范围(n={inst.n}, t={inst.t})，"
            f"UNSAT结论仅依赖子集搜索，可能有误"
        )
        return SearchOutcome(Verdict.UNSAT, iterations=tried, notes=["UNSAT结论仅依赖子集搜索，可能有误"])


def solve_2subsat_det(inst: SubSatInstance, budget: Optional[SolverBudget] = None) -> SolveResult:
    """确定性2-Sub-SAT求解，从不返回UNKNOWN

    Raises:
        WidthError: 存在宽度大于2的子句
    """
    return TwoSubSatSolver("det2").solve(inst, budget)
