"""求解器基类"""

import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import List, Optional

from ..core.errors import SolverError
from ..core.f2 import BitVec, EmptySubspace
from ..core.formula import SubSatInstance
from ..core.models import SolveResult, SolverBudget, SolverStats, Verdict
from ..utils.logger import logger


@dataclass
class SearchOutcome:
    """一次搜索的原始结果，由基类包装成SolveResult"""
    verdict: Verdict
    witness: Optional[BitVec] = None
    iterations: int = 0
    notes: List[str] = field(default_factory=list)
    # 随机算法只有在给出确定性证据时才能置为True并返回UNSAT
    certified: bool = False


class BaseSolver(ABC):
    """求解器基类

    子类实现_search；基类负责平凡不可满足判定、见证复核、计时与日志。
    """

    randomized = False

    def __init__(self, name: str, description: str = ""):
        self.name = name
        self.description = description

    @abstractmethod
    def _search(self, inst: SubSatInstance, budget: SolverBudget) -> SearchOutcome:
        """在非平凡实例上搜索

        Args:
            inst: 子空间非空且不含空子句的实例
            budget: 求解预算

        Returns:
            SearchOutcome: 搜索结果
        """
        pass

    def solve(self, inst: SubSatInstance, budget: Optional[SolverBudget] = None) -> SolveResult:
        """求解实例

        Args:
            inst: 子空间内可满足性实例
            budget: 求解预算，缺省使用默认参数

        Returns:
            SolveResult: 求解结果

        Raises:
            SolverError: 返回的见证未通过复核
        """
        budget = budget or SolverBudget()
        start = time.perf_counter()

        if inst.trivially_unsat:
            reason = "子空间为空" if isinstance(inst.space, EmptySubspace) else "公式含空子句"
            outcome = SearchOutcome(Verdict.UNSAT, notes=[f"平凡不可满足: {reason}"])
        else:
            outcome = self._search(inst, budget)

        if outcome.verdict == Verdict.SAT:
            if outcome.witness is None or not inst.is_solution(outcome.witness):
                raise SolverError(f"{self.name}返回的见证未通过复核", algorithm=self.name)
        elif outcome.verdict == Verdict.UNSAT and self.randomized and not (inst.trivially_unsat or outcome.certified):
            raise SolverError(f"随机算法{self.name}不能给出UNSAT结论", algorithm=self.name)

        result = self.create_result(outcome, budget, time.perf_counter() - start)
        logger.info(
            f"{self.name}求解完成: n={inst.n}, k={inst.k}, t={inst.t}, "
            f"结论={result.verdict.value}, 迭代={result.stats.iterations}"
        )
        return result

    def create_result(self, outcome: SearchOutcome, budget: SolverBudget, wall_time: float) -> SolveResult:
        """创建求解结果对象"""
        witness = outcome.witness.to_list() if outcome.verdict == Verdict.SAT else None
        return SolveResult(
            verdict=outcome.verdict,
            witness=witness,
            stats=SolverStats(
                algorithm=self.name,
                iterations=outcome.iterations,
                wall_time=wall_time,
                seed=budget.seed if self.randomized else None,
                notes=outcome.notes,
            ),
        )
