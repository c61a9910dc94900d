"""PPZ随机算法

每次迭代随机排列变量；依次处理时，若某个子句除当前变量外的文字都已为假，
当前变量被强制取使该子句满足的值，否则取一个随机比特。
"""

import math
from typing import Callable, List, Optional, Tuple

import numpy as np

from ..core.f2 import BitVec, EmptySubspace
from ..core.formula import CnfFormula, SubSatInstance
from ..core.models import SolveResult, SolverBudget, Verdict
from ..utils.logger import logger
from ..utils.rng import make_rng, random_bits
from .base_solver import BaseSolver, SearchOutcome
from .registry import register_solver


class PpzRunner:
    """预先计算每个变量出现在哪些子句中，供多次迭代复用"""

    def __init__(self, phi: CnfFormula):
        self.phi = phi
        self.n = phi.n
        self.occurrences: List[List[Tuple[int, int, int]]] = [[] for _ in range(phi.n)]
        for pos, neg in phi.masks:
            variables = pos | neg
            for v in range(phi.n):
                if (variables >> v) & 1:
                    self.occurrences[v].append((pos, neg, variables & ~(1 << v)))

    def iteration(self, rng: np.random.Generator) -> Optional[BitVec]:
        """执行一次PPZ迭代，成功时返回满足赋值"""
        order = rng.permutation(self.n)
        coins = random_bits(rng, self.n)
        assigned = 0
        bits = 0
        for v in order:
            v = int(v)
            forced = None
            for pos, neg, others in self.occurrences[v]:
                if others & ~assigned:
                    continue
                if (bits & pos & others) or (~bits & neg & others):
                    continue
                value = (pos >> v) & 1
                if forced is not None and forced != value:
                    return None
                forced = value
            value = forced if forced is not None else (coins >> v) & 1
            if value:
                bits |= 1 << v
            assigned |= 1 << v
        if self.phi.evaluate(bits):
            return BitVec(self.n, bits)
        return None


def ppz_iteration(phi: CnfFormula, rng: np.random.Generator) -> Optional[BitVec]:
    """单次PPZ迭代

    Args:
        phi: CNF公式
        rng: 随机数生成器

    Returns:
        Optional[BitVec]: 满足赋值，失败时为None
    """
    return PpzRunner(phi).iteration(rng)


def ppz_iterations(n: int, k: int, delta: float) -> int:
    """⌈ln(1/δ)·n²·2^{n−n/k}⌉"""
    k = max(k, 1)
    n_sq = max(n, 1) ** 2
    return max(1, math.ceil(math.log(1 / delta) * n_sq * 2 ** (n - n / k)))


def run_ppz_filtered(
    inst: SubSatInstance,
    iterations: int,
    rng: np.random.Generator,
    accept: Optional[Callable[[BitVec], bool]] = None,
) -> Tuple[Optional[BitVec], int]:
    """运行PPZ并用A的成员关系（以及可选的accept）过滤输出

    Returns:
        Tuple[Optional[BitVec], int]: (找到的解, 实际迭代次数)
    """
    if isinstance(inst.space, EmptySubspace):
        return None, 0
    runner = PpzRunner(inst.phi)
    space = inst.space
    for i in range(iterations):
        candidate = runner.iteration(rng)
        if candidate is not None and space.contains(candidate) and (accept is None or accept(candidate)):
            return candidate, i + 1
    return None, iterations


@register_solver("ppz")
class PpzSolver(BaseSolver):
    """对Φ运行PPZ，并只接受落在A中的输出"""

    randomized = True

    def _search(self, inst: SubSatInstance, budget: SolverBudget) -> SearchOutcome:
        planned = budget.cap(ppz_iterations(inst.n, inst.k, budget.delta))
        logger.debug(f"PPZ计划迭代{planned}次")
        witness, used = run_ppz_filtered(inst, planned, make_rng(budget.seed))
        if witness is not None:
            return SearchOutcome(Verdict.SAT, witness, used)
        return SearchOutcome(Verdict.UNKNOWN, iterations=used, notes=["迭代预算耗尽"])


def ppz_solve(phi: CnfFormula, budget: Optional[SolverBudget] = None) -> SolveResult:
    """在整个F2^n上运行PPZ

    Args:
        phi: CNF公式
        budget: 求解预算

    Returns:
        SolveResult: SAT或UNKNOWN
    """
    return PpzSolver("ppz").solve(SubSatInstance.unrestricted(phi), budget)
