"""PAF方程组的随机降次

方程 ∏_j Q_ij = 0 改写为 ∏_s (1 + Σ_j a_ijs·R_ij) = 0，其中R_ij = 1 + Q_ij，
a_ijs为随机比特，s = 1..L。原方程不成立时所有R_ij为0，新方程也不成立，
因此新方程组的解一定是原方程组的解；原方程成立时新方程以1 − 2^{−L}的
概率仍成立。
"""

import math
import time
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..config import get_settings
from ..core.conversions import PafInstance, subsat_to_paf
from ..core.errors import EnumerationCapExceeded, SolverError
from ..core.f2 import AffineForm, BitVec
from ..core.formula import SubSatInstance
from ..core.models import SolveResult, SolverBudget, Verdict
from ..utils.logger import logger
from ..utils.rng import make_rng, random_bits
from .base_solver import BaseSolver, SearchOutcome
from .registry import register_solver

# coefficients[i][s]的第j位为a_ijs
Coefficients = List[List[int]]
InnerSolver = Callable[[PafInstance], Optional[BitVec]]


def brute_force_paf(paf: PafInstance, cap: Optional[int] = None) -> Optional[BitVec]:
    """在F2^n上向量化枚举，返回编号最小的解

    Raises:
        EnumerationCapExceeded: n超过枚举上限
    """
    if cap is None:
        cap = get_settings().enumeration_cap
    if paf.n > cap:
        raise EnumerationCapExceeded(paf.n, cap)
    points = np.arange(1 << paf.n, dtype=np.uint64)
    holds = np.ones(points.shape, dtype=bool)
    for equation in paf.equations:
        some_zero = np.zeros(points.shape, dtype=bool)
        for factor in equation:
            parity = np.bitwise_count(points & np.uint64(factor.mask)) & 1
            some_zero |= (parity ^ factor.constant) == 0
        holds &= some_zero
    found = np.flatnonzero(holds)
    if found.size == 0:
        return None
    return BitVec(paf.n, int(found[0]))


def combination_length(density: float, beta: float) -> int:
    """L = ⌈(β+1)·log2(c)⌉，至少为1"""
    if density <= 1:
        return 1
    return max(1, math.ceil((beta + 1) * math.log2(density)))


def degree_reduction_trials(n: int, density: float, beta: float, delta: float) -> int:
    """⌈ln(1/δ)·e^{n/c^β}⌉"""
    return max(1, math.ceil(math.log(1 / delta) * math.exp(n / density ** beta)))


def combine_factors(paf: PafInstance, coefficients: Sequence[Sequence[int]]) -> PafInstance:
    """按给定系数构造降次后的方程组

    Args:
        paf: 原方程组
        coefficients: coefficients[i][s]为第i个方程第s个组合的选择掩码

    Returns:
        PafInstance: 每个方程有len(coefficients[i])个仿射因子
    """
    if len(coefficients) != paf.m:
        raise SolverError(f"系数组数{len(coefficients)}与方程数{paf.m}不一致", algorithm="pafdeg")
    equations = []
    for equation, rows in zip(paf.equations, coefficients):
        factors = []
        for selector in rows:
            # 1 + Σ_j a_ijs·(1 + Q_ij)
            factor = AffineForm.constant_form(paf.n, 1)
            for j, q in enumerate(equation):
                if (selector >> j) & 1:
                    factor = factor + q + 1
            factors.append(factor)
        equations.append(tuple(factors))
    return PafInstance(paf.n, tuple(equations))


def reduce_degree(paf: PafInstance, length: int, rng: np.random.Generator) -> Tuple[PafInstance, Coefficients]:
    """随机抽取a_ijs并降次

    Returns:
        Tuple[PafInstance, Coefficients]: 降次后的方程组与所用系数
    """
    coefficients = [
        [random_bits(rng, len(equation)) for _ in range(length)]
        for equation in paf.equations
    ]
    return combine_factors(paf, coefficients), coefficients


def _search_paf(
    paf: PafInstance,
    budget: SolverBudget,
    inner: Optional[InnerSolver] = None,
) -> SearchOutcome:
    inner = inner or brute_force_paf
    density = budget.density or get_settings().paf_density
    if paf.m > density * max(paf.n, 1):
        raise SolverError(f"方程数{paf.m}超过c·n = {density}·{paf.n}", algorithm="pafdeg")
    if paf.m == 0:
        return SearchOutcome(Verdict.SAT, BitVec.zeros(paf.n), 0, ["方程组为空"])

    length = combination_length(density, budget.beta)
    trials = budget.cap(degree_reduction_trials(paf.n, density, budget.beta, budget.delta))
    logger.debug(f"降次参数: L={length}, 计划试验{trials}次")
    for trial in range(trials):
        reduced, _ = reduce_degree(paf, length, make_rng(budget.seed, trial))
        candidate = inner(reduced)
        if candidate is not None and paf.is_solution(candidate):
            return SearchOutcome(Verdict.SAT, candidate, trial + 1, [f"L={length}"])
    return SearchOutcome(Verdict.UNKNOWN, iterations=trials, notes=[f"L={length}, {trials}次试验均失败"])


@register_solver("pafdeg")
class DegreeReductionSolver(BaseSolver):
    """把实例写成PAF方程组后随机降次，交给有界次数求解器"""

    randomized = True

    def __init__(self, name: str, description: str = "", inner: Optional[InnerSolver] = None):
        super().__init__(name, description)
        self.inner = inner

    def _search(self, inst: SubSatInstance, budget: SolverBudget) -> SearchOutcome:
        return _search_paf(subsat_to_paf(inst), budget, self.inner)

    def solve_paf(self, paf: PafInstance, budget: Optional[SolverBudget] = None) -> SolveResult:
        """直接求解PAF方程组"""
        budget = budget or SolverBudget()
        start = time.perf_counter()
        outcome = _search_paf(paf, budget, self.inner)
        if outcome.verdict == Verdict.SAT and not paf.is_solution(outcome.witness):
            raise SolverError(f"{self.name}返回的见证未通过复核", algorithm=self.name)
        result = self.create_result(outcome, budget, time.perf_counter() - start)
        logger.info(f"{self.name}求解完成: n={paf.n}, m={paf.m}, 结论={result.verdict.value}")
        return result


def solve_paf_degree_reduction(
    paf: PafInstance,
    budget: Optional[SolverBudget] = None,
    inner: Optional[InnerSolver] = None,
) -> SolveResult:
    """随机降次求解PAF方程组

    Args:
        paf: 因子均为仿射形式的方程组
        budget: 求解预算（beta、density、delta）
        inner: 有界次数方程组求解器，缺省为向量化穷举

    Returns:
        SolveResult: SAT或UNKNOWN

    Raises:
        SolverError: 方程数超过c·n
    """
    return DegreeReductionSolver("pafdeg", inner=inner).solve_paf(paf, budget)
