"""随机拔除算法（不依赖约束结构）

每轮外层试验：若约束是仿射子空间，先做Valiant-Vazirani隔离；然后交替执行
PPZ阶段与一次均匀随机拔除，共⌈n/2k⌉次拔除；最后对剩余变量穷举，
每个候选通过约束的extend补全被拔除的变量。
"""

import math
import time
from typing import List, Optional, Tuple

import numpy as np

from ..config import get_settings
from ..core.errors import EmptyClauseProduced, EnumerationCapExceeded, SolverError
from ..core.f2 import AffineForm, AffineSubspace, BitVec, iter_point_bits
from ..core.formula import CnfFormula, SubSatInstance, pluck
from ..core.models import SolveResult, SolverBudget, Verdict
from ..utils.logger import logger
from ..utils.rng import make_rng, random_bits
from .base_solver import BaseSolver, SearchOutcome
from .extenders import AffineExtender, EasyConstraint, PartialAssignment
from .ppz import PpzRunner
from .registry import register_solver


def vv_isolate(inst: SubSatInstance, rng: np.random.Generator, s: Optional[int] = None) -> SubSatInstance:
    """Valiant-Vazirani隔离：A′ = A ∩ {s个随机仿射方程}

    Args:
        inst: 实例
        rng: 随机数生成器
        s: 方程个数，缺省从{0, ..., n}中均匀抽取

    Returns:
        SubSatInstance: 子空间为A′的实例（A′可能为空）
    """
    n = inst.n
    if s is None:
        s = int(rng.integers(0, n + 1))
    forms = [
        AffineForm(BitVec(n, random_bits(rng, n)), int(rng.integers(0, 2)))
        for _ in range(s)
    ]
    if not isinstance(inst.space, AffineSubspace) or not forms:
        return inst
    return inst.with_space(inst.space.intersect(forms))


def outer_trials(n: int, plucks: int, nu: float, delta: float, affine: bool) -> int:
    """⌈ln(1/δ)·(4(n+1)，仅仿射时)·(1/ν)^plucks⌉"""
    isolation = 4 * (n + 1) if affine else 1
    return max(1, math.ceil(math.log(1 / delta) * isolation * (1 / nu) ** plucks))


def phase_iterations(n_j: int, k: int, nu: float) -> int:
    """每个PPZ阶段的迭代次数 2^{n_j − (1−ν)·n_j/k}"""
    return max(1, math.ceil(2 ** (n_j - (1 - nu) * n_j / max(k, 1))))


def _enumeration_limit(dim: int, budget: SolverBudget) -> Optional[int]:
    """穷举2^dim个点时允许的迭代次数；维数超过枚举上限时返回None"""
    if dim > get_settings().enumeration_cap:
        return None
    return budget.cap(1 << dim)


class _Trial:
    """一次外层试验的状态：当前公式与其变量在原实例中的编号"""

    def __init__(self, phi: CnfFormula, constraint: EasyConstraint):
        self.original = phi
        self.phi = phi
        self.kept: List[int] = list(range(phi.n))
        self.constraint = constraint

    def complete(self, bits: int) -> Optional[BitVec]:
        """把当前变量上的赋值交给约束补全，并复核原公式"""
        mask = full = 0
        for new_index, old_index in enumerate(self.kept):
            mask |= 1 << old_index
            if (bits >> new_index) & 1:
                full |= 1 << old_index
        extended = self.constraint.extend(PartialAssignment(self.original.n, mask, full))
        if extended is not None and self.original.evaluate(extended):
            return extended
        return None


def _trial(
    phi: CnfFormula,
    constraint: EasyConstraint,
    budget: SolverBudget,
    rng: np.random.Generator,
) -> Tuple[Optional[BitVec], int]:
    """执行一次外层试验，返回(见证或None, 迭代次数)"""
    n = phi.n
    k = max(phi.k, 1)
    iterations = 0

    if isinstance(constraint, AffineExtender):
        isolated = vv_isolate(SubSatInstance(phi, constraint.space), rng)
        space = isolated.space
        if not isinstance(space, AffineSubspace):
            return None, iterations
        if space.dim <= n - (1 - budget.nu) * n / k:
            # A′已经足够小，直接枚举
            limit = _enumeration_limit(space.dim, budget)
            if limit is None:
                logger.debug(f"A′维数{space.dim}超过枚举上限，放弃本次试验")
                return None, iterations
            try:
                for bits in iter_point_bits(space):
                    if iterations >= limit:
                        break
                    iterations += 1
                    if phi.evaluate(bits):
                        return BitVec(n, bits), iterations
            except EnumerationCapExceeded:
                pass
            return None, iterations
        constraint = AffineExtender(space)

    state = _Trial(phi, constraint)
    plucks = math.ceil(n / (2 * k))
    for j in range(plucks + 1):
        runner = PpzRunner(state.phi)
        for _ in range(budget.cap(phase_iterations(state.phi.n, k, budget.nu))):
            iterations += 1
            candidate = runner.iteration(rng)
            if candidate is not None:
                witness = state.complete(candidate.bits)
                if witness is not None:
                    return witness, iterations
        if j == plucks or state.phi.n == 0:
            break
        if isinstance(constraint, AffineExtender):
            v_in = constraint.space.v_in_mask
            choices = [i for i, old in enumerate(state.kept) if (v_in >> old) & 1]
        else:
            choices = list(range(state.phi.n))
        if not choices:
            break
        victim = choices[int(rng.integers(0, len(choices)))]
        try:
            state.phi = pluck(state.phi, victim)
        except EmptyClauseProduced:
            return None, iterations
        del state.kept[victim]

    # 对剩余变量穷举，受枚举上限与迭代上限约束
    limit = _enumeration_limit(state.phi.n, budget)
    if limit is None:
        logger.debug(f"剩余{state.phi.n}个变量超过枚举上限，放弃本次试验")
        return None, iterations
    for bits in range(limit):
        iterations += 1
        if state.phi.evaluate(bits):
            witness = state.complete(bits)
            if witness is not None:
                return witness, iterations
    return None, iterations


def solve_oblivious_pluck(
    phi: CnfFormula,
    constraint: EasyConstraint,
    budget: Optional[SolverBudget] = None,
) -> SolveResult:
    """在约束constraint下求Φ的满足赋值

    Args:
        phi: CNF公式
        constraint: 易扩展约束（仿射子空间时启用隔离）
        budget: 求解预算

    Returns:
        SolveResult: SAT或UNKNOWN
    """
    budget = budget or SolverBudget()
    solver = ObliviousPluckSolver("pluck")
    return solver.solve_with_constraint(phi, constraint, budget)


@register_solver("pluck")
class ObliviousPluckSolver(BaseSolver):
    """随机拔除 + PPZ，约束取A本身"""

    randomized = True

    def _search(self, inst: SubSatInstance, budget: SolverBudget) -> SearchOutcome:
        return self.search_constraint(inst.phi, AffineExtender(inst.space), budget)

    def search_constraint(self, phi: CnfFormula, constraint: EasyConstraint, budget: SolverBudget) -> SearchOutcome:
        if constraint.n != phi.n:
            raise ValueError(f"约束变量数{constraint.n}与公式变量数{phi.n}不一致")
        if not phi.clauses:
            witness = constraint.extend(PartialAssignment.empty(phi.n))
            if witness is not None:
                return SearchOutcome(Verdict.SAT, witness, 1, ["公式为空，直接扩展"])
            return SearchOutcome(Verdict.UNKNOWN, iterations=1, notes=["约束无解"])

        k = max(phi.k, 1)
        plucks = math.ceil(phi.n / (2 * k))
        trials = budget.cap(outer_trials(phi.n, plucks, budget.nu, budget.delta, constraint.is_affine))
        total = 0
        for trial in range(trials):
            witness, used = _trial(phi, constraint, budget, make_rng(budget.seed, trial))
            total += used
            if witness is not None:
                logger.debug(f"第{trial}次外层试验找到解")
                return SearchOutcome(Verdict.SAT, witness, total, [f"外层试验{trial + 1}/{trials}"])
        return SearchOutcome(Verdict.UNKNOWN, iterations=total, notes=[f"{trials}次外层试验均失败"])

    def solve_with_constraint(self, phi: CnfFormula, constraint: EasyConstraint, budget: SolverBudget) -> SolveResult:
        """对一般约束求解；仿射约束走普通的solve流程以复核A的成员关系"""
        if isinstance(constraint, AffineExtender):
            return self.solve(SubSatInstance(phi, constraint.space), budget)
        start = time.perf_counter()
        outcome = self.search_constraint(phi, constraint, budget)
        if outcome.witness is not None and not (phi.evaluate(outcome.witness) and constraint.contains(outcome.witness)):
            raise SolverError(f"{self.name}返回的见证未通过复核", algorithm=self.name)
        result = self.create_result(outcome, budget, time.perf_counter() - start)
        logger.info(f"{self.name}求解完成: n={phi.n}, k={phi.k}, 结论={result.verdict.value}")
        return result
