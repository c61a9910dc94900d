"""随机仿射分支算法

逐个处理Ψ的子句，维护一个相容的线性方程组：已被蕴含为1的子句跳过；
全部形式被蕴含为0则失败；只剩一个自由形式时令它为1；否则在剩余形式的
非零线性组合中均匀随机选一个令其为1（k=2时即在ℓ, ℓ′, ℓ+ℓ′中三选一）。
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..core.conversions import AffineClauseFormula, to_affine_clause_form
from ..core.errors import WidthError
from ..core.f2 import AffineForm, BitVec, EchelonForm, Implied
from ..core.formula import SubSatInstance
from ..core.models import SolveResult, SolverBudget, Verdict
from ..utils.logger import logger
from ..utils.rng import make_rng
from .base_solver import BaseSolver, SearchOutcome
from .registry import register_solver


@dataclass(frozen=True)
class BranchTrial:
    """一次分支迭代得到的方程组{form = 1}及其一个解"""
    equations: Tuple[AffineForm, ...]
    assignment: BitVec


def combine_forms(forms: List[AffineForm], selector: int) -> AffineForm:
    """selector的第i位为1时计入forms[i]"""
    combined = AffineForm.constant_form(forms[0].n, 0)
    for i, form in enumerate(forms):
        if (selector >> i) & 1:
            combined = combined + form
    return combined


def branch_iteration(psi: AffineClauseFormula, k: int, rng: np.random.Generator) -> Optional[BranchTrial]:
    """单次分支迭代

    Args:
        psi: 仿射子句形式
        k: 子句宽度上限
        rng: 随机数生成器

    Returns:
        Optional[BranchTrial]: 成功时返回方程组与解，失败时为None

    Raises:
        WidthError: 存在超过k个形式的子句
    """
    if psi.trivially_unsat:
        return None
    echelon = EchelonForm(psi.r)
    equations: List[AffineForm] = []

    def add_one(form: AffineForm) -> None:
        # form = 1 即 form + 1 = 0
        echelon.add(form.mask, form.constant ^ 1)
        equations.append(form)

    for clause in psi.clauses:
        if len(clause) > k:
            raise WidthError(f"子句含{len(clause)}个形式，超过宽度上限{k}")
        values = [echelon.implied(form.mask, form.constant) for form in clause]
        if Implied.ONE in values:
            continue
        free = [form for form, value in zip(clause, values) if value == Implied.FREE]
        if not free:
            return None
        if len(free) == 1:
            add_one(free[0])
            continue
        selector = int(rng.integers(1, 1 << len(free)))
        chosen = combine_forms(free, selector)
        implied = echelon.implied(chosen.mask, chosen.constant)
        if implied == Implied.ONE:
            continue
        if implied == Implied.ZERO:
            return None
        add_one(chosen)

    return BranchTrial(tuple(equations), BitVec(psi.r, echelon.particular()))


def branch_iterations(r: int, k: int, delta: float) -> int:
    """⌈ln(1/δ)·((2^k−1)/2^{k−1})^r⌉，k ≤ 1时底数为1"""
    ratio = (2 ** k - 1) / 2 ** (k - 1) if k > 1 else 1.0
    return max(1, math.ceil(math.log(1 / delta) * ratio ** r))


@register_solver("branch")
class BranchSolver(BaseSolver):
    """把实例改写成Ψ后反复执行随机分支迭代"""

    randomized = True

    def _search(self, inst: SubSatInstance, budget: SolverBudget) -> SearchOutcome:
        psi, trace = to_affine_clause_form(inst)
        if psi.trivially_unsat:
            return SearchOutcome(Verdict.UNSAT, notes=["某个子句在A上恒为假"], certified=True)
        k = max(psi.k, 1)
        planned = budget.cap(branch_iterations(psi.r, k, budget.delta))
        logger.debug(f"分支算法: r={psi.r}, k={k}, 计划迭代{planned}次")
        rng = make_rng(budget.seed)
        for i in range(planned):
            trial = branch_iteration(psi, k, rng)
            if trial is not None and psi.evaluate(trial.assignment):
                return SearchOutcome(Verdict.SAT, trace.lift(trial.assignment), i + 1)
        return SearchOutcome(Verdict.UNKNOWN, iterations=planned, notes=["迭代预算耗尽"])


def solve_branch(inst: SubSatInstance, budget: Optional[SolverBudget] = None) -> SolveResult:
    """随机分支求解，r = dim(A)"""
    return BranchSolver("branch").solve(inst, budget)
