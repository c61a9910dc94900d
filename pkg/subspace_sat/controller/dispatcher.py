"""求解调度：按算法ID把实例路由到求解器"""

from typing import Optional

from ..core.conversions import PafInstance, affine_clause_to_subsat, paf_to_subsat, project_witness
from ..core.dimacs import Instance
from ..core.errors import FormulaError, SolverError
from ..core.formula import SubSatInstance
from ..core.models import MAXSAT_ALGORITHMS, SOLVER_ALGORITHMS, MaxResult, SolveResult, SolverBudget, Verdict
from ..maxsat.approximation import approx_max_derand, approx_max_random, satisfiable_threequarters
from ..solvers import get_solver
from ..solvers.degree_reduction import DegreeReductionSolver
from ..utils.logger import logger
from ..utils.rng import make_rng
from .instance_analyzer import InstanceAnalyzer


class SolveDispatcher:
    """求解调度器"""

    def __init__(self, analyzer: Optional[InstanceAnalyzer] = None):
        self.analyzer = analyzer or InstanceAnalyzer()

    def route(self, inst: SubSatInstance, preferred: Optional[str] = None) -> str:
        """确定算法ID：给定时直接使用，否则按实例特征推荐"""
        if preferred:
            if preferred not in SOLVER_ALGORITHMS:
                raise SolverError(f"{preferred}不是判定求解算法", algorithm=preferred)
            return preferred
        return self.analyzer.recommend(inst)

    def solve(
        self,
        instance: Instance,
        algorithm: Optional[str] = None,
        budget: Optional[SolverBudget] = None,
    ) -> SolveResult:
        """求解Sub-SAT实例或PAF方程组

        PAF输入上pafdeg直接运行；其余算法在等价的Sub-SAT编码上运行，
        见证投影回原变量。

        Args:
            instance: 实例
            algorithm: 算法ID，缺省时自动推荐
            budget: 求解预算

        Returns:
            SolveResult: 求解结果
        """
        budget = budget or SolverBudget()
        if isinstance(instance, PafInstance):
            return self._solve_paf(instance, algorithm or "pafdeg", budget)
        name = self.route(instance, algorithm)
        logger.info(f"调度到求解器: {name}")
        return get_solver(name).solve(instance, budget)

    def _solve_paf(self, paf: PafInstance, algorithm: str, budget: SolverBudget) -> SolveResult:
        if algorithm == "pafdeg":
            solver = get_solver("pafdeg")
            if not isinstance(solver, DegreeReductionSolver):
                raise SolverError("pafdeg注册的求解器类型不符", algorithm=algorithm)
            return solver.solve_paf(paf, budget)
        encoded = affine_clause_to_subsat(paf_to_subsat(paf))
        logger.info(f"PAF方程组编码为Sub-SAT实例: n={encoded.n}, t={encoded.t}, 使用{algorithm}")
        result = get_solver(self.route(encoded, algorithm)).solve(encoded, budget)
        if result.verdict != Verdict.SAT:
            return result
        witness = project_witness(result.witness_vector(), paf.n)
        if not paf.is_solution(witness):
            raise SolverError("投影后的见证不满足PAF方程组", algorithm=algorithm)
        return result.model_copy(update={"witness": witness.to_list()})

    def maxsat(self, instance: Instance, algorithm: str = "max-derand", seed: int = 0) -> MaxResult:
        """运行Max-Sub-SAT近似算法

        Raises:
            FormulaError: 输入不是Sub-SAT实例
            SolverError: 未知的近似算法
        """
        if not isinstance(instance, SubSatInstance):
            raise FormulaError("Max-Sub-SAT只接受p cnf实例")
        if algorithm not in MAXSAT_ALGORITHMS:
            raise SolverError(f"{algorithm}不是近似算法", algorithm=algorithm)
        if algorithm == "max-rand":
            return approx_max_random(instance, make_rng(seed))
        if algorithm == "max-sat34":
            return satisfiable_threequarters(instance)
        return approx_max_derand(instance)
