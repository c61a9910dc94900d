# 导入各模块以完成求解器注册
from .base_solver import BaseSolver, SearchOutcome
from .branching import BranchTrial, branch_iteration, solve_branch
from .brute_force import brute_force
from .codim_pluck import solve_codim_pluck
from .degree_reduction import combine_factors, reduce_degree, solve_paf_degree_reduction
from .extenders import EasyConstraint, PartialAssignment, affine_extender, horn_extender
from .oblivious_pluck import solve_oblivious_pluck, vv_isolate
from .ppz import ppz_iteration, ppz_solve
from .registry import get_solver, register_solver, solver_registry
from .two_subsat import solve_2subsat_det

__all__ = [
    "BaseSolver",
    "SearchOutcome",
    "BranchTrial",
    "branch_iteration",
    "solve_branch",
    "brute_force",
    "solve_codim_pluck",
    "combine_factors",
    "reduce_degree",
    "solve_paf_degree_reduction",
    "EasyConstraint",
    "PartialAssignment",
    "affine_extender",
    "horn_extender",
    "solve_oblivious_pluck",
    "vv_isolate",
    "ppz_iteration",
    "ppz_solve",
    "get_solver",
    "register_solver",
    "solver_registry",
    "solve_2subsat_det",
]
