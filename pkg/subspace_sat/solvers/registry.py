from dataclasses import dataclass
from typing import Dict, List, Optional, Type

from ..core.errors import SolverError
from ..utils.logger import logger
from .base_solver import BaseSolver


@dataclass
class SolverInfo:
    """求解器信息"""
    name: str
    description: str
    solver_class: Type[BaseSolver]
    randomized: bool


class SolverRegistry:
    """求解器注册中心"""

    def __init__(self):
        self._solvers: Dict[str, SolverInfo] = {}
        self._instances: Dict[str, BaseSolver] = {}

    def register(self, solver_class: Type[BaseSolver], name: str, description: str = "") -> None:
        instance = solver_class(name=name, description=description)
        self._solvers[name] = SolverInfo(name, description, solver_class, solver_class.randomized)
        self._instances[name] = instance
        logger.debug(f"求解器已注册: {name}")

    def get_solver(self, name: str) -> BaseSolver:
        """获取求解器实例

        Raises:
            SolverError: 求解器不存在
        """
        solver = self._instances.get(name)
        if solver is None:
            raise SolverError(f"求解器不存在: {name}，可选: {', '.join(self.names())}", algorithm=name)
        return solver

    def get_info(self, name: str) -> Optional[SolverInfo]:
        return self._solvers.get(name)

    def has_solver(self, name: str) -> bool:
        return name in self._solvers

    def names(self) -> List[str]:
        return sorted(self._solvers)


# 全局求解器注册中心实例
solver_registry = SolverRegistry()


def register_solver(name: str, description: Optional[str] = None):
    """求解器注册装饰器

    Args:
        name: 算法ID，例如"brute"
        description: 描述，缺省取类的docstring
    """
    def decorator(solver_class: Type[BaseSolver]):
        doc = (solver_class.__doc__ or "").strip()
        solver_registry.register(solver_class, name=name, description=description or doc)
        return solver_class

    return decorator


def get_solver(name: str) -> BaseSolver:
    """获取求解器实例（便捷函数）"""
    return solver_registry.get_solver(name)
