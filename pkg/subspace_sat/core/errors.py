"""异常定义"""

from typing import Optional


class SubsatError(Exception):
    """所有求解器相关异常的基类"""
    
    def __init__(self, message: str):
        self.message = message
        super().__init__(message)


class F2Error(SubsatError):
    """GF(2)线性代数异常（维数不匹配、坐标越界等）"""


class EnumerationCapExceeded(F2Error):
    """子空间维数超过枚举上限"""
    
    def __init__(self, dim: int, cap: int):
        self.dim = dim
        self.cap = cap
        super().__init__(f"子空间维数{dim}超过枚举上限{cap}")


class FormulaError(SubsatError):
    """公式构造或变换异常"""


class WidthError(FormulaError):
    """子句宽度超出算法要求"""


class PluckError(FormulaError):
    """拔除/消元步骤失败"""


class EmptyClauseProduced(PluckError):
    """拔除变量后出现空子句"""
    
    def __init__(self, message: str, clause_index: Optional[int] = None):
        self.clause_index = clause_index
        super().__init__(message)


class PluckFailed(PluckError):
    """待拔除变量不出现在任何剩余方程中"""
    
    def __init__(self, message: str, variable: Optional[int] = None):
        self.variable = variable
        super().__init__(message)


class SolverError(SubsatError):
    """求解器异常"""
    
    def __init__(self, message: str, algorithm: Optional[str] = None):
        self.algorithm = algorithm
        super().__init__(message)


class DegreeError(SolverError):
    """多项式方程因子不是仿射形式"""


class PremiseViolated(SubsatError):
    """调用方断言的前提（例如实例可满足）不成立"""


class ReductionError(SubsatError):
    """归约生成器输入不合法"""


class DimacsError(SubsatError):
    """实例文件解析异常"""
    
    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"第{line_number}行: {message}"
        super().__init__(message)


class ExperimentError(SubsatError):
    """基准实验配置异常"""
