"""求解器、报告与运行配置的数据模型"""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field, field_validator

from .f2 import BitVec

ALGORITHM_IDS = (
    "brute", "ppz", "codim", "pluck", "branch", "det2", "pafdeg",
    "max-rand", "max-derand", "max-sat34",
)

SOLVER_ALGORITHMS = ("brute", "ppz", "codim", "pluck", "branch", "det2", "pafdeg")
MAXSAT_ALGORITHMS = ("max-rand", "max-derand", "max-sat34")


class Verdict(str, Enum):
    """求解结论枚举"""
    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"


class SolverBudget(BaseModel):
    """求解预算与算法参数"""
    delta: float = Field(default=0.01, gt=0, lt=1, description="随机算法目标失败概率")
    max_iterations: Optional[int] = Field(None, ge=1, description="迭代次数硬上限")
    seed: int = Field(default=0, ge=0, lt=2**64, description="64位随机种子")
    nu: float = Field(default=0.5, gt=0, lt=1, description="拔除阈值参数ν")
    beta: float = Field(default=1.0, gt=0, description="降次指数参数β")
    density: Optional[float] = Field(None, gt=0, description="降次算法的方程密度上限c，缺省读配置")

    def cap(self, planned: int) -> int:
        """按max_iterations截断计划迭代次数"""
        planned = max(int(planned), 1)
        if self.max_iterations is not None:
            return min(planned, self.max_iterations)
        return planned


class SolverStats(BaseModel):
    """求解统计"""
    algorithm: str = Field(..., description="算法ID")
    iterations: int = Field(default=0, ge=0, description="已执行的迭代次数")
    wall_time: float = Field(default=0.0, ge=0, description="耗时(秒)")
    seed: Optional[int] = Field(None, description="随机种子")
    notes: List[str] = Field(default_factory=list, description="附加说明")


class SolveResult(BaseModel):
    """求解结果"""
    verdict: Verdict = Field(..., description="求解结论")
    witness: Optional[List[int]] = Field(None, description="满足赋值（0/1列表），仅SAT时给出")
    stats: SolverStats = Field(..., description="求解统计")

    @field_validator("witness")
    @classmethod
    def validate_witness(cls, v):
        if v is not None and any(bit not in (0, 1) for bit in v):
            raise ValueError("见证赋值只能包含0和1")
        return v

    @property
    def is_sat(self) -> bool:
        return self.verdict == Verdict.SAT

    def witness_vector(self) -> Optional[BitVec]:
        if self.witness is None:
            return None
        return BitVec.from_list(self.witness)

    def witness_line(self) -> str:
        """DIMACS风格的v行，例如 "v 1 -2 3 0\""""
        if self.witness is None:
            return ""
        literals = [str(i + 1) if bit else str(-(i + 1)) for i, bit in enumerate(self.witness)]
        return " ".join(["v", *literals, "0"])


class MaxResult(BaseModel):
    """Max-Sub-SAT近似结果"""
    assignment: List[int] = Field(..., description="A中的赋值（0/1列表）")
    satisfied: int = Field(..., ge=0, description="满足的子句数")
    total: int = Field(..., ge=0, description="子句总数")
    bound: float = Field(..., ge=0, description="所用的保证下界（m/2或3m/4等）")
    algorithm: str = Field(default="max-derand", description="算法ID")

    def assignment_vector(self) -> BitVec:
        return BitVec.from_list(self.assignment)


class OutputFormat(str, Enum):
    """报告输出格式"""
    HUMAN = "human"
    JSON = "json"


class RunConfig(BaseModel):
    """一次命令行调用的配置"""
    command: str = Field(..., description="子命令: solve/reduce/gen/maxsat/bench/info")
    input: Optional[str] = Field(None, description="输入实例文件路径")
    algorithm: Optional[str] = Field(None, description="算法ID，缺省时按实例特征推荐")
    seed: int = Field(default=0, ge=0, lt=2**64, description="64位随机种子")
    delta: float = Field(default=0.01, gt=0, lt=1, description="随机算法目标失败概率")
    max_iterations: Optional[int] = Field(None, ge=1, description="迭代次数硬上限")
    nu: float = Field(default=0.5, gt=0, lt=1, description="拔除阈值参数ν")
    beta: float = Field(default=1.0, gt=0, description="降次指数参数β")
    format: OutputFormat = Field(default=OutputFormat.HUMAN, description="输出格式")
    out: Optional[str] = Field(None, description="输出文件路径，缺省写到标准输出")
    timing: bool = Field(default=False, description="json报告中是否包含耗时")

    @field_validator("algorithm")
    @classmethod
    def validate_algorithm(cls, v):
        if v is not None and v not in ALGORITHM_IDS:
            raise ValueError(f"未知的算法ID: {v}，可选: {', '.join(ALGORITHM_IDS)}")
        return v

    def budget(self) -> SolverBudget:
        return SolverBudget(
            delta=self.delta,
            max_iterations=self.max_iterations,
            seed=self.seed,
            nu=self.nu,
            beta=self.beta,
        )
