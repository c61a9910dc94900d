"""基准实验：成功率估计、迭代次数缩放拟合与CSV输出

每个网格单元的每次试验使用make_rng(seed, 单元序号, 试验序号)派生的独立子流，
因此结果与执行顺序、并行度无关；输出前按参数排序。
"""

import csv
import io
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from ..config import get_settings
from ..core.conversions import subsat_to_paf, to_affine_clause_form
from ..core.errors import ExperimentError, SubsatError
from ..core.formula import SubSatInstance
from ..core.models import SOLVER_ALGORITHMS, SolverBudget, Verdict
from ..core.report_schema import ReportSchemaValidator
from ..reductions.generators import chain_instance, planted_instance
from ..solvers.branching import branch_iteration
from ..solvers.degree_reduction import brute_force_paf, combination_length, reduce_degree
from ..solvers.ppz import PpzRunner
from ..solvers.registry import get_solver
from ..utils.logger import logger
from ..utils.rng import make_rng

GRID_KEYS = ("n", "k", "t", "m", "r")
GENERATORS = ("planted", "planted-unique", "chain")
ITERATION_ALGORITHMS = ("ppz", "branch", "pafdeg")
CSV_COLUMNS = (
    "n", "k", "t", "m", "r", "trials", "successes", "success_rate", "stderr",
    "mean_iterations", "median_wall_time", "theory", "error",
)

# 缺省子句密度m/n
DEFAULT_DENSITY = {1: 1.0, 2: 2.0, 3: 4.0}


class Experiment(BaseModel):
    """一次基准实验的配置"""
    generator: str = Field(default="planted", description="实例生成器: planted、planted-unique或chain")
    algorithm: str = Field(..., description="算法ID")
    mode: str = Field(default="solve", description="iteration: 每次试验一次迭代；solve: 完整求解")
    grid: Dict[str, List[int]] = Field(..., description="参数网格，键为n/k/t/m/r")
    trials: int = Field(..., ge=1, description="每个单元的试验次数")
    seed: int = Field(default=0, ge=0, description="实验种子")
    delta: float = Field(default=0.01, gt=0, lt=1, description="solve模式的目标失败概率")
    beta: float = Field(default=1.0, gt=0, description="pafdeg的降次指数参数β")
    max_iterations: Optional[int] = Field(None, ge=1, description="solve模式的迭代上限")
    workers: int = Field(default=1, ge=1, description="并行进程数")
    timing: bool = Field(default=False, description="是否输出耗时列")
    output: Optional[str] = Field(None, description="CSV输出路径")

    @field_validator("grid")
    @classmethod
    def validate_grid(cls, v):
        if not v:
            raise ValueError("参数网格不能为空")
        for key, values in v.items():
            if key not in GRID_KEYS:
                raise ValueError(f"未知的网格参数: {key}")
            if not values:
                raise ValueError(f"网格参数{key}没有取值")
        return v

    @model_validator(mode="after")
    def validate_combination(self):
        if self.algorithm not in SOLVER_ALGORITHMS:
            raise ValueError(f"未知的算法ID: {self.algorithm}")
        if self.mode not in ("iteration", "solve"):
            raise ValueError(f"未知的试验模式: {self.mode}")
        if self.mode == "iteration" and self.algorithm not in ITERATION_ALGORITHMS:
            raise ValueError(f"iteration模式只支持: {', '.join(ITERATION_ALGORITHMS)}")
        if self.generator not in GENERATORS:
            raise ValueError(f"未知的生成器: {self.generator}")
        return self

    def cells(self) -> List[Dict[str, int]]:
        """网格的全部单元，按参数排序"""
        keys = sorted(self.grid)
        cells = [dict(zip(keys, values)) for values in product(*(sorted(self.grid[k]) for k in keys))]
        return sorted((resolve_cell(cell, self.generator) for cell in cells), key=_cell_key)


class CellResult(BaseModel):
    """一个网格单元的统计结果"""
    params: Dict[str, int] = Field(..., description="n, k, t, m, r")
    trials: int = Field(..., ge=1, description="试验次数")
    successes: int = Field(..., ge=0, description="成功次数")
    mean_iterations: Optional[float] = Field(None, description="成功试验的平均迭代次数")
    median_wall_time: Optional[float] = Field(None, description="耗时中位数(秒)")
    theory: Optional[float] = Field(None, description="理论成功概率下界")
    error: Optional[str] = Field(None, description="生成或求解异常")

    @model_validator(mode="after")
    def validate_counts(self):
        if self.successes > self.trials:
            raise ValueError(f"成功次数{self.successes}超过试验次数{self.trials}")
        return self

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials

    @property
    def stderr(self) -> float:
        """二项分布标准误 sqrt(p(1−p)/trials)"""
        p = self.success_rate
        return math.sqrt(p * (1 - p) / self.trials)


def resolve_cell(cell: Dict[str, int], generator: str = "planted") -> Dict[str, int]:
    """补全缺省参数：给出r时n = r + t；k缺省3；m按缺省密度取整

    chain生成器只由r决定：n = 2r − 1, t = r − 1, k = 2, m = r。
    """
    cell = dict(cell)
    if generator == "chain":
        if "r" not in cell:
            raise ExperimentError("chain生成器的网格必须给出r")
        r = cell["r"]
        derived = {"n": 2 * r - 1, "k": 2, "t": r - 1, "m": r, "r": r}
        for key, value in cell.items():
            if key not in derived:
                raise ExperimentError(f"chain生成器不接受参数{key}")
            if derived[key] != value:
                raise ExperimentError(f"chain生成器要求{key}={derived[key]}，网格给出{value}")
        return derived
    t = cell.setdefault("t", 0)
    if "r" in cell:
        if "n" in cell and cell["n"] != cell["r"] + t:
            raise ExperimentError(f"参数不一致: n={cell['n']}, r={cell['r']}, t={t}")
        cell["n"] = cell["r"] + t
    if "n" not in cell:
        raise ExperimentError("网格必须给出n或r")
    cell["r"] = cell["n"] - t
    k = cell.setdefault("k", 3)
    cell.setdefault("m", round(DEFAULT_DENSITY.get(k, 2.0 ** (k - 1)) * cell["n"]))
    return cell


def _cell_key(cell: Dict[str, int]) -> Tuple[int, ...]:
    return tuple(cell[key] for key in GRID_KEYS)


def theory_bound(
    algorithm: str, mode: str, cell: Dict[str, int], delta: float, beta: float = 1.0
) -> Optional[float]:
    """单元的理论成功概率下界

    iteration模式：branch为(2^{k−1}/(2^k−1))^r，ppz为2^{−n+n/k}/n²（唯一解时），
    pafdeg为(1 − 2^{−L})^{方程数}，L由配置的密度c与β决定；solve模式：随机算法1 − δ，确定性算法1。
    """
    n, k, t, m, r = (cell[key] for key in GRID_KEYS)
    if mode == "solve":
        return 1.0 if algorithm in ("brute", "det2") else 1 - delta
    if algorithm == "branch":
        base = 2 ** (k - 1) / (2 ** k - 1) if k > 1 else 1.0
        return base ** r
    if algorithm == "ppz":
        return 2 ** (-n + n / max(k, 1)) / max(n, 1) ** 2
    if algorithm == "pafdeg":
        length = combination_length(get_settings().paf_density, beta)
        return (1 - 2 ** -length) ** (t + m)
    return None


def _single_iteration(algorithm: str, inst: SubSatInstance, rng: np.random.Generator, beta: float = 1.0) -> bool:
    """执行一次算法迭代，返回是否得到见证"""
    if algorithm == "branch":
        psi, trace = to_affine_clause_form(inst)
        trial = branch_iteration(psi, max(psi.k, 1), rng)
        return trial is not None and inst.is_solution(trace.lift(trial.assignment))
    if algorithm == "ppz":
        candidate = PpzRunner(inst.phi).iteration(rng)
        return candidate is not None and inst.space.contains(candidate)
    # pafdeg
    paf = subsat_to_paf(inst)
    length = combination_length(get_settings().paf_density, beta)
    reduced, _ = reduce_degree(paf, length, rng)
    candidate = brute_force_paf(reduced)
    return candidate is not None and paf.is_solution(candidate)


def run_cell(experiment: Experiment, index: int, cell: Dict[str, int]) -> CellResult:
    """执行一个网格单元的全部试验；异常记录在error列中"""
    successes = 0
    iterations: List[int] = []
    wall_times: List[float] = []
    theory = theory_bound(experiment.algorithm, experiment.mode, cell, experiment.delta, experiment.beta)
    try:
        for trial in range(experiment.trials):
            rng = make_rng(experiment.seed, index, trial)
            if experiment.generator == "chain":
                inst, _ = chain_instance(cell["r"], rng)
            else:
                inst, _ = planted_instance(
                    cell["n"], cell["k"], cell["m"], cell["t"], rng,
                    unique=experiment.generator == "planted-unique",
                )
            start = time.perf_counter()
            if experiment.mode == "iteration":
                if _single_iteration(experiment.algorithm, inst, rng, experiment.beta):
                    successes += 1
            else:
                budget = SolverBudget(
                    delta=experiment.delta,
                    beta=experiment.beta,
                    max_iterations=experiment.max_iterations,
                    seed=int(rng.integers(0, 2 ** 62)),
                )
                result = get_solver(experiment.algorithm).solve(inst, budget)
                if result.verdict == Verdict.SAT:
                    successes += 1
                    iterations.append(result.stats.iterations)
            wall_times.append(time.perf_counter() - start)
    except SubsatError as e:
        logger.warning(f"单元{cell}执行失败: {e.message}")
        return CellResult(params=cell, trials=experiment.trials, successes=0, theory=theory, error=e.message)

    return CellResult(
        params=cell,
        trials=experiment.trials,
        successes=successes,
        mean_iterations=statistics.fmean(iterations) if iterations else None,
        median_wall_time=statistics.median(wall_times) if experiment.timing and wall_times else None,
        theory=theory,
    )


def _run_cell_args(args: Tuple[Experiment, int, Dict[str, int]]) -> CellResult:
    return run_cell(*args)


def run_experiment(experiment: Experiment) -> List[CellResult]:
    """执行实验的全部单元

    Args:
        experiment: 实验配置

    Returns:
        List[CellResult]: 按参数排序的单元结果
    """
    cells = experiment.cells()
    logger.info(
        f"开始实验: 算法={experiment.algorithm}, 模式={experiment.mode}, "
        f"{len(cells)}个单元 × {experiment.trials}次试验"
    )
    jobs = [(experiment, index, cell) for index, cell in enumerate(cells)]
    if experiment.workers > 1:
        with ProcessPoolExecutor(max_workers=experiment.workers) as pool:
            results = list(pool.map(_run_cell_args, jobs))
    else:
        results = [_run_cell_args(job) for job in jobs]
    return sorted(results, key=lambda row: _cell_key(row.params))


def _format(value: Optional[float]) -> str:
    if value is None:
        return ""
    return f"{value:.6g}"


def rows_to_csv(rows: Iterable[CellResult]) -> str:
    """CSV文本：表头一行，逗号分隔，LF换行"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([
            *(row.params[key] for key in GRID_KEYS),
            row.trials,
            row.successes,
            _format(row.success_rate),
            _format(row.stderr),
            _format(row.mean_iterations),
            _format(row.median_wall_time),
            _format(row.theory),
            row.error or "",
        ])
    return buffer.getvalue()


def write_csv(rows: Iterable[CellResult], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(rows_to_csv(rows))
    logger.info(f"实验结果已写入: {path}")
    return path


@dataclass(frozen=True)
class ScalingFit:
    """log_b(平均迭代次数)对参数的最小二乘直线"""
    parameter: str
    slope: float
    intercept: float
    base: float
    residuals: Tuple[float, ...]

    @property
    def growth_ratio(self) -> float:
        """参数每加1，迭代次数乘以的倍数"""
        return self.base ** self.slope


def scaling_fit(rows: Sequence[CellResult], parameter: str = "r", base: float = 2.0) -> ScalingFit:
    """拟合迭代次数随参数的指数增长率

    Args:
        rows: 单元结果（只用有成功试验的单元）
        parameter: 横轴参数
        base: 对数底

    Returns:
        ScalingFit: 斜率、截距与各单元残差

    Raises:
        ExperimentError: 可用单元少于3个或参数取值不足3个
    """
    usable = [row for row in rows if row.mean_iterations is not None and row.mean_iterations > 0]
    xs = np.array([row.params[parameter] for row in usable], dtype=float)
    if len(usable) < 3 or len(set(xs.tolist())) < 3:
        raise ExperimentError(f"拟合至少需要3个{parameter}取值不同且有成功试验的单元")
    ys = np.log(np.array([row.mean_iterations for row in usable], dtype=float)) / math.log(base)
    slope, intercept = np.polyfit(xs, ys, 1)
    residuals = ys - (slope * xs + intercept)
    return ScalingFit(parameter, float(slope), float(intercept), base, tuple(float(r) for r in residuals))


def _parse_value(key: str, raw: str):
    if key in GRID_KEYS:
        try:
            return [int(v) for v in raw.split(",") if v.strip()]
        except ValueError:
            raise ExperimentError(f"网格参数{key}的取值必须是逗号分隔的整数: {raw}")
    if key in ("trials", "seed", "workers", "max_iterations"):
        try:
            return int(raw)
        except ValueError:
            raise ExperimentError(f"{key}必须是整数: {raw}")
    if key in ("delta", "beta"):
        try:
            return float(raw)
        except ValueError:
            raise ExperimentError(f"{key}必须是数值: {raw}")
    if key == "timing":
        return raw.lower() in ("1", "true", "yes", "on")
    return raw


def parse_experiment_spec(text: str) -> Experiment:
    """解析key=value格式的实验配置，#开头的行为注释

    Raises:
        ExperimentError: 格式错误或配置不合法
    """
    data: Dict[str, object] = {}
    grid: Dict[str, List[int]] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ExperimentError(f"第{number}行: 应为key=value: {line}")
        key, value = (part.strip() for part in line.split("=", 1))
        parsed = _parse_value(key, value)
        if key in GRID_KEYS:
            grid[key] = parsed
        else:
            data[key] = parsed
    data["grid"] = grid
    return build_experiment(data)


def build_experiment(data: Dict[str, object]) -> Experiment:
    """校验配置字典并构造Experiment"""
    try:
        ReportSchemaValidator("experiment").validate(data)
        return Experiment(**data)
    except ExperimentError:
        raise
    except Exception as e:
        raise ExperimentError(f"实验配置不合法: {e}")


def load_experiment(path: Union[str, Path]) -> Experiment:
    """读取实验配置文件

    Raises:
        FileNotFoundError: 文件不存在
        ExperimentError: 配置不合法
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"实验配置文件不存在: {path}")
    return parse_experiment_spec(path.read_text(encoding="utf-8"))
