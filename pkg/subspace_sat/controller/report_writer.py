"""求解报告的格式化与输出

json格式每个结果一行，字段顺序固定；耗时只在timing开启时写入，
因此相同输入与种子的报告逐字节一致。
"""

import json
from pathlib import Path
from typing import Any, Dict, Optional

from ..core.models import MaxResult, OutputFormat, SolveResult, Verdict
from ..core.report_schema import ReportSchemaValidator
from ..utils.logger import logger

_STATUS_LINES = {
    Verdict.SAT: "s SATISFIABLE",
    Verdict.UNSAT: "s UNSATISFIABLE",
    Verdict.UNKNOWN: "s UNKNOWN",
}


def _v_line(bits) -> str:
    literals = [str(i + 1) if bit else str(-(i + 1)) for i, bit in enumerate(bits)]
    return " ".join(["v", *literals, "0"])


def solve_record(result: SolveResult, instance: str, timing: bool = False) -> Dict[str, Any]:
    record: Dict[str, Any] = {
        "command": "solve",
        "instance": instance,
        "algorithm": result.stats.algorithm,
        "verdict": result.verdict.value,
        "witness": result.witness_line() or None,
        "iterations": result.stats.iterations,
        "seed": result.stats.seed,
        "notes": list(result.stats.notes),
    }
    if timing:
        record["wall_time"] = round(result.stats.wall_time, 6)
    return record


def maxsat_record(
    result: MaxResult, instance: str, seed: Optional[int] = None, timing_value: Optional[float] = None
) -> Dict[str, Any]:
    record: Dict[str, Any] = {
        "command": "maxsat",
        "instance": instance,
        "algorithm": result.algorithm,
        "assignment": _v_line(result.assignment),
        "satisfied": result.satisfied,
        "total": result.total,
        "bound": result.bound,
        "seed": seed,
    }
    if timing_value is not None:
        record["wall_time"] = round(timing_value, 6)
    return record


class ReportWriter:
    """把结果写成人类可读文本或json-lines"""

    def __init__(self, output_format: OutputFormat = OutputFormat.HUMAN, timing: bool = False):
        self.output_format = output_format
        self.timing = timing

    def format_solve(self, result: SolveResult, instance: str) -> str:
        """格式化求解结果

        Args:
            result: 求解结果
            instance: 实例文件名

        Returns:
            str: 以换行结尾的报告文本
        """
        if self.output_format == OutputFormat.JSON:
            record = solve_record(result, instance, self.timing)
            ReportSchemaValidator("solve").validate(record)
            return json.dumps(record, ensure_ascii=False) + "\n"

        lines = [
            f"c 实例: {instance}",
            f"c 算法: {result.stats.algorithm}",
            f"c 迭代次数: {result.stats.iterations}",
        ]
        if result.stats.seed is not None:
            lines.append(f"c 随机种子: {result.stats.seed}")
        lines.append(f"c 耗时: {result.stats.wall_time:.3f}秒")
        lines.extend(f"c 说明: {note}" for note in result.stats.notes)
        lines.append(_STATUS_LINES[result.verdict])
        if result.verdict == Verdict.SAT:
            lines.append(result.witness_line())
        return "\n".join(lines) + "\n"

    def format_maxsat(
        self, result: MaxResult, instance: str, seed: Optional[int] = None, wall_time: float = 0.0
    ) -> str:
        if self.output_format == OutputFormat.JSON:
            record = maxsat_record(result, instance, seed, wall_time if self.timing else None)
            ReportSchemaValidator("maxsat").validate(record)
            return json.dumps(record, ensure_ascii=False) + "\n"
        lines = [
            f"c 实例: {instance}",
            f"c 算法: {result.algorithm}",
            f"c 满足子句: {result.satisfied}/{result.total}",
            f"c 保证下界: {result.bound:g}",
            f"c 耗时: {wall_time:.3f}秒",
            _v_line(result.assignment),
        ]
        return "\n".join(lines) + "\n"

    def format_analysis(self, analysis: Dict[str, Any], instance: str) -> str:
        if self.output_format == OutputFormat.JSON:
            return json.dumps({"command": "info", "instance": instance, **analysis}, ensure_ascii=False) + "\n"
        lines = [f"c 实例: {instance}"]
        lines.extend(f"c {key}: {value}" for key, value in analysis.items())
        return "\n".join(lines) + "\n"

    @staticmethod
    def emit(content: str, output_path: Optional[Path] = None) -> Optional[str]:
        """写到文件（覆盖）或标准输出

        Returns:
            Optional[str]: 写入的文件路径
        """
        if output_path:
            output_path.parent.mkdir(parents=True, exist_ok=True)
            with open(output_path, "w", encoding="utf-8") as f:
                f.write(content)
            logger.debug(f"报告已写入: {output_path}")
            return str(output_path)
        print(content, end="")
        return None
