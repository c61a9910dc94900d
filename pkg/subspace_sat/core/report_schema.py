"""json-lines报告与实验配置的JSON Schema"""

import json
from typing import Any, Dict, List

import jsonschema
from jsonschema import ValidationError, validate

_V_LINE = {
    "type": ["string", "null"],
    "description": "DIMACS风格的v行",
    "pattern": "^v( -?[1-9][0-9]*)* 0$",
}

SOLVE_REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Solve Report",
    "description": "solve命令的单行报告",
    "type": "object",
    "properties": {
        "command": {"const": "solve"},
        "instance": {"type": "string", "description": "实例文件路径"},
        "algorithm": {
            "type": "string",
            "enum": ["brute", "ppz", "codim", "pluck", "branch", "det2", "pafdeg"],
        },
        "verdict": {"type": "string", "enum": ["sat", "unsat", "unknown"]},
        "witness": _V_LINE,
        "iterations": {"type": "integer", "minimum": 0},
        "seed": {"type": ["integer", "null"], "minimum": 0},
        "notes": {"type": "array", "items": {"type": "string"}},
        "wall_time": {"type": "number", "minimum": 0, "description": "仅在--timing时输出"},
    },
    "required": ["command", "instance", "algorithm", "verdict", "witness", "iterations", "seed"],
    "allOf": [
        {
            "if": {"properties": {"verdict": {"const": "sat"}}},
            "then": {"properties": {"witness": {"type": "string"}}},
        }
    ],
    "additionalProperties": False,
}

MAXSAT_REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Max-Sub-SAT Report",
    "description": "maxsat命令的单行报告",
    "type": "object",
    "properties": {
        "command": {"const": "maxsat"},
        "instance": {"type": "string"},
        "algorithm": {"type": "string", "enum": ["max-rand", "max-derand", "max-sat34"]},
        "assignment": {"type": "string", "pattern": _V_LINE["pattern"]},
        "satisfied": {"type": "integer", "minimum": 0},
        "total": {"type": "integer", "minimum": 0},
        "bound": {"type": "number", "minimum": 0},
        "seed": {"type": ["integer", "null"], "minimum": 0},
        "wall_time": {"type": "number", "minimum": 0},
    },
    "required": ["command", "instance", "algorithm", "assignment", "satisfied", "total", "bound"],
    "additionalProperties": False,
}

_GRID_VALUES = {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1}

EXPERIMENT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Experiment Spec",
    "description": "基准实验配置（key=value文件解析后的结果）",
    "type": "object",
    "properties": {
        "generator": {"type": "string", "enum": ["planted", "planted-unique", "chain"]},
        "algorithm": {
            "type": "string",
            "enum": ["brute", "ppz", "codim", "pluck", "branch", "det2", "pafdeg"],
        },
        "mode": {"type": "string", "enum": ["iteration", "solve"]},
        "grid": {
            "type": "object",
            "properties": {key: _GRID_VALUES for key in ("n", "k", "t", "m", "r")},
            "minProperties": 1,
            "additionalProperties": False,
        },
        "trials": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
        "delta": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "beta": {"type": "number", "exclusiveMinimum": 0},
        "max_iterations": {"type": ["integer", "null"], "minimum": 1},
        "workers": {"type": "integer", "minimum": 1},
        "timing": {"type": "boolean"},
        "output": {"type": ["string", "null"]},
    },
    "required": ["algorithm", "grid", "trials"],
    "additionalProperties": False,
}

SCHEMAS: Dict[str, Dict[str, Any]] = {
    "solve": SOLVE_REPORT_SCHEMA,
    "maxsat": MAXSAT_REPORT_SCHEMA,
    "experiment": EXPERIMENT_SCHEMA,
}


class ReportSchemaValidator:
    """报告与实验配置的Schema验证器"""

    def __init__(self, kind: str):
        if kind not in SCHEMAS:
            raise KeyError(f"未知的Schema类型: {kind}")
        self.kind = kind
        self.schema = SCHEMAS[kind]

    def validate(self, data: Dict[str, Any]) -> bool:
        """
        验证数据是否符合Schema

        Raises:
            ValidationError: 验证失败时抛出
        """
        try:
            validate(instance=data, schema=self.schema)
            return True
        except ValidationError as e:
            raise ValidationError(f"{self.kind}格式验证失败: {e.message}")

    def validate_json_line(self, line: str) -> bool:
        try:
            data = json.loads(line)
        except json.JSONDecodeError as e:
            raise ValidationError(f"JSON格式错误: {e}")
        return self.validate(data)

    def get_validation_errors(self, data: Dict[str, Any]) -> List[Dict[str, Any]]:
        """收集全部验证错误（路径、信息、出错的值）"""
        validator = jsonschema.Draft202012Validator(self.schema)
        return [
            {"path": list(error.path), "message": error.message, "failed_value": error.instance}
            for error in validator.iter_errors(data)
        ]
