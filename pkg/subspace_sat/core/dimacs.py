"""实例文件的读写

DIMACS+XOR格式：
    c 注释
    p cnf <n> <m>          m只统计子句行
    1 -2 3 0               子句
    x 1 -2 0               XOR约束：所列文字的异或为真（也接受x1 -2 0写法）

PAF格式：
    p paf <n> <m>
    (x1 + x2 + 1) * (x3) = 0

每个方程一行，因子之间用*连接，因子是x<i>与常数1的和；末尾的"= 0"可省略。
"""

import re
from pathlib import Path
from typing import List, Optional, Tuple, Union

from .conversions import PafInstance
from .errors import DegreeError, DimacsError
from .f2 import AffineForm, AffineSubspace, EmptySubspace, LinearSystem
from .formula import Clause, CnfFormula, SubSatInstance
from ..utils.logger import logger

Instance = Union[SubSatInstance, PafInstance]

_VARIABLE_TOKEN = re.compile(r"x(\d+)")
_PRODUCT_TOKEN = re.compile(r"(x\d+){2,}")


def _content_lines(text: str) -> List[Tuple[int, str]]:
    """去掉空行与注释行，返回(行号, 内容)"""
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        lines.append((number, line))
    return lines


def _parse_header(lines: List[Tuple[int, str]], kind: str) -> Tuple[int, int]:
    if not lines:
        raise DimacsError("缺少文件头 p " + kind)
    number, line = lines[0]
    parts = line.split()
    if len(parts) != 4 or parts[0] != "p" or parts[1] != kind:
        raise DimacsError(f"文件头应为 'p {kind} <n> <m>': {line}", line_number=number)
    try:
        n, m = int(parts[2]), int(parts[3])
    except ValueError:
        raise DimacsError(f"文件头中的变量数和子句数必须是整数: {line}", line_number=number)
    if n < 0 or m < 0:
        raise DimacsError(f"文件头中的数值不能为负: {line}", line_number=number)
    return n, m


def _parse_literals(body: str, n: int, number: int) -> List[int]:
    """解析以0结尾的有符号整数序列"""
    try:
        values = [int(token) for token in body.split()]
    except ValueError:
        raise DimacsError(f"无法解析的文字: {body}", line_number=number)
    if not values or values[-1] != 0:
        raise DimacsError("行必须以0结尾", line_number=number)
    values = values[:-1]
    for value in values:
        if value == 0:
            raise DimacsError("0只能出现在行尾", line_number=number)
        if abs(value) > n:
            raise DimacsError(f"变量{abs(value)}超出声明的变量数{n}", line_number=number)
    return values


def xor_form(n: int, literals: List[int]) -> AffineForm:
    """XOR(literals) = 真 改写为方程 form = 0

    ¬x_v = x_v + 1，因此每个否定文字给常数项加1；再加1把“等于1”移到左边。
    """
    negations = sum(1 for value in literals if value < 0)
    return AffineForm.from_indices(n, (abs(value) - 1 for value in literals), (negations + 1) & 1)


def parse_cnf_records(text: str) -> Tuple[int, List[List[int]], List[List[int]]]:
    """读取p cnf文件中原样的子句行与XOR行（不做化简）

    Returns:
        Tuple: (变量数, 子句文字列表, XOR文字列表)

    Raises:
        DimacsError: 语法错误、变量编号越界或子句数与文件头不符
    """
    lines = _content_lines(text)
    n, m = _parse_header(lines, "cnf")
    clauses: List[List[int]] = []
    xors: List[List[int]] = []
    for number, line in lines[1:]:
        if line.startswith("p"):
            raise DimacsError("重复的文件头", line_number=number)
        if line.startswith("x"):
            xors.append(_parse_literals(line[1:], n, number))
        else:
            clauses.append(_parse_literals(line, n, number))
    if len(clauses) != m:
        raise DimacsError(f"文件头声明{m}个子句，实际读到{len(clauses)}个", line_number=lines[0][0])
    return n, clauses, xors


def parse_dimacs_xor(text: str) -> SubSatInstance:
    """解析DIMACS+XOR文本

    Args:
        text: 文件内容

    Returns:
        SubSatInstance: XOR约束不相容时子空间为EmptySubspace

    Raises:
        DimacsError: 语法错误或变量编号越界，附带行号
    """
    n, clause_records, xor_records = parse_cnf_records(text)
    clauses = [Clause.of(*values) for values in clause_records]
    xors = [xor_form(n, values) for values in xor_records]
    space = AffineSubspace.from_system(LinearSystem(n, tuple(xors)))
    if isinstance(space, EmptySubspace):
        logger.warning(f"XOR约束互相矛盾，实例平凡不可满足: {len(xors)}条约束")
    return SubSatInstance(CnfFormula(n, tuple(clauses)), space)


def _xor_line(row: AffineForm) -> Optional[str]:
    variables = [i + 1 for i in row.variables()]
    if not variables:
        # 0 = 0 省略；1 = 0 写成空XOR（异或为假，不可满足）
        return "x 0" if row.constant else None
    if row.constant == 0:
        # Σx = 0 ⇔ ¬x_first ⊕ Σ其余 = 1
        variables[0] = -variables[0]
    return "x " + " ".join(str(v) for v in variables) + " 0"


def serialize_dimacs_xor(inst: SubSatInstance) -> str:
    """输出DIMACS+XOR文本；A按简化行阶梯形逐行写成XOR约束"""
    lines = [f"p cnf {inst.n} {inst.phi.m}"]
    for clause in inst.phi.clauses:
        lines.append(" ".join(str(v) for v in [*clause.to_dimacs(), 0]))
    if isinstance(inst.space, EmptySubspace):
        rows = inst.space.source.rows if inst.space.source is not None else (AffineForm.constant_form(inst.n, 1),)
    else:
        rows = inst.space.rows
    for row in rows:
        line = _xor_line(row)
        if line is not None:
            lines.append(line)
    return "\n".join(lines) + "\n"


def _parse_factor(text: str, n: int, number: int) -> AffineForm:
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    indices = []
    constant = 0
    for token in (t.strip() for t in text.split("+")):
        if token in ("0", "1"):
            constant ^= int(token)
            continue
        if _PRODUCT_TOKEN.fullmatch(token):
            raise DegreeError(f"第{number}行: 因子中出现乘积项{token}，只接受仿射因子")
        match = _VARIABLE_TOKEN.fullmatch(token)
        if match is None:
            raise DimacsError(f"无法解析的因子项: {token!r}", line_number=number)
        index = int(match.group(1))
        if not 1 <= index <= n:
            raise DimacsError(f"变量x{index}超出声明的变量数{n}", line_number=number)
        indices.append(index - 1)
    return AffineForm.from_indices(n, indices, constant)


def parse_paf(text: str) -> PafInstance:
    """解析PAF方程组文本

    Raises:
        DimacsError: 语法错误
        DegreeError: 因子不是仿射形式
    """
    lines = _content_lines(text)
    n, m = _parse_header(lines, "paf")
    equations = []
    for number, line in lines[1:]:
        body = line
        if "=" in body:
            body, rhs = body.split("=", 1)
            if rhs.strip() != "0":
                raise DimacsError(f"方程右端必须为0: {line}", line_number=number)
        factors = [f for f in body.split("*")]
        if not any(f.strip() for f in factors):
            raise DimacsError("方程没有因子", line_number=number)
        equations.append(tuple(_parse_factor(f, n, number) for f in factors))
    if len(equations) != m:
        raise DimacsError(f"文件头声明{m}个方程，实际读到{len(equations)}个", line_number=lines[0][0])
    return PafInstance(n, tuple(equations))


def serialize_paf(paf: PafInstance) -> str:
    lines = [f"p paf {paf.n} {paf.m}"]
    for equation in paf.equations:
        lines.append(" * ".join(f"({factor})" for factor in equation) + " = 0")
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> Instance:
    """按文件头分派：p cnf → SubSatInstance，p paf → PafInstance"""
    lines = _content_lines(text)
    if lines and lines[0][1].split()[:2] == ["p", "paf"]:
        return parse_paf(text)
    return parse_dimacs_xor(text)


def read_instance(path: Union[str, Path]) -> Instance:
    """读取实例文件

    Raises:
        FileNotFoundError: 文件不存在
        DimacsError: 文件格式错误
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"实例文件不存在: {path}")
    text = path.read_text(encoding="utf-8")
    instance = parse_instance(text)
    logger.debug(f"读取实例: {path}")
    return instance


def serialize_instance(instance: Instance) -> str:
    if isinstance(instance, PafInstance):
        return serialize_paf(instance)
    return serialize_dimacs_xor(instance)
