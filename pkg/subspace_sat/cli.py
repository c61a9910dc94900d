"""命令行入口

    subspace-sat solve  INPUT [--algo ID] [--seed S] [--delta D] [--max-iters N] [--format json]
    subspace-sat info   INPUT
    subspace-sat maxsat INPUT [--algo max-derand|max-rand|max-sat34]
    subspace-sat reduce four-coloring|clique|oxr|maxlin2 INPUT [--parts FILE]
    subspace-sat gen    [--planted|--planted-unique|--paf] n=14 k=3 t=2
    subspace-sat bench  [SPEC] [--algo ID --grid r=8,10,12 --trials 200]

solve的退出码：10 可满足，20 不可满足，30 未知，1 出错。
"""

import argparse
import sys
import time
from pathlib import Path
from typing import Dict, List, Optional

from jsonschema import ValidationError as SchemaValidationError
from pydantic import ValidationError

from .bench.harness import (
    GRID_KEYS,
    build_experiment,
    load_experiment,
    resolve_cell,
    rows_to_csv,
    run_experiment,
    scaling_fit,
    write_csv,
)
from .config import get_settings
from .core.conversions import PafInstance
from .core.dimacs import parse_cnf_records, read_instance, serialize_instance, xor_form
from .core.errors import ReductionError, SolverError, SubsatError
from .core.models import ALGORITHM_IDS, MAXSAT_ALGORITHMS, OutputFormat, RunConfig, Verdict
from .controller.dispatcher import SolveDispatcher
from .controller.instance_analyzer import InstanceAnalyzer
from .controller.report_writer import ReportWriter
from .reductions.generators import (
    chain_instance,
    four_coloring_to_2paf,
    maxlin2_to_e2paf,
    multicolored_clique_to_2subsat,
    oxr_to_2paf,
    planted_instance,
    planted_paf,
)
from .reductions.graphs import read_graph, read_partitioned_graph
from .utils.logger import LOGGER_NAME, logger, setup_logger
from .utils.rng import make_rng

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CODES = {Verdict.SAT: 10, Verdict.UNSAT: 20, Verdict.UNKNOWN: 30}
BENCH_FLAGS = (
    "algorithm", "generator", "mode", "trials", "seed", "delta", "beta", "max_iterations", "workers", "timing", "out",
)


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("input", help="实例文件（p cnf 或 p paf）")
    parser.add_argument("--algo", dest="algorithm", choices=ALGORITHM_IDS, help="算法ID")
    parser.add_argument("--seed", type=int, default=0, help="64位随机种子")
    parser.add_argument("--delta", type=float, default=0.01, help="随机算法目标失败概率")
    parser.add_argument("--max-iters", dest="max_iterations", type=int, help="迭代次数硬上限")
    parser.add_argument("--nu", type=float, default=0.5, help="拔除阈值参数ν")
    parser.add_argument("--beta", type=float, default=1.0, help="降次指数参数β")
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], default="human", help="输出格式")
    parser.add_argument("--out", help="输出文件，缺省写到标准输出")
    parser.add_argument("--timing", action="store_true", help="json报告中包含耗时")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="subspace-sat", description="仿射子空间内的可满足性求解器")
    parser.add_argument("--log-level", help="日志级别，缺省读配置")
    sub = parser.add_subparsers(dest="command", required=True)

    _add_run_flags(sub.add_parser("solve", help="判定实例可满足性"))
    _add_run_flags(sub.add_parser("info", help="统计实例特征并推荐算法"))
    _add_run_flags(sub.add_parser("maxsat", help="Max-Sub-SAT近似"))

    reduce = sub.add_parser("reduce", help="把源问题归约为Sub-SAT / PAF实例")
    reduce.add_argument("kind", choices=["four-coloring", "clique", "oxr", "maxlin2"], help="源问题")
    reduce.add_argument("input", help="源问题文件：图的边表，或p cnf文件（oxr用子句行，maxlin2用XOR行）")
    reduce.add_argument("--parts", help="clique的划分文件，每行一个部分")
    reduce.add_argument("--out", help="输出文件")

    gen = sub.add_parser("gen", help="生成带植入解的随机实例")
    kind = gen.add_mutually_exclusive_group()
    kind.add_argument("--planted", dest="generator", action="store_const", const="planted")
    kind.add_argument("--planted-unique", dest="generator", action="store_const", const="planted-unique")
    kind.add_argument("--paf", dest="generator", action="store_const", const="paf")
    kind.add_argument("--chain", dest="generator", action="store_const", const="chain")
    gen.add_argument("params", nargs="*", help="key=value参数：n k m t（--paf时为n m degree，--chain时为r）")
    gen.add_argument("--seed", type=int, default=0, help="随机种子")
    gen.add_argument("--out", help="输出文件")
    gen.set_defaults(generator="planted")

    bench = sub.add_parser("bench", help="运行基准实验并输出CSV")
    bench.add_argument("spec", nargs="?", help="key=value格式的实验配置文件")
    bench.add_argument("--algo", dest="algorithm", help="算法ID")
    bench.add_argument("--generator", help="planted、planted-unique或chain")
    bench.add_argument("--mode", help="iteration或solve")
    bench.add_argument("--grid", action="append", default=[], help="网格参数，例如 r=8,10,12，可重复")
    bench.add_argument("--trials", type=int, help="每个单元的试验次数")
    bench.add_argument("--seed", type=int, help="实验种子")
    bench.add_argument("--delta", type=float, help="solve模式的目标失败概率")
    bench.add_argument("--beta", type=float, help="pafdeg的降次指数参数β")
    bench.add_argument("--max-iters", dest="max_iterations", type=int, help="solve模式的迭代上限")
    bench.add_argument("--workers", type=int, help="并行进程数")
    bench.add_argument("--timing", action="store_true", default=None, help="输出耗时列")
    bench.add_argument("--fit", metavar="PARAM", help="按该参数拟合迭代次数增长率")
    bench.add_argument("--out", help="CSV输出文件")
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        input=args.input,
        algorithm=args.algorithm,
        seed=args.seed,
        delta=args.delta,
        max_iterations=args.max_iterations,
        nu=args.nu,
        beta=args.beta,
        format=args.format,
        out=args.out,
        timing=args.timing,
    )


def _output_path(out: Optional[str]) -> Optional[Path]:
    return Path(out) if out else None


def solve_command(config: RunConfig) -> int:
    """求解并输出报告，返回退出码

    见证在输出前对解析得到的实例重新校验。
    """
    instance = read_instance(config.input)
    if config.algorithm in MAXSAT_ALGORITHMS:
        raise SolverError(f"{config.algorithm}是近似算法，请使用maxsat子命令", algorithm=config.algorithm)
    result = SolveDispatcher().solve(instance, config.algorithm, config.budget())
    if result.verdict == Verdict.SAT and not instance.is_solution(result.witness_vector()):
        raise SolverError("见证未通过校验", algorithm=result.stats.algorithm)
    writer = ReportWriter(config.format, config.timing)
    writer.emit(writer.format_solve(result, config.input), _output_path(config.out))
    logger.info(f"求解结论: {result.verdict.value}")
    return EXIT_CODES[result.verdict]


def info_command(config: RunConfig) -> int:
    instance = read_instance(config.input)
    if isinstance(instance, PafInstance):
        analysis = {"n": instance.n, "m": instance.m, "degree": instance.degree, "recommended": "pafdeg"}
    else:
        analysis = InstanceAnalyzer().analyze(instance)
    writer = ReportWriter(config.format)
    writer.emit(writer.format_analysis(analysis, config.input), _output_path(config.out))
    return EXIT_OK


def maxsat_command(config: RunConfig) -> int:
    instance = read_instance(config.input)
    algorithm = config.algorithm or "max-derand"
    start = time.perf_counter()
    result = SolveDispatcher().maxsat(instance, algorithm, config.seed)
    wall_time = time.perf_counter() - start
    seed = config.seed if algorithm == "max-rand" else None
    writer = ReportWriter(config.format, config.timing)
    writer.emit(writer.format_maxsat(result, config.input, seed, wall_time), _output_path(config.out))
    return EXIT_OK


def reduce_command(kind: str, input_path: str, parts: Optional[str] = None, out: Optional[str] = None) -> int:
    """运行归约并写出实例文本"""
    if kind == "four-coloring":
        instance = four_coloring_to_2paf(read_graph(input_path))
    elif kind == "clique":
        if not parts:
            raise ReductionError("clique归约需要--parts划分文件")
        instance = multicolored_clique_to_2subsat(read_partitioned_graph(input_path, parts))
    else:
        n, clauses, xors = parse_cnf_records(Path(input_path).read_text(encoding="utf-8"))
        if kind == "oxr":
            instance = oxr_to_2paf(n, [tuple(values) for values in clauses])
        else:
            instance = maxlin2_to_e2paf([xor_form(n, values) for values in xors])
    logger.info(f"{kind}归约完成: n={instance.n}, m={instance.m if isinstance(instance, PafInstance) else instance.phi.m}")
    ReportWriter.emit(serialize_instance(instance), _output_path(out))
    return EXIT_OK


def parse_params(tokens: List[str]) -> Dict[str, int]:
    """解析 key=value 形式的整数参数"""
    params: Dict[str, int] = {}
    for token in tokens:
        key, sep, value = token.partition("=")
        if not sep:
            raise ReductionError(f"参数应为key=value: {token}")
        try:
            params[key.strip()] = int(value)
        except ValueError:
            raise ReductionError(f"参数{key}必须是整数: {value}")
    return params


def gen_command(generator: str, tokens: List[str], seed: int = 0, out: Optional[str] = None) -> int:
    """生成实例；植入解写在注释行 c planted 中"""
    params = parse_params(tokens)
    seed = params.pop("seed", seed)
    rng = make_rng(seed)
    if generator == "paf":
        unknown = set(params) - {"n", "m", "degree"}
        if unknown or "n" not in params:
            raise ReductionError(f"--paf需要参数n，可选m、degree，收到: {sorted(params)}")
        n = params["n"]
        instance, planted = planted_paf(n, params.get("m", 2 * n), params.get("degree", 3), rng)
    elif generator == "chain":
        cell = resolve_cell(params, "chain")
        instance, planted = chain_instance(cell["r"], rng)
    else:
        unknown = set(params) - set(GRID_KEYS) - {"unique"}
        if unknown:
            raise ReductionError(f"未知参数: {sorted(unknown)}")
        unique = bool(params.pop("unique", 0)) or generator == "planted-unique"
        cell = resolve_cell(params)
        instance, planted = planted_instance(cell["n"], cell["k"], cell["m"], cell["t"], rng, unique=unique)
    literals = " ".join(str(i + 1) if bit else str(-(i + 1)) for i, bit in enumerate(planted))
    header = f"c planted seed={seed}\nc planted v {literals} 0\n"
    ReportWriter.emit(header + serialize_instance(instance), _output_path(out))
    return EXIT_OK


def bench_command(args: argparse.Namespace) -> int:
    """读取实验配置（文件与命令行参数合并，命令行优先），运行并输出CSV"""
    if args.spec:
        experiment = load_experiment(args.spec)
        data = experiment.model_dump(exclude_none=True)
    else:
        data = {}
    grid = dict(data.get("grid", {}))
    for item in args.grid:
        key, _, values = item.partition("=")
        grid[key.strip()] = [int(v) for v in values.split(",") if v.strip()]
    if grid:
        data["grid"] = grid
    for key in BENCH_FLAGS:
        value = getattr(args, key, None)
        if value is not None:
            data["output" if key == "out" else key] = value
    experiment = build_experiment(data)

    rows = run_experiment(experiment)
    if experiment.output:
        write_csv(rows, experiment.output)
    else:
        print(rows_to_csv(rows), end="")
    if args.fit:
        fit = scaling_fit(rows, args.fit)
        logger.info(
            f"拟合: log2(平均迭代次数) ≈ {fit.slope:.4f}·{fit.parameter} + {fit.intercept:.4f}, "
            f"增长率 {fit.growth_ratio:.4f}"
        )
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """解析命令行并执行子命令，返回退出码"""
    args = build_parser().parse_args(argv)
    settings = get_settings()
    try:
        setup_logger(LOGGER_NAME, args.log_level or settings.log_level, settings.log_file)
    except ValueError as e:
        logger.error(f"执行失败: {e}")
        return EXIT_ERROR

    try:
        if args.command == "reduce":
            return reduce_command(args.kind, args.input, args.parts, args.out)
        if args.command == "gen":
            return gen_command(args.generator, args.params, args.seed, args.out)
        if args.command == "bench":
            return bench_command(args)
        config = _run_config(args)
        if args.command == "info":
            return info_command(config)
        if args.command == "maxsat":
            return maxsat_command(config)
        return solve_command(config)
    except (SubsatError, ValidationError, SchemaValidationError) as e:
        logger.error(f"执行失败: {getattr(e, 'message', e)}")
        return EXIT_ERROR
    except (OSError, ValueError) as e:
        logger.error(f"执行失败: {e}")
        return EXIT_ERROR


def run() -> None:
    """console script入口"""
    sys.exit(main())
