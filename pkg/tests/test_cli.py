"""命令行、调度器与实例分析器测试"""

import json
import logging
from pathlib import Path

import pytest

from subspace_sat.bench.harness import load_experiment
from subspace_sat.cli import EXIT_CODES, main, parse_params
from subspace_sat.config import Settings
from subspace_sat.controller.dispatcher import SolveDispatcher
from subspace_sat.controller.instance_analyzer import InstanceAnalyzer
from subspace_sat.core.conversions import PafInstance
from subspace_sat.core.dimacs import parse_dimacs_xor, parse_paf, read_instance
from subspace_sat.core.errors import FormulaError, ReductionError, SolverError
from subspace_sat.core.f2 import AffineForm, AffineSubspace, BitVec
from subspace_sat.core.formula import CnfFormula, SubSatInstance
from subspace_sat.core.models import SolverBudget, Verdict
from subspace_sat.core.report_schema import ReportSchemaValidator
from subspace_sat.reductions.generators import four_coloring_to_2paf, planted_instance
from subspace_sat.reductions.graphs import Graph
from subspace_sat.utils.logger import resolve_level, setup_logger
from subspace_sat.utils.rng import make_rng

K5_EDGES = "5 10\n0 1\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n"
TRIANGLE_EDGES = "3 3\n0 1\n1 2\n0 2\n"
INSTANCES = Path(__file__).resolve().parent.parent / "instances"


@pytest.fixture
def planted_file(tmp_path):
    """由gen子命令生成的2-CNF植入实例"""
    path = tmp_path / "planted.cnf"
    code = main(["gen", "--planted", "n=12", "k=2", "t=2", "--seed", "3", "--out", str(path)])
    assert code == 0
    return path


class TestSolveCommand:
    """solve子命令测试"""

    def test_k5_coloring_unsat(self, tmp_path):
        """K5的4-着色方程组用穷举判定为UNSAT，退出码20"""
        graph_path = tmp_path / "k5.edges"
        graph_path.write_text(K5_EDGES, encoding="utf-8")
        paf_path = tmp_path / "k5.paf"
        assert main(["reduce", "four-coloring", str(graph_path), "--out", str(paf_path)]) == 0
        assert main(["solve", str(paf_path), "--algo", "brute"]) == EXIT_CODES[Verdict.UNSAT] == 20

    def test_json_deterministic(self, planted_file, capsys):
        """相同种子的json报告逐字节一致"""
        argv = ["solve", str(planted_file), "--algo", "branch", "--seed", "7", "--format", "json"]
        assert main(argv) == 10
        first = capsys.readouterr().out
        assert main(argv) == 10
        second = capsys.readouterr().out
        assert first == second
        record = json.loads(first)
        assert ReportSchemaValidator("solve").validate(record)
        assert record["seed"] == 7
        assert "wall_time" not in record

    def test_witness_verifies(self, planted_file, capsys):
        """输出的v行是实例的解"""
        assert main(["solve", str(planted_file), "--algo", "codim", "--format", "json"]) == 10
        record = json.loads(capsys.readouterr().out)
        literals = [int(v) for v in record["witness"].split()[1:-1]]
        inst = read_instance(planted_file)
        assert inst.is_solution(BitVec.from_list([1 if v > 0 else 0 for v in literals]))

    def test_timing_flag(self, planted_file, capsys):
        main(["solve", str(planted_file), "--algo", "det2", "--format", "json", "--timing"])
        assert "wall_time" in json.loads(capsys.readouterr().out)

    def test_human_output(self, planted_file, capsys):
        assert main(["solve", str(planted_file), "--algo", "brute"]) == 10
        out = capsys.readouterr().out
        assert "s SATISFIABLE" in out
        assert out.rstrip().splitlines()[-1].startswith("v ")

    def test_unknown_exit_code(self, tmp_path):
        """随机算法在不可满足实例上耗尽预算：退出码30"""
        path = tmp_path / "unsat.cnf"
        path.write_text("p cnf 2 4\n1 2 0\n-1 2 0\n1 -2 0\n-1 -2 0\n", encoding="utf-8")
        assert main(["solve", str(path), "--algo", "ppz", "--max-iters", "5"]) == 30
        assert main(["solve", str(path), "--algo", "brute"]) == 20

    def test_output_file(self, planted_file, tmp_path):
        out = tmp_path / "reports" / "result.jsonl"
        assert main(["solve", str(planted_file), "--algo", "brute", "--format", "json", "--out", str(out)]) == 10
        assert json.loads(out.read_text(encoding="utf-8"))["verdict"] == "sat"

    def test_errors(self, tmp_path):
        """文件缺失、格式错误、参数不合法都返回1"""
        assert main(["solve", str(tmp_path / "missing.cnf")]) == 1
        bad = tmp_path / "bad.cnf"
        bad.write_text("p cnf 2 1\n1 5 0\n", encoding="utf-8")
        assert main(["solve", str(bad)]) == 1
        good = tmp_path / "good.cnf"
        good.write_text("p cnf 2 1\n1 2 0\n", encoding="utf-8")
        assert main(["solve", str(good), "--algo", "max-derand"]) == 1
        assert main(["solve", str(good), "--delta", "2"]) == 1

    def test_width_error(self, tmp_path):
        path = tmp_path / "wide.cnf"
        path.write_text("p cnf 3 1\n1 2 3 0\n", encoding="utf-8")
        assert main(["solve", str(path), "--algo", "det2"]) == 1

    def test_schema_violation_exit_code(self, planted_file, mocker, capsys):
        """报告未通过JSON Schema校验时返回1而不是抛出异常"""
        mocker.patch("subspace_sat.controller.report_writer.solve_record", return_value={"command": "solve"})
        assert main(["solve", str(planted_file), "--algo", "brute", "--format", "json"]) == 1
        assert capsys.readouterr().out == ""


class TestOtherCommands:
    """info / maxsat / reduce / gen子命令测试"""

    def test_gen_then_codim(self, tmp_path):
        """生成的实例用codim求解得到SAT，植入解写在注释行"""
        path = tmp_path / "g.cnf"
        assert main(["gen", "--planted", "n=14", "k=3", "t=2", "m=30", "--seed", "5", "--out", str(path)]) == 0
        text = path.read_text(encoding="utf-8")
        assert text.startswith("c planted seed=5\nc planted v ")
        inst = read_instance(path)
        assert inst.n == 14 and inst.t == 2 and inst.phi.m == 30
        planted_line = text.splitlines()[1].split()[3:-1]
        assert inst.is_solution(BitVec.from_list([1 if int(v) > 0 else 0 for v in planted_line]))
        assert main(["solve", str(path), "--algo", "codim"]) == 10

    def test_gen_reproducible(self, tmp_path):
        a, b = tmp_path / "a.cnf", tmp_path / "b.cnf"
        main(["gen", "n=10", "t=1", "--seed", "4", "--out", str(a)])
        main(["gen", "n=10", "t=1", "--seed", "4", "--out", str(b)])
        assert a.read_text(encoding="utf-8") == b.read_text(encoding="utf-8")

    def test_gen_paf(self, tmp_path):
        path = tmp_path / "p.paf"
        assert main(["gen", "--paf", "n=6", "m=6", "--out", str(path)]) == 0
        paf = read_instance(path)
        assert isinstance(paf, PafInstance)
        assert paf.m == 6 and paf.degree == 3
        assert main(["solve", str(path)]) == 10

    def test_gen_chain(self, tmp_path):
        """--chain只接受r，生成的实例可由branch求解"""
        path = tmp_path / "c.cnf"
        assert main(["gen", "--chain", "r=4", "--seed", "2", "--out", str(path)]) == 0
        inst = read_instance(path)
        assert inst.n == 7 and inst.t == 3 and inst.phi.m == 4
        assert main(["solve", str(path), "--algo", "branch", "--delta", "1e-9"]) == 10
        assert main(["gen", "--chain", "r=4", "k=3"]) == 1

    def test_gen_bad_params(self):
        assert main(["gen", "n=abc"]) == 1
        assert main(["gen", "--paf", "m=4"]) == 1
        assert main(["gen", "n=4", "q=1"]) == 1

    def test_info(self, planted_file, capsys):
        assert main(["info", str(planted_file), "--format", "json"]) == 0
        record = json.loads(capsys.readouterr().out)
        assert record["command"] == "info"
        assert record["n"] == 12 and record["t"] == 2 and record["k"] == 2
        assert record["recommended"] == "brute"

    def test_maxsat(self, planted_file, capsys):
        assert main(["maxsat", str(planted_file), "--format", "json"]) == 0
        record = json.loads(capsys.readouterr().out)
        assert ReportSchemaValidator("maxsat").validate(record)
        assert record["satisfied"] >= record["bound"]

    def test_maxsat_rejects_paf(self, tmp_path):
        path = tmp_path / "p.paf"
        path.write_text("p paf 1 1\n(x1) = 0\n", encoding="utf-8")
        assert main(["maxsat", str(path)]) == 1

    def test_reduce_clique(self, tmp_path):
        """三角形多色团 → 余维3的2-Sub-SAT，唯一解"""
        graph_path = tmp_path / "t.edges"
        graph_path.write_text(TRIANGLE_EDGES, encoding="utf-8")
        parts_path = tmp_path / "t.parts"
        parts_path.write_text("0\n1\n2\n", encoding="utf-8")
        out = tmp_path / "t.cnf"
        assert main(["reduce", "clique", str(graph_path), "--parts", str(parts_path), "--out", str(out)]) == 0
        inst = read_instance(out)
        assert inst.t == 3
        assert main(["solve", str(out), "--algo", "det2"]) == 10

    def test_reduce_clique_requires_parts(self, tmp_path):
        graph_path = tmp_path / "t.edges"
        graph_path.write_text(TRIANGLE_EDGES, encoding="utf-8")
        assert main(["reduce", "clique", str(graph_path)]) == 1

    def test_reduce_oxr_and_maxlin2(self, tmp_path):
        source = tmp_path / "src.cnf"
        source.write_text("p cnf 3 2\n1 2 3 0\n-1 2 -3 0\nx 1 2 0\nx 2 3 0\nx 1 3 0\n", encoding="utf-8")
        oxr_out, lin_out = tmp_path / "oxr.paf", tmp_path / "lin.paf"
        assert main(["reduce", "oxr", str(source), "--out", str(oxr_out)]) == 0
        assert main(["reduce", "maxlin2", str(source), "--out", str(lin_out)]) == 0
        oxr = read_instance(oxr_out)
        assert oxr.m == 2 and oxr.degree == 2
        lin = read_instance(lin_out)
        assert lin.m == 3 and lin.degree == 2

    def test_parse_params(self):
        assert parse_params(["n=3", "k = 2"]) == {"n": 3, "k": 2}
        with pytest.raises(ReductionError):
            parse_params(["n"])


class TestDispatcher:
    """求解调度器测试"""

    def test_paf_through_subsat_encoding(self):
        """PAF输入用brute求解时见证投影回原变量"""
        paf = parse_paf("p paf 2 1\n(x1 + 1) * (x2 + 1) = 0\n")
        result = SolveDispatcher().solve(paf, "brute")
        assert result.verdict == Verdict.SAT
        assert len(result.witness) == 2
        assert paf.is_solution(result.witness_vector())

    def test_k4_coloring(self):
        paf = four_coloring_to_2paf(Graph(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))))
        result = SolveDispatcher().solve(paf, "pafdeg", SolverBudget(seed=1))
        assert result.verdict == Verdict.SAT

    def test_route(self):
        inst = parse_dimacs_xor("p cnf 2 1\n1 2 0\n")
        dispatcher = SolveDispatcher()
        assert dispatcher.route(inst, "ppz") == "ppz"
        assert dispatcher.route(inst) == "brute"
        with pytest.raises(SolverError):
            dispatcher.route(inst, "max-derand")

    def test_maxsat_routes(self):
        inst = parse_dimacs_xor("p cnf 2 2\n1 2 0\n-1 0\n")
        dispatcher = SolveDispatcher()
        assert dispatcher.maxsat(inst, "max-sat34").satisfied == 2
        assert dispatcher.maxsat(inst, "max-rand", seed=3).algorithm == "max-rand"
        with pytest.raises(SolverError):
            dispatcher.maxsat(inst, "ppz")
        with pytest.raises(FormulaError):
            dispatcher.maxsat(parse_paf("p paf 1 1\n(x1) = 0\n"))


class TestInstanceAnalyzer:
    """算法推荐规则测试"""

    def test_trivial(self):
        space = AffineSubspace.from_forms(1, [AffineForm.variable(1, 0), AffineForm.variable(1, 0) + 1])
        analysis = InstanceAnalyzer().analyze(SubSatInstance(CnfFormula.from_dimacs(1, [[1]]), space))
        assert analysis["trivially_unsat"]
        assert analysis["recommended"] == "brute"
        assert analysis["t"] is None

    @pytest.mark.parametrize(
        "n, k, t, expected",
        [
            (10, 3, 2, "brute"),
            (40, 2, 2, "det2"),
            (40, 2, 10, "branch"),
            (40, 3, 2, "codim"),
            (40, 3, 10, "pluck"),
        ],
    )
    def test_rules(self, n, k, t, expected):
        inst, _ = planted_instance(n, k, 2 * n, t, make_rng(0))
        assert InstanceAnalyzer().recommend(inst) == expected

    def test_horn_flag(self):
        inst = parse_dimacs_xor("p cnf 2 2\n-1 2 0\n-2 0\n")
        assert InstanceAnalyzer().analyze(inst)["horn"]


class TestSampleInstances:
    """仓库自带的示例实例"""

    def test_k5_coloring(self):
        assert main(["solve", str(INSTANCES / "k5_coloring.paf"), "--algo", "brute"]) == 20

    def test_small_xor(self, capsys):
        assert main(["solve", str(INSTANCES / "small_xor.cnf"), "--algo", "brute"]) == 10
        assert capsys.readouterr().out.rstrip().splitlines()[-1] == "v 1 2 0"

    def test_branch_scaling_spec(self):
        experiment = load_experiment(INSTANCES / "branch_scaling.txt")
        assert experiment.grid["r"] == [4, 6, 8, 10]
        chain = load_experiment(INSTANCES / "branch_chain_scaling.txt")
        assert chain.generator == "chain" and chain.mode == "solve"


class TestSettings:
    """环境变量配置测试"""

    def test_defaults(self, monkeypatch, tmp_path):
        monkeypatch.chdir(tmp_path)
        settings = Settings()
        assert settings.enumeration_cap == 30
        assert settings.det2_backstop_t_cap == 3
        assert settings.log_file is None

    def test_env_override(self, monkeypatch, tmp_path):
        """SUBSAT_前缀的环境变量覆盖缺省值"""
        monkeypatch.chdir(tmp_path)
        monkeypatch.setenv("SUBSAT_ENUMERATION_CAP", "24")
        monkeypatch.setenv("SUBSAT_PAF_DENSITY", "3.5")
        settings = Settings()
        assert settings.enumeration_cap == 24
        assert settings.paf_density == 3.5

    def test_env_file(self, monkeypatch, tmp_path):
        monkeypatch.chdir(tmp_path)
        (tmp_path / ".env").write_text("SUBSAT_UNIQUE_CAP=12\n", encoding="utf-8")
        assert Settings().unique_cap == 12


class TestLogging:
    """日志配置测试"""

    def test_resolve_level(self):
        assert resolve_level("debug") == logging.DEBUG
        assert resolve_level(logging.WARNING) == logging.WARNING
        with pytest.raises(ValueError):
            resolve_level("loud")

    def test_file_handler(self, tmp_path):
        """日志同时写入文件，重复设置不会叠加处理器"""
        log_file = tmp_path / "logs" / "run.log"
        log = setup_logger("subspace_sat.test", "INFO", log_file)
        log = setup_logger("subspace_sat.test", "INFO", log_file)
        assert len(log.handlers) == 2
        log.info("求解完成")
        for handler in log.handlers:
            handler.flush()
        assert "INFO - 求解完成" in log_file.read_text(encoding="utf-8")

    def test_bad_log_level(self, planted_file):
        assert main(["solve", str(planted_file), "--algo", "brute", "--log-level", "loud"]) == 1


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
