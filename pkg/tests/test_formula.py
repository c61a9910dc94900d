"""公式、拔除消元、等价转换与蕴含图测试"""

import itertools
from fractions import Fraction

import pytest

from subspace_sat.core.conversions import (
    PafInstance,
    affine_clause_to_subsat,
    paf_to_subsat,
    project_witness,
    subsat_to_paf,
    subsat_to_usa,
    to_affine_clause_form,
    usa_to_subsat,
)
from subspace_sat.core.errors import EmptyClauseProduced, FormulaError, PluckFailed, WidthError
from subspace_sat.core.f2 import AffineForm, AffineSubspace, BitVec, EmptySubspace
from subspace_sat.core.formula import (
    Clause,
    CnfFormula,
    Literal,
    SubSatInstance,
    count_solutions,
    enumerate_solutions,
    is_critical,
    isoperimetry_sum,
    pluck,
    pluck_and_eliminate,
)
from subspace_sat.core.implication import canonical_assignment, implication_graph, literal_node
from subspace_sat.reductions.generators import planted_instance
from subspace_sat.utils.rng import make_rng, random_bits


def _instance(n, clauses, forms=()):
    phi = CnfFormula.from_dimacs(n, clauses)
    return SubSatInstance(phi, AffineSubspace.from_forms(n, forms))


def _random_cnf(n: int, k: int, m: int, seed: int) -> CnfFormula:
    rng = make_rng(seed)
    clauses = []
    for _ in range(m):
        variables = rng.choice(n, size=k, replace=False)
        clauses.append(Clause(tuple(Literal(int(v), bool(rng.integers(0, 2))) for v in variables)))
    return CnfFormula(n, tuple(clauses))


def _solution_set(inst: SubSatInstance):
    return {p.bits for p in enumerate_solutions(inst)}


class TestClauseAndFormula:
    """子句与公式测试"""

    def test_literal_dimacs(self):
        """测试DIMACS文字编号"""
        lit = Literal.from_dimacs(-3)
        assert lit.variable == 2 and lit.negated
        assert lit.to_dimacs() == -3
        assert lit.complement().to_dimacs() == 3
        with pytest.raises(FormulaError):
            Literal.from_dimacs(0)

    def test_clause_normalization(self):
        """重复文字合并，文字按变量排序"""
        clause = Clause.of(2, 1, 2)
        assert clause.to_dimacs() == [1, 2]
        assert clause.width == 2

    def test_tautology_removed(self):
        """重言式子句在构造公式时删除"""
        phi = CnfFormula.from_dimacs(2, [[1, -1], [2]])
        assert phi.m == 1
        assert phi.k == 1

    def test_variable_out_of_range(self):
        """子句变量超出变量数"""
        with pytest.raises(FormulaError):
            CnfFormula.from_dimacs(2, [[3]])

    def test_evaluate(self):
        """测试求值与满足子句计数"""
        phi = CnfFormula.from_dimacs(2, [[1, 2], [-1]])
        assert phi.evaluate(0b10)
        assert not phi.evaluate(0b01)
        assert phi.satisfied_count(0b00) == 1

    def test_empty_clause(self):
        """含空子句的实例平凡不可满足"""
        inst = SubSatInstance.unrestricted(CnfFormula(2, (Clause(()),)))
        assert inst.trivially_unsat
        assert count_solutions(inst) == 0

    def test_dimension_mismatch(self):
        """公式与子空间维数不一致"""
        with pytest.raises(FormulaError):
            SubSatInstance(CnfFormula(2), AffineSubspace.full(3))


class TestCritical:
    """临界变量测试"""

    def test_unit_clause(self):
        """(x1)中x1在ā=1处临界"""
        phi = CnfFormula.from_dimacs(1, [[1]])
        assert is_critical(phi, BitVec(1, 1), 0)

    def test_not_critical(self):
        """(x1 ∨ x2)在ā=11处没有临界变量"""
        phi = CnfFormula.from_dimacs(2, [[1, 2]])
        point = BitVec(2, 0b11)
        assert not is_critical(phi, point, 0)
        assert not is_critical(phi, point, 1)

    def test_requires_solution(self):
        """非满足赋值上没有临界性"""
        phi = CnfFormula.from_dimacs(1, [[1]])
        with pytest.raises(FormulaError):
            is_critical(phi, BitVec(1, 0), 0)

    @pytest.mark.parametrize("seed", range(5))
    def test_random_agrees_with_flip(self, seed):
        """随机3-CNF：与直接翻转求值一致"""
        phi = _random_cnf(8, 3, 20, seed)
        solutions = [bits for bits in range(1 << 8) if phi.evaluate(bits)]
        if not solutions:
            pytest.skip("随机公式不可满足")
        point = BitVec(8, solutions[0])
        for var in range(8):
            assert is_critical(phi, point, var) == (not phi.evaluate(point.flip(var)))


class TestPluck:
    """拔除与消元测试"""

    def test_pluck_example(self):
        """从(x1 ∨ x2)(¬x2 ∨ x3)拔除x2得到两个变量上的(x1)(x2)"""
        phi = CnfFormula.from_dimacs(3, [[1, 2], [-2, 3]])
        plucked = pluck(phi, 1)
        assert plucked.n == 2
        assert [c.to_dimacs() for c in plucked.clauses] == [[1], [2]]

    def test_pluck_empty_clause(self):
        """拔除单位子句的变量产生空子句"""
        with pytest.raises(EmptyClauseProduced) as exc_info:
            pluck(CnfFormula.from_dimacs(1, [[1]]), 0)
        assert exc_info.value.clause_index == 0

    def test_pluck_and_eliminate_example(self):
        """A = {x1 + x2 = 1}拔除x1：子空间变为全空间，回代x1 = x2 + 1"""
        inst = _instance(3, [[1, 3]], [AffineForm.from_indices(3, [0, 1], 1)])
        reduced, trace = pluck_and_eliminate(inst, [0])
        assert reduced.n == 2
        assert reduced.t == 0
        assert trace.kept == (1, 2)
        assert trace.describe() == ["x1 = x2 + 1"]
        extended = trace.extend(BitVec(2, 0b01))
        assert extended.to_list() == [0, 1, 0]

    def test_pluck_outside_v_in(self):
        """待拔除变量不在V_in中时失败"""
        inst = _instance(3, [[1, 2]], [AffineForm.from_indices(3, [0, 1])])
        with pytest.raises(PluckFailed) as exc_info:
            pluck_and_eliminate(inst, [2])
        assert exc_info.value.variable == 2

    @pytest.mark.parametrize("seed", range(8))
    def test_random_extension(self, seed):
        """余维2的随机实例拔除两个变量后，结果的每个解回代后都是原实例的解"""
        rng = make_rng(seed)
        inst, _ = planted_instance(10, 3, 15, 2, rng)
        for subset in itertools.combinations(inst.v_in, 2):
            try:
                reduced, trace = pluck_and_eliminate(inst, subset)
            except (PluckFailed, EmptyClauseProduced):
                continue
            for solution in enumerate_solutions(reduced):
                assert inst.is_solution(trace.extend(solution))


class TestIsoperimetry:
    """点集的等周不等式测试"""

    def test_all_subsets_small(self):
        """n=3：所有非空S与所有V_out划分都满足和不小于1"""
        n = 3
        for size in range(1, 1 << (1 << n)):
            points = [p for p in range(1 << n) if (size >> p) & 1]
            for split in range(1 << n):
                v_out = [i for i in range(n) if (split >> i) & 1]
                assert isoperimetry_sum(points, v_out) >= 1

    @pytest.mark.slow
    def test_all_subsets_n4(self):
        """n=4穷举全部非空S与划分"""
        n = 4
        for size in range(1, 1 << (1 << n)):
            points = [p for p in range(1 << n) if (size >> p) & 1]
            for split in range(1 << n):
                v_out = [i for i in range(n) if (split >> i) & 1]
                assert isoperimetry_sum(points, v_out) >= 1

    def test_random_samples(self):
        """n=10随机抽样"""
        rng = make_rng(2024)
        for _ in range(200):
            count = int(rng.integers(1, 40))
            points = {random_bits(rng, 10) for _ in range(count)}
            v_out = [i for i in range(10) if rng.integers(0, 2)]
            assert isoperimetry_sum(points, v_out) >= 1

    @pytest.mark.slow
    def test_random_samples_1e4(self):
        """n=10，10^4个随机(S, V_out)"""
        rng = make_rng(2025)
        for _ in range(10_000):
            count = int(rng.integers(1, 200))
            points = {random_bits(rng, 10) for _ in range(count)}
            v_out = [i for i in range(10) if rng.integers(0, 2)]
            assert isoperimetry_sum(points, v_out) >= 1

    def test_full_cube_equals_one(self):
        """S为整个立方体时每个点的I_out为空，和恰为1"""
        assert isoperimetry_sum(range(8), [0, 1, 2]) == Fraction(1)

    def test_empty_set_rejected(self):
        with pytest.raises(FormulaError):
            isoperimetry_sum([], [0])


class TestConversions:
    """等价表示转换测试"""

    def test_subsat_to_paf_example(self):
        """(x1 ∨ x2)在F2^2上 → (x1+1)(x2+1) = 0"""
        inst = _instance(2, [[1, 2]])
        paf = subsat_to_paf(inst)
        assert paf.m == 1
        assert [str(f) for f in paf.equations[0]] == ["x1 + 1", "x2 + 1"]

    def test_empty_formula(self):
        """空公式：方程只来自A，解集为A"""
        inst = _instance(2, [], [AffineForm.from_indices(2, [0, 1], 1)])
        paf = subsat_to_paf(inst)
        assert paf.m == 1
        solutions = {bits for bits in range(4) if paf.is_solution(bits)}
        assert solutions == _solution_set(inst)

    def test_affine_clause_form_example(self):
        """Φ = (x1 ∨ x3), A = {x3 = x1 + x2} → Ψ = (y1 ∨ (y1 + y2))，r = 2"""
        inst = _instance(3, [[1, 3]], [AffineForm.from_indices(3, [0, 1, 2])])
        psi, trace = to_affine_clause_form(inst)
        assert psi.r == 2
        assert len(psi.clauses) == 1
        assert sorted(form.mask for form in psi.clauses[0]) == [0b01, 0b11]

    def test_single_point(self):
        """A为单点时Ψ定义在0个变量上，结论就是Φ在该点的值"""
        forms = [AffineForm.variable(2, 0) + 1, AffineForm.variable(2, 1)]
        sat = _instance(2, [[1]], forms)
        unsat = _instance(2, [[2]], forms)
        assert to_affine_clause_form(sat)[0].evaluate(0)
        assert to_affine_clause_form(unsat)[0].trivially_unsat

    @pytest.mark.parametrize("seed", range(10))
    def test_round_trips_preserve_solutions(self, seed):
        """随机实例在各种表示之间的解集一致"""
        rng = make_rng(seed)
        inst, _ = planted_instance(8, 3, 12, 2, rng)
        expected = _solution_set(inst)

        paf = subsat_to_paf(inst)
        assert {bits for bits in range(1 << 8) if paf.is_solution(bits)} == expected

        usa = subsat_to_usa(inst)
        assert {bits for bits in range(1 << 8) if usa.avoids(bits)} == expected
        assert {bits for bits in range(1 << 8) if usa_to_subsat(usa).evaluate(bits)} == expected

        psi = paf_to_subsat(paf)
        assert {bits for bits in range(1 << 8) if psi.evaluate(bits)} == expected

        psi_a, trace = to_affine_clause_form(inst)
        lifted = {trace.lift(c).bits for c in range(1 << psi_a.r) if psi_a.evaluate(c)}
        assert lifted == expected

        encoded = affine_clause_to_subsat(psi)
        projected = {project_witness(p, 8).bits for p in enumerate_solutions(encoded)}
        assert projected == expected
        assert count_solutions(encoded) == len(expected)

    def test_empty_space_conversions(self):
        """A为空时各表示都无解"""
        space = AffineSubspace.from_forms(1, [AffineForm.variable(1, 0), AffineForm.variable(1, 0) + 1])
        inst = SubSatInstance(CnfFormula(1), space)
        assert isinstance(space, EmptySubspace)
        assert not any(subsat_to_paf(inst).is_solution(b) for b in range(2))
        assert not any(subsat_to_usa(inst).avoids(b) for b in range(2))

    def test_paf_validation(self):
        """方程必须至少有一个因子"""
        with pytest.raises(FormulaError):
            PafInstance(2, ((),))


class TestImplicationGraph:
    """蕴含图与规范赋值测试"""

    def test_edges(self):
        """(x1 ∨ x2)给出边¬x1→x2与¬x2→x1"""
        graph = implication_graph(CnfFormula.from_dimacs(2, [[1, 2]]))
        x1, x2 = Literal(0), Literal(1)
        assert graph.graph.has_edge(literal_node(x1.complement()), literal_node(x2))
        assert graph.graph.has_edge(literal_node(x2.complement()), literal_node(x1))
        assert graph.graph.number_of_edges() == 2
        assert graph.is_skew_symmetric()

    def test_contradiction(self):
        """(x1)(¬x1)：x1与¬x1在同一强连通分量"""
        graph = implication_graph(CnfFormula.from_dimacs(1, [[1], [-1]]))
        assert not graph.satisfiable
        assert canonical_assignment(graph.phi) is None

    def test_width_error(self):
        with pytest.raises(WidthError):
            implication_graph(CnfFormula.from_dimacs(3, [[1, 2, 3]]))

    def test_simple_canonical(self):
        """(¬x1 ∨ x2)的规范赋值满足公式"""
        phi = CnfFormula.from_dimacs(2, [[-1, 2]])
        canonical = canonical_assignment(phi)
        assert canonical is not None
        assert phi.evaluate(canonical.assignment)
        assert len(canonical.depth) == 2

    def test_unused_variables_are_zero(self):
        """不出现在子句中的变量取0"""
        canonical = canonical_assignment(CnfFormula.from_dimacs(3, [[1]]))
        assert canonical.assignment.to_list() == [1, 0, 0]

    @pytest.mark.parametrize("seed", range(30))
    def test_random_2cnf(self, seed):
        """随机2-CNF：SCC判定与枚举一致，可满足时规范赋值满足公式"""
        rng = make_rng(seed)
        n = int(rng.integers(3, 11))
        phi = _random_cnf(n, 2, int(rng.integers(n, 3 * n)), seed)
        satisfiable = any(phi.evaluate(bits) for bits in range(1 << n))
        assert implication_graph(phi).satisfiable == satisfiable
        canonical = canonical_assignment(phi)
        if satisfiable:
            assert canonical is not None
            assert phi.evaluate(canonical.assignment)
        else:
            assert canonical is None

    @pytest.mark.parametrize("seed", range(40))
    def test_unique_solution_is_canonical(self, seed):
        """唯一解（所有变量临界）时规范赋值就是该解"""
        phi = _random_cnf(6, 2, 14, seed)
        solutions = [bits for bits in range(1 << 6) if phi.evaluate(bits)]
        if len(solutions) != 1:
            pytest.skip("不是唯一解实例")
        assert canonical_assignment(phi).assignment.bits == solutions[0]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
