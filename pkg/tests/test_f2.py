"""GF(2)线性代数测试"""

import itertools

import pytest

from subspace_sat.core.errors import EnumerationCapExceeded, F2Error
from subspace_sat.core.f2 import (
    AffineForm,
    AffineSubspace,
    BitVec,
    EmptySubspace,
    Implied,
    Inconsistent,
    LinearSystem,
    RrefResult,
    eliminate_variable,
    enumerate_points,
    implied_value,
    rref,
    solve_affine,
)
from subspace_sat.utils.rng import make_rng, random_bits


def _random_system(n: int, rows: int, seed: int) -> LinearSystem:
    rng = make_rng(seed)
    return LinearSystem(n, tuple(
        AffineForm(BitVec(n, random_bits(rng, n)), int(rng.integers(0, 2)))
        for _ in range(rows)
    ))


def _solutions(system: LinearSystem):
    return {bits for bits in range(1 << system.n) if system.is_satisfied_by(bits)}


class TestBitVec:
    """比特向量测试"""

    def test_from_list_and_back(self):
        """测试列表与打包整数的对应"""
        v = BitVec.from_list([1, 0, 1])
        assert v.bits == 0b101
        assert v.to_list() == [1, 0, 1]
        assert str(v) == "101"
        assert v.weight == 2
        assert v.support() == (0, 2)

    def test_xor_and_dot(self):
        """测试加法与内积"""
        a = BitVec.from_list([1, 1, 0])
        b = BitVec.from_list([0, 1, 1])
        assert (a ^ b).to_list() == [1, 0, 1]
        assert a.dot(b) == 1
        assert a.flip(2).to_list() == [1, 1, 1]
        assert a.with_bit(0, 1) == a

    def test_length_mismatch(self):
        """测试长度不一致时报错"""
        with pytest.raises(F2Error):
            BitVec(2, 1) ^ BitVec(3, 1)
        with pytest.raises(F2Error):
            BitVec(2, 0b100)
        with pytest.raises(F2Error):
            BitVec.from_list([0, 2])


class TestAffineForm:
    """仿射形式测试"""

    def test_evaluate(self):
        """测试求值与常数项"""
        form = AffineForm.from_indices(3, [0, 2], 1)
        assert form.evaluate(0b000) == 1
        assert form.evaluate(0b001) == 0
        assert form.evaluate(0b101) == 1
        assert str(form) == "x1 + x3 + 1"

    def test_repeated_indices_cancel(self):
        """重复下标按GF(2)相消"""
        form = AffineForm.from_indices(3, [1, 1, 2])
        assert form.variables() == (2,)

    def test_add(self):
        """测试形式相加"""
        a = AffineForm.variable(2, 0)
        b = AffineForm.variable(2, 1, negated=True)
        total = a + b
        assert total.mask == 0b11
        assert total.constant == 1
        assert (total + 1).constant == 0
        with pytest.raises(F2Error):
            a + AffineForm.variable(3, 0)

    def test_out_of_range(self):
        """测试坐标越界"""
        with pytest.raises(F2Error):
            AffineForm.from_indices(2, [2])


class TestRref:
    """简化行阶梯形测试"""

    def test_already_reduced(self):
        """{x1 = 0, x2 = 1}：秩2，主元为两个变量"""
        system = LinearSystem(2, (
            AffineForm.variable(2, 0),
            AffineForm.variable(2, 1) + 1,
        ))
        result = rref(system)
        assert isinstance(result, RrefResult)
        assert result.rank == 2
        assert result.pivots == (0, 1)

    def test_inconsistent(self):
        """{x1 + x2 = 0, x1 + x2 = 1}无解"""
        system = LinearSystem(2, (
            AffineForm.from_indices(2, [0, 1]),
            AffineForm.from_indices(2, [0, 1], 1),
        ))
        result = rref(system)
        assert isinstance(result, Inconsistent)
        assert result.row == 1

    @pytest.mark.parametrize("seed", range(10))
    def test_random_system_same_solutions(self, seed):
        """随机4×6方程组约化前后解集相同"""
        system = _random_system(6, 4, seed)
        result = rref(system)
        if isinstance(result, Inconsistent):
            assert _solutions(system) == set()
        else:
            assert _solutions(result.reduced) == _solutions(system)
            for pivot, row in zip(result.pivots, result.reduced.rows):
                # 主元列只出现在本行
                assert row.mask.bit_length() - 1 == pivot
                others = [r for r in result.reduced.rows if r is not row]
                assert all(not (r.mask >> pivot) & 1 for r in others)


class TestAffineSubspace:
    """仿射子空间测试"""

    def test_full_space(self):
        """F2^3的参数化：特解000，基为单位向量"""
        particular, basis = solve_affine(AffineSubspace.full(3))
        assert particular.bits == 0
        assert sorted(b.bits for b in basis) == [1, 2, 4]

    def test_single_equation(self):
        """{x1 + x2 = 1}：特解满足方程，核空间一维"""
        space = AffineSubspace.from_forms(2, [AffineForm.from_indices(2, [0, 1], 1)])
        particular, basis = solve_affine(space)
        assert particular[0] ^ particular[1] == 1
        assert len(basis) == 1
        assert basis[0].bits == 0b11

    def test_empty(self):
        """矛盾方程给出EmptySubspace"""
        space = AffineSubspace.from_forms(1, [AffineForm.variable(1, 0), AffineForm.variable(1, 0) + 1])
        assert isinstance(space, EmptySubspace)
        assert space.dim == -1
        assert not space.contains(0)
        with pytest.raises(F2Error):
            solve_affine(space)

    @pytest.mark.parametrize("seed", range(5))
    def test_random_codim_two(self, seed):
        """F2^5中随机余维2子空间恰有8个点且都在子空间内"""
        rng = make_rng(seed)
        while True:
            system = LinearSystem(5, tuple(
                AffineForm(BitVec(5, random_bits(rng, 5)), int(rng.integers(0, 2))) for _ in range(2)
            ))
            space = AffineSubspace.from_system(system)
            if isinstance(space, AffineSubspace) and space.codim == 2:
                break
        points = list(enumerate_points(space))
        assert len(points) == 8
        assert len({p.bits for p in points}) == 8
        assert all(system.is_satisfied_by(p) for p in points)

    def test_single_point(self):
        """余维n的子空间只含一个点"""
        forms = [AffineForm.variable(3, 0) + 1, AffineForm.variable(3, 1), AffineForm.variable(3, 2) + 1]
        space = AffineSubspace.from_forms(3, forms)
        assert [p.bits for p in enumerate_points(space)] == [0b101]

    def test_coefficients_roundtrip(self):
        """核系数与点一一对应"""
        space = AffineSubspace.from_forms(4, [AffineForm.from_indices(4, [0, 3], 1)])
        for c in range(1 << space.dim):
            point = space.point_from_coefficients(c)
            assert space.contains(point)
            assert space.coefficients_of(point).bits == c

    def test_enumeration_cap(self):
        """维数超过上限时拒绝枚举"""
        with pytest.raises(EnumerationCapExceeded):
            list(enumerate_points(AffineSubspace.full(5), cap=4))

    def test_intersect_and_fix(self):
        """求交与固定变量"""
        space = AffineSubspace.full(3).fix(0, 1)
        assert space.dim == 2
        assert all(p[0] == 1 for p in enumerate_points(space))
        assert isinstance(space.fix(0, 0), EmptySubspace)


class TestImpliedValue:
    """蕴含取值测试"""

    def test_simple(self):
        """A = {x1 = 1}时x1恒为1，x2自由"""
        space = AffineSubspace.from_forms(2, [AffineForm.variable(2, 0) + 1])
        assert implied_value(space, AffineForm.variable(2, 0)) == Implied.ONE
        assert implied_value(space, AffineForm.variable(2, 0, negated=True)) == Implied.ZERO
        assert implied_value(space, AffineForm.variable(2, 1)) == Implied.FREE

    @pytest.mark.parametrize("seed", range(10))
    def test_random_agrees_with_enumeration(self, seed):
        """随机子空间与形式：与逐点求值一致"""
        rng = make_rng(seed)
        space = AffineSubspace.from_system(_random_system(6, 3, seed))
        if isinstance(space, EmptySubspace):
            pytest.skip("随机方程组无解")
        form = AffineForm(BitVec(6, random_bits(rng, 6)), int(rng.integers(0, 2)))
        values = {form.evaluate(p) for p in enumerate_points(space)}
        expected = {frozenset({0}): Implied.ZERO, frozenset({1}): Implied.ONE, frozenset({0, 1}): Implied.FREE}
        assert implied_value(space, form) == expected[frozenset(values)]


class TestEliminateVariable:
    """消元测试"""

    def test_example(self):
        """{x1+x2=0, x1+x3=1}用第0行消去x1得{x2+x3=1}"""
        system = LinearSystem(3, (
            AffineForm.from_indices(3, [0, 1]),
            AffineForm.from_indices(3, [0, 2], 1),
        ))
        result = eliminate_variable(system, 0, 0)
        assert result.rows == (AffineForm.from_indices(3, [1, 2], 1),)

    def test_single_row(self):
        """单个方程消元后得到空方程组"""
        system = LinearSystem(2, (AffineForm.from_indices(2, [0, 1]),))
        assert len(eliminate_variable(system, 1, 0)) == 0

    def test_zero_coefficient(self):
        """变量不在该行时报错"""
        system = LinearSystem(2, (AffineForm.variable(2, 0),))
        with pytest.raises(F2Error):
            eliminate_variable(system, 1, 0)

    @pytest.mark.parametrize("seed", range(10))
    def test_projection(self, seed):
        """消元后的解集等于原解集在其余坐标上的投影"""
        rng = make_rng(seed)
        system = _random_system(5, 3, seed)
        row = int(rng.integers(0, 3))
        if system.rows[row].mask == 0:
            pytest.skip("该行没有变量")
        var = system.rows[row].variables()[0]
        reduced = eliminate_variable(system, var, row)
        keep_mask = ((1 << 5) - 1) & ~(1 << var)
        projected = {bits & keep_mask for bits in _solutions(system)}
        # 消元结果不含var，因此var取任意值都是解
        reduced_solutions = {bits & keep_mask for bits in _solutions(reduced)}
        assert projected == reduced_solutions


class TestGrayEnumeration:
    """枚举顺序测试"""

    def test_full_space_all_points(self):
        """F2^3给出8个不同的点"""
        points = [p.bits for p in enumerate_points(AffineSubspace.full(3))]
        assert sorted(points) == list(range(8))
        # 相邻两点只差一位
        for a, b in itertools.pairwise(points):
            assert (a ^ b).bit_count() == 1


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
