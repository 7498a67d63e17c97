# Tests - Residue Arithmetic
import pytest
import os
import sys

from hypothesis import given, settings, strategies as st

# 添加项目根目录到路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from core.errors import InadmissibleModulus, ModulusMismatch, ModulusOutOfRange, NotAUnit
from core.zmod import (
    MODULUS_CAP,
    Residue,
    crt_combine,
    crt_idempotents,
    crt_split,
    make_modulus,
    scalar_arith,
    scalar_is_nilpotent,
    scalar_is_tripotent,
    scalar_nilpotency_index,
    scalar_pow,
    scalar_trinil_decompose,
)


def admissible_moduli(limit):
    return [m for m in range(2, limit + 1) if make_modulus(m).admissible]


def r(value, m):
    return Residue(value, make_modulus(m))


class TestModulus:
    """测试模数分类"""

    def test_twelve(self):
        """测试 12 = 4·3"""
        M = make_modulus(12)
        assert (M.k, M.l) == (2, 1)
        assert M.admissible
        assert M.radical == 6
        assert M.nil_index == 2

    def test_seventy_two(self):
        """测试 72 = 8·9"""
        M = make_modulus(72)
        assert (M.k, M.l) == (3, 2)
        assert M.admissible

    def test_five_is_flagged(self):
        """测试不可接受模数被标记而不是报错"""
        M = make_modulus(5)
        assert not M.admissible
        assert M.foreign_primes == (5,)

    def test_require_admissible_names_prime(self):
        """测试拒绝消息中列出多余素因子"""
        with pytest.raises(InadmissibleModulus) as info:
            make_modulus(10).require_admissible()
        assert info.value.foreign_primes == (5,)
        assert "5" in str(info.value)

    @pytest.mark.parametrize("m", [0, 1, -6, MODULUS_CAP + 1])
    def test_out_of_range(self, m):
        """测试超出范围的模数"""
        with pytest.raises(ModulusOutOfRange):
            make_modulus(m)

    def test_radical_values(self):
        """测试可接受模数的根只可能是 1, 2, 3, 6"""
        for m in admissible_moduli(216):
            assert make_modulus(m).radical in (2, 3, 6)


class TestScalarArith:
    """测试标量算术"""

    def test_inverse(self):
        """测试 5⁻¹ = 5 (mod 12)"""
        assert scalar_arith(r(5, 12), None, "inv") == r(5, 12)
        assert (r(5, 12) * r(5, 12)).value == 1

    def test_add(self):
        """测试 7 + 8 = 3 (mod 12)"""
        assert scalar_arith(r(7, 12), r(8, 12), "add") == r(3, 12)

    def test_non_unit(self):
        """测试 6 在 ℤ_12 中不可逆"""
        with pytest.raises(NotAUnit):
            scalar_arith(r(6, 12), None, "inv")
        with pytest.raises(ArithmeticError):
            r(6, 12).inverse()

    def test_mixed_moduli(self):
        """测试不同模数不能混合运算"""
        with pytest.raises(ModulusMismatch):
            r(1, 12) + r(1, 6)

    def test_negative_power(self):
        """测试负指数走逆元"""
        assert scalar_pow(r(5, 12), -1) == r(5, 12)
        assert scalar_pow(r(7, 12), 0) == r(1, 12)

    @given(
        st.sampled_from([6, 12, 36, 72, 216]),
        st.integers(min_value=-10**6, max_value=10**6),
        st.integers(min_value=-10**6, max_value=10**6),
    )
    @settings(max_examples=200, deadline=None)
    def test_matches_integer_arithmetic(self, m, a, b):
        """测试与整数运算取模一致"""
        x, y = r(a, m), r(b, m)
        assert (x + y).value == (a + b) % m
        assert (x - y).value == (a - b) % m
        assert (x * y).value == (a * b) % m
        assert (-x).value == (-a) % m


class TestScalarPredicates:
    """测试标量谓词"""

    def test_nilpotent_examples(self):
        """测试 6 幂零、4 不幂零 (mod 12)"""
        assert scalar_is_nilpotent(r(6, 12))
        assert not scalar_is_nilpotent(r(4, 12))
        assert scalar_is_nilpotent(r(0, 12))

    def test_nilpotency_index(self):
        """测试幂零指数"""
        assert scalar_nilpotency_index(r(6, 12)) == 2
        assert scalar_nilpotency_index(r(0, 12)) == 1
        assert scalar_nilpotency_index(r(4, 12)) is None
        assert scalar_nilpotency_index(r(2, 8)) == 3

    def test_tripotents_of_twelve(self):
        """测试 ℤ_12 恰有 9 个三幂等元"""
        found = {a for a in range(12) if scalar_is_tripotent(r(a, 12))}
        assert found == {0, 1, 3, 4, 5, 7, 8, 9, 11}

    def test_tripotent_edge(self):
        """测试 1 总是三幂等，2 mod 5 不是"""
        assert scalar_is_tripotent(r(1, 72))
        assert not scalar_is_tripotent(r(2, 5))

    def test_nilpotent_matches_brute_force(self):
        """测试幂零判定与穷举一致"""
        for m in admissible_moduli(216):
            for a in range(m):
                brute = any(pow(a, t, m) == 0 for t in range(1, m.bit_length() + 1))
                assert scalar_is_nilpotent(r(a, m)) == brute, (a, m)

    def test_cube_defect_is_nilpotent(self):
        """测试可接受模数中 a − a³ 总是幂零"""
        for m in admissible_moduli(216):
            for a in range(m):
                assert scalar_is_nilpotent(r(a - a**3, m))


class TestCRT:
    """测试中国剩余定理拆分"""

    def test_split_example(self):
        """测试 5 mod 6 → (1 mod 2, 2 mod 3)"""
        a2, a3 = crt_split(r(5, 6))
        assert (a2.value, a2.m) == (1, 2)
        assert (a3.value, a3.m) == (2, 3)

    def test_combine_example(self):
        """测试 combine(3 mod 4, 1 mod 3) = 7 mod 12"""
        assert crt_combine(r(3, 4), r(1, 3)) == r(7, 12)

    def test_zero(self):
        a2, a3 = crt_split(r(0, 12))
        assert a2.value == 0 and a3.value == 0

    def test_absent_components(self):
        """测试单因子模数缺失的分量为 None"""
        assert crt_split(r(5, 8))[1] is None
        assert crt_split(r(5, 9))[0] is None
        assert crt_combine(r(5, 8), None) == r(5, 8)

    def test_idempotents(self):
        """测试 u2 + u3 = 1，u2·u3 = 0"""
        assert crt_idempotents(make_modulus(12)) == (9, 4)
        assert crt_idempotents(make_modulus(8)) == (1, 0)
        assert crt_idempotents(make_modulus(27)) == (0, 1)
        for m in admissible_moduli(216):
            u2, u3 = crt_idempotents(make_modulus(m))
            assert (u2 + u3) % m == 1 and u2 * u3 % m == 0

    def test_rejects_inadmissible(self):
        with pytest.raises(InadmissibleModulus):
            crt_split(r(3, 10))

    def test_roundtrip_and_homomorphism(self):
        """测试 combine ∘ split = id，且保持加法与乘法"""
        for m in admissible_moduli(72):
            for a in range(m):
                x = r(a, m)
                assert crt_combine(*crt_split(x)) == x
                y = r(a * 5 + 1, m)
                for op in (lambda u, v: u + v, lambda u, v: u * v):
                    lhs = crt_split(op(x, y))
                    rhs = [op(u, v) if u is not None else None for u, v in zip(crt_split(x), crt_split(y))]
                    assert [c.value if c else None for c in lhs] == [c.value if c else None for c in rhs]


class TestScalarDecompose:
    """测试标量分解"""

    def test_seven_mod_twelve(self):
        """测试 7 = 1 + 6 (mod 12)"""
        e, w = scalar_trinil_decompose(r(7, 12))
        assert (e.value, w.value) == (1, 6)

    def test_zero(self):
        e, w = scalar_trinil_decompose(r(0, 36))
        assert (e.value, w.value) == (0, 0)

    def test_minus_one_in_three(self):
        """测试 ℤ_3 中 2 = −1 本身就是三幂等"""
        e, w = scalar_trinil_decompose(r(2, 3))
        assert (e.value, w.value) == (2, 0)

    def test_three_adic_class_two_maps_to_minus_one(self):
        """测试 3 侧剩余类 2 取 −1"""
        e, _ = scalar_trinil_decompose(r(5, 9))
        assert e.value == 8

    def test_exhaustive(self):
        """测试所有可接受 m ≤ 216 的每个元素"""
        for m in admissible_moduli(216):
            M = make_modulus(m)
            for a in range(m):
                e, w = scalar_trinil_decompose(r(a, m))
                assert scalar_is_tripotent(e)
                assert pow(w.value, M.nil_index, m) == 0
                assert (e + w).value == a
                assert e.m == m

    def test_matches_exhaustive_pair_search(self):
        """测试与 (三幂等, 幂零) 穷举一致：分解总存在"""
        for m in admissible_moduli(216):
            tripotents = [t for t in range(m) if pow(t, 3, m) == t]
            for a in range(m):
                assert any(scalar_is_nilpotent(r(a - t, m)) for t in tripotents)
