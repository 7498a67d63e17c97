# Tests - Ring Classifier and Exhaustive Oracle
import pytest
import os
import sys

# 添加项目根目录到路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from core.errors import EnumerationTooLarge
from core.matkit import MatZ, is_nilpotent, is_tripotent
from modules.lab import (
    REFUTER_BORDER,
    REFUTER_BORDER_INVERSE,
    classify_zm,
    field_converse_sweep,
    matrix_ring_census,
    modulus_admissibility_sweep,
    oracle_decompose,
    product_index_growth,
    refute_strongly_2_nil_clean_matrices,
)


class TestClassifier:
    """测试 ℤ_m 的环分类"""

    def test_six(self):
        """测试 ℤ_6 是三幂等环"""
        report = classify_zm(6)
        assert report.is_trinil_clean
        assert report.is_strongly_2_nil_clean
        assert report.is_tripotent_ring
        assert report.is_2_boolean
        assert report.witness is None

    def test_twelve(self):
        """测试 ℤ_12：trinil clean，但 2³ ≠ 2"""
        report = classify_zm(12)
        assert report.is_trinil_clean
        assert report.is_strongly_2_nil_clean
        assert not report.is_tripotent_ring
        assert report.witness == 2
        assert report.bounded_index_exponent == 2
        assert report.nilpotent_index_bound == 2

    def test_five(self):
        """测试 ℤ_5 不是 trinil clean，反例为 2"""
        report = classify_zm(5)
        assert not report.is_trinil_clean
        assert report.witness == 2
        assert report.witnesses["trinil_clean"] == 2
        assert not report.six_is_nilpotent

    def test_nil_clean_chain(self):
        """测试 ℤ_8 nil clean，ℤ_3 weakly nil clean 但不是 nil clean"""
        assert classify_zm(8).is_nil_clean
        three = classify_zm(3)
        assert three.is_weakly_nil_clean
        assert not three.is_nil_clean

    def test_to_dict(self):
        data = classify_zm(12).to_dict()
        assert data["m"] == 12
        assert data["trinil_clean"] is True
        assert data["tripotent_ring"] is False
        assert data["witness"] == 2

    def test_range(self):
        with pytest.raises(ValueError):
            classify_zm(1)
        with pytest.raises(ValueError):
            classify_zm(2**20 + 1)

    def test_implications(self):
        """测试 2..300 上的蕴含链"""
        for m in range(2, 301):
            report = classify_zm(m)
            assert report.implications_hold(), m
            assert report.jacobson_is_nil

    @pytest.mark.slow
    def test_modulus_law(self):
        """测试 ℤ_m trinil clean ⟺ m = 2^a·3^b（m ≤ 1000）"""
        rows = modulus_admissibility_sweep(1000)
        assert len(rows) == 999
        assert all(row.agrees for row in rows)

    def test_admissibility_table(self):
        rows = modulus_admissibility_sweep(12)
        clean = [row.m for row in rows if row.trinil_clean]
        assert clean == [2, 3, 4, 6, 8, 9, 12]

    def test_sweep_limit(self):
        with pytest.raises(ValueError):
            modulus_admissibility_sweep(10**4 + 1)


class TestOracle:
    """测试穷举 oracle"""

    def test_two_identity_over_five(self):
        """测试 GF(5) 上 2I₂ 不可分解"""
        A = MatZ.from_rows([[2, 0], [0, 2]], 5)
        assert oracle_decompose(A) == []

    def test_zero_matrix(self):
        """测试 A = 0 的解集包含 0"""
        solutions = oracle_decompose(MatZ.zeros(2, 6))
        assert MatZ.zeros(2, 6) in solutions

    def test_solutions_are_valid(self):
        A = MatZ.from_rows([[1, 1], [1, 0]], 6)
        solutions = oracle_decompose(A)
        assert solutions
        for E in solutions:
            assert is_tripotent(E)
            assert is_nilpotent(A - E)

    def test_too_large(self):
        with pytest.raises(EnumerationTooLarge):
            oracle_decompose(MatZ.zeros(3, 12))

    def test_census(self):
        """测试 M₂(ℤ₆) 全部可分解，M₂(ℤ₅) 不是"""
        six = matrix_ring_census(6, 2)
        assert six.total == 1296
        assert six.all_decomposable
        assert six.counterexample is None
        five = matrix_ring_census(5, 2)
        assert not five.all_decomposable
        assert five.counterexample is not None
        A = MatZ.from_rows(five.counterexample, 5)
        assert oracle_decompose(A) == []


class TestRefuter:
    """测试矩阵环不是 strongly 2-nil-clean 的反例"""

    def test_border_block(self):
        B = MatZ.from_rows(REFUTER_BORDER, 12)
        defect = B @ B @ B - B
        assert (defect @ MatZ.from_rows(REFUTER_BORDER_INVERSE, 12)).is_identity()

    @pytest.mark.parametrize("m,n", [(6, 2), (12, 3), (2, 4), (9, 5), (72, 6)])
    def test_defect_is_unit(self, m, n):
        """测试 A³ − A 可逆，因而不幂零"""
        evidence = refute_strongly_2_nil_clean_matrices(m, n)
        assert evidence.refutes
        assert evidence.A.to_rows()[0][:2] == [1, 1]
        assert evidence.A.to_rows()[1][:2] == [1, 0]
        assert not is_nilpotent(evidence.defect)

    def test_small_n(self):
        with pytest.raises(ValueError):
            refute_strongly_2_nil_clean_matrices(6, 1)


class TestConverse:
    """测试域上的逆命题"""

    def test_five(self):
        """测试 GF(5) 上 a = 2 的 2I₂ 没有分解"""
        witness = field_converse_sweep(5, 2)
        assert witness.a == 2
        assert witness.candidates == 625
        assert witness.confirmed

    def test_three_has_no_witness(self):
        assert field_converse_sweep(3, 2) is None
        assert field_converse_sweep(2, 3) is None

    def test_seven_scalar(self):
        witness = field_converse_sweep(7, 1)
        assert witness.confirmed

    def test_not_prime(self):
        with pytest.raises(ValueError):
            field_converse_sweep(6, 1)


class TestProductGrowth:
    """测试无穷积截断中幂零指数无界"""

    def test_growth(self):
        assert product_index_growth(5) == [(1, 1), (2, 2), (3, 3), (4, 4), (5, 5)]

    def test_each_factor_bounded(self):
        """测试每个有限因子都有统一的 (a − a³) 幂零指数"""
        for m in (8, 9, 72, 2**10):
            report = classify_zm(m)
            assert report.bounded_index_exponent <= report.nilpotent_index_bound
