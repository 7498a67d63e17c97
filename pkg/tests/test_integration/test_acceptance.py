# Tests - Acceptance Runs
import pytest
import itertools
import os
import sys

import numpy as np

# 添加项目根目录到路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

import main as trinil_main
from core.config import EngineSettings
from core.engine import TriangularInput, decompose, decompose_batch, decompose_triangular, verify
from core.matkit import MatZ, is_idempotent, mat_crt_split, mat_pow, mat_reduce
from core.zmod import make_modulus
from main import TrinilSystem, decompose_rows
from modules.lab import oracle_decompose


def assert_certificate(cert):
    """证书的三项代数检查与余数可追溯性"""
    assert cert.E + cert.W == cert.A
    assert (cert.E @ cert.E @ cert.E) == cert.E
    assert mat_pow(cert.W, cert.nilpotency_exponent).is_zero()
    if cert.field_idempotent is not None:
        assert mat_reduce(cert.E, 2) == cert.field_idempotent
        E2, _ = mat_crt_split(cert.E)
        assert is_idempotent(E2)
    if cert.field_tripotent is not None:
        assert mat_reduce(cert.E, 3) == cert.field_tripotent
    assert verify(cert).accepted


@pytest.fixture
def system():
    """创建系统实例"""
    return TrinilSystem(EngineSettings(default_seed=0, attempt_budget=100_000, max_workers=4))


class TestExhaustive:
    """测试小环上的穷举"""

    @pytest.mark.slow
    def test_all_of_m2_z6(self):
        """测试 M₂(ℤ₆) 的全部 1296 个矩阵"""
        count = 0
        for entries in itertools.product(range(6), repeat=4):
            A = MatZ.from_rows([entries[:2], entries[2:]], 6)
            cert = decompose(A)
            assert_certificate(cert)
            assert mat_pow(cert.W, 2).is_zero()
            count += 1
        assert count == 1296

    def test_sample_against_oracle(self):
        """测试抽样矩阵的 E 落在穷举解集中"""
        rng = np.random.default_rng(6)
        for _ in range(12):
            A = MatZ.from_rows(rng.integers(0, 6, (2, 2)), 6)
            assert decompose(A).E in oracle_decompose(A)


class TestRandomSweeps:
    """测试随机矩阵"""

    @pytest.mark.slow
    @pytest.mark.parametrize("n,m", [(4, 12), (5, 24), (6, 36), (8, 72)])
    def test_sweep(self, n, m):
        """测试每个 (n, m) 500 个随机矩阵全部通过，且 W^{n·max(k,l)} = 0"""
        modulus = make_modulus(m)
        bound = n * modulus.nil_index
        rng = np.random.default_rng(1000 + m)
        for i in range(500):
            cert = decompose(MatZ.from_rows(rng.integers(0, m, (n, n)), m), seed=i)
            assert_certificate(cert)
            assert mat_pow(cert.W, bound).is_zero()

    def test_small_sweep(self):
        rng = np.random.default_rng(8)
        for m in (8, 72):
            for i in range(40):
                cert = decompose(MatZ.from_rows(rng.integers(0, m, (3, 3)), m), seed=i)
                assert_certificate(cert)

    @pytest.mark.slow
    def test_batch_of_1000(self):
        """测试 1000 个随机 M₄(ℤ₁₂) 全部得到通过复核的证书"""
        rng = np.random.default_rng(12)
        matrices = [MatZ.from_rows(rng.integers(0, 12, (4, 4)), 12) for _ in range(1000)]
        outcomes = decompose_batch(matrices, seed=0)
        assert len(outcomes) == 1000
        for outcome in outcomes:
            assert outcome.ok
            assert verify(outcome.certificate).accepted


class TestTriangularRing:
    """测试 T₃(ℤ₁₂)"""

    def test_random_triangular(self):
        """测试 200 个随机上三角矩阵"""
        rng = np.random.default_rng(3)
        for _ in range(200):
            T = np.triu(rng.integers(0, 12, (3, 3)))
            cert = decompose_triangular(TriangularInput.from_matrix(MatZ.from_rows(T, 12)))
            assert cert.E + cert.W == cert.A
            assert verify(cert).accepted


class TestSystemFlow:
    """测试系统门面的完整流程"""

    @pytest.mark.asyncio
    async def test_decompose_and_verify(self, system):
        result = await system.decompose_matrix(MatZ.from_rows([[1, 1], [1, 0]], 6))
        assert result["success"] is True
        verdict = await system.decomposer.verify(result["certificate"])
        assert verdict["report"].accepted

    @pytest.mark.asyncio
    async def test_many(self, system):
        """测试批量分解"""
        matrices = [MatZ.from_rows([[i, 2], [3, i + 1]], 24) for i in range(6)]
        result = await system.decompose_many(matrices, seed=4)
        assert result["success"] is True
        assert [o.certificate.seed for o in result["outcomes"]] == [4, 5, 6, 7, 8, 9]

    @pytest.mark.asyncio
    async def test_health_check(self, system):
        status = await system.health_check()
        assert status["status"] == "healthy"
        assert status["max_workers"] == 4

    @pytest.mark.asyncio
    async def test_reproduce(self, system):
        result = await system.reproduce()
        assert result["success"] is True

    @pytest.mark.asyncio
    async def test_decompose_rows(self, monkeypatch):
        """测试便捷函数"""
        monkeypatch.setattr(trinil_main, "_system_instance", None)
        result = await decompose_rows([[2, 3], [4, 5]], 72, seed=1)
        assert result["success"] is True
        assert result["certificate"].A == MatZ.from_rows([[2, 3], [4, 5]], 72)
