# Tests - Decomposition Service
import pytest
import os
import sys

# 添加项目根目录到路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from core.config import EngineSettings
from core.engine import TriangularInput, verify
from core.errors import InadmissibleModulus
from core.matkit import MatZ
from core.zmod import make_modulus
from services.decomposition_service import DecompositionService


@pytest.fixture
def service():
    """创建分解服务"""
    return DecompositionService(EngineSettings(default_seed=5, attempt_budget=100_000, max_workers=2))


@pytest.mark.asyncio
async def test_decompose(service):
    """测试单个矩阵分解"""
    result = await service.decompose(MatZ.from_rows([[1, 1], [1, 0]], 12))
    assert result["success"] is True
    cert = result["certificate"]
    assert cert.seed == 5
    assert verify(cert).accepted


@pytest.mark.asyncio
async def test_decompose_inadmissible(service):
    """测试不可接受模数返回失败结果而不是抛出"""
    result = await service.decompose(MatZ.from_rows([[1]], 10))
    assert result["success"] is False
    assert result["error_type"] == "InadmissibleModulus"
    assert isinstance(result["exception"], InadmissibleModulus)
    assert "5" in result["error"]


@pytest.mark.asyncio
async def test_decompose_triangular(service):
    result = await service.decompose_triangular(TriangularInput(make_modulus(12), (7, 2, 0)))
    assert result["success"] is True
    assert result["certificate"].E == MatZ.from_rows([[1, 0, 0], [0, 8, 0], [0, 0, 0]], 12)


@pytest.mark.asyncio
async def test_batch_order(service):
    """测试并发批量分解保持输入顺序"""
    matrices = [MatZ.from_rows([[i, 1, 0], [0, i, 1], [1, 0, i]], 36) for i in range(8)]
    result = await service.decompose_batch(matrices, seed=100)
    assert result["success"] is True
    assert result["failed"] == []
    for i, outcome in enumerate(result["outcomes"]):
        assert outcome.index == i
        assert outcome.certificate.A == matrices[i]
        assert outcome.certificate.seed == 100 + i


@pytest.mark.asyncio
async def test_batch_empty(service):
    result = await service.decompose_batch([])
    assert result == {"success": True, "outcomes": [], "failed": []}


@pytest.mark.asyncio
async def test_batch_mixed_moduli(service):
    result = await service.decompose_batch([MatZ.from_rows([[1]], 6), MatZ.from_rows([[1]], 12)])
    assert result["success"] is False
    assert result["error_type"] == "ModulusMismatch"


@pytest.mark.asyncio
async def test_verify(service):
    result = await service.decompose(MatZ.from_rows([[2, 3], [4, 5]], 72))
    verdict = await service.verify(result["certificate"])
    assert verdict["success"] is True
    assert verdict["report"].failure is None


@pytest.mark.asyncio
async def test_classify(service):
    """测试 classify 返回报告列表"""
    result = await service.classify(12)
    assert result["success"] is True
    assert result["reports"][0].witness == 2

    bad = await service.classify(1)
    assert bad["success"] is False


@pytest.mark.asyncio
async def test_sweep(service):
    result = await service.sweep(30)
    assert result["success"] is True
    assert len(result["rows"]) == 29
