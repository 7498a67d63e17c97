"""
分解服务 - 在线程中运行引擎计算，批量分解并发扇出，结果以字典返回
"""

import asyncio
import logging
from typing import List, Optional, Sequence

from core.config import EngineSettings
from core.engine import (
    BatchOutcome,
    TrinilCertificate,
    TriangularInput,
    decompose,
    decompose_one,
    decompose_triangular,
    verify,
)
from core.errors import ModulusMismatch, TrinilError
from core.matkit import MatZ
from modules.lab import classify_zm, modulus_admissibility_sweep
from modules.reproductions import run_reproductions

logger = logging.getLogger(__name__)


def _failure(e: Exception) -> dict:
    return {"success": False, "error": str(e), "error_type": type(e).__name__, "exception": e}


class DecompositionService:
    """分解服务"""

    def __init__(self, settings: Optional[EngineSettings] = None):
        """初始化分解服务

        Args:
            settings: 引擎配置，默认从环境变量读取
        """
        self.settings = settings or EngineSettings.from_env()

    def _seed(self, seed: Optional[int]) -> int:
        return self.settings.default_seed if seed is None else seed

    def _budget(self, budget: Optional[int]) -> int:
        return self.settings.attempt_budget if budget is None else budget

    async def decompose(self, A: MatZ, seed: Optional[int] = None, budget: Optional[int] = None) -> dict:
        """分解单个矩阵

        Args:
            A: ℤ_m 上的矩阵
            seed: 随机回退种子，默认取配置
            budget: 随机回退预算，默认取配置

        Returns:
            {"success": True, "certificate": ...} 或带 error / exception 的失败结果
        """
        seed = self._seed(seed)
        try:
            cert = await asyncio.to_thread(decompose, A, seed, self._budget(budget))
        except TrinilError as e:
            logger.error(f"❌ 分解失败 (n={A.n}, m={A.m}, seed={seed}): {e}")
            return _failure(e)
        logger.info(f"✅ 分解完成 (n={A.n}, m={A.m}, seed={seed}, provenance={list(cert.provenance)})")
        return {"success": True, "certificate": cert}

    async def decompose_triangular(self, T: TriangularInput) -> dict:
        try:
            cert = await asyncio.to_thread(decompose_triangular, T)
        except TrinilError as e:
            logger.error(f"❌ 三角分解失败: {e}")
            return _failure(e)
        return {"success": True, "certificate": cert}

    @staticmethod
    async def _bounded(
        semaphore: asyncio.Semaphore, index: int, A: MatZ, seed: int, budget: int
    ) -> BatchOutcome:
        async with semaphore:
            return await asyncio.to_thread(decompose_one, index, A, seed, budget)

    async def decompose_batch(
        self, matrices: Sequence[MatZ], seed: Optional[int] = None, budget: Optional[int] = None
    ) -> dict:
        """批量分解，并发度由 max_workers 限制，输出顺序与输入一致

        Returns:
            {"success": 全部成功, "outcomes": [BatchOutcome], "failed": 失败项下标}
        """
        moduli = {A.m for A in matrices}
        if len(moduli) > 1:
            return _failure(ModulusMismatch(f"批量输入需要同一模数，收到 {sorted(moduli)}"))

        seed, budget = self._seed(seed), self._budget(budget)
        semaphore = asyncio.Semaphore(self.settings.max_workers)
        outcomes: List[BatchOutcome] = list(
            await asyncio.gather(*(self._bounded(semaphore, i, A, seed, budget) for i, A in enumerate(matrices)))
        )
        failed = [o.index for o in outcomes if not o.ok]
        logger.info(f"📦 批量分解: {len(outcomes)} 项，失败 {len(failed)} 项")
        return {"success": not failed, "outcomes": outcomes, "failed": failed}

    async def verify(self, cert: TrinilCertificate) -> dict:
        """复核证书

        Returns:
            {"success": accepted, "report": VerificationReport}
        """
        report = await asyncio.to_thread(verify, cert)
        if report.accepted:
            logger.info("✅ 证书通过复核")
        else:
            logger.warning(f"⚠️ 证书未通过复核: {report.failure}")
        return {"success": report.accepted, "report": report}

    async def classify(self, m: int) -> dict:
        try:
            report = await asyncio.to_thread(classify_zm, m)
        except ValueError as e:
            return _failure(e)
        return {"success": True, "reports": [report]}

    async def sweep(self, limit: int) -> dict:
        """对 2..limit 逐个分类，并给出与 2^a·3^b 规律的对照"""
        try:
            rows = await asyncio.to_thread(modulus_admissibility_sweep, limit)
        except ValueError as e:
            return _failure(e)
        return {"success": all(row.agrees for row in rows), "rows": rows}

    async def reproduce(self, inject_fault: bool = False) -> dict:
        outcomes = await asyncio.to_thread(run_reproductions, inject_fault)
        return {"success": all(o.passed for o in outcomes), "outcomes": outcomes}
