"""
三幂等分解引擎 主入口
"""

from typing import List, Optional

from core.config import EngineSettings
from core.errors import DocumentParseError
from core.matkit import MatZ
from services.decomposition_service import DecompositionService
from services.document_service import DocumentService, MatrixDocument


class TrinilSystem:
    """
    三幂等分解引擎

    核心功能：
    1. 分解 - ℤ_m (m = 2^k·3^l) 上的矩阵分解为三幂等元 + 幂零元，并给出证书
    2. 复核 - 从头重新计算证书的每一项检查
    3. 分类 - 穷举判定 ℤ_m 的环性质
    4. 复现 - 打包运行正反例检查
    """

    def __init__(self, settings: Optional[EngineSettings] = None):
        """初始化系统

        Args:
            settings: 引擎配置，默认从环境变量读取
        """
        self.settings = settings or EngineSettings.from_env()
        self.documents: Optional[DocumentService] = None
        self.decomposer: Optional[DecompositionService] = None
        self._initialized = False

    async def initialize(self) -> None:
        """初始化所有服务"""
        if self._initialized:
            return
        self.documents = DocumentService()
        self.decomposer = DecompositionService(self.settings)
        self._initialized = True

    async def decompose_document(
        self,
        input_path: Optional[str] = None,
        output_path: Optional[str] = None,
        modulus: Optional[int] = None,
        seed: Optional[int] = None,
        budget: Optional[int] = None,
        fmt: str = "json",
    ) -> dict:
        """读取矩阵文档，分解并写出证书

        Args:
            input_path: 输入路径（None 为 stdin）
            output_path: 输出路径（None 为 stdout）
            modulus: 覆盖文档中的模数
            seed: 随机回退种子
            budget: 随机回退预算
            fmt: 证书格式 json | text

        Returns:
            分解结果
        """
        await self.initialize()

        try:
            doc = await self.documents.load_matrix(input_path, modulus_override=modulus)
        except DocumentParseError as e:
            return {"success": False, "error": str(e), "error_type": type(e).__name__, "exception": e}

        result = await self.decomposer.decompose(doc.to_matrix(), seed=seed, budget=budget)
        if not result["success"]:
            return result

        written = await self.documents.save_certificate(output_path, result["certificate"], fmt)
        return {**result, "path": written["path"]}

    async def verify_document(self, path: Optional[str] = None) -> dict:
        """读取并复核证书

        Returns:
            复核结果
        """
        await self.initialize()

        try:
            cert = await self.documents.load_certificate(path)
        except DocumentParseError as e:
            return {"success": False, "error": str(e), "error_type": type(e).__name__, "exception": e}
        return await self.decomposer.verify(cert)

    async def decompose_matrix(self, A: MatZ, seed: Optional[int] = None) -> dict:
        await self.initialize()
        return await self.decomposer.decompose(A, seed=seed)

    async def decompose_many(self, matrices: List[MatZ], seed: Optional[int] = None) -> dict:
        await self.initialize()
        return await self.decomposer.decompose_batch(matrices, seed=seed)

    async def classify(self, m: int) -> dict:
        await self.initialize()
        return await self.decomposer.classify(m)

    async def sweep(self, limit: int) -> dict:
        await self.initialize()
        return await self.decomposer.sweep(limit)

    async def reproduce(self, inject_fault: bool = False) -> dict:
        await self.initialize()
        return await self.decomposer.reproduce(inject_fault)

    async def health_check(self) -> dict:
        """健康检查

        Returns:
            系统状态
        """
        return {
            "status": "healthy",
            "initialized": self._initialized,
            "seed": self.settings.default_seed,
            "attempt_budget": self.settings.attempt_budget,
            "max_workers": self.settings.max_workers,
        }


# 全局实例
_system_instance: Optional[TrinilSystem] = None


async def get_system(settings: Optional[EngineSettings] = None) -> TrinilSystem:
    """获取系统实例（单例模式）

    Args:
        settings: 引擎配置（只在首次创建时生效）

    Returns:
        系统实例
    """
    global _system_instance

    if _system_instance is None:
        _system_instance = TrinilSystem(settings)
        await _system_instance.initialize()

    return _system_instance


async def decompose_rows(rows: List[List[int]], m: int, seed: Optional[int] = None) -> dict:
    """便捷函数：分解按行给出的矩阵

    Args:
        rows: 矩阵的行
        m: 模数
        seed: 随机回退种子

    Returns:
        分解结果
    """
    system = await get_system()
    n = len(rows)
    doc = MatrixDocument(m=m, n=n, entries=tuple(x for row in rows for x in row))
    return await system.decompose_matrix(doc.to_matrix(), seed=seed)


async def verify_file(path: str) -> dict:
    """便捷函数：复核证书文件

    Args:
        path: 证书路径

    Returns:
        复核结果
    """
    system = await get_system()
    return await system.verify_document(path)
