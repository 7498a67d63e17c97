"""
错误类型 - 三幂等分解引擎的类型化异常
"""

from typing import Optional, Sequence


class TrinilError(Exception):
    """引擎所有错误的基类"""


class ModulusOutOfRange(TrinilError, ValueError):
    """模数超出支持范围 (2 ≤ m ≤ 2^31 − 1)"""

    def __init__(self, m: int, cap: int):
        self.m = m
        self.cap = cap
        super().__init__(f"模数 {m} 超出范围 [2, {cap}]")


class InadmissibleModulus(TrinilError, ValueError):
    """模数含有 2、3 以外的素因子"""

    def __init__(self, m: int, foreign_primes: Sequence[int] = ()):
        self.m = m
        self.foreign_primes = tuple(foreign_primes)
        primes = ", ".join(str(p) for p in self.foreign_primes) or "?"
        super().__init__(
            f"模数 {m} 不是 2^k·3^l 形式 (多余素因子: {primes})"
        )


class NotAUnit(TrinilError, ArithmeticError):
    """请求了非单位元的逆"""

    def __init__(self, value: int, m: int):
        self.value = value
        self.m = m
        super().__init__(f"{value} 在 ℤ_{m} 中不可逆")


class DimensionMismatch(TrinilError, ValueError):
    """矩阵维数不一致"""


class ModulusMismatch(TrinilError, ValueError):
    """参与运算的对象模数不一致"""


class ShapeMismatch(TrinilError, ValueError):
    """块拆分与相似标准形的块结构不对齐"""


class NotCoprime(TrinilError):
    """两个多项式因子不互素"""


class DegenerateFactor(TrinilError):
    """多项式因子次数为 0"""


class NotAlmostIdempotent(TrinilError):
    """X² − X 不是幂零的，无法做幂等提升"""


class NotAlmostTripotent(TrinilError):
    """X³ − X 不是幂零的，无法做三幂等提升"""


class InternalVerificationFailure(TrinilError):
    """构造结果未通过复核（实现缺陷）"""

    def __init__(self, check: str, detail: str = ""):
        self.check = check
        self.detail = detail
        message = f"内部复核失败: {check}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)


class FallbackBudgetExhausted(TrinilError):
    """GF(2) 随机回退在预算内没有找到幂等分解

    调用方可以用更大的 attempt_budget 重试。
    """

    def __init__(self, block, seed: int, attempts: int):
        self.block = block
        self.seed = seed
        self.attempts = attempts
        super().__init__(
            f"随机回退预算耗尽: block={block}, seed={seed}, attempts={attempts}"
        )


class EnumerationTooLarge(TrinilError):
    """穷举规模超过硬上限"""

    def __init__(self, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(f"穷举规模 {size} 超过上限 {limit}")


class DocumentParseError(TrinilError, ValueError):
    """矩阵文档或证书无法解析"""

    def __init__(self, message: str, source: Optional[str] = None):
        self.source = source
        if source:
            message = f"{source}: {message}"
        super().__init__(message)
