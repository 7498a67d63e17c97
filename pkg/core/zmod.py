"""
ℤ_m 剩余类算术 - 模数校验、标量谓词与标量分解
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Optional, Tuple

from core.errors import InadmissibleModulus, ModulusMismatch, ModulusOutOfRange, NotAUnit

logger = logging.getLogger(__name__)

# numpy int64 中间乘积不溢出的上限
MODULUS_CAP = 2**31 - 1

ScalarOp = Literal["add", "sub", "mul", "neg", "inv"]


def _factorize(m: int) -> dict:
    """试除分解（桌面规模模数）"""
    factors = {}
    d = 2
    while d * d <= m:
        while m % d == 0:
            factors[d] = factors.get(d, 0) + 1
            m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        factors[m] = factors.get(m, 0) + 1
    return factors


@dataclass(frozen=True)
class Modulus:
    """模数 m 及其 2^k·3^l 分解

    Attributes:
        m: 模数
        k: 2 的指数
        l: 3 的指数
        radical: m 的不同素因子之积
        admissible: m 是否只含素因子 2、3
        foreign_primes: 2、3 以外的素因子（升序）
    """

    m: int
    k: int
    l: int
    radical: int
    admissible: bool
    foreign_primes: Tuple[int, ...] = ()

    @property
    def two_power(self) -> int:
        return 2**self.k

    @property
    def three_power(self) -> int:
        return 3**self.l

    @property
    def nil_index(self) -> int:
        """ℤ_m 中幂零元的统一指数 max(k, l)"""
        return max(self.k, self.l)

    def require_admissible(self) -> "Modulus":
        """不可接受的模数在这里被拒绝

        Returns:
            自身（便于链式调用）

        Raises:
            InadmissibleModulus: m 含有 2、3 以外的素因子
        """
        if not self.admissible:
            raise InadmissibleModulus(self.m, self.foreign_primes)
        return self

    def residue(self, value: int) -> "Residue":
        return Residue(value, self)

    def __repr__(self) -> str:
        return f"Modulus(m={self.m}, k={self.k}, l={self.l})"


@lru_cache(maxsize=None)
def make_modulus(m: int) -> Modulus:
    """构造并分类模数

    不可接受的模数也会返回（admissible=False），由分解入口拒绝。

    Args:
        m: 正整数模数，2 ≤ m ≤ 2^31 − 1

    Returns:
        Modulus 实例

    Raises:
        ModulusOutOfRange: m 超出支持范围
    """
    m = int(m)
    if m < 2 or m > MODULUS_CAP:
        raise ModulusOutOfRange(m, MODULUS_CAP)

    factors = _factorize(m)
    k = factors.pop(2, 0)
    l = factors.pop(3, 0)
    foreign = tuple(sorted(factors))

    radical = 1
    for p in foreign:
        radical *= p
    if k:
        radical *= 2
    if l:
        radical *= 3

    return Modulus(
        m=m,
        k=k,
        l=l,
        radical=radical,
        admissible=not foreign,
        foreign_primes=foreign,
    )


@dataclass(frozen=True)
class Residue:
    """ℤ_m 中的元素，value 总是 [0, m) 中的规范代表"""

    value: int
    modulus: Modulus

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % self.modulus.m)

    @property
    def m(self) -> int:
        return self.modulus.m

    def _coerce(self, other) -> "Residue":
        if isinstance(other, Residue):
            if other.modulus.m != self.modulus.m:
                raise ModulusMismatch(f"ℤ_{self.m} 与 ℤ_{other.m} 不能混合运算")
            return other
        return Residue(other, self.modulus)

    def __add__(self, other) -> "Residue":
        return Residue(self.value + self._coerce(other).value, self.modulus)

    __radd__ = __add__

    def __sub__(self, other) -> "Residue":
        return Residue(self.value - self._coerce(other).value, self.modulus)

    def __rsub__(self, other) -> "Residue":
        return Residue(self._coerce(other).value - self.value, self.modulus)

    def __mul__(self, other) -> "Residue":
        return Residue(self.value * self._coerce(other).value, self.modulus)

    __rmul__ = __mul__

    def __neg__(self) -> "Residue":
        return Residue(-self.value, self.modulus)

    def __pow__(self, t: int) -> "Residue":
        return scalar_pow(self, t)

    def inverse(self) -> "Residue":
        if math.gcd(self.value, self.m) != 1:
            raise NotAUnit(self.value, self.m)
        return Residue(pow(self.value, -1, self.m), self.modulus)

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.m})"


def scalar_arith(a: Residue, b: Optional[Residue], kind: ScalarOp) -> Residue:
    """标量算术

    Args:
        a: 左操作数
        b: 右操作数（neg / inv 时忽略）
        kind: add | sub | mul | neg | inv

    Returns:
        规范剩余类

    Raises:
        NotAUnit: 对非单位元求逆
        ModulusMismatch: 模数不同
    """
    if kind == "neg":
        return -a
    if kind == "inv":
        return a.inverse()
    if b is None:
        raise ValueError(f"{kind} 需要两个操作数")
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise ValueError(f"未知运算: {kind}")


def scalar_pow(a: Residue, t: int) -> Residue:
    if t < 0:
        return scalar_pow(a.inverse(), -t)
    return Residue(pow(a.value, t, a.m), a.modulus)


def scalar_is_nilpotent(a: Residue) -> bool:
    """a 是否幂零：等价于 a ≡ 0 (mod radical(m))"""
    return a.value % a.modulus.radical == 0


def scalar_nilpotency_index(a: Residue) -> Optional[int]:
    """最小的 t ≥ 1 使 a^t = 0；a 不幂零时返回 None"""
    if not scalar_is_nilpotent(a):
        return None
    t, x = 1, a.value
    while x:
        x = x * a.value % a.m
        t += 1
    return t


def scalar_is_tripotent(a: Residue) -> bool:
    return pow(a.value, 3, a.m) == a.value


def crt_idempotents(modulus: Modulus) -> Tuple[int, int]:
    """CRT 分量幂等元 (u2, u3)：u2 ≡ 1 (2^k), u2 ≡ 0 (3^l)，u3 = 1 − u2

    Raises:
        InadmissibleModulus: 模数不可接受
    """
    modulus.require_admissible()
    if modulus.l == 0:
        return 1, 0
    if modulus.k == 0:
        return 0, 1
    a, b = modulus.two_power, modulus.three_power
    u2 = b * pow(b, -1, a) % modulus.m
    return u2, (1 - u2) % modulus.m


def crt_split(a: Residue) -> Tuple[Optional[Residue], Optional[Residue]]:
    """ℤ_m → ℤ_{2^k} × ℤ_{3^l}

    缺失的分量返回 None；单因子模数原样通过。

    Args:
        a: ℤ_m 元素

    Returns:
        (a mod 2^k, a mod 3^l)
    """
    modulus = a.modulus.require_admissible()
    a2 = Residue(a.value, make_modulus(modulus.two_power)) if modulus.k else None
    a3 = Residue(a.value, make_modulus(modulus.three_power)) if modulus.l else None
    return a2, a3


def crt_combine(a2: Optional[Residue], a3: Optional[Residue]) -> Residue:
    """crt_split 的逆

    Args:
        a2: ℤ_{2^k} 分量（可为 None）
        a3: ℤ_{3^l} 分量（可为 None）

    Returns:
        ℤ_{2^k·3^l} 中的元素
    """
    if a2 is None and a3 is None:
        raise ValueError("至少需要一个 CRT 分量")
    if a3 is None:
        return a2
    if a2 is None:
        return a3
    if a2.modulus.l or a3.modulus.k:
        raise ModulusMismatch(f"分量模数必须分别是 2^k 与 3^l，实际为 {a2.m}, {a3.m}")

    modulus = make_modulus(a2.m * a3.m)
    u2, u3 = crt_idempotents(modulus)
    return Residue(a2.value * u2 + a3.value * u3, modulus)


def scalar_trinil_decompose(a: Residue) -> Tuple[Residue, Residue]:
    """标量分解 a = e + w，e³ = e，w 幂零

    2 侧取 e ≡ a (mod 2) ∈ {0, 1}；3 侧取 a mod 3 ↦ {0 → 0, 1 → 1, 2 → −1}。

    Raises:
        InadmissibleModulus: 模数不可接受
    """
    a2, a3 = crt_split(a)

    e2 = Residue(a2.value % 2, a2.modulus) if a2 is not None else None
    e3 = None
    if a3 is not None:
        e3 = Residue((0, 1, -1)[a3.value % 3], a3.modulus)

    e = crt_combine(e2, e3)
    e = Residue(e.value, a.modulus)
    return e, a - e
