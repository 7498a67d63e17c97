"""
幂等 / 三幂等提升 - 把剩余域上的分解提升到 ℤ_{2^k}、ℤ_{3^l}
"""

import logging
from dataclasses import dataclass
from typing import Tuple

from core.errors import (
    InternalVerificationFailure,
    ModulusMismatch,
    NotAlmostIdempotent,
    NotAlmostTripotent,
)
from core.matkit import MatGF, MatZ, gf_is_nilpotent, is_idempotent, is_nilpotent, is_tripotent, mat_lift

logger = logging.getLogger(__name__)

# 超过这个次数说明前提被破坏，而不是收敛慢
NEWTON_ITERATION_CAP = 64


@dataclass(frozen=True, eq=False)
class LiftTrace:
    """Newton 提升的执行记录

    Attributes:
        iterations: 迭代次数
        initial_defect_exponent: 初始缺陷 δ = X² − X 的幂零见证指数 N
        final: 提升得到的幂等元
    """

    iterations: int
    initial_defect_exponent: int
    final: MatZ


def newton_idempotent_lift(X: MatZ, check_contraction: bool = True) -> Tuple[MatZ, LiftTrace]:
    """迭代 e ← 3e² − 2e³，直到 e² = e

    结果是 X 的多项式，因此与 X 可交换，e − X 幂零。

    Args:
        X: 缺陷 X² − X 幂零的矩阵
        check_contraction: 每一步断言新缺陷等于 δ²(4δ − 3)

    Returns:
        (e, LiftTrace)

    Raises:
        NotAlmostIdempotent: X² − X 不幂零
        InternalVerificationFailure: 收缩律不成立或超过迭代上限
    """
    defect = X @ X - X
    witness = is_nilpotent(defect)
    if not witness:
        raise NotAlmostIdempotent(f"X² − X 在 ℤ_{X.m} 上不幂零")

    identity = X.identity_like()
    e = X
    iterations = 0
    while not defect.is_zero():
        if iterations >= NEWTON_ITERATION_CAP:
            raise InternalVerificationFailure("newton_lift", f"超过 {NEWTON_ITERATION_CAP} 次迭代")
        e_sq = e @ e
        e = e_sq.scale(3) - (e_sq @ e).scale(2)
        new_defect = e @ e - e
        if check_contraction:
            expected = defect @ defect @ (defect.scale(4) - identity.scale(3))
            if new_defect != expected:
                raise InternalVerificationFailure("newton_lift", "δ′ ≠ δ²(4δ − 3)")
        defect = new_defect
        iterations += 1

    logger.debug(f"newton_idempotent_lift: m={X.m}, n={X.n}, N={witness.exponent}, iterations={iterations}")
    return e, LiftTrace(iterations=iterations, initial_defect_exponent=witness.exponent or 0, final=e)


def _require_odd(X: MatZ) -> None:
    if X.modulus.k:
        raise ModulusMismatch(f"3-adic 提升需要奇模数（2 可逆），收到 {X.m}")


def _check_almost_tripotent(X: MatZ) -> None:
    if not is_nilpotent(X @ X @ X - X):
        raise NotAlmostTripotent(f"X³ − X 在 ℤ_{X.m} 上不幂零")


def _difference_of_commuting(p: MatZ, q: MatZ, label: str) -> MatZ:
    if p @ q != q @ p:
        raise InternalVerificationFailure(label, "两个幂等元不可交换")
    E = p - q
    if not is_tripotent(E):
        raise InternalVerificationFailure(label, "(p − q)³ ≠ p − q")
    return E


def tripotent_lift_3adic(X: MatZ) -> MatZ:
    """ℤ_{3^l} 上的三幂等提升（半对构造）

    P = (X² + X)/2 与 Q = (X² − X)/2 的幂等缺陷都是 X³ − X 的倍数，
    分别 Newton 提升为可交换幂等元 p、q，返回 E = p − q。

    Args:
        X: 奇模数上 X³ − X 幂零的矩阵

    Returns:
        E：E³ = E，X − E 幂零，E ≡ X (mod 3)

    Raises:
        NotAlmostTripotent: X³ − X 不幂零
        ModulusMismatch: 模数为偶数
    """
    _require_odd(X)
    _check_almost_tripotent(X)

    h = pow(2, -1, X.m)
    X_sq = X @ X
    p, _ = newton_idempotent_lift((X_sq + X).scale(h))
    q, _ = newton_idempotent_lift((X_sq - X).scale(h))
    return _difference_of_commuting(p, q, "tripotent_lift")


def tripotent_lift_3adic_direct_pair(X: MatZ) -> MatZ:
    """另一种配对：e = I − X，f = lift(−2e²)，g = lift(e + 2e²)，E = (I − f) − g

    与 tripotent_lift_3adic 的结果模 3 一致，用于交叉检验。
    """
    _require_odd(X)
    _check_almost_tripotent(X)

    identity = X.identity_like()
    e = identity - X
    e_sq = e @ e
    f, _ = newton_idempotent_lift(e_sq.scale(-2))
    g, _ = newton_idempotent_lift(e + e_sq.scale(2))
    return _difference_of_commuting(identity - f, g, "tripotent_lift_pair")


def idempotent_lift_2adic(A: MatZ, Ebar: MatGF) -> Tuple[MatZ, MatZ]:
    """把 GF(2) 上的幂等分解提升到 ℤ_{2^k}

    Args:
        A: ℤ_{2^k} 上的矩阵
        Ebar: GF(2) 上的幂等元，(A mod 2) − Ebar 幂零

    Returns:
        (E, W)：E² = E，E ≡ Ebar (mod 2)，W = A − E 幂零

    Raises:
        NotAlmostIdempotent: 前提不成立
        ModulusMismatch: 模数不是 2 的幂
    """
    if A.modulus.l or not A.modulus.k:
        raise ModulusMismatch(f"2-adic 提升需要模数 2^k，收到 {A.m}")
    if Ebar.p != 2 or not is_idempotent(Ebar):
        raise NotAlmostIdempotent("Ebar 不是 GF(2) 上的幂等元")
    if not gf_is_nilpotent(MatGF(2, A.entries) - Ebar):
        raise NotAlmostIdempotent("(A mod 2) − Ebar 不幂零")

    E, _ = newton_idempotent_lift(mat_lift(Ebar, A.modulus))
    return E, A - E
