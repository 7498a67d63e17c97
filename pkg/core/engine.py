"""
分解引擎 - ℤ_m 上矩阵的三幂等 + 幂零分解、三角矩阵环分解、证书构造与复核

流水线：CRT 拆分 → 模 2 / 模 3 约化 → 有理标准形 → 逐块拆分 → 组装 → 提升 → CRT 合并 → 证书复核
"""

import logging
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.config import DEFAULT_ATTEMPT_BUDGET
from core.errors import InternalVerificationFailure, ModulusMismatch, ShapeMismatch, TrinilError
from core.fieldsplit import split_field_matrix
from core.lift import idempotent_lift_2adic, tripotent_lift_3adic
from core.matkit import (
    MatGF,
    MatZ,
    is_idempotent,
    is_tripotent,
    mat_crt_combine,
    mat_crt_split,
    mat_lift,
    mat_pow,
    mat_reduce,
    nilpotency_index,
)
from core.zmod import Modulus, Residue, scalar_trinil_decompose

logger = logging.getLogger(__name__)

CHECK_ORDER = ("sum_ok", "tripotent_ok", "nilpotent_ok", "residue_traceability")


@dataclass(frozen=True)
class CertificateChecks:
    sum_ok: bool
    tripotent_ok: bool
    nilpotent_ok: bool
    residue_traceability: bool

    def all_ok(self) -> bool:
        return self.sum_ok and self.tripotent_ok and self.nilpotent_ok and self.residue_traceability

    def first_failure(self) -> Optional[str]:
        return next((name for name in CHECK_ORDER if not getattr(self, name)), None)

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in CHECK_ORDER}


@dataclass(frozen=True, eq=False)
class TrinilCertificate:
    """A = E + W 的可机检证书

    Attributes:
        A, E, W: ℤ_m 上的矩阵
        nilpotency_exponent: W 的幂零见证指数
        checks: 构造时重新计算的检查结果
        provenance: 每个域上块的构造来源
        seed: 随机回退使用的种子
        kind: general | triangular
        field_idempotent: E mod 2 对应的 GF(2) 幂等元（m 为偶数时）
        field_tripotent: E mod 3 对应的 GF(3) 三幂等元（3 | m 时）
        two_adic_idempotent: 2 侧的 E 是否幂等
    """

    A: MatZ
    E: MatZ
    W: MatZ
    nilpotency_exponent: int
    checks: CertificateChecks
    provenance: Tuple[str, ...] = ()
    seed: int = 0
    kind: str = "general"
    field_idempotent: Optional[MatGF] = None
    field_tripotent: Optional[MatGF] = None
    two_adic_idempotent: Optional[bool] = None

    @property
    def modulus(self) -> Modulus:
        return self.A.modulus

    @property
    def n(self) -> int:
        return self.A.n


@dataclass(frozen=True)
class VerificationReport:
    """verify 的结构化结果；failure 为第一个失败的检查及说明"""

    accepted: bool
    checks: CertificateChecks
    failure: Optional[str] = None

    def __bool__(self) -> bool:
        return self.accepted


def _safe(check) -> Tuple[bool, str]:
    try:
        return check()
    except TrinilError as e:
        return False, str(e)


def _check_sum(cert: TrinilCertificate) -> Tuple[bool, str]:
    if cert.E.m != cert.A.m or cert.W.m != cert.A.m:
        return False, "E、W 与 A 的模数不一致"
    return cert.E + cert.W == cert.A, "E + W ≠ A"


def _check_tripotent(cert: TrinilCertificate) -> Tuple[bool, str]:
    return is_tripotent(cert.E), "E³ ≠ E"


def _check_nilpotent(cert: TrinilCertificate) -> Tuple[bool, str]:
    if cert.nilpotency_exponent < 1:
        return False, "幂零指数必须 ≥ 1"
    ok = mat_pow(cert.W, cert.nilpotency_exponent).is_zero()
    return ok, f"W^{cert.nilpotency_exponent} ≠ 0"


def _check_traceability(cert: TrinilCertificate) -> Tuple[bool, str]:
    modulus = cert.A.modulus
    if cert.field_idempotent is not None:
        if modulus.k == 0 or mat_reduce(cert.E, 2) != cert.field_idempotent:
            return False, "E mod 2 与 GF(2) 幂等元不一致"
    if cert.field_tripotent is not None:
        if modulus.l == 0 or mat_reduce(cert.E, 3) != cert.field_tripotent:
            return False, "E mod 3 与 GF(3) 三幂等元不一致"
    return True, ""


def verify(cert: TrinilCertificate) -> VerificationReport:
    """重新计算证书的全部检查，不信任其中存储的标记

    Returns:
        VerificationReport；accepted 为假时 failure 给出第一个失败的检查
    """
    results = {
        "sum_ok": _safe(lambda: _check_sum(cert)),
        "tripotent_ok": _safe(lambda: _check_tripotent(cert)),
        "nilpotent_ok": _safe(lambda: _check_nilpotent(cert)),
        "residue_traceability": _safe(lambda: _check_traceability(cert)),
    }
    checks = CertificateChecks(**{name: bool(ok) for name, (ok, _) in results.items()})
    failed = checks.first_failure()
    if failed is None:
        return VerificationReport(accepted=True, checks=checks)
    return VerificationReport(accepted=False, checks=checks, failure=f"{failed}: {results[failed][1]}")


def _seal(cert: TrinilCertificate) -> TrinilCertificate:
    """用复核结果替换 checks；任何一项失败都是实现缺陷"""
    report = verify(cert)
    if not report.accepted:
        raise InternalVerificationFailure(report.checks.first_failure() or "unknown", report.failure or "")
    return replace(cert, checks=report.checks)


_PENDING = CertificateChecks(False, False, False, False)


def decompose(A: MatZ, seed: int = 0, attempt_budget: int = DEFAULT_ATTEMPT_BUDGET) -> TrinilCertificate:
    """ℤ_m 上的三幂等 + 幂零分解

    Args:
        A: ℤ_m 上的方阵，m = 2^k·3^l
        seed: GF(2) 随机回退的种子
        attempt_budget: 每个回退块的最大采样次数

    Returns:
        已复核的 TrinilCertificate

    Raises:
        InadmissibleModulus: m 含有 2、3 以外的素因子
        FallbackBudgetExhausted: GF(2) 随机回退失败，可以换种子或加大预算重试
        InternalVerificationFailure: 证书复核失败
    """
    modulus = A.modulus.require_admissible()
    A2, A3 = mat_crt_split(A)
    logger.debug(f"decompose: n={A.n}, m={modulus.m}, k={modulus.k}, l={modulus.l}, seed={seed}")

    provenance: List[str] = []
    E2 = E3 = None
    field_idempotent = field_tripotent = None

    if A2 is not None:
        field2 = split_field_matrix(mat_reduce(A2, 2), seed=seed, attempt_budget=attempt_budget)
        E2, _ = idempotent_lift_2adic(A2, field2.E)
        field_idempotent = field2.E
        provenance.extend(f"GF(2):{d}" for d in field2.provenance())

    if A3 is not None:
        field3 = split_field_matrix(mat_reduce(A3, 3))
        E3 = tripotent_lift_3adic(mat_lift(field3.E, A3.modulus))
        field_tripotent = field3.E
        provenance.extend(f"GF(3):{d}" for d in field3.provenance())

    E = MatZ(modulus, mat_crt_combine(E2, E3).entries)
    cert = TrinilCertificate(
        A=A,
        E=E,
        W=A - E,
        nilpotency_exponent=A.n * modulus.nil_index,
        checks=_PENDING,
        provenance=tuple(provenance),
        seed=seed,
        field_idempotent=field_idempotent,
        field_tripotent=field_tripotent,
        two_adic_idempotent=is_idempotent(E2) if E2 is not None else None,
    )
    return _seal(cert)


@dataclass(frozen=True)
class TriangularInput:
    """T_s(ℤ_m) 中的元素

    Attributes:
        modulus: 系数环
        diagonal: 对角元
        strict_upper: 第 i 行对角线右侧的元素 (T[i][i+1], …, T[i][s−1])
    """

    modulus: Modulus
    diagonal: Tuple[Residue, ...]
    strict_upper: Tuple[Tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        s = len(self.diagonal)
        if s < 1:
            raise ShapeMismatch("三角矩阵至少 1×1")
        upper = self.strict_upper or tuple((0,) * (s - i - 1) for i in range(s))
        if len(upper) != s or any(len(row) != s - i - 1 for i, row in enumerate(upper)):
            raise ShapeMismatch(f"严格上三角部分的形状与 s={s} 不一致")
        object.__setattr__(self, "strict_upper", tuple(tuple(int(x) % self.modulus.m for x in row) for row in upper))
        object.__setattr__(self, "diagonal", tuple(Residue(int(d), self.modulus) for d in self.diagonal))

    @property
    def s(self) -> int:
        return len(self.diagonal)

    @classmethod
    def from_matrix(cls, T: MatZ) -> "TriangularInput":
        """从上三角矩阵构造

        Raises:
            ShapeMismatch: T 的严格下三角部分非零
        """
        if np.tril(T.entries, -1).any():
            raise ShapeMismatch("矩阵不是上三角")
        n = T.n
        return cls(
            modulus=T.modulus,
            diagonal=tuple(T.entry(i, i) for i in range(n)),
            strict_upper=tuple(tuple(int(x) for x in T.entries[i, i + 1:]) for i in range(n)),
        )

    def to_matrix(self) -> MatZ:
        s = self.s
        arr = np.zeros((s, s), dtype=np.int64)
        for i in range(s):
            arr[i, i] = self.diagonal[i].value
            arr[i, i + 1:] = self.strict_upper[i]
        return MatZ(self.modulus, arr)


def decompose_triangular(T: TriangularInput) -> TrinilCertificate:
    """三角矩阵环的分解：对角元逐个做标量分解

    W = T − E 是对角元幂零的上三角矩阵；幂零指数由直接乘幂求出，上界 s·max(k, l) + s。

    Raises:
        InadmissibleModulus: 模数不可接受
    """
    modulus = T.modulus.require_admissible()
    A = T.to_matrix()
    E_arr = np.zeros((T.s, T.s), dtype=np.int64)
    for i, d in enumerate(T.diagonal):
        E_arr[i, i] = scalar_trinil_decompose(d)[0].value
    E = MatZ(modulus, E_arr)
    W = A - E

    bound = T.s * modulus.nil_index + T.s
    exponent = nilpotency_index(W, bound=bound)
    if exponent is None:
        raise InternalVerificationFailure("nilpotent_ok", f"W 在 {bound} 次幂内不为零")

    cert = TrinilCertificate(
        A=A,
        E=E,
        W=W,
        nilpotency_exponent=exponent,
        checks=_PENDING,
        provenance=tuple(f"Scalar:{d.value}" for d in T.diagonal),
        kind="triangular",
    )
    return _seal(cert)


@dataclass(frozen=True)
class BatchOutcome:
    """批量分解中一项的结果，certificate 与 error 恰有一个非空"""

    index: int
    certificate: Optional[TrinilCertificate] = None
    error: Optional[TrinilError] = None

    @property
    def ok(self) -> bool:
        return self.certificate is not None


def decompose_one(index: int, A: MatZ, seed: int, attempt_budget: int) -> BatchOutcome:
    """批量中的一项，种子为 seed + index；错误被收集而不抛出"""
    try:
        return BatchOutcome(index, certificate=decompose(A, seed + index, attempt_budget))
    except TrinilError as e:
        logger.warning(f"⚠️ 批量第 {index} 项失败: {e}")
        return BatchOutcome(index, error=e)


def decompose_batch(
    matrices: Sequence[MatZ], seed: int = 0, attempt_budget: int = DEFAULT_ATTEMPT_BUDGET
) -> List[BatchOutcome]:
    """逐项分解，保持输入顺序

    Raises:
        ModulusMismatch: 各矩阵的模数不同
    """
    moduli = {A.m for A in matrices}
    if len(moduli) > 1:
        raise ModulusMismatch(f"批量输入需要同一模数，收到 {sorted(moduli)}")
    return [decompose_one(i, A, seed, attempt_budget) for i, A in enumerate(matrices)]
