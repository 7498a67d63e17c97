"""
稠密精确矩阵 - ℤ_m 与 GF(p) (p ∈ {2, 3}) 上的算术、谓词、多项式求值、约化与 CRT

所有矩阵构造后只读；运算总是返回新对象。
"""

import logging
from dataclasses import dataclass
from typing import List, Literal, Optional, Sequence, Tuple, Union

import numpy as np

from core import gfpoly
from core.errors import (
    DimensionMismatch,
    InadmissibleModulus,
    InternalVerificationFailure,
    ModulusMismatch,
)
from core.zmod import Modulus, Residue, crt_idempotents, make_modulus

logger = logging.getLogger(__name__)

FIELD_PRIMES = (2, 3)

MatOp = Literal["add", "sub", "mul"]

_INT64_LIMIT = 2**63


def _matmul_mod(a: np.ndarray, b: np.ndarray, m: int) -> np.ndarray:
    # n·(m−1)² 超过 int64 时退回到 Python 整数
    if a.shape[1] * (m - 1) ** 2 < _INT64_LIMIT:
        return (a @ b) % m
    return ((a.astype(object) @ b.astype(object)) % m).astype(np.int64)


def _reduce_array(entries, m: int) -> np.ndarray:
    arr = np.asarray(entries)
    if arr.dtype == object or arr.dtype.kind not in "iu":
        arr = (np.array(entries, dtype=object) % m).astype(np.int64)
    else:
        arr = arr.astype(np.int64) % m
    return arr


class _DenseMod:
    """MatZ / MatGF 共用的方阵运算"""

    entries: np.ndarray

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def order(self) -> int:
        """系数环的元素个数"""
        raise NotImplementedError

    def _rewrap(self, arr: np.ndarray):
        raise NotImplementedError

    def _same_ring(self, other) -> bool:
        raise NotImplementedError

    def _check(self, other) -> None:
        if type(other) is not type(self):
            raise TypeError(f"不能把 {type(self).__name__} 与 {type(other).__name__} 混合运算")
        if not self._same_ring(other):
            raise ModulusMismatch(f"系数环不一致: {self.order} vs {other.order}")
        if other.n != self.n:
            raise DimensionMismatch(f"维数不一致: {self.n} vs {other.n}")

    def __add__(self, other):
        self._check(other)
        return self._rewrap((self.entries + other.entries) % self.order)

    def __sub__(self, other):
        self._check(other)
        return self._rewrap((self.entries - other.entries) % self.order)

    def __neg__(self):
        return self._rewrap((-self.entries) % self.order)

    def __matmul__(self, other):
        self._check(other)
        return self._rewrap(_matmul_mod(self.entries, other.entries, self.order))

    def scale(self, c: int):
        c = int(c) % self.order
        if c * (self.order - 1) < _INT64_LIMIT:
            return self._rewrap((self.entries * c) % self.order)
        return self._rewrap(_reduce_array(self.entries.astype(object) * c, self.order))

    def identity_like(self):
        return self._rewrap(np.eye(self.n, dtype=np.int64))

    def zeros_like(self):
        return self._rewrap(np.zeros((self.n, self.n), dtype=np.int64))

    def is_zero(self) -> bool:
        return not self.entries.any()

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.entries, np.eye(self.n, dtype=np.int64)))

    def to_rows(self) -> List[List[int]]:
        return [[int(x) for x in row] for row in self.entries]

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self._same_ring(other) and bool(np.array_equal(self.entries, other.entries))

    def __hash__(self) -> int:
        return hash((self.order, self.entries.tobytes()))


@dataclass(frozen=True, eq=False)
class MatZ(_DenseMod):
    """ℤ_m 上的 n×n 矩阵（行优先，元素在 [0, m)）"""

    modulus: Modulus
    entries: np.ndarray

    def __post_init__(self):
        arr = _reduce_array(self.entries, self.modulus.m)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise DimensionMismatch(f"需要 n×n 方阵 (n ≥ 1)，实际形状 {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def order(self) -> int:
        return self.modulus.m

    @property
    def m(self) -> int:
        return self.modulus.m

    def _rewrap(self, arr: np.ndarray) -> "MatZ":
        return MatZ(self.modulus, arr)

    def _same_ring(self, other) -> bool:
        return other.modulus.m == self.modulus.m

    def entry(self, i: int, j: int) -> Residue:
        return Residue(int(self.entries[i, j]), self.modulus)

    @classmethod
    def from_rows(cls, rows, modulus: Union[int, Modulus]) -> "MatZ":
        if not isinstance(modulus, Modulus):
            modulus = make_modulus(modulus)
        return cls(modulus, rows)

    @classmethod
    def identity(cls, n: int, modulus: Union[int, Modulus]) -> "MatZ":
        return cls.from_rows(np.eye(n, dtype=np.int64), modulus)

    @classmethod
    def zeros(cls, n: int, modulus: Union[int, Modulus]) -> "MatZ":
        return cls.from_rows(np.zeros((n, n), dtype=np.int64), modulus)

    def __repr__(self) -> str:
        return f"MatZ(m={self.m}, {self.to_rows()})"


@dataclass(frozen=True, eq=False)
class MatGF(_DenseMod):
    """GF(p) 上的 n×n 矩阵，p ∈ {2, 3}"""

    p: int
    entries: np.ndarray

    def __post_init__(self):
        if self.p not in FIELD_PRIMES:
            raise ValueError(f"只支持 GF(2) 与 GF(3)，收到 p={self.p}")
        arr = _reduce_array(self.entries, self.p)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise DimensionMismatch(f"需要 n×n 方阵 (n ≥ 1)，实际形状 {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def order(self) -> int:
        return self.p

    def _rewrap(self, arr: np.ndarray) -> "MatGF":
        return MatGF(self.p, arr)

    def _same_ring(self, other) -> bool:
        return other.p == self.p

    @classmethod
    def identity(cls, n: int, p: int) -> "MatGF":
        return cls(p, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, n: int, p: int) -> "MatGF":
        return cls(p, np.zeros((n, n), dtype=np.int64))

    def __repr__(self) -> str:
        return f"MatGF(p={self.p}, {self.to_rows()})"


AnyMat = Union[MatZ, MatGF]


# ---------------------------------------------------------------------------
# 算术
# ---------------------------------------------------------------------------

def mat_arith(A: AnyMat, B: AnyMat, kind: MatOp) -> AnyMat:
    """矩阵加、减、乘

    Raises:
        DimensionMismatch: 维数不同
        ModulusMismatch: 模数不同
    """
    if kind == "add":
        return A + B
    if kind == "sub":
        return A - B
    if kind == "mul":
        return A @ B
    raise ValueError(f"未知运算: {kind}")


def mat_pow(A: AnyMat, t: int) -> AnyMat:
    """Aᵗ（反复平方），A⁰ = I"""
    if t < 0:
        raise ValueError("指数必须非负")
    result = A.identity_like()
    base = A
    while t:
        if t & 1:
            result = result @ base
        t >>= 1
        if t:
            base = base @ base
    return result


def mat_poly_eval(coeffs: Sequence[int], A: AnyMat) -> AnyMat:
    """Horner 求值 f(A)，coeffs 升幂排列：f(t) = c₀ + c₁t + ⋯"""
    if len(coeffs) == 0:
        return A.zeros_like()
    identity = A.identity_like()
    result = identity.scale(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        result = result @ A + identity.scale(c)
    return result


def is_idempotent(A: AnyMat) -> bool:
    return A @ A == A


def is_tripotent(A: AnyMat) -> bool:
    return A @ A @ A == A


@dataclass(frozen=True)
class NilpotencyWitness:
    """幂零判定结果；nilpotent 为真时 exponent 满足 A^exponent = 0"""

    nilpotent: bool
    exponent: Optional[int] = None

    def __bool__(self) -> bool:
        return self.nilpotent


def gf_is_nilpotent(A: MatGF) -> bool:
    """域上 n×n 矩阵幂零 ⟺ Aⁿ = 0"""
    return mat_pow(A, A.n).is_zero()


def is_nilpotent(A: MatZ) -> NilpotencyWitness:
    """ℤ_m 上的幂零判定

    (A mod p)ⁿ = 0 ⇒ Aⁿ ∈ p·M_n ⇒ A^{n·e} = 0，所以见证指数取 n·max(k, l)，
    并直接用反复平方复核。

    Raises:
        InadmissibleModulus: 模数不可接受
        InternalVerificationFailure: 剩余域判定与直接幂次不一致
    """
    modulus = A.modulus.require_admissible()
    for p, present in ((2, modulus.k), (3, modulus.l)):
        if present and not gf_is_nilpotent(mat_reduce(A, p)):
            return NilpotencyWitness(False)

    exponent = A.n * modulus.nil_index
    if not mat_pow(A, exponent).is_zero():
        raise InternalVerificationFailure("nilpotent_ok", f"A^{exponent} ≠ 0")
    return NilpotencyWitness(True, exponent)


def nilpotency_index(A: MatZ, bound: Optional[int] = None) -> Optional[int]:
    """最小 t ≥ 1 使 Aᵗ = 0（直接逐次乘幂搜索，上界默认 n·max(k, l)）"""
    if bound is None:
        bound = A.n * max(A.modulus.nil_index, 1)
    power = A
    for t in range(1, bound + 1):
        if power.is_zero():
            return t
        power = power @ A
    return None


# ---------------------------------------------------------------------------
# 约化、提升与 CRT
# ---------------------------------------------------------------------------

def mat_reduce(A: MatZ, p: int) -> MatGF:
    """A mod p

    Raises:
        ModulusMismatch: p 不整除 m
    """
    if A.m % p:
        raise ModulusMismatch(f"{p} 不整除模数 {A.m}")
    return MatGF(p, A.entries % p)


def mat_lift(Abar: MatGF, modulus: Union[int, Modulus]) -> MatZ:
    """GF(p) 矩阵按分量提升到 ℤ_m（元素取 [0, p)）"""
    if not isinstance(modulus, Modulus):
        modulus = make_modulus(modulus)
    if modulus.m % Abar.p:
        raise ModulusMismatch(f"{Abar.p} 不整除模数 {modulus.m}")
    return MatZ(modulus, Abar.entries)


def mat_crt_split(A: MatZ) -> Tuple[Optional[MatZ], Optional[MatZ]]:
    """M_n(ℤ_m) → M_n(ℤ_{2^k}) × M_n(ℤ_{3^l})，缺失分量为 None

    Raises:
        InadmissibleModulus: 模数不可接受
    """
    modulus = A.modulus.require_admissible()
    A2 = MatZ(make_modulus(modulus.two_power), A.entries) if modulus.k else None
    A3 = MatZ(make_modulus(modulus.three_power), A.entries) if modulus.l else None
    return A2, A3


def mat_crt_combine(A2: Optional[MatZ], A3: Optional[MatZ]) -> MatZ:
    """mat_crt_split 的逆"""
    if A2 is None and A3 is None:
        raise ValueError("至少需要一个 CRT 分量")
    if A3 is None:
        return A2
    if A2 is None:
        return A3
    if A2.modulus.l or A3.modulus.k:
        raise ModulusMismatch(f"分量模数必须分别是 2^k 与 3^l，实际为 {A2.m}, {A3.m}")
    if A2.n != A3.n:
        raise DimensionMismatch(f"维数不一致: {A2.n} vs {A3.n}")

    modulus = make_modulus(A2.m * A3.m)
    u2, u3 = crt_idempotents(modulus)
    combined = A2.entries.astype(object) * u2 + A3.entries.astype(object) * u3
    return MatZ(modulus, combined)


# ---------------------------------------------------------------------------
# GF(p) 线性代数
# ---------------------------------------------------------------------------

def gf_rref(M: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """简化行阶梯形与主元列"""
    R = np.array(M, dtype=np.int64) % p
    rows, cols = R.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = R[r] * pow(int(R[r, c]), -1, p) % p
        factors = R[:, c].copy()
        factors[r] = 0
        if factors.any():
            R = (R - np.outer(factors, R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def gf_rank(M: np.ndarray, p: int) -> int:
    return len(gf_rref(M, p)[1])


def gf_solve(M: np.ndarray, Y: np.ndarray, p: int) -> np.ndarray:
    """解 M·X = Y，M 列满秩

    Raises:
        ValueError: 方程组无解或 M 不是列满秩
    """
    M = np.asarray(M, dtype=np.int64)
    Y = np.asarray(Y, dtype=np.int64)
    vector = Y.ndim == 1
    if vector:
        Y = Y[:, None]
    d = M.shape[1]
    R, pivots = gf_rref(np.hstack([M, Y]), p)
    if pivots[:d] != list(range(d)) or len(pivots) > d:
        raise ValueError("方程组无解或系数矩阵不是列满秩")
    X = R[:d, d:]
    return X[:, 0] if vector else X


def gf_solve_any(M: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    """M·x = y 的一个特解（自由变量取 0）

    Raises:
        ValueError: 方程组无解
    """
    M = np.asarray(M, dtype=np.int64)
    cols = M.shape[1]
    R, pivots = gf_rref(np.hstack([M, np.asarray(y, dtype=np.int64)[:, None]]), p)
    if cols in pivots:
        raise ValueError("方程组无解")
    x = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = R[i, cols]
    return x


def gf_nullspace(M: np.ndarray, p: int) -> np.ndarray:
    """零空间基（按列），形状 cols × (cols − rank)"""
    M = np.asarray(M, dtype=np.int64)
    cols = M.shape[1]
    R, pivots = gf_rref(M, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, c in enumerate(pivots):
            basis[c, j] = (-R[i, f]) % p
    return basis


def gf_inverse(A: MatGF) -> Optional[MatGF]:
    """A⁻¹；A 奇异时返回 None"""
    n = A.n
    R, pivots = gf_rref(np.hstack([A.entries, np.eye(n, dtype=np.int64)]), A.p)
    if pivots[:n] != list(range(n)):
        return None
    return MatGF(A.p, R[:, n:])


def block_diag(blocks: Sequence[MatGF]) -> MatGF:
    """分块对角拼装"""
    if not blocks:
        raise DimensionMismatch("至少需要一个块")
    p = blocks[0].p
    n = sum(b.n for b in blocks)
    out = np.zeros((n, n), dtype=np.int64)
    at = 0
    for b in blocks:
        if b.p != p:
            raise ModulusMismatch(f"块的域不一致: GF({p}) vs GF({b.p})")
        out[at:at + b.n, at:at + b.n] = b.entries
        at += b.n
    return MatGF(p, out)


def char_poly_gf(A: MatGF) -> gfpoly.Poly:
    """特征多项式（首一，升幂系数，长度 n + 1）

    先用相似变换化为上 Hessenberg 形，再按 Hessenberg 递推展开行列式。
    """
    p, n = A.p, A.n
    H = A.entries.copy()

    for col in range(n - 2):
        target = col + 1
        nz = np.flatnonzero(H[target:, col])
        if nz.size == 0:
            continue
        i = target + int(nz[0])
        if i != target:
            H[[i, target]] = H[[target, i]]
            H[:, [i, target]] = H[:, [target, i]]
        inv = pow(int(H[target, col]), -1, p)
        for row in range(target + 1, n):
            u = int(H[row, col]) * inv % p
            if u:
                H[row] = (H[row] - u * H[target]) % p
                H[:, target] = (H[:, target] + u * H[:, row]) % p

    # P[k] 是左上 k×k 子矩阵的特征多项式
    P: List[gfpoly.Poly] = [gfpoly.ONE]
    for k in range(n):
        nxt = gfpoly.mul(gfpoly.trim([-int(H[k, k]), 1], p), P[k], p)
        prod = 1
        for i in range(k - 1, -1, -1):
            prod = prod * int(H[i + 1, i]) % p
            if not prod:
                break
            c = int(H[i, k]) * prod % p
            if c:
                nxt = gfpoly.sub(nxt, gfpoly.scale(P[i], c, p), p)
        P.append(nxt)

    return P[n]
