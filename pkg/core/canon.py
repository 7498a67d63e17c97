"""
有理标准形 - GF(2)/GF(3) 上带显式相似变换的分块伴随形，以及伴随块的互素拆分

伴随块方向固定：次对角线为 1，最后一列为 (c₀, …, c_{n−1})，
特征多项式 xⁿ − c_{n−1}x^{n−1} − ⋯ − c₀。
"""

import logging
from dataclasses import dataclass
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np

from core import gfpoly
from core.errors import DegenerateFactor, InternalVerificationFailure, NotCoprime
from core.gfpoly import Poly
from core.matkit import (
    MatGF,
    block_diag,
    char_poly_gf,
    gf_inverse,
    gf_nullspace,
    gf_rank,
    gf_solve,
    gf_solve_any,
    mat_poly_eval,
    mat_pow,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CompanionBlock:
    """GF(p) 上的一个伴随块"""

    p: int
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("伴随块至少 1×1")
        object.__setattr__(self, "coeffs", tuple(int(c) % self.p for c in self.coeffs))

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @property
    def subleading(self) -> int:
        """c_{n−1}"""
        return self.coeffs[-1]

    def matrix(self) -> MatGF:
        n = self.n
        arr = np.zeros((n, n), dtype=np.int64)
        for i in range(1, n):
            arr[i, i - 1] = 1
        arr[:, n - 1] = self.coeffs
        return MatGF(self.p, arr)

    def char_poly(self) -> Poly:
        return companion_poly(self.coeffs, self.p)

    def __str__(self) -> str:
        return f"GF({self.p})[{','.join(str(c) for c in self.coeffs)}]"


def companion_poly(coeffs: Sequence[int], p: int) -> Poly:
    """(c₀, …, c_{n−1}) ↦ xⁿ − c_{n−1}x^{n−1} − ⋯ − c₀"""
    return gfpoly.trim([-c for c in coeffs] + [1], p)


def companion_from_poly(q: Poly, p: int) -> CompanionBlock:
    """首一多项式 ↦ 伴随块"""
    if not gfpoly.is_monic(q) or gfpoly.degree(q) < 1:
        raise DegenerateFactor(f"需要次数 ≥ 1 的首一多项式，收到 {q}")
    return CompanionBlock(p, tuple(-c for c in q[:-1]))


@dataclass(frozen=True, eq=False)
class SimilarityForm:
    """S·A = F·S，F 为 blocks 的分块对角"""

    S: MatGF
    S_inv: MatGF
    blocks: Tuple[CompanionBlock, ...]

    @property
    def F(self) -> MatGF:
        return block_diag([b.matrix() for b in self.blocks])

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(b.n for b in self.blocks)

    def check(self, A: MatGF) -> bool:
        """重新验证相似不变量"""
        return (
            sum(self.sizes) == A.n
            and self.S @ A == self.F @ self.S
            and (self.S @ self.S_inv).is_identity()
        )


class Factor(NamedTuple):
    """不可约因子 base 的 multiplicity 次幂"""

    base: Poly
    multiplicity: int

    def power(self, p: int) -> Poly:
        return gfpoly.power(self.base, self.multiplicity, p)


def poly_factor_gf(q: Poly, p: int) -> List[Factor]:
    """GF(p) 上首一多项式的完全分解

    按次数、系数值顺序试除枚举出的不可约式；结果按同一顺序排列。
    """
    rem = gfpoly.make_monic(gfpoly.trim(q, p), p)
    factors: List[Factor] = []
    d = 1
    while 2 * d <= gfpoly.degree(rem):
        for g in gfpoly.irreducibles(p, d):
            count = 0
            while True:
                quo, r = gfpoly.divmod_poly(rem, g, p)
                if r:
                    break
                rem, count = quo, count + 1
            if count:
                factors.append(Factor(g, count))
        d += 1
    if gfpoly.degree(rem) >= 1:
        # 剩余部分没有 ≤ deg/2 次的因子，因而不可约
        for i, f in enumerate(factors):
            if f.base == rem:
                factors[i] = Factor(rem, f.multiplicity + 1)
                break
        else:
            factors.append(Factor(rem, 1))
    factors.sort(key=lambda f: gfpoly.sort_key(f.base))
    return factors


def _krylov(B: np.ndarray, v: np.ndarray, p: int) -> Tuple[np.ndarray, Tuple[int, ...]]:
    """v 生成的 Krylov 基 (v, Bv, …, B^{d−1}v) 与 B^d v 在其上的坐标"""
    n = B.shape[0]
    vecs = [np.asarray(v, dtype=np.int64) % p]
    while True:
        w = B @ vecs[-1] % p
        if len(vecs) == n or gf_rank(np.column_stack(vecs + [w]), p) == len(vecs):
            K = np.column_stack(vecs)
            coeffs = gf_solve(K, w, p)
            return K, tuple(int(c) for c in coeffs)
        vecs.append(w)


def _restrict(B: np.ndarray, N: np.ndarray, p: int) -> np.ndarray:
    """B 在不变子空间 span(N) 上的限制：B·N = N·B_sub"""
    return gf_solve(N, B @ N % p, p)


def _cyclic_decomposition(B: np.ndarray, p: int) -> List[Tuple[np.ndarray, Tuple[int, ...]]]:
    """把空间拆成 B-循环子空间的直和，返回 (Krylov 基, 伴随系数) 列表"""
    n = B.shape[0]
    eye = np.eye(n, dtype=np.int64)

    # 1. 按下标顺序找循环标准基向量
    for i in range(n):
        K, coeffs = _krylov(B, eye[:, i], p)
        if K.shape[1] == n:
            return [(K, coeffs)]

    Bm = MatGF(p, B)
    factors = poly_factor_gf(char_poly_gf(Bm), p)

    # 2. 多个准素分量：按 ker π^e(B) 拆开
    if len(factors) > 1:
        pieces = []
        for factor in factors:
            N = gf_nullspace(mat_poly_eval(factor.power(p), Bm).entries, p)
            for K_sub, coeffs in _cyclic_decomposition(_restrict(B, N, p), p):
                pieces.append((N @ K_sub % p, coeffs))
        return pieces

    # 3. 单一准素分量 π^e：取最小多项式极大的向量，再用对偶泛函构造不变补空间
    base, e = factors[0]
    Q = mat_poly_eval(base, Bm)
    f = next(t for t in range(1, e + 1) if mat_pow(Q, t).is_zero())
    lower = mat_pow(Q, f - 1).entries
    i = int(np.flatnonzero(lower.any(axis=0))[0])
    K, coeffs = _krylov(B, eye[:, i], p)
    d = K.shape[1]

    unit = np.zeros(d, dtype=np.int64)
    unit[d - 1] = 1
    phi = gf_solve_any(K.T, unit, p)
    rows = [phi]
    for _ in range(d - 1):
        rows.append(rows[-1] @ B % p)
    N = gf_nullspace(np.vstack(rows), p)

    pieces = [(K, coeffs)]
    for K_sub, sub_coeffs in _cyclic_decomposition(_restrict(B, N, p), p):
        pieces.append((N @ K_sub % p, sub_coeffs))
    return pieces


def _form_from_pieces(A: MatGF, pieces) -> SimilarityForm:
    M = np.hstack([K for K, _ in pieces]) % A.p
    S_inv = MatGF(A.p, M)
    S = gf_inverse(S_inv)
    if S is None:
        raise InternalVerificationFailure("similarity", "变换矩阵奇异")
    blocks = tuple(CompanionBlock(A.p, coeffs) for _, coeffs in pieces)
    form = SimilarityForm(S=S, S_inv=S_inv, blocks=blocks)
    if not form.check(A):
        raise InternalVerificationFailure("similarity", "S·A ≠ F·S")
    return form


def frobenius_form(A: MatGF) -> SimilarityForm:
    """分块伴随标准形（不要求不变因子整除链）

    对固定输入确定：先找循环标准基向量，否则按准素分解递归。

    Args:
        A: GF(2) 或 GF(3) 上的方阵

    Returns:
        满足 S·A = F·S、S·S_inv = I 的 SimilarityForm
    """
    form = _form_from_pieces(A, _cyclic_decomposition(A.entries, A.p))
    logger.debug(f"frobenius_form: n={A.n}, p={A.p}, blocks={form.sizes}")
    return form


def coprime_split_block(b: CompanionBlock, q1: Poly, q2: Poly) -> SimilarityForm:
    """把伴随块按互素因子 q1·q2 拆成两个伴随块

    Bézout 恒等式 u·q1 + v·q2 = 1 给出投影 (v·q2)(C) 与 (u·q1)(C)，
    它们在 e₁ 上的像分别是 ker q1(C)、ker q2(C) 的循环向量。

    Raises:
        DegenerateFactor: 某个因子次数 < 1
        NotCoprime: gcd(q1, q2) ≠ 1
    """
    p = b.p
    q1, q2 = gfpoly.trim(q1, p), gfpoly.trim(q2, p)
    if gfpoly.degree(q1) < 1 or gfpoly.degree(q2) < 1:
        raise DegenerateFactor(f"因子次数必须 ≥ 1: {q1}, {q2}")
    if gfpoly.make_monic(gfpoly.mul(q1, q2, p), p) != b.char_poly():
        raise ValueError(f"q1·q2 不等于块 {b} 的特征多项式")
    d, u, v = gfpoly.xgcd(q1, q2, p)
    if d != gfpoly.ONE:
        raise NotCoprime(f"gcd({gfpoly.format_poly(q1)}, {gfpoly.format_poly(q2)}) = {gfpoly.format_poly(d)}")

    C = b.matrix()
    e1 = np.zeros(b.n, dtype=np.int64)
    e1[0] = 1
    pieces = []
    for projector in (gfpoly.mul(v, q2, p), gfpoly.mul(u, q1, p)):
        w = mat_poly_eval(projector, C).entries @ e1 % p
        pieces.append(_krylov(C.entries, w, p))
    return _form_from_pieces(C, pieces)
