"""
域上逐块分解 - GF(3) 上三幂等 + 幂零（确定性），GF(2) 上幂等 + 幂零（分层策略 + 带种子的随机回退）
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Sequence, Tuple

import numpy as np

from core import gfpoly
from core.canon import (
    CompanionBlock,
    SimilarityForm,
    companion_from_poly,
    coprime_split_block,
    frobenius_form,
    poly_factor_gf,
)
from core.errors import FallbackBudgetExhausted, InternalVerificationFailure, ShapeMismatch
from core.matkit import MatGF, block_diag, gf_inverse, gf_is_nilpotent, is_idempotent, is_tripotent

logger = logging.getLogger(__name__)

RNG_SEED_SPACE = 2**64


class SplitKind(str, Enum):
    IDEMPOTENT = "idempotent"
    TRIPOTENT = "tripotent"


class Provenance(str, Enum):
    """块分解的构造来源"""

    CASE_I = "CaseI"
    CASE_II = "CaseII"
    CASE_III_N2 = "CaseIII_n2"
    CASE_III_N3 = "CaseIII_n3"
    CASE_III_BIG = "CaseIII_big"
    NIL_BLOCK = "NilBlock"
    SHIFT_TRICK = "ShiftTrick"
    RANDOM_FALLBACK = "RandomFallback"
    SCALAR = "Scalar"
    COPRIME_SPLIT = "CoprimeSplit"


@dataclass(frozen=True, eq=False)
class BlockSplit:
    """块矩阵 = E + W，Wⁿ = 0；kind 决定 E² = E 还是 E³ = E"""

    E: MatGF
    W: MatGF
    kind: SplitKind
    provenance: Provenance
    parts: Tuple["BlockSplit", ...] = field(default=())

    def describe(self) -> str:
        if not self.parts:
            return self.provenance.value
        return f"{self.provenance.value}[{','.join(part.describe() for part in self.parts)}]"

    def holds(self, block: MatGF) -> bool:
        """重新验证 E + W = block、Wⁿ = 0 与 E 的类型"""
        kind_ok = is_idempotent(self.E) if self.kind is SplitKind.IDEMPOTENT else is_tripotent(self.E)
        return kind_ok and self.E + self.W == block and gf_is_nilpotent(self.W)


def _verified(split: BlockSplit, block: MatGF) -> BlockSplit:
    if not split.holds(block):
        raise InternalVerificationFailure(
            "block_split", f"{split.provenance.value} 构造不满足 E + W = A / 幂零 / 类型"
        )
    return split


def _shift_matrix(n: int, rows=None) -> np.ndarray:
    """次对角线为 1 的移位阵（rows 限定哪些行带 1，行号从 1 起）"""
    W = np.zeros((n, n), dtype=np.int64)
    for i in rows if rows is not None else range(2, n + 1):
        W[i - 1, i - 2] = 1
    return W


def _last_column(n: int, values: Sequence[int]) -> np.ndarray:
    E = np.zeros((n, n), dtype=np.int64)
    E[:, n - 1] = values
    return E


def _case_last_column(b: CompanionBlock, kind: SplitKind, provenance: Provenance, final: int) -> BlockSplit:
    """Case I / II：E 为最后一列 (c₀, …, c_{n−2}, ±1)，W 为次对角移位"""
    n, p = b.n, b.p
    E = MatGF(p, _last_column(n, list(b.coeffs[:-1]) + [final]))
    W = MatGF(p, _shift_matrix(n))
    return BlockSplit(E, W, kind, provenance)


def _case_three(b: CompanionBlock) -> BlockSplit:
    """c_{n−1} = 0 的三幂等构造"""
    n, c = b.n, b.coeffs
    if n == 2:
        E = np.array([[0, 1], [1, 0]])
        W = np.array([[0, c[0] - 1], [0, 0]])
        provenance = Provenance.CASE_III_N2
    elif n == 3:
        E = np.array([[0, 0, 0], [1, 0, 1], [0, 1, 0]])
        W = np.array([[0, 0, c[0]], [0, 0, c[1] - 1], [0, 0, 0]])
        provenance = Provenance.CASE_III_N3
    else:
        # E 只占右下角三个位置 (n−1, n−2), (n−1, n), (n, n−1)（行列号从 1 起）
        E = np.zeros((n, n), dtype=np.int64)
        E[n - 2, n - 3] = 1
        E[n - 2, n - 1] = 1
        E[n - 1, n - 2] = 1
        # W：第 2..n−2 行的次对角 1，最后一列 (c₀, …, c_{n−3}, c_{n−2} − 1, 0)
        W = _shift_matrix(n, rows=range(2, n - 1))
        W[:, n - 1] = list(c[:n - 2]) + [c[n - 2] - 1, 0]
        provenance = Provenance.CASE_III_BIG
    return BlockSplit(MatGF(3, E), MatGF(3, W), SplitKind.TRIPOTENT, provenance)


def split_gf3_block(b: CompanionBlock) -> BlockSplit:
    """GF(3) 伴随块的三幂等 + 幂零分解（确定、全覆盖）

    Args:
        b: GF(3) 上的伴随块

    Returns:
        kind = tripotent 的 BlockSplit

    Raises:
        InternalVerificationFailure: 构造未通过复核
    """
    if b.p != 3:
        raise ValueError(f"split_gf3_block 需要 GF(3) 块，收到 GF({b.p})")
    C = b.matrix()
    if b.n == 1:
        split = BlockSplit(C, C.zeros_like(), SplitKind.TRIPOTENT, Provenance.SCALAR)
    elif b.subleading == 1:
        split = _case_last_column(b, SplitKind.TRIPOTENT, Provenance.CASE_I, 1)
    elif b.subleading == 2:
        split = _case_last_column(b, SplitKind.TRIPOTENT, Provenance.CASE_II, -1)
    else:
        split = _case_three(b)
    return _verified(split, C)


def _conjugate_back(form: SimilarityForm, X: MatGF) -> MatGF:
    """S⁻¹·X·S"""
    return form.S_inv @ X @ form.S


def _shifted_subleading(b: CompanionBlock) -> int:
    # q(x+1) 的 x^{n−1} 系数为 n − c_{n−1}，伴随约定下取负
    return (b.subleading - b.n) % 2


def _random_fallback(b: CompanionBlock, seed: int, attempt_budget: int) -> BlockSplit:
    """随机采样 E = P·diag(I_r, 0)·P⁻¹，直到 (C − E)ⁿ = 0"""
    n = b.n
    C = b.matrix()
    ranks = [r for r in range(2, n - 1, 2)] or [r for r in range(0, n + 1, 2)]
    # 任意整数种子映射到 numpy 接受的 [0, 2^64)
    rng = np.random.default_rng(seed % RNG_SEED_SPACE)

    for attempt in range(attempt_budget):
        r = ranks[attempt % len(ranks)]
        while True:
            P = MatGF(2, rng.integers(0, 2, size=(n, n)))
            P_inv = gf_inverse(P)
            if P_inv is not None:
                break
        D = np.zeros((n, n), dtype=np.int64)
        D[:r, :r] = np.eye(r, dtype=np.int64)
        E = P @ MatGF(2, D) @ P_inv
        W = C - E
        if gf_is_nilpotent(W):
            logger.info(f"🎲 随机回退成功: block={b}, seed={seed}, attempts={attempt + 1}, rank={r}")
            return BlockSplit(E, W, SplitKind.IDEMPOTENT, Provenance.RANDOM_FALLBACK)

    logger.warning(f"⚠️ 随机回退预算耗尽: block={b}, seed={seed}, attempts={attempt_budget}")
    raise FallbackBudgetExhausted(b, seed, attempt_budget)


def _split_gf2(b: CompanionBlock, seed: int, attempt_budget: int) -> BlockSplit:
    n = b.n
    C = b.matrix()
    identity = C.identity_like()
    chi = b.char_poly()

    if n == 1:
        return BlockSplit(C, C.zeros_like(), SplitKind.IDEMPOTENT, Provenance.SCALAR)
    if chi == gfpoly.monomial(n):
        return BlockSplit(C.zeros_like(), C, SplitKind.IDEMPOTENT, Provenance.NIL_BLOCK)
    if gfpoly.compose_shift(chi, 1, 2) == gfpoly.monomial(n):
        # 幺幂块：C + I 幂零
        return BlockSplit(identity, C + identity, SplitKind.IDEMPOTENT, Provenance.SHIFT_TRICK)
    if b.subleading == 1:
        return _case_last_column(b, SplitKind.IDEMPOTENT, Provenance.CASE_I, 1)
    if _shifted_subleading(b) == 1:
        # C + I 仍以 e₁ 为循环向量；在它的伴随形上做 Case I，再拉回并加回 I
        form = frobenius_form(C + identity)
        shifted = _case_last_column(form.blocks[0], SplitKind.IDEMPOTENT, Provenance.CASE_I, 1)
        E = _conjugate_back(form, shifted.E) + identity
        W = _conjugate_back(form, shifted.W)
        return BlockSplit(E, W, SplitKind.IDEMPOTENT, Provenance.SHIFT_TRICK)

    factors = poly_factor_gf(chi, 2)
    if len(factors) > 1:
        q1 = factors[0].power(2)
        q2 = gfpoly.divmod_poly(chi, q1, 2)[0]
        form = coprime_split_block(b, q1, q2)
        parts = tuple(
            _verified(_split_gf2(sub, seed + i, attempt_budget), sub.matrix())
            for i, sub in enumerate(form.blocks)
        )
        E = _conjugate_back(form, block_diag([part.E for part in parts]))
        W = _conjugate_back(form, block_diag([part.W for part in parts]))
        return BlockSplit(E, W, SplitKind.IDEMPOTENT, Provenance.COPRIME_SPLIT, parts)

    return _random_fallback(b, seed, attempt_budget)


def split_gf2_block(b: CompanionBlock, seed: int, attempt_budget: int) -> BlockSplit:
    """GF(2) 伴随块的幂等 + 幂零分解

    分层策略：标量 → 幂零块 → 幺幂块 → Case I → 平移技巧 → 互素准素拆分递归 → 随机回退。

    Args:
        b: GF(2) 上的伴随块
        seed: 随机回退的种子（任意整数，按 2^64 取模；每次调用独立的生成器）
        attempt_budget: 随机回退的最大采样次数 (≥ 1)

    Returns:
        kind = idempotent 的 BlockSplit

    Raises:
        FallbackBudgetExhausted: 随机回退在预算内失败
    """
    if b.p != 2:
        raise ValueError(f"split_gf2_block 需要 GF(2) 块，收到 GF({b.p})")
    if attempt_budget < 1:
        raise ValueError("attempt_budget 必须 ≥ 1")
    return _verified(_split_gf2(b, seed, attempt_budget), b.matrix())


def assemble_field_decomposition(form: SimilarityForm, splits: Sequence[BlockSplit]) -> Tuple[MatGF, MatGF]:
    """E = S⁻¹·diag(Eᵢ)·S，W = S⁻¹·diag(Wᵢ)·S

    Raises:
        ShapeMismatch: 块数或块大小不对齐
    """
    if len(splits) != len(form.blocks) or any(
        s.E.n != b.n or s.E.p != b.p for s, b in zip(splits, form.blocks)
    ):
        raise ShapeMismatch(
            f"块结构不一致: form={form.sizes}, splits={tuple(s.E.n for s in splits)}"
        )
    E = _conjugate_back(form, block_diag([s.E for s in splits]))
    W = _conjugate_back(form, block_diag([s.W for s in splits]))
    return E, W


@dataclass(frozen=True, eq=False)
class FieldDecomposition:
    """一个域上矩阵的完整分解记录"""

    form: SimilarityForm
    splits: Tuple[BlockSplit, ...]
    E: MatGF
    W: MatGF

    def provenance(self) -> List[str]:
        return [s.describe() for s in self.splits]


def split_field_matrix(A: MatGF, seed: int = 0, attempt_budget: int = 100_000) -> FieldDecomposition:
    """frobenius_form → 逐块拆分 → 组装

    GF(2) 上得到幂等 E，GF(3) 上得到三幂等 E；W 幂零，E + W = A。
    """
    form = frobenius_form(A)
    if A.p == 2:
        splits = tuple(split_gf2_block(b, seed + i, attempt_budget) for i, b in enumerate(form.blocks))
    else:
        splits = tuple(split_gf3_block(b) for b in form.blocks)
    E, W = assemble_field_decomposition(form, splits)
    if E + W != A or not gf_is_nilpotent(W):
        raise InternalVerificationFailure("field_decomposition", f"GF({A.p}) 组装结果不满足 E + W = A")
    logger.debug(f"split_field_matrix: p={A.p}, provenance={[s.describe() for s in splits]}")
    return FieldDecomposition(form, splits, E, W)
