"""
复现集合 - 把实验模块的正反结论打包成逐项检查
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from core.engine import TriangularInput, decompose_triangular, verify
from core.matkit import MatZ
from core.zmod import make_modulus
from modules.lab import (
    classify_zm,
    field_converse_sweep,
    matrix_ring_census,
    modulus_admissibility_sweep,
    product_index_growth,
    refute_strongly_2_nil_clean_matrices,
)

logger = logging.getLogger(__name__)

REFUTER_MODULUS_LIMIT = 72
REFUTER_SIZES = (2, 3, 4)
ADMISSIBILITY_LIMIT = 100


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _admissible_moduli(limit: int) -> List[int]:
    return [m for m in range(2, limit + 1) if make_modulus(m).admissible]


def _check_refuter(inject_fault: bool) -> Tuple[bool, str]:
    tried = 0
    for m in _admissible_moduli(REFUTER_MODULUS_LIMIT):
        for n in REFUTER_SIZES:
            evidence = refute_strongly_2_nil_clean_matrices(m, n)
            tried += 1
            inverse = evidence.inverse.scale(-1) if inject_fault else evidence.inverse
            if not evidence.corner_inverse_ok or not (evidence.defect @ inverse).is_identity():
                return False, f"m={m}, n={n}: (A³ − A)·inverse ≠ I"
    return True, f"{tried} 个 (m, n) 组合中 A³ − A 均可逆"


def _check_converse() -> Tuple[bool, str]:
    witness = field_converse_sweep(5, 2)
    if witness is None or not witness.confirmed:
        return False, "GF(5) 上没有找到不可分解的 a·I₂"
    return True, f"a={witness.a}，{witness.candidates} 个候选中无解"


def _check_admissibility() -> Tuple[bool, str]:
    bad = [row.m for row in modulus_admissibility_sweep(ADMISSIBILITY_LIMIT) if not row.agrees]
    if bad:
        return False, f"不一致的模数: {bad}"
    return True, f"2..{ADMISSIBILITY_LIMIT} 全部一致"


def _check_six_nilpotent() -> Tuple[bool, str]:
    for m in range(2, ADMISSIBILITY_LIMIT + 1):
        report = classify_zm(m)
        if report.is_trinil_clean and not report.six_is_nilpotent:
            return False, f"m={m}: trinil clean 但 6 不幂零"
        if not report.implications_hold():
            return False, f"m={m}: 蕴含链不成立"
    return True, "trinil clean ⇒ 6 幂零"


def _check_bounded_index() -> Tuple[bool, str]:
    for m in _admissible_moduli(ADMISSIBILITY_LIMIT):
        exponent = classify_zm(m).bounded_index_exponent
        if exponent is None or exponent > max(make_modulus(m).nil_index, 1):
            return False, f"m={m}: (a − a³)^e = 0 的指数为 {exponent}"
    growth = product_index_growth(6)
    if [index for _, index in growth] != sorted({index for _, index in growth}):
        return False, f"无穷积截断的指数没有严格增长: {growth}"
    return True, f"有限模数有统一指数；截断积指数 {[i for _, i in growth]}"


def _check_field_census() -> Tuple[bool, str]:
    for p, expected in ((2, True), (3, True), (5, False)):
        census = matrix_ring_census(p, 2)
        if census.all_decomposable != expected:
            return False, f"M₂(ℤ_{p}): {census.decomposable}/{census.total}"
    return True, "M₂(ℤ₂)、M₂(ℤ₃) 全部可分解，M₂(ℤ₅) 不是"


def _check_triangular() -> Tuple[bool, str]:
    modulus = make_modulus(12)
    rng = np.random.default_rng(0)
    for _ in range(20):
        T = np.triu(rng.integers(0, 12, size=(3, 3)))
        cert = decompose_triangular(TriangularInput.from_matrix(MatZ(modulus, T)))
        if not verify(cert).accepted:
            return False, f"T = {T.tolist()} 的证书未通过"
    return True, "20 个 T₃(ℤ₁₂) 元素全部通过"


def run_reproductions(inject_fault: bool = False) -> List[CheckOutcome]:
    """依次运行全部复现检查

    Args:
        inject_fault: 把反例检查中的逆矩阵取负，用于确认失败能被报告

    Returns:
        CheckOutcome 列表（顺序固定）
    """
    checks: List[Tuple[str, Callable[[], Tuple[bool, str]]]] = [
        ("refuter", lambda: _check_refuter(inject_fault)),
        ("field_converse", _check_converse),
        ("modulus_admissibility", _check_admissibility),
        ("six_nilpotent", _check_six_nilpotent),
        ("bounded_index", _check_bounded_index),
        ("field_census", _check_field_census),
        ("triangular_ring", _check_triangular),
    ]
    outcomes = []
    for name, check in checks:
        passed, detail = check()
        logger.info(f"{'✅' if passed else '❌'} {name}: {detail}")
        outcomes.append(CheckOutcome(name, passed, detail))
    return outcomes
