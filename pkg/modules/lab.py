"""
实验模块 - ℤ_m 上的环分类器、穷举 oracle 与反例复现

所有判定都用 numpy 向量化穷举完成，不调用引擎的分解代码，可以作为独立的对照。
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from core.errors import EnumerationTooLarge
from core.matkit import MatZ
from core.zmod import make_modulus

logger = logging.getLogger(__name__)

CLASSIFY_LIMIT = 2**20
ENUMERATION_LIMIT = 2**24
SWEEP_LIMIT = 10**4
_CHUNK = 2**16

# 谓词失败时报告 witness 的顺序
PREDICATE_ORDER = ("trinil_clean", "strongly_2_nil_clean", "tripotent_ring", "2_boolean")


# ---------------------------------------------------------------------------
# ℤ_m 的元素级判定
# ---------------------------------------------------------------------------

def _power_vec(values: np.ndarray, t: int, m: int) -> np.ndarray:
    result = np.ones_like(values) % m
    base = values % m
    while t:
        if t & 1:
            result = result * base % m
        base = base * base % m
        t >>= 1
    return result


def _nilpotent_mask(m: int) -> np.ndarray:
    """ℤ_m 中幂零元的掩码：a^{⌈log₂ m⌉} = 0"""
    a = np.arange(m, dtype=np.int64)
    return _power_vec(a, m.bit_length(), m) == 0


def _nilpotency_indices(values: np.ndarray, m: int) -> np.ndarray:
    """逐个元素的幂零指数；不幂零的元素记为 0"""
    indices = np.zeros(values.shape, dtype=np.int64)
    power = values % m
    for t in range(1, m.bit_length() + 2):
        hit = (power == 0) & (indices == 0)
        indices[hit] = t
        if (indices > 0).all():
            break
        power = power * values % m
    return indices


def _prime_divisors(m: int) -> List[int]:
    primes, d = [], 2
    while d * d <= m:
        if m % d == 0:
            primes.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        primes.append(m)
    return primes


def _covered(m: int, centers: np.ndarray, nil: np.ndarray) -> np.ndarray:
    """centers + N(ℤ_m) 覆盖到的元素"""
    ok = np.zeros(m, dtype=bool)
    nil_elems = np.flatnonzero(nil)
    for c in centers:
        ok[(int(c) + nil_elems) % m] = True
    return ok


def _first_false(mask: np.ndarray) -> Optional[int]:
    bad = np.flatnonzero(~mask)
    return int(bad[0]) if bad.size else None


@dataclass(frozen=True)
class RingReport:
    """ℤ_m 的环性质报告

    Attributes:
        m: 模数
        is_trinil_clean: 每个元素都是三幂等元 + 幂零元
        is_strongly_2_nil_clean: a − a³ 对所有 a 幂零
        is_tripotent_ring: a³ = a 对所有 a
        is_2_boolean: a² 对所有 a 幂等
        bounded_index_exponent: 使 (a − a³)^e = 0 对所有 a 成立的最小 e
        witness: 按 PREDICATE_ORDER 第一个失败谓词的反例
        is_nil_clean: 每个元素都是幂等元 + 幂零元
        is_weakly_nil_clean: 每个元素都是 ±幂等元 + 幂零元
        six_is_nilpotent: 6 ∈ N(ℤ_m)
        jacobson_is_nil: J(ℤ_m) 中全是幂零元
        nilpotent_index_bound: 幂零元的统一指数上界
        witnesses: 每个失败谓词的反例
    """

    m: int
    is_trinil_clean: bool
    is_strongly_2_nil_clean: bool
    is_tripotent_ring: bool
    is_2_boolean: bool
    bounded_index_exponent: Optional[int]
    witness: Optional[int]
    is_nil_clean: bool = False
    is_weakly_nil_clean: bool = False
    six_is_nilpotent: bool = False
    jacobson_is_nil: bool = True
    nilpotent_index_bound: int = 1
    witnesses: Dict[str, int] = field(default_factory=dict)

    def implications_hold(self) -> bool:
        """nil clean ⇒ weakly nil clean ⇒ trinil clean；tripotent ⇒ s2nc ⇒ trinil clean ⇒ 6 幂零"""
        chain = [
            (self.is_nil_clean, self.is_weakly_nil_clean),
            (self.is_weakly_nil_clean, self.is_trinil_clean),
            (self.is_tripotent_ring, self.is_strongly_2_nil_clean),
            (self.is_strongly_2_nil_clean, self.is_trinil_clean),
            (self.is_trinil_clean, self.six_is_nilpotent),
        ]
        return all(not premise or conclusion for premise, conclusion in chain)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "trinil_clean": self.is_trinil_clean,
            "strongly_2_nil_clean": self.is_strongly_2_nil_clean,
            "tripotent_ring": self.is_tripotent_ring,
            "2_boolean": self.is_2_boolean,
            "bounded_index_exponent": self.bounded_index_exponent,
            "witness": self.witness,
            "nil_clean": self.is_nil_clean,
            "weakly_nil_clean": self.is_weakly_nil_clean,
            "six_is_nilpotent": self.six_is_nilpotent,
            "jacobson_is_nil": self.jacobson_is_nil,
            "nilpotent_index_bound": self.nilpotent_index_bound,
            "witnesses": dict(self.witnesses),
        }


def _check_classify_range(m: int) -> None:
    if m < 2 or m > CLASSIFY_LIMIT:
        raise ValueError(f"classify_zm 需要 2 ≤ m ≤ {CLASSIFY_LIMIT}，收到 {m}")


def _trinil_mask(m: int, a: np.ndarray, nil: np.ndarray) -> np.ndarray:
    tripotents = np.flatnonzero(_power_vec(a, 3, m) == a)
    return _covered(m, tripotents, nil)


def classify_zm(m: int) -> RingReport:
    """穷举 ℤ_m 的全部元素，计算各个环性质

    Args:
        m: 2 ≤ m ≤ 2^20

    Returns:
        RingReport
    """
    m = int(m)
    _check_classify_range(m)
    a = np.arange(m, dtype=np.int64)
    nil = _nilpotent_mask(m)
    cube = _power_vec(a, 3, m)
    square = a * a % m

    trinil = _trinil_mask(m, a, nil)
    idempotents = np.flatnonzero(square == a)
    nil_clean = _covered(m, idempotents, nil)
    weakly = nil_clean | _covered(m, (-idempotents) % m, nil)

    defect = (a - cube) % m
    s2nc = nil[defect]
    tripotent = cube == a
    two_boolean = square * square % m == square

    masks = {
        "trinil_clean": trinil,
        "strongly_2_nil_clean": s2nc,
        "tripotent_ring": tripotent,
        "2_boolean": two_boolean,
        "nil_clean": nil_clean,
        "weakly_nil_clean": weakly,
    }
    witnesses: Dict[str, int] = {}
    for name, mask in masks.items():
        w = _first_false(mask)
        if w is not None:
            witnesses[name] = w
    witness = next((witnesses[name] for name in PREDICATE_ORDER if name in witnesses), None)

    bounded = int(_nilpotency_indices(defect, m).max()) if s2nc.all() else None
    nil_elems = a[nil]
    index_bound = int(_nilpotency_indices(nil_elems, m).max())

    # J(ℤ_m)：落在每个极大理想 pℤ_m 中的元素
    jacobson = np.ones(m, dtype=bool)
    for p in _prime_divisors(m):
        jacobson &= a % p == 0

    report = RingReport(
        m=m,
        is_trinil_clean=bool(trinil.all()),
        is_strongly_2_nil_clean=bool(s2nc.all()),
        is_tripotent_ring=bool(tripotent.all()),
        is_2_boolean=bool(two_boolean.all()),
        bounded_index_exponent=bounded,
        witness=witness,
        is_nil_clean=bool(nil_clean.all()),
        is_weakly_nil_clean=bool(weakly.all()),
        six_is_nilpotent=bool(nil[6 % m]),
        jacobson_is_nil=bool(nil[jacobson].all()),
        nilpotent_index_bound=index_bound,
        witnesses=witnesses,
    )
    logger.debug(f"classify_zm: m={m}, trinil_clean={report.is_trinil_clean}, witness={witness}")
    return report


def _only_two_and_three(m: int) -> bool:
    for p in (2, 3):
        while m % p == 0:
            m //= p
    return m == 1


@dataclass(frozen=True)
class AdmissibilityRow:
    m: int
    trinil_clean: bool
    two_three_only: bool

    @property
    def agrees(self) -> bool:
        return self.trinil_clean == self.two_three_only


def modulus_admissibility_sweep(limit: int) -> List[AdmissibilityRow]:
    """对 2 ≤ m ≤ limit 比较 ℤ_m 是否 trinil clean 与 m 是否只含素因子 2、3

    Raises:
        ValueError: limit 超过 10⁴
    """
    if limit > SWEEP_LIMIT:
        raise ValueError(f"limit 不能超过 {SWEEP_LIMIT}")
    rows = []
    for m in range(2, limit + 1):
        a = np.arange(m, dtype=np.int64)
        clean = bool(_trinil_mask(m, a, _nilpotent_mask(m)).all())
        rows.append(AdmissibilityRow(m, clean, _only_two_and_three(m)))
    return rows


# ---------------------------------------------------------------------------
# 矩阵穷举
# ---------------------------------------------------------------------------

def _check_enumeration(m: int, n: int) -> int:
    size = m ** (n * n)
    if size > ENUMERATION_LIMIT:
        raise EnumerationTooLarge(size, ENUMERATION_LIMIT)
    return size


def _enumerate(m: int, n: int) -> Iterator[np.ndarray]:
    """按整数编码顺序产生 M_n(ℤ_m) 的全部矩阵，每批形状 (b, n, n)"""
    size = _check_enumeration(m, n)
    places = m ** np.arange(n * n, dtype=np.int64)
    for start in range(0, size, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, size), dtype=np.int64)
        yield ((idx[:, None] // places) % m).reshape(-1, n, n)


def _encode(batch: np.ndarray, m: int) -> np.ndarray:
    n = batch.shape[-1]
    places = m ** np.arange(n * n, dtype=np.int64)
    return batch.reshape(batch.shape[0], -1) @ places


def _batch_tripotent(batch: np.ndarray, m: int) -> np.ndarray:
    cube = np.matmul(np.matmul(batch, batch) % m, batch) % m
    return (cube == batch).all(axis=(1, 2))


def _batch_nilpotent(batch: np.ndarray, m: int) -> np.ndarray:
    """D^{2^j} = 0，2^j ≥ n·⌈log₂ m⌉"""
    n = batch.shape[-1]
    target = n * m.bit_length()
    power, reach = batch % m, 1
    while reach < target:
        power = np.matmul(power, power) % m
        reach *= 2
    return ~power.any(axis=(1, 2))


def _all_tripotents(m: int, n: int) -> np.ndarray:
    found = [chunk[_batch_tripotent(chunk, m)] for chunk in _enumerate(m, n)]
    return np.concatenate(found) if found else np.zeros((0, n, n), dtype=np.int64)


def oracle_decompose(A: MatZ) -> List[MatZ]:
    """穷举全部三幂等 E，使 A − E 幂零

    空列表即证明 A 在这个规模上不可分解。

    Raises:
        EnumerationTooLarge: m^{n²} > 2^24
    """
    m, n = A.m, A.n
    tripotents = _all_tripotents(m, n)
    if tripotents.shape[0] == 0:
        return []
    ok = _batch_nilpotent((A.entries[None, :, :] - tripotents) % m, m)
    logger.debug(f"oracle_decompose: m={m}, n={n}, tripotents={tripotents.shape[0]}, solutions={int(ok.sum())}")
    return [MatZ(A.modulus, E) for E in tripotents[ok]]


@dataclass(frozen=True)
class CensusReport:
    """M_n(ℤ_m) 中可分解矩阵的统计"""

    m: int
    n: int
    total: int
    decomposable: int
    tripotent_count: int
    nilpotent_count: int
    counterexample: Optional[Tuple[Tuple[int, ...], ...]] = None

    @property
    def all_decomposable(self) -> bool:
        return self.decomposable == self.total


def matrix_ring_census(m: int, n: int) -> CensusReport:
    """统计 M_n(ℤ_m) 中有多少矩阵是三幂等 + 幂零

    Raises:
        EnumerationTooLarge: m^{n²} > 2^24
    """
    total = _check_enumeration(m, n)
    tripotents = _all_tripotents(m, n)
    nilpotents = np.concatenate([chunk[_batch_nilpotent(chunk, m)] for chunk in _enumerate(m, n)])

    hit = np.zeros(total, dtype=bool)
    for E in tripotents:
        hit[_encode((E[None, :, :] + nilpotents) % m, m)] = True

    counterexample = None
    missing = _first_false(hit)
    if missing is not None:
        places = m ** np.arange(n * n, dtype=np.int64)
        flat = (missing // places) % m
        counterexample = tuple(tuple(int(x) for x in row) for row in flat.reshape(n, n))

    return CensusReport(
        m=m,
        n=n,
        total=total,
        decomposable=int(hit.sum()),
        tripotent_count=int(tripotents.shape[0]),
        nilpotent_count=int(nilpotents.shape[0]),
        counterexample=counterexample,
    )


# ---------------------------------------------------------------------------
# 反例复现
# ---------------------------------------------------------------------------

REFUTER_CORE = ((1, 1), (1, 0))
REFUTER_CORE_INVERSE = ((1, -1), (-1, 2))
# 左上角含 REFUTER_CORE 的 3×3 块；B³ − B 的行列式为 1
REFUTER_BORDER = ((1, 1, 0), (1, 0, 1), (0, 1, 0))
REFUTER_BORDER_INVERSE = ((-1, 1, 1), (1, -1, 0), (1, 0, -2))


@dataclass(frozen=True, eq=False)
class RefutationEvidence:
    """M_n(ℤ_m) 不是 strongly 2-nil-clean 的证据：A³ − A 可逆，因而不幂零"""

    m: int
    n: int
    A: MatZ
    defect: MatZ
    inverse: MatZ
    corner_inverse_ok: bool
    unit_verified: bool

    @property
    def refutes(self) -> bool:
        return self.corner_inverse_ok and self.unit_verified


def _diag(blocks, n: int) -> np.ndarray:
    out = np.zeros((n, n), dtype=np.int64)
    at = 0
    for b in blocks:
        b = np.asarray(b, dtype=np.int64)
        size = b.shape[0]
        out[at:at + size, at:at + size] = b
        at += size
    return out


def refute_strongly_2_nil_clean_matrices(m: int, n: int) -> RefutationEvidence:
    """构造 A ∈ M_n(ℤ_m)，左上角为 [[1,1],[1,0]]，并给出 A³ − A 的逆

    n 为偶数时 A 由 [[1,1],[1,0]] 的对角副本组成；n 为奇数时最后一块换成 3×3 的边界块。
    单位阵填充会让 A³ − A 出现零块，所以不用它。

    Raises:
        ValueError: n < 2
    """
    if n < 2:
        raise ValueError("n 必须 ≥ 2")
    modulus = make_modulus(m)
    pairs, odd = divmod(n, 2)
    if odd:
        pairs -= 1
    blocks = [REFUTER_CORE] * pairs + ([REFUTER_BORDER] if odd else [])
    inverses = [REFUTER_CORE_INVERSE] * pairs + ([REFUTER_BORDER_INVERSE] if odd else [])

    A = MatZ(modulus, _diag(blocks, n))
    defect = A @ A @ A - A
    inverse = MatZ(modulus, _diag(inverses, n))

    corner = MatZ(modulus, np.asarray(REFUTER_CORE, dtype=np.int64))
    corner_defect = corner @ corner @ corner - corner
    corner_ok = (corner_defect @ MatZ(modulus, np.asarray(REFUTER_CORE_INVERSE))).is_identity()

    return RefutationEvidence(
        m=m,
        n=n,
        A=A,
        defect=defect,
        inverse=inverse,
        corner_inverse_ok=corner_ok,
        unit_verified=(defect @ inverse).is_identity() and (inverse @ defect).is_identity(),
    )


@dataclass(frozen=True)
class ConverseWitness:
    """a·I_n 在 GF(p) 上没有三幂等 + 幂零分解"""

    p: int
    n: int
    a: int
    candidates: int
    solutions: int

    @property
    def confirmed(self) -> bool:
        return self.solutions == 0


def field_converse_sweep(p: int, n: int) -> Optional[ConverseWitness]:
    """找 a ∈ GF(p)，a ∉ {0, 1, −1}，并用 oracle 确认 a·I_n 不可分解

    p ∈ {2, 3} 时每个元素都是三幂等元，返回 None。

    Raises:
        ValueError: p 不是素数
        EnumerationTooLarge: p^{n²} > 2^24
    """
    if p < 2 or _prime_divisors(p) != [p]:
        raise ValueError(f"{p} 不是素数")
    a = next((x for x in range(2, p) if x * x % p != 1), None)
    if a is None:
        return None
    modulus = make_modulus(p)
    solutions = oracle_decompose(MatZ(modulus, np.eye(n, dtype=np.int64) * a))
    return ConverseWitness(p=p, n=n, a=a, candidates=p ** (n * n), solutions=len(solutions))


def product_index_growth(depth: int) -> List[Tuple[int, int]]:
    """ℤ₂ × ℤ₄ × ⋯ × ℤ_{2^d} 中 (0, 2, …, 2) 的幂零指数随 d 的变化

    Returns:
        [(d, index)]，index 随 d 无界增长
    """
    rows = []
    for d in range(1, depth + 1):
        index = 1
        for i in range(1, d + 1):
            m = 2**i
            value = np.array([2 % m], dtype=np.int64)
            index = max(index, int(_nilpotency_indices(value, m)[0]))
        rows.append((d, index))
    return rows
