"""
GF(p) 多项式算术

多项式用系数元组表示，升幂排列，末位非零；零多项式为 ()。
例如 GF(2) 上 x² + 1 表示为 (1, 0, 1)。
"""

from functools import lru_cache
from itertools import product
from typing import List, Sequence, Tuple

Poly = Tuple[int, ...]

ZERO: Poly = ()
ONE: Poly = (1,)


def trim(coeffs: Sequence[int], p: int) -> Poly:
    """规范化：系数模 p，去掉高位零"""
    out = [int(c) % p for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def degree(f: Poly) -> int:
    """次数；零多项式为 −1"""
    return len(f) - 1


def is_monic(f: Poly) -> bool:
    return bool(f) and f[-1] == 1


def monomial(d: int, c: int = 1) -> Poly:
    return (0,) * d + (c,)


def add(f: Poly, g: Poly, p: int) -> Poly:
    n = max(len(f), len(g))
    return trim(
        [(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)], p
    )


def sub(f: Poly, g: Poly, p: int) -> Poly:
    n = max(len(f), len(g))
    return trim(
        [(f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0) for i in range(n)], p
    )


def scale(f: Poly, c: int, p: int) -> Poly:
    return trim([c * a for a in f], p)


def mul(f: Poly, g: Poly, p: int) -> Poly:
    if not f or not g:
        return ZERO
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim(out, p)


def power(f: Poly, e: int, p: int) -> Poly:
    result, base = ONE, f
    while e:
        if e & 1:
            result = mul(result, base, p)
        base = mul(base, base, p)
        e >>= 1
    return result


def divmod_poly(f: Poly, g: Poly, p: int) -> Tuple[Poly, Poly]:
    """带余除法 f = q·g + r，deg r < deg g"""
    if not g:
        raise ZeroDivisionError("除以零多项式")
    r = list(f)
    dg = degree(g)
    inv_lead = pow(g[-1], -1, p)
    q = [0] * max(len(f) - dg, 0)
    for i in range(len(f) - 1, dg - 1, -1):
        c = r[i] * inv_lead % p
        if c:
            q[i - dg] = c
            for j, b in enumerate(g):
                r[i - dg + j] = (r[i - dg + j] - c * b) % p
    return trim(q, p), trim(r[:dg] if dg > 0 else [], p)


def mod(f: Poly, g: Poly, p: int) -> Poly:
    return divmod_poly(f, g, p)[1]


def make_monic(f: Poly, p: int) -> Poly:
    if not f:
        return f
    return scale(f, pow(f[-1], -1, p), p)


def gcd(f: Poly, g: Poly, p: int) -> Poly:
    """首一最大公因式"""
    while g:
        f, g = g, mod(f, g, p)
    return make_monic(f, p)


def xgcd(f: Poly, g: Poly, p: int) -> Tuple[Poly, Poly, Poly]:
    """扩展欧几里得：返回 (d, u, v)，u·f + v·g = d，d 首一"""
    r0, r1 = f, g
    u0, u1 = ONE, ZERO
    v0, v1 = ZERO, ONE
    while r1:
        q, r = divmod_poly(r0, r1, p)
        r0, r1 = r1, r
        u0, u1 = u1, sub(u0, mul(q, u1, p), p)
        v0, v1 = v1, sub(v0, mul(q, v1, p), p)
    if not r0:
        return ZERO, ZERO, ZERO
    c = pow(r0[-1], -1, p)
    return scale(r0, c, p), scale(u0, c, p), scale(v0, c, p)


def compose_shift(f: Poly, s: int, p: int) -> Poly:
    """f(x + s)"""
    result = ZERO
    lin = trim([s, 1], p)
    for c in reversed(f):
        result = add(mul(result, lin, p), (c,), p)
    return result


def sort_key(f: Poly) -> Tuple[int, Tuple[int, ...]]:
    """先按次数，再按系数值（高位优先）排序"""
    return degree(f), tuple(reversed(f))


@lru_cache(maxsize=None)
def irreducibles(p: int, d: int) -> Tuple[Poly, ...]:
    """GF(p) 上全部 d 次首一不可约多项式

    按系数值字典序枚举（高位优先），用更低次不可约式试除筛选。
    """
    found: List[Poly] = []
    smaller = [g for e in range(1, d // 2 + 1) for g in irreducibles(p, e)]
    for tail in product(range(p), repeat=d):
        f = tuple(reversed(tail)) + (1,)
        if d > 1 and f[0] == 0:
            continue
        if all(mod(f, g, p) for g in smaller):
            found.append(f)
    return tuple(found)


def format_poly(f: Poly, var: str = "x") -> str:
    if not f:
        return "0"
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}{mono}")
    return " + ".join(terms)
