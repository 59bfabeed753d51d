"""Primitive integer-polynomial kernels for the doubling chains.

Internal module. Coefficient lists are plain Python ints, constant term
first, no trailing zeros; the empty list is zero. Multiplication switches
from schoolbook to Kronecker substitution (packing coefficients into one
big integer) once the work estimate gets large; the packed product goes
through gmpy2 when available, whose large-integer multiply is far faster
than CPython's.
"""

from __future__ import annotations

import math
from fractions import Fraction

try:
    from gmpy2 import mpz
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    def mpz(x):
        return x

from .exactarith import Poly

_SCHOOLBOOK_CUTOFF = 4096


def znormalize(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def zadd(a: list[int], b: list[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return znormalize(out)


def zneg(a: list[int]) -> list[int]:
    return [-c for c in a]


def zscale(a: list[int], k: int) -> list[int]:
    if k == 0:
        return []
    return [c * k for c in a]


def zmul(a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    if len(a) * len(b) <= _SCHOOLBOOK_CUTOFF:
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return znormalize(out)
    return _kronecker_mul(a, b)


def _pack(a: list[int], width: int) -> int:
    # coefficients are nonnegative and < 2**width; width is a multiple of 8
    nbytes = width // 8
    buf = bytearray(len(a) * nbytes)
    for i, c in enumerate(a):
        buf[i * nbytes:(i + 1) * nbytes] = c.to_bytes(nbytes, "little")
    return int.from_bytes(buf, "little")


def _unpack(v: int, width: int, n: int) -> list[int]:
    nbytes = width // 8
    buf = v.to_bytes(n * nbytes, "little")
    return [int.from_bytes(buf[i * nbytes:(i + 1) * nbytes], "little")
            for i in range(n)]


def _kronecker_mul(a: list[int], b: list[int]) -> list[int]:
    # split into nonnegative parts so the packed digits never go negative
    ap = [c if c > 0 else 0 for c in a]
    an = [-c if c < 0 else 0 for c in a]
    bp = [c if c > 0 else 0 for c in b]
    bn = [-c if c < 0 else 0 for c in b]
    ma = max(max(ap, default=0), max(an, default=0))
    mb = max(max(bp, default=0), max(bn, default=0))
    width = (ma.bit_length() + mb.bit_length()
             + min(len(a), len(b)).bit_length() + 8) & ~7
    n = len(a) + len(b) - 1

    def prod(x, y):
        if not any(x) or not any(y):
            return [0] * n
        v = int(mpz(_pack(x, width)) * mpz(_pack(y, width)))
        return _unpack(v, width, n)

    pp, nn = prod(ap, bp), prod(an, bn)
    pn, np_ = prod(ap, bn), prod(an, bp)
    return znormalize([pp[i] + nn[i] - pn[i] - np_[i] for i in range(n)])


def zcontent(a: list[int]) -> int:
    g = 0
    for c in a:
        g = math.gcd(g, c)
        if g == 1:
            break
    return g


def zdivexact(a: list[int], b: list[int]) -> list[int]:
    """Exact division in Z[t]; b must divide a (b primitive)."""
    if not b:
        raise ZeroDivisionError("integer-polynomial division by zero")
    if not a:
        return []
    rem = list(a)
    db, lead = len(b) - 1, b[-1]
    quot = [0] * (len(rem) - db)
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k]
        if c:
            q, r = divmod(c, lead)
            if r:
                raise ValueError("integer-polynomial division is not exact")
            quot[k - db] = q
            for i, cb in enumerate(b):
                rem[i + k - db] -= q * cb
    if any(rem):
        raise ValueError("integer-polynomial division is not exact")
    return znormalize(quot)


def zeval_pair(p: list[int], q: list[int], u: int, v: int):
    """Evaluate the fraction p/q at t = u/v homogeneously.

    Returns an integer pair (P, Q) with p(u/v)/q(u/v) = P/Q, using the
    common homogenization degree so that no fractions appear.
    """
    d = max(len(p), len(q)) - 1
    powv = [1] * (d + 1)
    for i in range(1, d + 1):
        powv[i] = powv[i - 1] * v
    pn = sum(c * u**i * powv[d - i] for i, c in enumerate(p))
    qn = sum(c * u**i * powv[d - i] for i, c in enumerate(q))
    return pn, qn


def from_poly(p: Poly) -> tuple[list[int], int]:
    """Poly over Q -> (integer coefficient list, common denominator)."""
    if p.is_zero:
        return [], 1
    den = math.lcm(*(c.denominator for c in p.coeffs))
    return [int(c * den) for c in p.coeffs], den


def to_poly(a: list[int], den: int = 1) -> Poly:
    return Poly(Fraction(c, den) for c in a)
