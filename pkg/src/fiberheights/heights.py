"""Naive and canonical heights over Q and Q(t).

Normalization, stated once and used everywhere: canonical heights are
relative to the symmetric degree-2 bundle cut out by the x-coordinate,

    hhat(P) = lim_m 4^{-m} * h(x([2^m]P)),

with NO extra factor 1/2. Over Q the naive height is h(p/q) =
log max(|p|, |q|); over Q(t) it is max(deg num, deg den). Doubling
multiplies hhat by exactly 4, and hhat vanishes exactly on torsion.

The limit is a Cauchy sequence with geometrically decaying differences:
|a_{m+1} - a_m| <= C * 4^{-m} for a constant C fitted from the observed
terms. The stopping rule and the reported error bound both come from that
geometric envelope; over Q(t) the differences eventually decay *exactly*
geometrically and the limit is reconstructed as an exact rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .doubling import XChainFF, XChainQ, log_of_int
from .errors import BudgetExceededError, InputError, StabilizationError
from .exactarith import RatFunc
from .weierstrass import Curve, Point, is_isotrivial, torsion_order

DEFAULT_TOL = 1e-6
DEFAULT_M_MAX_Q = 8
DEFAULT_M_MAX_FF = 6

# terms required before a fitted decay constant is trusted for early stop
_MIN_DIFFS_FOR_STOP = 3


def weil_height_q(x) -> float:
    """Weil height on P^1(Q): h(p/q) = log max(|p|, |q|), h(0) = 0."""
    x = Fraction(x)
    if x == 0:
        return 0.0
    return log_of_int(max(abs(x.numerator), x.denominator))


def naive_height_ff(x: RatFunc) -> int:
    """Degree height on Q(t): max(deg num, deg den); 0 iff constant."""
    num_deg = x.num.degree
    return max(num_deg if num_deg is not None else 0, x.den.degree)


def naive_point_height(curve: Curve, pt: Point):
    """Naive height of x(P); the point at infinity has height 0."""
    if pt.is_infinity:
        return 0 if curve.is_function_field else 0.0
    if curve.is_function_field:
        return naive_height_ff(pt.x)
    return weil_height_q(pt.x)


@dataclass(frozen=True)
class ConvergenceTrace:
    """The sequence a_m = q^{-m} * h(x([2^m]P)) with its scale factor."""

    terms: tuple  # ((m, a_m), ...), m increasing from 0
    q: int = 4

    def __post_init__(self):
        if len(self.terms) < 2:
            raise InputError("a convergence trace needs at least 2 terms")
        ms = [m for m, _ in self.terms]
        if ms[0] != 0 or any(b <= a for a, b in zip(ms, ms[1:])):
            raise InputError("trace indices must increase strictly from 0")

    @property
    def values(self) -> list[float]:
        return [a for _, a in self.terms]

    def scaled_diffs(self) -> list[float]:
        """|a_{m+1} - a_m| * q^m for consecutive terms."""
        vals = self.values
        return [abs(b - a) * self.q ** m
                for m, (a, b) in enumerate(zip(vals, vals[1:]))]

    @property
    def m_last(self) -> int:
        return self.terms[-1][0]


def cauchy_rate_check(trace: ConvergenceTrace) -> tuple[float, bool]:
    """Fit the geometric-decay constant and flag blow-up.

    Returns (C, ok) with C = max_m |a_{m+1} - a_m| * q^m and ok true iff
    every scaled difference is bounded by twice the first one.
    """
    if len(trace.terms) < 3:
        raise InputError("rate check needs at least 3 trace terms")
    scaled = trace.scaled_diffs()
    c = max(scaled)
    ok = all(s <= 2 * scaled[0] for s in scaled)
    return c, ok


def _decay_trend_ok(scaled: list[float], tol: float) -> bool:
    # no-blow-up test used for the budget decision: the late scaled
    # differences must not dominate the early ones (anchoring on the first
    # difference alone is too brittle when h(x(P)) happens to sit near the
    # limit already)
    if len(scaled) < 4:
        return True
    half = len(scaled) // 2
    late = max(scaled[half:])
    return late <= 2 * max(scaled[:half]) or late <= tol


@dataclass(frozen=True)
class HeightEstimate:
    """A converged canonical-height value with its certificate.

    ``value`` is the last trace term plus the geometric tail estimate
    (one third of the last difference), clamped at 0. ``error_bound`` is
    the rigorous tail bound (8/3) * C * q^{-m_last} implied by the fitted
    decay constant C.
    """

    value: float
    error_bound: float
    decay_constant: float
    trace: ConvergenceTrace

    def __post_init__(self):
        if self.value < 0 or self.error_bound < 0:
            raise InputError("height estimates are nonnegative")

    @property
    def m_used(self) -> int:
        return self.trace.m_last


def _run_limit(height_at: Callable[[int], float], q: int, m_max: int,
               tol: float, known_torsion: bool = False) -> HeightEstimate:
    """Drive the limit a_m = h_m / q^m with the geometric stopping rule.

    Stops at the first m (with at least _MIN_DIFFS_FOR_STOP differences
    observed) where C * q^{-m} / (q - 1) < tol, C refitted from all
    differences so far, and otherwise at m_max; raises BudgetExceededError
    when the differences show no geometric decay by m_max.
    """
    if m_max < 2:
        raise InputError("m_max must be at least 2")
    if tol <= 0:
        raise InputError("tol must be positive")
    terms = [(0, float(height_at(0)))]
    scaled: list[float] = []
    m = 0
    while m < m_max:
        m += 1
        a_prev = terms[-1][1]
        a_m = float(height_at(m)) / q**m
        terms.append((m, a_m))
        scaled.append(abs(a_m - a_prev) * q ** (m - 1))
        c = max(scaled)
        if (len(scaled) >= _MIN_DIFFS_FOR_STOP and c > 0
                and c * q**-m / (q - 1) < tol):
            break
    trace = ConvergenceTrace(tuple(terms), q)
    c = max(scaled)
    if m == m_max and not _decay_trend_ok(scaled, tol):
        raise BudgetExceededError(
            f"no geometric decay observed by m_max={m_max}", trace)
    if known_torsion:
        # torsion has canonical height exactly 0; the trace stays attached
        value, error_bound = 0.0, 0.0
    else:
        d_last = terms[-1][1] - terms[-2][1]
        value = max(terms[-1][1] + d_last / 3, 0.0)
        error_bound = (8 / 3) * c * q**-m
    return HeightEstimate(
        value=value,
        error_bound=error_bound,
        decay_constant=c,
        trace=trace,
    )


def canonical_height(curve: Curve, pt: Point, m_max: Optional[int] = None,
                     tol: float = DEFAULT_TOL) -> HeightEstimate:
    """Canonical height by the limit of 4^{-m} h(x([2^m]P)).

    Over Q(t) the trace carries the (rational) degree heights as floats;
    use canonical_height_ff_exact for the exact value. Known torsion
    points short-circuit to value 0 with the trace still attached.
    """
    curve.require_on_curve(pt)
    ff = curve.is_function_field
    if m_max is None:
        m_max = DEFAULT_M_MAX_FF if ff else DEFAULT_M_MAX_Q
    known_torsion = False
    if not ff or not is_isotrivial(curve):
        known_torsion = torsion_order(curve, pt) is not None
    if ff:
        chain = XChainFF(curve, pt)
        height_at = lambda m: float(chain.height_degree(m))
    else:
        chain = XChainQ(curve, pt)
        height_at = chain.naive_height
    return _run_limit(height_at, 4, m_max, tol, known_torsion=known_torsion)


def canonical_height_ff_exact(curve: Curve, pt: Point,
                              m_max: int = DEFAULT_M_MAX_FF) -> Fraction:
    """Exact canonical height over Q(t) from the stabilized degree sequence.

    The differences d_m = a_{m+1} - a_m of a_m = 4^{-m} deg h(x([2^m]P))
    eventually satisfy d_{m+1} = d_m / 4 exactly; once three consecutive
    ratios confirm the pattern the limit is the geometric sum
    a_m + (4/3) d_m. Torsion sections return 0 outright. Raises
    StabilizationError when the pattern is not confirmed by m_max.
    """
    if not curve.is_function_field:
        raise InputError("exact degree heights need a curve over Q(t)")
    curve.require_on_curve(pt)
    if is_isotrivial(curve):
        raise InputError("exact stabilization needs a non-isotrivial family")
    if torsion_order(curve, pt) is not None:
        return Fraction(0)
    chain = XChainFF(curve, pt)
    terms = [Fraction(chain.height_degree(m), 4**m) for m in range(m_max + 1)]
    diffs = [b - a for a, b in zip(terms, terms[1:])]
    for k in range(len(diffs) - 3):
        if all(diffs[k + i + 1] * 4 == diffs[k + i] for i in range(3)):
            anchor = k + 3
            return terms[anchor] + diffs[anchor] * Fraction(4, 3)
    raise StabilizationError(
        f"degree sequence not exactly geometric by m_max={m_max}", terms)
