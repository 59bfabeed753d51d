"""Bounded-height parameter scans: small-height census, essential minimum,
and the self-intersection sandwich.

The scan walks every reduced rational t0 with log max(|p|, q) <= B. The
census decides membership of {t0 : hhat(t0) <= epsilon} by interval
arithmetic on the height estimates, escalating the tolerance (and the
doubling budget with it) before ever declaring a fiber undecided. The
essential-minimum estimator mirrors the sup-inf definition at sample
scale: open subsets of the base curve are cofinite, so it discards the
finitely many near-zero minimizers seen at the previous height tier and
re-takes the infimum.

Only Q-rational parameters are scanned. That is a stated limitation of
the tool, not of the statements it probes, which quantify over all
algebraic parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import (
    IsotrivialFamilyError,
    NonpositiveDegreeError,
    StabilizationError,
    TorsionSectionError,
)
from .heights import (
    DEFAULT_M_MAX_Q,
    DEFAULT_TOL,
    HeightEstimate,
    canonical_height,
    canonical_height_ff_exact,
    weil_height_q,
)
from .specialization import (
    SkipRecord,
    _parallel_map,
    bad_parameter_causes,
    fiber_height,
)
from .weierstrass import Family, torsion_order

VERDICT_BIG = "consistent-with-big"
VERDICT_UNDETERMINED = "undetermined"

# tolerance escalation ladder for borderline census fibers; the doubling
# budget deepens alongside so the tighter tolerance is actually reachable
_ESCALATION = ((1, 0), (16, 2), (256, 4))


def height_bound_to_int(bound: float) -> int:
    """Largest N with log N <= bound (within one float ulp of the bound)."""
    if bound < 0:
        return 0
    return int(math.floor(math.exp(bound) * (1 + 1e-12) + 1e-12))


def enumerate_parameters(bound: float) -> list[Fraction]:
    """All reduced p/q with log max(|p|, q) <= bound, each exactly once,
    sorted by (height, |p|, q, sign)."""
    n = height_bound_to_int(bound)
    out = []
    for q in range(1, n + 1):
        for p in range(-n, n + 1):
            if math.gcd(abs(p), q) == 1:
                out.append(Fraction(p, q))
    out.sort(key=lambda r: (max(abs(r.numerator), r.denominator),
                            abs(r.numerator), r.denominator,
                            0 if r >= 0 else 1))
    return out


def _require_scannable(fam: Family) -> None:
    if fam.is_isotrivial:
        raise IsotrivialFamilyError(
            "the scan hypotheses need a non-isotrivial family")
    if torsion_order(fam.curve, fam.section) is not None:
        raise TorsionSectionError(
            "the scan hypotheses need a non-torsion section")


_FIBER_STATE: dict = {}


def _fiber_init(state: dict) -> None:
    _FIBER_STATE.update(state)


def _fiber_one(t0: Fraction):
    fam = _FIBER_STATE["fam"]
    causes = _FIBER_STATE["causes"]
    if t0 in causes:
        return SkipRecord(t0, weil_height_q(t0),
                          "bad-reduction:" + "+".join(causes[t0]))
    return fiber_height(fam, t0, tol=_FIBER_STATE["tol"],
                        m_max=_FIBER_STATE["m_max"])


def collect_fiber_heights(fam: Family, bound: float, tol: float = DEFAULT_TOL,
                          m_max: int = DEFAULT_M_MAX_Q, jobs: int = 1):
    """Fiber heights for every enumerated parameter up to the bound.

    Returns (heights, skipped): an ordered {t0: HeightEstimate} over good
    fibers and the skip records for bad ones.
    """
    params = enumerate_parameters(bound)
    state = {"fam": fam, "causes": bad_parameter_causes(fam),
             "tol": tol, "m_max": m_max}
    outcomes = _parallel_map(_fiber_one, params, jobs, state,
                             init=_fiber_init)
    heights = {}
    skipped = []
    for t0, res in zip(params, outcomes):
        if isinstance(res, SkipRecord):
            skipped.append(res)
        else:
            heights[t0] = res
    return heights, skipped


@dataclass(frozen=True)
class CensusEntry:
    t0: Fraction
    estimate: HeightEstimate


@dataclass(frozen=True)
class ScanReport:
    """Aggregate result of a small-height scan."""

    label: str
    epsilon: Optional[float]
    bound: float
    tol: float
    small_set: tuple            # CensusEntry, heights <= epsilon
    undecided: tuple            # CensusEntry, membership not certified
    census_size: int
    e1_hat: float
    essmin_trace: tuple         # (tier_bound, inf at that tier)
    deg_m_exact: Optional[Fraction]
    deg_m_real: float
    sandwich_low: float
    sandwich_high: float
    bigness_verdict: str
    skipped: tuple = ()


def small_height_census(fam: Family, bound: float, epsilon: float,
                        tol: float = DEFAULT_TOL, jobs: int = 1,
                        fibers: Optional[dict] = None):
    """Members of {good t0 : hhat(t0) <= epsilon} up to the height bound.

    Membership uses value + error_bound <= epsilon, exclusion uses
    value - error_bound > epsilon; borderline fibers re-run on the
    escalation ladder and land in the undecided annex only after it is
    exhausted. Returns (small_set, undecided, skipped).
    """
    _require_scannable(fam)
    if fibers is None:
        fibers, skipped = collect_fiber_heights(fam, bound, tol, jobs=jobs)
    else:
        skipped = []
    small, undecided = [], []
    for t0, est in fibers.items():
        verdict = None
        for factor, extra_m in _ESCALATION:
            if factor > 1:
                est = fiber_height(fam, t0, tol=tol / factor,
                                   m_max=DEFAULT_M_MAX_Q + extra_m)
            if est.value + est.error_bound <= epsilon:
                verdict = True
            elif est.value - est.error_bound > epsilon:
                verdict = False
            if verdict is not None:
                break
        if verdict is True:
            small.append(CensusEntry(t0, est))
        elif verdict is None:
            undecided.append(CensusEntry(t0, est))
    return tuple(small), tuple(undecided), tuple(skipped)


def essential_minimum_estimate(fam: Family, bound: float,
                               tol: float = DEFAULT_TOL, jobs: int = 1,
                               fibers: Optional[dict] = None):
    """Sample essential minimum: discard the near-zero minimizers seen at
    the previous height tier, then take the smallest remaining fiber
    height at the full bound.

    Returns (e1_hat, trace) where trace lists (tier, inf over the tier)
    for every distinct parameter height tier up to the bound.
    """
    _require_scannable(fam)
    if fibers is None:
        fibers, _ = collect_fiber_heights(fam, bound, tol, jobs=jobs)
    if not fibers:
        return 0.0, ()
    heights = {t0: est.value for t0, est in fibers.items()}
    tiers = sorted({weil_height_q(t0) for t0 in heights})
    trace = []
    for tier in tiers:
        vals = [v for t0, v in heights.items() if weil_height_q(t0) <= tier]
        trace.append((tier, min(vals)))
    prev_tier = tiers[-2] if len(tiers) > 1 else tiers[-1]
    discard = {t0 for t0, v in heights.items()
               if weil_height_q(t0) <= prev_tier and v <= tol}
    remaining = sorted(v for t0, v in heights.items() if t0 not in discard)
    e1_hat = remaining[0] if remaining else 0.0
    return e1_hat, tuple(trace)


def zhang_sandwich(e1_hat: float, deg_m: float):
    """Bounds deg(M)*e1/2 <= self-intersection <= deg(M)*e1.

    The verdict is consistent-with-big exactly when the lower bound is
    positive. Nonpositive deg(M) means a torsion or zero-height section
    slipped through a guard and is refused.
    """
    if deg_m <= 0:
        raise NonpositiveDegreeError(
            f"deg M = {deg_m} is not positive; the underlying bundle must be ample")
    if e1_hat < 0:
        raise NonpositiveDegreeError(f"e1 = {e1_hat} must be nonnegative")
    high = deg_m * e1_hat
    low = high / 2
    verdict = VERDICT_BIG if low > 0 else VERDICT_UNDETERMINED
    return low, high, verdict


def run_scan(fam: Family, bound: float, epsilon: Optional[float] = None,
             tol: float = DEFAULT_TOL, jobs: int = 1) -> ScanReport:
    """Census + essential minimum + sandwich in one pass over the fibers."""
    _require_scannable(fam)
    try:
        deg_m_exact = canonical_height_ff_exact(fam.curve, fam.section)
        deg_m_real = float(deg_m_exact)
    except StabilizationError:
        deg_m_exact = None
        deg_m_real = canonical_height(fam.curve, fam.section, tol=tol).value
    fibers, skipped = collect_fiber_heights(fam, bound, tol, jobs=jobs)
    if epsilon is not None:
        small, undecided, _ = small_height_census(
            fam, bound, epsilon, tol, jobs=jobs, fibers=fibers)
    else:
        small, undecided = (), ()
    e1_hat, trace = essential_minimum_estimate(
        fam, bound, tol, jobs=jobs, fibers=fibers)
    low, high, verdict = zhang_sandwich(e1_hat, deg_m_real)
    return ScanReport(
        label=fam.label,
        epsilon=epsilon,
        bound=bound,
        tol=tol,
        small_set=small,
        undecided=undecided,
        census_size=len(small),
        e1_hat=e1_hat,
        essmin_trace=trace,
        deg_m_exact=deg_m_exact,
        deg_m_real=deg_m_real,
        sandwich_low=low,
        sandwich_high=high,
        bigness_verdict=verdict,
        skipped=tuple(skipped),
    )
