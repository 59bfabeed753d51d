"""Specializing a family at parameters and comparing height routes.

A fiber at t0 has good reduction when the discriminant does not vanish
and neither the coefficients nor the section hit a pole. At such fibers
two independent computations of the fiberwise canonical height exist:

* fiber route: specialize first, then run the limit on the fiber curve;
* section route: double the section in Q(t) once and for all, then
  evaluate each doubled x-coordinate at t0.

At good reduction the two routes produce the same rationals term by term
(specialization commutes with the group law), which is the sharpest
correctness oracle this package has, and both limits equal the value of
the extended height function at t0. The survey records, for every good
parameter up to a height bound, both heights and the error term against
deg(M) * h(t0), where deg(M) is the exact function-field height of the
section.

Parameters that fail (bad reduction, or a parameter colliding with a pole
of a doubled section coordinate) are reported as structured skip records,
never silently dropped.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .doubling import XChainFF
from .errors import (
    BadReductionError,
    IntermediatePoleError,
    IsotrivialFamilyError,
    PoleError,
    SingularCurveError,
    StabilizationError,
)
from .exactarith import RatFunc, rational_roots
from .heights import (
    DEFAULT_M_MAX_FF,
    DEFAULT_M_MAX_Q,
    DEFAULT_TOL,
    HeightEstimate,
    _run_limit,
    canonical_height,
    canonical_height_ff_exact,
    weil_height_q,
)
from .weierstrass import Curve, Family, Point


def _pole_params(f: RatFunc) -> set[Fraction]:
    if f.den.degree == 0:
        return set()
    return set(rational_roots(f.den))


def bad_parameter_causes(fam: Family) -> dict[Fraction, list[str]]:
    """Map each bad rational parameter to the reasons it is bad."""
    causes: dict[Fraction, list[str]] = {}

    def note(t0: Fraction, cause: str) -> None:
        causes.setdefault(t0, [])
        if cause not in causes[t0]:
            causes[t0].append(cause)

    for f in (fam.curve.a, fam.curve.b):
        for t0 in _pole_params(f):
            note(t0, "coefficient-pole")
    sec = fam.section
    if not sec.is_infinity:
        for f in (sec.x, sec.y):
            for t0 in _pole_params(f):
                note(t0, "section-pole")
    disc = fam.curve.discriminant
    for t0 in rational_roots(disc.num):
        if t0 not in _pole_params(fam.curve.a) | _pole_params(fam.curve.b):
            note(t0, "discriminant-root")
    return causes


def bad_parameters(fam: Family) -> frozenset[Fraction]:
    """Rational parameters of bad reduction: discriminant roots plus the
    poles of the coefficients and of the section coordinates."""
    return frozenset(bad_parameter_causes(fam))


def specialize_curve(fam: Family, t0: Fraction) -> Curve:
    """The fiber curve at t0; raises BadReductionError naming the cause."""
    t0 = Fraction(t0)
    try:
        a = fam.curve.a.evaluate(t0)
        b = fam.curve.b.evaluate(t0)
    except PoleError as exc:
        raise BadReductionError(
            f"coefficient pole at t = {t0}", t0, "coefficient-pole") from exc
    try:
        return Curve(a, b)
    except SingularCurveError as exc:
        raise BadReductionError(
            f"discriminant vanishes at t = {t0}", t0, "discriminant-root") from exc


def specialize_point(fam: Family, t0: Fraction) -> Point:
    """The specialized section at t0; exact, and exactly on the fiber."""
    t0 = Fraction(t0)
    sec = fam.section
    if sec.is_infinity:
        return Point.infinity()
    try:
        return Point(sec.x.evaluate(t0), sec.y.evaluate(t0))
    except PoleError as exc:
        raise BadReductionError(
            f"section pole at t = {t0}", t0, "section-pole") from exc


def fiber_height(fam: Family, t0: Fraction, tol: float = DEFAULT_TOL,
                 m_max: int = DEFAULT_M_MAX_Q) -> HeightEstimate:
    """Canonical height of the specialized section on the fiber at t0."""
    curve = specialize_curve(fam, t0)
    pt = specialize_point(fam, t0)
    curve.require_on_curve(pt)
    return canonical_height(curve, pt, m_max=m_max, tol=tol)


class SectionChain:
    """Doubled section x-coordinates of a family, shared across fibers."""

    def __init__(self, fam: Family, m_max: int = DEFAULT_M_MAX_FF):
        self.family = fam
        self.m_max = m_max
        self._chain = XChainFF(fam.curve, fam.section)

    def precompute(self) -> "SectionChain":
        self._chain.level(self.m_max)
        return self

    def x_ratfunc(self, m: int):
        return self._chain.x_ratfunc(m)

    def height_at(self, m: int, t0: Fraction) -> float:
        """h(x([2^m]P)(t0)); raises IntermediatePoleError on a collision."""
        if self._chain.is_infinity_level(m):
            return 0.0
        x = self._chain.evaluate_x(m, t0)
        if x is None:
            raise IntermediatePoleError(
                f"t = {t0} is a pole of x([2^{m}]P)", t0, m)
        return weil_height_q(x)

    def x_at(self, m: int, t0: Fraction) -> Optional[Fraction]:
        """Specialized x([2^m]P)(t0); None when the multiple is infinity."""
        if self._chain.is_infinity_level(m):
            return None
        x = self._chain.evaluate_x(m, t0)
        if x is None:
            raise IntermediatePoleError(
                f"t = {t0} is a pole of x([2^{m}]P)", t0, m)
        return x


def section_route_height(fam: Family, t0: Fraction, tol: float = DEFAULT_TOL,
                         m_max: int = DEFAULT_M_MAX_FF,
                         chain: Optional[SectionChain] = None) -> HeightEstimate:
    """Fiber height via the doubled section: a_m = 4^{-m} h(x([2^m]P)(t0)).

    Requires good reduction at t0 and no collision of t0 with a pole of
    any needed doubled x-coordinate (IntermediatePoleError otherwise).
    """
    t0 = Fraction(t0)
    specialize_curve(fam, t0)  # surfaces bad reduction as the right error
    if chain is None:
        chain = SectionChain(fam, m_max)
    return _run_limit(lambda m: chain.height_at(m, t0), 4, m_max, tol)


@dataclass(frozen=True)
class FiberRecord:
    """One good fiber with both height routes and its error term."""

    t0: Fraction
    h_t: float
    hhat_fiber: HeightEstimate
    hhat_section_route: HeightEstimate
    error_term: float
    good_reduction: bool = True

    @property
    def route_gap(self) -> float:
        return abs(self.hhat_fiber.value - self.hhat_section_route.value)


@dataclass(frozen=True)
class SkipRecord:
    """A parameter the survey could not fully process, with the reason.

    Intermediate-pole skips still carry the fiber-route height and error
    term; bad-reduction skips carry neither.
    """

    t0: Fraction
    h_t: float
    reason: str
    hhat_fiber: Optional[HeightEstimate] = None
    error_term: Optional[float] = None


@dataclass(frozen=True)
class SurveyResult:
    """Everything a height-error survey produced."""

    label: str
    bound: float
    tol: float
    m_max_fiber: int
    m_max_section: int
    deg_m_exact: Optional[Fraction]
    deg_m_real: float
    deg_m_error: float
    records: tuple
    skipped: tuple
    bad_parameters: tuple
    max_abs_error: float


_SURVEY_STATE: dict = {}


def _survey_init(state: dict) -> None:
    _SURVEY_STATE.update(state)


def _survey_one(t0: Fraction):
    fam = _SURVEY_STATE["fam"]
    chain = _SURVEY_STATE["chain"]
    tol = _SURVEY_STATE["tol"]
    m_fiber = _SURVEY_STATE["m_max_fiber"]
    m_section = _SURVEY_STATE["m_max_section"]
    deg_m = _SURVEY_STATE["deg_m_real"]
    causes = _SURVEY_STATE["causes"]
    h_t = weil_height_q(t0)
    if t0 in causes:
        return SkipRecord(t0, h_t, "bad-reduction:" + "+".join(causes[t0]))
    fiber = fiber_height(fam, t0, tol=tol, m_max=m_fiber)
    err = fiber.value - deg_m * h_t
    try:
        section = section_route_height(fam, t0, tol=tol, m_max=m_section,
                                       chain=chain)
    except IntermediatePoleError as exc:
        return SkipRecord(t0, h_t, f"intermediate-pole:m={exc.m}",
                          hhat_fiber=fiber, error_term=err)
    return FiberRecord(t0, h_t, fiber, section, err)


def _parallel_map(fn, items, jobs, state, init=None):
    """Order-preserving map over independent fibers.

    The worker state travels through the pool initializer, so results are
    byte-identical whatever the parallelism degree: outputs are merged in
    input order.
    """
    init = init or _survey_init
    items = list(items)
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs <= 1 or len(items) <= 1:
        init(state)
        return [fn(it) for it in items]
    chunk = math.ceil(len(items) / jobs)
    with ProcessPoolExecutor(max_workers=jobs, initializer=init,
                             initargs=(state,)) as ex:
        return list(ex.map(fn, items, chunksize=chunk))


def survey_parameter_order(t0: Fraction) -> tuple:
    """Deterministic survey merge order: (h(t0), numerator, denominator)."""
    return (weil_height_q(t0), t0.numerator, t0.denominator)


def tate_error_survey(fam: Family, bound: float, tol: float = DEFAULT_TOL,
                      m_max_fiber: int = DEFAULT_M_MAX_Q,
                      m_max_section: int = DEFAULT_M_MAX_FF,
                      jobs: int = 1) -> SurveyResult:
    """Survey every rational parameter of Weil height <= bound.

    Emits a FiberRecord for each good fiber where both routes complete,
    structured skip records for the rest, and the maximum |error term|
    across all fibers whose fiber-route height exists.
    """
    if fam.is_isotrivial:
        raise IsotrivialFamilyError("the error survey needs a non-isotrivial family")
    from .zhangscan import enumerate_parameters

    deg_m_exact: Optional[Fraction] = None
    try:
        deg_m_exact = canonical_height_ff_exact(fam.curve, fam.section)
        deg_m_real, deg_m_error = float(deg_m_exact), 0.0
    except StabilizationError:
        est = canonical_height(fam.curve, fam.section, tol=tol)
        deg_m_real, deg_m_error = est.value, est.error_bound

    params = sorted(enumerate_parameters(bound), key=survey_parameter_order)
    chain = SectionChain(fam, m_max_section).precompute()
    state = {
        "fam": fam,
        "chain": chain,
        "tol": tol,
        "m_max_fiber": m_max_fiber,
        "m_max_section": m_max_section,
        "deg_m_real": deg_m_real,
        "causes": bad_parameter_causes(fam),
    }
    outcomes = _parallel_map(_survey_one, params, jobs, state)

    records = tuple(r for r in outcomes if isinstance(r, FiberRecord))
    skipped = tuple(r for r in outcomes if isinstance(r, SkipRecord))
    errors = [r.error_term for r in records]
    errors += [r.error_term for r in skipped if r.error_term is not None]
    return SurveyResult(
        label=fam.label,
        bound=bound,
        tol=tol,
        m_max_fiber=m_max_fiber,
        m_max_section=m_max_section,
        deg_m_exact=deg_m_exact,
        deg_m_real=deg_m_real,
        deg_m_error=deg_m_error,
        records=records,
        skipped=skipped,
        bad_parameters=tuple(sorted(bad_parameters(fam))),
        max_abs_error=max((abs(e) for e in errors), default=0.0),
    )
