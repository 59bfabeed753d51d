"""Deterministic CSV/JSON artifact writers.

Every file starts with a header block: the normalization convention, the
tool version, and an echo of the run configuration. Numeric fields are
either exact "p/q" strings or decimals with exactly 12 significant
digits, so identical configurations produce byte-identical files. The
parallelism degree and output directory are execution details and are
deliberately left out of the echo.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path

from . import __version__
from .exactarith import format_rational
from .heights import ConvergenceTrace, HeightEstimate
from .specialization import SurveyResult
from .zhangscan import ScanReport

NORMALIZATION_NOTE = ("canonical heights are relative to the degree-2 "
                      "symmetric bundle 2(O): hhat = lim 4^-m h(x([2^m]P)), "
                      "no factor 1/2")


def fmt(x: float) -> str:
    """Decimal with exactly 12 significant digits."""
    return f"{float(x):.11e}"


def fmt_value(x) -> str:
    """Exact "p/q" for rationals and ints, 12 significant digits otherwise."""
    if isinstance(x, (Fraction, int)):
        return format_rational(Fraction(x))
    return fmt(x)


def header_lines(config: dict) -> list[str]:
    lines = [
        f"# tool: fiberheights {__version__}",
        f"# normalization: {NORMALIZATION_NOTE}",
    ]
    for key in sorted(config):
        lines.append(f"# {key}: {config[key]}")
    return lines


def write_csv(path, config: dict, columns: list[str], rows) -> None:
    buf = io.StringIO()
    for line in header_lines(config):
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(row)
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def write_json(path, config: dict, payload: dict) -> None:
    obj = {
        "meta": {
            "tool": f"fiberheights {__version__}",
            "normalization": NORMALIZATION_NOTE,
            **{k: config[k] for k in sorted(config)},
        },
        **payload,
    }
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def trace_columns() -> list[str]:
    return ["m", "a_m", "diff_scaled"]


def trace_rows(trace: ConvergenceTrace) -> list[list[str]]:
    scaled = trace.scaled_diffs()
    rows = []
    for i, (m, a) in enumerate(trace.terms):
        d = fmt(scaled[i]) if i < len(scaled) else ""
        rows.append([str(m), fmt(a), d])
    return rows


def estimate_payload(est: HeightEstimate) -> dict:
    return {
        "value": fmt(est.value),
        "error_bound": fmt(est.error_bound),
        "decay_constant": fmt(est.decay_constant),
        "m_used": est.m_used,
        "trace": [[m, fmt(a)] for m, a in est.trace.terms],
    }


SURVEY_COLUMNS = ["t0", "h_t", "hhat_fiber", "hhat_section_route",
                  "route_gap", "error_term", "m_used_fiber", "m_used_section"]


def survey_rows(result: SurveyResult) -> list[list[str]]:
    rows = []
    for r in result.records:
        rows.append([
            format_rational(r.t0),
            fmt(r.h_t),
            fmt(r.hhat_fiber.value),
            fmt(r.hhat_section_route.value),
            fmt(r.route_gap),
            fmt(r.error_term),
            str(r.hhat_fiber.m_used),
            str(r.hhat_section_route.m_used),
        ])
    return rows


def survey_summary_payload(result: SurveyResult) -> dict:
    skipped = []
    for s in result.skipped:
        entry = {"t0": format_rational(s.t0), "h_t": fmt(s.h_t),
                 "reason": s.reason}
        if s.hhat_fiber is not None:
            entry["hhat_fiber"] = fmt(s.hhat_fiber.value)
        if s.error_term is not None:
            entry["error_term"] = fmt(s.error_term)
        skipped.append(entry)
    return {
        "degM": format_rational(result.deg_m_exact)
        if result.deg_m_exact is not None else None,
        "degM_real": fmt(result.deg_m_real),
        "degM_error": fmt(result.deg_m_error),
        "max_abs_error": fmt(result.max_abs_error),
        "bad_parameters": [format_rational(t) for t in result.bad_parameters],
        "skipped": skipped,
        "n_records": len(result.records),
    }


CENSUS_COLUMNS = ["t0", "hhat", "error_bound"]


def census_rows(entries) -> list[list[str]]:
    return [[format_rational(e.t0), fmt(e.estimate.value),
             fmt(e.estimate.error_bound)] for e in entries]


def scan_payload(report: ScanReport) -> dict:
    return {
        "epsilon": fmt(report.epsilon) if report.epsilon is not None else None,
        "B": fmt(report.bound),
        "small_set": [[format_rational(e.t0), fmt(e.estimate.value)]
                      for e in report.small_set],
        "undecided": [[format_rational(e.t0), fmt(e.estimate.value),
                       fmt(e.estimate.error_bound)]
                      for e in report.undecided],
        "census_size": report.census_size,
        "e1_hat": fmt(report.e1_hat),
        "essmin_trace": [[fmt(b), fmt(v)] for b, v in report.essmin_trace],
        "degM": format_rational(report.deg_m_exact)
        if report.deg_m_exact is not None else None,
        "degM_real": fmt(report.deg_m_real),
        "sandwich_low": fmt(report.sandwich_low),
        "sandwich_high": fmt(report.sandwich_high),
        "bigness_verdict": report.bigness_verdict,
        "skipped": [{"t0": format_rational(s.t0), "reason": s.reason}
                    for s in report.skipped],
    }
