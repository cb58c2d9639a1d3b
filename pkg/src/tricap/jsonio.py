"""Canonical report serialization.

Reports are plain dicts with a fixed key order, rendered by one dumps
function, so the same computation always produces byte-identical output.
Three conventions keep the files exact and portable: counts that can
exceed 2^53 are emitted as decimal strings, rationals are emitted as
"p/q" strings (always with the denominator), and floats go through
repr, which round-trips. Nothing here ever writes a timing.

Every top-level report opens with the same envelope: tool, version,
command, seed. Commands without randomness carry a null seed.
"""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from typing import Any

from .energy import HolderReport, SmoothingReport
from .gf3core import Density
from .randomsel import NullityExperiment
from .spectrum import IncrementReport, SpectrumSet, SubspaceSpectrumStats
from .structure import (
    AdditiveStructure,
    BsgProbe,
    ComityBand,
    FiberDecomposition,
    LevelDecomposition,
    MartingaleReport,
)
from .version import VERSION

__all__ = [
    "dumps_canonical",
    "envelope",
    "frac_str",
    "render_csv",
    "report_comity",
    "report_energy",
    "report_fibers",
    "report_holder",
    "report_increment",
    "report_levels",
    "report_martingale",
    "report_nullity",
    "report_probe",
    "report_smoothing",
    "report_spectrum",
    "report_subspace_stats",
    "nullity_csv_rows",
]


def frac_str(x: Fraction | Density | int) -> str:
    if isinstance(x, Density):
        x = x.fraction
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def envelope(command: str, seed: int | None) -> dict[str, Any]:
    return {"tool": "tricap", "version": VERSION, "command": command, "seed": seed}


def dumps_canonical(report: dict[str, Any]) -> str:
    """Deterministic rendering: fixed key order, two-space indent."""
    return json.dumps(report, indent=2, ensure_ascii=True, allow_nan=False) + "\n"


def render_csv(header: list[str], rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# -- report builders, one per subsystem ----------------------------------------


def report_increment(rep: IncrementReport) -> dict[str, Any]:
    return {
        "codim": rep.codim,
        "density": frac_str(rep.density),
        "excess": frac_str(rep.excess),
        "basis": list(rep.basis),
        "shift": rep.shift,
    }


def report_spectrum(spec: SpectrumSet, increments: list[IncrementReport]) -> dict[str, Any]:
    return {
        "n": spec.n,
        "set_size": spec.base.size,
        "rho": frac_str(spec.rho()),
        "spectrum_size": spec.size,
        "threshold_c": frac_str(spec.threshold_c),
        "increments": [report_increment(r) for r in increments],
    }


def report_subspace_stats(stats: SubspaceSpectrumStats) -> dict[str, Any]:
    return {
        "dim": stats.dim,
        "member_count": stats.member_count,
        "weight": str(stats.weight),
        "weight_normalized": stats.weight_normalized,
        "count_reference": stats.count_reference,
        "weight_reference": stats.weight_reference,
    }


def report_energy(size: int, e4: int | None, e8: int | None,
                  e2m: dict[int, int], sigma_eff: float | None) -> dict[str, Any]:
    out: dict[str, Any] = {"size": size}
    if e4 is not None:
        out["E4"] = str(e4)
    if e8 is not None:
        out["E8"] = str(e8)
    if e2m:
        out["E2m"] = {str(m): str(v) for m, v in sorted(e2m.items())}
    if sigma_eff is not None:
        out["sigma_eff"] = sigma_eff
    return out


def report_holder(rep: HolderReport) -> dict[str, Any]:
    return {
        "m": rep.m,
        "size": rep.size,
        "E4": str(rep.e4),
        "E8": None if rep.e8 is None else str(rep.e8),
        "E2m": str(rep.e2m),
        "part1_holds": rep.part1_holds,
        "part2_holds": rep.part2_holds,
    }


def report_smoothing(rep: SmoothingReport) -> dict[str, Any]:
    return {
        "size": rep.size,
        "scale_n": rep.scale_n,
        "epsilon": rep.epsilon,
        "E8": str(rep.e8),
        "sigma_eff": rep.sigma_eff,
        "boundary": rep.boundary,
        "within_boundary": rep.within_boundary,
    }


def report_levels(levels: LevelDecomposition) -> dict[str, Any]:
    return {
        "n": levels.base.n,
        "set_size": levels.base.size,
        "band_count": len(levels),
        "bands": [
            {
                "m_lo": b.m_lo,
                "m_hi": 2 * b.m_lo,
                "G_size": b.pair_count,
                "D_size": b.diffs.size,
                "alpha_eff": b.band_exponent,
            }
            for b in levels
        ],
    }


def report_comity(struct: AdditiveStructure, bands: list[ComityBand],
                  komity_value: int) -> dict[str, Any]:
    n = struct.base.n
    return {
        "m_lo": struct.m_lo,
        "D_size": struct.diffs.size,
        "G_size": struct.pair_count,
        "komity": str(komity_value),
        "bands": [
            {
                "size_lo": b.size_lo,
                "size_hi": 2 * b.size_lo,
                "pairs": b.pair_count,
                "mass": str(b.mass),
                "beta_eff": (math.log(b.size_lo) / math.log(n)) if n >= 2 else float("nan"),
            }
            for b in bands
        ],
    }


def report_fibers(dec: FiberDecomposition) -> dict[str, Any]:
    return {
        "n": dec.base.n,
        "set_size": dec.base.size,
        "dim_h": dec.h.dim,
        "fiber_count": dec.fiber_count,
        "fibers": [
            {"rep": str(rep), "size": fiber.size} for rep, fiber in dec.items()
        ],
    }


def report_martingale(rep: MartingaleReport) -> dict[str, Any]:
    return {
        "dim_h": rep.dim_h,
        "dim_k": rep.dim_k,
        "lhs": str(rep.lhs),
        "rhs": str(rep.rhs),
        "h_term": str(rep.h_term),
        "fiber_term": str(rep.fiber_term),
        "raw_lhs": str(rep.raw_lhs),
        "raw_rhs": str(rep.raw_rhs),
        "holds": rep.holds,
    }


def report_probe(probe: BsgProbe) -> dict[str, Any]:
    return {
        "heuristic": True,
        "kernel_size": probe.kernel_size,
        "center_count": probe.center_count,
        "covered": probe.covered,
        "coverage": frac_str(probe.coverage),
        "coverage_float": float(probe.coverage),
    }


def report_nullity(exp: NullityExperiment) -> dict[str, Any]:
    return {
        "n": exp.n,
        "source_size": exp.source_size,
        "d": exp.d,
        "trials": exp.trials,
        "seed": exp.seed,
        "histogram": {str(k): v for k, v in exp.histogram.items()},
        "tails": [
            {
                "k": k,
                "empirical": frac_str(tail),
                "empirical_float": float(tail),
                "reference": ref,
            }
            for k, tail, ref in exp.tail_rows()
        ],
    }


def nullity_csv_rows(exp: NullityExperiment) -> tuple[list[str], list[list[Any]]]:
    header = ["k", "count", "empirical", "reference"]
    rows = [
        [k, exp.histogram.get(k, 0), frac_str(tail), ref]
        for k, tail, ref in exp.tail_rows()
    ]
    return header, rows
