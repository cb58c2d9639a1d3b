"""Exact-arithmetic toolkit for additive combinatorics over F_3^n.

Point sets live as sorted index arrays over the 3^n cube, characters
take values in the Eisenstein integers, and every identity the package
checks (Plancherel, cube sums against line counts, energy moments,
fiber decompositions) is evaluated in exact integer or rational
arithmetic. Floats appear only in report-level diagnostics that are
defined as logarithms.
"""

from .capset import (
    PointSet,
    count_line_solutions,
    exhaustive_max_capset,
    greedy_random_capset,
    is_capset,
    load_point_set,
    product_capset,
    random_point_set,
    save_point_set,
)
from .energy import (
    cross_quadruples,
    diff_multiplicity,
    e2m,
    e4,
    holder_check,
    quadruple_participation,
    smoothing_report,
)
from .errors import (
    DimensionMismatchError,
    GuardExceededError,
    IdentityViolationError,
    SetFileError,
)
from .fourier import (
    SpectrumTable,
    balanced_transform,
    cube_sum,
    eval_at,
    inverse_table,
    load_table,
    plancherel_check,
    save_table,
    subspace_weight,
    transform_point_set,
    transform_table,
)
from .gf3core import Density, Eisenstein, TritVector, character
from .linalg import Subspace, nullity, rank
from .randomsel import (
    expected_tuples,
    g_exact,
    h_exact,
    nullity_distribution,
    sample_without_replacement,
)
from .rng import make_rng
from .selftest import SELFTEST_SEED, criterion_ids, run_criterion, run_selftest
from .spectrum import (
    AffineSubspace,
    IncrementReport,
    SpectrumSet,
    coset_counts,
    extract_spectrum,
    sampled_increment_checks,
    scan_codim1_increments,
    strong_increment_check,
    subspace_spectrum_stats,
)
from .structure import (
    bsg_probe,
    build_levels,
    comity_scan,
    decompose_fibers,
    delta_g,
    doubling_ratio,
    fiber_plancherel_check,
    komity,
    komity_reference,
    span_hull,
)
from .version import VERSION as __version__

__all__ = [
    "AffineSubspace",
    "Density",
    "DimensionMismatchError",
    "Eisenstein",
    "GuardExceededError",
    "IdentityViolationError",
    "IncrementReport",
    "PointSet",
    "SELFTEST_SEED",
    "SetFileError",
    "SpectrumSet",
    "SpectrumTable",
    "Subspace",
    "TritVector",
    "__version__",
    "balanced_transform",
    "bsg_probe",
    "build_levels",
    "character",
    "comity_scan",
    "coset_counts",
    "count_line_solutions",
    "criterion_ids",
    "cross_quadruples",
    "cube_sum",
    "decompose_fibers",
    "delta_g",
    "diff_multiplicity",
    "doubling_ratio",
    "e2m",
    "e4",
    "eval_at",
    "exhaustive_max_capset",
    "expected_tuples",
    "extract_spectrum",
    "fiber_plancherel_check",
    "g_exact",
    "greedy_random_capset",
    "h_exact",
    "holder_check",
    "inverse_table",
    "is_capset",
    "komity",
    "komity_reference",
    "load_point_set",
    "load_table",
    "make_rng",
    "nullity",
    "nullity_distribution",
    "plancherel_check",
    "product_capset",
    "quadruple_participation",
    "random_point_set",
    "rank",
    "run_criterion",
    "run_selftest",
    "sample_without_replacement",
    "sampled_increment_checks",
    "save_point_set",
    "save_table",
    "scan_codim1_increments",
    "smoothing_report",
    "span_hull",
    "strong_increment_check",
    "subspace_spectrum_stats",
    "subspace_weight",
    "transform_point_set",
    "transform_table",
]
