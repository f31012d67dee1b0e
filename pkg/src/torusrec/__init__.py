"""Recovery of sparse structure on the torus from few Fourier coefficients.

The package recovers (a) unions of at most N open arcs on the circle from
their indicator's coefficients at 0..N and (b) sums of at most N complex
point masses on the two-dimensional torus from predetermined frequency sets
of size O(N log N), O(kN) or O(N^2), together with generators for those
frequency sets, constructions of distinct arc unions with matching low
coefficients, and interpolation probes.
"""

from .errors import (
    AmbiguousRecoveryError,
    InconsistentDataError,
    NotRecoveredError,
    OffCircleRootError,
    PeelingError,
    RecoveryError,
)
from .intervals import (
    Arrangement,
    brute_force_arrangements,
    differentiate_coeffs,
    enumerate_arrangements,
    figure_arrangement,
    gen_polygon_counterexample,
    recover_intervals_extended,
    recover_intervals_minimal,
)
from .masses2d import (
    MultiplicityProfile,
    OmegaSet,
    ProbeReport,
    build_omega,
    is_interpolating,
    profile_rows_omega,
    recover_max_k,
    recover_peeling,
    recover_search,
    slice_row,
    sufficiency_probe,
    sufficient_size,
    triangle_interpolate,
)
from .polynomials import (
    ELEMENTARY_TO_POWER_SUMS,
    POWER_SUMS_TO_ELEMENTARY,
    RootConvergenceError,
    expand_roots,
    newton_girard,
    numeric_rank,
    reflect_sigma,
    roots,
)
from .prony import annihilator, prony_recover
from .torus import (
    AMPLITUDE_FLOOR,
    CoeffTable1D,
    CoeffTable2D,
    IntervalUnion,
    Measure1D,
    Measure2D,
    ToleranceConfig,
    blend_measures,
    canon,
    forward_coeffs_1d,
    forward_coeffs_2d,
    forward_coeffs_intervals,
    interval_distance,
    measure_distance,
    wrap_distance,
)

__version__ = "0.1.0"

__all__ = [
    "AMPLITUDE_FLOOR",
    "AmbiguousRecoveryError",
    "Arrangement",
    "CoeffTable1D",
    "CoeffTable2D",
    "ELEMENTARY_TO_POWER_SUMS",
    "InconsistentDataError",
    "IntervalUnion",
    "Measure1D",
    "Measure2D",
    "MultiplicityProfile",
    "NotRecoveredError",
    "OffCircleRootError",
    "OmegaSet",
    "POWER_SUMS_TO_ELEMENTARY",
    "PeelingError",
    "ProbeReport",
    "RecoveryError",
    "RootConvergenceError",
    "ToleranceConfig",
    "annihilator",
    "blend_measures",
    "brute_force_arrangements",
    "build_omega",
    "canon",
    "differentiate_coeffs",
    "enumerate_arrangements",
    "expand_roots",
    "figure_arrangement",
    "forward_coeffs_1d",
    "forward_coeffs_2d",
    "forward_coeffs_intervals",
    "gen_polygon_counterexample",
    "interval_distance",
    "is_interpolating",
    "measure_distance",
    "newton_girard",
    "numeric_rank",
    "profile_rows_omega",
    "prony_recover",
    "recover_intervals_extended",
    "recover_intervals_minimal",
    "recover_max_k",
    "recover_peeling",
    "recover_search",
    "reflect_sigma",
    "roots",
    "slice_row",
    "sufficiency_probe",
    "sufficient_size",
    "triangle_interpolate",
    "wrap_distance",
]
