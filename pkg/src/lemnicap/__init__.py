"""lemnicap: lemniscates, logarithmic capacity and harmonic measure of rational functions."""

from .bounds import (
    certify_injectivity_radius,
    counterexample_experiment,
    counterexample_function,
    epsilon_sweep,
    random_good_rational,
    upper_bound_constant,
    verify_lower_bounds,
    verify_upper_bound,
)
from .capacity import (
    Boundary,
    CapacityEstimate,
    DiscreteMeasure,
    cap_fekete,
    cap_panel,
    cap_polynomial_preimage,
    circle_boundary,
    mutual_energy,
    segment_boundary,
)
from .harmonic import (
    ArcPartition,
    HarmonicMeasureReport,
    SegmentSet,
    image_arc_measure,
    make_arc_partition,
    moebius_transport,
    verify_energy_identity,
    verify_reflection,
    wos,
)
from .lemniscate import (
    GoodnessReport,
    Lemniscate,
    contains_point,
    contains_segment,
    export_svg,
    is_good,
    trace,
)
from .ratfunc import (
    CriticalData,
    Polynomial,
    RationalFunction,
    as_fraction,
    critical_data,
    leading_coefficient_at_infinity,
    poly_roots,
    zeros,
)
from .schwarz import SweepResult, outer_boundary, sweep_F

__all__ = [
    "ArcPartition",
    "Boundary",
    "CapacityEstimate",
    "CriticalData",
    "DiscreteMeasure",
    "GoodnessReport",
    "HarmonicMeasureReport",
    "Lemniscate",
    "Polynomial",
    "RationalFunction",
    "SegmentSet",
    "SweepResult",
    "as_fraction",
    "cap_fekete",
    "cap_panel",
    "cap_polynomial_preimage",
    "certify_injectivity_radius",
    "circle_boundary",
    "contains_point",
    "contains_segment",
    "counterexample_experiment",
    "counterexample_function",
    "critical_data",
    "epsilon_sweep",
    "export_svg",
    "image_arc_measure",
    "is_good",
    "leading_coefficient_at_infinity",
    "make_arc_partition",
    "moebius_transport",
    "mutual_energy",
    "outer_boundary",
    "poly_roots",
    "random_good_rational",
    "segment_boundary",
    "sweep_F",
    "trace",
    "upper_bound_constant",
    "verify_energy_identity",
    "verify_lower_bounds",
    "verify_reflection",
    "verify_upper_bound",
    "wos",
    "zeros",
]

__version__ = "0.1.0"
