"""Exact arithmetic on elliptic curves over Q, with prime-denominator scans.

The library models Weierstrass curves exactly (gmpy2 rationals throughout),
classifies how many distinct primes divide point denominators, measures Weil
heights against repelling points, and reproduces the bundled verification
tables by lattice search over generator combinations.
"""

from .arith import (
    DEFAULT_TRIAL_BOUND,
    LengthClass,
    PartialFactorization,
    is_probable_prime,
    length_classify,
    perfect_power_decompose,
    prime_power_decompose,
    primes_up_to,
    trial_factor,
)
from .curve import (
    Curve,
    Point,
    RealComponents,
    SingularCurveError,
    format_point,
    parse_curve,
    parse_point,
    parse_xy,
)
from .family import (
    LemmaReport,
    curve_en,
    duplicate_x,
    ebn_bound_check,
    isogeny_image_on_curve,
    isogeny_x,
    lemma_invariants,
    lemma_scan,
)
from .heights import (
    HallRecord,
    bounded_component_bound,
    curve_height,
    hall_verify,
    log_abs_rational,
    projective_height,
    weil_height_from,
)
from .scan import (
    PREDICATE_PRIME,
    PREDICATE_PRIME_POWER,
    SIDE_DENOMINATOR,
    SIDE_NUMERATOR,
    Hit,
    ScanConfig,
    ScanRecord,
    ScanResult,
    eds_scan,
    enumerate_lattice,
    hits_to_csv,
    result_to_json_dict,
    run_lattice_scan,
    run_record_scan,
    scan_denominators,
    scan_distance,
    scan_numerators,
)
from .tables import ReproduceOutcome, load_tables, reproduce

__version__ = "0.1.0"
