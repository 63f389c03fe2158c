"""Contraction tests for Moebius functions of operators, with discretized
Volterra-operator experiments."""

from .contraction import (
    Classification,
    ContractionReport,
    RegionScan,
    contraction_report,
    direct_norm_test,
    lumer_phillips_check,
    quadratic_gap_test,
    region_scan,
    support_inequality_test,
    three_way_trials,
    volterra_contraction_oracle,
)
from .curves import compare_wv, reference_boundary, wv_boundary_point
from .geometry import (
    NumericalRangeBoundary,
    face,
    halfplane_support,
    hull_contains,
    numerical_range_boundary,
    support_function,
)
from .operators import (
    DiscretizedOperator,
    GridFunction,
    MoebiusParams,
    build_volterra,
    moebius_transform,
    operator_power,
    random_invertible_matrix,
)
from .spectral import SpectralConfig, eigenvalues, hermitian_max_eig, matrix_exponential, spectral_norm
from .witnesses import (
    WitnessQuotient,
    asymptotic_ratio_check,
    positivity_identity_check,
    witness_g_quotient,
    witness_gr_quotient,
    witness_h_quotient,
)

__version__ = "0.1.0"
