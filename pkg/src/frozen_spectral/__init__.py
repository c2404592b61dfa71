"""Spectral analysis of Sturm-Liouville problems with frozen arguments.

The operator is -y'' + q(x) * sum_i y(a_i) on (0, pi) with Dirichlet or
Neumann conditions at each end.  The package evaluates its characteristic
function, computes eigenvalues (closed form, determinant, and an
independent shooting oracle), analyses the entire functions that arise
(zero sets, indicator diagrams, growth type, Cartwright factorization),
and checks explicit instability inequalities relating the distance
between two potentials to the distance between their spectral data.
"""

from .model import (
    GAUSS_ORDER,
    PI,
    TWO_PI,
    FourierCoefficients,
    NumericalError,
    Potential,
    ProblemConfig,
    QuadratureError,
    as_vectorized,
    composite_rule,
    fourier_coefficients,
    oscillation_panels,
    oscillatory_integral,
    paley_wiener_transform,
    polynomial_moments,
    potential_from_fourier,
    potential_from_samples,
    transform_function,
)
from .charfn import (
    CharacteristicFunction,
    CharDifference,
    char_closed,
    char_det,
    char_difference,
    char_difference_at_zero,
    kernel_derivative_integral,
    kernel_value_integral,
    sin_over_rho,
)
from .spectrum import (
    Spectrum,
    SpectrumMatch,
    ZeroCount,
    count_zeros_disk,
    match_spectra,
    real_eigenvalues,
    shooting_eigenvalues,
    shooting_values,
)
from .entire import (
    IndicatorFit,
    SupportEstimate,
    TypeEstimate,
    ZeroSet,
    cartwright_product,
    collect_zeros,
    default_radii,
    effective_support_width,
    function_type,
    indicator,
    zero_density,
)
from .instability import (
    BoundReport,
    ChainConstant,
    CorollaryReport,
    L2Norm,
    ParsevalBound,
    PolyaCheck,
    SineTypeSystem,
    SweepReport,
    ZeroPairing,
    chain_constant,
    instability_bound,
    l2_norm_real_axis,
    pair_zero_sets,
    parseval_bound,
    plancherel_polya_check,
    sine_type_interpolate,
    zero_displacement_ratios,
    zero_set_bound,
    zero_set_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "ChainConstant",
    "CharDifference",
    "CharacteristicFunction",
    "CorollaryReport",
    "FourierCoefficients",
    "GAUSS_ORDER",
    "IndicatorFit",
    "L2Norm",
    "NumericalError",
    "PI",
    "ParsevalBound",
    "PolyaCheck",
    "Potential",
    "ProblemConfig",
    "QuadratureError",
    "SineTypeSystem",
    "Spectrum",
    "SpectrumMatch",
    "SupportEstimate",
    "SweepReport",
    "TWO_PI",
    "TypeEstimate",
    "ZeroCount",
    "ZeroPairing",
    "ZeroSet",
    "as_vectorized",
    "cartwright_product",
    "chain_constant",
    "char_closed",
    "char_det",
    "char_difference",
    "char_difference_at_zero",
    "collect_zeros",
    "composite_rule",
    "count_zeros_disk",
    "default_radii",
    "effective_support_width",
    "fourier_coefficients",
    "function_type",
    "indicator",
    "instability_bound",
    "kernel_derivative_integral",
    "kernel_value_integral",
    "l2_norm_real_axis",
    "match_spectra",
    "oscillation_panels",
    "oscillatory_integral",
    "pair_zero_sets",
    "paley_wiener_transform",
    "parseval_bound",
    "plancherel_polya_check",
    "polynomial_moments",
    "potential_from_fourier",
    "potential_from_samples",
    "real_eigenvalues",
    "shooting_eigenvalues",
    "shooting_values",
    "sin_over_rho",
    "sine_type_interpolate",
    "transform_function",
    "zero_density",
    "zero_displacement_ratios",
    "zero_set_bound",
    "zero_set_sweep",
]
