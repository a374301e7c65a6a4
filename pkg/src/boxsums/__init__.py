"""Sums with monomials, Kloosterman sums, and multiplicative-character sums
over short boxes modulo a prime, with congruence counting and empirical
verification of the associated explicit bounds."""

from .bounds import (
    BoundValue,
    SELECTORS,
    bound_value,
    character_sum_bound_all_primes,
    character_sum_bound_almost_all,
    character_sum_bound_moment,
    character_sum_bound_moment_almost_all,
    count_saving_exponent,
    monomial_sum_bound_all_primes,
    monomial_sum_bound_almost_all,
    nontrivial_threshold,
)
from .characters import (
    MultChar,
    ResidueDistribution,
    Spectrum,
    additive_char,
    additive_spectrum,
    char_interval_sum,
    char_moment,
    char_power,
    mult_char_eval,
)
from .counts import (
    CountResult,
    ProductInequalityReport,
    count_monomial_pairs_brute,
    count_product_pairs_brute,
    count_product_pairs_spectral,
    product_inequality_report,
)
from .modular import (
    ExponentVector,
    PrimeContext,
    build_context,
    inv_mod,
    is_prime,
    monomial_eval,
    pow_mod,
    primitive_root,
)
from .sums import (
    Box,
    PhaseWeights,
    SumResult,
    SumSpec,
    TableWeights,
    UnitWeights,
    agreement_tolerance,
    cauchy_majorant,
    character_sum_naive,
    character_sum_split,
    holder_majorant,
    kloosterman_sum,
    monomial_sum_bilinear,
    monomial_sum_naive,
    monomial_value_distribution,
)

__version__ = "0.1.0"
