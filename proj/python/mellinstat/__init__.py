"""Second-kind (Mellin) statistics for radar clutter distributions.

Thin Python layer over the C++ core. Distributions are built with keyword
parameters, e.g. ``DistributionSpec("ggamma", L=4, M=2, mu=1)``.
"""

from ._core import (
    DistributionSpec,
    DomainError,
    FitNonConvergence,
    MomentDoesNotExist,
    NonConvergence,
    NoSolution,
    OutOfRange,
    TooFewSamples,
    UnsupportedOrder,
    ZeroSamples,
    bessel_k,
    chf2,
    classical_moment,
    components,
    cumulants_to_moments,
    digamma,
    empirical_log_stats,
    families,
    fit_molc,
    invert_polygamma,
    ln_gamma,
    log_cumulants,
    mellin_numeric,
    moments_to_cumulants,
    parameter_names,
    pdf,
    polygamma,
    run_cli,
    sample,
    sample_compound,
    simulate,
    strip,
    texture_log_cumulants,
    verify,
    verify_convolution,
)

__version__ = "0.1.0"


def spec(family, **params):
    """Shorthand for ``DistributionSpec(family, **params)``."""
    return DistributionSpec(family, **params)
