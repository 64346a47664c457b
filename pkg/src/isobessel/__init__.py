"""Bessel functions, their isospectral partners, and the standing waves they carry."""

from .bessel_core import (
    RadialGrid,
    ResidualReport,
    bessel_j,
    bessel_j_derivative,
    bessel_j_second_derivative,
    ladder_lower,
    ladder_raise,
)
from .errors import ConfigurationError, DomainError, NumericalBlowUpError
from .isospectral import (
    GammaParam,
    PartnerSpec,
    damping_g,
    find_zeros,
    partner_j,
    partner_j_derivative,
    partner_j_second_derivative,
)
from .wavefield import (
    PolarField,
    PolarGrid,
    WaveParams,
    angular_h,
    annulus_grid,
    pde_residual,
    stationary_field,
    time_evolve,
)

__version__ = "0.1.0"
