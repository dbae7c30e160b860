"""Simulation and equivalence checks for one-dimensional coined quantum walks."""

from .coin import (
    AxisAngle,
    EulerAngles,
    basis_rotation_for_axis,
    euler_decompose,
    from_axis_angle,
    from_euler,
    normalize_u2_to_su2,
    theta_coin,
)
from .equivalence import (
    ProductTransform,
    RationalField,
    canonical_reduction,
    check_amplitude_equiv,
    check_cumulative_identity,
    check_distribution_equiv,
    check_rational_field,
    electric_schedule,
)
from .lattice import LatticeConfig, WalkerCoinState, localized_state, position_distribution, product_state
from .spectral import dispersion, spectral_invariance_check
from .walk import Electric, Simple, TimeDependent, dense_matrix, evolve, step, translation_defect

__version__ = "0.1.0"
