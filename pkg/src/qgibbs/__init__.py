"""Finite-volume thermodynamics and Gibbs-state verification for quantum spin lattices."""

__version__ = "0.1.0"

from .entropy import entropy_density, relative_entropy, relative_entropy_density, von_neumann_entropy
from .errors import (
    ConfigError,
    ContainmentError,
    DomainError,
    GeometryError,
    HermiticityError,
    QGibbsError,
    ResourceError,
    ValidationError,
)
from .lattice import (
    ModelSpec,
    Potential,
    Region,
    big_banach_norm,
    internal_energy,
    preset_potential,
    surface_energy,
    surface_norm,
)
from .operators import (
    LocalOperator,
    SpectralDecomposition,
    embed,
    herm_eig,
    matrix_function,
    operator_norm,
    partial_trace,
    trace_distance,
)
from .perturbation import gibbs_product_check, log_density_gap, pb_gt_check, perturb
from .series import ExtrapolationSeries, extrapolate
from .states import DensityMatrix, StateFamily, buffered_drift, marginal, translation_drift
from .thermo import (
    energy_density,
    free_energy_functional,
    information_rate,
    log_partition,
    mean_field_scan,
    pressure,
)
