"""Correlation transfer in open Ising chains of large spins.

Exact reduced dynamics, entanglement measures, the spin Wigner
(Stratonovich-Weyl) phase space with its semiclassical flow, and the
squeezing/rotation optimizer.
"""

from ._validation import DomainError, ResolutionError, ResourceCapError
from .evolution import (
    ChainSpec,
    TimeGrid,
    dephasing_kernel,
    full_statevector,
    reduced_from_statevector,
    reduced_rho_one,
    reduced_rho_pair,
)
from .measures import (
    MeasureSeries,
    i_concurrence,
    measure_series,
    negativity,
    partial_transpose,
    purity,
    trace_norm,
)
from .optimizer import (
    OptimizationProblem,
    PowerLawFit,
    PowerLawRegressor,
    SqueezingOptimizer,
    fit_power_law,
    max_over_time,
    optimize_mu_theta,
    scaling_study,
)
from .phase_space import (
    SphereGrid,
    TrajectoryMap,
    WignerField,
    backward_trajectory,
    evolved_pair_wigner,
    evolved_single_wigner,
    kernel_matrix,
    reconstruct_operator,
    semiclassical_negativity_approx,
    semiclassical_negativity_full,
    semiclassical_purity,
    wigner_initial_approx,
    wigner_of_operator,
    wigner_of_pair_operator,
)
from .spin_algebra import (
    SpinSize,
    clebsch_gordan,
    spherical_harmonic,
    spin_operators,
    tensor_operator,
    wigner_d,
)
from .states import (
    PreparationParams,
    SingleSpinState,
    coherent_equator,
    prepare_initial,
    rotate_x,
    squeeze,
)

__version__ = "0.1.0"
