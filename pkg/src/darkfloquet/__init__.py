"""Probe susceptibility of a four-level atom with interacting dark resonances.

The time-periodic density-matrix equations are solved perturbatively in the
second perturbing field by a Floquet hierarchy (:mod:`darkfloquet.floquet`)
and checked against direct time integration (:mod:`darkfloquet.oracle`).
"""

from .floquet import (
    FloquetSolution,
    SingularResolventError,
    SolverConfig,
    reconstruct,
    residual_bound,
    residual_check,
    solve_hierarchy,
    solve_zeroth,
)
from .model import (
    ELEMENTS,
    INDEX,
    PROBE_INDEX,
    LiouvillianParts,
    ParameterError,
    SystemParams,
    build_liouvillian,
    reassemble_generator,
    reconstruct_rho33,
    validate,
)
from .oracle import (
    IntegrationConfig,
    IntegrationError,
    extract_harmonic,
    integrate,
    oracle_susceptibility,
    quasi_steady_run,
)
from .spectra import (
    FeatureReport,
    SusceptibilitySample,
    SweepResult,
    SweepSpec,
    find_features,
    group_index,
    group_velocity,
    susceptibility,
    sweep,
)

# caption parameter sets of the reproduced figures (drive detuning taken as zero)
FIG2 = SystemParams(
    omega_p=0.01, omega_c=4.0, omega_s1=0.0, omega_s2=0.0,
    delta_s1=0.2, delta_s2=-0.2, r=0.0,
    gamma_21=0.14, gamma_34=1.0, gamma_41=0.01, gamma_32=0.79,
)
FIG3 = FIG2.replace(omega_s1=0.2, omega_s2=0.2)
FIG4 = FIG3.replace(r=0.03)

__all__ = [
    "build_liouvillian",
    "ELEMENTS",
    "extract_harmonic",
    "FeatureReport",
    "FIG2",
    "FIG3",
    "FIG4",
    "find_features",
    "FloquetSolution",
    "group_index",
    "group_velocity",
    "INDEX",
    "integrate",
    "IntegrationConfig",
    "IntegrationError",
    "LiouvillianParts",
    "oracle_susceptibility",
    "ParameterError",
    "PROBE_INDEX",
    "quasi_steady_run",
    "reassemble_generator",
    "reconstruct",
    "reconstruct_rho33",
    "residual_bound",
    "residual_check",
    "SingularResolventError",
    "solve_hierarchy",
    "solve_zeroth",
    "SolverConfig",
    "susceptibility",
    "SusceptibilitySample",
    "sweep",
    "SweepResult",
    "SweepSpec",
    "SystemParams",
    "validate",
]
