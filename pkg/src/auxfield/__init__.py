"""
Analytic bound-state energies from the auxiliary field method and the
envelope theory, with an exact radial eigensolver for reference.
"""

from .afm import (
    AfmProblem,
    ApproxSolution,
    Bound,
    afm_energy_at,
    afm_minimize,
    classify_bound,
    mean_field_deviation,
    perturbation_estimate,
    solve,
    tangent_potential,
)
from .core import (
    BasePotential,
    Family,
    QuantumState,
    TargetPotential,
    I_of_nu,
    K_of_r,
    anharmonic,
    base_energy,
    coulomb,
    harmonic,
    power_law,
    principal_number,
    scaled_base,
)
from .envelope import (
    equivalence_report,
    et_energy_over_s,
    et_energy_over_v,
    et_minimize_s,
    et_minimize_v,
    kinetic_potential,
    tangency_defect_coefficient,
    tangential_at,
)
from .errors import (
    AuxFieldError,
    ConvergenceError,
    DomainError,
    MonotonicityError,
    NoExtremumError,
    NodeCountError,
    SingularityError,
)
from .oracle import RadialGrid, RadialSolution, expectation, solve_radial

__version__ = "0.1.0"
