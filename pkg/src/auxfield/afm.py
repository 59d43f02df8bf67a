"""
Auxiliary field method.

``V(r)`` is traded for ``nu P(r) + V(I(nu)) - nu P(I(nu))`` with ``I`` the
inverse of ``K = V'/P'``.  The energy of that solvable Hamiltonian,

    E(nu) = eps_A(nu) + V(I(nu)) - nu P(I(nu)),

is made stationary in ``nu``.  Because ``V'(I) = nu P'(I)``, the condition
reduces to ``eps_A'(nu0) = P(I(nu0))``, which is what gets solved.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from . import _kernel
from .core import (
    QuantumState,
    TargetPotential,
    I_of_nu,
    principal_number,
)
from .errors import ConvergenceError

DEFAULT_TOLERANCE = 1e-12


class Bound(enum.Enum):
    UPPER = "upper"
    LOWER = "lower"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class ApproxSolution:
    """
    Result of either approximation scheme.

    ``c1``, ``c2`` define the tangent potential ``c1 P(r) + c2``, which touches
    ``V`` at ``r0``.  ``exact`` marks a linear ``g`` where the result is the
    exact eigenvalue.
    """

    method: str
    N: float
    energy: float
    nu0: float
    r0: float
    bound: Bound
    c1: float
    c2: float
    exact: bool = False
    diagnostics: dict = field(default_factory=dict)

    @property
    def stationarity_residual(self) -> float:
        return self.diagnostics.get("stationarity_residual", 0.0)


@dataclass(frozen=True)
class AfmProblem:
    target: TargetPotential
    state: Union[QuantumState, float] = QuantumState()
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")

    @property
    def N(self) -> float:
        if isinstance(self.state, QuantumState):
            return principal_number(self.state, self.target.base)
        return principal_number(QuantumState(), self.target.base, N=float(self.state))


def classify_bound(target: TargetPotential) -> Bound:
    """
    Direction of the bound from the sign of ``g''`` over the image of ``P``.

    Concave ``g`` gives an upper bound, convex ``g`` a lower bound.  A sign
    change, or ``g'' = 0`` (linear ``g``, exact result), is indeterminate.
    """
    with np.errstate(all="ignore"):
        g2 = np.broadcast_to(target.g_second(target.base.P(target.sample_r())),
                             target.sample_r().shape)
    if np.all(g2 < 0):
        return Bound.UPPER
    if np.all(g2 > 0):
        return Bound.LOWER
    return Bound.INDETERMINATE


def afm_energy_at(problem: AfmProblem, nu: float, bracket=None) -> float:
    target, N = problem.target, problem.N
    base = target.base
    if target.is_linear():
        c, d = target.linear_coefficients()
        return float(base.spectrum(c, N)) + d
    r = I_of_nu(target, nu, bracket=bracket)
    return float(base.spectrum(nu, N) + target.V(r) - nu * base.P(r))


def _exact_solution(method: str, target: TargetPotential, N: float) -> ApproxSolution:
    base = target.base
    c, d = target.linear_coefficients()
    base.check_coupling(c)
    # contact point: P(r0) = <P>, the Hellmann-Feynman mean
    r0 = float(base.P_inverse(base.spectrum_derivative(c, N)))
    return ApproxSolution(
        method=method, N=N, energy=float(base.spectrum(c, N)) + d, nu0=c, r0=r0,
        bound=Bound.INDETERMINATE, c1=c, c2=d, exact=True,
        diagnostics={"stationarity_residual": 0.0, "stationary_points": 1},
    )


def afm_minimize(problem: AfmProblem) -> ApproxSolution:
    """
    Extremize the auxiliary-field energy over the coupling.

    Raises
    ------
    NoExtremumError
        If the stationarity condition has no sign change on the scan.
    ConvergenceError
        If the refined root misses ``problem.tolerance``.
    """
    target, N = problem.target, problem.N
    base = target.base
    if target.is_linear():
        return _exact_solution("afm", target, N)

    nu, r = _kernel.scan_couplings(target)
    with np.errstate(all="ignore"):
        hs = base.spectrum_derivative(nu, N) - base.P(r)
        es = base.spectrum(nu, N) + target.V(r) - nu * base.P(r)

    def h(x, bracket=None):
        return float(base.spectrum_derivative(x, N) - base.P(I_of_nu(target, x, bracket)))

    def refine(i):
        bracket = tuple(sorted((r[i], r[i + 1])))
        return _kernel.refine_root(lambda x: h(x, bracket), nu[i], nu[i + 1])

    bound = classify_bound(target)
    nu0, count = _kernel.locate_stationary(
        nu, hs, refine, lambda x: afm_energy_at(problem, x), es,
        prefer="max" if bound is Bound.LOWER else "min",
    )
    r0 = I_of_nu(target, nu0)
    p0 = float(base.P(r0))
    residual = _kernel.relative(float(base.spectrum_derivative(nu0, N)) - p0, p0)
    if residual > problem.tolerance:
        raise ConvergenceError(f"stationarity residual {residual:.3e} exceeds {problem.tolerance:.1e}")
    c1 = float(target.K(r0))
    c2 = float(target.V(r0)) - c1 * p0
    energy = float(base.spectrum(nu0, N)) + float(target.V(r0)) - nu0 * p0
    return ApproxSolution(
        method="afm", N=N, energy=energy, nu0=float(nu0), r0=float(r0), bound=bound,
        c1=c1, c2=c2,
        diagnostics={"stationarity_residual": residual, "stationary_points": count},
    )


def tangent_potential(solution: ApproxSolution, target: TargetPotential, r):
    return solution.c1 * target.base.P(r) + solution.c2


def tangent_potential_derivative(solution: ApproxSolution, target: TargetPotential, r):
    return solution.c1 * target.base.dP(r)


def perturbation_estimate(solution: ApproxSolution, v: Callable[[float], float]) -> float:
    """First-order estimate of ``<v>`` for ``V + sigma v``: ``v`` at the contact point."""
    return float(v(solution.r0))


def mean_field_deviation(solution: ApproxSolution, target: TargetPotential,
                         oracle_state) -> float:
    """
    Relative gap ``|nu0 - <K>| / |nu0|`` with ``<K>`` taken in ``oracle_state``.

    ``oracle_state`` should be the exact eigenstate of ``T + nu0 P``.  The
    value is a diagnostic; no tolerance is attached to it.
    """
    from .oracle import expectation

    if target.is_linear():
        return 0.0
    mean_k = expectation(oracle_state, target.K)
    return abs(solution.nu0 - mean_k) / abs(solution.nu0)


def with_diagnostics(solution: ApproxSolution, **extra) -> ApproxSolution:
    diag = dict(solution.diagnostics)
    diag.update(extra)
    return ApproxSolution(**{**solution.__dict__, "diagnostics": diag})


def solve(target: TargetPotential, state: Union[QuantumState, float] = QuantumState(),
          tolerance: Optional[float] = None) -> ApproxSolution:
    """Shorthand for ``afm_minimize(AfmProblem(target, state, tolerance))``."""
    return afm_minimize(AfmProblem(target, state, tolerance or DEFAULT_TOLERANCE))
