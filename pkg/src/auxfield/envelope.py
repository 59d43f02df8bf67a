"""
Envelope theory.

The target is approximated by tangential potentials
``V^t(r) = a(t) P(r) + g(P(t)) - a(t) P(t)`` with ``a(t) = g'(P(t))``.  Two
parametrizations of the optimal envelope energy are provided:

* over the mean kinetic energy ``s``: ``min_s [s + g(k_A(s))]``, with
  ``k_A`` the kinetic potential (Legendre partner of ``eps_A``);
* over the coupling ``v``: ``eps_A(v) + g(A(v)) - v A(v)`` with
  ``A = g'^{-1}``, stationary where ``A(v0) = eps_A'(v0)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from . import _kernel
from .afm import (
    AfmProblem,
    ApproxSolution,
    Bound,
    DEFAULT_TOLERANCE,
    _exact_solution,
    afm_energy_at,
    afm_minimize,
    classify_bound,
    tangent_potential,
    tangent_potential_derivative,
)
from .core import (
    BasePotential,
    QuantumState,
    TargetPotential,
    I_of_nu,
    check_monotone_K,
    principal_number,
    solve_positive,
)
from .errors import ConvergenceError, DomainError, SingularityError


@dataclass(frozen=True)
class TangentialPotential:
    t: float
    slope: float
    offset: float

    def __call__(self, P_r):
        """Value at a point where the base potential equals ``P_r``."""
        return self.slope * P_r + self.offset


@dataclass(frozen=True)
class KineticPotentialSample:
    s: float
    k: float
    v: float


def _N(target: TargetPotential, state) -> float:
    if isinstance(state, QuantumState):
        return principal_number(state, target.base)
    return principal_number(QuantumState(), target.base, N=float(state))


def tangential_at(target: TargetPotential, t: float) -> TangentialPotential:
    base = target.base
    if base.dP(t) == 0:
        raise SingularityError(f"P'(t) vanishes at t={t}")
    y = float(base.P(t))
    slope = float(target.g_prime(y))
    return TangentialPotential(t=float(t), slope=slope, offset=float(target.g(y)) - slope * y)


def tangency_defect_coefficient(target: TargetPotential, t: float) -> float:
    """Leading coefficient of ``V(t + e) - V^t(t + e)`` in ``e**2``."""
    base = target.base
    return 0.5 * float(base.dP(t)) ** 2 * float(target.g_second(base.P(t)))


def kinetic_potential(base: BasePotential, N: float, s: float,
                      closed_form: bool = True) -> float:
    """
    Kinetic potential ``k_A(s)`` of the base spectrum.

    With ``closed_form=False`` the Legendre map ``v -> eps_A - v eps_A'`` is
    inverted numerically; concavity of ``eps_A`` makes it monotone.
    """
    if not s > 0:
        raise DomainError(f"mean kinetic energy must be positive, got {s}")
    if closed_form:
        return float(base.kinetic_potential(s, N))
    v = solve_positive(lambda x: float(base.spectrum(x, N) - x * base.spectrum_derivative(x, N)) - s)
    return float(base.spectrum_derivative(v, N))


def kinetic_sample(base: BasePotential, N: float, v: float) -> KineticPotentialSample:
    base.check_coupling(v)
    deriv = float(base.spectrum_derivative(v, N))
    return KineticPotentialSample(s=float(base.spectrum(v, N)) - v * deriv, k=deriv, v=float(v))


def et_energy_over_s(target: TargetPotential, N: float, s: float) -> float:
    return s + float(target.g(kinetic_potential(target.base, N, s)))


def g_prime_inverse(target: TargetPotential, v: float,
                    bracket: Optional[Tuple[float, float]] = None) -> float:
    """``A(v) = g'^{-1}(v)`` found in the image of ``P``, independently of ``I``."""
    sign = target.base.sign
    check_monotone_K(target)

    def resid(w):
        return float(target.g_prime(sign * w)) - v

    try:
        w = solve_positive(resid, bracket=bracket)
    except (DomainError, ValueError) as exc:
        raise DomainError(f"g' does not reach {v!r} on the image of P") from exc
    return sign * w


def et_energy_over_v(target: TargetPotential, N: float, v: float, bracket=None) -> float:
    """Energy of the optimal tangential Hamiltonian at coupling ``v`` (contact ``a^{-1}(v)``)."""
    base = target.base
    if target.is_linear():
        c, d = target.linear_coefficients()
        return float(base.spectrum(c, N)) + d
    base.check_coupling(v)
    y = g_prime_inverse(target, v, bracket)
    return float(base.spectrum(v, N)) + float(target.g(y)) - v * y


def principal_envelope_energy(target: TargetPotential, N: float, v: float) -> float:
    """``eps_A(v) - v eps_A'(v) + g(eps_A'(v))``: the s-form rewritten in the coupling."""
    base = target.base
    base.check_coupling(v)
    deriv = float(base.spectrum_derivative(v, N))
    return float(base.spectrum(v, N)) - v * deriv + float(target.g(deriv))


def _solution(method, target, N, energy, v0, y0, residual, count, **extra):
    base = target.base
    c1 = float(target.g_prime(y0))
    return ApproxSolution(
        method=method, N=N, energy=float(energy), nu0=float(v0),
        r0=float(base.P_inverse(y0)), bound=classify_bound(target),
        c1=c1, c2=float(target.g(y0)) - c1 * y0, exact=target.is_linear(),
        diagnostics={"stationarity_residual": residual, "stationary_points": count, **extra},
    )


def et_minimize_s(target: TargetPotential, state: Union[QuantumState, float] = QuantumState(),
                  tolerance: float = DEFAULT_TOLERANCE) -> ApproxSolution:
    """
    Minimize ``s + g(k_A(s))`` over the mean kinetic energy.

    The scan covers the same physical range as the coupling scan, mapped
    through ``s = eps_A(v) - v eps_A'(v)``.  Stationarity reads
    ``v(s) = g'(k_A(s))``.
    """
    base, N = target.base, _N(target, state)
    nu, _ = _kernel.scan_couplings(target)
    s_grid = base.kinetic_mean(nu, N)

    def h(s):
        return float(base.coupling_of_kinetic(s, N) - target.g_prime(base.kinetic_potential(s, N)))

    with np.errstate(all="ignore"):
        hs = nu - target.g_prime(base.kinetic_potential(s_grid, N))
        es = s_grid + target.g(base.kinetic_potential(s_grid, N))
    s0, count = _kernel.locate_stationary(
        s_grid, hs, lambda i: _kernel.refine_root(h, s_grid[i], s_grid[i + 1]),
        lambda s: et_energy_over_s(target, N, s), es, prefer="min",
    )
    v0 = float(base.coupling_of_kinetic(s0, N))
    residual = _kernel.relative(h(s0), v0)
    if residual > tolerance:
        raise ConvergenceError(f"stationarity residual {residual:.3e} exceeds {tolerance:.1e}")
    k0 = float(base.kinetic_potential(s0, N))
    return _solution("et-s", target, N, et_energy_over_s(target, N, s0), v0, k0, residual,
                     count, s0=float(s0))


def et_minimize_v(target: TargetPotential, state: Union[QuantumState, float] = QuantumState(),
                  tolerance: float = DEFAULT_TOLERANCE) -> ApproxSolution:
    """Extremize the tangential energy over the coupling: ``A(v0) = eps_A'(v0)``."""
    base, N = target.base, _N(target, state)
    if target.is_linear():
        return _exact_solution("et-v", target, N)
    nu, r = _kernel.scan_couplings(target)
    with np.errstate(all="ignore"):
        y = base.P(r)
        hs = base.spectrum_derivative(nu, N) - y
        es = base.spectrum(nu, N) + target.g(y) - nu * y
    # scan brackets carried into the image of P as |y|
    w = np.abs(y)

    def h(v, bracket=None):
        return float(base.spectrum_derivative(v, N)) - g_prime_inverse(target, v, bracket)

    def refine(i):
        bracket = tuple(sorted((w[i], w[i + 1])))
        return _kernel.refine_root(lambda v: h(v, bracket), nu[i], nu[i + 1])

    bound = classify_bound(target)
    v0, count = _kernel.locate_stationary(
        nu, hs, refine, lambda v: et_energy_over_v(target, N, v), es,
        prefer="max" if bound is Bound.LOWER else "min",
    )
    y0 = g_prime_inverse(target, v0)
    residual = _kernel.relative(float(base.spectrum_derivative(v0, N)) - y0, y0)
    if residual > tolerance:
        raise ConvergenceError(f"stationarity residual {residual:.3e} exceeds {tolerance:.1e}")
    energy = float(base.spectrum(v0, N)) + float(target.g(y0)) - v0 * y0
    return _solution("et-v", target, N, energy, v0, y0, residual, count,
                     principal_envelope_energy=principal_envelope_energy(target, N, v0))


def equivalence_report(target: TargetPotential,
                       state: Union[QuantumState, float] = QuantumState(),
                       tolerance: float = DEFAULT_TOLERANCE) -> dict:
    """
    Solve with all three routes and collect their mutual discrepancies.

    Keys: ``E_afm``, ``E_et_s``, ``E_et_v``, ``nu0``, ``v0``, ``t0``,
    ``energy_gap`` (max pairwise relative gap), ``coupling_gap``
    (``|nu0 - v0| / |nu0|``), ``slope_gap`` (``|nu0 - a(t0)| / |nu0|``),
    ``tangency_value`` and ``tangency_slope`` (relative mismatch of the tangent
    potential and its derivative at ``t0``), plus the three solutions.
    """
    afm = afm_minimize(AfmProblem(target, state, tolerance))
    ets = et_minimize_s(target, state, tolerance)
    etv = et_minimize_v(target, state, tolerance)
    energies = [afm.energy, ets.energy, etv.energy]
    scale = max(abs(e) for e in energies)
    gap = max(abs(a - b) for a in energies for b in energies) / scale
    t0 = afm.r0
    v_scale = max(1.0, abs(float(target.V(t0))))
    return {
        "E_afm": afm.energy,
        "E_et_s": ets.energy,
        "E_et_v": etv.energy,
        "nu0": afm.nu0,
        "v0": etv.nu0,
        "t0": t0,
        "energy_gap": gap,
        "coupling_gap": max(abs(afm.nu0 - etv.nu0), abs(afm.nu0 - ets.nu0)) / abs(afm.nu0),
        "slope_gap": abs(afm.nu0 - tangential_at(target, t0).slope) / abs(afm.nu0),
        "tangency_value": abs(tangent_potential(afm, target, t0) - target.V(t0)) / v_scale,
        "tangency_slope": abs(tangent_potential_derivative(afm, target, t0) - target.dV(t0))
        / max(1.0, abs(float(target.dV(t0)))),
        "solutions": {"afm": afm, "et-s": ets, "et-v": etv},
    }


def coupling_grid(target: TargetPotential, solution: ApproxSolution, points: int = 100,
                  spread: float = 5.0) -> np.ndarray:
    """Couplings ``K(r)`` for contact points log-spaced around ``r0``."""
    r = solution.r0 * np.logspace(-np.log10(spread), np.log10(spread), points)
    if target.is_linear():
        return solution.nu0 * np.logspace(-1, 1, points)
    return np.sort(np.asarray(target.K(r), dtype=float))


def pointwise_identity_gap(target: TargetPotential, state=QuantumState(),
                           points: int = 100) -> float:
    """Max relative difference of the AFM and tangential energies over a coupling grid."""
    problem = AfmProblem(target, state)
    sol = afm_minimize(problem)
    N = problem.N
    worst = 0.0
    for nu in coupling_grid(target, sol, points):
        a = afm_energy_at(problem, float(nu))
        b = et_energy_over_v(target, N, float(nu))
        worst = max(worst, abs(a - b) / max(abs(a), abs(b)))
    return worst


def I_matches_composition(target: TargetPotential, nu: float) -> float:
    """Relative gap between ``I(nu)`` and ``P^{-1}(g'^{-1}(nu))``."""
    r_i = I_of_nu(target, nu)
    r_c = float(target.base.P_inverse(g_prime_inverse(target, nu)))
    return abs(r_i - r_c) / r_i
