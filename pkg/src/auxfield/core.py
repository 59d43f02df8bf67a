"""
Potential representations shared by both approximation schemes.

A target potential is stored as a composition ``V(r) = g(P(r))`` where
``P`` is an analytically solvable base potential (harmonic ``r**2`` or
Coulomb ``-1/r``) and ``g`` comes with its first two derivatives.  Natural
units are used throughout (hbar = 1, kinetic term ``p**2 / (2 m)``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, MonotonicityError, SingularityError

Scalar = Union[float, np.ndarray]

# log-spaced contact points used whenever a property of g∘P must be sampled
SAMPLE_DECADES = 4.0
SAMPLE_POINTS = 256


class Family(enum.Enum):
    HARMONIC = "harmonic"
    COULOMB = "coulomb"


@dataclass(frozen=True)
class QuantumState:
    """Radial quantum number ``n`` and orbital quantum number ``l``."""

    n: int = 0
    l: int = 0

    def __post_init__(self):
        if int(self.n) != self.n or int(self.l) != self.l:
            raise ValueError(f"quantum numbers must be integers, got n={self.n}, l={self.l}")
        if self.n < 0 or self.l < 0:
            raise ValueError(f"quantum numbers must be non-negative, got n={self.n}, l={self.l}")


@dataclass(frozen=True)
class BasePotential:
    """
    Solvable potential family with a closed-form spectrum in the coupling.

    ``H_A(nu) = p**2 / (2 m) + nu * P(r)`` has eigenvalues
    ``N * sqrt(2 nu / m)`` (harmonic) or ``-m nu**2 / (2 N**2)`` (Coulomb),
    for ``nu > 0``.
    """

    family: Family
    mass: float = 1.0

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")

    @property
    def coupling_domain(self) -> Tuple[float, float]:
        return (0.0, math.inf)

    @property
    def sign(self) -> float:
        """Sign of ``P`` on ``r > 0``."""
        return 1.0 if self.family is Family.HARMONIC else -1.0

    def P(self, r: Scalar) -> Scalar:
        if self.family is Family.HARMONIC:
            return r * r
        return -1.0 / r

    def dP(self, r: Scalar) -> Scalar:
        if self.family is Family.HARMONIC:
            return 2.0 * r
        return 1.0 / (r * r)

    def P_inverse(self, y: Scalar) -> Scalar:
        if self.family is Family.HARMONIC:
            return np.sqrt(y)
        return -1.0 / y

    def principal_number(self, n: int, l: int) -> float:
        if self.family is Family.HARMONIC:
            return 2.0 * n + l + 1.5
        return float(n + l + 1)

    def check_coupling(self, nu: float):
        lo, hi = self.coupling_domain
        if not (lo < nu < hi):
            raise DomainError(f"coupling {nu!r} outside ({lo}, {hi}) for {self.family.value} base")

    def spectrum(self, nu: Scalar, N: float) -> Scalar:
        m = self.mass
        if self.family is Family.HARMONIC:
            return N * np.sqrt(2.0 * nu / m)
        return -m * nu * nu / (2.0 * N * N)

    def spectrum_derivative(self, nu: Scalar, N: float) -> Scalar:
        m = self.mass
        if self.family is Family.HARMONIC:
            return N / np.sqrt(2.0 * m * nu)
        return -m * nu / (N * N)

    # Legendre pair of the spectrum: s = eps - nu eps', k = eps'
    def kinetic_mean(self, nu: Scalar, N: float) -> Scalar:
        """Mean kinetic energy ``s`` of the state of ``H_A(nu)``."""
        m = self.mass
        if self.family is Family.HARMONIC:
            return N * np.sqrt(nu / (2.0 * m))
        return m * nu * nu / (2.0 * N * N)

    def coupling_of_kinetic(self, s: Scalar, N: float) -> Scalar:
        """Inverse of :meth:`kinetic_mean` in the coupling."""
        m = self.mass
        if self.family is Family.HARMONIC:
            return 2.0 * m * s * s / (N * N)
        return N * np.sqrt(2.0 * s / m)

    def kinetic_potential(self, s: Scalar, N: float) -> Scalar:
        m = self.mass
        if self.family is Family.HARMONIC:
            return N * N / (2.0 * m * s)
        return -np.sqrt(2.0 * m * s) / N


def harmonic(mass: float = 1.0) -> BasePotential:
    return BasePotential(Family.HARMONIC, mass)


def coulomb(mass: float = 1.0) -> BasePotential:
    return BasePotential(Family.COULOMB, mass)


@dataclass(frozen=True)
class TargetPotential:
    """
    Target potential ``V = g∘P`` on ``r > 0``.

    Parameters
    ----------
    g, g_prime, g_second : callable
        The composing function and its derivatives, as functions of
        ``y = P(r)``.
    base : BasePotential
        Supplies ``P``, ``P'`` and the solvable spectrum.
    name : str
        Free-form label used in reports.
    params : dict
        Parameters defining the potential, carried into output records.
    k_inverse : callable, optional
        Closed form of ``I = K^{-1}``.  Numeric inversion is used otherwise.
    k_image : tuple, optional
        Closed form of the image of ``K`` over the domain.
    """

    g: Callable[[Scalar], Scalar]
    g_prime: Callable[[Scalar], Scalar]
    g_second: Callable[[Scalar], Scalar]
    base: BasePotential
    name: str = "custom"
    params: dict = field(default_factory=dict)
    domain: Tuple[float, float] = (0.0, math.inf)
    k_inverse: Optional[Callable[[float], float]] = None
    k_image: Optional[Tuple[float, float]] = None

    def V(self, r: Scalar) -> Scalar:
        return self.g(self.base.P(r))

    def dV(self, r: Scalar) -> Scalar:
        return self.g_prime(self.base.P(r)) * self.base.dP(r)

    def K(self, r: Scalar) -> Scalar:
        return K_of_r(self, r)

    def dK(self, r: Scalar) -> Scalar:
        return self.g_second(self.base.P(r)) * self.base.dP(r)

    def sample_r(self, center: float = 1.0) -> np.ndarray:
        lo, hi = self.domain
        r = center * np.logspace(-SAMPLE_DECADES, SAMPLE_DECADES, SAMPLE_POINTS)
        return r[(r > lo) & (r < hi)]

    def is_linear(self) -> bool:
        """True when ``g''`` vanishes identically on the sampled image of ``P``."""
        with np.errstate(all="ignore"):
            g2 = np.broadcast_to(self.g_second(self.base.P(self.sample_r())), (SAMPLE_POINTS,))
        return bool(np.all(g2 == 0.0))

    def linear_coefficients(self) -> Tuple[float, float]:
        """``(c, d)`` with ``g(y) = c y + d``; meaningful only when linear."""
        y = self.base.P(1.0)
        c = float(self.g_prime(y))
        return c, float(self.g(y) - c * y)


def principal_number(state: QuantumState, base: BasePotential,
                     N: Optional[float] = None) -> float:
    """Base-dependent principal number, or ``N`` itself when given."""
    if N is not None:
        if not N > 0:
            raise ValueError(f"principal number must be positive, got {N}")
        return float(N)
    return base.principal_number(state.n, state.l)


def base_energy(base: BasePotential, nu: float, N: float) -> float:
    base.check_coupling(nu)
    if not N > 0:
        raise ValueError(f"principal number must be positive, got {N}")
    return float(base.spectrum(nu, N))


def K_of_r(target: TargetPotential, r: Scalar) -> Scalar:
    """Ratio ``V'(r) / P'(r)``, evaluated as ``g'(P(r))``."""
    dP = target.base.dP(r)
    if np.any(dP == 0):
        raise SingularityError(f"P'(r) vanishes at r={r}")
    return target.g_prime(target.base.P(r))


def check_monotone_K(target: TargetPotential) -> float:
    """Return the constant sign of ``K'`` or raise :class:`MonotonicityError`."""
    r = target.sample_r()
    with np.errstate(all="ignore"):
        dk = np.broadcast_to(target.dK(r), r.shape)
    if np.all(dk > 0):
        return 1.0
    if np.all(dk < 0):
        return -1.0
    raise MonotonicityError(f"K is not strictly monotone for target {target.name!r}")


def image_of_K(target: TargetPotential) -> Tuple[float, float]:
    """Open interval covered by ``K`` over ``r > 0``, from its endpoint limits."""
    if target.k_image is not None:
        return target.k_image
    r = np.logspace(-100, 100, 201)
    with np.errstate(all="ignore"):
        k = np.asarray(target.g_prime(target.base.P(r)), dtype=float)
    k = k[~np.isnan(k)]
    return float(np.min(k)), float(np.max(k))


def _bracket_log(f: Callable[[float], float], x0: float,
                 lo: float = 1e-300, hi: float = 1e300) -> Tuple[float, float]:
    """Expand geometrically from ``x0`` until ``f`` changes sign."""
    f0 = f(x0)
    if f0 == 0:
        return x0, x0
    a = b = x0
    while a > lo or b < hi:
        a_prev, b_prev = a, b
        a, b = max(a / 2.0, lo), min(b * 2.0, hi)
        fb = f(b)
        if np.isfinite(fb) and np.sign(fb) != np.sign(f0):
            return b_prev, b
        fa = f(a)
        if np.isfinite(fa) and np.sign(fa) != np.sign(f0):
            return a, a_prev
    raise DomainError("no sign change found on the positive half-line")


def solve_positive(f: Callable[[float], float], x0: float = 1.0,
                   bracket: Optional[Tuple[float, float]] = None) -> float:
    """Root of ``f`` on ``x > 0``: geometric bracketing then Brent."""
    if bracket is None:
        a, b = _bracket_log(f, x0)
    else:
        a, b = bracket
    if a == b:
        return a
    return brentq(f, a, b, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)


def I_of_nu(target: TargetPotential, nu: float,
            bracket: Optional[Tuple[float, float]] = None) -> float:
    """
    Contact point ``r`` with ``K(r) = nu``.

    Uses the registered closed form when present, otherwise bracketed Brent
    iteration in ``r`` polished by one Newton step.  ``bracket`` may hint an
    interval in ``r`` known to contain the root.
    """
    if target.k_inverse is None:
        check_monotone_K(target)
    lo, hi = image_of_K(target)
    if not (lo < nu < hi):
        raise DomainError(f"coupling {nu!r} outside the image ({lo}, {hi}) of K")
    if target.k_inverse is not None:
        return float(target.k_inverse(nu))

    def resid(r):
        return float(target.K(r)) - nu

    try:
        r = solve_positive(resid, bracket=bracket)
    except (DomainError, ValueError) as exc:
        raise DomainError(f"cannot invert K at nu={nu!r}") from exc
    dk = float(target.dK(r))
    if dk != 0:
        r_new = r - resid(r) / dk
        if r_new > 0 and abs(resid(r_new)) < abs(resid(r)):
            r = r_new
    return r


# ---------------------------------------------------------------------------
# shipped targets


def anharmonic(beta: float) -> TargetPotential:
    """``V(r) = 3 r**2 + 8 sqrt(beta) r`` on the harmonic base with mass 2."""
    if beta < 0:
        raise ValueError(f"beta must be non-negative, got {beta}")
    sb = math.sqrt(beta)

    def g(y):
        return 3.0 * y + 8.0 * np.sqrt(beta * y)

    def g_prime(y):
        return 3.0 + 4.0 * sb / np.sqrt(y)

    def g_second(y):
        return -2.0 * sb * np.power(y, -1.5)

    k_inverse = (lambda nu: 4.0 * sb / (nu - 3.0)) if beta > 0 else None
    return TargetPotential(
        g, g_prime, g_second, harmonic(2.0), name="anharmonic",
        params={"beta": beta}, k_inverse=k_inverse,
        k_image=(3.0, math.inf) if beta > 0 else None,
    )


def power_law(a: float, p: float, base: BasePotential) -> TargetPotential:
    """``V(r) = a r**p`` written over the given base."""
    if not a > 0:
        raise DomainError(f"power-law strength must be positive, got {a}")
    if not p > -2 or p == 0:
        raise DomainError(f"power-law exponent must satisfy p > -2, p != 0, got {p}")
    if base.family is Family.HARMONIC:
        q = p / 2.0

        def g(y):
            return a * np.power(y, q)

        def g_prime(y):
            return a * q * np.power(y, q - 1.0)

        def g_second(y):
            return a * q * (q - 1.0) * np.power(y, q - 2.0)
    else:
        if p < 0:
            raise DomainError("a*r**p with p < 0 has K < 0 on the Coulomb base")

        def g(y):
            return a * np.power(-1.0 / y, p)

        def g_prime(y):
            return a * p * np.power(-y, -p - 1.0)

        def g_second(y):
            return a * p * (p + 1.0) * np.power(-y, -p - 2.0)

    return TargetPotential(g, g_prime, g_second, base, name="power",
                           params={"a": a, "p": p})


def scaled_base(c: float, base: BasePotential) -> TargetPotential:
    """``V = c P``, the case the approximation reproduces exactly."""

    def g(y):
        return c * y

    def g_prime(y):
        return c + 0.0 * y

    def g_second(y):
        return 0.0 * y

    return TargetPotential(g, g_prime, g_second, base, name="base",
                           params={"a": c})


def perturbed(target: TargetPotential, w: Callable, w_prime: Callable, w_second: Callable,
              sigma: float) -> TargetPotential:
    """``V + sigma v`` with ``v = w∘P``; closed-form inverses are dropped."""
    g, g1, g2 = target.g, target.g_prime, target.g_second
    return TargetPotential(
        lambda y: g(y) + sigma * w(y),
        lambda y: g1(y) + sigma * w_prime(y),
        lambda y: g2(y) + sigma * w_second(y),
        target.base, name=f"{target.name}+perturbation",
        params={**target.params, "sigma": sigma}, domain=target.domain,
    )
