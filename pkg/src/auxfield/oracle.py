"""
Exact numerical reference for the reduced radial equation.

    -u''/(2m) + [V(r) + l(l+1)/(2 m r^2)] u = E u,   u(0) = u(r_max) = 0

is discretized with the three-point stencil on a uniform grid that excludes
the origin.  The required eigenvalue of the tridiagonal matrix is extracted
by bisection (Sturm sequences, LAPACK ``stebz``) and Richardson-extrapolated
over a ladder of grids with spacing ratio 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from .core import QuantumState
from .errors import ConvergenceError, NodeCountError

Potential = Callable[[np.ndarray], np.ndarray]

DEFAULT_POINTS = 2000
DEFAULT_LADDER = (1, 2, 4)
DEFAULT_SAFETY = 3.0
DEFAULT_TOLERANCE = 1e-7
# WKB decay exponent required beyond the outer turning point
DECAY_EXPONENT = 20.0


@dataclass(frozen=True)
class RadialGrid:
    """
    Uniform grid ``r_i = i h``, ``i = 1 .. points - 1``, with ``h = r_max / points``.

    ``points`` is the number of intervals; the Dirichlet nodes ``r = 0`` and
    ``r = r_max`` are not stored.
    """

    r_max: float
    points: int = DEFAULT_POINTS

    def __post_init__(self):
        if not self.r_max > 0:
            raise ValueError(f"r_max must be positive, got {self.r_max}")
        if self.points < 500:
            raise ValueError(f"at least 500 grid intervals required, got {self.points}")

    @property
    def spacing(self) -> float:
        return self.r_max / self.points

    @property
    def r_min(self) -> float:
        return self.spacing

    @property
    def r(self) -> np.ndarray:
        return self.spacing * np.arange(1, self.points)

    def refined(self, factor: int) -> "RadialGrid":
        return RadialGrid(self.r_max, self.points * factor)


@dataclass(frozen=True)
class RadialSolution:
    """
    Extrapolated eigenvalue plus the normalized eigenvector on every grid.

    ``grid`` and ``u`` refer to the finest grid of the ladder; ``levels``
    holds ``(grid, u, raw_energy)`` for each rung.
    """

    grid: RadialGrid
    u: np.ndarray
    energy: float
    norm_residual: float
    error_estimate: float
    state: QuantumState
    mass: float
    levels: tuple = ()

    @property
    def r(self) -> np.ndarray:
        return self.grid.r

    @property
    def nodes(self) -> int:
        return count_nodes(self.u)


def count_nodes(u: np.ndarray, rel_floor: float = 1e-8) -> int:
    significant = u[np.abs(u) > rel_floor * np.max(np.abs(u))]
    return int(np.count_nonzero(np.diff(np.sign(significant)) != 0))


def _hamiltonian(potential: Potential, m: float, l: int, grid: RadialGrid):
    h = grid.spacing
    r = grid.r
    diag = 1.0 / (m * h * h) + np.asarray(potential(r), dtype=float) + l * (l + 1) / (2.0 * m * r * r)
    off = np.full(r.size - 1, -0.5 / (m * h * h))
    return diag, off


def radial_spectrum(potential: Potential, m: float, l: int, grid: RadialGrid,
                    count: int = 1) -> Tuple[np.ndarray, np.ndarray]:
    """
    Lowest ``count`` eigenvalues and grid-normalized eigenvectors on one grid.

    Columns of the returned vector array satisfy ``h * sum(u**2) = 1``.
    """
    diag, off = _hamiltonian(potential, m, l, grid)
    w, v = eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1))
    v = v / np.sqrt(grid.spacing)
    for j in range(v.shape[1]):
        lead = v[np.argmax(np.abs(v[:, j]) > 1e-6 * np.max(np.abs(v[:, j]))), j]
        if lead < 0:
            v[:, j] = -v[:, j]
    return w, v


def _single_level(potential, m, state, grid):
    diag, off = _hamiltonian(potential, m, state.l, grid)
    w, v = eigh_tridiagonal(diag, off, select="i", select_range=(state.n, state.n))
    u = v[:, 0] / np.sqrt(grid.spacing)
    lead = u[np.argmax(np.abs(u) > 1e-6 * np.max(np.abs(u)))]
    if lead < 0:
        u = -u
    return float(w[0]), u


def richardson(values: Sequence[float], ratio: float = 2.0, order: int = 2) -> list:
    """One Richardson sweep over successive refinements (spacing divided by ``ratio``)."""
    f = ratio ** order
    return [(f * fine - coarse) / (f - 1.0) for coarse, fine in zip(values, values[1:])]


def outer_turning_point(potential: Potential, m: float, l: int, energy: float) -> float:
    r = np.logspace(-4, 5, 2000)
    with np.errstate(all="ignore"):
        veff = np.asarray(potential(r), dtype=float) + l * (l + 1) / (2.0 * m * r * r)
    inside = np.flatnonzero(veff < energy)
    if inside.size == 0 or inside[-1] == r.size - 1:
        raise ConvergenceError(f"no outer turning point for energy {energy!r}")
    i = inside[-1]

    def f(x):
        return float(potential(np.array([x]))[0]) + l * (l + 1) / (2.0 * m * x * x) - energy

    return brentq(f, r[i], r[i + 1])


def auto_grid(potential: Potential, m: float, state: QuantumState, energy_guess: float,
              safety: float = DEFAULT_SAFETY, points: int = DEFAULT_POINTS) -> RadialGrid:
    """
    Box of ``safety`` times the outer turning point, enlarged until the WKB
    decay exponent past the turning point reaches ``DECAY_EXPONENT``.
    """
    r_t = outer_turning_point(potential, m, state.l, energy_guess)
    r_max = safety * r_t
    l = state.l
    while True:
        x = np.linspace(r_t, r_max, 400)
        veff = np.asarray(potential(x), dtype=float) + l * (l + 1) / (2.0 * m * x * x)
        decay = trapezoid(np.sqrt(np.clip(2.0 * m * (veff - energy_guess), 0.0, None)), x)
        if decay >= DECAY_EXPONENT:
            return RadialGrid(r_max, points)
        r_max *= 1.25


def pilot_energy(potential: Potential, m: float, state: QuantumState) -> float:
    """Coarse eigenvalue estimate from a box doubled until it stops moving."""
    r_max, previous = 10.0, None
    for _ in range(30):
        e, _ = _single_level(potential, m, state, RadialGrid(r_max, 800))
        if previous is not None and abs(e - previous) <= 1e-3 * max(1.0, abs(e)):
            return e
        previous, r_max = e, 2.0 * r_max
    raise ConvergenceError("pilot eigenvalue did not settle while enlarging the box")


def solve_radial(
    potential: Potential,
    m: float,
    state: QuantumState,
    grid: Optional[RadialGrid] = None,
    *,
    energy_guess: Optional[float] = None,
    safety: float = DEFAULT_SAFETY,
    ladder: Sequence[int] = DEFAULT_LADDER,
    tolerance: float = DEFAULT_TOLERANCE,
) -> RadialSolution:
    """
    Eigenvalue number ``state.n`` (ascending, from 0) at angular momentum ``state.l``.

    Parameters
    ----------
    potential : callable
        ``V(r)``, vectorized over numpy arrays.
    m : float
        Mass in the kinetic term ``p**2 / (2 m)``.
    grid : RadialGrid, optional
        Coarsest grid of the ladder.  Built from ``energy_guess`` (or a coarse
        pilot solve) when omitted.
    ladder : sequence of int
        Refinement factors applied to ``grid.points``.  With three or more
        rungs, the error estimate is the change between the last two
        Richardson values; with two it is the last Richardson correction.
    tolerance : float
        Maximum relative error estimate accepted.

    Raises
    ------
    ConvergenceError
        If the error estimate exceeds ``tolerance``.
    NodeCountError
        If the finest eigenvector does not have ``state.n`` nodes.
    """
    if not m > 0:
        raise ValueError(f"mass must be positive, got {m}")
    if grid is None:
        if energy_guess is None:
            energy_guess = pilot_energy(potential, m, state)
        grid = auto_grid(potential, m, state, energy_guess, safety)
    if len(ladder) < 2:
        raise ValueError("Richardson extrapolation needs at least two grids")

    levels = []
    for factor in ladder:
        g = grid.refined(factor)
        e, u = _single_level(potential, m, state, g)
        levels.append((g, u, e))
    raw = [e for _, _, e in levels]
    extrapolated = richardson(raw)
    energy = extrapolated[-1]
    if len(extrapolated) >= 2:
        err = abs(extrapolated[-1] - extrapolated[-2])
    else:
        err = abs(raw[-1] - extrapolated[-1])
    err /= max(abs(energy), 1e-300)
    if err > tolerance:
        raise ConvergenceError(
            f"state n={state.n} l={state.l}: relative error estimate {err:.2e} exceeds {tolerance:.1e}"
        )
    fine_grid, u, _ = levels[-1]
    nodes = count_nodes(u)
    if nodes != state.n:
        raise NodeCountError(f"state n={state.n} l={state.l}: eigenvector has {nodes} nodes")
    norm = fine_grid.spacing * float(np.sum(u * u))
    return RadialSolution(
        grid=fine_grid, u=u, energy=float(energy), norm_residual=abs(norm - 1.0),
        error_estimate=float(err), state=state, mass=float(m), levels=tuple(levels),
    )


def expectation(solution: RadialSolution, f: Callable[[np.ndarray], np.ndarray],
                extrapolate: bool = True) -> float:
    """
    ``∫ f(r) u(r)**2 dr`` by the grid quadrature (trapezoid with zero ends).

    With ``extrapolate`` the values on the two finest grids are combined by
    Richardson extrapolation, which removes the leading ``h**2`` error.
    """

    def on(grid, u):
        r = grid.r
        return grid.spacing * float(np.sum(np.broadcast_to(f(r), r.shape) * u * u))

    if not extrapolate or len(solution.levels) < 2:
        return on(solution.grid, solution.u)
    (g1, u1, _), (g2, u2, _) = solution.levels[-2], solution.levels[-1]
    return richardson([on(g1, u1), on(g2, u2)])[0]


def observed_order(energies: Sequence[float], ratio: float = 2.0) -> float:
    """Discretization order from three successive refinements."""
    e1, e2, e3 = energies[-3:]
    return float(np.log((e1 - e2) / (e2 - e3)) / np.log(ratio))
