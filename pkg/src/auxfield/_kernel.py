"""Safeguarded one-dimensional extremization shared by all solvers."""

from __future__ import annotations

from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from .errors import NoExtremumError

SCAN_DECADES = 6.0
SCAN_POINTS = 1201
# relative shrink of the admissible interval at both ends
ENDPOINT_SHRINK = 1e-9
EPS = np.finfo(float).eps


def scan_couplings(target) -> Tuple[np.ndarray, np.ndarray]:
    """
    Ascending couplings covering the admissible interval, with contact points.

    Couplings are produced as ``K(r)`` over log-spaced contact points, so
    ``I`` is known exactly on the scan.  For linear ``g`` (constant ``K``) the
    contact points are meaningless and ``nan`` is returned for them.
    """
    from .core import image_of_K

    factors = np.logspace(-SCAN_DECADES, SCAN_DECADES, SCAN_POINTS)
    lo_dom, hi_dom = target.base.coupling_domain
    if target.is_linear():
        c, _ = target.linear_coefficients()
        return c * factors, np.full(SCAN_POINTS, np.nan)
    with np.errstate(all="ignore"):
        nu = np.asarray(target.K(factors), dtype=float)
    lo, hi = image_of_K(target)
    lo, hi = max(lo, lo_dom), min(hi, hi_dom)
    if np.isfinite(lo):
        lo = lo + ENDPOINT_SHRINK * max(1.0, abs(lo))
    if np.isfinite(hi):
        hi = hi - ENDPOINT_SHRINK * max(1.0, abs(hi))
    keep = np.isfinite(nu) & (nu > lo) & (nu < hi)
    nu, r = nu[keep], factors[keep]
    order = np.argsort(nu)
    return nu[order], r[order]


def sign_change_intervals(values: np.ndarray) -> List[int]:
    """Indices ``i`` with a sign change between ``values[i]`` and ``values[i+1]``."""
    sgn = np.sign(np.asarray(values, dtype=float))
    ok = np.isfinite(sgn[:-1]) & np.isfinite(sgn[1:])
    hit = ok & ((sgn[:-1] * sgn[1:] < 0) | ((sgn[1:] == 0) & (sgn[:-1] != 0)))
    return [int(i) for i in np.flatnonzero(hit)]


def refine_root(h: Callable[[float], float], a: float, b: float) -> float:
    ha, hb = h(a), h(b)
    if ha == 0:
        return a
    if hb == 0:
        return b
    return brentq(h, a, b, xtol=1e-300, rtol=4 * EPS, maxiter=500)


def locate_stationary(
    xs: np.ndarray,
    hs: np.ndarray,
    refine: Callable[[int], float],
    energy: Callable[[float], float],
    scan_energy: Optional[np.ndarray] = None,
    prefer: str = "min",
) -> Tuple[float, int]:
    """
    Refine every sign change of the stationarity function found on a scan.

    Parameters
    ----------
    xs, hs : ndarray
        Ascending scan abscissae and stationarity values on them.
    refine : callable
        ``refine(i)`` returns the root inside ``[xs[i], xs[i+1]]``.
    energy : callable
        Energy functional, used to rank several stationary points.
    scan_energy : ndarray, optional
        Energy on the scan.  With several roots, the one whose energy is
        nearest the scan extremum (``prefer`` = "min" or "max") is returned.

    Returns
    -------
    x0, count
        Selected stationary point and the number found.
    """
    idx = sign_change_intervals(hs)
    if not idx:
        raise NoExtremumError("stationarity condition has no sign change on the admissible interval")
    roots = [refine(i) for i in idx]
    if len(roots) == 1:
        return roots[0], 1
    energies = np.array([energy(x) for x in roots])
    if scan_energy is not None:
        finite = scan_energy[np.isfinite(scan_energy)]
        ref = finite.min() if prefer == "min" else finite.max()
    else:
        ref = energies.min() if prefer == "min" else energies.max()
    return roots[int(np.argmin(np.abs(energies - ref)))], len(roots)


def relative(a: float, scale: float) -> float:
    return abs(a) / max(1.0, abs(scale))
