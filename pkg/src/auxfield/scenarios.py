"""
Worked cases and the claim suites run over them.

The anharmonic case is ``H = q**2/4 + 3 x**2 + 8 sqrt(beta) x`` read as a
3-D radial problem (mass 2, harmonic base ``P = r**2``).  Power-law targets
``a r**p`` are available over both bases.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Tuple, Union

import numpy as np

from . import _kernel, oracle
from .afm import (
    AfmProblem,
    ApproxSolution,
    Bound,
    afm_minimize,
    classify_bound,
    mean_field_deviation,
    tangent_potential,
    tangent_potential_derivative,
)
from .core import (
    BasePotential,
    Family,
    QuantumState,
    TargetPotential,
    anharmonic,
    coulomb,
    harmonic,
    perturbed,
    power_law,
    principal_number,
)
from .envelope import (
    equivalence_report,
    et_minimize_s,
    et_minimize_v,
    pointwise_identity_gap,
    tangency_defect_coefficient,
    tangential_at,
)

ANHARMONIC_BETAS = (0.1, 1.0, 10.0)
STATES = tuple(QuantumState(n, l) for n in range(4) for l in range(4))
POWER_HARMONIC = (1.0, 3.0, 4.0)
POWER_COULOMB = (1.0, 2.0)
QUARTIC_STATES = tuple(QuantumState(n, l) for n in range(4) for l in range(3))
DEFECT_POINTS = (0.5, 0.8, 1.0, 1.5, 2.5)
SCALING_PAIRS = ((2.0, 0.5), (0.7, 3.0))
FORM_N = (1.0, 1.5, 2.5, 4.0)

FIXTURE_FILE = "fixtures.json"


def make_base(family: Union[str, Family], mass: float = 1.0) -> BasePotential:
    family = Family(family)
    return harmonic(mass) if family is Family.HARMONIC else coulomb(mass)


def fixture_targets() -> List[Tuple[str, TargetPotential]]:
    """Every target of the fixture matrix, labelled."""
    out = [(f"anharmonic beta={b:g}", anharmonic(b)) for b in ANHARMONIC_BETAS]
    out += [(f"power p={p:g} harmonic", power_law(1.0, p, harmonic(1.0))) for p in POWER_HARMONIC]
    out += [(f"power p={p:g} coulomb", power_law(1.0, p, coulomb(1.0))) for p in POWER_COULOMB]
    return out


def exact_solution(target: TargetPotential, state: QuantumState,
                   energy_guess: Optional[float] = None, **kwargs) -> oracle.RadialSolution:
    """Oracle eigenstate of ``T + V`` using the AFM energy as pilot."""
    if energy_guess is None:
        energy_guess = afm_minimize(AfmProblem(target, state)).energy
    return oracle.solve_radial(target.V, target.base.mass, state,
                               energy_guess=energy_guess, **kwargs)


def base_eigenstate(base: BasePotential, nu: float, state: QuantumState) -> oracle.RadialSolution:
    """Oracle eigenstate of the solvable ``T + nu P``."""
    guess = float(base.spectrum(nu, base.principal_number(state.n, state.l)))
    return oracle.solve_radial(lambda r: nu * base.P(r), base.mass, state, energy_guess=guess)


@dataclass(frozen=True)
class AnharmonicCase:
    beta: float
    state: QuantumState
    N: float
    Y: float
    afm: ApproxSolution
    et_s: ApproxSolution
    et_v: ApproxSolution
    exact_energy: float
    exact_error: float

    @property
    def x0(self) -> float:
        return self.afm.r0

    @property
    def envelope_coefficients(self) -> Tuple[float, float]:
        """``(c1, c2)`` of ``c1 x**2 + c2``."""
        return self.afm.c1, self.afm.c2

    @property
    def gap(self) -> float:
        return self.afm.energy - self.exact_energy

    def envelope_excess(self, x) -> Tuple[np.ndarray, np.ndarray]:
        """``V~(x) - V(x)`` as computed, and its closed form ``(4 sqrt(beta)/x0)(x - x0)**2``."""
        target = anharmonic(self.beta)
        x = np.asarray(x, dtype=float)
        computed = tangent_potential(self.afm, target, x) - target.V(x)
        closed = 4.0 * math.sqrt(self.beta) / self.x0 * (x - self.x0) ** 2
        return computed, closed


def run_anharmonic(beta: float, state: QuantumState = QuantumState(),
                   exact: bool = True) -> AnharmonicCase:
    """Solve the anharmonic oscillator by both schemes and, optionally, exactly."""
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    target = anharmonic(beta)
    N = principal_number(state, target.base)
    afm = afm_minimize(AfmProblem(target, state))
    ets = et_minimize_s(target, state)
    etv = et_minimize_v(target, state)
    if exact:
        sol = exact_solution(target, state, afm.energy)
        e_exact, e_err = sol.energy, sol.error_estimate
    else:
        e_exact = e_err = math.nan
    return AnharmonicCase(beta=beta, state=state, N=N, Y=(N / beta) ** (2.0 / 3.0),
                          afm=afm, et_s=ets, et_v=etv,
                          exact_energy=e_exact, exact_error=e_err)


def run_power_law_family(a: float, p: float, base: Union[str, Family, BasePotential],
                         N: float, method: str = "afm") -> ApproxSolution:
    """Approximate solution for ``a r**p`` over the chosen base at principal number ``N``."""
    if not isinstance(base, BasePotential):
        base = make_base(base)
    target = power_law(a, p, base)
    if method == "afm":
        return afm_minimize(AfmProblem(target, N))
    if method == "et-s":
        return et_minimize_s(target, N)
    if method == "et-v":
        return et_minimize_v(target, N)
    raise ValueError(f"unknown method {method!r}")


def scaling_factor(m: float, a: float, p: float) -> float:
    """Energy scale of ``p**2/(2m) + a r**p`` relative to ``m = a = 1``."""
    return (a * a / m ** p) ** (1.0 / (p + 2.0))


# ---------------------------------------------------------------------------
# claim suites


@dataclass(frozen=True)
class Claim:
    suite: str
    name: str
    worst: float
    tolerance: float
    passed: bool

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.suite:<12} {self.name:<58} worst={self.worst:.3e} tol={self.tolerance:.1e}"


def _claim(suite, name, values: Iterable[float], tol: float, upper: bool = True) -> Claim:
    values = list(values)
    worst = max(values) if upper else min(values)
    passed = bool(worst <= tol) if upper else bool(worst >= tol)
    return Claim(suite, name, float(worst), tol, passed)


def suite_equivalence() -> List[Claim]:
    gaps, couplings, pointwise, slopes = [], [], [], []
    for _, target in fixture_targets():
        for state in STATES:
            rep = equivalence_report(target, state)
            gaps.append(rep["energy_gap"])
            couplings.append(rep["coupling_gap"])
            slopes.append(rep["slope_gap"])
            pointwise.append(pointwise_identity_gap(target, state))
    return [
        _claim("equivalence", "max relative gap among AFM, ET(s), ET(v) energies", gaps, 1e-10),
        _claim("equivalence", "|nu0 - v0| / |nu0|", couplings, 1e-8),
        _claim("equivalence", "nu0 = a(t0) at the contact point", slopes, 1e-12),
        _claim("equivalence", "AFM energy = tangential energy on 100-point grid", pointwise, 1e-12),
    ]


def suite_bounds() -> List[Claim]:
    upper, lower, errors, classes = [], [], [], []
    for beta in ANHARMONIC_BETAS:
        for state in STATES:
            case = run_anharmonic(beta, state)
            upper.append(case.gap)
            errors.append(case.exact_error)
            classes.append(0.0 if case.afm.bound is Bound.UPPER else 1.0)
    quartic = power_law(1.0, 4.0, harmonic(1.0))
    for state in QUARTIC_STATES:
        sol = afm_minimize(AfmProblem(quartic, state))
        ex = exact_solution(quartic, state, sol.energy)
        lower.append(sol.energy - ex.energy)
        errors.append(ex.error_estimate)
    classes.append(0.0 if classify_bound(quartic) is Bound.LOWER else 1.0)
    return [
        _claim("bounds", "anharmonic: E_app - E_exact >= -1e-8", upper, -1e-8, upper=False),
        _claim("bounds", "quartic (convex g): E_app - E_exact <= 1e-8", lower, 1e-8),
        _claim("bounds", "oracle relative error estimate", errors, 1e-7),
        _claim("bounds", "concave/convex classification matches", classes, 0.0),
    ]


def suite_scaling() -> List[Claim]:
    scaling, form = [], []
    for p in POWER_HARMONIC:
        for N in FORM_N:
            ref = run_power_law_family(1.0, p, harmonic(1.0), N).energy
            for m, a in SCALING_PAIRS:
                e = afm_minimize(AfmProblem(power_law(a, p, harmonic(m)), N)).energy
                scaling.append(abs(e - scaling_factor(m, a, p) * ref) / abs(e))
    for p in POWER_COULOMB:
        for N in FORM_N:
            e_h = run_power_law_family(1.0, p, "harmonic", N).energy
            e_c = run_power_law_family(1.0, p, "coulomb", N).energy
            form.append(abs(e_h - e_c) / abs(e_h))
    return [
        _claim("scaling", "E(m, a) = (a^2/m^p)^(1/(p+2)) E(1, 1)", scaling, 1e-10),
        _claim("scaling", "same E(N) through harmonic and Coulomb bases", form, 1e-10),
    ]


def suite_tangency() -> List[Claim]:
    value, slope, excess, defect = [], [], [], []
    for _, target in fixture_targets():
        for state in STATES:
            sol = afm_minimize(AfmProblem(target, state))
            r0 = sol.r0
            scale = max(1.0, abs(float(target.V(r0))))
            value.append(abs(tangent_potential(sol, target, r0) - target.V(r0)) / scale)
            slope.append(abs(tangent_potential_derivative(sol, target, r0) - target.dV(r0)) / scale)
        for t in DEFECT_POINTS:
            defect.append(defect_error(target, t, 1e-4))
    for beta in ANHARMONIC_BETAS:
        for state in STATES:
            case = run_anharmonic(beta, state, exact=False)
            x = case.x0 * np.logspace(-1, 1, 50)
            computed, closed = case.envelope_excess(x)
            scale = np.maximum(1.0, np.abs(anharmonic(beta).V(x)))
            excess.append(float(np.max(np.abs(computed - closed) / scale)))
            excess.append(0.0 if np.all(computed >= 0) else 1.0)
    return [
        _claim("tangency", "|V~(r0) - V(r0)| / max(1, |V(r0)|)", value, 1e-10),
        _claim("tangency", "|V~'(r0) - V'(r0)| / max(1, |V(r0)|)", slope, 1e-10),
        _claim("tangency", "anharmonic V~ - V = (4 sqrt(beta)/x0)(x - x0)^2 >= 0", excess, 1e-10),
        _claim("tangency", "second-order defect coefficient at eps=1e-4", defect, 1e-3),
    ]


def defect_error(target: TargetPotential, t: float, eps: float) -> float:
    """Relative error of ``[V(t+e) - V^t(t+e)] / e**2`` against the defect coefficient."""
    tan = tangential_at(target, t)
    coef = tangency_defect_coefficient(target, t)
    x = t + eps
    fd = (float(target.V(x)) - tan(float(target.base.P(x)))) / eps ** 2
    if coef == 0:
        return abs(fd)
    return abs(fd - coef) / abs(coef)


def linear_perturbation(target: TargetPotential, sigma: float) -> TargetPotential:
    """``V + sigma r`` on the harmonic base (``r = sqrt(P)``)."""
    return perturbed(target, np.sqrt, lambda y: 0.5 / np.sqrt(y),
                     lambda y: -0.25 * np.power(y, -1.5), sigma)


def perturbation_study(beta: float = 1.0, state: QuantumState = QuantumState(),
                       sigmas: Tuple[float, ...] = (1e-2, 1e-3)) -> dict:
    """
    Energy shifts under ``V -> V + sigma r``, exact and approximate.

    Exact shifts use one fixed oracle grid for every ``sigma`` so that
    discretization errors cancel in the differences.
    """
    target = anharmonic(beta)
    sol = afm_minimize(AfmProblem(target, state))
    base_state = exact_solution(target, state, sol.energy)
    grid = base_state.levels[0][0]
    exact_mean = oracle.expectation(base_state, lambda r: r)
    rows = []
    for sigma in sigmas:
        shifted = oracle.solve_radial(lambda r: target.V(r) + sigma * r, target.base.mass,
                                      state, grid)
        approx = afm_minimize(AfmProblem(linear_perturbation(target, sigma), state))
        rows.append({
            "sigma": sigma,
            "exact_slope": (shifted.energy - base_state.energy) / sigma,
            "afm_slope": (approx.energy - sol.energy) / sigma,
        })
    return {"r0": sol.r0, "exact_mean_r": exact_mean, "rows": rows}


def suite_perturbation() -> List[Claim]:
    study = perturbation_study()
    r0, mean_r = study["r0"], study["exact_mean_r"]
    coarse, fine = study["rows"]
    res = [abs(row["exact_slope"] - r0) for row in (coarse, fine)]
    afm_res = [abs(row["afm_slope"] - r0) for row in (coarse, fine)]
    ex_res = [abs(row["exact_slope"] - mean_r) for row in (coarse, fine)]
    ratio = coarse["sigma"] / fine["sigma"]
    return [
        Claim("perturbation", "oracle |dE/sigma - r0| at 1e-3 <= 10 x (1e-3/1e-2) x at 1e-2",
              res[1] / res[0], 1.0, res[1] <= res[0]),
        Claim("perturbation", "AFM dE/sigma -> v(r0), first-order ratio in [5, 20]",
              afm_res[0] / afm_res[1], ratio, 5.0 <= afm_res[0] / afm_res[1] <= 20.0),
        Claim("perturbation", "oracle dE/sigma -> <r>, first-order ratio in [5, 20]",
              ex_res[0] / ex_res[1], ratio, 5.0 <= ex_res[0] / ex_res[1] <= 20.0),
    ]


SUITES: Dict[str, Callable[[], List[Claim]]] = {
    "equivalence": suite_equivalence,
    "bounds": suite_bounds,
    "scaling": suite_scaling,
    "tangency": suite_tangency,
    "perturbation": suite_perturbation,
}


def run_suite(name: str) -> List[Claim]:
    if name == "all":
        return [c for suite in SUITES.values() for c in suite()]
    return SUITES[name]()


# ---------------------------------------------------------------------------
# fixtures


def oracle_provenance() -> dict:
    return {
        "points": oracle.DEFAULT_POINTS,
        "ladder": list(oracle.DEFAULT_LADDER),
        "safety": oracle.DEFAULT_SAFETY,
        "decay_exponent": oracle.DECAY_EXPONENT,
        "tolerance": oracle.DEFAULT_TOLERANCE,
        "scan_points": _kernel.SCAN_POINTS,
        "scan_decades": _kernel.SCAN_DECADES,
    }


def generate_fixtures() -> dict:
    """Recompute every recorded number together with the parameters that produced it."""
    anh = []
    for beta in ANHARMONIC_BETAS:
        for state in STATES:
            case = run_anharmonic(beta, state)
            anh.append({
                "beta": beta, "n": state.n, "l": state.l, "N": case.N, "Y": case.Y,
                "E_afm": case.afm.energy, "nu0": case.afm.nu0, "x0": case.x0,
                "E_exact": case.exact_energy, "exact_error": case.exact_error,
            })
    power = []
    for label, target in fixture_targets()[len(ANHARMONIC_BETAS):]:
        for state in STATES:
            sol = afm_minimize(AfmProblem(target, state))
            ex = exact_solution(target, state, sol.energy)
            power.append({
                "target": label, "n": state.n, "l": state.l, "N": sol.N,
                "E_afm": sol.energy, "nu0": sol.nu0, "r0": sol.r0, "bound": sol.bound.value,
                "E_exact": ex.energy, "exact_error": ex.error_estimate,
            })
    target = anharmonic(1.0)
    mean_field = []
    sweep = [QuantumState(n, 0) for n in range(6)] + [QuantumState(0, l) for l in range(1, 6)]
    for state in sweep:
        sol = afm_minimize(AfmProblem(target, state))
        psi = base_eigenstate(target.base, sol.nu0, state)
        mean_field.append({"beta": 1.0, "n": state.n, "l": state.l, "nu0": sol.nu0,
                           "deviation": mean_field_deviation(sol, target, psi)})
    return {
        "provenance": oracle_provenance(),
        "anharmonic": anh,
        "power_law": power,
        "mean_field": mean_field,
        "perturbation": perturbation_study(),
    }


def write_fixtures(path: Union[str, Path]) -> dict:
    data = generate_fixtures()
    Path(path).write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")
    return data


def load_fixtures(path: Optional[Union[str, Path]] = None) -> dict:
    if path is None:
        text = resources.files("auxfield").joinpath("data", FIXTURE_FILE).read_text()
    else:
        text = Path(path).read_text()
    return json.loads(text)


def suite_fixtures(path: Optional[Union[str, Path]] = None, rtol: float = 1e-9) -> List[Claim]:
    """Regenerate the recorded numbers and compare them with a fixture file."""
    stored = load_fixtures(path)
    fresh = generate_fixtures()
    drift = []
    for key, fields in (("anharmonic", ("E_afm", "nu0", "x0", "E_exact")),
                        ("power_law", ("E_afm", "nu0", "r0", "E_exact")),
                        ("mean_field", ("nu0", "deviation"))):
        for old, new in zip(stored[key], fresh[key]):
            drift.extend(abs(old[f] - new[f]) / max(1.0, abs(old[f])) for f in fields)
    same_shape = all(len(stored[k]) == len(fresh[k]) for k in ("anharmonic", "power_law", "mean_field"))
    return [
        Claim("fixtures", "recorded values reproduce", max(drift), rtol,
              same_shape and max(drift) <= rtol),
    ]
