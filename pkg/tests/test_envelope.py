import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from auxfield.afm import Bound, classify_bound
from auxfield.core import QuantumState, anharmonic, coulomb, harmonic, power_law, scaled_base
from auxfield.envelope import (
    I_matches_composition,
    equivalence_report,
    et_energy_over_s,
    et_energy_over_v,
    et_minimize_s,
    et_minimize_v,
    g_prime_inverse,
    kinetic_potential,
    kinetic_sample,
    pointwise_identity_gap,
    principal_envelope_energy,
    tangency_defect_coefficient,
    tangential_at,
)
from auxfield.errors import DomainError


def fd_defect(target, t, eps):
    tan = tangential_at(target, t)
    x = t + eps
    return (float(target.V(x)) - tan(float(target.base.P(x)))) / eps ** 2


def test_tangential_examples():
    tan = tangential_at(anharmonic(1.0), 1.0)
    # a(1) = 3 + 4 = 7, V(1) = 11, so offset 11 - 7
    assert tan.slope == pytest.approx(7.0, rel=1e-15)
    assert tan.offset == pytest.approx(4.0, rel=1e-15)
    assert tan(1.0) == pytest.approx(11.0, rel=1e-15)


@pytest.mark.parametrize("t", [0.5, 0.8, 1.0, 1.5, 2.5])
def test_defect_anharmonic(t):
    # V - V^t = -(4/t)(x - t)^2 exactly
    target = anharmonic(1.0)
    coef = tangency_defect_coefficient(target, t)
    assert coef == pytest.approx(-4.0 / t, rel=1e-12)
    for eps in (1e-2, 1e-3, 1e-4):
        assert fd_defect(target, t, eps) == pytest.approx(coef, rel=2 * eps / t)


def test_defect_quartic():
    target = power_law(1.0, 4.0, harmonic())
    for t in (0.5, 1.0, 2.0):
        coef = tangency_defect_coefficient(target, t)
        assert coef == pytest.approx(4.0 * t ** 2, rel=1e-12)
        assert fd_defect(target, t, 1e-4) == pytest.approx(coef, rel=1e-3)


def test_defect_linear_is_zero():
    target = scaled_base(3.0, harmonic())
    assert tangency_defect_coefficient(target, 1.2) == 0.0
    assert abs(fd_defect(target, 1.2, 1e-3)) < 1e-8


@pytest.mark.parametrize("base", [harmonic(1.0), harmonic(2.0), coulomb(1.0), coulomb(0.5)])
def test_kinetic_potential_tabulation(base):
    N = 2.5
    for v in np.logspace(-2, 2, 100):
        sample = kinetic_sample(base, N, float(v))
        assert kinetic_potential(base, N, sample.s) == pytest.approx(sample.k, rel=1e-12)
        assert kinetic_potential(base, N, sample.s, closed_form=False) == pytest.approx(sample.k, rel=1e-10)
        assert base.coupling_of_kinetic(sample.s, N) == pytest.approx(v, rel=1e-12)


def test_kinetic_potential_closed_forms():
    assert kinetic_potential(harmonic(1.0), 1.5, 2.0) == pytest.approx(1.5 ** 2 / 4.0, rel=1e-15)
    assert kinetic_potential(coulomb(1.0), 1.0, 0.5) == pytest.approx(-1.0, rel=1e-15)
    with pytest.raises(DomainError):
        kinetic_potential(harmonic(), 1.5, 0.0)


@pytest.mark.parametrize("N", [1.5, 2.5, 5.5])
def test_quartic_s_form_closed(N):
    # m = 2, V = r^4: s + (N^2/(4s))^2 is minimal at s = N^(4/3)/2,
    # giving E = (3/4) N^(4/3)
    target = power_law(1.0, 4.0, harmonic(2.0))
    sol = et_minimize_s(target, N)
    assert sol.energy == pytest.approx(0.75 * N ** (4.0 / 3.0), rel=1e-13)
    s = np.linspace(0.05, 5.0, 100_000) * N ** (4.0 / 3.0)
    scan = s + (N * N / (4.0 * s)) ** 2
    assert sol.energy == pytest.approx(scan.min(), rel=1e-9)
    assert sol.energy == pytest.approx(et_energy_over_s(target, N, sol.diagnostics["s0"]), rel=1e-15)


@pytest.mark.parametrize("target", [anharmonic(1.0), power_law(1.0, 1.0, coulomb()),
                                    power_law(2.0, 3.0, harmonic(0.5))])
def test_three_routes_agree(target):
    for state in (QuantumState(0, 0), QuantumState(2, 3)):
        rep = equivalence_report(target, state)
        assert rep["energy_gap"] <= 1e-10
        assert rep["coupling_gap"] <= 1e-8
        assert rep["slope_gap"] <= 1e-8
        assert rep["tangency_value"] <= 1e-10
        assert rep["tangency_slope"] <= 1e-10


def test_v_form_stationarity_and_principal_form():
    target = anharmonic(1.0)
    sol = et_minimize_v(target, QuantumState(1, 1))
    N = sol.N
    assert sol.diagnostics["principal_envelope_energy"] == pytest.approx(sol.energy, rel=1e-12)
    y0 = g_prime_inverse(target, sol.nu0)
    assert target.base.spectrum_derivative(sol.nu0, N) == pytest.approx(y0, rel=1e-12)
    h = 1e-5 * sol.nu0
    d = (et_energy_over_v(target, N, sol.nu0 + h) - et_energy_over_v(target, N, sol.nu0 - h)) / (2 * h)
    assert abs(d) < 1e-7


def test_principal_form_differs_away_from_optimum():
    target = anharmonic(1.0)
    N = 1.5
    assert principal_envelope_energy(target, N, 20.0) != pytest.approx(et_energy_over_v(target, N, 20.0), rel=1e-3)


@pytest.mark.parametrize("target", [anharmonic(0.1), anharmonic(10.0),
                                    power_law(1.0, 4.0, harmonic()), power_law(1.0, 2.0, coulomb())])
def test_pointwise_identity(target):
    assert pointwise_identity_gap(target, QuantumState(1, 1)) <= 1e-12


@pytest.mark.parametrize("nu", [3.5, 7.0, 50.0])
def test_contact_point_composition(nu):
    assert I_matches_composition(anharmonic(1.0), nu) <= 1e-12


def test_g_prime_inverse_domain():
    with pytest.raises(DomainError):
        g_prime_inverse(anharmonic(1.0), 2.0)


def test_linear_g_v_route_is_exact():
    target = scaled_base(2.0, coulomb())
    sol = et_minimize_v(target, QuantumState(1, 0))
    assert sol.exact
    assert sol.energy == pytest.approx(coulomb().spectrum(2.0, 2.0), rel=1e-14)
    ets = et_minimize_s(target, QuantumState(1, 0))
    assert ets.energy == pytest.approx(sol.energy, rel=1e-12)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([anharmonic(1.0), power_law(1.0, 4.0, harmonic()), power_law(1.0, 1.0, coulomb())]),
       st.floats(0.05, 5.0), st.floats(0.05, 5.0))
def test_tangential_bounds_target_on_one_side(target, t, x):
    tan = tangential_at(target, t)
    diff = float(target.V(x)) - tan(float(target.base.P(x)))
    scale = max(1.0, abs(float(target.V(x))))
    if classify_bound(target) is Bound.UPPER:
        assert diff <= 1e-12 * scale
    else:
        assert diff >= -1e-12 * scale
