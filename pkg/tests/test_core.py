import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from auxfield import oracle
from auxfield.core import (
    QuantumState,
    anharmonic,
    base_energy,
    coulomb,
    harmonic,
    I_of_nu,
    image_of_K,
    K_of_r,
    power_law,
    principal_number,
    scaled_base,
)
from auxfield.errors import DomainError, MonotonicityError, SingularityError


def numeric(target):
    """Same target with the registered closed forms removed."""
    return dataclasses.replace(target, k_inverse=None, k_image=None)


@pytest.mark.parametrize("state, base, expected", [
    (QuantumState(0, 0), harmonic(), 1.5),
    (QuantumState(0, 0), coulomb(), 1.0),
    (QuantumState(2, 1), harmonic(), 6.5),
    (QuantumState(2, 1), coulomb(), 4.0),
])
def test_principal_number(state, base, expected):
    assert principal_number(state, base) == expected


def test_principal_number_continuous_override():
    assert principal_number(QuantumState(3, 3), harmonic(), N=2.25) == 2.25
    with pytest.raises(ValueError):
        principal_number(QuantumState(), harmonic(), N=0.0)


@pytest.mark.parametrize("n, l", [(-1, 0), (0, -2), (0.5, 0)])
def test_quantum_state_rejects_invalid(n, l):
    with pytest.raises(ValueError):
        QuantumState(n, l)


def test_base_energy_examples():
    assert base_energy(harmonic(2.0), 1.0, 1.5) == pytest.approx(1.5, rel=1e-15)
    assert base_energy(coulomb(1.0), 1.0, 1.0) == pytest.approx(-0.5, rel=1e-15)
    assert base_energy(harmonic(2.0), 4.0, 1.5) == pytest.approx(3.0, rel=1e-15)


def test_base_energy_matches_radial_eigensolver():
    sol = oracle.solve_radial(lambda r: 4.0 * r * r, 2.0, QuantumState(0, 0), energy_guess=3.0)
    assert sol.energy == pytest.approx(3.0, abs=1e-6)
    assert base_energy(harmonic(2.0), 4.0, 1.5) == pytest.approx(sol.energy, abs=1e-6)


@pytest.mark.parametrize("nu", [0.0, -1.0])
def test_base_energy_domain(nu):
    with pytest.raises(DomainError):
        base_energy(harmonic(), nu, 1.5)


def test_spectrum_derivative_by_finite_difference():
    for base in (harmonic(0.7), coulomb(1.3)):
        for nu in (0.3, 1.0, 5.0):
            h = 1e-6 * nu
            fd = (base.spectrum(nu + h, 2.5) - base.spectrum(nu - h, 2.5)) / (2 * h)
            assert base.spectrum_derivative(nu, 2.5) == pytest.approx(fd, rel=1e-8)


def test_K_examples():
    assert K_of_r(anharmonic(1.0), 1.0) == pytest.approx(7.0, rel=1e-15)
    assert K_of_r(scaled_base(1.0, harmonic()), 3.7) == 1.0
    target = anharmonic(4.0)
    assert K_of_r(target, 2.0) == pytest.approx(3.0 + 4.0 * 2.0 / 2.0, rel=1e-15)
    h = 1e-6
    fd = (target.V(2.0 + h) - target.V(2.0 - h)) / (target.base.P(2.0 + h) - target.base.P(2.0 - h))
    assert fd == pytest.approx(7.0, rel=1e-8)


def test_K_singular_where_P_prime_vanishes():
    with pytest.raises(SingularityError):
        K_of_r(anharmonic(1.0), 0.0)


@pytest.mark.parametrize("nu, expected", [(7.0, 1.0), (5.0, 2.0)])
def test_I_examples(nu, expected):
    target = anharmonic(1.0)
    assert I_of_nu(target, nu) == pytest.approx(expected, rel=1e-15)
    r = I_of_nu(numeric(target), nu)
    assert r == pytest.approx(expected, rel=1e-13)
    assert abs(K_of_r(target, r) - nu) <= 1e-12 * max(1.0, nu)


def test_I_rejects_constant_K():
    with pytest.raises(MonotonicityError):
        I_of_nu(scaled_base(1.0, harmonic()), 1.0)


@pytest.mark.parametrize("nu", [3.0, 2.0, -1.0])
def test_I_outside_image(nu):
    with pytest.raises(DomainError):
        I_of_nu(anharmonic(1.0), nu)
    with pytest.raises(DomainError):
        I_of_nu(numeric(anharmonic(1.0)), nu)


def test_image_of_K_from_limits():
    lo, hi = image_of_K(numeric(anharmonic(1.0)))
    assert lo == 3.0 and hi > 1e40
    lo, hi = image_of_K(power_law(1.0, 1.0, coulomb()))
    assert lo < 1e-100 and hi > 1e100


def test_K_not_monotone_is_rejected():
    base = harmonic()
    # g'' changes sign at y = 1
    target = dataclasses.replace(
        scaled_base(1.0, base),
        g=lambda y: (y - 1.0) ** 3 + 5.0 * y,
        g_prime=lambda y: 3.0 * (y - 1.0) ** 2 + 5.0,
        g_second=lambda y: 6.0 * (y - 1.0),
    )
    with pytest.raises(MonotonicityError):
        I_of_nu(target, 6.0)


TARGETS = [
    anharmonic(0.1), anharmonic(1.0), anharmonic(10.0),
    power_law(1.0, 1.0, harmonic()), power_law(2.0, 3.0, harmonic(0.5)),
    power_law(1.0, 4.0, harmonic()), power_law(1.0, 1.0, coulomb()),
    power_law(0.5, 2.0, coulomb(2.0)),
]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(TARGETS), st.floats(-2.5, 2.5))
def test_K_I_round_trip(target, log_r):
    nu = float(K_of_r(target, 10.0 ** log_r))
    r = I_of_nu(numeric(target), nu)
    assert abs(K_of_r(target, r) - nu) <= 1e-12 * max(1.0, abs(nu))


@pytest.mark.parametrize("target", TARGETS)
def test_composition_and_derivative_consistency(target):
    r = np.logspace(-2, 2, 41)
    v = target.V(r)
    direct = target.g(target.base.P(r))
    assert np.all(np.abs(v - direct) <= 1e-12 * np.maximum(1.0, np.abs(v)))
    h = 1e-5 * r
    fd = (target.V(r + h) - target.V(r - h)) / (2 * h)
    analytic = target.g_prime(target.base.P(r)) * target.base.dP(r)
    assert np.allclose(fd, analytic, rtol=1e-6, atol=0)
    assert np.allclose(target.K(r), analytic / target.base.dP(r), rtol=1e-12)


def test_power_law_values():
    r = np.array([0.3, 1.0, 2.7])
    assert np.allclose(power_law(1.5, 3.0, harmonic()).V(r), 1.5 * r ** 3, rtol=1e-14)
    assert np.allclose(power_law(1.5, 1.0, coulomb()).V(r), 1.5 * r, rtol=1e-14)
    assert np.allclose(anharmonic(2.0).V(r), 3 * r ** 2 + 8 * math.sqrt(2.0) * r, rtol=1e-14)


@pytest.mark.parametrize("a, p, base", [(-1.0, 1.0, harmonic()), (1.0, -2.0, harmonic()),
                                        (1.0, -1.0, coulomb())])
def test_power_law_domain(a, p, base):
    with pytest.raises(DomainError):
        power_law(a, p, base)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([harmonic(0.5), harmonic(2.0), coulomb(1.0), coulomb(3.0)]),
       st.floats(0.5, 6.0), st.floats(1e-3, 1e3), st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
def test_spectrum_concave_in_coupling(base, N, a, b, c):
    n1, n2, n3 = sorted((a, b, c))
    if not (n1 < n2 < n3):
        return
    e1, e2, e3 = (base.spectrum(x, N) for x in (n1, n2, n3))
    chord = e1 + (e3 - e1) * (n2 - n1) / (n3 - n1)
    assert e2 >= chord - 1e-12 * max(abs(e1), abs(e3))
