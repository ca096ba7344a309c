import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from belyidet.elliptic import (
    agm,
    det_lambda,
    det_lambda_flat_oracle,
    eta,
    find_stationary_tau,
    flat_area_from_modulus,
    grad_log_det_tau,
    lambda_of_tau,
    lambda_orbit,
    landscape_rows,
    log_det_tau,
    modular_data,
    tau_of_lambda,
)
from belyidet.errors import DomainError
from belyidet.flatdet import FlatConfiguration, metric_area

taus = st.builds(complex, st.floats(-1.9, 1.9), st.floats(0.3, 3.0))


@given(taus)
def test_eta_matches_mpmath(tau):
    assert eta(tau) == pytest.approx(oracles.eta(tau), rel=1e-13)


def test_eta_at_i():
    expected = math.gamma(0.25) / (2 * math.pi**0.75)
    assert eta(1j) == pytest.approx(expected, rel=1e-14)


@given(taus)
def test_eta_modular_transformations(tau):
    assert eta(tau + 1) == pytest.approx(cmath.exp(1j * math.pi / 12) * eta(tau), rel=1e-12)
    lhs = eta(-1 / tau)
    rhs = cmath.sqrt(-1j * tau) * eta(tau)
    assert lhs == pytest.approx(rhs, rel=1e-10)


@given(taus)
def test_jacobi_identity(tau):
    assert modular_data(tau).jacobi_residual < 1e-12


def test_agm_values():
    # Gauss: AGM(1, sqrt 2) = 1.19814...
    assert agm(1, math.sqrt(2)).real == pytest.approx(1.19814023473559220744, rel=1e-14)
    md = modular_data(1j)
    assert md.Kprime == pytest.approx(md.K, rel=1e-14)
    assert md.k == pytest.approx(1 / math.sqrt(2), rel=1e-13)


def test_lambda_special_points():
    assert lambda_of_tau(2j) == pytest.approx(2.0, abs=1e-12)
    w = complex(1, math.sqrt(3))
    assert lambda_of_tau(w) == pytest.approx((1 - 1j * math.sqrt(3)) / 2, abs=1e-12)


@given(taus)
def test_tau_of_lambda_round_trip(tau):
    lam = lambda_of_tau(tau)
    if abs(lam) < 1e-6 or abs(lam - 1) < 1e-6 or abs(lam) > 1e6:
        return
    tau2 = tau_of_lambda(lam)
    lam2 = lambda_of_tau(tau2)
    assert min(abs(lam2 - m) for m in lambda_orbit(lam)) < 1e-8 * (1 + abs(lam))


def test_eta_vs_modulus_on_grid():
    xs = np.linspace(-1.9, 1.9, 10)
    ys = np.linspace(0.3, 3.0, 10)
    worst = 0.0
    for x in xs:
        for y in ys:
            a, b = det_lambda(complex(x, y))
            worst = max(worst, abs(a - b) / a)
    assert worst <= 1e-10


@given(taus)
def test_periodicity_and_symmetry(tau):
    v = log_det_tau(tau)
    assert log_det_tau(tau + 2) == pytest.approx(v, abs=1e-11)
    assert log_det_tau(-tau.conjugate()) == pytest.approx(v, abs=1e-11)


@pytest.mark.parametrize("tau", [2j, 1j, 0.5 + 1.2j, 1 + math.sqrt(3) * 1j, -0.7 + 0.6j])
def test_flat_oracle(tau):
    lam = lambda_of_tau(tau)
    assert det_lambda_flat_oracle(lam) == pytest.approx(log_det_tau(tau), abs=1e-8)


@pytest.mark.parametrize("tau", [2j, 0.5 + 1.2j])
def test_flat_oracle_quadrature(tau):
    lam = lambda_of_tau(tau)
    assert det_lambda_flat_oracle(lam, method="quadrature") == pytest.approx(log_det_tau(tau), abs=1e-4)


@pytest.mark.parametrize("tau", [2j, 0.3 + 0.9j, 1.4 + 2.2j])
def test_area_from_modulus(tau):
    lam = lambda_of_tau(tau)
    cfg = FlatConfiguration((0j, 1 + 0j, lam), (-0.5,) * 3, -0.5)
    assert flat_area_from_modulus(tau) == pytest.approx(metric_area(cfg), rel=1e-10)


def test_anharmonic_orbit_invariance():
    lam = lambda_of_tau(0.4 + 1.1j)
    vals = [det_lambda_flat_oracle(m) for m in lambda_orbit(lam)]
    assert max(vals) - min(vals) < 1e-9


@given(taus)
def test_gradient_matches_finite_differences(tau):
    gx, gy = grad_log_det_tau(tau)
    h = 1e-6
    fx = (log_det_tau(tau + h) - log_det_tau(tau - h)) / (2 * h)
    fy = (log_det_tau(tau + 1j * h) - log_det_tau(tau - 1j * h)) / (2 * h)
    assert gx == pytest.approx(fx, abs=1e-7)
    assert gy == pytest.approx(fy, abs=1e-7)


def test_stationary_saddle_at_2i():
    sp = find_stationary_tau(0.03 + 2.05j)
    assert abs(sp.tau - 2j) < 1e-8
    assert sp.classification == "saddle"
    assert sp.gradient_norm <= 1e-8


def test_stationary_maximum_equianharmonic():
    sp = find_stationary_tau(1 + 1.7j)
    assert abs(sp.tau - complex(1, math.sqrt(3))) < 1e-8
    assert sp.classification == "max"
    assert sp.gradient_norm <= 1e-8
    # lambda lands on the equi-anharmonic orbit
    assert min(abs(sp.lam - (1 + s * 1j * math.sqrt(3)) / 2) for s in (1, -1)) < 1e-8


def test_decreasing_up_the_imaginary_axis():
    # the cusp direction: ln F ~ -pi y / 12 + ln(y)/2
    vals = [log_det_tau(complex(0, y)) for y in (3, 5, 8, 12)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_domain_errors():
    with pytest.raises(DomainError):
        log_det_tau(0.5 + 0.01j)
    with pytest.raises(DomainError):
        tau_of_lambda(1)
    with pytest.raises(DomainError):
        det_lambda_flat_oracle(0)
    with pytest.raises(DomainError):
        det_lambda_flat_oracle(0.5j, method="monte-carlo")
    with pytest.raises(DomainError):
        find_stationary_tau(0.1 + 0.2j)


def test_landscape_rows():
    rows = landscape_rows([0.0, 0.5], [1.0, 2.0])
    assert len(rows) == 4
    assert rows[0][:2] == (0.0, 1.0)
    assert rows[0][2] == pytest.approx(log_det_tau(1j))
