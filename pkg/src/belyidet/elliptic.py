"""The flat sphere with four cones of order -1/2 at 0, 1, lambda, infinity.

At unit area its determinant is F(tau) = sqrt(Im tau) |eta(tau/2)|^2.  Three
routes are provided: the Dedekind eta function by its pentagonal series, the
Jacobi modulus k and the complete integral K (by the AGM), and the flat-cone
formula in the lambda-plane.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.optimize import minimize

from .errors import DomainError, RouteDisagreement
from .flatdet import FlatConfiguration, flat_log_det, metric_area, metric_area_quadrature
from .specfun import bigC, calC

__all__ = [
    "MIN_IM_TAU",
    "ModularPoint",
    "StationaryPoint",
    "agm",
    "det_lambda",
    "det_lambda_flat_oracle",
    "eta",
    "find_stationary_tau",
    "flat_area_from_modulus",
    "grad_log_det_tau",
    "lambda_orbit",
    "lambda_of_tau",
    "landscape_rows",
    "log_det_tau",
    "modular_data",
    "tau_of_lambda",
]

MIN_IM_TAU = 0.05
SERIES_EPS = 1e-17
ROUTE_TOL = 1e-10
GRAD_TOL = 1e-8


def _check_tau(tau: complex) -> complex:
    tau = complex(tau)
    if not tau.imag > MIN_IM_TAU:
        raise DomainError(f"Im tau must exceed {MIN_IM_TAU}, got tau = {tau}")
    return tau


def _nome(tau: complex) -> complex:
    """q = exp(i pi tau)."""
    return cmath.exp(1j * math.pi * tau)


def _theta_constants(q: complex, q4: complex) -> tuple[complex, complex, complex]:
    """theta_2, theta_3, theta_4 at z = 0 for nome q; q4 is q^(1/4)."""
    t2 = t3 = t4 = 0j
    n = 0
    aq = abs(q)
    while True:
        if n > 0:
            w = q ** (n * n)
            t3 += w
            t4 += w if n % 2 == 0 else -w
        t2 += q ** (n * (n + 1))
        n += 1
        if aq ** (n * n) * n < SERIES_EPS:
            break
    return 2 * q4 * t2, 1 + 2 * t3, 1 + 2 * t4


def _euler_product_series(q: complex) -> complex:
    """prod_{n>=1} (1 - q^n) by Euler's pentagonal series."""
    total = 1 + 0j
    aq = abs(q)
    n = 1
    while True:
        e1, e2 = n * (3 * n - 1) // 2, n * (3 * n + 1) // 2
        sign = -1 if n % 2 else 1
        total += sign * (q**e1 + q**e2)
        n += 1
        if aq ** (n * (3 * n - 1) // 2) < SERIES_EPS:
            break
    return total


def eta(tau: complex) -> complex:
    """Dedekind eta: exp(i pi tau / 12) prod (1 - exp(2 pi i n tau))."""
    tau = complex(tau)
    if not tau.imag > 0:
        raise DomainError("eta needs Im tau > 0")
    return cmath.exp(1j * math.pi * tau / 12) * _euler_product_series(cmath.exp(2j * math.pi * tau))


def agm(a: complex, b: complex, tol: float = 1e-15, max_iter: int = 100) -> complex:
    """Arithmetic-geometric mean with the right choice of square root at each step."""
    a, b = complex(a), complex(b)
    for _ in range(max_iter):
        if abs(a - b) <= tol * abs(a):
            return (a + b) / 2
        an = (a + b) / 2
        bn = cmath.sqrt(a * b)
        if abs(an - bn) > abs(an + bn):
            bn = -bn
        a, b = an, bn
    raise ArithmeticError("AGM did not converge")


@dataclass(frozen=True)
class ModularPoint:
    tau: complex
    q: complex
    theta2: complex
    theta3: complex
    theta4: complex
    eta_half: complex
    k: complex
    K: complex
    Kprime: complex
    lam: complex

    @property
    def jacobi_residual(self) -> float:
        return abs(self.theta3**4 - self.theta2**4 - self.theta4**4) / abs(self.theta3**4)


def modular_data(tau: complex) -> ModularPoint:
    tau = _check_tau(tau)
    q = _nome(tau)
    q4 = cmath.exp(1j * math.pi * tau / 4)
    t2, t3, t4 = _theta_constants(q, q4)
    k = t2 * t2 / (t3 * t3)
    K = math.pi / 2 * t3 * t3
    return ModularPoint(
        tau, q, t2, t3, t4, eta(tau / 2), k, K, -1j * tau * K, (k + 1) ** 2 / (4 * k)
    )


def lambda_of_tau(tau: complex) -> complex:
    return modular_data(tau).lam


def tau_of_lambda(lam: complex) -> complex:
    """A tau with lambda_of_tau(tau) in the six-point orbit of lam.

    k solves k^2 + (2 - 4 lam) k + 1 = 0; tau = i K'(k)/K(k) with both
    integrals from the AGM.
    """
    lam = complex(lam)
    if lam in (0, 1):
        raise DomainError("lambda must avoid 0 and 1")
    u = 2 * lam - 1
    root = cmath.sqrt(u * u - 1)
    best = None
    for k in (u + root, u - root):
        kp = cmath.sqrt(1 - k * k)
        tau = 1j * agm(1, kp) / agm(1, k)
        if tau.imag < 0:
            tau = -tau.conjugate()
        if best is None or tau.imag > best.imag:
            best = tau
    return best


def lambda_orbit(lam: complex) -> tuple[complex, ...]:
    lam = complex(lam)
    return (lam, 1 - lam, 1 / lam, 1 / (1 - lam), lam / (lam - 1), (lam - 1) / lam)


def log_det_tau(tau: complex) -> float:
    """ln F(tau), the log determinant at unit area."""
    tau = _check_tau(tau)
    return 0.5 * math.log(tau.imag) + 2 * math.log(abs(eta(tau / 2)))


def _e2(tau: complex) -> complex:
    """Eisenstein E_2(tau) = 1 - 24 sum n q^n / (1 - q^n), q = exp(2 pi i tau)."""
    q = cmath.exp(2j * math.pi * tau)
    total = 0j
    n = 1
    qn = q
    while abs(qn) * n > SERIES_EPS:
        total += n * qn / (1 - qn)
        n += 1
        qn *= q
    return 1 - 24 * total


def grad_log_det_tau(tau: complex) -> tuple[float, float]:
    """(d/dx, d/dy) of ln F at tau = x + iy."""
    tau = _check_tau(tau)
    dtau = 1 / (4j * tau.imag) + 1j * math.pi / 24 * _e2(tau / 2)
    return 2 * dtau.real, -2 * dtau.imag


def det_lambda(tau: complex, tol: float = ROUTE_TOL) -> tuple[float, float]:
    """(eta route, modulus route) for the unit-area determinant."""
    tau = _check_tau(tau)
    # both routes are 2-periodic in Re tau; the AGM branch is the right one near Re tau = 0
    x = math.remainder(tau.real, 2.0)
    tau = complex(x, tau.imag)
    y = tau.imag
    r_eta = math.sqrt(y) * abs(eta(tau / 2)) ** 2
    md = modular_data(tau)
    k = md.k
    kp = md.theta4**2 / md.theta3**2
    K = math.pi / (2 * agm(1, kp))
    r_mod = 2 ** (2 / 3) / math.pi * abs(1 - k * k) ** (1 / 3) * abs(k) ** (1 / 6) * math.sqrt(y) * abs(K)
    if abs(r_eta - r_mod) > tol * r_eta:
        raise RouteDisagreement(f"det at tau={tau}: eta vs modulus", r_eta, r_mod, tol * r_eta)
    return r_eta, r_mod


def flat_area_from_modulus(tau: complex) -> float:
    """Area of |x|^-1 |x-1|^-1 |x-lambda|^-1 |dx|^2 from k, K, K' at tau."""
    md = modular_data(tau)
    k, K, Kp = md.k, md.K, md.Kprime
    return float((8 * abs(k) * (Kp * K.conjugate() + Kp.conjugate() * K)).real)


def det_lambda_flat_oracle(lam: complex, method: str = "period", check: bool = True) -> float:
    """log det at unit area from the flat-cone formula in the lambda-plane.

    method "period" takes the area from the period integrals, "quadrature"
    from direct 2D quadrature of the density.
    """
    lam = complex(lam)
    if not math.isfinite(abs(lam)) or abs(lam) < 1e-9 or abs(lam - 1) < 1e-9:
        raise DomainError(f"lambda must be finite and away from 0 and 1, got {lam}")
    cfg = FlatConfiguration((0j, 1 + 0j, lam), (-0.5, -0.5, -0.5), -0.5, 1.0)
    if method == "period":
        S = metric_area(cfg)
    elif method == "quadrature":
        S = metric_area_quadrature(cfg)
    else:
        raise DomainError(f"unknown area method {method!r}")
    val = 0.5 * math.log(S) + (math.log(abs(lam)) + math.log(abs(lam - 1))) / 6 - 4 * calC(-0.5) + bigC()
    if check:
        direct = flat_log_det(cfg, raw_area=S).log_det
        if abs(direct - val) > 1e-8:
            raise RouteDisagreement(f"flat lambda={lam}: formula vs cone pipeline", val, direct, 1e-8)
    return val


@dataclass(frozen=True)
class StationaryPoint:
    tau: complex
    classification: str
    gradient_norm: float
    hessian_eigenvalues: tuple[float, float]
    lam: complex
    log_det: float


def _grad_vec(v) -> np.ndarray:
    return np.array(grad_log_det_tau(complex(v[0], v[1])))


def _hessian(tau: complex, h: float = 1e-4) -> np.ndarray:
    """Central differences of the analytic gradient, symmetrized."""
    H = np.empty((2, 2))
    v = np.array([tau.real, tau.imag])
    for j in range(2):
        e = np.zeros(2)
        e[j] = h
        H[:, j] = (_grad_vec(v + e) - _grad_vec(v - e)) / (2 * h)
    return (H + H.T) / 2


def find_stationary_tau(start: complex, max_iter: int = 4000) -> StationaryPoint:
    """Stationary point of ln F near start.

    A Nelder-Mead simplex minimizes |grad ln F|^2 (this finds saddles as
    well as extrema); Newton steps then polish the point until the gradient
    norm is at most 1e-8, and the Hessian signature classifies it.
    """
    start = complex(start)
    if not start.imag > 0.5:
        raise DomainError("start must have Im tau > 0.5")

    def objective(v):
        if v[1] <= MIN_IM_TAU:
            return 1e6
        g = _grad_vec(v)
        return float(g @ g)

    res = minimize(objective, [start.real, start.imag], method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-24, "maxiter": max_iter, "maxfev": 2 * max_iter})
    v = np.array(res.x)
    for _ in range(50):
        g = _grad_vec(v)
        if math.hypot(*g) <= GRAD_TOL * 1e-2:
            break
        v = v - np.linalg.solve(_hessian(complex(v[0], v[1])), g)
    tau = complex(v[0], v[1])
    gn = float(math.hypot(*_grad_vec(v)))
    if not gn <= GRAD_TOL:
        raise ArithmeticError(f"no stationary point found from {start}: gradient norm {gn:.3e}")
    ev = np.linalg.eigvalsh(_hessian(tau))
    if ev[1] < 0:
        kind = "max"
    elif ev[0] > 0:
        kind = "min"
    else:
        kind = "saddle"
    return StationaryPoint(tau, kind, gn, (float(ev[0]), float(ev[1])), lambda_of_tau(tau), log_det_tau(tau))


def landscape_rows(re_values: Iterable[float], im_values: Iterable[float]) -> list[tuple[float, float, float]]:
    """(Re tau, Im tau, ln F) over a rectangular grid."""
    re_values, im_values = list(re_values), list(im_values)
    return [(x, y, log_det_tau(complex(x, y))) for y in im_values for x in re_values]
