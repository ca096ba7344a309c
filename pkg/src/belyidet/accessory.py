"""Stress-energy tensors and accessory parameters.

For a metric with cones of orders gamma_k at x_k the stress-energy tensor is

    T(x) = sum_k s_k / (2 (x - x_k)^2) + h_k / (x - x_k),   s_k = -gamma_k (gamma_k + 2),

and h_k are the accessory parameters.  The three-point values are Schwarz's;
pullback_accessory transports them through a Belyi map using the local
coefficients c_k, d_k, and residues_via_contour recovers the same numbers
by integrating the transported tensor around each point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .belyi import RamificationData, RationalMap, RamifiedPoint
from .errors import DomainError, RouteDisagreement
from .flatdet import FlatConfiguration, flat_liouville_action, flat_potential_coeffs
from .polyexact import Poly, taylor_coeffs_at
from .specfun import TriangleDivisor

__all__ = [
    "CONTOUR_NODES",
    "SUM_RULE_TOL",
    "StressData",
    "contour_stress",
    "flat_accessory",
    "partial_fraction_eval",
    "polyakov_position_check",
    "polyakov_order_check",
    "pullback_accessory",
    "residues_via_contour",
    "schwarz_accessory",
    "stress_energy_eval",
    "sum_rule_residuals",
]

SUM_RULE_TOL = 1e-8
CONTOUR_NODES = 512
MAX_RADIUS = 1e-2
EVAL_CLEARANCE = 1e-6


def _s(order: float) -> float:
    return -order * (2.0 + order)


@dataclass(frozen=True)
class StressData:
    """Second-order weights s and accessory parameters h at the finite
    marked points, plus the pair read off in the coordinate 1/x at infinity."""

    points: tuple[complex, ...]
    orders: tuple[float, ...]
    s: tuple[float, ...]
    h: tuple[complex, ...]
    order_at_infinity: float
    s_inf: float
    h_inf: complex

    def as_dict(self) -> dict:
        pts = [
            {"x": [z.real, z.imag], "order": b, "s": s, "h": [h.real, h.imag]}
            for z, b, s, h in zip(self.points, self.orders, self.s, self.h)
        ]
        pts.append({
            "x": "inf", "order": self.order_at_infinity, "s": self.s_inf,
            "h": [self.h_inf.real, self.h_inf.imag],
        })
        return {"points": pts, "sum_rule_residuals": list(sum_rule_residuals(self))}


def sum_rule_residuals(sd: StressData) -> tuple[float, float, float]:
    """Residuals of the three identities forced by T = O(x^-4) at infinity
    after subtracting s_inf/(2x^2) + h_inf/x^3."""
    x = np.array(sd.points, dtype=complex)
    s = np.array(sd.s, dtype=float)
    h = np.array(sd.h, dtype=complex)
    r1 = abs(h.sum())
    r2 = abs((h * x + s / 2).sum() - sd.s_inf / 2)
    r3 = abs((h * x * x + s * x).sum() - sd.h_inf)
    return float(r1), float(r2), float(r3)


def _check_sum_rules(sd: StressData, tol: float) -> None:
    res = sum_rule_residuals(sd)
    scale = 1.0 + max([abs(v) for v in sd.s] + [abs(v) for v in sd.h] + [abs(sd.s_inf)])
    if max(res) > tol * scale:
        raise RouteDisagreement("stress tensor sum rules", 0.0, max(res), tol * scale)


def schwarz_accessory(triangle: TriangleDivisor) -> StressData:
    s0, s1, si = (_s(b) for b in triangle.orders)
    h0 = (s0 + s1 - si) / 2
    hi = (s1 + si - s0) / 2
    return StressData(
        (0j, 1 + 0j), triangle.orders[:2], (s0, s1), (complex(h0), complex(-h0)),
        triangle.betaInf, si, complex(hi),
    )


def _base_pair(base: StressData, fiber: str) -> tuple[float, complex]:
    if fiber == "0":
        return base.s[0], base.h[0]
    if fiber == "1":
        return base.s[1], base.h[1]
    return base.s_inf, base.h_inf


def _transported(p: RamifiedPoint, base: StressData, b: float) -> tuple[float, complex]:
    """(s, h) at one point of the cover.  At infinity the stored c, d belong
    to f(1/y) at y = 0 and the result is the pair in the coordinate y."""
    m = p.m
    g = m * (b + 1) - 1
    s = _s(g)
    if p.c == 0:
        raise DomainError(f"degenerate local expansion at {p.location}: c = 0")
    ratio = p.d / p.c
    sj, hj = _base_pair(base, p.fiber)
    if p.is_pole:
        h = -ratio * sj + hj / p.c if p.ord == 0 else ratio * g * (g + 2) / m
    else:
        h = ratio * sj + p.c * hj if p.ord == 0 else -ratio * g * (g + 2) / m
    return s, complex(h)


def pullback_accessory(ram: RamificationData, triangle: TriangleDivisor, tol: float = SUM_RULE_TOL) -> StressData:
    base = schwarz_accessory(triangle)
    pts, ords, ss, hs = [], [], [], []
    s_inf = h_inf = g_inf = None
    for p in ram.points:
        b = triangle.order_at(p.fiber)
        g = p.m * (b + 1) - 1
        if not g > -1:
            raise DomainError(f"pullback order {g} at {p.location} is not > -1")
        s, h = _transported(p, base, b)
        if p.is_infinity:
            s_inf, h_inf, g_inf = s, h, g
        else:
            pts.append(p.location)
            ords.append(g)
            ss.append(s)
            hs.append(h)
    sd = StressData(tuple(pts), tuple(ords), tuple(ss), tuple(hs), g_inf, s_inf, h_inf)
    _check_sum_rules(sd, tol)
    return sd


def _base_tensor(base: StressData, z: complex) -> complex:
    s0, s1 = base.s
    h0, h1 = base.h
    return s0 / (2 * z * z) + h0 / z + s1 / (2 * (z - 1) ** 2) + h1 / (z - 1)


def stress_energy_eval(ram: RamificationData, triangle: TriangleDivisor, x: complex) -> complex:
    """(T_phi o f) f'^2 + {f, x} at a point away from the marked points."""
    x = complex(x)
    for p in ram.finite_points:
        if abs(x - p.location) <= EVAL_CLEARANCE:
            raise DomainError(f"x = {x} is within {EVAL_CLEARANCE} of the marked point {p.location}")
    f0, f1, f2, f3 = ram.f.derivatives(x)
    if f1 == 0:
        raise DomainError(f"f' vanishes at x = {x}")
    schw = (2 * f1 * f3 - 3 * f2 * f2) / (2 * f1 * f1)
    return _base_tensor(schwarz_accessory(triangle), f0) * f1 * f1 + schw


def partial_fraction_eval(sd: StressData, x: complex) -> complex:
    x = complex(x)
    terms = [s / (2 * (x - z) ** 2) + h / (x - z) for z, s, h in zip(sd.points, sd.s, sd.h)]
    return complex(sum(terms))


def _shifted(p: Poly, x0: complex) -> np.ndarray:
    """Coefficients of p(x0 + t) in t, highest degree first (numpy order)."""
    if p.degree < 0:
        return np.zeros(1, dtype=complex)
    return np.array(taylor_coeffs_at(p, x0, p.degree + 1)[::-1], dtype=complex)


def contour_stress(f: RationalMap, triangle: TriangleDivisor, x0: complex, t: np.ndarray) -> np.ndarray:
    """The transported tensor at x0 + t, evaluated from exact Taylor shifts of
    P, Q, f - 1 and f' at x0 so that nothing cancels near a ramified point."""
    base = schwarz_accessory(triangle)
    s0, s1 = base.s
    h0 = base.h[0]
    P, Q, D, N = (np.polyval(_shifted(g, x0), t) for g in (f.P, f.Q, f.D, f.N))
    Nc, Qc = _shifted(f.N, x0), _shifted(f.Q, x0)
    N1, N2 = np.polyval(np.polyder(Nc, 1), t), np.polyval(np.polyder(Nc, 2), t)
    Q1, Q2 = np.polyval(np.polyder(Qc, 1), t), np.polyval(np.polyder(Qc, 2), t)
    T = np.zeros_like(t)
    if s0 != 0:
        T = T + s0 / 2 * (N / (P * Q)) ** 2
    if s1 != 0:
        T = T + s1 / 2 * (N / (D * Q)) ** 2
    # h1 = -h0, and h0/z + h1/(z - 1) = -h0/(z(z - 1)); the combined form
    # avoids cancelling two huge terms near a pole of f
    if h0 != 0:
        T = T - h0 * N * N / (P * D * Q * Q)
    y1 = N1 / N - 2 * Q1 / Q
    y2 = N2 / N - (N1 / N) ** 2 - 2 * (Q2 / Q - (Q1 / Q) ** 2)
    return T + y2 - 0.5 * y1 * y1


def _contour_radius(points: Sequence[complex], x0: complex) -> float:
    others = [abs(z - x0) for z in points if abs(z - x0) > 0]
    nn = min(others) if others else math.inf
    return min(MAX_RADIUS, 0.25 * nn)


def residues_via_contour(
    ram: RamificationData,
    triangle: TriangleDivisor,
    k: int,
    nodes: int = CONTOUR_NODES,
) -> tuple[float, complex]:
    """(s_k, h_k) as the t^-2 and t^-1 Laurent coefficients of the transported
    tensor, by the trapezoid rule on a small circle.  For the point at
    infinity the map f(1/y) is used at y = 0."""
    if nodes < CONTOUR_NODES:
        raise DomainError(f"at least {CONTOUR_NODES} nodes are required")
    p = ram.points[k]
    finite = [q.location for q in ram.finite_points]
    if p.is_infinity:
        f = ram.f.inverted()
        x0 = 0j
        pts = [1 / z for z in finite if z != 0]
        r = _contour_radius(pts, x0)
    else:
        f = ram.f
        x0 = p.location
        r = _contour_radius(finite, x0)
    if not math.isfinite(r):
        r = MAX_RADIUS
    theta = 2 * np.pi * np.arange(nodes) / nodes
    t = r * np.exp(1j * theta)
    T = contour_stress(f, triangle, x0, t)
    if not np.all(np.isfinite(T)):
        raise DomainError(f"contour around point {k} meets a singularity")
    s = 2 * np.mean(T * t * t)
    h = np.mean(T * t)
    return float(s.real), complex(h)


# ---------------------------------------------------------------------------
# flat metrics

def flat_accessory(cfg: FlatConfiguration) -> StressData:
    """Exact tensor of prod |x - x_k|^(2 beta_k) |dx|^2: h_k = -beta_k sum beta_l / (x_k - x_l)."""
    pts, bet = cfg.finite_points, cfg.orders
    hs = []
    for k, (xk, bk) in enumerate(zip(pts, bet)):
        hs.append(complex(-bk * sum(bl / (xk - xl) for l, (xl, bl) in enumerate(zip(pts, bet)) if l != k)))
    ss = tuple(_s(b) for b in bet)
    x = np.array(pts, dtype=complex)
    h = np.array(hs, dtype=complex)
    s = np.array(ss)
    s_inf = _s(cfg.order_at_infinity)
    h_inf = complex((h * x * x + s * x).sum())
    return StressData(pts, bet, ss, tuple(hs), cfg.order_at_infinity, s_inf, h_inf)


def polyakov_position_check(cfg: FlatConfiguration, k: int, step: float = 1e-5) -> tuple[complex, complex]:
    """(d/dx_k of the flat Liouville action by central differences, -2 pi h_k)."""
    pts = list(cfg.finite_points)

    def action(dz: complex) -> float:
        moved = pts.copy()
        moved[k] = pts[k] + dz
        return flat_liouville_action(FlatConfiguration(tuple(moved), cfg.orders, cfg.order_at_infinity, cfg.target_area))

    da = (action(step) - action(-step)) / (2 * step)
    db = (action(1j * step) - action(-1j * step)) / (2 * step)
    fd = 0.5 * (da - 1j * db)
    return complex(fd), -2 * math.pi * flat_accessory(cfg).h[k]


def polyakov_order_check(cfg: FlatConfiguration, k: int, j: int | str = "inf", step: float = 1e-5) -> tuple[float, float]:
    """Derivative of the flat Liouville action along beta_k -> beta_k + t,
    beta_j -> beta_j - t (which keeps the metric flat), against
    -2 pi (1 - 2 phi_k) + 2 pi (1 - 2 phi_j) = 4 pi (phi_k - phi_j)."""

    def shifted(t: float) -> FlatConfiguration:
        ords = list(cfg.orders)
        binf = cfg.order_at_infinity
        ords[k] += t
        if j == "inf":
            binf -= t
        else:
            ords[j] -= t
        return FlatConfiguration(cfg.finite_points, tuple(ords), binf, cfg.target_area)

    fd = (flat_liouville_action(shifted(step)) - flat_liouville_action(shifted(-step))) / (2 * step)
    phis, phi_inf = flat_potential_coeffs(cfg)
    pj = phi_inf if j == "inf" else phis[j]
    return fd, 4 * math.pi * (phis[k] - pj)
