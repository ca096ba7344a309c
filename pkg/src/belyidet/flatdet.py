"""Determinants of flat conical spheres.

The metric is prod |x - x_k|^(2 beta_k) |dx|^2 with sum of all orders
(the one at infinity included) equal to -2.  Its area is computed from
periods of the multivalued form prod (x - x_k)^beta_k dx: after slitting
the plane along parallel rays running from every x_k to infinity the
developing map is single valued, and Stokes' theorem turns the area
integral into a sum over slits of (jump of the developing map) times
(conjugate period along the slit).  Only one-dimensional integrals with
algebraic endpoint weights remain.  A nested polar quadrature is kept as
an independent check.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy import integrate

from .errors import DomainError
from .specfun import Divisor, bigC, calC, zeta0

__all__ = [
    "FlatConfiguration",
    "LogDetResult",
    "config_from_json",
    "flat_liouville_action",
    "flat_log_det",
    "flat_log_det_normalized",
    "flat_potential_coeffs",
    "metric_area",
    "metric_area_quadrature",
    "rescale_log_det",
]

ORDER_SUM_TOL = 1e-12
MIN_SEPARATION = 1e-9


@dataclass(frozen=True)
class FlatConfiguration:
    finite_points: tuple[complex, ...]
    orders: tuple[float, ...]
    order_at_infinity: float
    target_area: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "finite_points", tuple(complex(z) for z in self.finite_points))
        object.__setattr__(self, "orders", tuple(float(b) for b in self.orders))
        if len(self.finite_points) != len(self.orders):
            raise DomainError("points and orders differ in length")
        allo = self.orders + (self.order_at_infinity,)
        for b in allo:
            if not (math.isfinite(b) and b > -1):
                raise DomainError(f"order {b!r} is not > -1 (non-integrable cone)")
        if abs(math.fsum(allo) + 2) > ORDER_SUM_TOL:
            raise DomainError(f"orders sum to {math.fsum(allo)!r}, a flat metric needs -2")
        pts = self.finite_points
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if abs(pts[i] - pts[j]) <= MIN_SEPARATION:
                    raise DomainError(f"points {i} and {j} coincide ({pts[i]})")
        if not self.target_area > 0:
            raise DomainError("target area must be positive")

    @classmethod
    def from_divisor(cls, div: Divisor, target_area: float = 1.0, drop_smooth: bool = False) -> FlatConfiguration:
        """drop_smooth removes finite points of order 0, which change nothing."""
        pts, ords = div.points, div.orders
        if drop_smooth:
            keep = [i for i, b in enumerate(ords) if b != 0]
            pts, ords = tuple(pts[i] for i in keep), tuple(ords[i] for i in keep)
        return cls(pts, ords, div.inf_order, target_area)

    @classmethod
    def balanced(cls, points: Sequence[complex], orders: Sequence[float], target_area: float = 1.0) -> FlatConfiguration:
        """Configuration whose order at infinity absorbs the remainder."""
        return cls(tuple(points), tuple(orders), -2.0 - math.fsum(orders), target_area)

    @property
    def divisor(self) -> Divisor:
        return Divisor(self.finite_points, self.orders, self.order_at_infinity)


@dataclass(frozen=True)
class LogDetResult:
    log_det: float
    area: float
    divisor: Divisor
    route: str
    extras: dict = field(default_factory=dict, compare=False)


def rescale_log_det(r: LogDetResult, new_area: float) -> LogDetResult:
    """log det after scaling the metric to total area new_area.

    Scaling the metric by t divides the Laplacian by t, so
    log det changes by -zeta(0) ln t with t = new_area / area.
    """
    if not (r.area > 0 and new_area > 0):
        raise DomainError("areas must be positive")
    val = r.log_det - zeta0(r.divisor) * math.log(new_area / r.area)
    return replace(r, log_det=val, area=new_area)


def _rotation(points: Sequence[complex]) -> complex:
    """Unit factor making all imaginary parts of the rotated points well separated."""
    if len(points) < 2:
        return 1.0 + 0j
    pts = np.asarray(points)
    diffs = (pts[:, None] - pts[None, :])[np.triu_indices(len(pts), 1)]
    scale = np.abs(diffs)
    best, best_val = 1.0 + 0j, -1.0
    for k in range(720):
        w = np.exp(1j * math.pi * (k + 0.5) / 720)
        val = float(np.min(np.abs((w * diffs).imag) / scale))
        if val > best_val + 1e-12:
            best, best_val = complex(w), val
    return best


_QUAD = dict(epsabs=0.0, epsrel=1e-13, limit=400)


def _quad_complex(fun, a: float, b: float, alpha: float) -> complex:
    """int_a^b (x-a)^alpha fun(x) dx for complex fun."""
    with warnings.catch_warnings():
        # the tolerance sits at the roundoff floor on purpose
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        re = integrate.quad(lambda t: fun(t).real, a, b, weight="alg", wvar=(alpha, 0.0), **_QUAD)[0]
        im = integrate.quad(lambda t: fun(t).imag, a, b, weight="alg", wvar=(alpha, 0.0), **_QUAD)[0]
    return complex(re, im)


def _ray_integral(ys: np.ndarray, betas: np.ndarray, k: int, direction: int, beta_inf: float) -> complex:
    """int_0^inf prod_j (y_k + direction*t - y_j)^beta_j dt with principal branches,
    the k-th factor taken as t^beta_k (right ray) or t^beta_k e^{-i pi beta_k}
    (lower side of the left ray)."""
    yk = ys[k]
    others = np.delete(np.arange(len(ys)), k)
    oy, ob = ys[others], betas[others]
    bk = betas[k]
    phase = 1.0 if direction > 0 else complex(math.cos(math.pi * bk), -math.sin(math.pi * bk))
    T = float(np.max(np.abs(oy - yk))) if len(oy) else 1.0

    def smooth(t: float) -> complex:
        x = yk + direction * t
        return phase * complex(np.exp(np.sum(ob * np.log(x - oy))))

    near = _quad_complex(smooth, 0.0, T, bk)

    def tail(u: float) -> complex:
        # the weighted rule samples the endpoint; the smooth factor is continuous there
        u = max(u, 1e-12)
        t = T / u
        x = yk + direction * t
        val = phase * np.exp(bk * math.log(t) + np.sum(ob * np.log(x - oy)))
        return complex(val * T / (u * u) * u ** (-beta_inf))

    far = _quad_complex(tail, 0.0, 1.0, beta_inf)
    return near + far


def _period_area(points: Sequence[complex], orders: Sequence[float], beta_inf: float) -> float:
    w = _rotation(points)
    ys = np.asarray(points, dtype=complex) * w
    betas = np.asarray(orders, dtype=float)
    total = 0j
    for k in range(len(ys)):
        W = -_ray_integral(ys, betas, k, +1, beta_inf)
        R = -_ray_integral(ys, betas, k, -1, beta_inf)
        jump = complex(math.cos(2 * math.pi * betas[k]), -math.sin(2 * math.pi * betas[k])) - 1.0
        total += -0.5j * jump * W * R.conjugate()
    if abs(total.imag) > 1e-8 * abs(total.real) or total.real <= 0:
        raise ArithmeticError(f"period area is not a positive real number: {total}")
    return total.real


def metric_area(cfg: FlatConfiguration | Divisor) -> float:
    """Area of prod |x - x_k|^(2 beta_k) |dx|^2 for a flat divisor."""
    if isinstance(cfg, Divisor):
        cfg = FlatConfiguration.from_divisor(cfg)
    return _period_area(cfg.finite_points, cfg.orders, cfg.order_at_infinity)


def metric_area_quadrature(cfg: FlatConfiguration | Divisor, epsrel: float = 1e-11, nodes: int = 512) -> float:
    """Area by direct 2D quadrature (independent oracle for the period method).

    A partition of unity w_k = 1 / (1 + sum_{j != k} (|x - x_k| / |x - x_j|)^8)
    splits the plane into pieces, each integrated in polar coordinates about
    its own cone: the factor r^(2 beta_k) goes into an algebraic quadrature
    weight, the other cones are damped by w_k, and the angle is handled by
    the periodic trapezoid rule.  The range r > 1 is mapped to u = 1/r, where
    the decay at infinity again becomes an algebraic weight.
    """
    if isinstance(cfg, Divisor):
        cfg = FlatConfiguration.from_divisor(cfg)
    pts = np.asarray(cfg.finite_points, dtype=complex)
    bet = np.asarray(cfg.orders, dtype=float)
    ex_inf = 1 + 2 * cfg.order_at_infinity
    if len(pts) == 0:
        raise DomainError("need at least one finite cone")
    theta = np.exp(2j * np.pi * np.arange(nodes) / nodes)
    total = []
    for k in range(len(pts)):
        others = np.delete(pts, k)
        b_oth = np.delete(bet, k)

        def ring(r: float, k=k, others=others, b_oth=b_oth) -> float:
            z = pts[k] + r * theta
            if len(others) == 0:
                return 2 * math.pi
            d = np.abs(z[:, None] - others[None, :])
            with np.errstate(divide="ignore", invalid="ignore"):
                rho = np.exp(np.sum(2 * b_oth * np.log(d), axis=1))
                w = 1.0 / (1.0 + np.sum((r / d) ** 8, axis=1))
                # a node landing exactly on another cone contributes its limit, 0
                vals = np.where(d.min(axis=1) > 0, rho * w, 0.0)
            return 2 * math.pi * float(np.mean(vals))

        ex = 1 + 2 * bet[k]

        def far(u: float, k=k, ring=ring, ex=ex) -> float:
            # r = 1/u: r^(1 + 2 beta_k) ring(r) dr = u^(-3 - 2 beta_k) ring(1/u) du
            if u <= 0:
                return 0.0
            return ring(1 / u) * u ** (-3 - 2 * bet[k] - ex_inf)

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            near = integrate.quad(ring, 0.0, 1.0, weight="alg", wvar=(ex, 0.0), epsabs=0.0, epsrel=epsrel, limit=500)[0]
            out = integrate.quad(far, 0.0, 1.0, weight="alg", wvar=(ex_inf, 0.0), epsabs=0.0, epsrel=epsrel, limit=500)[0]
        total += [near, out]
    return math.fsum(total)


def flat_log_det_normalized(div: Divisor) -> float:
    """log(det / area) for the unscaled metric prod |x - x_k|^(2 beta_k)|dx|^2."""
    pts, bet = div.points, div.orders
    pair = []
    for k, (xk, bk) in enumerate(zip(pts, bet)):
        for l, (xl, bl) in enumerate(zip(pts, bet)):
            if k != l:
                pair.append(bk * bl / (bk + 1) * math.log(abs(xk - xl)))
    return math.fsum(pair) / 6.0 - math.fsum(calC(b) for b in div.all_orders) + bigC()


def flat_log_det(cfg: FlatConfiguration, raw_area: float | None = None) -> LogDetResult:
    """log det of the flat metric scaled to cfg.target_area.

    raw_area is the area of the unscaled metric; when omitted it is computed
    by the period method.
    """
    div = cfg.divisor
    route = "flat/supplied-area" if raw_area is not None else "flat/period-area"
    S = metric_area(cfg) if raw_area is None else float(raw_area)
    base = LogDetResult(flat_log_det_normalized(div) + math.log(S), S, div, route, {"raw_area": S})
    return rescale_log_det(base, cfg.target_area)


def flat_potential_coeffs(cfg: FlatConfiguration, raw_area: float | None = None) -> tuple[list[float], float]:
    """Constant terms of the potential of the flat metric of area cfg.target_area.

    Returns (finite point coefficients, coefficient at infinity).
    """
    S = metric_area(cfg) if raw_area is None else float(raw_area)
    log_c = 0.5 * math.log(cfg.target_area / S)
    pts, bet = cfg.finite_points, cfg.orders
    out = []
    for k, xk in enumerate(pts):
        terms = [b * math.log(abs(xk - xl)) for l, (xl, b) in enumerate(zip(pts, bet)) if l != k]
        out.append(log_c + math.fsum(terms))
    return out, log_c


def flat_liouville_action(cfg: FlatConfiguration, raw_area: float | None = None) -> float:
    """Liouville action of the explicit flat potential (the area term drops out)."""
    phis, phi_inf = flat_potential_coeffs(cfg, raw_area)
    terms = [b * p for b, p in zip(cfg.orders, phis)]
    terms.append((cfg.order_at_infinity + 2) * phi_inf)
    return 2 * math.pi * math.fsum(terms)


def config_from_json(obj: dict) -> FlatConfiguration:
    """{"points": [{"re": .., "im": ..} | "inf"], "orders": [...], "area": number}.

    Without an "inf" entry the point at infinity gets order 0.
    """
    try:
        pts_raw, orders = obj["points"], [float(b) for b in obj["orders"]]
        area = float(obj.get("area", 1.0))
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed flat configuration: {exc}") from exc
    if len(pts_raw) != len(orders):
        raise DomainError("points and orders differ in length")
    finite, fin_orders, inf_order = [], [], None
    for p, b in zip(pts_raw, orders):
        if isinstance(p, str) and p.strip().lower() in ("inf", "infinity"):
            if inf_order is not None:
                raise DomainError("infinity listed twice")
            inf_order = b
        else:
            try:
                finite.append(complex(float(p["re"]), float(p.get("im", 0.0))))
            except (KeyError, TypeError, ValueError) as exc:
                raise DomainError(f"bad point {p!r}") from exc
            fin_orders.append(b)
    return FlatConfiguration(tuple(finite), tuple(fin_orders), 0.0 if inf_order is None else inf_order, area)
