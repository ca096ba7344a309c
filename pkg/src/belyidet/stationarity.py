"""Finite-difference checks that regular flat configurations are critical
points of log det at fixed area.

Coordinates: the point at infinity and two finite points are pinned, the
remaining finite points move in both real directions, and the orders move
along e_k - e_ref so their sum (hence flatness) is preserved.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .belyi import INF
from .errors import DomainError
from .flatdet import FlatConfiguration, flat_log_det
from .maindet import catalog_ramification, solid_flat_beta

__all__ = [
    "ConfigurationPoint",
    "StationarityReport",
    "affine_gradient",
    "check_platonic_stationarity",
    "STATIONARITY_TOL",
    "fd_gradient",
    "perturbed",
    "platonic_configuration",
    "with_order_shift",
]

STATIONARITY_TOL = {"icosahedron": 1e-3, "dodecahedron": 1e-3}
DEFAULT_TOL = 1e-4
MIN_STEP, MAX_STEP = 1e-5, 1e-2
ADMISSIBLE_SEPARATION = 1e-6


@dataclass(frozen=True)
class ConfigurationPoint:
    """A flat configuration with its free coordinates.

    coords entries are ("re", k), ("im", k) for finite point k, and
    ("order", k) meaning beta_k + t, beta_ref - t, where k or ref may be
    "inf".
    """

    cfg: FlatConfiguration
    pinned: tuple[int, int]
    order_ref: int | str
    coords: tuple[tuple, ...]

    @classmethod
    def gauge_fixed(cls, cfg: FlatConfiguration, pinned: tuple[int, int] = (0, 1), vary_orders: bool = True) -> ConfigurationPoint:
        n = len(cfg.finite_points)
        if n < 2 or pinned[0] == pinned[1] or not all(0 <= p < n for p in pinned):
            raise DomainError("need two distinct finite points to pin")
        coords: list[tuple] = []
        for k in range(n):
            if k not in pinned:
                coords += [("re", k), ("im", k)]
        marked: list[int | str] = [k for k, b in enumerate(cfg.orders) if b != 0]
        if cfg.order_at_infinity != 0:
            marked.append("inf")
        ref = marked[0] if marked else 0
        if vary_orders:
            coords += [("order", k) for k in marked[1:]]
        return cls(cfg, pinned, ref, tuple(coords))

    def moved(self, coord: tuple, t: float) -> FlatConfiguration:
        cfg = self.cfg
        pts, ords, binf = list(cfg.finite_points), list(cfg.orders), cfg.order_at_infinity
        kind, k = coord
        if kind == "re":
            pts[k] += t
        elif kind == "im":
            pts[k] += 1j * t
        elif kind == "order":
            for idx, sgn in ((k, 1.0), (self.order_ref, -1.0)):
                if idx == "inf":
                    binf += sgn * t
                else:
                    ords[idx] += sgn * t
        else:
            raise DomainError(f"unknown coordinate {coord!r}")
        if any(not -1 < b < 0 for b in ords + [binf] if b != 0):
            raise DomainError(f"perturbation along {coord} leaves the admissible orders")
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if abs(pts[i] - pts[j]) < ADMISSIBLE_SEPARATION:
                    raise DomainError(f"perturbation along {coord} collides points {i} and {j}")
        return FlatConfiguration(tuple(pts), tuple(ords), binf, cfg.target_area)


def _value(cfg: FlatConfiguration) -> float:
    return flat_log_det(cfg).log_det


def _map(fn, items, workers: int | None):
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, items, chunksize=4))
    return [fn(c) for c in items]


def fd_gradient(cp: ConfigurationPoint, step: float = 1e-3, workers: int | None = None) -> list[float]:
    """Central differences at steps h and h/2 combined by Richardson extrapolation."""
    if not MIN_STEP <= step <= MAX_STEP:
        raise DomainError(f"step must lie in [{MIN_STEP}, {MAX_STEP}], got {step}")
    cfgs = []
    for c in cp.coords:
        for t in (step, -step, step / 2, -step / 2):
            cfgs.append(cp.moved(c, t))
    vals = _map(_value, cfgs, workers)
    grad = []
    for i in range(len(cp.coords)):
        a, b, c, d = vals[4 * i: 4 * i + 4]
        D1 = (a - b) / (2 * step)
        D2 = (c - d) / step
        grad.append((4 * D2 - D1) / 3)
    return grad


def affine_gradient(cfg: FlatConfiguration, step: float = 1e-3) -> list[float]:
    """Derivatives of log det along translations, dilation and rotation of
    all finite points; zero for every configuration."""
    pts = cfg.finite_points

    def at(mp) -> float:
        return _value(FlatConfiguration(tuple(mp(z) for z in pts), cfg.orders, cfg.order_at_infinity, cfg.target_area))

    moves = [
        lambda t: (lambda z: z + t),
        lambda t: (lambda z: z + 1j * t),
        lambda t: (lambda z: z * math.exp(t)),
        lambda t: (lambda z: z * cmath.exp(1j * t)),
    ]
    return [(at(m(step)) - at(m(-step))) / (2 * step) for m in moves]


def _fiber_points(family: str, fiber: str) -> list[complex]:
    ram = catalog_ramification(family)
    return [p.location for p in ram.points if p.fiber == fiber]


def platonic_configuration(solid: str, ell: int | None = None, target_area: float = 4 * math.pi) -> FlatConfiguration:
    """Vertices from the catalog map fiber, every vertex of the flat order."""
    solid = solid.lower()
    where = {
        "tetrahedron": ("tetrahedral", "0"),
        "octahedron": ("octahedral", "0"),
        "cube": ("octahedral", "inf"),
        "icosahedron": ("icosahedral", "0"),
        "dodecahedron": ("icosahedral", "inf"),
    }
    if solid == "dihedron":
        if ell is None or not 3 <= ell:
            raise DomainError("dihedron needs l >= 3 (orders -2/l must exceed -1)")
        family, fiber = f"dihedral({ell})", "1"
    elif solid in where:
        family, fiber = where[solid]
    else:
        raise DomainError(f"unknown solid {solid!r}")
    beta = solid_flat_beta(solid, ell)
    pts = _fiber_points(family, fiber)
    finite = [z for z in pts if z != INF]
    binf = beta if len(finite) < len(pts) else 0.0
    return FlatConfiguration(tuple(finite), (beta,) * len(finite), binf, target_area)


@dataclass
class StationarityReport:
    solid: str
    passed: bool
    gradient_norm: float
    tolerance: float
    step: float
    gradient: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "solid": self.solid, "passed": self.passed, "gradient_norm": self.gradient_norm,
            "tolerance": self.tolerance, "step": self.step, "gradient": self.gradient,
        }


def _coord_name(c: tuple) -> str:
    return f"{c[0]}[{c[1]}]"


def check_platonic_stationarity(
    solid: str,
    ell: int | None = None,
    step: float = 1e-3,
    tol: float | None = None,
    workers: int | None = None,
    cfg: FlatConfiguration | None = None,
) -> StationarityReport:
    """FD gradient over moduli and order directions at the regular configuration
    (or at cfg, to measure a perturbed one)."""
    solid = solid.lower()
    if cfg is None:
        cfg = platonic_configuration(solid, ell)
    tol = tol if tol is not None else STATIONARITY_TOL.get(solid, DEFAULT_TOL)
    cp = ConfigurationPoint.gauge_fixed(cfg)
    grad = fd_gradient(cp, step, workers)
    norm = math.sqrt(math.fsum(g * g for g in grad))
    name = f"dihedron({ell})" if solid == "dihedron" else solid
    return StationarityReport(
        name, norm <= tol, norm, tol, step, {_coord_name(c): g for c, g in zip(cp.coords, grad)}
    )


def perturbed(cfg: FlatConfiguration, k: int, delta: complex) -> FlatConfiguration:
    pts = list(cfg.finite_points)
    pts[k] += delta
    return FlatConfiguration(tuple(pts), cfg.orders, cfg.order_at_infinity, cfg.target_area)


def with_order_shift(cfg: FlatConfiguration, k: int, new_order: float, compensate: int | str = "inf") -> FlatConfiguration:
    """Set beta_k and let one other point absorb the change."""
    ords = list(cfg.orders)
    diff = new_order - ords[k]
    ords[k] = new_order
    binf = cfg.order_at_infinity
    if compensate == "inf":
        binf -= diff
    else:
        ords[compensate] -= diff
    return FlatConfiguration(cfg.finite_points, tuple(ords), binf, cfg.target_area)
