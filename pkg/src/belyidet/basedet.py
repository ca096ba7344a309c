"""Unit-area three-point base surfaces: flat, spindle, or user supplied."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .errors import DomainError, RouteDisagreement
from .flatdet import FlatConfiguration, LogDetResult, flat_log_det, rescale_log_det
from .specfun import Divisor, TriangleDivisor, bigC, calC, psi, zeta0

__all__ = [
    "BaseSurface",
    "BaseTable",
    "CurvedBaseUnavailable",
    "FLAT3_TOL",
    "default_provider",
    "load_base_table",
    "make_external",
    "make_flat3",
    "make_spindle",
    "triangle_divisor",
]

FLAT3_TOL = 1e-9
FLAT_TOL = 1e-12
MATCH_TOL = 1e-9

TABLE_HEADER = ("beta0", "beta1", "betainf", "phi0", "phi1", "phiinf", "logdet_unit")


class CurvedBaseUnavailable(DomainError):
    """No provider can produce the requested (curved) base surface."""


@dataclass(frozen=True)
class BaseSurface:
    """Unit-area metric on the sphere with cones at 0, 1, infinity.

    phi0, phi1, phiInf are the constant terms of the potential at the three
    cones; log_det_unit is log det of the Laplacian at area 1.
    """

    triangle: TriangleDivisor
    phi0: float
    phi1: float
    phiInf: float
    log_det_unit: float
    kind: str
    meta: dict = field(default_factory=dict, compare=False)

    def phi(self, fiber: str) -> float:
        return {"0": self.phi0, "1": self.phi1, "inf": self.phiInf}[fiber]

    @property
    def phis(self) -> tuple[float, float, float]:
        return (self.phi0, self.phi1, self.phiInf)


def triangle_divisor(t: TriangleDivisor) -> Divisor:
    return Divisor((0j, 1 + 0j), (t.beta0, t.beta1), t.betaInf, ("0", "1"))


def _psi_phis(t: TriangleDivisor) -> tuple[float, float, float]:
    b0, b1, bi = t.orders
    return psi(b0, b1, bi), psi(b1, b0, bi), psi(bi, b1, b0)


def _flat3_formula(t: TriangleDivisor, phis: Sequence[float]) -> float:
    b0, b1, bi = t.orders
    p0, p1, pi_ = phis
    return (
        (b0 * p0 / (b0 + 1) + b1 * p1 / (b1 + 1)) / 6.0
        - (bi + 2) * pi_ / (bi + 1) / 6.0
        - (calC(b0) + calC(b1) + calC(bi))
        + bigC()
    )


def make_flat3(triangle: TriangleDivisor, tol: float = FLAT3_TOL) -> BaseSurface:
    """Flat base: potential coefficients from Psi, determinant from the
    three-point anomaly formula, confirmed against the flat-cone route."""
    if abs(triangle.degree + 2) > FLAT_TOL:
        raise DomainError(f"orders {triangle.orders} do not sum to -2; the base is not flat")
    if not all(-1 < b < 0 for b in triangle.orders):
        raise DomainError(f"flat base orders must lie in (-1, 0), got {triangle.orders}")
    phis = _psi_phis(triangle)
    spread = max(phis) - min(phis)
    if spread > tol:
        raise RouteDisagreement("Psi permutations of a flat base", min(phis), max(phis), tol)
    value = _flat3_formula(triangle, phis)
    cfg = FlatConfiguration((0j, 1 + 0j), triangle.orders[:2], triangle.betaInf, 1.0)
    direct = flat_log_det(cfg)
    if abs(direct.log_det - value) > tol:
        raise RouteDisagreement("flat base: anomaly formula vs flat cones", value, direct.log_det, tol)
    return BaseSurface(
        triangle, *phis, value, "flat3",
        {"flat_route": direct.log_det, "route_gap": direct.log_det - value, "area_raw": direct.extras["raw_area"]},
    )


def make_spindle(beta: float) -> BaseSurface:
    """Spindle with cones of order beta at 0 and infinity, normalized to area 1.

    The triangle (beta, 0, beta) sits on the boundary of the existence region
    for three-point metrics; this is recorded in meta["boundary"].
    """
    if not beta > -1:
        raise DomainError(f"spindle order must exceed -1, got {beta!r}")
    t = TriangleDivisor(beta, 0.0, beta)
    a = beta + 1.0
    S = 4 * math.pi * a
    raw_phis = (math.log(2 * a), math.log(a), math.log(2 * a))
    log_det_over_S = a / 3 - (a + 1 / a) * math.log(2 * a) / 3 - 2 * calC(beta) + bigC()
    raw = LogDetResult(log_det_over_S + math.log(S), S, triangle_divisor(t), "spindle")
    unit = rescale_log_det(raw, 1.0)
    shift = 0.5 * math.log(S)
    return BaseSurface(
        t, *(p - shift for p in raw_phis), unit.log_det, "spindle",
        {"boundary": True, "raw_area": S, "raw_log_det": raw.log_det, "beyond_theorem": beta > 0},
    )


def make_external(
    triangle: TriangleDivisor,
    phi: Sequence[float | None] | None,
    log_det_unit: float,
) -> BaseSurface:
    """Wrap user data; missing potential coefficients default to Psi."""
    if not math.isfinite(log_det_unit):
        raise DomainError("external log det must be finite")
    phi = list(phi) if phi is not None else [None, None, None]
    if len(phi) != 3:
        raise DomainError("need three potential coefficients (phi0, phi1, phiinf)")
    if any(p is None for p in phi):
        defaults = _psi_phis(triangle)
        phi = [d if p is None else p for p, d in zip(phi, defaults)]
    if not all(math.isfinite(p) for p in phi):
        raise DomainError(f"non-finite potential coefficients {phi}")
    return BaseSurface(triangle, *map(float, phi), float(log_det_unit), "external")


def _opt_float(s: str) -> float | None:
    s = s.strip()
    return None if s == "" else float(s)


@dataclass
class BaseTable:
    """Rows of externally supplied base data keyed by their triangle."""

    rows: list[BaseSurface]

    def lookup(self, t: TriangleDivisor, tol: float = MATCH_TOL) -> BaseSurface | None:
        for row in self.rows:
            if all(abs(a - b) <= tol for a, b in zip(row.triangle.orders, t.orders)):
                return row
        return None


def load_base_table(path: str | Path | Iterable[str]) -> BaseTable:
    """Read a CSV with header beta0,beta1,betainf,phi0,phi1,phiinf,logdet_unit."""
    if isinstance(path, (str, Path)):
        with open(path, newline="") as fh:
            return load_base_table(fh.read().splitlines())
    reader = csv.DictReader(path)
    if reader.fieldnames is None or tuple(h.strip() for h in reader.fieldnames) != TABLE_HEADER:
        raise DomainError(f"base table header must be {','.join(TABLE_HEADER)}")
    rows = []
    for lineno, rec in enumerate(reader, start=2):
        try:
            rec = {k.strip(): v for k, v in rec.items()}
            t = TriangleDivisor(float(rec["beta0"]), float(rec["beta1"]), float(rec["betainf"]))
            phi = [_opt_float(rec[k]) for k in ("phi0", "phi1", "phiinf")]
            rows.append(make_external(t, phi, float(rec["logdet_unit"])))
        except (ValueError, TypeError, DomainError) as exc:
            raise DomainError(f"base table line {lineno}: {exc}") from exc
    return BaseTable(rows)


Provider = Callable[[TriangleDivisor], BaseSurface]


def default_provider(table: BaseTable | None = None) -> Provider:
    """Flat and spindle bases are built in; anything else comes from the table."""

    def provide(t: TriangleDivisor) -> BaseSurface:
        if table is not None:
            row = table.lookup(t)
            if row is not None:
                return row
        if abs(t.degree + 2) <= FLAT_TOL and all(b < 0 for b in t.orders):
            return make_flat3(t)
        if t.beta1 == 0 and abs(t.beta0 - t.betaInf) <= FLAT_TOL:
            return make_spindle(t.beta0)
        raise CurvedBaseUnavailable(
            f"curved base {t.orders} requires external table data (no closed form available)"
        )

    return provide
