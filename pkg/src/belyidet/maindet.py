"""Determinants of spheres glued from copies of a three-point base.

theorem_main evaluates the general pullback formula from the ramification
data of a Belyi map.  family_log_det and the Platonic formulas are separate
hand transcriptions of closed forms for specific maps; they share no code
with theorem_main so that agreement between the two is a real check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .basedet import BaseSurface, CurvedBaseUnavailable, Provider, default_provider
from .belyi import RamificationData, analyze, catalog, pullback_divisor
from .errors import DomainError, RouteDisagreement
from .flatdet import FlatConfiguration, LogDetResult, flat_log_det, rescale_log_det
from .specfun import Divisor, TriangleDivisor, bigC, calC

__all__ = [
    "FAMILIES",
    "GluedDeterminantReport",
    "PLATONIC_TOL",
    "SOLIDS",
    "catalog_ramification",
    "family_log_det",
    "flat_pullback_log_det",
    "liouville_action",
    "liouville_from_log_det",
    "platonic_divisor",
    "platonic_log_det",
    "pullback_flat_area",
    "pullback_potential_coeffs",
    "solid_flat_beta",
    "theorem_main",
]

FAMILIES = ("cyclic", "dihedral", "tetrahedral", "octahedral", "icosahedral")
SOLIDS = ("tetrahedron", "octahedron", "cube", "icosahedron", "dodecahedron", "dihedron")
PLATONIC_TOL = 1e-7
COEFF_TOL = 1e-8


@dataclass(frozen=True)
class GluedDeterminantReport:
    """log det of the pullback metric of area deg f, with its ingredients.

    The entries of ``terms`` add up to log_det - ln(deg f).
    """

    log_det: float
    area: float
    pullback: Divisor
    terms: dict
    route: str
    meta: dict = field(default_factory=dict, compare=False)

    def as_result(self) -> LogDetResult:
        return LogDetResult(self.log_det, self.area, self.pullback, self.route, dict(self.terms))


@lru_cache(maxsize=None)
def catalog_ramification(name: str) -> RamificationData:
    return analyze(catalog(name))


def _pullback_orders(ram: RamificationData, t: TriangleDivisor) -> list[tuple[int, float, float]]:
    """(m_k, base order, pullback order) per marked point, in ram.points order."""
    out = []
    for k, p in enumerate(ram.points):
        b = t.order_at(p.fiber)
        g = p.m * (b + 1) - 1
        if not g > -1:
            where = "infinity" if p.is_infinity else f"x = {p.location}"
            raise DomainError(f"pullback order {g} at point {k} ({where}) is a cusp")
        out.append((p.m, b, g))
    return out


def theorem_main(ram: RamificationData, base: BaseSurface) -> GluedDeterminantReport:
    t = base.triangle
    data = _pullback_orders(ram, t)
    deg = ram.degree
    phi_sum, logm_sum, c_sum = [], [], []
    for p, (m, b, g) in zip(ram.points, data):
        phi_sum.append((m - 1 / m) * base.phi(p.fiber) / (b + 1))
        logm_sum.append((g + 1 + 1 / (g + 1)) * math.log(m))
        c_sum.append(calC(g) - m * calC(b))
    terms = {
        "base": deg * base.log_det_unit,
        "phi": math.fsum(phi_sum) / 6.0,
        "log_m": -math.fsum(logm_sum) / 6.0,
        "calC": -math.fsum(c_sum),
        "bigC": -(deg - 1) * bigC(),
        "C_f": ram.C_f,
    }
    log_det = math.fsum(terms.values()) + math.log(deg)
    meta = {
        "beyond_theorem": any(b > 0 for b in t.orders),
        "base_kind": base.kind,
        "gauss_bonnet_gap": (math.fsum(g for _, _, g in data) + 2) - deg * (t.degree + 2),
    }
    return GluedDeterminantReport(log_det, float(deg), pullback_divisor(ram, t), terms, "theorem-main", meta)


def pullback_potential_coeffs(ram: RamificationData, base: BaseSurface) -> list[float]:
    """Constant terms of the pulled-back potential at every marked point."""
    out = []
    for p in ram.points:
        b = base.triangle.order_at(p.fiber)
        sign = -1.0 if p.is_pole else 1.0
        out.append(base.phi(p.fiber) + sign * (b + 1) * math.log(abs(p.c)) + math.log(p.m))
    return out


def pullback_flat_area(ram: RamificationData, base: BaseSurface) -> tuple[float, float]:
    """Area of prod |x - x_k|^(2 gamma_k) |dx|^2 when the base is flat.

    The pullback potential is ln c_g + sum gamma_l ln|x - x_l|, so every marked
    point yields an estimate of ln c_g; returns (deg f / c_g^2, spread of the
    ln c_g estimates).
    """
    if abs(base.triangle.degree + 2) > 1e-12:
        raise DomainError("pullback area from coefficients needs a flat base")
    div = pullback_divisor(ram, base.triangle)
    coeffs = pullback_potential_coeffs(ram, base)
    pts, ords = div.points, div.orders
    finite = [k for k, p in enumerate(ram.points) if not p.is_infinity]
    estimates = []
    for i, k in enumerate(finite):
        xk = pts[i]
        s = math.fsum(ords[j] * math.log(abs(xk - pts[j])) for j in range(len(pts)) if j != i)
        estimates.append(coeffs[k] - s)
    estimates.append(coeffs[ram.index_of_infinity()])
    log_c = math.fsum(estimates) / len(estimates)
    spread = max(estimates) - min(estimates)
    return ram.degree * math.exp(-2 * log_c), spread


def flat_pullback_log_det(ram: RamificationData, base: BaseSurface, route: str = "period") -> LogDetResult:
    """log det of the flat pullback at area deg f computed from the cones alone.

    route "period" integrates the area independently; route "coeff" takes it
    from the pulled-back potential coefficients.
    """
    div = pullback_divisor(ram, base.triangle)
    cfg = FlatConfiguration.from_divisor(div, float(ram.degree), drop_smooth=True)
    if route == "period":
        return flat_log_det(cfg)
    if route == "coeff":
        S, spread = pullback_flat_area(ram, base)
        if spread > COEFF_TOL:
            raise RouteDisagreement("ln c_g estimates over the marked points", 0.0, spread, COEFF_TOL)
        res = flat_log_det(cfg, raw_area=S)
        return LogDetResult(res.log_det, res.area, div, "flat/coefficient-area", res.extras)
    raise DomainError(f"unknown flat route {route!r}")


# ---------------------------------------------------------------------------
# closed forms for the five families, transcribed one by one

def _fam_cyclic(t: TriangleDivisor, base: BaseSurface, ell: int) -> float:
    b0, _, bi = t.orders
    p0, _, pi_ = base.phis
    C, BC, L = calC, bigC(), base.log_det_unit
    return (
        ell * (L + C(b0) + C(bi) - BC)
        + (ell - 1 / ell) * (p0 / (b0 + 1) + pi_ / (bi + 1)) / 6
        - (ell * (b0 + bi + 2) + 1 / (ell * (b0 + 1)) + 1 / (ell * (bi + 1))) * math.log(ell) / 6
        - C(ell * (b0 + 1) - 1) - C(ell * (bi + 1) - 1) + BC
    )


def _fam_dihedral(t: TriangleDivisor, base: BaseSurface, ell: int) -> float:
    b0, b1, bi = t.orders
    p0, p1, pi_ = base.phis
    C, BC, L = calC, bigC(), base.log_det_unit
    Cb = C(b0) + C(b1) + C(bi)
    C_f = 2 / 3 * (ell - 1 / ell) * math.log(2)
    return (
        2 * ell * (L + Cb - BC) + C_f
        + (ell - 1 / ell) * p0 / (b0 + 1) / 3
        + ell / 4 * (p1 / (b1 + 1) + pi_ / (bi + 1))
        - (ell * (b0 + 1) + 1 / (ell * (b0 + 1))) * math.log(ell) / 3
        - ell / 3 * (b1 + bi + 2 + 1 / (4 * b1 + 4) + 1 / (4 * bi + 4)) * math.log(2)
        - 2 * C(ell * (b0 + 1) - 1) - ell * (C(2 * b1 + 1) + C(2 * bi + 1)) + BC
    )


def _fam_tetrahedral(t: TriangleDivisor, base: BaseSurface) -> float:
    b0, b1, bi = t.orders
    p0, p1, pi_ = base.phis
    C, BC, L = calC, bigC(), base.log_det_unit
    Cb = C(b0) + C(b1) + C(bi)
    C_f = math.log(2) + 9 / 4 * math.log(3)
    return (
        12 * (L + Cb - BC) + C_f
        + 16 / 9 * p0 / (b0 + 1) + 3 / 2 * p1 / (b1 + 1) + 16 / 9 * pi_ / (bi + 1)
        - 2 / 3 * (3 * (b0 + bi + 2) + 1 / (3 * (bi + 1)) + 1 / (3 * (b0 + 1))) * math.log(3)
        - (2 * (b1 + 1) + 1 / (2 * (b1 + 1))) * math.log(2)
        - 4 * C(3 * b0 + 2) - 6 * C(2 * b1 + 1) - 4 * C(3 * bi + 2) + BC
    )


def _fam_octahedral(t: TriangleDivisor, base: BaseSurface) -> float:
    b0, b1, bi = t.orders
    p0, p1, pi_ = base.phis
    C, BC, L = calC, bigC(), base.log_det_unit
    Cb = C(b0) + C(b1) + C(bi)
    C_f = 9 / 4 * math.log(3) + 119 / 18 * math.log(2)
    return (
        24 * (L + Cb - BC) + C_f
        + 15 / 4 * p0 / (b0 + 1) + 3 * p1 / (b1 + 1) + 32 / 9 * pi_ / (bi + 1)
        - (4 * (2 * b0 + b1 + 3) + 1 / (2 * (b0 + 1)) + 1 / (b1 + 1)) * math.log(2)
        - 4 * (bi + 1 + 1 / (9 * (bi + 1))) * math.log(3)
        - 8 * C(3 * bi + 2) - 6 * C(4 * b0 + 3) - 12 * C(2 * b1 + 1) + BC
    )


def _fam_icosahedral(t: TriangleDivisor, base: BaseSurface) -> float:
    b0, b1, bi = t.orders
    p0, p1, pi_ = base.phis
    C, BC, L = calC, bigC(), base.log_det_unit
    Cb = C(b0) + C(b1) + C(bi)
    C_f = 139 / 15 * math.log(2) + 63 / 10 * math.log(3) + 125 / 36 * math.log(5)
    return (
        60 * (L + Cb - BC) + C_f
        + 48 / 5 * p0 / (b0 + 1) + 15 / 2 * p1 / (b1 + 1) + 80 / 9 * pi_ / (bi + 1)
        - 2 * (5 * b0 + 5 + 1 / (5 * b0 + 5)) * math.log(5)
        - 5 * (2 * b1 + 2 + 1 / (2 * b1 + 2)) * math.log(2)
        - 10 / 3 * (3 * bi + 3 + 1 / (3 * bi + 3)) * math.log(3)
        - 12 * C(5 * b0 + 4) - 30 * C(2 * b1 + 1) - 20 * C(3 * bi + 2) + BC
    )


def _family_map(family: str, ell: int | None) -> tuple[str, int]:
    family = family.lower()
    if family in ("cyclic", "dihedral"):
        if ell is None or ell < 1:
            raise DomainError(f"{family} family needs l >= 1")
        return f"{family}({ell})", (ell if family == "cyclic" else 2 * ell)
    degs = {"tetrahedral": 12, "octahedral": 24, "icosahedral": 60}
    if family not in degs:
        raise DomainError(f"unknown family {family!r}; expected one of {FAMILIES}")
    return family, degs[family]


def family_log_det(
    family: str,
    triangle: TriangleDivisor,
    base: BaseSurface,
    ell: int | None = None,
) -> GluedDeterminantReport:
    """Closed form of one of the five families at area deg f."""
    name, deg = _family_map(family, ell)
    if base.triangle != triangle:
        raise DomainError(f"base surface is for {base.triangle.orders}, not {triangle.orders}")
    fam = family.lower()
    if fam == "cyclic":
        val = _fam_cyclic(triangle, base, ell)
    elif fam == "dihedral":
        val = _fam_dihedral(triangle, base, ell)
    elif fam == "tetrahedral":
        val = _fam_tetrahedral(triangle, base)
    elif fam == "octahedral":
        val = _fam_octahedral(triangle, base)
    else:
        val = _fam_icosahedral(triangle, base)
    ram = catalog_ramification(name)
    div = pullback_divisor(ram, triangle)
    return GluedDeterminantReport(val + math.log(deg), float(deg), div, {"closed_form": val}, f"family/{fam}")


# ---------------------------------------------------------------------------
# Platonic surfaces of area 4 pi: printed specializations

def _triangle_for(solid: str, beta: float, ell: int | None = None) -> list[tuple[str, int | None, TriangleDivisor]]:
    """(family, l, base triangle) for every family that produces the solid."""
    T = TriangleDivisor
    if solid == "tetrahedron":
        return [("cyclic", 3, T((beta - 2) / 3, beta, -2 / 3)), ("tetrahedral", None, T(-2 / 3, -0.5, (beta - 2) / 3))]
    if solid == "octahedron":
        return [
            ("cyclic", 4, T((beta - 3) / 4, beta, (beta - 3) / 4)),
            ("dihedral", 2, T((beta - 1) / 2, (beta - 1) / 2, (beta - 1) / 2)),
            ("octahedral", None, T((beta - 3) / 4, -0.5, -2 / 3)),
        ]
    if solid == "cube":
        return [("octahedral", None, T(-0.75, -0.5, (beta - 2) / 3))]
    if solid == "icosahedron":
        return [("icosahedral", None, T((beta - 4) / 5, -0.5, -2 / 3))]
    if solid == "dodecahedron":
        return [("icosahedral", None, T(-0.8, -0.5, (beta - 2) / 3))]
    if solid == "dihedron":
        if ell is None or ell < 2:
            raise DomainError("dihedron needs l >= 2")
        return [("cyclic", ell, T(1 / ell - 1, beta, 1 / ell - 1))]
    raise DomainError(f"unknown solid {solid!r}; expected one of {SOLIDS}")


def _printed(solid: str, family: str, beta: float, base: BaseSurface, ell: int | None) -> tuple[float, float]:
    """(log det, area) from the printed specialization for this solid/family."""
    C, BC, L = calC, bigC(), base.log_det_unit
    p0, p1, pi_ = base.phis
    a = beta + 1
    w = a + 1 / a
    lpi, l2, l3, l5 = math.log(math.pi), math.log(2), math.log(3), math.log(5)
    Cb = sum(C(b) for b in base.triangle.orders)
    if solid == "tetrahedron" and family == "cyclic":
        val = (
            3 * (L + C((beta - 2) / 3) + C(-2 / 3))
            + 4 / 3 * (p0 / a + pi_)
            - (beta - 3 + 1 / a) * (math.log(4 * math.pi) - 0.5 * l3) / 3
            - C(beta) - 2 * BC
        )
        return val, 4 * math.pi
    if solid == "tetrahedron" and family == "tetrahedral":
        val = (
            12 * (L + Cb) + l2 + 7 / 12 * l3 + 4 / 3 * lpi
            + 16 / 3 * p0 + 3 * p1 + 16 / (3 * a) * pi_
            - w * math.log(3 * math.pi) / 3 - 4 * C(beta) - 11 * BC
        )
        return val, 4 * math.pi
    if solid == "octahedron" and family == "cyclic":
        val = (
            4 * L - w * (2 / 3 * l2 + 0.5 * lpi) + 5 / 3 * lpi + 5 / a * p0
            + 2 * l2 + 8 * C((beta - 3) / 4) - 2 * C(beta) - 3 * BC
        )
        return val, 4 * math.pi
    if solid == "octahedron" and family == "dihedral":
        val = (
            4 * L - w * (l2 + 0.5 * lpi) + 5 / 3 * lpi + 3 / a * p0
            + 3 * l2 + 12 * C((beta - 1) / 2) - 6 * C(beta) - 3 * BC
        )
        return val, 4 * math.pi
    if solid == "octahedron" and family == "octahedral":
        val = (
            24 * (L + Cb) - 13 / 12 * l3 + 71 / 18 * l2
            + 15 / a * p0 + 6 * p1 + 32 / 3 * pi_
            - 0.5 * w * math.log(8 * math.pi / 3) - 6 * C(beta) - 23 * BC + 5 / 3 * lpi
        )
        return val, 4 * math.pi
    if solid == "cube":
        val = (
            24 * (L + Cb) + 5 / 4 * l3 - 7 / 18 * l2 + 2 * lpi
            + 15 * p0 + 6 * p1 + 32 / (3 * a) * pi_
            - 2 / 3 * w * math.log(3 * math.pi / 2) - 8 * C(beta) - 23 * BC
        )
        return val, 4 * math.pi
    if solid == "icosahedron":
        val = (
            60 * (L + Cb) + 19 / 15 * l2 - 61 / 30 * l3 + 65 / 36 * l5
            + 48 / a * p0 + 15 * p1 + 80 / 3 * pi_
            - w * math.log(5 * math.pi / 3) - 12 * C(beta) - 59 * BC + 8 / 3 * lpi
        )
        return val, 4 * math.pi
    if solid == "dodecahedron":
        val = (
            60 * (L + Cb) + 19 / 15 * l2 + 33 / 10 * l3 - 127 / 36 * l5
            + 48 * p0 + 15 * p1 + 80 / (3 * a) * pi_
            - 5 / 3 * w * math.log(3 * math.pi / 5) - 20 * C(beta) - 59 * BC + 4 * lpi
        )
        return val, 4 * math.pi
    if solid == "dihedron":
        val = ell * L + 2 * ell * C(1 / ell - 1) + (ell**2 - 1) / 3 * p0 + math.log(ell) / 3 + (1 - ell) * BC
        return val, float(ell)
    raise DomainError(f"no printed formula for {solid} via {family}")


def _family_name(family: str, ell: int | None) -> str:
    return f"{family}({ell})" if ell is not None else family


def platonic_divisor(solid: str, beta: float, ell: int | None = None) -> Divisor:
    family, l_, t = _triangle_for(solid, beta, ell)[0]
    return pullback_divisor(catalog_ramification(_family_name(family, l_)), t)


def solid_flat_beta(solid: str, ell: int | None = None) -> float:
    """Cone order making the solid's surface flat."""
    table = {"tetrahedron": -1 / 2, "octahedron": -1 / 3, "cube": -1 / 4, "icosahedron": -1 / 6, "dodecahedron": -1 / 10}
    if solid == "dihedron":
        if ell is None or ell < 2:
            raise DomainError("dihedron needs l >= 2")
        return -2 / ell
    if solid not in table:
        raise DomainError(f"unknown solid {solid!r}")
    return table[solid]


def platonic_log_det(
    solid: str,
    beta: float,
    provider: Provider | None = None,
    ell: int | None = None,
    tol: float = PLATONIC_TOL,
    with_flat: bool = True,
) -> LogDetResult:
    """log det at area 4 pi of the regular solid with cones of order beta.

    Every family that realizes the solid and whose base the provider can
    serve contributes a printed-formula value, a family-theorem value and a
    theorem-main value; at the flat order the cone formula joins in.  All
    available values must agree within tol.
    """
    provider = provider or default_provider()
    solid = solid.lower()
    target = 4 * math.pi
    routes: dict[str, float] = {}
    unavailable: list[str] = []
    div = None
    for family, l_, t in _triangle_for(solid, beta, ell):
        tag = _family_name(family, l_)
        try:
            base = provider(t)
        except CurvedBaseUnavailable as exc:
            unavailable.append(f"{tag}: {exc}")
            continue
        ram = catalog_ramification(tag)
        val, area = _printed(solid, family, beta, base, l_)
        rep = theorem_main(ram, base)
        if div is None:
            div = rep.pullback
        routes[f"printed/{tag}"] = rescale_log_det(LogDetResult(val, area, rep.pullback, ""), target).log_det
        fam = family_log_det(family, t, base, l_)
        routes[f"family/{tag}"] = rescale_log_det(fam.as_result(), target).log_det
        routes[f"theorem-main/{tag}"] = rescale_log_det(rep.as_result(), target).log_det
        if with_flat and base.kind == "flat3" and not any(k.startswith("flat/") for k in routes):
            flat = flat_pullback_log_det(ram, base, "period")
            routes["flat/cones"] = rescale_log_det(flat, target).log_det
    if not routes:
        raise CurvedBaseUnavailable(
            f"{solid} at beta={beta}: curved base requires external table ({'; '.join(unavailable)})"
        )
    vals = list(routes.values())
    primary_key = next(iter(routes))
    primary = routes[primary_key]
    worst = max(abs(v - primary) for v in vals)
    if worst > tol:
        bad = max(routes, key=lambda k: abs(routes[k] - primary))
        raise RouteDisagreement(f"{solid} at beta={beta}: {primary_key} vs {bad}", primary, routes[bad], tol)
    return LogDetResult(
        primary, target, div, primary_key,
        {"routes": routes, "max_deviation": worst, "unavailable": unavailable},
    )


# ---------------------------------------------------------------------------
# Liouville action

def liouville_from_log_det(orders, phis, log_det: float, area: float) -> float:
    """Solve the anomaly formula for the Liouville action.

    orders and phis run over all marked points (infinity included);
    log_det is log det at the given area.
    """
    orders, phis = list(orders), list(phis)
    deg = math.fsum(orders)
    log_H = 2 * math.fsum((g + 1 - 1 / (g + 1)) * p for g, p in zip(orders, phis))
    rest = (deg + 2) / 6 - math.fsum(calC(g) for g in orders) + bigC() - (log_det - math.log(area))
    return 12 * math.pi * rest + math.pi * log_H


def liouville_action(ram: RamificationData, base: BaseSurface, glued_log_det: float) -> float:
    """Liouville action of the pulled-back potential (area deg f)."""
    data = _pullback_orders(ram, base.triangle)
    coeffs = pullback_potential_coeffs(ram, base)
    return liouville_from_log_det([g for _, _, g in data], coeffs, glued_log_det, float(ram.degree))
