"""Belyi maps: fibers over 0, 1, infinity, local coefficients, A_f and C_f."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DomainError, RouteDisagreement
from .polyexact import Poly, gcd, squarefree_decomposition, squarefree_roots, taylor_coeffs_at
from .specfun import Divisor, TriangleDivisor

__all__ = [
    "FIBERS",
    "RamificationData",
    "RamifiedPoint",
    "RationalMap",
    "analyze",
    "catalog",
    "catalog_names",
    "mobius_precompose",
    "pullback_divisor",
]

FIBERS = ("0", "1", "inf")
INF = complex(math.inf, 0.0)

CF_TOL = 1e-8
AF_TOL = 1e-8
PROBE_SEED = 20240617


class NotBelyiError(DomainError):
    pass


@dataclass(frozen=True)
class RationalMap:
    """f = P/Q with exact rational coefficients."""

    P: Poly
    Q: Poly
    name: str = ""
    # maps built by inverted() only serve local expansions at y = 0, where
    # the value at infinity does not matter
    check_infinity: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.P.is_zero() or self.Q.is_zero():
            raise DomainError("numerator and denominator must be nonzero")
        if gcd(self.P, self.Q).degree > 0:
            raise DomainError("P and Q are not coprime")
        if self.degree < 1:
            raise DomainError("constant map")
        if self.check_infinity and self.P.degree == self.Q.degree and self.P.lc != self.Q.lc:
            raise DomainError(
                "f(infinity) is not in {0, 1, infinity}; precompose with a Moebius map "
                "sending infinity to a point of the three fibers"
            )

    @property
    def degree(self) -> int:
        return max(self.P.degree, self.Q.degree)

    @cached_property
    def D(self) -> Poly:
        """Numerator of f - 1."""
        return self.P - self.Q

    @cached_property
    def N(self) -> Poly:
        """Numerator of f' = N / Q^2."""
        return self.P.derivative() * self.Q - self.P * self.Q.derivative()

    @property
    def fiber_at_infinity(self) -> str:
        if self.P.degree > self.Q.degree:
            return "inf"
        if self.P.degree < self.Q.degree:
            return "0"
        return "1"

    def inverted(self) -> RationalMap:
        """f(1/y) written over a common power of y."""
        n = self.degree
        return RationalMap(self.P.reversed(n), self.Q.reversed(n), self.name, check_infinity=False)

    def __call__(self, x):
        return self.P(x) / self.Q(x)

    def derivatives(self, x) -> tuple:
        """f, f', f'', f''' at float points (plain quotient rule on float Horner)."""
        P, Q = self.P, self.Q
        Ps = [P, P.derivative()]
        Ps += [Ps[-1].derivative(), Ps[-1].derivative().derivative()]
        Qs = [Q, Q.derivative()]
        Qs += [Qs[-1].derivative(), Qs[-1].derivative().derivative()]
        p = [g(x) for g in Ps]
        q = [g(x) for g in Qs]
        f0 = p[0] / q[0]
        f1 = (p[1] - f0 * q[1]) / q[0]
        f2 = (p[2] - 2 * f1 * q[1] - f0 * q[2]) / q[0]
        f3 = (p[3] - 3 * f2 * q[1] - 3 * f1 * q[2] - f0 * q[3]) / q[0]
        return f0, f1, f2, f3


@dataclass(frozen=True)
class RamifiedPoint:
    location: complex
    fiber: str
    ord: int
    c: complex
    d: complex
    is_infinity: bool = False

    @property
    def m(self) -> int:
        return self.ord + 1

    @property
    def is_pole(self) -> bool:
        return self.fiber == "inf"


@dataclass(frozen=True)
class RamificationData:
    f: RationalMap
    points: tuple[RamifiedPoint, ...]
    degree: int
    A_f: float
    C_f: float
    C_f_local: float
    C_f_pairwise: float
    A_f_remark: float
    A_f_spread: float

    @property
    def finite_points(self) -> tuple[RamifiedPoint, ...]:
        return tuple(p for p in self.points if not p.is_infinity)

    @property
    def infinity(self) -> RamifiedPoint:
        return next(p for p in self.points if p.is_infinity)

    def index_of_infinity(self) -> int:
        return next(i for i, p in enumerate(self.points) if p.is_infinity)


def _laurent_leading(num: Poly, den: Poly, x0: complex, a: int, g: int) -> tuple[complex, complex]:
    """Leading and next coefficient of num/den at x0, where num and den
    vanish there to orders a and g."""
    n = taylor_coeffs_at(num, x0, a + 2)
    e = taylor_coeffs_at(den, x0, g + 2)
    c = n[a] / e[g]
    d = (n[a + 1] - c * e[g + 1]) / e[g]
    return c, d


def _check_belyi(f: RationalMap) -> None:
    N = f.N
    if N.is_zero():
        raise NotBelyiError("f' vanishes identically")
    rad = Poly([1])
    for fac, _ in squarefree_decomposition(N):
        rad = rad * fac
    target = f.P * f.D * f.Q
    if not (target % rad).is_zero():
        raise NotBelyiError("not a Belyi map: some critical value lies outside {0, 1, infinity}")


def _sorted_roots(roots) -> list[tuple[complex, int]]:
    return sorted(roots, key=lambda t: (round(t[0].real, 9), round(t[0].imag, 9)))


def _fiber_points(f: RationalMap) -> list[RamifiedPoint]:
    pts: list[RamifiedPoint] = []
    defining = {"0": (f.P, f.Q), "1": (f.D, f.Q), "inf": (f.P, f.Q)}
    for fiber, poly in (("0", f.P), ("1", f.D), ("inf", f.Q)):
        if poly.degree < 1:
            continue
        num, den = defining[fiber]
        for z, mult in _sorted_roots(squarefree_roots(poly)):
            if fiber == "inf":
                c, d = _laurent_leading(num, den, z, 0, mult)
            else:
                c, d = _laurent_leading(num, den, z, mult, 0)
            pts.append(RamifiedPoint(z, fiber, mult - 1, c, d))
    # the point at infinity, via y = 1/x
    g = f.inverted()
    fib = f.fiber_at_infinity
    if fib == "inf":
        m = f.P.degree - f.Q.degree
        c, d = _laurent_leading(g.P, g.Q, 0j, 0, m)
    else:
        num = g.P if fib == "0" else g.D
        m = f.Q.degree - (f.P.degree if fib == "0" else f.D.degree)
        c, d = _laurent_leading(num, g.Q, 0j, m, 0)
    pts.append(RamifiedPoint(INF, fib, m - 1, c, d, is_infinity=True))
    return pts


def _probe_points(points: Sequence[RamifiedPoint], count: int = 5) -> list[complex]:
    finite = [p.location for p in points if not p.is_infinity]
    R = 1.0 + max((abs(z) for z in finite), default=0.0)
    sep = min(
        (abs(a - b) for i, a in enumerate(finite) for b in finite[i + 1:]),
        default=1.0,
    )
    rng = np.random.default_rng(PROBE_SEED)
    out: list[complex] = []
    while len(out) < count:
        z = complex(*rng.uniform(-R, R, size=2))
        if all(abs(z - w) > 0.2 * sep for w in finite):
            out.append(z)
    return out


def _exact_abs(p: Poly, x: complex) -> float:
    # exact evaluation rounded once: float Horner loses digits to cancellation
    # in f' near clustered ramification points
    return abs(taylor_coeffs_at(p, x, 1)[0])


def _log_A_at(f: RationalMap, points: Sequence[RamifiedPoint], x: complex) -> float:
    lq = math.log(_exact_abs(f.Q, x))
    val = (
        -2.0 / 3.0 * (math.log(_exact_abs(f.P, x)) - lq)
        - 2.0 / 3.0 * (math.log(_exact_abs(f.D, x)) - lq)
        + math.log(_exact_abs(f.N, x)) - 2 * lq
    )
    for p in points:
        if not p.is_infinity:
            val -= (p.ord - 2) / 3.0 * math.log(abs(x - p.location))
    return val


def _C_f_local(points: Sequence[RamifiedPoint]) -> float:
    terms = []
    for p in points:
        o, m, lc = p.ord, p.m, math.log(abs(p.c))
        lm = math.log(m)
        if not p.is_infinity and not p.is_pole:
            terms.append(o / m * lc + (o + 2) * lm)
        elif not p.is_infinity:
            terms.append((o + 2) / m * lc - o * lm)
        elif p.is_pole:
            terms.append(-o / m * lc - (o + 2) * lm)
        else:
            terms.append(-(o + 2) / m * lc + o * lm)
    return math.fsum(terms) / 6.0


def _C_f_pairwise(points: Sequence[RamifiedPoint], degree: int, A_f: float) -> float:
    finite = [p for p in points if not p.is_infinity]
    terms = []
    for p in finite:
        for q in finite:
            if p is q:
                continue
            w = (p.ord - 2) * (q.ord - 2) / (p.ord + 1)
            if w:
                terms.append(w * math.log(abs(p.location - q.location)) / 18.0)
    for p in points:
        terms.append((p.m / 3 + 3 / p.m) * math.log(p.m) / 6.0)
    terms.append((degree - sum(3 / p.m for p in points)) * math.log(A_f) / 6.0)
    return math.fsum(terms)


def analyze(f: RationalMap) -> RamificationData:
    _check_belyi(f)
    pts = _fiber_points(f)
    deg = f.degree
    if sum(p.ord for p in pts) != 2 * deg - 2:
        raise NotBelyiError("Riemann-Hurwitz count failed")
    for fib in FIBERS:
        if sum(p.m for p in pts if p.fiber == fib) != deg:
            raise NotBelyiError(f"fiber over {fib} does not have {deg} preimages")

    logs = [_log_A_at(f, pts, z) for z in _probe_points(pts)]
    A_vals = np.exp(logs)
    A_f = float(np.mean(A_vals))
    spread = float(np.max(A_vals) - np.min(A_vals))
    if spread > AF_TOL * A_f:
        raise RouteDisagreement("A_f probe invariance", float(A_vals.min()), float(A_vals.max()), AF_TOL * A_f)
    inf_pt = pts[-1]
    A_rem = inf_pt.m * abs(inf_pt.c) ** (-1 / 3 if inf_pt.is_pole else 1 / 3)
    if abs(A_rem - A_f) > AF_TOL * A_f:
        raise RouteDisagreement("A_f probes vs expansion at infinity", A_f, A_rem, AF_TOL * A_f)

    c_loc = _C_f_local(pts)
    c_pair = _C_f_pairwise(pts, deg, A_f)
    if abs(c_loc - c_pair) > CF_TOL:
        raise RouteDisagreement("C_f local coefficients vs pairwise distances", c_loc, c_pair, CF_TOL)
    return RamificationData(
        f=f,
        points=tuple(pts),
        degree=deg,
        A_f=A_f,
        C_f=c_loc,
        C_f_local=c_loc,
        C_f_pairwise=c_pair,
        A_f_remark=A_rem,
        A_f_spread=spread,
    )


def mobius_precompose(f: RationalMap, mu: Sequence) -> RationalMap:
    """f o mu for mu(x) = (a x + b)/(c x + d) with exact rational a, b, c, d."""
    a, b, c, d = (Fraction(v) if not isinstance(v, str) else Fraction(v) for v in mu)
    if a * d - b * c == 0:
        raise DomainError("degenerate Moebius map (ad - bc = 0)")
    n = f.degree
    num, den = Poly([b, a]), Poly([d, c])
    num_pows = [Poly([1])]
    den_pows = [Poly([1])]
    for _ in range(n):
        num_pows.append(num_pows[-1] * num)
        den_pows.append(den_pows[-1] * den)

    def homog(p: Poly) -> Poly:
        out = Poly()
        for i, coef in enumerate(p.coeffs):
            if coef:
                out = out + num_pows[i] * den_pows[n - i] * coef
        return out

    P, Q = homog(f.P), homog(f.Q)
    g = gcd(P, Q)
    if g.degree > 0:
        P, Q = P.exact_div(g), Q.exact_div(g)
    return RationalMap(P, Q, f.name + "*mu" if f.name else "")


def pullback_divisor(ram: RamificationData, base: TriangleDivisor) -> Divisor:
    """Points x_k with orders (ord_k + 1)(beta_{f(x_k)} + 1) - 1."""
    pts, orders, labels = [], [], []
    inf_order = 0.0
    for p in ram.points:
        b = (p.ord + 1) * (base.order_at(p.fiber) + 1) - 1
        if p.is_infinity:
            inf_order = b
        else:
            pts.append(p.location)
            orders.append(b)
            labels.append(p.fiber)
    return Divisor(tuple(pts), tuple(orders), inf_order, tuple(labels))


def _x() -> Poly:
    return Poly.x()


def catalog(name: str, ell: int | None = None) -> RationalMap:
    """Classical Belyi maps: cyclic(l), dihedral(l), tetrahedral, octahedral, icosahedral."""
    key = name.strip().lower()
    if "(" in key:
        key, arg = key.rstrip(")").split("(")
        ell = int(arg)
    x = _x()
    if key in ("cyclic", "dihedral"):
        if ell is None or ell < 1:
            raise DomainError(f"{key} map needs an integer l >= 1")
        if key == "cyclic":
            return RationalMap(x**ell, Poly([1]), f"cyclic({ell})")
        return RationalMap(4 * x**ell, (1 + x**ell) ** 2, f"dihedral({ell})")
    if key == "tetrahedral":
        return RationalMap(-64 * (x**3 + 1) ** 3, (x**3 - 8) ** 3 * x**3, "tetrahedral")
    if key == "octahedral":
        return RationalMap(-108 * (x**4 + 1) ** 4 * x**4, (x**8 - 14 * x**4 + 1) ** 3, "octahedral")
    if key == "icosahedral":
        return RationalMap(
            1728 * x**5 * (x**10 - 11 * x**5 - 1) ** 5,
            (x**20 + 228 * (x**15 - x**5) + 494 * x**10 + 1) ** 3,
            "icosahedral",
        )
    raise DomainError(f"unknown catalog map {name!r}")


def catalog_names() -> tuple[str, ...]:
    return ("cyclic(l)", "dihedral(l)", "tetrahedral", "octahedral", "icosahedral")


def map_from_json(obj: dict) -> RationalMap:
    """Build a map from {"name", "numerator", "denominator", "catalog"?}."""
    if obj.get("catalog"):
        return catalog(obj["catalog"])
    try:
        P = Poly(Fraction(s) for s in obj["numerator"])
        Q = Poly(Fraction(s) for s in obj["denominator"])
    except (KeyError, ValueError, TypeError) as exc:
        raise DomainError(f"malformed map description: {exc}") from exc
    return RationalMap(P, Q, str(obj.get("name", "")))
