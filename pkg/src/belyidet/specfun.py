"""Special functions behind the determinant formulas.

Hurwitz zeta values and s-derivatives by Euler--Maclaurin summation, the
Barnes-type function C(beta), the asymptotic coefficient Psi of the
three-point metric potential, zeta(0) of a divisor, and the two universal
constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache
from typing import Sequence

from .errors import DomainError

__all__ = [
    "BERNOULLI_EVEN",
    "Divisor",
    "SpecialConstants",
    "TriangleDivisor",
    "barnes_zeta_deriv0",
    "bigC",
    "calC",
    "constants",
    "hurwitz_zeta",
    "hurwitz_zeta_deriv",
    "lgamma_signed",
    "psi",
    "zeta0",
    "zetaR_prime_m1",
]

# B_2, B_4, ..., B_30
BERNOULLI_EVEN: tuple[Fraction, ...] = (
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
    Fraction(43867, 798),
    Fraction(-174611, 330),
    Fraction(854513, 138),
    Fraction(-236364091, 2730),
    Fraction(8553103, 6),
    Fraction(-23749461029, 870),
    Fraction(8615841276005, 14322),
)

EM_SHIFT = 30

# B_{2j}/(2j)! as floats, j = 1..15
_EM_WEIGHTS = tuple(
    float(b / math.factorial(2 * j)) for j, b in enumerate(BERNOULLI_EVEN, start=1)
)


def _check_a(a: float) -> None:
    if not a > 0:
        raise DomainError(f"Hurwitz parameter must be positive, got a={a!r}")


def _rising_and_deriv(s: float, n: int) -> tuple[float, float]:
    """(s)_n = s(s+1)...(s+n-1) and its derivative in s."""
    val, der = 1.0, 0.0
    for i in range(n):
        der = der * (s + i) + val
        val *= s + i
    return val, der


def hurwitz_zeta(s: float, a: float) -> float:
    """zeta_H(s, a) for real s != 1 by Euler--Maclaurin with shift 30."""
    _check_a(a)
    if s == 1:
        raise DomainError("zeta_H has a pole at s=1")
    x = a + EM_SHIFT
    total = math.fsum((a + k) ** (-s) for k in range(EM_SHIFT))
    total += x ** (1 - s) / (s - 1) + 0.5 * x ** (-s)
    tail = 0.0
    for j, w in enumerate(_EM_WEIGHTS, start=1):
        p, _ = _rising_and_deriv(s, 2 * j - 1)
        tail += w * p * x ** (-s - 2 * j + 1)
    return total + tail


def hurwitz_zeta_deriv(s: float, a: float) -> float:
    """d/ds zeta_H(s, a), intended for s in {0, -1}; absolute error ~1e-13."""
    _check_a(a)
    if s == 1:
        raise DomainError("zeta_H has a pole at s=1")
    x = a + EM_SHIFT
    lx = math.log(x)
    terms = [-math.log(a + k) * (a + k) ** (-s) for k in range(EM_SHIFT)]
    xs = x ** (1 - s)
    terms.append(-xs * lx / (s - 1) - xs / (s - 1) ** 2)
    terms.append(-0.5 * lx * x ** (-s))
    for j, w in enumerate(_EM_WEIGHTS, start=1):
        p, dp = _rising_and_deriv(s, 2 * j - 1)
        terms.append(w * (dp - lx * p) * x ** (-s - 2 * j + 1))
    return math.fsum(terms)


@cache
def zetaR_prime_m1() -> float:
    """zeta_R'(-1), computed once from the Hurwitz routine at a=1."""
    return hurwitz_zeta_deriv(-1, 1.0)


@cache
def bigC() -> float:
    """The constant 1/6 - (4/3)ln2 - 4 zeta_R'(-1) - ln(pi)."""
    return 1.0 / 6.0 - 4.0 / 3.0 * math.log(2.0) - 4.0 * zetaR_prime_m1() - math.log(math.pi)


@dataclass(frozen=True)
class SpecialConstants:
    zetaR_prime_m1: float
    bigC: float


def constants() -> SpecialConstants:
    return SpecialConstants(zetaR_prime_m1(), bigC())


def _digamma_large(b: float) -> float:
    """psi(b) by its asymptotic series; accurate to ~1e-16 for b >= 20."""
    inv2 = 1.0 / (b * b)
    acc, pw = 0.0, 1.0
    for k, bern in enumerate(BERNOULLI_EVEN[:8], start=1):
        pw *= inv2
        acc += float(bern) / (2 * k) * pw
    return math.log(b) - 0.5 / b - acc


def barnes_zeta_deriv0(a: float) -> float:
    """d/ds at s=0 of sum_{m,n>=0} (a*m + n + 1)^(-s), for a > 0.

    The rows with a*m < 30 are summed exactly through
    zeta_H'(0, x) = lnGamma(x) - ln(2 pi)/2.  The remaining rows are
    summed in m after inserting the asymptotic expansion of
    zeta_H(s, a*m + 1); every resulting m-series is a Hurwitz zeta in the
    shifted variable b = M + 1/a, continued to s = 0 term by term.
    """
    _check_a(a)
    M = max(1, math.ceil(EM_SHIFT / a))
    half_log_2pi = 0.5 * math.log(2 * math.pi)
    head = math.fsum(math.lgamma(a * m + 1.0) - half_log_2pi for m in range(M))
    b = M + 1.0 / a
    la = math.log(a)
    t1 = (a * la - a) * hurwitz_zeta(-1, b) - a * hurwitz_zeta_deriv(-1, b)
    t2 = 0.5 * (hurwitz_zeta_deriv(0, b) - la * hurwitz_zeta(0, b))
    t3 = -(la + _digamma_large(b)) / (12.0 * a)
    for j, w in enumerate(_EM_WEIGHTS[1:], start=2):
        t3 += w * math.factorial(2 * j - 2) * a ** (1 - 2 * j) * hurwitz_zeta(2 * j - 1, b)
    return math.fsum([head, t1, t2, t3])


def calC(beta: float) -> float:
    """C(beta) for beta > -1."""
    if not beta > -1:
        raise DomainError(f"C(beta) requires beta > -1, got {beta!r}")
    a = beta + 1.0
    return (
        2.0 * barnes_zeta_deriv0(a)
        - 2.0 * zetaR_prime_m1()
        - beta * beta * math.log(2.0) / (6.0 * a)
        - beta / 12.0
        + 0.5 * math.log(a)
    )


def lgamma_signed(x: float) -> tuple[float, int]:
    """(log|Gamma(x)|, sign Gamma(x)); raises at the poles."""
    if x <= 0 and x == math.floor(x):
        raise DomainError(f"Gamma has a pole at {x!r}")
    sign = 1
    if x < 0 and math.floor(x) % 2 == 1:
        sign = -1
    return math.lgamma(x), sign


def _log_gamma_ratio(num: Sequence[float], den: Sequence[float]) -> tuple[float, int]:
    val, sign = 0.0, 1
    for x in num:
        lv, sg = lgamma_signed(x)
        val += lv
        sign *= sg
    for x in den:
        lv, sg = lgamma_signed(x)
        val -= lv
        sign *= sg
    return val, sign


def psi(beta0: float, beta1: float, betaInf: float) -> float:
    """Asymptotic coefficient of the unit-area potential at the point of order beta0.

    Symmetric in the last two arguments.  The metric must exist: every
    order above -1 and beta_j - |beta|/2 > 0 for all three j.
    """
    betas = (beta0, beta1, betaInf)
    if any(not b > -1 for b in betas):
        raise DomainError(f"orders must exceed -1, got {betas}")
    deg = sum(betas)
    if any(not b - deg / 2 > 0 for b in betas):
        raise DomainError(
            f"metric does not exist / boundary case: beta_j - |beta|/2 <= 0 for {betas}"
        )
    if deg == 0:
        raise DomainError("Psi is undefined for the smooth divisor |beta| = 0")
    h = deg / 2
    first, s1 = _log_gamma_ratio([-beta0], [1 + beta0])
    second, s2 = _log_gamma_ratio(
        [2 + h, beta0 - h, 1 + h - beta1, 1 + h - betaInf],
        [-h, 1 + h - beta0, beta1 - h, betaInf - h],
    )
    if s1 < 0 or s2 < 0:
        raise DomainError(f"negative Gamma ratio in Psi at {betas}")
    return first + 0.5 * (second - math.log(math.pi))


@dataclass(frozen=True)
class TriangleDivisor:
    """Orders at 0, 1 and infinity of a three-point divisor."""

    beta0: float
    beta1: float
    betaInf: float

    def __post_init__(self) -> None:
        for b in self.orders:
            if not (math.isfinite(b) and b > -1):
                raise DomainError(f"triangle orders must be finite and > -1, got {self.orders}")

    @property
    def orders(self) -> tuple[float, float, float]:
        return (self.beta0, self.beta1, self.betaInf)

    @property
    def degree(self) -> float:
        return self.beta0 + self.beta1 + self.betaInf

    @property
    def exists(self) -> bool:
        h = self.degree / 2
        return all(b - h > 0 for b in self.orders)

    def order_at(self, fiber: str) -> float:
        return {"0": self.beta0, "1": self.beta1, "inf": self.betaInf}[fiber]


@dataclass(frozen=True)
class Divisor:
    """Marked points of the extended plane with conical orders.

    Finite points are listed in ``points``; the point at infinity is always
    present and carries ``inf_order`` (possibly 0).
    """

    points: tuple[complex, ...]
    orders: tuple[float, ...]
    inf_order: float = 0.0
    labels: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(complex(p) for p in self.points))
        object.__setattr__(self, "orders", tuple(float(b) for b in self.orders))
        if len(self.points) != len(self.orders):
            raise DomainError("points and orders differ in length")
        for b in self.all_orders:
            if not (math.isfinite(b) and b > -1):
                raise DomainError(f"conical orders must be finite and > -1, got {b!r}")

    @property
    def all_orders(self) -> tuple[float, ...]:
        return self.orders + (self.inf_order,)

    @property
    def degree(self) -> float:
        return math.fsum(self.all_orders)


def zeta0(divisor: Divisor | Sequence[float]) -> float:
    """Value at zero of the spectral zeta function for the given orders."""
    orders = divisor.all_orders if isinstance(divisor, Divisor) else tuple(divisor)
    if any(not b > -1 for b in orders):
        raise DomainError("orders must exceed -1")
    deg = math.fsum(orders)
    corr = math.fsum(b + 1 - 1 / (b + 1) for b in orders)
    return (deg + 2) / 6 - corr / 12 - 1
