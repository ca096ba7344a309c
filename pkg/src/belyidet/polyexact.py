"""Exact polynomials over Q and root extraction with exact multiplicities."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Iterable, Sequence

__all__ = [
    "Poly",
    "RootFindingError",
    "RootSet",
    "aberth",
    "squarefree_decomposition",
    "squarefree_roots",
    "taylor_coeffs_at",
]


class RootFindingError(RuntimeError):
    pass


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c.strip())
    if isinstance(c, float):
        return Fraction(c)
    raise TypeError(f"cannot make an exact rational from {c!r}")


class Poly:
    """Univariate polynomial with exact rational coefficients (ascending)."""

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    # construction
    @classmethod
    def x(cls) -> Poly:
        return cls([0, 1])

    @classmethod
    def const(cls, c) -> Poly:
        return cls([c])

    @classmethod
    def from_roots_power(cls, root, mult: int) -> Poly:
        return cls([-_frac(root), 1]) ** mult

    # basic properties
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def monic(self) -> Poly:
        if self.is_zero():
            raise ZeroDivisionError("zero polynomial has no monic form")
        lc = self.lc
        return Poly(c / lc for c in self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            other = Poly([other])
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    # arithmetic
    def _coerce(self, other) -> Poly:
        return other if isinstance(other, Poly) else Poly([other])

    def __add__(self, other) -> Poly:
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other) -> Poly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Poly:
        return self._coerce(other) - self

    def __mul__(self, other) -> Poly:
        o = self._coerce(other)
        if self.is_zero() or o.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Poly:
        if n < 0:
            raise ValueError("negative power")
        result, base = Poly([1]), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lc = other.lc
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] / lc
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Poly(quot), Poly(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other: Poly) -> Poly:
        return self.divmod(other)[0]

    def __mod__(self, other: Poly) -> Poly:
        return self.divmod(other)[1]

    def exact_div(self, other: Poly) -> Poly:
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("division leaves a nonzero remainder")
        return q

    def derivative(self) -> Poly:
        return Poly(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def reversed(self, n: int | None = None) -> Poly:
        """x^n p(1/x) with n defaulting to the degree."""
        n = self.degree if n is None else n
        cs = list(self.coeffs) + [Fraction(0)] * (n + 1 - len(self.coeffs))
        return Poly(reversed(cs[: n + 1]))

    # evaluation
    @cached_property
    def float_coeffs(self) -> tuple[complex, ...]:
        return tuple(float(c) for c in self.coeffs)

    def __call__(self, x):
        acc = 0.0 * x
        for c in reversed(self.float_coeffs):
            acc = acc * x + c
        return acc

    def eval_exact(self, x) -> Fraction:
        x = _frac(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm; gcd(0, 0) = 0."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, (a % b)
        if not b.is_zero():
            b = b.monic()
    return a.monic() if not a.is_zero() else a


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: p = lc * prod f_i^i with f_i monic, square-free, coprime."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    if p.degree == 0:
        return []
    f = p.monic()
    df = f.derivative()
    a0 = gcd(f, df)
    b = f.exact_div(a0)
    c = df.exact_div(a0)
    d = c - b.derivative()
    out: list[tuple[Poly, int]] = []
    i = 1
    while b.degree > 0:
        a = gcd(b, d)
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        if a.degree > 0:
            out.append((a, i))
        i += 1
    return out


def _fujiwara(cs: Sequence[complex]) -> float:
    """Fujiwara bound on root moduli of a monic polynomial (ascending coeffs)."""
    n = len(cs) - 1
    vals = []
    for k in range(1, n + 1):
        c = abs(cs[n - k])
        if c == 0:
            continue
        if k == n:
            c /= 2
        vals.append(c ** (1.0 / k))
    return 2 * max(vals) if vals else 1.0


def _horner_with_deriv(cs: Sequence[complex], z: complex) -> tuple[complex, complex]:
    p, dp = 0j, 0j
    for c in reversed(cs):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def aberth(p: Poly, max_iter: int = 500, tol: float = 1e-15) -> list[complex]:
    """All roots of a square-free polynomial by Aberth--Ehrlich iteration."""
    n = p.degree
    if n < 1:
        return []
    cs = [complex(c) for c in p.monic().float_coeffs]
    if n == 1:
        return [-cs[0]]
    if cs[0] == 0:
        # split off the exact root at the origin
        rest = Poly(p.monic().coeffs[1:])
        return [0j] + aberth(rest, max_iter, tol)
    r = _fujiwara(cs)
    # deterministic start: perturbed roots of unity inside the Fujiwara radius
    zs = [
        0.5 * r * (1 + 0.1 * ((k * 7919) % 13) / 13) * cmath.exp(2j * math.pi * (k + 0.25) / n + 0.4j)
        for k in range(n)
    ]
    prev = math.inf
    for it in range(max_iter):
        worst = 0.0
        new = list(zs)
        for i, z in enumerate(zs):
            pv, dpv = _horner_with_deriv(cs, z)
            if pv == 0:
                continue
            ratio = pv / dpv if dpv != 0 else complex(1e-3)
            s = sum(1.0 / (z - w) for j, w in enumerate(zs) if j != i)
            step = ratio / (1 - ratio * s)
            new[i] = z - step
            worst = max(worst, abs(step) / max(1.0, abs(z)))
        zs = new
        # below 1e-11 the steps only shrink further if rounding allows; once
        # they stop shrinking the roots sit at the floating-point floor
        if worst < tol or (worst < 1e-11 and worst > 0.5 * prev):
            break
        prev = worst
    else:
        raise RootFindingError(f"Aberth iteration did not converge for degree {n}; last step {worst:g}")
    return [_newton_polish(cs, z) for z in zs]


def _newton_polish(cs: Sequence[complex], z: complex, steps: int = 3) -> complex:
    for _ in range(steps):
        pv, dpv = _horner_with_deriv(cs, z)
        if dpv == 0 or pv == 0:
            break
        z = z - pv / dpv
    return z


@dataclass(frozen=True)
class RootSet:
    """Roots with multiplicities; each root remembers its square-free factor."""

    roots: tuple[tuple[complex, int], ...]
    factors: tuple[tuple[Poly, int], ...]

    def __iter__(self):
        return iter(self.roots)

    def __len__(self) -> int:
        return len(self.roots)

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.roots)


def squarefree_roots(p: Poly, residual_tol: float = 1e-10) -> RootSet:
    if p.is_zero():
        raise ValueError("zero polynomial has no root set")
    if p.degree < 1:
        raise ValueError("degree must be at least 1")
    factors = squarefree_decomposition(p)
    roots: list[tuple[complex, int]] = []
    for f, m in factors:
        cs = f.float_coeffs
        scale = max(abs(c) for c in cs)
        for z in aberth(f):
            res = abs(f(z))
            bound = residual_tol * scale * max(1.0, abs(z)) ** f.degree
            if res > bound:
                raise RootFindingError(
                    f"root {z} of a degree-{f.degree} factor has residual {res:g} > {bound:g}"
                )
            roots.append((z, m))
    return RootSet(tuple(roots), tuple(factors))


def _common_denominator(cs: Sequence[Fraction]) -> int:
    den = 1
    for c in cs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return den


def taylor_coeffs_at(p: Poly, x0: complex, count: int) -> list[complex]:
    """First ``count`` Taylor coefficients of p at x0.

    x0 is taken as the exact dyadic complex number it represents in binary64;
    the shift is carried out in Gaussian-integer arithmetic and each
    coefficient is rounded once at the end.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    if p.is_zero():
        return [0j] * count
    x0 = complex(x0)
    fr, fi = Fraction(x0.real), Fraction(x0.imag)
    D = _common_denominator([fr, fi])
    u, v = int(fr * D), int(fi * D)
    L = _common_denominator(p.coeffs)
    d = p.degree
    # homogenized integer polynomial: sum c_i D^(d-i) y^i = L D^d p(y/D)
    re = [int(c * L) * D ** (d - i) for i, c in enumerate(p.coeffs)]
    im = [0] * (d + 1)
    n = d + 1
    for i in range(min(count, n - 1)):
        for k in range(n - 2, i - 1, -1):
            ar, ai = re[k + 1], im[k + 1]
            re[k] += u * ar - v * ai
            im[k] += u * ai + v * ar
    out: list[complex] = []
    base = L * D**d
    for j in range(count):
        if j > d:
            out.append(0j)
            continue
        den = Fraction(D**j, base)
        out.append(complex(float(re[j] * den), float(im[j] * den)))
    return out
