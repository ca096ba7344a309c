"""Reference values computed with mpmath, independent of the package's own
special-function code."""

from __future__ import annotations

from fractions import Fraction

import mpmath as mp

mp.mp.dps = 30

ZP = mp.zeta(-1, derivative=1)
L, G = mp.log, mp.loggamma


def hurwitz_deriv(s, a) -> float:
    return float(mp.zeta(s, a, derivative=1))


def barnes_deriv0_rational(a: Fraction) -> float:
    """d/ds at 0 of sum_{m,n>=0} (a m + n + 1)^-s for rational a = p/q.

    With m = q i + r, n = p j + t the sum becomes
    p^-s sum_{r,t} sum_N (N + 1) (N + b_rt)^-s, b_rt = (p r + q t + q)/(p q),
    and sum_N (N + 1)(N + b)^-s = zeta_H(s - 1, b) + (1 - b) zeta_H(s, b).
    """
    a = Fraction(a)
    p, q = a.numerator, a.denominator
    F0 = mp.mpf(0)
    F1 = mp.mpf(0)
    for r in range(q):
        for t in range(p):
            b = mp.mpf(p * r + q * t + q) / (p * q)
            F0 += mp.zeta(-1, b) + (1 - b) * mp.zeta(0, b)
            F1 += mp.zeta(-1, b, derivative=1) + (1 - b) * mp.zeta(0, b, derivative=1)
    return float(F1 - mp.log(p) * F0)


def calC_rational(beta: Fraction) -> float:
    beta = Fraction(beta)
    a = beta + 1
    bd = barnes_deriv0_rational(a)
    b, af = mp.mpf(beta.numerator) / beta.denominator, mp.mpf(a.numerator) / a.denominator
    return float(2 * bd - 2 * ZP - b * b * L(2) / (6 * af) - b / 12 + L(af) / 2)


def calC_minus_half() -> float:
    return float(-ZP - L(2) / 6 + mp.mpf(1) / 24)


def bigC() -> float:
    return float(mp.mpf(1) / 6 - mp.mpf(4) / 3 * L(2) - 4 * ZP - L(mp.pi))


def round_sphere() -> float:
    return float(mp.mpf(1) / 2 - 4 * ZP)


def flat_tetrahedron() -> float:
    return float(L(mp.mpf(4) / 3) - 3 * G(mp.mpf(2) / 3) + mp.mpf(3) / 2 * L(mp.pi))


def flat_octahedron() -> float:
    return float(
        6 * ZP + mp.mpf(35) / 24 * L(mp.mpf(4) / 3) - mp.mpf(13) / 2 * G(mp.mpf(2) / 3) + mp.mpf(13) / 4 * L(mp.pi)
    )


def flat_cube() -> float:
    return float(
        mp.mpf(32) / 3 * ZP - mp.mpf(37) / 18 * L(2) + mp.mpf(25) / 12 * L(3)
        + mp.mpf(16) / 3 * G(mp.mpf(2) / 3) - mp.mpf(86) / 9 * G(mp.mpf(3) / 4) + mp.mpf(19) / 9 * L(mp.pi)
    )


def flat_icosahedron() -> float:
    s5 = mp.sqrt(5)
    return float(
        mp.mpf(96) / 5 * ZP + mp.mpf(18) / 5 * L(s5 - 1) + mp.mpf(6) / 5 * L(s5 + 1) + mp.mpf(23) / 2 * L(mp.pi)
        + mp.mpf(214) / 45 * L(2) - mp.mpf(917) / 60 * L(3) + mp.mpf(251) / 36 * L(5)
        + mp.mpf(72) / 5 * G(mp.mpf(4) / 5) - mp.mpf(211) / 5 * G(mp.mpf(2) / 3) + mp.mpf(24) / 5 * G(mp.mpf(3) / 5)
    )


def flat_dodecahedron() -> float:
    s5 = mp.sqrt(5)
    return float(
        mp.mpf(83) / 180 * L(2) - mp.mpf(7) / 135 * L(3) - mp.mpf(19) / 72 * L(5) + mp.mpf(19) / 108 * L(s5 - 1)
        - mp.mpf(19) / 27 * G(mp.mpf(7) / 10) - mp.mpf(19) / 27 * G(mp.mpf(4) / 5) + mp.mpf(19) / 27 * L(mp.pi)
        + mp.mpf(1) / 6 - 4 * ZP - 20 * calC_rational(Fraction(-1, 10))
    )


FLAT_SOLIDS = {
    "tetrahedron": flat_tetrahedron,
    "octahedron": flat_octahedron,
    "cube": flat_cube,
    "icosahedron": flat_icosahedron,
    "dodecahedron": flat_dodecahedron,
}


def spindle_log_det(beta: float, area: float) -> float:
    """Spindle with two cones of order beta at area S, from its closed form
    at the natural area 4 pi (beta + 1) and the scaling law."""
    calc = calC_rational(Fraction(beta).limit_denominator(10**6))
    beta = mp.mpf(beta)
    a = beta + 1
    S = 4 * mp.pi * a
    val = a / 3 - (a + 1 / a) * L(2 * a) / 3 - 2 * calc + bigC() + L(S)
    z0 = (2 * beta + 2) / 6 - 2 * (a - 1 / a) / 12 - 1
    return float(val - z0 * L(area / S))


def eta(tau: complex) -> complex:
    """Dedekind eta as q^(1/24) times mpmath's q-Pochhammer (q; q)_inf."""
    tau = mp.mpc(tau)
    q = mp.exp(2j * mp.pi * tau)
    return complex(mp.exp(1j * mp.pi * tau / 12) * mp.qp(q))
