"""Independent reference values, none of which touch the package's own numerics.

Each oracle returns an exact rational interval (lo, hi) containing the constant.
"""

from fractions import Fraction
from math import comb

import mpmath


def _chebyshev_t3(n: int) -> int:
    # T_n(3) by T_{j+1} = 6 T_j - T_{j-1}
    a, b = 1, 3
    for _ in range(n):
        a, b = b, 6 * b - a
    return a


def accelerated_alternating(a, n: int) -> tuple[Fraction, Fraction]:
    """``sum_{k>=0} (-1)**k a(k)`` for moments a(k) of a positive measure on [0, 1].

    Chebyshev-weighted partial sums; the error is at most ``a(0) / T_n(3)``.
    """
    d = _chebyshev_t3(n)
    b, c, s = Fraction(-1), Fraction(-d), Fraction(0)
    for k in range(n):
        c = b - c
        s += c * a(k)
        b = b * (k + n) * (k - n) / ((Fraction(2 * k + 1, 2)) * (k + 1))
    val = s / d
    err = Fraction(a(0)) / d
    return val - err, val + err


def catalan_interval(n: int = 60) -> tuple[Fraction, Fraction]:
    """1 - 1/9 + 1/25 - ...; 1/(2k+1)**2 is the k-th moment of -log(y)/(4 sqrt y) dy."""
    return accelerated_alternating(lambda k: Fraction(1, (2 * k + 1) ** 2), n)


def catalan_plain_interval(terms: int) -> tuple[Fraction, Fraction]:
    """Unaccelerated partial sum of the same series; the tail is bounded by the next term."""
    s = sum(Fraction((-1) ** k, (2 * k + 1) ** 2) for k in range(terms))
    nxt = Fraction(1, (2 * terms + 1) ** 2)
    return (s, s + nxt) if terms % 2 == 0 else (s - nxt, s)


def zeta3_interval(terms: int = 90) -> tuple[Fraction, Fraction]:
    """Apery: zeta(3) = 5/2 sum_{k>=1} (-1)**(k+1) / (k**3 C(2k, k)); alternating, decreasing."""
    s = Fraction(0)
    for k in range(1, terms + 1):
        s += Fraction((-1) ** (k + 1), k**3 * comb(2 * k, k))
    nxt = Fraction(1, (terms + 1) ** 3 * comb(2 * terms + 2, terms + 1))
    lo, hi = (s - nxt, s) if terms % 2 == 0 else (s, s + nxt)
    lo, hi = sorted((Fraction(5, 2) * lo, Fraction(5, 2) * hi))
    return lo, hi


def mp_interval(value, dps: int = 60) -> tuple[Fraction, Fraction]:
    """Interval of half-width 10**-(dps-5) around an mpmath value computed at ``dps`` digits."""
    with mpmath.workdps(dps):
        x = Fraction(mpmath.nstr(value() if callable(value) else value, dps, strip_zeros=False))
    eps = Fraction(1, 10 ** (dps - 5))
    return x - eps, x + eps


def pi_interval() -> tuple[Fraction, Fraction]:
    return mp_interval(lambda: mpmath.pi)


def scale(iv, q) -> tuple[Fraction, Fraction]:
    lo, hi = iv[0] * q, iv[1] * q
    return (lo, hi) if lo <= hi else (hi, lo)


def square(iv) -> tuple[Fraction, Fraction]:
    lo, hi = iv
    assert lo > 0
    return lo * lo, hi * hi


def power(iv, e: int) -> tuple[Fraction, Fraction]:
    lo, hi = iv
    assert lo > 0
    return lo**e, hi**e


def ball_bounds(ball) -> tuple[Fraction, Fraction]:
    from torsionrank.balls import mpf_to_fraction

    return mpf_to_fraction(ball.lower()), mpf_to_fraction(ball.upper())


def meets(ball, iv) -> bool:
    lo, hi = ball_bounds(ball)
    return lo <= iv[1] and iv[0] <= hi


def agrees_to(ball, iv, digits: int) -> bool:
    """Ball and interval intersect and together pin the value to ``digits`` decimals."""
    lo, hi = ball_bounds(ball)
    width = max(hi, iv[1]) - min(lo, iv[0])
    return meets(ball, iv) and width < Fraction(1, 10**digits)
