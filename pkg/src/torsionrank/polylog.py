"""Certified Hurwitz zeta and polylogarithm values at roots of unity.

The polylogarithm at ``z = zeta_N**a`` is evaluated by grouping its defining
series by the residue of the summation index mod N::

    Li_s(zeta_N**a) = N**-s * sum_{j=1..N} zeta_N**(a j) * zeta_H(s, j/N)

and each Hurwitz value comes from Euler-Maclaurin summation with an explicit
remainder bound.  The raw polylog series survives as a low-precision oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from mpmath.libmp import from_rational, fzero, mpf_add, round_ceiling

from .balls import (
    ComplexBall,
    Precision,
    RealBall,
    pi_ball,
    resolve_precision,
    unit_root_ball,
)
from .modular import RootOfUnity

__all__ = [
    "BERNOULLI_CACHE_SIZE",
    "PolylogValue",
    "bernoulli_numbers",
    "bernoulli_polynomial",
    "hurwitz_zeta",
    "polylog_root",
    "polylog_turn",
    "real_polylog",
    "torsion_component",
    "direct_series_oracle",
    "residue_power_sums",
    "bernoulli_component",
    "KubertVerdict",
    "kubert_relation",
]

BERNOULLI_CACHE_SIZE = 64


# ---------------------------------------------------------------------------
# Bernoulli numbers
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1)
def _bernoulli_table() -> tuple[Fraction, ...]:
    # sum_{j=0}^{m} C(m+1, j) B_j = 0, with B_1 = -1/2
    b = [Fraction(1)]
    for m in range(1, BERNOULLI_CACHE_SIZE + 1):
        acc = sum(comb(m + 1, j) * b[j] for j in range(m))
        b.append(-acc / (m + 1))
    return tuple(b)


def bernoulli_numbers(upto: int = BERNOULLI_CACHE_SIZE) -> tuple[Fraction, ...]:
    """``(B_0, ..., B_upto)`` as exact rationals (cached)."""
    if upto > BERNOULLI_CACHE_SIZE:
        raise ValueError(f"Bernoulli numbers are cached up to index {BERNOULLI_CACHE_SIZE}")
    return _bernoulli_table()[: upto + 1]


def bernoulli_polynomial(s: int, x: Fraction) -> Fraction:
    b = bernoulli_numbers(s)
    return sum(comb(s, j) * b[j] * x ** (s - j) for j in range(s + 1))


# ---------------------------------------------------------------------------
# Hurwitz zeta
# ---------------------------------------------------------------------------


def _rising(s: int, m: int) -> int:
    out = 1
    for i in range(m):
        out *= s + i
    return out


@lru_cache(maxsize=None)
def _em_coefficient(s: int, j: int) -> Fraction:
    """``B_{2j} / (2j)! * s (s+1) ... (s+2j-2)``."""
    return bernoulli_numbers(2 * j)[2 * j] * _rising(s, 2 * j - 1) / factorial(2 * j)


def _log2_abs(q: Fraction) -> float:
    return math.log2(abs(q.numerator)) - math.log2(q.denominator)


@lru_cache(maxsize=None)
def _em_parameters(s: int, x: Fraction, target_bits: int) -> tuple[int, int]:
    """Shift N and order M with remainder bound below ``2**-target_bits``.

    The remainder after the order-M correction is at most
    ``|B_2M|/(2M)! * (s)_{2M-1} * (N + x)**(1 - s - 2M)``.
    """
    best = None
    for m in range(1, BERNOULLI_CACHE_SIZE // 2 + 1):
        lc = _log2_abs(_em_coefficient(s, m))
        e = 2 * m + s - 1
        base = 2.0 ** ((lc + target_bits) / e)
        n = max(1, math.ceil(base - float(x)) + 1)
        cost = n + 2 * m
        if best is None or cost < best[0]:
            best = (cost, n, m)
    _, n, m = best
    while _em_remainder(s, x, n, m) >= Fraction(1, 1 << target_bits):
        n += 1 + n // 16
    return n, m


def _em_remainder(s: int, x: Fraction, n: int, m: int) -> Fraction:
    return abs(_em_coefficient(s, m)) * (n + x) ** (1 - s - 2 * m)


def hurwitz_zeta(s: int, x, prec: int | Precision | None = None) -> RealBall:
    """Enclosure of ``sum_{m >= 0} (m + x)**-s`` for integer s >= 2, 0 < x <= 1."""
    if not isinstance(s, int) or s < 2:
        raise ValueError(f"hurwitz_zeta needs an integer s >= 2, got {s!r}")
    x = Fraction(x)
    if not 0 < x <= 1:
        raise ValueError(f"x must lie in (0, 1], got {x}")
    return _hurwitz(s, x, resolve_precision(prec).working)


@lru_cache(maxsize=None)
def _hurwitz(s: int, x: Fraction, w: int) -> RealBall:
    n, m = _em_parameters(s, x, w + 4)
    p, q = x.numerator, x.denominator
    total = RealBall(fzero, fzero, w)
    # direct part: (k + p/q)**-s = q**s / (k q + p)**s, each rounded once
    qs = q**s
    for k in range(n):
        total = total + RealBall.exact(Fraction(qs, (k * q + p) ** s), w)
    big = n * q + p  # (N + x) = big / q
    total = total + RealBall.exact(Fraction(q ** (s - 1), (s - 1) * big ** (s - 1)), w)
    total = total + RealBall.exact(Fraction(qs, 2 * big**s), w)
    for j in range(1, m + 1):
        e = s + 2 * j - 1
        total = total + RealBall.exact(_em_coefficient(s, j) * Fraction(q**e, big**e), w)
    rem = _em_remainder(s, x, n, m)
    return total.with_error(from_rational(rem.numerator, rem.denominator, 32, round_ceiling))


# ---------------------------------------------------------------------------
# polylogarithm at roots of unity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolylogValue:
    weight: int
    argument: RootOfUnity
    value: ComplexBall
    method: str = "hurwitz"


def polylog_turn(s: int, turn: Fraction, w: int) -> ComplexBall:
    """``Li_s(exp(2 pi i turn))`` at working precision ``w`` (cached on the reduced turn)."""
    turn = Fraction(turn) % 1
    return _polylog(s, turn.numerator, turn.denominator, w)


@lru_cache(maxsize=None)
def _polylog(s: int, a: int, order: int, w: int) -> ComplexBall:
    if order == 1:
        return ComplexBall(_hurwitz(s, Fraction(1), w))
    acc = ComplexBall.exact(0, w)
    for j in range(1, order + 1):
        root = unit_root_ball(a * j % order, order, w)
        acc = acc + root * _hurwitz(s, Fraction(j, order), w)
    scale = RealBall.exact(Fraction(1, order**s), w)
    out = acc * scale
    if 2 * a % order == 0:
        # Li_s of a real argument is real
        out = ComplexBall(out.re, RealBall(fzero, fzero, w))
    return out


def polylog_root(s: int, z: RootOfUnity, prec: int | Precision | None = None) -> PolylogValue:
    """Enclosure of ``Li_s(z) = sum_{m >= 1} z**m / m**s`` for a root of unity z."""
    if not isinstance(s, int) or s < 2:
        raise ValueError(f"polylog weight must be an integer >= 2, got {s!r}")
    w = resolve_precision(prec).working
    return PolylogValue(s, z, polylog_turn(s, z.turn, w))


def torsion_component(k: int, value) -> RealBall:
    """Real part of ``i**-k * value``: the single place the sign convention lives.

    k = 0, 1, 2, 3 (mod 4) selects Re, Im, -Re, -Im.
    """
    r = k % 4
    if r == 0:
        return value.real
    if r == 1:
        return value.imag
    if r == 2:
        return -value.real
    return -value.imag


def real_polylog(k: int, z: RootOfUnity, prec: int | Precision | None = None) -> RealBall:
    """``L_{k+1}(z) = Re(i**-k Li_{k+1}(z))``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return torsion_component(k, polylog_root(k + 1, z, prec).value)


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------


def residue_power_sums(s: int, n: int, terms: int, bits: int) -> list[RealBall]:
    """For each residue r mod n, a ball for ``sum_{1 <= m <= terms, m = r} m**-s``.

    Fixed point with ``bits + 24`` fractional bits; each term is truncated, so
    the error is below one unit per term.
    """
    fb = bits + 24 + terms.bit_length()
    one = 1 << fb
    sums = [0] * n
    counts = [0] * n
    for m in range(1, terms + 1):
        r = m % n
        sums[r] += one // m**s
        counts[r] += 1
    out = []
    for r in range(n):
        lo = Fraction(sums[r], one)
        ball = RealBall.exact(lo, bits).with_error(Fraction(counts[r], one))
        out.append(ball)
    return out


def direct_series_oracle(s: int, z: RootOfUnity, terms: int, bits: int = 64) -> ComplexBall:
    """Partial sum of ``sum z**m / m**s`` plus the tail bound ``1/((s-1) terms**(s-1))``.

    Independent of the Hurwitz route; only practical at low precision.
    """
    if s < 2 or terms < 1:
        raise ValueError("need s >= 2 and at least one term")
    z = z.reduced()
    n = z.order
    w = bits + 8
    acc = ComplexBall.exact(0, w)
    for r, part in enumerate(residue_power_sums(s, n, terms, w)):
        if part.mid == fzero and part.rad == fzero:
            continue
        acc = acc + unit_root_ball(z.exponent * r % n, n, w) * part
    tail = Fraction(1, (s - 1) * terms ** (s - 1))
    return ComplexBall(acc.re.with_error(tail), acc.im.with_error(tail))


def bernoulli_component(k: int, z: RootOfUnity, prec: int | Precision | None = None) -> RealBall:
    """Closed form of the component of ``Li_{k+1}(e^{i theta})`` that ``real_polylog`` drops.

    With ``t = theta / 2 pi`` in [0, 1) and ``s = k + 1``::

        s even:  Re Li_s = (-1)**(s/2 + 1)     (2 pi)**s / (2 s!) B_s(t)
        s odd:   Im Li_s = (-1)**((s + 1)/2)   (2 pi)**s / (2 s!) B_s(t)
    """
    if not 1 <= k <= 6:
        raise ValueError("bernoulli_component is tabulated for 1 <= k <= 6")
    s = k + 1
    t = z.turn
    if s % 2 == 0:
        sign = -1 if (s // 2) % 2 == 0 else 1
    else:
        sign = 1 if ((s + 1) // 2) % 2 == 0 else -1
    q = sign * Fraction(2**s, 2 * factorial(s)) * bernoulli_polynomial(s, t)
    w = resolve_precision(prec).working
    return pi_ball(w) ** s * RealBall.exact(q, w)


# ---------------------------------------------------------------------------
# distribution relation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KubertVerdict:
    weight: int
    turn: Fraction
    m: int
    passed: bool
    combined_radius: object  # mpf
    lhs: ComplexBall
    rhs: ComplexBall


def kubert_relation(s: int, turn, m: int, prec: int | Precision | None = None) -> KubertVerdict:
    """``Li_s(z) = m**(s-1) sum_{w**m = z} Li_s(w)`` at ``z = exp(2 pi i turn)``."""
    if m < 1:
        raise ValueError("m must be positive")
    turn = Fraction(turn) % 1
    w = resolve_precision(prec).working
    lhs = polylog_turn(s, turn, w)
    acc = ComplexBall.exact(0, w)
    for j in range(m):
        acc = acc + polylog_turn(s, (turn + j) / m, w)
    rhs = acc * RealBall.exact(m ** (s - 1), w)
    combined = mpf_add(lhs.rad, rhs.rad, 32, round_ceiling)
    return KubertVerdict(s, turn, m, lhs.overlaps(rhs), combined, lhs, rhs)
