"""e_n(chi), Dirichlet L-values, and the identities that prove e_n(chi) != 0."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from mpmath.libmp import fzero, mpf_cmp
from mpmath import mpc, mpf, workprec

from .balls import (
    ComplexBall,
    Precision,
    PrecisionError,
    RealBall,
    resolve_precision,
    unit_root_ball,
)
from .characters import DirichletCharacter, _char_sum, lift
from .modular import factorize, is_prime, mod_inverse, primes_up_to
from .polylog import _hurwitz, polylog_turn, residue_power_sums

__all__ = [
    "EValue",
    "LValue",
    "IdentityVerdict",
    "EulerEstimate",
    "e_n_chi",
    "dirichlet_L",
    "euler_partial",
    "factorization_check",
    "recursion_case1",
    "recursion_case2",
    "recursion_checks",
    "nonzero_certify",
    "ESCALATION_FACTORS",
]

ESCALATION_FACTORS = (1, 2, 4)


@dataclass(frozen=True)
class EValue:
    modulus: int
    label: tuple[int, ...]
    k: int
    value: ComplexBall
    margin: object  # mpf; positive iff the ball excludes 0
    status: str = "computed"
    precision_bits: int | None = None
    history: tuple[int, ...] = ()

    @property
    def certified_nonzero(self) -> bool:
        return mpf_cmp(self.margin, fzero) > 0


@dataclass(frozen=True)
class LValue:
    label: tuple[int, ...]
    s: int
    value: ComplexBall
    method: str


@dataclass(frozen=True)
class IdentityVerdict:
    """Outcome of comparing two independently computed balls."""

    name: str
    passed: bool
    lhs: ComplexBall
    rhs: ComplexBall
    discrepancy: object  # mpf upper bound on the midpoint distance
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class EulerEstimate:
    """Truncated Euler product; the error is a heuristic, never a bound."""

    value: complex
    heuristic_error: float
    primes_used: int
    certified: bool = False


def _e_n(chi: DirichletCharacter, k: int, w: int) -> ComplexBall:
    n = chi.modulus
    acc = ComplexBall.exact(0, w)
    for a in chi.group.elements:
        t = -chi.turn(a) % 1
        acc = acc + polylog_turn(k + 1, Fraction(a, n), w) * unit_root_ball(t.numerator, t.denominator, w)
    return acc


def e_n_chi(chi: DirichletCharacter, k: int, prec: int | Precision | None = None) -> EValue:
    """``e_n(chi) = sum_{a in (Z/n)*} Li_{k+1}(zeta_n**a) conj(chi(a))``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    p = resolve_precision(prec)
    v = _e_n(chi, k, p.working)
    return EValue(chi.modulus, chi.label, k, v, v.margin(), precision_bits=p.bits)


def _restricted_series(chi: DirichletCharacter, s: int, terms: int, w: int) -> ComplexBall:
    n = chi.modulus
    sums = residue_power_sums(s, n, terms, w)
    acc = ComplexBall.exact(0, w)
    for r in range(n):
        t = chi.turn(r) if gcd(r, n) == 1 else None
        if t is None:
            continue
        acc = acc + unit_root_ball(t.numerator, t.denominator, w) * sums[r]
    tail = Fraction(1, (s - 1) * terms ** (s - 1))
    return ComplexBall(acc.re.with_error(tail), acc.im.with_error(tail))


def _l_hurwitz(chi: DirichletCharacter, s: int, w: int) -> ComplexBall:
    n = chi.modulus
    acc = ComplexBall.exact(0, w)
    for a in chi.group.elements:
        t = chi.turn(a)
        acc = acc + unit_root_ball(t.numerator, t.denominator, w) * _hurwitz(s, Fraction(a, n), w)
    return acc * RealBall.exact(Fraction(1, n**s), w)


def dirichlet_L(
    chi: DirichletCharacter,
    s: int,
    prec: int | Precision | None = None,
    method: str = "hurwitz",
    terms: int = 10_000,
) -> LValue:
    """``L(chi, s) = sum_{(m, n) = 1} chi(m) m**-s``.

    ``hurwitz`` regroups the series as ``n**-s sum_a chi(a) zeta_H(s, a/n)``;
    ``restricted-series`` is a partial sum with tail ``1/((s-1) M**(s-1))``.
    """
    if not isinstance(s, int) or s < 2:
        raise ValueError("dirichlet_L needs an integer s >= 2")
    w = resolve_precision(prec).working
    if method == "hurwitz":
        v = _l_hurwitz(chi, s, w)
    elif method == "restricted-series":
        v = _restricted_series(chi, s, terms, w)
    else:
        raise ValueError(f"unknown method {method!r}")
    return LValue(chi.label, s, v, method)


def euler_partial(chi: DirichletCharacter, s: int, prime_bound: int) -> EulerEstimate:
    """``prod_{p <= P0} (1 - chi(p) p**-s)**-1`` in double-ish precision."""
    if s < 2:
        raise ValueError("s must be at least 2")
    n = chi.modulus
    with workprec(64):
        acc = mpc(1)
        used = 0
        for p in primes_up_to(prime_bound):
            if n % p == 0:
                continue
            t = chi.turn(p)
            angle = 2 * math.pi * float(t)
            acc /= 1 - mpc(math.cos(angle), math.sin(angle)) * mpf(p) ** (-s)
            used += 1
        value = complex(acc)
    if prime_bound < 2:
        est = 0.0
    else:
        # sum_{p > P0} p**-s ~ P0**(1-s) / ((s-1) log P0); doubled for comfort
        est = 2.0 * abs(value) * prime_bound ** (1 - s) / ((s - 1) * math.log(prime_bound))
    return EulerEstimate(value, est, used)


def factorization_check(chi: DirichletCharacter, k: int, prec: int | Precision | None = None) -> IdentityVerdict:
    """``e_n(chi) = c(1, chi) L(chi, k+1)`` for aperiodic chi."""
    if not chi.aperiodic:
        raise ValueError("factorization_check needs an aperiodic character")
    w = resolve_precision(prec).working
    lhs = _e_n(chi, k, w)
    c1 = _char_sum(1, chi, w)
    lv = _l_hurwitz(chi, k + 1, w)
    rhs = c1 * lv
    return IdentityVerdict(
        "factorization",
        lhs.overlaps(rhs),
        lhs,
        rhs,
        lhs.mid_distance(rhs),
        {"c1": c1, "L": lv},
    )


def recursion_case1(chi_prime: DirichletCharacter, p: int, k: int, prec: int | Precision | None = None) -> IdentityVerdict:
    """``e_{p n'}(chi' o pi) = p**-k e_{n'}(chi')`` when p | n'."""
    n1 = chi_prime.modulus
    if not is_prime(p) or n1 % p:
        raise ValueError(f"case 1 needs a prime p dividing n' = {n1}")
    w = resolve_precision(prec).working
    chi = lift(chi_prime, p * n1)
    lhs = _e_n(chi, k, w)
    rhs = _e_n(chi_prime, k, w) * RealBall.exact(Fraction(1, p**k), w)
    return IdentityVerdict(
        "recursion_case1", lhs.overlaps(rhs), lhs, rhs, lhs.mid_distance(rhs), {"p": p, "n_prime": n1}
    )


def recursion_case2(chi_prime: DirichletCharacter, p: int, k: int, prec: int | Precision | None = None) -> IdentityVerdict:
    """``e_{p n'}(chi' o pi) = (p**-k - chi'(q)) e_{n'}(chi')`` with q = 1/p mod n', p not dividing n'.

    The factor written chi(q) is evaluated as chi'(q): q lives in (Z/n')*.
    """
    n1 = chi_prime.modulus
    if not is_prime(p) or n1 % p == 0:
        raise ValueError(f"case 2 needs a prime p coprime to n' = {n1}")
    w = resolve_precision(prec).working
    chi = lift(chi_prime, p * n1)
    q = mod_inverse(p, n1)
    t = chi_prime.turn(q)
    factor = ComplexBall.exact(Fraction(1, p**k), w) - unit_root_ball(t.numerator, t.denominator, w)
    lhs = _e_n(chi, k, w)
    rhs = factor * _e_n(chi_prime, k, w)
    return IdentityVerdict(
        "recursion_case2",
        lhs.overlaps(rhs),
        lhs,
        rhs,
        lhs.mid_distance(rhs),
        {"p": p, "n_prime": n1, "q": q},
    )


def recursion_checks(chi: DirichletCharacter, k: int, prec: int | Precision | None = None) -> list[IdentityVerdict]:
    """Every recursion identity that applies to chi: one per prime p | n with chi factoring through n/p."""
    from .characters import induced_character, _factors_through

    n = chi.modulus
    out = []
    for p, _ in factorize(n) if n > 1 else ():
        n1 = n // p
        if not _factors_through(chi, n1):
            continue
        chi1 = induced_character(chi, n1)
        if n1 % p == 0:
            out.append(recursion_case1(chi1, p, k, prec))
        else:
            out.append(recursion_case2(chi1, p, k, prec))
    return out


def nonzero_certify(chi: DirichletCharacter, k: int, prec: int | Precision | None = None) -> EValue:
    """A ball for e_n(chi) that excludes 0, escalating precision up to 4x.

    Never claims zero: if no precision separates the ball from 0 the status is
    ``undecided``.
    """
    base = resolve_precision(prec)
    history = []
    ev = None
    for f in ESCALATION_FACTORS:
        p = base.scaled(f)
        history.append(p.bits)
        v = _e_n(chi, k, p.working)
        ev = EValue(chi.modulus, chi.label, k, v, v.margin(), "computed", p.bits, tuple(history))
        if ev.certified_nonzero:
            return EValue(chi.modulus, chi.label, k, v, ev.margin, "certified", p.bits, tuple(history))
    return EValue(chi.modulus, chi.label, k, ev.value, ev.margin, "undecided", ev.precision_bits, tuple(history))


def _require_decided(ev: EValue) -> EValue:
    if not ev.certified_nonzero:
        raise PrecisionError(f"e_{ev.modulus}({ev.label}) not separated from zero")
    return ev
