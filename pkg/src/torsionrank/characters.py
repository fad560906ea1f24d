"""Dirichlet characters mod n with exact exponent values.

A character is named by its exponent vector on the stored generators of
(Z/n)*: label ``(c_1, ..., c_r)`` means ``chi(g_i) = exp(2 pi i c_i / d_i)``.
Values are only turned into balls at evaluation time.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from math import gcd

from .balls import ComplexBall, Precision, PrecisionError, resolve_precision, unit_root_ball
from .modular import ModInt, RootOfUnity, UnitGroup, divisors, rep, unit_group

__all__ = [
    "DirichletCharacter",
    "CharacterTable",
    "PeriodInfo",
    "TriangleVerdict",
    "enumerate_characters",
    "character_from_turns",
    "minimal_period",
    "lift",
    "orthogonality_sum",
    "char_sum_c",
    "char_sum_matrix",
    "triangle_check",
    "char_sum_matrix_rank",
]


@dataclass(frozen=True)
class DirichletCharacter:
    modulus: int
    label: tuple[int, ...]
    group: UnitGroup = field(repr=False, compare=False)

    @cached_property
    def order(self) -> int:
        d = 1
        for c, o in zip(self.label, self.group.orders):
            e = o // gcd(c, o)
            d = d * e // gcd(d, e)
        return d

    @cached_property
    def _turns(self) -> dict[int, Fraction]:
        out = {}
        for a in self.group.elements:
            t = sum(Fraction(c * l, o) for c, l, o in zip(self.label, self.group.dlog[a], self.group.orders))
            out[a] = t % 1
        return out

    def turn(self, a: int) -> Fraction | None:
        """chi(a) as a fraction of a full turn, or None for a non-unit."""
        return self._turns.get(rep(a, self.modulus))

    def exponent(self, a: int) -> int | None:
        """e(a) with chi(a) = zeta_order ** e(a)."""
        t = self.turn(a)
        return None if t is None else int(t * self.order)

    def value(self, a: int) -> RootOfUnity | None:
        e = self.exponent(a)
        return None if e is None else RootOfUnity(e, self.order)

    def is_trivial(self) -> bool:
        return all(c == 0 for c in self.label)

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(
            self.modulus, tuple(-c % o for c, o in zip(self.label, self.group.orders)), self.group
        )

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if other.modulus != self.modulus:
            raise ValueError("characters of different moduli")
        label = tuple((a + b) % o for a, b, o in zip(self.label, other.label, self.group.orders))
        return DirichletCharacter(self.modulus, label, self.group)

    @cached_property
    def conductor(self) -> int:
        return _conductor(self)

    @property
    def aperiodic(self) -> bool:
        return self.conductor == self.modulus

    def to_dict(self) -> dict:
        return {
            "modulus": self.modulus,
            "label": list(self.label),
            "order": self.order,
            "conductor": self.conductor,
            "aperiodic": self.aperiodic,
            "exponents": {str(a): self.exponent(a) for a in self.group.elements},
        }


@dataclass(frozen=True)
class CharacterTable:
    modulus: int
    group: UnitGroup
    characters: tuple[DirichletCharacter, ...]

    @property
    def generators(self) -> tuple[int, ...]:
        return self.group.generators

    def __len__(self) -> int:
        return len(self.characters)

    def __iter__(self):
        return iter(self.characters)

    def by_label(self, label) -> DirichletCharacter:
        for chi in self.characters:
            if chi.label == tuple(label):
                return chi
        raise KeyError(label)

    def trivial(self) -> DirichletCharacter:
        return self.characters[0]

    def to_dict(self) -> dict:
        return {
            "modulus": self.modulus,
            "generators": list(self.group.generators),
            "generator_orders": list(self.group.orders),
            "index_convention": "unit representatives 1..n",
            "characters": [chi.to_dict() for chi in self.characters],
        }


@lru_cache(maxsize=None)
def enumerate_characters(n: int) -> CharacterTable:
    g = unit_group(n)
    chars = tuple(
        DirichletCharacter(n, label, g) for label in product(*(range(d) for d in g.orders))
    )
    return CharacterTable(n, g, chars)


def character_from_turns(n: int, turns) -> DirichletCharacter:
    """The character mod n sending generator ``g_i`` to ``exp(2 pi i turns[i])``."""
    g = unit_group(n)
    label = []
    for t, o in zip(turns, g.orders):
        c = Fraction(t) * o
        if c.denominator != 1:
            raise ValueError(f"turn {t} is not an {o}-th root of unity")
        label.append(int(c) % o)
    return DirichletCharacter(n, tuple(label), g)


# ---------------------------------------------------------------------------
# periods
# ---------------------------------------------------------------------------


def _factors_through(chi: DirichletCharacter, d: int) -> bool:
    # chi = chi' o pi for pi: (Z/n)* -> (Z/d)* iff chi is trivial on ker(pi)
    return all(chi.turn(a) == 0 for a in chi.group.elements if a % d == 1 % d)


def _conductor(chi: DirichletCharacter) -> int:
    for d in divisors(chi.modulus):
        if _factors_through(chi, d):
            return d
    raise AssertionError("unreachable: every character factors through itself")


@dataclass(frozen=True)
class PeriodInfo:
    conductor: int
    aperiodic: bool
    induced: DirichletCharacter | None


def induced_character(chi: DirichletCharacter, d: int) -> DirichletCharacter:
    """The character chi' mod d with chi = chi' o pi (d must be a period)."""
    if chi.modulus % d or not _factors_through(chi, d):
        raise ValueError(f"character mod {chi.modulus} does not factor through Z/{d}")
    n = chi.modulus
    g = unit_group(d)
    turns = []
    for h in g.generators:
        a = h
        while gcd(a, n) != 1:
            a += d
        turns.append(chi.turn(a))
    return character_from_turns(d, turns)


def minimal_period(chi: DirichletCharacter) -> PeriodInfo:
    q = chi.conductor
    induced = None if q == chi.modulus else induced_character(chi, q)
    return PeriodInfo(q, q == chi.modulus, induced)


def lift(chi_prime: DirichletCharacter, n: int) -> DirichletCharacter:
    """chi' o pi as a character mod n, for n a multiple of the modulus of chi'."""
    d = chi_prime.modulus
    if n % d:
        raise ValueError(f"{d} does not divide {n}")
    g = unit_group(n)
    return character_from_turns(n, [chi_prime.turn(h % d) for h in g.generators])


def orthogonality_sum(chi: DirichletCharacter, psi: DirichletCharacter) -> int:
    """``sum_a chi(a) conj(psi(a))`` exactly.

    The values ``(chi psi^-1)(a)`` are d-th roots of unity; if every exponent
    occurs equally often the sum is ``(phi/d) * sum_e zeta_d**e``, which is 0
    for d > 1.
    """
    rho = chi * psi.conjugate()
    if rho.order == 1:
        return len(chi.group.elements)
    counts = Counter(rho.exponent(a) for a in chi.group.elements)
    if len(counts) != rho.order or len(set(counts.values())) != 1:
        raise AssertionError("character values are not equidistributed")
    return 0


# ---------------------------------------------------------------------------
# character sums c(m, chi)
# ---------------------------------------------------------------------------


def _char_sum(m: int, chi: DirichletCharacter, w: int) -> ComplexBall:
    n = chi.modulus
    acc = ComplexBall.exact(0, w)
    for a in chi.group.elements:
        # zeta_n^{m a} * conj(chi(a)) as one exact turn
        t = (Fraction(m * a, n) - chi.turn(a)) % 1
        acc = acc + unit_root_ball(t.numerator, t.denominator, w)
    return acc


def char_sum_c(m, chi: DirichletCharacter, prec: int | Precision | None = None) -> ComplexBall:
    """``c(m, chi) = sum_{a in (Z/n)*} zeta_n**(m a) * conj(chi(a))``."""
    if isinstance(m, ModInt):
        if m.modulus != chi.modulus:
            raise ValueError("m and chi have different moduli")
        m = m.value
    return _char_sum(int(m), chi, resolve_precision(prec).working)


@dataclass(frozen=True)
class TriangleVerdict:
    modulus: int
    label: tuple[int, ...]
    passed: bool
    margin: object  # mpf lower bound on |c(1, chi)|
    c1: ComplexBall | None = None
    failures: tuple[str, ...] = ()


def triangle_check(chi: DirichletCharacter, prec: int | Precision | None = None) -> TriangleVerdict:
    """Vanishing of c(m, chi) off the units and c(m, chi) = c(1, chi) chi(m) on them.

    Raises PrecisionError when c(1, chi) cannot be separated from zero.
    """
    if not chi.aperiodic:
        raise ValueError("triangle_check needs an aperiodic character")
    n = chi.modulus
    w = resolve_precision(prec).working
    c1 = _char_sum(1, chi, w)
    if n == 1:
        return TriangleVerdict(n, chi.label, True, c1.margin(), c1)
    if not c1.excludes_zero():
        raise PrecisionError(f"c(1, chi) for chi mod {n} is not separated from 0")
    failures = []
    for m in range(n):
        c = _char_sum(m, chi, w)
        if gcd(m, n) != 1:
            if not c.contains(0):
                failures.append(f"c({m}) does not contain 0")
        else:
            t = chi.turn(m)
            expected = c1 * unit_root_ball(t.numerator, t.denominator, w)
            if not c.overlaps(expected):
                failures.append(f"c({m}) disjoint from c(1) chi({m})")
    return TriangleVerdict(n, chi.label, not failures, c1.margin(), c1, tuple(failures))


def char_sum_matrix(n: int, prec: int | Precision | None = None) -> list[list[ComplexBall]]:
    """Rows m = 0..n-1, columns the characters in table order."""
    w = resolve_precision(prec).working
    table = enumerate_characters(n)
    return [[_char_sum(m, chi, w) for chi in table] for m in range(n)]


def char_sum_matrix_rank(n: int, prec: int | Precision | None = None):
    """Certify that the n x phi(n) matrix (c(m, chi)) has full column rank.

    Returns the RankWitness; its ``rank`` equals phi(n) when certified.
    """
    from .ballmatrix import certify_rank

    m = char_sum_matrix(n, prec)
    width = len(m[0])
    return certify_rank(m, width, row_labels=list(range(n)), full_search=n <= 12)
