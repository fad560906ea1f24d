"""Exact arithmetic on Z/n, its unit group, and the 0/1 matrices S and E.

Matrix indices follow the 1-based convention: rows and columns run over the
representatives 1..n of Z/n, with n standing for the class of 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd, prod

__all__ = [
    "ModInt",
    "RootOfUnity",
    "UnitGroup",
    "PermMatrixS",
    "ShiftMatrixE",
    "EigenClaim",
    "Pi0Monoid",
    "is_prime",
    "factorize",
    "divisors",
    "euler_phi",
    "primes_up_to",
    "mod_inverse",
    "rep",
    "unit_group",
    "negation_perm",
    "rank_one_plus_minus_S",
    "shift_matrix",
    "eigen_claim_E",
    "pi0_monoid",
    "PI0_SEARCH_BOUND",
]


# ---------------------------------------------------------------------------
# elementary number theory
# ---------------------------------------------------------------------------


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization ``((p, e), ...)`` with p increasing."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def divisors(n: int) -> list[int]:
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p**i for d in ds for i in range(e + 1)]
    return sorted(ds)


def euler_phi(n: int) -> int:
    return prod((p - 1) * p ** (e - 1) for p, e in factorize(n))


def primes_up_to(bound: int) -> list[int]:
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(bound**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, bound + 1, i)))
    return [i for i in range(bound + 1) if sieve[i]]


def mod_inverse(a: int, n: int) -> int:
    """Inverse of a modulo n via extended gcd; for n = 1 the unique class 0."""
    if n == 1:
        return 0
    old_r, r = a % n, n
    old_s, s = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    if old_r != 1:
        raise ValueError(f"{a} is not invertible modulo {n}")
    return old_s % n


def rep(a: int, n: int) -> int:
    """Representative of a mod n in 1..n."""
    r = a % n
    return r if r else n


# ---------------------------------------------------------------------------
# Z/n and roots of unity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModInt:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        object.__setattr__(self, "value", self.value % self.modulus)

    def _other(self, other) -> int:
        if isinstance(other, ModInt):
            if other.modulus != self.modulus:
                raise ValueError("moduli differ")
            return other.value
        return int(other)

    def __add__(self, other):
        return ModInt(self.value + self._other(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return ModInt(self.value - self._other(other), self.modulus)

    def __neg__(self):
        return ModInt(-self.value, self.modulus)

    def __mul__(self, other):
        return ModInt(self.value * self._other(other), self.modulus)

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        return gcd(self.value, self.modulus) == 1

    def inverse(self) -> "ModInt":
        return ModInt(mod_inverse(self.value, self.modulus), self.modulus)

    def __int__(self) -> int:
        return self.value


@dataclass(frozen=True)
class RootOfUnity:
    """``zeta_order ** exponent`` with ``zeta_n = exp(2 pi i / n)``."""

    exponent: int
    order: int

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be positive")
        object.__setattr__(self, "exponent", self.exponent % self.order)

    def reduced(self) -> "RootOfUnity":
        g = gcd(self.exponent, self.order)
        return RootOfUnity(self.exponent // g, self.order // g)

    @property
    def turn(self) -> Fraction:
        """The angle as a fraction of a full turn, in [0, 1)."""
        return Fraction(self.exponent, self.order)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        t = self.turn + other.turn
        return RootOfUnity(t.numerator, t.denominator)

    def __pow__(self, e: int) -> "RootOfUnity":
        return RootOfUnity(self.exponent * e, self.order)

    def conjugate(self) -> "RootOfUnity":
        return RootOfUnity(-self.exponent, self.order)

    def is_real(self) -> bool:
        return (2 * self.exponent) % self.order == 0

    def same_point(self, other: "RootOfUnity") -> bool:
        return self.turn == other.turn


# ---------------------------------------------------------------------------
# the unit group (Z/n)*
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UnitGroup:
    """(Z/n)* as a product of cyclic groups.

    ``elements`` are the representatives in 1..n (for n = 1, the single class
    is written 1).  ``dlog[a]`` is the exponent vector of ``a`` on
    ``generators``.
    """

    modulus: int
    elements: tuple[int, ...]
    generators: tuple[int, ...]
    orders: tuple[int, ...]
    dlog: dict = field(repr=False, compare=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def exponent(self) -> int:
        out = 1
        for d in self.orders:
            out = out * d // gcd(out, d)
        return out

    def element(self, exps) -> int:
        n = self.modulus
        x = 1 % n
        for g, e in zip(self.generators, exps):
            x = x * pow(g, e, n) % n
        return rep(x, n)

    def log(self, a: int) -> tuple[int, ...]:
        return self.dlog[rep(a, self.modulus)]


def _primitive_root_prime_power(p: int, e: int) -> int:
    phi_p = p - 1
    factors = [q for q, _ in factorize(phi_p)]
    g = 2
    while any(pow(g, phi_p // q, p) == 1 for q in factors) or g % p == 0:
        g += 1
    if e >= 2 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


def _crt_lift(residue: int, pe: int, n: int) -> int:
    """The class mod n that is ``residue`` mod ``pe`` and 1 mod ``n / pe``."""
    rest = n // pe
    if rest == 1:
        return residue % n
    t = (residue - 1) * mod_inverse(rest, pe) % pe
    return (1 + rest * t) % n


@lru_cache(maxsize=None)
def unit_group(n: int) -> UnitGroup:
    """All units of Z/n with a cyclic decomposition.

    Odd prime powers use a primitive root; ``2**e`` with ``e >= 3`` uses
    ``<-1> x <5>``.  Local generators are lifted by CRT and the generating
    set is verified by enumerating every product.
    """
    if n < 1:
        raise ValueError("n must be positive")
    gens, orders = [], []
    for p, e in factorize(n):
        pe = p**e
        if p == 2:
            if e >= 2:
                gens.append(_crt_lift(pe - 1, pe, n))
                orders.append(2)
            if e >= 3:
                gens.append(_crt_lift(5, pe, n))
                orders.append(2 ** (e - 2))
        else:
            gens.append(_crt_lift(_primitive_root_prime_power(p, e), pe, n))
            orders.append((p - 1) * p ** (e - 1))
    dlog = {}
    for exps in product(*(range(d) for d in orders)):
        x = 1 % n
        for g, k in zip(gens, exps):
            x = x * pow(g, k, n) % n
        a = rep(x, n)
        if a in dlog:
            raise AssertionError(f"generators of (Z/{n})* are not independent")
        dlog[a] = tuple(exps)
    elements = tuple(sorted(dlog))
    expected = tuple(a for a in range(1, n + 1) if gcd(a, n) == 1)
    if elements != expected:
        raise AssertionError(f"generators do not generate (Z/{n})*")
    return UnitGroup(n, elements, tuple(rep(g, n) for g in gens), tuple(orders), dlog)


# ---------------------------------------------------------------------------
# S and E
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PermMatrixS:
    """``S[a][b] = 1`` iff n divides a + b, as the involution a -> n - a."""

    size: int
    image: tuple[int, ...]  # image[a - 1] = the b with S[a][b] = 1

    def matrix(self) -> list[list[int]]:
        n = self.size
        return [[1 if self.image[a] == b + 1 else 0 for b in range(n)] for a in range(n)]

    def fixed_points(self) -> list[int]:
        return [a for a in range(1, self.size + 1) if self.image[a - 1] == a]

    def two_cycles(self) -> list[tuple[int, int]]:
        return [(a, self.image[a - 1]) for a in range(1, self.size + 1) if a < self.image[a - 1]]

    def is_involution(self) -> bool:
        return all(self.image[self.image[a] - 1] == a + 1 for a in range(self.size))


def negation_perm(n: int) -> PermMatrixS:
    if n < 1:
        raise ValueError("n must be positive")
    s = PermMatrixS(n, tuple(rep(-a, n) for a in range(1, n + 1)))
    if not s.is_involution():
        raise AssertionError("S is not an involution")
    return s


def rank_one_plus_minus_S(n: int, sign: int) -> int:
    """Rank of ``1 + S`` (sign=+1) or ``1 - S`` (sign=-1) from the cycle type of S.

    On a fixed point ``1 + S`` acts as 2 and ``1 - S`` as 0; on each 2-cycle
    both have rank one.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    s = negation_perm(n)
    fixed, swaps = len(s.fixed_points()), len(s.two_cycles())
    return fixed + swaps if sign == 1 else swaps


@dataclass(frozen=True)
class ShiftMatrixE:
    """``E[a][p a mod n']`` = 1, indices in 1..n'."""

    size: int
    p: int
    image: tuple[int, ...]

    def matrix(self) -> list[list[int]]:
        n = self.size
        return [[1 if self.image[a] == b + 1 else 0 for b in range(n)] for a in range(n)]


def shift_matrix(n_prime: int, p: int) -> ShiftMatrixE:
    if n_prime < 1:
        raise ValueError("n' must be positive")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return ShiftMatrixE(n_prime, p, tuple(rep(p * a, n_prime) for a in range(1, n_prime + 1)))


@dataclass(frozen=True)
class EigenClaim:
    """Trajectory decomposition of a -> p a on Z/n'.

    E is the matrix of pullback along this map, so its characteristic
    polynomial is ``x**len(transient) * prod(x**len(c) - 1 for c in cycles)``:
    every eigenvalue is 0 or a root of unity.
    """

    size: int
    p: int
    cycles: tuple[tuple[int, ...], ...]
    transient: tuple[int, ...]
    spectral_radius_bound: int = 1

    @property
    def zero_multiplicity(self) -> int:
        return len(self.transient)

    def spectrum(self) -> list[Fraction | None]:
        """Eigenvalues as turns of roots of unity; None stands for 0."""
        out: list[Fraction | None] = [None] * len(self.transient)
        for c in self.cycles:
            out.extend(Fraction(j, len(c)) for j in range(len(c)))
        return out


def eigen_claim_E(E: ShiftMatrixE) -> EigenClaim:
    n = E.size
    nxt = {a: E.image[a - 1] for a in range(1, n + 1)}
    on_cycle = set()
    for start in range(1, n + 1):
        seen = []
        x = start
        # every orbit of a self-map of a finite set is eventually periodic
        while x not in seen:
            seen.append(x)
            x = nxt[x]
        on_cycle.update(seen[seen.index(x) :])
    cycles, done = [], set()
    for a in sorted(on_cycle):
        if a in done:
            continue
        cyc = [a]
        x = nxt[a]
        while x != a:
            cyc.append(x)
            x = nxt[x]
        done.update(cyc)
        cycles.append(tuple(cyc))
    transient = tuple(a for a in range(1, n + 1) if a not in on_cycle)
    if len(transient) + sum(map(len, cycles)) != n:
        raise AssertionError("trajectory decomposition does not cover Z/n'")
    return EigenClaim(n, E.p, tuple(cycles), transient)


# ---------------------------------------------------------------------------
# pi_0 of the monoid of equivariant self-maps
# ---------------------------------------------------------------------------

# x * y = 0 forces (1 - n x)(1 - n y) = 1, so |1 - n x| = 1 and |x| <= 2/n <= 2;
# searching |x|, |y| <= 4 therefore finds every invertible element.
PI0_SEARCH_BOUND = 4


@dataclass(frozen=True)
class Pi0Monoid:
    """Integers under ``x * y = x + y - n x y`` (degree ``1 - n x`` is multiplicative)."""

    n: int
    units: tuple[int, ...]
    search_bound: int = PI0_SEARCH_BOUND
    identity: int = 0

    def product(self, x: int, y: int) -> int:
        return x + y - self.n * x * y

    def degree(self, x: int) -> int:
        return 1 - self.n * x


def pi0_monoid(n: int) -> Pi0Monoid:
    if n < 1:
        raise ValueError("n must be positive")
    b = PI0_SEARCH_BOUND
    rng = range(-b, b + 1)
    units = tuple(
        x for x in rng if any(x + y - n * x * y == 0 and y + x - n * y * x == 0 for y in rng)
    )
    return Pi0Monoid(n, units)
