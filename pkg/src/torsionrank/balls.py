"""Midpoint-radius ball arithmetic on top of ``mpmath.libmp``.

A :class:`RealBall` is a pair ``(mid, rad)`` of raw mpf tuples.  The midpoint
is rounded to nearest at the working precision and every rounding is charged
to the radius as one ulp.  Radii live at :data:`RAD_PREC` bits and are always
rounded upward, so every ball returned by an operation contains the exact
result whenever the operands contain theirs.

Soundness:
    for x in a, y in b:  x op y  in  a op b
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from mpmath import libmp
from mpmath.libmp import (
    fzero,
    fone,
    from_int,
    from_man_exp,
    from_rational,
    mpf_abs,
    mpf_add,
    mpf_cmp,
    mpf_div,
    mpf_mul,
    mpf_neg,
    mpf_sqrt,
    mpf_sub,
    to_float,
)

__all__ = [
    "Precision",
    "RealBall",
    "ComplexBall",
    "PrecisionError",
    "InconsistencyError",
    "DEFAULT_PREC",
    "DEFAULT_GUARD",
    "RAD_PREC",
    "resolve_precision",
    "pi_ball",
    "unit_root_ball",
    "mpf_to_fraction",
    "mpf_to_decimal",
    "decimal_to_mpf",
]

DEFAULT_PREC = 128
DEFAULT_GUARD = 24
RAD_PREC = 32

_UP = libmp.round_ceiling
_DOWN = libmp.round_floor
_NEAR = libmp.round_nearest

Number = Union[int, Fraction]


class PrecisionError(ArithmeticError):
    """A ball was too wide to decide a question; raise the precision."""


class InconsistencyError(ArithmeticError):
    """Two certified routes to the same quantity produced disjoint balls."""


@dataclass(frozen=True)
class Precision:
    """Significand bits for results plus guard bits for intermediates."""

    bits: int = DEFAULT_PREC
    guard: int = DEFAULT_GUARD

    def __post_init__(self):
        if self.bits < 53:
            raise ValueError(f"precision must be at least 53 bits, got {self.bits}")
        if self.guard < 0:
            raise ValueError("guard bits must be nonnegative")

    @property
    def working(self) -> int:
        return self.bits + self.guard

    def scaled(self, factor: int) -> "Precision":
        return Precision(self.bits * factor, self.guard)


def resolve_precision(prec: Union[int, Precision, None]) -> Precision:
    if prec is None:
        return Precision()
    if isinstance(prec, Precision):
        return prec
    return Precision(int(prec))


# ---------------------------------------------------------------------------
# raw mpf helpers
# ---------------------------------------------------------------------------


def _ulp(x, prec: int):
    """Upper bound for the error of rounding a value to ``x`` at ``prec`` bits."""
    if x == fzero:
        return fzero
    _, _, exp, bc = x
    return (0, 1, exp + bc - prec, 1)


def _radd(*terms):
    r = fzero
    for t in terms:
        if t != fzero:
            r = mpf_add(r, t, RAD_PREC, _UP)
    return r


def _rmul(a, b):
    if a == fzero or b == fzero:
        return fzero
    return mpf_mul(a, b, RAD_PREC, _UP)


def mpf_to_fraction(x) -> Fraction:
    sign, man, exp, _ = x
    if x == fzero:
        return Fraction(0)
    man = int(man)
    if sign:
        man = -man
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


def mpf_to_decimal(x) -> str:
    """Exact decimal expansion of a finite mpf (binary fractions terminate)."""
    if x == fzero:
        return "0"
    sign, man, exp, _ = x
    man = int(man)
    if exp >= 0:
        digits = str(man << exp)
        frac = ""
    else:
        scaled = str(man * 5 ** (-exp))
        places = -exp
        if len(scaled) <= places:
            scaled = "0" * (places - len(scaled) + 1) + scaled
        digits, frac = scaled[:-places], scaled[-places:].rstrip("0")
    out = digits + ("." + frac if frac else "")
    return ("-" if sign else "") + out


def decimal_to_mpf(text: str):
    """Inverse of :func:`mpf_to_decimal`; exact for strings it produced."""
    q = Fraction(text)
    if q == 0:
        return fzero
    # binary fractions are exactly representable once enough bits are allowed
    bits = max(q.numerator.bit_length(), 1) + q.denominator.bit_length() + 8
    x = from_rational(q.numerator, q.denominator, bits, _NEAR)
    if mpf_to_fraction(x) != q:
        raise ValueError(f"{text!r} is not a dyadic rational")
    return x


def _from_fraction(q: Fraction, prec: int):
    if q.denominator == 1:
        m = from_int(q.numerator, prec, _NEAR)
    else:
        m = from_rational(q.numerator, q.denominator, prec, _NEAR)
    if mpf_to_fraction(m) == q:
        return m, fzero
    return m, _ulp(m, prec)


# ---------------------------------------------------------------------------
# real balls
# ---------------------------------------------------------------------------


class RealBall:
    """Closed interval ``[mid - rad, mid + rad]``; immutable by convention."""

    __slots__ = ("mid", "rad", "prec")

    def __init__(self, mid=fzero, rad=fzero, prec: int = DEFAULT_PREC + DEFAULT_GUARD):
        self.mid = mid
        self.rad = rad
        self.prec = prec

    # construction -----------------------------------------------------------

    @classmethod
    def exact(cls, value: Number, prec: int) -> "RealBall":
        q = Fraction(value)
        m, r = _from_fraction(q, prec)
        return cls(m, r, prec)

    @classmethod
    def from_endpoints(cls, lo, hi, prec: int) -> "RealBall":
        """Smallest convenient ball containing the mpf interval ``[lo, hi]``."""
        mid = mpf_div(mpf_add(lo, hi, 0), from_int(2), prec, _NEAR)
        r1 = mpf_sub(mid, lo, RAD_PREC, _UP)
        r2 = mpf_sub(hi, mid, RAD_PREC, _UP)
        rad = r1 if mpf_cmp(r1, r2) >= 0 else r2
        if mpf_cmp(rad, fzero) < 0:
            rad = fzero
        return cls(mid, rad, prec)

    def with_error(self, err) -> "RealBall":
        """Widen the radius by a nonnegative mpf or Fraction bound."""
        if isinstance(err, Fraction):
            err = from_rational(err.numerator, err.denominator, RAD_PREC, _UP)
        return RealBall(self.mid, _radd(self.rad, err), self.prec)

    # coercion ---------------------------------------------------------------

    def _coerce(self, other) -> "RealBall":
        if isinstance(other, RealBall):
            return other
        if isinstance(other, (int, Fraction)):
            return RealBall.exact(other, self.prec)
        return NotImplemented

    # arithmetic -------------------------------------------------------------

    def __neg__(self) -> "RealBall":
        return RealBall(mpf_neg(self.mid), self.rad, self.prec)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = max(self.prec, other.prec)
        m = mpf_add(self.mid, other.mid, p, _NEAR)
        return RealBall(m, _radd(self.rad, other.rad, _ulp(m, p)), p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = max(self.prec, other.prec)
        m = mpf_sub(self.mid, other.mid, p, _NEAR)
        return RealBall(m, _radd(self.rad, other.rad, _ulp(m, p)), p)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = max(self.prec, other.prec)
        m = mpf_mul(self.mid, other.mid, p, _NEAR)
        rad = _radd(
            _rmul(mpf_abs(self.mid), other.rad),
            _rmul(mpf_abs(other.mid), self.rad),
            _rmul(self.rad, other.rad),
            _ulp(m, p),
        )
        return RealBall(m, rad, p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.excludes_zero():
            raise PrecisionError("division by a ball containing zero")
        p = max(self.prec, other.prec)
        m = mpf_div(self.mid, other.mid, p, _NEAR)
        bm = mpf_abs(other.mid)
        num = _radd(_rmul(mpf_abs(self.mid), other.rad), _rmul(bm, self.rad))
        if num == fzero:
            rad = _ulp(m, p)
        else:
            low = mpf_sub(bm, other.rad, RAD_PREC, _DOWN)
            den = mpf_mul(bm, low, RAD_PREC, _DOWN)
            rad = _radd(mpf_div(num, den, RAD_PREC, _UP), _ulp(m, p))
        return RealBall(m, rad, p)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def div_int(self, n: int) -> "RealBall":
        m = mpf_div(self.mid, from_int(n), self.prec, _NEAR)
        rad = _radd(mpf_div(self.rad, from_int(abs(n)), RAD_PREC, _UP), _ulp(m, self.prec))
        return RealBall(m, rad, self.prec)

    def __pow__(self, e: int) -> "RealBall":
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = RealBall(fone, fzero, self.prec)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def sqrt(self) -> "RealBall":
        lo = mpf_sub(self.mid, self.rad, self.prec + 8, _DOWN)
        if mpf_cmp(lo, fzero) < 0:
            if mpf_cmp(self.upper(), fzero) < 0:
                raise ValueError("square root of a negative ball")
            lo = fzero
        hi = self.upper()
        return RealBall.from_endpoints(
            mpf_sqrt(lo, self.prec, _DOWN), mpf_sqrt(hi, self.prec, _UP), self.prec
        )

    def abs(self) -> "RealBall":
        if self.excludes_zero():
            return RealBall(mpf_abs(self.mid), self.rad, self.prec)
        return RealBall.from_endpoints(fzero, self.abs_upper(), self.prec)

    # queries ----------------------------------------------------------------

    def lower(self):
        return mpf_sub(self.mid, self.rad, RAD_PREC + self.prec, _DOWN)

    def upper(self):
        return mpf_add(self.mid, self.rad, RAD_PREC + self.prec, _UP)

    def abs_upper(self):
        return mpf_add(mpf_abs(self.mid), self.rad, RAD_PREC, _UP)

    def abs_lower(self):
        """Distance from the ball to zero, rounded down; zero if it contains 0."""
        d = mpf_sub(mpf_abs(self.mid), self.rad, RAD_PREC, _DOWN)
        return d if mpf_cmp(d, fzero) > 0 else fzero

    def margin(self):
        """Signed distance to zero: positive iff the ball excludes 0."""
        return mpf_sub(mpf_abs(self.mid), self.rad, RAD_PREC, _DOWN)

    def excludes_zero(self) -> bool:
        return mpf_cmp(mpf_abs(self.mid), self.rad) > 0

    def contains_zero(self) -> bool:
        return not self.excludes_zero()

    def contains(self, value) -> bool:
        """Exact containment test for an int, Fraction, mpf tuple or ball."""
        if isinstance(value, RealBall):
            d = mpf_abs(mpf_sub(self.mid, value.mid, 0))
            slack = mpf_sub(self.rad, value.rad, 0)
            return mpf_cmp(d, slack) <= 0
        if isinstance(value, tuple):
            d = mpf_abs(mpf_sub(self.mid, value, 0))
            return mpf_cmp(d, self.rad) <= 0
        q = Fraction(value)
        return abs(q - mpf_to_fraction(self.mid)) <= mpf_to_fraction(self.rad)

    def overlaps(self, other: "RealBall") -> bool:
        d = mpf_abs(mpf_sub(self.mid, other.mid, 0))
        return mpf_cmp(d, mpf_add(self.rad, other.rad, 0)) <= 0

    def mid_distance(self, other: "RealBall"):
        return mpf_abs(mpf_sub(self.mid, other.mid, 0))

    def approx(self) -> float:
        return to_float(self.mid)

    def approx_abs(self) -> float:
        return abs(to_float(self.mid))

    def conjugate(self) -> "RealBall":
        return self

    @property
    def real(self) -> "RealBall":
        return self

    def __repr__(self) -> str:
        return f"RealBall({libmp.to_str(self.mid, 20)} +/- {libmp.to_str(self.rad, 3)})"


# ---------------------------------------------------------------------------
# complex balls
# ---------------------------------------------------------------------------


class ComplexBall:
    """Rectangular enclosure ``re + i*im`` with independent real balls."""

    __slots__ = ("re", "im")

    def __init__(self, re: RealBall, im: RealBall | None = None):
        self.re = re
        self.im = im if im is not None else RealBall(fzero, fzero, re.prec)

    @property
    def prec(self) -> int:
        return max(self.re.prec, self.im.prec)

    @classmethod
    def exact(cls, value: Number, prec: int) -> "ComplexBall":
        return cls(RealBall.exact(value, prec))

    def _coerce(self, other):
        if isinstance(other, ComplexBall):
            return other
        if isinstance(other, RealBall):
            return ComplexBall(other)
        if isinstance(other, (int, Fraction)):
            return ComplexBall.exact(other, self.prec)
        return NotImplemented

    def __neg__(self):
        return ComplexBall(-self.re, -self.im)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ComplexBall(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ComplexBall(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, RealBall):
            return ComplexBall(self.re * other, self.im * other)
        if isinstance(other, (int, Fraction)):
            b = RealBall.exact(other, self.prec)
            return ComplexBall(self.re * b, self.im * b)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        return ComplexBall(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def norm_sq(self) -> RealBall:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "ComplexBall":
        n = self.norm_sq()
        if not n.excludes_zero():
            raise PrecisionError("inverse of a ball containing zero")
        return ComplexBall(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if isinstance(other, (RealBall, int, Fraction)):
            return ComplexBall(self.re / other, self.im / other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def conjugate(self) -> "ComplexBall":
        return ComplexBall(self.re, -self.im)

    @property
    def real(self) -> RealBall:
        return self.re

    @property
    def imag(self) -> RealBall:
        return self.im

    @property
    def rad(self):
        """Larger of the two component radii."""
        return self.re.rad if mpf_cmp(self.re.rad, self.im.rad) >= 0 else self.im.rad

    def abs(self) -> RealBall:
        return self.norm_sq().sqrt()

    def abs_lower(self):
        """Lower bound for |z| over the ball (zero if the ball meets 0)."""
        x, y = self.re.abs_lower(), self.im.abs_lower()
        s = mpf_add(mpf_mul(x, x, RAD_PREC, _DOWN), mpf_mul(y, y, RAD_PREC, _DOWN), RAD_PREC, _DOWN)
        return mpf_sqrt(s, RAD_PREC, _DOWN)

    def margin(self):
        """Positive lower bound on |z| if the ball excludes 0, else a value <= 0."""
        if self.excludes_zero():
            return self.abs_lower()
        return mpf_neg(self.rad)

    def excludes_zero(self) -> bool:
        return self.re.excludes_zero() or self.im.excludes_zero()

    def contains_zero(self) -> bool:
        return not self.excludes_zero()

    def contains(self, value) -> bool:
        """Containment of a ComplexBall, a real value, or an exact pair ``(re, im)``."""
        if isinstance(value, ComplexBall):
            return self.re.contains(value.re) and self.im.contains(value.im)
        if isinstance(value, complex):
            raise TypeError("pass exact parts as (re, im) instead of a float complex")
        if isinstance(value, tuple) and len(value) == 2:
            return self.re.contains(value[0]) and self.im.contains(value[1])
        return self.re.contains(value) and self.im.contains(0)

    def overlaps(self, other) -> bool:
        other = self._coerce(other)
        return self.re.overlaps(other.re) and self.im.overlaps(other.im)

    def mid_distance(self, other: "ComplexBall"):
        """Upper bound on the distance between midpoints."""
        dx = self.re.mid_distance(other.re)
        dy = self.im.mid_distance(other.im)
        s = mpf_add(mpf_mul(dx, dx, RAD_PREC, _UP), mpf_mul(dy, dy, RAD_PREC, _UP), RAD_PREC, _UP)
        return mpf_sqrt(s, RAD_PREC, _UP)

    def approx(self) -> complex:
        return complex(to_float(self.re.mid), to_float(self.im.mid))

    def approx_abs(self) -> float:
        return abs(self.approx())

    def __repr__(self) -> str:
        return f"ComplexBall({self.re!r}, {self.im!r})"


# ---------------------------------------------------------------------------
# constants and unit-circle values
# ---------------------------------------------------------------------------


def _atan_inv_fixed(x: int, w: int) -> tuple[int, int]:
    """Fixed-point ``atan(1/x) * 2**w`` truncated termwise; returns (value, error units)."""
    one = 1 << w
    total = 0
    power = x
    j = 0
    x2 = x * x
    while True:
        term = one // ((2 * j + 1) * power)
        if term == 0:
            break
        total += -term if j & 1 else term
        power *= x2
        j += 1
    # each floor loses < 1 unit; the alternating tail is below the first zero term (< 1 unit)
    return total, j + 1


@lru_cache(maxsize=None)
def pi_ball(prec: int) -> RealBall:
    """Machin's formula ``pi = 16 atan(1/5) - 4 atan(1/239)`` in fixed point."""
    w = prec + 32
    a5, e5 = _atan_inv_fixed(5, w)
    a239, e239 = _atan_inv_fixed(239, w)
    value = 16 * a5 - 4 * a239
    err_units = 16 * e5 + 4 * e239
    mid = from_man_exp(value, -w, prec, _NEAR)
    rad = _radd(from_man_exp(err_units, -w), _ulp(mid, prec))
    return RealBall(mid, rad, prec)


def _sin_cos_reduced(phi: RealBall) -> tuple[RealBall, RealBall]:
    """Taylor series for ``0 <= phi <= pi/4``; remainder bounded by the last term."""
    prec = phi.prec
    one = RealBall(fone, fzero, prec)
    x2 = phi * phi
    s_term, c_term = phi, one
    s_sum, c_sum = phi, one
    cutoff = (0, 1, -prec - 8, 1)
    k = 1
    while True:
        c_term = -(c_term * x2).div_int((2 * k - 1) * (2 * k))
        s_term = -(s_term * x2).div_int((2 * k) * (2 * k + 1))
        c_sum = c_sum + c_term
        s_sum = s_sum + s_term
        k += 1
        if mpf_cmp(c_term.abs_upper(), cutoff) < 0 and mpf_cmp(s_term.abs_upper(), cutoff) < 0:
            break
    # |phi| < 1 so the omitted alternating tails are bounded by the last included terms
    return s_sum.with_error(s_term.abs_upper()), c_sum.with_error(c_term.abs_upper())


@lru_cache(maxsize=None)
def unit_root_ball(num: int, den: int, prec: int) -> ComplexBall:
    """Enclosure of ``exp(2*pi*i*num/den)``.

    The turn ``num/den`` is reduced to an angle in ``[0, pi/4]`` through the
    octant symmetries; quarter turns come out exact.
    """
    r = Fraction(num, den) % 1
    eighths = r * 8
    octant = eighths.numerator // eighths.denominator
    f = eighths - octant
    quadrant, odd = divmod(octant, 2)
    zero = RealBall(fzero, fzero, prec)
    one = RealBall(fone, fzero, prec)

    def small(t: Fraction):
        if t == 0:
            return zero, one
        phi = pi_ball(prec) * RealBall.exact(t / 4, prec)
        return _sin_cos_reduced(phi)

    if not odd:
        s, c = small(f)
    else:
        c, s = small(1 - f)
    if quadrant == 1:
        c, s = -s, c
    elif quadrant == 2:
        c, s = -c, -s
    elif quadrant == 3:
        c, s = s, -c
    return ComplexBall(c, s)
