"""The torsion matrix ``T[a][b] = Li_{k+1}(zeta_n**(a b))`` and its certified ranks."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath.libmp import fzero, mpf_cmp

from .ballmatrix import RankWitness, ball_det, certify_rank, midpoint_singular_values
from .balls import (
    ComplexBall,
    InconsistencyError,
    Precision,
    RealBall,
    resolve_precision,
)
from .characters import enumerate_characters
from .lfunctions import ESCALATION_FACTORS, _e_n
from .modular import (
    eigen_claim_E,
    factorize,
    negation_perm,
    rank_one_plus_minus_S,
    rep,
    shift_matrix,
)
from .polylog import polylog_turn, torsion_component
from .serialize import ball_to_json

__all__ = [
    "TorsionMatrixT",
    "RankCertificate",
    "PairingMatrix",
    "MatrixVerdict",
    "DeterminantVerdict",
    "build_T",
    "lens_torsion",
    "hcob_pairing",
    "pairing_matrix",
    "conjugation_relation",
    "kubert_rows_check",
    "certify_T_invertible",
    "unit_submatrix_check",
    "certified_ranks",
    "induction_step_check",
    "remark_rows",
    "remark_rows_check",
    "SVD_THRESHOLD",
]

SVD_THRESHOLD = 1e-8


@dataclass(frozen=True)
class TorsionMatrixT:
    """Stores the n distinct values ``Li_{k+1}(zeta_n**r)``, r = 1..n; entries are references."""

    n: int
    k: int
    prec: Precision
    values: tuple[ComplexBall, ...] = field(repr=False)

    def value(self, r: int) -> ComplexBall:
        return self.values[rep(r, self.n) - 1]

    def entry(self, a: int, b: int) -> ComplexBall:
        """``T[a][b]`` for 1-based a, b (any integers; only ab mod n matters)."""
        return self.value(a * b)

    def rows(self, indices=None) -> list[list[ComplexBall]]:
        idx = list(range(1, self.n + 1)) if indices is None else list(indices)
        return [[self.entry(a, b) for b in idx] for a in idx]

    def real_part(self) -> list[list[RealBall]]:
        return [[x.re for x in row] for row in self.rows()]

    def imag_part(self) -> list[list[RealBall]]:
        return [[x.im for x in row] for row in self.rows()]

    def torsion_part(self) -> list[list[RealBall]]:
        """The real matrix ``(L_{k+1}(zeta**(ab)))``: plus or minus Re T or Im T."""
        return [[torsion_component(self.k, x) for x in row] for row in self.rows()]

    @property
    def max_radius(self):
        best = fzero
        for v in self.values:
            if mpf_cmp(v.rad, best) > 0:
                best = v.rad
        return best

    # export -----------------------------------------------------------------

    def to_csv(self, part: str = "complex") -> str:
        """Midpoints, row-major; complex entries as ``re+imj``."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["a\\b"] + list(range(1, self.n + 1)))
        for a in range(1, self.n + 1):
            row = [a]
            for b in range(1, self.n + 1):
                x = self.entry(a, b)
                if part == "re":
                    row.append(repr(x.re.approx()))
                elif part == "im":
                    row.append(repr(x.im.approx()))
                else:
                    row.append(repr(x.approx()))
            w.writerow(row)
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "precision_bits": self.prec.bits,
            "index_convention": "1-based, row-major, T[a][b] = Li_{k+1}(zeta_n^(a*b))",
            "entries": [
                {"a": a, "b": b, "value": ball_to_json(self.entry(a, b))}
                for a in range(1, self.n + 1)
                for b in range(1, self.n + 1)
            ],
        }


def build_T(n: int, k: int, prec: int | Precision | None = None) -> TorsionMatrixT:
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    p = resolve_precision(prec)
    w = p.working
    values = tuple(polylog_turn(k + 1, Fraction(r, n), w) for r in range(1, n + 1))
    return TorsionMatrixT(n, k, p, values)


# ---------------------------------------------------------------------------
# torsion values and the pairing
# ---------------------------------------------------------------------------


def _L(n: int, k: int, r: int, w: int) -> RealBall:
    return torsion_component(k, polylog_turn(k + 1, Fraction(r, n), w))


def lens_torsion(n: int, k: int, b: int, ch, prec: int | Precision | None = None) -> RealBall:
    """``-n**k L_{k+1}(zeta_n**b) ch`` for the lens space bundle."""
    if k < 1:
        raise ValueError("k must be at least 1")
    w = resolve_precision(prec).working
    return -(_L(n, k, b, w) * RealBall.exact(n**k * Fraction(ch), w))


def hcob_pairing(n: int, k: int, a: int, b: int, ch, prec: int | Precision | None = None) -> RealBall:
    """``n**k L_{k+1}(zeta_n**(a b)) ch``; the opposite sign of :func:`lens_torsion`."""
    if k < 1:
        raise ValueError("k must be at least 1")
    w = resolve_precision(prec).working
    return _L(n, k, a * b, w) * RealBall.exact(n**k * Fraction(ch), w)


@dataclass(frozen=True)
class PairingMatrix:
    n: int
    k: int
    ch: Fraction
    entries: tuple[tuple[RealBall, ...], ...] = field(repr=False)


def pairing_matrix(n: int, k: int, ch=1, prec: int | Precision | None = None) -> PairingMatrix:
    rows = tuple(
        tuple(hcob_pairing(n, k, a, b, ch, prec) for b in range(1, n + 1)) for a in range(1, n + 1)
    )
    return PairingMatrix(n, k, Fraction(ch), rows)


# ---------------------------------------------------------------------------
# identities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MatrixVerdict:
    name: str
    passed: bool
    checked: int
    worst_discrepancy: object  # mpf
    failures: tuple = ()


def _worse(a, b):
    return a if mpf_cmp(a, b) >= 0 else b


def conjugation_relation(T: TorsionMatrixT) -> MatrixVerdict:
    """``conj(T) = T S`` entrywise, where ``(T S)[a][b] = T[a][n - b]``."""
    n = T.n
    S = negation_perm(n)
    worst, failures, checked = fzero, [], 0
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            lhs = T.entry(a, b).conjugate()
            rhs = T.entry(a, S.image[b - 1])
            checked += 1
            worst = _worse(worst, lhs.mid_distance(rhs))
            if not lhs.overlaps(rhs):
                failures.append((a, b))
    return MatrixVerdict("conjugation", not failures, checked, worst, tuple(failures))


def kubert_rows_check(T: TorsionMatrixT) -> MatrixVerdict:
    """For each prime p | n with n = p n' and every (a, b)::

        sum_{j=1..p} T[a][b + j n'] = p**-k T[p a][b]   (p does not divide a)
                                    = p T[a][b]         (p divides a)
    """
    n, k = T.n, T.k
    w = T.prec.working
    worst, failures, checked = fzero, [], 0
    for p, _ in factorize(n) if n > 1 else ():
        n1 = n // p
        scale = RealBall.exact(Fraction(1, p**k), w)
        for a in range(1, n + 1):
            for b in range(1, n + 1):
                lhs = ComplexBall.exact(0, w)
                for j in range(1, p + 1):
                    lhs = lhs + T.entry(a, b + j * n1)
                if a % p:
                    rhs = T.entry(p * a, b) * scale
                else:
                    rhs = T.entry(a, b) * p
                checked += 1
                worst = _worse(worst, lhs.mid_distance(rhs))
                if not lhs.overlaps(rhs):
                    failures.append((p, a, b))
    return MatrixVerdict("kubert_rows", not failures, checked, worst, tuple(failures))


# ---------------------------------------------------------------------------
# determinants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DeterminantVerdict:
    name: str
    status: str  # "certified" | "undecided"
    det: ComplexBall | None
    margin: object  # mpf lower bound on |det| when certified
    precision_bits: int
    history: tuple[int, ...] = ()
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "certified"


def certify_T_invertible(T: TorsionMatrixT, escalate: bool = True) -> DeterminantVerdict:
    """Ball determinant of T; rebuilt at 2x and 4x precision while it meets 0."""
    factors = ESCALATION_FACTORS if escalate else (1,)
    history = []
    res, cur = None, T
    for f in factors:
        if f != 1:
            cur = build_T(T.n, T.k, T.prec.scaled(f))
        history.append(cur.prec.bits)
        res = ball_det(cur.rows())
        if res.certified:
            return DeterminantVerdict(
                "T_invertible", "certified", res.value, res.margin, cur.prec.bits, tuple(history)
            )
    return DeterminantVerdict(
        "T_invertible", "undecided", res.value, res.margin, cur.prec.bits, tuple(history),
        {"failed_step": res.failed_step},
    )


def unit_submatrix_check(n: int, k: int, prec: int | Precision | None = None) -> DeterminantVerdict:
    """Two routes to ``|det (T[a][b])_{a, b units}|``.

    (i) a ball determinant of the submatrix; (ii) the product of ``|e_n(chi)|``
    over all characters, since the character basis diagonalises the submatrix
    up to the permutation chi-bar -> chi.  Disjoint answers raise
    InconsistencyError.
    """
    base = resolve_precision(prec)
    table = enumerate_characters(n)
    units = table.group.elements
    history = []
    for f in ESCALATION_FACTORS:
        p = base.scaled(f)
        w = p.working
        history.append(p.bits)
        T = build_T(n, k, p)
        res = ball_det(T.rows(units))
        prod = RealBall.exact(1, w)
        for chi in table:
            prod = prod * _e_n(chi, k, w).abs()
        if not res.certified:
            continue
        absdet = res.value.abs()
        if not absdet.overlaps(prod):
            raise InconsistencyError(
                f"unit submatrix determinant for n={n}, k={k} disagrees with the character product"
            )
        return DeterminantVerdict(
            "unit_submatrix", "certified", res.value, res.margin, p.bits, tuple(history),
            {"abs_det": absdet, "character_product": prod, "discrepancy": absdet.mid_distance(prod)},
        )
    return DeterminantVerdict("unit_submatrix", "undecided", None, fzero, p.bits, tuple(history))


# ---------------------------------------------------------------------------
# ranks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RankCertificate:
    part: str  # "re" | "im"
    rank: int
    upper_bound: int
    upper_bound_argument: str
    witness: RankWitness
    svd_rank: int  # uncertified sanity layer

    @property
    def certified(self) -> bool:
        return self.witness.certified and self.witness.rank == self.upper_bound

    @property
    def margin(self):
        if self.rank == 0:
            return None
        return self.witness.margin


_UPPER_TAG = {
    "re": "Re T = T(1+S)/2 from conj(T) = TS, so rank <= rank(1+S) = #fixed points + #2-cycles of S",
    "im": "Im T = T(1-S)/(2i) from conj(T) = TS, so rank <= rank(1-S) = #2-cycles of S",
}


def _svd_rank(matrix) -> int:
    if not matrix or not matrix[0]:
        return 0
    sv = midpoint_singular_values(matrix)
    return int((sv > SVD_THRESHOLD * max(1.0, float(sv[0]))).sum())


def _rank_part(T: TorsionMatrixT, part: str) -> RankCertificate:
    n = T.n
    sign = 1 if part == "re" else -1
    bound = rank_one_plus_minus_S(n, sign)
    m = T.real_part() if part == "re" else T.imag_part()
    idx = list(range(1, n + 1))
    witness = certify_rank(m, bound, idx, idx, full_search=n <= 12)
    return RankCertificate(part, bound if witness.certified else -1, bound, _UPPER_TAG[part], witness, _svd_rank(m))


def certified_ranks(T, k: int | None = None, prec: int | Precision | None = None) -> tuple[RankCertificate, RankCertificate]:
    """(Re-part, Im-part) certificates: structural upper bound met by a witness minor.

    Accepts a built TorsionMatrixT or ``(n, k, prec)``.
    """
    if not isinstance(T, TorsionMatrixT):
        T = build_T(T, k, prec)
    return _rank_part(T, "re"), _rank_part(T, "im")


# ---------------------------------------------------------------------------
# the induction step
# ---------------------------------------------------------------------------


def induction_step_check(n_prime: int, p: int, k: int, prec: int | Precision | None = None) -> DeterminantVerdict:
    """``(1 - p**(-k-1) E) T'`` is invertible.

    The structural half: E permutes its cycles and kills its transient, so
    ``det(1 - c E) = prod over cycles (1 - c**len)`` exactly, nonzero for
    ``0 < c < 1``.  The numeric half: the ball determinant of the product,
    cross-checked against that exact factor times ``det T'``.
    """
    E = shift_matrix(n_prime, p)
    claim = eigen_claim_E(E)
    c = Fraction(1, p ** (k + 1))
    if claim.spectral_radius_bound * c >= 1:
        raise AssertionError("structural bound does not separate 1 - cE from singular")
    exact_factor = Fraction(1)
    for cyc in claim.cycles:
        exact_factor *= 1 - c ** len(cyc)
    base = resolve_precision(prec)
    history = []
    for f in ESCALATION_FACTORS:
        pr = base.scaled(f)
        w = pr.working
        history.append(pr.bits)
        T1 = build_T(n_prime, k, pr)
        cb = RealBall.exact(c, w)
        m = [
            [T1.entry(a, b) - T1.entry(E.image[a - 1], b) * cb for b in range(1, n_prime + 1)]
            for a in range(1, n_prime + 1)
        ]
        res = ball_det(m)
        if not res.certified:
            continue
        det_t1 = ball_det(T1.rows())
        details = {"exact_factor": exact_factor, "cycles": claim.cycles, "transient": claim.transient}
        if det_t1.certified:
            predicted = det_t1.value * RealBall.exact(exact_factor, w)
            if not res.value.overlaps(predicted):
                raise InconsistencyError(f"det((1-cE)T') disagrees with det(1-cE) det(T') for n'={n_prime}, p={p}")
            details["predicted"] = predicted
        return DeterminantVerdict(
            "induction_step", "certified", res.value, res.margin, pr.bits, tuple(history), details
        )
    return DeterminantVerdict("induction_step", "undecided", None, fzero, pr.bits, tuple(history))


def remark_rows(n: int, k: int) -> list[int]:
    """The rows a (1-based, n standing for 0) named for the isomorphism: 0 < a <= (n-1)//2 for odd k, 0 <= a <= n//2 for even k."""
    if k % 2:
        return list(range(1, (n - 1) // 2 + 1))
    return [n] + list(range(1, n // 2 + 1))


def remark_rows_check(T: TorsionMatrixT) -> RankWitness:
    """Do the named rows of the parity-appropriate part have full row rank?  Informational only."""
    rows = sorted(set(remark_rows(T.n, T.k)))
    part = T.real_part() if T.k % 2 == 0 else T.imag_part()
    sub = [part[a - 1] for a in rows]
    cols = list(range(1, T.n + 1))
    if not rows:
        return RankWitness(0, (), (), None, True, "empty")
    return certify_rank(sub, len(rows), rows, cols, full_search=False)
