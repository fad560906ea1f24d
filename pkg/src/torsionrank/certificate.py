"""The verification pipeline for one (n, k) and the grid runner."""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from mpmath.libmp import fzero, mpf_cmp

from . import __version__
from .balls import InconsistencyError, PrecisionError, Precision, resolve_precision
from .bookkeeping import consistency_check, rank_book
from .characters import _char_sum, char_sum_matrix_rank, enumerate_characters, triangle_check
from .lfunctions import dirichlet_L, factorization_check, nonzero_certify, recursion_checks
from .modular import factorize
from .serialize import ball_to_json, mpf_to_json
from .torsion import (
    build_T,
    certified_ranks,
    certify_T_invertible,
    conjugation_relation,
    induction_step_check,
    kubert_rows_check,
    remark_rows_check,
    unit_submatrix_check,
)

__all__ = [
    "SCHEMA_VERSION",
    "EXIT_PASS",
    "EXIT_UNDECIDED",
    "EXIT_INCONSISTENT",
    "run_verify",
    "certificate_json",
    "exit_code",
    "SuiteRow",
    "run_suite",
]

SCHEMA_VERSION = "1.0"
EXIT_PASS = 0
EXIT_UNDECIDED = 2
EXIT_INCONSISTENT = 3

CERTIFIED, UNDECIDED, INCONSISTENT = "certified", "undecided", "inconsistent"


def _num(x):
    return None if x is None else mpf_to_json(x)


def _identity_status(ok: bool) -> str:
    # two independent enclosures of the same number that fail to overlap is a bug
    return CERTIFIED if ok else INCONSISTENT


def _character_records(n: int, k: int, prec: Precision, verdicts: dict) -> list[dict]:
    w = prec.working
    records = []
    fact_ok, tri_ok, rec_ok, nz_ok = True, True, True, True
    tri_undecided = False
    worst_fact = fzero
    for chi in enumerate_characters(n):
        ev = nonzero_certify(chi, k, prec)
        nz_ok &= ev.status == CERTIFIED
        rec = {
            "label": list(chi.label),
            "order": chi.order,
            "conductor": chi.conductor,
            "aperiodic": chi.aperiodic,
            "e_n": ball_to_json(ev.value),
            "e_n_status": ev.status,
            "nonzero_margin": _num(ev.margin),
            "e_n_precision_bits": ev.precision_bits,
            "escalation_history": list(ev.history),
            "L_value": ball_to_json(dirichlet_L(chi, k + 1, prec).value),
            "c1": ball_to_json(_char_sum(1, chi, w)),
        }
        if chi.aperiodic:
            fv = factorization_check(chi, k, prec)
            fact_ok &= fv.passed
            if mpf_cmp(fv.discrepancy, worst_fact) > 0:
                worst_fact = fv.discrepancy
            rec["factorization"] = {"passed": fv.passed, "discrepancy": _num(fv.discrepancy)}
            try:
                tv = triangle_check(chi, prec)
                tri_ok &= tv.passed
                rec["triangle"] = {"passed": tv.passed, "c1_margin": _num(tv.margin)}
            except PrecisionError as exc:
                tri_undecided = True
                rec["triangle"] = {"passed": None, "reason": str(exc)}
        recs = []
        for rv in recursion_checks(chi, k, prec):
            rec_ok &= rv.passed
            recs.append(
                {
                    "case": rv.name,
                    "p": rv.details["p"],
                    "n_prime": rv.details["n_prime"],
                    "passed": rv.passed,
                    "discrepancy": _num(rv.discrepancy),
                }
            )
        rec["recursion"] = recs
        records.append(rec)
    verdicts["e_n_nonzero"] = {"status": CERTIFIED if nz_ok else UNDECIDED}
    verdicts["factorization"] = {"status": _identity_status(fact_ok), "worst_discrepancy": _num(worst_fact)}
    tri_status = INCONSISTENT if not tri_ok else UNDECIDED if tri_undecided else CERTIFIED
    verdicts["triangle"] = {"status": tri_status}
    verdicts["recursion"] = {"status": _identity_status(rec_ok)}
    return records


def _rank_record(rc) -> dict:
    w = rc.witness
    return {
        "status": CERTIFIED if rc.certified else UNDECIDED,
        "rank": rc.rank,
        "upper_bound": rc.upper_bound,
        "upper_bound_argument": rc.upper_bound_argument,
        "witness_rows": list(w.rows),
        "witness_cols": list(w.cols),
        "witness_method": w.method,
        "witness_det": None if w.det is None else ball_to_json(w.det),
        "witness_margin": None if rc.rank == 0 else _num(rc.margin),
        "midpoint_svd_rank": rc.svd_rank,
    }


def _det_record(dv) -> dict:
    out = {
        "status": dv.status,
        "det": None if dv.det is None else ball_to_json(dv.det),
        "abs_det_lower_bound": _num(dv.margin) if dv.passed else None,
        "precision_bits": dv.precision_bits,
        "escalation_history": list(dv.history),
    }
    if "discrepancy" in dv.details:
        out["route_discrepancy"] = _num(dv.details["discrepancy"])
    return out


def run_verify(n: int, k: int, prec: int | Precision | None = None, timing: bool = False) -> dict:
    """Full pipeline for one (n, k); the returned dict is the certificate.

    Deterministic for fixed inputs unless ``timing`` adds wall-clock fields.
    """
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    prec = resolve_precision(prec)
    t0 = time.perf_counter()
    book = rank_book(n, k)
    part = "re" if k % 2 == 0 else "im"
    verdicts: dict = {}
    reasons: list[str] = []
    cert = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "n": n,
        "k": k,
        "precision_bits": prec.bits,
        "guard_bits": prec.guard,
        "index_convention": "a, b in 1..n (n stands for 0); T[a][b] = Li_{k+1}(zeta_n^(a*b)); "
        "characters labelled by exponents on the listed generators",
        "generators": list(enumerate_characters(n).generators),
        "expected_rank": book.l_kn,
        "rank_part": part,
        "bookkeeping": {"l_kn": book.l_kn, "r": book.r, "c": book.c, "k_theory_rank": book.k_rank},
    }
    try:
        consistency_check(n, k)
        verdicts["bookkeeping"] = {"status": CERTIFIED}
        T = build_T(n, k, prec)
        cv = conjugation_relation(T)
        verdicts["conjugation"] = {
            "status": _identity_status(cv.passed),
            "checked": cv.checked,
            "worst_discrepancy": _num(cv.worst_discrepancy),
        }
        kv = kubert_rows_check(T)
        verdicts["kubert_rows"] = {
            "status": _identity_status(kv.passed),
            "checked": kv.checked,
            "worst_discrepancy": _num(kv.worst_discrepancy),
        }
        cert["characters"] = _character_records(n, k, prec, verdicts)
        cw = char_sum_matrix_rank(n, prec)
        verdicts["char_sum_rank"] = {
            "status": CERTIFIED if cw.certified else UNDECIDED,
            "rank": cw.rank,
            "rows": list(cw.rows),
            "margin": _num(cw.margin) if cw.certified else None,
        }
        tv = certify_T_invertible(T)
        verdicts["T_invertible"] = _det_record(tv)
        verdicts["unit_submatrix"] = _det_record(unit_submatrix_check(n, k, prec))
        steps = []
        for p, _ in factorize(n) if n > 1 else ():
            sv = induction_step_check(n // p, p, k, prec)
            steps.append({"p": p, "n_prime": n // p, **_det_record(sv)})
        verdicts["induction_steps"] = {
            "status": CERTIFIED if all(s["status"] == CERTIFIED for s in steps) else UNDECIDED,
            "steps": steps,
        }
        re_cert, im_cert = certified_ranks(T)
        verdicts["rank_re"] = _rank_record(re_cert)
        verdicts["rank_im"] = _rank_record(im_cert)
        rw = remark_rows_check(T)
        # optional: not part of the pass flag
        cert["remark_index_set"] = {"rows": list(rw.rows), "full_row_rank_certified": rw.certified}
        target = re_cert if part == "re" else im_cert
        cert["certified_rank"] = target.rank if target.certified else None
        if target.certified and target.rank != book.l_kn:
            verdicts["rank_matches_expected"] = {"status": INCONSISTENT}
        else:
            verdicts["rank_matches_expected"] = {"status": CERTIFIED if target.certified else UNDECIDED}
        if re_cert.certified and im_cert.certified and re_cert.rank + im_cert.rank != n:
            verdicts["rank_sum"] = {"status": INCONSISTENT}
        else:
            verdicts["rank_sum"] = {"status": CERTIFIED if re_cert.certified and im_cert.certified else UNDECIDED}
    except InconsistencyError as exc:
        verdicts["internal"] = {"status": INCONSISTENT, "reason": str(exc)}

    for name, v in verdicts.items():
        if v["status"] != CERTIFIED:
            reasons.append(f"{name}: {v['status']}")
    escalations = []
    for name in ("T_invertible", "unit_submatrix"):
        if name in verdicts and len(verdicts[name]["escalation_history"]) > 1:
            escalations.append({"verdict": name, "bits": verdicts[name]["escalation_history"]})
    for rec in cert.get("characters", []):
        if len(rec["escalation_history"]) > 1:
            escalations.append({"verdict": f"e_n{tuple(rec['label'])}", "bits": rec["escalation_history"]})
    cert["verdicts"] = verdicts
    cert["escalations"] = escalations
    cert["pass"] = not reasons
    cert["reasons"] = reasons
    if timing:
        cert["wall_clock_seconds"] = round(time.perf_counter() - t0, 3)
    return cert


def certificate_json(cert: dict) -> str:
    return json.dumps(cert, indent=2, ensure_ascii=False) + "\n"


def exit_code(cert: dict) -> int:
    statuses = {v["status"] for v in cert["verdicts"].values()}
    if INCONSISTENT in statuses:
        return EXIT_INCONSISTENT
    if not cert["pass"]:
        return EXIT_UNDECIDED
    return EXIT_PASS


# ---------------------------------------------------------------------------
# the grid
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SuiteRow:
    n: int
    k: int
    part: str
    expected: int
    rank: int | None
    margin: float | None
    seconds: float
    code: int


def _suite_job(args) -> tuple[SuiteRow, dict]:
    n, k, bits = args
    t0 = time.perf_counter()
    cert = run_verify(n, k, bits)
    dt = time.perf_counter() - t0
    part = cert["rank_part"]
    rv = cert["verdicts"].get(f"rank_{part}", {})
    m = rv.get("witness_margin")
    margin = None if m is None else float(m)
    return SuiteRow(n, k, part, cert["expected_rank"], cert.get("certified_rank"), margin, dt, exit_code(cert)), cert


def run_suite(
    max_n: int,
    max_k: int,
    prec: int | Precision | None = None,
    jobs: int | None = None,
    properties: bool = True,
):
    """run_verify over the grid (sorted by (n, k)) plus the property suites.

    Returns ``(rows, property_results, exit_code)``.
    """
    if max_n < 1 or max_k < 1:
        raise ValueError("bounds must be at least 1")
    bits = resolve_precision(prec).bits
    grid = [(n, k, bits) for n in range(1, max_n + 1) for k in range(1, max_k + 1)]
    jobs = jobs or os.cpu_count() or 1
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_suite_job, grid))
    else:
        results = [_suite_job(g) for g in grid]
    rows = [r for r, _ in results]
    prop = []
    if properties:
        from .properties import run_selfcheck

        prop = run_selfcheck(quick=True)
    code = max([r.code for r in rows] + [EXIT_PASS if p.passed else EXIT_INCONSISTENT for p in prop])
    return rows, prop, code


def format_suite(rows, prop) -> str:
    lines = [f"{'n':>3} {'k':>2} {'part':>4} {'rank':>4} {'exp':>4} {'margin':>12} {'time_s':>7} status"]
    for r in rows:
        rank = "-" if r.rank is None else str(r.rank)
        margin = "-" if r.margin is None else f"{r.margin:.3e}"
        status = {EXIT_PASS: "pass", EXIT_UNDECIDED: "undecided", EXIT_INCONSISTENT: "INCONSISTENT"}[r.code]
        lines.append(f"{r.n:>3} {r.k:>2} {r.part:>4} {rank:>4} {r.expected:>4} {margin:>12} {r.seconds:>7.2f} {status}")
    for p in prop:
        lines.append(f"property {p.name}: {'pass' if p.passed else 'FAIL'} ({p.checked} checks)")
    return "\n".join(lines) + "\n"
