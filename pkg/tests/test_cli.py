import json
import subprocess
import sys

import pytest

from torsionrank import cli
from torsionrank.certificate import (
    EXIT_INCONSISTENT,
    EXIT_PASS,
    EXIT_UNDECIDED,
    SCHEMA_VERSION,
    exit_code,
    run_suite,
    run_verify,
)
from torsionrank.serialize import ball_from_json


def run_cli(*args, env=None):
    import os

    e = dict(os.environ)
    e.update(env or {})
    return subprocess.run(
        [sys.executable, "-m", "torsionrank", *args], capture_output=True, text=True, env=e, timeout=600
    )


@pytest.mark.parametrize("n,k,part,rank", [(2, 2, "re", 2), (3, 1, "im", 1), (12, 2, "re", 7)])
def test_verify_examples(n, k, part, rank):
    cert = run_verify(n, k, 128)
    assert cert["pass"] and exit_code(cert) == EXIT_PASS
    assert cert["rank_part"] == part and cert["certified_rank"] == rank == cert["expected_rank"]
    assert cert["schema_version"] == SCHEMA_VERSION


def test_certificate_contents():
    cert = run_verify(4, 1, 128)
    v = cert["verdicts"]
    assert all(x["status"] == "certified" for x in v.values())
    assert v["T_invertible"]["abs_det_lower_bound"] is not None
    chars = cert["characters"]
    assert [c["label"] for c in chars] == [[0], [1]]
    odd = chars[1]
    assert odd["aperiodic"] and odd["conductor"] == 4
    e = ball_from_json(odd["e_n"])
    assert abs(e.im.approx() - 1.8319311883544380) < 1e-15
    assert "wall_clock_seconds" not in cert
    assert "wall_clock_seconds" in run_verify(1, 1, 64, timing=True)


def test_pass_implies_positive_margins():
    cert = run_verify(6, 3, 128)
    assert cert["pass"]
    for c in cert["characters"]:
        assert float(c["nonzero_margin"]) > 0
    assert float(cert["verdicts"]["rank_im"]["witness_margin"]) > 0
    assert float(cert["verdicts"]["unit_submatrix"]["abs_det_lower_bound"]) > 0


def test_undecided_rank_gives_exit_2(monkeypatch):
    import torsionrank.torsion as mod
    from torsionrank.ballmatrix import RankWitness

    monkeypatch.setattr(mod, "certify_rank", lambda *a, **kw: RankWitness(1, (), (), None, False, "greedy"))
    cert = run_verify(3, 1, 128)
    assert not cert["pass"] and exit_code(cert) == EXIT_UNDECIDED
    assert any("rank_im" in r for r in cert["reasons"])


def test_inconsistency_gives_exit_3(monkeypatch):
    import torsionrank.certificate as mod

    def boom(*a, **kw):
        from torsionrank.balls import InconsistencyError

        raise InconsistencyError("routes disagree")

    monkeypatch.setattr(mod, "unit_submatrix_check", boom)
    cert = run_verify(3, 1, 128)
    assert exit_code(cert) == EXIT_INCONSISTENT and not cert["pass"]


def test_cli_verify_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        r = run_cli("verify", "--n", "6", "--k", "2", "--prec", "128", "--out", str(out))
        assert r.returncode == 0, r.stderr
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text(encoding="utf-8"))["pass"] is True


def test_cli_csv_and_env_precision(tmp_path):
    r = run_cli("verify", "--n", "3", "--k", "1", "--format", "csv", env={"TORSIONRANK_PREC": "96"})
    assert r.returncode == 0
    assert r.stdout.splitlines()[-1] == "3,1,pass,true"
    r = run_cli("verify", "--n", "2", "--k", "1", env={"TORSIONRANK_PREC": "96"})
    assert json.loads(r.stdout)["precision_bits"] == 96


def test_cli_rejects_bad_input():
    assert run_cli("verify", "--n", "0", "--k", "1").returncode != 0
    assert run_cli("verify", "--n", "2", "--k", "1", env={"TORSIONRANK_PREC": "lots"}).returncode != 0


def test_cli_table_and_chars(tmp_path, capsys):
    assert cli.main(["table", "--n", "3", "--k", "1"]) == 0
    out = capsys.readouterr().out
    assert "# complex" in out and "# re" in out and "# im" in out
    path = tmp_path / "t.json"
    assert cli.main(["table", "--n", "2", "--k", "2", "--format", "json", "--out", str(path)]) == 0
    assert len(json.loads(path.read_text())["entries"]) == 4
    assert cli.main(["chars", "--n", "5"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["modulus"] == 5 and len(d["characters"]) == 4


def test_cli_selfcheck_subset(capsys):
    assert cli.main(["selfcheck", "--only", "bookkeeping", "--only", "modular-structure"]) == 0
    out = capsys.readouterr().out
    assert "bookkeeping: pass" in out and "modular-structure: pass" in out


def test_suite_small_grids(capsys):
    rows, prop, code = run_suite(1, 1, 64, jobs=1, properties=False)
    assert code == 0 and len(rows) == 1 and rows[0].rank == 0
    rows, prop, code = run_suite(6, 2, 53, jobs=1, properties=False)
    # at 53 bits every row is either certified or honestly undecided
    for r in rows:
        assert r.code in (EXIT_PASS, EXIT_UNDECIDED)
        if r.code == EXIT_PASS:
            assert r.rank == r.expected
    assert cli.main(["suite", "--max-n", "3", "--max-k", "1", "--no-properties", "--jobs", "2"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].split()[:4] == ["n", "k", "part", "rank"]
