import csv
import io
import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from qcalc.cli import main
from qcalc.errors import ConstraintViolated, UnknownIdentity
from qcalc.harness import (FAIL, PASS, Backend, IdentityCase, Manifest, all_identities,
                           get_identity, verify)
from qcalc.harness.sweep import CSV_FIELDS, reports_to_csv, sweep

SAAL = {"q": F(9, 164), "a": F(-1, 5), "b": F(7, 9), "x": F(2, 9), "y": F(-18, 35),
        "c": F(-1, 4), "d": F(28, 45), "t": F(1, 98)}


def test_registry_matches_manifest():
    assert sorted(i.id for i in all_identities()) == sorted(Manifest().ids)
    for ident in all_identities():
        assert ident.anchors, ident.id
        assert ident.backends, ident.id


def test_unknown_identity():
    with pytest.raises(UnknownIdentity):
        get_identity("no-such-identity")


def test_saalschutz_binding_passes():
    assert verify(IdentityCase("genfun-saalschutz", SAAL)).outcome == PASS


def test_violated_equality_is_rejected():
    bad = dict(SAAL, d=SAAL["d"] + F(1, 100))
    with pytest.raises(ConstraintViolated):
        verify(IdentityCase("genfun-saalschutz", bad))


def test_perturbation_is_detected_and_reproducible():
    bad = dict(SAAL, d=SAAL["d"] + F(1, 100))
    case = IdentityCase("genfun-saalschutz", bad, check_constraints=False)
    first, second = verify(case), verify(case)
    assert first.outcome == FAIL
    assert first.to_dict(volatile=False) == second.to_dict(volatile=False)


@pytest.mark.parametrize("iid", ["genfun-basic", "genfun-shifted", "genfun-saalschutz"])
def test_exact_and_numeric_agree(iid):
    for r in sweep(iid, 2, 11, backend="numeric", m=1):
        binding = {k: v for k, v in r.case.binding.items() if k != "t"}
        exact = verify(IdentityCase(iid, binding, backend=Backend.EXACT_FPS, m=1, order=8))
        assert r.outcome == PASS and exact.outcome == PASS


def test_sweep_is_deterministic_and_matches_verify():
    a = sweep("pde-phi", 3, 5, n=4)
    b = sweep("pde-phi", 3, 5, n=4)
    assert [r.to_dict(False) for r in a] == [r.to_dict(False) for r in b]
    single = sweep("pde-phi", 1, 5, n=4)[0]
    assert single.to_dict(False) == a[0].to_dict(False)
    again = verify(single.case)
    assert again.metric == single.metric and again.outcome == single.outcome


def test_pde_phi_sweep():
    reports = sweep("pde-phi", 25, 2024, n=6)
    assert all(r.outcome == PASS for r in reports)


def test_report_fields():
    d = sweep("pde-phi", 1, 1, n=2)[0].to_dict()
    for key in ("schema_version", "identity_id", "anchors", "binding", "settings", "backend",
                "outcome", "metric", "seed", "trial", "version", "timestamp", "wall_time_s"):
        assert key in d


def test_csv_summary():
    rows = list(csv.DictReader(io.StringIO(reports_to_csv(sweep("pde-phi", 2, 3, n=3)))))
    assert len(rows) == 2 and tuple(rows[0]) == CSV_FIELDS
    assert [r["outcome"] for r in rows] == [PASS, PASS]


# ---------------------------------------------------------------------------
# command line


def test_cli_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    for iid in Manifest().ids:
        assert iid in out


def test_cli_run_pass(capsys):
    code = main(["run", "--id", "genfun-basic", "--backend", "fps", "--order", "6",
                 "--param", "q=3/10", "--param", "a=1/4", "--param", "b=1/6",
                 "--param", "x=2/5", "--param", "y=1/3"])
    assert code == 0
    assert json.loads(capsys.readouterr().out)["outcome"] == PASS


def test_cli_run_derives_missing_parameter(capsys):
    args = ["run", "--id", "genfun-saalschutz", "--backend", "numeric"]
    for name, v in SAAL.items():
        if name != "d":
            args += ["--param", f"{name}={v}"]
    assert main(args) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["binding"]["d"] == "28/45"


def test_cli_usage_errors(capsys):
    assert main(["run", "--id", "nope", "--param", "q=1/2"]) == 2
    assert main(["run", "--id", "pde-phi", "--param", "q=abc"]) == 2
    assert main(["frobnicate"]) == 2
    bad = ["run", "--id", "genfun-saalschutz", "--backend", "numeric"] + [
        a for n, v in dict(SAAL, d=F(1, 2)).items() for a in ("--param", f"{n}={v}")]
    assert main(bad) == 2


def test_cli_table(capsys):
    assert main(["table", "--poly", "rs", "--n", "2", "--params", "q=1/2"]) == 0
    rows = [l.split() for l in capsys.readouterr().out.splitlines() if not l.startswith("#")]
    # Rogers-Szego h_2: x^2 + (1 + q) x y + y^2
    assert ["2", "1", "3/2"] in rows and ["2", "0", "1"] in rows and ["2", "2", "1"] in rows


def test_cli_sweep_files(tmp_path):
    out, table = tmp_path / "r.json", tmp_path / "r.csv"
    code = subprocess.run([sys.executable, "-m", "qcalc.cli", "sweep", "--id", "pde-phi",
                           "--n", "3", "--trials", "3", "--seed", "9", "--out", str(out),
                           "--csv", str(table)]).returncode
    assert code == 0
    assert len(json.loads(out.read_text())) == 3
    assert len(table.read_text().strip().splitlines()) == 4
