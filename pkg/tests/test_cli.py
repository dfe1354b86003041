import csv
import io
import json

import pytest

from conftest import FIXTURES
from symdyn import __version__
from symdyn.cli import main
from symdyn.reports import SCHEMA

XOR_TABLE = '{"000": "0", "001": "1", "010": "0", "011": "1", "100": "1", "101": "0", "110": "1", "111": "0"}'


def run(capsys, *args):
    with pytest.raises(SystemExit) as e:
        main([str(a) for a in args])
    out, err = capsys.readouterr()
    return e.value.code, out, err


def report(capsys, *args):
    code, out, _ = run(capsys, *args)
    return code, json.loads(out)


def fx(name):
    return FIXTURES / f"{name}.yaml"


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and __version__ in out


def test_enumerate_json(capsys):
    code, rep = report(capsys, "enumerate", "--spec", fx("golden"), "--n-max", 4, "--words")
    assert code == 0 and rep["schema"] == SCHEMA and rep["status"] == "holds"
    assert [r["count"] for r in rep["tables"]["counts"]] == [1, 2, 3, 5, 8]
    assert rep["provenance"]["tool"] == "symdyn"
    assert rep["provenance"]["tool_version"] == __version__
    assert len(rep["provenance"]["shift_fingerprint"]) == 64
    assert "time" not in json.dumps(rep)


def test_entropy_csv_columns(capsys):
    code, out, _ = run(capsys, "entropy", "--spec", fx("golden"), "--n-max", 10, "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert list(rows[0]) == ["n", "count", "estimate", "bound", "pass"]
    assert rows[-1]["count"] == "144"


def test_out_file(capsys, tmp_path):
    dest = tmp_path / "r.json"
    code, out, _ = run(capsys, "entropy", "--spec", fx("full2"), "--n-max", 3, "--out", dest)
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["command"] == "entropy"


class TestVerdictExitCodes:
    def test_las_holds(self, capsys):
        code, rep = report(capsys, "check-las", "--spec", fx("beta_golden"), "--g", 1, "--horizon", "6,6")
        assert code == 0 and rep["verdicts"][0]["status"] == "holds"

    def test_specification_fails_with_witness(self, capsys):
        code, rep = report(capsys, "check-spec", "--spec", fx("at_most_one_one"), "--tau", 1, "--horizon", "3,3")
        assert code == 1 and rep["verdicts"][0]["witness"] == {"v": "1", "w": "1"}

    def test_irreducible_fails(self, capsys):
        code, rep = report(capsys, "irreducible", "--spec", fx("at_most_one_one"), "--horizon", 3, "--gap-bound", 4)
        assert code == 1
        assert rep["verdicts"][0]["witness"]["u"] == "1" and rep["verdicts"][0]["witness"]["v"] == "1"

    def test_ras_fails_for_zero_budget(self, capsys):
        code, _ = report(capsys, "check-ras", "--spec", fx("golden"), "--g", 0, "--horizon", "4,4")
        assert code == 1

    def test_as(self, capsys):
        code, rep = report(capsys, "check-as", "--spec", fx("golden"), "--g", 1, "--horizon", "5,5,5")
        assert code == 0 and rep["verdicts"][0]["horizon"] == [5, 5, 5]

    def test_as_horizon_follows_segments(self, capsys):
        code, rep = report(capsys, "check-as", "--spec", fx("golden"), "--g", 1, "--horizon", 4, "--k", 4)
        assert code == 0 and rep["verdicts"][0]["horizon"] == [4, 4, 4, 4]

    def test_inconclusive_on_unknowns(self, capsys, tmp_path):
        doc = tmp_path / "c.yaml"
        doc.write_text('family: coded\nalphabet: "01"\ngenerators: ["0", "11"]\ncomplete: false\nhorizon: 2\n')
        code, rep = report(capsys, "enumerate", "--spec", doc, "--n-max", 4)
        assert code == 2 and rep["approximate"] and rep["status"] == "inconclusive"


class TestErrors:
    def test_broken_document(self, capsys):
        code, out, err = run(capsys, "entropy", "--spec", fx("broken_family"), "--n-max", 3)
        assert code == 3 and out == ""
        assert "broken_family.yaml:3:" in err

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "entropy", "--spec", FIXTURES / "nope.yaml", "--n-max", 3)
        assert code == 3 and "nope.yaml" in err

    def test_missing_option(self, capsys):
        code, _, err = run(capsys, "min-mistakes", "--spec", fx("golden"), "--w2", "1")
        assert code == 3 and "--w1" in err

    @pytest.mark.parametrize("horizon", ["x", "4,", "0,3", "1,2,3", ""])
    def test_bad_horizon(self, capsys, horizon):
        code, _, _ = run(capsys, "check-las", "--spec", fx("golden"), "--g", 1, "--horizon", horizon)
        assert code == 3

    def test_mme_needs_sft(self, capsys):
        code, _, err = run(capsys, "mme", "--spec", fx("at_most_one_one"))
        assert code == 3 and "SFT" in err

    def test_budget_exceeded(self, capsys, tmp_path):
        doc = tmp_path / "f.yaml"
        doc.write_text(f"family: factor\nbase: {{family: full, alphabet: 2}}\nradius: 1\nbudget: 2\ntable: {XOR_TABLE}\n")
        code, _, err = run(capsys, "enumerate", "--spec", doc, "--n-max", 6)
        assert code == 4 and "budget" in err


class TestCommands:
    def test_min_mistakes(self, capsys):
        code, rep = report(capsys, "min-mistakes", "--spec", fx("golden"), "--w1", "11", "--w2", "1")
        assert code == 0 and rep["results"]["mistakes"] == 1

    def test_glue(self, capsys):
        code, rep = report(capsys, "glue", "--spec", fx("golden"), "--horizon", 6, "--closure-samples", 200)
        assert code == 0
        assert {v["property"] for v in rep["verdicts"]} >= {"gluing", "I", "IIIa", "IIIb"}

    def test_decompose(self, capsys):
        code, rep = report(capsys, "decompose", "--spec", fx("golden"), "--horizon", 6, "--n-max", 10)
        assert code == 0 and rep["results"]["bbound_ok"]
        assert [r["L"] for r in rep["tables"]["obstructions"]][-1] == 144

    def test_decompose_one_word(self, capsys):
        code, rep = report(capsys, "decompose", "--spec", fx("golden"), "--word", "0101001")
        d = rep["results"]["decomposition"]
        assert code == 0 and (d["kind"], d["prefix"], d["core"], d["suffix"]) == ("CpGCs", "0", "10100", "1")

    def test_measure_center(self, capsys):
        code, rep = report(capsys, "measure-center", "--spec", fx("at_most_one_one"), "--g", 1, "--horizon", 12, "--n-max", 5)
        assert code == 0
        assert [r["word"] for r in rep["tables"]["kept"]] == ["0" * n for n in range(1, 6)]

    def test_periodic(self, capsys):
        code, rep = report(capsys, "periodic", "--spec", fx("golden"), "--n-max", 6)
        assert code == 0
        assert [r["points"] for r in rep["tables"]["periodic"]][:5] == [1, 3, 4, 7, 11]

    def test_mme(self, capsys):
        code, rep = report(capsys, "mme", "--spec", fx("golden"), "--depth", 1)
        mu = {r["word"]: r["mu"] for r in rep["tables"]["cylinders"]}
        assert code == 0 and mu["0"] == pytest.approx(0.7236, abs=5e-5)

    def test_audit_bounds(self, capsys):
        code, rep = report(capsys, "audit-bounds", "--spec", fx("golden"), "--m", 1, "--n-max", 30, "--word", "0")
        assert code == 0 and len(rep["tables"]["bounds"]) == 30
        assert all(r["pass"] for r in rep["tables"]["bounds"])

    def test_counterexample_audit(self, capsys):
        code, rep = report(capsys, "counterexample", "audit", "--N", 4, "--n-max", 8)
        assert code == 0
        assert any("2^17 + 4" in n for n in rep["notes"])
        assert [r["t_plus"] for r in rep["tables"]["rows"]] == [1, 4, 16, 4, 16, 64, 256, 1024]

    def test_counterexample_ras(self, capsys):
        code, rep = report(capsys, "counterexample", "ras", "--N", 3, "--horizon", "4,4")
        assert code == 0 and rep["verdicts"][0]["property"] == "RAS"

    def test_counterexample_from_fixture(self, capsys):
        code, rep = report(capsys, "counterexample", "build", "--spec", fx("counterexample_n4"), "--n-max", 8)
        assert code == 0 and rep["parameters"]["shift"]["N"] == 4


@pytest.mark.parametrize(
    "args",
    [
        ("enumerate", "--spec", fx("ternary_sft"), "--n-max", 6, "--words"),
        ("check-las", "--spec", fx("bounded_density_sqrt"), "--g", "sqrt", "--horizon", "5,5"),
        ("glue", "--spec", fx("golden"), "--horizon", 6, "--closure-samples", 300, "--seed", 3),
    ],
    ids=["enumerate", "las", "glue"],
)
def test_reports_are_deterministic(capsys, args):
    outs = [run(capsys, *args, "--threads", t)[1] for t in (1, 1, 4)]
    assert outs[0] == outs[1] == outs[2]
