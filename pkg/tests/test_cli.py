import json
import math
import subprocess
import sys

import numpy as np
import pytest

from haltondisc import cli
from haltondisc.discrepancy import l2_exact
from haltondisc.io import pointset_from_manifest, read_points_csv
from haltondisc.pointsets import make_pointset


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(autouse=True)
def _restore_budgets(monkeypatch):
    # the CLI writes budgets into module globals
    from haltondisc import discrepancy, fourier

    for mod, name in ((discrepancy, "PAIR_BUDGET"), (discrepancy, "GRID_BUDGET"), (fourier, "FREQ_BUDGET")):
        monkeypatch.setattr(mod, name, getattr(mod, name))


@pytest.mark.parametrize(
    "variant,bases,n,rows",
    [("halton", "2,3", 4, 4), ("hammersley-sym", "2,3", 8, 15), ("hammersley-sym-dot", "2,3", 3, 12),
     ("hammersley", "2,3,5", 10, 10), ("generalized-halton", "2,3", 6, 6)],
)
def test_gen_rows(capsys, variant, bases, n, rows):
    code, out, _ = run(capsys, "gen", "--variant", variant, "--bases", bases, "--n", str(n))
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == rows + 1
    assert lines[0].startswith("x1,x2")


def test_gen_csv_roundtrip(tmp_path, capsys):
    path, man = tmp_path / "pts.csv", tmp_path / "pts.json"
    code, _, _ = run(capsys, "gen", "--variant", "halton", "--bases", "2,3,5", "--n", "100", "--q", "-7",
                     "-o", str(path), "--manifest", str(man))
    assert code == 0
    want = make_pointset("halton", (2, 3, 5), 100, -7).points
    assert np.array_equal(read_points_csv(path), want)
    regenerated = pointset_from_manifest(json.loads(man.read_text()))
    assert np.array_equal(regenerated.points, want)


def test_gen_json(capsys):
    code, out, _ = run(capsys, "gen", "--bases", "2", "--n", "3", "--format", "json")
    doc = json.loads(out)
    assert doc["result"]["points"] == [[0.0], [0.5], [0.25]]
    assert set(doc) == {"provenance", "result", "timing"}


def test_disc_exact_matches_library(capsys):
    code, out, _ = run(capsys, "disc", "--variant", "hammersley", "--bases", "2,3", "--n", "200", "--p", "2", "--exact")
    doc = json.loads(out)
    assert code == 0
    assert doc["result"]["raw"] == l2_exact(make_pointset("hammersley", (2, 3), 200)).raw
    assert doc["provenance"]["backend"] in ("cython", "python")
    assert "elapsed" not in doc["result"] and "engine_s" in doc["timing"]


def test_disc_input_file(tmp_path, capsys):
    path = tmp_path / "p.csv"
    run(capsys, "gen", "--bases", "2,3", "--n", "50", "-o", str(path))
    code, out, _ = run(capsys, "disc", "--input", str(path), "--format", "csv")
    header, row = out.strip().splitlines()
    rec = dict(zip(header.split(","), row.split(",")))
    assert code == 0 and float(rec["raw"]) == l2_exact(make_pointset("halton", (2, 3), 50)).raw


def test_disc_inf(capsys):
    code, out, _ = run(capsys, "disc", "--variant", "halton", "--bases", "2,3", "--n", "16", "--p", "inf")
    res = json.loads(out)["result"]
    assert code == 0 and res["p"] == "inf" and 0 < res["normalized"] <= 1


def test_disc_mc_deterministic(capsys):
    args = ("disc", "--variant", "halton", "--bases", "2,3", "--n", "64", "--p", "1", "--samples", "100000", "--seed", "7")
    a = json.loads(run(capsys, *args)[1])
    b = json.loads(run(capsys, *args)[1])
    assert a["result"] == b["result"] and a["result"]["method"] == "monte-carlo"


def test_validation_errors(capsys):
    assert run(capsys, "gen", "--bases", "2,4", "--n", "3")[0] == 2
    assert run(capsys, "disc", "--variant", "halton", "--bases", "2,3", "--n", "8", "--p", "3", "--exact")[0] == 2
    assert run(capsys, "clt", "--variant", "halton", "--bases", "2,3", "--n", "8")[0] == 2
    assert run(capsys, "disc", "--bases", "2,3")[0] == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["gen", "--bases", "x", "--n", "3"])
    assert exc.value.code == 2


def test_budget_exit(capsys):
    code, _, err = run(capsys, "disc", "--variant", "halton", "--bases", "2,3", "--n", "100", "--pair-budget", "50")
    assert code == 3 and "budget" in err
    code, _, _ = run(capsys, "disc", "--variant", "halton", "--bases", "2,3", "--n", "100", "--p", "inf", "--grid-budget", "100")
    assert code == 3


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest", "--cases", "20", "--block-cases", "5")
    doc = json.loads(out)
    assert code == 0 and doc["result"]["passed"]
    assert doc["result"]["crt_roundtrip"]["failures"] == 0
    code, out, _ = run(capsys, "selftest", "--cases", "5", "--block-cases", "2", "--tolerance", "-1")
    assert code == 4 and not json.loads(out)["result"]["passed"]


def test_clt_json(capsys):
    code, out, _ = run(capsys, "clt", "--variant", "hammersley-sym", "--bases", "2,3", "--n", "32", "--samples", "300", "--seed", "2")
    res = json.loads(out)["result"]
    assert code == 0 and len(res["samples"]) == 300
    assert [r["h"] for r in res["moments"]["rows"]] == [1, 2, 3, 4, 5, 6]
    assert 0 <= res["ks"] <= 1


def test_scaling_csv(capsys):
    code, out, _ = run(capsys, "scaling", "--bases", "2,3", "--nlist", "16..128")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0].startswith("N,n,raw") and len(lines) == 1 + 4


def test_ratio_csv(capsys):
    code, out, _ = run(capsys, "ratio", "--bases", "2,3", "--p", "4", "--nlist", "16", "--samples", "2000")
    header, row = out.strip().splitlines()
    rec = dict(zip(header.split(","), row.split(",")))
    assert code == 0 and float(rec["target"]) == pytest.approx(3**0.25)


def test_replay(tmp_path, capsys):
    path = tmp_path / "run.json"
    run(capsys, "clt", "--bases", "2,3", "--n", "64", "--samples", "500", "--seed", "4", "-o", str(path))
    code, out, _ = run(capsys, "replay", str(path))
    first = json.loads(path.read_text())
    again = json.loads(out)
    assert code == 0 and first["result"] == again["result"]
    assert first["provenance"]["config"] == again["provenance"]["config"]


def test_replay_missing_file(capsys):
    assert run(capsys, "replay", "/nonexistent/file.json")[0] == 2


def test_parse_nlist():
    assert cli.parse_nlist("16..128") == [16, 32, 64, 128]
    assert cli.parse_nlist("5,7") == [5, 7]
    assert cli.parse_nlist("3..8") == [4, 8]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "haltondisc", "gen", "--bases", "2", "--n", "2"],
                         capture_output=True, text=True, check=True)
    assert res.stdout.splitlines() == ["x1", "0", "0.5"]
