import json
import subprocess
import sys

import pytest

from submodcodes.cli import main
from submodcodes.codes import Code


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_enumerate_ball(capsys):
    code, out, err = run(capsys, "enumerate", "--ring", "z", "2", "--r", "2", "--d", "3", "--what", "ball")
    assert code == 0
    lines = [json.loads(x) for x in out.splitlines()]
    summary = lines[-1]
    assert summary["count"] == 113 == len(lines) - 1
    assert summary["polynomial"] == "3X^4+4X^3+6X^2+3X+3"
    assert "config" in err


def test_enumerate_grassmannian(capsys):
    code, out, _ = run(capsys, "enumerate", "--r", "2", "--d", "3", "--what", "grassmannian", "--n", "1",
                       "--count-only")
    assert code == 0 and json.loads(out)["count"] == 28


@pytest.mark.parametrize("n", ["3", "0"])
def test_enumerate_invalid_rank(capsys, n):
    code, _, err = run(capsys, "enumerate", "--r", "2", "--d", "3", "--what", "grassmannian", "--n", n)
    assert code == 2 and "error" in err


def test_enumerate_poly_sphere(capsys):
    code, out, _ = run(capsys, "enumerate", "--ring", "poly", "3", "1", "--r", "2", "--d", "2",
                       "--what", "sphere", "--ell", "1", "--count-only")
    assert code == 0 and json.loads(out)["count"] == 4


def test_budget_exit_code(capsys, monkeypatch):
    code, _, err = run(capsys, "enumerate", "--r", "2", "--d", "3", "--budget", "10")
    assert code == 4 and "budget" in err
    monkeypatch.setenv("SUBMODCODES_BUDGET", "10")
    assert run(capsys, "enumerate", "--r", "2", "--d", "3", "--what", "submodules")[0] == 4


def test_bad_ring(capsys):
    assert run(capsys, "enumerate", "--ring", "z", "4", "--r", "2")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["enumerate", "--ring", "poly", "2"])
    assert exc.value.code == 2


def test_code_and_dist(capsys, tmp_path):
    path = tmp_path / "code.json"
    code, _, err = run(capsys, "code", "sperner", "--ring", "z", "2", "--r", "5", "--d", "2", "--alpha", "3",
                       "--out", str(path))
    assert code == 0 and "cardinality: 12" in err
    obj = json.loads(path.read_text())
    assert obj["cardinality"] == 12 and obj["min_distance"] >= 6
    assert Code.from_json(obj).to_json() == obj
    code, out, err = run(capsys, "dist", "--in", str(path))
    rows = [list(map(int, line.split(","))) for line in out.splitlines()]
    assert len(rows) == 12 and all(len(r) == 12 for r in rows)
    assert min(x for r in rows for x in r if x) == 6
    assert "min_distance: 6" in err


@pytest.mark.parametrize("args,size", [
    (["star", "--d", "3", "--r", "2"], 4),
    (["perm", "--d", "4", "--eps", "1,1,0,0"], 6),
    (["free", "--d", "4", "--n", "2"], 6),
])
def test_code_constructions(capsys, args, size):
    code, out, _ = run(capsys, "code", *args)
    assert code == 0 and json.loads(out)["cardinality"] == size


def test_code_missing_parameter(capsys):
    assert run(capsys, "code", "sperner", "--r", "2")[0] == 2
    assert run(capsys, "code", "perm", "--d", "3", "--eps", "1,0")[0] == 2


def test_dist_missing_file(capsys, tmp_path):
    assert run(capsys, "dist", "--in", str(tmp_path / "nope.json"))[0] == 2


def test_count(capsys):
    code, out, _ = run(capsys, "count", "ball", "--d", "4", "--r", "1")
    obj = json.loads(out)
    assert code == 0 and obj["leading_term"] == [1, 4] and obj["status"] == "PASS"
    code, out, _ = run(capsys, "count", "ball", "--d", "3", "--r", "2", "--q", "2")
    assert json.loads(out)["value"] == 113
    code, out, _ = run(capsys, "count", "grassmannian", "--d", "3", "--r", "2", "--q", "2", "--n", "2")
    assert json.loads(out)["value"] == 28
    assert run(capsys, "count", "submodules", "--d", "2")[0] == 2


def test_search_card_and_dist(capsys):
    code, out, _ = run(capsys, "search", "card", "--r", "2", "--d", "2", "--psi", "2")
    obj = json.loads(out)
    assert code == 0 and obj["value"] == 6 and obj["status"] == "PASS"
    code, out, _ = run(capsys, "search", "card", "--r", "2", "--d", "2", "--psi", "3")
    obj = json.loads(out)
    assert obj["value"] == 3 and "expected" not in obj
    code, out, _ = run(capsys, "search", "dist", "--r", "2", "--d", "3", "--chi", "4")
    assert json.loads(out)["value"] == 4


def test_search_certify(capsys, tmp_path):
    wdir = tmp_path / "w"
    code, out, _ = run(capsys, "search", "certify", "--grid", "small", "--witness-dir", str(wdir))
    report = json.loads(out)
    assert code == 0 and all(e["status"] == "PASS" for e in report)
    for e in report:
        if e["witness_ref"]:
            Code.from_json(json.loads((wdir / f"{e['witness_ref']}.json").read_text()))


def test_search_certify_custom_grid(capsys, tmp_path):
    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps([["z", 2, 1, 2, 3, 2]]))
    code, out, _ = run(capsys, "search", "certify", "--grid", str(grid), "--vertex-budget", "10")
    report = json.loads(out)
    assert code == 0 and report[-1]["status"] == "SKIPPED"
    assert run(capsys, "search", "certify", "--grid", "nonexistent")[0] == 2


def test_export_dot(capsys, tmp_path):
    code, out, err = run(capsys, "export-dot", "--r", "2", "--d", "2", "--highlight-sphere", "1")
    assert code == 0
    assert out.count("[label=") == 10
    assert out.count(" -- ") == 9
    assert out.count("color=red") == 3
    path = tmp_path / "c.json"
    run(capsys, "code", "sperner", "--r", "2", "--d", "2", "--alpha", "1", "--out", str(path))
    code, out, _ = run(capsys, "export-dot", "--r", "2", "--d", "2", "--highlight", str(path))
    assert out.count("color=blue") == 6


def test_export_dot_rank_three(capsys):
    assert run(capsys, "export-dot", "--r", "2", "--d", "3")[0] == 2
    code, out, _ = run(capsys, "export-dot", "--r", "2", "--d", "3", "--diagonal-only")
    assert code == 0 and out.count("[label=") == 3**3 - 2**3


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "submodcodes.cli", "count", "ball", "--d", "3", "--r", "2"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["polynomial"] == "3X^4+4X^3+6X^2+3X+3"
