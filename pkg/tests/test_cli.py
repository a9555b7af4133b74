import csv
import json
from fractions import Fraction as F

import pytest

from apne import cli
from apne import game as gm
from apne.nonexistence import build_gadget, optimize_alpha

from conftest import DATA, SUITE_SAT

PLOTTED = {2: 1.0540141790979473396, 3: 1.107370, 4: 1.152889535629472211}


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_frontier_poly_csv(capsys, tmp_path):
    table = tmp_path / "table.csv"
    code, _, _ = run(capsys, "frontier", "poly", "--d-min", 2, "--d-max", 4, "--out", table)
    assert code == 0
    rows = list(csv.DictReader(table.open()))
    assert [int(r["d"]) for r in rows] == [2, 3, 4]
    for r in rows:
        value = F(r["alpha_lower_exact"])
        assert abs(float(value) - PLOTTED[int(r["d"])]) <= 1e-3
        assert abs(float(r["alpha_lower"]) - float(value)) < 1e-15
        assert len(r["alpha_lower"].split(".")[1]) == 18
        assert gm.parse_rational(r["w"]) == F(r["w"])
        assert int(r["n"]) == 1


def test_frontier_general(capsys):
    code, out, _ = run(capsys, "frontier", "general", "--n-max", 4)
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert [r["n"] for r in rows] == ["2", "3", "4"]
    assert rows[0]["xi_lower"].startswith("1.61803398")


def test_gadget_and_oracle_round_trip(capsys, tmp_path):
    path = tmp_path / "g.json"
    code, _, _ = run(capsys, "gadget", "poly", "--d", 2, "--n", 1, "--k", 1,
                     "--w", "1/2", "--beta", "1/2", "--out", path)
    assert code == 0
    code, first, _ = run(capsys, "oracle", "enumerate", "--game", path, "--format", "json")
    again = tmp_path / "again.json"
    gm.save(gm.read(path), again)
    code2, second, _ = run(capsys, "oracle", "enumerate", "--game", again, "--format", "json")
    assert code == code2 == 0 and first == second
    code, out, _ = run(capsys, "oracle", "threshold", "--game", path, "--format", "json")
    rec = json.loads(out)
    assert F(rec["threshold"]) == gm.parse_rational(rec["threshold"])


def test_dynamics_exit_status(capsys, tmp_path):
    path = tmp_path / "g.json"
    run(capsys, "gadget", "general", "--n", 2, "--out", path)
    code, _, err = run(capsys, "oracle", "dynamics", "--game", path, "--max-steps", 30)
    assert code == 1 and "verification failed" in err
    code, _, _ = run(capsys, "oracle", "dynamics", "--game", path, "--alpha", 2)
    assert code == 0


def test_circuit_commands(capsys, tmp_path):
    net = DATA / "sat_nand.net"
    code, out, _ = run(capsys, "circuit", "eval", "--file", net, "--input", "00")
    assert code == 0 and out.strip() in ("0", "1")
    code, _, err = run(capsys, "circuit", "canon", "--file", net)
    assert code == 2 and "--make-valid" in err
    out_path = tmp_path / "c.net"
    code, _, _ = run(capsys, "circuit", "canon", "--file", net, "--make-valid", "--out", out_path)
    assert code == 0 and "OUTPUT g1" in out_path.read_text()
    code, _, _ = run(capsys, "compile", "circuit", "--file", out_path, "--d", 2,
                     "--alpha", 1, "--out", tmp_path / "cg.json")
    assert code == 0 and gm.read(tmp_path / "cg.json").n > 0


@pytest.mark.parametrize("kind", ["subset", "resource", "cost"])
def test_decision_instance_check(capsys, tmp_path, kind):
    for name in ("sat_and", "unsat_pair"):
        code, _, err = run(capsys, "thm2", "--kind", kind, "--file", DATA / f"{name}.net",
                           "--d", 2, "--alpha", "3/2", "--out", tmp_path / "g.json",
                           "--query", tmp_path / "q.json", "--check")
        assert code == 0
        expected = SUITE_SAT[name] > 0
        assert f"expected={expected} oracle={expected}" in err
        assert json.loads((tmp_path / "q.json").read_text())["expected"] == expected


def test_merge_pipeline_counts(capsys, tmp_path):
    core = tmp_path / "core.json"
    gm.save(build_gadget(optimize_alpha(2).argmax), core)
    merged = tmp_path / "merged.json"
    net = DATA / "sat_nand.net"
    code, _, _ = run(capsys, "merge", "--circuit", net, "--core-game", core, "--d", 2,
                     "--alpha", "21/20", "--out", merged)
    assert code == 0
    code, out, _ = run(capsys, "oracle", "enumerate", "--game", merged, "--alpha", "21/20",
                       "--format", "json")
    assert json.loads(out)["count"] == SUITE_SAT["sat_nand"]
    code, out, _ = run(capsys, "verify", "parsimony", "--merged", merged, "--circuit", net,
                       "--format", "json")
    assert code == 0 and json.loads(out)["ok"]
    code, _, _ = run(capsys, "verify", "parsimony", "--merged", merged,
                     "--circuit", DATA / "unsat_pair.net")
    assert code == 2


def test_merge_with_core_having_pne_fails_verification(capsys, tmp_path):
    core = tmp_path / "core.json"
    run(capsys, "gadget", "poly", "--d", 2, "--n", 1, "--k", 1, "--w", 1, "--beta", 1,
        "--out", core)
    code, _, err = run(capsys, "merge", "--circuit", DATA / "sat_and.net", "--core-game", core,
                       "--d", 2, "--alpha", "21/20")
    assert code == 1 and "alpha-PNE" in err


def test_merge_general_and_verify(capsys, tmp_path):
    out = tmp_path / "mg.json"
    net = DATA / "sat_and.net"
    code, _, _ = run(capsys, "merge-general", "--circuit", net, "--n", 2, "--alpha", "3/2",
                     "--out", out)
    assert code == 0
    code, text, _ = run(capsys, "verify", "parsimony", "--merged", out, "--circuit", net)
    assert code == 0 and "ok: True" in text


def test_usage_and_input_errors(capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        cli.main(["frontier", "poly", "--d-min", "x"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["oracle", "enumerate", "--game", "g.json", "--alpha", "1/0"])
    assert exc.value.code == 2
    capsys.readouterr()
    code, _, err = run(capsys, "oracle", "enumerate", "--game", tmp_path / "missing.json")
    assert code == 2 and err.startswith("error:")
    path = tmp_path / "g.json"
    run(capsys, "gadget", "general", "--n", 3, "--out", path)
    code, _, _ = run(capsys, "oracle", "enumerate", "--game", path, "--budget", 2)
    assert code == 2
