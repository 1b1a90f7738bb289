import json
import subprocess
import sys

import pytest

from qloop.cli import main
from qloop.freealg import FreeElem
from qloop.scalars import QRat
from qloop.shuffle import ShufElem


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_straighten_round_trip(capsys):
    code, out, _ = run(capsys, "word", "straighten", "i:1,i:0")
    assert code == 0
    obj = json.loads(out)
    x = FreeElem.from_json(obj["element"])
    assert x == FreeElem.word((("i", 0), ("i", 1)), QRat.q_power(2))
    # feeding the emitted JSON back in is a fixed point
    code, out2, _ = run(capsys, "word", "straighten", json.dumps(obj["element"]))
    assert code == 0 and FreeElem.from_json(json.loads(out2)["element"]) == x


def test_shuffle_mul_round_trip(capsys):
    code, out, _ = run(capsys, "shuffle", "mul", "--left", "i:0", "--right", "j:0", "--cartan", "rank2:-1")
    assert code == 0
    R = ShufElem.from_json(json.loads(out)["element"])
    code, out2, _ = run(capsys, "shuffle", "mul", "--left", json.dumps(R.to_json()), "--right", "i:1", "--cartan", "rank2:-1")
    assert code == 0
    assert ShufElem.from_json(json.loads(out2)["element"]).dims == {"i": 2, "j": 1}


def test_rho_gen_commutator(capsys):
    code, out, _ = run(capsys, "rho", "gen", "--zigzag", "i,j,0,0,1", "--deg", "-1,-1")
    assert code == 0
    x = FreeElem.from_json(json.loads(out)["element"])
    assert x == FreeElem.word((("j", 1), ("i", 1))) - FreeElem.word((("i", 1), ("j", 1)))


def test_pair_uu_base_value(capsys):
    code, out, _ = run(capsys, "pair", "uu", "--left", "i:0", "--right", "i:0")
    assert code == 0
    obj = json.loads(out)
    assert QRat.from_json(obj["json"]) == QRat({-1: 1, 1: -1}).inverse()
    code, out, _ = run(capsys, "pair", "uu", "--left", "i:0", "--right", "j:0")
    assert QRat.from_json(json.loads(out)["json"]).is_zero()


def test_wheel_check_failure(capsys):
    code, out, _ = run(capsys, "shuffle", "wheel-check", "--numerator", "1", "--n", "i:1,j:1", "--cartan", "rank2:0")
    assert code == 1
    obj = json.loads(out)
    assert obj["member"] is False
    assert obj["witness"]["zigzag"] == "i,j,0,0,1,0"
    code, _, _ = run(capsys, "shuffle", "wheel-check", "--elem", "i:0,j:1", "--cartan", "rank2:0", "--strong")
    assert code == 0


def test_serre_and_rho_verify(capsys):
    assert run(capsys, "serre", "verify", "--pair", "i,j", "--cartan", "rank2:-1")[0] == 0
    assert run(capsys, "rho", "verify", "--zigzag", "i,j,1,0,1", "--cartan", "rank2:-1", "--window", "1")[0] == 0
    assert run(capsys, "rho", "verify", "--zigzag", "i,j,1,0,1", "--cartan", "rank2:-1", "--window", "1", "--tau",
               '{"terms":[{"a":[0,0,0],"c":1},{"a":[1,0,0],"c":"-q^-1"}]}')[0] != 0


def test_lead_and_assoc(capsys):
    code, out, _ = run(capsys, "assoc", "i:1,j:1")
    assert code == 0
    elem = json.loads(out)["element"]
    code, out, _ = run(capsys, "lead", "--elem", json.dumps(elem))
    assert code == 0 and json.loads(out)["word"] == "i:1,j:1"
    assert run(capsys, "assoc", "i:1,i:0")[0] == 2


def test_usage_and_io_errors(capsys, tmp_path):
    bad = tmp_path / "c.json"
    bad.write_text('{"vertices": ["a", "b"], "d": [[2, -1], [-1')
    code, out, err = run(capsys, "verify", "all", "--cartan", str(bad), "--quick")
    assert code == 2 and out == "" and "malformed" in err
    assert run(capsys, "pair", "uv", "--left", "i:0", "--right", "bogus")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["pair", "xx", "--left", "i:0", "--right", "i:0"])
    assert exc.value.code == 2
    assert run(capsys, "cartan", "validate", "A3")[0] == 0
    assert run(capsys, "cartan", "validate", '{"vertices":["a","b"],"d":[[2,1],[1,2]]}')[0] == 1


def test_report_deterministic_and_mutation(capsys, tmp_path):
    args = ["verify", "all", "--quick", "--only", "A1,A4,A10", "--no-timings", "--seed", "3"]
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == 0 and out1 == out2
    rep = json.loads(out1)
    assert rep["ok"] and rep["seed"] == 3 and [c["id"] for c in rep["checks"]] == ["A1", "A4", "A10"]
    path = tmp_path / "r.json"
    code, _, _ = run(capsys, "verify", "all", "--quick", "--only", "A2", "--mutate", "--report", str(path))
    assert code == 1
    rep = json.loads(path.read_text())
    a2 = rep["checks"][0]
    assert rep["mutation"] and not a2["ok"] and a2["witness"]["zigzag"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qloop", "pair", "uv", "--left", "i:2", "--right", "i:-2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["value"] == "1"
