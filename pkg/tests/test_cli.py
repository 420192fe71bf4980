import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from bootstrap_parent.cli import main
from bootstrap_parent.scenarios import SCENARIOS, schema

ROOT = Path(__file__).resolve().parents[1]


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_list(capsys):
    code, out, _ = run_cli(["list"], capsys)
    assert code == 0
    assert len(out.strip().splitlines()) == 9
    code, out, _ = run_cli(["list", "--json"], capsys)
    rows = json.loads(out)
    assert [r["name"] for r in rows] == list(SCENARIOS)
    assert all(r["description"] and "keys" in r for r in rows)


def test_list_unknown_flag(capsys):
    with pytest.raises(SystemExit) as e:
        main(["list", "--bogus"])
    assert e.value.code == 2


def test_unknown_scenario(capsys):
    code, _, err = run_cli(["nosuch"], capsys)
    assert code == 2 and "unknown scenario" in err


def test_axioms_toric_pass(tmp_path, capsys):
    cfg = write(tmp_path, "c.json", {"scenario": "axioms", "backend": {"builtin": "toric", "rows": 6, "cols": 6}})
    out = tmp_path / "r.json"
    code, _, _ = run_cli(["axioms", "--config", cfg, "--out", str(out)], capsys)
    assert code == 0
    rep = json.loads(out.read_text())
    jsonschema.validate(rep, schema())
    names = [c["name"] for c in rep["checks"]]
    assert len(names) == 72 and "A0 0,0" in names and "A1 5,5" in names


def test_axioms_ghz_fails(tmp_path, capsys):
    cfg = write(tmp_path, "c.json", {"backend": {"builtin": "ghz", "rows": 4, "cols": 4}, "faces": [[1, 1]]})
    code, out, _ = run_cli(["axioms", "--config", cfg], capsys)
    assert code == 1
    rep = json.loads(out)
    a0 = next(c for c in rep["checks"] if c["name"] == "A0 1,1")
    assert a0["values"]["deficit"] == 1 and not a0["pass"]
    assert rep["summary"]["failed"] == 1


def test_hamiltonian_product(tmp_path, capsys):
    cfg = write(tmp_path, "c.json", {"backend": {"builtin": "product", "rows": 20, "cols": 20}, "controls": False})
    code, out, _ = run_cli(["hamiltonian", "--config", cfg], capsys)
    assert code == 0
    jsonschema.validate(json.loads(out), schema())


def test_determinism(tmp_path, capsys):
    cfg = write(tmp_path, "c.json", {"instances": 5})
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run_cli(["markov", "--config", cfg, "--seed", "3", "--out", str(a)], capsys)[0] == 0
    assert run_cli(["markov", "--config", cfg, "--seed", "3", "--out", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["seed"] == 3
    jsonschema.validate(rep, schema())


def test_flags_win_over_config(tmp_path, capsys):
    cfg = write(tmp_path, "c.json", {"instances": 2, "seed": 7, "tolerances": {"cmi": 1e-6}})
    code, out, _ = run_cli(["markov", "--config", cfg, "--seed", "1", "--tol-cmi", "1e-7"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["seed"] == 1 and rep["tolerances"]["cmi_dense"] == 1e-7
    code, out, _ = run_cli(["markov", "--config", cfg], capsys)
    rep = json.loads(out)
    assert rep["seed"] == 7 and rep["tolerances"]["cmi_dense"] == 1e-6


def test_cap_error_names_cap(tmp_path, capsys):
    big = [[0, 0], [1, 0], [2, 0]]
    cfg = write(tmp_path, "c.json", {"triples": [[[[0, 0]], [[0, 1], [1, 1], [2, 1]], [[0, 2], [1, 2], [2, 2]] + big[1:]]]})
    code, _, err = run_cli(["modular", "--config", cfg], capsys)
    assert code == 2 and "12" in err


def test_bad_config(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert run_cli(["axioms", "--config", str(path)], capsys)[0] == 2
    assert run_cli(["axioms", "--config", str(tmp_path / "missing.json")], capsys)[0] == 2
    cfg = write(tmp_path, "c.json", {"scenario": "cover"})
    assert run_cli(["axioms", "--config", cfg], capsys)[0] == 2
    cfg = write(tmp_path, "d.json", {"backend": {"builtin": "nonsense"}})
    assert run_cli(["axioms", "--config", cfg], capsys)[0] == 2


def test_backend_file(tmp_path, capsys):
    from bootstrap_parent.stabilizer import make_toric_code

    (tmp_path / "state.txt").write_text(make_toric_code(6, 6).to_text())
    cfg = write(tmp_path, "c.json", {"backend": {"file": "state.txt", "rows": 6, "cols": 6}, "faces": [[2, 2]]})
    code, out, _ = run_cli(["axioms", "--config", cfg], capsys)
    assert code == 0 and json.loads(out)["pass"]


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "bootstrap_parent", "list", "--json"], capture_output=True, text=True)
    assert proc.returncode == 0 and len(json.loads(proc.stdout)) == 9


def test_published_schema_matches_package():
    docs = json.loads((ROOT / "docs" / "report.schema.json").read_text())
    assert docs == schema()


def test_shipped_configs_are_valid():
    for path in sorted((ROOT / "configs").glob("*.json")):
        data = json.loads(path.read_text())
        assert data["scenario"] in SCENARIOS, path.name
        assert set(data) - {"scenario", "seed", "out", "tolerances"} <= set(SCENARIOS[data["scenario"]].keys), path.name
