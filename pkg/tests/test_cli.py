import json
import subprocess
import sys

import numpy as np
import pytest

from cosserat_curvature import catalog
from cosserat_curvature.cli import main
from cosserat_curvature.serialize import dumps

TAG = catalog.SCHEMA_TAG
UNIT = {"mu": 1, "kappa": 1, "mu_c": 1, "L_c": 1}
TWIST = {"type": "axis_angle", "axis": [0, 0, 1], "angle": {"kind": "linear", "coeff": 1.0, "var": 1}}


def write(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_continuum_constant_rotation(tmp_path, capsys):
    cfg = write(tmp_path, {"schema": TAG, "kind": "continuum", "chart": {"type": "identity"},
                           "rotation": {"type": "constant", "axis": [1, 2, 3], "angle": 0.8}})
    code, out, _ = run(capsys, "eval", "--config", cfg, "--points", "[0.5, 0.5, 0.5]")
    assert code == 0
    body = json.loads(out)
    assert body["schema"] == TAG
    pt = body["points"][0]
    assert np.allclose(pt["wryness"], 0) and np.allclose(pt["dislocation"], 0)


def test_eval_shell_worked_example_and_round_trip(tmp_path, capsys):
    cfg = write(tmp_path, {"schema": TAG, "kind": "shell", "patch": {"type": "plane"},
                           "rotation": TWIST, "params": UNIT})
    points = tmp_path / "points.json"
    points.write_text("[[0.3, 0.3], [0.6, 0.1]]")
    code, out, _ = run(capsys, "eval", "--config", cfg, "--points", str(points))
    assert code == 0
    body = json.loads(out)
    pt = body["points"][0]
    assert np.allclose(pt["K"], np.outer([0, 0, 1], [1, 0, 0]), atol=1e-15)
    assert np.allclose(pt["D"], -np.outer([1, 0, 0], [0, 0, 1]), atol=1e-15)
    assert dumps(body) == out
    # deterministic
    assert run(capsys, "eval", "--config", cfg, "--points", str(points))[1] == out


@pytest.mark.parametrize("doc,points", [
    ({"schema": TAG, "kind": "shell", "patch": {"type": "plane"}, "rotation": {"type": "spin"}}, "[0.3, 0.3]"),
    ({"schema": TAG, "kind": "shell", "patch": {"type": "plane"}, "rotation": TWIST}, "[0.3, 0.3, 0.3]"),
    ({"schema": TAG, "kind": "shell", "patch": {"type": "plane"}, "rotation": TWIST}, "[3.0, 0.3]"),
    ({"schema": TAG, "kind": "shell", "patch": {"type": "plane"}, "rotation": TWIST}, "[[0.1,"),
    ({"schema": TAG, "kind": "shell", "patch": {"type": "plane"}, "rotation": TWIST,
      "params": dict(UNIT, p=3)}, "[0.3, 0.3]"),
])
def test_eval_input_errors(tmp_path, capsys, doc, points):
    code, out, err = run(capsys, "eval", "--config", write(tmp_path, doc), "--points", points)
    assert code == 2 and out == "" and err.startswith("error:")


def test_missing_config_file(capsys, tmp_path):
    assert run(capsys, "eval", "--config", str(tmp_path / "nope.json"), "--points", "[0,0]")[0] == 2


def test_minimize_flat_rest(tmp_path, capsys):
    cfg = write(tmp_path, {"schema": TAG, "kind": "minimize", "grid": [8, 8], "params": UNIT})
    code, _, _ = run(capsys, "minimize", "--config", cfg, "--out", str(tmp_path / "out"))
    assert code == 0
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["iterations"] == 0 and report["final_energy"] < 1e-25 and report["converged"]
    assert report["schema"] == TAG


def test_minimize_rejects_p3(tmp_path, capsys):
    cfg = write(tmp_path, {"schema": TAG, "kind": "minimize", "params": dict(UNIT, p=3)})
    code, _, err = run(capsys, "minimize", "--config", cfg, "--out", str(tmp_path / "out"))
    assert code == 2 and "InvalidParams" in err


def test_minimize_small_plate(tmp_path, capsys):
    cfg = write(tmp_path, {"schema": TAG, "kind": "minimize", "grid": [6, 6], "params": UNIT,
                           "perturbation": {"amplitude": 0.05, "seed": 4}})
    code, _, _ = run(capsys, "minimize", "--config", cfg, "--out", str(tmp_path / "out"))
    assert code == 0
    rows = (tmp_path / "out" / "trace.csv").read_text().splitlines()[1:]
    energies = [float(r.split(",")[1]) for r in rows]
    assert all(b <= a for a, b in zip(energies, energies[1:]))


def test_minimize_iteration_limit_is_failure(tmp_path, capsys):
    cfg = write(tmp_path, {"schema": TAG, "kind": "minimize", "grid": [6, 6], "params": UNIT,
                           "perturbation": {"amplitude": 0.05, "seed": 4}, "max_iter": 2})
    assert run(capsys, "minimize", "--config", cfg, "--out", str(tmp_path / "out"))[0] == 1


def test_validate_fault_names_failing_check(capsys):
    code, out, err = run(capsys, "validate", "--suite", "shell", "--samples", "2",
                         "--inject-fault", "shell_nye_pair")
    assert code == 1
    failed = [c["name"] for c in json.loads(out)["checks"] if not c["passed"]]
    assert "shell_nye" in failed and "FAIL shell_nye" in err


def test_validate_vacuous(capsys):
    code, out, _ = run(capsys, "validate", "--samples", "0")
    body = json.loads(out)
    assert code == 0 and body["passed"] and body["checks"] == []


def test_validate_passes_small(capsys):
    code, out, _ = run(capsys, "validate", "--suite", "curl3d", "--samples", "2", "--seed", "7")
    assert code == 0 and json.loads(out)["passed"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cosserat_curvature", "validate", "--suite", "energy",
                           "--samples", "1"], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
