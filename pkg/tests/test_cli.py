import io
import json
import math

import pytest

from abelvortex import cli, moduli, schemas
from abelvortex.errors import NoLiftError

VOL = 4 * math.pi ** 2
TWO_PI = 2 * math.pi

SIMPLEX = {"polytope": {"normals": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]],
                        "offsets": [0, 0, 0, 1]}}
CP1_CLASSIFY = {"target": {"kind": "CPn", "C": [[1]], "t_pi": ["1/2"]},
                "base": {"alpha": [2], "volume": VOL, "a": 1}, "cap": 8}
TAUBES_SOLVE = {"model": "C", "t": 1.0, "a": 1.0, "torus": {"Lx": TWO_PI, "Ly": TWO_PI},
                "grid": [128, 128], "vortices": [[math.pi, math.pi, 1]]}


def run(tmp_path, command, payload, *extra, raw=None):
    path = tmp_path / "in.json"
    path.write_text(raw if raw is not None else json.dumps(payload))
    out, err = io.StringIO(), io.StringIO()
    code = cli.run([command, "--input", str(path), *extra], stdout=out, stderr=err)
    text = out.getvalue()
    return code, (json.loads(text) if text else None), err.getvalue()


def test_polytope_simplex(tmp_path):
    code, out, _ = run(tmp_path, "polytope", SIMPLEX)
    assert code == 0
    assert out["delzant"] is True and out["volume"] == "1/6"
    assert out["barycentre"] == ["-1/4"] * 3
    schemas.validate(out, schemas.POLYTOPE_OUTPUT)


def test_polytope_bare_object_and_non_delzant(tmp_path):
    code, out, _ = run(tmp_path, "polytope", {"normals": [[-1, 0], [0, -1], [1, 2]],
                                              "offsets": [0, 0, "2/1"]})
    assert code == 0 and out["delzant"] is False and out["failing_vertices"]
    code, out, err = run(tmp_path, "delzant", {"normals": [[-1, 0], [0, -1], [1, 2]],
                                               "offsets": [0, 0, 2]})
    assert code == 2 and "Delzant" in err


def test_polytope_errors(tmp_path):
    assert run(tmp_path, "polytope", None, raw="{not json")[0] == 2
    code, _, err = run(tmp_path, "polytope", {"normals": [[1, 0], [0, 1]], "offsets": [1, 1]})
    assert code == 2 and "unbounded" in err
    assert run(tmp_path, "polytope", {"normals": [[1.5]], "offsets": [1]})[0] == 2
    out, err = io.StringIO(), io.StringIO()
    assert cli.run(["polytope", "--input", str(tmp_path / "missing.json")],
                   stdout=out, stderr=err) == 2


def test_delzant_simplex(tmp_path):
    code, out, _ = run(tmp_path, "delzant", SIMPLEX)
    assert code == 0
    assert out["beta"] == [[1, 0, 0, -1], [0, 1, 0, -1], [0, 0, 1, -1]]
    assert out["kernel"] == [[1, 1, 1, 1]] and out["surjective"] is True


def test_classify_cp1(tmp_path):
    code, out, _ = run(tmp_path, "classify", CP1_CLASSIFY)
    assert code == 0 and out["verdict"] == "interior"
    assert [c["degrees"] for c in out["components"]] == [[0, 2], [1, 3], [2, 4], [3, 5]]
    code, out, _ = run(tmp_path, "classify", CP1_CLASSIFY, "--cap", "4")
    assert len(out["components"]) == 2


def test_classify_exterior_is_success(tmp_path):
    payload = {"target": {"kind": "Cn", "C": [[1]], "t_real": [1.0]},
               "base": {"alpha": [40], "volume": VOL, "a": 1}}
    code, out, _ = run(tmp_path, "classify", payload)
    assert code == 0
    assert out["verdict"] == "exterior" and out["components"] == []


def test_classify_input_errors(tmp_path):
    payload = {"target": {"kind": "Cn", "C": [[1, 0], [0, 1]], "t": [1, 1]},
               "base": {"alpha": [1], "volume": VOL, "a": 1}}
    assert run(tmp_path, "classify", payload)[0] == 2
    assert run(tmp_path, "classify", {"target": {"kind": "Cn"}, "base": {}})[0] == 2
    bad_det = {"target": {"kind": "Cn", "C": [[2]], "t": [1]},
               "base": {"alpha": [1], "volume": VOL, "a": 1}}
    assert run(tmp_path, "classify", bad_det)[0] == 2


def test_classify_toric_and_general_base(tmp_path):
    square = {"normals": [[1, 0], [-1, 0], [0, 1], [0, -1]], "offsets": [1, 1, 1, 1]}
    payload = {"target": {"kind": "toric", "polytope": square},
               "base": {"alpha": [1, 0], "volume": 100.0, "a": 1}, "cap": 4}
    code, out, _ = run(tmp_path, "classify", payload)
    assert code == 0
    assert [c["energy"] for c in out["components"]] == [None] * 3
    assert out["diagnostic"] == "energy: not derived in source"
    general = {"target": {"kind": "Cn", "C": [[1]], "t": [1]},
               "base": {"pairing_deg": [0.5], "pairing_self": [0.25], "volume": VOL, "a": 1}}
    code, out, _ = run(tmp_path, "classify", general)
    assert code == 0 and out["components"] == [] and "surface" in out["diagnostic"]


def test_classify_internal_error(tmp_path, monkeypatch):
    def boom(*args, **kwargs):
        raise NoLiftError("surjective matrix failed to lift")
    monkeypatch.setattr(moduli, "classify", boom)
    code, _, err = run(tmp_path, "classify", CP1_CLASSIFY)
    assert code == 3 and "internal" in err


def test_solve_taubes(tmp_path):
    dump = tmp_path / "field.csv"
    code, out, _ = run(tmp_path, "solve", TAUBES_SOLVE, "--dump-field", str(dump))
    assert code == 0 and out["converged"] is True
    assert abs(out["energy"] - 1.0) <= 0.02
    assert out["predicted_energy"] == pytest.approx(1.0)
    assert out["moment_mean_error"] < 1e-10
    assert len(dump.read_text().splitlines()) == 1 + 128 * 128


def test_solve_infeasible(tmp_path):
    payload = dict(TAUBES_SOLVE, vortices=[[1.0, 1.0, 40]], grid=[32, 32])
    code, out, _ = run(tmp_path, "solve", payload)
    assert code == 0
    assert out["converged"] is False and out["reason"] == "bradlow_infeasible"


def test_solve_cp1_and_errors(tmp_path):
    cp1 = {"model": "CP1", "t_pi": "1/2", "a": 1.0, "torus": {"Lx": TWO_PI, "Ly": TWO_PI},
           "grid": [64, 64], "vortices": [[1.0, 1.0, 2]], "antivortices": [[4.0, 4.0, 1]]}
    code, out, _ = run(tmp_path, "solve", cp1)
    assert code == 0 and out["converged"]
    assert out["predicted_energy"] == pytest.approx(3 * math.pi / 2)
    clash = dict(cp1, antivortices=[[1.0, 1.0, 1]])
    code, _, err = run(tmp_path, "solve", clash)
    assert code == 2 and "antivortex" in err
    assert run(tmp_path, "solve", dict(cp1, grid=[15, 16]))[0] == 2
    assert run(tmp_path, "solve", dict(TAUBES_SOLVE, antivortices=[[1, 1]]))[0] == 2


def test_solve_non_convergence(tmp_path):
    payload = dict(TAUBES_SOLVE, grid=[32, 32], newton={"tol": 1e-10, "max_iter": 1})
    code, out, err = run(tmp_path, "solve", payload)
    assert code == 4
    assert out["converged"] is False and len(out["residual_history"]) == 2
    assert "converge" in err


def test_output_file(tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = run(tmp_path, "delzant", SIMPLEX, "--output", str(target))
    assert code == 0 and out is None
    assert json.loads(target.read_text())["surjective"] is True
