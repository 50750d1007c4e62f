import json
import subprocess
import sys

import pytest

from chernmoser.cli import main
from chernmoser.hypersurfaces import KNParams, evaluate_on_ray, kohn_nirenberg_rho
from chernmoser.polycore import CRational, RealPoly


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    text = out.out if code == 0 else out.err
    return code, json.loads(text) if text.strip().startswith("{") else text


def _write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def _model_file(tmp_path, n=2, l=1, scale=1):
    P = -RealPoly.norm_l(n, l) * scale
    return _write(tmp_path, "model.json", P.to_json())


# --- normalize -------------------------------------------------------------------

def test_normalize_hyperquadric_family(capsys):
    code, rep = _run(capsys, "normalize", "--family", "hyperquadric", "--n", "3", "--l", "1")
    assert code == 0
    assert rep["normal_form"]["s"]["terms"] == [] and rep["tensor"]["entries"] == []
    assert rep["invariants_ok"] and rep["config"]["seed"] == 0


def test_normalize_hyperquadric_file(capsys, tmp_path):
    code, rep = _run(capsys, "normalize", "--input", _model_file(tmp_path), "--l", "1")
    assert code == 0 and rep["normal_form"]["s"]["terms"] == []


def test_normalize_sphere_family_signs(capsys):
    code, rep = _run(capsys, "normalize", "--family", "sphere-perturbation",
                     "--n", "4", "--l", "2", "--eps", "1/100")
    assert code == 0
    fam = rep["family"]
    assert fam["a"] == "1/200"
    assert fam["values"]["X1"]["graph_quartic"] == "-1/200"
    assert fam["values"]["X2"]["graph_quartic"] == "1/200"
    assert fam["values"]["X1"]["tensor"] == "-1/50"


def test_malformed_reality_is_schema_error(capsys, tmp_path):
    data = {"n": 2, "terms": [{"alpha": [1, 0], "beta": [0, 1], "k": 0, "re": "1", "im": "0"}]}
    code, err = _run(capsys, "normalize", "--input", _write(tmp_path, "bad.json", data))
    assert code == 2 and err["kind"] == "schema"
    assert "[1, 0]" in err["error"] or "(1, 0" in err["error"]


def test_schema_errors(capsys, tmp_path):
    assert main(["normalize", "--input", str(tmp_path / "missing.json")]) == 2
    (tmp_path / "junk.json").write_text("{not json")
    assert main(["normalize", "--input", str(tmp_path / "junk.json")]) == 2
    assert main(["normalize", "--family", "sphere-perturbation", "--eps", "tiny"]) == 2
    assert main(["normalize", "--bogus"]) == 2
    assert main(["normalize"]) == 2
    capsys.readouterr()


def test_non_prenormal_input_is_domain_error(capsys, tmp_path):
    code, err = _run(capsys, "normalize", "--input", _model_file(tmp_path, scale=2), "--l", "1")
    assert code == 1 and "offending" in err["error"]
    assert main(["normalize", "--family", "kohn-nirenberg"]) == 1
    assert main(["normalize", "--family", "sphere-perturbation", "--l", "1"]) == 1
    capsys.readouterr()


# --- obstruct ---------------------------------------------------------------------

def test_obstruct_model_is_consistent(capsys):
    code, rep = _run(capsys, "obstruct", "--family", "hyperquadric", "--n", "3", "--l", "1",
                     "--samples", "16")
    assert code == 0 and rep["verdict"] == "consistent" and rep["witnesses"] == []


def test_obstruct_sphere_family(capsys):
    verdicts = set()
    for seed in ("0", "5"):
        code, rep = _run(capsys, "obstruct", "--family", "sphere-perturbation", "--seed", seed,
                         "--samples", "32")
        assert code == 0
        verdicts.add(rep["verdict"])
        assert rep["witnesses"] and rep["seed"] == int(seed)
    assert verdicts == {"obstructed"}


def test_obstruct_needs_negative_directions(capsys):
    assert main(["obstruct", "--family", "hyperquadric", "--n", "2", "--l", "0"]) == 1
    capsys.readouterr()


# --- segre -------------------------------------------------------------------------

def test_segre_defaults(capsys):
    code, rep = _run(capsys, "segre")
    assert code == 0
    w = rep["witness"]
    assert w["on_segre"] and w["in_domain"]
    assert w["lambda_prime_squared"] == "11/20000"
    assert w["eps_tilde"] == "1/17592186044416"
    # re-verify with an independent evaluation of rho at q
    params = KNParams(eps=w["params"]["eps"])
    rho_q = evaluate_on_ray(kohn_nirenberg_rho(params), w["lambda_prime_squared"])
    assert str(rho_q.re) == w["rho_at_q"] and rho_q.re < 0


def test_segre_above_threshold(capsys):
    code, err = _run(capsys, "segre", "--eps", "1/10000")
    assert code == 1 and "no witness" in err["error"]
    assert main(["segre", "--c", "3"]) == 1
    capsys.readouterr()


# --- prenormalize ---------------------------------------------------------------------

def _terms(rep):
    return {(tuple(t["alpha"]), tuple(t["beta"]), t["k"]): complex(t["re"], t["im"])
            for t in rep["terms"]}


def test_prenormalize_already_normal(capsys, tmp_path):
    code, rep = _run(capsys, "prenormalize", "--input", _model_file(tmp_path))
    assert code == 0 and rep["inexact"] is True and rep["l"] == 1
    # the eigenvector basis is fixed only up to unit phases
    T = rep["transform"]
    assert all(abs(abs(complex(*T[i][j])) - (i == j)) < 1e-12 for i in range(2) for j in range(2))
    got = _terms(rep)
    # -|z|^2_l = |z_1|^2 - |z_2|^2 for l = 1
    assert abs(got[((1, 0), (1, 0), 0)] - 1) < 1e-12 and abs(got[((0, 1), (0, 1), 0)] + 1) < 1e-12


def test_prenormalize_rescales_diag2(capsys, tmp_path):
    code, rep = _run(capsys, "prenormalize", "--input", _model_file(tmp_path, 3, 1, scale=2))
    assert code == 0
    target = {(k[:3], k[3:6], k[6]): complex(c) for k, c in RealPoly.norm_l(3, 1).terms.items()}
    got = _terms(rep)
    assert set(got) == set(target)
    assert all(abs(got[k] + target[k]) < 1e-12 for k in target)


def test_prenormalize_degenerate(capsys, tmp_path):
    P = RealPoly.z(0, 2) * RealPoly.zbar(0, 2) * CRational(-1)
    code, err = _run(capsys, "prenormalize", "--input", _write(tmp_path, "deg.json", P.to_json()))
    assert code == 1 and "degenerate" in err["error"]


# --- reproducibility ---------------------------------------------------------------------

def test_outputs_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["obstruct", "--family", "sphere-perturbation", "--samples", "24", "--seed", "3"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert list(data) == sorted(data)


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "chernmoser.cli", "segre"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["witness"]["in_domain"] is True
