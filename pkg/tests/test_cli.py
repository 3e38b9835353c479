import json
import math
import os

import pytest

from akh import cli

FLAT = {"grid": {"N": 8}}
VARYING = {"grid": {"N": 8},
           "fields": {"omega_perturbation": {"amplitude": 0.08,
                                             "mode": [0, 1, 0, 0]}}}


def toml_text(data, prefix=""):
    lines = []
    for key, value in data.items():
        name = f"{prefix}.{key}" if prefix else key
        if isinstance(value, dict):
            lines.append(f"[{name}]")
            sub = {k: v for k, v in value.items() if not isinstance(v, dict)}
            for k, v in sub.items():
                lines.append(f"{k} = {json.dumps(v)}")
            for k, v in value.items():
                if isinstance(v, dict):
                    lines.append(toml_text({k: v}, prefix=name))
    return "\n".join(lines)


@pytest.fixture
def flat_toml(tmp_path):
    path = tmp_path / "flat.toml"
    path.write_text(toml_text(FLAT) + "\n")
    return str(path)


@pytest.fixture
def varying_toml(tmp_path):
    path = tmp_path / "vary.toml"
    path.write_text(toml_text(VARYING) + "\n")
    return str(path)


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- verify ----------------------------------------------------------------------


def test_verify_clean_model_exit0(capsys):
    code, out, err = run(["verify", "--model", "kodaira-thurston",
                          "--suite", "d2"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["ok"] is True
    assert data["model"] == "kodaira-thurston"
    assert [e["identity"] for e in data["entries"]][:2] == ["mu-squared",
                                                            "mu-del"]
    assert "verify kodaira-thurston" in err      # timing goes to stderr only


def test_verify_markdown_format(capsys):
    code, out, _ = run(["verify", "--model", "torus4", "--suite", "d2",
                        "--format", "md"], capsys)
    assert code == 0
    assert out.startswith("# verification: torus4")
    assert "| d2 | mu-squared |" in out


def test_verify_repeat_runs_byte_identical(tmp_path, capsys):
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    assert run(["verify", "--model", "kodaira-thurston", "--out", a],
               capsys)[0] == 0
    assert run(["verify", "--model", "kodaira-thurston", "--out", b],
               capsys)[0] == 0
    with open(a, "rb") as fa, open(b, "rb") as fb:
        assert fa.read() == fb.read()


def test_verify_grid_recipe_file(flat_toml, capsys):
    code, out, _ = run(["verify", "--model", flat_toml], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["kind"] == "grid"
    assert data["meta"]["N"] == 8
    assert data["suites"] == ["d2", "identities"]


def test_verify_bad_inputs_exit2(tmp_path, capsys):
    assert run(["verify", "--model", "no-such-model"], capsys)[0] == 2
    assert run(["verify", "--model", "torus4", "--suite", "bogus"],
               capsys)[0] == 2
    assert run(["verify", "--model", "torus4", "--tol", "1e-9"],
               capsys)[0] == 2      # --tol needs IDENT=VALUE
    broken = tmp_path / "broken.toml"
    broken.write_text("[grid\nN = ")
    assert run(["verify", "--model", str(broken)], capsys)[0] == 2


def test_verify_tol_override_flows_through(capsys):
    code, out, _ = run(["verify", "--model", "torus4", "--suite", "d2",
                        "--tol", "mu-squared=0.25"], capsys)
    assert code == 0
    data = json.loads(out)
    entry = next(e for e in data["entries"] if e["identity"] == "mu-squared")
    assert entry["tolerance"] == 0.25
    assert data["meta"]["tolerance_overrides"] == {"mu-squared": 0.25}


# -- harmonic --------------------------------------------------------------------


def test_harmonic_table_kodaira_thurston(capsys):
    code, out, _ = run(["harmonic", "--model", "kodaira-thurston"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["degree_d"] == [1, 3, 4, 3, 1]
    assert all(data["symmetries"].values())
    joint = {(r["p"], r["q"]): r["joint"] for r in data["blocks"]}
    assert joint[(1, 1)] == 3 and joint[(0, 2)] == 0


def test_harmonic_flat_grid(flat_toml, capsys):
    code, out, _ = run(["harmonic", "--model", flat_toml], capsys)
    assert code == 0
    assert json.loads(out)["degree_joint"] == [1, 4, 6, 4, 1]


def test_harmonic_varying_grid_rejected(varying_toml, capsys):
    code, _, err = run(["harmonic", "--model", varying_toml], capsys)
    assert code == 2
    assert "constant-structure" in err


# -- constants -------------------------------------------------------------------


def test_constants_reference_value(capsys):
    code, out, _ = run(["constants", "--n", "2"], capsys)
    assert code == 0
    rows = json.loads(out)
    assert abs(rows[0]["C_tilde_n"] - 1.0 / (128 * math.pi ** 2)) < 1e-15


def test_constants_markdown_digits(capsys):
    code, out, _ = run(["constants", "--n", "2,3", "--format", "md"], capsys)
    assert code == 0
    assert "0.000791571747206" in out      # 12 significant digits
    assert out.count("\n|") >= 3


def test_constants_bad_n_exit2(capsys):
    assert run(["constants", "--n", "1"], capsys)[0] == 2
    assert run(["constants", "--n", "two"], capsys)[0] == 2


# -- grid-converge ---------------------------------------------------------------


def test_grid_converge_exact_identity(capsys):
    code, out, _ = run(["grid-converge", "--suite", "d2",
                        "--resolutions", "4,6,8"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["ok"] is True
    assert data["identities"][0]["order"] == "exact"


def test_grid_converge_below_floor_exit1(capsys):
    code, out, _ = run(["grid-converge", "--suite", "six-term-pairing",
                        "--resolutions", "4,6,8"], capsys)
    assert code == 1
    data = json.loads(out)
    assert data["ok"] is False
    assert data["identities"][0]["order"] < cli.ORDER_FLOOR


def test_grid_converge_bad_inputs_exit2(capsys):
    assert run(["grid-converge", "--suite", "bogus",
                "--resolutions", "4,6,8"], capsys)[0] == 2
    assert run(["grid-converge", "--resolutions", "8,16"], capsys)[0] == 2
    assert run(["grid-converge", "--resolutions", "8;16;32"], capsys)[0] == 2


# -- solve-d ---------------------------------------------------------------------


def write_target(tmp_path, payload):
    path = tmp_path / "target.json"
    path.write_text(json.dumps(payload))
    return str(path)


def test_solve_d_round_trip(tmp_path, capsys):
    # on the nilmanifold catalog model, e1^e2 is the differential of e4
    target = write_target(tmp_path, {"degree": 2,
                                     "coefficients": [1, 0, 0, 0, 0, 0]})
    code, out, _ = run(["solve-d", "--model", "kodaira-thurston", target],
                       capsys)
    assert code == 0
    data = json.loads(out)
    assert data["degree"] == 1
    assert data["defect"] < 1e-10
    coeffs = [complex(re, im) for re, im in data["coefficients"]]
    assert abs(coeffs[3] - 1.0) < 1e-10
    assert max(abs(c) for c in coeffs[:3]) < 1e-10


def test_solve_d_accepts_complex_pairs(tmp_path, capsys):
    target = write_target(tmp_path, {"degree": 2,
                                     "coefficients": [[0, 2], 0, 0, 0, 0, 0]})
    code, out, _ = run(["solve-d", "--model", "kodaira-thurston", target],
                       capsys)
    assert code == 0
    coeffs = [complex(re, im) for re, im in json.loads(out)["coefficients"]]
    assert abs(coeffs[3] - 2j) < 1e-10


def test_solve_d_unsolvable_exit1(tmp_path, capsys):
    # a nonzero invariant 1-form is never a differential here
    target = write_target(tmp_path, {"degree": 1,
                                     "coefficients": [1, 0, 0, 0]})
    code, _, err = run(["solve-d", "--model", "kodaira-thurston", target],
                       capsys)
    assert code == 1
    assert "defect" in err


def test_solve_d_bad_targets_exit2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["solve-d", "--model", "torus4", str(bad)], capsys)[0] == 2
    wrong_len = write_target(tmp_path, {"degree": 2, "coefficients": [1, 0]})
    assert run(["solve-d", "--model", "torus4", wrong_len], capsys)[0] == 2
    degree0 = write_target(tmp_path, {"degree": 0, "coefficients": [1]})
    assert run(["solve-d", "--model", "torus4", degree0], capsys)[0] == 2
    strings = write_target(tmp_path, {"degree": 1,
                                      "coefficients": ["x", 0, 0, 0]})
    assert run(["solve-d", "--model", "torus4", strings], capsys)[0] == 2
    assert run(["solve-d", "--model", "torus4", str(tmp_path / "none.json")],
               capsys)[0] == 2


def test_solve_d_rejects_grid_models(flat_toml, tmp_path, capsys):
    target = write_target(tmp_path, {"degree": 2,
                                     "coefficients": [1, 0, 0, 0, 0, 0]})
    assert run(["solve-d", "--model", flat_toml, target], capsys)[0] == 2


# -- plumbing --------------------------------------------------------------------


def test_out_flag_writes_file(tmp_path, capsys):
    out_path = tmp_path / "report.json"
    code, out, _ = run(["verify", "--model", "torus4", "--suite", "d2",
                        "--out", str(out_path)], capsys)
    assert code == 0
    assert out == ""
    assert json.loads(out_path.read_text())["ok"] is True


def test_threads_env_cap(monkeypatch):
    for var in cli._THREAD_VARS:
        monkeypatch.delenv(var, raising=False)
    monkeypatch.setenv("AKH_THREADS", "3")
    cli._threads_setup()
    assert all(os.environ[var] == "3" for var in cli._THREAD_VARS)
    monkeypatch.setenv("AKH_THREADS", "zero")
    with pytest.raises(SystemExit):
        cli._threads_setup()
