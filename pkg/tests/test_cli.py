import json
import textwrap

import numpy as np
import pytest

from navier4.cli import main
from navier4.config import config_from_dict, load_config
from navier4.errors import ConfigError

BASE = """
domain:
  lengths: [1.0]
equations:
  - {alpha: 0.0, beta: 0.0}
  - {alpha: 0.0, beta: 0.0}
f1: {kind: power, c: 1.0, p: 2.0}
f2: {kind: power, c: 1.0, p: 2.0}
strategy: auto
tol: 1.0e-8
max_iter: 50
init_amplitude: 10.0
forcing: {kind: mode, k: [1]}
seed: 42
"""


@pytest.fixture
def cfg_path(tmp_path):
    p = tmp_path / "exp.yaml"
    p.write_text(BASE)
    return str(p)


def _run(args):
    return main(args)


def test_config_defaults_and_unknown_keys():
    cfg = config_from_dict({})
    cfg.validate()
    assert cfg.domain.dim == 1
    assert cfg.strategy == "auto"
    with pytest.raises(ConfigError):
        config_from_dict({"nonsense": 1})
    with pytest.raises(ConfigError):
        config_from_dict({"equations": [{"alpha": 0, "beta": 0}]})  # needs two


def test_config_file_missing():
    with pytest.raises(ConfigError):
        load_config("/no/such/file.yaml")


def test_check_params_ok(cfg_path, tmp_path, capsys):
    rc = _run(["check-params", "--config", cfg_path, "--out", str(tmp_path / "o")])
    assert rc == 0
    rep = json.loads((tmp_path / "o" / "admissibility.json").read_text())
    assert rep["eq1"]["admissible"] and rep["eq2"]["admissible"]
    assert "admissible" in capsys.readouterr().out


def test_check_params_resonant_exits_1(tmp_path):
    lam1 = np.pi**2
    p = tmp_path / "res.yaml"
    p.write_text(BASE.replace(
        "- {alpha: 0.0, beta: 0.0}\n  - {alpha: 0.0, beta: 0.0}",
        f"- {{alpha: {lam1**2}, beta: 0.0}}\n  - {{alpha: 0.0, beta: 0.0}}",
    ))
    assert _run(["check-params", "--config", str(p), "--out", str(tmp_path / "o")]) == 1


def test_bad_omega0_frac_exits_2(cfg_path, tmp_path, capsys):
    rc = _run(["verify", "--config", cfg_path, "--omega0-frac", "1.5",
               "--out", str(tmp_path / "o")])
    assert rc == 2


def test_resonance_map(cfg_path, tmp_path, capsys):
    out = tmp_path / "o"
    rc = _run(["resonance-map", "--config", cfg_path, "--out", str(out),
               "--k-max", "2", "--samples", "3"])
    assert rc == 0
    lines = (out / "resonance.csv").read_text().strip().splitlines()
    assert lines[0] == "k,beta,alpha"
    assert len(lines) == 1 + 2 * 3
    # empty range leaves just the header
    rc = _run(["resonance-map", "--config", cfg_path, "--out", str(out), "--samples", "0"])
    assert rc == 0
    assert (out / "resonance.csv").read_text().strip() == "k,beta,alpha"


def test_greens_outputs(cfg_path, tmp_path):
    out = tmp_path / "o"
    rc = _run(["greens", "--config", cfg_path, "--out", str(out), "--grid", "65"])
    assert rc == 0
    rep = json.loads((out / "kernel_report.json").read_text())
    assert rep["eq1_mu1"]["recheck_ok"]
    assert (out / "diagonal_eq1_mu1.csv").exists()


def test_constants_outputs(cfg_path, tmp_path, capsys):
    out = tmp_path / "o"
    rc = _run(["constants", "--config", cfg_path, "--out", str(out)])
    assert rc == 0
    rep = json.loads((out / "constants_eq1.json").read_text())
    assert rep["sigma"] > 0
    assert "sigma = min" in capsys.readouterr().out


def test_constants_2d_degenerate_exits_1(tmp_path, capsys):
    p = tmp_path / "sq.yaml"
    p.write_text(BASE.replace("lengths: [1.0]", "lengths: [1.0, 1.0]"))
    rc = _run(["constants", "--config", str(p), "--out", str(tmp_path / "o")])
    assert rc == 1


def test_solve_linear(cfg_path, tmp_path):
    out = tmp_path / "o"
    rc = _run(["solve-linear", "--config", cfg_path, "--out", str(out)])
    assert rc == 0
    rep = json.loads((out / "linear_report.json").read_text())
    # unit-amplitude sin(pi x) forcing: u = sin(pi x)/pi^4
    assert rep["norm_inf"] == pytest.approx(np.pi**-4, rel=1e-10)


def test_solve_end_to_end(cfg_path, tmp_path, capsys):
    out = tmp_path / "o"
    rc = _run(["solve", "--config", cfg_path, "--out", str(out)])
    assert rc == 0
    rep = json.loads((out / "report.json").read_text())
    assert rep["solve"]["converged"]
    assert rep["solve"]["positive"]
    assert rep["classification"]["classification"] == "superlinear"
    assert (out / "solution_u1.csv").exists()
    assert (out / "solution_u2.csv").exists()


def test_solve_resonant_gates_before_solving(tmp_path):
    lam1 = np.pi**2
    p = tmp_path / "res.yaml"
    p.write_text(BASE.replace(
        "- {alpha: 0.0, beta: 0.0}\n  - {alpha: 0.0, beta: 0.0}",
        f"- {{alpha: {lam1**2}, beta: 0.0}}\n  - {{alpha: 0.0, beta: 0.0}}",
    ))
    out = tmp_path / "o"
    assert _run(["solve", "--config", str(p), "--out", str(out)]) == 1
    assert not (out / "report.json").exists()


def test_solve_budget_exhausted_exits_3_with_report(cfg_path, tmp_path):
    out = tmp_path / "o"
    rc = _run(["solve", "--config", cfg_path, "--out", str(out), "--max-iter", "2"])
    assert rc == 3
    rep = json.loads((out / "report.json").read_text())
    assert not rep["solve"]["converged"]


def test_verify_passes(cfg_path, tmp_path, capsys):
    out = tmp_path / "o"
    rc = _run(["verify", "--config", cfg_path, "--out", str(out)])
    assert rc == 0
    text = capsys.readouterr().out
    assert "[PASS]" in text and "[FAIL]" not in text
    rep = json.loads((out / "verify.json").read_text())
    assert all(c["passed"] for c in rep["checks"])


def test_verify_surfaces_exceptions_as_failures(tmp_path, capsys):
    # beta above the ceiling: several checks must fail, none may raise
    p = tmp_path / "bad.yaml"
    p.write_text(BASE.replace(
        "- {alpha: 0.0, beta: 0.0}\n  - {alpha: 0.0, beta: 0.0}",
        "- {alpha: 0.0, beta: 25.0}\n  - {alpha: 0.0, beta: 0.0}",
    ))
    rc = _run(["verify", "--config", str(p), "--out", str(tmp_path / "o")])
    assert rc == 1
    assert "[FAIL]" in capsys.readouterr().out


def test_outputs_deterministic(cfg_path, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert _run(["solve", "--config", cfg_path, "--out", str(a)]) == 0
    assert _run(["solve", "--config", cfg_path, "--out", str(b)]) == 0
    for name in ("solution_u1.csv", "solution_u2.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    ra = json.loads((a / "report.json").read_text())
    rb = json.loads((b / "report.json").read_text())
    ra["config"].pop("out", None), rb["config"].pop("out", None)
    assert ra["solve"] == rb["solve"] and ra["classification"] == rb["classification"]
