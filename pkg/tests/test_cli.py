import json
import math
import subprocess
import sys

import numpy as np
import pytest

from gmclab import AtomicMeasure, d_energy, load_measure, save_measure

SEED = 7


def run_cli(*argv):
    return subprocess.run([sys.executable, "-m", "gmclab", *map(str, argv)],
                          capture_output=True, text=True)


def report(proc):
    assert proc.stdout, proc.stderr
    return json.loads(proc.stdout)


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    paths = {"root": root, "grid": root / "grid16.csv",
             "small": root / "grid8_small.csv", "cantor": root / "cantor3.csv",
             "single": root / "single.csv", "quad": root / "quad.csv",
             "heavy": root / "heavy.csv"}
    proc = run_cli("generate", "grid", "--n", 16, "--radius", 0.8,
                   "--out", paths["grid"], "--no-timestamp")
    assert proc.returncode == 0, proc.stderr
    proc = run_cli("generate", "grid", "--n", 8, "--radius", 0.4,
                   "--out", paths["small"], "--no-timestamp")
    assert proc.returncode == 0, proc.stderr
    proc = run_cli("generate", "cantor", "--level", 3, "--radius", 0.4,
                   "--out", paths["cantor"], "--no-timestamp")
    assert proc.returncode == 0, proc.stderr
    save_measure(AtomicMeasure(np.array([0.3 + 0j]), np.array([1.0])),
                 paths["single"])
    save_measure(AtomicMeasure(np.array([0.5, -0.5, 0.5j, -0.5j]),
                               np.full(4, 0.25)), paths["quad"])
    save_measure(AtomicMeasure(np.array([0.5j, -0.5j]), np.full(2, 0.5)),
                 paths["heavy"])
    return paths


# ------------------------------------------------------------------ generate


def test_generate_grid(files):
    lines = files["grid"].read_text().splitlines()
    assert lines[0] == "x,y,weight"
    assert len(lines) == 257
    atoms = load_measure(files["grid"])
    assert np.all(atoms.weights == 1.0 / 256.0)


def test_generate_cantor(files):
    assert len(files["cantor"].read_text().splitlines()) == 65


def test_generate_julia_notations(files):
    out_i = files["root"] / "julia_i.csv"
    out_j = files["root"] / "julia_j.csv"
    proc = run_cli("generate", "julia", "--c=-1+0i", "--pixels", 128,
                   "--out", out_i, "--no-timestamp")
    assert proc.returncode == 0, proc.stderr
    assert report(proc)["atoms"] > 0
    proc = run_cli("generate", "julia", "--c=-1+0j", "--pixels", 128,
                   "--out", out_j, "--no-timestamp")
    assert proc.returncode == 0
    # the electrical-engineering i spelling parses to the same constant
    assert out_i.read_text() == out_j.read_text()


def test_generate_config_echo(files):
    out = files["root"] / "echo.csv"
    proc = run_cli("generate", "grid", "--n", 4, "--radius", 0.5,
                   "--out", out, "--no-timestamp")
    rep = report(proc)
    assert rep["command"] == "generate"
    assert rep["config"]["n"] == 4
    assert rep["config"]["radius"] == 0.5
    assert rep["atoms"] == 16
    assert "timestamp" not in rep


# ----------------------------------------------------------- energy/exponents


def test_energy_matches_library(files):
    proc = run_cli("energy", "--measure", files["grid"], "--d", 1.0,
                   "--no-timestamp")
    assert proc.returncode == 0
    rep = report(proc)
    assert rep["energy"] == d_energy(load_measure(files["grid"]), 1.0)
    assert rep["total_mass"] == 1.0


def test_exponents_l2_reference():
    proc = run_cli("exponents", "--gamma", 1.0, "--d", 2.0, "--l2",
                   "--no-timestamp")
    assert proc.returncode == 0
    rep = report(proc)
    assert rep["exponents"]["eta"] == 1.0 / 3.0
    assert rep["exponents"]["l2_t0"] is None
    assert rep["config"]["beta"] == 2.0


def test_exponents_energy_ratio_threshold():
    proc = run_cli("exponents", "--gamma", 1.0, "--d", 2.0, "--l2",
                   "--energy-ratio", 1.0, "--no-timestamp")
    rep = report(proc)
    assert rep["exponents"]["l2_t0"] == 524288.0


def test_exponents_ratio_from_measure(files):
    proc = run_cli("exponents", "--gamma", 0.5, "--d", 0.9, "--l2",
                   "--measure", files["cantor"], "--no-timestamp")
    rep = report(proc)
    atoms = load_measure(files["cantor"])
    assert rep["energy_ratio"] == pytest.approx(
        d_energy(atoms, 0.9) / atoms.total_mass, rel=1e-15)
    assert rep["exponents"]["l2_t0"] > 0


# ------------------------------------------------------------------- laplace


def test_laplace_gamma_zero(files):
    proc = run_cli("laplace", "--measure", files["grid"], "--gamma", 0.0,
                   "--t", 1.0, "--replicas", 50, "--seed", SEED,
                   "--no-timestamp")
    assert proc.returncode == 0
    rep = report(proc)
    assert rep["laplace"]["estimates"][0] == pytest.approx(
        math.exp(-1.0), rel=1e-12)
    assert rep["config"]["seed"] == SEED


def test_laplace_csv(files):
    csv_path = files["root"] / "laplace.csv"
    run_cli("laplace", "--measure", files["grid"], "--gamma", 0.0,
            "--t", "1.0,2.0", "--replicas", 20, "--seed", SEED,
            "--csv", csv_path, "--no-timestamp")
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "t,estimate,stderr,bound"
    assert len(lines) == 3
    # no exponent in play, so the bound column stays empty
    assert all(line.endswith(",") for line in lines[1:])


def test_seed_recorded_when_omitted(files):
    proc = run_cli("laplace", "--measure", files["grid"], "--gamma", 0.0,
                   "--t", 1.0, "--replicas", 10, "--no-timestamp")
    rep = report(proc)
    assert isinstance(rep["config"]["seed"], int)
    assert rep["config"]["seed"] >= 0


def test_timestamp_present_by_default(files):
    proc = run_cli("laplace", "--measure", files["grid"], "--gamma", 0.0,
                   "--t", 1.0, "--replicas", 10, "--seed", SEED)
    assert "timestamp" in report(proc)


def test_config_file_priority(files):
    cfg = files["root"] / "cfg.json"
    cfg.write_text(json.dumps({"gamma": 0.8, "replicas": 64}))
    proc = run_cli("laplace", "--measure", files["grid"], "--config", cfg,
                   "--gamma", 0.3, "--t", 1.0, "--seed", SEED,
                   "--no-timestamp")
    rep = report(proc)
    # flags beat the config file; the file beats built-in defaults
    assert rep["config"]["gamma"] == 0.3
    assert rep["config"]["replicas"] == 64


# -------------------------------------------------------------- verify-bound


def test_verify_bound_trivial_warning(files):
    csv_path = files["root"] / "bound.csv"
    proc = run_cli("verify-bound", "--measure", files["grid"], "--gamma", 0.8,
                   "--d", 2.0, "--l2", "--replicas", 200, "--seed", SEED,
                   "--csv", csv_path, "--no-timestamp")
    assert proc.returncode == 0
    rep = report(proc)
    assert rep["bound"]["verdict"] is True
    assert "warning" in rep
    lines = csv_path.read_text().splitlines()
    assert len(lines) == 26
    assert not lines[1].endswith(",")


def test_verify_bound_exit_mirrors_verdict(files):
    # general (non square-integrable) branch with an empirical threshold;
    # whatever the verdict, the exit code must agree with it
    proc = run_cli("verify-bound", "--measure", files["small"], "--gamma", 0.7,
                   "--d", 1.0, "--beta", 0.9, "--delta", 1.0,
                   "--replicas", 64, "--seed", 3, "--no-timestamp")
    assert proc.returncode in (0, 1)
    rep = report(proc)
    assert (proc.returncode == 0) == rep["bound"]["verdict"]


# ----------------------------------------------------------- verify-identity


def test_verify_identity_pass(files):
    proc = run_cli("verify-identity", "--measure", files["grid"],
                   "--gamma", 0.8, "--gamma-prime", 0.8, "--replicas", 50,
                   "--seed", SEED, "--no-timestamp")
    assert proc.returncode == 0
    rep = report(proc)
    assert rep["max_rel_err"] <= 1e-10
    assert rep["pass"] is True


def test_verify_identity_impossible_tolerance(files):
    proc = run_cli("verify-identity", "--measure", files["grid"],
                   "--gamma", 0.8, "--gamma-prime", 0.8, "--replicas", 50,
                   "--seed", SEED, "--tolerance", 1e-30, "--no-timestamp")
    assert proc.returncode == 1
    assert report(proc)["pass"] is False


# -------------------------------------------------------- change of measure


def test_verify_change_of_measure_atom_value(files):
    proc = run_cli("verify-change-of-measure", "--measure", files["single"],
                   "--gamma-prime", 0.7, "--statistic", "atom-value",
                   "--replicas", 2000, "--seed", 5, "--no-timestamp")
    assert proc.returncode == 0
    rep = report(proc)
    assert rep["change_of_measure"]["overlap"] is True


def test_verify_change_of_measure_mass_default(files):
    proc = run_cli("verify-change-of-measure", "--measure", files["grid"],
                   "--gamma-prime", 0.6, "--replicas", 500, "--seed", 11,
                   "--no-timestamp")
    assert proc.returncode == 0
    rep = report(proc)
    assert rep["config"]["statistic"] == "mass"
    assert rep["config"]["gamma"] == 0.6
    assert rep["config"]["cap"] == 10.0


# --------------------------------------------------------------- verify-ineq


def test_verify_ineq_markov(files):
    proc = run_cli("verify-ineq", "--which", "markov", "--measure",
                   files["small"], "--radii", "0.5,0.7,0.9", "--no-timestamp")
    assert proc.returncode == 0
    verdicts = report(proc)["verdicts"]
    assert len(verdicts) == 3
    assert all(v["pass"] for v in verdicts)
    assert verdicts[0]["name"] == "markov_psd(r=0.5)"


def test_verify_ineq_fkg(files):
    proc = run_cli("verify-ineq", "--which", "fkg", "--measure", files["small"],
                   "--gamma", 0.8, "--s", 1.0, "--t", 2.0, "--replicas", 2000,
                   "--seed", SEED, "--no-timestamp")
    assert proc.returncode == 0
    assert report(proc)["verdicts"][0]["pass"] is True


def test_verify_ineq_kahane(files):
    proc = run_cli("verify-ineq", "--which", "kahane", "--measure",
                   files["cantor"], "--gamma", 0.6, "--r-inner", 0.5,
                   "--t", 5.0, "--replicas", 2000, "--seed", SEED,
                   "--no-timestamp")
    assert proc.returncode == 0
    rep = report(proc)
    assert rep["verdicts"][0]["pass"] is True
    # the regularization scale actually used is echoed back
    assert rep["config"]["epsilon"] > 0


# ---------------------------------------------------------------- split/tail


def test_split_feasible(files):
    proc = run_cli("split", "--measure", files["quad"], "--no-timestamp")
    assert proc.returncode == 0
    rep = report(proc)
    assert rep["split"]["margin"] > 0
    assert rep["split"]["lower_mass"] >= rep["total_mass"] / 4
    assert rep["split"]["upper_mass"] >= rep["total_mass"] / 4


def test_split_infeasible(files):
    proc = run_cli("split", "--measure", files["heavy"], "--no-timestamp")
    assert proc.returncode == 2
    assert proc.stderr.startswith("error:")


def test_tail_gamma_zero(files):
    proc = run_cli("tail", "--measure", files["grid"], "--gamma", 0.0,
                   "--eps", 0.5, "--replicas", 20, "--seed", SEED,
                   "--no-timestamp")
    assert proc.returncode == 0
    rep = report(proc)
    assert rep["tail"]["frequencies"] == [0.0]


# ------------------------------------------------------------ error handling


def test_missing_measure_file(files):
    proc = run_cli("laplace", "--measure", files["root"] / "nope.csv",
                   "--gamma", 0.5, "--t", 1.0, "--no-timestamp")
    assert proc.returncode == 2
    assert proc.stderr.startswith("error:")


def test_missing_required_parameter(files):
    proc = run_cli("laplace", "--measure", files["grid"], "--t", 1.0,
                   "--no-timestamp")
    assert proc.returncode == 2
    assert "gamma" in proc.stderr


def test_unknown_flag():
    proc = run_cli("laplace", "--bogus", 1)
    assert proc.returncode == 2


def test_out_writes_file(files):
    out = files["root"] / "report.json"
    proc = run_cli("energy", "--measure", files["grid"], "--d", 1.0,
                   "--out", out, "--no-timestamp")
    assert proc.returncode == 0
    assert proc.stdout == ""
    assert json.loads(out.read_text())["command"] == "energy"


# ------------------------------------------------------------- thread parity


@pytest.mark.parametrize("argv", [
    ("laplace", "--gamma", "0.8", "--t", "1.0,5.0", "--replicas", "300"),
    ("verify-bound", "--gamma", "0.8", "--d", "2.0", "--l2",
     "--replicas", "120"),
])
def test_reports_identical_across_threads(files, argv):
    base = (*argv, "--measure", str(files["grid"]), "--seed", str(SEED),
            "--no-timestamp")
    one = run_cli(*base, "--threads", 1)
    three = run_cli(*base, "--threads", 3)
    assert one.stdout == three.stdout
    assert one.returncode == three.returncode
