"""Command-line interface: output formats, exit codes, determinism."""

import json
import math

import numpy as np
import pytest

from lindblad_osc import densmat, moments, quasiprob
from lindblad_osc.charfunc import char_widths, evaluate_char
from lindblad_osc.cli import main
from lindblad_osc.params import OscillatorParams

from helpers import gibbs_params

# thermal demo parameters: lambda=0.5, mu=0.2, coth=2 (sigma_qq = sigma_pp = 1)
GIBBS_FLAGS = ["--lambda", "0.5", "--mu", "0.2", "--d-qq", "0.3", "--d-pp", "0.7"]
# the same parameters as the CLI resolves them (flag literals, not derived
# expressions, so comparisons against library output can be bit-exact)
CLI_GIBBS = OscillatorParams(m=1.0, omega=1.0, hbar=1.0, lam=0.5, mu=0.2,
                             d_qq=0.3, d_pp=0.7, d_pq=0.0)


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    """Return (config dict, column names, list of float rows, trailer comments)."""
    config = None
    header = None
    rows = []
    trailers = []
    for line in text.splitlines():
        if line.startswith("# config: "):
            config = json.loads(line[len("# config: "):])
        elif line.startswith("#"):
            trailers.append(line)
        elif header is None:
            header = line.split(",")
        elif line:
            rows.append([float(v) for v in line.split(",")])
    return config, header, rows, trailers


def test_simulate_reaches_thermal_values(capsys):
    code, out, _ = run_cli(
        ["simulate", *GIBBS_FLAGS, "--state", "coherent:0.5,0",
         "--t-max", "40", "--n-points", "11"],
        capsys,
    )
    assert code == 0
    config, header, rows, _ = parse_csv(out)
    assert header == ["t", "sigma_q", "sigma_p", "sigma_qq", "sigma_pp", "sigma_pq", "energy"]
    assert config["params"]["lambda"] == 0.5
    assert config["n_points"] == 11
    assert len(rows) == 11
    t, sq, sp, sqq, spp, spq, energy = rows[-1]
    assert t == 40.0
    assert abs(sq) < 1e-8 and abs(sp) < 1e-8
    assert sqq == pytest.approx(1.0, abs=1e-6)
    assert spp == pytest.approx(1.0, abs=1e-6)
    assert abs(spq) < 1e-6
    assert energy == pytest.approx(1.0, abs=1e-6)


def test_simulate_initial_row_is_coherent_state(capsys):
    code, out, _ = run_cli(
        ["simulate", *GIBBS_FLAGS, "--state", "coherent:0.5,0",
         "--t-max", "1", "--n-points", "3"],
        capsys,
    )
    assert code == 0
    _, _, rows, _ = parse_csv(out)
    t0 = rows[0]
    assert t0[0] == 0.0
    assert t0[1] == pytest.approx(math.sqrt(2.0) * 0.5, rel=1e-15)  # sigma_q
    assert t0[3] == 0.5 and t0[4] == 0.5 and t0[5] == 0.0


def test_simulate_outputs_subset(capsys):
    code, out, _ = run_cli(
        ["simulate", *GIBBS_FLAGS, "--t-max", "1", "--n-points", "2",
         "--outputs", "energy"],
        capsys,
    )
    assert code == 0
    _, header, rows, _ = parse_csv(out)
    assert header == ["t", "energy"]
    assert len(rows[0]) == 2


def test_simulate_rejects_grid_like_outputs(capsys):
    code, _, err = run_cli(
        ["simulate", *GIBBS_FLAGS, "--outputs", "density"], capsys
    )
    assert code == 1
    assert "density" in err


def test_simulate_zero_horizon_is_usage_error(capsys):
    code, _, err = run_cli(["simulate", *GIBBS_FLAGS, "--t-max", "0"], capsys)
    assert code == 1
    assert "t_max" in err


def test_unknown_flag_exits_one(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--bogus-flag", "1"])
    assert exc.value.code == 1
    capsys.readouterr()


def test_no_subcommand_returns_one(capsys):
    assert main([]) == 1
    capsys.readouterr()


def test_simulate_output_file_determinism(tmp_path, capsys):
    argv = ["simulate", *GIBBS_FLAGS, "--state", "coherent:0.3,-0.2",
            "--t-max", "7", "--n-points", "29"]
    f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(argv + ["-o", str(f1)]) == 0
    assert main(argv + ["--output", str(f2)]) == 0
    capsys.readouterr()
    b1, b2 = f1.read_bytes(), f2.read_bytes()
    assert b1 == b2
    assert b"\r" not in b1


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({
        "params": {"lambda": 0.3, "d_qq": 0.2, "d_pp": 0.2},
        "t_max": 5.0,
        "n_points": 3,
        "outputs": ["energy"],
    }))
    code, out, _ = run_cli(
        ["simulate", "--config", str(cfg), "--lambda", "0.5"], capsys
    )
    assert code == 0
    config, header, rows, _ = parse_csv(out)
    assert config["params"]["lambda"] == 0.5  # flag wins over file
    assert config["params"]["d_qq"] == 0.2
    assert config["t_max"] == 5.0
    assert header == ["t", "energy"]
    assert len(rows) == 3


def test_config_file_unknown_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"params": {}, "horizon": 3}))
    code, _, err = run_cli(["simulate", "--config", str(cfg)], capsys)
    assert code == 1
    assert "horizon" in err


def test_strict_mode_blocks_unphysical_diffusion(capsys):
    violating = ["--lambda", "0.2", "--mu", "0.2", "--d-pp", "0.2"]  # d_qq = 0
    code, _, err = run_cli(["simulate", *violating, "--strict"], capsys)
    assert code == 2
    assert "constraint" in err
    # without --strict the run is allowed
    code, _, _ = run_cli(
        ["simulate", *violating, "--t-max", "1", "--n-points", "2"], capsys
    )
    assert code == 0


def test_steady_json_matches_library(capsys):
    code, out, _ = run_cli(["steady", *GIBBS_FLAGS], capsys)
    assert code == 0
    data = json.loads(out)

    cov = moments.asymptotic_covariances(CLI_GIBBS)
    # JSON float round trip is exact, so these match bit for bit
    assert data["covariances"]["sigma_qq"] == cov.sigma_qq
    assert data["covariances"]["sigma_pp"] == cov.sigma_pp
    assert data["covariances"]["sigma_pq"] == cov.sigma_pq
    assert data["energy"] == moments.asymptotic_energy(CLI_GIBBS)
    assert data["energy"] == pytest.approx(1.0, rel=1e-12)
    assert data["asymptotic_constraint"]["ok"] is True
    assert data["constraints"]["all_satisfied"] is True

    reps = data["representations"]
    assert set(reps) == {"p", "wigner", "q"}
    for name, diag in (("p", 0.25), ("wigner", 0.5), ("q", 0.75)):
        entry = reps[name]
        assert entry["mean"] == [0.0, 0.0]
        assert entry["positive_definite"] is True
        got = np.array(entry["cov"])
        assert got == pytest.approx(diag * np.eye(2), rel=1e-12, abs=1e-15)
    assert reps["p"]["s"] == 1.0 and reps["wigner"]["s"] == 0.0 and reps["q"]["s"] == -1.0


def test_steady_without_relaxation_exits_three(capsys):
    code, _, err = run_cli(
        ["steady", "--lambda", "0", "--d-qq", "0.1", "--d-pp", "0.1"], capsys
    )
    assert code == 3
    assert "relaxing fixed point" in err


def test_steady_s_list_subset(capsys):
    code, out, _ = run_cli(["steady", *GIBBS_FLAGS, "--s-list", "wigner"], capsys)
    assert code == 0
    data = json.loads(out)
    assert set(data["representations"]) == {"wigner"}


def test_density_matrix_packet(capsys):
    code, out, _ = run_cli(
        ["density-matrix", *GIBBS_FLAGS, "--state", "coherent:0.6", "--n", "10"],
        capsys,
    )
    assert code == 0
    data = json.loads(out)
    assert data["dim"] == 10 and data["t"] == 0.0
    got = np.array([[e["re"] + 1j * e["im"] for e in row] for row in data["entries"]])
    expected = densmat.density_matrix_from_coeffs(densmat.packet_coeffs(0.6 + 0j), 10).entries
    assert np.max(np.abs(got - expected)) == 0.0
    assert data["trace"]["re"] == pytest.approx(1.0, abs=1e-10)


def test_density_alias_and_evolution(capsys):
    argv_tail = [*GIBBS_FLAGS, "--state", "coherent:0.8,0", "--t", "1.3", "--n", "8"]
    code, out_full, _ = run_cli(["density-matrix", *argv_tail], capsys)
    assert code == 0
    code, out_alias, _ = run_cli(["density", *argv_tail], capsys)
    assert code == 0
    data = json.loads(out_full)
    got = np.array([[e["re"] + 1j * e["im"] for e in row] for row in data["entries"]])

    coeffs = densmat.evolve_genfunc_coeffs(CLI_GIBBS, densmat.packet_coeffs(0.8 + 0j), 1.3)
    expected = densmat.density_matrix_from_coeffs(coeffs, 8).entries
    assert np.max(np.abs(got - expected)) == 0.0
    # alias output only differs in the echoed command name
    assert json.loads(out_alias)["entries"] == data["entries"]


def test_density_matrix_stationary(capsys):
    code, out, _ = run_cli(
        ["density-matrix", *GIBBS_FLAGS, "--state", "stationary", "--n", "12"], capsys
    )
    assert code == 0
    data = json.loads(out)
    got = np.array([[e["re"] + 1j * e["im"] for e in row] for row in data["entries"]])
    expected = densmat.density_matrix_from_coeffs(densmat.stationary_coeffs(CLI_GIBBS), 12).entries
    assert np.max(np.abs(got - expected)) == 0.0


def test_distribution_steady_normalization(capsys):
    code, out, _ = run_cli(
        ["distribution", "--rep", "wigner", "--steady", *GIBBS_FLAGS,
         "--grid=-6,6,241"],
        capsys,
    )
    assert code == 0
    config, header, rows, _ = parse_csv(out)
    assert header == ["x1", "x2", "value"]
    assert config["rep"] == "wigner" and config["at"] == "steady"
    assert len(rows) == 241 * 241
    h = 12.0 / 240.0
    values = np.array([r[2] for r in rows])
    assert values.sum() * h * h == pytest.approx(1.0, abs=1e-6)
    # thermal Wigner peak 1/(2 pi sqrt(det)), det = 0.25
    assert values.max() == pytest.approx(1.0 / math.pi, rel=1e-6)


def test_distribution_at_time_zero_coherent(capsys):
    code, out, _ = run_cli(
        ["distribution", "--rep", "q", "--t", "0", "--state", "coherent:1,0",
         *GIBBS_FLAGS, "--grid=-6,6,121"],
        capsys,
    )
    assert code == 0
    _, _, rows, _ = parse_csv(out)
    h = 12.0 / 120.0
    values = np.array([r[2] for r in rows])
    assert values.sum() * h * h == pytest.approx(1.0, abs=1e-6)
    # Husimi function of a coherent state peaks at (Re alpha, Im alpha)
    peak = max(rows, key=lambda r: r[2])
    assert peak[0] == pytest.approx(1.0, abs=1e-12)
    assert peak[1] == pytest.approx(0.0, abs=1e-12)


def test_distribution_flag_validation(capsys):
    code, _, err = run_cli(
        ["distribution", "--rep", "wigner", "--steady", "--t", "1", *GIBBS_FLAGS],
        capsys,
    )
    assert code == 1 and "exclusive" in err
    code, _, err = run_cli(
        ["distribution", "--rep", "husimi", "--steady", *GIBBS_FLAGS], capsys
    )
    assert code == 1 and "husimi" in err
    code, _, err = run_cli(
        ["distribution", "--rep", "q", "--steady", *GIBBS_FLAGS, "--grid", "1,0,10"],
        capsys,
    )
    assert code == 1 and "--grid" in err


def test_distribution_glauber_p_can_fail_positivity(capsys):
    # coth = 1 bath: the P representation of the steady state degenerates
    code, _, err = run_cli(
        ["distribution", "--rep", "p", "--steady",
         "--lambda", "0.5", "--d-qq", "0.25", "--d-pp", "0.25"],
        capsys,
    )
    assert code == 1
    assert "positive" in err.lower()


def test_charfunc_at_origin_is_one(capsys):
    code, out, _ = run_cli(
        ["charfunc", *GIBBS_FLAGS, "--lambda-arg", "0", "--t", "0.7",
         "--state", "coherent:0.4,0.1"],
        capsys,
    )
    assert code == 0
    data = json.loads(out)
    assert data["value"]["re"] == 1.0
    assert data["value"]["im"] == 0.0


def test_charfunc_matches_library(capsys):
    code, out, _ = run_cli(
        ["charfunc", *GIBBS_FLAGS, "--lambda-arg", "0.2,-0.1", "--t", "1.2",
         "--state", "coherent:0.5,0.3"],
        capsys,
    )
    assert code == 0
    data = json.loads(out)
    value = evaluate_char(CLI_GIBBS, 0.5 + 0.3j, 0.2 - 0.1j, 1.2)
    widths = char_widths(CLI_GIBBS, 1.2)
    assert data["value"]["re"] == value.real and data["value"]["im"] == value.imag
    assert data["widths"]["f"]["re"] == widths.f.real
    assert data["widths"]["f"]["im"] == widths.f.imag
    assert data["widths"]["h"] == widths.h
    assert data["config"]["lambda_arg"] == {"re": 0.2, "im": -0.1}


def test_charfunc_requires_coherent_state(capsys):
    code, _, err = run_cli(
        ["charfunc", *GIBBS_FLAGS, "--lambda-arg", "0.1", "--state", "stationary"],
        capsys,
    )
    assert code == 1 and "coherent" in err


def test_validate_single_model(capsys):
    code, out, _ = run_cli(["validate", "--model", "jang-rwa"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["model"] == "jang-rwa"
    assert data["verdict"] == "satisfied"
    assert data["consistent"] is True
    assert data["params"]["lambda"] == pytest.approx(0.2, rel=1e-15)


def test_validate_model_with_overrides_and_strict(capsys):
    argv = ["validate", "--model", "gibbs", "--set", "coth=1", "--set", "mu=0.4"]
    code, out, _ = run_cli(argv, capsys)
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "violated"
    assert data["condition_holds"] is False
    assert data["consistent"] is True
    assert data["config"]["set"] == {"coth": 1.0, "mu": 0.4}
    code, _, _ = run_cli(argv + ["--strict"], capsys)
    assert code == 2


def test_validate_all_catalog(capsys):
    code, out, _ = run_cli(["validate", "--all", "--strict"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["all_consistent"] is True
    assert len(data["reports"]) == 11
    verdicts = {r["model"]: r["verdict"] for r in data["reports"]}
    assert verdicts["hofmann"] == "violated"
    assert verdicts["jang-rwa"] == "satisfied"


def test_validate_raw_params(capsys):
    code, out, _ = run_cli(
        ["validate", "--lambda", "0.2", "--d-qq", "0.3", "--d-pp", "0.3"], capsys
    )
    assert code == 0
    assert json.loads(out)["verdict"] == "satisfied"
    code, _, _ = run_cli(
        ["validate", "--lambda", "0.2", "--d-pp", "0.3", "--strict"], capsys
    )
    assert code == 2


def test_validate_unknown_model(capsys):
    code, _, err = run_cli(["validate", "--model", "nope"], capsys)
    assert code == 1 and "unknown model" in err
    code, _, err = run_cli(["validate", "--all", "--model", "gibbs"], capsys)
    assert code == 1 and "exclusive" in err


def test_sweep_grid_and_no_steady_rows(capsys):
    code, out, _ = run_cli(
        ["sweep", "--lambda-range", "0,0.4,2", "--mu-range", "0,0.1,2",
         "--temp-range", "0.8,1.2,2", "--jobs", "1"],
        capsys,
    )
    assert code == 0
    config, header, rows, _ = parse_csv(out)
    assert header == ["lambda", "mu", "temperature", "coth", "constraints_satisfied",
                      "steady_state", "sigma_qq_inf", "sigma_pp_inf", "sigma_pq_inf",
                      "energy_inf"]
    assert len(rows) == 8
    assert config["jobs"] == 1
    for row in rows:
        lam, mu, temp, coth = row[:4]
        assert coth == pytest.approx(1.0 / math.tanh(1.0 / (2.0 * temp)), rel=1e-12)
        if lam == 0.0:
            assert row[5] == 0.0  # no steady state
            assert all(math.isnan(v) for v in row[6:])
        else:
            assert row[5] == 1.0
            assert all(math.isfinite(v) for v in row[6:])
    # spot check one relaxing row against the library
    lam, mu, temp = 0.4, 0.0, 0.8
    coth = 1.0 / math.tanh(1.0 / (2.0 * temp))
    cov = moments.asymptotic_covariances(gibbs_params(lam, mu, coth))
    match = [r for r in rows if r[0] == lam and r[1] == mu and r[2] == temp]
    assert len(match) == 1
    assert match[0][6] == pytest.approx(cov.sigma_qq, rel=1e-12)


def test_sweep_parallel_output_identical(tmp_path, capsys, monkeypatch):
    argv = ["sweep", "--lambda-range", "0.3,0.6,2", "--mu-range", "0,0.1,2",
            "--temp-range", "0.5,1.0,2"]
    serial, parallel = tmp_path / "serial.csv", tmp_path / "par.csv"
    monkeypatch.delenv("LINDBLAD_OSC_JOBS", raising=False)
    assert main(argv + ["--jobs", "1", "-o", str(serial)]) == 0
    monkeypatch.setenv("LINDBLAD_OSC_JOBS", "2")
    assert main(argv + ["-o", str(parallel)]) == 0
    capsys.readouterr()
    s_lines = serial.read_text().splitlines()
    p_lines = parallel.read_text().splitlines()
    # config comments echo the job count; every data row must be identical
    assert s_lines[1:] == p_lines[1:]
    assert json.loads(s_lines[0][len("# config: "):])["jobs"] == 1
    assert json.loads(p_lines[0][len("# config: "):])["jobs"] == 2


def test_sweep_flag_validation(capsys, monkeypatch):
    monkeypatch.delenv("LINDBLAD_OSC_JOBS", raising=False)
    base = ["sweep", "--lambda-range", "0.2,0.4,2", "--mu-range", "0,0.1,2"]
    code, _, err = run_cli(base + ["--temp-range", "0,1,2"], capsys)
    assert code == 1 and "temp" in err
    code, _, err = run_cli(base + ["--temp-range", "0.5,1,2", "--jobs", "0"], capsys)
    assert code == 1 and "jobs" in err
    monkeypatch.setenv("LINDBLAD_OSC_JOBS", "soon")
    code, _, err = run_cli(base + ["--temp-range", "0.5,1,2"], capsys)
    assert code == 1 and "LINDBLAD_OSC_JOBS" in err


def test_simulate_oracle_deviation_column(tmp_path, capsys):
    out_file = tmp_path / "oracle.csv"
    code = main(
        ["simulate", "--lambda", "0.4", "--d-qq", "0.2", "--d-pp", "0.2",
         "--state", "coherent:0.7,0", "--t-max", "1", "--n-points", "5",
         "--oracle", "--oracle-dim", "60", "--oracle-step", "0.001",
         "-o", str(out_file)]
    )
    captured = capsys.readouterr()
    assert code == 0
    config, header, rows, trailers = parse_csv(out_file.read_text())
    assert header[-5:] == ["trace_err", "herm_err", "min_eig", "tail_mass", "dev_max"]
    assert config["oracle"] is True and config["oracle_dim"] == 60
    devs = [row[-1] for row in rows]
    trailer = [t for t in trailers if t.startswith("# oracle_max_deviation: ")]
    assert len(trailer) == 1
    max_dev = float(trailer[0].split(": ")[1])
    assert max_dev == max(devs)
    assert max_dev < 1e-6
    for row in rows:
        trace_err, herm_err, min_eig, tail_mass = row[-5:-1]
        assert trace_err < 1e-8 and herm_err < 1e-10
        assert min_eig > -1e-10 and tail_mass < 1e-10
    # the summary line is echoed to stdout when writing to a file
    assert "oracle max deviation" in captured.out


def test_simulate_oracle_needs_coherent_state(capsys):
    code, _, err = run_cli(
        ["simulate", *GIBBS_FLAGS, "--state", "stationary", "--oracle",
         "--t-max", "1", "--n-points", "2"],
        capsys,
    )
    assert code == 1
    assert "coherent" in err
