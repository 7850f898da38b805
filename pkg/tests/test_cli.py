import json

import numpy as np
import pytest

from segalquant import construct_unique_realization, FrequencySpec
from segalquant.cli import main


def write_config(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def run(argv, capsys):
    rc = main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def single_mode(omega=2.0):
    return {"spec": {"discrete": [{"omega": omega, "mult": 1}]}}


class TestVerify:
    def test_passes_with_report(self, tmp_path, capsys):
        cfg = write_config(tmp_path, single_mode())
        rc, out, err = run(["verify", "--config", cfg], capsys)
        assert rc == 0
        report = json.loads(out)
        assert report["version"] == "1"
        assert report["command"] == "verify"
        assert report["summary"] == {"pass": True, "failed": []}
        names = [c["name"] for c in report["checks"]]
        assert "metric-positivity" in names
        assert "flow-oracle-agreement" in names
        assert len(names) == 12
        assert all(c["pass"] for c in report["checks"])
        assert np.allclose(report["matrices"]["G"], [[0.5, 0.0], [0.0, 2.0]])

    def test_tolerance_from_config(self, tmp_path, capsys):
        payload = single_mode()
        payload["tolerance"] = 1e-3
        cfg = write_config(tmp_path, payload)
        rc, out, _ = run(["verify", "--config", cfg], capsys)
        report = json.loads(out)
        assert rc == 0
        assert report["config"]["tolerance"] == 1e-3
        assert report["checks"][0]["tolerance"] == 1e-3

    def test_identity_metric_fails_axioms(self, tmp_path, capsys):
        payload = single_mode()
        payload["metric_override"] = "identity"
        cfg = write_config(tmp_path, payload)
        rc, out, _ = run(["verify", "--config", cfg], capsys)
        assert rc == 1
        report = json.loads(out)
        failed = report["summary"]["failed"]
        assert "generator-antisymmetry" in failed
        assert "flow-unitarity" in failed
        assert report["config"]["metric_override"] == "identity"

    def test_explicit_metric_override(self, tmp_path, capsys):
        real = construct_unique_realization(
            FrequencySpec(discrete=((2.0, 1),))
        )
        payload = single_mode()
        payload["metric_override"] = real.G.tolist()
        cfg = write_config(tmp_path, payload)
        rc, out, _ = run(["verify", "--config", cfg], capsys)
        assert rc == 0
        assert json.loads(out)["config"]["metric_override"] == "explicit"

    def test_matrix_gate_and_full_matrices_flag(self, tmp_path, capsys):
        payload = {"spec": {"discrete": [{"omega": 1.0, "mult": 33}]}}
        cfg = write_config(tmp_path, payload)
        rc, out, _ = run(["verify", "--config", cfg], capsys)
        assert rc == 0
        assert "omitted" in json.loads(out)["matrices"]
        rc, out, _ = run(["verify", "--config", cfg, "--full-matrices"], capsys)
        report = json.loads(out)
        assert len(report["matrices"]["G"]) == 66


class TestInvalidInput:
    def test_nonpositive_frequency(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"spec": {"discrete": [{"omega": -1.0, "mult": 1}]}})
        rc, out, err = run(["verify", "--config", cfg], capsys)
        assert rc == 2
        assert out == ""
        assert err.startswith("error:")
        assert "frequency" in err

    def test_unknown_config_key(self, tmp_path, capsys):
        payload = single_mode()
        payload["bogus"] = 1
        cfg = write_config(tmp_path, payload)
        rc, _, err = run(["verify", "--config", cfg], capsys)
        assert rc == 2
        assert "bogus" in err

    def test_missing_config_file(self, tmp_path, capsys):
        rc, _, err = run(["verify", "--config", str(tmp_path / "nope.json")], capsys)
        assert rc == 2
        assert "cannot read config" in err

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        rc, _, err = run(["verify", "--config", str(path)], capsys)
        assert rc == 2
        assert "not valid JSON" in err

    def test_missing_spec_block(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"tolerance": 1e-9})
        rc, _, err = run(["verify", "--config", cfg], capsys)
        assert rc == 2
        assert "spec" in err


class TestUniqueness:
    def payload(self, restarts=16, seed=0):
        return {
            "spec": {"discrete": [{"omega": 1.0, "mult": 1}, {"omega": 2.0, "mult": 1}]},
            "scan": {"restarts": restarts, "seed": seed},
        }

    def test_singleton_certificate(self, tmp_path, capsys):
        cfg = write_config(tmp_path, self.payload())
        rc, out, _ = run(["uniqueness", "--config", cfg], capsys)
        assert rc == 0
        report = json.loads(out)
        assert report["scan"]["clusters"] == 1
        assert report["scan"]["diagnostics"]["converged"] == 16
        names = {c["name"]: c for c in report["checks"]}
        assert names["cluster-count-is-one"]["pass"]
        assert names["closed-form-metric-distance"]["residual"] <= 1e-8

    def test_seed_flag_overrides_config(self, tmp_path, capsys):
        cfg = write_config(tmp_path, self.payload(seed=3))
        rc, out, _ = run(["uniqueness", "--config", cfg, "--seed", "7"], capsys)
        assert rc == 0
        assert json.loads(out)["config"]["scan"]["seed"] == 7

    def test_deterministic_up_to_timings(self, tmp_path, capsys):
        cfg = write_config(tmp_path, self.payload())
        out1 = str(tmp_path / "r1.json")
        out2 = str(tmp_path / "r2.json")
        assert run(["uniqueness", "--config", cfg, "--out", out1], capsys)[0] == 0
        assert run(["uniqueness", "--config", cfg, "--out", out2], capsys)[0] == 0
        r1 = json.loads(open(out1).read())
        r2 = json.loads(open(out2).read())
        r1.pop("timings")
        r2.pop("timings")
        assert r1 == r2

    def test_out_leaves_stdout_empty(self, tmp_path, capsys):
        cfg = write_config(tmp_path, self.payload())
        out_path = str(tmp_path / "report.json")
        rc, out, _ = run(["uniqueness", "--config", cfg, "--out", out_path], capsys)
        assert rc == 0
        assert out == ""
        assert json.loads(open(out_path).read())["command"] == "uniqueness"


class TestEvolve:
    def test_quarter_period_row(self, tmp_path, capsys):
        payload = single_mode(omega=2.0)
        payload["t_grid"] = [np.pi / 4]
        payload["x0"] = {"p": [2.0], "q": [0.0]}
        cfg = write_config(tmp_path, payload)
        rc, out, _ = run(["evolve", "--config", cfg], capsys)
        assert rc == 0
        report = json.loads(out)
        assert report["table"]["columns"][:3] == ["t", "p1", "q1"]
        row = report["table"]["rows"][0]
        assert row[0] == pytest.approx(np.pi / 4)
        assert row[1] == pytest.approx(0.0, abs=1e-12)
        assert row[2] == pytest.approx(1.0, abs=1e-12)

    def test_drift_checks_pass(self, tmp_path, capsys):
        payload = {"spec": {"discrete": [{"omega": 0.5, "mult": 1}, {"omega": 3.0, "mult": 2}]}}
        payload["x0"] = {"p": [1.0, 0.2, -0.4], "q": [0.0, 1.0, 0.3]}
        cfg = write_config(tmp_path, payload)
        rc, out, _ = run(["evolve", "--config", cfg], capsys)
        assert rc == 0
        report = json.loads(out)
        assert {c["name"] for c in report["checks"]} == {
            "norm-drift", "symplectic-drift", "energy-drift",
        }

    def test_missing_x0(self, tmp_path, capsys):
        cfg = write_config(tmp_path, single_mode())
        rc, _, err = run(["evolve", "--config", cfg], capsys)
        assert rc == 2
        assert "x0" in err

    def test_wrong_length_x0(self, tmp_path, capsys):
        payload = single_mode()
        payload["x0"] = {"p": [1.0, 2.0], "q": [0.0, 0.0]}
        cfg = write_config(tmp_path, payload)
        rc, _, err = run(["evolve", "--config", cfg], capsys)
        assert rc == 2


class TestFock:
    def test_spectrum_and_checks(self, tmp_path, capsys):
        payload = single_mode(omega=2.0)
        payload["fock"] = {"cutoff": 3, "t": np.pi / 2}
        cfg = write_config(tmp_path, payload)
        rc, out, _ = run(["fock", "--config", cfg], capsys)
        assert rc == 0
        report = json.loads(out)
        assert report["fock"]["dimension"] == 4
        assert report["fock"]["spectrum"] == [0.0, 2.0, 4.0, 6.0]
        assert report["fock"]["top_shell_ccr_deviation"] > 0
        phase = report["fock"]["one_particle_phases"][0]
        assert phase[0] == pytest.approx(-1.0, abs=1e-12)  # exp(-i*2*(pi/2))
        assert phase[1] == pytest.approx(0.0, abs=1e-12)
        assert all(c["pass"] for c in report["checks"])

    def test_budget_guard(self, tmp_path, capsys):
        payload = {"spec": {"discrete": [{"omega": 1.0, "mult": 3}]}}
        payload["fock"] = {"cutoff": 40, "max_dim": 100}
        cfg = write_config(tmp_path, payload)
        rc, _, err = run(["fock", "--config", cfg], capsys)
        assert rc == 2
        assert "12341" in err

    def test_missing_cutoff(self, tmp_path, capsys):
        payload = single_mode()
        payload["fock"] = {"t": 1.0}
        cfg = write_config(tmp_path, payload)
        rc, _, err = run(["fock", "--config", cfg], capsys)
        assert rc == 2
        assert "cutoff" in err


class TestDomainCheck:
    def test_matched_weights_pass(self, tmp_path, capsys):
        payload = {"spec": {"continuous": {"interval": [0.5, 60.0], "nodes": 40}}}
        payload["domain_check"] = {
            "rho": "omega_pow:-0.5",
            "sigma": "omega_pow:0.5",
            "t_grid": [0.25, 1.0, 3.0],
        }
        cfg = write_config(tmp_path, payload)
        rc, out, _ = run(["domain-check", "--config", cfg], capsys)
        assert rc == 0
        report = json.loads(out)
        assert report["domain"]["sup1"] <= 1.0 + 1e-12
        assert report["domain"]["sup2"] <= 1.0 + 1e-12

    def test_flat_weights_fail(self, tmp_path, capsys):
        payload = {"spec": {"discrete": [{"omega": 50.0, "mult": 1}]}}
        payload["domain_check"] = {"rho": "omega_pow:0", "sigma": "omega_pow:0", "t_grid": [1.0]}
        cfg = write_config(tmp_path, payload)
        rc, out, _ = run(["domain-check", "--config", cfg], capsys)
        assert rc == 1
        report = json.loads(out)
        assert report["domain"]["sup1"] > 1.0
        assert not report["summary"]["pass"]

    def test_explicit_samples(self, tmp_path, capsys):
        payload = {"spec": {"discrete": [{"omega": 1.0, "mult": 1}, {"omega": 4.0, "mult": 1}]}}
        payload["domain_check"] = {"rho": [1.0, 0.5], "sigma": [1.0, 2.0], "t_grid": [1.0]}
        cfg = write_config(tmp_path, payload)
        rc, out, _ = run(["domain-check", "--config", cfg], capsys)
        assert rc == 0
        assert json.loads(out)["config"]["domain_check"]["rho"] == [1.0, 0.5]

    def test_bad_weight_string(self, tmp_path, capsys):
        payload = single_mode()
        payload["domain_check"] = {"rho": "cubic", "sigma": "omega_pow:1"}
        cfg = write_config(tmp_path, payload)
        rc, _, err = run(["domain-check", "--config", cfg], capsys)
        assert rc == 2
        assert "omega_pow" in err


class TestEnvTolerance:
    def test_env_var_sets_default(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("SEGALQUANT_TOL", "0.5")
        cfg = write_config(tmp_path, single_mode())
        rc, out, _ = run(["verify", "--config", cfg], capsys)
        assert rc == 0
        assert json.loads(out)["config"]["tolerance"] == 0.5

    def test_config_beats_env(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("SEGALQUANT_TOL", "0.5")
        payload = single_mode()
        payload["tolerance"] = 1e-9
        cfg = write_config(tmp_path, payload)
        rc, out, _ = run(["verify", "--config", cfg], capsys)
        assert json.loads(out)["config"]["tolerance"] == 1e-9

    def test_invalid_env_var(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("SEGALQUANT_TOL", "not-a-number")
        cfg = write_config(tmp_path, single_mode())
        rc, _, err = run(["verify", "--config", cfg], capsys)
        assert rc == 2
        assert "SEGALQUANT_TOL" in err
