"""End-to-end tests for the command line scenarios.

Each scenario is driven through ``bifield.cli.main`` with a JSON config in a
temporary directory, and the delimited outputs are read back and checked
against direct library calls.
"""

import json
import subprocess
import sys

import numpy as np
import pytest

from bifield.cli import main
from bifield.grid import DEFAULT_CONTEXT, inv_sqrt_abs_k, make_grid, sqrt_abs_k
from bifield.operators import blip_field_profile, commutator_kernel
from bifield.report import read_curve_csv


def write_config(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def run_scenario(tmp_path, command, config=None, flags=("--no-figures",), out="out"):
    """Invoke the CLI in-process and return (exit code, output directory)."""
    out_dir = tmp_path / out
    argv = [command, "--out", str(out_dir), *flags]
    if config is not None:
        argv += ["--config", write_config(tmp_path, config)]
    return main(argv), out_dir


class TestVerifyScenario:
    def test_full_suite_passes_and_writes_report(self, tmp_path, capsys):
        rc, out = run_scenario(tmp_path, "verify", config={"images": 40})
        assert rc == 0
        assert (out / "report.json").exists()
        assert (out / "checks.csv").exists()
        assert not (out / "report.png").exists()

        report = json.loads((out / "report.json").read_text())
        assert set(report) == {"engine", "grid", "seed", "checks", "summary"}
        assert report["engine"] == "bifield 0.1.0"
        assert report["seed"] == 0
        assert report["summary"] == {"total": 36, "failed": 0}
        ids = [check["check_id"] for check in report["checks"]]
        assert len(ids) == 36
        assert ids == sorted(ids), "checks should be serialized in id order"

        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 37
        for line in lines[:36]:
            assert line.startswith("pass  "), f"unexpected status line: {line}"
        assert lines[-1] == "36/36 checks passed"

    def test_reruns_are_byte_identical(self, tmp_path):
        config = {"images": 40}
        rc_a, out_a = run_scenario(
            tmp_path, "verify", config=config, flags=("--no-figures", "--seed", "3"), out="a"
        )
        rc_b, out_b = run_scenario(
            tmp_path, "verify", config=config, flags=("--no-figures", "--seed", "3"), out="b"
        )
        assert rc_a == rc_b == 0
        assert (out_a / "report.json").read_bytes() == (out_b / "report.json").read_bytes()
        assert (out_a / "checks.csv").read_bytes() == (out_b / "checks.csv").read_bytes()

    def test_figure_rendered_by_default(self, tmp_path):
        rc, out = run_scenario(tmp_path, "verify", config={"images": 40}, flags=())
        assert rc == 0
        assert (out / "report.png").stat().st_size > 0

    def test_tolerance_override_forces_failure_exit(self, tmp_path, capsys):
        config = {"images": 40, "tolerances": {"grid.parseval": 0.0}}
        rc, out = run_scenario(tmp_path, "verify", config=config)
        assert rc == 1
        report = json.loads((out / "report.json").read_text())
        assert report["summary"]["failed"] >= 1
        assert "FAIL  grid.parseval" in capsys.readouterr().out

    def test_seed_comes_from_config_unless_flag_given(self, tmp_path):
        config = {"images": 40, "seed": 5}
        rc, out = run_scenario(tmp_path, "verify", config=config, out="from_config")
        assert rc == 0
        assert json.loads((out / "report.json").read_text())["seed"] == 5

        rc, out = run_scenario(
            tmp_path,
            "verify",
            config=config,
            flags=("--no-figures", "--seed", "9"),
            out="from_flag",
        )
        assert rc == 0
        assert json.loads((out / "report.json").read_text())["seed"] == 9


class TestVerifyConfigErrors:
    def test_missing_config_file(self, tmp_path, capsys):
        rc = main(["verify", "--out", str(tmp_path / "out"), "--config", str(tmp_path / "nope.json")])
        assert rc == 2
        assert capsys.readouterr().err.startswith("error:")
        assert not (tmp_path / "out").exists()

    def test_config_must_be_valid_json(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        rc = main(["verify", "--out", str(tmp_path / "out"), "--config", str(path)])
        assert rc == 2
        assert "not valid JSON" in capsys.readouterr().err

    def test_config_must_be_an_object(self, tmp_path, capsys):
        path = tmp_path / "list.json"
        path.write_text("[1, 2]", encoding="utf-8")
        rc = main(["verify", "--out", str(tmp_path / "out"), "--config", str(path)])
        assert rc == 2
        assert "JSON object" in capsys.readouterr().err

    @pytest.mark.parametrize(
        "config",
        [
            {"modes": 8},
            {"n_modes": 7},
            {"images": 0},
            {"seed": True},
            {"tolerances": 3},
            {"tolerances": {"grid.parseval": True}},
            {"images": 40, "tolerances": {"not.a.check": 1e-6}},
        ],
    )
    def test_bad_configs_exit_without_writing(self, tmp_path, capsys, config):
        rc, out = run_scenario(tmp_path, "verify", config=config)
        assert rc == 2
        assert capsys.readouterr().err.startswith("error:")
        assert not out.exists(), "a rejected config must not leave partial outputs"


class TestPropagateScenario:
    def test_single_branch_lattice_shift(self, tmp_path):
        grid = make_grid(64, 0.25)
        t1 = 8 * grid.delta_x
        config = {"n_modes": 64, "delta_k": 0.25, "family": "blip", "times": [0.0, t1]}
        rc, out = run_scenario(tmp_path, "propagate", config=config)
        assert rc == 0

        data = read_curve_csv(out / "propagate.csv")
        assert list(data) == ["t", "x", "s", "lambda", "re", "im", "abs2"]
        assert len(data["t"]) == 2 * 64
        assert set(data["s"]) == {1}
        assert set(data["lambda"]) == {1}
        assert set(data["t"]) == {0.0, t1}
        assert np.array_equal(data["x"][:64], grid.x_values)

        abs2 = np.asarray(data["abs2"], dtype=float)
        assert np.isclose(abs2[:64].sum(), abs2[64:].sum(), rtol=1e-12)

        summary = json.loads((out / "summary.json").read_text())
        assert summary["family"] == "blip"
        assert summary["branches"] == [1]
        assert summary["two_sided"] is False
        assert summary["mixed_provenance"] is False
        assert summary["max_branch_error"] < 1e-10
        assert summary["shift_samples"] == 8

    def test_two_branch_packet_is_two_sided(self, tmp_path):
        grid = make_grid(64, 0.25)
        config = {
            "n_modes": 64,
            "delta_k": 0.25,
            "s": [1, -1],
            "times": [0.0, 4 * grid.delta_x],
        }
        rc, out = run_scenario(tmp_path, "propagate", config=config)
        assert rc == 0

        data = read_curve_csv(out / "propagate.csv")
        assert len(data["t"]) == 2 * 2 * 64
        assert set(data["s"]) == {1, -1}

        summary = json.loads((out / "summary.json").read_text())
        assert summary["two_sided"] is True
        assert summary["max_branch_error"] < 1e-10
        assert summary["combined_error"] > 1e-2

    def test_bio_local_family_runs(self, tmp_path):
        config = {"n_modes": 32, "delta_k": 0.25, "family": "bio_local"}
        rc, out = run_scenario(tmp_path, "propagate", config=config)
        assert rc == 0
        assert json.loads((out / "summary.json").read_text())["family"] == "bio_local"

    def test_figure_rendered_by_default(self, tmp_path):
        config = {"n_modes": 32, "delta_k": 0.25}
        rc, out = run_scenario(tmp_path, "propagate", config=config, flags=())
        assert rc == 0
        assert (out / "propagate.png").stat().st_size > 0

    @pytest.mark.parametrize(
        "config",
        [
            {"family": "plane"},
            {"s": 0},
            {"s": []},
            {"times": []},
            {"times": ["soon"]},
            {"width": -1.0},
            {"polarization": 3},
        ],
    )
    def test_bad_configs_rejected(self, tmp_path, capsys, config):
        config = {"n_modes": 16, "delta_k": 0.25, **config}
        rc, out = run_scenario(tmp_path, "propagate", config=config)
        assert rc == 2
        assert capsys.readouterr().err.startswith("error:")
        assert not out.exists()


class TestKernelScenario:
    def test_reciprocal_pair_tabulates_a_lattice_delta(self, tmp_path):
        grid = make_grid(8, 0.5)
        config = {
            "n_modes": 8,
            "delta_k": 0.5,
            "weight_1": "sqrt_abs_k",
            "weight_2": "inv_sqrt_abs_k",
        }
        rc, out = run_scenario(tmp_path, "kernel", config=config)
        assert rc == 0

        data = read_curve_csv(out / "kernel.csv")
        assert np.array_equal(data["displacement"], grid.x_values)
        values = np.asarray(data["re"]) + 1j * np.asarray(data["im"])
        assert abs(values[0] - 1.0 / grid.delta_x) < 1e-12
        assert np.max(np.abs(values[1:])) < 1e-12

    def test_csv_matches_direct_kernel_call(self, tmp_path):
        grid = make_grid(10, 0.3)
        config = {"n_modes": 10, "delta_k": 0.3, "s": -1}
        rc, out = run_scenario(tmp_path, "kernel", config=config)
        assert rc == 0

        kernel = commutator_kernel(sqrt_abs_k, sqrt_abs_k, -1, grid)
        data = read_curve_csv(out / "kernel.csv")
        assert np.array_equal(data["re"], kernel.real)
        assert np.array_equal(data["im"], kernel.imag)
        assert np.array_equal(data["abs"], np.abs(kernel))

    def test_unknown_weight_rejected(self, tmp_path, capsys):
        rc, out = run_scenario(tmp_path, "kernel", config={"weight_1": "gaussian"})
        assert rc == 2
        assert capsys.readouterr().err.startswith("error:")
        assert not out.exists()


class TestBlipfieldScenario:
    def test_profile_peaks_at_default_center(self, tmp_path):
        grid = make_grid(16, 0.25)
        rc, out = run_scenario(tmp_path, "blipfield", config={"n_modes": 16, "delta_k": 0.25})
        assert rc == 0

        data = read_curve_csv(out / "blipfield.csv")
        assert np.array_equal(data["x"], grid.x_values)
        profile = blip_field_profile(grid, 8, 1, 1, DEFAULT_CONTEXT)
        assert np.array_equal(data["re"], profile.real)
        assert np.array_equal(data["im"], profile.imag)
        assert int(np.argmax(data["abs"])) == 8

    def test_center_out_of_range_rejected(self, tmp_path, capsys):
        config = {"n_modes": 16, "delta_k": 0.25, "x0_index": 16}
        rc, out = run_scenario(tmp_path, "blipfield", config=config)
        assert rc == 2
        assert capsys.readouterr().err.startswith("error:")
        assert not out.exists()


class TestEnergyScenario:
    def test_energy_integrates_the_density_column(self, tmp_path):
        grid = make_grid(32, 0.25)
        config = {"n_modes": 32, "delta_k": 0.25, "center_k": 2.0, "width_k": 0.5}
        rc, out = run_scenario(tmp_path, "energy", config=config)
        assert rc == 0

        data = read_curve_csv(out / "energy.csv")
        assert np.array_equal(data["k"], grid.k_values)
        abs2 = np.asarray(data["abs2"], dtype=float)
        density = np.asarray(data["energy_density"], dtype=float)
        assert np.allclose(density, np.abs(grid.k_values) * abs2, rtol=1e-14)

        payload = json.loads((out / "energy.json").read_text())
        assert payload["energy"] > 0.0
        assert np.isclose(payload["energy"], grid.delta_k * density.sum(), rtol=1e-12)
        # the packet has essentially no support at k < 0, so the signed
        # generator agrees with the unsigned energy
        assert np.isclose(payload["hamiltonian"], payload["energy"], rtol=1e-4)

    def test_negative_band_flips_the_generator_sign(self, tmp_path):
        config = {"n_modes": 32, "delta_k": 0.25, "center_k": -2.0, "width_k": 0.5}
        rc, out = run_scenario(tmp_path, "energy", config=config)
        assert rc == 0
        payload = json.loads((out / "energy.json").read_text())
        assert np.isclose(payload["hamiltonian"], -payload["energy"], rtol=1e-4)

    def test_width_must_be_positive(self, tmp_path, capsys):
        rc, out = run_scenario(tmp_path, "energy", config={"width_k": 0.0})
        assert rc == 2
        assert capsys.readouterr().err.startswith("error:")
        assert not out.exists()


class TestCounterexampleScenario:
    def test_sweep_matches_closed_form_on_one_mode(self, tmp_path):
        grid = make_grid(16, 0.25)
        config = {
            "n_modes": 16,
            "delta_k": 0.25,
            "mode_indices": [15],
            "n_points": 5,
            "b2_max": 1.0,
        }
        rc, out = run_scenario(tmp_path, "counterexample", config=config)
        assert rc == 0

        data = read_curve_csv(out / "counterexample.csv")
        b2 = np.asarray(data["b2"], dtype=float)
        assert np.allclose(data["b1"], np.sqrt(1.0 + b2**2), rtol=1e-15)
        k = abs(float(grid.k_values[15]))
        gap = abs(np.sqrt(k) - 1.0 / np.sqrt(k))
        assert np.allclose(data["closed_form"], b2 * gap, rtol=1e-13)

        distance = np.asarray(data["distance"], dtype=float)
        assert distance[0] < 1e-13
        assert np.all(np.diff(distance) > 0.0), "distance should grow with b2"

        payload = json.loads((out / "counterexample.json").read_text())
        assert payload["mode_indices"] == [15]
        assert payload["distance_at_b2_max"] == distance[-1]
        assert payload["max_deviation_from_closed_form"] < 1e-12

    @pytest.mark.parametrize("indices", [[99], [1.5], [], "all"])
    def test_bad_mode_indices_rejected(self, tmp_path, capsys, indices):
        config = {"n_modes": 16, "delta_k": 0.25, "mode_indices": indices}
        rc, out = run_scenario(tmp_path, "counterexample", config=config)
        assert rc == 2
        assert capsys.readouterr().err.startswith("error:")
        assert not out.exists()


class TestEntryPoints:
    def test_module_invocation(self, tmp_path):
        """`python -m bifield` behaves like the installed console script."""
        config = write_config(tmp_path, {"n_modes": 8, "delta_k": 0.5})
        out = tmp_path / "out"
        proc = subprocess.run(
            [
                sys.executable,
                "-m",
                "bifield",
                "kernel",
                "--out",
                str(out),
                "--no-figures",
                "--config",
                config,
            ],
            capture_output=True,
            text=True,
            cwd=str(tmp_path),
        )
        assert proc.returncode == 0, proc.stderr
        assert "kernel" in proc.stdout
        assert (out / "kernel.csv").exists()

    def test_missing_subcommand_is_a_usage_error(self):
        with pytest.raises(SystemExit) as excinfo:
            main([])
        assert excinfo.value.code == 2
