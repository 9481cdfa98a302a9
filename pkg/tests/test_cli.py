"""Tests for the batch front end: exit codes, file contracts, determinism."""

import csv
import json
from pathlib import Path

import numpy as np
import pytest

from tritronquee.cli import main

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"
IMAG_CONFIG = CONFIG_DIR / "imaginary_axis.json"


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def write_config(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


def small_config(**overrides):
    doc = {
        "line": {"a_re": 0.0, "a_im": 1.0, "b_re": 0.0, "b_im": 0.0, "sigma": -1},
        "layout": {"x_l": -6.0, "x_r": 6.0, "n_end_left": 12,
                   "n_middle": [48], "n_end_right": 12},
        "output": {"samples": 41, "x_min": -8.0, "x_max": 8.0},
    }
    for section, fields in overrides.items():
        doc.setdefault(section, {}).update(fields)
    return doc


@pytest.fixture(scope="module")
def imag_cli_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("imag_cli")
    code = main(["solve", str(IMAG_CONFIG), "--out", str(out), "--quiet"])
    assert code == 0
    return out


class TestSolveCommand:
    def test_outputs_present_with_exact_headers(self, imag_cli_run):
        header, rows = read_csv(imag_cli_run / "solution.csv")
        assert header == ["x", "re_omega", "im_omega", "re_domega_dx", "im_domega_dx"]
        assert len(rows) == 601
        for label in ("I", "II", "III"):
            header, _ = read_csv(imag_cli_run / f"coeffs_domain_{label}.csv")
            assert header == ["n", "abs_c"]
        for label in ("I", "III"):
            header, _ = read_csv(imag_cli_run / f"end_domain_{label}.csv")
            assert header == ["l", "re_s", "im_s", "re_v", "im_v"]

    def test_report_contents(self, imag_cli_run):
        report = json.loads((imag_cli_run / "report.json").read_text())
        assert report["schema_version"] == 1
        assert report["converged"] is True
        assert report["final_residual"] <= 1e-10
        assert len(report["residual_history"]) == report["iterations"] + 1
        assert report["config"]["layout"]["n_middle"] == [256]
        assert set(report["coeff_spectra"]) == {"I", "II", "III"}

    def test_seventeen_digit_round_trip(self, imag_cli_run):
        _, rows = read_csv(imag_cli_run / "solution.csv")
        for text in rows[17][1:]:
            value = float(text)
            assert format(value, ".17g") == text

    def test_determinism(self, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        config = write_config(tmp_path, small_config())
        assert main(["solve", str(config), "--out", str(out_a), "--quiet"]) == 0
        assert main(["solve", str(config), "--out", str(out_b), "--quiet"]) == 0
        for name in ("solution.csv", "coeffs_domain_II.csv", "end_domain_I.csv"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()
        rep_a = json.loads((out_a / "report.json").read_text())
        rep_b = json.loads((out_b / "report.json").read_text())
        rep_a.pop("timestamp"), rep_b.pop("timestamp")
        assert rep_a == rep_b

    def test_summary_line_and_quiet(self, tmp_path, capsys):
        config = write_config(tmp_path, small_config())
        assert main(["solve", str(config), "--out", str(tmp_path / "o1")]) == 0
        assert "converged" in capsys.readouterr().out
        assert main(["solve", str(config), "--out", str(tmp_path / "o2"), "--quiet"]) == 0
        assert capsys.readouterr().out == ""


class TestExitCodes:
    def test_sector_violation_is_3(self, tmp_path, capsys):
        config = write_config(tmp_path, small_config(line={"a_re": 1.0, "a_im": 0.0}))
        assert main(["solve", str(config), "--out", str(tmp_path / "out")]) == 3
        err = capsys.readouterr().err
        assert "arg(-a)" in err and "3.14159" in err

    def test_missing_file_is_3(self, tmp_path):
        assert main(["solve", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == 3

    def test_invalid_json_is_3(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["solve", str(bad), "--out", str(tmp_path)]) == 3

    def test_unknown_key_is_3(self, tmp_path):
        config = write_config(tmp_path, {**small_config(), "extra": 1})
        assert main(["solve", str(config), "--out", str(tmp_path)]) == 3

    def test_bad_layout_is_3(self, tmp_path):
        config = write_config(tmp_path, small_config(layout={"x_l": 6.0, "x_r": -6.0}))
        assert main(["solve", str(config), "--out", str(tmp_path)]) == 3

    def test_no_convergence_is_2_with_outputs(self, tmp_path):
        config = write_config(tmp_path, small_config(
            solver={"tolerance": 1e-16, "max_iterations": 2}))
        out = tmp_path / "out"
        assert main(["solve", str(config), "--out", str(out)]) == 2
        report = json.loads((out / "report.json").read_text())
        assert report["converged"] is False
        assert (out / "solution.csv").exists()

    def test_output_path_collision_is_4(self, tmp_path):
        config = write_config(tmp_path, small_config())
        blocker = tmp_path / "blocked"
        blocker.write_text("a file, not a directory")
        assert main(["solve", str(config), "--out", str(blocker)]) == 4

    def test_bad_sweep_param_is_3(self, tmp_path):
        config = write_config(tmp_path, small_config())
        assert main(["sweep", str(config), "--param", "bogus",
                     "--values", "1,2", "--out", str(tmp_path / "s")]) == 3

    def test_empty_sweep_values_is_3(self, tmp_path):
        config = write_config(tmp_path, small_config())
        assert main(["sweep", str(config), "--param", "n_middle",
                     "--values", "", "--out", str(tmp_path / "s")]) == 3


class TestOutputDirResolution:
    def test_env_var_used(self, tmp_path, monkeypatch):
        config = write_config(tmp_path, small_config())
        env_dir = tmp_path / "from_env"
        monkeypatch.setenv("TRITRONQUEE_OUT", str(env_dir))
        assert main(["solve", str(config), "--quiet"]) == 0
        assert (env_dir / "report.json").exists()

    def test_flag_beats_env(self, tmp_path, monkeypatch):
        config = write_config(tmp_path, small_config())
        env_dir, flag_dir = tmp_path / "env", tmp_path / "flag"
        monkeypatch.setenv("TRITRONQUEE_OUT", str(env_dir))
        assert main(["solve", str(config), "--out", str(flag_dir), "--quiet"]) == 0
        assert (flag_dir / "report.json").exists()
        assert not env_dir.exists()

    def test_config_directory_fallback(self, tmp_path, monkeypatch):
        monkeypatch.delenv("TRITRONQUEE_OUT", raising=False)
        target = tmp_path / "from_config"
        config = write_config(tmp_path, small_config(output={"directory": str(target)}))
        assert main(["solve", str(config), "--quiet"]) == 0
        assert (target / "report.json").exists()


class TestSweep:
    def test_middle_resolution_sweep(self, tmp_path):
        config = write_config(tmp_path, {
            "line": {"a_re": 0.0, "a_im": 1.0, "sigma": -1},
            "layout": {"x_l": -10.0, "x_r": 10.0, "n_end_left": 20,
                       "n_middle": [256], "n_end_right": 20},
            "output": {"samples": 101, "x_min": -12.0, "x_max": 12.0},
        })
        root = tmp_path / "sweep"
        assert main(["sweep", str(config), "--param", "n_middle",
                     "--values", "128,256", "--out", str(root), "--quiet"]) == 0

        header, rows = read_csv(root / "sweep_summary.csv")
        assert header == ["value", "converged", "final_residual", "iterations",
                          "coeff_floor_I", "coeff_floor_II", "coeff_floor_III"]
        assert [r[0] for r in rows] == ["128", "256"]
        assert all(r[1] == "true" for r in rows)

        # doubling the middle resolution leaves the sampled solution unchanged
        _, rows_a = read_csv(root / "n_middle_128" / "solution.csv")
        _, rows_b = read_csv(root / "n_middle_256" / "solution.csv")
        diffs = [
            abs(complex(float(ra[1]), float(ra[2])) - complex(float(rb[1]), float(rb[2])))
            for ra, rb in zip(rows_a, rows_b)
        ]
        assert max(diffs) <= 1e-9

    def test_junction_abscissa_sweep(self, tmp_path):
        config = write_config(tmp_path, small_config())
        root = tmp_path / "sweep_xr"
        assert main(["sweep", str(config), "--param", "x_r",
                     "--values", "5,6,7", "--out", str(root), "--quiet"]) == 0
        _, rows = read_csv(root / "sweep_summary.csv")
        assert len(rows) == 3
        assert all(r[1] == "true" for r in rows)
        floors_end = [float(r[6]) for r in rows]
        assert max(floors_end) <= 1e-6  # all resolved
        assert max(floors_end) <= 1e3 * min(floors_end)  # and comparable


class TestCoeffFloors:
    def test_domain_three_does_not_leak_into_middle(self):
        from tritronquee.bvp_solver import SolveReport
        from tritronquee.chebyshev import ChebCoeffs
        from tritronquee.cli import _coeff_floors

        def spectrum(floor):
            mags = np.full(20, floor)
            mags[0] = 1.0
            return ChebCoeffs(mags.astype(complex))

        report = SolveReport(
            converged=True, iterations=1, residual_history=[1.0, 0.0],
            final_residual=0.0, junction_value_mismatch=[], junction_deriv_mismatch=[],
            coeff_spectra={"I": spectrum(1e-15), "II": spectrum(1e-12),
                           "III": spectrum(1e-6)},
            jacobian_condition=1.0)
        floors = _coeff_floors(report)
        assert floors["II"] == pytest.approx(1e-12)
        assert floors["III"] == pytest.approx(1e-6)

    def test_split_middles_are_maxed(self):
        from tritronquee.bvp_solver import SolveReport
        from tritronquee.chebyshev import ChebCoeffs
        from tritronquee.cli import _coeff_floors

        def spectrum(floor):
            mags = np.full(20, floor)
            mags[0] = 1.0
            return ChebCoeffs(mags.astype(complex))

        report = SolveReport(
            converged=True, iterations=1, residual_history=[1.0, 0.0],
            final_residual=0.0, junction_value_mismatch=[], junction_deriv_mismatch=[],
            coeff_spectra={"I": spectrum(1e-15), "II_1": spectrum(1e-13),
                           "II_2": spectrum(1e-11), "III": spectrum(1e-14)},
            jacobian_condition=1.0)
        assert _coeff_floors(report)["II"] == pytest.approx(1e-11)


class TestVersionFlag:
    def test_version_exits_zero(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["--version"])
        assert info.value.code == 0
        assert "tritronquee" in capsys.readouterr().out
