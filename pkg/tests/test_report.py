"""Report records and the JSON/CSV serialization round trips."""

import json

import numpy as np
import pytest

from bifield.grid import make_grid
from bifield.report import (
    CheckResult,
    VerificationReport,
    read_curve_csv,
    render_report_json,
    write_checks_csv,
    write_curve_csv,
    write_report_json,
)


def sample_report():
    checks = (
        CheckResult("b.second", "later alphabetically", "Eq. (2)", 0.5, 0.1),
        CheckResult("a.first", "earlier alphabetically", "Eq. (1)", 1e-14, 1e-12),
    )
    return VerificationReport(engine="bifield 0.1.0", grid=make_grid(8, 0.5), seed=3, checks=checks)


class TestCheckResult:
    def test_pass_is_inclusive_at_the_tolerance(self):
        assert CheckResult("x", "", "", 1e-10, 1e-10).passed
        assert not CheckResult("x", "", "", 1.0000001e-10, 1e-10).passed

    def test_dict_uses_the_wire_key(self):
        entry = CheckResult("x", "d", "Eq. (5)", 0.0, 1.0).to_dict()
        assert entry["pass"] is True
        assert entry["paper_anchor"] == "Eq. (5)"


class TestVerificationReport:
    def test_counts(self):
        report = sample_report()
        assert report.total == 2
        assert report.failed == 1
        assert not report.all_passed

    def test_checks_serialized_in_id_order(self):
        payload = sample_report().to_dict()
        ids = [c["check_id"] for c in payload["checks"]]
        assert ids == ["a.first", "b.second"]
        assert payload["summary"] == {"total": 2, "failed": 1}
        assert payload["grid"] == {"n_modes": 8, "delta_k": 0.5}

    def test_json_rendering_is_stable(self, tmp_path):
        report = sample_report()
        text = render_report_json(report)
        assert text == render_report_json(report)
        assert text.endswith("\n")
        write_report_json(report, tmp_path / "report.json")
        assert (tmp_path / "report.json").read_text() == text
        parsed = json.loads(text)
        assert set(parsed) == {"engine", "grid", "seed", "checks", "summary"}

    def test_checks_csv_round_trips_errors_exactly(self, tmp_path):
        path = tmp_path / "checks.csv"
        write_checks_csv(sample_report(), path)
        data = read_curve_csv(path)
        assert list(data) == [
            "check_id",
            "description",
            "paper_anchor",
            "max_error",
            "tolerance",
            "pass",
        ]
        assert data["check_id"] == ["a.first", "b.second"]
        assert data["max_error"] == [1e-14, 0.5]
        assert data["pass"] == ["True", "False"]


class TestCurveCsv:
    def test_floats_survive_the_round_trip(self, tmp_path):
        path = tmp_path / "curve.csv"
        rng = np.random.default_rng(0)
        x = rng.standard_normal(20)
        y = np.exp(x)
        write_curve_csv(path, [("x", x), ("y", y)])
        data = read_curve_csv(path)
        assert data["x"] == list(x)
        assert data["y"] == list(y)

    def test_integers_and_strings_pass_through(self, tmp_path):
        path = tmp_path / "curve.csv"
        write_curve_csv(path, [("index", [0, 1, 2]), ("label", ["a", "b", "c"])])
        data = read_curve_csv(path)
        assert data["index"] == [0, 1, 2]
        assert data["label"] == ["a", "b", "c"]

    def test_numpy_scalars_are_unwrapped(self, tmp_path):
        path = tmp_path / "curve.csv"
        values = np.linspace(0.0, 1.0, 5)
        write_curve_csv(path, [("v", values), ("n", np.arange(5))])
        data = read_curve_csv(path)
        assert data["v"] == list(values)
        assert data["n"] == [0, 1, 2, 3, 4]

    def test_unequal_columns_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            write_curve_csv(tmp_path / "bad.csv", [("x", [1.0, 2.0]), ("y", [1.0])])
