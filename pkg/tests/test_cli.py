"""
End-to-end tests for the vi command
"""
import json
import os

import pandas as pd
import pytest

from scripts.run_vi import main
from src.cli import EXAMPLES, canonical_json, cmd_canonicalize, load_instance, parse_instance_text
from src.errors import InstanceError

pytestmark = pytest.mark.integration


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def instance(instances_dir, name):
    return os.path.join(instances_dir, name)


class TestSolveCommand:
    """Test vi solve"""

    def test_ex432_is_negative(self, instances_dir, capsys):
        """Test exit 2 with a certified nonexistence margin"""
        code, report = run(["solve", instance(instances_dir, "ex432_iS.json")], capsys)
        assert code == 2
        solve = report["payload"]["solve"]
        assert solve["verdict"] == "NoSolutionAtResolution"
        assert solve["best_gap"] == 1.0
        assert solve["best_x"] == [0.0, -1.0]
        assert solve["certificate"]["certified"]
        assert report["wall_time_seconds"] is None

    def test_zero_field_solves(self, instances_dir, capsys):
        """Test exit 0"""
        code, report = run(["solve", instance(instances_dir, "zero_A.json")], capsys)
        assert code == 0
        assert report["payload"]["solve"]["verdict"] == "SolutionFound"

    def test_resolution_override_echoed(self, instances_dir, capsys):
        """Test --resolution reaches the solver and the report"""
        code, report = run(["solve", instance(instances_dir, "zero_A.json"), "--resolution", "5"], capsys)
        assert report["payload"]["solve"]["resolution"] == 5
        assert report["command"]["resolution"] == 5

    def test_timing_recorded_on_request(self, instances_dir, capsys):
        """Test --timing"""
        _, report = run(["solve", instance(instances_dir, "zero_A.json"), "--timing"], capsys)
        assert report["wall_time_seconds"] >= 0.0

    def test_reports_are_deterministic(self, instances_dir, tmp_path):
        """Test two runs write identical bytes"""
        first, second = tmp_path / "first.json", tmp_path / "second.json"
        main(["solve", instance(instances_dir, "zero_A.json"), "--out", str(first)])
        main(["solve", instance(instances_dir, "zero_A.json"), "--out", str(second)])
        assert first.read_bytes() == second.read_bytes()


class TestErrors:
    """Test exit code 1 and error reports"""

    def test_malformed_file(self, tmp_path, capsys):
        """Test invalid JSON"""
        path = tmp_path / "broken.json"
        path.write_text('{"dimension": 2,\n  "set": }', encoding="utf-8")
        code, report = run(["solve", str(path)], capsys)
        assert code == 1
        assert report["payload"]["error"]["type"] == "InstanceError"
        assert "line 2" in report["payload"]["error"]["message"]

    def test_missing_file(self, tmp_path, capsys):
        """Test a path that does not exist"""
        code, report = run(["solve", str(tmp_path / "absent.json")], capsys)
        assert code == 1
        assert report["exit_code"] == 1

    def test_unknown_catalog_name(self, tmp_path, capsys):
        """Test an instance naming a missing catalog entry"""
        path = tmp_path / "unknown.json"
        path.write_text(json.dumps({
            "dimension": 1,
            "set": {"type": "box", "lower": [0], "upper": [1]},
            "A": {"source": "catalog", "name": "nope"},
            "a": {"source": "catalog", "name": "identity"},
        }), encoding="utf-8")
        code, _ = run(["solve", str(path)], capsys)
        assert code == 1

    def test_bad_expression_position(self, tmp_path, capsys):
        """Test a syntax error inside an expression field"""
        path = tmp_path / "expr.json"
        path.write_text(json.dumps({
            "dimension": 1,
            "set": {"type": "box", "lower": [0], "upper": [1]},
            "F": {"source": "expr", "components": ["x + $"]},
        }), encoding="utf-8")
        code, report = run(["fixed-point", str(path)], capsys)
        assert code == 1
        assert report["payload"]["error"]["position"] == 5

    def test_unknown_property(self, instances_dir, capsys):
        """Test --property with an unregistered name"""
        code, report = run(["check", instance(instances_dir, "ex432_iS.json"), "--property", "convexity"], capsys)
        assert code == 1
        assert report["payload"]["error"]["type"] == "CheckerError"

    def test_unknown_parameter(self, instances_dir, capsys):
        """Test --param with an unknown key"""
        code, _ = run(["check", instance(instances_dir, "ex432_iS.json"), "--property", "ql",
                       "--param", "bogus=1"], capsys)
        assert code == 1

    def test_range_violation(self, instances_dir, capsys):
        """Test F leaving its domain"""
        code, report = run(["fixed-point", instance(instances_dir, "brouwer_bad.json")], capsys)
        assert code == 1
        error = report["payload"]["error"]
        assert error["type"] == "RangeViolation"
        assert error["image"][0] > 1.0

    def test_unknown_example(self, capsys):
        """Test reproduce with an unknown id"""
        code, _ = run(["reproduce", "ex999"], capsys)
        assert code == 1

    @pytest.mark.parametrize("set_spec, field_spec, where", [
        ({"type": "simplex", "vertices": [[0, 0], [1], [0, 1]]}, {"source": "catalog", "name": "identity"},
         "vertices"),
        ({"type": "hull", "vertices": [[0, 0], [1, 0, 2], [0, 1]]}, {"source": "catalog", "name": "identity"},
         "vertices"),
        ({"type": "box", "lower": [-1, -1], "upper": [1, 1]}, {"source": "affine", "matrix": [[1, 0], [0]]},
         "matrix"),
        ({"type": "box", "lower": [-1, -1], "upper": [1]}, {"source": "catalog", "name": "identity"},
         "set"),
    ])
    def test_ragged_shapes(self, tmp_path, capsys, set_spec, field_spec, where):
        """Test shape errors become instance errors"""
        path = tmp_path / "ragged.json"
        path.write_text(json.dumps({
            "dimension": 2, "set": set_spec, "A": field_spec, "a": {"source": "catalog", "name": "identity"},
        }), encoding="utf-8")
        code, report = run(["solve", str(path), "--resolution", "3"], capsys)
        assert code == 1
        assert report["payload"]["error"]["type"] == "InstanceError"
        assert where in report["payload"]["error"]["message"]

    def test_unexpected_failure_is_reported(self, instances_dir, capsys, monkeypatch):
        """Test an exception outside the toolkit hierarchy"""
        def fail(path, overrides):
            raise RuntimeError("boom")

        monkeypatch.setattr("scripts.run_vi.cmd_solve", fail)
        code, report = run(["solve", instance(instances_dir, "zero_A.json")], capsys)
        assert code == 1
        assert report["payload"]["error"] == {"type": "RuntimeError", "message": "boom"}


class TestCheckCommand:
    """Test vi check"""

    def test_ql_forced_witness(self, instances_dir, capsys):
        """Test the file's forced ql trial and its recheck"""
        code, report = run(["check", instance(instances_dir, "ex432_iS.json"), "--property", "ql"], capsys)
        assert code == 2
        witness = report["payload"]["check"]["witness"]
        assert witness["trial"] == 0
        assert witness["slack"] == pytest.approx(-(2.0 ** 0.5) / 16.0, abs=1e-12)
        assert report["payload"]["recheck"]["violated"]

    def test_param_overrides_file(self, instances_dir, capsys):
        """Test --param trials replaces the file value"""
        _, report = run(["check", instance(instances_dir, "ex4331.json"), "--property", "ql",
                         "--param", "trials=25"], capsys)
        assert report["payload"]["check"]["trials"] == 25
        assert report["command"]["params"] == {"trials": 25}

    def test_seed_override(self, instances_dir, capsys):
        """Test --seed reaches the checker"""
        _, report = run(["check", instance(instances_dir, "ex4331.json"), "--property", "ql", "--seed", "9"], capsys)
        assert report["payload"]["check"]["seed"] == 9

    def test_monotonicity_scan(self, instances_dir, capsys):
        """Test the deterministic scan on the step field"""
        code, report = run(["check", instance(instances_dir, "ex4331.json"), "--property", "monotonicity_scan",
                            "--param", "dense_points=1001"], capsys)
        assert code == 0
        assert report["payload"]["check"]["monotonicity"] == "Nondecreasing"
        assert "recheck" not in report["payload"]


class TestFixedPointCommand:
    """Test vi fixed-point"""

    def test_one_dimensional(self, instances_dir, capsys):
        """Test F(x) = 1 - x"""
        code, report = run(["fixed-point", instance(instances_dir, "brouwer_1d.json")], capsys)
        assert code == 0
        assert report["payload"]["fixed_point"]["point"] == [0.5]

    def test_missing_map(self, instances_dir, capsys):
        """Test an instance without F"""
        code, _ = run(["fixed-point", instance(instances_dir, "zero_A.json")], capsys)
        assert code == 1


class TestExportCommand:
    """Test vi export-gap-field"""

    def test_grid_rows(self, instances_dir, tmp_path, capsys):
        """Test one row per 41-grid point"""
        out = tmp_path / "gap.csv"
        code, report = run(["export-gap-field", instance(instances_dir, "ex432_iS.json"), "-o", str(out)], capsys)
        assert code == 0
        frame = pd.read_csv(out)
        assert len(frame) == 1681
        assert list(frame.columns) == ["x1", "x2", "gap", "worst_y1", "worst_y2"]
        assert frame["gap"].min() == 1.0
        assert report["payload"]["export"]["rows"] == 1681


class TestCanonicalize:
    """Test canonical instance files"""

    def test_round_trip_gives_identical_reports(self, instances_dir, tmp_path):
        """Test solving the canonical form reproduces the report"""
        original = instance(instances_dir, "zero_A.json")
        canonical = tmp_path / "canonical.json"
        canonical.write_text(cmd_canonicalize(original), encoding="utf-8")
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        main(["solve", original, "--out", str(first)])
        main(["solve", str(canonical), "--out", str(second)])
        assert first.read_bytes() == second.read_bytes()

    def test_canonical_form_is_fixed_point(self, instances_dir):
        """Test canonicalising twice"""
        text = cmd_canonicalize(instance(instances_dir, "ex434_expr.json"))
        assert canonical_json(parse_instance_text(text)) == text

    def test_digest_shared(self, instances_dir, tmp_path):
        """Test original and canonical files hash alike"""
        original = instance(instances_dir, "ex432_iS.json")
        canonical = tmp_path / "canonical.json"
        canonical.write_text(cmd_canonicalize(original), encoding="utf-8")
        assert load_instance(original).digest == load_instance(canonical).digest

    def test_schema_errors_name_location(self):
        """Test a schema violation"""
        with pytest.raises(InstanceError) as info:
            parse_instance_text(json.dumps({"dimension": 2, "set": {"type": "box", "lower": [0], "upper": [1]}}))
        assert "dimension" in str(info.value)


@pytest.mark.slow
class TestReproduce:
    """Test vi reproduce for every bundled example"""

    @pytest.mark.parametrize("example", sorted(EXAMPLES))
    def test_matches_expected(self, example, capsys):
        """Test all compared values match"""
        code, report = run(["reproduce", example], capsys)
        mismatches = {k: v for k, v in report["payload"]["comparisons"].items() if not v["match"]}
        assert mismatches == {}
        assert code == 0
