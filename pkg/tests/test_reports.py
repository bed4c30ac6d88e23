import json
from pathlib import Path

import jsonschema
import numpy as np
import pytest

from recop import SpecValidationError, load_problem
from recop.commands import run_build, run_check, run_leafwise, run_verify
from recop.reports import canonical_dumps, error_body, report_exit_status

from conftest import PROBLEM_DIR

SCHEMA = json.loads(
    (Path(__file__).resolve().parent.parent / "docs" / "report.schema.json").read_text()
)


def validate(report):
    jsonschema.validate(report, SCHEMA)


class TestCanonicalDumps:
    def test_seventeen_significant_digits(self):
        assert '"x": 0.10000000000000001' in canonical_dumps({"x": 0.1})

    def test_integers_stay_integers(self):
        assert canonical_dumps({"n": 3}) == '{\n  "n": 3\n}\n'

    def test_integral_floats_render_compactly(self):
        assert canonical_dumps([2.0]) == "[\n  2\n]\n"

    def test_booleans_and_null(self):
        text = canonical_dumps({"a": True, "b": False, "c": None})
        assert '"a": true' in text
        assert '"b": false' in text
        assert '"c": null' in text

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            canonical_dumps({"x": float("nan")})
        with pytest.raises(ValueError):
            canonical_dumps({"x": float("inf")})

    def test_numpy_float_is_a_float(self):
        # np.float64 subclasses float, so it formats identically
        assert canonical_dumps({"x": np.float64(0.1)}) == canonical_dumps({"x": 0.1})

    def test_rejects_other_numpy_scalars(self):
        with pytest.raises(TypeError):
            canonical_dumps({"x": np.int64(1)})

    def test_round_trip(self):
        data = {"a": [0.1, 2.0, -1.5e-300], "b": {"c": "text", "d": None}}
        assert json.loads(canonical_dumps(data)) == data

    def test_deterministic(self):
        data = {"a": [1.0 / 3.0, {"b": 2.0**-52}]}
        assert canonical_dumps(data) == canonical_dumps(data)

    def test_empty_containers(self):
        assert canonical_dumps({}) == "{}\n"
        assert canonical_dumps([]) == "[]\n"

    def test_string_escaping(self):
        assert canonical_dumps({"s": 'a"b'}) == '{\n  "s": "a\\"b"\n}\n'


class TestReportShapes:
    def test_check_report_matches_schema(self):
        problem = load_problem(PROBLEM_DIR / "so3.json")
        report = run_check(problem)
        validate(report)
        assert report["verdict"] == "EXISTS_CONSTRUCTED"
        assert report["seed"] == 1729
        canonical_dumps(report)  # must be serializable

    def test_build_report_matches_schema(self):
        problem = load_problem(PROBLEM_DIR / "exp_scale.json")
        report = run_build(problem)
        validate(report)
        assert report["globally_valid"] is False
        assert len(report["results"]) == report["num_samples"]

    def test_build_constant_pair_is_global(self):
        problem = load_problem(PROBLEM_DIR / "constant_double.json")
        report = run_build(problem)
        validate(report)
        assert report["globally_valid"] is True
        assert report["scope"] == "global"
        assert len(report["results"]) == 1  # a single point suffices

    def test_build_refusal_has_no_results(self):
        problem = load_problem(PROBLEM_DIR / "orthogonal_planes.json")
        report = run_build(problem)
        validate(report)
        assert report["verdict"] == "REFUSED_DISTRIBUTION_MISMATCH"
        assert report["results"] is None

    def test_verify_report_matches_schema(self):
        problem = load_problem(PROBLEM_DIR / "verify_exp.json")
        report = run_verify(problem)
        validate(report)
        assert report["passed"] is True
        assert report["aggregates"]["max_torsion"] > 1.0  # torsion reported, not failed

    def test_leafwise_report_matches_schema(self):
        problem = load_problem(PROBLEM_DIR / "so3.json")
        report = run_leafwise(problem)
        validate(report)
        assert report["leafwise_aggregates"]["max_inverse_residual"] <= 1e-10

    def test_leafwise_omega_is_inverse_rotation(self):
        problem = load_problem(PROBLEM_DIR / "constant_double.json")
        report = run_leafwise(problem)
        omega = np.array(report["results"][0]["omega_leaf"], dtype=float)
        omega_prime = np.array(report["results"][0]["omega_leaf_prime"], dtype=float)
        assert np.allclose(omega, [[0.0, -1.0], [1.0, 0.0]], atol=1e-14)
        assert np.allclose(omega_prime, 0.5 * omega, atol=1e-14)

    def test_single_structure_check(self):
        problem = load_problem(PROBLEM_DIR / "non_poisson.json")
        report = run_check(problem)
        validate(report)
        assert report["verdict"] == "FAILED_JACOBI"
        for row in report["samples"]:
            assert row["jacobi_w_prime"] is None
            assert abs(row["jacobi_w"] - 1.0) <= 1e-12

    def test_zero_bivectors_build_identity(self):
        from recop import problem_from_dict

        problem = problem_from_dict(
            {
                "dim": 3,
                "coords": ["z1", "z2", "z3"],
                "w": [],
                "w_prime": [],
                "samples": {"mode": "explicit", "points": [[0.1, 0.2, 0.3]]},
            }
        )
        report = run_build(problem)
        validate(report)
        assert report["verdict"] == "EXISTS_CONSTRUCTED"
        assert report["aggregates"]["common_rank"] == 0
        assert report["globally_valid"] is True  # empty bivectors are constant
        assert report["results"][0]["r"] == [
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
        ]

    def test_error_body_matches_schema(self):
        body = error_body(SpecValidationError("nope"))
        validate(body)
        assert body["error"]["category"] == "input"

    def test_verify_requires_r(self):
        problem = load_problem(PROBLEM_DIR / "exp_scale.json")
        with pytest.raises(SpecValidationError, match="requires R"):
            run_verify(problem)

    def test_build_requires_w_prime(self):
        problem = load_problem(PROBLEM_DIR / "non_poisson.json")
        with pytest.raises(SpecValidationError, match="w_prime"):
            run_build(problem)


class TestExitStatus:
    def test_verdict_mapping(self):
        assert report_exit_status({"verdict": "EXISTS_CONSTRUCTED"}) == 0
        assert report_exit_status({"verdict": "SINGLE_STRUCTURE_OK"}) == 0
        assert report_exit_status({"verdict": "FAILED_JACOBI"}) == 1
        assert report_exit_status({"verdict": "REFUSED_RANK_MISMATCH"}) == 1

    def test_passed_mapping(self):
        assert report_exit_status({"passed": True}) == 0
        assert report_exit_status({"passed": False}) == 1
