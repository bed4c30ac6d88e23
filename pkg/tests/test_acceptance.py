"""Acceptance suite: one test per criterion, one printed line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as
they pass; plain `pytest` captures them but still enforces every
criterion.
"""

import json
import math
from contextlib import contextmanager

import numpy as np

from recop import (
    TensorField11,
    build_leaf,
    build_point,
    load_problem,
    nijenhuis_torsion,
    nijenhuis_torsion_numeric,
    parse_expr,
    splitting_independence_check,
)
from recop.cli import main
from recop.linalg import max_abs

from conftest import AD_CORPUS, PROBLEM_DIR

ROUND_TRIP_FIXTURES = ["constant_double.json", "exp_scale.json", "so3.json"]


@contextmanager
def criterion(number, title):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE FAIL [{number}] {title}")
        raise
    print(f"ACCEPTANCE PASS [{number}] {title}")


def run_cli(tmp_path, command, fixture_name, out_name="report.json"):
    out = tmp_path / out_name
    code = main([command, "--spec", str(PROBLEM_DIR / fixture_name), "--out", str(out)])
    return code, json.loads(out.read_text())


def accepted_leaves(fixture_name):
    problem = load_problem(PROBLEM_DIR / fixture_name)
    for point in problem.samples:
        yield build_leaf(problem.w, problem.w_prime, point, problem.tolerances)


def test_criterion_1_theorem_round_trip(tmp_path):
    with criterion(1, "coinciding-distribution fixtures build with residual <= 1e-10"):
        for name in ROUND_TRIP_FIXTURES:
            code, report = run_cli(tmp_path, "build", name, f"build_{name}")
            assert code == 0, name
            assert report["verdict"] == "EXISTS_CONSTRUCTED", name
            assert report["build_aggregates"]["max_residual_recursion"] <= 1e-10, name


def test_criterion_2_theorem_refusal(tmp_path):
    with criterion(2, "mismatched fixtures are refused with exit 1"):
        code, report = run_cli(tmp_path, "check", "orthogonal_planes.json", "a.json")
        assert code == 1
        assert report["verdict"] == "REFUSED_DISTRIBUTION_MISMATCH"
        assert report["aggregates"]["max_subspace_defect"] >= 0.99
        code, report = run_cli(tmp_path, "check", "rank_mismatch.json", "b.json")
        assert code == 1
        assert report["verdict"] == "REFUSED_RANK_MISMATCH"


def test_criterion_3_closed_form_match(tmp_path):
    with criterion(3, "built R matches diag(exp(z3), exp(z3), 1) to 1e-9"):
        code, report = run_cli(tmp_path, "build", "exp_scale.json")
        assert code == 0
        for row in report["results"]:
            z3 = row["point"][2]
            expected = np.diag([math.exp(z3), math.exp(z3), 1.0])
            assert max_abs(np.array(row["r"]) - expected) <= 1e-9


def test_criterion_4_jacobi_detector(tmp_path):
    with criterion(4, "Jacobi detector: residual 1 for the counterexample, <= 1e-10 for so(3)*"):
        code, report = run_cli(tmp_path, "check", "non_poisson.json", "np.json")
        assert code == 1
        assert report["verdict"] == "FAILED_JACOBI"
        assert len(report["samples"]) == 20
        for row in report["samples"]:
            assert abs(row["jacobi_w"] - 1.0) <= 1e-12
        code, report = run_cli(tmp_path, "check", "so3.json", "so3.json")
        assert code == 0
        assert report["aggregates"]["max_jacobi_w"] <= 1e-10


def test_criterion_5_duality_and_leaf_identities():
    with criterion(5, "R* = R^T, leaf relation, and omega inverse at every accepted sample"):
        for name in ROUND_TRIP_FIXTURES:
            for leaf in accepted_leaves(name):
                result = build_point(leaf)
                k = leaf.basis.shape[1]
                assert max_abs(result.r_star - result.r.T) <= 1e-11, name
                assert max_abs(result.r_leaf @ leaf.w_leaf - leaf.w_prime_leaf) <= 1e-10, name
                assert (
                    max_abs(leaf.w_leaf @ result.omega_leaf - np.eye(k))
                    <= 1e-10 * result.condition
                ), name


def test_criterion_6_splitting_independence():
    with criterion(6, "25 random leaf-basis rotations (seed 42) move R by <= 1e-10"):
        worst = 0.0
        for leaf in accepted_leaves("so3.json"):
            worst = max(worst, splitting_independence_check(leaf, trials=25, seed=42))
        assert worst <= 1e-10


def test_criterion_7_torsion_oracle(chart3):
    with criterion(7, "torsion of diag(exp(z3), exp(z3), 1) is e - e^2 at (0,0,1)"):
        tensor = TensorField11.from_strings(
            chart3, [["exp(z3)", "0", "0"], ["0", "exp(z3)", "0"], ["0", "0", "1"]]
        )
        point = [0.0, 0.0, 1.0]
        torsion, worst = nijenhuis_torsion(tensor, point)
        expected = math.e - math.e**2
        assert abs(torsion[0, 2, 0] - expected) <= 1e-9
        numeric, _ = nijenhuis_torsion_numeric(tensor.evaluate, point)
        assert max_abs(numeric - torsion) <= 1e-6


def test_criterion_8_ad_correctness(chart3):
    with criterion(8, "dual-number derivatives match central differences to 1e-6 relative"):
        assert len(AD_CORPUS) == 30
        h = 1e-6
        rng = np.random.default_rng(20250809)
        for text in AD_CORPUS:
            expr = parse_expr(text, chart3)
            for _ in range(10):
                point = rng.uniform(-1.0, 1.0, size=3)
                for axis in range(3):
                    direction = np.zeros(3)
                    direction[axis] = 1.0
                    _, ad = expr.eval_dual(point, direction)
                    fd = (
                        expr.eval(point + h * direction)
                        - expr.eval(point - h * direction)
                    ) / (2.0 * h)
                    assert abs(ad - fd) <= 1e-6 * (1.0 + abs(ad)), (text, axis)


def test_criterion_9_determinism(tmp_path):
    with criterion(9, "two consecutive builds produce byte-identical reports"):
        first = tmp_path / "first.json"
        second = tmp_path / "second.json"
        spec = str(PROBLEM_DIR / "so3.json")
        assert main(["build", "--spec", spec, "--out", str(first)]) == 0
        assert main(["build", "--spec", spec, "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()
