"""The four runnable commands, shared by the HTTP service and the CLI.

Each takes a validated Problem and returns a report dict; the exit-code
contract (0 pass, 1 mathematical refusal or failed verification, 2 input
error) is derived from the report by ``reports.report_exit_status``,
input errors being raised as exceptions before any report exists.
"""

from __future__ import annotations

import numpy as np

from .builder import (
    Verdict,
    _map_samples,
    build_leaf,
    build_point,
    decide_existence,
    verify_recursion,
)
from .errors import (
    DomainError,
    ResidualExceededError,
    SampleDomainError,
    SpecValidationError,
)
from .problem import Problem
from .reports import build_report, check_report, leafwise_report, verify_report


def run_check(problem: Problem, jobs: int = 1) -> dict:
    existence = decide_existence(
        problem.w,
        problem.w_prime,
        problem.samples,
        problem.tolerances,
        skip_singular=problem.skip_singular,
        jobs=jobs,
    )
    return check_report(problem, existence)


def _build_rows(problem: Problem, accepted_points, jobs: int) -> list:
    def worker(point):
        leaf = build_leaf(problem.w, problem.w_prime, point, problem.tolerances)
        return leaf, build_point(leaf)

    rows = _map_samples(worker, accepted_points, jobs)
    tol = problem.tolerances.residual
    for _, result in rows:
        if result.residual_recursion > tol or result.residual_leaf > tol:
            raise ResidualExceededError(
                result.point, result.residual_recursion, result.residual_leaf, tol
            )
    return rows


def _existence_for_pair(problem: Problem, jobs: int):
    if problem.w_prime is None:
        raise SpecValidationError("this command requires w_prime")
    return decide_existence(
        problem.w,
        problem.w_prime,
        problem.samples,
        problem.tolerances,
        skip_singular=problem.skip_singular,
        jobs=jobs,
    )


def run_build(problem: Problem, jobs: int = 1) -> dict:
    """Existence check, then the pointwise construction. When both
    bivectors are constant-coefficient a single point suffices and the
    result is marked globally valid."""
    existence = _existence_for_pair(problem, jobs)
    if existence.verdict is not Verdict.EXISTS_CONSTRUCTED:
        return build_report(problem, existence, None, globally_valid=False)
    accepted = [row.point for row in existence.samples]
    globally_valid = problem.w.is_constant() and problem.w_prime.is_constant()
    if globally_valid:
        accepted = accepted[:1]
    rows = _build_rows(problem, accepted, jobs)
    return build_report(problem, existence, [res for _, res in rows], globally_valid)


def run_leafwise(problem: Problem, jobs: int = 1) -> dict:
    existence = _existence_for_pair(problem, jobs)
    if existence.verdict is not Verdict.EXISTS_CONSTRUCTED:
        return leafwise_report(problem, existence, None)
    accepted = [row.point for row in existence.samples]
    rows = _build_rows(problem, accepted, jobs)
    return leafwise_report(problem, existence, rows)


def run_verify(problem: Problem, jobs: int = 1) -> dict:
    """Residual of the recursion identity for a user-supplied symbolic R
    at every sample, with the Nijenhuis torsion reported alongside as a
    diagnostic (a sufficient-condition quantity, not a pass criterion)."""
    if problem.r_tensor is None:
        raise SpecValidationError("verify requires R")
    if problem.w_prime is None:
        raise SpecValidationError("verify requires w_prime")

    def worker(point):
        pt = np.asarray(point, dtype=float)
        try:
            row = verify_recursion(
                problem.w, problem.w_prime, problem.r_tensor, samples=[pt]
            )[0]
            return "ok", row
        except DomainError as exc:
            if problem.skip_singular:
                return "skipped", (pt, str(exc))
            raise SampleDomainError(pt, exc) from exc

    outcomes = _map_samples(worker, problem.samples, jobs)
    rows = [payload for kind, payload in outcomes if kind == "ok"]
    skipped = [payload for kind, payload in outcomes if kind == "skipped"]
    if not rows:
        raise SpecValidationError("every sample hit a singular locus; nothing to verify")
    return verify_report(problem, rows, skipped, problem.tolerances.residual)
