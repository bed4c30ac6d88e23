"""Report assembly and the canonical JSON encoding.

Reports are plain dicts rendered by ``canonical_dumps``: 2-space
indentation, keys in construction order, floats printed with 17
significant digits (round-trip exact for doubles). Identical inputs
therefore produce byte-identical report files. Every report echoes the
tolerances, seed and flags it ran with, and states its scope: verdicts
apply to the sampled points only, except that a build from two
constant-coefficient bivectors is marked global.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .builder import ExistenceReport, RecursionPointResult, Verdict
from .linalg import max_abs
from .problem import Problem

SCOPE_SAMPLES = "sample-set"
SCOPE_GLOBAL = "global"


def canonical_dumps(data) -> str:
    """Deterministic JSON text (see module docstring), newline-terminated."""
    pieces: list[str] = []
    _write(data, pieces, 0)
    pieces.append("\n")
    return "".join(pieces)


def _write(value, out: list, depth: int) -> None:
    pad = "  " * depth
    inner = "  " * (depth + 1)
    if value is None:
        out.append("null")
    elif isinstance(value, bool):
        out.append("true" if value else "false")
    elif isinstance(value, int):
        out.append(str(value))
    elif isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError("reports must not contain NaN or infinity")
        out.append(format(value, ".17g"))
    elif isinstance(value, str):
        out.append(json.dumps(value))
    elif isinstance(value, (list, tuple)):
        if not value:
            out.append("[]")
            return
        out.append("[\n")
        for idx, item in enumerate(value):
            out.append(inner)
            _write(item, out, depth + 1)
            out.append(",\n" if idx + 1 < len(value) else "\n")
        out.append(pad + "]")
    elif isinstance(value, dict):
        if not value:
            out.append("{}")
            return
        out.append("{\n")
        items = list(value.items())
        for idx, (key, item) in enumerate(items):
            if not isinstance(key, str):
                raise TypeError(f"report keys must be strings, got {type(key).__name__}")
            out.append(inner + json.dumps(key) + ": ")
            _write(item, out, depth + 1)
            out.append(",\n" if idx + 1 < len(items) else "\n")
        out.append(pad + "}")
    else:
        raise TypeError(f"cannot serialize {type(value).__name__} into a report")


# ---------------------------------------------------------------------------
# Assembly


def _envelope(command: str, problem: Problem, scope: str = SCOPE_SAMPLES) -> dict:
    tols = problem.tolerances
    return {
        "command": command,
        "dim": problem.dim,
        "coords": list(problem.chart.coord_names),
        "sample_mode": problem.sample_mode,
        "seed": problem.seed,
        "num_samples": len(problem.samples),
        "tolerances": {
            "rank": tols.rank,
            "subspace": tols.subspace,
            "residual": tols.residual,
        },
        "flags": {"skip_singular_samples": problem.skip_singular},
        "scope": scope,
    }


def _check_payload(existence: ExistenceReport) -> dict:
    samples = [
        {
            "point": row.point.tolist(),
            "jacobi_w": row.jacobi_w,
            "jacobi_w_prime": row.jacobi_w_prime,
            "rank_w": row.rank_w,
            "rank_w_prime": row.rank_w_prime,
            "subspace_defect": row.subspace_defect,
        }
        for row in existence.samples
    ]
    skipped = [
        {"point": point.tolist(), "reason": reason} for point, reason in existence.skipped
    ]
    return {
        "samples": samples,
        "skipped_samples": skipped,
        "aggregates": {
            "max_jacobi_w": existence.max_jacobi_w,
            "max_jacobi_w_prime": existence.max_jacobi_w_prime,
            "max_subspace_defect": existence.max_subspace_defect,
            "common_rank": existence.common_rank,
            "rank_constant": existence.rank_constant,
            "distributions_coincide": existence.distributions_coincide,
        },
        "failure": existence.failure,
    }


def check_report(problem: Problem, existence: ExistenceReport) -> dict:
    report = _envelope("check", problem)
    report.update(_check_payload(existence))
    report["verdict"] = existence.verdict.value
    return report


def _result_row(result: RecursionPointResult) -> dict:
    return {
        "point": result.point.tolist(),
        "basis": result.basis.tolist(),
        "r": result.r.tolist(),
        "r_star": result.r_star.tolist(),
        "r_leaf": result.r_leaf.tolist(),
        "residual_recursion": result.residual_recursion,
        "residual_leaf": result.residual_leaf,
        "condition": result.condition,
    }


def build_report(
    problem: Problem,
    existence: ExistenceReport,
    results: list | None,
    globally_valid: bool,
) -> dict:
    scope = SCOPE_GLOBAL if globally_valid else SCOPE_SAMPLES
    report = _envelope("build", problem, scope=scope)
    report.update(_check_payload(existence))
    if results is None:
        report["results"] = None
        report["build_aggregates"] = {
            "max_residual_recursion": None,
            "max_residual_leaf": None,
        }
    else:
        report["results"] = [_result_row(result) for result in results]
        report["build_aggregates"] = {
            "max_residual_recursion": max(r.residual_recursion for r in results),
            "max_residual_leaf": max(r.residual_leaf for r in results),
        }
    report["globally_valid"] = globally_valid
    report["verdict"] = existence.verdict.value
    return report


def leafwise_report(
    problem: Problem, existence: ExistenceReport, rows: list | None
) -> dict:
    """rows are (leaf, result) pairs from the builder."""
    report = _envelope("leafwise", problem)
    report.update(_check_payload(existence))
    if rows is None:
        report["results"] = None
        report["leafwise_aggregates"] = {"max_inverse_residual": None}
    else:
        results = []
        worst = 0.0
        for leaf, result in rows:
            k = leaf.basis.shape[1]
            eye = np.eye(k)
            residual = max_abs(leaf.w_leaf @ result.omega_leaf - eye) if k else 0.0
            residual_prime = (
                max_abs(leaf.w_prime_leaf @ result.omega_leaf_prime - eye) if k else 0.0
            )
            worst = max(worst, residual, residual_prime)
            results.append(
                {
                    "point": result.point.tolist(),
                    "basis": result.basis.tolist(),
                    "omega_leaf": result.omega_leaf.tolist(),
                    "omega_leaf_prime": result.omega_leaf_prime.tolist(),
                    "inverse_residual": residual,
                    "inverse_residual_prime": residual_prime,
                    "condition": result.condition,
                }
            )
        report["results"] = results
        report["leafwise_aggregates"] = {"max_inverse_residual": worst}
    report["verdict"] = existence.verdict.value
    return report


def verify_report(problem: Problem, rows: list, skipped: list, tol_residual: float) -> dict:
    report = _envelope("verify", problem)
    samples = [
        {
            "point": row.point.tolist(),
            "residual": row.residual,
            "torsion_max": row.torsion_max,
        }
        for row in rows
    ]
    passed = all(row.residual <= tol_residual for row in rows)
    report["samples"] = samples
    report["skipped_samples"] = [
        {"point": point.tolist(), "reason": reason} for point, reason in skipped
    ]
    report["aggregates"] = {
        "max_residual": max((row.residual for row in rows), default=0.0),
        "max_torsion": max((row.torsion_max for row in rows), default=0.0),
    }
    report["passed"] = passed
    return report


def error_body(exc: Exception) -> dict:
    category = getattr(exc, "category", "input")
    return {
        "error": {
            "type": type(exc).__name__,
            "category": category,
            "message": str(exc),
        }
    }


def report_exit_status(report: dict) -> int:
    """0 for a passing report, 1 for a refusal or failed verification."""
    verdict = report.get("verdict")
    if verdict is not None:
        return 0 if Verdict(verdict).passed else 1
    return 0 if report.get("passed") else 1
