"""Problem documents: validation, expression parsing, sample generation.

A problem is a JSON object with top-level keys exactly
{dim, coords, w, w_prime?, R?, samples, tolerances?, flags?}. Bivectors
list only their strict upper triangle as {"i", "j", "expr"} with 1-based
i < j; unlisted entries are zero. Every expression is parsed eagerly so
errors carry the entry coordinates (e.g. "w[1][3]").

Sampling is reproducible by construction: random mode requires a seed
and uses the documented SplitMix64 generator, grid mode enumerates in
row-major coordinate order (last coordinate fastest), and exclusion
balls carve singular loci out of the sampled region.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .builder import Tolerances
from .errors import RecopError, SpecParseError, SpecValidationError
from .expressions import Chart, parse_expr
from .fields import BivectorField, TensorField11
from .rng import SplitMix64

_TOP_KEYS = {"dim", "coords", "w", "w_prime", "R", "samples", "tolerances", "flags"}
_SAMPLE_KEYS = {"mode", "points", "box", "counts", "count", "seed", "exclude_balls"}
_MODE_KEYS = {
    "explicit": {"points"},
    "grid": {"box", "counts"},
    "random": {"box", "count", "seed"},
}
_MAX_REJECTION_TRIES = 10_000


@dataclass(frozen=True)
class ExclusionBall:
    center: np.ndarray
    radius: float

    def contains(self, point: np.ndarray) -> bool:
        return float(np.linalg.norm(point - self.center)) < self.radius


@dataclass
class Problem:
    chart: Chart
    w: BivectorField
    w_prime: BivectorField | None
    r_tensor: TensorField11 | None
    samples: list  # list of 1-d float arrays, in deterministic order
    sample_mode: str
    seed: int | None
    tolerances: Tolerances
    skip_singular: bool

    @property
    def dim(self) -> int:
        return self.chart.dim


def load_problem(path) -> Problem:
    """Load and validate a problem file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecParseError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return problem_from_dict(data)


def problem_from_dict(data) -> Problem:
    """Validate a problem document and produce the runnable Problem."""
    if not isinstance(data, dict):
        raise SpecValidationError("problem document must be a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise SpecValidationError(f"unknown top-level keys: {sorted(unknown)}")
    for key in ("dim", "coords", "w", "samples"):
        if data.get(key) is None:
            raise SpecValidationError(f"missing required key '{key}'")

    dim = _expect_int(data["dim"], "dim", minimum=1)
    coords = data["coords"]
    if not isinstance(coords, list) or len(coords) != dim:
        raise SpecValidationError(f"coords must be a list of {dim} names")
    try:
        chart = Chart(tuple(str(name) for name in coords))
    except ValueError as exc:
        raise SpecValidationError(f"coords: {exc}") from exc

    w = _parse_bivector(data["w"], chart, "w")
    w_prime = None
    if data.get("w_prime") is not None:
        w_prime = _parse_bivector(data["w_prime"], chart, "w_prime")
    r_tensor = None
    if data.get("R") is not None:
        r_tensor = _parse_tensor(data["R"], chart)

    mode, seed, samples = _parse_samples(data["samples"], dim)
    tolerances = _parse_tolerances(data.get("tolerances"))
    skip_singular = _parse_flags(data.get("flags"))

    return Problem(
        chart=chart,
        w=w,
        w_prime=w_prime,
        r_tensor=r_tensor,
        samples=samples,
        sample_mode=mode,
        seed=seed,
        tolerances=tolerances,
        skip_singular=skip_singular,
    )


def _parse_bivector(entries, chart: Chart, label: str) -> BivectorField:
    if not isinstance(entries, list):
        raise SpecValidationError(f"{label} must be a list of upper-triangle entries")
    upper = {}
    for position, item in enumerate(entries):
        if not isinstance(item, dict) or set(item) != {"i", "j", "expr"}:
            raise SpecValidationError(
                f"{label}[{position}] must be an object with keys i, j, expr"
            )
        i = _expect_int(item["i"], f"{label}[{position}].i", minimum=1)
        j = _expect_int(item["j"], f"{label}[{position}].j", minimum=1)
        if not (1 <= i < j <= chart.dim):
            raise SpecValidationError(
                f"{label} entry ({i}, {j}) must satisfy 1 <= i < j <= {chart.dim}"
            )
        if (i - 1, j - 1) in upper:
            raise SpecValidationError(f"duplicate {label} entry ({i}, {j})")
        if not isinstance(item["expr"], str):
            raise SpecValidationError(f"{label}[{i}][{j}]: expr must be a string")
        try:
            upper[(i - 1, j - 1)] = parse_expr(item["expr"], chart)
        except RecopError as exc:
            raise SpecValidationError(f"{label}[{i}][{j}]: {exc}") from exc
    return BivectorField(chart=chart, upper=upper)


def _parse_tensor(rows, chart: Chart) -> TensorField11:
    n = chart.dim
    if (
        not isinstance(rows, list)
        or len(rows) != n
        or any(not isinstance(row, list) or len(row) != n for row in rows)
    ):
        raise SpecValidationError(f"R must be an {n} x {n} matrix of expression strings")
    parsed_rows = []
    for i, row in enumerate(rows):
        parsed = []
        for j, text in enumerate(row):
            if not isinstance(text, str):
                raise SpecValidationError(f"R[{i + 1}][{j + 1}]: must be a string")
            try:
                parsed.append(parse_expr(text, chart))
            except RecopError as exc:
                raise SpecValidationError(f"R[{i + 1}][{j + 1}]: {exc}") from exc
        parsed_rows.append(tuple(parsed))
    return TensorField11(chart=chart, entries=tuple(parsed_rows))


def _parse_samples(spec, dim: int):
    if not isinstance(spec, dict):
        raise SpecValidationError("samples must be an object")
    unknown = set(spec) - _SAMPLE_KEYS
    if unknown:
        raise SpecValidationError(f"unknown samples keys: {sorted(unknown)}")
    mode = spec.get("mode")
    if mode not in _MODE_KEYS:
        raise SpecValidationError("samples.mode must be one of explicit, grid, random")
    required = _MODE_KEYS[mode]
    for key in required:
        if spec.get(key) is None:
            if key == "seed":
                raise SpecValidationError("random mode requires a seed (reproducibility)")
            raise SpecValidationError(f"samples.{key} is required in {mode} mode")
    stray = {k for k in spec if k not in required | {"mode", "exclude_balls"} and spec[k] is not None}
    if stray:
        raise SpecValidationError(f"samples keys {sorted(stray)} do not apply to {mode} mode")

    balls = _parse_balls(spec.get("exclude_balls"), dim)

    if mode == "explicit":
        points = _parse_explicit(spec["points"], dim, balls)
        return mode, None, points
    box = _parse_box(spec["box"], dim)
    if mode == "grid":
        counts = spec["counts"]
        if not isinstance(counts, list) or len(counts) != dim:
            raise SpecValidationError(f"samples.counts must be a list of {dim} integers")
        counts = [_expect_int(c, "samples.counts", minimum=1) for c in counts]
        points = _grid_points(box, counts, balls)
        if not points:
            raise SpecValidationError("exclusion balls removed every grid point")
        return mode, None, points
    count = _expect_int(spec["count"], "samples.count", minimum=1)
    seed = _expect_int(spec["seed"], "samples.seed", minimum=0)
    points = _random_points(box, count, seed, balls)
    return mode, seed, points


def _parse_explicit(points, dim: int, balls) -> list:
    if not isinstance(points, list) or not points:
        raise SpecValidationError("samples.points must be a nonempty list of points")
    out = []
    for idx, raw in enumerate(points):
        point = _expect_point(raw, f"samples.points[{idx}]", dim)
        for ball in balls:
            if ball.contains(point):
                raise SpecValidationError(
                    f"samples.points[{idx}] lies inside an exclusion ball"
                )
        out.append(point)
    return out


def _parse_box(box, dim: int) -> list:
    if not isinstance(box, list) or len(box) != dim:
        raise SpecValidationError(f"samples.box must be a list of {dim} [low, high] pairs")
    out = []
    for idx, pair in enumerate(box):
        if not isinstance(pair, list) or len(pair) != 2:
            raise SpecValidationError(f"samples.box[{idx}] must be [low, high]")
        low = _expect_number(pair[0], f"samples.box[{idx}][0]")
        high = _expect_number(pair[1], f"samples.box[{idx}][1]")
        if not low <= high:
            raise SpecValidationError(f"samples.box[{idx}] must satisfy low <= high")
        out.append((low, high))
    return out


def _parse_balls(balls, dim: int) -> list:
    if balls is None:
        return []
    if not isinstance(balls, list):
        raise SpecValidationError("samples.exclude_balls must be a list")
    out = []
    for idx, raw in enumerate(balls):
        if not isinstance(raw, dict) or set(raw) != {"center", "radius"}:
            raise SpecValidationError(
                f"samples.exclude_balls[{idx}] must have keys center, radius"
            )
        center = _expect_point(raw["center"], f"samples.exclude_balls[{idx}].center", dim)
        radius = _expect_number(raw["radius"], f"samples.exclude_balls[{idx}].radius")
        if radius <= 0:
            raise SpecValidationError(f"samples.exclude_balls[{idx}].radius must be > 0")
        out.append(ExclusionBall(center=center, radius=radius))
    return out


def _grid_points(box, counts, balls) -> list:
    axes = [np.linspace(low, high, count) for (low, high), count in zip(box, counts)]
    points = []
    for combo in itertools.product(*axes):
        point = np.array(combo, dtype=float)
        if all(not ball.contains(point) for ball in balls):
            points.append(point)
    return points


def _random_points(box, count, seed, balls) -> list:
    rng = SplitMix64(seed)
    points = []
    for _ in range(count):
        for _ in range(_MAX_REJECTION_TRIES):
            candidate = np.array([rng.uniform(low, high) for low, high in box])
            if all(not ball.contains(candidate) for ball in balls):
                points.append(candidate)
                break
        else:
            raise SpecValidationError(
                "exclusion balls reject too much of the box; cannot draw samples"
            )
    return points


def _parse_tolerances(spec) -> Tolerances:
    if spec is None:
        return Tolerances()
    if not isinstance(spec, dict):
        raise SpecValidationError("tolerances must be an object")
    unknown = set(spec) - {"rank", "subspace", "residual"}
    if unknown:
        raise SpecValidationError(f"unknown tolerances keys: {sorted(unknown)}")
    values = {}
    for key in ("rank", "subspace", "residual"):
        if spec.get(key) is not None:
            value = _expect_number(spec[key], f"tolerances.{key}")
            if value <= 0:
                raise SpecValidationError(f"tolerances.{key} must be > 0")
            values[key] = value
    return Tolerances(**values)


def _parse_flags(spec) -> bool:
    if spec is None:
        return False
    if not isinstance(spec, dict):
        raise SpecValidationError("flags must be an object")
    unknown = set(spec) - {"skip_singular_samples"}
    if unknown:
        raise SpecValidationError(f"unknown flags keys: {sorted(unknown)}")
    value = spec.get("skip_singular_samples", False)
    if not isinstance(value, bool):
        raise SpecValidationError("flags.skip_singular_samples must be a boolean")
    return value


def _expect_int(value, field: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SpecValidationError(f"{field} must be an integer")
    if minimum is not None and value < minimum:
        raise SpecValidationError(f"{field} must be >= {minimum}")
    return value


def _expect_number(value, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecValidationError(f"{field} must be a number")
    out = float(value)
    if not np.isfinite(out):
        raise SpecValidationError(f"{field} must be finite")
    return out


def _expect_point(raw, field: str, dim: int) -> np.ndarray:
    if not isinstance(raw, list) or len(raw) != dim:
        raise SpecValidationError(f"{field} must be a list of {dim} numbers")
    return np.array([_expect_number(x, field) for x in raw], dtype=float)
