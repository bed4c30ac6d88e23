"""Decide whether a recursion operator exists and construct it pointwise.

Existence test over a sample set: both bivectors must satisfy the Jacobi
identity, their ranks must be constant across samples and equal to each
other, and the column spaces of their matrices must coincide at every
sample. On success, at each point z:

    basis    B      orthonormal basis of the column space of W(z)
    leaf     M      = B^T W(z) B      (invertible, antisymmetric)
             M'     = B^T W'(z) B
    leaf op  R_F    = M' M^-1
    full op  R      = B R_F B^T + (I - B B^T)
    dual     R*     = B (M^-1 M') B^T + (I - B B^T)

R satisfies W' = R W and W' = W R*, acts as the identity on the
orthogonal complement of the leaf, and its leaf part is independent of
the basis choice; the extension to the complement is a documented
choice (Euclidean-orthogonal), which also makes R* the plain transpose
of R. The leafwise symplectic matrices are the inverses of M and M'.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DomainError, OddRankError, SampleDomainError, SingularMatrixError, SpecValidationError
from .fields import BivectorField, TensorField11, jacobi_residual, nijenhuis_torsion
from .linalg import (
    DEFAULT_TOL_RANK,
    DEFAULT_TOL_SUBSPACE,
    Subspace,
    column_space,
    invert,
    max_abs,
    random_orthogonal,
    subspace_equal,
)
from .rng import SplitMix64

DEFAULT_TOL_RESIDUAL = 1e-8


@dataclass(frozen=True)
class Tolerances:
    rank: float = DEFAULT_TOL_RANK
    subspace: float = DEFAULT_TOL_SUBSPACE
    residual: float = DEFAULT_TOL_RESIDUAL


class Verdict(str, Enum):
    EXISTS_CONSTRUCTED = "EXISTS_CONSTRUCTED"
    REFUSED_RANK_MISMATCH = "REFUSED_RANK_MISMATCH"
    REFUSED_RANK_NOT_CONSTANT = "REFUSED_RANK_NOT_CONSTANT"
    REFUSED_DISTRIBUTION_MISMATCH = "REFUSED_DISTRIBUTION_MISMATCH"
    FAILED_JACOBI = "FAILED_JACOBI"
    SINGLE_STRUCTURE_OK = "SINGLE_STRUCTURE_OK"

    @property
    def passed(self) -> bool:
        return self in (Verdict.EXISTS_CONSTRUCTED, Verdict.SINGLE_STRUCTURE_OK)


@dataclass
class CheckSample:
    point: np.ndarray
    jacobi_w: float
    rank_w: int
    jacobi_w_prime: float | None = None
    rank_w_prime: int | None = None
    subspace_defect: float | None = None
    subspaces_equal: bool | None = None


@dataclass
class ExistenceReport:
    samples: list
    skipped: list  # (point, reason) pairs, only with skip_singular_samples
    verdict: Verdict
    rank_constant: bool
    common_rank: int | None
    distributions_coincide: bool | None
    max_jacobi_w: float
    max_jacobi_w_prime: float | None
    max_subspace_defect: float | None
    failure: dict | None = None


@dataclass
class LeafData:
    """Restriction of both bivectors to the characteristic subspace at a
    point. Carries the full matrices too so residuals can be checked
    against the actual evaluations rather than reconstructions."""

    point: np.ndarray
    basis: np.ndarray  # (n, k), orthonormal columns
    w_leaf: np.ndarray  # (k, k) = basis^T W basis
    w_prime_leaf: np.ndarray
    condition: float
    w_matrix: np.ndarray = field(repr=False, default=None)
    w_prime_matrix: np.ndarray = field(repr=False, default=None)


@dataclass
class RecursionPointResult:
    point: np.ndarray
    basis: np.ndarray
    r: np.ndarray  # (n, n), acts on vector components
    r_star: np.ndarray  # (n, n), acts on covector components
    r_leaf: np.ndarray  # (k, k)
    residual_recursion: float  # max |R W - W'|
    residual_leaf: float  # max |R_F M - M'|
    omega_leaf: np.ndarray  # (k, k) = M^-1
    omega_leaf_prime: np.ndarray
    condition: float


def characteristic_subspace(w_matrix, tol_rank: float, point=None) -> Subspace:
    """Column space of an evaluated bivector matrix; the rank of an
    antisymmetric matrix must come out even, otherwise the tolerance is
    misconfigured for this input."""
    sub = column_space(w_matrix, tol_rank)
    if sub.rank % 2 != 0:
        raise OddRankError(sub.rank, point=point, tol_rank=tol_rank)
    return sub


def _map_samples(worker, samples, jobs: int):
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(worker, samples))
    return [worker(point) for point in samples]


def decide_existence(
    w: BivectorField,
    w_prime: BivectorField | None,
    samples,
    tols: Tolerances = Tolerances(),
    skip_singular: bool = False,
    jobs: int = 1,
) -> ExistenceReport:
    """Run the existence test (or, without a second bivector, the
    single-structure Jacobi and rank checks) over the sample set.

    The verdict is relative to the sample set: nothing is extrapolated
    beyond the sampled points.
    """
    if len(samples) == 0:
        raise SpecValidationError("at least one sample point is required")
    if w_prime is not None and w_prime.chart != w.chart:
        raise SpecValidationError("both bivectors must live on the same chart")

    def worker(point):
        pt = np.asarray(point, dtype=float)
        try:
            row = CheckSample(
                point=pt,
                jacobi_w=jacobi_residual(w, pt),
                rank_w=0,
            )
            sub_w = characteristic_subspace(w.evaluate(pt), tols.rank, pt)
            row.rank_w = sub_w.rank
            if w_prime is not None:
                row.jacobi_w_prime = jacobi_residual(w_prime, pt)
                sub_wp = characteristic_subspace(w_prime.evaluate(pt), tols.rank, pt)
                row.rank_w_prime = sub_wp.rank
                equal, defect = subspace_equal(sub_w, sub_wp, tols.subspace)
                row.subspace_defect = defect
                row.subspaces_equal = equal
            return "ok", row
        except DomainError as exc:
            if skip_singular:
                return "skipped", (pt, str(exc))
            raise SampleDomainError(pt, exc) from exc

    outcomes = _map_samples(worker, samples, jobs)
    rows = [payload for kind, payload in outcomes if kind == "ok"]
    skipped = [payload for kind, payload in outcomes if kind == "skipped"]
    if not rows:
        raise SpecValidationError("every sample hit a singular locus; nothing to check")

    report = _aggregate_existence(rows, skipped, tols, paired=w_prime is not None)
    return report


def _aggregate_existence(rows, skipped, tols: Tolerances, paired: bool) -> ExistenceReport:
    max_jacobi_w = max(row.jacobi_w for row in rows)
    max_jacobi_wp = max(row.jacobi_w_prime for row in rows) if paired else None
    max_defect = max(row.subspace_defect for row in rows) if paired else None

    ranks_w = [row.rank_w for row in rows]
    ranks_wp = [row.rank_w_prime for row in rows] if paired else None
    rank_constant = len(set(ranks_w)) == 1 and (not paired or len(set(ranks_wp)) == 1)
    coincide = all(row.subspaces_equal for row in rows) if paired else None

    verdict = Verdict.EXISTS_CONSTRUCTED if paired else Verdict.SINGLE_STRUCTURE_OK
    failure = None

    offender = _first_jacobi_offender(rows, tols.residual, paired)
    if offender is not None:
        field_name, row, value = offender
        verdict = Verdict.FAILED_JACOBI
        failure = {"field": field_name, "point": row.point.tolist(), "value": value}
    elif not rank_constant:
        verdict = Verdict.REFUSED_RANK_NOT_CONSTANT
        bad = "w" if len(set(ranks_w)) != 1 else "w_prime"
        failure = {"field": bad, "ranks_w": ranks_w, "ranks_w_prime": ranks_wp}
    elif paired and ranks_w[0] != ranks_wp[0]:
        verdict = Verdict.REFUSED_RANK_MISMATCH
        failure = {"rank_w": ranks_w[0], "rank_w_prime": ranks_wp[0]}
    elif paired and not coincide:
        verdict = Verdict.REFUSED_DISTRIBUTION_MISMATCH
        worst = max(rows, key=lambda row: row.subspace_defect)
        failure = {"point": worst.point.tolist(), "defect": worst.subspace_defect}

    common_rank = None
    if rank_constant and (not paired or ranks_w[0] == ranks_wp[0]):
        common_rank = ranks_w[0]

    return ExistenceReport(
        samples=rows,
        skipped=skipped,
        verdict=verdict,
        rank_constant=rank_constant,
        common_rank=common_rank,
        distributions_coincide=coincide,
        max_jacobi_w=max_jacobi_w,
        max_jacobi_w_prime=max_jacobi_wp,
        max_subspace_defect=max_defect,
        failure=failure,
    )


def _first_jacobi_offender(rows, tol: float, paired: bool):
    for row in rows:
        if row.jacobi_w > tol:
            return "w", row, row.jacobi_w
        if paired and row.jacobi_w_prime > tol:
            return "w_prime", row, row.jacobi_w_prime
    return None


def restrict_to_basis(w_matrix, w_prime_matrix, point, basis) -> LeafData:
    """Restrict both evaluated bivectors to the span of an orthonormal
    basis; records the condition estimate of inverting the first."""
    m = basis.T @ w_matrix @ basis
    m_prime = basis.T @ w_prime_matrix @ basis
    if basis.shape[1] == 0:
        condition = 1.0
    else:
        try:
            _, condition = invert(m)
        except SingularMatrixError as exc:
            coords = [float(x) for x in np.asarray(point)]
            raise SingularMatrixError(
                f"restricted bivector singular at sample {coords}: {exc}"
            ) from exc
    return LeafData(
        point=np.asarray(point, dtype=float),
        basis=basis,
        w_leaf=m,
        w_prime_leaf=m_prime,
        condition=condition,
        w_matrix=w_matrix,
        w_prime_matrix=w_prime_matrix,
    )


def build_leaf(
    w: BivectorField,
    w_prime: BivectorField,
    point,
    tols: Tolerances = Tolerances(),
    basis: np.ndarray | None = None,
) -> LeafData:
    """Evaluate both bivectors at the point and restrict them to the
    characteristic subspace of the first (or to a caller-supplied
    orthonormal basis of it)."""
    pt = np.asarray(point, dtype=float)
    w_matrix = w.evaluate(pt)
    w_prime_matrix = w_prime.evaluate(pt)
    if basis is None:
        basis = characteristic_subspace(w_matrix, tols.rank, pt).basis
    return restrict_to_basis(w_matrix, w_prime_matrix, pt, basis)


def build_point(leaf: LeafData) -> RecursionPointResult:
    """Assemble R, R*, the leaf operator and the leafwise symplectic
    matrices from one leaf restriction."""
    basis = leaf.basis
    n, k = basis.shape
    complement = np.eye(n) - basis @ basis.T
    if k == 0:
        omega = omega_prime = r_leaf = np.zeros((0, 0))
        condition = 1.0
        r = np.eye(n)
        r_star = np.eye(n)
    else:
        omega, condition = invert(leaf.w_leaf)
        omega_prime, _ = invert(leaf.w_prime_leaf)
        r_leaf = leaf.w_prime_leaf @ omega
        r = basis @ r_leaf @ basis.T + complement
        r_star = basis @ (omega @ leaf.w_prime_leaf) @ basis.T + complement
    residual_recursion = max_abs(r @ leaf.w_matrix - leaf.w_prime_matrix)
    residual_leaf = max_abs(r_leaf @ leaf.w_leaf - leaf.w_prime_leaf)
    return RecursionPointResult(
        point=leaf.point,
        basis=basis,
        r=r,
        r_star=r_star,
        r_leaf=r_leaf,
        residual_recursion=residual_recursion,
        residual_leaf=residual_leaf,
        omega_leaf=omega,
        omega_leaf_prime=omega_prime,
        condition=condition,
    )


def build_at(
    w: BivectorField, w_prime: BivectorField, point, tols: Tolerances = Tolerances()
) -> RecursionPointResult:
    return build_point(build_leaf(w, w_prime, point, tols))


@dataclass
class VerifyPoint:
    point: np.ndarray
    residual: float
    residual_star: float | None = None
    torsion_max: float | None = None


def verify_recursion(
    w: BivectorField,
    w_prime: BivectorField,
    r_source,
    samples=None,
    jobs: int = 1,
) -> list:
    """Residual of the recursion identity W' = R W per sample.

    ``r_source`` is either a symbolic (1,1) tensor field (then the
    Nijenhuis torsion is evaluated and reported as a diagnostic, never a
    pass criterion) or a list of built per-point results (then the dual
    identity W' = W R* is checked as well).
    """
    if isinstance(r_source, TensorField11):
        if samples is None:
            raise ValueError("samples are required for a symbolic tensor")

        def worker(point):
            pt = np.asarray(point, dtype=float)
            r_matrix = r_source.evaluate(pt)
            residual = max_abs(r_matrix @ w.evaluate(pt) - w_prime.evaluate(pt))
            _, torsion_max = nijenhuis_torsion(r_source, pt)
            return VerifyPoint(point=pt, residual=residual, torsion_max=torsion_max)

        return _map_samples(worker, samples, jobs)

    def worker(result: RecursionPointResult):
        pt = result.point
        w_matrix = w.evaluate(pt)
        w_prime_matrix = w_prime.evaluate(pt)
        residual = max_abs(result.r @ w_matrix - w_prime_matrix)
        residual_star = max_abs(w_matrix @ result.r_star - w_prime_matrix)
        return VerifyPoint(point=pt, residual=residual, residual_star=residual_star)

    return _map_samples(worker, list(r_source), jobs)


def splitting_independence_check(leaf: LeafData, trials: int, seed: int) -> float:
    """Rotate the leaf basis by random orthogonal matrices and rebuild.

    The conjugated leaf operator and the full operator must both be
    unchanged (the leaf part is determined by the two bivectors alone;
    the extension depends only on the subspace, not the basis). Returns
    the largest deviation seen.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    baseline = build_point(leaf)
    k = leaf.basis.shape[1]
    rng = SplitMix64(seed)
    worst = 0.0
    for _ in range(trials):
        rotation = random_orthogonal(k, rng)
        rotated = restrict_to_basis(
            leaf.w_matrix, leaf.w_prime_matrix, leaf.point, leaf.basis @ rotation
        )
        rebuilt = build_point(rotated)
        leaf_dev = max_abs(rotation @ rebuilt.r_leaf @ rotation.T - baseline.r_leaf)
        full_dev = max_abs(rebuilt.r - baseline.r)
        worst = max(worst, leaf_dev, full_dev)
    return worst
