"""Pydantic request and response models for the HTTP service.

The request model mirrors the problem-file schema one to one, so a file
that works with the CLI can be POSTed verbatim. Deep validation
(expression parsing, sampling rules) happens in ``problem_from_dict``;
these models pin the JSON shape and the OpenAPI docs. Response models
mirror the report dicts exactly; nullable fields are always present.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ---------------------------------------------------------------------------
# Requests


class UpperEntry(StrictModel):
    i: int
    j: int
    expr: str


class ExclusionBallModel(StrictModel):
    center: list[float]
    radius: float


class SamplesModel(StrictModel):
    mode: Literal["explicit", "grid", "random"]
    points: Optional[list[list[float]]] = None
    box: Optional[list[list[float]]] = None
    counts: Optional[list[int]] = None
    count: Optional[int] = None
    seed: Optional[int] = None
    exclude_balls: Optional[list[ExclusionBallModel]] = None


class TolerancesModel(StrictModel):
    rank: Optional[float] = None
    subspace: Optional[float] = None
    residual: Optional[float] = None


class FlagsModel(StrictModel):
    skip_singular_samples: Optional[bool] = None


class ProblemDocument(StrictModel):
    dim: int
    coords: list[str]
    w: list[UpperEntry]
    w_prime: Optional[list[UpperEntry]] = None
    R: Optional[list[list[str]]] = None
    samples: SamplesModel
    tolerances: Optional[TolerancesModel] = None
    flags: Optional[FlagsModel] = None


# ---------------------------------------------------------------------------
# Responses


class ToleranceSet(BaseModel):
    rank: float
    subspace: float
    residual: float


class FlagSet(BaseModel):
    skip_singular_samples: bool


class ReportBase(BaseModel):
    command: str
    dim: int
    coords: list[str]
    sample_mode: str
    seed: Optional[int]
    num_samples: int
    tolerances: ToleranceSet
    flags: FlagSet
    scope: Literal["sample-set", "global"]


class CheckSampleRow(BaseModel):
    point: list[float]
    jacobi_w: float
    jacobi_w_prime: Optional[float]
    rank_w: int
    rank_w_prime: Optional[int]
    subspace_defect: Optional[float]


class SkippedSampleRow(BaseModel):
    point: list[float]
    reason: str


class CheckAggregates(BaseModel):
    max_jacobi_w: float
    max_jacobi_w_prime: Optional[float]
    max_subspace_defect: Optional[float]
    common_rank: Optional[int]
    rank_constant: bool
    distributions_coincide: Optional[bool]


class CheckReportModel(ReportBase):
    samples: list[CheckSampleRow]
    skipped_samples: list[SkippedSampleRow]
    aggregates: CheckAggregates
    failure: Optional[dict]
    verdict: str


class BuildResultRow(BaseModel):
    point: list[float]
    basis: list[list[float]]
    r: list[list[float]]
    r_star: list[list[float]]
    r_leaf: list[list[float]]
    residual_recursion: float
    residual_leaf: float
    condition: float


class BuildAggregates(BaseModel):
    max_residual_recursion: Optional[float]
    max_residual_leaf: Optional[float]


class BuildReportModel(ReportBase):
    samples: list[CheckSampleRow]
    skipped_samples: list[SkippedSampleRow]
    aggregates: CheckAggregates
    failure: Optional[dict]
    results: Optional[list[BuildResultRow]]
    build_aggregates: BuildAggregates
    globally_valid: bool
    verdict: str


class LeafwiseResultRow(BaseModel):
    point: list[float]
    basis: list[list[float]]
    omega_leaf: list[list[float]]
    omega_leaf_prime: list[list[float]]
    inverse_residual: float
    inverse_residual_prime: float
    condition: float


class LeafwiseAggregates(BaseModel):
    max_inverse_residual: Optional[float]


class LeafwiseReportModel(ReportBase):
    samples: list[CheckSampleRow]
    skipped_samples: list[SkippedSampleRow]
    aggregates: CheckAggregates
    failure: Optional[dict]
    results: Optional[list[LeafwiseResultRow]]
    leafwise_aggregates: LeafwiseAggregates
    verdict: str


class VerifySampleRow(BaseModel):
    point: list[float]
    residual: float
    torsion_max: Optional[float]


class VerifyAggregates(BaseModel):
    max_residual: float
    max_torsion: float


class VerifyReportModel(ReportBase):
    samples: list[VerifySampleRow]
    skipped_samples: list[SkippedSampleRow]
    aggregates: VerifyAggregates
    passed: bool


class ErrorInfo(BaseModel):
    type: str
    category: Literal["input", "math"]
    message: str


class ErrorEnvelope(BaseModel):
    error: ErrorInfo


class HealthStatus(BaseModel):
    status: Literal["ok"]
    version: str
