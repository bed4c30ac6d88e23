"""HTTP service exposing the four commands.

POST a problem document (same schema as a problem file) to /check,
/build, /verify or /leafwise and get the corresponding report back.
Responses are rendered with the canonical JSON encoder, so the wire
bytes equal the CLI's output files. Errors come back as
{"error": {"type", "category", "message"}} with status 422 for input
errors and 409 for mathematical breakdowns mid-computation.
"""

from __future__ import annotations

from typing import Any

from fastapi import FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError

from .. import __version__
from ..commands import run_build, run_check, run_leafwise, run_verify
from ..errors import RecopError
from ..problem import Problem, problem_from_dict
from ..reports import canonical_dumps, error_body
from .models import (
    BuildReportModel,
    CheckReportModel,
    ErrorEnvelope,
    HealthStatus,
    LeafwiseReportModel,
    ProblemDocument,
    VerifyReportModel,
)

_ERROR_RESPONSES: dict[int | str, dict[str, Any]] = {
    422: {"model": ErrorEnvelope, "description": "Input error"},
    409: {"model": ErrorEnvelope, "description": "Mathematical breakdown"},
}


class CanonicalJSONResponse(Response):
    media_type = "application/json"

    def render(self, content: Any) -> bytes:
        return canonical_dumps(content).encode("utf-8")


def _problem(document: ProblemDocument) -> Problem:
    return problem_from_dict(document.model_dump(exclude_none=True))


def create_app() -> FastAPI:
    app = FastAPI(
        title="recop",
        version=__version__,
        description=(
            "Decide whether two Poisson bivectors admit a recursion operator "
            "(equal constant rank and coinciding characteristic distributions "
            "over the sample set) and construct it pointwise."
        ),
        default_response_class=CanonicalJSONResponse,
    )

    @app.exception_handler(RecopError)
    async def recop_error_handler(_request: Request, exc: RecopError):
        status = 409 if exc.category == "math" else 422
        return CanonicalJSONResponse(error_body(exc), status_code=status)

    @app.exception_handler(RequestValidationError)
    async def shape_error_handler(_request: Request, exc: RequestValidationError):
        details = "; ".join(
            ".".join(str(part) for part in err["loc"]) + ": " + err["msg"]
            for err in exc.errors()
        )
        body = {
            "error": {
                "type": "RequestValidationError",
                "category": "input",
                "message": details or "malformed request body",
            }
        }
        return CanonicalJSONResponse(body, status_code=422)

    @app.get("/health", response_model=HealthStatus)
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/check", response_model=CheckReportModel, responses=_ERROR_RESPONSES)
    def check(document: ProblemDocument, jobs: int = Query(default=1, ge=1)):
        return run_check(_problem(document), jobs=jobs)

    @app.post("/build", response_model=BuildReportModel, responses=_ERROR_RESPONSES)
    def build(document: ProblemDocument, jobs: int = Query(default=1, ge=1)):
        return run_build(_problem(document), jobs=jobs)

    @app.post("/verify", response_model=VerifyReportModel, responses=_ERROR_RESPONSES)
    def verify(document: ProblemDocument, jobs: int = Query(default=1, ge=1)):
        return run_verify(_problem(document), jobs=jobs)

    @app.post("/leafwise", response_model=LeafwiseReportModel, responses=_ERROR_RESPONSES)
    def leafwise(document: ProblemDocument, jobs: int = Query(default=1, ge=1)):
        return run_leafwise(_problem(document), jobs=jobs)

    return app


app = create_app()
