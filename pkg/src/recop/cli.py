"""Command-line front end, a thin client of the HTTP service.

By default each subcommand spins the service up in-process (ASGI
transport, no sockets) and POSTs the problem document to it; --server
points the same client at a running instance instead. Exit codes:
0 pass, 1 mathematical refusal or failed verification, 2 input or
usage error.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

import httpx

from .reports import report_exit_status

_CLIENT_COMMANDS = {
    "check": "decide whether a recursion operator exists over the samples",
    "build": "existence check plus pointwise construction of R and R*",
    "verify": "residual of the recursion identity for a supplied symbolic R",
    "leafwise": "leafwise symplectic matrices (inverses of the restricted bivectors)",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recop",
        description="Recursion operators between Poisson bivectors, pointwise.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, help_text in _CLIENT_COMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("--spec", required=True, help="problem JSON file")
        sub.add_argument("--out", help="write the report here instead of stdout")
        sub.add_argument("--tol-rank", type=float, help="override the rank tolerance")
        sub.add_argument("--tol-subspace", type=float, help="override the subspace tolerance")
        sub.add_argument("--tol-residual", type=float, help="override the residual tolerance")
        sub.add_argument("--jobs", type=int, default=1, help="per-sample worker threads")
        sub.add_argument(
            "--server",
            help="base URL of a running recop service (default: run in-process)",
        )
    serve = subparsers.add_parser("serve", help="run the HTTP service with uvicorn")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _load_document(path: str) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ValueError("problem document must be a JSON object")
    return data


def _apply_overrides(document: dict, args: argparse.Namespace) -> None:
    overrides = {
        "rank": args.tol_rank,
        "subspace": args.tol_subspace,
        "residual": args.tol_residual,
    }
    overrides = {key: value for key, value in overrides.items() if value is not None}
    if not overrides:
        return
    tolerances = document.get("tolerances")
    if tolerances is None:
        tolerances = document["tolerances"] = {}
    if isinstance(tolerances, dict):
        tolerances.update(overrides)
    # a non-dict 'tolerances' is left for the service to reject


async def _post(args: argparse.Namespace, document: dict) -> tuple[int, bytes]:
    if args.server:
        transport = None
        base_url = args.server
    else:
        from .service import create_app

        transport = httpx.ASGITransport(app=create_app())
        base_url = "http://recop.internal"
    async with httpx.AsyncClient(
        transport=transport, base_url=base_url, timeout=300.0
    ) as client:
        response = await client.post(
            f"/{args.command}", json=document, params={"jobs": args.jobs}
        )
        return response.status_code, response.content


def _emit(content: bytes, out_path: str | None) -> None:
    if out_path:
        Path(out_path).write_bytes(content)
    else:
        sys.stdout.write(content.decode("utf-8"))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        from .service import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return 0

    try:
        document = _load_document(args.spec)
    except (OSError, ValueError) as exc:
        print(f"recop: cannot load {args.spec}: {exc}", file=sys.stderr)
        return 2
    _apply_overrides(document, args)

    try:
        status, content = asyncio.run(_post(args, document))
    except httpx.HTTPError as exc:
        print(f"recop: request failed: {exc}", file=sys.stderr)
        return 2

    if status == 200:
        _emit(content, args.out)
        try:
            return report_exit_status(json.loads(content))
        except (ValueError, KeyError) as exc:
            print(f"recop: malformed report: {exc}", file=sys.stderr)
            return 2
    sys.stderr.write(content.decode("utf-8", errors="replace"))
    return 1 if status == 409 else 2


if __name__ == "__main__":
    raise SystemExit(main())
