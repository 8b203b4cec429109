"""Command-line client for the contextuality service.

Each subcommand is a thin wrapper over one service endpoint.  By default the
FastAPI app is driven in-process (no server needed); ``--server URL`` points
the same commands at a running instance instead.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import asyncio
import csv
import io
import json
import os
import sys

import httpx

SEED_ENV = "CONTEXTSIM_SEED"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class ServiceClient:
    """Minimal sync client; in-process ASGI transport unless a server is given."""

    def __init__(self, server: str | None = None):
        self._server = server

    def request(self, method: str, path: str, json_body: dict | None = None) -> httpx.Response:
        if self._server:
            with httpx.Client(base_url=self._server, timeout=600.0) as client:
                return client.request(method, path, json=json_body)
        return asyncio.run(self._asgi_request(method, path, json_body))

    @staticmethod
    async def _asgi_request(method: str, path: str, json_body: dict | None) -> httpx.Response:
        from .service.app import app

        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport, base_url="http://contextsim") as client:
            return await client.request(method, path, json=json_body)


def _comma_list(value: str) -> list[str]:
    items = [item.strip() for item in value.split(",") if item.strip()]
    if not items:
        raise argparse.ArgumentTypeError("expected a comma-separated list")
    return items


def _comma_floats(value: str) -> list[float]:
    try:
        return [float(item) for item in _comma_list(value)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: {value!r}")


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    return int(os.environ.get(SEED_ENV, "0"))


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {out}")
    else:
        sys.stdout.write(text)


def _as_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _as_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _catalog_csv(entries: list[dict]) -> str:
    rows = [
        [e["id"], e["kind"], e["definition"],
         e["entanglement"]["chsh_max"], e["entanglement"]["ppt_min_eig"],
         e["entanglement"]["violates_chsh"], e["entanglement"]["is_ppt_separable"]]
        for e in entries
    ]
    return _as_csv(
        ["id", "kind", "definition", "chsh_max", "ppt_min_eig", "violates_chsh", "is_ppt_separable"],
        rows,
    )


def _run_csv(report: dict) -> str:
    rows = []
    for result in report["results"]:
        sds = result["sds_of_violation"]
        for ctx in result["contexts"]:
            for outcome, count, prob in zip(ctx["outcomes"], ctx["counts"], ctx["probabilities"]):
                rows.append([
                    result["state"], ctx["display"], ctx["sign"], outcome, count, prob,
                    ctx["expectation"], ctx["sd"], result["chi"], result["chi_sd"],
                    "" if sds is None else sds,
                ])
    return _as_csv(
        ["state", "context", "sign", "outcome", "count", "probability",
         "expectation", "sd", "chi", "chi_sd", "sds_of_violation"],
        rows,
    )


def _sweep_csv(report: dict) -> str:
    rows = [[r["vis_ps"], r["vis_pi"], r["state"], r["chi"], r["chi_sd"]] for r in report["rows"]]
    return _as_csv(["vis_ps", "vis_pi", "state", "chi", "chi_sd"], rows)


def _certify_csv(report: dict) -> str:
    labels = ["A", "B", "C", "a", "b", "c", "alpha", "beta", "gamma"]
    rows = [[row["values"][l] for l in labels] + [row["chi"]] for row in report["table"]]
    return _as_csv(labels + ["chi"], rows)


def _fetch(args, method: str, path: str, json_body: dict | None = None) -> dict | list:
    client = ServiceClient(args.server)
    try:
        response = client.request(method, path, json_body)
    except httpx.HTTPError as exc:
        print(f"error: service request failed: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_FAILURE)
    if response.status_code >= 400:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        print(f"error: {detail}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    return response.json()


def cmd_catalog(args) -> int:
    entries = _fetch(args, "GET", "/catalog")
    _emit(_catalog_csv(entries) if args.format == "csv" else _as_json(entries), args.out)
    return EXIT_OK


def cmd_run(args) -> int:
    body = {
        "states": args.states,
        "shots": args.shots,
        "seed": _resolve_seed(args.seed),
        "vis_ps": args.vis_ps,
        "vis_pi": args.vis_pi,
        "efficiency": args.efficiency,
        "ideal": args.ideal,
        "direct": args.direct,
    }
    report = _fetch(args, "POST", "/run", body)
    _emit(_run_csv(report) if args.format == "csv" else _as_json(report), args.out)
    return EXIT_OK if report["all_violating"] else EXIT_FAILURE


def cmd_sweep(args) -> int:
    body = {
        "vis_ps": args.vis_ps,
        "vis_pi": args.vis_pi,
        "states": args.states,
        "shots": args.shots,
        "seed": _resolve_seed(args.seed),
        "efficiency": args.efficiency,
    }
    report = _fetch(args, "POST", "/sweep", body)
    _emit(_as_json(report) if args.format == "json" else _sweep_csv(report), args.out)
    return EXIT_OK


def cmd_verify_optics(args) -> int:
    report = _fetch(args, "GET", "/verify-optics")
    _emit(_as_json(report), args.out)
    print(f"max total variation over {report['checks']} checks: "
          f"{report['max_total_variation']:.3e} (tolerance {report['tolerance']:.0e})",
          file=sys.stderr)
    return EXIT_OK if report["passed"] else EXIT_FAILURE


def cmd_certify_classical(args) -> int:
    full = args.format == "csv"
    report = _fetch(args, "GET", f"/certify-classical?full={'true' if full else 'false'}")
    if args.format == "csv":
        _emit(_certify_csv(report), args.out)
    else:
        report.pop("table", None)
        _emit(_as_json(report), args.out)
    return EXIT_OK if report["passed"] else EXIT_FAILURE


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def _add_output_flags(parser, default_format: str = "json") -> None:
    parser.add_argument("--out", help="Write the report to this path instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), default=default_format)


def _add_run_flags(parser) -> None:
    parser.add_argument("--states", type=_comma_list, default=None,
                        help="Comma-separated catalog ids (default: all 20)")
    parser.add_argument("--shots", type=int, default=17_000_000,
                        help="Prepared photons per context")
    parser.add_argument("--seed", type=int, default=None,
                        help=f"RNG seed (default: ${SEED_ENV} or 0)")
    parser.add_argument("--efficiency", type=float, default=0.50,
                        help="Detection efficiency in (0, 1]")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contextsim",
        description="Single-photon contextuality simulator (catalog, runs, sweeps, verification).",
    )
    parser.add_argument("--server", default=None,
                        help="Base URL of a running service (default: run in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="List the 20 benchmark states with classification")
    _add_output_flags(p)
    p.set_defaults(handler=cmd_catalog)

    p = sub.add_parser("run", help="Simulate counting runs and report chi per state")
    _add_run_flags(p)
    p.add_argument("--vis-ps", type=float, default=0.92, help="Phase-sensitive visibility")
    p.add_argument("--vis-pi", type=float, default=0.995, help="Phase-insensitive visibility")
    p.add_argument("--ideal", action="store_true", help="Exact noiseless mode (no sampling)")
    p.add_argument("--direct", action="store_true",
                   help="Simulate mixed states directly instead of combining pure-state counts")
    _add_output_flags(p)
    p.set_defaults(handler=cmd_run)

    p = sub.add_parser("sweep", help="Chi over a visibility grid")
    _add_run_flags(p)
    p.add_argument("--vis-ps", type=_comma_floats, default=[1.0, 0.95, 0.92, 0.90],
                   help="Comma-separated phase-sensitive visibility grid")
    p.add_argument("--vis-pi", type=_comma_floats, default=[0.995],
                   help="Comma-separated phase-insensitive visibility grid")
    _add_output_flags(p, default_format="csv")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("verify-optics", help="Device checks and optics/reference equivalence")
    p.add_argument("--out", help="Write the report to this path instead of stdout")
    p.set_defaults(handler=cmd_verify_optics)

    p = sub.add_parser("certify-classical", help="Exhaustive noncontextual bound certification")
    _add_output_flags(p)
    p.set_defaults(handler=cmd_certify_classical)

    p = sub.add_parser("serve", help="Run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(handler=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_FAILURE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
