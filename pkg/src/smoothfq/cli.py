"""Command line client for the smoothfq service.

Each subcommand builds one request, posts it to the service, and prints the
response: JSON for single reports, CSV for scans, a bare number for rho.
By default the service app is mounted in-process through an ASGI transport;
--server points the same client at a running instance instead, so the CLI
and the HTTP API cannot disagree.

Exit codes: 0 success; 1 usage, domain, or budget errors; 2 verification
failure (an asserted identity broke or methods disagreed).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Optional

import httpx


def _client(server: Optional[str]) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    # TestClient is an httpx.Client that drives the ASGI app in-process, so
    # offline use and a remote --server go through identical request paths.
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

    from .service import create_app

    return TestClient(create_app())


def _config_body(args) -> Optional[dict]:
    body = {}
    if getattr(args, "budget", None) is not None:
        body["enumeration_budget"] = args.budget
    if getattr(args, "table_budget", None) is not None:
        body["table_budget"] = args.table_budget
    if getattr(args, "seed", None) is not None:
        body["seed"] = args.seed
    if getattr(args, "tolerance", None) is not None:
        body["tolerance"] = args.tolerance
    return body or None


def _post(client: httpx.Client, path: str, body: dict) -> dict:
    resp = client.post(path, json=body)
    if resp.status_code >= 400:
        try:
            detail = resp.json().get("detail", resp.text)
        except Exception:
            detail = resp.text
        print(f"error: {detail}", file=sys.stderr)
        raise SystemExit(1)
    return resp.json()


def _print_json(data: dict):
    print(json.dumps(data, indent=2))


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--server", default=None, help="base URL of a running service; default runs in-process")
    p.add_argument("--budget", type=int, default=None, help="enumeration budget override")
    p.add_argument("--table-budget", dest="table_budget", type=int, default=None, help="sieve table budget override")
    p.add_argument("--seed", type=int, default=None, help="seed for sampled checks")
    p.add_argument("--tolerance", type=float, default=None, help="identity tolerance override")


def _add_field(p: argparse.ArgumentParser):
    p.add_argument("--q", "--field", dest="field", default="2",
                   help='field spec: "q", "p^k", or "p^k:c0,c1,...,ck"')


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad arguments, but 2 means "verification failed"
    # here, so usage errors are remapped to 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="smoothfq", description=__doc__,
                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="exact smooth count with prescribed coefficients")
    _add_field(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--prescribe", default="", help='prescription "i=v,i=v,..."')
    p.add_argument("--method", default="auto",
                   choices=["auto", "enumeration", "dp", "parseval", "both"])
    _add_common(p)

    p = sub.add_parser("predict", help="main-term and corrected predictions")
    _add_field(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--prescribe", default="")
    p.add_argument("--variant", default="thm2", choices=["thm1", "thm2"])
    p.add_argument("--with-exact", dest="with_exact", action="store_true")
    _add_common(p)

    p = sub.add_parser("rho", help="Dickman rho and derivatives")
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--deriv", type=int, default=0, choices=[0, 1, 2])
    p.add_argument("--json", action="store_true", help="full JSON instead of the bare value")
    _add_common(p)

    p = sub.add_parser("charsum", help="character sums over polynomial strata")
    _add_field(p)
    p.add_argument("--l", dest="ell", type=int, required=True)
    p.add_argument("--g", required=True, help="modulus coefficients, low degree first")
    p.add_argument("--chi", required=True, help="character exponents, comma separated")
    p.add_argument("--kind", default="irreducibles", choices=["irreducibles", "smooth", "monic"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("lpoly", help="L-polynomial coefficients and root report")
    _add_field(p)
    p.add_argument("--l", dest="ell", type=int, required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--chi", required=True)
    _add_common(p)

    p = sub.add_parser("verify", help="run verification suites, or one named identity")
    p.add_argument("target", help='"all", a suite name, or "gauss" with --g for a single check')
    _add_field(p)
    p.add_argument("--l", dest="ell", type=int, default=None)
    p.add_argument("--g", default=None)
    p.add_argument("--b", default="1")
    p.add_argument("--small", action="store_true", help="trimmed grids")
    _add_common(p)

    p = sub.add_parser(
        "scan",
        help="CSV prediction table over an (n, m, prescription) grid",
        description="Emits CSV with columns q,n,m,prescription,exact,main,"
                    "corrected,rel_err_main,rel_err_corrected.")
    _add_field(p)
    p.add_argument("--ns", required=True, help="degrees, comma separated")
    p.add_argument("--ms", required=True, help="smoothness bounds, comma separated")
    p.add_argument("--prescribe", action="append", default=[],
                   help="prescription string; repeatable (empty allowed)")
    p.add_argument("--variant", default="thm2", choices=["thm1", "thm2"])
    p.add_argument("--no-exact", dest="with_exact", action="store_false")
    _add_common(p)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return ap


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return 0

    with _client(args.server) as client:
        cfg = _config_body(args)

        if args.command == "count":
            data = _post(client, "/count", {
                "field": args.field, "n": args.n, "m": args.m,
                "prescribe": args.prescribe, "method": args.method, "config": cfg})
            _print_json(data)
            if args.method == "both" and not data.get("agree", True):
                return 2
            return 0

        if args.command == "predict":
            data = _post(client, "/predict", {
                "field": args.field, "n": args.n, "m": args.m,
                "prescribe": args.prescribe, "variant": args.variant,
                "with_exact": args.with_exact, "config": cfg})
            _print_json(data)
            return 0

        if args.command == "rho":
            data = _post(client, "/rho", {"u": args.u, "deriv": args.deriv})
            if args.json:
                _print_json(data)
            else:
                v = data["value"]
                print(f"{v:.12f}" if 1e-4 <= abs(v) or v == 0 else f"{v:.12e}")
            return 0

        if args.command == "charsum":
            data = _post(client, "/charsum", {
                "field": args.field, "ell": args.ell, "g": args.g,
                "exponents": [int(e) for e in args.chi.split(",")],
                "kind": args.kind, "n": args.n, "m": args.m, "config": cfg})
            _print_json(data)
            return 0

        if args.command == "lpoly":
            data = _post(client, "/lpoly", {
                "field": args.field, "ell": args.ell, "g": args.g,
                "exponents": [int(e) for e in args.chi.split(",")], "config": cfg})
            _print_json(data)
            return 0

        if args.command == "verify":
            if args.target == "gauss" and args.g is not None:
                data = _post(client, "/gauss", {
                    "field": args.field, "ell": args.ell or 0, "g": args.g,
                    "b": args.b, "config": cfg})
                _print_json(data)
                return 0 if data["passed"] else 2
            suites = [] if args.target == "all" else [args.target]
            data = _post(client, "/verify", {
                "suites": suites, "small": args.small,
                "seed": args.seed or 0, "config": cfg})
            for r in data["results"]:
                mark = "PASS" if r["passed"] else "FAIL"
                print(f"{mark} {r['name']:14s} {r['seconds']:7.2f}s  {r['details']}")
            return 0 if data["passed"] else 2

        if args.command == "scan":
            data = _post(client, "/scan", {
                "field": args.field,
                "ns": [int(x) for x in args.ns.split(",")],
                "ms": [int(x) for x in args.ms.split(",")],
                "prescriptions": args.prescribe or [""],
                "variant": args.variant, "with_exact": args.with_exact,
                "config": cfg})
            writer = csv.writer(sys.stdout, lineterminator="\n")
            writer.writerow(data["columns"])
            writer.writerows(data["rows"])
            return 0

    raise SystemExit(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
