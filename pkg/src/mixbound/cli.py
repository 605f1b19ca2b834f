"""Command-line front end: ``mixbound {bound,chi2,verify,sweep,list-scenarios}``.

Exit codes: 0 every checked bound holds, 2 some bound is violated, 3 some
check is inconclusive, 1 usage or runtime error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import _json, scenarios
from .divergence import chi2_pair_numeric
from .errors import MixboundError
from .verify import GAP_TOL, Relation, check_lsi_bound_trialfunctions, check_pi_bound, sweep, sweep_csv

SCHEMA = "mixbound/1"
EXIT_OK, EXIT_ERROR, EXIT_VIOLATED, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    # argparse would exit with 2, which is reserved for violated bounds
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _param(text: str) -> tuple[str, str]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected k=v, got {text!r}")
    k, v = text.split("=", 1)
    return k.strip(), v.strip()


def _grid(text: str) -> np.ndarray:
    try:
        a, b, n = text.split(":")
        grid = np.round(np.linspace(float(a), float(b), int(n)), 12)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b:n, got {text!r}") from None
    if grid.size == 0 or np.any(grid <= 0) or np.any(grid >= 1):
        raise argparse.ArgumentTypeError("grid points must lie in (0, 1)")
    return grid


def _p(text: str) -> float:
    p = float(text)
    if not 0 < p < 1:
        raise argparse.ArgumentTypeError("p must lie in (0, 1)")
    return p


def _clean(x):
    """Recursively make a document JSON-safe (infinities as "inf")."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return None if math.isnan(x) else _json.num(x)
    return x


def _dump(doc: dict) -> str:
    return json.dumps(_clean({"schema": SCHEMA, **doc}), indent=2) + "\n"


def _flat_csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _exit_code(relations) -> int:
    relations = list(relations)
    if Relation.VIOLATED in relations:
        return EXIT_VIOLATED
    if Relation.INCONCLUSIVE in relations:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_list(args) -> tuple[str, int]:
    items = [{"name": s.name, "title": s.title, "params": s.defaults, "constant_sources": s.constant_sources,
              "verifiable": s._build is not None} for s in scenarios.SCENARIOS.values()]
    if args.format == "json":
        return _dump({"command": "list-scenarios", "scenarios": items}), EXIT_OK
    lines = [f"{i['name']:<16} {i['title']}  params: " + ", ".join(f"{k}={v}" for k, v in i["params"].items())
             for i in items]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_bound(args) -> tuple[str, int]:
    sc = scenarios.get(args.scenario)
    params = sc.resolve(dict(args.param))
    out = sc.bounds(args.p, params)
    if args.format == "csv":
        rows = [(k, _json.num(v["inverse_constant"]), v["case"]) for k, v in out.items()
                if isinstance(v, dict) and "inverse_constant" in v]
        return _flat_csv(rows, ("bound", "inverse_constant", "case")), EXIT_OK
    doc = {"command": "bound", "scenario": sc.name, "params": params, "p": args.p,
           "constants": sc.constants(params), "chi": sc.chi(params).to_dict(), "bounds": out}
    return _dump(doc), EXIT_OK


def cmd_chi2(args) -> tuple[str, int]:
    sc = scenarios.get(args.scenario)
    params = sc.resolve(dict(args.param))
    doc = {"command": "chi2", "scenario": sc.name, "params": params, "chi": sc.chi(params).to_dict()}
    if sc._build is not None and args.numeric:
        doc["numeric"] = chi2_pair_numeric(sc.spec(0.5, params), seed=args.seed).to_dict()
    return _dump(doc), EXIT_OK


def cmd_verify(args) -> tuple[str, int]:
    sc = scenarios.get(args.scenario)
    params = sc.resolve(dict(args.param))
    spec = sc.spec(args.p, params)
    if spec.dim != 1:
        raise MixboundError("verify needs a one-dimensional scenario (n=1)")
    pi = check_pi_bound(spec, tol=args.tol)
    reports = {"pi": pi.to_dict()}
    relations = [pi.relation]
    if not args.skip_lsi:
        lsi = check_lsi_bound_trialfunctions(spec)
        reports["lsi"] = lsi.to_dict()
        relations.append(lsi.relation)
    code = _exit_code(relations)
    doc = {"command": "verify", "scenario": sc.name, "params": params, "p": args.p, "tol": args.tol,
           **reports, "exit_code": code}
    return _dump(doc), code


def cmd_sweep(args) -> tuple[str, int]:
    sc = scenarios.get(args.scenario)
    params = sc.resolve(dict(args.param))
    if sc.spec(0.5, params).dim != 1:
        raise MixboundError("sweep needs a one-dimensional scenario (n=1)")
    kw = {"tol": args.tol} if args.which == "PI" else {}
    rows = sweep(sc.family(params), args.grid, args.which, jobs=args.jobs, **kw)
    code = _exit_code(r.relation for r in rows)
    if args.format == "json":
        text = _dump({"command": "sweep", "scenario": sc.name, "params": params, "which": args.which,
                      "rows": [r.to_dict() for r in rows], "exit_code": code})
    else:
        text = sweep_csv(rows)
    return text, code


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="mixbound", description="Poincare and log-Sobolev bounds for two-component mixtures.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, default_format="json", p=False, grid=False):
        sp.add_argument("--scenario", required=True, choices=sorted(scenarios.SCENARIOS))
        sp.add_argument("--param", type=_param, action="append", default=[], metavar="K=V")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--tol", type=float, default=GAP_TOL, help="spectral-gap Richardson tolerance")
        fmt = sp.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="format", action="store_const", const="json")
        fmt.add_argument("--csv", dest="format", action="store_const", const="csv")
        sp.set_defaults(format=default_format)
        if p:
            sp.add_argument("--p", type=_p, required=True)
        if grid:
            sp.add_argument("--grid", type=_grid, required=True, metavar="A:B:N")
        sp.add_argument("-o", "--output", help="write to this file instead of stdout")

    sp = sub.add_parser("bound", help="all applicable bounds at one p")
    common(sp, p=True)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("chi2", help="chi-squared constants of a scenario")
    common(sp)
    sp.add_argument("--numeric", action="store_true", help="also estimate by quadrature / Monte Carlo")
    sp.set_defaults(func=cmd_chi2)

    sp = sub.add_parser("verify", help="check the bounds against numerical oracles (1D)")
    common(sp, p=True)
    sp.add_argument("--skip-lsi", action="store_true")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep", help="verify over a p-grid")
    common(sp, default_format="csv", grid=True)
    sp.add_argument("--which", type=str.upper, choices=["PI", "LSI"], default="PI")
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("list-scenarios", help="registered scenarios and their parameters")
    fmt = sp.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json")
    fmt.add_argument("--csv", dest="format", action="store_const", const="text")
    sp.set_defaults(format="text", func=cmd_list, output=None)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text, code = args.func(args)
    except (MixboundError, KeyError, ValueError) as exc:
        print(f"mixbound: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
