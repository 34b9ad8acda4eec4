"""Command-line interface; every subcommand prints a JSON report."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import acceptance
from .alcoves import alcove_svg, alcoves_in_P, rX_report, worpitzky_partition_check
from .errors import WorpitzkyError
from .flats import flats_codim
from .freeness import free_shi_subset, subset_free, shi_free_predicate
from .graphs import SimpleGraph, has_interval_ordering, sigma_of, verify_corollary
from .quasipoly import characteristic_quasipolynomial, from_subset, shi_arrangement, verify_identity
from .rootsys import build, format_root, parse_roots
from .subsets import all_masks, census, classify, context, random_masks
from .weyl import eulerian_polynomial

SCHEMA_VERSION = 1


def _subset(rs, text: str | None) -> list:
    if text is None or text.strip() in ("", "empty", "[]"):
        return []
    if text.strip() == "all":
        return list(rs.positive_roots)
    return parse_roots(text)


def _ks(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    if hasattr(x, "to_json"):
        return _jsonable(x.to_json())
    if hasattr(x, "item"):        # numpy scalars
        return x.item()
    return x


def cmd_rootsys(a) -> dict:
    rs = build(a.system)
    return {
        "system": str(rs),
        "rank": rs.rank,
        "simple_roots": [format_root(b) for b in rs.simple_roots],
        "positive_roots": [format_root(b) for b in rs.positive_roots],
        "highest_root": format_root(rs.highest_root),
        "marks": list(rs.marks),
        "coxeter_number": rs.coxeter_number,
        "index_of_connection": rs.index_of_connection,
        "weyl_order": rs.weyl_order,
        "cartan": [list(r) for r in rs.cartan],
    }


def cmd_flats(a) -> dict:
    rs = build(a.system)
    fl = flats_codim(rs, a.codim)
    return {"system": str(rs), "codim": a.codim, "count": len(fl), "flats": [f.to_json() for f in fl]}


def cmd_subsets(a) -> dict:
    rs = build(a.system)
    if a.action == "classify" and a.subset is not None:
        return classify(rs, _subset(rs, a.subset)).to_json()
    if a.sample:
        masks = random_masks(rs, a.sample, a.seed)
    else:
        masks = all_masks(rs)
    return census(rs, masks)


def cmd_alcoves(a) -> dict:
    rs = build(a.system)
    out = {"system": str(rs), "count": len(alcoves_in_P(rs)),
           "expected": rs.weyl_order // rs.index_of_connection}
    if a.dump:
        out["alcoves"] = [A.to_json() for A in alcoves_in_P(rs)]
    if a.partition:
        out["partition"] = worpitzky_partition_check(rs, a.partition)
    if a.rx:
        out["rx"] = rX_report(rs)
    return out


def cmd_eulerian(a) -> dict:
    rs = build(a.system)
    sigma = _subset(rs, a.subset)
    E = eulerian_polynomial(rs, sigma)
    return {"system": str(rs), "subset": [format_root(b) for b in sigma], "coefficients": list(E.coeffs),
            "polynomial": str(E), "h": rs.coxeter_number, "f": rs.index_of_connection, "weyl_order": rs.weyl_order}


def cmd_quasipoly(a) -> dict:
    rs = build(a.system)
    sigma = _subset(rs, a.subset)
    if a.shi is not None:
        arr = shi_arrangement(rs, a.shi, sigma, "minus" if a.minus else "plus")
        qp, counts = characteristic_quasipolynomial(arr, a.qmax)
        return {"system": str(rs), "arrangement": f"S^{a.shi}", "subset": [format_root(b) for b in sigma],
                "quasipolynomial": qp.to_json(), "counts": {str(q): c for q, c in counts.items()}}
    qp, counts = characteristic_quasipolynomial(from_subset(rs, sigma), a.qmax)
    ident = verify_identity(rs, sigma, a.qmax)
    return {"system": str(rs), "subset": [format_root(b) for b in sigma], "quasipolynomial": qp.to_json(),
            "counts": {str(q): c for q, c in counts.items() if q <= a.qmax},
            "compatible": context(rs).is_compatible(context(rs).mask(sigma)),
            "identity": {k: v for k, v in ident.to_json().items() if k != "counts"}}


def cmd_freeness(a) -> dict:
    rs = build(a.system)
    sigma = _subset(rs, a.subset)
    per_k = {}
    for k in _ks(a.k):
        v = free_shi_subset(rs, sigma, k, "minus" if a.minus else "plus", mode=a.mode, seed=a.seed)
        per_k[str(k)] = v.to_json()
    shi_free = all(v["status"] == "free" for v in per_k.values())
    out = {"system": str(rs), "subset": [format_root(b) for b in sigma], "mode": a.mode, "per_k": per_k,
           "shi_free": shi_free}
    if not a.minus:
        free = subset_free(rs, sigma)
        pred = shi_free_predicate(rs, sigma, free=free.free)
        out["subset_free"] = free.to_json()
        out["predicate"] = pred
        out["predicate_agrees"] = pred == shi_free
    return out


def cmd_graphs(a) -> dict:
    if a.action == "verify-corollary":
        return verify_corollary(a.n)
    G = SimpleGraph.parse(a.edges or "", a.n)
    ok, order = has_interval_ordering(G)
    return {"graph": str(G), "n": G.n, "sigma": [format_root(b) for b in sigma_of(G)], "interval": ok,
            "ordering": list(order) if order else None}


def cmd_figure(a) -> dict:
    rs = build(a.system)
    svg = alcove_svg(rs, _subset(rs, a.subset))
    if a.out:
        with open(a.out, "w") as fh:
            fh.write(svg)
        return {"system": str(rs), "written": a.out, "bytes": len(svg)}
    return {"system": str(rs), "svg": svg}


def cmd_verify_all(a) -> dict:
    only = [x.strip().upper() for x in a.only.split(",")] if a.only else None
    results = acceptance.verify_all(a.scope, a.workers, only)
    for r in results:
        print(r.line(), file=sys.stderr)
    return {"scope": a.scope, "passed": all(r.passed for r in results),
            "checks": [r.to_json(stable=a.stable) for r in results]}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="worpitzky", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, subset=True):
        sp.add_argument("--system", required=True)
        if subset:
            sp.add_argument("--subset", default=None, help='roots like "[1,0],[1,1]", or "all"')
        sp.add_argument("--json", action="store_true", help="compact JSON output")
        sp.add_argument("--out", default=None)
        sp.add_argument("--seed", type=int, default=0)
        return sp

    common(sub.add_parser("rootsys"), subset=False).set_defaults(func=cmd_rootsys)
    sp = common(sub.add_parser("flats"), subset=False)
    sp.add_argument("--codim", type=int, default=2)
    sp.set_defaults(func=cmd_flats)
    sp = common(sub.add_parser("subsets"))
    sp.add_argument("action", nargs="?", default="classify", choices=["classify"])
    sp.add_argument("--exhaustive", action="store_true")
    sp.add_argument("--sample", type=int, default=0)
    sp.set_defaults(func=cmd_subsets)
    sp = common(sub.add_parser("alcoves"), subset=False)
    sp.add_argument("--dump", action="store_true")
    sp.add_argument("--partition", type=int, default=0, metavar="Q")
    sp.add_argument("--rx", action="store_true")
    sp.set_defaults(func=cmd_alcoves)
    common(sub.add_parser("eulerian")).set_defaults(func=cmd_eulerian)
    sp = common(sub.add_parser("quasipoly"))
    sp.add_argument("--qmax", type=int, default=30)
    sp.add_argument("--shi", type=int, default=None, metavar="K")
    sp.add_argument("--minus", action="store_true")
    sp.set_defaults(func=cmd_quasipoly)
    sp = common(sub.add_parser("freeness"))
    sp.add_argument("--k", default="1,2")
    sp.add_argument("--mode", choices=["exact", "modular"], default="exact")
    sp.add_argument("--minus", action="store_true")
    sp.set_defaults(func=cmd_freeness)
    sp = sub.add_parser("graphs")
    sp.add_argument("action", choices=["verify-corollary", "interval"])
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--edges", default=None, help='edge list like "1-2,2-3"')
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_graphs)
    common(sub.add_parser("figure")).set_defaults(func=cmd_figure)
    sp = sub.add_parser("verify-all")
    sp.add_argument("--scope", choices=["quick", "full"], default="quick")
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--only", default=None, help="comma-separated criteria, e.g. AC1,AC5")
    sp.add_argument("--stable", action="store_true", help="omit timings")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_verify_all)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "graphs" and args.action == "verify-corollary" and args.n is None:
        args.n = 5
    try:
        report = args.func(args)
    except WorpitzkyError as e:
        print(json.dumps({"error": type(e).__name__, "message": str(e)}), file=sys.stderr)
        return 2
    except ValueError as e:
        print(json.dumps({"error": "ValueError", "message": str(e)}), file=sys.stderr)
        return 2
    report = {"schema_version": SCHEMA_VERSION, "command": args.command, **_jsonable(report)}
    text = json.dumps(report, indent=None if args.json else 2, sort_keys=False)
    if args.out and args.command != "figure":
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.command == "verify-all" and not report["passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
