"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import chain, realize, spaces, suites
from .abgroup import FGAbelianGroup, GradedGroup, NotASummand

USAGE_ERRORS = (spaces.ParseError, spaces.ValidationError, chain.InvalidModel, chain.ModelShape,
                realize.DimensionError, realize.NotLiftable, NotASummand, ValueError)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines)


def _homology_rows(h: GradedGroup) -> list[list[str]]:
    return [[str(j), g.to_text()] for j, g in enumerate(h)]


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        out = json.dumps(payload, indent=2, sort_keys=False)
    else:
        out = text
    print(out)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=False)
            fh.write("\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_homology(args) -> int:
    e = spaces.parse(args.expr)
    a = spaces.attrs(e)
    h = spaces.homology(e)
    checks = {}
    if a.dim >= 2 and a.orientable and a.connected and h[1].is_trivial:
        checks["nishioka"] = realize.nishioka_check(h, a.dim)["passed"]
    payload = {"input": str(e), "attrs": a.to_json(), "homology": h.to_rows(), "checks": checks}
    text = [f"{e}", _table(["degree", "H_j"], _homology_rows(h))]
    text.append(", ".join(f"{k}={v}" for k, v in a.to_json().items() if not isinstance(v, list)))
    for s in a.assumptions:
        text.append(f"assumption: {s}")
    for s in a.caveats:
        text.append(f"caveat: {s}")
    _emit(args, payload, "\n".join(text))
    return 0


def cmd_oracle(args) -> int:
    C = chain.parse_model(args.term)
    h = chain.homology(C)
    payload = {"input": args.term, "dims": list(C.dims), "homology": h.to_rows()}
    _emit(args, payload, f"{args.term}  cells {list(C.dims)}\n" + _table(["degree", "H_j"], _homology_rows(h)))
    return 0


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise ValueError(f"expected a comma-separated list of integers, got {text!r}") from None


def cmd_realize(args) -> int:
    torsion = _int_list(args.torsion)
    if any(d < 1 for d in torsion):
        raise ValueError("torsion orders must be positive")
    if min(args.free_h2, args.h3, args.h4) < 0:
        raise ValueError("ranks must be nonnegative")
    G = FGAbelianGroup.from_orders(args.free_h2, torsion)
    t = realize.RealizationTarget(G, args.h3, args.h4)
    mode = "paper" if args.paper_mode else "default"
    r = realize.plan(t, mode)
    rep = realize.verify(r, t)
    nish = realize.nishioka_check(rep.homology, 5)
    payload = {
        "input": json.dumps(t.to_json()),
        "recipe": str(r),
        "mode": mode,
        "attrs": spaces.attrs(r.assembled).to_json(),
        "homology": rep.homology.to_rows(),
        "checks": {"verify": rep.to_json(), "nishioka": nish},
    }
    rows = [[str(j), rep.homology[j].to_text(), rep.expected[j].to_text(), "ok" if ok else "FAIL"]
            for j, ok in enumerate(rep.degree_ok)]
    text = f"recipe: {r}\n" + _table(["degree", "got", "expected", ""], rows)
    text += f"\nverification: {'pass' if rep.passed else 'FAIL'}; nishioka: {'pass' if nish['passed'] else 'FAIL'}"
    _emit(args, payload, text)
    return 0 if rep.passed and nish["passed"] else 1


def cmd_verify_thm5(args) -> int:
    y = spaces.parse(args.y)
    base = spaces.parse(args.base)
    if not isinstance(base, (spaces.Sphere, spaces.Disc)):
        raise ValueError("--base must be S<n> or D<n>")
    spaces.YZRemove(base, y)  # validates the combination
    rows = suites.thm5_table(y, base)
    ok = all(r["agree"] for r in rows)
    payload = {
        "input": f"yzrem({base}, {y})",
        "agree": ok,
        "degrees": [
            {k: (v.to_json() if isinstance(v, FGAbelianGroup) else v) for k, v in r.items()
             if args.show_relative_reading or k not in ("boundary_relative", "relative_agrees")}
            for r in rows
        ],
    }
    headers = ["degree", "dE formula", "dE solver", "remove formula", "remove solver", "agree"]
    if args.show_relative_reading:
        headers += ["dE relative", "relative vs solver"]
    table = []
    for r in rows:
        line = [str(r["degree"]), r["boundary_formula"].to_text(), r["boundary_solver"].to_text(),
                r["remove_formula"].to_text(), r["remove_solver"].to_text(), "yes" if r["agree"] else "NO"]
        if args.show_relative_reading:
            line += [r["boundary_relative"].to_text(), "same" if r["relative_agrees"] else "DIFFERS"]
        table.append(line)
    text = f"yzrem({base}, {y})\n" + _table(headers, table)
    text += f"\n{'all degrees agree' if ok else 'MISMATCH'}"
    if args.show_relative_reading:
        diff = [r["degree"] for r in rows if not r["relative_agrees"]]
        text += f"\nrelative reading of dE differs from the solver at degrees {diff}"
    _emit(args, payload, text)
    return 0 if ok else 1


def cmd_verify_suite(args) -> int:
    rep = suites.verify_suite(args.seed, targets=args.targets, matrices=args.matrices,
                              boundary_reading="relative" if args.relative_reading else "absolute")
    payload = {"input": f"suite seed={args.seed}", **rep.to_json()}
    rows = [[s.name, f"{s.passed}/{len(s.cases)}", "pass" if s.ok else "FAIL"] for s in rep.suites]
    lines = [f"seed {rep.seed}", _table(["suite", "passed", ""], rows)]
    for s in rep.suites:
        for w in s.warnings:
            lines.append(f"warning [{s.name}]: {w}")
        for c in s.failures()[:10]:
            lines.append(f"failure [{s.name}] {c.name}: {c.detail}")
    _emit(args, payload, "\n".join(lines))
    return 0 if rep.ok else 1


def cmd_lift(args) -> int:
    W = spaces.parse(args.expr)
    d = realize.lift(W, args.m, embeddable=True if args.assume_embeddable else None)
    payload = {"input": str(W), "attrs": spaces.attrs(W).to_json(), "homology": d.predicted.to_rows(),
               "descriptor": d.to_json()}
    text = [f"special generic map M^{d.m} -> R^{d.n} with image {W}",
            _table(["degree", "H_j(M)"], _homology_rows(d.predicted)),
            f"degrees above {d.m - d.n} not determined",
            f"singular set: {d.singular_set} (dim {d.singular_set_dim}, embedded)"]
    _emit(args, payload, "\n".join(text))
    return 0


def cmd_check(args) -> int:
    h = GradedGroup.parse(args.groups)
    if args.what == "nishioka":
        if args.dim is None:
            raise ValueError("check nishioka needs --dim")
        res = realize.nishioka_check(h, args.dim)
        ok = res["passed"]
        text = f"nishioka (dim {args.dim}): {'pass' if ok else 'FAIL'}"
        if not ok:
            text += f"; torsion in degrees {res['offending_degrees']}"
    else:
        res = realize.sgm_candidate_check(h)
        ok = res["verdict"] == "possible"
        text = f"special generic candidate: {res['verdict']} (necessary condition only)"
        for reason in res["reasons"]:
            text += f"\n  {reason}"
    payload = {"input": args.groups, "homology": h.to_rows(), "checks": {args.what: res}}
    _emit(args, payload, text)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["table", "json"], default="table")
    common.add_argument("--out", help="also write the JSON result to this file")

    p = _Parser(prog="surgery-homology", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("homology", parents=[common], help="homology of a manifold expression")
    s.add_argument("expr")
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("oracle", parents=[common], help="cellular chain-complex homology of a model term")
    s.add_argument("term")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("realize", parents=[common], help="plan and verify a 5-manifold with given homology")
    s.add_argument("--torsion", default="", help="comma-separated cyclic orders of the torsion of H_2")
    s.add_argument("--free-h2", type=int, default=0)
    s.add_argument("--h3", type=int, default=0)
    s.add_argument("--h4", type=int, default=0)
    s.add_argument("--paper-mode", action="store_true")
    s.set_defaults(func=cmd_realize)

    v = sub.add_parser("verify", help="dual-path verification")
    vsub = v.add_subparsers(dest="what", required=True, parser_class=_Parser)
    s = vsub.add_parser("thm5", parents=[common], help="formula engine vs Mayer-Vietoris solver for one remove")
    s.add_argument("--y", required=True)
    s.add_argument("--base", required=True, help="S<n> or D<n>")
    s.add_argument("--show-relative-reading", action="store_true")
    s.set_defaults(func=cmd_verify_thm5)
    s = vsub.add_parser("suite", parents=[common], help="all seeded property suites")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--targets", type=int, default=200)
    s.add_argument("--matrices", type=int, default=300)
    s.add_argument("--relative-reading", action="store_true",
                   help="swap in the relative-group splitting of dE (expected to fail)")
    s.set_defaults(func=cmd_verify_suite)

    s = sub.add_parser("lift", parents=[common], help="special generic map descriptor")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--assume-embeddable", action="store_true")
    s.add_argument("expr")
    s.set_defaults(func=cmd_lift)

    s = sub.add_parser("check", parents=[common], help="homological criteria")
    s.add_argument("what", choices=["nishioka", "sgm"])
    s.add_argument("--groups", required=True, help='e.g. "Z;0;Z/3+Z;Z;Z^2"')
    s.add_argument("--dim", type=int)
    s.set_defaults(func=cmd_check)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main(argv: Sequence[str] | None = None) -> None:
    try:
        code = run(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
    sys.exit(code)


if __name__ == "__main__":
    main()
