"""Command-line interface: ``tgr SUBCOMMAND [options] [FILE ...]``.

Exit status: 0 when the queried property holds, 1 when it does not, 2 on
usage, parse or validation errors.  Without input files the built-in
fixture file is used.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .dag import TermDag
from .embedding import Variant, embeds, strict_embeds
from .errors import InletsNotParallel, TermGraphError
from .morphism import collapses, isomorphic
from .orders import (
    TERMINATION_CAVEAT,
    DuplicateInletsWarning,
    Order,
    Verdict,
    certify_derivation,
    good_pair,
    lpo_less,
    orient_grs,
)
from .rewriting import GRS, Status, Strategy, derive
from .syntax import Workspace, format_graph, format_workspace, parse_text

EXIT_HOLDS, EXIT_FAILS, EXIT_ERROR = 0, 1, 2

LPO_NOTE = "top lists of different length: a proper prefix is smaller"


def fixture_text() -> str:
    return resources.files("termgraph").joinpath("data/examples.tg").read_text(encoding="utf-8")


class Report:
    """Collects human-readable lines and a JSON payload for one command."""

    def __init__(self, command: str):
        self.lines: List[str] = []
        self.data: Dict = {"command": command}

    def say(self, line: str = ""):
        self.lines.append(line)

    def emit(self, as_json: bool, out=None):
        out = out or sys.stdout
        if as_json:
            out.write(json.dumps(self.data, sort_keys=True, indent=2) + "\n")
        else:
            out.write("\n".join(self.lines) + "\n")


def _graph_dict(g: TermDag) -> Dict:
    return {
        "nodes": [
            {
                "id": g.name(n),
                "label": str(g.labels[n]),
                "succ": [g.name(k) for k in g.succ[n]],
            }
            for n in g.nodes
        ],
        "inlets": [g.name(n) for n in g.inlets],
    }


def _map_lines(mapping: Dict[str, str]) -> List[str]:
    return [f"  {a} -> {b}" for a, b in mapping.items()]


# -- loading -----------------------------------------------------------------------


def load_workspace(args) -> Workspace:
    ws = Workspace()
    files = list(args.files)
    grs_path = getattr(args, "grs", None)
    grs_is_file = grs_path is not None and Path(grs_path).is_file()
    if not files:
        parse_text(fixture_text(), ws)
    for f in files:
        parse_text(Path(f).read_text(encoding="utf-8"), ws)
    if grs_is_file:
        before_rules, before_grs = set(ws.rules), set(ws.grss)
        parse_text(Path(grs_path).read_text(encoding="utf-8"), ws)
        new_grs = [n for n in ws.grss if n not in before_grs]
        if len(new_grs) == 1:
            args.grs_value = ws.grss[new_grs[0]]
        else:
            rules = tuple(r for n, r in ws.rules.items() if n not in before_rules)
            args.grs_value = GRS(rules, Path(grs_path).stem)
    return ws


def _grs(args, ws: Workspace) -> GRS:
    if getattr(args, "grs_value", None) is not None:
        return args.grs_value
    return ws.grs(args.grs)


# -- commands ----------------------------------------------------------------------


def cmd_parse(args, ws: Workspace, rep: Report) -> int:
    rep.say(format_workspace(ws).rstrip("\n"))
    rep.data.update(
        {
            "signature": {f.name: f.arity for f in sorted(ws.signature.values())},
            "graphs": {n: _graph_dict(g) for n, g in ws.graphs.items()},
            "rules": {
                n: {
                    "carrier": _graph_dict(r.carrier),
                    "lhs": r.carrier.name(r.lhs_root),
                    "rhs": r.carrier.name(r.rhs_root),
                }
                for n, r in ws.rules.items()
            },
            "grs": {n: [r.name for r in g.rules] for n, g in ws.grss.items()},
            "precedences": {
                n: sorted(f"{t} < {s}" for t, s in p.pairs if p.less(t, s))
                for n, p in ws.precedences.items()
            },
            "sequences": {n: list(s) for n, s in ws.sequences.items()},
        }
    )
    return EXIT_HOLDS


def cmd_collapse(args, ws: Workspace, rep: Report) -> int:
    s, t = ws.graph(args.source), ws.graph(args.target)
    m = collapses(s, t)
    rep.data.update({"source": args.source, "target": args.target, "holds": m is not None})
    if m is None:
        rep.say(f"{args.source} does not collapse to {args.target}")
        return EXIT_FAILS
    mapping = m.by_name(s, t)
    rep.data["map"] = mapping
    rep.say(f"{args.source} collapses to {args.target}")
    rep.lines += _map_lines(mapping)
    return EXIT_HOLDS


def cmd_iso(args, ws: Workspace, rep: Report) -> int:
    a, b = args.graphs
    ok = isomorphic(ws.graph(a), ws.graph(b))
    rep.data.update({"graphs": [a, b], "holds": ok})
    rep.say(f"{a} and {b} are {'' if ok else 'not '}isomorphic")
    return EXIT_HOLDS if ok else EXIT_FAILS


def cmd_embed(args, ws: Workspace, rep: Report) -> int:
    big, small = ws.graph(args.larger), ws.graph(args.smaller)
    prec = ws.precedence(args.prec)
    variant = Variant(args.variant)
    rep.data.update(
        {
            "larger": args.larger,
            "smaller": args.smaller,
            "precedence": args.prec,
            "variant": variant.value,
        }
    )
    if args.strict:
        ok = strict_embeds(big, small, prec)
        rep.data.update({"relation": "strict = non-mutual", "holds": ok})
        rep.say(
            f"{args.larger} {'strictly embeds' if ok else 'does not strictly embed'} "
            f"{args.smaller} (strict = non-mutual, final variant)"
        )
        return EXIT_HOLDS if ok else EXIT_FAILS
    w = embeds(big, small, prec, variant)
    rep.data["holds"] = w is not None
    if w is None:
        rep.say(f"no embedding: {args.larger} does not embed {args.smaller} ({variant.value})")
        return EXIT_FAILS
    mapping = w.by_name(big, small)
    direction = "smaller -> larger" if variant is Variant.ATTEMPT1 else "larger -> smaller"
    rep.data.update({"map": mapping, "direction": direction})
    rep.say(f"{args.larger} embeds {args.smaller} ({variant.value}); map {direction}:")
    rep.lines += _map_lines(mapping)
    return EXIT_HOLDS


def _run_derivation(args, ws: Workspace):
    g = ws.graph(args.graph)
    grs = _grs(args, ws)
    budget = args.steps if args.steps is not None else args.max_steps
    return derive(g, grs, Strategy(args.strategy), budget), grs


def cmd_rewrite(args, ws: Workspace, rep: Report) -> int:
    d, grs = _run_derivation(args, ws)
    rep.data.update(
        {
            "graph": args.graph,
            "grs": grs.name,
            "strategy": args.strategy,
            "status": d.status.value,
            "cycle": list(d.cycle) if d.cycle else None,
            "steps": [
                {"rule": r, "node": d.graphs[k].name(n), "result": _graph_dict(d.graphs[k + 1])}
                for k, (r, n) in enumerate(d.steps)
            ],
        }
    )
    rep.say(format_graph(f"{args.graph}_0", d.graphs[0]))
    for k, (r, n) in enumerate(d.steps):
        rep.say(f"-- step {k + 1}: rule {r} at node {d.graphs[k].name(n)}")
        rep.say(format_graph(f"{args.graph}_{k + 1}", d.graphs[k + 1]))
    status = d.status.value
    if d.cycle:
        status += f" ({d.cycle[0]}, {d.cycle[1]})"
    rep.say(f"status: {status} after {len(d.steps)} step(s)")
    if args.normal_form:
        return EXIT_HOLDS if d.status is Status.NORMAL_FORM else EXIT_FAILS
    return EXIT_HOLDS


def cmd_lpo(args, ws: Workspace, rep: Report) -> int:
    t, s = ws.graph(args.smaller), ws.graph(args.larger)
    prec = ws.precedence(args.prec)
    rep.data.update(
        {"smaller": args.smaller, "larger": args.larger, "precedence": args.prec, "note": LPO_NOTE}
    )
    try:
        ok = lpo_less(t, s, prec)
    except InletsNotParallel as exc:
        rep.data.update({"holds": None, "verdict": "inapplicable", "reason": str(exc)})
        rep.say(f"inapplicable: {exc}")
        return EXIT_FAILS
    rep.data.update({"holds": ok, "verdict": "less" if ok else "not less"})
    rep.say(f"{args.smaller} {'<' if ok else 'is not <'} {args.larger} in the path order")
    return EXIT_HOLDS if ok else EXIT_FAILS


def cmd_orient(args, ws: Workspace, rep: Report) -> int:
    grs = _grs(args, ws)
    prec = ws.precedence(args.prec)
    order = Order.LPO if args.order == "lpo" else Order.STRICT_EMBEDDING
    verdicts = orient_grs(grs, prec, args.vars_as_constants, order)
    rep.data.update(
        {
            "grs": grs.name,
            "precedence": args.prec,
            "order": order.value,
            "vars_as_constants": args.vars_as_constants,
            "rules": [{"rule": o.rule, "verdict": o.verdict.value, "reason": o.reason} for o in verdicts],
            "caveat": TERMINATION_CAVEAT,
        }
    )
    for o in verdicts:
        extra = f" ({o.reason})" if o.reason else ""
        rep.say(f"{o.rule}: {o.verdict.value}{extra}")
    if order is Order.STRICT_EMBEDDING:
        rep.say("strict = non-mutual")
    if args.vars_as_constants:
        rep.say("variables compared as fresh constants (extension)")
    rep.say(TERMINATION_CAVEAT)
    ok = all(o.verdict is Verdict.DECREASING for o in verdicts)
    return EXIT_HOLDS if ok else EXIT_FAILS


def cmd_certify(args, ws: Workspace, rep: Report) -> int:
    d, grs = _run_derivation(args, ws)
    prec = ws.precedence(args.prec)
    order = Order.LPO if args.order == "lpo" else Order.STRICT_EMBEDDING
    cert = certify_derivation(d, prec, order)
    rep.data.update(
        {
            "graph": args.graph,
            "grs": grs.name,
            "order": order.value,
            "status": d.status.value,
            "steps": [
                {"step": v.index, "decreasing": v.decreasing} for v in cert.steps
            ],
            "descending": cert.descending,
        }
    )
    for v in cert.steps:
        word = {True: "decreasing", False: "not decreasing", None: "inapplicable"}[v.decreasing]
        rep.say(f"step {v.index}: {word}")
    rep.say(f"derivation {'is' if cert.descending else 'is not'} descending ({len(cert.steps)} step(s))")
    return EXIT_HOLDS if cert.descending else EXIT_FAILS


def cmd_good_pair(args, ws: Workspace, rep: Report) -> int:
    if args.sequence:
        ws.sequence(args.sequence)
        names = list(ws.sequences[args.sequence])
    else:
        names = list(args.graphs or [])
    if not names:
        raise TermGraphError("give --sequence NAME or --graphs G1 G2 ...")
    seq = [ws.graph(n) for n in names]
    prec = ws.precedence(args.prec)
    gp = good_pair(seq, prec)
    rep.data.update({"sequence": names, "precedence": args.prec, "good": gp is not None})
    if gp is None:
        rep.say("the sequence is bad: no earlier graph embeds into a later one")
        return EXIT_FAILS
    a, b = seq[gp.i - 1], seq[gp.j - 1]
    mapping = gp.witness.by_name(b, a)
    rep.data.update({"i": gp.i, "j": gp.j, "map": mapping})
    rep.say(f"good pair ({gp.i}, {gp.j}): {names[gp.j - 1]} embeds {names[gp.i - 1]}")
    rep.lines += _map_lines(mapping)
    return EXIT_HOLDS


# -- argument parsing ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("files", nargs="*", help="input files (default: built-in fixtures)")
    common.add_argument("--prec", default="minimal", help="precedence name (minimal, sharing or declared)")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="tgr", description="Term graph embedding, rewriting and orders.")
    p.add_argument("--fixtures", action="store_true", help="print the built-in fixture file and exit")
    sub = p.add_subparsers(dest="command")

    sp = sub.add_parser("parse", parents=[common], help="parse and print canonically")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("collapse", parents=[common], help="does SOURCE collapse to TARGET")
    sp.add_argument("--source", required=True)
    sp.add_argument("--target", required=True)
    sp.set_defaults(func=cmd_collapse)

    sp = sub.add_parser("iso", parents=[common], help="are two graphs isomorphic")
    sp.add_argument("--graphs", nargs=2, required=True, metavar="NAME")
    sp.set_defaults(func=cmd_iso)

    sp = sub.add_parser("embed", parents=[common], help="does LARGER embed SMALLER")
    sp.add_argument("--larger", required=True)
    sp.add_argument("--smaller", required=True)
    sp.add_argument("--variant", choices=[v.value for v in Variant], default="final")
    sp.add_argument("--strict", action="store_true", help="strict part (final variant)")
    sp.set_defaults(func=cmd_embed)

    def derivation_opts(sp):
        sp.add_argument("--graph", required=True)
        sp.add_argument("--grs", help="rewrite system or rule name, or a file of rules (default: all rules)")
        sp.add_argument("--strategy", choices=[s.value for s in Strategy], default="leftmost_first")
        sp.add_argument("--steps", type=int, help="rewrite at most this many steps")
        sp.add_argument("--max-steps", type=int, default=100)

    sp = sub.add_parser("rewrite", parents=[common], help="rewrite a graph")
    derivation_opts(sp)
    sp.add_argument("--normal-form", action="store_true", help="exit 1 unless a normal form is reached")
    sp.set_defaults(func=cmd_rewrite)

    sp = sub.add_parser("lpo", parents=[common], help="is SMALLER below LARGER in the path order")
    sp.add_argument("--smaller", required=True)
    sp.add_argument("--larger", required=True)
    sp.set_defaults(func=cmd_lpo)

    sp = sub.add_parser("orient", parents=[common], help="orient the rules of a system")
    sp.add_argument("--grs", help="rewrite system or rule name, or a file of rules (default: all rules)")
    sp.add_argument("--vars-as-constants", action="store_true")
    sp.add_argument("--order", choices=["lpo", "embedding"], default="lpo")
    sp.set_defaults(func=cmd_orient)

    sp = sub.add_parser("certify", parents=[common], help="check that a derivation descends")
    derivation_opts(sp)
    sp.add_argument("--order", choices=["lpo", "embedding"], default="lpo")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("good-pair", parents=[common], help="find a good pair in a finite sequence")
    sp.add_argument("--sequence")
    sp.add_argument("--graphs", nargs="+", metavar="NAME")
    sp.set_defaults(func=cmd_good_pair)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.fixtures:
        sys.stdout.write(fixture_text())
        return EXIT_HOLDS
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_ERROR
    rep = Report(args.command)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", DuplicateInletsWarning)
            ws = load_workspace(args)
            code = args.func(args, ws, rep)
    except (TermGraphError, OSError, ValueError) as exc:
        sys.stderr.write(f"tgr: error: {exc}\n")
        return EXIT_ERROR
    for w in caught:
        if w.category is not DuplicateInletsWarning:
            warnings.showwarning(w.message, w.category, w.filename, w.lineno)
    notes = sorted({str(w.message) for w in caught if w.category is DuplicateInletsWarning})
    if notes:
        rep.data["warnings"] = notes
        for n in notes:
            sys.stderr.write(f"tgr: warning: {n}\n")
    rep.data["exit"] = code
    rep.emit(args.json)
    return code


if __name__ == "__main__":
    sys.exit(main())
