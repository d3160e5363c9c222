"""Batch interface: validate and compute on diagram documents.

Every verb reads JSON documents in the surface-module schema, computes
through the library, and emits deterministic output (key-sorted JSON or
stable text).  Exit codes: 0 success, 1 domain rejection with a
machine-readable reason, 2 invariant violation with a repro dump.
"""

import argparse
import json
import sys

from . import glue, modules, pieces, sfc, strands, surface
from .surface import ArcDiagram

ARC_DIAGRAMS = {
    "Z1": lambda: ArcDiagram([[], []], {}, "beta"),
    "Z2": lambda: ArcDiagram(
        [["p1", "p2", "p3"], ["q1"]],
        {"p1": 2, "p2": 1, "p3": 2, "q1": 1},
        "beta",
    ),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(payload, fmt, text_lines):
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True, indent=1, ensure_ascii=False))
    else:
        for line in text_lines:
            print(line)


def _read_diagram(path):
    with open(path, encoding="utf-8") as fh:
        return surface.parse(fh.read())


def _read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _plural(n, noun):
    return f"{n} {noun}" + ("" if n == 1 else "es" if noun.endswith("s") else "s")


# ---------------------------------------------------------------------------
# verbs


def _cmd_validate(args):
    d = _read_diagram(args.diagram)
    problems = surface.validate(d)
    if problems:
        _emit({"problems": problems}, args.format, problems)
        return 1
    _emit({"problems": []}, args.format, ["ok"])
    return 0


def _cmd_generators(args):
    d = _read_diagram(args.diagram)
    names = [modules.format_generator(g) for g in sfc.generators(d)]
    _emit({"count": len(names), "generators": names}, args.format, names)
    return 0


def _cmd_homology(args):
    d = _read_diagram(args.diagram)
    hom = sfc.homology(d)
    by_class = {str(k): v for k, v in sorted(hom.by_class.items())}
    _emit(
        {"by_class": by_class, "total": hom.total},
        args.format,
        [f"rank {hom.total} ({_plural(len(by_class), 'Spin^c class')})"],
    )
    return 0


def _cmd_attach(args):
    d = _read_diagram(args.diagram)
    spec = glue.spec_from_json(_read_json(args.spec))
    d2, _table, _x0 = glue.sigma_map(d, spec)
    sys.stdout.write(surface.serialize(d2))
    return 0


def _cmd_glue(args):
    d = _read_diagram(args.diagram)
    spec = glue.spec_from_json(_read_json(args.spec))
    if spec.kind == "1":
        d1, table = glue.glue_one_handle(d, spec.p, spec.q)
        payload = {
            "kind": "1",
            "table": table.render(),
            "generators": len(table.target.basis),
            "rank": sfc.homology(d1).total,
        }
        lines = payload["table"] + [f"rank {payload['rank']}"]
    elif spec.kind == "2":
        rec = glue.glue_two_handle(d, spec)
        stages = {
            stage: {
                "generators": len(sfc.generators(rec[stage])),
                "rank": sfc.homology(rec[stage]).total,
            }
            for stage in ("H3", "H4", "H5", "H6")
        }
        payload = {
            "kind": "2",
            "identityReport": rec["identityReport"],
            "joinTable": rec["joinTable"].render(),
            "stages": stages,
            "x0": rec["x0"],
        }
        rep = rec["identityReport"]
        lines = payload["joinTable"] + [
            "identity "
            + ("ok" if rep["ok"] else "FAILED")
            + f" on {_plural(rep['cycles'], 'cycle')}",
            "stage ranks "
            + " ".join(f"{s}={stages[s]['rank']}" for s in ("H3", "H4", "H5", "H6")),
        ]
    else:
        raise ValueError("glue takes a 1- or 2-handle spec; bypasses go to attach")
    _emit(payload, args.format, lines)
    return 0


def _cmd_algebra(args):
    if args.arc_diagram not in ARC_DIAGRAMS:
        raise ValueError(f"unknown arc diagram {args.arc_diagram!r}")
    z = ARC_DIAGRAMS[args.arc_diagram]()
    summary = strands.algebra_summary(z)
    lines = [
        f"summand {sm['strands']}: rank {sm['rank']}: " + " ".join(sm["basis"])
        for sm in summary["summands"]
    ]
    if args.table:
        table = []
        movers = [b for b in strands.basis(z) if b.strand_count() == 1]
        for x in movers:
            for y in movers:
                table.append(
                    f"{strands.label(x)} · {strands.label(y)} = "
                    f"{strands.render(strands.multiply(x, y))}"
                )
        summary = dict(summary, table=table)
        lines += table
    _emit(summary, args.format, lines)
    return 0


def _cmd_bordered(args):
    d = _read_diagram(args.diagram)
    sector = None
    if args.sector:
        sector = tuple(int(x) for x in args.sector.split(","))
    bs = modules.bordered_invariant(d, args.kind, sector=sector)
    dump = modules.dump(bs).splitlines()
    payload = {
        "kind": bs.kind,
        "generators": bs.generator_names(),
        "dump": dump,
    }
    _emit(payload, args.format, dump or ["(no structure lines)"])
    return 0


def _cmd_verify_equivalence(args):
    d = _read_diagram(args.diagram)
    plan = _read_json(args.handles)
    if not isinstance(plan, list):
        raise ValueError("handle plan must be a JSON list of handle specs")
    specs = [glue.spec_from_json(obj) for obj in plan]
    report = glue.equivalence_report(d, specs)
    lines = []
    for block, check in zip(report["stages"], report["checks"]):
        ok = check["ranks_match"] and check.get("tables_equal", True) and check.get(
            "identity", True
        )
        lines.append(
            f"stage {block['stage']} [{block['kind']}]: rank {block['rank']} "
            + ("ok" if ok else "DISAGREES")
        )
    if report["eh"] is not None:
        eh = report["eh"]
        lines.append(
            "EH: " + ("nonvanishing" if eh.get("nonvanishing") else "vanishing")
            if eh["ok"]
            else f"EH: ERROR {eh['error']}"
        )
    lines.append("equivalent" if report["ok"] else "NOT EQUIVALENT")
    _emit(report, args.format, lines)
    if not report["ok"]:
        repro = report["counterexample"] or {"eh": report["eh"]}
        print(
            json.dumps({"repro": repro}, sort_keys=True, indent=1),
            file=sys.stderr,
        )
        return 2
    return 0


def _example_family():
    names = sorted(pieces.catalog()) + ["fix-bigonpair", "fix-disk", "fix-stab"]
    return names + ["disk-h2", "disk-h3", "disk-h4", "disk-h5", "disk-h6"]


def _build_example(name):
    if name.startswith("disk-h"):
        base, handle = glue.one_handled(pieces.build("fix-disk"))
        if name == "disk-h2":
            return base
        rec = glue.glue_two_handle(base, glue.two_handle_spec(base, handle))
        try:
            return rec[name[5:].upper()]
        except KeyError:
            raise ValueError(f"unknown example {name!r}") from None
    try:
        return pieces.build(name)
    except KeyError:
        raise ValueError(f"unknown example {name!r}") from None


def _cmd_examples(args):
    if args.name is None:
        names = _example_family()
        if args.out_dir:
            for n in names:
                path = f"{args.out_dir}/{n}.json"
                with open(path, "w", encoding="utf-8") as fh:
                    fh.write(surface.serialize(_build_example(n)))
        _emit({"names": names}, args.format, names)
        return 0
    text = surface.serialize(_build_example(args.name))
    if args.out_dir:
        with open(f"{args.out_dir}/{args.name}.json", "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# wiring


def _build_parser():
    parser = _Parser(prog="sutured", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(verb, func, **kw):
        p = sub.add_parser(verb, **kw)
        p.set_defaults(func=func)
        p.add_argument("--format", choices=("json", "text"), default="text")
        return p

    for verb, func in (
        ("validate", _cmd_validate),
        ("generators", _cmd_generators),
        ("homology", _cmd_homology),
    ):
        add(verb, func, help=f"{verb} a diagram document").add_argument("diagram")

    p = add("attach", _cmd_attach, help="attach a handle, print the new diagram")
    p.add_argument("diagram")
    p.add_argument("--spec", required=True, help="handle spec JSON file")

    p = add("glue", _cmd_glue, help="run the staged gluing pipeline")
    p.add_argument("diagram")
    p.add_argument("--spec", required=True, help="handle spec JSON file")

    p = add("algebra", _cmd_algebra, help="strands algebra summary")
    p.add_argument("--arc-diagram", required=True)
    p.add_argument("--table", action="store_true")

    p = add("bordered", _cmd_bordered, help="bordered invariant of a diagram")
    p.add_argument("diagram")
    p.add_argument("--kind", required=True, choices=("D", "A", "AA"))
    p.add_argument("--sector", help="comma-separated occupied-arc counts")

    p = add("verify-equivalence", _cmd_verify_equivalence,
            help="compare the direct and staged routes")
    p.add_argument("diagram")
    p.add_argument("--handles", required=True, help="JSON list of handle specs")

    p = add("examples", _cmd_examples, help="emit builtin diagrams")
    p.add_argument("name", nargs="?")
    p.add_argument("--out-dir")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as err:
        print(json.dumps({"error": str(err)}, sort_keys=True), file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except (ValueError, OSError) as err:
        print(json.dumps({"error": str(err)}, sort_keys=True), file=sys.stderr)
        return 1
    except AssertionError as err:
        dump = {"bug": str(err), "argv": argv if argv is not None else sys.argv[1:]}
        print(json.dumps(dump, sort_keys=True), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
