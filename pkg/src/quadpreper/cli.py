"""Command-line interface: ``quadpreper <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource
guard, 4 I/O error, 5 data integrity.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import curves, families, graphs, scan, verify
from .errors import ConsistencyError, QuadPreperError, UsageError
from .preper import DEFAULT_MAX_BOX, graph_of
from .qfield import format_elem, make_field, parse_elem

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_RESOURCE, EXIT_IO, EXIT_DATA = 0, 1, 2, 3, 4, 5


def _out(text: str = "") -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _int_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("..")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _field(text: str) -> int:
    try:
        return make_field(int(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad field descriptor {text!r}") from None


# -- graph -------------------------------------------------------------------------


def cmd_graph(args) -> int:
    catalog = graphs.load_catalog(args.catalog)
    c = parse_elem(args.c, args.disc)
    if args.format == "json":
        rec = scan.graph_record(args.disc, c, catalog, args.max_box, timing=args.timing)
        _out(scan.dumps_record(rec))
        return EXIT_OK
    G = graph_of(args.disc, c, max_box=args.max_box)
    if args.format == "dot":
        _out(graphs.to_dot(G, f"D={args.disc} c={format_elem(c)}"))
        return EXIT_OK
    screen = graphs.main_theorem_screen(G, catalog)
    _out(f"field: {'Q' if args.disc == 1 else f'Q(sqrt({args.disc}))'}")
    _out(f"c: {format_elem(c)}")
    _out(f"vertices: {len(G)}")
    _out(f"cycle structure: ({','.join(map(str, graphs.cycle_structure(G)))})")
    _out(f"label: {screen.label or 'unknown'}")
    _out(f"canonical: {graphs.canonical_form(G)}")
    _out(f"screen: {screen}")
    _out(graphs.to_text(G))
    return EXIT_OK


# -- scan ---------------------------------------------------------------------------


def _read_records(path: Path) -> dict:
    done = {}
    if not path.exists():
        return done
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.strip():
            rec = json.loads(line)
            done[scan.record_key(rec)] = rec
    return done


def cmd_scan(args) -> int:
    lo, hi = args.disc_range
    discs = scan.field_range(lo, hi)
    if not args.include_rational:
        discs = [d for d in discs if d != 1]
    dens = args.denominators or list(range(1, args.den_bound + 1))
    tasks = scan.make_tasks(discs, scan.c_values(args.num_bound, dens), args.max_box)
    out = Path(args.out)
    done = _read_records(out) if args.skip_done else {}
    todo = [t for t in tasks if (t.D, t.c) not in done]
    catalog = graphs.load_catalog(args.catalog)
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "a" if args.skip_done else "w", encoding="utf-8") as fh:
            for rec in scan.run_tasks(todo, catalog, workers=args.workers, timing=args.timing):
                done[scan.record_key(rec)] = rec
                fh.write(scan.dumps_record(rec) + "\n")
                fh.flush()
                if scan.is_violation(rec):
                    sys.stderr.write(
                        f"VIOLATION: D={rec['disc']} c={rec['c']} gives an unclassified admissible graph "
                        f"{rec['canonical']}\n"
                    )
                    return EXIT_VERIFY
        order = {(t.D, t.c): i for i, t in enumerate(tasks)}
        ordered = sorted(done.values(), key=lambda r: (order.get(scan.record_key(r), len(order)), scan.record_key(r)))
        out.write_text("".join(scan.dumps_record(r) + "\n" for r in ordered), encoding="utf-8")
    except OSError as exc:
        sys.stderr.write(f"cannot write {out}: {exc}\n")
        return EXIT_IO
    errors = sum("error" in r for r in ordered)
    sys.stderr.write(f"{len(ordered)} records ({len(todo)} computed, {errors} errors) -> {out}\n")
    return EXIT_OK


# -- catalog ---------------------------------------------------------------------------


def cmd_catalog(args) -> int:
    if args.action == "list":
        for label in graphs.CATALOG_LABELS:
            _out(label)
        return EXIT_OK
    if args.action == "build":
        src = Path(args.representatives)
        reps = graphs.parse_representatives(src.read_text(encoding="utf-8"), source=str(src))
        cat = graphs.build_catalog(reps, max_box=args.max_box)
        return _write(args.out, cat.dumps(), f"{len(cat)} entries")
    if args.action == "match":
        if args.disc is None or args.c is None:
            raise UsageError("match needs --disc and --c")
        cat = graphs.load_catalog(args.catalog)
        G = graph_of(args.disc, parse_elem(args.c, args.disc), max_box=args.max_box)
        label = graphs.classify(G, cat)
        _out(f"{label or 'unknown'}\t{graphs.canonical_form(G)}")
        return EXIT_OK
    # discover: add graphs seen in a scan file under fresh labels
    cat = graphs.load_catalog(args.catalog)
    added = 0
    for rec in _read_records(Path(args.scan)).values():
        if "error" in rec or cat.lookup(rec["canonical"]) is not None:
            continue
        G = graphs.graph_from_canonical(rec["canonical"])
        cat.add(graphs.CatalogEntry(cat.next_label(G), rec["canonical"], rec["disc"], rec["c"]))
        added += 1
    return _write(args.out, cat.dumps(), f"{added} new entries")


def _write(path: Optional[str], text: str, summary: str) -> int:
    if not path:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        sys.stderr.write(f"cannot write {path}: {exc}\n")
        return EXIT_IO
    sys.stderr.write(f"{summary} -> {path}\n")
    return EXIT_OK


# -- families --------------------------------------------------------------------------


def cmd_family(args) -> int:
    if args.family == "list":
        for fid in families.FamilyId:
            fam = families.get_family(fid)
            _out(f"{fid.value}\t({', '.join(fam.params)})\t{fam.description}")
        return EXIT_OK
    fam = families.get_family(args.family)
    if args.params is None:
        raise UsageError(f"{fam.id.value} needs --params {' '.join(fam.params)}")
    D = args.disc
    params = tuple(_family_value(p, D) for p in args.params)
    cfg = families.family_forward(fam.id, params)
    back = families.family_inverse(fam.id, cfg)
    _out(f"family: {fam.id.value} ({fam.description})")
    _out(f"c: {_show(cfg.c)}")
    for name, _ in fam.marked:
        _out(f"{name}: {_show(cfg.points[name])}  type {cfg.types[name]}")
        if cfg.types[name].preperiod == 0:
            cyc = [cfg.points[name]]
            for _ in range(cfg.types[name].period - 1):
                cyc.append(cfg.f(cyc[-1]))
            _out(f"  cycle: {{{', '.join(_show(x) for x in cyc)}}}")
    ok = back == params
    _out(f"inverse: ({', '.join(_show(x) for x in back)})  {'roundtrip ok' if ok else 'ROUNDTRIP MISMATCH'}")
    return EXIT_OK if ok else EXIT_VERIFY


def _family_value(text: str, D: int):
    elem = parse_elem(text, D)
    return elem.a if elem.b == 0 and D == 1 else elem


def _show(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    try:
        return format_elem(x)
    except (AttributeError, TypeError):
        return str(x)


# -- curves -----------------------------------------------------------------------------


def _model(args) -> curves.CurveModel:
    if args.f:
        return curves.CurveModel(curves.parse_poly(args.f))
    if args.model:
        models = curves.load_models(args.models)
        if args.model not in models:
            raise UsageError(f"unknown model {args.model}; known: {', '.join(models)}")
        return models[args.model]
    raise UsageError("give --model NAME or --f POLYNOMIAL")


def cmd_curve(args) -> int:
    if args.action == "models":
        for name, m in curves.load_models(args.models).items():
            _out(f"{name}; y^2 = {m.f}; genus={curves.hyperelliptic_genus(m)}; ref={m.ref}")
        return EXIT_OK
    if args.action == "stoll":
        _out(str(curves.stoll_bound(args.count, args.rank, args.p)))
        return EXIT_OK
    if args.action == "resultant":
        if not (args.f and args.g):
            raise UsageError("resultant needs --f and --g")
        _out(str(curves.resultant(curves.parse_poly(args.f), curves.parse_poly(args.g))))
        return EXIT_OK
    model = _model(args)
    if args.action == "genus":
        _out(str(curves.hyperelliptic_genus(model)))
    elif args.action == "count":
        if args.p is None:
            raise UsageError("count needs --p")
        res = curves.count_points_mod_p(model, args.p)
        _out(f"p={res.p} affine={res.affine} infinity={res.at_infinity} total={res.total}")
    else:
        for x, y in curves.search_rational_points(model, args.height):
            _out(f"({x}, {y})")
    return EXIT_OK


# -- verify-paper -------------------------------------------------------------------------


def cmd_verify(args) -> int:
    failed = 0
    for res in verify.run_checks(args.only or ()):
        _out(res.line())
        failed += not res.ok
    _out(f"{'FAILED' if failed else 'OK'}: {failed} failing check(s)")
    return EXIT_VERIFY if failed else EXIT_OK


# -- parser -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quadpreper", description="Preperiodic points of x^2 + c over quadratic fields.")
    sub = p.add_subparsers(dest="command", required=True)

    def pair_flags(sp, required=True):
        sp.add_argument("--disc", type=_field, required=required, help="field Q(sqrt(D)); 1 means Q")
        sp.add_argument("--c", required=required, help="element such as -29/16 or 1/2+3/4*sqrt(-7)")
        sp.add_argument("--max-box", type=int, default=DEFAULT_MAX_BOX, help="enumeration size guard")
        sp.add_argument("--catalog", help=f"catalog file (default: ${graphs.CATALOG_ENV} or shipped)")

    g = sub.add_parser("graph", help="compute and classify one graph")
    pair_flags(g)
    g.add_argument("--format", choices=("text", "json", "dot"), default="text")
    g.add_argument("--timing", action="store_true", help="fill the ms field in JSON output")
    g.set_defaults(func=cmd_graph)

    s = sub.add_parser("scan", help="compute graphs over a range of fields and rational c")
    s.add_argument("--disc-range", type=_int_range, required=True, metavar="A..B")
    s.add_argument("--num-bound", type=int, required=True)
    den = s.add_mutually_exclusive_group(required=True)
    den.add_argument("--den-bound", type=int, help="denominators 1..M")
    den.add_argument("--denominators", type=_int_list, help="explicit list, e.g. 1,4,16,48")
    s.add_argument("--out", required=True)
    s.add_argument("--skip-done", action="store_true", help="keep records already in --out")
    s.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    s.add_argument("--include-rational", action="store_true", help="also scan K = Q")
    s.add_argument("--max-box", type=int, default=DEFAULT_MAX_BOX)
    s.add_argument("--timing", action="store_true")
    s.add_argument("--catalog")
    s.set_defaults(func=cmd_scan)

    c = sub.add_parser("catalog", help="build, list or match the graph catalog")
    c.add_argument("action", choices=("build", "match", "list", "discover"))
    c.add_argument("--representatives", help="label/D/c rows for build")
    c.add_argument("--scan", help="scan JSONL file for discover")
    c.add_argument("--out", help="output catalog file (default: stdout)")
    pair_flags(c, required=False)
    c.set_defaults(func=cmd_catalog)

    f = sub.add_parser("family", help="evaluate a parametrised family")
    f.add_argument("family", help="family id, or 'list'")
    f.add_argument("--params", type=lambda t: [v for v in t.split(",") if v], metavar="VALUES")
    f.add_argument("--disc", type=_field, default=1, help="field of the parameters")
    f.set_defaults(func=cmd_family)

    cv = sub.add_parser("curve", help="hyperelliptic curve tools")
    cv.add_argument("action", choices=("count", "search", "stoll", "resultant", "genus", "models"))
    cv.add_argument("--model", help="name from the models file")
    cv.add_argument("--models", help="models file (default: shipped)")
    cv.add_argument("--f", help="right-hand side polynomial")
    cv.add_argument("--g", help="second polynomial for resultant")
    cv.add_argument("--p", type=int)
    cv.add_argument("--height", type=int, default=100)
    cv.add_argument("--count", type=int)
    cv.add_argument("--rank", type=int)
    cv.set_defaults(func=cmd_curve)

    v = sub.add_parser("verify-paper", help="recompute the published constants")
    v.add_argument("--only", nargs="+", metavar="GROUP", help=f"groups: {', '.join(verify.GROUPS)}, or check names")
    v.set_defaults(func=cmd_verify)
    return p


_VALUE_FLAGS = {"--disc", "--c", "--disc-range", "--f", "--g"}


def _attach_negative_values(argv: Sequence[str]) -> list[str]:
    """Glue values that start with ``-`` (such as ``--c -29/16``) onto their flag.

    Everything after ``--params`` up to the next ``--`` flag becomes one
    comma-separated value.
    """
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        elif tok == "--params":
            j = i + 1
            while j < len(argv) and not argv[j].startswith("--"):
                j += 1
            out.append("--params=" + ",".join(argv[i + 1 : j]))
            i = j
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(_attach_negative_values(argv))
    if args.command == "catalog" and args.action == "build" and not args.representatives:
        sys.stderr.write("catalog build needs --representatives\n")
        return EXIT_USAGE
    if args.command == "catalog" and args.action == "discover" and not args.scan:
        sys.stderr.write("catalog discover needs --scan\n")
        return EXIT_USAGE
    if args.command == "curve" and args.action == "stoll" and None in (args.count, args.rank, args.p):
        sys.stderr.write("stoll needs --count, --rank and --p\n")
        return EXIT_USAGE
    try:
        return args.func(args)
    except QuadPreperError as exc:
        sys.stderr.write(f"error: {exc}\n")
        if args.command in ("family", "curve") and exc.exit_code == EXIT_VERIFY and not isinstance(exc, ConsistencyError):
            return EXIT_USAGE
        return exc.exit_code
    except OSError as exc:
        sys.stderr.write(f"I/O error: {exc}\n")
        return EXIT_IO
    except json.JSONDecodeError as exc:
        sys.stderr.write(f"malformed scan file: {exc}\n")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
