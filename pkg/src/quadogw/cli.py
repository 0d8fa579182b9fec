"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 unsupported.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Sequence

from .evaluator import EngineError, Unsupported
from .geometry import GeometryError, make_space
from .open_engine import Engine
from .rings import PresentationError, ci_presentation, relative_quantum_table, small_quantum_table
from .store import Store, StoreConflict, canonical_key, format_rational
from .tables import check_cells, compute_table
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_UNSUPPORTED = 0, 1, 2, 3

SPACE_CODES = {"pn": "PN", "q-odd": "QO", "q-even": "QE", "q2": "QS"}


class InvalidInput(ValueError):
    pass


def _emit(payload: object) -> None:
    print(json.dumps(payload, indent=None))


def _progress(message: str) -> None:
    print(message, file=sys.stderr, flush=True)


def _space(args: argparse.Namespace):
    code = SPACE_CODES[args.space]
    n = 2 if code == "QS" and args.n is None else args.n
    if n is None:
        raise InvalidInput("--n is required")
    return make_space(code, n)


def _store(args: argparse.Namespace) -> Store:
    return Store.from_env(getattr(args, "cache", None), engine_version=Engine.ENGINE_VERSION)


def _tag(raw: str, closed: bool) -> str:
    tag = raw.strip()
    lowered = tag.lower()
    if lowered == "pdl":
        return "PDL"
    if lowered == "diamond":
        return "D"
    if closed and lowered.startswith("g"):
        raise InvalidInput(f"relative class {tag!r} in a closed invariant")
    if not closed and lowered.startswith("h"):
        # h-powers name the matching relative classes on the open side
        return "g" + lowered[1:]
    if lowered in ("lstar", "l*"):
        return "ls"
    return lowered


def cmd_invariant(args: argparse.Namespace) -> int:
    space = _space(args)
    store = _store(args)
    engine = Engine(space, store=store, allow_large=args.allow_large)
    closed = args.kind == "closed"
    raw = [c for c in (args.constraints or "").split(",") if c.strip()]
    tags = [_tag(c, closed) for c in raw]
    beta_parts = [int(b) for b in args.beta.split(",")]
    if closed:
        beta = tuple(beta_parts)
        value = engine.closed_invariant(beta, tags)
        key = canonical_key(space, "closed", beta, None, tags)
        prov = store.provenance(key) or "axiom"
        payload = {"key": key, "value": format_rational(value), "provenance": prov}
    else:
        if len(beta_parts) != 1:
            raise InvalidInput("open invariants take a single relative class")
        beta_rel = beta_parts[0]
        enhanced = args.kind == "enhanced"
        k = args.k
        indices = engine._rel_classes(tags)
        if k is None:
            k = engine.boundary_count(beta_rel, indices)
            if k is None:
                raise InvalidInput("no boundary-point count satisfies the degree axiom")
        value = engine.open_invariant(beta_rel, k, indices, enhanced=enhanced)
        key = canonical_key(space, "open", beta_rel, k, indices, enhanced=enhanced)
        internal = canonical_key(space, "open", beta_rel, k, [i for i in indices if i != space.diamond], enhanced=True)
        if space.diamond is not None and space.diamond in indices:
            prov = "wall-crossing"
        else:
            prov = store.provenance(internal) or "axiom"
        payload = {"key": key, "value": format_rational(value), "provenance": prov, "k": k}
        if space.ext_pdl is not None and space.ext_pdl in indices:
            payload["interpretation"] = "PDL insertions evaluated through the open-closed relation"
    if store.path is not None:
        store.flush()
    _emit(payload)
    return EXIT_OK


def cmd_table(args: argparse.Namespace) -> int:
    store = _store(args)
    ns = tuple(int(x) for x in args.n.split(",")) if args.n else None
    if args.table != 1 and ns is not None:
        raise InvalidInput("--n only applies to table 1")
    cells = compute_table(args.table, ns=ns, max_m=args.max_m, beta_max=args.beta_max, store=store, progress=_progress)
    if store.path is not None:
        store.flush()
    rows = [c.as_dict() for c in cells]
    if args.format == "json":
        _emit(rows)
    else:
        fields: list[str] = []
        for row in rows:
            fields += [f for f in row if f not in fields]
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        sys.stdout.write(buffer.getvalue())
    if args.check:
        problems = check_cells(args.table, cells)
        for problem in problems:
            print(problem, file=sys.stderr)
        return EXIT_FAIL if problems else EXIT_OK
    return EXIT_OK


def cmd_ring(args: argparse.Namespace) -> int:
    space = _space(args)
    engine = Engine(space, store=_store(args))
    table = small_quantum_table(engine) if args.side == "absolute" else relative_quantum_table(engine)
    skipped = table.fill()
    entries = {}
    for a in range(table.size):
        for b in range(a, table.size):
            if (a, b) in skipped:
                continue
            name = f"{table.tags[a]}*{table.tags[b]}"
            entries[name.replace("D", "diamond")] = table.format_element(table.entry(a, b))
    payload = {
        "space": space.code,
        "side": args.side,
        "basis": [{"name": t.replace("D", "diamond"), "degree": d} for t, d in zip(table.tags, table.degrees)],
        "novikov": "T = q^(1/2)" if space.family.value == "PN" else "T = q",
        "entries": entries,
        "unsupported": [f"{table.tags[a]}*{table.tags[b]}".replace("D", "diamond") for a, b in skipped],
    }
    _emit(payload)
    return EXIT_OK


def cmd_presentation(args: argparse.Namespace) -> int:
    degrees = [int(d) for d in args.degrees.split(",") if d.strip()]
    pairing: list[list[Fraction]] = []
    if args.pairing:
        with open(args.pairing, encoding="utf-8") as handle:
            data = json.load(handle)
        pairing = [[Fraction(str(x)) for x in row] for row in data]
    try:
        presentation = ci_presentation(args.n, degrees, pairing, args.l_trivial)
    except PresentationError as err:
        raise InvalidInput(str(err)) from err
    _emit(presentation.as_dict())
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    reports = run_suite(args.suite, args.budget)
    failed = 0
    for report in reports:
        status = "PASS" if report.ok else "FAIL"
        failed += not report.ok
        print(f"{status} {report.name}: checked={report.checked} skipped={report.skipped}")
        for failure in report.failures[:10]:
            print(f"    {failure}")
    print(f"{len(reports) - failed}/{len(reports)} suites passed")
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadogw", description="Exact open and closed Gromov-Witten invariants of quadrics")
    parser.add_argument("--cache", help="JSON-lines cache file (default: $OGW_CACHE)")
    sub = parser.add_subparsers(dest="command", required=True)

    inv = sub.add_parser("invariant", help="compute one invariant")
    inv.add_argument("--space", choices=sorted(SPACE_CODES), required=True)
    inv.add_argument("--n", type=int)
    inv.add_argument("--kind", choices=("closed", "open", "enhanced"), required=True)
    inv.add_argument("--beta", required=True, help="curve class, e.g. 2 or 1,1 for the surface")
    inv.add_argument("--k", type=int)
    inv.add_argument("--constraints", default="", help="comma separated tags: h0..hn, pdl, diamond, g0..gn, l, ls, ll")
    inv.add_argument("--allow-large", action="store_true", help="lift the projective-space size cap")
    inv.set_defaults(func=cmd_invariant)

    tab = sub.add_parser("table", help="regenerate a published table")
    tab.add_argument("--table", type=int, choices=(1, 2, 3, 4), required=True)
    tab.add_argument("--n", help="table 1 only: comma separated dimensions")
    tab.add_argument("--max-m", type=int, default=2)
    tab.add_argument("--beta-max", type=int)
    tab.add_argument("--format", choices=("csv", "json"), default="csv")
    tab.add_argument("--check", action="store_true")
    tab.set_defaults(func=cmd_table)

    ring = sub.add_parser("ring", help="print a quantum product table")
    ring.add_argument("--space", choices=sorted(SPACE_CODES), required=True)
    ring.add_argument("--n", type=int)
    ring.add_argument("--side", choices=("absolute", "relative"), default="relative")
    ring.set_defaults(func=cmd_ring)

    pres = sub.add_parser("presentation", help="symbolic presentation for a complete intersection")
    pres.add_argument("--n", type=int, required=True)
    pres.add_argument("--degrees", required=True)
    pres.add_argument("--pairing", help="JSON file with the primitive pairing matrix")
    pres.add_argument("--l-trivial", action="store_true")
    pres.set_defaults(func=cmd_presentation)

    ver = sub.add_parser("verify", help="run property suites")
    ver.add_argument("--suite", choices=sorted(SUITES) + ["all"], default="all")
    ver.add_argument("--budget", type=int, default=3)
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    if getattr(args, "cache", None) is None:
        args.cache = None
    try:
        return args.func(args)
    except Unsupported as err:
        print(f"unsupported: {err}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (InvalidInput, GeometryError, ValueError) as err:
        print(f"invalid input: {err}", file=sys.stderr)
        return EXIT_INVALID
    except (EngineError, StoreConflict) as err:
        print(f"engine failure: {err}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
