"""Command line front end.

Exit codes: 0 on success, 1 when verification finds unequal cuboids, 2 on
usage, schema or data errors. All outputs are deterministic byte for byte.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .dominance import SkylineResult, skyline
from .errors import SkylatticeError, SchemaError
from .lattice import build_agree_lattice, build_skyline_lattice, lattice_json, to_dot
from .model import CriterionSet, Relation
from .skycube import PartialSkycube, build_skycube, compression_stats, materialize_partial, verify_equivalence

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_ERROR = 2


def _names(raw: str) -> list[str]:
    return [token.strip() for token in raw.split(",") if token.strip()]


def _load_relation(args: argparse.Namespace) -> Relation:
    criteria = _names(args.criteria)
    if not criteria:
        raise SchemaError("--criteria needs at least one column name")
    return Relation.load_csv(args.input, criteria, maximize=_names(args.maximize))


def _chosen(relation: Relation, on: str | None) -> CriterionSet:
    if on is None:
        return relation.full_set()
    return relation.criterion_set(_names(on))


def _render_rows(result: SkylineResult, relation: Relation, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result.to_json(relation.criteria)) + "\n"
    if not result.rows:
        return ""
    return " ".join(str(r) for r in result.sorted_rows) + "\n"


def _cmd_skyline(args: argparse.Namespace) -> tuple[str, int]:
    relation = _load_relation(args)
    result = skyline(relation, _chosen(relation, args.on), presort=args.presort)
    return _render_rows(result, relation, args.format), EXIT_OK


def _cmd_skycube(args: argparse.Namespace) -> tuple[str, int]:
    relation = _load_relation(args)
    cube = build_skycube(relation, presort=args.presort)
    if args.format == "json":
        return json.dumps(cube.to_json(), indent=2) + "\n", EXIT_OK
    lines = []
    for criteria in cube.sorted_subsets():
        rows = " ".join(str(r) for r in sorted(cube.cuboids[criteria]))
        lines.append(f"{relation.format_criteria(criteria)}: {rows}")
    return "\n".join(lines) + "\n", EXIT_OK


def _cmd_materialize(args: argparse.Namespace) -> tuple[str, int]:
    relation = _load_relation(args)
    partial = materialize_partial(relation)
    return json.dumps(partial.to_json(), indent=2) + "\n", EXIT_OK


def _load_store(path: str) -> PartialSkycube:
    store = Path(path)
    if not store.exists():
        raise SchemaError(f"store {store} not found; run materialize first")
    try:
        payload = json.loads(store.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"store {store} is not valid JSON: {exc}") from None
    return PartialSkycube.from_json(payload)


def _cmd_query(args: argparse.Namespace) -> tuple[str, int]:
    partial = _load_store(args.store)
    relation = partial.relation
    result = partial.reconstruct(_chosen(relation, args.on))
    return _render_rows(result, relation, args.format), EXIT_OK


def _cmd_lattice(args: argparse.Namespace) -> tuple[str, int]:
    relation = _load_relation(args)
    build = build_agree_lattice if args.kind == "agree" else build_skyline_lattice
    lattice = build(relation)
    if args.format == "json":
        return json.dumps(lattice_json(lattice), indent=2) + "\n", EXIT_OK
    return to_dot(lattice), EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> tuple[str, int]:
    relation = _load_relation(args)
    report = verify_equivalence(materialize_partial(relation), build_skycube(relation))
    lines = [report.summary()]
    for criteria, expected, got in report.mismatches:
        lines.append(f"{criteria}: expected {' '.join(map(str, expected)) or '-'}"
                     f", got {' '.join(map(str, got)) or '-'}")
    return "\n".join(lines) + "\n", EXIT_OK if report.ok else EXIT_VERIFY_FAILED


def _cmd_stats(args: argparse.Namespace) -> tuple[str, int]:
    relation = _load_relation(args)
    stats = compression_stats(materialize_partial(relation), build_skycube(relation))
    lines = [
        f"concepts={stats.concepts} cuboids={stats.cuboids}",
        f"stored_rowids_partial={stats.stored_rowids_partial} stored_rowids_full={stats.stored_rowids_full}",
        f"representatives={stats.representatives}",
        f"comparisons_reconstruct={stats.comparisons_reconstruct} comparisons_scan={stats.comparisons_scan}",
    ]
    return "\n".join(lines) + "\n", EXIT_OK


def _add_ingest_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("input", help="CSV file with a header row")
    parser.add_argument("--criteria", required=True,
                        help="comma-separated criterion columns, in index order")
    parser.add_argument("--maximize", default="",
                        help="criterion columns to maximize instead of minimize")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skylattice",
                                     description="Skyline and skycube queries over CSV relations.")
    commands = parser.add_subparsers(dest="command", required=True)

    sky = commands.add_parser("skyline", help="skyline of one criterion subset")
    _add_ingest_arguments(sky)
    sky.add_argument("--on", default=None, help="criterion subset to query; defaults to all")
    sky.add_argument("--presort", action="store_true", help="use the sum-ordered scan")
    sky.add_argument("--format", choices=["table", "json"], default="table")
    sky.set_defaults(handler=_cmd_skyline)

    cube = commands.add_parser("skycube", help="skylines of every non-empty criterion subset")
    _add_ingest_arguments(cube)
    cube.add_argument("--presort", action="store_true", help="use the sum-ordered scan")
    cube.add_argument("--format", choices=["table", "json"], default="table")
    cube.set_defaults(handler=_cmd_skycube)

    mat = commands.add_parser("materialize", help="write the partial store as JSON")
    _add_ingest_arguments(mat)
    mat.set_defaults(handler=_cmd_materialize)

    query = commands.add_parser("query", help="answer one cuboid from a materialized store")
    query.add_argument("store", help="store file produced by materialize")
    query.add_argument("--on", default=None, help="criterion subset to query; defaults to all")
    query.add_argument("--format", choices=["table", "json"], default="table")
    query.set_defaults(handler=_cmd_query)

    lat = commands.add_parser("lattice", help="emit a concept lattice")
    _add_ingest_arguments(lat)
    lat.add_argument("--kind", choices=["agree", "skyline"], required=True)
    lat.add_argument("--format", choices=["dot", "json"], default="dot")
    lat.set_defaults(handler=_cmd_lattice)

    ver = commands.add_parser("verify", help="check every reconstructed cuboid against the full skycube")
    _add_ingest_arguments(ver)
    ver.set_defaults(handler=_cmd_verify)

    stats = commands.add_parser("stats", help="compare partial store size and work with the full skycube")
    _add_ingest_arguments(stats)
    stats.set_defaults(handler=_cmd_stats)

    for sub in commands.choices.values():
        sub.add_argument("--out", default=None, help="write output to a file instead of stdout")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = args.handler(args)
    except SkylatticeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.out is not None:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
