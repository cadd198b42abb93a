"""Command-line front end for the finite-group modular functor engine."""

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence, TextIO

from pydantic import ValidationError

from harness.selftest_harness import SelftestHarness
from services.bundles import (
    count_bundles,
    enumerate_bundles,
    gluing_bijection_check,
    parse_cut,
    surface,
)
from services.characters import character_table
from services.double import DoubleLabel, DrinfeldDouble
from services.errors import CapExceededError, EngineError, SelftestFailure, UsageError
from services.groups import FiniteGroup, load_group_file, parse_preset
from services.modular_functor import METHODS, LabelVector, ModularFunctorEngine
from services.render import FORMATS, CommandResult, cyclo_cell, render
from services.settings import Settings
from services.table_cache import CharacterTableCache


# ANSI color codes for status lines
class Colors:
    CYAN = "\033[96m"
    GREEN = "\033[92m"
    YELLOW = "\033[93m"
    BOLD = "\033[1m"
    END = "\033[0m"


def print_header(text: str, stream: TextIO = sys.stderr) -> None:
    """Print header with formatting."""
    print(f"\n{Colors.BOLD}{Colors.CYAN}{'═' * 80}{Colors.END}", file=stream)
    print(f"{Colors.BOLD}{Colors.CYAN}{text}{Colors.END}", file=stream)
    print(f"{Colors.BOLD}{Colors.CYAN}{'═' * 80}{Colors.END}\n", file=stream)


def print_section(title: str, content: str = "", color: str = Colors.YELLOW, stream=sys.stderr):
    """Print a section with title."""
    print(f"{color}{Colors.BOLD}▶ {title}{Colors.END}", file=stream)
    if content:
        print(f"{color}{content}{Colors.END}", file=stream)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(message, {"usage": self.format_usage().strip()})


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fgmf", description="Exact finite-group modular functor engine")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--group", default="preset:S3", help="preset:<name> or a group file")
        p.add_argument("--format", choices=FORMATS, default="json")
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--cache-dir", default=None)
        p.add_argument("--state-cap", type=int, default=None)
        p.add_argument("--materialize-cap", type=int, default=None)
        p.add_argument("--grid-cap", type=int, default=None)
        p.add_argument("--group-cap", type=int, default=None)
        p.add_argument("--verbose", action="store_true")
        return p

    def surface_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--genus", type=int, default=0)
        p.add_argument("--points", type=int, default=1)

    command("group", "conjugacy classes and character table")
    p = command("double", "irreducible labels of D(G)")
    p.add_argument("--fusion", action="store_true", help="include fusion coefficients")
    p = command("bundles", "marked G-bundles of a surface")
    surface_args(p)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--list", action="store_true", help="list every bundle tuple")
    p = command("dims", "dimensions of W(X; labels)")
    surface_args(p)
    p.add_argument("--labels", default=None, help="comma separated; omit for the full table")
    p.add_argument("--method", choices=METHODS, default="auto")
    p = command("glue-check", "gluing bijection and gluing identity along a cut")
    surface_args(p)
    p.add_argument("--cut", default="nonseparating")
    p.add_argument("--labels", default=None)
    command("modular", "S and T matrices")
    p = command("verlinde", "Verlinde dimension, closed surfaces included")
    p.add_argument("--genus", type=int, default=0)
    p.add_argument("--labels", default="")
    command("selftest", "run every invariant suite")
    return parser


def make_settings(args: argparse.Namespace) -> Settings:
    """Environment settings overridden by flags."""
    base = Settings.from_env()
    overrides = {
        "threads": args.threads,
        "cache_dir": args.cache_dir,
        "state_cap": args.state_cap,
        "materialize_cap": args.materialize_cap,
        "grid_cap": args.grid_cap,
        "group_cap": args.group_cap,
    }
    values = {**base.model_dump(), **{k: v for k, v in overrides.items() if v is not None}}
    try:
        return Settings(**values)
    except ValidationError as e:
        raise UsageError("invalid configuration", {"errors": e.errors(include_url=False)})


def load_group(source: str, settings: Settings) -> FiniteGroup:
    if source.startswith("preset:"):
        return parse_preset(source[len("preset:") :], cap=settings.group_cap)
    return load_group_file(source, cap=settings.group_cap)


def split_labels(text: str) -> List[str]:
    """Split on commas outside parentheses and brackets."""
    tokens, depth, current = [], 0, ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            tokens.append(current.strip())
            current = ""
        else:
            current += ch
    if current.strip():
        tokens.append(current.strip())
    return tokens


def parse_combination(double: DrinfeldDouble, token: str) -> Dict[int, int]:
    """'2*vacuum+([3],r1)' -> {0: 2, k: 1}."""
    combination: Dict[int, int] = {}
    depth, current, terms = 0, "", []
    for ch in token:
        depth += ch in "(["
        depth -= ch in ")]"
        if ch == "+" and depth == 0:
            terms.append(current)
            current = ""
        else:
            current += ch
    terms.append(current)
    for term in terms:
        term = term.strip()
        count = 1
        head, star, tail = term.partition("*")
        if star and head.strip().isdigit():
            count, term = int(head), tail.strip()
        label = double.resolve_label(term)
        combination[label.index] = combination.get(label.index, 0) + count
    return combination


def _names(labels: Sequence[DoubleLabel], indices: Sequence[int]) -> List[str]:
    return [labels[i].name for i in indices]


# Commands


def cmd_group(group: FiniteGroup, settings: Settings, cache, args) -> CommandResult:
    table = character_table(group, cache=cache, prime_bound=settings.prime_search_bound)
    info = group.conjugacy
    classes = [
        {
            "index": c,
            "representative": info.representative[c],
            "size": len(info.classes[c]),
            "element_order": group.element_orders[info.representative[c]],
            "centralizer_order": info.centralizer_order(c),
        }
        for c in range(info.count)
    ]
    payload = {
        "group": group.name,
        "order": group.order,
        "exponent": group.exponent,
        "abelian": group.is_abelian,
        "digest": group.digest,
        "classes": classes,
        "character_table": {
            "conductor": table.conductor,
            "degrees": list(table.degrees),
            "values": [[str(v) for v in row] for row in table.values],
        },
    }
    rows = [[d] + [str(v) for v in row] for d, row in zip(table.degrees, table.values)]
    return CommandResult(
        payload=payload,
        columns=["degree"] + [f"[{c['representative']}]" for c in classes],
        rows=rows,
        summary=[f"{group.name}: order {group.order}, {info.count} classes"],
    )


def cmd_double(group: FiniteGroup, settings: Settings, cache, args) -> CommandResult:
    double = DrinfeldDouble(group, cache=cache, prime_bound=settings.prime_search_bound)
    labels = [
        {
            "index": label.index,
            "name": label.name,
            "class": label.class_index,
            "irrep": label.cent_irrep_index,
            "dim": label.dim,
            "dual": double.dual_label(label).index,
        }
        for label in double.labels
    ]
    payload: Dict[str, Any] = {
        "group": group.name,
        "count": len(labels),
        "sum_dim_squared": sum(label.dim**2 for label in double.labels),
        "labels": labels,
    }
    if args.fusion:
        payload["fusion"] = [list(r) for r in double.fusion_table(settings.threads)]
    return CommandResult(
        payload=payload,
        columns=["index", "name", "class", "irrep", "dim", "dual"],
        rows=[list(label.values()) for label in labels],
        summary=[f"D({group.name}): {len(labels)} labels"],
    )


def cmd_bundles(group: FiniteGroup, settings: Settings, cache, args) -> CommandResult:
    item = surface(args.genus, args.points)
    total, histogram = count_bundles(group, item, settings)
    if args.count_only:
        return CommandResult(payload={"count": total})
    payload: Dict[str, Any] = {
        "count": total,
        "grade_histogram": [
            {"monodromies": list(grades), "count": count} for grades, count in histogram.items()
        ],
    }
    if args.list:
        payload["bundles"] = [
            {"a": list(b.a), "b": list(b.b), "s": list(b.s), "m": list(b.m)}
            for b in enumerate_bundles(group, item, settings)
        ]
    return CommandResult(
        payload=payload,
        columns=["monodromies", "count"],
        rows=[[" ".join(map(str, grades)), count] for grades, count in histogram.items()],
        summary=[f"{total} bundles on (g={args.genus}, n={args.points})"],
    )


def cmd_dims(group: FiniteGroup, settings: Settings, cache, args) -> CommandResult:
    engine = ModularFunctorEngine(group, settings, cache)
    if args.points == 0:
        return _closed_dims(engine, args)
    labels = engine.double.labels
    item = surface(args.genus, args.points)
    if args.labels is None:
        table = engine.decomposition_table(item)
        entries = [
            {"labels": _names(labels, key), "dimension": value}
            for key, value in table.entries.items()
            if value
        ]
        payload = {
            "group": group.name,
            "genus": item.genus,
            "points": item.boundary_count,
            "entries": entries,
            "weighted_total": table.weighted_total,
            "square_total": table.square_total,
            "self_pairing": table.self_pairing,
        }
        return CommandResult(
            payload=payload,
            columns=["labels", "dimension"],
            rows=[[" ".join(e["labels"]), e["dimension"]] for e in entries],
        )
    tokens = split_labels(args.labels)
    combos = [parse_combination(engine.double, token) for token in tokens]
    if len(combos) != item.boundary_count:
        raise UsageError(
            "one label per boundary point is required",
            {"labels": tokens, "points": item.boundary_count},
        )
    vector = LabelVector(
        surface=item, labels=tuple(tuple(sorted(c.items())) for c in combos)
    )
    report = engine.dim_w(vector, args.method)
    payload = {
        "group": group.name,
        "genus": item.genus,
        "points": item.boundary_count,
        "labels": tokens,
        "routes": report.routes,
        "skipped": report.skipped,
        "dimension": report.dimension,
    }
    return CommandResult(
        payload=payload,
        columns=["route", "dimension"],
        rows=[[route, value] for route, value in report.routes.items()],
    )


def _closed_dims(engine: ModularFunctorEngine, args) -> CommandResult:
    if split_labels(args.labels or ""):
        raise UsageError("a closed surface takes no labels", {"labels": args.labels})
    report = engine.closed_dim(args.genus, args.method)
    payload = {
        "group": engine.group.name,
        "genus": report.genus,
        "points": 0,
        "labels": [],
        "routes": report.routes,
        "skipped": report.skipped,
        "dimension": report.dimension,
    }
    return CommandResult(
        payload=payload,
        columns=["route", "dimension"],
        rows=[[route, value] for route, value in report.routes.items()],
    )


def cmd_glue_check(group: FiniteGroup, settings: Settings, cache, args) -> CommandResult:
    item = surface(args.genus, args.points)
    cut = parse_cut(args.cut)
    engine = ModularFunctorEngine(group, settings, cache)
    labels = engine.double.labels
    vectors = None
    if args.labels is not None:
        resolved = engine.resolve(split_labels(args.labels))
        if len(resolved) != item.boundary_count:
            raise UsageError(
                "one label per boundary point is required",
                {"labels": [label.name for label in resolved], "points": item.boundary_count},
            )
        vectors = [tuple(label.index for label in resolved)]
    bijection = gluing_bijection_check(group, item, cut, settings)
    gluing = engine.verify_gluing(item, cut, vectors)
    records = [
        {
            "labels": _names(labels, record.labels),
            "dimension": record.dimension,
            "contributions": {labels[mu].name: v for mu, v in record.contributions.items()},
        }
        for record in gluing.records
    ]
    payload = {
        "group": group.name,
        "genus": item.genus,
        "points": item.boundary_count,
        "cut": args.cut,
        "pieces": [[p.genus, p.boundary_count] for p in gluing.pieces],
        "bijection": bijection.model_dump(),
        "gluing": records,
    }
    return CommandResult(
        payload=payload,
        columns=["labels", "dimension", "contributions"],
        rows=[[" ".join(r["labels"]), r["dimension"], r["contributions"]] for r in records],
        summary=[f"bijection: {bijection.bundle_count} = {bijection.orbit_count} orbits"],
    )


def cmd_modular(group: FiniteGroup, settings: Settings, cache, args) -> CommandResult:
    data = ModularFunctorEngine(group, settings, cache).modular
    approx = args.format == "text"
    payload = {
        **data.to_json(),
        "phase": data.central_charge_phase.to_json() if data.central_charge_phase else None,
    }
    return CommandResult(
        payload=payload,
        columns=["label", "T"] + [label.name for label in data.labels],
        rows=[
            [label.name, cyclo_cell(data.T[i], approx)] + [cyclo_cell(v, approx) for v in data.S[i]]
            for i, label in enumerate(data.labels)
        ],
    )


def cmd_verlinde(group: FiniteGroup, settings: Settings, cache, args) -> CommandResult:
    engine = ModularFunctorEngine(group, settings, cache)
    labels = engine.resolve(split_labels(args.labels))
    dimension = engine.verlinde(args.genus, [label.index for label in labels])
    return CommandResult(
        payload={
            "group": group.name,
            "genus": args.genus,
            "labels": [label.name for label in labels],
            "dimension": dimension,
        }
    )


def cmd_selftest(group: FiniteGroup, settings: Settings, cache, args) -> CommandResult:
    report = SelftestHarness(group, settings, cache).run()
    failure = report.first_failure()
    if failure is not None:
        payload = {"check": failure.name, "cause": failure.error}
        if failure.error and failure.error.get("error") == "cap_exceeded":
            raise CapExceededError(f"selftest check exceeded a cap: {failure.name}", payload)
        raise SelftestFailure(f"selftest check failed: {failure.name}", payload)
    payload = {
        "group": report.group,
        "order": report.order,
        "labels": report.labels,
        "passed": report.passed,
        "checks": [
            {"name": c.name, "passed": c.passed, "details": c.details} for c in report.checks
        ],
    }
    return CommandResult(
        payload=payload,
        columns=["check", "passed", "seconds"],
        rows=[[c.name, c.passed, c.seconds] for c in report.checks],
    )


COMMANDS = {
    "group": cmd_group,
    "double": cmd_double,
    "bundles": cmd_bundles,
    "dims": cmd_dims,
    "glue-check": cmd_glue_check,
    "modular": cmd_modular,
    "verlinde": cmd_verlinde,
    "selftest": cmd_selftest,
}


def run(
    argv: Optional[Sequence[str]] = None,
    stdout: TextIO = sys.stdout,
    stderr: TextIO = sys.stderr,
) -> int:
    """
    Run one subcommand.

    Returns:
        0 on success, 1 on usage errors, 2 when a cap is exceeded, 3 on an
        invariant or theorem violation
    """
    try:
        args = build_parser().parse_args(list(argv) if argv is not None else None)
        if args.command is None:
            raise UsageError("a subcommand is required", {"commands": sorted(COMMANDS)})
        logging.basicConfig(
            level=logging.INFO if args.verbose else logging.WARNING,
            format="%(message)s",
            stream=stderr,
        )
        settings = make_settings(args)
        cache = CharacterTableCache(settings.cache_dir) if settings.cache_dir else None
        group = load_group(args.group, settings)
        if args.verbose and args.format == "text":
            print_header(f"{args.command}: {group.name} (order {group.order})", stderr)
        result = COMMANDS[args.command](group, settings, cache, args)
        if args.verbose and args.format == "text":
            print_section("✓ done", color=Colors.GREEN, stream=stderr)
    except ValidationError as e:
        error = UsageError("invalid input", {"errors": e.errors(include_url=False)})
        print(json.dumps(error.to_diagnostic(), default=str), file=stderr)
        return error.exit_code
    except EngineError as e:
        print(json.dumps(e.to_diagnostic(), default=str), file=stderr)
        return e.exit_code
    stdout.write(render(result, args.format))
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
