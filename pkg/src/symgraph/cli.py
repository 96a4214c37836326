"""Command-line front end: ``symgraph construct | analyze | quotient | census``.

The seed comes from ``--seed``, else the ``SYMGRAPH_SEED`` environment
variable, else the package default.  ``--config FILE`` reads a JSON object
with any of the :class:`Config` fields; explicit flags override it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .atlas import DEFAULT_SEED
from .census import CensusOptions, is_basic, run_census, select_entries
from .exceptions import BoundExceededError, SymgraphError
from .graphs import Graph, quotient
from .library import named
from .perm import DEFAULT_ENUM_BOUND, PermGroup
from .presentation import DEFAULT_COSET_BOUND
from .symmetry import (
    DEFAULT_IR_MAX_VERTICES,
    automorphism_search,
    is_arc_transitive,
    s_transitivity_degree,
    stabilizer_profile,
    verify_automorphisms,
)


@dataclass
class Config:
    seed: int = DEFAULT_SEED
    bounds: dict = field(default_factory=lambda: {
        "ir_max_vertices": DEFAULT_IR_MAX_VERTICES,
        "coset_bound": DEFAULT_COSET_BOUND,
        "enum_bound": DEFAULT_ENUM_BOUND,
    })
    feature_flags: dict = field(default_factory=lambda: {"stretch_graphs": False})
    output: str = "text"

    def __post_init__(self):
        for key, value in self.bounds.items():
            if not isinstance(value, int) or value <= 0:
                raise ValueError(f"bound {key} must be a positive integer")
        if self.output not in ("text", "json"):
            raise ValueError("output must be 'text' or 'json'")

    @classmethod
    def load(cls, path: str | None) -> Config:
        if not path:
            return cls()
        data = json.loads(Path(path).read_text())
        base = cls()
        bounds = {**base.bounds, **data.get("bounds", {})}
        flags = {**base.feature_flags, **data.get("feature_flags", {})}
        return cls(int(data.get("seed", base.seed)), bounds, flags, data.get("output", base.output))


def resolve_seed(flag: int | None, config: Config) -> int:
    if flag is not None:
        return flag
    env = os.environ.get("SYMGRAPH_SEED")
    if env:
        return int(env)
    return config.seed


def _read_json(path: str):
    return json.loads(Path(path).read_text())


def _write(path: str | None, text: str):
    if path in (None, "-"):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(path).write_text(text)


def _summary(graph: Graph) -> str:
    return (f"n={graph.n} valency={graph.valency} connected={graph.is_connected()} "
            f"edges={graph.edge_count}")


def cmd_construct(args, config: Config) -> int:
    target = args.name
    seed = resolve_seed(args.seed, config)
    if Path(target).is_file():
        recipe = _read_json(target)
        target = recipe["name"]
        seed = int(recipe.get("seed", seed))
    stretch = args.stretch or config.feature_flags.get("stretch_graphs", False)
    graph = named(target, stretch=stretch, seed=seed)
    _write(args.output, graph.dumps())
    if args.group:
        if graph.group is None:
            raise SymgraphError(f"{target} has no construction group to write")
        Path(args.group).write_text(json.dumps(graph.group.to_json()))
    print(f"{graph.meta.get('name', target)}: {_summary(graph)}", file=sys.stderr)
    return 0


def analyze(graph: Graph, group: PermGroup | None, ir_bound: int) -> dict:
    out: dict = {"n": graph.n, "valency": graph.valency, "connected": graph.is_connected()}
    if group is None:
        if graph.n > ir_bound:
            raise BoundExceededError(
                f"{graph.n} vertices exceeds the automorphism search bound {ir_bound}; "
                "pass --group to verify a known group instead")
        group = automorphism_search(graph, ir_bound).group
        out["mode"] = "full automorphism group"
        full = True
    else:
        if not verify_automorphisms(graph, group):
            raise SymgraphError("the supplied group does not act by automorphisms")
        out["mode"] = "containment-verified"
        full = False
    out["group_order"] = group.order()
    out["arc_transitive"] = is_arc_transitive(graph, group)
    if out["arc_transitive"]:
        out["s"] = s_transitivity_degree(graph, group)
        out["stabilizer"] = stabilizer_profile(graph, group).to_json()
    if full:
        b = is_basic(graph, group)
        out["basic"] = b.basic
        if b.witness is not None:
            out["witness"] = {"order": b.witness.order(), "quotient_n": b.quotient.quotient.n}
    return out


def cmd_analyze(args, config: Config) -> int:
    graph = Graph.from_json(_read_json(args.graph))
    group = PermGroup.from_json(_read_json(args.group)) if args.group else None
    out = analyze(graph, group, config.bounds["ir_max_vertices"])
    if args.format == "json":
        _write(args.output, json.dumps(out, indent=2, sort_keys=True))
    else:
        lines = [f"vertices: {out['n']}  valency: {out['valency']}  connected: {out['connected']}",
                 f"{out['mode']}: order {out['group_order']}",
                 f"arc-transitive: {out['arc_transitive']}"]
        if "s" in out:
            st = out["stabilizer"]
            lines.append(f"s: {out['s']}")
            lines.append(f"stabilizer: order {st['factored_order']}, "
                         f"consistent with {st['consistent_with']}")
        if "basic" in out:
            lines.append(f"basic: {out['basic']}")
        _write(args.output, "\n".join(lines))
    return 0


def cmd_quotient(args, config: Config) -> int:
    graph = Graph.from_json(_read_json(args.graph))
    n = PermGroup.from_json(_read_json(args.group))
    res = quotient(graph, n)
    _write(args.output, res.quotient.dumps())
    print(f"quotient: {_summary(res.quotient)} normal_cover={res.is_normal_cover}", file=sys.stderr)
    return 0


def cmd_census(args, config: Config) -> int:
    options = CensusOptions(
        seed=resolve_seed(args.seed, config),
        stretch=args.stretch or config.feature_flags.get("stretch_graphs", False),
        timings=not args.no_timings,
        jobs=max(1, args.jobs),
        ir_max_vertices=config.bounds["ir_max_vertices"],
        names=args.entry or None,
    )
    select_entries(options.names)  # unknown names fail before any work
    report = run_census(options=options)
    fmt = args.output or config.output
    if fmt == "json":
        print(report.dumps(timings=options.timings))
    else:
        print(report.table(timings=options.timings))
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symgraph",
                                     description="Pentavalent symmetric graph toolkit")
    parser.add_argument("--config", help="JSON config file (flags override it)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a named graph and write it as JSON")
    p.add_argument("name", help="graph name (e.g. G66, CD:31) or a JSON recipe file")
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.add_argument("--group", help="also write the construction group to this file")
    p.add_argument("--seed", type=int)
    p.add_argument("--stretch", action="store_true")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("analyze", help="automorphisms, s-transitivity and basicness of a graph")
    p.add_argument("graph", help="graph JSON file")
    p.add_argument("--group", help="verify this group (JSON) instead of searching for Aut")
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("quotient", help="quotient of a graph by a group of automorphisms")
    p.add_argument("graph", help="graph JSON file")
    p.add_argument("--group", required=True, help="group JSON file acting on the vertices")
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("census", help="verify the expected-value table")
    p.add_argument("--entry", action="append", help="only this entry (repeatable)")
    p.add_argument("--stretch", action="store_true", help="include stretch entries")
    p.add_argument("-o", "--output", choices=("text", "json"), help="report format")
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-timings", action="store_true")
    p.set_defaults(func=cmd_census)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = Config.load(args.config)
        return args.func(args, config)
    except (SymgraphError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"symgraph: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())


__all__ = ["Config", "main", "build_parser", "analyze", "resolve_seed"]
