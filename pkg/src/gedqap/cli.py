"""Command line front end: ``ged exact|bipartite|qap|gen|bench``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .bench import METHODS, SynthSpec, format_summary, run_benchmark, synth_pairs, write_dataset
from .bipartite import bipartite_ged
from .costs import ConstantCostModel, clamp_substitutions
from .editpath import format_path
from .exact import DEFAULT_BUDGET, astar_ged
from .graph import GraphError, parse_graph_with_ids
from .qap import qap_ged


def _nonneg(text: str) -> float:
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative number, got {text!r}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _add_costs(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("edit costs (substitutions cost 0 between equal labels)")
    for flag, what in (("cvs", "node substitution"), ("cvd", "node removal"), ("cvi", "node insertion"),
                       ("ces", "edge substitution"), ("ced", "edge removal"), ("cei", "edge insertion")):
        g.add_argument(f"--{flag}", type=_nonneg, default=1.0, help=f"{what} cost (default 1)")
    g.add_argument("--clamp-sub", action="store_true",
                   help="cap each substitution at removal + insertion")


def _add_qap(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("IPFP")
    g.add_argument("--init", choices=("random", "bnode", "bedges"), default="bedges")
    g.add_argument("--restarts", type=_positive_int, default=1, help="total number of runs")
    g.add_argument("--kmax", type=_positive_int, default=40, help="iterations per run")
    g.add_argument("--seed", type=int, default=0)


def _add_pair(p: argparse.ArgumentParser) -> None:
    p.add_argument("g1", type=Path)
    p.add_argument("g2", type=Path)
    p.add_argument("--emit-path", action="store_true", help="print the edit path after the value")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ged", description="Graph edit distance tools.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="exact distance by A* search")
    _add_pair(p)
    p.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET, help="max node expansions")
    p.add_argument("--time-limit", type=_nonneg, default=None, help="seconds")
    p.add_argument("--h", choices=("lsap", "none"), default="lsap", help="lower bound used by the search")
    _add_costs(p)

    p = sub.add_parser("bipartite", help="upper bound from one node assignment")
    _add_pair(p)
    p.add_argument("--strategy", choices=("node", "edges"), default="edges")
    _add_costs(p)

    p = sub.add_parser("qap", help="upper bound by integer projected fixed point")
    _add_pair(p)
    _add_qap(p)
    _add_costs(p)

    p = sub.add_parser("gen", help="write synthetic source/target pairs")
    p.add_argument("--n", type=int, default=10, help="nodes in each source graph")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--node-labels", default="C,N,O")
    p.add_argument("--edge-labels", default="1,2")
    p.add_argument("--ratio", type=_nonneg, default=2.1 / 2, help="edges per node")

    p = sub.add_parser("bench", help="run several methods over a dataset directory")
    p.add_argument("--dir", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--methods", default=",".join(METHODS))
    p.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET)
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.add_argument("--no-time", action="store_true", help="write t=0 so reruns are byte-identical")
    _add_qap(p)
    _add_costs(p)
    return parser


def _model(args):
    m = ConstantCostModel(args.cvs, args.cvd, args.cvi, args.ces, args.ced, args.cei)
    return clamp_substitutions(m) if args.clamp_sub else m


def _load(path: Path):
    return parse_graph_with_ids(path.read_text(encoding="utf-8"))


def _id_map(tag: str, ids) -> list[str]:
    if list(ids) == list(range(len(ids))):
        return []
    return [f"# {tag} {i} = {orig}" for i, orig in enumerate(ids)]


def _run_pair(args, out) -> int:
    try:
        (g1, ids1), (g2, ids2) = _load(args.g1), _load(args.g2)
    except (OSError, UnicodeDecodeError, GraphError) as exc:
        print(f"ged: {exc}", file=sys.stderr)
        return 2
    m = _model(args)
    if args.command == "exact":
        res = astar_ged(g1, g2, m, budget=args.budget, time_limit=args.time_limit,
                        heuristic=args.h == "lsap")
        if not res.optimal:
            print("# search budget exhausted; value is an upper bound", file=out)
    elif args.command == "bipartite":
        res = bipartite_ged(g1, g2, m, args.strategy)
    else:
        res = qap_ged(g1, g2, m, init=args.init, restarts=args.restarts, k_max=args.kmax, seed=args.seed)
    print(f"{res.value:.12g}", file=out)
    if args.emit_path:
        for line in _id_map("g1", ids1) + _id_map("g2", ids2):
            print(line, file=out)
        out.write(format_path(res.path))
    return 0


def _gen(args, out) -> int:
    spec = SynthSpec(n=args.n, node_labels=tuple(args.node_labels.split(",")),
                     edge_labels=tuple(args.edge_labels.split(",")), ratio=args.ratio, seed=args.seed)
    try:
        written = write_dataset(synth_pairs(spec, args.count), args.out)
    except ValueError as exc:
        print(f"ged: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {len(written) // 2} pairs to {args.out}", file=out)
    return 0


def _bench(args, out) -> int:
    methods = [s.strip() for s in args.methods.split(",") if s.strip()]
    bad = [s for s in methods if s not in METHODS]
    if bad:
        print(f"ged: unknown method(s) {', '.join(bad)}; choose from {', '.join(METHODS)}", file=sys.stderr)
        return 2
    if not args.dir.is_dir():
        print(f"ged: no such directory: {args.dir}", file=sys.stderr)
        return 2
    qap_opts = {"init": args.init, "restarts": args.restarts, "k_max": args.kmax, "seed": args.seed}
    _records, summary, errors = run_benchmark(args.dir, methods, _model(args), args.out, qap_opts,
                                              budget=args.budget, jobs=args.jobs,
                                              record_time=not args.no_time)
    for msg in errors:
        print(f"ged: skipped {msg}", file=sys.stderr)
    if summary:
        print(format_summary(summary), file=out)
    return 0


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command in ("exact", "bipartite", "qap"):
        return _run_pair(args, out)
    if args.command == "gen":
        return _gen(args, out)
    return _bench(args, out)


if __name__ == "__main__":
    sys.exit(main())
