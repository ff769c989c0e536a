"""Synthetic pair generation and batch benchmarking of the GED methods."""

from __future__ import annotations

import csv
import io
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .bipartite import bipartite_ged
from .costs import ConstantCostModel, CostModel
from .exact import DEFAULT_BUDGET, astar_ged
from .graph import Graph, GraphError, read_graph, write_graph
from .qap import qap_ged

__all__ = [
    "SynthSpec",
    "BenchRecord",
    "gen_synth_pair",
    "synth_pairs",
    "write_dataset",
    "load_dataset",
    "run_benchmark",
    "records_to_rows",
    "summarize",
    "format_summary",
    "METHODS",
    "CSV_FIELDS",
]

log = logging.getLogger(__name__)

METHODS = ("exact", "bipartite-node", "bipartite-edges", "qap")
CSV_FIELDS = ("pair", "method", "d", "e", "t", "iters", "exact_hit")
HIT_TOL = 1e-9


@dataclass(frozen=True)
class SynthSpec:
    """Random undirected labeled graphs with a fixed edge/node ratio.

    Defaults mimic small molecules: three atom labels, two bond labels and
    about 2.1 incident edges per node.
    """

    n: int = 10
    node_labels: tuple[str, ...] = ("C", "N", "O")
    edge_labels: tuple[str, ...] = ("1", "2")
    ratio: float = 2.1 / 2
    seed: int = 0
    shuffle: bool = True


def gen_synth_pair(spec: SynthSpec) -> tuple[Graph, Graph]:
    """Source graph plus a target obtained by removing one node and relabeling another.

    The target's node ids are shuffled when ``spec.shuffle`` is set, so that
    solvers cannot profit from matching ids.
    """
    if spec.n < 3:
        raise ValueError("synthetic graphs need at least 3 nodes")
    if len(spec.node_labels) < 2:
        raise ValueError("relabeling needs at least two node labels")
    rng = np.random.default_rng(spec.seed)
    n = spec.n
    labels = [spec.node_labels[i] for i in rng.integers(len(spec.node_labels), size=n)]
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    count = min(int(round(spec.ratio * n)), len(pairs))
    chosen = sorted(rng.choice(len(pairs), size=count, replace=False))
    edges = [(pairs[p][0], pairs[p][1], spec.edge_labels[rng.integers(len(spec.edge_labels))])
             for p in chosen]
    source = Graph.from_edges(labels, edges, directed=False)

    gone = int(rng.integers(n))
    relabeled = int(rng.choice([u for u in range(n) if u != gone]))
    choices = [lab for lab in spec.node_labels if lab != labels[relabeled]]
    new_labels = list(labels)
    new_labels[relabeled] = choices[rng.integers(len(choices))]
    keep = [u for u in range(n) if u != gone]
    pos = {u: i for i, u in enumerate(keep)}
    target = Graph.from_edges([new_labels[u] for u in keep],
                              [(pos[u], pos[v], lab) for u, v, lab in edges if gone not in (u, v)])
    if spec.shuffle:
        target = target.relabel_nodes(rng.permutation(target.n))
    return source, target


def _pair_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def synth_pairs(spec: SynthSpec, count: int) -> list[tuple[str, Graph, Graph]]:
    """``count`` independent pairs; pair ``p`` is seeded from ``(spec.seed, p)``."""
    out = []
    for p in range(count):
        g1, g2 = gen_synth_pair(replace(spec, seed=_pair_seed(spec.seed, p)))
        out.append((f"pair{p:04d}", g1, g2))
    return out


def write_dataset(pairs: Iterable[tuple[str, Graph, Graph]], out_dir) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for pid, g1, g2 in pairs:
        for suffix, g in (("source", g1), ("target", g2)):
            path = out_dir / f"{pid}_{suffix}.gedg"
            write_graph(g, path)
            written.append(path)
    return written


def load_dataset(directory) -> tuple[list[tuple[str, Graph, Graph]], list[str]]:
    """Read ``<pair>_source.gedg`` / ``<pair>_target.gedg`` files.

    Returns the pairs that parsed and a list of per-file error messages.
    """
    directory = Path(directory)
    pairs, errors = [], []
    for src in sorted(directory.glob("*_source.gedg")):
        pid = src.name[: -len("_source.gedg")]
        tgt = directory / f"{pid}_target.gedg"
        if not tgt.exists():
            errors.append(f"{src.name}: missing {tgt.name}")
            continue
        try:
            pairs.append((pid, read_graph(src), read_graph(tgt)))
        except (GraphError, OSError, UnicodeDecodeError) as exc:
            errors.append(f"{pid}: {exc}")
    return pairs, errors


@dataclass(frozen=True)
class BenchRecord:
    pair: str
    method: str
    d: float
    e: float | None
    t: float
    iters: int | None
    exact_hit: bool | None


def _timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def _run_pair(job) -> list[BenchRecord]:
    (pid, g1, g2), methods, model, qap_opts, budget, record_time = job
    results: dict[str, tuple[float, float, int | None]] = {}
    exact = None
    for method in methods:
        if method == "exact":
            res, t = _timed(lambda: astar_ged(g1, g2, model, budget=budget))
            if res.optimal:
                exact = res.value
            results[method] = (res.value, t, None)
        elif method in ("bipartite-node", "bipartite-edges"):
            strategy = method.split("-")[1]
            res, t = _timed(lambda: bipartite_ged(g1, g2, model, "node" if strategy == "node" else "edges"))
            results[method] = (res.value, t, None)
        elif method == "qap":
            res, t = _timed(lambda: qap_ged(g1, g2, model, **qap_opts))
            results[method] = (res.value, t, res.stats["iterations"])
        else:
            raise ValueError(f"unknown method {method!r}")
    records = []
    for method in methods:
        d, t, iters = results[method]
        e = hit = None
        if exact is not None:
            e = d - exact
            hit = abs(e) <= HIT_TOL
        records.append(BenchRecord(pid, method, d, e, t if record_time else 0.0, iters, hit))
    return records


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    return f"{x:.12g}"


def records_to_rows(records: Sequence[BenchRecord]) -> list[dict[str, str]]:
    return [{"pair": r.pair, "method": r.method, "d": _fmt(r.d), "e": _fmt(r.e),
             "t": f"{r.t:.6f}", "iters": _fmt(r.iters), "exact_hit": _fmt(r.exact_hit)}
            for r in records]


def summarize(rows: Sequence[dict[str, str]]) -> dict[str, dict]:
    """Per-method averages computed from the CSV row strings."""
    by_method: dict[str, list[dict[str, str]]] = {}
    for row in rows:
        by_method.setdefault(row["method"], []).append(row)
    summary = {}
    for method, group in by_method.items():
        d = [float(r["d"]) for r in group]
        e = [float(r["e"]) for r in group if r["e"] != ""]
        t = [float(r["t"]) for r in group]
        hits = [r["exact_hit"] == "1" for r in group if r["exact_hit"] != ""]
        summary[method] = {
            "pairs": len(group),
            "d": sum(d) / len(d),
            "e": sum(e) / len(e) if e else None,
            "t": sum(t) / len(t),
            "exact_rate": sum(hits) / len(hits) if hits else None,
        }
    return summary


def format_summary(summary: dict[str, dict]) -> str:
    lines = [f"{'method':<16} {'pairs':>5} {'d':>10} {'e':>10} {'t':>10} {'exact%':>7}"]
    for method, s in summary.items():
        e = "" if s["e"] is None else f"{s['e']:.4f}"
        rate = "" if s["exact_rate"] is None else f"{100 * s['exact_rate']:.1f}"
        lines.append(f"{method:<16} {s['pairs']:>5} {s['d']:>10.4f} {e:>10} {s['t']:>10.6f} {rate:>7}")
    return "\n".join(lines)


def run_benchmark(pairs, methods: Sequence[str] = METHODS, model: CostModel | None = None,
                  out=None, qap_opts: dict | None = None, budget: int = DEFAULT_BUDGET,
                  jobs: int = 1, record_time: bool = True):
    """Run every method on every pair and write one CSV row per (pair, method).

    ``pairs`` is a dataset directory or a sequence of ``(pair_id, g1, g2)``.
    ``out`` is a path or text stream (``None``: no file).  Returns
    ``(records, summary, errors)``; malformed files end up in ``errors``
    instead of aborting the run.
    """
    model = model or ConstantCostModel()
    qap_opts = dict(qap_opts or {})
    for method in methods:
        if method not in METHODS:
            raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    errors: list[str] = []
    if isinstance(pairs, (str, os.PathLike)):
        pairs, errors = load_dataset(pairs)
        for msg in errors:
            log.warning("skipping %s", msg)
    jobs_list = [(p, tuple(methods), model, qap_opts, budget, record_time) for p in pairs]
    if jobs > 1 and len(jobs_list) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_pair, jobs_list))
    else:
        chunks = [_run_pair(j) for j in jobs_list]
    records = sorted((r for chunk in chunks for r in chunk),
                     key=lambda r: (r.pair, methods.index(r.method)))
    rows = records_to_rows(records)
    if out is not None:
        if isinstance(out, io.TextIOBase):
            _write_csv(rows, out)
        else:
            with open(out, "w", newline="", encoding="utf-8") as fh:
                _write_csv(rows, fh)
    return records, summarize(rows), errors


def _write_csv(rows, fh) -> None:
    writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
