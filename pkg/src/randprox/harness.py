"""Seeded experiment execution and trace recording."""

from __future__ import annotations

import csv
import io
import os
import tempfile
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import Iterable, Union

import numpy as np

from .activation import (
    RNG_ALGORITHM,
    ActivationProcess,
    draw_activation,
    draw_activations,
    make_rng,
    node_wakeup_law,
)
from .admm import async_admm_step, consensus_disagreement, sync_admm_step
from .baselines import DgdState, dgd_gossip_step
from .config import ExperimentConfig, Problem, resolve
from .errors import NumericalError

__all__ = [
    "ActivationProcess",
    "MetricsRecord",
    "TRACE_COLUMNS",
    "draw_activation",
    "draw_activations",
    "node_wakeup_law",
    "read_trace_csv",
    "run_experiment",
    "squared_error",
    "trace_to_csv",
    "write_trace_csv",
]

TRACE_COLUMNS = ("k", "primal_updates", "squared_error", "disagreement", "algorithm", "seed")


@dataclass(frozen=True)
class MetricsRecord:
    k: int
    primal_updates: int
    squared_error: float
    disagreement: float
    algorithm: str
    seed: int


def squared_error(x, xstar) -> float:
    """sum_v ||x(v) - x*||^2 for primal estimates stacked as rows of ``x``."""
    x = np.asarray(x, dtype=float)
    x = x.reshape(x.shape[0], -1)
    r = x - np.asarray(xstar, dtype=float).reshape(1, -1)
    return float(np.einsum("ij,ij->", r, r))


def _record(x, k, updates, problem: Problem) -> MetricsRecord:
    if not np.all(np.isfinite(x)):
        raise NumericalError(f"non-finite iterate at step {k}")
    cfg = problem.config
    return MetricsRecord(
        int(k),
        int(updates),
        squared_error(x, problem.xstar),
        consensus_disagreement(x),
        cfg.algorithm,
        int(cfg.seed),
    )


def run_experiment(config: Union[ExperimentConfig, Problem]) -> list[MetricsRecord]:
    """Run the configured algorithm and return its metrics trace.

    A record is taken at step 0, every ``record_every`` steps, and at the last
    step. With ``tol`` set, the run stops at the first step whose squared
    error is at most ``tol``. Output depends only on (config, seed).
    """
    problem = config if isinstance(config, Problem) else resolve(config)
    cfg = problem.config
    g, cover, costs, rho = problem.graph, problem.cover, problem.costs, cfg.rho
    budget, tol = cfg.budget, cfg.tol

    if cfg.algorithm == "dgd-gossip":
        state = DgdState.initial(len(g.vertices), problem.dim, cfg.gamma0, problem.init_x)
        edges = g.edges

        def step(s, j):
            return dgd_gossip_step(s, edges[j], g, costs)

    elif cfg.algorithm == "async-admm":
        state = problem.init_state

        def step(s, j):
            return async_admm_step(s, j, rho, cover, costs)

    else:
        state = problem.init_state

        def step(s, j):
            return sync_admm_step(s, rho, cover, costs)

    picks = (
        draw_activations(problem.activation, make_rng(cfg.seed), budget)
        if problem.activation is not None
        else np.zeros(budget, dtype=np.intp)
    )

    records = [_record(state.x, 0, state.primal_updates, problem)]
    if tol is not None and records[0].squared_error <= tol:
        return records
    # divergence surfaces as NumericalError at the next record, not as warnings
    with np.errstate(over="ignore", invalid="ignore"):
        _advance(state, step, picks, problem, records)
    return records


def _advance(state, step, picks, problem, records):
    cfg = problem.config
    budget, every, tol = cfg.budget, cfg.record_every, cfg.tol
    for k in range(1, budget + 1):
        state = step(state, int(picks[k - 1]))
        done = tol is not None and squared_error(state.x, problem.xstar) <= tol
        if k % every == 0 or k == budget or done:
            records.append(_record(state.x, k, state.primal_updates, problem))
        if done:
            break


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def trace_header(problem_or_config) -> str:
    cfg = problem_or_config.config if isinstance(problem_or_config, Problem) else problem_or_config
    return f"# randprox trace; algorithm={cfg.algorithm}; seed={cfg.seed}; rng={RNG_ALGORITHM}"


def trace_to_csv(records: Iterable[MetricsRecord], comment: str | None = None) -> str:
    """Serialize records; floats use 17 significant digits."""
    buf = io.StringIO()
    if comment:
        buf.write(comment.rstrip("\n") + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for r in records:
        w.writerow([_fmt(v) for v in astuple(r)])
    return buf.getvalue()


def atomic_write(path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_trace_csv(records, path, comment: str | None = None):
    atomic_write(path, trace_to_csv(records, comment))


def read_trace_csv(text: str) -> list[MetricsRecord]:
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    reader = csv.DictReader(lines)
    if tuple(reader.fieldnames or ()) != TRACE_COLUMNS:
        raise ValueError(f"unexpected trace header {reader.fieldnames}")
    types = [f.type for f in fields(MetricsRecord)]
    conv = {"int": int, "float": float, "str": str}
    return [
        MetricsRecord(*(conv[t](row[c]) for t, c in zip(types, TRACE_COLUMNS))) for row in reader
    ]
