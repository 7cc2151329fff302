"""Command-line front end: ``randprox {run,validate,compare}``.

Exit codes: 0 success, 1 invalid configuration, 2 numerical/runtime failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import statistics
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .config import ALGORITHMS, build_cover, build_graph, load_config, resolve
from .errors import ConfigError, RandProxError
from .harness import atomic_write, read_trace_csv, run_experiment, trace_header, trace_to_csv
from .plot import render_svg
from .topology import validate_cover

log = logging.getLogger("randprox")

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


def _thread_cap() -> int:
    raw = os.environ.get("RANDPROX_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            log.warning("ignoring non-integer RANDPROX_THREADS=%r", raw)
    return os.cpu_count() or 1


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    g = build_graph(cfg)
    cover, _ = build_cover(cfg, g)
    verdict = validate_cover(g, cover)
    if not verdict.ok:
        print(verdict)
        return EXIT_CONFIG
    resolve(cfg)
    if verdict.disconnected_components:
        print(f"warning: components {list(verdict.disconnected_components)} induce disconnected subgraphs")
    print("ok")
    return EXIT_OK


def _run_one(cfg):
    problem = resolve(cfg)
    records = run_experiment(problem)
    return trace_to_csv(records, trace_header(problem))


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = cfg.model_copy(update={"seed": args.seed})
    text = _run_one(cfg)
    out = Path(args.out)
    atomic_write(out / "trace.csv", text)
    if args.plot:
        atomic_write(out / "plot.svg", render_svg(text))
    print(out / "trace.csv")
    return EXIT_OK


def median_summary(traces: dict) -> list[tuple]:
    """Rows (algorithm, primal_updates, median squared error) over seeds.

    Only primal-update counts recorded by every seed of an algorithm appear.
    """
    rows = []
    for algo in sorted({a for a, _ in traces}):
        per_seed = [
            {r.primal_updates: r.squared_error for r in read_trace_csv(text)}
            for (a, _), text in sorted(traces.items())
            if a == algo
        ]
        common = set(per_seed[0]).intersection(*per_seed[1:])
        for pu in sorted(common):
            rows.append((algo, pu, statistics.median(s[pu] for s in per_seed)))
    return rows


def cmd_compare(args) -> int:
    cfg = load_config(args.config)
    algos = [a.strip() for a in args.algorithms.split(",") if a.strip()]
    for a in algos:
        if a not in ALGORITHMS:
            raise ConfigError("--algorithms", f"unknown algorithm {a!r}; choose from {', '.join(ALGORITHMS)}")
    if args.seeds < 1:
        raise ConfigError("--seeds", "must be at least 1")
    seeds = [cfg.seed + i for i in range(args.seeds)]
    jobs = [(a, s) for a in algos for s in seeds]
    configs = {(a, s): cfg.model_copy(update={"algorithm": a, "seed": s}) for a, s in jobs}
    # validate everything before spending time on runs
    for c in configs.values():
        resolve(c)

    out = Path(args.out)

    def job(key):
        text = _run_one(configs[key])
        atomic_write(out / f"{key[0]}_seed{key[1]}.csv", text)
        return key, text

    workers = min(len(jobs), _thread_cap())
    with ThreadPoolExecutor(max_workers=workers) as pool:
        traces = dict(pool.map(job, jobs))

    lines = ["algorithm,primal_updates,median_squared_error"]
    lines += [f"{a},{pu},{format(m, '.17g')}" for a, pu, m in median_summary(traces)]
    atomic_write(out / "summary.csv", "\n".join(lines) + "\n")
    if args.plot:
        atomic_write(out / "plot.svg", render_svg(*(traces[k] for k in sorted(traces))))
    print(out / "summary.csv")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="randprox", description="Randomized asynchronous ADMM experiments")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment and write trace.csv")
    run.add_argument("--config", required=True)
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--plot", action="store_true", help="also write plot.svg")
    run.add_argument("--seed", type=int, default=None, help="override the config seed")
    run.set_defaults(func=cmd_run)

    val = sub.add_parser("validate", help="check config schema and the cover assumptions")
    val.add_argument("--config", required=True)
    val.set_defaults(func=cmd_validate)

    cmp_ = sub.add_parser("compare", help="run several algorithms over several seeds")
    cmp_.add_argument("--config", required=True)
    cmp_.add_argument("--algorithms", required=True, help="comma-separated, e.g. async-admm,dgd-gossip")
    cmp_.add_argument("--seeds", type=int, required=True, help="number of seeds, starting at the config seed")
    cmp_.add_argument("--out", default="out")
    cmp_.add_argument("--plot", action="store_true")
    cmp_.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CONFIG
    except (RandProxError, FloatingPointError, OverflowError) as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
