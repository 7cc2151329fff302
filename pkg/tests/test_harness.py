import numpy as np
import pytest

from randprox.config import default_config, resolve
from randprox.errors import NumericalError
from randprox.harness import (
    TRACE_COLUMNS,
    read_trace_csv,
    run_experiment,
    squared_error,
    trace_header,
    trace_to_csv,
)


def test_squared_error_examples():
    assert squared_error(np.full((3, 1), 3.0), [3.0]) == 0.0
    assert squared_error(np.zeros((2, 1)), [3.0]) == 18.0
    x = np.array([[1.0, 2.0], [0.5, -1.0]])
    xs = np.array([0.2, 0.1])
    assert squared_error(xs + 2 * (x - xs), xs) == pytest.approx(4 * squared_error(x, xs), rel=1e-14)


def test_sync_zero_budget_single_record():
    recs = run_experiment(default_config(algorithm="sync-admm", budget=0))
    assert len(recs) == 1
    assert recs[0].squared_error == 45.0
    assert (recs[0].k, recs[0].primal_updates) == (0, 0)


def test_default_async_converges():
    recs = run_experiment(default_config())
    assert recs[-1].k == 5000
    assert recs[-1].squared_error <= 1e-6


def test_record_schedule_and_counters():
    recs = run_experiment(default_config(budget=25, record_every=10))
    assert [r.k for r in recs] == [0, 10, 20, 25]
    assert [r.primal_updates for r in recs] == [0, 20, 40, 50]
    sync = run_experiment(default_config(algorithm="sync-admm", budget=3, record_every=1))
    assert [r.primal_updates for r in sync] == [0, 5, 10, 15]
    dgd = run_experiment(default_config(algorithm="dgd-gossip", budget=4, record_every=2))
    assert [r.primal_updates for r in dgd] == [0, 4, 8]


def test_tolerance_stops_early():
    recs = run_experiment(default_config(tol=1e-3, record_every=1000))
    assert recs[-1].squared_error <= 1e-3
    assert recs[-1].k < 5000
    assert all(r.squared_error > 1e-3 for r in recs[:-1])


def test_reproducible_traces():
    a = trace_to_csv(run_experiment(default_config(seed=3)))
    b = trace_to_csv(run_experiment(default_config(seed=3)))
    c = trace_to_csv(run_experiment(default_config(seed=4)))
    assert a == b and a != c


def test_csv_schema_roundtrip():
    cfg = default_config(budget=50)
    recs = run_experiment(cfg)
    text = trace_to_csv(recs, trace_header(cfg))
    lines = text.splitlines()
    assert lines[0].startswith("# ") and "PCG64" in lines[0]
    assert lines[1] == ",".join(TRACE_COLUMNS)
    assert read_trace_csv(text) == recs
    first = lines[2].split(",")
    assert first[2] == format(45.0, ".17g")


def test_heterogeneous_wakeup_converges():
    cfg = default_config(
        activation={"mode": "node-wakeup", "q": [0.4, 0.15, 0.15, 0.15, 0.15]}, budget=20_000, record_every=1000
    )
    last = run_experiment(cfg)[-1]
    assert last.squared_error <= 1e-5 and last.disagreement <= 1e-5


def test_nonfinite_run_raises():
    cfg = default_config(algorithm="dgd-gossip", gamma0=1e300, budget=50)
    with pytest.raises(NumericalError):
        run_experiment(resolve(cfg))
