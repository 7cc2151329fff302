import math
from fractions import Fraction

import numpy as np
import pytest

from randprox.activation import (
    ActivationProcess,
    draw_activation,
    draw_activations,
    make_rng,
    node_wakeup_law,
)
from randprox.errors import RandProxError


def wakeup_oracle(g, q):
    """P[{v,w}] by enumerating (waking node, chosen neighbour) outcomes exactly."""
    law = {e: Fraction(0) for e in g.edges}
    for v, qv in zip(g.vertices, q):
        nbrs = sorted(g.neighbors[v], key=g.index.__getitem__)
        for w in nbrs:
            e = (v, w) if g.index[v] < g.index[w] else (w, v)
            law[e] += Fraction(qv) / len(nbrs)
    return [law[e] for e in g.edges]


def test_node_wakeup_g5_uniform(g5):
    a = node_wakeup_law(g5)
    p = dict(zip(g5.edges, a.law))
    assert p[(3, 4)] == 1 / 6
    assert p[(1, 2)] == 3 / 10
    assert abs(math.fsum(a.law) - 1.0) <= 1e-15
    assert list(a.law) == [float(x) for x in wakeup_oracle(g5, [Fraction(1, 5)] * 5)]


def test_node_wakeup_heterogeneous(g5):
    q = [0.4, 0.15, 0.15, 0.15, 0.15]
    a = node_wakeup_law(g5, q)
    np.testing.assert_allclose(a.law, [float(x) for x in wakeup_oracle(g5, q)], rtol=1e-15)
    assert abs(math.fsum(a.law) - 1) <= 1e-12


@pytest.mark.parametrize("q", [[0.5, 0.5, 0, 0, 0], [0.3] * 5, [0.2] * 4])
def test_node_wakeup_invalid_q(g5, q):
    with pytest.raises(RandProxError) as exc:
        node_wakeup_law(g5, q)
    assert exc.value.code == "INVALID_Q"


def test_draw_degenerate_and_invalid():
    rng = make_rng(0)
    a = ActivationProcess([1.0])
    assert all(draw_activation(a, rng) == 0 for _ in range(100))
    with pytest.raises(RandProxError) as exc:
        ActivationProcess([1.0, 0.0])
    assert exc.value.code == "INVALID_DISTRIBUTION"


def test_draw_frequencies():
    a = ActivationProcess([0.5, 0.5])
    draws = draw_activations(a, make_rng(7), 100_000)
    assert abs(np.mean(draws == 0) - 0.5) <= 0.01


def test_batch_and_single_draws_agree(g5):
    a = node_wakeup_law(g5)
    r1, r2 = make_rng(99), make_rng(99)
    batch = draw_activations(a, r1, 500)
    single = [draw_activation(a, r2) for _ in range(500)]
    assert batch.tolist() == single


def test_draws_are_deterministic():
    a = ActivationProcess.uniform(7)
    assert draw_activations(a, make_rng(3), 50).tolist() == draw_activations(a, make_rng(3), 50).tolist()
    assert draw_activations(a, make_rng(3), 50).tolist() != draw_activations(a, make_rng(4), 50).tolist()
