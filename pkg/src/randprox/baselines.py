"""Distributed gradient descent with random-gossip averaging."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import RandProxError
from .topology import Graph


@dataclass(frozen=True)
class DgdState:
    """``k`` counts completed activations; the next step uses gamma0 / sqrt(k + 1)."""

    x: np.ndarray
    k: int = 0
    gamma0: float = 0.5
    primal_updates: int = 0

    def __post_init__(self):
        if not self.gamma0 > 0:
            raise RandProxError("INVALID_STEPSIZE", f"gamma0 must be positive, got {self.gamma0}")

    @classmethod
    def initial(cls, n: int, dim: int, gamma0: float = 0.5, x=None) -> "DgdState":
        x = np.zeros((n, dim)) if x is None else np.array(x, dtype=float).reshape(n, dim)
        x.setflags(write=False)
        return cls(x, 0, float(gamma0), 0)

    def stepsize(self) -> float:
        return self.gamma0 / math.sqrt(self.k + 1)


def dgd_gossip_step(state: DgdState, edge, g: Graph, costs) -> DgdState:
    """Both endpoints take a gradient step, then replace their values by the pair average."""
    v, w = edge
    if not g.has_edge(v, w):
        raise RandProxError("NOT_AN_EDGE", f"{{{v!r}, {w!r}}} is not an edge")
    iv, iw = g.index[v], g.index[w]
    step = state.stepsize()
    yv = state.x[iv] - step * costs[iv].gradient(state.x[iv])
    yw = state.x[iw] - step * costs[iw].gradient(state.x[iw])
    avg = (yv + yw) / 2
    x = state.x.copy()
    x[iv] = avg
    x[iw] = avg
    x.setflags(write=False)
    return DgdState(x, state.k + 1, state.gamma0, state.primal_updates + 2)
