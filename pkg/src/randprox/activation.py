"""I.i.d. component activation laws and seeded draws.

Randomness comes from numpy's PCG64 bit generator seeded through
``SeedSequence(seed)``. Draws use inverse-CDF sampling on one
``Generator.random()`` double each, so drawing ``n`` indices at once yields
exactly the same sequence as ``n`` single draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import RandProxError
from .topology import Graph

RNG_ALGORITHM = "numpy.random.PCG64(SeedSequence(seed))"
SUM_TOL = 1e-12


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def spawn_rngs(seed: int, n: int) -> list[np.random.Generator]:
    """Independent child streams of one seed, e.g. for a sweep."""
    return [
        np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(seed).spawn(n)
    ]


def check_distribution(p: Sequence[float]) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise RandProxError("INVALID_DISTRIBUTION", "law must be a non-empty vector")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise RandProxError("INVALID_DISTRIBUTION", "every probability must be > 0")
    if abs(math.fsum(arr) - 1.0) > SUM_TOL:
        raise RandProxError("INVALID_DISTRIBUTION", f"probabilities sum to {math.fsum(arr)!r}")
    return arr


@dataclass(frozen=True, init=False)
class ActivationProcess:
    """Law (p_0..p_{L-1}) of the activated component at each step."""

    law: np.ndarray
    source: str
    q: tuple | None

    def __init__(self, law, source="explicit", q=None):
        arr = check_distribution(law).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "law", arr)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "q", None if q is None else tuple(q))

    @property
    def L(self) -> int:
        return self.law.shape[0]

    @property
    def cdf(self) -> np.ndarray:
        return np.cumsum(self.law)

    @classmethod
    def uniform(cls, L: int) -> "ActivationProcess":
        if L < 1:
            raise RandProxError("INVALID_DISTRIBUTION", "need at least one component")
        return cls(np.full(L, 1.0 / L), source="uniform")

    def __eq__(self, other):
        return (
            isinstance(other, ActivationProcess)
            and np.array_equal(self.law, other.law)
            and self.source == other.source
        )

    def __hash__(self):
        return hash((self.law.tobytes(), self.source))


def node_wakeup_law(g: Graph, q: Sequence | None = None) -> ActivationProcess:
    """Edge law induced by a waking node picking a uniform neighbour.

    P[{v, w}] = q_v / |N_v| + q_w / |N_w|, over ``g.edges`` in canonical
    order. Arithmetic is exact (rationals) and rounded once per edge.
    ``q=None`` means uniform wake-up probabilities.
    """
    n = len(g.vertices)
    if not g.edges:
        raise RandProxError("EMPTY_GRAPH", "node wake-up needs at least one edge")
    if q is None:
        qf = [Fraction(1, n)] * n
    else:
        if len(q) != n:
            raise RandProxError("INVALID_Q", f"expected {n} wake-up probabilities, got {len(q)}")
        try:
            qf = [Fraction(x) for x in q]
        except (TypeError, ValueError) as exc:
            raise RandProxError("INVALID_Q", str(exc)) from None
        if any(x <= 0 for x in qf):
            raise RandProxError("INVALID_Q", "every wake-up probability must be > 0")
        if abs(float(sum(qf)) - 1.0) > SUM_TOL:
            raise RandProxError("INVALID_Q", f"wake-up probabilities sum to {float(sum(qf))!r}")
    for v in g.vertices:
        if g.degree(v) == 0:
            raise RandProxError("INVALID_Q", f"vertex {v!r} has no neighbour")
    qv = dict(zip(g.vertices, qf))
    law = [qv[v] / g.degree(v) + qv[w] / g.degree(w) for v, w in g.edges]
    return ActivationProcess(
        [float(x) for x in law], source="node-wakeup", q=tuple(float(x) for x in qf)
    )


def draw_activation(a: ActivationProcess, rng: np.random.Generator) -> int:
    """Draw one component index; advances ``rng`` by one double."""
    u = rng.random()
    return min(int(np.searchsorted(a.cdf, u, side="right")), a.L - 1)


def draw_activations(a: ActivationProcess, rng: np.random.Generator, n: int) -> np.ndarray:
    """Vectorised :func:`draw_activation`; same stream as ``n`` single draws."""
    u = rng.random(n)
    return np.minimum(np.searchsorted(a.cdf, u, side="right"), a.L - 1)
