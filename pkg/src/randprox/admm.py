"""Synchronous, asynchronous and pairwise-gossip ADMM on a component cover.

States are immutable values: every step returns a new :class:`AdmmState`
and shares the untouched arrays with its predecessor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RandProxError
from .operators import BlockVector, DualPair, _check_rho, check_shape, local_primal
from .topology import ComponentCover, Graph


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class AdmmState:
    """Agent primals ``x`` (|V|, d), duals ``lam`` and component constants ``zbar`` (L, d)."""

    x: np.ndarray
    lam: BlockVector
    zbar: np.ndarray
    k: int = 0
    primal_updates: int = 0

    @classmethod
    def zeros(cls, cover: ComponentCover, dim: int) -> "AdmmState":
        return cls.initial(cover, dim)

    @classmethod
    def initial(cls, cover: ComponentCover, dim: int, x=None, lam=None, zbar=None) -> "AdmmState":
        n = len(cover.vertices)
        x = np.zeros((n, dim)) if x is None else np.asarray(x, dtype=float).reshape(n, dim)
        zbar = np.zeros((cover.L, dim)) if zbar is None else np.asarray(zbar, dtype=float).reshape(cover.L, dim)
        if lam is None:
            lam = BlockVector.zeros(cover, dim)
        elif not isinstance(lam, BlockVector):
            lam = BlockVector([np.asarray(b, dtype=float).reshape(n_l, dim) for b, n_l in zip(lam, cover.sizes)])
        check_shape(lam, cover)
        return cls(_frozen(x), lam, _frozen(zbar))

    @property
    def dim(self) -> int:
        return self.x.shape[1]

    def x_of(self, cover: ComponentCover, v) -> np.ndarray:
        return self.x[cover.vertices.index(v)]

    def zeta(self, rho) -> BlockVector:
        """Lift to the Douglas-Rachford iterate zeta = lambda + rho * z."""
        return DualPair(self.lam, self.zbar).recompose(rho)


def _check_state(state: AdmmState, cover: ComponentCover, costs):
    check_shape(state.lam, cover)
    if state.x.shape[0] != len(cover.vertices) or state.zbar.shape[0] != cover.L:
        raise RandProxError("SHAPE_MISMATCH", "state does not match the cover")
    if len(costs) != len(cover.vertices):
        raise RandProxError("SHAPE_MISMATCH", "one cost per vertex is required")


def sync_admm_step(state: AdmmState, rho, cover: ComponentCover, costs) -> AdmmState:
    """One synchronous iteration: every agent, then every component."""
    _check_rho(rho)
    _check_state(state, cover, costs)
    lam_old = state.lam.blocks
    x = np.array(
        [local_primal(vi, lam_old, state.zbar, rho, cover, costs) for vi in range(len(cover.vertices))]
    )
    zbar = np.empty_like(state.zbar)
    lam = []
    for ell, idx in enumerate(cover.member_indices):
        xs = x[idx]
        zbar[ell] = xs.mean(axis=0)
        lam.append(lam_old[ell] + rho * (xs - zbar[ell]))
    return AdmmState(
        _frozen(x),
        BlockVector(lam),
        _frozen(zbar),
        state.k + 1,
        state.primal_updates + len(cover.vertices),
    )


def async_admm_step(state: AdmmState, ell: int, rho, cover: ComponentCover, costs) -> AdmmState:
    """Update only component ``ell``: its agents' primals, its constant and its duals."""
    if not 0 <= ell < cover.L:
        raise RandProxError("INDEX_OUT_OF_RANGE", f"component {ell} not in [0, {cover.L})")
    _check_rho(rho)
    _check_state(state, cover, costs)
    idx = cover.member_indices[ell]
    xs = np.array([local_primal(vi, state.lam.blocks, state.zbar, rho, cover, costs) for vi in idx])
    zb = xs.mean(axis=0)
    x = state.x.copy()
    x[idx] = xs
    zbar = state.zbar.copy()
    zbar[ell] = zb
    lam = state.lam.replace_block(ell, state.lam.blocks[ell] + rho * (xs - zb))
    return AdmmState(_frozen(x), lam, _frozen(zbar), state.k + 1, state.primal_updates + len(idx))


def is_edge_cover(g: Graph, cover: ComponentCover) -> bool:
    return cover.L == len(g.edges) and all(
        len(c) == 2 and tuple(c) == e for c, e in zip(cover.components, g.edges)
    )


def gossip_edge_step(state: AdmmState, edge, rho, g: Graph, cover: ComponentCover, costs) -> AdmmState:
    """Pairwise activation of edge {v, w} under the edge cover.

    Each endpoint runs its prox over its incident edges, the pair exchanges
    the results, then both set the edge constant to the pair average and
    move their duals by +/- rho * (x(v) - x(w)) / 2.
    """
    v, w = edge
    if not g.has_edge(v, w):
        raise RandProxError("NOT_AN_EDGE", f"{{{v!r}, {w!r}}} is not an edge")
    if not is_edge_cover(g, cover):
        raise RandProxError("INVALID_COVER", "gossip steps require the edge cover")
    _check_rho(rho)
    _check_state(state, cover, costs)
    ell = g.edge_index(v, w)
    a, b = cover.components[ell]
    ia, ib = cover.member_indices[ell]
    lam = state.lam.blocks
    xa = local_primal(ia, lam, state.zbar, rho, cover, costs)
    xb = local_primal(ib, lam, state.zbar, rho, cover, costs)
    x = state.x.copy()
    x[ia], x[ib] = xa, xb
    zbar = state.zbar.copy()
    zbar[ell] = (xa + xb) / 2
    new_block = np.array([lam[ell][0] + rho * (xa - xb) / 2, lam[ell][1] + rho * (xb - xa) / 2])
    return AdmmState(
        _frozen(x),
        state.lam.replace_block(ell, new_block),
        _frozen(zbar),
        state.k + 1,
        state.primal_updates + 2,
    )


def consensus_disagreement(state_or_x) -> float:
    """Largest pairwise distance between agents' primal estimates."""
    x = state_or_x.x if hasattr(state_or_x, "x") else np.asarray(state_or_x, dtype=float)
    x = x.reshape(x.shape[0], -1)
    if x.shape[0] < 2:
        return 0.0
    if x.shape[1] == 1:
        return float(x.max() - x.min())
    diff = x[:, None, :] - x[None, :, :]
    return float(np.sqrt((diff * diff).sum(axis=-1)).max())


def dual_block_sums(state: AdmmState) -> np.ndarray:
    """Per-component sums of the duals; zero for every reachable state."""
    return np.array([b.sum(axis=0) for b in state.lam.blocks])
