"""Block vectors on Z = X^{A_0} x ... x X^{A_{L-1}} and the fixed-point machinery.

The Douglas-Rachford resolvent S is evaluated block by block through the
primal formulas: split zeta = lambda + rho * z (mean-zero duals plus
per-component constants), run one local prox per agent, and return
lambda_l(v) + rho * x(v). Conjugates and dual operators are never formed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .activation import ActivationProcess, draw_activations, make_rng
from .errors import RandProxError
from .objectives import CostFunction
from .topology import ComponentCover


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, init=False)
class BlockVector:
    """Tuple of per-component arrays; block ``l`` has shape ``(|A_l|, d)``."""

    blocks: tuple

    def __init__(self, blocks):
        bl = tuple(b if isinstance(b, np.ndarray) and not b.flags.writeable else _frozen(b) for b in blocks)
        for b in bl:
            if b.ndim != 2:
                raise RandProxError("SHAPE_MISMATCH", f"block must be 2-d, got shape {b.shape}")
        object.__setattr__(self, "blocks", bl)

    @classmethod
    def zeros(cls, cover: ComponentCover, dim: int) -> "BlockVector":
        return cls([np.zeros((n, dim)) for n in cover.sizes])

    @classmethod
    def random(cls, cover: ComponentCover, dim: int, rng, scale=1.0) -> "BlockVector":
        return cls([scale * rng.standard_normal((n, dim)) for n in cover.sizes])

    @classmethod
    def from_flat(cls, flat, cover: ComponentCover, dim: int) -> "BlockVector":
        flat = np.asarray(flat, dtype=float)
        out, i = [], 0
        for n in cover.sizes:
            out.append(flat[i : i + n * dim].reshape(n, dim))
            i += n * dim
        if i != flat.size:
            raise RandProxError("SHAPE_MISMATCH", "flat vector has the wrong length")
        return cls(out)

    @property
    def L(self) -> int:
        return len(self.blocks)

    @property
    def dim(self) -> int:
        return self.blocks[0].shape[1]

    def flat(self) -> np.ndarray:
        return np.concatenate([b.ravel() for b in self.blocks])

    def replace_block(self, ell: int, block) -> "BlockVector":
        blocks = list(self.blocks)
        blocks[ell] = block
        return BlockVector(blocks)

    def dot(self, other: "BlockVector") -> float:
        return float(sum(np.vdot(a, b) for a, b in zip(self.blocks, other.blocks)))

    def norm2(self) -> float:
        return self.dot(self)

    def weighted_dot(self, other: "BlockVector", p) -> float:
        """Inner product sum_l p_l^{-1} <zeta_l, eta_l> (a convergence diagnostic)."""
        return float(sum(np.vdot(a, b) / pl for a, b, pl in zip(self.blocks, other.blocks, p)))

    def __add__(self, other):
        return BlockVector([a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other):
        return BlockVector([a - b for a, b in zip(self.blocks, other.blocks)])

    def __mul__(self, s):
        return BlockVector([s * a for a in self.blocks])

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, BlockVector)
            and self.L == other.L
            and all(np.array_equal(a, b) for a, b in zip(self.blocks, other.blocks))
        )

    def __hash__(self):
        return hash(tuple(b.tobytes() for b in self.blocks))


@dataclass(frozen=True)
class DualPair:
    """zeta = lambda + rho * z with mean-zero dual blocks and constant z blocks."""

    lam: BlockVector
    zbar: np.ndarray  # shape (L, d)

    def recompose(self, rho) -> BlockVector:
        return BlockVector([lb + rho * zb for lb, zb in zip(self.lam.blocks, self.zbar)])


def block_mean(block: np.ndarray) -> np.ndarray:
    # numpy reduces contiguous rows pairwise
    return np.ascontiguousarray(block.T).sum(axis=1) / block.shape[0]


def check_shape(zeta: BlockVector, cover: ComponentCover):
    if zeta.L != cover.L or any(b.shape[0] != n for b, n in zip(zeta.blocks, cover.sizes)):
        raise RandProxError("SHAPE_MISMATCH", "block vector does not match the cover")


def _check_rho(rho):
    if not rho > 0:
        raise RandProxError("NONPOSITIVE_RHO", f"rho must be positive, got {rho}")


def decompose(zeta: BlockVector, rho, cover: ComponentCover) -> DualPair:
    """Split ``zeta`` into mean-zero duals and per-component constants.

    ``lam`` is also the resolvent of rho*U at ``zeta`` (projection onto the
    mean-zero subspace of each block).
    """
    _check_rho(rho)
    check_shape(zeta, cover)
    means = [block_mean(b) for b in zeta.blocks]
    lam = BlockVector([b - m for b, m in zip(zeta.blocks, means)])
    return DualPair(lam, np.array(means) / rho)


def local_primal(v_idx, lam_blocks, zbar, rho, cover: ComponentCover, costs):
    """x(v) = prox_{f_v, rho|s(v)|}(mean over m in s(v) of zbar_m - lambda_m(v)/rho)."""
    entries = cover.incidence[v_idx]
    acc = zbar[entries[0][0]] - lam_blocks[entries[0][0]][entries[0][1]] / rho
    for m, slot in entries[1:]:
        acc = acc + (zbar[m] - lam_blocks[m][slot] / rho)
    s = len(entries)
    return costs[v_idx].prox(rho * s, acc / s)


def dr_block_apply(ell: int, zeta: BlockVector, rho, cover: ComponentCover, costs) -> np.ndarray:
    """Block ``ell`` of the Douglas-Rachford resolvent at ``zeta``."""
    if not 0 <= ell < cover.L:
        raise RandProxError("INDEX_OUT_OF_RANGE", f"component {ell} not in [0, {cover.L})")
    pair = decompose(zeta, rho, cover)
    lam = pair.lam.blocks
    members = cover.member_indices[ell]
    x = np.array([local_primal(vi, lam, pair.zbar, rho, cover, costs) for vi in members])
    return lam[ell] + rho * x


class FixedPointOperator:
    """Operator on block vectors; subclasses override ``apply_block`` (and ``apply`` if cheaper)."""

    def apply_block(self, ell: int, zeta: BlockVector) -> np.ndarray:
        return self.apply(zeta).blocks[ell]

    def apply(self, zeta: BlockVector) -> BlockVector:
        return BlockVector([self.apply_block(ell, zeta) for ell in range(zeta.L)])

    def __call__(self, zeta):
        return self.apply(zeta)


class IdentityOperator(FixedPointOperator):
    def apply(self, zeta):
        return zeta

    def apply_block(self, ell, zeta):
        return zeta.blocks[ell]


class FunctionOperator(FixedPointOperator):
    """Wraps a callable ``BlockVector -> BlockVector``."""

    def __init__(self, fn: Callable[[BlockVector], BlockVector]):
        self.fn = fn

    def apply(self, zeta):
        return self.fn(zeta)


class DouglasRachfordOperator(FixedPointOperator):
    """Resolvent S of the Douglas-Rachford operator for a consensus problem."""

    def __init__(self, cover: ComponentCover, costs: Sequence[CostFunction], rho: float):
        _check_rho(rho)
        if len(costs) != len(cover.vertices):
            raise RandProxError("SHAPE_MISMATCH", "one cost per vertex is required")
        self.cover = cover
        self.costs = list(costs)
        self.rho = float(rho)

    def apply_block(self, ell, zeta):
        return dr_block_apply(ell, zeta, self.rho, self.cover, self.costs)

    def primal(self, zeta: BlockVector) -> np.ndarray:
        """The agents' x(v) at ``zeta``, shape ``(|V|, d)``."""
        pair = decompose(zeta, self.rho, self.cover)
        return np.array(
            [
                local_primal(vi, pair.lam.blocks, pair.zbar, self.rho, self.cover, self.costs)
                for vi in range(len(self.cover.vertices))
            ]
        )

    def apply(self, zeta):
        rho, cover = self.rho, self.cover
        pair = decompose(zeta, rho, cover)
        x = self.primal(zeta)
        return BlockVector([lb + rho * x[idx] for lb, idx in zip(pair.lam.blocks, cover.member_indices)])


def gs_hat_apply(S: FixedPointOperator, ell: int, zeta: BlockVector) -> BlockVector:
    """Replace block ``ell`` of ``zeta`` by the same block of S(zeta)."""
    if not 0 <= ell < zeta.L:
        raise RandProxError("INDEX_OUT_OF_RANGE", f"component {ell} not in [0, {zeta.L})")
    return zeta.replace_block(ell, S.apply_block(ell, zeta))


def proximal_point_iterate(S: FixedPointOperator, zeta0: BlockVector, k: int) -> BlockVector:
    zeta = zeta0
    for _ in range(k):
        zeta = S.apply(zeta)
    return zeta


def random_gs_iterate(
    S: FixedPointOperator, zeta0: BlockVector, activation: ActivationProcess, k: int, seed: int
) -> list[BlockVector]:
    """Randomized Gauss-Seidel trajectory ``[zeta^0, ..., zeta^k]``."""
    if activation.L != zeta0.L:
        raise RandProxError("SHAPE_MISMATCH", "activation law and block vector disagree on L")
    picks = draw_activations(activation, make_rng(seed), k)
    traj = [zeta0]
    zeta = zeta0
    for ell in picks:
        zeta = gs_hat_apply(S, int(ell), zeta)
        traj.append(zeta)
    return traj
