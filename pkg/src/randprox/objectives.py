"""Private convex costs with closed-form proximal maps.

Points are 1-d float arrays of length ``d``. Every cost exposes
``value(x)``, ``prox(rho, u)`` and, where it exists, ``gradient(x)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import RandProxError


def as_point(x, dim: int | None = None) -> np.ndarray:
    p = np.atleast_1d(np.asarray(x, dtype=float))
    if p.ndim != 1:
        raise RandProxError("SHAPE_MISMATCH", f"point must be a vector, got shape {p.shape}")
    if dim is not None and p.shape[0] != dim:
        if p.shape[0] == 1:
            return np.full(dim, p[0])
        raise RandProxError("SHAPE_MISMATCH", f"expected dimension {dim}, got {p.shape[0]}")
    return p


def _check_rho(rho):
    if not rho > 0:
        raise RandProxError("NONPOSITIVE_RHO", f"rho must be positive, got {rho}")


class CostFunction:
    """Interface for a proper closed convex function on R^d."""

    dim: int | None = None

    def value(self, x) -> float:
        raise NotImplementedError

    def prox(self, rho, u) -> np.ndarray:
        raise NotImplementedError

    def gradient(self, x) -> np.ndarray:
        raise RandProxError("NONSMOOTH_AT_POINT", f"{type(self).__name__} has no gradient")

    def __call__(self, x):
        return self.value(x)


@dataclass(frozen=True)
class Zero(CostFunction):
    dim = None

    def value(self, x):
        return 0.0

    def prox(self, rho, u):
        _check_rho(rho)
        return np.array(as_point(u), dtype=float)

    def gradient(self, x):
        return np.zeros_like(as_point(x))


@dataclass(frozen=True, init=False)
class Quadratic(CostFunction):
    """f(y) = a * ||y - c||^2 with a scalar scale ``a >= 0``."""

    a: float
    c: np.ndarray

    def __init__(self, a, c):
        if not (math.isfinite(a) and a >= 0):
            raise RandProxError("INVALID_COST", f"quadratic scale must be >= 0, got {a}")
        c = as_point(c)
        c.setflags(write=False)
        object.__setattr__(self, "a", float(a))
        object.__setattr__(self, "c", c)

    @property
    def dim(self):
        return self.c.shape[0]

    def value(self, x):
        r = as_point(x) - self.c
        return self.a * float(r @ r)

    def gradient(self, x):
        return 2.0 * self.a * (as_point(x) - self.c)

    def prox(self, rho, u):
        _check_rho(rho)
        return (2.0 * self.a * self.c + rho * as_point(u)) / (2.0 * self.a + rho)

    def __eq__(self, other):
        return (
            isinstance(other, Quadratic)
            and self.a == other.a
            and np.array_equal(self.c, other.c)
        )

    def __hash__(self):
        return hash((self.a, self.c.tobytes()))


@dataclass(frozen=True, init=False)
class AbsoluteValue(CostFunction):
    """f(y) = ||y - c||_1; its prox is coordinatewise soft thresholding."""

    c: np.ndarray

    def __init__(self, c):
        c = as_point(c)
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    @property
    def dim(self):
        return self.c.shape[0]

    def value(self, x):
        return float(np.abs(as_point(x) - self.c).sum())

    def gradient(self, x):
        r = as_point(x) - self.c
        if np.any(r == 0):
            raise RandProxError("NONSMOOTH_AT_POINT", "|y - c| is not differentiable at y = c")
        return np.sign(r)

    def prox(self, rho, u):
        _check_rho(rho)
        r = as_point(u) - self.c
        return self.c + np.sign(r) * np.maximum(np.abs(r) - 1.0 / rho, 0.0)

    def __eq__(self, other):
        return isinstance(other, AbsoluteValue) and np.array_equal(self.c, other.c)

    def __hash__(self):
        return hash(self.c.tobytes())


def prox(f: CostFunction, rho, u) -> np.ndarray:
    return f.prox(rho, u)


def aggregate_value(fs: Sequence[CostFunction], x) -> float:
    """Sum of the agents' costs at a common point ``x``."""
    return math.fsum(f.value(x) for f in fs)


def cost_dimension(fs: Sequence[CostFunction], default: int = 1) -> int:
    dims = {f.dim for f in fs if f.dim is not None}
    if len(dims) > 1:
        raise RandProxError("SHAPE_MISMATCH", f"costs disagree on dimension: {sorted(dims)}")
    return dims.pop() if dims else default


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_section(fun, lo, hi, tol=1e-12, max_iter=500):
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = fun(d)
    return 0.5 * (a + b)


def _bracket(fs):
    anchors = [float(f.c[0]) for f in fs if isinstance(f, (Quadratic, AbsoluteValue))]
    if not anchors:
        return None
    return min(anchors) - 1.0, max(anchors) + 1.0


def centralized_minimizer(fs: Sequence[CostFunction], bracket=None) -> np.ndarray:
    """Minimizer of sum_v f_v over a single shared point.

    Quadratics (and Zero terms, as a = 0) use the weighted-mean closed form.
    Other 1-d mixes fall back to a grid scan refined by golden-section search
    on ``bracket`` (by default the hull of the cost centres, widened by 1).
    """
    if not fs:
        raise RandProxError("UNSUPPORTED_MIX", "no cost functions")
    if all(isinstance(f, (Quadratic, Zero)) for f in fs):
        quads = [f for f in fs if isinstance(f, Quadratic)]
        total = math.fsum(f.a for f in quads)
        if total > 0:
            dim = cost_dimension(fs)
            num = np.zeros(dim)
            for f in quads:
                num = num + f.a * f.c
            return num / total

    dim = cost_dimension(fs)
    if dim != 1:
        raise RandProxError("UNSUPPORTED_MIX", "no closed form and dimension is not 1")
    if bracket is None:
        bracket = _bracket(fs)
    if bracket is None:
        raise RandProxError("UNSUPPORTED_MIX", "no bracketing interval for the 1-d fallback")
    lo, hi = float(bracket[0]), float(bracket[1])

    def total_cost(t):
        return aggregate_value(fs, np.array([t]))

    grid = np.linspace(lo, hi, 201)
    vals = [total_cost(t) for t in grid]
    i = int(np.argmin(vals))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, len(grid) - 1)]
    return np.array([_golden_section(total_cost, a, b)])


def cost_from_record(kind: str, params: dict) -> CostFunction:
    """Build a cost from a ``{type, params}`` config record."""
    kind = kind.lower()
    if kind == "zero":
        return Zero()
    if kind == "quadratic":
        return Quadratic(params.get("a", 1.0), params["c"])
    if kind in ("abs", "absolute", "absolute_value", "absolutevalue"):
        return AbsoluteValue(params["c"])
    raise RandProxError("INVALID_COST", f"unknown cost type {kind!r}")
