"""JSON experiment configuration: schema, loading and semantic validation."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .activation import ActivationProcess, node_wakeup_law
from .admm import AdmmState, is_edge_cover
from .errors import ConfigError, RandProxError
from .objectives import CostFunction, centralized_minimizer, cost_dimension, cost_from_record
from .topology import ComponentCover, Graph, canonical_order, full_cover, validate_cover

VertexId = Union[int, str]
ALGORITHMS = ("sync-admm", "async-admm", "dgd-gossip")


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class GraphSpec(_Model):
    vertices: list[VertexId]
    edges: list[tuple[VertexId, VertexId]] = []


class CoverSpec(_Model):
    mode: Literal["full", "edges", "custom"] = "edges"
    custom_sets: Optional[list[list[VertexId]]] = None


class CostSpec(_Model):
    type: Literal["quadratic", "zero", "abs"]
    params: dict[str, Any] = {}


class ActivationSpec(_Model):
    mode: Literal["uniform", "explicit", "node-wakeup"] = "node-wakeup"
    q: Optional[list[float]] = None
    p: Optional[list[float]] = None


class InitSpec(_Model):
    x: Optional[list[Union[float, list[float]]]] = None
    lam: Optional[list[list[Union[float, list[float]]]]] = Field(default=None, alias="lambda")
    zbar: Optional[list[Union[float, list[float]]]] = None


class ExperimentConfig(_Model):
    graph: GraphSpec
    cover: CoverSpec = CoverSpec()
    costs: list[CostSpec]
    algorithm: Literal["sync-admm", "async-admm", "dgd-gossip"] = "async-admm"
    rho: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    gamma0: float = Field(default=0.5, gt=0, allow_inf_nan=False)
    activation: ActivationSpec = ActivationSpec()
    budget: int = Field(default=5000, ge=0)
    record_every: int = Field(default=10, ge=1)
    seed: int = Field(default=1, ge=0, lt=2**64)
    tol: Optional[float] = Field(default=None, ge=0)
    init: Optional[InitSpec] = None


def default_config(**overrides) -> ExperimentConfig:
    """Five agents on the graph 1-2-3-4-5-3 with f_v(x) = (x - v)^2."""
    data = {
        "graph": {
            "vertices": [1, 2, 3, 4, 5],
            "edges": [[1, 2], [2, 3], [3, 4], [4, 5], [5, 3]],
        },
        "cover": {"mode": "edges"},
        "costs": [{"type": "quadratic", "params": {"a": 1.0, "c": v}} for v in range(1, 6)],
        "algorithm": "async-admm",
        "rho": 1.0,
        "gamma0": 0.5,
        "activation": {"mode": "node-wakeup"},
        "budget": 5000,
        "record_every": 10,
        "seed": 1,
    }
    data.update(overrides)
    return ExperimentConfig.model_validate(data)


def _format_loc(loc) -> str:
    return ".".join(str(p) for p in loc)


def parse_config(data: dict) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        err = exc.errors()[0]
        extra = f" (+{len(exc.errors()) - 1} more)" if len(exc.errors()) > 1 else ""
        raise ConfigError(_format_loc(err["loc"]), err["msg"] + extra) from None


def load_config(path) -> ExperimentConfig:
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError("", f"config file {path} not found") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("", f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("", "top-level JSON value must be an object")
    return parse_config(data)


@dataclass(frozen=True)
class Problem:
    """A validated experiment, ready to run."""

    config: ExperimentConfig
    graph: Graph
    cover: ComponentCover
    costs: tuple
    dim: int
    activation: Optional[ActivationProcess]
    xstar: np.ndarray
    init_x: np.ndarray
    init_state: Optional[AdmmState]


def _rethrow(path):
    def deco(fn):
        def wrapped(*args, **kwargs):
            try:
                return fn(*args, **kwargs)
            except ConfigError:
                raise
            except (RandProxError, KeyError, TypeError, ValueError) as exc:
                msg = exc.message if isinstance(exc, RandProxError) and exc.message else str(exc)
                code = f"{exc.code}: " if isinstance(exc, RandProxError) else ""
                raise ConfigError(path, code + msg) from None

        return wrapped

    return deco


def build_graph(cfg: ExperimentConfig) -> Graph:
    seen = set()
    for i, (v, w) in enumerate(cfg.graph.edges):
        key = frozenset((v, w))
        if key in seen:
            raise ConfigError(f"graph.edges.{i}", f"duplicate edge {[v, w]}")
        seen.add(key)
    return _rethrow("graph")(Graph)(tuple(cfg.graph.vertices), tuple(cfg.graph.edges))


def build_cover(cfg: ExperimentConfig, g: Graph) -> tuple[ComponentCover, list]:
    """Returns the canonical cover and the permutation from config order."""
    mode = cfg.cover.mode
    if mode != "custom" and cfg.cover.custom_sets is not None:
        raise ConfigError("cover.custom_sets", f"only allowed with mode 'custom', not {mode!r}")
    if mode == "full":
        return full_cover(g), [0]
    if mode == "edges":
        if not g.edges:
            raise ConfigError("cover.mode", "EMPTY_GRAPH: edge cover needs at least one edge")
        raw = [tuple(e) for e in cfg.graph.edges]
    else:
        if not cfg.cover.custom_sets:
            raise ConfigError("cover.custom_sets", "custom cover needs at least one set")
        raw = cfg.cover.custom_sets
        for i, s in enumerate(raw):
            if not s:
                raise ConfigError(f"cover.custom_sets.{i}", "component is empty")
            for j, v in enumerate(s):
                if v not in g.index:
                    raise ConfigError(f"cover.custom_sets.{i}.{j}", f"unknown vertex {v!r}")
    comps, perm = canonical_order(g.vertices, raw)
    cover = _rethrow("cover")(ComponentCover)(g.vertices, tuple(comps))
    return cover, perm


def _build_costs(cfg: ExperimentConfig, g: Graph) -> tuple[tuple, int]:
    if len(cfg.costs) != len(g.vertices):
        raise ConfigError("costs", f"expected {len(g.vertices)} cost records (one per vertex), got {len(cfg.costs)}")
    costs = []
    for i, rec in enumerate(cfg.costs):
        costs.append(_rethrow(f"costs.{i}.params")(cost_from_record)(rec.type, rec.params))
    dim = _rethrow("costs")(cost_dimension)(costs)
    return tuple(costs), dim


def _build_activation(cfg: ExperimentConfig, g: Graph, cover: ComponentCover, perm) -> Optional[ActivationProcess]:
    algo = cfg.algorithm
    act = cfg.activation
    if algo == "sync-admm":
        return None
    # DGD gossips over graph edges; async ADMM activates cover components.
    if algo == "dgd-gossip":
        if not g.edges:
            raise ConfigError("graph.edges", "dgd-gossip needs at least one edge")
        n_items = len(g.edges)
        order = [g.edge_index(v, w) for v, w in cfg.graph.edges]
        # order[i]: canonical position of the i-th config edge
        perm_items = sorted(range(n_items), key=lambda i: order[i])
    else:
        n_items = cover.L
        perm_items = perm
    if act.mode == "uniform":
        if act.p is not None or act.q is not None:
            raise ConfigError("activation", "uniform mode takes neither p nor q")
        return ActivationProcess.uniform(n_items)
    if act.mode == "explicit":
        if act.p is None:
            raise ConfigError("activation.p", "explicit mode needs a probability vector p")
        if len(act.p) != n_items:
            raise ConfigError("activation.p", f"expected {n_items} probabilities, got {len(act.p)}")
        law = [act.p[i] for i in perm_items]
        return _rethrow("activation.p")(ActivationProcess)(law, source="explicit")
    # node-wakeup
    if algo == "async-admm":
        if not is_edge_cover(g, cover):
            raise ConfigError("activation.mode", "node-wakeup activation requires the edge cover")
    if act.p is not None:
        raise ConfigError("activation.p", "node-wakeup mode takes q, not p")
    if act.q is not None and len(act.q) != len(g.vertices):
        raise ConfigError("activation.q", f"expected {len(g.vertices)} wake-up probabilities, got {len(act.q)}")
    return _rethrow("activation.q")(node_wakeup_law)(g, act.q)


def _points(values, n, dim, path) -> np.ndarray:
    if len(values) != n:
        raise ConfigError(path, f"expected {n} entries, got {len(values)}")
    out = np.empty((n, dim))
    for i, val in enumerate(values):
        arr = np.atleast_1d(np.asarray(val, dtype=float))
        if arr.shape[0] == 1:
            arr = np.full(dim, arr[0])
        if arr.shape != (dim,):
            raise ConfigError(f"{path}.{i}", f"expected a point of dimension {dim}")
        if not np.all(np.isfinite(arr)):
            raise ConfigError(f"{path}.{i}", "non-finite value")
        out[i] = arr
    return out


def _build_init(cfg: ExperimentConfig, g: Graph, cover: ComponentCover, perm, dim):
    n = len(g.vertices)
    init = cfg.init or InitSpec()
    x = np.zeros((n, dim)) if init.x is None else _points(init.x, n, dim, "init.x")
    if cfg.algorithm == "dgd-gossip":
        if init.lam is not None or init.zbar is not None:
            raise ConfigError("init", "dgd-gossip only accepts an initial x")
        return x, None
    zbar = None
    if init.zbar is not None:
        raw = _points(init.zbar, cover.L, dim, "init.zbar")
        zbar = raw[perm]
    lam = None
    if init.lam is not None:
        if len(init.lam) != cover.L:
            raise ConfigError("init.lambda", f"expected {cover.L} blocks, got {len(init.lam)}")
        raw_sets = (
            [tuple(e) for e in cfg.graph.edges]
            if cfg.cover.mode == "edges"
            else (cfg.cover.custom_sets if cfg.cover.mode == "custom" else [g.vertices])
        )
        blocks = []
        for ell, src in enumerate(perm):
            given = _points(init.lam[src], len(raw_sets[src]), dim, f"init.lambda.{src}")
            # reorder rows to the canonical member order of the component
            row = {v: given[i] for i, v in enumerate(raw_sets[src])}
            block = np.array([row[v] for v in cover.components[ell]])
            if np.max(np.abs(block.sum(axis=0))) > 1e-10 * max(1.0, np.abs(block).max()):
                raise ConfigError(f"init.lambda.{src}", "dual block must sum to zero")
            blocks.append(block)
        lam = blocks
    return x, AdmmState.initial(cover, dim, x=x, lam=lam, zbar=zbar)


def resolve(cfg: ExperimentConfig) -> Problem:
    """Semantic validation; raises :class:`ConfigError` with a field path."""
    g = build_graph(cfg)
    if not g.is_connected():
        raise ConfigError("graph", "graph must be connected")
    cover, perm = build_cover(cfg, g)
    verdict = validate_cover(g, cover)
    if not verdict.ok:
        raise ConfigError("cover", str(verdict))
    costs, dim = _build_costs(cfg, g)
    try:
        xstar = centralized_minimizer(costs)
    except RandProxError as exc:
        raise ConfigError("costs", str(exc)) from None
    if cfg.algorithm == "dgd-gossip":
        for i, f in enumerate(costs):
            if type(f).gradient is CostFunction.gradient:
                raise ConfigError(f"costs.{i}.type", "dgd-gossip needs differentiable costs")
    activation = _build_activation(cfg, g, cover, perm)
    init_x, init_state = _build_init(cfg, g, cover, perm, dim)
    if not math.isfinite(cfg.rho):
        raise ConfigError("rho", "must be finite")
    return Problem(cfg, g, cover, costs, dim, activation, xstar, init_x, init_state)
