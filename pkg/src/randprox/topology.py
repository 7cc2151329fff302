"""Agent graphs and component covers.

Component indices are 0-based throughout the package. Components are kept
in a canonical order (members sorted by vertex position, components sorted
lexicographically) so that a given seed always activates the same blocks.
"""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import RandProxError

Vertex = Hashable

COVER_INCOMPLETE = "COVER_INCOMPLETE"
UNION_DISCONNECTED = "UNION_DISCONNECTED"


class DisconnectedComponentWarning(UserWarning):
    """A component A_l whose induced subgraph is itself disconnected."""


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with an ordered vertex set."""

    vertices: tuple
    edges: tuple = ()

    def __post_init__(self):
        verts = tuple(self.vertices)
        if len(set(verts)) != len(verts):
            raise RandProxError("INVALID_GRAPH", "duplicate vertices")
        pos = {v: i for i, v in enumerate(verts)}
        canon = set()
        for e in self.edges:
            e = tuple(e)
            if len(e) != 2:
                raise RandProxError("INVALID_GRAPH", f"edge {e!r} is not a pair")
            v, w = e
            if v not in pos or w not in pos:
                raise RandProxError("INVALID_GRAPH", f"edge {e!r} has an unknown endpoint")
            if v == w:
                raise RandProxError("INVALID_GRAPH", f"self-loop at {v!r}")
            canon.add((v, w) if pos[v] < pos[w] else (w, v))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(
            self, "edges", tuple(sorted(canon, key=lambda e: (pos[e[0]], pos[e[1]])))
        )

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def neighbors(self) -> dict:
        nbrs = {v: set() for v in self.vertices}
        for v, w in self.edges:
            nbrs[v].add(w)
            nbrs[w].add(v)
        return {v: frozenset(s) for v, s in nbrs.items()}

    def degree(self, v) -> int:
        return len(self.neighbors[v])

    def has_edge(self, v, w) -> bool:
        return v in self.neighbors and w in self.neighbors[v]

    def edge_index(self, v, w) -> int:
        """Position of the edge {v, w} in the canonical edge order."""
        if not self.has_edge(v, w):
            raise RandProxError("NOT_AN_EDGE", f"{{{v!r}, {w!r}}} is not an edge")
        return self._edge_pos[frozenset((v, w))]

    @cached_property
    def _edge_pos(self) -> dict:
        return {frozenset(e): i for i, e in enumerate(self.edges)}

    def induced_edges(self, subset: Iterable) -> list:
        s = set(subset)
        return [e for e in self.edges if e[0] in s and e[1] in s]

    def is_connected(self) -> bool:
        return len(self.vertices) > 0 and len(_reachable(self.vertices[0], self.edges)) == len(
            self.vertices
        )


@dataclass(frozen=True)
class ComponentCover:
    """Ordered list of non-empty vertex subsets A_0..A_{L-1}.

    ``vertices`` is the graph's vertex order; each component is stored as a
    tuple sorted by that order. Build instances with :func:`make_cover`,
    :func:`edge_cover` or :func:`full_cover` to get the canonical ordering.
    """

    vertices: tuple
    components: tuple

    def __post_init__(self):
        pos = {v: i for i, v in enumerate(self.vertices)}
        comps = []
        for comp in self.components:
            comp = tuple(comp)
            if not comp:
                raise RandProxError("INVALID_COVER", "empty component")
            for v in comp:
                if v not in pos:
                    raise RandProxError("INVALID_COVER", f"unknown vertex {v!r} in component")
            if len(set(comp)) != len(comp):
                raise RandProxError("INVALID_COVER", f"repeated vertex in component {comp!r}")
            comps.append(comp)
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "components", tuple(comps))

    @property
    def L(self) -> int:
        return len(self.components)

    @cached_property
    def sigma(self) -> dict:
        return sigma_map(self)

    @cached_property
    def member_indices(self) -> tuple:
        """Per component, the vertex positions of its members as an int array."""
        pos = {v: i for i, v in enumerate(self.vertices)}
        return tuple(np.array([pos[v] for v in comp], dtype=np.intp) for comp in self.components)

    @cached_property
    def incidence(self) -> tuple:
        """Per vertex position, the tuple of (component, slot-in-component) pairs."""
        inc = [[] for _ in self.vertices]
        for ell, members in enumerate(self.member_indices):
            for slot, vi in enumerate(members):
                inc[vi].append((ell, slot))
        return tuple(tuple(x) for x in inc)

    @cached_property
    def sizes(self) -> tuple:
        return tuple(len(c) for c in self.components)


@dataclass(frozen=True)
class CoverVerdict:
    ok: bool
    code: str | None = None
    witness: tuple = ()
    # components whose induced subgraph is disconnected (advisory only)
    disconnected_components: tuple = field(default=())

    def __str__(self):
        if self.ok:
            return "ok"
        if self.code == COVER_INCOMPLETE:
            return f"{COVER_INCOMPLETE}: vertex {self.witness[0]}"
        return f"{UNION_DISCONNECTED}: vertices {self.witness[0]} and {self.witness[1]}"


def canonical_order(vertices: Sequence, sets: Sequence[Iterable]) -> tuple[list, list]:
    """Sort members and components canonically.

    Returns ``(components, perm)`` where ``components[i]`` is ``sets[perm[i]]``
    with its members sorted.
    """
    pos = {v: i for i, v in enumerate(vertices)}
    sorted_sets = []
    for s in sets:
        s = list(s)
        for v in s:
            if v not in pos:
                raise RandProxError("INVALID_COVER", f"unknown vertex {v!r} in component")
        sorted_sets.append(tuple(sorted(s, key=pos.__getitem__)))
    keys = [tuple(pos[v] for v in s) for s in sorted_sets]
    perm = sorted(range(len(sets)), key=lambda i: keys[i])
    return [sorted_sets[i] for i in perm], perm


def make_cover(g: Graph, sets: Sequence[Iterable]) -> ComponentCover:
    comps, _ = canonical_order(g.vertices, sets)
    return ComponentCover(g.vertices, tuple(comps))


def edge_cover(g: Graph) -> ComponentCover:
    """One component per edge, in the graph's canonical edge order."""
    if not g.edges:
        raise RandProxError("EMPTY_GRAPH", "edge cover needs at least one edge")
    return make_cover(g, g.edges)


def full_cover(g: Graph) -> ComponentCover:
    """The single component A_0 = V."""
    return ComponentCover(g.vertices, (g.vertices,))


def sigma_map(c: ComponentCover) -> dict:
    """Map each vertex to the frozenset of component indices containing it."""
    out = {v: set() for v in c.vertices}
    for ell, comp in enumerate(c.components):
        for v in comp:
            out[v].add(ell)
    return {v: frozenset(s) for v, s in out.items()}


def _reachable(start, edges) -> set:
    adj = {}
    for v, w in edges:
        adj.setdefault(v, []).append(w)
        adj.setdefault(w, []).append(v)
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in adj.get(v, ()):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def validate_cover(g: Graph, c: ComponentCover, warn: bool = True) -> CoverVerdict:
    """Check that the components cover V and that the union of G(A_l) is connected.

    On failure the verdict carries a witness: the first uncovered vertex, or
    an edge of ``g`` whose endpoints fall in different connected pieces of
    the union graph (an arbitrary cross pair if ``g`` itself is disconnected).
    Components with a disconnected induced subgraph are reported and warned
    about but do not fail validation.
    """
    covered = set()
    for comp in c.components:
        covered.update(comp)
    for v in g.vertices:
        if v not in covered:
            return CoverVerdict(False, COVER_INCOMPLETE, (v,))

    uf = _UnionFind(g.vertices)
    split = []
    for ell, comp in enumerate(c.components):
        induced = g.induced_edges(comp)
        for v, w in induced:
            uf.union(v, w)
        if len(comp) > 1 and len(_reachable(comp[0], induced) & set(comp)) < len(comp):
            split.append(ell)

    roots = {uf.find(v) for v in g.vertices}
    if len(roots) > 1:
        for v, w in g.edges:
            if uf.find(v) != uf.find(w):
                return CoverVerdict(False, UNION_DISCONNECTED, (v, w), tuple(split))
        v0 = g.vertices[0]
        other = next(w for w in g.vertices if uf.find(w) != uf.find(v0))
        return CoverVerdict(False, UNION_DISCONNECTED, (v0, other), tuple(split))

    if split and warn:
        warnings.warn(
            f"components {split} induce disconnected subgraphs",
            DisconnectedComponentWarning,
            stacklevel=2,
        )
    return CoverVerdict(True, disconnected_components=tuple(split))
