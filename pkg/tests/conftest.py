import pytest

from randprox.objectives import Quadratic
from randprox.topology import Graph, edge_cover, full_cover, make_cover, validate_cover

G5_EDGES = ((1, 2), (2, 3), (3, 4), (4, 5), (5, 3))

_criteria = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    num, title = marker.args
    failed = call.excinfo is not None
    prev = _criteria.get(num, (title, True))
    _criteria[num] = (title, prev[1] and not failed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        title, ok = _criteria[num]
        terminalreporter.write_line(f"criterion {num:2d} [{'PASS' if ok else 'FAIL'}] {title}")


@pytest.fixture
def g5():
    return Graph((1, 2, 3, 4, 5), G5_EDGES)


@pytest.fixture
def g5_costs():
    return [Quadratic(1.0, v) for v in range(1, 6)]


@pytest.fixture
def two_node():
    g = Graph((1, 2), ((1, 2),))
    return g, full_cover(g), [Quadratic(1.0, 1.0), Quadratic(1.0, 3.0)]


def random_connected_graph(rng, n_min=2, n_max=7):
    n = int(rng.integers(n_min, n_max + 1))
    verts = tuple(range(1, n + 1))
    edges = set()
    for v in range(2, n + 1):  # random spanning tree
        w = int(rng.integers(1, v))
        edges.add((w, v))
    for v in verts:
        for w in verts:
            if v < w and rng.random() < 0.3:
                edges.add((v, w))
    return Graph(verts, tuple(edges))


def random_cover(rng, g, kind=None):
    kind = kind or rng.choice(["edges", "full", "custom"])
    if kind == "edges":
        return edge_cover(g)
    if kind == "full":
        return full_cover(g)
    # random edges plus one random larger set, resampled until valid
    while True:
        sets = [list(e) for e in g.edges if rng.random() < 0.6]
        if len(g.vertices) > 2:
            k = int(rng.integers(2, len(g.vertices) + 1))
            sets.append([int(v) for v in rng.choice(g.vertices, size=k, replace=False)])
        if not sets:
            continue
        cover = make_cover(g, sets)
        if validate_cover(g, cover, warn=False).ok:
            return cover


def random_instance(rng, kind=None, dim=None):
    """Random connected graph, valid cover, random quadratic costs, rho."""
    g = random_connected_graph(rng)
    cover = random_cover(rng, g, kind)
    dim = dim or int(rng.integers(1, 3))
    costs = [Quadratic(float(rng.uniform(0.2, 3.0)), rng.normal(0, 2, dim)) for _ in g.vertices]
    rho = float(rng.uniform(0.3, 3.0))
    return g, cover, costs, rho, dim
