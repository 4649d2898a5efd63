import random
from pathlib import Path

import pytest

from clearsearch.network import Network

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def minigrid_path() -> Path:
    return DATA_DIR / "minigrid.tntp"


def random_network(
    rng: random.Random,
    n_min: int = 3,
    n_max: int = 10,
    max_extra: int = 4,
    max_len: float = 10.0,
    max_edges: int | None = None,
    max_odd: int | None = None,
) -> Network:
    """Random connected network: spanning tree plus a few extra edges."""
    while True:
        n = rng.randint(n_min, n_max)
        edges = []
        for v in range(1, n):
            u = rng.randrange(v)
            edges.append((u, v, round(rng.uniform(1.0, max_len), 3)))
        for _ in range(rng.randint(0, max_extra)):
            u = rng.randrange(n)
            v = rng.randrange(n)
            if u != v and len(edges) < (max_edges or 10**9):
                edges.append((u, v, round(rng.uniform(1.0, max_len), 3)))
        if max_edges is not None and len(edges) > max_edges:
            continue
        net = Network(edges, root=0)
        if max_odd is not None:
            degree: dict = {}
            for e in net.edges:
                degree[e.u] = degree.get(e.u, 0) + 1
                degree[e.v] = degree.get(e.v, 0) + 1
            if sum(1 for d in degree.values() if d % 2 == 1) > max_odd:
                continue
        return net
