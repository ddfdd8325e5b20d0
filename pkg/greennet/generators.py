"""
Seeded random networks and attachments for benchmarks, self-checks and tests.

A network is a uniform random spanning tree (random Pruefer sequence) plus independent
extra edges with probability extra_edge_prob; conductances are uniform in [0.5, 2].
"""
import logging
from typing import Optional

import networkx as nx
import numpy as np

from greennet.network import Edge, NetworkSpec, validate_network
from greennet.vertex_addition import Anchor, VertexAttachment

logger = logging.getLogger(__name__)

CONDUCTANCE_RANGE = (0.5, 2.0)
NEW_WEIGHT_RANGE = (0.2, 2.0)


def bench_rng(seed: int, n: int, m: int, trial: int) -> np.random.Generator:
    """Generator whose stream depends only on (seed, n, m, trial)"""
    return np.random.default_rng([seed, n, m, trial])


def random_tree(n: int, rng: np.random.Generator) -> nx.Graph:
    if n == 1:
        graph = nx.Graph()
        graph.add_node(0)
        return graph
    if n == 2:
        return nx.path_graph(2)
    sequence = rng.integers(0, n, size=n - 2).tolist()
    return nx.from_prufer_sequence(sequence)


def random_network(
    n: int,
    rng: np.random.Generator,
    extra_edge_prob: float = 0.3,
    lam: float = 0.0,
    random_weight: bool = False,
) -> NetworkSpec:
    graph = random_tree(n, rng)
    if n > 2 and extra_edge_prob > 0:
        rows, cols = np.triu_indices(n, k=1)
        extra = rng.random(rows.shape[0]) < extra_edge_prob
        graph.add_edges_from(zip(rows[extra].tolist(), cols[extra].tolist()))

    edges = sorted(tuple(sorted(e)) for e in graph.edges())
    conductances = rng.uniform(*CONDUCTANCE_RANGE, size=len(edges))
    weight = None
    if random_weight:
        raw = rng.uniform(0.5, 1.5, size=n)
        weight = tuple(float(w) for w in raw / np.linalg.norm(raw))

    spec = NetworkSpec(
        vertices=tuple(f"v{i}" for i in range(n)),
        edges=tuple(Edge(u=f"v{u}", v=f"v{v}", c=float(c)) for (u, v), c in zip(edges, conductances)),
        weight=weight,
        lam=lam,
    )
    logger.debug(f"Random network: n={n}, edges={len(edges)}, lambda={lam}")
    return validate_network(spec)


def random_attachment(spec: NetworkSpec, rng: np.random.Generator, m: Optional[int] = None, new_label: str = "x'") -> VertexAttachment:
    """m distinct anchors (random 1..n when m is None) and a random new weight value"""
    if m is None:
        m = int(rng.integers(1, spec.n + 1))
    chosen = rng.choice(spec.n, size=m, replace=False)
    conductances = rng.uniform(*CONDUCTANCE_RANGE, size=m)
    return VertexAttachment(
        new_vertex=new_label,
        new_weight_value=float(rng.uniform(*NEW_WEIGHT_RANGE)),
        anchors=tuple(Anchor(vertex=spec.vertices[int(i)], conductance=float(c)) for i, c in zip(chosen, conductances)),
    )


def random_sigmas(n: int, omega, rng: np.random.Generator, m: int, ell: int):
    """m generic members and ell members projected onto omega-perp"""
    omega = np.asarray(omega, dtype=np.float64)
    generic = [rng.normal(size=n) for _ in range(m)]
    orthogonal = []
    for _ in range(ell):
        v = rng.normal(size=n)
        orthogonal.append(v - (v @ omega) * omega)
    return generic + orthogonal
