"""
Weighted networks and their Laplacian / Schrodinger matrices.
"""
import logging
import math
from typing import Dict, Optional, Tuple

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict

from greennet.errors import NetworkValidationError, VertexLookupError
from greennet.funspace import FunctionOnV, KernelOnV, VertexId, Weight, as_weight, uniform_weight

logger = logging.getLogger(__name__)

Potential = FunctionOnV


class Edge(BaseModel):
    model_config = ConfigDict(frozen=True)

    u: str
    v: str
    c: float


class NetworkSpec(BaseModel):
    """
    Vertex ordering, conductance edge list, weight and eigenvalue lambda.
    weight=None means uniform 1/sqrt(n); validate_network fills it in.
    """
    model_config = ConfigDict(frozen=True)

    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...] = ()
    weight: Optional[Tuple[float, ...]] = None
    lam: float = 0.0

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def omega(self) -> Weight:
        if self.weight is None:
            return uniform_weight(self.n)
        return np.asarray(self.weight, dtype=np.float64)

    def index_map(self) -> Dict[str, int]:
        return {label: i for i, label in enumerate(self.vertices)}

    def vertex(self, label) -> VertexId:
        label = str(label)
        try:
            return VertexId(label=label, index=self.vertices.index(label))
        except ValueError:
            raise VertexLookupError(f"unknown vertex {label!r}")


def network_graph(spec: NetworkSpec) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(spec.vertices)
    graph.add_weighted_edges_from(((e.u, e.v, e.c) for e in spec.edges), weight="c")
    return graph


def validate_network(spec: NetworkSpec, normalize: bool = False) -> NetworkSpec:
    """
    Check every network invariant and return it with an explicit unit weight.
    Raises NetworkValidationError (or WeightError) naming the first violated invariant.
    """
    if spec.n == 0:
        raise NetworkValidationError("network has no vertices")
    if len(set(spec.vertices)) != spec.n:
        raise NetworkValidationError("duplicate vertex labels")
    if not math.isfinite(spec.lam) or spec.lam < 0:
        raise NetworkValidationError(f"lambda must be nonnegative, got {spec.lam}")

    known = set(spec.vertices)
    seen = set()
    for edge in spec.edges:
        if edge.u not in known or edge.v not in known:
            missing = edge.u if edge.u not in known else edge.v
            raise NetworkValidationError(f"edge refers to unknown vertex {missing!r}")
        if edge.u == edge.v:
            raise NetworkValidationError(f"loop edge at {edge.u!r}")
        if not math.isfinite(edge.c) or edge.c <= 0:
            raise NetworkValidationError(f"nonpositive conductance {edge.c} on edge {edge.u!r}-{edge.v!r}")
        pair = frozenset((edge.u, edge.v))
        if pair in seen:
            raise NetworkValidationError(f"duplicate edge {edge.u!r}-{edge.v!r}")
        seen.add(pair)

    if not nx.is_connected(network_graph(spec)):
        raise NetworkValidationError("disconnected network")

    if spec.weight is not None and len(spec.weight) != spec.n:
        raise NetworkValidationError(f"weight has {len(spec.weight)} entries for {spec.n} vertices")
    omega = as_weight(spec.omega, normalize=normalize)

    logger.debug(f"Validated network: n={spec.n}, edges={len(spec.edges)}, lambda={spec.lam}")
    return spec.model_copy(update={"weight": tuple(float(w) for w in omega)})


def conductance_matrix(spec: NetworkSpec) -> KernelOnV:
    """Dense symmetric c(x,y) with zero diagonal"""
    index = spec.index_map()
    c = np.zeros((spec.n, spec.n))
    if spec.edges:
        rows = np.fromiter((index[e.u] for e in spec.edges), dtype=np.intp, count=len(spec.edges))
        cols = np.fromiter((index[e.v] for e in spec.edges), dtype=np.intp, count=len(spec.edges))
        vals = np.fromiter((e.c for e in spec.edges), dtype=np.float64, count=len(spec.edges))
        c[rows, cols] = vals
        c[cols, rows] = vals
    return c


def laplacian_matrix(spec: NetworkSpec) -> KernelOnV:
    c = conductance_matrix(spec)
    return np.diag(c.sum(axis=1)) - c


def weight_potential(spec: NetworkSpec) -> Potential:
    """q_omega = -L(omega)/omega"""
    omega = spec.omega
    return -(laplacian_matrix(spec) @ omega) / omega


def schrodinger_matrix(spec: NetworkSpec) -> KernelOnV:
    """L + diag(q_omega + lambda), the (lambda, omega)-elliptic Schrodinger matrix"""
    omega = spec.omega
    lap = laplacian_matrix(spec)
    q = -(lap @ omega) / omega
    return lap + np.diag(q + spec.lam)
