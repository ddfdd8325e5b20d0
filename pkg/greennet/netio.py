"""
Network and matrix files.

Networks come as a JSON document (see schemas.NetworkFile) or a plain edge list with one
"u v c" triple per line and '#' comments; an edge list always has uniform weight.
Matrices are written as JSON with 17 significant digits so they read back exactly.
"""
import json
import logging
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import ValidationError

from greennet.errors import MatrixFileError, NetworkValidationError, UsageError
from greennet.funspace import KernelOnV, as_kernel
from greennet.network import Edge, NetworkSpec, validate_network
from greennet.schemas import MatrixFile, NetworkFile
from greennet.vertex_addition import Anchor

logger = logging.getLogger(__name__)

FORMATS = ("json", "txt")


def _infer_format(path: Path, fmt: Optional[str]) -> str:
    if fmt is not None:
        if fmt not in FORMATS:
            raise UsageError(f"unknown format {fmt!r}, expected one of {', '.join(FORMATS)}")
        return fmt
    return "txt" if path.suffix.lower() in (".txt", ".edges", ".edgelist") else "json"


def _network_from_json(text: str) -> Tuple[NetworkSpec, bool]:
    try:
        doc = NetworkFile.model_validate_json(text)
    except ValidationError as e:
        raise NetworkValidationError(f"invalid network file: {e.errors()[0]['msg']}")

    weight = None
    if doc.weight is not None:
        missing = [v for v in doc.vertices if v not in doc.weight]
        if missing:
            raise NetworkValidationError(f"weight missing for vertex {missing[0]!r}")
        weight = tuple(doc.weight[v] for v in doc.vertices)

    spec = NetworkSpec(
        vertices=tuple(doc.vertices),
        edges=tuple(Edge(u=e.u, v=e.v, c=e.c) for e in doc.edges),
        weight=weight,
        lam=doc.lam,
    )
    return spec, doc.normalize


def _network_from_edge_list(text: str) -> NetworkSpec:
    vertices: List[str] = []
    edges: List[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise NetworkValidationError(f"line {lineno}: expected 'u v c', got {raw.strip()!r}")
        u, v, c = parts
        try:
            conductance = float(c)
        except ValueError:
            raise NetworkValidationError(f"line {lineno}: conductance {c!r} is not a number")
        for label in (u, v):
            if label not in vertices:
                vertices.append(label)
        edges.append(Edge(u=u, v=v, c=conductance))
    return NetworkSpec(vertices=tuple(vertices), edges=tuple(edges))


def read_network(path, fmt: Optional[str] = None, lam: Optional[float] = None, normalize: bool = False) -> NetworkSpec:
    """Load and validate a network; lam and normalize override the file"""
    path = Path(path)
    fmt = _infer_format(path, fmt)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}")

    if fmt == "json":
        spec, file_normalize = _network_from_json(text)
        normalize = normalize or file_normalize
    else:
        spec = _network_from_edge_list(text)
    if lam is not None:
        spec = spec.model_copy(update={"lam": float(lam)})
    spec = validate_network(spec, normalize=normalize)
    logger.info(f"Loaded network from {path}: n={spec.n}, edges={len(spec.edges)}, lambda={spec.lam}")
    return spec


def parse_anchors(text: str) -> List[Anchor]:
    """'x1:a1,x2:a2' -> anchors; conductances are checked later against the network"""
    anchors = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        label, sep, value = item.rpartition(":")
        if not sep or not label:
            raise UsageError(f"anchor {item!r} is not of the form vertex:conductance")
        try:
            anchors.append(Anchor(vertex=label, conductance=float(value)))
        except ValueError:
            raise UsageError(f"anchor {item!r} has a non-numeric conductance")
    if not anchors:
        raise UsageError("no anchors given")
    return anchors


def write_matrix(path, order: Sequence[str], matrix: KernelOnV) -> None:
    matrix = as_kernel(matrix, len(order))
    rows = ",\n".join(
        "    [" + ", ".join(f"{value:.17g}" for value in row) + "]" for row in matrix
    )
    order_json = json.dumps([str(label) for label in order])
    text = f'{{\n  "order": {order_json},\n  "rows": [\n{rows}\n  ]\n}}\n'
    if path is None or str(path) == "-":
        print(text, end="")
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot write {path}: {e.strerror}")
    logger.info(f"Wrote {matrix.shape[0]}x{matrix.shape[1]} matrix to {path}")


def read_matrix(path):
    """(order, matrix) from a file written by write_matrix"""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}")
    try:
        doc = MatrixFile.model_validate_json(text)
    except ValidationError as e:
        raise MatrixFileError(f"invalid matrix file: {e.errors()[0]['msg']}")
    return doc.order, np.array(doc.rows, dtype=np.float64).reshape(len(doc.order), len(doc.order))
