"""
Functions on a finite ordered vertex set.

Functions are dense float vectors aligned with the vertex ordering, kernels are dense
n x n arrays (row = first argument). Everything here is a pure function of its inputs.
"""
import logging
from typing import Union

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field

from greennet.config import EQ_TOL, SCALAR_ZERO
from greennet.errors import DegenerateDipoleError, DimensionError, VertexLookupError, WeightError

logger = logging.getLogger(__name__)

FunctionOnV = npt.NDArray[np.float64]
KernelOnV = npt.NDArray[np.float64]
Weight = FunctionOnV


class VertexId(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: str
    index: int = Field(ge=0)


def as_function(values, n: Union[int, None] = None) -> FunctionOnV:
    """Coerce to a finite 1-D float vector, optionally of length n"""
    u = np.asarray(values, dtype=np.float64)
    if u.ndim != 1:
        raise DimensionError(f"function must be one-dimensional, got shape {u.shape}")
    if n is not None and u.shape[0] != n:
        raise DimensionError(f"function has length {u.shape[0]}, expected {n}")
    if not np.all(np.isfinite(u)):
        raise DimensionError("function has non-finite entries")
    return u


def as_kernel(values, n: Union[int, None] = None) -> KernelOnV:
    k = np.asarray(values, dtype=np.float64)
    if k.ndim != 2 or k.shape[0] != k.shape[1]:
        raise DimensionError(f"kernel must be square, got shape {k.shape}")
    if n is not None and k.shape[0] != n:
        raise DimensionError(f"kernel has order {k.shape[0]}, expected {n}")
    if not np.all(np.isfinite(k)):
        raise DimensionError("kernel has non-finite entries")
    return k


def as_weight(values, normalize: bool = False) -> Weight:
    """
    Validate a weight: strictly positive with unit Euclidean norm.
    With normalize set, a positive vector of any norm is rescaled instead of rejected.
    """
    omega = as_function(values)
    if omega.size == 0:
        raise WeightError("weight is empty")
    if np.any(omega <= 0):
        raise WeightError("weight not positive")
    norm_sq = float(omega @ omega)
    if abs(norm_sq - 1.0) > EQ_TOL:
        if not normalize:
            raise WeightError(f"weight norm is {np.sqrt(norm_sq):.17g}, expected 1")
        omega = omega / np.sqrt(norm_sq)
    return omega


def uniform_weight(n: int) -> Weight:
    return np.full(n, 1.0 / np.sqrt(n))


def scalar_pinv(t: float) -> float:
    """t -> 1/t, with 0 -> 0 below SCALAR_ZERO"""
    return 0.0 if abs(t) <= SCALAR_ZERO else 1.0 / t


def _check_same_length(*functions: FunctionOnV) -> None:
    lengths = {f.shape[0] for f in functions}
    if len(lengths) > 1:
        raise DimensionError(f"length mismatch: {sorted(lengths)}")


def inner_product(u, v) -> float:
    u, v = as_function(u), as_function(v)
    _check_same_length(u, v)
    return float(u @ v)


def dirac(x: Union[VertexId, int], n: int) -> FunctionOnV:
    index = x.index if isinstance(x, VertexId) else int(x)
    if not 0 <= index < n:
        raise VertexLookupError(f"vertex index {index} outside 0..{n - 1}")
    eps = np.zeros(n)
    eps[index] = 1.0
    return eps


def projector_apply(sigma, tau, u) -> FunctionOnV:
    """P_{sigma,tau}(u) = <tau, u> sigma"""
    sigma, tau, u = as_function(sigma), as_function(tau), as_function(u)
    _check_same_length(sigma, tau, u)
    return float(tau @ u) * sigma


def projector_kernel(sigma, tau) -> KernelOnV:
    sigma, tau = as_function(sigma), as_function(tau)
    _check_same_length(sigma, tau)
    return np.outer(sigma, tau)


def dipole(x: VertexId, y: VertexId, omega) -> FunctionOnV:
    """omega-dipole eps_x/omega(x) - eps_y/omega(y)"""
    omega = as_weight(omega)
    n = omega.shape[0]
    if x.index == y.index:
        raise DegenerateDipoleError(f"dipole needs two distinct vertices, got {x.label!r} twice")
    return dirac(x, n) / omega[x.index] - dirac(y, n) / omega[y.index]


def max_abs(k) -> float:
    """Entrywise infinity norm, 0 for empty input"""
    k = np.asarray(k)
    return float(np.max(np.abs(k))) if k.size else 0.0
