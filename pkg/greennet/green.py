"""
Orthogonal Green operators and the brute-force Moore-Penrose oracle.

The fast path factors L_q + P_omega (positive definite for a (lambda, omega)-elliptic L_q)
and never diagonalizes. The oracle diagonalizes and is only used for verification.
"""
import logging

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict, field_validator

from greennet.config import PINV_RCOND, SOLVE_TOL, SPECTRAL_GAP_TOL, SYM_TOL
from greennet.errors import DegenerateDipoleError, DimensionError, SpectralError, SymmetryError, UnsupportedError
from greennet.funspace import FunctionOnV, KernelOnV, VertexId, as_function, as_kernel, as_weight, dipole, max_abs

logger = logging.getLogger(__name__)


class GreenOperator(BaseModel):
    """Kernel of G_{lambda,omega}; G(omega) = 0 for every lambda"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kernel: np.ndarray
    lam: float
    omega: np.ndarray

    @field_validator("kernel", "omega", mode="before")
    @classmethod
    def _readonly_copy(cls, value):
        array = np.array(value, dtype=np.float64)
        array.setflags(write=False)
        return array

    @property
    def n(self) -> int:
        return self.kernel.shape[0]


def check_symmetric(m: KernelOnV, what: str = "matrix") -> None:
    if max_abs(m - m.T) > SYM_TOL * max(1.0, max_abs(m)):
        raise SymmetryError(f"{what} is not symmetric")


def _elliptic_factor(m: KernelOnV):
    """Cholesky factor of a matrix that must be positive definite for ellipticity"""
    try:
        factor = scipy.linalg.cho_factor(m, lower=True)
    except np.linalg.LinAlgError:
        raise SpectralError("lowest eigenvalue is not simple or operator is not positive semi-definite")
    pivots = np.abs(np.diag(factor[0]))
    if pivots.min() ** 2 <= SPECTRAL_GAP_TOL * pivots.max() ** 2:
        raise SpectralError("lowest eigenvalue is numerically not simple")
    return factor


def green_direct(lq, lam: float, omega) -> GreenOperator:
    """
    Solve (L_q + P_omega) Z = I - P_omega.

    On omega-perp Z inverts L_q, and Z(omega) = 0, so Z is the orthogonal Green kernel
    (equal to (L_q + P_omega)^-1 - P_omega/(lambda + 1)).
    """
    lq = as_kernel(lq)
    omega = as_weight(omega)
    n = lq.shape[0]
    if omega.shape[0] != n:
        raise DimensionError(f"weight has length {omega.shape[0]}, operator has order {n}")
    if lam < 0:
        raise SpectralError(f"lambda must be nonnegative, got {lam}")
    check_symmetric(lq, "Schrodinger matrix")

    scale = max(1.0, max_abs(lq))
    residual = max_abs(lq @ omega - lam * omega)
    if residual > SOLVE_TOL * scale:
        raise SpectralError(f"weight is not an eigenfunction for lambda={lam} (residual {residual:.3e})")

    p_omega = np.outer(omega, omega)
    factor = _elliptic_factor(lq - lam * np.eye(n) + p_omega)
    if lam > 0:
        factor = scipy.linalg.cho_factor(lq + p_omega, lower=True)
    kernel = scipy.linalg.cho_solve(factor, np.eye(n) - p_omega)
    kernel = 0.5 * (kernel + kernel.T)
    logger.debug(f"Green operator computed: n={n}, lambda={lam}")
    return GreenOperator(kernel=kernel, lam=lam, omega=omega)


def pinv_oracle(m) -> KernelOnV:
    """Moore-Penrose inverse of a symmetric matrix by full eigendecomposition"""
    m = as_kernel(m)
    check_symmetric(m)
    if m.size == 0:
        return np.zeros_like(m)
    evals, evecs = scipy.linalg.eigh(0.5 * (m + m.T))
    cutoff = PINV_RCOND * np.max(np.abs(evals))
    keep = np.abs(evals) > cutoff
    inv = np.zeros_like(evals)
    inv[keep] = 1.0 / evals[keep]
    x = (evecs * inv) @ evecs.T
    return 0.5 * (x + x.T)


def green_apply(g: GreenOperator, f) -> FunctionOnV:
    f = as_function(f, g.n)
    return g.kernel @ f


def effective_resistance(g: GreenOperator, x: VertexId, y: VertexId) -> float:
    """<G(tau_xy), tau_xy>; for lambda > 0 this is the generalized resistance"""
    if x.index == y.index:
        raise DegenerateDipoleError(f"resistance needs two distinct vertices, got {x.label!r} twice")
    tau = dipole(x, y, g.omega)
    if g.lam > 0:
        logger.info(f"lambda={g.lam} > 0: returning generalized resistance")
    return float(tau @ g.kernel @ tau)


def resistance_matrix(g: GreenOperator) -> KernelOnV:
    """All pairwise dipole forms, R(x,y) = Gw(x,x) + Gw(y,y) - 2 Gw(x,y) with Gw = G/(omega x omega)"""
    weighted = g.kernel / np.outer(g.omega, g.omega)
    d = np.diag(weighted)
    r = d[:, None] + d[None, :] - 2.0 * weighted
    np.fill_diagonal(r, 0.0)
    return r


def kirchhoff_index(g: GreenOperator) -> float:
    if g.lam > 0:
        raise UnsupportedError(f"Kirchhoff index needs lambda = 0, got {g.lam}")
    return float(np.sum(np.triu(resistance_matrix(g), k=1)))
