"""
Closed-form updates of a Green operator under projector perturbations
H = F + sum_i P_{sigma_i}, and the Schur-complement block pseudo-inverse.

The mixed projector terms are carried in their symmetric form
-h_i (P_{G(sigma_i),omega} + P_{omega,G(sigma_i)}); this is the Woodbury expansion of
(F + S S^T)^-1 with F^-1 = G + P_omega/lambda.
"""
import logging
from typing import Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from greennet.config import BORDERLINE_FACTOR, COND_MAX, ORTH_TOL, SCALAR_ZERO
from greennet.errors import DimensionError, IllConditionedError, NetworkValidationError, SingularBlockError, SingularPerturbationError
from greennet.funspace import KernelOnV, as_function, as_kernel, as_weight, dipole, max_abs, scalar_pinv
from greennet.green import GreenOperator, pinv_oracle
from greennet.network import NetworkSpec

logger = logging.getLogger(__name__)


def is_singular_lambda(lam: float) -> bool:
    return scalar_pinv(lam) == 0.0


class PerturbationFamily(BaseModel):
    """
    sigma_1..sigma_{m+ell} as the columns of ``sigmas``; the first m are not orthogonal to
    omega, the remaining ell are. ``permutation[k]`` is the caller's position of column k.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    sigmas: np.ndarray
    omega_products: np.ndarray
    m: int
    ell: int
    permutation: Tuple[int, ...]

    @model_validator(mode="after")
    def _check_partition(self):
        k = self.sigmas.shape[1]
        if self.m + self.ell != k or self.omega_products.shape != (k,):
            raise DimensionError(f"family of {k} members cannot split as m={self.m}, ell={self.ell}")
        mags = np.abs(self.omega_products)
        if np.any(mags[:self.m] <= ORTH_TOL) or np.any(mags[self.m:] > ORTH_TOL):
            raise DimensionError("non-orthogonal members must come first")
        return self

    @property
    def size(self) -> int:
        return self.sigmas.shape[1]

    @classmethod
    def from_sigmas(cls, sigmas: Sequence, omega) -> "PerturbationFamily":
        """Classify against omega and move the non-orthogonal members to the front"""
        omega = as_weight(omega)
        n = omega.shape[0]
        columns = [as_function(s, n) for s in sigmas]
        matrix = np.column_stack(columns) if columns else np.zeros((n, 0))
        products = matrix.T @ omega

        mags = np.abs(products)
        for pos, mag in enumerate(mags):
            if ORTH_TOL < mag <= BORDERLINE_FACTOR * ORTH_TOL:
                logger.warning(f"Member {pos} has |<sigma, omega>| = {mag:.3e}, treating it as non-orthogonal")
        front = [pos for pos in range(len(columns)) if mags[pos] > ORTH_TOL]
        back = [pos for pos in range(len(columns)) if mags[pos] <= ORTH_TOL]
        order = front + back
        if order != sorted(order):
            logger.warning(f"Re-sorted perturbation family to put non-orthogonal members first: {order}")

        return cls(
            sigmas=matrix[:, order],
            omega_products=products[order],
            m=len(front),
            ell=len(back),
            permutation=tuple(order),
        )


class UpdateCoefficients(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    gram: np.ndarray
    b: np.ndarray
    h: float
    h_i: np.ndarray
    h_ij: np.ndarray
    condition: float


def invert_identity_plus(gram: np.ndarray) -> Tuple[np.ndarray, float]:
    """b = (I + A)^-1 with its condition number"""
    k = gram.shape[0]
    if k == 0:
        return np.zeros((0, 0)), 1.0
    identity_plus = np.eye(k) + gram
    condition = float(np.linalg.cond(identity_plus))
    if not np.isfinite(condition) or condition > COND_MAX:
        raise IllConditionedError(f"I + A is ill-conditioned (condition {condition:.3e})")
    b = np.linalg.inv(identity_plus)
    logger.debug(f"I + A inverted: order={k}, condition={condition:.3e}, residual={max_abs(identity_plus @ b - np.eye(k)):.3e}")
    return 0.5 * (b + b.T), condition


def coefficients_from_gram(gram: np.ndarray, omega_products: np.ndarray, m: int, lam: float) -> UpdateCoefficients:
    """h, h_i, h_ij from A; the inner sums only run over the first m members"""
    k = gram.shape[0]
    b, condition = invert_identity_plus(gram)

    c = np.zeros(k)
    c[:m] = omega_products[:m]
    d = b @ c
    h = scalar_pinv(lam + float(c @ d))
    return UpdateCoefficients(
        gram=gram,
        b=b,
        h=h,
        h_i=h * d,
        h_ij=b - h * np.outer(d, d),
        condition=condition,
    )


def _green_of_family(g: GreenOperator, fam: PerturbationFamily) -> np.ndarray:
    if fam.sigmas.shape[0] != g.n:
        raise DimensionError(f"family lives on {fam.sigmas.shape[0]} vertices, Green operator on {g.n}")
    return g.kernel @ fam.sigmas


def build_coefficients(g: GreenOperator, fam: PerturbationFamily) -> UpdateCoefficients:
    g_sigmas = _green_of_family(g, fam)
    gram = fam.sigmas.T @ g_sigmas
    return coefficients_from_gram(0.5 * (gram + gram.T), fam.omega_products, fam.m, g.lam)


def assemble_update(g: GreenOperator, g_sigmas: np.ndarray, coeffs: UpdateCoefficients) -> KernelOnV:
    """G + h P_omega - sum h_i (P_{G s_i, omega} + P_{omega, G s_i}) - sum h_ij P_{G s_i, G s_j}"""
    omega = g.omega
    mixed = g_sigmas @ coeffs.h_i
    x = (
        g.kernel
        + coeffs.h * np.outer(omega, omega)
        - np.outer(mixed, omega)
        - np.outer(omega, mixed)
        - g_sigmas @ coeffs.h_ij @ g_sigmas.T
    )
    return 0.5 * (x + x.T)


def multi_rank_update(g: GreenOperator, fam: PerturbationFamily) -> KernelOnV:
    """Kernel of H^+ for H = F + sum_i P_{sigma_i}"""
    g_sigmas = _green_of_family(g, fam)
    coeffs = build_coefficients(g, fam)
    return assemble_update(g, g_sigmas, coeffs)


def rank_one_update(g: GreenOperator, sigma) -> KernelOnV:
    """
    H_sigma = F + P_sigma.
    lambda = 0 and sigma orthogonal to omega: Green kernel of H_sigma.
    Otherwise H_sigma is invertible and its inverse is returned.
    """
    sigma = as_function(sigma, g.n)
    omega = g.omega
    g_sigma = g.kernel @ sigma
    quad = float(g_sigma @ sigma)
    c = float(sigma @ omega)

    if is_singular_lambda(g.lam) and abs(c) <= ORTH_TOL:
        x = g.kernel - np.outer(g_sigma, g_sigma) / (1.0 + quad)
        return 0.5 * (x + x.T)

    if ORTH_TOL < abs(c) <= BORDERLINE_FACTOR * ORTH_TOL:
        logger.warning(f"|<sigma, omega>| = {abs(c):.3e} is borderline, using the invertible branch")
    beta = g.lam * (1.0 + quad) + c * c
    if beta <= SCALAR_ZERO:
        raise SingularPerturbationError(f"beta = {beta:.3e} vanishes, perturbed operator is singular")
    x = g.kernel - (
        g.lam * np.outer(g_sigma, g_sigma)
        + c * (np.outer(g_sigma, omega) + np.outer(omega, g_sigma))
        - (1.0 + quad) * np.outer(omega, omega)
    ) / beta
    return 0.5 * (x + x.T)


def assemble_perturbed(lq, fam: PerturbationFamily) -> KernelOnV:
    lq = as_kernel(lq, fam.sigmas.shape[0])
    return lq + fam.sigmas @ fam.sigmas.T


def schur_block_pinv(a, b, d, s_pinv=None) -> np.ndarray:
    """
    [[A, B], [B^T, D]]^+ through the Schur complement S = A - B D^-1 B^T:

        [[S^+,             -S^+ B D^-1],
         [-D^-1 B^T S^+,    D^-1 + D^-1 B^T S^+ B D^-1]]

    The Moore-Penrose inverse whenever the block matrix is invertible; with singular S
    the result can be a {1,2}-inverse only.
    """
    a = as_kernel(a)
    d = as_kernel(d)
    b = np.asarray(b, dtype=np.float64)
    if b.ndim == 1:
        b = b[:, None]
    n, m = a.shape[0], d.shape[0]
    if b.shape != (n, m):
        raise DimensionError(f"B has shape {b.shape}, expected {(n, m)}")

    with np.errstate(divide="ignore", invalid="ignore"):
        condition = np.linalg.cond(d)
    if not np.isfinite(condition) or condition > COND_MAX:
        raise SingularBlockError(f"D is singular (condition {condition:.3e})")
    d_inv = np.linalg.inv(d)

    if s_pinv is None:
        s_pinv = pinv_oracle(a - b @ d_inv @ b.T)
    else:
        s_pinv = as_kernel(s_pinv, n)

    s_b_dinv = s_pinv @ b @ d_inv
    return np.block([
        [s_pinv, -s_b_dinv],
        [-(d_inv @ b.T @ s_pinv), d_inv + d_inv @ b.T @ s_b_dinv],
    ])


def edge_sigma(spec: NetworkSpec, x_label, y_label, conductance: float) -> np.ndarray:
    """
    Adding an edge x-y of conductance c adds P_sigma to the Schrodinger matrix with
    sigma = sqrt(c omega(x) omega(y)) tau_xy, which is orthogonal to omega.
    """
    if conductance <= 0:
        raise NetworkValidationError(f"nonpositive conductance {conductance}")
    x, y = spec.vertex(x_label), spec.vertex(y_label)
    omega = spec.omega
    return np.sqrt(conductance * omega[x.index] * omega[y.index]) * dipole(x, y, omega)


def edge_update(g: GreenOperator, spec: NetworkSpec, x_label, y_label, conductance: float) -> GreenOperator:
    """Green operator of the network with one extra edge, without refactoring"""
    x, y = str(x_label), str(y_label)
    if any({e.u, e.v} == {x, y} for e in spec.edges):
        raise NetworkValidationError(f"duplicate edge {x!r}-{y!r}")
    sigma = edge_sigma(spec, x, y, conductance)
    updated = rank_one_update(g, sigma)
    if not is_singular_lambda(g.lam):
        updated = updated - np.outer(g.omega, g.omega) / g.lam
    return GreenOperator(kernel=updated, lam=g.lam, omega=g.omega)
