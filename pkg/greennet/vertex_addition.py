"""
Attach a new vertex x' to a network and update the Moore-Penrose inverse of its
Schrodinger matrix in closed form.

With anchors x_1..x_m and conductances a_1..a_m, the new matrix has the block form
[[H, -s], [-s^T, alpha]] where H = L_q + sum_i P_{sigma_i}. Its Schur complement is
L_q + sum_k P_{pi_k}, a perturbation of L_q by the pi family (m scaled Dirac members,
then one dipole member per anchor pair), so the Green update of the perturbation module
gives S^+ and the Schur lemma gives the rest.

Vertex positions (i, j) in the index map are 1-based; arrays are 0-based.
"""
import logging
import math
from typing import Dict, Iterable, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from greennet.config import EQ_TOL, SOLVE_TOL
from greennet.errors import AttachmentError, DimensionError, NetworkValidationError, WeightError
from greennet.funspace import KernelOnV, Weight, as_kernel, as_weight, max_abs, scalar_pinv
from greennet.green import GreenOperator
from greennet.network import Edge, NetworkSpec, schrodinger_matrix, validate_network
from greennet.perturbation import UpdateCoefficients, assemble_update, invert_identity_plus, is_singular_lambda, schur_block_pinv

logger = logging.getLogger(__name__)


class Anchor(BaseModel):
    model_config = ConfigDict(frozen=True)

    vertex: str
    conductance: float


class VertexAttachment(BaseModel):
    model_config = ConfigDict(frozen=True)

    new_vertex: str
    new_weight_value: float
    anchors: Tuple[Anchor, ...]


class AttachmentDerived(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    anchor_index: np.ndarray
    a: np.ndarray
    omega_anchor: np.ndarray
    w_new: float
    lam: float
    rho: np.ndarray
    sigma_i: np.ndarray
    sigma: np.ndarray
    alpha: float
    s: np.ndarray
    omega_prime: np.ndarray

    @property
    def m(self) -> int:
        return self.rho.shape[0]

    @property
    def n(self) -> int:
        return self.sigma.shape[0]


class PiFamily(BaseModel):
    """
    Columns of ``pis`` are pi_1..pi_{m(m+1)/2}. ``pairs[p]`` is the 1-based anchor pair
    (i, j) stored in column m + p.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    pis: np.ndarray
    m: int
    pairs: Tuple[Tuple[int, int], ...]

    @property
    def size(self) -> int:
        return self.pis.shape[1]

    def index_map(self) -> Dict[Tuple[int, int], int]:
        return {pair: self.m + p + 1 for p, pair in enumerate(self.pairs)}


class PendantComparison(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    pinv: np.ndarray
    reference: np.ndarray
    max_deviation: float

    @property
    def matches(self) -> bool:
        return self.max_deviation <= SOLVE_TOL


def validate_attachment(spec: NetworkSpec, att: VertexAttachment) -> None:
    m = len(att.anchors)
    if m == 0:
        raise AttachmentError("attachment needs at least one anchor")
    if m > spec.n:
        raise AttachmentError(f"{m} anchors for a network of {spec.n} vertices")
    if att.new_vertex in spec.vertices:
        raise AttachmentError(f"new vertex label {att.new_vertex!r} already exists")
    if not math.isfinite(att.new_weight_value) or att.new_weight_value <= 0:
        raise WeightError(f"nonpositive weight {att.new_weight_value} for the new vertex")
    seen = set()
    for anchor in att.anchors:
        spec.vertex(anchor.vertex)
        if anchor.vertex in seen:
            raise AttachmentError(f"duplicate anchor {anchor.vertex!r}")
        seen.add(anchor.vertex)
        if not math.isfinite(anchor.conductance) or anchor.conductance <= 0:
            raise AttachmentError(f"nonpositive conductance {anchor.conductance} at anchor {anchor.vertex!r}")


def _check_green_matches(g: GreenOperator, spec: NetworkSpec) -> None:
    if g.n != spec.n:
        raise DimensionError(f"Green operator has order {g.n}, network has {spec.n} vertices")
    if abs(g.lam - spec.lam) > EQ_TOL or max_abs(g.omega - spec.omega) > EQ_TOL:
        raise NetworkValidationError("Green operator was computed for a different lambda or weight")


def extend_weight(omega, w_new: float) -> Weight:
    """omega'(x) = omega(x)/sqrt(1 + w_new^2) on V plus x' (last)"""
    omega = as_weight(omega)
    if not math.isfinite(w_new) or w_new <= 0:
        raise WeightError(f"nonpositive weight {w_new} for the new vertex")
    return np.append(omega, w_new) / np.sqrt(1.0 + w_new * w_new)


def derive_attachment(spec: NetworkSpec, att: VertexAttachment) -> AttachmentDerived:
    validate_attachment(spec, att)
    n, m = spec.n, len(att.anchors)
    omega = spec.omega
    index = np.array([spec.vertex(anchor.vertex).index for anchor in att.anchors], dtype=np.intp)
    a = np.array([anchor.conductance for anchor in att.anchors], dtype=np.float64)
    w_new = float(att.new_weight_value)
    omega_anchor = omega[index]

    rho = np.sqrt(a * omega_anchor * w_new)
    sigma_i = np.zeros((n, m))
    sigma_i[index, np.arange(m)] = rho / omega_anchor
    sigma = np.zeros(n)
    sigma[index] = a
    alpha = spec.lam + float(rho @ rho) / w_new ** 2

    return AttachmentDerived(
        anchor_index=index,
        a=a,
        omega_anchor=omega_anchor,
        w_new=w_new,
        lam=spec.lam,
        rho=rho,
        sigma_i=sigma_i,
        sigma=sigma,
        alpha=alpha,
        s=sigma.copy(),
        omega_prime=extend_weight(omega, w_new),
    )


def extended_network(spec: NetworkSpec, att: VertexAttachment) -> NetworkSpec:
    """The grown network with weight omega' and the same lambda"""
    validate_attachment(spec, att)
    grown = NetworkSpec(
        vertices=spec.vertices + (att.new_vertex,),
        edges=spec.edges + tuple(Edge(u=anchor.vertex, v=att.new_vertex, c=anchor.conductance) for anchor in att.anchors),
        weight=tuple(float(w) for w in extend_weight(spec.omega, att.new_weight_value)),
        lam=spec.lam,
    )
    return validate_network(grown)


def proposition_blocks(spec: NetworkSpec, der: AttachmentDerived, lq=None) -> Tuple[KernelOnV, np.ndarray, float]:
    """H = L_q + sum_i sigma_i (x) sigma_i, the column s and the corner alpha"""
    lq = schrodinger_matrix(spec) if lq is None else as_kernel(lq, spec.n)
    h = lq + der.sigma_i @ der.sigma_i.T
    return h, der.s, der.alpha


def block_matrix(h: KernelOnV, s: np.ndarray, alpha: float) -> KernelOnV:
    return np.block([[h, -s[:, None]], [-s[None, :], np.array([[alpha]])]])


def pair_index(i: int, j: int, m: int) -> int:
    """k = (2m - 1 - i) i / 2 + j for 1 <= i < j <= m"""
    if not 1 <= i < j <= m:
        raise DimensionError(f"invalid anchor pair ({i}, {j}) for m={m}")
    return (2 * m - 1 - i) * i // 2 + j


def pi_family(der: AttachmentDerived, lam: float) -> PiFamily:
    n, m = der.n, der.m
    size = m * (m + 1) // 2
    pis = np.zeros((n, size))
    idx, rho, omega_a = der.anchor_index, der.rho, der.omega_anchor

    pis[idx, np.arange(m)] = np.sqrt(lam / der.alpha) * rho / omega_a

    pairs = []
    for i in range(1, m):
        for j in range(i + 1, m + 1):
            col = pair_index(i, j, m) - 1
            scale = rho[i - 1] * rho[j - 1] / (np.sqrt(der.alpha) * der.w_new)
            pis[idx[i - 1], col] = scale / omega_a[i - 1]
            pis[idx[j - 1], col] = -scale / omega_a[j - 1]
            pairs.append((i, j))
    return PiFamily(pis=pis, m=m, pairs=tuple(pairs))


def sigma_decomposition_check(der: AttachmentDerived, fam: PiFamily, lam: float) -> float:
    """Max entry of sigma(x)sigma - (alpha - lambda) sum P_{sigma_i} + sum P_{sigma_ij}"""
    idx = der.anchor_index
    sigma = der.sigma[idx]
    sigma_i = der.sigma_i[idx]
    sigma_ij = np.sqrt(der.alpha) * fam.pis[idx, fam.m:]
    residual = np.outer(sigma, sigma) - (der.alpha - lam) * sigma_i @ sigma_i.T + sigma_ij @ sigma_ij.T
    return max_abs(residual)


def _weighted_green_block(g: GreenOperator, der: AttachmentDerived) -> np.ndarray:
    idx = der.anchor_index
    return g.kernel[np.ix_(idx, idx)] / np.outer(der.omega_anchor, der.omega_anchor)


def pi_gram(g: GreenOperator, der: AttachmentDerived, fam: PiFamily) -> np.ndarray:
    """A = (<G(pi_l), pi_k>) from Green kernel entries at the anchors only"""
    m, size = fam.m, fam.size
    lam, alpha, w_new, rho = der.lam, der.alpha, der.w_new, der.rho
    gw = _weighted_green_block(g, der)
    gram = np.zeros((size, size))

    gram[:m, :m] = (lam / alpha) * np.outer(rho, rho) * gw
    if fam.pairs:
        first = np.array([i - 1 for i, _ in fam.pairs], dtype=np.intp)
        second = np.array([j - 1 for _, j in fam.pairs], dtype=np.intp)
        pair_rho = rho[first] * rho[second]

        mixed = (np.sqrt(lam) / (alpha * w_new)) * rho[:, None] * pair_rho[None, :] * (gw[:, first] - gw[:, second])
        gram[:m, m:] = mixed
        gram[m:, :m] = mixed.T

        gram[m:, m:] = np.outer(pair_rho, pair_rho) / (alpha * w_new ** 2) * (
            gw[np.ix_(first, first)]
            - gw[np.ix_(second, first)]
            - gw[np.ix_(first, second)]
            + gw[np.ix_(second, second)]
        )
    return gram


def main_theorem_coefficients(der: AttachmentDerived, gram: np.ndarray, lam: float) -> UpdateCoefficients:
    """h, h_i, h_ij written with rho and alpha; sums over r, s run over the m Dirac members"""
    m, alpha, rho = der.m, der.alpha, der.rho
    b, condition = invert_identity_plus(gram)
    b_rho = b[:, :m] @ rho
    h = scalar_pinv(lam) * alpha / (alpha + float(rho @ b[:m, :m] @ rho))
    return UpdateCoefficients(
        gram=gram,
        b=b,
        h=h,
        h_i=h * np.sqrt(lam / alpha) * b_rho,
        h_ij=b - (h * lam / alpha) * np.outer(b_rho, b_rho),
        condition=condition,
    )


def _green_of_pis(g: GreenOperator, der: AttachmentDerived, fam: PiFamily) -> np.ndarray:
    idx = der.anchor_index
    return g.kernel[:, idx] @ fam.pis[idx, :]


def mp_kernel_projection(x, omega_prime) -> KernelOnV:
    """(I - P_w) X (I - P_w), expanded so it stays O(n^2)"""
    w = as_weight(omega_prime)
    x = as_kernel(x, w.shape[0])
    xw = x @ w
    wx = w @ x
    return x - np.outer(w, wx) - np.outer(xw, w) + float(w @ xw) * np.outer(w, w)


def added_vertex_pinv(g: GreenOperator, spec: NetworkSpec, att: VertexAttachment, mp_correct: bool = True) -> KernelOnV:
    """
    (L'_p)^+ of the grown network, new vertex last.

    For lambda > 0 this is the exact inverse. For lambda = 0 the block formula is a
    {1,2}-inverse; mp_correct projects it onto the complement of span{omega'}.
    """
    _check_green_matches(g, spec)
    lam = spec.lam
    der = derive_attachment(spec, att)
    fam = pi_family(der, lam)
    gram = pi_gram(g, der, fam)
    coeffs = main_theorem_coefficients(der, gram, lam)
    m_kernel = assemble_update(g, _green_of_pis(g, der, fam), coeffs)

    h, s, alpha = proposition_blocks(spec, der)
    x = schur_block_pinv(h, -s, np.array([[alpha]]), s_pinv=m_kernel)
    logger.debug(f"Closed-form update: n={spec.n}, m={der.m}, alpha={alpha:.6g}, h={coeffs.h:.6g}, cond(I+A)={coeffs.condition:.3e}")

    if is_singular_lambda(lam):
        if mp_correct:
            x = mp_kernel_projection(x, der.omega_prime)
        else:
            logger.warning("Returning the raw block formula for lambda = 0; it is not the Moore-Penrose inverse")
    return x


def pendant_pinv(g: GreenOperator, spec: NetworkSpec, x_label, a: float, w_new: float, new_label: str = "x'") -> PendantComparison:
    """
    Single-anchor closed form read with sigma = sigma_1 and rho_x = sqrt(lambda/alpha) rho_1.
    The 1/h factor is evaluated as h^+, so lambda = 0 gives M = G.
    Any disagreement with added_vertex_pinv (raw) is logged and returned, not hidden.
    """
    _check_green_matches(g, spec)
    att = VertexAttachment(new_vertex=new_label, new_weight_value=w_new, anchors=(Anchor(vertex=str(x_label), conductance=a),))
    lam = spec.lam
    der = derive_attachment(spec, att)
    omega = g.omega
    xi = int(der.anchor_index[0])
    alpha = der.alpha

    g_sigma = g.kernel @ der.sigma_i[:, 0]
    rho_x = np.sqrt(lam / alpha) * der.rho[0]
    diagonal_coef = 1.0 + (alpha - lam) * g.kernel[xi, xi]
    h_pendant = lam * diagonal_coef + rho_x ** 2
    m_kernel = g.kernel - scalar_pinv(h_pendant) * (
        lam * np.outer(g_sigma, g_sigma)
        + rho_x * (np.outer(g_sigma, omega) + np.outer(omega, g_sigma))
        - diagonal_coef * np.outer(omega, omega)
    )

    h, s, _ = proposition_blocks(spec, der)
    pinv = schur_block_pinv(h, -s, np.array([[alpha]]), s_pinv=m_kernel)
    reference = added_vertex_pinv(g, spec, att, mp_correct=False)
    deviation = max_abs(pinv - reference)
    if deviation > SOLVE_TOL:
        logger.warning(f"Pendant closed form differs from the general update by {deviation:.3e} (lambda={lam}, anchor={x_label!r})")
    return PendantComparison(pinv=pinv, reference=reference, max_deviation=deviation)


def extend_green(g: GreenOperator, spec: NetworkSpec, att: VertexAttachment) -> Tuple[NetworkSpec, GreenOperator]:
    """Grown network and its orthogonal Green operator G_{lambda,omega'}"""
    x = added_vertex_pinv(g, spec, att, mp_correct=True)
    grown = extended_network(spec, att)
    omega_prime = grown.omega
    if not is_singular_lambda(spec.lam):
        x = x - np.outer(omega_prime, omega_prime) / spec.lam
    return grown, GreenOperator(kernel=0.5 * (x + x.T), lam=spec.lam, omega=omega_prime)


def grow_network(g: GreenOperator, spec: NetworkSpec, attachments: Iterable[VertexAttachment]) -> Tuple[NetworkSpec, GreenOperator]:
    """Attach several vertices one at a time"""
    for att in attachments:
        spec, g = extend_green(g, spec, att)
        logger.info(f"Attached {att.new_vertex!r}: network now has {spec.n} vertices")
    return spec, g
