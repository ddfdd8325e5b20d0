"""
Invariant suite over the desk fixtures plus seeded random cases.

Every check records the measured value, its tolerance, the fixture name and the seed that
replays it (`greennet selfcheck --seed <seed> --cases 1`). Pendant-formula mismatches are
findings, not failures.
"""
import logging
from typing import Callable, List, Optional, Tuple

import numpy as np

from greennet.config import EQ_TOL, ORTH_TOL, SOLVE_TOL, SPECTRAL_GAP_TOL
from greennet.funspace import VertexId, dipole, inner_product, max_abs, projector_apply, projector_kernel
from greennet.generators import random_attachment, random_network, random_sigmas
from greennet.green import GreenOperator, green_direct, kirchhoff_index, pinv_oracle, resistance_matrix
from greennet.network import Edge, NetworkSpec, laplacian_matrix, schrodinger_matrix, validate_network
from greennet.perturbation import (
    PerturbationFamily,
    assemble_perturbed,
    build_coefficients,
    coefficients_from_gram,
    edge_update,
    multi_rank_update,
    rank_one_update,
    schur_block_pinv,
)
from greennet.schemas import CheckResult, SelfcheckReport
from greennet.vertex_addition import (
    Anchor,
    VertexAttachment,
    added_vertex_pinv,
    block_matrix,
    derive_attachment,
    extend_green,
    extended_network,
    main_theorem_coefficients,
    pendant_pinv,
    pi_family,
    pi_gram,
    proposition_blocks,
    sigma_decomposition_check,
)

logger = logging.getLogger(__name__)

LAMBDAS = (0.0, 0.3, 1.0, 2.0)


def penrose_residuals(m: np.ndarray, x: np.ndarray) -> Tuple[float, float, float, float]:
    """Max entries of MXM - M, XMX - X, (MX)^T - MX and (XM)^T - XM"""
    mx, xm = m @ x, x @ m
    return (
        max_abs(mx @ m - m),
        max_abs(xm @ x - x),
        max_abs(mx.T - mx),
        max_abs(xm.T - xm),
    )


def path_network(lam: float = 0.0, weight=None) -> NetworkSpec:
    return validate_network(NetworkSpec(vertices=("1", "2"), edges=(Edge(u="1", v="2", c=1.0),), weight=weight, lam=lam))


def triangle_network(lam: float = 0.0) -> NetworkSpec:
    edges = (Edge(u="a", v="b", c=1.0), Edge(u="b", v="c", c=1.0), Edge(u="a", v="c", c=1.0))
    return validate_network(NetworkSpec(vertices=("a", "b", "c"), edges=edges, lam=lam))


def single_vertex_network(lam: float = 0.0) -> NetworkSpec:
    return validate_network(NetworkSpec(vertices=("x",), lam=lam))


def green_of(spec: NetworkSpec) -> GreenOperator:
    return green_direct(schrodinger_matrix(spec), spec.lam, spec.omega)


class _Recorder:
    def __init__(self, tol_scale: float):
        self.tol_scale = tol_scale
        self.checks: List[CheckResult] = []
        self.findings: List[str] = []

    def record(self, name: str, fixture: str, value: float, tolerance: float, seed: Optional[int] = None) -> None:
        tolerance = tolerance * self.tol_scale
        passed = bool(np.isfinite(value) and value <= tolerance)
        self.checks.append(CheckResult(name=name, fixture=fixture, seed=seed, value=float(value), tolerance=tolerance, passed=passed))
        if not passed:
            logger.error(f"Check {name} failed on {fixture} (seed={seed}): {value:.3e} > {tolerance:.3e}")

    def record_above(self, name: str, fixture: str, value: float, floor: float, seed: Optional[int] = None) -> None:
        """Lower-bound check; floors are not scaled by tol_scale"""
        passed = bool(np.isfinite(value) and value > floor)
        self.checks.append(
            CheckResult(name=name, fixture=fixture, seed=seed, value=float(value), tolerance=floor, passed=passed, bound="lower")
        )
        if not passed:
            logger.error(f"Check {name} failed on {fixture} (seed={seed}): {value:.3e} <= {floor:.3e}")

    def guard(self, name: str, fixture: str, seed: Optional[int], fn: Callable[[], None]) -> None:
        """Run a group of checks; an exception counts as a failure of that group"""
        try:
            fn()
        except Exception as e:
            logger.error(f"Check {name} raised on {fixture} (seed={seed}): {e}")
            self.checks.append(CheckResult(name=name, fixture=fixture, seed=seed, value=float("inf"), tolerance=0.0, passed=False))


def _desk_fixtures(rec: _Recorder) -> None:
    tau = dipole(VertexId(label="1", index=0), VertexId(label="2", index=1), [0.6, 0.8])
    rec.record("dipole", "omega=(0.6,0.8)", max_abs(tau - np.array([1.0 / 0.6, -1.25])), EQ_TOL)
    rec.record("pinv_oracle", "identity", max_abs(pinv_oracle(np.eye(3)) - np.eye(3)), EQ_TOL)
    rec.record("pinv_oracle", "zero", max_abs(pinv_oracle(np.zeros((3, 3)))), EQ_TOL)

    p2 = path_network()
    g = green_of(p2)
    rec.record("green_direct", "P2", max_abs(g.kernel - 0.25 * np.array([[1.0, -1.0], [-1.0, 1.0]])), EQ_TOL)
    rec.record("rank_one_omega", "P2", max_abs(rank_one_update(g, g.omega) - np.array([[0.75, 0.25], [0.25, 0.75]])), EQ_TOL)
    rec.record("rank_one_orthogonal", "P2", max_abs(rank_one_update(g, [1.0, -1.0]) - np.array([[1.0, -1.0], [-1.0, 1.0]]) / 8.0), EQ_TOL)

    k3 = triangle_network()
    g3 = green_of(k3)
    expected = (3.0 * np.eye(3) - np.ones((3, 3))) / 9.0
    rec.record("green_direct", "K3", max_abs(g3.kernel - expected), EQ_TOL)
    rec.record("resistance", "K3", max_abs(resistance_matrix(g3)[np.triu_indices(3, k=1)] - 2.0), EQ_TOL * 10)
    rec.record("kirchhoff", "K3", abs(kirchhoff_index(g3) - 6.0), EQ_TOL * 10)

    one = single_vertex_network()
    g1 = green_of(one)
    att = VertexAttachment(new_vertex="x'", new_weight_value=1.0, anchors=(Anchor(vertex="x", conductance=1.0),))
    raw = added_vertex_pinv(g1, one, att, mp_correct=False)
    rec.record("pendant_raw", "n=1", max_abs(raw - np.array([[0.0, 0.0], [0.0, 1.0]])), EQ_TOL)
    corrected = added_vertex_pinv(g1, one, att)
    rec.record("pendant_mp", "n=1", max_abs(corrected - 0.25 * np.array([[1.0, -1.0], [-1.0, 1.0]])), EQ_TOL)


def _random_case(rec: _Recorder, seed: int, lam: float) -> None:
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 9))
    spec = random_network(n, rng, extra_edge_prob=0.3, lam=lam, random_weight=bool(rng.integers(2)))
    fixture = f"random n={n} lambda={lam}"
    lq = schrodinger_matrix(spec)
    g = green_of(spec)
    omega = spec.omega
    scale = max(1.0, max_abs(lq))

    att = random_attachment(spec, rng)
    grown = extended_network(spec, att)
    lp = schrodinger_matrix(grown)
    der = derive_attachment(spec, att)

    # aux feeds the invariant draws; rng keeps feeding attachment, family and edge choices
    aux = np.random.default_rng((seed, 1))

    def funspace_checks():
        u, v, w = aux.normal(size=(3, n))
        a, b = aux.normal(size=2)
        rec.record("inner_product_symmetry", fixture, abs(inner_product(u, v) - inner_product(v, u)), EQ_TOL, seed)
        magnitude = 1.0 + abs(a) * float(np.abs(u) @ np.abs(v)) + abs(b) * float(np.abs(w) @ np.abs(v))
        deviation = abs(inner_product(a * u + b * w, v) - a * inner_product(u, v) - b * inner_product(w, v))
        rec.record("inner_product_bilinear", fixture, deviation, EQ_TOL * magnitude, seed)

        singular = np.linalg.svd(projector_kernel(u, v), compute_uv=False)
        rec.record("projector_rank", fixture, singular[1] / singular[0], EQ_TOL, seed)

        once = projector_apply(omega, omega, u)
        rec.record("projector_idempotent", fixture, max_abs(projector_apply(omega, omega, once) - once), EQ_TOL * max(1.0, max_abs(u)), seed)

        i, j = aux.choice(n, size=2, replace=False)
        tau = dipole(spec.vertex(spec.vertices[i]), spec.vertex(spec.vertices[j]), omega)
        rec.record("dipole_orthogonal", fixture, abs(inner_product(tau, omega)), EQ_TOL, seed)

    def network_checks():
        lap = laplacian_matrix(spec)
        lap_eigs = np.linalg.eigvalsh(lap)
        kernel_residual = max(abs(lap_eigs[0]), max_abs(lap @ np.ones(n)))
        rec.record("laplacian_kernel", fixture, kernel_residual, SOLVE_TOL * max(1.0, max_abs(lap)), seed)
        rec.record_above("laplacian_gap", fixture, lap_eigs[1], SPECTRAL_GAP_TOL, seed)

        eigs = np.linalg.eigvalsh(lq)
        rec.record("schrodinger_lowest_eigenvalue", fixture, abs(eigs[0] - lam), SOLVE_TOL * scale, seed)
        rec.record_above("schrodinger_simple", fixture, eigs[1] - eigs[0], SPECTRAL_GAP_TOL, seed)

    def green_checks():
        x = pinv_oracle(lq)
        penrose_scale = scale * max(1.0, max_abs(x))
        rec.record("pinv_penrose", fixture, max(penrose_residuals(lq, x)), SOLVE_TOL * penrose_scale, seed)

        complement = np.eye(n) - np.outer(omega, omega)
        restricted = complement @ g.kernel @ complement
        lowest = float(np.linalg.eigvalsh(0.5 * (restricted + restricted.T))[0])
        rec.record("green_psd", fixture, max(0.0, -lowest), 1e-10, seed)

    def vertex_addition_checks():
        h, s, alpha = proposition_blocks(spec, der, lq)
        rec.record("proposition_blocks", fixture, max_abs(block_matrix(h, s, alpha) - lp), EQ_TOL * scale, seed)

        fam = pi_family(der, lam)
        rec.record("sigma_decomposition", fixture, sigma_decomposition_check(der, fam, lam), EQ_TOL * scale, seed)

        complement_scale = max(scale, max_abs(h), max_abs(np.outer(s, s)) / alpha)
        schur = h - np.outer(s, s) / alpha
        rec.record("schur_complement_identity", fixture, max_abs(schur - lq - fam.pis @ fam.pis.T), EQ_TOL * complement_scale, seed)

        products = fam.pis.T @ omega
        deviation = max(max_abs(products[:der.m] - np.sqrt(lam / alpha) * der.rho), max_abs(products[der.m:]))
        rec.record("pi_orthogonality", fixture, deviation, EQ_TOL * max(1.0, max_abs(fam.pis)), seed)

        gram = pi_gram(g, der, fam)
        direct = fam.pis.T @ g.kernel @ fam.pis
        rec.record("pi_gram", fixture, max_abs(gram - direct), EQ_TOL * max(1.0, max_abs(direct)), seed)

        main = main_theorem_coefficients(der, gram, lam)
        generic = coefficients_from_gram(gram, fam.pis.T @ g.omega, der.m, lam)
        deviation = max(abs(main.h - generic.h), max_abs(main.h_i - generic.h_i), max_abs(main.h_ij - generic.h_ij))
        rec.record("coefficients", fixture, deviation, 1e-10 * max(1.0, abs(generic.h)), seed)

        x = added_vertex_pinv(g, spec, att)
        reference = pinv_oracle(lp)
        rec.record("added_vertex_oracle", fixture, max_abs(x - reference), SOLVE_TOL * max(1.0, max_abs(reference)), seed)
        if lam == 0.0:
            rec.record("penrose", fixture, max(penrose_residuals(lp, x)), SOLVE_TOL * max(1.0, max_abs(lp)), seed)
            rec.record("annihilates_weight", fixture, max_abs(x @ der.omega_prime), ORTH_TOL, seed)
        else:
            rec.record("inverse", fixture, max_abs(x @ lp - np.eye(n + 1)), SOLVE_TOL * max(1.0, max_abs(lp)), seed)

        _, g_grown = extend_green(g, spec, att)
        rec.record("extend_green", fixture, max_abs(g_grown.kernel - green_of(grown).kernel), SOLVE_TOL, seed)

    def perturbation_checks():
        k = int(rng.integers(1, 5))
        m = int(rng.integers(0, k + 1))
        sigmas = random_sigmas(n, g.omega, rng, m, k - m)
        fam = PerturbationFamily.from_sigmas(sigmas, g.omega)
        perturbed = assemble_perturbed(lq, fam)
        reference = pinv_oracle(perturbed)
        rec.record("multi_rank_update", fixture, max_abs(multi_rank_update(g, fam) - reference), SOLVE_TOL * max(1.0, max_abs(reference)), seed)
        if fam.m >= 1:
            rec.record_above("perturbed_positive_definite", fixture, float(np.linalg.eigvalsh(perturbed)[0]), 0.0, seed)

        coeffs = build_coefficients(g, fam)
        identity = np.eye(fam.size)
        rec.record("identity_plus_residual", fixture, max_abs((identity + coeffs.gram) @ coeffs.b - identity), 1e-10, seed)

        sigma = sigmas[0]
        single = rank_one_update(g, sigma)
        reference = pinv_oracle(lq + np.outer(sigma, sigma))
        tolerance = 1e-10 * max(1.0, max_abs(reference))
        rec.record("rank_one_update", fixture, max_abs(single - reference), tolerance, seed)
        singleton = PerturbationFamily.from_sigmas([sigma], g.omega)
        rec.record("rank_one_singleton", fixture, max_abs(multi_rank_update(g, singleton) - single), tolerance, seed)

        full = lq + np.eye(n)
        split = int(aux.integers(1, n))
        blocks = schur_block_pinv(full[:split, :split], full[:split, split:], full[split:, split:])
        inverse = np.linalg.inv(full)
        rec.record("schur_block_inverse", fixture, max_abs(blocks - inverse), SOLVE_TOL * max(1.0, max_abs(inverse)), seed)

    def edge_checks():
        present = {frozenset((e.u, e.v)) for e in spec.edges}
        missing = [(u, v) for i, u in enumerate(spec.vertices) for v in spec.vertices[i + 1:] if frozenset((u, v)) not in present]
        if not missing:
            return
        u, v = missing[int(rng.integers(len(missing)))]
        updated = edge_update(g, spec, u, v, 1.0)
        augmented = spec.model_copy(update={"edges": spec.edges + (Edge(u=u, v=v, c=1.0),)})
        rec.record("edge_update", fixture, max_abs(updated.kernel - green_of(augmented).kernel), SOLVE_TOL, seed)

    def pendant_checks():
        anchor = spec.vertices[int(rng.integers(n))]
        comparison = pendant_pinv(g, spec, anchor, a=1.0, w_new=att.new_weight_value)
        if not comparison.matches:
            rec.findings.append(
                f"pendant closed form deviates by {comparison.max_deviation:.3e} on {fixture} (seed={seed}, anchor={anchor})"
            )

    rec.guard("funspace", fixture, seed, funspace_checks)
    rec.guard("network", fixture, seed, network_checks)
    rec.guard("green", fixture, seed, green_checks)
    rec.guard("vertex_addition", fixture, seed, vertex_addition_checks)
    rec.guard("perturbation", fixture, seed, perturbation_checks)
    rec.guard("edge_update", fixture, seed, edge_checks)
    rec.guard("pendant", fixture, seed, pendant_checks)


def run_selfcheck(seed: int = 0, cases: int = 20, tol_scale: float = 1.0) -> SelfcheckReport:
    rec = _Recorder(tol_scale)
    rec.guard("desk_fixtures", "desk", None, lambda: _desk_fixtures(rec))
    for case_seed in range(seed, seed + cases):
        lam = LAMBDAS[case_seed % len(LAMBDAS)]
        rec.guard("random_case", f"random seed={case_seed}", case_seed, lambda: _random_case(rec, case_seed, lam))

    report = SelfcheckReport(seed=seed, cases=cases, checks=rec.checks, findings=rec.findings)
    logger.info(f"Selfcheck: {len(report.checks)} checks, {len(report.failures)} failed, {len(report.findings)} findings")
    return report
