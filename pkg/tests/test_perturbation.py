import logging

import numpy as np
import pytest

from greennet.errors import (
    DimensionError,
    IllConditionedError,
    NetworkValidationError,
    SingularBlockError,
    SingularPerturbationError,
)
from greennet.generators import random_sigmas
from greennet.green import pinv_oracle
from greennet.network import Edge, schrodinger_matrix
from greennet.perturbation import (
    PerturbationFamily,
    assemble_perturbed,
    build_coefficients,
    edge_sigma,
    edge_update,
    invert_identity_plus,
    multi_rank_update,
    rank_one_update,
    schur_block_pinv,
)
from greennet.selfcheck import green_of

LAMBDAS = (0.0, 0.3, 1.0, 2.0)


class TestRankOneUpdate:
    def test_p2_weight_direction(self, p2):
        g = green_of(p2)
        np.testing.assert_allclose(rank_one_update(g, g.omega), [[0.75, 0.25], [0.25, 0.75]], atol=1e-12)

    def test_p2_orthogonal_direction(self, p2):
        g = green_of(p2)
        expected = np.array([[1.0, -1.0], [-1.0, 1.0]]) / 8.0
        np.testing.assert_allclose(rank_one_update(g, [1.0, -1.0]), expected, atol=1e-12)

    @pytest.mark.parametrize("lam", LAMBDAS)
    @pytest.mark.parametrize("seed", range(13))
    def test_matches_oracle(self, make_case, seed, lam):
        spec, g, _ = make_case(seed, lam=lam, random_weight=bool(seed % 3))
        rng = np.random.default_rng(1000 + seed)
        orthogonal = seed % 2 == 0
        sigma = random_sigmas(spec.n, g.omega, rng, 0 if orthogonal else 1, 1 if orthogonal else 0)[0]
        expected = pinv_oracle(schrodinger_matrix(spec) + np.outer(sigma, sigma))
        np.testing.assert_allclose(rank_one_update(g, sigma), expected, atol=1e-10 * max(1.0, np.abs(expected).max()))

    def test_vanishing_beta(self, p2, caplog):
        g = green_of(p2)
        sigma = np.array([1.0, -1.0]) + 1e-9 * g.omega
        with caplog.at_level(logging.WARNING):
            with pytest.raises(SingularPerturbationError):
                rank_one_update(g, sigma)
        assert "borderline" in caplog.text


class TestPerturbationFamily:
    def test_resorts_non_orthogonal_first(self, p2, caplog):
        omega = p2.omega
        with caplog.at_level(logging.WARNING):
            fam = PerturbationFamily.from_sigmas([[1.0, -1.0], [1.0, 0.0]], omega)
        assert (fam.m, fam.ell) == (1, 1)
        assert fam.permutation == (1, 0)
        np.testing.assert_array_equal(fam.sigmas[:, 0], [1.0, 0.0])
        assert "Re-sorted" in caplog.text

    def test_rejects_bad_partition(self, p2):
        with pytest.raises(ValueError, match="non-orthogonal members must come first"):
            PerturbationFamily(
                sigmas=np.array([[1.0], [-1.0]]),
                omega_products=np.array([0.0]),
                m=1,
                ell=0,
                permutation=(0,),
            )

    def test_empty_family(self, p2):
        g = green_of(p2)
        fam = PerturbationFamily.from_sigmas([], g.omega)
        np.testing.assert_allclose(multi_rank_update(g, fam), g.kernel, atol=1e-15)


class TestMultiRankUpdate:
    @pytest.mark.parametrize("lam", LAMBDAS)
    @pytest.mark.parametrize("seed", range(10))
    def test_matches_oracle(self, make_case, seed, lam):
        spec, g, _ = make_case(seed, lam=lam, random_weight=bool(seed % 2))
        rng = np.random.default_rng(2000 + seed)
        k = int(rng.integers(1, 5))
        m = int(rng.integers(0, k + 1))
        fam = PerturbationFamily.from_sigmas(random_sigmas(spec.n, g.omega, rng, m, k - m), g.omega)
        perturbed = assemble_perturbed(schrodinger_matrix(spec), fam)
        expected = pinv_oracle(perturbed)
        np.testing.assert_allclose(multi_rank_update(g, fam), expected, atol=1e-9 * max(1.0, np.abs(expected).max()))
        if fam.m >= 1:
            assert np.linalg.eigvalsh(perturbed).min() > 0

    def test_single_member_agrees_with_rank_one(self, k3):
        g = green_of(k3)
        sigma = np.array([0.2, 1.0, -0.4])
        fam = PerturbationFamily.from_sigmas([sigma], g.omega)
        np.testing.assert_allclose(multi_rank_update(g, fam), rank_one_update(g, sigma), atol=1e-12)

    def test_coefficients_without_weight_direction(self, k3):
        g = green_of(k3)
        fam = PerturbationFamily.from_sigmas([[1.0, -1.0, 0.0]], g.omega)
        coeffs = build_coefficients(g, fam)
        assert coeffs.h == 0.0
        np.testing.assert_array_equal(coeffs.h_i, [0.0])


class TestInvertIdentityPlus:
    def test_ill_conditioned(self):
        with pytest.raises(IllConditionedError):
            invert_identity_plus(-np.eye(2))

    def test_inverse(self):
        gram = np.array([[1.0, 0.5], [0.5, 2.0]])
        b, condition = invert_identity_plus(gram)
        np.testing.assert_allclose(b @ (np.eye(2) + gram), np.eye(2), atol=1e-14)
        assert condition >= 1.0


class TestSchurBlockPinv:
    def test_pendant_fixture(self):
        x = schur_block_pinv([[1.0]], [[-1.0]], [[1.0]])
        np.testing.assert_allclose(x, [[0.0, 0.0], [0.0, 1.0]], atol=1e-14)

    def test_supplied_complement_pinv(self):
        x = schur_block_pinv([[0.0]], [[-1.0]], [[1.0]], s_pinv=[[0.0]])
        np.testing.assert_allclose(x, [[0.0, 0.0], [0.0, 1.0]], atol=1e-14)

    def test_invertible_block(self):
        rng = np.random.default_rng(5)
        a = rng.normal(size=(5, 5))
        full = a @ a.T + 5.0 * np.eye(5)
        x = schur_block_pinv(full[:3, :3], full[:3, 3:], full[3:, 3:])
        np.testing.assert_allclose(x, np.linalg.inv(full), atol=1e-12)

    def test_singular_corner(self):
        with pytest.raises(SingularBlockError):
            schur_block_pinv([[1.0]], [[1.0]], [[0.0]])

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            schur_block_pinv(np.eye(2), np.ones((3, 1)), [[1.0]])


class TestEdgeUpdate:
    def test_sigma_orthogonal_to_weight(self, make_case):
        spec, g, _ = make_case(4, n=5, random_weight=True)
        sigma = edge_sigma(spec, "v0", "v1", 1.5)
        assert abs(sigma @ spec.omega) <= 1e-12

    @pytest.mark.parametrize("lam", [0.0, 1.0])
    @pytest.mark.parametrize("seed", range(6))
    def test_matches_direct(self, make_case, seed, lam):
        spec, g, _ = make_case(seed, lam=lam, random_weight=True, n=5)
        present = {frozenset((e.u, e.v)) for e in spec.edges}
        missing = [(u, v) for i, u in enumerate(spec.vertices) for v in spec.vertices[i + 1:] if frozenset((u, v)) not in present]
        if not missing:
            pytest.skip("complete network")
        u, v = missing[0]
        updated = edge_update(g, spec, u, v, 0.7)
        augmented = spec.model_copy(update={"edges": spec.edges + (Edge(u=u, v=v, c=0.7),)})
        np.testing.assert_allclose(updated.kernel, green_of(augmented).kernel, atol=1e-9)

    def test_existing_edge(self, p2):
        with pytest.raises(NetworkValidationError, match="duplicate edge"):
            edge_update(green_of(p2), p2, "2", "1", 1.0)


def test_zero_sigma_leaves_green_unchanged(k3):
    g = green_of(k3)
    np.testing.assert_allclose(rank_one_update(g, np.zeros(3)), g.kernel, atol=1e-15)
