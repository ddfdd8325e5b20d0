import numpy as np
import pytest

from greennet.errors import DegenerateDipoleError, SpectralError, SymmetryError, UnsupportedError
from greennet.funspace import uniform_weight
from greennet.green import (
    effective_resistance,
    green_apply,
    green_direct,
    kirchhoff_index,
    pinv_oracle,
    resistance_matrix,
)
from greennet.network import schrodinger_matrix
from greennet.selfcheck import green_of, path_network, triangle_network
from tests.conftest import K3_GREEN, P2_GREEN, assert_penrose


class TestGreenDirect:
    def test_p2(self, p2):
        np.testing.assert_allclose(green_of(p2).kernel, P2_GREEN, atol=1e-12)

    def test_k3(self, k3):
        np.testing.assert_allclose(green_of(k3).kernel, K3_GREEN, atol=1e-12)

    def test_kernel_is_read_only(self, p2):
        with pytest.raises(ValueError):
            green_of(p2).kernel[0, 0] = 1.0

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_oracle_at_lambda_zero(self, make_case, seed):
        spec, g, _ = make_case(seed, random_weight=bool(seed % 2))
        np.testing.assert_allclose(g.kernel, pinv_oracle(schrodinger_matrix(spec)), atol=1e-10)
        np.testing.assert_allclose(g.kernel @ spec.omega, 0.0, atol=1e-12)

    @pytest.mark.parametrize("lam", [0.3, 1.0, 2.0])
    def test_positive_lambda_is_shifted_inverse(self, make_case, lam):
        spec, g, _ = make_case(3, lam=lam, random_weight=True)
        expected = np.linalg.inv(schrodinger_matrix(spec)) - np.outer(spec.omega, spec.omega) / lam
        np.testing.assert_allclose(g.kernel, expected, atol=1e-10)

    def test_solves_poisson_problem(self, k3):
        g = green_of(k3)
        f = np.array([1.0, -2.0, 0.5])
        u = green_apply(g, f)
        lq = schrodinger_matrix(k3)
        projected = f - (f @ g.omega) * g.omega
        np.testing.assert_allclose(lq @ u, projected, atol=1e-12)
        assert abs(u @ g.omega) <= 1e-12

    def test_weight_not_eigenfunction(self, p2):
        with pytest.raises(SpectralError):
            green_direct(schrodinger_matrix(p2), 0.0, [0.6, 0.8])

    def test_wrong_lambda(self, p2):
        with pytest.raises(SpectralError):
            green_direct(schrodinger_matrix(p2), 1.0, p2.omega)

    def test_negative_lambda(self, p2):
        with pytest.raises(SpectralError):
            green_direct(schrodinger_matrix(p2), -1.0, p2.omega)

    def test_lowest_eigenvalue_not_simple(self):
        with pytest.raises(SpectralError):
            green_direct(np.zeros((2, 2)), 0.0, uniform_weight(2))

    def test_not_symmetric(self):
        with pytest.raises(SymmetryError):
            green_direct(np.array([[1.0, -1.0], [0.0, 1.0]]), 0.0, uniform_weight(2))


class TestPinvOracle:
    def test_matches_numpy(self):
        rng = np.random.default_rng(42)
        a = rng.normal(size=(6, 3))
        m = a @ a.T
        np.testing.assert_allclose(pinv_oracle(m), np.linalg.pinv(m, hermitian=True), atol=1e-10)

    def test_empty(self):
        assert pinv_oracle(np.zeros((0, 0))).shape == (0, 0)

    @pytest.mark.parametrize(
        "matrix, expected",
        [
            (np.eye(3), np.eye(3)),
            (np.zeros((3, 3)), np.zeros((3, 3))),
            (np.diag([2.0, 0.0, -4.0]), np.diag([0.5, 0.0, -0.25])),
        ],
    )
    def test_desk_examples(self, matrix, expected):
        np.testing.assert_allclose(pinv_oracle(matrix), expected, atol=1e-15)

    def test_not_symmetric(self):
        with pytest.raises(SymmetryError):
            pinv_oracle([[1.0, 2.0], [0.0, 1.0]])

    @pytest.mark.parametrize("lam", [0.0, 0.3, 1.0, 2.0])
    @pytest.mark.parametrize("seed", range(6))
    def test_penrose_identities(self, make_case, seed, lam):
        spec, _, _ = make_case(seed, lam=lam, random_weight=bool(seed % 2))
        lq = schrodinger_matrix(spec)
        assert_penrose(lq, pinv_oracle(lq))

    def test_penrose_identities_rank_deficient(self):
        a = np.random.default_rng(7).normal(size=(6, 2))
        m = a @ a.T
        assert_penrose(m, pinv_oracle(m))


class TestGreenPositivity:
    @pytest.mark.parametrize("lam", [0.0, 0.3, 1.0, 2.0])
    @pytest.mark.parametrize("seed", range(6))
    def test_semi_definite_on_weight_complement(self, make_case, seed, lam):
        spec, g, _ = make_case(seed, lam=lam, random_weight=True)
        rng = np.random.default_rng(500 + seed)
        for _ in range(5):
            f = rng.normal(size=spec.n)
            f -= (f @ spec.omega) * spec.omega
            assert green_apply(g, f) @ f >= -1e-10


class TestResistance:
    def test_k3_pairs(self, k3):
        g = green_of(k3)
        for x, y in [("a", "b"), ("b", "c"), ("a", "c")]:
            assert effective_resistance(g, k3.vertex(x), k3.vertex(y)) == pytest.approx(2.0, abs=1e-12)

    def test_p2(self, p2):
        g = green_of(p2)
        assert effective_resistance(g, p2.vertex("1"), p2.vertex("2")) == pytest.approx(2.0, abs=1e-12)

    def test_kirchhoff_k3(self, k3):
        assert kirchhoff_index(green_of(k3)) == pytest.approx(6.0, abs=1e-12)

    def test_kirchhoff_needs_lambda_zero(self):
        with pytest.raises(UnsupportedError):
            kirchhoff_index(green_of(triangle_network(lam=1.0)))

    def test_same_vertex(self, p2):
        g = green_of(p2)
        with pytest.raises(DegenerateDipoleError):
            effective_resistance(g, p2.vertex("1"), p2.vertex("1"))

    @pytest.mark.parametrize("seed", range(5))
    def test_matrix_matches_pairwise(self, make_case, seed):
        spec, g, _ = make_case(seed, random_weight=True)
        r = resistance_matrix(g)
        np.testing.assert_allclose(r, r.T, atol=1e-12)
        for i in range(spec.n):
            for j in range(i + 1, spec.n):
                value = effective_resistance(g, spec.vertex(spec.vertices[i]), spec.vertex(spec.vertices[j]))
                assert r[i, j] == pytest.approx(value, rel=1e-10, abs=1e-12)

    def test_generalized_resistance_is_logged(self, caplog):
        spec = path_network(lam=1.0)
        with caplog.at_level("INFO"):
            effective_resistance(green_of(spec), spec.vertex("1"), spec.vertex("2"))
        assert "generalized" in caplog.text
