import numpy as np
import pytest

from infelastica.errors import BeyondInjectivityRadius, OutOfChartDomain
from infelastica.manifold import make_model, sectional_curvature

from conftest import g_orthonormal_pair, random_points, unit_tangent


def fd_christoffel(model, x, step=1e-5):
    """Finite-difference oracle: Gamma^k_ij = 0.5 g^kl (d_i g_jl + d_j g_il - d_l g_ij)."""
    n = model.dimension
    dg = np.zeros((n, n, n))  # dg[m, i, j] = d_m g_ij
    for m in range(n):
        e = np.zeros(n)
        e[m] = step
        dg[m] = (model.metric(x + e) - model.metric(x - e)) / (2 * step)
    ginv = np.linalg.inv(model.metric(x))
    gamma = np.zeros((n, n, n))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                gamma[k, i, j] = 0.5 * np.sum(ginv[k] * (dg[i, j] + dg[j, i] - dg[:, i, j]))
    return gamma


class TestMetric:
    def test_euclidean_identity(self):
        m = make_model("euclidean", 3)
        assert np.allclose(m.metric([0.7, -1.2, 4.0]), np.eye(3))

    def test_sphere_origin(self):
        m = make_model("sphere", 2)
        assert np.allclose(m.metric([0.0, 0.0]), 4.0 * np.eye(2))

    def test_hyperbolic_origin(self):
        m = make_model("hyperbolic", 2)
        assert np.allclose(m.metric([0.0, 0.0]), 4.0 * np.eye(2))

    def test_spd_at_random_points(self, model):
        rng = np.random.default_rng(7)
        pts = random_points(model, rng, 1000)
        for x in pts:
            eigs = np.linalg.eigvalsh(model.metric(x))
            assert eigs.min() > 0.0

    def test_out_of_domain(self):
        sphere = make_model("sphere", 2)
        with pytest.raises(OutOfChartDomain):
            sphere.metric([11.0, 0.0])
        hyp = make_model("hyperbolic", 2)
        with pytest.raises(OutOfChartDomain):
            hyp.metric([1.0, 0.0])


class TestChristoffel:
    def test_euclidean_zero(self):
        m = make_model("euclidean", 2)
        assert np.allclose(m.christoffel([1.3, -0.4]), 0.0)

    def test_sphere_origin_zero(self):
        m = make_model("sphere", 2)
        assert np.allclose(m.christoffel([0.0, 0.0]), 0.0)

    def test_matches_finite_differences_of_metric(self):
        m = make_model("sphere", 2)
        x = np.array([0.3, 0.1])
        assert np.allclose(m.christoffel(x), fd_christoffel(m, x), atol=1e-6)

    def test_matches_fd_random_points_all_models(self, model):
        rng = np.random.default_rng(11)
        for x in random_points(model, rng, 5):
            assert np.allclose(model.christoffel(x), fd_christoffel(model, x), atol=1e-6)

    def test_lower_index_symmetry_exact(self, model):
        rng = np.random.default_rng(3)
        for x in random_points(model, rng, 20):
            gam = model.christoffel(x)
            assert np.array_equal(gam, np.swapaxes(gam, 1, 2))

    def test_contraction_agrees_with_tensor(self, model):
        rng = np.random.default_rng(5)
        for x in random_points(model, rng, 10):
            a = rng.normal(size=model.dimension)
            b = rng.normal(size=model.dimension)
            via_tensor = np.einsum("kij,i,j->k", model.christoffel(x), a, b)
            assert np.allclose(model.christoffel_contract(x, a, b), via_tensor, atol=1e-13)


class TestRiemann:
    def test_euclidean_zero(self):
        m = make_model("euclidean", 2)
        out = m.riemann([0.2, 0.4], [1.0, 0.0], [0.0, 1.0], [0.3, 0.7])
        assert np.allclose(out, 0.0)

    def test_sphere_orthonormal(self):
        m = make_model("sphere", 2)
        rng = np.random.default_rng(1)
        for x in random_points(m, rng, 10):
            X, Y = g_orthonormal_pair(m, x, rng)
            assert np.allclose(m.riemann(x, X, Y, Y), X, atol=1e-12)

    def test_hyperbolic_orthonormal(self):
        m = make_model("hyperbolic", 2)
        rng = np.random.default_rng(2)
        for x in random_points(m, rng, 10):
            X, Y = g_orthonormal_pair(m, x, rng)
            assert np.allclose(m.riemann(x, X, Y, Y), -X, atol=1e-12)

    def test_symmetries_and_bianchi(self, model):
        rng = np.random.default_rng(4)
        n = model.dimension
        for x in random_points(model, rng, 20):
            X, Y, Z, W = rng.normal(size=(4, n))
            rxyz = model.riemann(x, X, Y, Z)
            # antisymmetry in the first pair
            assert np.allclose(rxyz, -model.riemann(x, Y, X, Z), atol=1e-10)
            # antisymmetry of <R(X,Y)Z, W> in the last pair
            lhs = model.inner(x, rxyz, W)
            rhs = -model.inner(x, model.riemann(x, X, Y, W), Z)
            assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))
            # first Bianchi identity
            total = rxyz + model.riemann(x, Y, Z, X) + model.riemann(x, Z, X, Y)
            assert np.max(np.abs(total)) <= 1e-10

    def test_sectional_curvature(self):
        rng = np.random.default_rng(6)
        for mid, expected in (("sphere", 1.0), ("hyperbolic", -1.0)):
            m = make_model(mid, 2)
            for x in random_points(m, rng, 20):
                X, Y = rng.normal(size=(2, 2))
                assert abs(sectional_curvature(m, x, X, Y) - expected) <= 1e-8


class TestDistance:
    def test_euclidean_345(self):
        m = make_model("euclidean", 2)
        assert m.distance([0.0, 0.0], [3.0, 4.0]) == pytest.approx(5.0)

    def test_sphere_quarter_turn(self):
        m = make_model("sphere", 2)
        assert m.distance([0.0, 0.0], [1.0, 0.0]) == pytest.approx(np.pi / 2, abs=1e-12)

    def test_sphere_approaches_antipode(self):
        m = make_model("sphere", 2)
        d = m.distance([0.0, 0.0], [9.9, 0.0])
        assert d < np.pi
        assert d > np.pi - 0.25

    def test_hyperbolic_radial(self):
        m = make_model("hyperbolic", 2)
        for r in (0.1, 0.5, 0.9):
            assert m.distance([0.0, 0.0], [r, 0.0]) == pytest.approx(2 * np.arctanh(r), abs=1e-12)

    def test_symmetry_identity_triangle(self, model):
        rng = np.random.default_rng(8)
        pts = random_points(model, rng, 60)
        for x, y, z in pts.reshape(20, 3, model.dimension):
            dxy = model.distance(x, y)
            assert dxy == pytest.approx(model.distance(y, x), abs=1e-14)
            assert model.distance(x, x) == 0.0
            assert dxy <= model.distance(x, z) + model.distance(z, y) + 1e-9
            assert dxy > 0.0


class TestExpLog:
    def test_euclidean_exp(self):
        m = make_model("euclidean", 2)
        assert np.allclose(m.exp_map([1.0, 2.0], [0.5, -1.0], 2.0), [2.0, 0.0])

    def test_sphere_origin_to_equator(self):
        m = make_model("sphere", 2)
        v = unit_tangent(m, [0.0, 0.0], [1.0, 0.0])
        out = m.exp_map([0.0, 0.0], v, np.pi / 2)
        assert np.linalg.norm(out) == pytest.approx(1.0, abs=1e-12)

    def test_round_trip_random_pairs(self, model):
        rng = np.random.default_rng(9)
        pts = random_points(model, rng, 200)
        worst = 0.0
        for x, y in pts.reshape(100, 2, model.dimension):
            v = model.log_map(x, y)
            # log norm equals distance
            assert model.norm(x, v) == pytest.approx(model.distance(x, y), abs=1e-8)
            back = model.exp_map(x, v, 1.0)
            worst = max(worst, np.max(np.abs(back - y)))
        assert worst <= 1e-8

    def test_exp_then_log_recovers_velocity(self, model):
        rng = np.random.default_rng(10)
        for x in random_points(model, rng, 50):
            v = rng.normal(size=model.dimension) * 0.1
            y = model.exp_map(x, v, 1.0)
            assert np.allclose(model.log_map(x, y), v, atol=1e-8)

    def test_sphere_antipodal_rejected(self):
        # (2, 0) and (-1/2, 0) are exact antipodes: 2 atan(2) + 2 atan(1/2) = pi
        m = make_model("sphere", 2)
        with pytest.raises(BeyondInjectivityRadius):
            m.log_map([2.0, 0.0], [-0.5, 0.0])

    def test_zero_vector(self, model):
        x = np.array([0.1, 0.2])
        assert np.allclose(model.exp_map(x, [0.0, 0.0], 1.0), x)
        assert np.allclose(model.log_map(x, x), 0.0)
