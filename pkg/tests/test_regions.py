import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from cloneregion.algebra import decompose
from cloneregion.regions import (
    InfeasibleError,
    MembershipOracle,
    axis_width,
    block_support,
    build_hull,
    constant_point_report,
    constrained_max,
    fidelity_vector,
    membership,
    n_point,
    sample_block_region,
    support,
    symmetric_max,
)


@pytest.fixture(scope="module")
def dec32():
    return decompose(3, 2)


@pytest.fixture(scope="module")
def hull32(dec32):
    return build_hull(dec32, samples_per_block=10**4)


class TestNPoint:
    def test_conventions(self):
        np.testing.assert_array_equal(n_point(3, 2), [0.5, 0.5])
        np.testing.assert_array_equal(n_point(4, 3), [1 / 3, 1 / 3, 1 / 3])
        np.testing.assert_array_equal(n_point(3, 2, "zero"), [0.0, 0.0])
        np.testing.assert_array_equal(
            n_point(3, 2, "product_1_over_d2"), [0.25, 0.25]
        )

    def test_invalid(self):
        with pytest.raises(ValueError):
            n_point(2, 2)
        with pytest.raises(ValueError):
            n_point(3, 2, "bogus")


class TestFidelityVector:
    def test_top_eigenvector_reaches_one(self, dec32):
        block = dec32.blocks[0]
        _, vecs = np.linalg.eigh(block.generators[0])
        F = fidelity_vector(block, vecs[:, -1])
        assert F[0] == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_basis_states(self, d):
        block = decompose(3, d).blocks[0]
        hi = (d + 1) / (2 * d)
        lo = (d - 1) / (2 * d)
        np.testing.assert_allclose(
            fidelity_vector(block, np.array([1.0, 0.0])), [hi, hi], atol=1e-12
        )
        np.testing.assert_allclose(
            fidelity_vector(block, np.array([0.0, 1.0])), [lo, lo], atol=1e-12
        )

    def test_input_validation(self, dec32):
        block = dec32.blocks[0]
        with pytest.raises(ValueError):
            fidelity_vector(block, np.array([1.0, 1.0]))  # not unit
        with pytest.raises(ValueError):
            fidelity_vector(block, np.array([1.0, 0.0, 0.0]))


class TestSampleBlockRegion:
    def test_ellipse_sums(self, dec32):
        sample = sample_block_region(dec32.blocks[0], 360)
        sums = sample.points.sum(axis=1)
        assert np.min(sums) >= 0.5 - 1e-9
        assert np.max(sums) <= 1.5 + 1e-9
        assert np.min(sums) == pytest.approx(0.5, abs=1e-3)
        assert np.max(sums) == pytest.approx(1.5, abs=1e-3)

    def test_points_reproducible_from_states(self, dec32):
        sample = sample_block_region(dec32.blocks[0], 64)
        for state, point in zip(sample.states, sample.points):
            np.testing.assert_allclose(
                fidelity_vector(dec32.blocks[0], state), point, atol=1e-12
            )

    def test_coordinates_in_range(self):
        for block in decompose(4, 3).blocks:
            sample = sample_block_region(block, 500, scheme="low_discrepancy")
            assert np.all(sample.points > -1e-12)
            assert np.all(sample.points < 1 + 1e-12)

    def test_deterministic(self, dec32):
        a = sample_block_region(dec32.blocks[0], 100).points
        b = sample_block_region(dec32.blocks[0], 100).points
        np.testing.assert_array_equal(a, b)


class TestSupport:
    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_symmetric_direction(self, d):
        dec = decompose(3, d)
        assert support(dec, np.array([1.0, 1.0])) == pytest.approx(
            (d + 1) / d, abs=1e-10
        )
        assert support(dec, np.array([1.0, 0.0])) == pytest.approx(1.0, abs=1e-10)

    def test_negative_direction_d2(self, dec32):
        # block branch -(d-1)/d and N-branch -2/d coincide at -1/2 for d=2
        assert support(dec32, np.array([-1.0, -1.0])) == pytest.approx(-0.5, abs=1e-10)

    def test_clone_permutation_symmetry(self):
        dec = decompose(4, 3)
        rng = np.random.Generator(np.random.PCG64(3))
        for _ in range(100):
            w = rng.normal(size=3)
            h = support(dec, w)
            for perm in ([1, 0, 2], [2, 1, 0], [1, 2, 0]):
                assert support(dec, w[perm]) == pytest.approx(h, abs=1e-9)

    def test_rejects_zero(self, dec32):
        with pytest.raises(ValueError):
            support(dec32, np.zeros(2))


class TestSymmetricMax:
    @pytest.mark.parametrize("n", [3, 4])
    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_werner(self, n, d):
        N = n - 1
        assert symmetric_max(decompose(n, d)) == pytest.approx(
            (N + d - 1) / (N * d), abs=1e-9
        )


class TestAxisWidth:
    def test_squeeze(self):
        u = np.array([1.0, 1.0]) / np.sqrt(2)
        widths = []
        for d in range(2, 11):
            w = axis_width(decompose(3, d), u)
            assert w == pytest.approx(np.sqrt(2) / d, abs=1e-9)
            widths.append(w)
        assert all(a > b for a, b in zip(widths, widths[1:]))

    def test_antisymmetric_direction_d2(self, dec32):
        u = np.array([1.0, -1.0]) / np.sqrt(2)
        assert axis_width(dec32, u) == pytest.approx(np.sqrt(6) / 2, abs=1e-9)

    def test_requires_unit(self, dec32):
        with pytest.raises(ValueError):
            axis_width(dec32, np.array([1.0, 1.0]))


class TestHull:
    def test_vertices_satisfy_facets(self, hull32):
        slack = hull32.facet_normals @ hull32.vertices.T - hull32.facet_offsets[:, None]
        assert np.max(slack) <= 1e-10
        for v in hull32.vertices:
            assert hull32.contains(v, tol=1e-10)

    def test_normals_unit(self, hull32):
        np.testing.assert_allclose(
            np.linalg.norm(hull32.facet_normals, axis=1), 1.0, atol=1e-12
        )

    def test_volume_converges(self, dec32, hull32):
        finer = build_hull(dec32, samples_per_block=2 * 10**4)
        assert abs(finer.volume - hull32.volume) / hull32.volume < 1e-4

    def test_n_point_vertex_at_d4(self):
        dec = decompose(3, 4)
        hull = build_hull(dec, 10**4)
        # (1/4,1/4) sticks out below the ellipse (symmetric minimum 3/8)
        i = np.argmin(np.linalg.norm(hull.vertices - 0.25, axis=1))
        assert np.linalg.norm(hull.vertices[i] - 0.25) < 1e-9
        assert hull.sources[i] == "N"

    def test_3d_hull_builds(self):
        dec = decompose(4, 2)
        hull = build_hull(dec, 4000)
        assert hull.dim == 3
        assert hull.volume > 0
        for v in hull.vertices:
            assert hull.contains(v, tol=1e-10)

    def test_unsupported_dimension(self):
        with pytest.raises(ValueError):
            build_hull(decompose(5, 2), 100)


class TestMembership:
    def test_named_points(self, dec32, hull32):
        oracle = MembershipOracle(dec32, hull32)
        assert oracle.classify(np.array([0.75, 0.75]), tol=1e-6) == "boundary"
        assert oracle.classify(np.array([0.9, 0.9]), tol=1e-6) == "outside"
        assert oracle.classify(np.array([0.5, 0.5]), tol=1e-6) == "inside"

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_n_point_inside_or_boundary(self, d):
        dec = decompose(3, d)
        verdict = membership(dec, n_point(3, d), tol=1e-9)
        assert verdict in ("inside", "boundary")

    def test_sampled_points_contained(self, dec32, hull32):
        oracle = MembershipOracle(dec32, hull32)
        sample = sample_block_region(dec32.blocks[0], 100)
        for p in sample.points:
            assert oracle.classify(p, tol=1e-9) in ("inside", "boundary")

    def test_works_without_hull(self, dec32):
        assert membership(dec32, np.array([0.9, 0.9]), tol=1e-6) == "outside"
        assert membership(dec32, np.array([0.5, 0.5]), tol=1e-6) == "inside"


class TestConstrainedMax:
    def test_unconstrained_axis(self, dec32, hull32):
        value, point = constrained_max(dec32, np.array([1.0, 0.0]), hull=hull32)
        assert value == pytest.approx(1.0, abs=1e-6)
        assert point[0] == pytest.approx(1.0, abs=1e-6)

    def test_symmetric_constraint(self, dec32, hull32):
        value, point = constrained_max(
            dec32,
            np.array([1.0, 0.0]),
            constraints=[(np.array([1.0, -1.0]), 0.0)],
            hull=hull32,
        )
        assert value == pytest.approx(0.75, abs=1e-6)
        np.testing.assert_allclose(point, [0.75, 0.75], atol=1e-6)

    def test_balanced_clones_dual_bound(self):
        # maximize F_12 subject to F_12 + F_13 = 2 F_14; the LP value must
        # agree with the Lagrangian dual min_t h(e_1 + t(1,1,-2))
        dec = decompose(4, 3)
        hull = build_hull(dec, 3 * 10**4)
        value, point = constrained_max(
            dec,
            np.array([1.0, 0.0, 0.0]),
            constraints=[(np.array([1.0, 1.0, -2.0]), 0.0)],
            hull=hull,
        )
        assert point[0] + point[1] == pytest.approx(2 * point[2], abs=1e-7)

        def dual(t):
            return support(dec, np.array([1.0 + t, t, -2.0 * t]))

        res = minimize_scalar(dual, bounds=(-5.0, 5.0), method="bounded",
                              options={"xatol": 1e-10})
        assert value == pytest.approx(res.fun, abs=1e-3)
        assert value <= res.fun + 1e-9  # weak duality exactly

    def test_infeasible(self, dec32, hull32):
        with pytest.raises(InfeasibleError):
            constrained_max(
                dec32,
                np.array([1.0, 0.0]),
                constraints=[(np.array([1.0, 0.0]), 2.0)],
                hull=hull32,
            )


class TestConstantPointReport:
    def test_d3_coincidence(self):
        report = constant_point_report(decompose(3, 3))
        assert set(report) == {"paper_1_over_d", "zero", "product_1_over_d2"}
        assert report["paper_1_over_d"]["verdict"] == "outside"
        assert report["paper_1_over_d"]["margin"] > 0
        assert report["zero"]["verdict"] == "inside"
        assert report["product_1_over_d2"]["verdict"] == "boundary"

    def test_d2_constant_point_on_block_boundary(self, dec32):
        report = constant_point_report(dec32)
        # at d=2 the point (1/4,1/4) touches the two-clone curve itself
        assert report["paper_1_over_d"]["verdict"] == "boundary"
        assert report["product_1_over_d2"]["verdict"] == "boundary"


class TestBlockSupportVsNPoint:
    def test_block_support_excludes_n_point(self, dec32):
        w = -np.ones(2)
        assert block_support(dec32, w) == pytest.approx(-0.5, abs=1e-10)
        dec4 = decompose(3, 4)
        # for d=4 the N-branch dominates downward: h includes it, blocks do not
        assert block_support(dec4, w) == pytest.approx(-3 / 4, abs=1e-10)
        assert support(dec4, w) == pytest.approx(-1 / 2, abs=1e-10)
        assert support(dec4, w, "zero") == pytest.approx(0.0, abs=1e-10)
