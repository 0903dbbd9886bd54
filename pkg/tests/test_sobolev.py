"""Grid functions, mollification, functional quotients and the sharp
Sobolev constants."""

import json
import math

import numpy as np
import pytest

from monoperim.isoperimetry import ball_constant, quotient
from monoperim.shapes import Box, OrthantBall
from monoperim.sobolev import (
    GridFunction,
    MollifierSpec,
    best_constant,
    best_constant_p1,
    coarea_chain_report,
    coarea_lower_bound_check,
    functional_quotient,
    ibp_inequality_check,
    kernel_mass,
    mollified_indicator,
    standard_bump,
)
from monoperim.weight_core import weight_pair


def _tent_grid(n=81):
    """Compactly supported pyramid on [-1, 1]^2."""
    x = np.linspace(-1.0, 1.0, n)
    X, Y = np.meshgrid(x, x, indexing="ij")
    vals = np.maximum(0.0, 1.0 - np.maximum(np.abs(X), np.abs(Y)))
    h = x[1] - x[0]
    return GridFunction((-1.0, -1.0), (1.0, 1.0), (h, h), vals)


class TestGridFunction:
    def test_node_layout(self):
        u = GridFunction((0.0,), (1.0,), (0.25,), np.array([0.0, 1.0, 2.0, 1.0, 0.0]))
        np.testing.assert_allclose(u.axis_nodes(1), [0.0, 0.25, 0.5, 0.75, 1.0])

    def test_span_mismatch_rejected(self):
        with pytest.raises(ValueError):
            GridFunction((0.0,), (1.0,), (0.3,), np.zeros(5))

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            GridFunction((0.0, 0.0), (1.0,), (0.5,), np.zeros((3, 3)))

    def test_single_node_axis_rejected(self):
        with pytest.raises(ValueError):
            GridFunction((0.0,), (1.0,), (1.5,), np.zeros(1))

    def test_compact_support_enforced(self):
        with pytest.raises(ValueError):
            GridFunction((0.0,), (1.0,), (0.5,), np.array([0.0, 1.0, 0.5]))
        GridFunction((0.0,), (1.0,), (0.5,), np.array([0.0, 1.0, 0.5]),
                     compact_support=False)

    def test_axis_weights_sum_to_exact_moment(self):
        u = GridFunction((-1.0,), (2.0,), (0.25,), np.zeros(13), compact_support=False)
        for e in (0.0, 1.0, 2.5):
            total = u.axis_weights(1, e).sum()
            expect = (2.0 ** (e + 1) + 1.0) / (e + 1)  # int_{-1}^{2} |x|^e dx
            assert total == pytest.approx(expect, rel=1e-13)

    def test_constant_function_integrates_exactly(self):
        n = 11
        u = GridFunction(
            (0.0, 0.0), (1.0, 1.0), (0.1, 0.1), np.ones((n, n)), compact_support=False
        )
        # int x^1 y^2 over the unit square = 1/6
        assert u.integrate_weighted((1.0, 2.0)) == pytest.approx(1.0 / 6.0, rel=1e-13)

    def test_nodal_integration_converges_quadratically(self):
        errs = []
        for n in (21, 41):
            x = np.linspace(0.0, 1.0, n)
            X, Y = np.meshgrid(x, x, indexing="ij")
            u = GridFunction(
                (0.0, 0.0), (1.0, 1.0), (x[1], x[1]), X * Y, compact_support=False
            )
            errs.append(abs(u.integrate_weighted((1.0, 1.0)) - 1.0 / 9.0))
        assert errs[1] < errs[0] / 3.0

    def test_gradient_exact_for_linear(self):
        x = np.linspace(0.0, 1.0, 11)
        X, Y = np.meshgrid(x, x, indexing="ij")
        u = GridFunction(
            (0.0, 0.0), (1.0, 1.0), (0.1, 0.1), 2.0 * X - 3.0 * Y, compact_support=False
        )
        gx, gy = u.gradient()
        np.testing.assert_allclose(gx, 2.0, atol=1e-12)
        np.testing.assert_allclose(gy, -3.0, atol=1e-12)
        np.testing.assert_allclose(u.gradient_norm(), math.sqrt(13.0), atol=1e-12)

    def test_integrand_shape_checked(self):
        u = _tent_grid(11)
        with pytest.raises(ValueError):
            u.integrate_weighted((0.0, 0.0), np.zeros((3, 3)))
        with pytest.raises(ValueError):
            u.integrate_weighted((0.0, 0.0, 0.0))


class TestSerialization:
    def test_round_trip(self, tmp_path):
        u = _tent_grid(33)
        path = tmp_path / "tent.mpgf"
        u.save(path)
        v = GridFunction.load(path)
        assert v.lo == u.lo and v.hi == u.hi and v.spacing == u.spacing
        assert v.compact_support == u.compact_support
        assert np.array_equal(v.values, u.values)
        assert v.values.tobytes() == u.values.tobytes()

    def test_sidecar_describes_layout(self, tmp_path):
        u = _tent_grid(9)
        path = tmp_path / "tent.mpgf"
        u.save(path)
        side = json.loads((tmp_path / "tent.mpgf.json").read_text())
        assert side["dims"] == [9, 9]
        assert side["dtype"] == "float64"
        assert side["order"] == "C"
        assert side["compact_support"] is True

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "junk.mpgf"
        path.write_bytes(b"NOPE" + bytes(64))
        with pytest.raises(ValueError):
            GridFunction.load(path)


class TestMollifierKernel:
    @pytest.mark.parametrize("N", [1, 2, 3])
    def test_standard_bump_has_unit_mass(self, N):
        assert kernel_mass(standard_bump(N), N) == pytest.approx(1.0, abs=1e-8)

    def test_bump_supported_in_unit_ball(self):
        kernel = standard_bump(2)
        pts = np.array([[1.0, 0.0], [0.9, 0.9], [2.0, 0.0]])
        np.testing.assert_array_equal(kernel(pts), 0.0)
        assert kernel(np.array([[0.0, 0.0]]))[0] > 0.0

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            MollifierSpec(0.0)
        custom = lambda pts: np.ones(len(pts))
        assert MollifierSpec(0.1, kernel=custom).kernel_for(2) is custom


class TestMollifiedIndicator:
    def test_grid_must_resolve_kernel(self):
        with pytest.raises(ValueError):
            mollified_indicator(
                OrthantBall(2, 1.0), MollifierSpec(0.05), (-0.2, -0.2), (1.2, 1.2), 0.02
            )

    def test_margin_must_cover_epsilon(self):
        with pytest.raises(ValueError):
            mollified_indicator(
                OrthantBall(2, 1.0), MollifierSpec(0.05), (0.0, 0.0), (1.2, 1.2), 0.01
            )

    def test_spacing_must_divide_box(self):
        with pytest.raises(ValueError):
            mollified_indicator(
                OrthantBall(2, 1.0), MollifierSpec(0.05), (-0.2, -0.2), (1.205, 1.2), 0.01
            )

    def test_values_between_zero_and_one(self):
        u = mollified_indicator(
            OrthantBall(2, 1.0), MollifierSpec(0.05), (-0.2, -0.2), (1.2, 1.2), 0.01
        )
        assert u.compact_support
        assert float(u.values.min()) >= 0.0
        assert float(u.values.max()) <= 1.0

    def test_deep_interior_is_exactly_one(self):
        u = mollified_indicator(
            Box((0.3, 0.3), (0.7, 0.7)), MollifierSpec(0.05), (0.0, 0.0), (1.0, 1.0), 0.01
        )
        mid = u.values[50, 50]  # node at (0.5, 0.5), a kernel radius inside
        assert mid == pytest.approx(1.0, abs=1e-12)
        assert u.values[5, 5] == 0.0

    def test_weighted_volume_error_within_linear_band(self):
        eps = 0.05
        B = (1.0, 1.0)
        shape = OrthantBall(2, 1.0)
        u = mollified_indicator(shape, MollifierSpec(eps), (-0.2, -0.2), (1.2, 1.2), 0.01)
        approx = u.integrate_weighted(B)
        exact = 0.125
        # indicator translation bound: sup weight near the boundary times
        # the boundary length, in a band of width eps
        sup_weight = 0.5 * (1.0 + eps) ** 2
        K = sup_weight * (math.pi / 2.0 + 2.0 + 1.0)
        assert abs(approx - exact) <= K * eps

    def test_custom_kernel_must_be_nonnegative(self):
        bad = lambda pts: -np.ones(len(pts))
        with pytest.raises(ValueError):
            mollified_indicator(
                OrthantBall(2, 1.0), MollifierSpec(0.05, kernel=bad),
                (-0.2, -0.2), (1.2, 1.2), 0.01,
            )


class TestFunctionalQuotient:
    def test_mollified_disk_reproduces_set_quotient(self):
        pair = weight_pair((1.0, 1.0), (1.0, 1.0))
        shape = OrthantBall(2, 1.0)
        set_value = quotient(shape, pair).quotient
        gaps = []
        for eps, h in ((0.05, 0.01), (0.025, 0.005)):
            u = mollified_indicator(shape, MollifierSpec(eps), (-0.15, -0.15), (1.2, 1.2), h)
            gaps.append(abs(functional_quotient(u, pair) - set_value) / set_value)
        # smoothing bias is linear in eps: within the band and shrinking
        assert gaps[0] < 0.05
        assert gaps[1] < gaps[0]

    def test_invariant_under_value_scaling(self):
        pair = weight_pair((1.0, 0.0), (0.0, 1.0))
        u = _tent_grid(61)
        scaled = GridFunction(u.lo, u.hi, u.spacing, 7.5 * u.values)
        assert functional_quotient(scaled, pair) == pytest.approx(
            functional_quotient(u, pair), rel=1e-12
        )

    def test_never_beats_the_ball_constant(self):
        # equal weights: the sharp constant bounds every admissible function
        pair = weight_pair((1.0, 1.0), (1.0, 1.0))
        u = mollified_indicator(
            OrthantBall(2, 1.0), MollifierSpec(0.05), (-0.2, -0.2), (1.2, 1.2), 0.01
        )
        assert functional_quotient(u, pair) >= ball_constant((1.0, 1.0)) * 0.999

    def test_requires_compact_support(self):
        x = np.linspace(0.0, 1.0, 11)
        X, Y = np.meshgrid(x, x, indexing="ij")
        u = GridFunction((0.0, 0.0), (1.0, 1.0), (0.1, 0.1), X + Y, compact_support=False)
        with pytest.raises(ValueError):
            functional_quotient(u, weight_pair((0.0, 0.0), (0.0, 0.0)))

    def test_rejects_zero_function(self):
        u = GridFunction((0.0, 0.0), (1.0, 1.0), (0.5, 0.5), np.zeros((3, 3)))
        with pytest.raises(ValueError):
            functional_quotient(u, weight_pair((0.0, 0.0), (0.0, 0.0)))


class TestSharpConstants:
    def test_p1_equals_ball_constant(self):
        for A in ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (2.0, 3.0), (0.5, 1.5, 0.0)):
            assert best_constant_p1(A) == pytest.approx(ball_constant(A), rel=1e-12)

    def test_unweighted_plane_value(self):
        assert best_constant_p1((0.0, 0.0)) == pytest.approx(2.0 * math.sqrt(math.pi), rel=1e-12)

    def test_classical_p2_space_value(self):
        # the p = 2, A = 0, N = 3 case collapses to 4/sqrt(3) by hand
        assert best_constant(2.0, (0.0, 0.0, 0.0)) == pytest.approx(
            4.0 / math.sqrt(3.0), rel=1e-12
        )

    def test_weighted_sample_value(self):
        assert best_constant(1.5, (1.0, 1.0)) == pytest.approx(0.3733648497975971, rel=1e-12)

    def test_p_range_enforced(self):
        with pytest.raises(ValueError):
            best_constant(1.0, (0.0, 0.0))
        with pytest.raises(ValueError):
            best_constant(2.0, (0.0, 0.0))  # D = 2 means p < 2
        with pytest.raises(ValueError):
            best_constant(5.0, (1.0, 1.0))

    def test_divergence_toward_p_equals_d(self):
        A = (1.0, 1.0)
        assert best_constant(3.999, A) > best_constant(3.9, A) > best_constant(3.0, A)


class TestOneDimensionalInequality:
    def test_tent_achieves_equality(self):
        y = np.linspace(-2.0, 2.0, 4001)
        v = np.maximum(0.0, 1.0 - np.abs(y))
        lhs, rhs, holds = ibp_inequality_check(y, v, 1.0, 0.0)
        assert holds
        assert lhs == pytest.approx(1.0, abs=1e-12)
        assert abs(lhs - rhs) <= 1e-8

    def test_random_piecewise_linear_profiles(self):
        rng = np.random.default_rng(20)
        for _ in range(200):
            n = rng.integers(8, 40)
            y = np.sort(rng.uniform(-3.0, 3.0, size=n))
            while np.any(np.diff(y) <= 0):
                y = np.sort(rng.uniform(-3.0, 3.0, size=n))
            v = rng.uniform(0.0, 1.0, size=n)
            v[0] = v[-1] = 0.0
            a = rng.uniform(0.25, 4.0)
            lhs, rhs, holds = ibp_inequality_check(y, v, a, a - 1.0)
            assert holds, (y, v, a)

    def test_zero_profile_gives_zero_sides(self):
        y = np.linspace(-1.0, 1.0, 9)
        lhs, rhs, holds = ibp_inequality_check(y, np.zeros(9), 2.0, 1.0)
        assert lhs == 0.0 and rhs == 0.0 and holds

    def test_hypotheses_enforced(self):
        y = np.linspace(-1.0, 1.0, 9)
        v = np.maximum(0.0, 1.0 - np.abs(y))
        with pytest.raises(ValueError):
            ibp_inequality_check(y, v, 2.0, 0.0)  # a != b + 1
        with pytest.raises(ValueError):
            ibp_inequality_check(y[::-1], v, 1.0, 0.0)  # decreasing y
        with pytest.raises(ValueError):
            ibp_inequality_check(y, v - 0.5, 1.0, 0.0)  # negative values
        with pytest.raises(ValueError):
            ibp_inequality_check(y, v + 0.1, 1.0, 0.0)  # nonzero endpoints


class TestCoareaChain:
    def test_mollified_disk_passes(self):
        pair = weight_pair((1.0, 1.0), (1.0, 1.0))
        u = mollified_indicator(
            OrthantBall(2, 1.0), MollifierSpec(0.05), (-0.2, -0.2), (1.2, 1.2), 0.01
        )
        report = coarea_chain_report(u, pair, 16)
        assert report["holds"]
        assert report["lhs"] >= report["rhs"] * 0.95
        assert report["levels_used"] >= 8
        assert coarea_lower_bound_check(u, pair, 16)

    def test_two_humps_pass(self):
        x = np.linspace(0.0, 1.0, 201)
        X, Y = np.meshgrid(x, x, indexing="ij")
        hump1 = np.maximum(0.0, 0.15**2 - (X - 0.3) ** 2 - (Y - 0.5) ** 2)
        hump2 = np.maximum(0.0, 0.2**2 - (X - 0.7) ** 2 - (Y - 0.45) ** 2)
        u = GridFunction((0.0, 0.0), (1.0, 1.0), (x[1], x[1]), hump1 + 0.7 * hump2)
        assert coarea_lower_bound_check(u, weight_pair((1.0, 0.0), (0.0, 0.0)), 12)

    def test_requires_small_a_minus_b(self):
        u = _tent_grid(21)
        with pytest.raises(ValueError):
            coarea_lower_bound_check(u, weight_pair((2.0, 1.0), (1.0, 0.0)), 8)

    def test_two_dimensional_only(self):
        vals = np.zeros((4, 4, 4))
        vals[1:3, 1:3, 1:3] = 1.0
        vals[0] = vals[-1] = 0.0
        u = GridFunction(
            (0.0, 0.0, 0.0), (1.0, 1.0, 1.0), (1 / 3, 1 / 3, 1 / 3), vals
        )
        with pytest.raises(NotImplementedError):
            coarea_lower_bound_check(u, weight_pair((0.0, 0.0, 0.0), (0.0, 0.0, 0.0)), 4)

    def test_level_count_positive(self):
        u = _tent_grid(21)
        with pytest.raises(ValueError):
            coarea_chain_report(u, weight_pair((0.0, 0.0), (0.0, 0.0)), 0)
