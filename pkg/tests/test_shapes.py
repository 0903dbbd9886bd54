"""Parametric domain families: constructors, boundary decompositions,
closed forms and the inequalities their quotients rely on."""

import math

import numpy as np
import pytest

from monoperim._gamma import gamma_fn
from monoperim.integrate import (
    MCSpec,
    QuadratureSpec,
    mc_surface,
    mc_volume,
    weighted_surface,
    weighted_volume,
)
from monoperim.shapes import (
    Box,
    ConeSlab,
    OrthantBall,
    TranslatedBall,
    boundary_pieces,
    closed_form_orthant_ball_mass,
    dilate,
    parse_shape,
    unit_orthant_ball_moment,
)


class TestConstructors:
    def test_orthant_ball(self):
        shape = OrthantBall(3, 2.0)
        assert shape.dim == 3
        with pytest.raises(ValueError):
            OrthantBall(2, 0.0)
        with pytest.raises(ValueError):
            OrthantBall(1, 1.0)

    def test_box_requires_ordered_nonnegative_corners(self):
        Box((0.0, 0.5), (1.0, 1.5))
        with pytest.raises(ValueError):
            Box((0.0, 1.0), (1.0, 1.0))
        with pytest.raises(ValueError):
            Box((-0.1, 0.0), (1.0, 1.0))
        with pytest.raises(ValueError):
            Box((0.0,), (1.0,))

    def test_translated_ball_requires_t_beyond_2r(self):
        TranslatedBall(2, 1, 2.5, 1.0)
        with pytest.raises(ValueError):
            TranslatedBall(2, 1, 2.0, 1.0)
        with pytest.raises(ValueError):
            TranslatedBall(2, 1, 5.0, 0.0)
        with pytest.raises(IndexError):
            TranslatedBall(2, 3, 5.0, 1.0)

    def test_cone_slab_requires_positive_parameters(self):
        ConeSlab(2, 1, 0.5, 1.0)
        with pytest.raises(ValueError):
            ConeSlab(2, 1, 0.0, 1.0)
        with pytest.raises(ValueError):
            ConeSlab(2, 1, 0.5, 0.0)
        with pytest.raises(IndexError):
            ConeSlab(2, 0, 0.5, 1.0)


class TestBoundaryDecompositions:
    def test_cone_slab_four_pieces_in_the_plane(self):
        pieces = boundary_pieces(ConeSlab(2, 1, 0.5, 1.0))
        labels = [p.label for p in pieces]
        assert len(pieces) == 4
        assert "lateral-cone" in labels
        assert "cap-band" in labels
        assert "base-facet" in labels
        # the remaining facet collapses to the origin in N = 2
        side = [p for p in pieces if p.label.startswith("side-facet")]
        assert len(side) == 1 and side[0].degenerate

    def test_cone_slab_base_lies_in_hyperplane(self):
        pieces = boundary_pieces(ConeSlab(2, 1, 0.5, 1.0))
        base = next(p for p in pieces if p.label == "base-facet")
        assert base.hyperplane == 1
        assert base.vanishing_weight((1.0, 0.0))
        assert not base.vanishing_weight((0.0, 1.0))

    def test_translated_ball_two_hemispheres(self):
        pieces = boundary_pieces(TranslatedBall(2, 1, 3.0, 1.0))
        assert sorted(p.label for p in pieces) == ["lower-hemisphere", "upper-hemisphere"]

    def test_orthant_ball_patch_plus_facets(self):
        pieces = boundary_pieces(OrthantBall(3, 1.0))
        assert len(pieces) == 4
        assert sum(p.label == "spherical-patch" for p in pieces) == 1
        facets = [p for p in pieces if p.hyperplane is not None]
        assert sorted(p.hyperplane for p in facets) == [1, 2, 3]

    def test_box_has_2n_faces(self):
        assert len(boundary_pieces(Box((0.0, 0.0), (1.0, 1.0)))) == 4
        assert len(boundary_pieces(Box((0.0, 0.0, 0.0), (1.0, 1.0, 1.0)))) == 6

    @pytest.mark.parametrize(
        "shape",
        [
            ConeSlab(2, 1, 0.4, 1.0),
            ConeSlab(3, 2, 0.5, 1.0),
            OrthantBall(3, 1.0),
            TranslatedBall(2, 1, 4.0, 1.0),
        ],
    )
    def test_pieces_essentially_disjoint(self, shape):
        # interior parameter samples of distinct pieces must not coincide
        rng = np.random.default_rng(314)
        clouds = []
        for piece in boundary_pieces(shape):
            if piece.degenerate:
                continue
            lo = np.asarray(piece.param_lo)
            hi = np.asarray(piece.param_hi)
            u = lo + (0.05 + 0.9 * rng.random((200, lo.size))) * (hi - lo)
            clouds.append(np.asarray(piece.chart(u)))
        for i in range(len(clouds)):
            for j in range(i + 1, len(clouds)):
                d = np.linalg.norm(clouds[i][:, None, :] - clouds[j][None, :, :], axis=2)
                assert d.min() > 1e-9

    @pytest.mark.parametrize(
        "shape",
        [
            ConeSlab(2, 1, 0.4, 1.0),
            ConeSlab(3, 1, 0.5, 1.0),
            OrthantBall(2, 1.5),
            TranslatedBall(3, 2, 5.0, 1.0),
            Box((0.0, 0.5), (1.0, 2.0)),
        ],
    )
    def test_charts_land_in_bounding_box(self, shape):
        lo_box, hi_box = shape.bounding_box()
        rng = np.random.default_rng(27)
        for piece in boundary_pieces(shape):
            if piece.degenerate:
                continue
            lo = np.asarray(piece.param_lo)
            hi = np.asarray(piece.param_hi)
            u = lo + rng.random((200, lo.size)) * (hi - lo)
            x = np.asarray(piece.chart(u))
            assert np.all(x >= lo_box - 1e-9)
            assert np.all(x <= hi_box + 1e-9)
            assert np.all(piece.area_element(u) >= 0)


class TestClosedForms:
    def test_quarter_disk(self):
        assert closed_form_orthant_ball_mass((0.0, 0.0)) == pytest.approx(math.pi / 4, rel=1e-14)

    def test_bilinear_moment(self):
        assert closed_form_orthant_ball_mass((1.0, 1.0)) == pytest.approx(0.125, rel=1e-14)

    def test_single_power_moment(self):
        assert closed_form_orthant_ball_mass((1.0, 0.0)) == pytest.approx(1.0 / 3.0, rel=1e-14)

    @pytest.mark.parametrize(
        "A,R",
        [
            ((0.5, 1.5), 1.0),
            ((2.0, 3.0, 1.0), 1.3),
            ((0.0, 0.7, 0.0, 1.1), 0.9),
        ],
    )
    def test_matches_quadrature(self, A, R):
        shape = OrthantBall(len(A), R)
        est = weighted_volume(shape, A)
        assert closed_form_orthant_ball_mass(A, R) == pytest.approx(est.value, rel=1e-11)

    def test_radius_scaling_exponent(self):
        A = (1.0, 2.0)
        ratio = closed_form_orthant_ball_mass(A, 2.0) / closed_form_orthant_ball_mass(A, 1.0)
        assert ratio == pytest.approx(2.0 ** (2 + 3), rel=1e-13)

    def test_unit_moment_one_dimensional(self):
        # int_0^1 x^2 * x dx = 1/4
        assert unit_orthant_ball_moment((2.0,), 1.0) == pytest.approx(0.25, rel=1e-12)

    def test_unit_moment_matches_closed_form(self):
        assert unit_orthant_ball_moment((1.0, 1.0)) == pytest.approx(0.125, rel=1e-12)


class TestFrozenOracles:
    """Values pinned against brute-force scipy integration done separately."""

    def test_cone_slab_volume_plane(self):
        est = weighted_volume(ConeSlab(2, 1, 0.5, 1.0), (1.0, 2.0))
        assert est.value == pytest.approx(0.018963883146671176, rel=1e-10)

    def test_cone_slab_volume_space(self):
        est = weighted_volume(ConeSlab(3, 1, 0.5, 1.0), (0.0, 1.0, 2.0))
        assert est.value == pytest.approx(0.022437102965315033, rel=1e-10)

    def test_cone_slab_plain_area(self):
        # polar sector: area = R^2 (pi/2 - arctan(1/eps)) / 2
        est = weighted_volume(ConeSlab(2, 1, 0.5, 1.0), (0.0, 0.0))
        expect = 0.5 * (math.pi / 2 - math.atan(2.0))
        assert expect == pytest.approx(0.23182380450040305, rel=1e-15)
        assert est.value == pytest.approx(expect, rel=1e-11)

    def test_cone_slab_weighted_perimeter_hand_value(self):
        # weight x_1 on the slab: ray contributes eps R^2/(2 sqrt(1+eps^2)),
        # the arc contributes R^2 (1 - 1/sqrt(1+eps^2)), the base vanishes
        eps, R = 0.5, 1.0
        root = math.sqrt(1 + eps * eps)
        expect = R * R * (eps / (2 * root) + 1 - 1 / root)
        est = weighted_surface(ConeSlab(2, 1, eps, R), (1.0, 0.0))
        assert est.value == pytest.approx(expect, rel=1e-11)

    def test_translated_ball_centroid_volume(self):
        # int_{B((t,0),r)} x_1 dx = t pi r^2
        est = weighted_volume(TranslatedBall(2, 1, 5.0, 1.0), (1.0, 0.0))
        assert est.value == pytest.approx(5.0 * math.pi, rel=1e-11)

    def test_translated_ball_transverse_moment(self):
        # int_{B((t,0),r)} |x_2| dx = 4 r^3 / 3, independent of t
        est = weighted_volume(TranslatedBall(2, 1, 6.0, 1.5), (0.0, 1.0))
        assert est.value == pytest.approx(4.0 * 1.5**3 / 3.0, rel=1e-11)

    def test_translated_ball_plain_perimeter(self):
        est = weighted_surface(TranslatedBall(2, 1, 5.0, 1.0), (0.0, 0.0))
        assert est.value == pytest.approx(2.0 * math.pi, rel=1e-9)

    def test_translated_ball_sphere_area(self):
        est = weighted_surface(TranslatedBall(3, 1, 5.0, 1.0), (0.0, 0.0, 0.0))
        assert est.value == pytest.approx(4.0 * math.pi, rel=1e-9)


class TestBounds:
    """The integral inequalities behind the degeneration estimates."""

    @pytest.mark.parametrize(
        "N,i,eps,B",
        [
            (2, 1, 0.3, (1.0, 2.0)),
            (2, 1, 0.05, (0.0, 0.0)),
            (3, 2, 0.4, (1.0, 1.0, 0.0)),
            (3, 1, 0.1, (0.5, 0.0, 1.5)),
        ],
    )
    def test_cone_slab_volume_lower_bound(self, N, i, eps, B):
        # m_B(slab) >= eps^{b_i+1} R^{N+b} / ((b_i+1)(1+eps^2)^{(N+b)/2})
        #              * int_{B+_{N-1}} xbar^{Bbar} |xbar|^{b_i+1}
        R = 1.0
        b = sum(B)
        b_i = B[i - 1]
        Bbar = B[: i - 1] + B[i:]
        moment = unit_orthant_ball_moment(Bbar, b_i + 1.0)
        bound = (
            eps ** (b_i + 1)
            * R ** (N + b)
            / ((b_i + 1) * (1 + eps * eps) ** ((N + b) / 2.0))
            * moment
        )
        est = weighted_volume(ConeSlab(N, i, eps, R), B)
        assert est.value >= bound * (1 - 1e-12)

    @pytest.mark.parametrize(
        "N,i,t,A",
        [
            (2, 1, 3.0, (1.0, 0.0)),
            (2, 1, 10.0, (2.0, 1.0)),
            (3, 2, 4.0, (1.0, 1.0, 1.0)),
            (3, 3, 7.0, (0.0, 2.0, 1.5)),
        ],
    )
    def test_translated_ball_surface_upper_bound(self, N, i, t, A):
        # P_A(B(t e_i, 1)) <= (1 + 2^{a_i}) t^{a_i}
        #                     * int_{B_{N-1}} xbar^{Abar} (1-|xbar|^2)^{-1/2}
        a_i = A[i - 1]
        Abar = A[: i - 1] + A[i:]
        M = N - 1
        disk_integral = (
            math.prod(gamma_fn((aj + 1.0) / 2.0) for aj in Abar)
            * math.sqrt(math.pi)
            / gamma_fn((M + sum(Abar) + 1.0) / 2.0)
        )
        bound = (1.0 + 2.0**a_i) * t**a_i * disk_integral
        est = weighted_surface(TranslatedBall(N, i, t, 1.0), A)
        assert est.value <= bound * (1 + 1e-12)

    @pytest.mark.parametrize(
        "lo,hi",
        [((0.0, 0.0), (1.0, 2.0)), ((0.5, 0.0, 1.0), (1.5, 2.0, 3.0))],
    )
    def test_box_face_areas_sum(self, lo, hi):
        side = [h - l for l, h in zip(lo, hi)]
        expect = 2.0 * sum(
            math.prod(s for j, s in enumerate(side) if j != k) for k in range(len(side))
        )
        est = weighted_surface(Box(lo, hi), (0.0,) * len(lo))
        assert est.value == pytest.approx(expect, rel=1e-12)


class TestMonteCarloAgreement:
    @pytest.mark.parametrize(
        "shape,E",
        [
            (ConeSlab(2, 1, 0.4, 1.0), (1.0, 0.5)),
            (ConeSlab(3, 2, 0.5, 1.0), (0.0, 1.0, 1.0)),
            (TranslatedBall(2, 1, 5.0, 1.0), (1.0, 1.0)),
            (TranslatedBall(3, 1, 6.0, 1.0), (2.0, 1.0, 0.0)),
        ],
    )
    def test_volume_within_four_sigma(self, shape, E):
        quad = weighted_volume(shape, E)
        mc = mc_volume(shape, E, MCSpec(400_000, 99))
        band = 4.0 * math.hypot(mc.stderr, quad.abs_error_est) + 1e-12
        assert abs(quad.value - mc.value) <= band

    @pytest.mark.parametrize(
        "shape,E",
        [
            (ConeSlab(2, 1, 0.4, 1.0), (1.0, 0.5)),
            (ConeSlab(3, 1, 0.5, 1.0), (1.0, 0.0, 1.0)),
            (TranslatedBall(3, 2, 5.0, 1.0), (1.0, 1.0, 1.0)),
            (OrthantBall(3, 1.2), (0.5, 1.0, 0.0)),
        ],
    )
    def test_surface_within_four_sigma(self, shape, E):
        quad = weighted_surface(shape, E)
        mc = mc_surface(shape, E, MCSpec(400_000, 101))
        band = 4.0 * math.hypot(mc.stderr, quad.abs_error_est) + 1e-12
        assert abs(quad.value - mc.value) <= band


class TestContains:
    def test_cone_slab_membership(self):
        shape = ConeSlab(2, 1, 0.5, 1.0)
        inside = np.array([[0.01, 0.5], [0.1, 0.9]])
        outside = np.array([[0.5, 0.5], [0.0, 0.5], [0.1, 1.2]])
        assert np.all(shape.contains(inside))
        assert not np.any(shape.contains(outside))

    def test_translated_ball_membership(self):
        shape = TranslatedBall(2, 1, 5.0, 1.0)
        assert shape.contains(np.array([[5.0, 0.0], [5.5, 0.3]])).all()
        assert not shape.contains(np.array([[5.0, 1.1]])).any()

    def test_orthant_ball_membership(self):
        shape = OrthantBall(2, 1.0)
        assert shape.contains(np.array([[0.5, 0.5]])).all()
        assert not shape.contains(np.array([[-0.5, 0.5], [0.8, 0.8]])).any()


class TestDilation:
    def test_orthant_ball(self):
        assert dilate(OrthantBall(2, 1.0), 2.0) == OrthantBall(2, 2.0)

    def test_box(self):
        assert dilate(Box((0.0, 0.0), (1.0, 1.0)), 3.0) == Box((0.0, 0.0), (3.0, 3.0))

    def test_cone_slab_aperture_is_scale_free(self):
        out = dilate(ConeSlab(2, 1, 0.3, 1.0), 2.0)
        assert out == ConeSlab(2, 1, 0.3, 2.0)

    def test_translated_ball_moves_and_grows(self):
        out = dilate(TranslatedBall(2, 1, 5.0, 1.0), 2.0)
        assert out == TranslatedBall(2, 1, 10.0, 2.0)

    @pytest.mark.parametrize(
        "shape,B",
        [
            (ConeSlab(2, 1, 0.4, 1.0), (1.0, 0.0)),
            (TranslatedBall(2, 1, 5.0, 1.0), (0.0, 1.0)),
            (Box((0.25, 0.5), (1.0, 2.0)), (2.0, 0.0)),
        ],
    )
    def test_volume_homogeneity(self, shape, B):
        lam = 1.7
        N = shape.dim
        b = sum(B)
        base = weighted_volume(shape, B).value
        scaled = weighted_volume(dilate(shape, lam), B).value
        assert scaled == pytest.approx(lam ** (N + b) * base, rel=1e-10)


class TestParseGrammar:
    def test_orthant_ball(self):
        assert parse_shape("orthant-ball --R 1.5", dim=2) == OrthantBall(2, 1.5)

    def test_box(self):
        assert parse_shape("box --lo 0,0 --hi 1,2") == Box((0.0, 0.0), (1.0, 2.0))

    def test_translated_ball(self):
        assert parse_shape("tball --axis 1 --t 100 --r 1", dim=2) == TranslatedBall(
            2, 1, 100.0, 1.0
        )

    def test_cone_slab(self):
        assert parse_shape("cone-slab --axis 1 --eps 1e-3 --R 1", dim=3) == ConeSlab(
            3, 1, 1e-3, 1.0
        )

    def test_unknown_family_rejected(self):
        with pytest.raises(ValueError):
            parse_shape("pyramid --R 1", dim=2)

    def test_orthant_ball_needs_dimension(self):
        with pytest.raises(ValueError):
            parse_shape("orthant-ball --R 1")

    def test_describe_round_trips_family_name(self):
        for shape in (OrthantBall(2, 1.0), Box((0.0, 0.0), (1.0, 1.0)),
                      TranslatedBall(2, 1, 5.0, 1.0), ConeSlab(2, 1, 0.5, 1.0)):
            desc = shape.describe()
            assert isinstance(desc, dict) and "family" in desc
