import math

import numpy as np
import pytest

from specbound import (
    Ball,
    Box,
    DomainError,
    Ellipse,
    Interval,
    Polygon,
    RasterMask,
    domain_from_spec,
    unit_ball_volume,
)
from specbound.geometry import _agm_ellipse_perimeter

from conftest import L_VERTICES


class TestUnitBallVolume:
    def test_known_dimensions(self):
        assert unit_ball_volume(1) == pytest.approx(2.0, abs=1e-15)
        assert unit_ball_volume(2) == pytest.approx(math.pi, abs=1e-15)
        assert unit_ball_volume(3) == pytest.approx(4.0 * math.pi / 3.0, abs=1e-14)

    def test_higher_dimensions_follow_gamma_recursion(self):
        # C_4 = pi^2/2, C_5 = 8 pi^2 / 15
        assert unit_ball_volume(4) == pytest.approx(math.pi**2 / 2.0, rel=1e-14)
        assert unit_ball_volume(5) == pytest.approx(8.0 * math.pi**2 / 15.0, rel=1e-14)

    def test_rejects_nonpositive_dimension(self):
        with pytest.raises(ValueError):
            unit_ball_volume(0)


class TestContains:
    def test_disk_center_and_boundary(self, unit_disk):
        assert unit_disk.contains([0.0, 0.0])
        assert unit_disk.contains([1.0, 0.0])  # boundary is inclusive
        assert not unit_disk.contains([1.0001, 0.0])

    def test_l_polygon_removed_quadrant(self, l_polygon):
        assert not l_polygon.contains([1.5, 1.5])
        assert l_polygon.contains([0.5, 0.5])
        assert l_polygon.contains([1.0, 1.0])  # reentrant corner is boundary
        assert not l_polygon.strictly_contains([1.0, 1.0])

    def test_polygon_edges_are_inclusive(self, l_polygon):
        assert l_polygon.contains([1.0, 1.5])
        assert l_polygon.contains([0.0, 0.0])
        assert not l_polygon.strictly_contains([1.0, 1.5])

    def test_dimension_mismatch_raises(self, unit_disk):
        with pytest.raises(DomainError):
            unit_disk.contains([0.0, 0.0, 0.0])

    def test_interval_endpoints(self, unit_interval):
        assert unit_interval.contains([0.0])
        assert unit_interval.contains([1.0])
        assert not unit_interval.strictly_contains([0.0])
        assert not unit_interval.contains([-0.001])

    def test_mask_strict_interior_excludes_outer_faces(self, block_mask):
        assert block_mask.contains([0.0, 0.0])
        assert not block_mask.strictly_contains([0.0, 0.0])
        # interior cell face shared by two occupied cells stays interior
        assert block_mask.strictly_contains([0.25, 0.25])
        assert block_mask.strictly_contains([0.3, 0.9])


class TestMetrics:
    def test_ball3_closed_forms(self, unit_ball3):
        met = unit_ball3.metrics()
        assert met.volume == pytest.approx(4.0 * math.pi / 3.0, rel=1e-15)
        assert met.diameter == 2.0
        assert met.perimeter is None

    def test_unit_square(self, unit_square):
        met = unit_square.metrics()
        assert met.volume == 1.0
        assert met.diameter == pytest.approx(math.sqrt(2.0), rel=1e-15)
        assert met.perimeter == 4.0
        assert met.perimeter**2 >= 4.0 * math.pi * met.area

    def test_l_polygon(self, l_polygon):
        met = l_polygon.metrics()
        assert met.volume == pytest.approx(3.0, abs=1e-14)
        assert met.diameter == pytest.approx(2.0 * math.sqrt(2.0), rel=1e-15)
        assert met.perimeter == pytest.approx(8.0, abs=1e-14)

    def test_ball_scaling_law(self):
        for dim in (1, 2, 3):
            for radius in (0.5, 1.0, 2.5):
                met = Ball([0.0] * dim, radius).metrics()
                assert met.volume == pytest.approx(
                    unit_ball_volume(dim) * radius**dim, rel=1e-14
                )
                assert met.diameter == 2.0 * radius

    def test_volume_within_bounding_box(self, wide_ellipse, l_polygon):
        for dom in (wide_ellipse, l_polygon):
            met = dom.metrics()
            box = dom.bounding_box
            box_volume = float(np.prod(box[:, 1] - box[:, 0]))
            assert 0.0 < met.volume <= box_volume
            assert met.diameter <= float(np.linalg.norm(box[:, 1] - box[:, 0])) + 1e-12

    def test_isoperimetric_inequality(self, unit_square, l_polygon, wide_ellipse):
        for dom in (unit_square, l_polygon, wide_ellipse):
            met = dom.metrics()
            assert met.perimeter**2 - 4.0 * math.pi * met.area >= 0.0

    def test_disk_attains_isoperimetric_equality(self, unit_disk):
        met = unit_disk.metrics()
        assert met.perimeter**2 == pytest.approx(4.0 * math.pi * met.area, rel=1e-10)

    def test_ellipsoid_diameter_uses_largest_axis(self):
        met = Ellipse([0.0, 0.0, 0.0], [0.5, 2.0, 1.0]).metrics()
        assert met.diameter == 4.0
        assert met.volume == pytest.approx(
            4.0 * math.pi / 3.0 * 0.5 * 2.0 * 1.0, rel=1e-14
        )

    def test_ellipse_perimeter_against_quadrature(self):
        # arc-length quadrature of a trigonometric integrand; the composite
        # trapezoid rule on a periodic function converges spectrally
        for a, b in [(1.0, 0.5), (2.0, 1.0), (1.0, 1.0), (3.0, 0.25)]:
            t = np.linspace(0.0, 2.0 * math.pi, 8193)
            integrand = np.sqrt((a * np.sin(t)) ** 2 + (b * np.cos(t)) ** 2)
            reference = np.trapezoid(integrand, t)
            assert _agm_ellipse_perimeter(a, b) == pytest.approx(reference, rel=1e-10)

    def test_circle_perimeter_closed_form(self):
        assert _agm_ellipse_perimeter(1.0, 1.0) == pytest.approx(
            2.0 * math.pi, rel=1e-14
        )


class TestRasterMask:
    def test_volume_estimated_with_boundary_bound(self, block_mask):
        met = block_mask.metrics()
        assert met.volume == pytest.approx(4.0, rel=1e-14)
        assert met.exactness["volume"] == "estimated"
        # 8x8 block: 28 boundary cells of area 1/16
        assert met.error_bounds["volume"] == pytest.approx(28 / 16, rel=1e-14)

    def test_block_diameter_and_perimeter(self, block_mask):
        met = block_mask.metrics()
        assert met.diameter == pytest.approx(2.0 * math.sqrt(2.0), rel=1e-14)
        assert met.perimeter == pytest.approx(8.0, rel=1e-14)

    def test_mask_volume_converges_to_disk_volume(self, unit_disk):
        # rasterize the disk at shrinking cell size; the cell-count volume
        # must approach pi within the one-boundary-layer bound
        for cells in (16, 32, 64):
            c = 2.0 / cells
            centers = -1.0 + (np.arange(cells) + 0.5) * c
            xx, yy = np.meshgrid(centers, centers, indexing="ij")
            occ = (xx**2 + yy**2) <= 1.0
            met = RasterMask(occ.astype(int), c, origin=[-1.0, -1.0]).metrics()
            assert abs(met.volume - math.pi) <= met.error_bounds["volume"]

    def test_hole_detection(self):
        ring = np.ones((5, 5), dtype=int)
        ring[2, 2] = 0
        assert RasterMask(ring, 0.5).has_holes()
        notch = np.ones((5, 5), dtype=int)
        notch[0, 2] = 0
        assert not RasterMask(notch, 0.5).has_holes()

    def test_empty_mask_rejected(self):
        with pytest.raises(DomainError):
            RasterMask(np.zeros((4, 4), dtype=int), 0.5)


class TestValidation:
    def test_polygon_must_be_counterclockwise(self):
        with pytest.raises(DomainError):
            Polygon(list(reversed(L_VERTICES)))

    def test_polygon_must_be_simple(self):
        bowtie = [[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]]
        with pytest.raises(DomainError):
            Polygon(bowtie)

    def test_interval_needs_positive_length(self):
        with pytest.raises(DomainError):
            Interval(1.0, 1.0)

    def test_ball_needs_positive_radius(self):
        with pytest.raises(DomainError):
            Ball([0.0, 0.0], 0.0)

    def test_dim_limited_to_three(self):
        with pytest.raises(DomainError):
            Box([[0, 1]] * 4)


class TestSpecRoundTrip:
    @pytest.mark.parametrize(
        "make",
        [
            lambda: Interval(0.0, 1.0),
            lambda: Box([[0.0, 2.0], [0.0, 1.0]]),
            lambda: Ball([0.5, 0.5, 0.5], 0.5),
            lambda: Ellipse([0.0, 0.0], [1.0, 0.5]),
            lambda: Polygon(L_VERTICES),
            lambda: RasterMask(np.ones((3, 4), dtype=int), 0.25, origin=[1.0, -1.0]),
        ],
    )
    def test_to_spec_from_spec_identity(self, make):
        dom = make()
        again = domain_from_spec(dom.to_spec())
        assert again == dom
        assert again.to_spec() == dom.to_spec()

    def test_missing_kind_names_field(self):
        with pytest.raises(DomainError, match="kind"):
            domain_from_spec({"dim": 1, "params": {"a": 0, "b": 1}})

    def test_missing_param_names_field(self):
        with pytest.raises(DomainError, match="radius"):
            domain_from_spec({"kind": "ball", "dim": 2, "params": {"center": [0, 0]}})

    def test_wrong_dim_rejected(self):
        with pytest.raises(DomainError, match="dim"):
            domain_from_spec(
                {"kind": "ball", "dim": 3, "params": {"center": [0, 0], "radius": 1}}
            )


class TestMembershipFrequency:
    def test_sampled_frequency_matches_volume_fraction(self, unit_disk, l_polygon):
        # fixed-seed statistical check: empirical hit rate inside the
        # bounding box approaches volume / box volume (4-sigma band)
        rng = np.random.default_rng(20260810)
        for dom in (unit_disk, l_polygon):
            box = dom.bounding_box
            met = dom.metrics()
            samples = 40000
            pts = rng.uniform(box[:, 0], box[:, 1], size=(samples, dom.dim))
            hits = float(np.mean(dom.membership(pts)))
            expected = met.volume / float(np.prod(box[:, 1] - box[:, 0]))
            sigma = math.sqrt(expected * (1.0 - expected) / samples)
            assert abs(hits - expected) <= 4.0 * sigma
