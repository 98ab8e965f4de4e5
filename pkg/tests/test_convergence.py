import math

import numpy as np
import pytest

from specbound import Ball, Box, Interval, refine

from test_discretize import interval_eigenvalues


@pytest.fixture(scope="module")
def interval_study():
    return refine(Interval(0.0, 1.0), 1.0 / 8, 4)


@pytest.fixture(scope="module")
def disk_study():
    return refine(Ball([0.0, 0.0], 1.0), 1.0 / 8, 4)


class TestRefineBoxes:
    def test_interval_extrapolates_to_pi_squared(self, interval_study):
        assert interval_study.extrapolated == pytest.approx(math.pi**2, rel=1e-5)

    def test_interval_observed_order_is_two(self, interval_study):
        assert interval_study.observed_order == pytest.approx(2.0, abs=0.1)

    def test_interval_levels_match_closed_form(self, interval_study):
        for h, lam in zip(interval_study.spacings, interval_study.lambda1_values):
            n_points = round(1.0 / h) - 1
            expected = interval_eigenvalues(n_points, h)[0]
            assert lam == pytest.approx(expected, rel=1e-9)

    def test_interval_sequence_monotone(self, interval_study):
        assert interval_study.monotone

    def test_square_extrapolates_to_two_pi_squared(self):
        study = refine(Box([[0.0, 1.0], [0.0, 1.0]]), 1.0 / 8, 4)
        assert study.extrapolated == pytest.approx(2.0 * math.pi**2, rel=1e-4)
        assert study.observed_order == pytest.approx(2.0, abs=0.1)

    def test_extrapolation_insensitive_to_h_start(self):
        a = refine(Interval(0.0, 1.0), 1.0 / 8, 4)
        b = refine(Interval(0.0, 1.0), 1.0 / 6, 4)
        assert abs(a.extrapolated - b.extrapolated) <= max(
            a.error_estimate, b.error_estimate
        )


class TestRefineDisk:
    def test_disk_extrapolates_to_bessel_zero_squared(self, disk_study):
        assert disk_study.extrapolated == pytest.approx(2.404825557695773**2, rel=1e-2)

    def test_disk_order_reported_below_two(self, disk_study):
        # point-omission boundaries on curved domains degrade the order;
        # the study reports what it observed instead of asserting 2
        assert 0.3 <= disk_study.observed_order <= 2.0

    def test_error_estimate_nonnegative(self, disk_study):
        assert disk_study.error_estimate >= 0.0


class TestStudyShape:
    def test_spacings_strictly_decreasing(self):
        study = refine(Interval(0.0, 1.0), 1.0 / 8, 4)
        assert np.all(np.diff(study.spacings) < 0)
        assert study.spacings.shape[0] == 4

    def test_requires_three_levels(self):
        with pytest.raises(ValueError):
            refine(Interval(0.0, 1.0), 1.0 / 8, 2)

    def test_point_cap_enforced(self):
        with pytest.raises(ValueError, match="cap"):
            refine(Interval(0.0, 1.0), 1.0 / 8, 4, point_cap=20)

    def test_finest_level_artifacts_kept(self):
        study = refine(Interval(0.0, 1.0), 1.0 / 8, 3)
        assert study.finest_grid is not None
        assert study.finest_grid.spacing == pytest.approx(1.0 / 32)
        assert study.finest_spectrum.eigenvalues[0] == pytest.approx(
            study.lambda1_values[-1]
        )

    def test_csv_layout(self):
        study = refine(Interval(0.0, 1.0), 1.0 / 8, 3)
        lines = study.to_csv().strip().split("\n")
        assert lines[0] == "h,lambda1,diff,extrapolant"
        assert len(lines) == 4
        first = lines[1].split(",")
        assert first[2] == "" and first[3] == ""
        last = lines[-1].split(",")
        assert float(last[3]) == pytest.approx(study.extrapolated)

    def test_deterministic_repeat(self):
        a = refine(Interval(0.0, 1.0), 1.0 / 8, 3)
        b = refine(Interval(0.0, 1.0), 1.0 / 8, 3)
        assert a.to_csv() == b.to_csv()
        assert np.array_equal(a.lambda1_values, b.lambda1_values)
