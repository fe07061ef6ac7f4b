"""
Tests for walk-on-spheres harmonic measure.
"""

import math

import numpy as np
import pytest

from semiflow.errors import DomainViolation, PreconditionError
from semiflow.geometry import JordanDomain
from semiflow.hmeasure import (
    MIN_WALKS,
    BoundarySubset,
    HMEstimate,
    check_lavrentiev_family,
    derive_inner_set,
    disc_arc_oracle,
    harmonic_measure,
    lavrentiev_experiment,
    mid_cut_instance,
    rectangle_side_oracle,
    sample_exits,
    splitmix64,
    subordination_check,
    uniform_draws,
    walk_keys,
)


@pytest.fixture(scope="module")
def disc_polygon():
    return JordanDomain.regular_polygon(0, 1.0, 1024, name="disc")


class TestRandomStreams:
    """Counter-based draws."""

    def test_splitmix64_reference(self):
        assert int(splitmix64(np.uint64(0))) == 0xE220A8397B1DCDAF

    def test_draws_are_uniform_and_keyed(self):
        keys = walk_keys(5, np.arange(10_000, dtype=np.uint64))
        draws = uniform_draws(keys, 0)
        assert np.all((draws >= 0.0) & (draws < 1.0))
        assert abs(draws.mean() - 0.5) < 0.02
        assert np.array_equal(draws, uniform_draws(keys, 0))
        assert not np.array_equal(draws, uniform_draws(keys, 1))

    def test_seed_range(self):
        with pytest.raises(ValueError):
            walk_keys(-1, np.arange(3, dtype=np.uint64))


class TestBoundarySubset:
    """Normalised unions of boundary arcs."""

    def test_merging(self):
        subset = BoundarySubset(((1, 0.5, 1.0), (1, 0.0, 0.5), (0, 0.2, 0.2)))
        assert subset.arcs == ((1, 0.0, 1.0),)
        assert subset.to_list() == [[1, 0.0, 1.0]]

    def test_invalid_arc(self):
        with pytest.raises(ValueError):
            BoundarySubset(((0, 0.8, 0.2),))
        with pytest.raises(ValueError):
            BoundarySubset(((-1, 0.0, 1.0),))

    def test_measure_and_membership(self, unit_square):
        subset = BoundarySubset.edge(1)
        assert subset.measure(unit_square) == 1.0
        assert subset.contains(np.array([0, 1, 1]), np.array([0.5, 0.0, 1.0])).tolist() == [
            False,
            True,
            True,
        ]
        assert BoundarySubset.full(unit_square).measure(unit_square) == 4.0

    def test_segment_out_of_range(self, unit_square):
        with pytest.raises(ValueError, match="segment 7"):
            BoundarySubset.segments([7]).measure(unit_square)

    def test_arclength_wraps(self, unit_square):
        subset = BoundarySubset.from_arclength(unit_square, 3.5, 4.5)
        assert subset.arcs == ((0, 0.0, 0.5), (3, 0.5, 1.0))
        assert subset.measure(unit_square) == pytest.approx(1.0)
        assert BoundarySubset.from_arclength(unit_square, 0.0, 9.0).measure(unit_square) == 4.0

    def test_union(self):
        left = BoundarySubset.edge(0)
        assert left.union(BoundarySubset.edge(2)).arcs == ((0, 0.0, 1.0), (2, 0.0, 1.0))

    def test_disc_arc(self, disc_polygon):
        half = BoundarySubset.disc_arc(disc_polygon, 0.0, math.pi)
        assert half.measure(disc_polygon) == pytest.approx(disc_polygon.length / 2)
        wrapped = BoundarySubset.disc_arc(disc_polygon, -math.pi / 2, math.pi / 2)
        assert wrapped.measure(disc_polygon) == pytest.approx(disc_polygon.length / 2)
        with pytest.raises(ValueError):
            BoundarySubset.disc_arc(disc_polygon, 1.0, 0.0)

    def test_centered_arc(self, unit_square):
        arc = BoundarySubset.centered_arc(unit_square, 0.5 + 0.1j, 0.2)
        ((segment, u0, u1),) = arc.arcs
        assert segment == 0
        assert (u0, u1) == pytest.approx((0.4, 0.6))

    def test_oracle(self):
        assert disc_arc_oracle(0.0, math.pi) == 0.5
        with pytest.raises(ValueError):
            disc_arc_oracle(1.0, 0.0)


class TestHarmonicMeasure:
    """Estimates against exact values."""

    def test_disc_quarter_arc(self, disc_polygon):
        arc = BoundarySubset.disc_arc(disc_polygon, 0.0, math.pi / 2)
        estimate = harmonic_measure(disc_polygon, 0j, arc, 20_000, seed=1)
        assert abs(estimate.value - disc_arc_oracle(0.0, math.pi / 2)) <= 4 * estimate.stderr
        assert estimate.ell == pytest.approx(disc_polygon.length / 4, rel=1e-3)
        assert estimate.n_walks == 20_000

    def test_square_sides_share_one_walk_set(self, unit_square):
        sides = [BoundarySubset.edge(k) for k in range(4)]
        estimates = harmonic_measure(unit_square, 0.5 + 0.5j, sides, 20_000, seed=2)
        assert sum(e.hits for e in estimates) == 20_000
        for estimate in estimates:
            assert abs(estimate.value - 0.25) <= 4 * estimate.stderr

    def test_full_boundary(self, unit_square):
        estimate = harmonic_measure(
            unit_square, 0.2 + 0.7j, BoundarySubset.full(unit_square), MIN_WALKS, seed=0
        )
        assert estimate.value == 1.0
        assert estimate.stderr == 0.0

    def test_bit_exact_across_chunking(self, unit_square):
        serial = sample_exits(unit_square, 0.3 + 0.6j, 3000, seed=9, workers=1)
        chunked = sample_exits(unit_square, 0.3 + 0.6j, 3000, seed=9, chunk_size=700, workers=3)
        assert np.array_equal(serial.segments, chunked.segments)
        assert np.array_equal(serial.u, chunked.u)

    def test_seed_changes_sample(self, unit_square):
        first = sample_exits(unit_square, 0.5 + 0.5j, 2000, seed=0)
        second = sample_exits(unit_square, 0.5 + 0.5j, 2000, seed=1)
        assert not np.array_equal(first.u, second.u)
        assert first.n_walks == 2000

    def test_exit_points_lie_on_boundary(self, unit_square):
        sample = sample_exits(unit_square, 0.5 + 0.5j, 2000, seed=4)
        points = unit_square.point_at(sample.segments, sample.u)
        assert np.all(unit_square.distance(points) <= 1e-12)
        assert np.all(sample.segments >= 0)

    def test_rejects_too_few_walks(self, unit_square):
        with pytest.raises(ValueError, match=str(MIN_WALKS)):
            harmonic_measure(unit_square, 0.5 + 0.5j, BoundarySubset.edge(0), MIN_WALKS - 1, 0)

    def test_rejects_exterior_start(self, unit_square):
        with pytest.raises(DomainViolation):
            sample_exits(unit_square, 2.0, 10, seed=0)

    def test_estimate_range(self):
        with pytest.raises(ValueError, match="out of range"):
            HMEstimate(1.5, 0.0, 1000, 1e-6, 0)


class TestLavrentiev:
    """Small arcs on families of domains."""

    def test_square_family(self, unit_square):
        report = lavrentiev_experiment(
            [unit_square], 1.0, [0.5 + 0.5j], 2000, seed=0, ratios=(0.01, 0.05)
        )
        assert len(report.rows) == 2
        assert report.full_boundary == [1.0]
        assert all(row.passed for row in report.rows)
        assert report.rho_hat == 0.05
        assert report.to_dict()["rows"][0]["domain"] == "square"

    def test_preconditions(self, unit_square):
        big = JordanDomain.regular_polygon(0.5 + 0.5j, 1.0, 64)
        with pytest.raises(PreconditionError, match="4a"):
            check_lavrentiev_family([big], [0.5 + 0.5j], 1.0)
        with pytest.raises(PreconditionError, match="a/4"):
            check_lavrentiev_family([unit_square], [0.1 + 0.5j], 1.0)
        with pytest.raises(PreconditionError, match="interior"):
            check_lavrentiev_family([unit_square], [2.0], 1.0)


class TestSubordination:
    """Nested domains."""

    def test_mid_cut(self):
        inner, outer, w, gamma = mid_cut_instance()
        assert w == 0.5 + 0.5j
        assert float(inner.distance(w)) == pytest.approx(0.25)
        assert derive_inner_set(inner, outer, gamma).arcs == ((3, 0.0, 1.0),)
        result = subordination_check(inner, outer, w, gamma, 4000, seed=0)
        assert result.passed
        assert result.inner.value >= result.outer.value
        assert result.to_dict()["passed"] is True

    def test_cut_near_left_side_stays_near_one_quarter(self):
        inner, outer, w, gamma = mid_cut_instance(offset=0.45)
        exact = rectangle_side_oracle(0.95, 1.0, 0.45, 0.5)
        assert exact == pytest.approx(0.2912, abs=1e-3)
        cut = subordination_check(inner, outer, w, gamma, 20_000, seed=3).inner
        assert abs(cut.value - exact) <= 4 * cut.stderr
        assert cut.value + 3 * cut.stderr >= 0.25
        assert cut.value - 3 * cut.stderr <= 0.30

    @pytest.mark.parametrize("offset", [0.1, 0.5, 0.75])
    def test_offset_range(self, offset):
        with pytest.raises(PreconditionError, match="offset"):
            mid_cut_instance(offset=offset)

    def test_requires_nesting(self):
        inner, outer, w, gamma = mid_cut_instance()
        with pytest.raises(PreconditionError, match="not contained"):
            subordination_check(outer, inner, w, gamma, 4000, seed=0)
        with pytest.raises(PreconditionError, match="not interior"):
            subordination_check(inner, outer, 0.1 + 0.5j, gamma, 4000, seed=0)


class TestRectangleOracle:
    def test_square_centre(self):
        assert rectangle_side_oracle(1.0, 1.0, 0.5, 0.5) == pytest.approx(0.25, abs=1e-12)

    def test_sides_sum_to_one(self):
        # each side of [0, 2] x [0, 1] seen from (0.7, 0.5), rotated onto the left side
        left = rectangle_side_oracle(2.0, 1.0, 0.7, 0.5)
        right = rectangle_side_oracle(2.0, 1.0, 1.3, 0.5)
        bottom = rectangle_side_oracle(1.0, 2.0, 0.5, 0.7)
        top = rectangle_side_oracle(1.0, 2.0, 0.5, 1.3)
        assert left + right + bottom + top == pytest.approx(1.0, abs=1e-10)

    def test_matches_walks(self):
        box = JordanDomain([0.0, 2.0, 2.0 + 1.0j, 1.0j], name="box")
        estimate = harmonic_measure(box, 0.7 + 0.4j, BoundarySubset.edge(3), 20_000, seed=5)
        exact = rectangle_side_oracle(2.0, 1.0, 0.7, 0.4)
        assert abs(estimate.value - exact) <= 4 * estimate.stderr

    def test_rejects_exterior_point(self):
        with pytest.raises(ValueError, match="interior"):
            rectangle_side_oracle(1.0, 1.0, 1.5, 0.5)
