"""
Tests for polylines, the segment index and Jordan domains.
"""

import numpy as np
import pytest

from semiflow.cplane import quasi_random_disc
from semiflow.errors import GeometryError
from semiflow.geometry import JordanDomain, Polyline, project_onto_segments, signed_area


class TestPolyline:
    """Vertex chains."""

    def test_length(self):
        assert Polyline([0, 1, 1 + 1j]).length() == 2.0
        assert len(Polyline([0, 1, 1 + 1j])) == 3

    def test_rejects_short_and_repeated(self):
        with pytest.raises(GeometryError):
            Polyline([1j])
        with pytest.raises(GeometryError) as excinfo:
            Polyline([0, 1, 1, 2])
        assert excinfo.value.point == 1

    def test_rejects_non_finite(self):
        with pytest.raises(GeometryError, match="finite"):
            Polyline([0, complex(np.nan, 0)])

    def test_from_points_drops_repeats(self):
        line = Polyline.from_points([0, 0, 1, 1, 2])
        assert line.vertices.tolist() == [0, 1, 2]

    def test_vertices_are_read_only(self):
        line = Polyline([0, 1])
        with pytest.raises(ValueError):
            line.vertices[0] = 5

    def test_concatenate_merges_shared_vertex(self):
        joined = Polyline([0, 1]).concatenate(Polyline([1, 2]))
        assert joined.vertices.tolist() == [0, 1, 2]
        assert Polyline([0, 1]).concatenate(Polyline([3, 4])).start == 0
        assert Polyline([0, 1, 2]).reversed().start == 2

    def test_csv(self, tmp_path):
        path = tmp_path / "curve.csv"
        line = Polyline([0.1 + 0.2j, 1 / 3 + 1j, 2.0])
        line.to_csv(path)
        assert path.read_text().splitlines()[0] == "re,im"
        assert np.array_equal(Polyline.from_csv(path).vertices, line.vertices)


class TestJordanDomain:
    """Closed simple positively oriented polygons."""

    def test_square(self, unit_square):
        assert unit_square.length == 4.0
        assert unit_square.area == pytest.approx(1.0)
        assert unit_square.diameter == pytest.approx(np.sqrt(2.0))
        assert unit_square.segment_count == 4

    def test_square_subdivision(self):
        square = JordanDomain.square(1j, 2.0, per_side=5)
        assert square.segment_count == 20
        assert square.vertices[5] == 2 + 1j

    def test_membership(self, unit_square):
        assert unit_square.contains(0.5 + 0.5j) is True
        assert unit_square.contains(0.5) is False
        assert unit_square.contains(2.0) is False
        assert unit_square.contains(np.array([0.25 + 0.75j, -1.0])).tolist() == [True, False]

    def test_closes_open_chain(self):
        domain = JordanDomain([0, 1, 1 + 1j, 1j])
        assert domain.vertices[-1] == domain.vertices[0]

    def test_rejects_clockwise(self):
        with pytest.raises(GeometryError, match="positively oriented"):
            JordanDomain([0, 1j, 1 + 1j, 1])

    def test_rejects_self_intersection(self):
        with pytest.raises(GeometryError, match="not simple"):
            JordanDomain([0, 1 + 1j, 1, 1j])

    def test_rejects_two_vertices(self):
        with pytest.raises(GeometryError):
            JordanDomain([0, 1])

    def test_distance_and_nearest(self, unit_square):
        assert unit_square.distance(0.5 + 0.5j) == pytest.approx(0.5)
        assert unit_square.distance(0.5 + 0.1j) == pytest.approx(0.1)
        dist, seg, u = unit_square.nearest(0.5 + 0.1j)
        assert int(seg[0]) == 0
        assert float(u[0]) == pytest.approx(0.5)

    def test_arclength_addressing(self, unit_square):
        seg, u = unit_square.locate_arclength(1.5)
        assert int(seg) == 1
        assert unit_square.point_at(seg, u) == pytest.approx(1 + 0.5j)
        seg, u = unit_square.locate_arclength(4.25)
        assert int(seg) == 0
        assert float(u) == pytest.approx(0.25)

    def test_contains_domain(self):
        outer = JordanDomain.square(0, 2)
        assert outer.contains_domain(JordanDomain.square(0.5 + 0.5j, 1))
        assert outer.contains_domain(JordanDomain.square(0, 1))
        assert not outer.contains_domain(JordanDomain.square(1.5, 1))

    def test_regular_polygon(self):
        polygon = JordanDomain.regular_polygon(1j, 2.0, 64)
        assert polygon.contains(1j) is True
        assert polygon.vertices[0] == pytest.approx(2 + 1j)
        assert polygon.length == pytest.approx(2 * 64 * 2.0 * np.sin(np.pi / 64))

    def test_json(self, tmp_path):
        square = JordanDomain.square(0, 1, name="unit")
        document = dict(square.to_json(), subsets=[[[0, 0.0, 1.0]]])
        domain, subsets = JordanDomain.from_json(document)
        assert domain.name == "unit"
        assert domain.length == 4.0
        assert subsets == [[[0, 0.0, 1.0]]]

    def test_json_malformed(self):
        with pytest.raises(GeometryError, match="Malformed"):
            JordanDomain.from_json({"name": "x"})

    def test_describe(self, unit_square):
        assert unit_square.describe() == {
            "name": "square",
            "segments": 4,
            "length": 4.0,
            "diameter": pytest.approx(np.sqrt(2.0)),
        }


class TestSegmentIndex:
    """Bucketed distance queries."""

    def test_query_never_overestimates(self):
        """Index radii are lower bounds, exact where flagged."""
        domain = JordanDomain.regular_polygon(0, 1.0, 256)
        q = quasi_random_disc(2000, seed=11, max_radius=0.99)
        brute = np.min(
            project_onto_segments(q[:, None], domain.a[None, :], domain.b[None, :])[0], axis=1
        )
        radius, seg, u, exact = domain.index.query(q)
        assert np.all(radius <= brute + 1e-12)
        assert np.all(radius > 0)
        assert np.allclose(radius[exact], brute[exact], rtol=0, atol=1e-12)
        assert np.allclose(domain.distance(q), brute, rtol=0, atol=1e-12)


def test_signed_area_orientation():
    ccw = np.array([0, 1, 1 + 1j, 0])
    assert signed_area(ccw) == pytest.approx(0.5)
    assert signed_area(ccw[::-1]) == pytest.approx(-0.5)
