"""
Polylines, a bucketed segment index and closed Jordan polyline domains.

These are the shared geometric types of the curves and harmonic-measure
modules; both re-export them.
"""

import csv
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from scipy.spatial import ConvexHull

from .errors import GeometryError

logger = logging.getLogger(__name__)

# Work-array budget (elements) for chunked all-pairs computations
_PAIR_BUDGET = 1_000_000

# Cells whose centre lies within this many half-diagonals of the boundary keep candidate lists
_NEAR_FACTOR = 4.0


def _cross(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.real(u) * np.imag(v) - np.imag(u) * np.real(v)


def project_onto_segments(
    q: np.ndarray, a: np.ndarray, b: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Closest points of segments [a, b] to q (broadcasting).

    Returns:
        (distance, parameter u in [0, 1], closest point)
    """
    d = b - a
    u = np.clip(np.real((q - a) * np.conj(d)) / (np.abs(d) ** 2), 0.0, 1.0)
    p = a + u * d
    return np.abs(q - p), u, p


@dataclass(frozen=True, eq=False)
class Polyline:
    """
    Finite sequence of at least two vertices with distinct consecutive entries.

    Example:
        >>> Polyline([0, 1, 1 + 1j]).length()
        2.0
    """

    vertices: np.ndarray

    def __post_init__(self):
        logger.debug("Polyline.__post_init__() entry")
        v = np.array(self.vertices, dtype=complex).ravel()
        if v.size < 2:
            raise GeometryError("Polyline needs at least two vertices")
        if not np.all(np.isfinite(v)):
            raise GeometryError("Polyline vertices must be finite")
        repeats = np.flatnonzero(np.diff(v) == 0)
        if repeats.size:
            point = complex(v[repeats[0]])
            raise GeometryError(f"Consecutive polyline vertices coincide at {point}", point)
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        logger.debug("Polyline.__post_init__() exit")

    @classmethod
    def from_points(cls, points) -> "Polyline":
        """Build a polyline, dropping consecutive duplicate points."""
        v = np.asarray(points, dtype=complex).ravel()
        if v.size:
            keep = np.concatenate([[True], np.diff(v) != 0])
            v = v[keep]
        return cls(v)

    def __len__(self) -> int:
        return int(self.vertices.size)

    @property
    def start(self) -> complex:
        return complex(self.vertices[0])

    @property
    def end(self) -> complex:
        return complex(self.vertices[-1])

    @property
    def is_closed(self) -> bool:
        return self.vertices.size >= 4 and self.vertices[0] == self.vertices[-1]

    def segment_lengths(self) -> np.ndarray:
        return np.abs(np.diff(self.vertices))

    def length(self) -> float:
        """Sum of segment lengths."""
        return float(math.fsum(self.segment_lengths()))

    def reversed(self) -> "Polyline":
        return Polyline(self.vertices[::-1])

    def concatenate(self, other: "Polyline") -> "Polyline":
        """Join two polylines, merging a shared end/start vertex."""
        tail = other.vertices[1:] if other.start == self.end else other.vertices
        return Polyline(np.concatenate([self.vertices, tail]))

    def to_csv(self, path: Union[str, Path]) -> None:
        """Write one ``re,im`` row per vertex."""
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["re", "im"])
            for z in self.vertices:
                writer.writerow([format(z.real, ".17g"), format(z.imag, ".17g")])

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "Polyline":
        rows = []
        with open(path, newline="") as handle:
            for row in csv.reader(handle):
                if not row or row[0].startswith("#") or row[0] == "re":
                    continue
                rows.append(complex(float(row[0]), float(row[1])))
        return cls(rows)


class SegmentIndex:
    """
    Uniform grid bucket index over a fixed set of segments.

    Cells near the boundary keep the candidate segments that can be nearest to any
    point of the cell, so lookups there are exact. Far cells only keep the exact
    distance from their centre, which yields a certified lower bound on the
    distance to the boundary.
    """

    def __init__(self, a: np.ndarray, b: np.ndarray, cells_per_side: Optional[int] = None):
        logger.debug("SegmentIndex.__init__() entry")
        self.a = np.asarray(a, dtype=complex)
        self.b = np.asarray(b, dtype=complex)
        n = self.a.size
        if cells_per_side is None:
            cells_per_side = int(np.clip(math.ceil(2.0 * math.sqrt(n)), 8, 128))

        pts = np.concatenate([self.a, self.b])
        lo = complex(pts.real.min(), pts.imag.min())
        hi = complex(pts.real.max(), pts.imag.max())
        extent = max(hi.real - lo.real, hi.imag - lo.imag)
        pad = 1e-9 * extent
        self.origin = lo - complex(pad, pad)
        self.cell = (extent + 2 * pad) / cells_per_side
        self.nx = max(1, math.ceil((hi.real - lo.real + 2 * pad) / self.cell))
        self.ny = max(1, math.ceil((hi.imag - lo.imag + 2 * pad) / self.cell))
        self.half_diagonal = self.cell * math.sqrt(0.5)

        ix, iy = np.meshgrid(np.arange(self.nx), np.arange(self.ny))
        self.centers = (
            self.origin + (ix.ravel() + 0.5) * self.cell + 1j * (iy.ravel() + 0.5) * self.cell
        )
        self.center_distance = self._brute_nearest(self.centers)[0]

        near_cells = np.flatnonzero(self.center_distance <= _NEAR_FACTOR * self.half_diagonal)
        self.row_of_cell = np.full(self.centers.size, -1, dtype=np.int64)
        self.row_of_cell[near_cells] = np.arange(near_cells.size)
        candidates: List[np.ndarray] = []
        for cell in near_cells:
            dist = project_onto_segments(self.centers[cell], self.a, self.b)[0]
            limit = self.center_distance[cell] + 2.0 * self.half_diagonal
            candidates.append(np.flatnonzero(dist <= limit))
        width = max((c.size for c in candidates), default=1)
        self.table = np.full((max(near_cells.size, 1), width), -1, dtype=np.int64)
        for row, cand in enumerate(candidates):
            self.table[row, : cand.size] = cand
        logger.debug(
            f"SegmentIndex.__init__() exit - {n} segments, {self.nx}x{self.ny} cells, "
            f"{near_cells.size} near, width {width}"
        )

    def _brute_nearest(self, q: np.ndarray):
        q = np.asarray(q, dtype=complex).ravel()
        dist = np.empty(q.size)
        seg = np.empty(q.size, dtype=np.int64)
        u = np.empty(q.size)
        step = max(1, _PAIR_BUDGET // max(1, self.a.size))
        for start in range(0, q.size, step):
            chunk = q[start : start + step, None]
            d, uu, _ = project_onto_segments(chunk, self.a[None, :], self.b[None, :])
            best = np.argmin(d, axis=1)
            rows = np.arange(best.size)
            dist[start : start + step] = d[rows, best]
            seg[start : start + step] = best
            u[start : start + step] = uu[rows, best]
        return dist, seg, u

    def _locate(self, q: np.ndarray):
        rel = q - self.origin
        ix = np.floor(rel.real / self.cell).astype(np.int64)
        iy = np.floor(rel.imag / self.cell).astype(np.int64)
        inside = (ix >= 0) & (ix < self.nx) & (iy >= 0) & (iy < self.ny)
        cell = np.where(inside, iy * self.nx + ix, 0)
        return cell, inside

    def _candidate_nearest(self, q: np.ndarray, rows: np.ndarray):
        cand = self.table[rows]
        valid = cand >= 0
        safe = np.where(valid, cand, 0)
        d, uu, _ = project_onto_segments(q[:, None], self.a[safe], self.b[safe])
        d = np.where(valid, d, np.inf)
        best = np.argmin(d, axis=1)
        pick = np.arange(best.size)
        return d[pick, best], safe[pick, best], uu[pick, best]

    def query(self, q: np.ndarray):
        """
        Distance information for walk-on-spheres steps.

        Returns:
            (radius, segment, u, exact) where ``radius`` never exceeds the true
            distance to the boundary. Where ``exact`` is True, radius is the exact
            distance and (segment, u) locate the nearest boundary point; elsewhere
            segment is -1.
        """
        q = np.asarray(q, dtype=complex).ravel()
        radius = np.empty(q.size)
        seg = np.full(q.size, -1, dtype=np.int64)
        u = np.zeros(q.size)
        exact = np.zeros(q.size, dtype=bool)

        cell, inside = self._locate(q)
        rows = np.where(inside, self.row_of_cell[cell], -1)

        near = inside & (rows >= 0)
        if near.any():
            d, s, uu = self._candidate_nearest(q[near], rows[near])
            radius[near], seg[near], u[near], exact[near] = d, s, uu, True

        far = inside & (rows < 0)
        if far.any():
            radius[far] = self.center_distance[cell[far]] - np.abs(q[far] - self.centers[cell[far]])

        outside = ~inside
        if outside.any():
            d, s, uu = self._brute_nearest(q[outside])
            radius[outside], seg[outside], u[outside], exact[outside] = d, s, uu, True
        return radius, seg, u, exact

    def nearest(self, q: np.ndarray):
        """Exact (distance, segment, u) for every query point."""
        q = np.asarray(q, dtype=complex).ravel()
        radius, seg, u, exact = self.query(q)
        if not exact.all():
            loose = ~exact
            radius[loose], seg[loose], u[loose] = self._brute_nearest(q[loose])
        return radius, seg, u


def _on_segment(p0, p1, q) -> np.ndarray:
    return (
        (np.minimum(p0.real, p1.real) <= q.real)
        & (q.real <= np.maximum(p0.real, p1.real))
        & (np.minimum(p0.imag, p1.imag) <= q.imag)
        & (q.imag <= np.maximum(p0.imag, p1.imag))
    )


def check_simple(a: np.ndarray, b: np.ndarray) -> None:
    """
    Pairwise test that the closed chain of segments [a_i, b_i] does not self-intersect.

    Raises:
        GeometryError: Naming the first offending segment pair
    """
    n = a.size
    d = b - a
    idx = np.arange(n)
    block = max(1, _PAIR_BUDGET // max(1, n))
    for start in range(0, n, block):
        i = idx[start : start + block][:, None]
        ai, bi, di = a[i], b[i], d[i]
        aj, bj, dj = a[None, :], b[None, :], d[None, :]
        o1 = _cross(di, aj - ai)
        o2 = _cross(di, bj - ai)
        o3 = _cross(dj, ai - aj)
        o4 = _cross(dj, bi - aj)
        hit = ((o1 * o2 < 0) & (o3 * o4 < 0)) | (
            ((o1 == 0) & _on_segment(ai, bi, aj))
            | ((o2 == 0) & _on_segment(ai, bi, bj))
            | ((o3 == 0) & _on_segment(aj, bj, ai))
            | ((o4 == 0) & _on_segment(aj, bj, bi))
        )
        j = idx[None, :]
        hit &= (j != i) & (j != (i + 1) % n) & (j != (i - 1) % n)
        if hit.any():
            r, c = np.argwhere(hit)[0]
            first = int(i[r, 0])
            raise GeometryError(
                f"Boundary is not simple: segments {first} and {int(c)} intersect",
                complex(a[first]),
            )
    following = np.roll(d, -1)
    backtrack = (_cross(d, following) == 0) & (np.real(d * np.conj(following)) < 0)
    if backtrack.any():
        k = int(np.flatnonzero(backtrack)[0])
        raise GeometryError(f"Boundary doubles back at vertex {k + 1}", complex(b[k]))


def signed_area(vertices: np.ndarray) -> float:
    """Shoelace area of a closed vertex chain (positive when counter-clockwise)."""
    x, y = vertices.real, vertices.imag
    return 0.5 * float(np.sum(x[:-1] * y[1:] - x[1:] * y[:-1]))


class JordanDomain:
    """
    Interior of a closed, simple, positively oriented polyline.

    The boundary is stored closed (first vertex repeated last). Segment ``k`` runs
    from ``vertices[k]`` to ``vertices[k + 1]``; boundary points are addressed as
    ``(segment, u)`` with ``u`` in [0, 1].

    Example:
        >>> square = JordanDomain.square(0, 1)
        >>> square.contains(0.5 + 0.5j)
        True
        >>> square.length
        4.0
    """

    def __init__(self, boundary, name: str = "", cells_per_side: Optional[int] = None):
        logger.debug("JordanDomain.__init__() entry")
        v = np.asarray(boundary.vertices if isinstance(boundary, Polyline) else boundary)
        v = np.asarray(v, dtype=complex).ravel()
        if v.size and v[0] != v[-1]:
            v = np.append(v, v[0])
        self.boundary = Polyline(v)
        if self.boundary.vertices.size < 4:
            raise GeometryError("Jordan domain needs at least three distinct vertices")
        self.vertices = self.boundary.vertices
        self.a = self.vertices[:-1]
        self.b = self.vertices[1:]
        check_simple(self.a, self.b)
        self.area = signed_area(self.vertices)
        if self.area <= 0:
            raise GeometryError("Jordan domain boundary must be positively oriented")
        self.name = name
        self.segment_lengths = np.abs(self.b - self.a)
        self.offsets = np.concatenate([[0.0], np.cumsum(self.segment_lengths)])
        self.length = float(math.fsum(self.segment_lengths))
        hull = self.a[ConvexHull(np.column_stack([self.a.real, self.a.imag])).vertices]
        self.diameter = float(np.max(np.abs(hull[:, None] - hull[None, :])))
        self.index = SegmentIndex(self.a, self.b, cells_per_side)
        logger.debug(f"JordanDomain.__init__() exit - {self.segment_count} segments")

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"JordanDomain{label}({self.segment_count} segments, length={self.length:.6g})"

    @property
    def segment_count(self) -> int:
        return int(self.a.size)

    @classmethod
    def square(
        cls, corner: complex = 0.0, side: float = 1.0, per_side: int = 1, name: str = "square"
    ) -> "JordanDomain":
        """Axis-parallel square; side j (bottom, right, top, left) starts at segment j*per_side."""
        if side <= 0 or per_side < 1:
            raise ValueError("square needs side > 0 and per_side >= 1")
        corner = complex(corner)
        steps = np.arange(per_side) / per_side
        path = np.concatenate(
            [
                corner + side * steps,
                corner + side + 1j * side * steps,
                corner + side + 1j * side - side * steps,
                corner + 1j * side - 1j * side * steps,
            ]
        )
        return cls(np.append(path, path[0]), name=name)

    @classmethod
    def regular_polygon(
        cls, center: complex = 0.0, radius: float = 1.0, n: int = 1024, name: str = "polygon"
    ) -> "JordanDomain":
        """Regular n-gon inscribed in the circle |z - center| = radius, vertex 0 at angle 0."""
        if n < 3 or radius <= 0:
            raise ValueError("regular_polygon needs n >= 3 and radius > 0")
        angles = 2.0 * np.pi * (np.arange(n) / n)
        path = complex(center) + radius * np.exp(1j * angles)
        return cls(np.append(path, path[0]), name=name)

    def contains(self, z):
        """Even-odd membership test for the open domain."""
        arr = np.asarray(z, dtype=complex)
        flat = arr.ravel()
        result = np.empty(flat.size, dtype=bool)
        ax, ay, bx, by = self.a.real, self.a.imag, self.b.real, self.b.imag
        step = max(1, _PAIR_BUDGET // self.segment_count)
        with np.errstate(divide="ignore", invalid="ignore"):
            for start in range(0, flat.size, step):
                chunk = flat[start : start + step]
                x, y = chunk.real[:, None], chunk.imag[:, None]
                straddle = (ay > y) != (by > y)
                xcross = ax + (y - ay) * (bx - ax) / (by - ay)
                crossings = np.count_nonzero(straddle & (x < xcross), axis=1)
                result[start : start + step] = crossings % 2 == 1
        on_boundary = self.distance(flat) <= 1e-14 * max(1.0, self.diameter)
        result &= ~np.atleast_1d(on_boundary)
        return bool(result[0]) if arr.ndim == 0 else result.reshape(arr.shape)

    def nearest(self, z):
        """Exact (distance, segment, u) of the nearest boundary point."""
        return self.index.nearest(np.atleast_1d(np.asarray(z, dtype=complex)))

    def distance(self, z):
        """Exact distance to the boundary."""
        arr = np.asarray(z, dtype=complex)
        dist = self.nearest(arr.ravel())[0]
        return float(dist[0]) if arr.ndim == 0 else dist.reshape(arr.shape)

    def point_at(self, segment, u):
        """Boundary point at parameter u of the given segment(s)."""
        segment = np.asarray(segment)
        return self.a[segment] + np.asarray(u) * (self.b[segment] - self.a[segment])

    def locate_arclength(self, s):
        """(segment, u) of the boundary point at arclength s from vertex 0, wrapping."""
        s = np.mod(np.asarray(s, dtype=float), self.length)
        seg = np.clip(np.searchsorted(self.offsets, s, side="right") - 1, 0, self.segment_count - 1)
        u = np.clip((s - self.offsets[seg]) / self.segment_lengths[seg], 0.0, 1.0)
        return seg, u

    def contains_domain(self, other: "JordanDomain", tol: Optional[float] = None) -> bool:
        """True when every vertex and edge midpoint of ``other`` lies in this closed domain."""
        tol = 1e-9 * self.diameter if tol is None else tol
        samples = np.concatenate([other.a, 0.5 * (other.a + other.b)])
        inside = self.contains(samples) | (self.distance(samples) <= tol)
        return bool(np.all(inside))

    def describe(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "segments": self.segment_count,
            "length": self.length,
            "diameter": self.diameter,
        }

    def to_json(self) -> Dict[str, Any]:
        return {"name": self.name, "vertices": [[z.real, z.imag] for z in self.vertices[:-1]]}

    @classmethod
    def from_json(cls, source: Union[str, Path, Dict[str, Any]]) -> Tuple["JordanDomain", list]:
        """
        Load a domain and its raw subsets from a JSON document.

        Format::

            {"name": "...", "vertices": [[x, y], ...],
             "subsets": [[[segment, u0, u1], ...], ...]}

        Returns:
            (domain, list of raw subsets)
        """
        if isinstance(source, dict):
            document = source
        else:
            document = json.loads(Path(source).read_text())
        try:
            vertices = [complex(x, y) for x, y in document["vertices"]]
        except (KeyError, TypeError, ValueError) as e:
            raise GeometryError(f"Malformed domain document: {e}") from None
        domain = cls(vertices, name=str(document.get("name", "")))
        return domain, list(document.get("subsets", []))


__all__ = [
    "Polyline",
    "SegmentIndex",
    "JordanDomain",
    "project_onto_segments",
    "check_simple",
    "signed_area",
]
