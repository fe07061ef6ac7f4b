"""
Trajectory post-processing: monotone envelopes, polyline lengths and proof domains.
"""

import logging
from typing import List, Optional, Sequence

import numpy as np

from .cplane import Square
from .errors import GeometryError
from .flow import IntegratorConfig, Trajectory, integrate
from .generators import resolve
from .geometry import JordanDomain, Polyline

logger = logging.getLogger(__name__)

# Trajectories sparser than this get a warning from envelope_curve
DENSE_SAMPLES = 64


def monotone_envelope(x: Sequence[float], f: Sequence[float]) -> np.ndarray:
    """
    Suffix minimum g(x_i) = min_{j >= i} f(x_j).

    Example:
        >>> monotone_envelope([0, 1, 2], [3, 1, 2])
        array([1., 1., 2.])

    Raises:
        ValueError: If there are fewer than two samples or x is not strictly increasing
    """
    x = np.asarray(x, dtype=float)
    f = np.asarray(f, dtype=float)
    if x.ndim != 1 or x.shape != f.shape:
        raise ValueError("monotone_envelope() needs matching 1-d samples")
    if x.size < 2:
        raise ValueError("monotone_envelope() needs at least two samples")
    if np.any(np.diff(x) <= 0):
        raise ValueError("monotone_envelope() needs strictly increasing x")
    return np.minimum.accumulate(f[::-1])[::-1]


def suffix_minimum_bruteforce(f: Sequence[float]) -> np.ndarray:
    """Quadratic reference for monotone_envelope."""
    f = list(map(float, f))
    return np.array([min(f[i:]) for i in range(len(f))])


def envelope_curve(trajectory: Trajectory) -> Polyline:
    """
    Replace the imaginary part of a trajectory by its monotone envelope in time.

    Raises:
        GeometryError: If fewer than two distinct points remain
    """
    logger.debug("envelope_curve() entry")
    if len(trajectory) < DENSE_SAMPLES:
        logger.warning(f"Envelope of a sparse trajectory ({len(trajectory)} samples)")
    g = monotone_envelope(trajectory.times, trajectory.points.imag)
    vertices = trajectory.points.real + 1j * g
    keep = np.concatenate([[True], np.diff(vertices) != 0])
    if np.count_nonzero(keep) < 2:
        raise GeometryError("Degenerate trajectory: envelope is a single point", trajectory.start)
    logger.debug("envelope_curve() exit")
    return Polyline(vertices[keep])


def polyline_length(polyline: Polyline) -> float:
    """Sum of segment lengths."""
    return polyline.length()


class ProofDomain(JordanDomain):
    """
    Right-hand part of a square cut off by a monotone curve.

    ``curve_segments`` index the boundary segments that run along the curve,
    ``square`` is the enclosing square and ``curve`` the clipped curve from
    bottom to top.
    """

    def __init__(self, vertices, square: Square, curve: Polyline, curve_start: int, name: str):
        super().__init__(vertices, name=name)
        self.square = square
        self.curve = curve
        self.curve_segments = np.arange(curve_start, self.segment_count)


def _interpolate(p: complex, q: complex, level: float) -> complex:
    s = (level - p.imag) / (q.imag - p.imag)
    return complex(p.real + s * (q.real - p.real), level)


def build_proof_domain(
    square: Square, envelope: Polyline, name: str = "proof-domain"
) -> ProofDomain:
    """
    Domain bounded by the envelope and the right-hand part of the square's boundary.

    The envelope is clipped at the square's bottom and top edges by linear
    interpolation, then closed counter-clockwise through the bottom-right and
    top-right corners.

    Raises:
        GeometryError: If the envelope is not monotone, does not span the square's
            height, or leaves the square after clipping
    """
    logger.debug("build_proof_domain() entry")
    a = square.side
    x0, y0 = square.corner.real, square.corner.imag
    lo, hi = y0, y0 + a
    tol = 1e-12 * a
    v = envelope.vertices
    dy = np.diff(v.imag)
    dx = np.diff(v.real)
    if np.any(dy < -tol):
        raise GeometryError("Envelope imaginary part must be non-decreasing")
    if np.any(dx < -tol) and np.any(dx > tol):
        raise GeometryError("Envelope real part must be monotone")
    if v[0].imag > lo + tol or v[-1].imag < hi - tol:
        raise GeometryError("Envelope must cross the square's bottom and top edges")

    i = int(np.flatnonzero(v.imag <= lo)[-1]) if np.any(v.imag <= lo) else 0
    j = int(np.flatnonzero(v.imag >= hi)[0]) if np.any(v.imag >= hi) else v.size - 1
    p0 = _interpolate(v[i], v[i + 1], lo) if v[i].imag < lo else complex(v[i].real, lo)
    p1 = _interpolate(v[j - 1], v[j], hi) if v[j].imag > hi else complex(v[j].real, hi)
    curve = np.concatenate([[p0], v[i + 1 : j], [p1]])
    if np.any(curve.real < x0 - tol) or np.any(curve.real > x0 + a + tol):
        worst = complex(curve[np.argmax(np.abs(curve.real - x0 - a / 2))])
        raise GeometryError("Envelope exits the square", worst)
    curve = Polyline.from_points(curve)

    head = Polyline.from_points([p0, complex(x0 + a, lo), complex(x0 + a, hi), p1])
    path = np.concatenate([head.vertices, curve.vertices[-2::-1]])
    domain = ProofDomain(path, square, curve, len(head) - 1, name)
    logger.debug(f"build_proof_domain() exit - length {domain.length:.6g}")
    return domain


def fit_into_square(
    polyline: Polyline, square: Square, re_fraction: float = 0.2, margin: float = 0.05
) -> Polyline:
    """
    Affinely rescale a monotone curve into the left strip of a square.

    Real parts map onto [x0, x0 + re_fraction a] (a constant real part goes to
    x0 + re_fraction a / 2); imaginary parts map onto [y0 - margin a, y0 + (1 + margin) a].
    """
    v = polyline.vertices
    a = square.side
    x0, y0 = square.corner.real, square.corner.imag
    re_span = np.ptp(v.real)
    im_span = np.ptp(v.imag)
    if im_span == 0:
        raise GeometryError("Curve has constant imaginary part and cannot span the square")
    if re_span == 0:
        re = np.full(v.size, x0 + re_fraction * a / 2)
    else:
        re = x0 + re_fraction * a * (v.real - v.real.min()) / re_span
    im = y0 - margin * a + (1 + 2 * margin) * a * (v.imag - v.imag.min()) / im_span
    return Polyline.from_points(re + 1j * im)


def _family_sources(count: int):
    for k in range(count):
        if k % 2 == 0:
            m = k // 2
            sign = 1 if m % 2 == 0 else -1
            yield "hp:sqrt", complex(0.2 + 0.3 * (m % 5), sign * (0.5 + 0.4 * (m // 5))), 2.0
        else:
            m = k // 2
            yield "hp:dirichlet:c0=1,a2=1", complex(0.1 + 0.2 * (m % 5), 1.0 + 1.7 * m), 3.0


def proof_domain_family(
    a: float = 1.0,
    count: int = 20,
    corner: complex = 0j,
    n_samples: int = 256,
    cfg: Optional[IntegratorConfig] = None,
) -> List[ProofDomain]:
    """
    Proof domains built from half-plane flow trajectories.

    Each trajectory is mirrored when its imaginary part decreases overall, then
    enveloped, fitted into the square and clipped. Every member has boundary
    length at most 4a and contains the disc of radius a/4 about the square's centre.
    """
    logger.info(f"Building {count} proof domains in a square of side {a!r}")
    square = Square(corner, a)
    family = []
    for index, (identifier, start, t_end) in enumerate(_family_sources(count)):
        trajectory = integrate(resolve(identifier), start, t_end, cfg, n_samples)
        if trajectory.end.imag < trajectory.start.imag:
            trajectory = Trajectory(
                trajectory.generator,
                trajectory.times,
                np.conj(trajectory.points),
                np.conj(trajectory.derivatives),
                trajectory.rel_tol,
                trajectory.abs_tol,
            )
        scaled = fit_into_square(envelope_curve(trajectory), square)
        family.append(build_proof_domain(square, scaled, name=f"{identifier}@{start}#{index}"))
    logger.debug(f"proof_domain_family() exit - {len(family)} domains")
    return family


__all__ = [
    "DENSE_SAMPLES",
    "monotone_envelope",
    "suffix_minimum_bruteforce",
    "envelope_curve",
    "polyline_length",
    "ProofDomain",
    "build_proof_domain",
    "fit_into_square",
    "proof_domain_family",
]
