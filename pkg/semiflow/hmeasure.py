"""
Monte Carlo harmonic measure on polyline Jordan domains by walk-on-spheres.

Each walk draws its random angles from a counter-based stream keyed by
(seed, walk index, step), so estimates are bit-identical for any chunking or
thread count.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DomainViolation, PreconditionError
from .geometry import JordanDomain, Polyline
from .parallel import map_ordered

logger = logging.getLogger(__name__)

# Stop tolerance relative to the domain diameter
STOP_FRACTION = 1e-6

MAX_WALK_STEPS = 10_000

MIN_WALKS = 1_000

WALK_CHUNK = 4_096

LAVRENTIEV_RATIOS = tuple(k / 100 for k in range(1, 51))

LAVRENTIEV_THRESHOLD = 1.0 / 8.0

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def splitmix64(x: np.ndarray) -> np.ndarray:
    """SplitMix64 finaliser applied to x + golden ratio, elementwise on uint64 (wrapping)."""
    x = np.asarray(x, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = x + _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))


def walk_keys(seed: int, walks: np.ndarray) -> np.ndarray:
    """Per-walk stream keys derived from the seed and walk indices."""
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must lie in [0, 2^64), got {seed}")
    return splitmix64(np.uint64(seed) ^ splitmix64(np.asarray(walks, dtype=np.uint64)))


def uniform_draws(keys: np.ndarray, step: int) -> np.ndarray:
    """Uniform [0, 1) draws for the given step of each keyed stream."""
    counter = np.full(keys.shape, step, dtype=np.uint64)
    with np.errstate(over="ignore"):
        bits = splitmix64(keys + counter * _GOLDEN)
    return (bits >> np.uint64(11)).astype(np.float64) * 2.0**-53


def _merge_arcs(arcs: Iterable[Tuple[int, float, float]]) -> Tuple[Tuple[int, float, float], ...]:
    cleaned = []
    for seg, u0, u1 in arcs:
        seg, u0, u1 = int(seg), float(u0), float(u1)
        if seg < 0 or not 0.0 <= u0 <= u1 <= 1.0:
            raise ValueError(f"invalid boundary arc ({seg}, {u0}, {u1})")
        if u1 > u0:
            cleaned.append((seg, u0, u1))
    cleaned.sort()
    merged: List[Tuple[int, float, float]] = []
    for seg, u0, u1 in cleaned:
        if merged and merged[-1][0] == seg and u0 <= merged[-1][2]:
            merged[-1] = (seg, merged[-1][1], max(merged[-1][2], u1))
        else:
            merged.append((seg, u0, u1))
    return tuple(merged)


@dataclass(frozen=True)
class BoundarySubset:
    """
    Finite union of boundary sub-arcs, each given as (segment, u0, u1).

    Arcs are normalised on construction: sorted, with overlapping or touching
    intervals on the same segment merged and empty ones dropped.
    """

    arcs: Tuple[Tuple[int, float, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "arcs", _merge_arcs(self.arcs))

    def measure(self, domain: JordanDomain) -> float:
        """Total boundary length of the subset."""
        self._check(domain)
        return float(math.fsum((u1 - u0) * domain.segment_lengths[s] for s, u0, u1 in self.arcs))

    def contains(self, segment, u) -> np.ndarray:
        """Membership of boundary points (segment, u), vectorised."""
        segment = np.asarray(segment)
        u = np.asarray(u, dtype=float)
        hit = np.zeros(np.broadcast(segment, u).shape, dtype=bool)
        for s, u0, u1 in self.arcs:
            hit |= (segment == s) & (u >= u0) & (u <= u1)
        return hit

    def union(self, other: "BoundarySubset") -> "BoundarySubset":
        return BoundarySubset(self.arcs + other.arcs)

    def _check(self, domain: JordanDomain) -> None:
        if self.arcs and self.arcs[-1][0] >= domain.segment_count:
            raise ValueError(f"subset references segment {self.arcs[-1][0]} of {domain!r}")

    def to_list(self) -> List[List[float]]:
        return [[s, u0, u1] for s, u0, u1 in self.arcs]

    @classmethod
    def from_list(cls, rows: Sequence[Sequence[float]]) -> "BoundarySubset":
        return cls(tuple((int(r[0]), float(r[1]), float(r[2])) for r in rows))

    @classmethod
    def segments(cls, indices: Iterable[int]) -> "BoundarySubset":
        """Whole segments."""
        return cls(tuple((int(k), 0.0, 1.0) for k in indices))

    @classmethod
    def full(cls, domain: JordanDomain) -> "BoundarySubset":
        return cls.segments(range(domain.segment_count))

    @classmethod
    def edge(cls, side: int, per_side: int = 1) -> "BoundarySubset":
        """Side ``side`` (0 bottom, 1 right, 2 top, 3 left) of a JordanDomain.square."""
        if not 0 <= side < 4:
            raise ValueError(f"square side must be 0..3, got {side}")
        return cls.segments(range(side * per_side, (side + 1) * per_side))

    @classmethod
    def from_arclength(cls, domain: JordanDomain, s0: float, s1: float) -> "BoundarySubset":
        """Boundary arc from arclength s0 to s1 (measured from vertex 0), wrapping around."""
        if s1 < s0:
            raise ValueError("arclength interval must satisfy s0 <= s1")
        if s1 - s0 >= domain.length:
            return cls.full(domain)
        start = s0 % domain.length
        stop = start + (s1 - s0)
        if stop <= domain.length:
            pieces = [(start, stop)]
        else:
            pieces = [(start, domain.length), (0.0, stop - domain.length)]
        arcs: List[Tuple[int, float, float]] = []
        for lo, hi in pieces:
            k0, u0 = _locate(domain, lo)
            k1, u1 = _locate(domain, hi)
            if k0 == k1:
                arcs.append((k0, u0, u1))
                continue
            arcs.append((k0, u0, 1.0))
            arcs.extend((k, 0.0, 1.0) for k in range(k0 + 1, k1))
            arcs.append((k1, 0.0, u1))
        return cls(tuple(arcs))

    @classmethod
    def disc_arc(
        cls, domain: JordanDomain, theta1: float, theta2: float, center: complex = 0j
    ) -> "BoundarySubset":
        """
        Arc of a JordanDomain.regular_polygon between two polar angles about its centre.

        Angles map to boundary points by central projection onto the polygon.
        """
        if not 0.0 <= theta2 - theta1 <= 2.0 * math.pi:
            raise ValueError("disc arc needs 0 <= theta2 - theta1 <= 2 pi")
        if theta2 - theta1 >= 2.0 * math.pi:
            return cls.full(domain)
        s1 = _polygon_arclength(domain, theta1, center)
        s2 = _polygon_arclength(domain, theta2, center)
        if s2 < s1 or (s2 == s1 and theta2 > theta1):
            s2 += domain.length
        return cls.from_arclength(domain, s1, s2)

    @classmethod
    def centered_arc(cls, domain: JordanDomain, point: complex, length: float) -> "BoundarySubset":
        """Arc of the given boundary length centred on the boundary point nearest ``point``."""
        _, seg, u = domain.nearest(point)
        middle = domain.offsets[seg[0]] + u[0] * domain.segment_lengths[seg[0]]
        return cls.from_arclength(domain, middle - length / 2.0, middle + length / 2.0)


def _locate(domain: JordanDomain, s: float) -> Tuple[int, float]:
    k = int(np.searchsorted(domain.offsets, s, side="right")) - 1
    k = min(max(k, 0), domain.segment_count - 1)
    u = float(np.clip((s - domain.offsets[k]) / domain.segment_lengths[k], 0.0, 1.0))
    return k, u


def _polygon_arclength(domain: JordanDomain, theta: float, center: complex) -> float:
    n = domain.segment_count
    wedge = 2.0 * math.pi / n
    phi = theta % (2.0 * math.pi)
    k = min(int(phi // wedge), n - 1)
    before = math.sin(phi - k * wedge)
    after = math.sin((k + 1) * wedge - phi)
    u = before / (before + after)
    return float(domain.offsets[k] + u * domain.segment_lengths[k])


def disc_arc_oracle(theta1: float, theta2: float) -> float:
    """
    Harmonic measure of the arc [theta1, theta2] of the unit circle seen from 0.

    Example:
        >>> disc_arc_oracle(0.0, math.pi)
        0.5
    """
    span = theta2 - theta1
    if not 0.0 <= span <= 2.0 * math.pi:
        raise ValueError("disc_arc_oracle() needs 0 <= theta2 - theta1 <= 2 pi")
    return span / (2.0 * math.pi)


def rectangle_side_oracle(
    width: float, height: float, x: float, y: float, terms: int = 200
) -> float:
    """
    Harmonic measure of the left side of [0, width] x [0, height] seen from (x, y).

    Sums the odd sine series of the Dirichlet problem.

    Example:
        >>> round(rectangle_side_oracle(1.0, 1.0, 0.5, 0.5), 12)
        0.25
    """
    if not (0.0 < x < width and 0.0 < y < height):
        raise ValueError(f"rectangle_side_oracle() needs an interior point, got ({x}, {y})")
    n = 2 * np.arange(terms) + 1
    k = n * math.pi / height
    ratio = np.exp(-k * x) * np.expm1(-2.0 * k * (width - x)) / np.expm1(-2.0 * k * width)
    return float(np.sum(4.0 / (n * math.pi) * np.sin(k * y) * ratio))


@dataclass
class ExitSample:
    """Exit points of a batch of walks, snapped to (segment, u)."""

    segments: np.ndarray
    u: np.ndarray
    steps: np.ndarray
    stop_tol: float
    seed: int

    @property
    def n_walks(self) -> int:
        return int(self.segments.size)


def _walk_chunk(domain, w, stop_tol, seed, max_steps, start, stop):
    n = stop - start
    keys = walk_keys(seed, np.arange(start, stop, dtype=np.uint64))
    position = np.full(n, complex(w))
    segments = np.full(n, -1, dtype=np.int64)
    u = np.zeros(n)
    steps = np.full(n, max_steps, dtype=np.int64)
    active = np.arange(n)
    for step in range(max_steps):
        if not active.size:
            break
        radius, seg, uu, exact = domain.index.query(position[active])
        done = exact & (radius <= stop_tol)
        finished = active[done]
        segments[finished] = seg[done]
        u[finished] = uu[done]
        steps[finished] = step
        active = active[~done]
        theta = 2.0 * np.pi * uniform_draws(keys[active], step)
        position[active] += radius[~done] * np.exp(1j * theta)
    if active.size:
        logger.warning(f"{active.size} walks hit the step cap, snapped to the boundary")
        _, seg, uu = domain.nearest(position[active])
        segments[active] = seg
        u[active] = uu
    return segments, u, steps


def sample_exits(
    domain: JordanDomain,
    w: complex,
    n_walks: int,
    seed: int,
    stop_tol: Optional[float] = None,
    max_steps: int = MAX_WALK_STEPS,
    chunk_size: int = WALK_CHUNK,
    workers: Optional[int] = None,
) -> ExitSample:
    """
    Run ``n_walks`` walk-on-spheres paths from w and record their exit points.

    Raises:
        DomainViolation: If w is not interior
    """
    logger.debug("sample_exits() entry")
    if n_walks < 1:
        raise ValueError("sample_exits() needs at least one walk")
    w = complex(w)
    if not domain.contains(w):
        raise DomainViolation(f"Walk start {w} is not interior to {domain!r}", w)
    stop_tol = STOP_FRACTION * domain.diameter if stop_tol is None else stop_tol
    parts = map_ordered(
        lambda start, stop: _walk_chunk(domain, w, stop_tol, seed, max_steps, start, stop),
        n_walks,
        chunk_size,
        workers,
    )
    sample = ExitSample(
        np.concatenate([p[0] for p in parts]),
        np.concatenate([p[1] for p in parts]),
        np.concatenate([p[2] for p in parts]),
        stop_tol,
        seed,
    )
    logger.info(f"{n_walks} walks finished, mean steps {sample.steps.mean():.1f}")
    return sample


@dataclass
class HMEstimate:
    """Monte Carlo estimate of a harmonic measure with its standard error."""

    value: float
    stderr: float
    n_walks: int
    stop_tol: float
    seed: int
    hits: int = 0
    ell: float = math.nan

    def __post_init__(self):
        if self.value - 3 * self.stderr < -0.01 or self.value + 3 * self.stderr > 1.01:
            raise ValueError(
                f"Harmonic measure estimate {self.value} +/- 3*{self.stderr} is out of range"
            )

    @classmethod
    def from_hits(cls, hits: int, sample: ExitSample, ell: float = math.nan) -> "HMEstimate":
        p = hits / sample.n_walks
        return cls(
            p,
            math.sqrt(p * (1.0 - p) / sample.n_walks),
            sample.n_walks,
            sample.stop_tol,
            sample.seed,
            hits,
            ell,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ell_A": self.ell,
            "omega": self.value,
            "stderr": self.stderr,
            "N": self.n_walks,
            "seed": self.seed,
            "stop_tol": self.stop_tol,
        }


def estimate_from_exits(
    domain: JordanDomain, sample: ExitSample, subset: BoundarySubset
) -> HMEstimate:
    """Estimate for one subset from an existing walk set."""
    hits = int(np.count_nonzero(subset.contains(sample.segments, sample.u)))
    return HMEstimate.from_hits(hits, sample, subset.measure(domain))


def harmonic_measure(
    domain: JordanDomain,
    w: complex,
    subsets: Union[BoundarySubset, Sequence[BoundarySubset]],
    n_walks: int,
    seed: int,
    **walk_options,
):
    """
    Estimate omega(w, A) as the fraction of walks from w exiting through A.

    A list of subsets is estimated from one shared walk set and yields a list of
    estimates.

    Raises:
        ValueError: If fewer than MIN_WALKS walks are requested
        DomainViolation: If w is not interior
    """
    if n_walks < MIN_WALKS:
        raise ValueError(f"harmonic_measure() needs at least {MIN_WALKS} walks, got {n_walks}")
    sample = sample_exits(domain, w, n_walks, seed, **walk_options)
    if isinstance(subsets, BoundarySubset):
        return estimate_from_exits(domain, sample, subsets)
    return [estimate_from_exits(domain, sample, subset) for subset in subsets]


@dataclass
class LavrentievRow:
    domain: str
    ratio: float
    estimate: HMEstimate

    @property
    def passed(self) -> bool:
        return self.estimate.value + 3 * self.estimate.stderr < LAVRENTIEV_THRESHOLD

    def to_dict(self) -> Dict[str, Any]:
        row = {"domain": self.domain, "ratio": self.ratio, "passed": self.passed}
        row.update(self.estimate.to_dict())
        return row


@dataclass
class LavrentievReport:
    """Small-arc harmonic measures over a domain family, with the empirical ratio bracket."""

    a: float
    rows: List[LavrentievRow] = field(default_factory=list)
    full_boundary: List[float] = field(default_factory=list)

    @property
    def rho_hat(self) -> float:
        """Largest tested ratio such that every row at or below it passes."""
        best = 0.0
        for ratio in sorted({row.ratio for row in self.rows}):
            if all(row.passed for row in self.rows if row.ratio <= ratio):
                best = ratio
            else:
                break
        return best

    def to_dict(self) -> Dict[str, Any]:
        return {
            "a": self.a,
            "rho_hat": self.rho_hat,
            "full_boundary_omega": self.full_boundary,
            "rows": [row.to_dict() for row in self.rows],
        }


def check_lavrentiev_family(
    domains: Sequence[JordanDomain], centers: Sequence[complex], a: float
) -> None:
    """
    Check that each domain has boundary length <= 4a and contains the disc D(w, a/4).

    Raises:
        PreconditionError: Naming the first violating domain
    """
    for domain, w in zip(domains, centers):
        if domain.length > 4.0 * a * (1.0 + 1e-9):
            raise PreconditionError(f"{domain!r} has boundary length {domain.length:.6g} > 4a")
        if not domain.contains(w):
            raise PreconditionError(f"{w} is not interior to {domain!r}", w)
        if domain.distance(w) < (a / 4.0) * (1.0 - 1e-12):
            raise PreconditionError(f"{domain!r} does not contain D({w}, a/4)", w)


def lavrentiev_experiment(
    domains: Sequence[JordanDomain],
    a: float,
    centers: Sequence[complex],
    n_walks: int,
    seed: int,
    ratios: Sequence[float] = LAVRENTIEV_RATIOS,
) -> LavrentievReport:
    """
    Harmonic measure of short boundary arcs over a family of domains.

    For every domain, arcs of length ratio * a are centred on the boundary point
    nearest its centre w, and all ratios share one walk set per domain.

    Raises:
        PreconditionError: If a domain is longer than 4a or misses D(w, a/4)
    """
    logger.info(f"Lavrentiev experiment on {len(domains)} domains, N={n_walks}")
    check_lavrentiev_family(domains, centers, a)
    report = LavrentievReport(a)
    for index, (domain, w) in enumerate(zip(domains, centers)):
        sample = sample_exits(domain, w, n_walks, seed + index)
        whole = estimate_from_exits(domain, sample, BoundarySubset.full(domain))
        report.full_boundary.append(whole.value)
        for ratio in ratios:
            subset = BoundarySubset.centered_arc(domain, w, ratio * a)
            estimate = estimate_from_exits(domain, sample, subset)
            report.rows.append(LavrentievRow(domain.name or f"domain-{index}", ratio, estimate))
    logger.info(f"Lavrentiev experiment done, rho_hat={report.rho_hat!r}")
    return report


def derive_inner_set(
    inner: JordanDomain, outer: JordanDomain, gamma: BoundarySubset, tol: Optional[float] = None
) -> BoundarySubset:
    """
    Inner boundary set for subordination: inner segments off the outer boundary, plus
    those lying on it inside gamma (decided at segment midpoints).
    """
    tol = 1e-9 * outer.diameter if tol is None else tol
    midpoints = 0.5 * (inner.a + inner.b)
    distance, seg, u = outer.nearest(midpoints)
    keep = (distance > tol) | gamma.contains(seg, u)
    return BoundarySubset.segments(np.flatnonzero(keep))


@dataclass
class SubordinationResult:
    inner: HMEstimate
    outer: HMEstimate

    @property
    def passed(self) -> bool:
        return self.inner.value + 3 * self.inner.stderr >= self.outer.value - 3 * self.outer.stderr

    def to_dict(self) -> Dict[str, Any]:
        return {"inner": self.inner.to_dict(), "outer": self.outer.to_dict(), "passed": self.passed}


def subordination_check(
    inner: JordanDomain,
    outer: JordanDomain,
    w: complex,
    gamma: BoundarySubset,
    n_walks: int,
    seed: int,
    inner_set: Optional[BoundarySubset] = None,
) -> SubordinationResult:
    """
    Compare omega_inner(w, inner set) with omega_outer(w, gamma) for nested domains.

    Raises:
        PreconditionError: If inner is not contained in outer or w is not interior to inner
    """
    logger.debug("subordination_check() entry")
    if not outer.contains_domain(inner):
        raise PreconditionError(f"{inner!r} is not contained in {outer!r}")
    if not inner.contains(w):
        raise PreconditionError(f"{w} is not interior to {inner!r}", complex(w))
    if inner_set is None:
        inner_set = derive_inner_set(inner, outer, gamma)
    result = SubordinationResult(
        harmonic_measure(inner, w, inner_set, n_walks, seed),
        harmonic_measure(outer, w, gamma, n_walks, seed),
    )
    logger.debug(f"subordination_check() exit - passed={result.passed}")
    return result


def mid_cut_instance(a: float = 1.0, offset: float = 0.25):
    """
    Square of side a cut by a vertical segment, with the left edge as gamma.

    The start point w is the square centre and the cut runs ``offset * a`` to
    its left, so D(w, a/4) stays inside the right-hand part whenever
    ``offset >= 1/4``. The inner domain's left side is the cut.

    Returns:
        (inner, outer, w, gamma)

    Raises:
        PreconditionError: Unless 1/4 <= offset < 1/2
    """
    if not 0.25 <= offset < 0.5:
        raise PreconditionError(f"mid-cut offset must lie in [1/4, 1/2), got {offset}")
    cut = (0.5 - offset) * a
    outer = JordanDomain.square(0j, a, name="square")
    inner = JordanDomain([cut, a, a + 1j * a, cut + 1j * a], name="mid-cut")
    w = complex(0.5 * a, 0.5 * a)
    return inner, outer, w, BoundarySubset.edge(3)


__all__ = [
    "Polyline",
    "STOP_FRACTION",
    "MIN_WALKS",
    "LAVRENTIEV_RATIOS",
    "splitmix64",
    "walk_keys",
    "uniform_draws",
    "BoundarySubset",
    "disc_arc_oracle",
    "rectangle_side_oracle",
    "ExitSample",
    "sample_exits",
    "HMEstimate",
    "estimate_from_exits",
    "harmonic_measure",
    "LavrentievRow",
    "LavrentievReport",
    "check_lavrentiev_family",
    "lavrentiev_experiment",
    "derive_inner_set",
    "SubordinationResult",
    "subordination_check",
    "mid_cut_instance",
]
