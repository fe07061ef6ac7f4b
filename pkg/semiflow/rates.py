"""
Convergence rates of semigroups to the identity.

Every supremum here is a maximum over a finite lattice, hence a lower estimate
of the true supremum. Half-plane lattices are windowed; a report says when the
window boundary attains the maximum.
"""

import csv
import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np

from .cplane import CanonicalDomain, RightHalfPlane, UnitDisc, disc_lattice, halfplane_lattice
from .flow import IntegratorConfig, advance, closed_form
from .generators.specs import GeneratorSpec, SqrtGenerator
from .parallel import map_array

logger = logging.getLogger(__name__)

# Relative slack on the fitted constant for the sqrt(t) upper bound
SQRT_BOUND_SLACK = 0.1

MIN_ALPHA = 0.45

MIN_FIT_ROWS = 5

# Interior points reaching this fraction of the sup clear the window flag
_WINDOW_TIE = 1.0 - 1e-6

_ADVANCE_CHUNK = 256


def t_sequence(t_max: float, t_min: float, steps: int) -> np.ndarray:
    """Geometric sequence of ``steps`` times strictly decreasing from t_max to t_min."""
    if not 0.0 < t_min < t_max or steps < 2:
        raise ValueError("t_sequence() needs 0 < t_min < t_max and steps >= 2")
    return np.geomspace(t_max, t_min, steps)


def default_t_sequence(first: int = 4, last: int = 20) -> np.ndarray:
    """t = 2^-j for j = first..last."""
    return np.ldexp(1.0, -np.arange(first, last + 1))


@dataclass(frozen=True)
class SupSamplerConfig:
    """
    Lattice on which sup |Phi_t(z) - z| is taken.

    The disc uses radii 1 - 2^-k (k = 1..k_max) at ``n_angles`` angles. Half-planes
    use real parts offset + re_max * 2^-k (k = 0..k_max) against an imaginary axis
    windowed to [-window_R, window_R].
    """

    domain: CanonicalDomain = field(default_factory=UnitDisc)
    k_max: int = 24
    n_angles: int = 64
    n_imag: int = 129
    window_R: float = 1e4
    re_max: float = 1.0
    focus: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.k_max < 1:
            raise ValueError(f"k_max must be >= 1, got {self.k_max}")
        if self.n_angles < 8 or self.n_imag < 8:
            raise ValueError("lattice counts must be >= 8")
        if not self.window_R > 0.0 or not self.re_max > 0.0:
            raise ValueError("window_R and re_max must be > 0")
        if not isinstance(self.domain, (UnitDisc, RightHalfPlane)):
            raise ValueError(f"no sup lattice for {self.domain!r}")
        object.__setattr__(self, "focus", tuple(float(f) for f in self.focus))

    @property
    def is_halfplane(self) -> bool:
        return isinstance(self.domain, RightHalfPlane)

    def lattice(self) -> np.ndarray:
        if not self.is_halfplane:
            return disc_lattice(self.k_max, self.n_angles)
        points = self.domain.offset + halfplane_lattice(
            self.k_max, self.n_imag, self.window_R, self.re_max, self.focus
        )
        return points[np.asarray(self.domain.contains(points))]

    def refine(self) -> "SupSamplerConfig":
        """A config whose lattice is a superset of this one's."""
        return replace(
            self, k_max=self.k_max + 1, n_angles=2 * self.n_angles, n_imag=2 * self.n_imag - 1
        )

    def window(self) -> Dict[str, Any]:
        window = {"domain": self.domain.describe(), "k_max": self.k_max}
        if self.is_halfplane:
            window.update(window_R=self.window_R, re_max=self.re_max, n_imag=self.n_imag)
        else:
            window.update(n_angles=self.n_angles)
        return window

    @classmethod
    def for_spec(cls, spec: GeneratorSpec, **overrides) -> "SupSamplerConfig":
        """Sampler on the spec's domain, focused on its singular boundary ordinates."""
        config = cls(domain=spec.domain, **overrides)
        if config.is_halfplane and "focus" not in overrides:
            config = replace(config, focus=tuple(spec.singular_imaginary_parts(config.window_R)))
        return config


@dataclass
class RateRow:
    t: float
    sup: float
    argmax: complex
    window_limited: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "t": self.t,
            "sup": self.sup,
            "argmax": self.argmax,
            "window_limited": self.window_limited,
        }


def _interior(config: SupSamplerConfig, points: np.ndarray) -> np.ndarray:
    if not config.is_halfplane:
        return np.ones(points.size, dtype=bool)
    top = points.real.max()
    return (np.abs(points.imag) < config.window_R) & (points.real < top)


def _flow_lattice(spec, points, times, cfg, prefer_closed_form):
    if prefer_closed_form and spec.closed_form is not None:
        identifier, c = spec.closed_form
        return closed_form(identifier, points[:, None], times[None, :], c)
    return map_array(lambda z: advance(spec, z, times, cfg), points, _ADVANCE_CHUNK)


def sup_deviation(
    spec: GeneratorSpec,
    t: Union[float, Sequence[float]],
    sampler: Optional[SupSamplerConfig] = None,
    cfg: Optional[IntegratorConfig] = None,
    prefer_closed_form: bool = False,
):
    """
    Lattice maximum of |Phi_t(z) - z| with its argmax.

    A sequence of times is integrated once per lattice point. Half-plane rows are
    flagged ``window_limited`` when no interior lattice point comes within a
    relative 1e-6 of the maximum.

    Returns:
        A RateRow for scalar t, else a list of RateRows in the order given

    Raises:
        FlowError: If the flow fails at some lattice point (the point is attached)
    """
    logger.debug(f"sup_deviation() entry - {spec.identifier()}")
    sampler = sampler or SupSamplerConfig.for_spec(spec)
    times = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(times <= 0.0):
        raise ValueError("sup_deviation() needs t > 0")
    order = np.argsort(times)
    points = sampler.lattice()
    flowed = _flow_lattice(spec, points, times[order], cfg, prefer_closed_form)
    deviation = np.abs(flowed - points[:, None])
    interior = _interior(sampler, points)

    rows: List[Optional[RateRow]] = [None] * times.size
    for column, position in enumerate(order):
        values = deviation[:, column]
        best = int(np.argmax(values))
        sup = float(values[best])
        limited = bool(
            sampler.is_halfplane
            and sup > 0.0
            and (not interior.any() or values[interior].max() < _WINDOW_TIE * sup)
        )
        rows[position] = RateRow(float(times[position]), sup, complex(points[best]), limited)
    logger.debug(f"sup_deviation() exit - {len(rows)} rows over {points.size} points")
    return rows[0] if np.ndim(t) == 0 else rows


@dataclass(frozen=True)
class RateFit:
    """log sup = log C + alpha log t, with the rms residual in log-log."""

    C: float
    alpha: float
    residual: float

    def to_dict(self) -> Dict[str, float]:
        return {"C": self.C, "alpha": self.alpha, "residual": self.residual}


def rate_fit(t: Iterable[float], sup: Optional[Iterable[float]] = None) -> RateFit:
    """
    Ordinary least-squares power law fit in log-log.

    Args:
        t: Times, or RateRows when ``sup`` is omitted
        sup: Sup estimates matching ``t``

    Example:
        >>> fit = rate_fit([1, 0.5, 0.25, 0.125, 0.0625], [1, 0.5, 0.25, 0.125, 0.0625])
        >>> round(fit.alpha, 10)
        1.0

    Raises:
        ValueError: With fewer than five rows or any non-positive value
    """
    if sup is None:
        rows = list(t)
        t_arr = np.array([row.t for row in rows], dtype=float)
        sup_arr = np.array([row.sup for row in rows], dtype=float)
    else:
        t_arr = np.asarray(list(t), dtype=float)
        sup_arr = np.asarray(list(sup), dtype=float)
    if t_arr.shape != sup_arr.shape or t_arr.size < MIN_FIT_ROWS:
        raise ValueError(f"rate_fit() needs at least {MIN_FIT_ROWS} matching rows")
    if np.any(t_arr <= 0.0) or np.any(sup_arr <= 0.0):
        raise ValueError("rate_fit() rejects rows with t <= 0 or sup <= 0")
    log_t, log_sup = np.log(t_arr), np.log(sup_arr)
    alpha, log_C = np.polyfit(log_t, log_sup, 1)
    residual = math.sqrt(float(np.mean((log_sup - (log_C + alpha * log_t)) ** 2)))
    return RateFit(float(math.exp(log_C)), float(alpha), residual)


@dataclass
class RateReport:
    """Sup-deviation rows with their power-law fit and pass flags."""

    generator: str
    window: Dict[str, Any]
    rows: List[RateRow]
    fit: Optional[RateFit] = None
    checks: Dict[str, bool] = field(default_factory=dict)
    constants: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    @property
    def window_limited(self) -> bool:
        return any(row.window_limited for row in self.rows)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "generator": self.generator,
            "window": self.window,
            "window_limited": self.window_limited,
            "rows": [row.to_dict() for row in self.rows],
            "fit": self.fit.to_dict() if self.fit else None,
            "constants": self.constants,
            "checks": self.checks,
            "passed": self.passed,
        }

    def write_csv(self, handle: TextIO) -> None:
        handle.write(f"# generator: {self.generator}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["t", "sup", "argmax_re", "argmax_im", "window_limited"])
        for row in self.rows:
            writer.writerow(
                [
                    format(row.t, ".17g"),
                    format(row.sup, ".17g"),
                    format(row.argmax.real, ".17g"),
                    format(row.argmax.imag, ".17g"),
                    int(row.window_limited),
                ]
            )

    def write_plot_data(self, handle: TextIO) -> None:
        """``log_t,log_sup`` pairs for rows with positive sup."""
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["log_t", "log_sup"])
        for row in self.rows:
            if row.sup > 0.0:
                log_t, log_sup = math.log(row.t), math.log(row.sup)
                writer.writerow([format(log_t, ".17g"), format(log_sup, ".17g")])

    def to_csv(self, path: Union[str, Path]) -> None:
        with open(path, "w", newline="") as handle:
            self.write_csv(handle)


def rate_report(
    spec: GeneratorSpec,
    t_seq: Optional[Sequence[float]] = None,
    sampler: Optional[SupSamplerConfig] = None,
    cfg: Optional[IntegratorConfig] = None,
    prefer_closed_form: bool = False,
) -> RateReport:
    """Sup rows over a strictly decreasing t-sequence, fitted when every sup is positive."""
    sampler = sampler or SupSamplerConfig.for_spec(spec)
    t_seq = default_t_sequence() if t_seq is None else np.asarray(t_seq, dtype=float)
    t_seq = np.sort(t_seq)[::-1]
    if np.any(np.diff(t_seq) >= 0.0):
        raise ValueError("t-sequence must be strictly decreasing")
    logger.info(f"Rate rows for {spec.identifier()} at {t_seq.size} times")
    rows = sup_deviation(spec, t_seq, sampler, cfg, prefer_closed_form)
    report = RateReport(spec.identifier(), sampler.window(), rows)
    if len(rows) >= MIN_FIT_ROWS and all(row.sup > 0.0 for row in rows):
        report.fit = rate_fit(rows)
    return report


def sqrt_constant(rows: Sequence[RateRow]) -> float:
    """Max of sup / sqrt(t) over the larger-t half of the rows."""
    ordered = sorted(rows, key=lambda row: row.t, reverse=True)
    head = ordered[: max(1, (len(ordered) + 1) // 2)]
    return max(row.sup / math.sqrt(row.t) for row in head)


def verify_sqrt_theorem(
    spec: GeneratorSpec,
    t_seq: Optional[Sequence[float]] = None,
    sampler: Optional[SupSamplerConfig] = None,
    cfg: Optional[IntegratorConfig] = None,
) -> RateReport:
    """
    Check the disc bound sup |Phi_t(z) - z| <= C sqrt(t).

    C is calibrated on the larger-t half of the rows; the report passes when every
    row satisfies sup <= 1.1 C sqrt(t) and the fitted exponent is at least 0.45.
    Exponents above 1/2 pass too, the bound being one-sided.

    Raises:
        ValueError: If the spec is not a disc generator
    """
    if not isinstance(spec.domain, UnitDisc):
        raise ValueError(f"{spec.identifier()} is not a disc generator")
    report = rate_report(spec, t_seq, sampler, cfg)
    C_hat = sqrt_constant(report.rows)
    report.constants["C_hat"] = C_hat
    report.checks["sup <= 1.1 C sqrt(t)"] = all(
        row.sup <= (1.0 + SQRT_BOUND_SLACK) * C_hat * math.sqrt(row.t) for row in report.rows
    )
    report.checks["alpha >= 0.45"] = report.fit is not None and report.fit.alpha >= MIN_ALPHA
    logger.info(f"sqrt(t) check for {spec.identifier()}: {'PASS' if report.passed else 'FAIL'}")
    return report


def comparison_solution(x, t):
    """y_x(t) = sqrt(2t + (1 + x)^2) - 1, the solution of y' = 1/(1 + y), y(0) = x."""
    x = np.asarray(x, dtype=float)
    return np.sqrt(2.0 * t + (1.0 + x) ** 2) - 1.0


def _sharpness_grid(t: float, upper: float, size: int = 400) -> np.ndarray:
    grid = -1.0 + (upper + 1.0) * np.geomspace(1e-4, 1.0, size, endpoint=False)
    return np.unique(np.concatenate([grid, [math.sqrt(t) / 2.0 - 1.0]]))


def sharpness_lower_bound(
    t: float, x_grid: Optional[Sequence[float]] = None, t0: float = 0.25
) -> float:
    """
    max over x of y_x(t) - x on (-1, -1/2), a lower bound for sup |Phi_t(z) - z|.

    The grid always includes x = sqrt(t)/2 - 1, where y_x(t) - x = sqrt(t) exactly.

    Example:
        >>> round(sharpness_lower_bound(0.01, [-0.95]), 12)
        0.1
    """
    if not 0.0 < t < t0:
        raise ValueError(f"sharpness_lower_bound() needs 0 < t < {t0}, got {t}")
    if x_grid is None:
        grid = _sharpness_grid(t, -0.5)
    else:
        extra = [math.sqrt(t) / 2.0 - 1.0]
        grid = np.unique(np.concatenate([np.asarray(x_grid, dtype=float), extra]))
    if np.any(grid <= -1.0) or np.any(grid >= -0.5):
        raise ValueError("sharpness grid must lie in (-1, -1/2)")
    return float(np.max(comparison_solution(grid, t) - grid))


def sharpness_profile(t_seq: Sequence[float]) -> List[Dict[str, Any]]:
    """Lower bound against sqrt(t) for each t."""
    rows = []
    for t in t_seq:
        bound = sharpness_lower_bound(t)
        root = math.sqrt(t)
        rows.append({"t": float(t), "lower_bound": bound, "sqrt_t": root, "passed": bound >= root})
    return rows


@dataclass(frozen=True)
class SharpnessComparison:
    t: float
    minimum: float
    worst_x: float

    @property
    def passed(self) -> bool:
        return self.minimum >= -1e-6

    def to_dict(self) -> Dict[str, Any]:
        return {
            "t": self.t,
            "minimum": self.minimum,
            "worst_x": self.worst_x,
            "passed": self.passed,
        }


def sharpness_comparison(
    spec: GeneratorSpec,
    t: float,
    x_grid: Optional[Sequence[float]] = None,
    cfg: Optional[IntegratorConfig] = None,
) -> SharpnessComparison:
    """
    min over x of Re Phi_t(x) - y_x(t) on (-1, min(-1/2, sqrt(t)/2 - 1)].

    For a generator dominating 1/(1 + x) on the negative axis the flow stays above
    the comparison solution.
    """
    upper = min(-0.5, math.sqrt(t) / 2.0 - 1.0)
    grid = _sharpness_grid(t, upper) if x_grid is None else np.asarray(x_grid, dtype=float)
    grid = grid[(grid > -1.0) & (grid <= upper)]
    if not grid.size:
        raise ValueError("sharpness comparison grid is empty")
    flowed = np.real(advance(spec, grid.astype(complex), t, cfg))
    gap = flowed - comparison_solution(grid, t)
    worst = int(np.argmin(gap))
    return SharpnessComparison(float(t), float(gap[worst]), float(grid[worst]))


def real_part_deviation(
    spec: GeneratorSpec,
    t: float,
    grid: Optional[np.ndarray] = None,
    cfg: Optional[IntegratorConfig] = None,
) -> float:
    """
    max over the grid of Re Phi_t(z) - Re z.

    Raises:
        ValueError: If the spec is not a half-plane generator with Re H >= 0
    """
    if not isinstance(spec.domain, RightHalfPlane) or not spec.nonnegative_real_part:
        raise ValueError(f"{spec.identifier()} is not a half-plane generator with Re H >= 0")
    if grid is None:
        grid = SupSamplerConfig.for_spec(spec).lattice()
    grid = np.asarray(grid, dtype=complex).ravel()
    flowed = map_array(lambda z: advance(spec, z, t, cfg), grid, _ADVANCE_CHUNK)
    return float(np.max(flowed.real - grid.real))


@dataclass(frozen=True)
class WitnessRow:
    t: float
    R: float
    closed_form: float
    numerical: float

    @property
    def agrees(self) -> bool:
        return abs(self.closed_form - self.numerical) <= 1e-6 * (1.0 + self.R)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "t": self.t,
            "R": self.R,
            "closed_form": self.closed_form,
            "numerical": self.numerical,
            "agrees": self.agrees,
        }


# Starting points iR sit on the boundary; integrations start just inside
_WITNESS_SHIFT = 1e-12


def nonuniform_witness(
    t_seq: Sequence[float], R_seq: Sequence[float], cfg: Optional[IntegratorConfig] = None
) -> List[WitnessRow]:
    """
    |Phi_t(iR) - iR| for the square-root semigroup, by closed form and by integration.

    For fixed t the deviation grows like t sqrt(R), so convergence to the identity
    is not uniform on any half-plane.

    Example:
        >>> round(nonuniform_witness([0.1], [100])[0].closed_form, 4)
        1.0018
    """
    spec = SqrtGenerator()
    rows = []
    for t in t_seq:
        for R in R_seq:
            z = 1j * float(R)
            exact = abs(closed_form("sqrt_flow", z, t) - z)
            start = _WITNESS_SHIFT + z
            numerical = abs(advance(spec, start, t, cfg) - start)
            rows.append(WitnessRow(float(t), float(R), float(exact), float(numerical)))
    return rows


__all__ = [
    "t_sequence",
    "default_t_sequence",
    "SupSamplerConfig",
    "RateRow",
    "sup_deviation",
    "RateFit",
    "rate_fit",
    "RateReport",
    "rate_report",
    "sqrt_constant",
    "verify_sqrt_theorem",
    "comparison_solution",
    "sharpness_lower_bound",
    "sharpness_profile",
    "SharpnessComparison",
    "sharpness_comparison",
    "real_part_deviation",
    "WitnessRow",
    "nonuniform_witness",
]
