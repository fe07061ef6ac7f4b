"""
Numerical flows of infinitesimal generators.

``advance`` integrates dz/dt = H(z) for a whole array of starting points at
once with an embedded Dormand-Prince 5(4) pair. Every element keeps its own
step size; steps never leave the open domain and land exactly on each
requested output time.
"""

import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, TextIO, Union

import numpy as np

from .cplane import INFINITY, principal_sqrt
from .errors import (
    DomainExit,
    DomainViolation,
    FlowError,
    StepLimitExceeded,
    UnknownGeneratorError,
)
from .generators.specs import GeneratorSpec

logger = logging.getLogger(__name__)

# Dormand-Prince 5(4) tableau; the last row doubles as the fifth-order weights (FSAL)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_REJECT_FACTOR = 0.25


@dataclass(frozen=True)
class IntegratorConfig:
    """
    Tolerances and safeguards for ``advance``.

    ``boundary_guard`` caps every step at that fraction of the time the current
    velocity needs to reach the boundary.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_steps: int = 100_000
    boundary_guard: float = 0.5

    def __post_init__(self):
        if not self.rel_tol > 0.0 or not self.abs_tol > 0.0:
            raise ValueError("Integrator tolerances must be > 0")
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")
        if not 0.0 < self.boundary_guard <= 1.0:
            raise ValueError(f"boundary_guard must lie in (0, 1], got {self.boundary_guard}")


def _check_times(t) -> np.ndarray:
    times = np.atleast_1d(np.asarray(t, dtype=float))
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a scalar or a non-empty 1-d sequence")
    if not np.all(np.isfinite(times)) or np.any(times < 0.0):
        raise ValueError("flow times must be finite and >= 0")
    if np.any(np.diff(times) < 0.0):
        raise ValueError("flow times must be sorted ascending")
    return times


def _initial_step(y: np.ndarray, k1: np.ndarray, first: float) -> np.ndarray:
    scale = 1e-2 * np.maximum(np.abs(y), 1e-6) / np.maximum(np.abs(k1), 1e-300)
    return np.minimum(scale, first)


def _integrate(spec, cfg, y, k1, h, t_cur, idx, times, out):
    domain = spec.domain
    m = times.size
    attempts = np.zeros(y.size, dtype=np.int64)
    domain_reject = np.zeros(y.size, dtype=bool)
    active = np.flatnonzero(idx < m)
    while active.size:
        ya, ta, ha, ka = y[active], t_cur[active], h[active], k1[active]
        target = times[idx[active]]
        remaining = target - ta

        speed = domain.outward_speed(ya, ka)
        distance = domain.distance_to_boundary(ya)
        with np.errstate(divide="ignore", invalid="ignore"):
            limit = np.where(speed > 0.0, cfg.boundary_guard * distance / speed, np.inf)
        step = np.minimum(np.minimum(ha, limit), remaining)
        hit = step >= remaining
        step = np.where(hit, remaining, step)

        stages = [ka]
        outside = np.zeros(active.size, dtype=bool)
        with np.errstate(all="ignore"):
            for row in _A[1:]:
                increment = sum(c * k for c, k in zip(row, stages) if c)
                ys = ya + step * increment
                good = np.asarray(domain.contains(ys))
                outside |= ~good
                ys = np.where(good, ys, ya)
                stages.append(np.asarray(spec.evaluate(ys), dtype=complex))
            y_new = ys
            err_vec = step * sum(e * k for e, k in zip(_E, stages) if e)
            scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(ya), np.abs(y_new))
            err = np.abs(err_vec) / scale
            finite = np.isfinite(err) & np.isfinite(stages[-1])
            accept = ~outside & finite & (err <= 1.0)
            factor = np.clip(_SAFETY * err**-0.2, _MIN_FACTOR, _MAX_FACTOR)
        factor = np.where(err == 0.0, _MAX_FACTOR, factor)
        factor = np.where(outside | ~finite, _REJECT_FACTOR, factor)
        new_h = step * factor
        new_h = np.where(accept & hit, np.maximum(new_h, ha), new_h)

        accepted = active[accept]
        y[accepted] = y_new[accept]
        k1[accepted] = stages[-1][accept]
        t_cur[accepted] = np.where(hit[accept], target[accept], ta[accept] + step[accept])
        h[active] = new_h
        domain_reject[active] = outside
        attempts[active] += 1

        landed = accepted[hit[accept]]
        while landed.size:
            out[landed, idx[landed]] = y[landed]
            idx[landed] += 1
            landed = landed[idx[landed] < m]
            landed = landed[times[idx[landed]] <= t_cur[landed]]

        rejected = active[~accept]
        if rejected.size:
            tiny = rejected[h[rejected] < 1e-15 * np.maximum(1.0, t_cur[rejected])]
            if tiny.size:
                i = int(tiny[0])
                point = complex(y[i])
                if domain_reject[i]:
                    raise DomainExit(f"Trajectory cannot stay in the domain near {point}", point)
                raise FlowError(f"Step size underflow at t={t_cur[i]!r} near {point}", point)
        exhausted = active[attempts[active] > cfg.max_steps]
        if exhausted.size:
            i = int(exhausted[0])
            point = complex(y[i])
            raise StepLimitExceeded(
                f"Step budget {cfg.max_steps} exhausted at t={t_cur[i]!r} near {point}", point
            )
        active = np.flatnonzero(idx < m)
    return int(attempts.max(initial=0))


def advance(spec: GeneratorSpec, z, t, cfg: Optional[IntegratorConfig] = None):
    """
    Numerical flow Phi_t(z).

    Args:
        spec: Generator spec
        z: Starting point(s) inside the open domain
        t: A time >= 0, or an ascending sequence of times
        cfg: Integrator configuration

    Returns:
        Phi_t(z) with the shape of z for scalar t, or z.shape + (len(t),) for a
        sequence; a plain complex for scalar z and t

    Raises:
        DomainViolation: If some z lies outside the domain
        StepLimitExceeded: If an element exhausts its step budget
        DomainExit: If the steps cannot be kept inside the domain
    """
    logger.debug("advance() entry")
    cfg = cfg or IntegratorConfig()
    scalar_time = np.ndim(t) == 0
    times = _check_times(t)
    z_arr = np.asarray(z, dtype=complex)
    inside = np.asarray(spec.domain.contains(z_arr))
    if not inside.all():
        point = complex(z_arr[~inside].ravel()[0])
        raise DomainViolation(f"Flow start {point} lies outside {spec.domain.describe()}", point)

    y = z_arr.ravel().copy()
    n, m = y.size, times.size
    out = np.empty((n, m), dtype=complex)
    zero_count = int(np.searchsorted(times, 0.0, side="right"))
    out[:, :zero_count] = y[:, None]
    steps = 0
    if zero_count < m and n:
        idx = np.full(n, zero_count, dtype=np.int64)
        k1 = np.asarray(spec.evaluate(y), dtype=complex)
        h = _initial_step(y, k1, float(times[zero_count]))
        steps = _integrate(spec, cfg, y, k1, h, np.zeros(n), idx, times, out)

    result = out.reshape(z_arr.shape + (m,))
    if scalar_time:
        result = result[..., 0]
    logger.debug(f"advance() exit - {n} points, {m} times, max attempts {steps}")
    if result.ndim == 0:
        return complex(result)
    return result


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Sampled flow curve t -> Phi_t(z) with cubic Hermite dense output.

    Between samples the Hermite interpolant uses the generator values as slopes,
    so its error is fourth order in the sample spacing.
    """

    generator: str
    times: np.ndarray
    points: np.ndarray
    derivatives: np.ndarray
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        points = np.asarray(self.points, dtype=complex)
        derivatives = np.asarray(self.derivatives, dtype=complex)
        if times.ndim != 1 or times.size < 2:
            raise ValueError("Trajectory needs at least two samples")
        if points.shape != times.shape or derivatives.shape != times.shape:
            raise ValueError("Trajectory arrays must have matching lengths")
        if np.any(np.diff(times) <= 0.0):
            raise ValueError("Trajectory times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "derivatives", derivatives)

    def __len__(self) -> int:
        return int(self.times.size)

    @property
    def start(self) -> complex:
        return complex(self.points[0])

    @property
    def end(self) -> complex:
        return complex(self.points[-1])

    def at(self, t):
        """Hermite interpolation at time(s) t within the sampled range."""
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < self.times[0]) or np.any(t_arr > self.times[-1]):
            raise ValueError("interpolation time outside the sampled range")
        i = np.clip(np.searchsorted(self.times, t_arr, side="right") - 1, 0, self.times.size - 2)
        dt = self.times[i + 1] - self.times[i]
        s = (t_arr - self.times[i]) / dt
        h00 = 2 * s**3 - 3 * s**2 + 1
        h10 = s**3 - 2 * s**2 + s
        h01 = -2 * s**3 + 3 * s**2
        h11 = s**3 - s**2
        value = (
            h00 * self.points[i]
            + h10 * dt * self.derivatives[i]
            + h01 * self.points[i + 1]
            + h11 * dt * self.derivatives[i + 1]
        )
        return complex(value) if np.ndim(value) == 0 else value

    def header_lines(self) -> List[str]:
        return [
            f"generator: {self.generator}",
            f"rel_tol: {self.rel_tol!r} abs_tol: {self.abs_tol!r}",
            "deterministic: no random seed",
        ]

    def write_csv(self, handle: TextIO) -> None:
        """Write ``#`` header lines followed by ``t,re,im`` rows."""
        for line in self.header_lines():
            handle.write(f"# {line}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["t", "re", "im"])
        for t, z in zip(self.times, self.points):
            writer.writerow([format(t, ".17g"), format(z.real, ".17g"), format(z.imag, ".17g")])

    def to_csv(self, path: Union[str, Path]) -> None:
        with open(path, "w", newline="") as handle:
            self.write_csv(handle)


def integrate(
    spec: GeneratorSpec,
    z: complex,
    t_end: float,
    cfg: Optional[IntegratorConfig] = None,
    n_samples: int = 256,
) -> Trajectory:
    """
    Sample the flow from z on a uniform grid of ``n_samples`` times in [0, t_end].

    Raises:
        ValueError: If t_end <= 0 or fewer than two samples are requested
    """
    logger.debug("integrate() entry")
    if not t_end > 0.0:
        raise ValueError(f"integrate() needs t_end > 0, got {t_end}")
    if n_samples < 2:
        raise ValueError("integrate() needs at least two samples")
    cfg = cfg or IntegratorConfig()
    times = np.linspace(0.0, t_end, n_samples)
    points = np.asarray(advance(spec, complex(z), times, cfg), dtype=complex)
    trajectory = Trajectory(
        spec.identifier(),
        times,
        points,
        np.asarray(spec.evaluate(points), dtype=complex),
        cfg.rel_tol,
        cfg.abs_tol,
    )
    logger.debug(f"integrate() exit - {n_samples} samples")
    return trajectory


def _exp_contraction(z, t, c):
    return np.exp(-c * t) * z


def _translation(z, t, c):
    return z + c * t


def _sqrt_flow(z, t, c):
    return (c * t / 2.0 + principal_sqrt(z)) ** 2


def _parabolic_disc(z, t, c):
    w0 = 1.0 - z
    return 1.0 - w0 / (1.0 + c * t * w0)


CLOSED_FORMS: Dict[str, Callable[[Any, Any, complex], Any]] = {
    "exp_contraction": _exp_contraction,
    "translation": _translation,
    "sqrt_flow": _sqrt_flow,
    "parabolic_disc": _parabolic_disc,
}


def closed_form(identifier: str, z, t, c: complex = 1.0):
    """
    Exact flow of a catalog semigroup.

    ``exp_contraction``: exp(-ct) z; ``translation``: z + ct; ``sqrt_flow``:
    (ct/2 + sqrt z)^2; ``parabolic_disc``: 1 - (1 - z)/(1 + ct(1 - z)).

    Example:
        >>> closed_form("sqrt_flow", 1, 1)
        (2.25+0j)

    Raises:
        UnknownGeneratorError: For an unknown identifier
    """
    try:
        func = CLOSED_FORMS[identifier]
    except KeyError:
        raise UnknownGeneratorError(f"Unknown closed-form flow {identifier!r}") from None
    z_arr = np.asarray(z, dtype=complex)
    t_arr = np.asarray(t, dtype=float)
    value = np.asarray(func(z_arr, t_arr, complex(c)), dtype=complex)
    return complex(value) if value.ndim == 0 else value


def flow_handle(
    spec: GeneratorSpec, cfg: Optional[IntegratorConfig] = None, prefer_closed_form: bool = False
) -> Callable[[Any, Any], Any]:
    """Callable ``(z, t) -> Phi_t(z)``, using the closed form when asked and available."""
    if prefer_closed_form and spec.closed_form is not None:
        identifier, c = spec.closed_form
        return lambda z, t: closed_form(identifier, z, t, c)
    return lambda z, t: advance(spec, z, t, cfg)


def semigroup_defect(
    spec: GeneratorSpec, z, s: float, t: float, cfg: Optional[IntegratorConfig] = None
):
    """|Phi_{s+t}(z) - Phi_t(Phi_s(z))| from two independent integrations."""
    if s < 0 or t < 0:
        raise ValueError("semigroup_defect() needs s, t >= 0")
    direct = np.asarray(advance(spec, z, s + t, cfg))
    composed = np.asarray(advance(spec, advance(spec, z, s, cfg), t, cfg))
    defect = np.abs(direct - composed)
    return float(defect) if defect.ndim == 0 else defect


@dataclass(frozen=True)
class DenjoyWolffEstimate:
    """Near-limit of a trajectory; ``status`` is converged, diverged or inconclusive."""

    point: Any
    status: str
    horizon: float

    def to_dict(self) -> Dict[str, Any]:
        return {"point": self.point, "status": self.status, "horizon": self.horizon}


def denjoy_wolff_estimate(
    spec: GeneratorSpec,
    z: complex,
    horizon: float = 1e8,
    cfg: Optional[IntegratorConfig] = None,
    t0: float = 10.0,
    conv_tol: float = 1e-6,
    divergence: float = 1e6,
) -> DenjoyWolffEstimate:
    """
    Follow Phi_T(z) over doubling horizons T = t0, 2 t0, ... up to ``horizon``.

    Returns converged when two successive horizons agree to ``conv_tol``, diverged
    (point INFINITY) when |Phi_T(z)| exceeds ``divergence``, and inconclusive
    otherwise, including when the step budget runs out.
    """
    logger.debug("denjoy_wolff_estimate() entry")
    previous = complex(z)
    elapsed = 0.0
    stage = t0
    try:
        while stage <= horizon:
            current = advance(spec, previous, stage - elapsed, cfg)
            elapsed = stage
            if abs(current) > divergence:
                logger.debug(f"denjoy_wolff_estimate() exit - diverged at T={stage!r}")
                return DenjoyWolffEstimate(INFINITY, "diverged", stage)
            if abs(current - previous) < conv_tol:
                logger.debug(f"denjoy_wolff_estimate() exit - converged at T={stage!r}")
                return DenjoyWolffEstimate(current, "converged", stage)
            previous = current
            stage *= 2.0
    except StepLimitExceeded as e:
        logger.warning(f"Denjoy-Wolff estimate stopped early: {e}")
        return DenjoyWolffEstimate(previous, "inconclusive", elapsed)
    logger.warning(f"Denjoy-Wolff estimate inconclusive at T={elapsed!r}")
    return DenjoyWolffEstimate(previous, "inconclusive", elapsed)


__all__ = [
    "IntegratorConfig",
    "advance",
    "Trajectory",
    "integrate",
    "CLOSED_FORMS",
    "closed_form",
    "flow_handle",
    "semigroup_defect",
    "DenjoyWolffEstimate",
    "denjoy_wolff_estimate",
]
