"""
Numerical checks of generator hypotheses: growth constants, K/eps profiles and bound checks.

Every sup reported here is a maximum over a finite lattice, so it is a lower
estimate of the true supremum. Half-plane profiles also carry a window flag.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from ..cplane import disc_lattice, halfplane_lattice, quasi_random_disc, quasi_random_halfplane
from ..parallel import map_array
from .dirichlet import DEFAULT_EPS_LIST
from .herglotz import POSITIVITY_TOL, HerglotzSpec
from .specs import BerksonPorta, GeneratorSpec

logger = logging.getLogger(__name__)

# A profile is window-limited when doubling the window grows the sup by more than this
WINDOW_GROWTH = 1.05

DEFAULT_WINDOW_R = 100.0


def herglotz_growth_constant(p: HerglotzSpec, grid: Optional[np.ndarray] = None) -> float:
    """
    Estimate M with |p(z)| <= M / (1 - |z|^2) as the lattice max of (1 - |z|^2)|p(z)|.

    Args:
        p: Herglotz function
        grid: Disc points; the default polar lattice reaches radius 1 - 2^-20

    Example:
        >>> herglotz_growth_constant(Constant(1))
        1.0
    """
    grid = disc_lattice(20, 64) if grid is None else np.asarray(grid, dtype=complex).ravel()
    weighted = map_array(lambda z: (1.0 - np.abs(z) ** 2) * np.abs(p(z)), grid)
    return float(np.max(weighted))


@dataclass
class ProfileRow:
    eps: float
    sup: float
    sup_half_window: float

    @property
    def window_limited(self) -> bool:
        return self.sup > WINDOW_GROWTH * self.sup_half_window


@dataclass
class BoundProfile:
    """sup |H| on Re w >= eps per eps, with the least K such that sup <= K/eps."""

    generator: str
    window_R: float
    rows: List[ProfileRow] = field(default_factory=list)

    @property
    def window_limited(self) -> bool:
        return any(row.window_limited for row in self.rows)

    @property
    def K_hat(self) -> Optional[float]:
        """None when the sup depends on the window, so no K fits."""
        if self.window_limited or not self.rows:
            return None
        return max(row.eps * row.sup for row in self.rows)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "generator": self.generator,
            "window_R": self.window_R,
            "rows": [
                {"eps": r.eps, "sup": r.sup, "window_limited": r.window_limited} for r in self.rows
            ],
            "window_limited": self.window_limited,
            "K_hat": self.K_hat,
        }


def _profile_imaginary_axis(window_R: float, n_imag: int, focus: Sequence[float]) -> np.ndarray:
    ladder = window_R * np.ldexp(1.0, -np.arange(0, 30))
    even = window_R * ((2.0 * np.arange(n_imag)) / (n_imag - 1) - 1.0)
    extra = np.array([f for f in focus if abs(f) <= window_R], dtype=float)
    return np.unique(np.concatenate([[0.0], ladder, -ladder, even, extra]))


def halfplane_bound_profile(
    spec: GeneratorSpec,
    eps_list: Sequence[float] = DEFAULT_EPS_LIST,
    window_R: float = DEFAULT_WINDOW_R,
    n_imag: int = 257,
    focus: Optional[Sequence[float]] = None,
) -> BoundProfile:
    """
    Grid estimate of sup |H| on each half-plane Re w >= eps.

    Real parts follow the ladder eps * 2^k up to the window; imaginary parts cover
    [-R, R] plus the generator's singular ordinates. Each row also records the sup
    over the half window; a row whose sup keeps growing with the window marks the
    whole profile as window-limited.
    """
    logger.debug(f"halfplane_bound_profile() entry - {spec.identifier()}")
    if focus is None:
        focus = spec.singular_imaginary_parts(window_R)
    imag = _profile_imaginary_axis(window_R, n_imag, focus)
    profile = BoundProfile(spec.identifier(), window_R)
    for eps in eps_list:
        if not eps > 0.0:
            raise ValueError(f"Half-plane offsets must be > 0, got {eps}")
        ladder = eps * np.ldexp(1.0, np.arange(0, 64))
        ladder = ladder[ladder <= max(window_R, eps)]
        points = (ladder[:, None] + 1j * imag[None, :]).ravel()
        inside = np.asarray(spec.domain.contains(points))
        if not inside.any():
            profile.rows.append(ProfileRow(eps, math.inf, math.inf))
            continue
        moduli = map_array(lambda z: np.abs(spec.evaluate(z)), points[inside])
        half = (points[inside].real <= max(window_R / 2.0, eps)) & (
            np.abs(points[inside].imag) <= window_R / 2.0
        )
        profile.rows.append(ProfileRow(eps, float(moduli.max()), float(moduli[half].max())))
    if profile.window_limited:
        logger.warning(f"sup |H| for {spec.identifier()} grows with the window; no K/eps fit")
    logger.debug(f"halfplane_bound_profile() exit - K_hat={profile.K_hat}")
    return profile


def difference_quotient_generator(flow_handle: Callable[[Any, float], Any], z, t: float):
    """
    (Phi_t(z) - z) / t, which tends to H(z) as t -> 0.

    Args:
        flow_handle: Callable ``(z, t) -> Phi_t(z)``
        z: Interior point(s)
        t: Positive time
    """
    if not t > 0.0:
        raise ValueError(f"difference quotient needs t > 0, got {t}")
    z = np.asarray(z, dtype=complex)
    quotient = (np.asarray(flow_handle(z, t), dtype=complex) - z) / t
    return complex(quotient) if quotient.ndim == 0 else quotient


def factor_decomposition_error(
    spec: BerksonPorta, sample: Optional[np.ndarray] = None, floor: float = 1e-8
) -> float:
    """Max |H(z) / ((z - tau)(conj(tau) z - 1)) - p(z)| where the denominator exceeds ``floor``."""
    z = quasi_random_disc(10_000) if sample is None else np.asarray(sample, dtype=complex)
    denominator = (z - spec.tau) * (np.conj(spec.tau) * z - 1.0)
    keep = np.abs(denominator) > floor
    ratio = spec.evaluate(z[keep]) / denominator[keep]
    return float(np.max(np.abs(ratio - spec.p(z[keep])), initial=0.0))


def halfplane_positivity(spec: GeneratorSpec, n: int = 10_000, seed: int = 0) -> float:
    """Minimum of Re H over a quasi-random sample of the spec's half-plane."""
    sample = quasi_random_halfplane(n, seed)
    sample = sample[np.asarray(spec.domain.contains(sample))]
    return float(np.min(np.real(spec.evaluate(sample))))


@dataclass
class BoundCheck:
    """Measured quantity against its analytic bound."""

    name: str
    measured: float
    bound: float

    @property
    def passed(self) -> bool:
        return self.measured <= self.bound * (1.0 + 1e-9)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "measured": self.measured,
            "bound": self.bound,
            "passed": self.passed,
        }


def horodisc_bound_check(spec: BerksonPorta, lam: float, n: int = 10_000) -> BoundCheck:
    """sup |H| on the horodisc D(lam, 1 - lam) against M (1 - lam) / lam, for tau = 1."""
    if spec.tau != 1:
        raise ValueError("horodisc bound applies to tau = 1 generators")
    if not 0.0 < lam < 1.0:
        raise ValueError(f"horodisc parameter must lie in (0, 1), got {lam}")
    M = herglotz_growth_constant(spec.p)
    z = lam + (1.0 - lam) * quasi_random_disc(n)
    measured = float(np.max(np.abs(spec.evaluate(z))))
    return BoundCheck(f"horodisc lam={lam!r}", measured, M * (1.0 - lam) / lam)


def cayley_pullback_bound_check(
    spec: BerksonPorta, window_R: float = DEFAULT_WINDOW_R
) -> BoundCheck:
    """Max of |G(w)| / (M ((1 + x)^2 + y^2) / (2x)) for the Cayley pullback of a tau = 1 spec."""
    if spec.tau != 1:
        raise ValueError("Cayley pullback bound applies to tau = 1 generators")
    M = herglotz_growth_constant(spec.p)
    w = halfplane_lattice(20, 129, window_R, re_max=window_R)
    x, y = w.real, w.imag
    value = 2.0 * spec.p((w - 1.0) / (w + 1.0))
    ratio = np.abs(value) / (M * ((1.0 + x) ** 2 + y**2) / (2.0 * x))
    return BoundCheck("cayley pullback", float(ratio.max()), 1.0)


def log_pullback_bound_check(spec: BerksonPorta, window_R: float = 10.0) -> BoundCheck:
    """Max of |p(exp(-w))| / (2M / Re w) over 0 < Re w < 1, for an elliptic tau = 0 spec."""
    if spec.tau != 0:
        raise ValueError("logarithmic pullback bound applies to tau = 0 generators")
    M = herglotz_growth_constant(spec.p)
    focus = [math.pi * (2 * k + 1) for k in range(-4, 4)]
    w = halfplane_lattice(20, 129, window_R, re_max=0.5, focus=focus)
    ratio = np.abs(spec.p(np.exp(-w))) / (2.0 * M / w.real)
    return BoundCheck("log pullback", float(ratio.max()), 1.0)


def is_positive(minimum: float) -> bool:
    return minimum >= -POSITIVITY_TOL


__all__ = [
    "WINDOW_GROWTH",
    "herglotz_growth_constant",
    "ProfileRow",
    "BoundProfile",
    "halfplane_bound_profile",
    "difference_quotient_generator",
    "factor_decomposition_error",
    "halfplane_positivity",
    "BoundCheck",
    "horodisc_bound_check",
    "cayley_pullback_bound_check",
    "log_pullback_bound_check",
    "is_positive",
]
