"""
Complex-plane kernel: canonical domains, Cayley transform, principal square root.

All functions accept a Python/numpy scalar or an array of complex values and
return a value of the same shape. Scalars come back as plain Python
``complex``/``float``/``bool``.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, Iterable, Optional, Union

import numpy as np
from scipy.stats import qmc

from .errors import BranchCutError, DomainViolation

logger = logging.getLogger(__name__)

ComplexPoint = complex
ComplexLike = Union[complex, float, int, np.ndarray]

# Membership tolerance for mapped points
BOUNDARY_TOL = 1e-12


class _Infinity:
    """The point at infinity of the Riemann sphere."""

    _instance: Optional["_Infinity"] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


def is_infinity(value: Any) -> bool:
    """Check whether a value is the point at infinity."""
    return value is INFINITY


def _as_array(z: ComplexLike) -> np.ndarray:
    return np.asarray(z, dtype=complex)


def _restore(values: np.ndarray, scalar: bool, kind=complex):
    if scalar:
        return kind(values.reshape(()))
    return values


def _first_offender(z: np.ndarray, mask: np.ndarray) -> complex:
    return complex(z[mask].ravel()[0])


class CanonicalDomain(ABC):
    """An open canonical domain of the complex plane."""

    @abstractmethod
    def _contains(self, z: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _distance(self, z: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def describe(self) -> Dict[str, Any]:
        """Plain-data description used in reports."""

    def contains(self, z: ComplexLike):
        """True where z lies in the open domain."""
        arr = _as_array(z)
        with np.errstate(invalid="ignore"):
            inside = self._contains(arr) & np.isfinite(arr)
        return _restore(inside, arr.ndim == 0, bool)

    def distance_to_boundary(self, z: ComplexLike):
        """Euclidean distance to the boundary; negative outside."""
        arr = _as_array(z)
        return _restore(self._distance(arr), arr.ndim == 0, float)

    def outward_speed(self, z: np.ndarray, velocity: np.ndarray) -> np.ndarray:
        """
        Rate at which a point moving with ``velocity`` approaches the boundary.

        The base implementation is the full speed, which is always an upper bound.
        """
        return np.abs(velocity)


@dataclass(frozen=True)
class UnitDisc(CanonicalDomain):
    """The unit disc."""

    def _contains(self, z):
        return np.abs(z) < 1.0

    def _distance(self, z):
        return 1.0 - np.abs(z)

    def outward_speed(self, z, velocity):
        modulus = np.maximum(np.abs(z), 1e-300)
        return np.real(velocity * np.conj(z)) / modulus

    def describe(self):
        return {"kind": "unit_disc"}


@dataclass(frozen=True)
class RightHalfPlane(CanonicalDomain):
    """The half-plane Re z > offset."""

    offset: float = 0.0

    def __post_init__(self):
        if not self.offset >= 0.0 or not math.isfinite(self.offset):
            raise ValueError(f"Half-plane offset must be finite and >= 0, got {self.offset}")

    def _contains(self, z):
        return np.real(z) > self.offset

    def _distance(self, z):
        return np.real(z) - self.offset

    def outward_speed(self, z, velocity):
        return -np.real(velocity)

    def describe(self):
        return {"kind": "right_half_plane", "offset": self.offset}


@dataclass(frozen=True)
class Square(CanonicalDomain):
    """Open axis-parallel square with lower-left ``corner`` and side ``side``."""

    corner: complex
    side: float

    def __post_init__(self):
        if not self.side > 0.0:
            raise ValueError(f"Square side must be > 0, got {self.side}")
        object.__setattr__(self, "corner", complex(self.corner))

    @property
    def center(self) -> complex:
        return self.corner + complex(self.side, self.side) / 2

    def _contains(self, z):
        x = np.real(z) - self.corner.real
        y = np.imag(z) - self.corner.imag
        return (x > 0) & (x < self.side) & (y > 0) & (y < self.side)

    def _distance(self, z):
        x = np.real(z) - self.corner.real
        y = np.imag(z) - self.corner.imag
        return np.minimum(np.minimum(x, self.side - x), np.minimum(y, self.side - y))

    def describe(self):
        return {"kind": "square", "corner": self.corner, "side": self.side}


@dataclass(frozen=True)
class Horodisc(CanonicalDomain):
    """The horodisc D(lam, 1 - lam), internally tangent to the unit circle at 1."""

    lam: float

    def __post_init__(self):
        if not 0.0 < self.lam < 1.0:
            raise ValueError(f"Horodisc parameter must lie in (0, 1), got {self.lam}")

    def _contains(self, z):
        return np.abs(z - self.lam) < 1.0 - self.lam

    def _distance(self, z):
        return (1.0 - self.lam) - np.abs(z - self.lam)

    def outward_speed(self, z, velocity):
        offset = z - self.lam
        modulus = np.maximum(np.abs(offset), 1e-300)
        return np.real(velocity * np.conj(offset)) / modulus

    def describe(self):
        return {"kind": "horodisc", "lam": self.lam}


def contains(domain: CanonicalDomain, z: ComplexLike):
    """True iff z lies in the open domain."""
    return domain.contains(z)


def cayley(z: ComplexLike):
    """
    Cayley transform T(z) = (1 + z) / (1 - z) from the unit disc onto the right half-plane.

    Raises:
        DomainViolation: If some |z| >= 1 - BOUNDARY_TOL
    """
    arr = _as_array(z)
    bad = ~(np.abs(arr) < 1.0 - BOUNDARY_TOL)
    if np.any(bad):
        point = _first_offender(arr, bad)
        raise DomainViolation(f"cayley() needs |z| < 1, got {point}", point)
    return _restore((1.0 + arr) / (1.0 - arr), arr.ndim == 0)


def inverse_cayley(w: ComplexLike):
    """
    Inverse Cayley transform (w - 1) / (w + 1) from the right half-plane onto the disc.

    Raises:
        DomainViolation: If some Re(w) <= 0
    """
    arr = _as_array(w)
    bad = ~(np.real(arr) > 0.0)
    if np.any(bad):
        point = _first_offender(arr, bad)
        raise DomainViolation(f"inverse_cayley() needs Re(w) > 0, got {point}", point)
    return _restore((arr - 1.0) / (arr + 1.0), arr.ndim == 0)


def principal_sqrt(z: ComplexLike):
    """
    Principal square root with the cut on (-inf, 0).

    Raises:
        BranchCutError: If some z is real and negative
    """
    arr = _as_array(z)
    bad = (np.imag(arr) == 0.0) & (np.real(arr) < 0.0)
    if np.any(bad):
        point = _first_offender(arr, bad)
        raise BranchCutError(f"principal_sqrt() is undefined on the cut, got {point}", point)
    return _restore(np.sqrt(arr), arr.ndim == 0)


def horodisc_level(z: ComplexLike):
    """
    Parameter beta of the horocycle through z.

    Solves |z - 1|^2 / (1 - |z|^2) = (1 - beta) / beta, so z lies in the horodisc
    H_lam exactly when beta > lam.
    """
    arr = _as_array(z)
    inner = 1.0 - np.abs(arr) ** 2
    beta = inner / (np.abs(1.0 - arr) ** 2 + inner)
    return _restore(beta, arr.ndim == 0, float)


def parse_complex(text: str) -> complex:
    """
    Parse a complex number written with ``i`` or ``j`` as the imaginary unit.

    Example:
        >>> parse_complex("1+2i")
        (1+2j)
        >>> parse_complex("0.5")
        (0.5+0j)
    """
    cleaned = text.strip().replace(" ", "").replace("I", "j").replace("i", "j")
    if not cleaned:
        raise ValueError("empty complex literal")
    try:
        return complex(cleaned)
    except ValueError:
        raise ValueError(f"not a complex number: {text!r}") from None


def quasi_random_disc(n: int, seed: int = 0, max_radius: float = 1.0 - 1e-6) -> np.ndarray:
    """Area-uniform scrambled Halton sample of the disc |z| < max_radius."""
    unit = qmc.Halton(d=2, scramble=True, seed=seed).random(n)
    radius = np.sqrt(unit[:, 0]) * max_radius
    return radius * np.exp(2j * np.pi * unit[:, 1])


def quasi_random_halfplane(
    n: int,
    seed: int = 0,
    re_range: tuple = (1e-6, 10.0),
    im_window: float = 10.0,
) -> np.ndarray:
    """Scrambled Halton sample of the right half-plane, log-uniform in Re, uniform in Im."""
    lo, hi = re_range
    if not 0.0 < lo < hi:
        raise ValueError(f"invalid real-part range {re_range}")
    unit = qmc.Halton(d=2, scramble=True, seed=seed).random(n)
    re = np.exp(np.log(lo) + (np.log(hi) - np.log(lo)) * unit[:, 0])
    im = im_window * (2.0 * unit[:, 1] - 1.0)
    return re + 1j * im


def disc_lattice(k_max: int, n_angles: int) -> np.ndarray:
    """
    Polar lattice of the disc: radius 0 plus radii 1 - 2^-k (k = 1..k_max) at n_angles angles.

    Angles are 2*pi*j/n_angles; doubling n_angles or raising k_max yields a superset.
    """
    radii = 1.0 - np.ldexp(1.0, -np.arange(1, k_max + 1))
    angles = 2.0 * np.pi * (np.arange(n_angles) / n_angles)
    ring = (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
    return np.concatenate([np.zeros(1, dtype=complex), ring])


def halfplane_lattice(
    k_max: int,
    n_imag: int,
    window_R: float,
    re_max: float = 1.0,
    focus: Iterable[float] = (),
) -> np.ndarray:
    """
    Windowed lattice of the right half-plane.

    Real parts re_max * 2^-k (k = 0..k_max). Imaginary parts are 0, the ladder
    +/-R * 2^-k, an even grid of n_imag points on [-R, R] and any ``focus``
    ordinates inside the window.
    """
    re = re_max * np.ldexp(1.0, -np.arange(0, k_max + 1))
    ladder = window_R * np.ldexp(1.0, -np.arange(0, k_max + 1))
    j = np.arange(n_imag)
    even = window_R * ((2.0 * j) / (n_imag - 1) - 1.0)
    extra = np.array([f for f in focus if abs(f) <= window_R], dtype=float)
    im = np.unique(np.concatenate([[0.0], ladder, -ladder, even, extra]))
    return (re[:, None] + 1j * im[None, :]).ravel()


__all__ = [
    "ComplexPoint",
    "INFINITY",
    "is_infinity",
    "BOUNDARY_TOL",
    "CanonicalDomain",
    "UnitDisc",
    "RightHalfPlane",
    "Square",
    "Horodisc",
    "contains",
    "cayley",
    "inverse_cayley",
    "principal_sqrt",
    "horodisc_level",
    "parse_complex",
    "quasi_random_disc",
    "quasi_random_halfplane",
    "disc_lattice",
    "halfplane_lattice",
]
