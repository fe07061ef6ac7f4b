"""
Herglotz functions: holomorphic p on the unit disc with Re p >= 0.

Entries are immutable dataclasses evaluated on numpy arrays. User entries are
looked up in a module-level registry so tests and applications can add their
own without touching the catalog parser.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Tuple

import numpy as np

from ..cplane import parse_complex, quasi_random_disc
from ..errors import UnknownGeneratorError

logger = logging.getLogger(__name__)

# Positivity slack for floating-point evaluation near boundary poles
POSITIVITY_TOL = 1e-10

POSITIVITY_SAMPLES = 10_000


class HerglotzSpec(ABC):
    """A Herglotz function p with Re p >= 0 on the unit disc."""

    @abstractmethod
    def __call__(self, z: np.ndarray) -> np.ndarray:
        """Evaluate p elementwise."""

    @abstractmethod
    def identifier(self) -> str:
        """Catalog fragment that rebuilds this entry."""

    @property
    def boundary_poles(self) -> Tuple[complex, ...]:
        """Poles of p on the unit circle."""
        return ()

    def real_part_minimum(self, n: int = POSITIVITY_SAMPLES, seed: int = 0) -> float:
        """Minimum of Re p over a quasi-random disc sample."""
        return float(np.min(np.real(self(quasi_random_disc(n, seed)))))


@dataclass(frozen=True)
class Constant(HerglotzSpec):
    """p(z) = c with Re c >= 0."""

    c: complex = 1.0

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        if not self.c.real >= 0.0 or not np.isfinite(self.c):
            raise ValueError(f"Constant Herglotz function needs Re c >= 0, got {self.c}")

    def __call__(self, z):
        return np.full(np.shape(z), self.c, dtype=complex)

    def identifier(self) -> str:
        return f"const:{format_complex(self.c)}"


@dataclass(frozen=True)
class MoebiusCayley(HerglotzSpec):
    """p(z) = k (1 + z) / (1 - z) with k > 0."""

    k: float = 1.0

    def __post_init__(self):
        if not self.k > 0.0 or not math.isfinite(self.k):
            raise ValueError(f"MoebiusCayley scale must be > 0, got {self.k}")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self.k * (1.0 + z) / (1.0 - z)

    def identifier(self) -> str:
        return f"cayley:{self.k!r}"

    @property
    def boundary_poles(self):
        return (1 + 0j,)


@dataclass(frozen=True)
class ReciprocalOnePlusZ(HerglotzSpec):
    """p(z) = 1 / (1 + z)."""

    def __call__(self, z):
        return 1.0 / (1.0 + np.asarray(z, dtype=complex))

    def identifier(self) -> str:
        return "recip"

    @property
    def boundary_poles(self):
        return (-1 + 0j,)


@dataclass(frozen=True)
class HerglotzEntry:
    """A registered user Herglotz function."""

    name: str
    func: Callable[..., np.ndarray]
    description: str
    poles: Tuple[complex, ...] = ()


_REGISTRY: Dict[str, HerglotzEntry] = {}


def register_herglotz(
    name: str,
    func: Callable[..., np.ndarray],
    description: str,
    poles: Tuple[complex, ...] = (),
) -> None:
    """
    Register a user Herglotz function under ``user:<name>``.

    Args:
        name: Registry key (no colons)
        func: Callable ``func(z, *params)`` evaluating p on a complex array
        description: Shown by the catalog listing
        poles: Boundary poles of p, if any
    """
    logger.debug("register_herglotz() entry")
    if not name or ":" in name:
        raise ValueError(f"Invalid Herglotz entry name {name!r}")
    if name in _REGISTRY:
        logger.warning(f"Herglotz entry '{name}' replaced")
    _REGISTRY[name] = HerglotzEntry(name, func, description, tuple(poles))
    logger.debug("register_herglotz() exit")


def registered_herglotz() -> List[HerglotzEntry]:
    return sorted(_REGISTRY.values(), key=lambda entry: entry.name)


@dataclass(frozen=True)
class UserTable(HerglotzSpec):
    """
    A registered closed-form Herglotz function with parameters.

    Positivity is checked once at construction on a quasi-random disc sample.
    """

    name: str
    params: Tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        logger.debug("UserTable.__post_init__() entry")
        if self.name not in _REGISTRY:
            raise UnknownGeneratorError(f"Unknown Herglotz entry 'user:{self.name}'")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        minimum = self.real_part_minimum()
        if not minimum >= -POSITIVITY_TOL:
            raise ValueError(
                f"user:{self.name} is not a Herglotz function: Re p reaches {minimum:.3g}"
            )
        logger.debug("UserTable.__post_init__() exit")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.asarray(_REGISTRY[self.name].func(z, *self.params), dtype=complex)

    def identifier(self) -> str:
        if not self.params:
            return f"user:{self.name}"
        return f"user:{self.name}:" + ",".join(repr(p) for p in self.params)

    @property
    def boundary_poles(self):
        return _REGISTRY[self.name].poles


def _cayley_power(z: np.ndarray, gamma: float = 0.5) -> np.ndarray:
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"cayley-power exponent must lie in [0, 1], got {gamma}")
    # (1+z)/(1-z) lies in the right half-plane, so the principal power keeps |arg| <= gamma*pi/2
    return ((1.0 + z) / (1.0 - z)) ** gamma


register_herglotz(
    "cayley-power",
    _cayley_power,
    "((1+z)/(1-z))^gamma, gamma in [0, 1] (default 0.5)",
    poles=(1 + 0j,),
)


def format_complex(c: complex) -> str:
    if c.imag == 0.0:
        return repr(c.real)
    sign = "+" if c.imag >= 0 else "-"
    return f"{c.real!r}{sign}{abs(c.imag)!r}i"


def herglotz_by_name(fragment: str) -> HerglotzSpec:
    """
    Build a Herglotz entry from its catalog fragment.

    Forms: ``const:<c>``, ``recip``, ``cayley[:<k>]``, ``user:<name>[:<p1>,<p2>...]``.
    """
    head, _, rest = fragment.partition(":")
    try:
        if head == "const":
            return Constant(parse_complex(rest) if rest else 1.0)
        if head == "recip" and not rest:
            return ReciprocalOnePlusZ()
        if head == "cayley":
            return MoebiusCayley(float(rest) if rest else 1.0)
        if head == "user":
            name, _, params = rest.partition(":")
            values = tuple(float(p) for p in params.split(",")) if params else ()
            return UserTable(name, values)
    except ValueError as e:
        raise UnknownGeneratorError(f"Invalid Herglotz entry {fragment!r}: {e}") from None
    raise UnknownGeneratorError(f"Unknown Herglotz entry {fragment!r}")


def describe_herglotz() -> Dict[str, Any]:
    """Built-in and registered entries with descriptions."""
    listing = {
        "const:<c>": "p(z) = c, Re c >= 0",
        "cayley:<k>": "p(z) = k(1+z)/(1-z), k > 0",
        "recip": "p(z) = 1/(1+z)",
    }
    for entry in registered_herglotz():
        listing[f"user:{entry.name}"] = entry.description
    return listing


__all__ = [
    "POSITIVITY_TOL",
    "HerglotzSpec",
    "Constant",
    "MoebiusCayley",
    "ReciprocalOnePlusZ",
    "UserTable",
    "HerglotzEntry",
    "register_herglotz",
    "registered_herglotz",
    "format_complex",
    "herglotz_by_name",
    "describe_herglotz",
]
