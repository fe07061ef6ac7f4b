"""
Infinitesimal generators of holomorphic semigroups.

A GeneratorSpec pairs a vector field H with the canonical domain its flow
lives on. ``spec(z)`` checks the domain and evaluates; ``spec.evaluate(z)`` is
the unchecked vectorised kernel used inside the integrator.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..cplane import (
    INFINITY,
    CanonicalDomain,
    RightHalfPlane,
    UnitDisc,
    cayley,
    principal_sqrt,
    quasi_random_halfplane,
)
from ..errors import DomainViolation
from .dirichlet import DirichletSeriesSpec, dirichlet_eval
from .herglotz import POSITIVITY_TOL, Constant, HerglotzSpec, format_complex

logger = logging.getLogger(__name__)

# |tau| may exceed 1 by this much before construction fails
TAU_TOL = 1e-12


class GeneratorSpec(ABC):
    """Symbolic description of an infinitesimal generator H on a canonical domain."""

    @property
    @abstractmethod
    def domain(self) -> CanonicalDomain:
        """Domain the semigroup acts on."""

    @abstractmethod
    def identifier(self) -> str:
        """Catalog identifier that resolves back to an equal spec."""

    @abstractmethod
    def evaluate(self, z: np.ndarray) -> np.ndarray:
        """H(z) elementwise without domain checks."""

    @property
    def denjoy_wolff(self) -> Any:
        """Denjoy-Wolff point, INFINITY, or None when unknown."""
        return None

    @property
    def closed_form(self) -> Optional[Tuple[str, complex]]:
        """(closed-form flow id, rate c) when the flow is known exactly."""
        return None

    @property
    def nonnegative_real_part(self) -> bool:
        """True when Re H >= 0 on the half-plane (Denjoy-Wolff point at infinity)."""
        return False

    @property
    def is_elliptic(self) -> bool:
        dw = self.denjoy_wolff
        return dw is not None and dw is not INFINITY and bool(self.domain.contains(dw))

    def singular_imaginary_parts(self, window: float) -> List[float]:
        """Ordinates on the imaginary axis where H blows up, within |Im| <= window."""
        return []

    def _reject(self, arr: np.ndarray, outside: np.ndarray) -> None:
        point = complex(arr[outside].ravel()[0])
        raise DomainViolation(
            f"{self.identifier()} is defined on {self.domain.describe()}, got {point}", point
        )

    def __call__(self, z):
        """
        Evaluate H with a domain check.

        Raises:
            DomainViolation: If some z lies outside the open domain
        """
        arr = np.asarray(z, dtype=complex)
        outside = ~np.asarray(self.domain.contains(arr))
        if outside.any():
            self._reject(arr, outside)
        value = np.asarray(self.evaluate(arr), dtype=complex)
        return complex(value.reshape(())) if arr.ndim == 0 else value

    def describe(self) -> Dict[str, Any]:
        dw = self.denjoy_wolff
        return {
            "id": self.identifier(),
            "domain": self.domain.describe(),
            "denjoy_wolff": dw,
            "closed_form": self.closed_form[0] if self.closed_form else None,
        }

    def __str__(self) -> str:
        return self.identifier()


def eval_generator(spec: GeneratorSpec, z):
    """H(z) for a generator spec, with the spec's domain check."""
    return spec(z)


def _minimum_real_part(spec: GeneratorSpec, n: int = 10_000) -> float:
    sample = quasi_random_halfplane(n, seed=0)
    inside = np.asarray(spec.domain.contains(sample))
    return float(np.min(np.real(spec.evaluate(sample[inside]))))


@dataclass(frozen=True)
class BerksonPorta(GeneratorSpec):
    """
    Disc generator H(z) = (z - tau)(conj(tau) z - 1) p(z).

    Example:
        >>> BerksonPorta(0, Constant(1))(0.5)
        (-0.5+0j)
    """

    tau: complex
    p: HerglotzSpec

    def __post_init__(self):
        tau = complex(self.tau)
        if not np.isfinite(tau) or abs(tau) > 1.0 + TAU_TOL:
            raise ValueError(f"Denjoy-Wolff parameter needs |tau| <= 1, got {tau}")
        if abs(tau) > 1.0:
            tau = tau / abs(tau)
        object.__setattr__(self, "tau", tau)

    @property
    def domain(self):
        return UnitDisc()

    def identifier(self):
        return f"bp:tau={format_complex(self.tau)},p={self.p.identifier()}"

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        return (z - self.tau) * (np.conj(self.tau) * z - 1.0) * self.p(z)

    @property
    def denjoy_wolff(self):
        return self.tau

    @property
    def closed_form(self):
        if isinstance(self.p, Constant):
            if self.tau == 0:
                return ("exp_contraction", self.p.c)
            if self.tau == 1:
                return ("parabolic_disc", self.p.c)
        return None


@dataclass(frozen=True)
class ConstantGenerator(GeneratorSpec):
    """Half-plane translation generator H = c with Re c >= 0."""

    c: complex = 1.0

    def __post_init__(self):
        c = complex(self.c)
        if not np.isfinite(c) or c.real < 0.0:
            raise ValueError(f"Constant half-plane generator needs Re c >= 0, got {c}")
        object.__setattr__(self, "c", c)

    @property
    def domain(self):
        return RightHalfPlane()

    def identifier(self):
        return f"hp:const:{format_complex(self.c)}"

    def evaluate(self, z):
        return np.full(np.shape(z), self.c, dtype=complex)

    @property
    def denjoy_wolff(self):
        return None if self.c == 0 else INFINITY

    @property
    def closed_form(self):
        return ("translation", self.c)

    @property
    def nonnegative_real_part(self):
        return True


@dataclass(frozen=True)
class SqrtGenerator(GeneratorSpec):
    """H(w) = sqrt(w), principal branch, on the right half-plane."""

    @property
    def domain(self):
        return RightHalfPlane()

    def identifier(self):
        return "hp:sqrt"

    def evaluate(self, z):
        return np.sqrt(np.asarray(z, dtype=complex))

    def _reject(self, arr, outside):
        # Surface the branch cut distinctly from an ordinary domain miss
        principal_sqrt(arr[outside])
        super()._reject(arr, outside)

    @property
    def denjoy_wolff(self):
        return INFINITY

    @property
    def closed_form(self):
        return ("sqrt_flow", 1.0)

    @property
    def nonnegative_real_part(self):
        return True


@dataclass(frozen=True)
class DirichletGenerator(GeneratorSpec):
    """Half-plane generator given by a truncated Dirichlet series."""

    series: DirichletSeriesSpec
    label: str = ""

    @property
    def domain(self):
        return RightHalfPlane(max(0.0, self.series.abscissa))

    def identifier(self):
        if self.label:
            return self.label
        parts = [f"c0={format_complex(self.series.c0)}"]
        parts += [
            f"a{n}={format_complex(a)}"
            for n, a in enumerate(self.series.coefficients, start=1)
            if a != 0
        ]
        if self.series.tail_amplitude > 0:
            parts.append(f"tail={self.series.tail_amplitude!r}:{self.series.tail_exponent!r}")
        if math.isfinite(self.series.sigma0):
            parts.append(f"sigma0={self.series.sigma0!r}")
        return "hp:dirichlet:" + ",".join(parts)

    def evaluate(self, z):
        return dirichlet_eval(self.series, np.asarray(z, dtype=complex))[0]

    @cached_property
    def nonnegative_real_part(self):
        return _minimum_real_part(self) >= -POSITIVITY_TOL

    @property
    def denjoy_wolff(self):
        return INFINITY if self.nonnegative_real_part else None

    @property
    def closed_form(self):
        if all(a == 0 for a in self.series.coefficients) and self.series.tail_amplitude == 0:
            return ("translation", self.series.c0)
        return None


def _pole_angles(p: HerglotzSpec) -> List[float]:
    return [float(np.angle(pole)) for pole in p.boundary_poles]


def _periodic_ordinates(base: float, window: float) -> List[float]:
    period = 2.0 * math.pi
    first = base - period * math.floor((base + window) / period)
    values = []
    k = 0
    while first + k * period <= window:
        value = first + k * period
        if abs(value) <= window:
            values.append(value)
        k += 1
    return values


@dataclass(frozen=True)
class PullbackViaLog(GeneratorSpec):
    """
    Half-plane generator G(w) = p(exp(-w)).

    Conjugate to the elliptic disc generator -z p(z) under z = exp(-w).
    """

    inner: BerksonPorta

    def __post_init__(self):
        if not isinstance(self.inner, BerksonPorta) or abs(self.inner.tau) > 1e-15:
            raise ValueError("Logarithmic pullback needs a disc generator with tau = 0")

    @property
    def domain(self):
        return RightHalfPlane()

    def identifier(self):
        return f"pull-log:{self.inner.identifier()}"

    def evaluate(self, z):
        return self.inner.p(np.exp(-np.asarray(z, dtype=complex)))

    @property
    def denjoy_wolff(self):
        return INFINITY

    @property
    def nonnegative_real_part(self):
        return True

    @property
    def closed_form(self):
        if isinstance(self.inner.p, Constant):
            return ("translation", self.inner.p.c)
        return None

    def singular_imaginary_parts(self, window):
        # exp(-w) = exp(i theta) on Re w = 0 at Im w = -theta + 2 pi k
        values = []
        for theta in _pole_angles(self.inner.p):
            values.extend(_periodic_ordinates(-theta, window))
        return sorted(values)


@dataclass(frozen=True)
class PullbackViaCayley(GeneratorSpec):
    """
    Half-plane generator G(w) = T'(z) H(z), z = T^-1(w), for the Cayley map T.

    With tau = 1 this is 2 p((w - 1)/(w + 1)).
    """

    inner: BerksonPorta

    def __post_init__(self):
        if not isinstance(self.inner, BerksonPorta):
            raise ValueError("Cayley pullback needs a Berkson-Porta disc generator")

    @property
    def domain(self):
        return RightHalfPlane()

    def identifier(self):
        return f"pull-cayley:{self.inner.identifier()}"

    def evaluate(self, z):
        w = np.asarray(z, dtype=complex)
        disc = (w - 1.0) / (w + 1.0)
        if self.inner.tau == 1:
            return 2.0 * self.inner.p(disc)
        return 2.0 * self.inner.evaluate(disc) / (1.0 - disc) ** 2

    @property
    def denjoy_wolff(self):
        tau = self.inner.tau
        if tau == 1:
            return INFINITY
        if abs(tau) < 1.0:
            return cayley(tau)
        # Boundary Denjoy-Wolff point lands on the imaginary axis
        return (1.0 + tau) / (1.0 - tau)

    @cached_property
    def nonnegative_real_part(self):
        if self.inner.tau == 1:
            return True
        return _minimum_real_part(self) >= -POSITIVITY_TOL

    @property
    def closed_form(self):
        if self.inner.tau == 1 and isinstance(self.inner.p, Constant):
            return ("translation", 2.0 * self.inner.p.c)
        return None

    def singular_imaginary_parts(self, window):
        values = []
        for theta in _pole_angles(self.inner.p):
            if abs(math.sin(theta / 2.0)) < 1e-15:
                continue
            ordinate = 1.0 / math.tan(theta / 2.0)
            if abs(ordinate) <= window:
                values.append(ordinate)
        return sorted(values)


__all__ = [
    "TAU_TOL",
    "GeneratorSpec",
    "eval_generator",
    "BerksonPorta",
    "ConstantGenerator",
    "SqrtGenerator",
    "DirichletGenerator",
    "PullbackViaLog",
    "PullbackViaCayley",
]
