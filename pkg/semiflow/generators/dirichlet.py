"""
Truncated Dirichlet series c0 + sum a_n n^-s with explicit tail bounds.
"""

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..cplane import halfplane_lattice
from ..errors import ConfigError, DivergenceRegion

logger = logging.getLogger(__name__)

# Elements per (points x terms) evaluation block
_EVAL_BUDGET = 1_000_000

DEFAULT_EPS_LIST = tuple(2.0**-k for k in range(0, 11))


@dataclass(frozen=True)
class DirichletSeriesSpec:
    """
    A finite Dirichlet series with an optional declared tail.

    ``coefficients[n - 1]`` is a_n. The tail declaration states |a_n| <= A n^-beta
    for n > N; with A = 0 the series is exactly the truncation.

    Example:
        >>> spec = DirichletSeriesSpec((0, 1), c0=1)
        >>> dirichlet_eval(spec, 1.0)
        ((1.5+0j), 0.0)
    """

    coefficients: Tuple[complex, ...] = (0j,)
    c0: complex = 0j
    sigma0: float = -math.inf
    tail_amplitude: float = 0.0
    tail_exponent: float = 0.0

    def __post_init__(self):
        coefficients = tuple(complex(a) for a in self.coefficients) or (0j,)
        object.__setattr__(self, "coefficients", coefficients)
        object.__setattr__(self, "c0", complex(self.c0))
        if not all(np.isfinite(a) for a in coefficients) or not np.isfinite(self.c0):
            raise ValueError("Dirichlet coefficients must be finite")
        if math.isnan(self.sigma0) or self.sigma0 == math.inf:
            raise ValueError(f"Invalid abscissa hint {self.sigma0}")
        if not self.tail_amplitude >= 0.0 or not math.isfinite(self.tail_amplitude):
            raise ValueError(f"Tail amplitude must be finite and >= 0, got {self.tail_amplitude}")
        if self.tail_amplitude > 0.0 and not math.isfinite(self.tail_exponent):
            raise ValueError("Tail exponent must be finite")

    @property
    def length(self) -> int:
        """Truncation length N."""
        return len(self.coefficients)

    @property
    def abscissa(self) -> float:
        """Effective abscissa: evaluation needs Re s strictly greater."""
        if self.tail_amplitude > 0.0:
            return max(self.sigma0, 1.0 - self.tail_exponent)
        return self.sigma0

    def tail_bound(self, sigma):
        """A N^(1 - beta - sigma) / (beta + sigma - 1), zero without a declared tail."""
        sigma = np.asarray(sigma, dtype=float)
        if self.tail_amplitude == 0.0:
            return np.zeros_like(sigma)
        excess = self.tail_exponent + sigma - 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            bound = self.tail_amplitude * float(self.length) ** (-excess) / excess
        return np.where(excess > 0, bound, np.inf)

    def absolute_bound(self, eps: float) -> float:
        """|c0| + sum |a_n| n^-eps + tail(eps), a bound for |H| on Re s >= eps."""
        n = np.arange(1, self.length + 1, dtype=float)
        head = abs(self.c0) + math.fsum(np.abs(self.coefficients) * n**-eps)
        return head + float(self.tail_bound(eps))

    def describe(self) -> Dict[str, Any]:
        return {
            "c0": self.c0,
            "coefficients": list(self.coefficients),
            "sigma0": self.sigma0,
            "tail": [self.tail_amplitude, self.tail_exponent],
            "abscissa": self.abscissa,
        }

    @classmethod
    def from_terms(
        cls, terms: Mapping[int, complex], c0: complex = 0j, **kwargs
    ) -> "DirichletSeriesSpec":
        """Build from a sparse mapping n -> a_n (n >= 1)."""
        if any(n < 1 for n in terms):
            raise ValueError("Dirichlet term indices start at 1")
        size = max(terms, default=1)
        coefficients = [0j] * size
        for n, a in terms.items():
            coefficients[n - 1] = complex(a)
        return cls(tuple(coefficients), c0=c0, **kwargs)


def dirichlet_eval(spec: DirichletSeriesSpec, s):
    """
    Evaluate the truncation at s with its tail bound.

    Returns:
        (value, tail_bound), scalars for scalar s and arrays otherwise

    Raises:
        DivergenceRegion: If some Re s <= abscissa
    """
    arr = np.asarray(s, dtype=complex)
    flat = arr.ravel()
    bad = ~(flat.real > spec.abscissa)
    if bad.any():
        point = complex(flat[bad][0])
        raise DivergenceRegion(
            f"Dirichlet series needs Re s > {spec.abscissa}, got {point}", point
        )
    logs = np.log(np.arange(1, spec.length + 1, dtype=float))
    coefficients = np.asarray(spec.coefficients)
    value = np.empty(flat.size, dtype=complex)
    step = max(1, _EVAL_BUDGET // spec.length)
    for start in range(0, flat.size, step):
        chunk = flat[start : start + step]
        powers = np.exp(-chunk[:, None] * logs[None, :])
        value[start : start + step] = spec.c0 + powers @ coefficients
    tail = spec.tail_bound(flat.real)
    if arr.ndim == 0:
        return complex(value[0]), float(tail[0])
    return value.reshape(arr.shape), tail.reshape(arr.shape)


def load_dirichlet_csv(
    path: Union[str, Path],
    c0: Optional[complex] = None,
    sigma0: float = -math.inf,
    tail: Tuple[float, float] = (0.0, 0.0),
) -> DirichletSeriesSpec:
    """
    Read coefficients from CSV rows ``n,re,im`` or ``n,"re,im"``.

    Lines starting with ``#`` are comments; a row with n = 0 sets c0 unless
    ``c0`` is given explicitly.

    Raises:
        ConfigError: On unreadable files or malformed rows
    """
    logger.debug("load_dirichlet_csv() entry")
    terms: Dict[int, complex] = {}
    constant = 0j
    try:
        with open(path, newline="") as handle:
            for lineno, row in enumerate(csv.reader(handle), start=1):
                if not row or not row[0].strip() or row[0].lstrip().startswith("#"):
                    continue
                if row[0].strip() == "n":
                    continue
                fields = [f.strip() for f in row]
                if len(fields) == 2 and "," in fields[1]:
                    fields = [fields[0], *fields[1].split(",")]
                if len(fields) != 3:
                    raise ConfigError(f"{path}:{lineno}: expected n,re,im")
                n = int(fields[0])
                value = complex(float(fields[1]), float(fields[2]))
                if n < 0 or n in terms or (n == 0 and constant != 0j):
                    raise ConfigError(f"{path}:{lineno}: invalid or repeated index {n}")
                if n == 0:
                    constant = value
                else:
                    terms[n] = value
    except OSError as e:
        raise ConfigError(f"Cannot read Dirichlet coefficients: {e}") from None
    except ValueError as e:
        raise ConfigError(f"Malformed Dirichlet coefficients in {path}: {e}") from None
    spec = DirichletSeriesSpec.from_terms(
        terms,
        c0=constant if c0 is None else c0,
        sigma0=sigma0,
        tail_amplitude=tail[0],
        tail_exponent=tail[1],
    )
    logger.debug(f"load_dirichlet_csv() exit - {spec.length} terms")
    return spec


@dataclass
class BoundRow:
    """Grid sup of |H| on Re s >= eps against the analytic coefficient bound."""

    eps: float
    grid_sup: float
    analytic_bound: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.grid_sup) and self.grid_sup <= self.analytic_bound * (1 + 1e-12)


@dataclass
class ClassGReport:
    """Outcome of the class-G generator check; violations are listed, never raised."""

    maps_into_closure: bool
    violations: List[complex]
    min_real_part: float
    rows: List[BoundRow] = field(default_factory=list)
    window_R: float = 0.0

    @property
    def bounded_on_halfplanes(self) -> bool:
        return bool(self.rows) and all(row.passed for row in self.rows)

    @property
    def passed(self) -> bool:
        return self.maps_into_closure and self.bounded_on_halfplanes

    def to_dict(self) -> Dict[str, Any]:
        return {
            "maps_into_closure": self.maps_into_closure,
            "violations": list(self.violations),
            "min_real_part": self.min_real_part,
            "bounded_on_halfplanes": self.bounded_on_halfplanes,
            "rows": [
                {
                    "eps": r.eps,
                    "grid_sup": r.grid_sup,
                    "analytic_bound": r.analytic_bound,
                    "passed": r.passed,
                }
                for r in self.rows
            ],
            "window_R": self.window_R,
            "passed": self.passed,
        }


def check_class_G_generator(
    spec: DirichletSeriesSpec,
    grid: Optional[np.ndarray] = None,
    eps_list: Sequence[float] = DEFAULT_EPS_LIST,
    window_R: float = 100.0,
    n_imag: int = 257,
) -> ClassGReport:
    """
    Check that H maps Re s > 0 into its closure and is bounded on each Re s >= eps.

    Args:
        spec: Series defining H
        grid: Points of the right half-plane for the closure test (default: windowed lattice)
        eps_list: Half-plane offsets for the boundedness rows
        window_R: Imaginary window of the default lattices
        n_imag: Imaginary resolution of the default lattices

    Returns:
        ClassGReport with every violating point listed
    """
    logger.debug("check_class_G_generator() entry")
    if grid is None:
        grid = halfplane_lattice(27, n_imag, window_R, re_max=window_R)
    grid = np.asarray(grid, dtype=complex).ravel()

    if spec.abscissa >= 0.0:
        logger.warning(f"Dirichlet series diverges on part of Re s > 0 (abscissa {spec.abscissa})")
        defined = grid.real > spec.abscissa
        violations = [complex(z) for z in grid[~defined]]
        values, _ = dirichlet_eval(spec, grid[defined])
    else:
        violations = []
        values, _ = dirichlet_eval(spec, grid)
        defined = np.ones(grid.size, dtype=bool)
    real = np.real(values)
    negative = real < -1e-10
    violations.extend(complex(z) for z in grid[defined][negative])
    min_real = float(real.min()) if real.size else math.nan

    rows = []
    imag = np.unique(np.imag(grid))
    for eps in eps_list:
        if not eps > 0.0:
            raise ValueError(f"Half-plane offsets must be > 0, got {eps}")
        ladder = eps * np.ldexp(1.0, np.arange(0, 64))
        ladder = ladder[ladder <= max(window_R, eps)]
        points = (ladder[:, None] + 1j * imag[None, :]).ravel()
        if eps <= spec.abscissa:
            rows.append(BoundRow(eps, math.inf, math.inf))
            continue
        sup = float(np.max(np.abs(dirichlet_eval(spec, points)[0])))
        rows.append(BoundRow(eps, sup, spec.absolute_bound(eps)))

    report = ClassGReport(
        maps_into_closure=not violations,
        violations=violations,
        min_real_part=min_real,
        rows=rows,
        window_R=window_R,
    )
    logger.debug(
        f"check_class_G_generator() exit - {len(violations)} violations, passed={report.passed}"
    )
    return report


__all__ = [
    "DEFAULT_EPS_LIST",
    "DirichletSeriesSpec",
    "dirichlet_eval",
    "load_dirichlet_csv",
    "BoundRow",
    "ClassGReport",
    "check_class_G_generator",
]
