"""
Experiment configuration from INI files and command-line overrides.

A file holds one ``[experiment]`` section of flat ``key = value`` pairs.
Fields left unset mean "use the suite default".
"""

import configparser
import logging
import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Union

import numpy as np

from .errors import ConfigError
from .flow import IntegratorConfig
from .generators import resolve
from .generators.specs import GeneratorSpec
from .rates import SupSamplerConfig, t_sequence

logger = logging.getLogger(__name__)

SECTION = "experiment"

_SEED_LIMIT = 2**64


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Parameters shared by the commands and verification suites.

    Example:
        >>> cfg = ExperimentConfig(generator="hp:sqrt", t_min=1e-4, t_max=1e-1, t_steps=4)
        >>> len(cfg.t_values())
        4
    """

    generator: Optional[str] = None
    t_min: Optional[float] = None
    t_max: Optional[float] = None
    t_steps: Optional[int] = None
    window_R: Optional[float] = None
    re_max: Optional[float] = None
    k_max: Optional[int] = None
    n_angles: Optional[int] = None
    n_imag: Optional[int] = None
    walks: Optional[int] = None
    seed: int = 0
    side: float = 1.0
    family_size: Optional[int] = None
    center_offset: Optional[float] = None
    rel_tol: Optional[float] = None
    abs_tol: Optional[float] = None
    max_steps: Optional[int] = None
    boundary_guard: Optional[float] = None
    out: Optional[str] = None
    csv: Optional[str] = None
    emit_plot_data: Optional[str] = None

    def __post_init__(self):
        logger.debug("ExperimentConfig.__post_init__() entry")
        if not 0 <= self.seed < _SEED_LIMIT:
            raise ConfigError(f"seed must lie in [0, 2^64), got {self.seed}")
        for name in ("t_steps", "k_max", "n_angles", "n_imag", "walks", "family_size", "max_steps"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value}")
        for name in ("t_min", "t_max", "window_R", "re_max", "rel_tol", "abs_tol", "side"):
            value = getattr(self, name)
            if value is not None and not (math.isfinite(value) and value > 0.0):
                raise ConfigError(f"{name} must be a positive number, got {value}")
        if self.t_min is not None and self.t_max is not None and self.t_min >= self.t_max:
            raise ConfigError("t_min must be smaller than t_max")
        if self.generator is not None:
            resolve(self.generator)
        logger.debug("ExperimentConfig.__post_init__() exit")

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "ExperimentConfig":
        """
        Load the ``[experiment]`` section of an INI file.

        Raises:
            ConfigError: If the file is unreadable, the section is missing, a key is
                unknown or a value does not convert
        """
        logger.debug(f"ExperimentConfig.from_file() entry - {path}")
        parser = configparser.ConfigParser()
        try:
            with open(path) as handle:
                parser.read_file(handle)
        except (OSError, configparser.Error) as e:
            raise ConfigError(f"Cannot read config {path}: {e}") from None
        if not parser.has_section(SECTION):
            raise ConfigError(f"Config {path} has no [{SECTION}] section")
        values = {key: parser.get(SECTION, key) for key in parser.options(SECTION)}
        config = cls(**cls._convert(values))
        logger.debug("ExperimentConfig.from_file() exit")
        return config

    @classmethod
    def _convert(cls, raw: Dict[str, str]) -> Dict[str, Any]:
        converters: Dict[str, Callable[[str], Any]] = {}
        for f in fields(cls):
            hint = str(f.type)
            if "int" in hint:
                converters[f.name] = int
            elif "float" in hint:
                converters[f.name] = float
            else:
                converters[f.name] = str
        converters["seed"] = lambda text: int(text, 0)
        converted = {}
        for key, text in raw.items():
            if key not in converters:
                raise ConfigError(f"Unknown config key {key!r}")
            try:
                converted[key] = converters[key](text.strip())
            except ValueError:
                raise ConfigError(f"Bad value for {key}: {text!r}") from None
        return converted

    def merged(self, **overrides) -> "ExperimentConfig":
        """Copy with every non-None override applied."""
        changes = {key: value for key, value in overrides.items() if value is not None}
        return replace(self, **changes) if changes else self

    def spec(self, default: str) -> GeneratorSpec:
        return resolve(self.generator or default)

    def integrator(self) -> IntegratorConfig:
        changes = {
            name: getattr(self, name)
            for name in ("rel_tol", "abs_tol", "max_steps", "boundary_guard")
            if getattr(self, name) is not None
        }
        try:
            return IntegratorConfig(**changes)
        except ValueError as e:
            raise ConfigError(str(e)) from None

    def t_values(self, default: Optional[np.ndarray] = None) -> np.ndarray:
        """Strictly decreasing geometric t-sequence, or ``default`` when none is configured."""
        if self.t_min is None and self.t_max is None and self.t_steps is None:
            if default is None:
                raise ConfigError("no t-sequence configured")
            return np.asarray(default, dtype=float)
        if None in (self.t_min, self.t_max, self.t_steps):
            raise ConfigError("t_min, t_max and t_steps must be given together")
        try:
            return t_sequence(self.t_max, self.t_min, self.t_steps)
        except ValueError as e:
            raise ConfigError(str(e)) from None

    def sampler(self, spec: GeneratorSpec, **defaults) -> SupSamplerConfig:
        """Sup lattice for the spec, with configured values over ``defaults``."""
        options = dict(defaults)
        for name in ("window_R", "re_max", "k_max", "n_angles", "n_imag"):
            if getattr(self, name) is not None:
                options[name] = getattr(self, name)
        try:
            return SupSamplerConfig.for_spec(spec, **options)
        except ValueError as e:
            raise ConfigError(str(e)) from None

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


__all__ = ["SECTION", "ExperimentConfig"]
