"""
semiflow: numerical experiments on holomorphic semigroups.

Generators on the unit disc and the right half-plane, their flows Phi_t, the
rate at which Phi_t approaches the identity as t -> 0, monotone envelopes of
trajectories, and walk-on-spheres harmonic measure on polygonal domains.

Basic usage:
    >>> from semiflow import advance, resolve
    >>> round(advance(resolve("hp:sqrt"), 1.0, 1.0).real, 8)
    2.25

Verification suites:
    >>> from semiflow import ExperimentConfig, run_suite
    >>> report = run_suite("ex4.8", ExperimentConfig())
    >>> report.passed
    True
"""

import logging

# Add NullHandler to prevent "No handler found" warnings
logging.getLogger(__name__).addHandler(logging.NullHandler())

__version__ = "0.1.0"

from .actions import Action, ActionContext, ActionRegistry, create_registry
from .batch import BatchRunner, run_batch
from .config import ExperimentConfig
from .cplane import INFINITY, RightHalfPlane, Square, UnitDisc, cayley, inverse_cayley
from .curves import build_proof_domain, envelope_curve, monotone_envelope, proof_domain_family
from .errors import (
    ConfigError,
    DomainViolation,
    FlowError,
    GeometryError,
    PreconditionError,
    SemiflowError,
    SuiteFailure,
    UnknownGeneratorError,
    UsageError,
)
from .flow import IntegratorConfig, Trajectory, advance, closed_form, integrate, semigroup_defect
from .generators import GeneratorSpec, list_catalog, resolve
from .geometry import JordanDomain, Polyline
from .hmeasure import BoundarySubset, HMEstimate, harmonic_measure, lavrentiev_experiment
from .ptypes import ActionHandler, FlowHandle, Printer
from .rates import RateReport, SupSamplerConfig, rate_fit, rate_report, sup_deviation
from .reports import dumps_report, write_report
from .suites import SUITES, SuiteReport, run_suite

__all__ = [
    # Complex plane
    "INFINITY",
    "UnitDisc",
    "RightHalfPlane",
    "Square",
    "cayley",
    "inverse_cayley",
    # Generators and flows
    "GeneratorSpec",
    "resolve",
    "list_catalog",
    "IntegratorConfig",
    "advance",
    "integrate",
    "closed_form",
    "semigroup_defect",
    "Trajectory",
    # Rates
    "SupSamplerConfig",
    "sup_deviation",
    "rate_fit",
    "rate_report",
    "RateReport",
    # Curves and domains
    "Polyline",
    "JordanDomain",
    "monotone_envelope",
    "envelope_curve",
    "build_proof_domain",
    "proof_domain_family",
    # Harmonic measure
    "BoundarySubset",
    "HMEstimate",
    "harmonic_measure",
    "lavrentiev_experiment",
    # Experiments and reports
    "ExperimentConfig",
    "SuiteReport",
    "SUITES",
    "run_suite",
    "dumps_report",
    "write_report",
    # Commands
    "Action",
    "ActionContext",
    "ActionRegistry",
    "create_registry",
    "BatchRunner",
    "run_batch",
    # Protocols
    "ActionHandler",
    "FlowHandle",
    "Printer",
    # Errors
    "SemiflowError",
    "DomainViolation",
    "FlowError",
    "GeometryError",
    "UnknownGeneratorError",
    "UsageError",
    "ConfigError",
    "PreconditionError",
    "SuiteFailure",
]
