"""
Infinitesimal generators: Herglotz data, Dirichlet series, catalog and hypothesis checks.
"""

from .catalog import ALIASES, list_catalog, resolve
from .checks import (
    BoundCheck,
    BoundProfile,
    cayley_pullback_bound_check,
    difference_quotient_generator,
    factor_decomposition_error,
    halfplane_bound_profile,
    halfplane_positivity,
    herglotz_growth_constant,
    horodisc_bound_check,
    log_pullback_bound_check,
)
from .dirichlet import (
    ClassGReport,
    DirichletSeriesSpec,
    check_class_G_generator,
    dirichlet_eval,
    load_dirichlet_csv,
)
from .herglotz import (
    Constant,
    HerglotzSpec,
    MoebiusCayley,
    ReciprocalOnePlusZ,
    UserTable,
    register_herglotz,
)
from .specs import (
    BerksonPorta,
    ConstantGenerator,
    DirichletGenerator,
    GeneratorSpec,
    PullbackViaCayley,
    PullbackViaLog,
    SqrtGenerator,
    eval_generator,
)

__all__ = [
    # Herglotz functions
    "HerglotzSpec",
    "Constant",
    "MoebiusCayley",
    "ReciprocalOnePlusZ",
    "UserTable",
    "register_herglotz",
    # Dirichlet series
    "DirichletSeriesSpec",
    "dirichlet_eval",
    "load_dirichlet_csv",
    "ClassGReport",
    "check_class_G_generator",
    # Generator specs
    "GeneratorSpec",
    "BerksonPorta",
    "ConstantGenerator",
    "SqrtGenerator",
    "DirichletGenerator",
    "PullbackViaLog",
    "PullbackViaCayley",
    "eval_generator",
    # Catalog
    "ALIASES",
    "resolve",
    "list_catalog",
    # Checks
    "herglotz_growth_constant",
    "halfplane_bound_profile",
    "BoundProfile",
    "difference_quotient_generator",
    "factor_decomposition_error",
    "halfplane_positivity",
    "BoundCheck",
    "horodisc_bound_check",
    "cayley_pullback_bound_check",
    "log_pullback_bound_check",
]
