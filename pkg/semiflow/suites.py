"""
Verification suites.

Each suite runs one acceptance experiment and returns a SuiteReport listing
its checks with the measured values. Suites are deterministic given their
ExperimentConfig.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List

import numpy as np

from .config import ExperimentConfig
from .cplane import RightHalfPlane, UnitDisc, horodisc_level
from .curves import (
    build_proof_domain,
    envelope_curve,
    monotone_envelope,
    proof_domain_family,
    suffix_minimum_bruteforce,
)
from .errors import ConfigError, UsageError
from .flow import advance, closed_form, denjoy_wolff_estimate, integrate, semigroup_defect
from .generators import (
    DirichletGenerator,
    check_class_G_generator,
    factor_decomposition_error,
    halfplane_bound_profile,
    halfplane_positivity,
    resolve,
)
from .generators.checks import is_positive
from .geometry import JordanDomain, Polyline
from .hmeasure import (
    BoundarySubset,
    disc_arc_oracle,
    estimate_from_exits,
    lavrentiev_experiment,
    mid_cut_instance,
    rectangle_side_oracle,
    sample_exits,
    subordination_check,
)
from .parallel import map_array
from .rates import (
    MIN_ALPHA,
    SQRT_BOUND_SLACK,
    SupSamplerConfig,
    comparison_solution,
    default_t_sequence,
    nonuniform_witness,
    rate_fit,
    rate_report,
    real_part_deviation,
    sharpness_comparison,
    sharpness_lower_bound,
    sqrt_constant,
    sup_deviation,
    verify_sqrt_theorem,
)

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "measured": self.measured}


@dataclass
class SuiteReport:
    """Named checks with their measured values, plus free-form details."""

    suite: str
    checks: List[CheckResult] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    def check(self, name: str, passed: bool, **measured) -> bool:
        self.checks.append(CheckResult(name, bool(passed), measured))
        logger.info(f"{self.suite}: {name}: {'pass' if passed else 'FAIL'}")
        return bool(passed)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failed_checks(self) -> List[str]:
        return [check.name for check in self.checks if not check.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "checks": [check.to_dict() for check in self.checks],
            "details": self.details,
        }


@dataclass(frozen=True)
class Suite:
    name: str
    description: str
    runner: Callable[[ExperimentConfig], SuiteReport]


SUITES: Dict[str, Suite] = {}


def suite(name: str, description: str):
    """Register a suite runner under ``name``."""

    def decorator(func: Callable[[ExperimentConfig], SuiteReport]):
        SUITES[name] = Suite(name, description, func)
        return func

    return decorator


def run_suite(name: str, config: ExperimentConfig) -> SuiteReport:
    """
    Run a registered suite.

    Raises:
        UsageError: If no suite has that name
    """
    try:
        entry = SUITES[name]
    except KeyError:
        raise UsageError(f"Unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
    logger.info(f"Suite {name} started")
    report = entry.runner(config)
    logger.info(f"Suite {name} finished: {'PASS' if report.passed else 'FAIL'}")
    return report


def _disc_spec(config: ExperimentConfig, default: str):
    spec = config.spec(default)
    if not isinstance(spec.domain, UnitDisc):
        raise ConfigError(f"{spec.identifier()} is not a disc generator")
    return spec


def _halfplane_spec(config: ExperimentConfig, default: str):
    spec = config.spec(default)
    if not isinstance(spec.domain, RightHalfPlane) or not spec.nonnegative_real_part:
        raise ConfigError(f"{spec.identifier()} is not a half-plane generator with Re H >= 0")
    return spec


@suite("thm1.1", "disc bound sup |Phi_t(z) - z| <= C sqrt(t)")
def thm1_1(config: ExperimentConfig) -> SuiteReport:
    spec = _disc_spec(config, "ex5.4")
    t_seq = config.t_values(default_t_sequence(6, 18))
    rates = verify_sqrt_theorem(spec, t_seq, config.sampler(spec), config.integrator())
    report = SuiteReport("thm1.1", details={"rates": rates})
    alpha = rates.fit.alpha if rates.fit else math.nan
    for name, passed in rates.checks.items():
        report.check(name, passed, C_hat=rates.constants["C_hat"], alpha=alpha)
    return report


@suite("thm4.7", "uniform convergence on the right half-plane for bounded class G generators")
def thm4_7(config: ExperimentConfig) -> SuiteReport:
    spec = _halfplane_spec(config, "hp:dirichlet:c0=1,a2=1")
    cfg = config.integrator()
    sampler = config.sampler(spec, window_R=1e4)
    report = SuiteReport("thm4.7")

    M = math.inf
    if isinstance(spec, DirichletGenerator):
        class_g = check_class_G_generator(spec.series)
        report.details["class_G"] = class_g
        report.check(
            "class G generator",
            class_g.passed,
            maps_into_closure=class_g.maps_into_closure,
            bounded_on_halfplanes=class_g.bounded_on_halfplanes,
        )
        M = spec.series.absolute_bound(0.0)
    if not math.isfinite(M):
        M = float(np.max(np.abs(map_array(spec.evaluate, sampler.lattice()))))

    t_seq = np.sort(config.t_values(np.geomspace(1e-2, 1e-5, 7)))[::-1]
    rows = sup_deviation(spec, t_seq, sampler, cfg)
    report.details["rows"] = rows
    report.details["window"] = sampler.window()
    small = [row for row in rows if row.t <= 1e-2]
    report.check(
        "sup <= 1.05 M t",
        bool(small) and all(row.sup <= 1.05 * M * row.t for row in small),
        M=M,
        worst_ratio=max((row.sup / (M * row.t) for row in small), default=math.nan),
    )
    report.check(
        "sup decreases with t",
        all(later.sup < earlier.sup for earlier, later in zip(rows, rows[1:])),
        first=rows[0].sup,
        last=rows[-1].sup,
    )
    return report


@suite("thm5.1", "K/eps generator growth implies a sqrt(t) rate on the half-plane")
def thm5_1(config: ExperimentConfig) -> SuiteReport:
    spec = _halfplane_spec(config, "pull-cayley:ex5.4")
    cfg = config.integrator()
    report = SuiteReport("thm5.1")

    profile = halfplane_bound_profile(spec)
    report.details["profile"] = profile
    report.check(
        "sup |H| <= K/eps",
        profile.K_hat is not None,
        K_hat=profile.K_hat,
        window_limited=profile.window_limited,
    )

    t_seq = config.t_values(np.geomspace(1e-2, 1e-6, 9))
    sampler = config.sampler(spec, window_R=1e4)
    rates = rate_report(spec, t_seq, sampler, cfg)
    report.details["rates"] = rates
    fitted = [row for row in rates.rows if 1e-6 <= row.t <= 1e-2 and row.sup > 0.0]
    alpha = rate_fit(fitted).alpha if len(fitted) >= 5 else math.nan
    report.check("slope >= 0.45", alpha >= MIN_ALPHA, alpha=alpha)

    A_hat = sqrt_constant(rates.rows)
    holds = [row.sup <= (1.0 + SQRT_BOUND_SLACK) * A_hat * math.sqrt(row.t) for row in rates.rows]
    t0_hat = 0.0
    for row, ok in sorted(zip(rates.rows, holds), key=lambda pair: pair[0].t):
        if not ok:
            break
        t0_hat = row.t
    report.check("sup <= 1.1 A sqrt(t)", all(holds), A_hat=A_hat, t0_hat=t0_hat)

    if profile.K_hat is not None:
        lattice = sampler.lattice()
        checked = []
        for t in t_seq[::4]:
            deviation = real_part_deviation(spec, t, lattice, cfg)
            checked.append(
                {"t": t, "real_part": deviation, "bound": (1 + profile.K_hat) * math.sqrt(t)}
            )
        report.details["real_part"] = checked
        report.check(
            "Re deviation <= (1 + K) sqrt(t)",
            all(row["real_part"] <= row["bound"] for row in checked),
            K_hat=profile.K_hat,
        )
    return report


@suite("ex4.8", "square-root semigroup: closed form and non-uniform convergence")
def ex4_8(config: ExperimentConfig) -> SuiteReport:
    spec = resolve("ex4.8")
    cfg = config.integrator()
    report = SuiteReport("ex4.8")

    value = advance(spec, 1.0 + 0j, 1.0, cfg)
    report.check("Phi_1(1) = 2.25", abs(value - 2.25) <= 1e-8, value=value)

    witness = nonuniform_witness([0.1], [1e2, 1e4], cfg)
    report.details["witness"] = witness
    report.check(
        "deviation at iR grows like t sqrt(R)",
        all(abs(row.numerical / (row.t * math.sqrt(row.R)) - 1.0) <= 0.01 for row in witness),
        deviations=[row.numerical for row in witness],
    )
    report.check("closed form and flow agree", all(row.agrees for row in witness))

    scaling = nonuniform_witness([1e-2, 1e-3], [1e2, 1e4, 1e6], cfg)
    ratios = [row.closed_form / (row.t * math.sqrt(row.R)) for row in scaling]
    report.check(
        "t sqrt(R) scaling within 5%",
        all(abs(ratio - 1.0) <= 0.05 for ratio in ratios),
        ratios=ratios,
    )

    profile = halfplane_bound_profile(spec)
    report.check("no K/eps fit", profile.window_limited, K_hat=profile.K_hat)

    sampler = SupSamplerConfig(RightHalfPlane(), k_max=config.k_max or 24, window_R=1e6)
    row = sup_deviation(spec, 0.01, sampler, cfg)
    report.check(
        "windowed sup at R = 1e6",
        abs(row.sup - 10.0) <= 1e-2 and row.window_limited,
        sup=row.sup,
        argmax=row.argmax,
        window_limited=row.window_limited,
    )
    return report


@suite("ex5.4", "sharpness of the sqrt(t) rate for H(z) = (1 - z)^2 / (1 + z)")
def ex5_4(config: ExperimentConfig) -> SuiteReport:
    spec = _disc_spec(config, "ex5.4")
    cfg = config.integrator()
    report = SuiteReport("ex5.4")

    t_seq = config.t_values(default_t_sequence(6, 18))
    rates = rate_report(spec, t_seq, config.sampler(spec), cfg)
    report.details["rates"] = rates
    alpha = rates.fit.alpha if rates.fit else math.nan
    report.check("alpha in [0.45, 0.55]", 0.45 <= alpha <= 0.55, alpha=alpha)
    report.check(
        "sup >= sqrt(t)",
        all(row.sup >= math.sqrt(row.t) for row in rates.rows),
        worst_ratio=min(row.sup / math.sqrt(row.t) for row in rates.rows),
    )

    sharp_t = [4.0**-k for k in range(3, 9)]
    bounds = [sharpness_lower_bound(t) for t in sharp_t]
    report.check(
        "lower bound >= sqrt(t)",
        all(bound >= math.sqrt(t) for bound, t in zip(bounds, sharp_t)),
        bounds=bounds,
    )
    gaps = []
    for t in sharp_t:
        x = math.sqrt(t) / 2.0 - 1.0
        gaps.append(abs(float(comparison_solution(x, t)) - x - math.sqrt(t)))
    report.check("equality at x = sqrt(t)/2 - 1", max(gaps) <= 1e-12, max_gap=max(gaps))

    comparisons = [sharpness_comparison(spec, t, cfg=cfg) for t in sharp_t]
    report.details["comparison"] = comparisons
    report.check(
        "Phi_t(x) >= y_x(t)",
        all(c.passed for c in comparisons),
        minimum=min(c.minimum for c in comparisons),
    )
    return report


@suite("lavrentiev", "small boundary arcs have small harmonic measure over a proof-domain family")
def lavrentiev(config: ExperimentConfig) -> SuiteReport:
    a = config.side
    family = proof_domain_family(a, config.family_size or 20, cfg=config.integrator())
    centers = [domain.square.center for domain in family]
    experiment = lavrentiev_experiment(family, a, centers, config.walks or 100_000, config.seed)
    report = SuiteReport("lavrentiev", details={"experiment": experiment})

    small = [row for row in experiment.rows if row.ratio <= 0.02 + 1e-12]
    report.check(
        "omega + 3 stderr < 1/8 for ell(A) <= 0.02a",
        all(row.passed for row in small),
        worst=max(row.estimate.value + 3 * row.estimate.stderr for row in small),
    )
    report.check("rho_hat >= 0.02", experiment.rho_hat >= 0.02, rho_hat=experiment.rho_hat)
    report.check(
        "omega(full boundary) = 1",
        all(value == 1.0 for value in experiment.full_boundary),
        values=experiment.full_boundary,
    )
    monotone = True
    for domain in family:
        values = [row.estimate.value for row in experiment.rows if row.domain == domain.name]
        monotone &= all(b >= a_ for a_, b in zip(values, values[1:]))
    report.check("omega grows with nested arcs", monotone)
    return report


def _lipschitz_ratio(x: np.ndarray, g: np.ndarray) -> float:
    dx = np.abs(x[:, None] - x[None, :])
    dg = np.abs(g[:, None] - g[None, :])
    off = dx > 0
    return float(np.max(dg[off] / dx[off]))


@suite("envelope", "monotone envelope laws and proof-domain lengths")
def envelope(config: ExperimentConfig) -> SuiteReport:
    rng = np.random.default_rng(config.seed)
    report = SuiteReport("envelope")

    mismatches = 0
    law_failures = 0
    for _ in range(1000):
        n = int(rng.integers(2, 64))
        x = np.cumsum(rng.uniform(0.1, 1.0, n))
        f = rng.normal(size=n)
        g = monotone_envelope(x, f)
        mismatches += not np.array_equal(g, suffix_minimum_bruteforce(f))
        law_failures += bool(
            np.any(np.diff(g) < 0)
            or np.any(g > f)
            or not np.array_equal(monotone_envelope(x, g), g)
        )
    report.check("suffix-min oracle agreement", mismatches == 0, mismatches=mismatches)
    report.check("non-decreasing, below f, idempotent", law_failures == 0, failures=law_failures)

    lipschitz_failures = 0
    for _ in range(1000):
        n = int(rng.integers(2, 64))
        dx = rng.uniform(0.1, 1.0, n)
        x = np.cumsum(dx)
        K = float(rng.uniform(0.5, 3.0))
        f = np.cumsum(K * dx * rng.uniform(-1.0, 1.0, n))
        g = monotone_envelope(x, f)
        if _lipschitz_ratio(x, g) > K * (1.0 + 1e-9):
            lipschitz_failures += 1
    report.check(
        "Lipschitz constant transfers", lipschitz_failures == 0, failures=lipschitz_failures
    )

    trajectory = integrate(resolve("hp:sqrt"), 1.0 + 0.5j, 2.0, config.integrator())
    curve = envelope_curve(trajectory)
    rise = np.diff(trajectory.points.imag) > 0
    report.check(
        "envelope of an increasing trajectory is unchanged",
        bool(rise.all()) and np.array_equal(curve.vertices, trajectory.points),
    )
    span = curve.end - curve.start
    report.check(
        "monotone curve length <= L1 span",
        curve.length() <= (abs(span.real) + abs(span.imag)) * (1.0 + 1e-12),
        length=curve.length(),
    )

    a = config.side
    family = proof_domain_family(a, config.family_size or 20, cfg=config.integrator())
    lengths = [domain.length for domain in family]
    report.check(
        "proof-domain length <= 4a", max(lengths) <= 4.0 * a * (1.0 + 1e-12), lengths=lengths
    )
    square = family[0].square
    left_edge = Polyline.from_points([square.corner, square.corner + 1j * square.side])
    full = build_proof_domain(square, left_edge)
    report.check("left-edge envelope gives the square", abs(full.length - 4.0 * a) <= 1e-12 * a)
    return report


@suite("subordination", "harmonic measure subordination on nested domains")
def subordination(config: ExperimentConfig) -> SuiteReport:
    a = config.side
    walks = config.walks or 20_000
    report = SuiteReport("subordination")
    instances = []

    offset = 0.25 if config.center_offset is None else config.center_offset
    inner, outer, w, gamma = mid_cut_instance(a, offset)
    instances.append(("mid-cut", inner, outer, w, gamma))
    square = JordanDomain.square(complex(-a / 2, -a / 2), a)
    disc = JordanDomain.regular_polygon(0j, a / 2, 512, name="disc")
    instances.append(("disc-in-square", disc, square, 0j, BoundarySubset.edge(1)))
    outer = JordanDomain.square(0j, a)
    for domain in proof_domain_family(a, 8, cfg=config.integrator()):
        instances.append((domain.name, domain, outer, domain.square.center, BoundarySubset.edge(3)))

    results = {}
    for index, (name, inner, outer, w, gamma) in enumerate(instances):
        results[name] = subordination_check(inner, outer, w, gamma, walks, config.seed + index)
    report.details["instances"] = results
    report.check(
        "omega_inner >= omega_outer within noise",
        all(result.passed for result in results.values()),
        failed=[name for name, result in results.items() if not result.passed],
    )
    cut = results["mid-cut"].inner
    report.check("omega(cut) >= 1/4", cut.value + 3 * cut.stderr >= 0.25, omega=cut.value)
    exact = rectangle_side_oracle((0.5 + offset) * a, a, offset * a, 0.5 * a)
    report.check(
        "omega(cut) matches the rectangle value",
        abs(cut.value - exact) <= 3 * cut.stderr,
        omega=cut.value,
        exact=exact,
        stderr=cut.stderr,
    )
    return report


@suite("calibration", "walk-on-spheres against exact disc and square harmonic measures")
def calibration(config: ExperimentConfig) -> SuiteReport:
    walks = config.walks or 100_000
    rng = np.random.default_rng(config.seed)
    report = SuiteReport("calibration")

    disc = JordanDomain.regular_polygon(0j, 1.0, 1024, name="disc")
    sample = sample_exits(disc, 0j, walks, config.seed)
    starts = rng.uniform(0.0, 2.0 * math.pi, 10)
    spans = np.concatenate([[math.pi / 6, math.pi / 2, math.pi], rng.uniform(0.1, 6.0, 7)])
    errors = []
    for theta, span in zip(starts, spans):
        subset = BoundarySubset.disc_arc(disc, float(theta), float(theta + span))
        estimate = estimate_from_exits(disc, sample, subset)
        errors.append(abs(estimate.value - disc_arc_oracle(theta, theta + span)))
    report.check("disc arcs match theta / 2 pi within 0.01", max(errors) <= 0.01, errors=errors)

    square = JordanDomain.square(0j, 1.0)
    exits = sample_exits(square, 0.5 + 0.5j, walks, config.seed)
    sides = [estimate_from_exits(square, exits, BoundarySubset.edge(j)) for j in range(4)]
    report.check(
        "square sides in [0.24, 0.26]",
        all(0.24 <= side.value <= 0.26 for side in sides),
        values=[side.value for side in sides],
    )
    both = estimate_from_exits(square, exits, BoundarySubset.edge(0).union(BoundarySubset.edge(1)))
    combined = math.hypot(sides[0].stderr, sides[1].stderr, both.stderr)
    report.check(
        "additivity on disjoint sides",
        abs(both.value - sides[0].value - sides[1].value) <= 3 * combined,
    )
    whole = estimate_from_exits(square, exits, BoundarySubset.full(square))
    report.check("omega(full boundary) = 1", whole.value == 1.0, value=whole.value)

    first = sample_exits(square, 0.3 + 0.6j, 2_000, config.seed, workers=1)
    second = sample_exits(square, 0.3 + 0.6j, 2_000, config.seed, chunk_size=300)
    report.check(
        "bit-exact reruns",
        np.array_equal(first.segments, second.segments) and np.array_equal(first.u, second.u),
    )
    return report


SEMIGROUP_IDS = (
    "bp:tau=0,p=const:1",
    "bp:tau=0,p=recip",
    "ex5.4",
    "bp:tau=1,p=const:1",
    "hp:sqrt",
    "hp:const:1+1i",
    "hp:dirichlet:c0=1,a2=1",
    "pull-cayley:ex5.4",
)

ORACLE_IDS = ("bp:tau=0,p=const:1", "hp:const:1+1i", "hp:sqrt", "bp:tau=1,p=const:1")


def _draw_points(spec, rng: np.random.Generator, n: int, radius: float = 0.9) -> np.ndarray:
    if isinstance(spec.domain, UnitDisc):
        r = radius * np.sqrt(rng.uniform(0.0, 1.0, n))
        return r * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, n))
    re = spec.domain.offset + rng.uniform(0.1, 5.0, n)
    return re + 1j * rng.uniform(-5.0, 5.0, n)


@suite("semigroup", "semigroup law and closed-form oracle agreement")
def semigroup(config: ExperimentConfig) -> SuiteReport:
    rng = np.random.default_rng(config.seed)
    cfg = config.integrator()
    report = SuiteReport("semigroup")

    worst = 0.0
    failures = 0
    for draw in range(500):
        spec = resolve(SEMIGROUP_IDS[draw % len(SEMIGROUP_IDS)])
        z = complex(_draw_points(spec, rng, 1)[0])
        s, t = rng.uniform(0.0, 1.0, 2)
        defect = semigroup_defect(spec, z, float(s), float(t), cfg)
        worst = max(worst, defect)
        failures += defect > 1e-8
    report.check("Phi_t o Phi_s = Phi_(s+t)", failures == 0, worst=worst, failures=failures)

    times = np.linspace(0.1, 1.0, 10)
    errors = {}
    for identifier in ORACLE_IDS:
        spec = resolve(identifier)
        z = _draw_points(spec, rng, 100, radius=0.95)
        numerical = advance(spec, z, times, cfg)
        form, c = spec.closed_form
        exact = closed_form(form, z[:, None], times[None, :], c)
        errors[identifier] = float(np.max(np.abs(numerical - exact)))
    report.check(
        "advance matches closed forms",
        all(error <= 1e-8 for error in errors.values()),
        max_errors=errors,
    )
    return report


HALFPLANE_IDS = ("hp:sqrt", "hp:dirichlet:c0=1,a2=1", "hp:const:1+1i", "pull-cayley:ex5.4")
ELLIPTIC_IDS = ("bp:tau=0,p=const:1", "bp:tau=0,p=recip", "bp:tau=0,p=cayley:1")
HORODISC_IDS = ("ex5.4", "bp:tau=1,p=const:1")


@suite("invariants", "monotone real part, Schwarz contraction, horodisc invariance, positivity")
def invariants(config: ExperimentConfig) -> SuiteReport:
    rng = np.random.default_rng(config.seed)
    cfg = config.integrator()
    report = SuiteReport("invariants")
    times = np.linspace(0.0, 1.0, 11)
    per_spec = math.ceil(10_000 / (len(HALFPLANE_IDS) + len(ELLIPTIC_IDS) + len(HORODISC_IDS)))

    violations = 0
    for identifier in HALFPLANE_IDS:
        spec = resolve(identifier)
        z = _draw_points(spec, rng, per_spec)
        paths = advance(spec, z, times, cfg)
        violations += int(np.count_nonzero(np.diff(paths.real, axis=1) < -1e-10))
    report.check("Re Phi_t non-decreasing", violations == 0, violations=violations)

    violations = 0
    for identifier in ELLIPTIC_IDS:
        spec = resolve(identifier)
        z = _draw_points(spec, rng, per_spec, radius=0.99)
        moduli = np.abs(advance(spec, z, times, cfg))
        violations += int(np.count_nonzero(moduli > np.abs(z)[:, None] + 1e-10))
        violations += int(np.count_nonzero(np.diff(moduli, axis=1) > 1e-10))
    report.check("|Phi_t(z)| <= |z|, non-increasing", violations == 0, violations=violations)

    violations = 0
    for identifier in HORODISC_IDS:
        spec = resolve(identifier)
        z = _draw_points(spec, rng, per_spec, radius=0.99)
        levels = horodisc_level(advance(spec, z, times, cfg))
        violations += int(np.count_nonzero(levels < horodisc_level(z)[:, None] - 1e-9))
    report.check("horodiscs are invariant", violations == 0, violations=violations)

    minima = {identifier: halfplane_positivity(resolve(identifier)) for identifier in HALFPLANE_IDS}
    report.check(
        "Re H >= 0 on the half-plane",
        all(is_positive(value) for value in minima.values()),
        minima=minima,
    )

    decomposition = {
        identifier: factor_decomposition_error(resolve(identifier))
        for identifier in ELLIPTIC_IDS + HORODISC_IDS
    }
    report.check(
        "H / ((z - tau)(conj(tau) z - 1)) = p",
        all(error <= 1e-12 for error in decomposition.values()),
        errors=decomposition,
    )

    estimates = {
        "bp:tau=0,p=const:1": denjoy_wolff_estimate(resolve("bp:tau=0,p=const:1"), 0.5, cfg=cfg),
        "ex5.4": denjoy_wolff_estimate(resolve("ex5.4"), 0j, cfg=cfg),
        "hp:sqrt": denjoy_wolff_estimate(resolve("hp:sqrt"), 1.0 + 0j, cfg=cfg),
        "hp:const:1": denjoy_wolff_estimate(resolve("hp:const:1"), 1.0 + 0j, cfg=cfg),
    }
    report.details["denjoy_wolff"] = estimates
    matches = (
        estimates["bp:tau=0,p=const:1"].status == "converged"
        and abs(estimates["bp:tau=0,p=const:1"].point) <= 1e-3
        and estimates["ex5.4"].status == "converged"
        and abs(estimates["ex5.4"].point - 1.0) <= 1e-3
        and estimates["hp:sqrt"].status == "diverged"
        and estimates["hp:const:1"].status == "diverged"
    )
    report.check("Denjoy-Wolff estimates match tau", matches)
    return report


__all__ = [
    "CheckResult",
    "SuiteReport",
    "Suite",
    "SUITES",
    "suite",
    "run_suite",
]
