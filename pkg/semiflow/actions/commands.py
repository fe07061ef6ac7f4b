"""
Command handlers for the semiflow command line.

Each handler parses its own arguments, merges them over the registry's
ExperimentConfig and returns an exit code. Reports go to ``--out`` or the
context's output stream; summaries go to the printer.
"""

import argparse
import logging
import math
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from ..batch import BatchRunner
from ..config import ExperimentConfig
from ..cplane import parse_complex
from ..errors import PreconditionError, SuiteFailure, UsageError
from ..flow import integrate
from ..formatting import suite_summary
from ..generators import list_catalog
from ..geometry import JordanDomain
from ..hmeasure import MIN_WALKS, BoundarySubset, harmonic_measure
from ..rates import default_t_sequence, rate_report
from ..reports import error_payload, number, write_report
from ..suites import SUITES, run_suite
from .action import Action, ActionContext
from .registry import ActionRegistry

logger = logging.getLogger(__name__)

DISC_POLYGON_SIDES = 1024


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def __init__(self, prog: str, **kwargs):
        super().__init__(prog=prog, add_help=False, allow_abbrev=False, **kwargs)

    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")

    def exit(self, status: int = 0, message: Optional[str] = None):
        if status:
            raise UsageError(message or f"{self.prog}: exit {status}")


def _complex(text: str) -> complex:
    return parse_complex(text)


def _seed(text: str) -> int:
    return int(text, 0)


def _add_generator(parser: CommandParser) -> None:
    parser.add_argument("--gen", dest="generator", help="catalog generator id")


def _add_t_sequence(parser: CommandParser) -> None:
    parser.add_argument("--t-min", type=float)
    parser.add_argument("--t-max", type=float)
    parser.add_argument("--t-steps", type=int)


def _add_sampler(parser: CommandParser) -> None:
    parser.add_argument("--window-R", dest="window_R", type=float)
    parser.add_argument("--re-max", type=float)
    parser.add_argument("--k-max", type=int)
    parser.add_argument("--n-angles", type=int)
    parser.add_argument("--n-imag", type=int)


def _add_integrator(parser: CommandParser) -> None:
    parser.add_argument("--rel-tol", type=float)
    parser.add_argument("--abs-tol", type=float)
    parser.add_argument("--max-steps", type=int)
    parser.add_argument("--boundary-guard", type=float)


def _add_walks(parser: CommandParser) -> None:
    parser.add_argument("--N", dest="walks", type=int, help="number of walks")
    parser.add_argument("--seed", type=_seed)
    parser.add_argument("--a", dest="side", type=float, help="square side")


def _add_outputs(parser: CommandParser, plot_data: bool = False) -> None:
    parser.add_argument("--out", help="JSON report path (default: stdout)")
    parser.add_argument("--csv", help="CSV output path")
    if plot_data:
        parser.add_argument("--emit-plot-data", help="log_t,log_sup pairs path")


_CONFIG_FIELDS = set(ExperimentConfig.__dataclass_fields__)


def _merged_config(context: ActionContext, namespace: argparse.Namespace) -> ExperimentConfig:
    overrides = {k: v for k, v in vars(namespace).items() if k in _CONFIG_FIELDS}
    return context.config.merged(**overrides)


def _write_csv(path: Optional[str], context: ActionContext, writer: Callable) -> None:
    if path:
        with open(path, "w", newline="") as handle:
            writer(handle)
        logger.info(f"CSV written to {path}")
    else:
        writer(context.output_stream)


class ErrorReport:
    """
    Write an error report when a report-writing command raises.

    The report goes to ``out`` once the command has parsed it, otherwise to
    the context's output stream. The exception is re-raised so dispatch
    still maps it to an exit code. Nothing is written once ``written`` is set.
    """

    def __init__(self, command: str, context: ActionContext):
        self.command = command
        self.context = context
        self.out: Optional[str] = None
        self.written = False
        self.extra: Dict[str, Any] = {}

    def __enter__(self) -> "ErrorReport":
        return self

    def __exit__(self, exc_type, exc, tb) -> bool:
        if exc is None or self.written or not isinstance(exc, Exception):
            return False
        if isinstance(exc, SuiteFailure):
            return False
        logger.debug(f"ErrorReport.__exit__() - {type(exc).__name__} in {self.command}")
        payload = error_payload(exc, **self.extra)
        try:
            write_report(self.command, payload, self.out, self.context.output_stream)
        except OSError as e:
            logger.warning(f"Cannot write error report to {self.out}: {e}")
            write_report(self.command, payload, None, self.context.output_stream)
        return False


def cmd_catalog(context: ActionContext) -> int:
    """List catalog identifier patterns, aliases and Herglotz entries."""
    logger.debug("cmd_catalog() entry")
    with ErrorReport("catalog", context) as guard:
        parser = CommandParser("catalog")
        parser.add_argument("--out")
        args = parser.parse_args(context.args)
        guard.out = args.out
        entries = list_catalog()
        write_report("catalog", {"entries": entries}, args.out, context.output_stream)
        guard.written = True
    context.printer(f"{len(entries)} catalog entries")
    logger.debug("cmd_catalog() exit")
    return 0


def cmd_flow(context: ActionContext) -> int:
    """Integrate one trajectory and write it as CSV."""
    logger.debug("cmd_flow() entry")
    parser = CommandParser("flow")
    _add_generator(parser)
    parser.add_argument("--z", type=_complex, required=True, help="initial point")
    parser.add_argument("--t", type=float, required=True, help="final time")
    parser.add_argument("--samples", type=int, default=256, help="uniform output samples")
    _add_integrator(parser)
    parser.add_argument("--out", help="CSV path (default: stdout)")
    args = parser.parse_args(context.args)
    if not (math.isfinite(args.t) and args.t > 0.0):
        raise UsageError(f"flow: --t must be a positive time, got {args.t}")
    if args.samples < 2:
        raise UsageError("flow: --samples must be at least 2")

    config = _merged_config(context, args)
    if config.generator is None:
        raise UsageError("flow: --gen is required")
    spec = config.spec(config.generator)
    if not bool(spec.domain.contains(args.z)):
        raise PreconditionError(
            f"flow: --z must lie in {spec.domain.describe()} for {spec.identifier()}", args.z
        )
    trajectory = integrate(spec, args.z, args.t, config.integrator(), args.samples)
    _write_csv(args.out, context, trajectory.write_csv)
    end = trajectory.end
    context.printer(f"Phi_t(z) = {end.real:.12g}{end.imag:+.12g}i at t = {args.t:g}")
    logger.debug("cmd_flow() exit")
    return 0


def cmd_rate(context: ActionContext) -> int:
    """Sup-deviation rows, fitted rate and CSV/plot data for one generator."""
    logger.debug("cmd_rate() entry")
    with ErrorReport("rate", context) as guard:
        parser = CommandParser("rate")
        _add_generator(parser)
        _add_t_sequence(parser)
        _add_sampler(parser)
        _add_integrator(parser)
        parser.add_argument(
            "--closed-form", action="store_true", help="use the closed-form flow when one exists"
        )
        _add_outputs(parser, plot_data=True)
        args = parser.parse_args(context.args)
        guard.out = args.out

        config = _merged_config(context, args)
        guard.out = config.out
        if config.generator is None:
            raise UsageError("rate: --gen is required")
        spec = config.spec(config.generator)
        report = rate_report(
            spec,
            config.t_values(default_t_sequence()),
            config.sampler(spec),
            config.integrator(),
            prefer_closed_form=args.closed_form,
        )
        write_report("rate", report, config.out, context.output_stream)
        guard.written = True
    if config.csv:
        report.to_csv(config.csv)
    if config.emit_plot_data:
        with open(config.emit_plot_data, "w", newline="") as handle:
            report.write_plot_data(handle)
    if report.fit is not None:
        fit = report.fit
        context.printer(f"{spec.identifier()}: alpha = {fit.alpha:.4f}, C = {fit.C:.4g}")
    if report.window_limited:
        context.printer("<ansiyellow>warning</ansiyellow>: sup is window-limited")
    logger.debug("cmd_rate() exit")
    return 0


def _build_domain(kind: str, side: float) -> tuple:
    """(domain, raw subsets, default start point) for a --domain value."""
    if kind == "square":
        return JordanDomain.square(0j, side), [], complex(side / 2, side / 2)
    if kind == "disc":
        return JordanDomain.regular_polygon(0j, 1.0, DISC_POLYGON_SIDES, name="disc"), [], 0j
    if not Path(kind).is_file():
        raise UsageError(f"harmonic: --domain must be square, disc or a JSON file, got {kind!r}")
    domain, raw = JordanDomain.from_json(kind)
    return domain, raw, None


def parse_subset(text: str, domain: JordanDomain, w: complex, kind: str) -> BoundarySubset:
    """
    Parse a --subset value.

    Forms: ``side:J`` (square domains), ``arc:T1,T2`` (angles seen from w),
    ``length:S0,S1`` (arclength from vertex 0), ``segments:I,J,...`` and ``full``.

    Raises:
        UsageError: If the form is unknown or its numbers do not parse
    """
    head, _, rest = text.partition(":")
    try:
        if head == "full" and not rest:
            return BoundarySubset.full(domain)
        if head == "side":
            if kind != "square":
                raise UsageError("harmonic: side:J needs --domain square")
            return BoundarySubset.edge(int(rest))
        if head == "arc":
            theta1, theta2 = (float(v) for v in rest.split(","))
            return BoundarySubset.disc_arc(domain, theta1, theta2, w)
        if head == "length":
            s0, s1 = (float(v) for v in rest.split(","))
            return BoundarySubset.from_arclength(domain, s0, s1)
        if head == "segments":
            return BoundarySubset.segments(int(v) for v in rest.split(","))
    except ValueError as e:
        raise UsageError(f"harmonic: bad subset {text!r}: {e}") from None
    raise UsageError(f"harmonic: unknown subset form {text!r}")


def _harmonic_rows(estimates: Sequence, labels: Sequence[str]) -> List[Dict[str, Any]]:
    rows = []
    for label, estimate in zip(labels, estimates):
        row = {"subset": label}
        row.update(estimate.to_dict())
        rows.append(row)
    return rows


def cmd_harmonic(context: ActionContext) -> int:
    """Estimate harmonic measures of boundary subsets from one walk set."""
    logger.debug("cmd_harmonic() entry")
    with ErrorReport("harmonic", context) as guard:
        parser = CommandParser("harmonic")
        parser.add_argument("--domain", default="square", help="square, disc or FILE.json")
        parser.add_argument("--w", type=_complex, help="start point (default: domain centre)")
        parser.add_argument("--subset", action="append", default=[], help="boundary subset")
        _add_walks(parser)
        _add_outputs(parser)
        args = parser.parse_args(context.args)
        guard.out = args.out

        config = _merged_config(context, args)
        guard.out = config.out
        domain, raw_subsets, default_w = _build_domain(args.domain, config.side)
        w = args.w if args.w is not None else default_w
        if w is None:
            raise UsageError("harmonic: --w is required for a domain file")
        subsets = [parse_subset(text, domain, w, args.domain) for text in args.subset]
        labels = list(args.subset)
        for index, raw in enumerate(raw_subsets):
            try:
                subsets.append(BoundarySubset.from_list(raw))
            except (ValueError, TypeError, IndexError) as e:
                raise UsageError(f"harmonic: bad subset {index} in {args.domain}: {e}") from None
            labels.append(f"file:{index}")
        if not subsets:
            raise UsageError("harmonic: give at least one --subset or a domain file with subsets")

        walks = config.walks or 100_000
        if walks < MIN_WALKS:
            raise UsageError(f"harmonic: --N must be at least {MIN_WALKS}, got {walks}")
        estimates = harmonic_measure(domain, w, subsets, walks, config.seed)
        if config.out:
            payload = {
                "domain": domain.describe(),
                "w": w,
                "rows": _harmonic_rows(estimates, labels),
            }
            write_report("harmonic", payload, config.out)
            guard.written = True

    def write_rows(handle):
        handle.write(f"# domain: {domain.name or args.domain}\n")
        handle.write("ell_A,omega,stderr,N,seed\n")
        for estimate in estimates:
            handle.write(
                f"{number(estimate.ell)},{number(estimate.value)},{number(estimate.stderr)},"
                f"{estimate.n_walks},{estimate.seed}\n"
            )

    if config.csv or not config.out:
        _write_csv(config.csv, context, write_rows)
    for label, estimate in zip(labels, estimates):
        context.printer(f"  {label}: omega = {estimate.value:.4f} +/- {estimate.stderr:.4f}")
    logger.debug("cmd_harmonic() exit")
    return 0


def cmd_verify(context: ActionContext) -> int:
    """Run one verification suite; exit 1 names the failing checks."""
    logger.debug("cmd_verify() entry")
    with ErrorReport("verify", context) as guard:
        parser = CommandParser("verify")
        parser.add_argument("suite", choices=sorted(SUITES))
        _add_generator(parser)
        _add_t_sequence(parser)
        _add_sampler(parser)
        _add_integrator(parser)
        _add_walks(parser)
        parser.add_argument("--family-size", type=int)
        parser.add_argument("--center-offset", type=float)
        parser.add_argument("--out", help="JSON report path (default: stdout)")
        args = parser.parse_args(context.args)
        guard.out = args.out
        guard.extra["suite"] = args.suite

        config = _merged_config(context, args)
        guard.out = config.out
        guard.extra["config"] = config.to_dict()
        report = run_suite(args.suite, config)
        payload = report.to_dict()
        payload["config"] = config.to_dict()
        write_report("verify", payload, config.out, context.output_stream)
        guard.written = True
    for line in suite_summary(report):
        context.printer(line)
    if not report.passed:
        failed = report.failed_checks
        logger.debug("cmd_verify() exit - failed")
        raise SuiteFailure(f"suite {args.suite} failed: {'; '.join(failed)}", failed)
    logger.debug("cmd_verify() exit")
    return 0


def cmd_batch(context: ActionContext) -> int:
    """Run newline-separated commands from stdin; exit with the first non-zero code."""
    parser = CommandParser("batch")
    parser.parse_args(context.args)
    runner = BatchRunner(context.registry)
    return runner.run(context.input_stream, stdout=context.stdout)


def command_actions() -> List[Action]:
    """Fresh Action instances for every semiflow command."""
    return [
        Action(
            name="catalog",
            description="List generator identifiers, aliases and Herglotz entries",
            category="Generators",
            handler=cmd_catalog,
            command="catalog",
            command_usage="catalog [--out FILE]",
        ),
        Action(
            name="flow",
            description="Integrate one trajectory Phi_t(z) and write it as CSV",
            category="Flows",
            handler=cmd_flow,
            command="flow",
            command_usage="flow --gen ID --z Z --t T [--samples N] [--out FILE] [--rel-tol X]",
        ),
        Action(
            name="rate",
            description="Measure sup |Phi_t(z) - z| over a t-sequence and fit C t^alpha",
            category="Flows",
            handler=cmd_rate,
            command="rate",
            command_usage=(
                "rate --gen ID [--t-min T --t-max T --t-steps N] [--window-R R] [--closed-form] "
                "[--out FILE] [--csv FILE] [--emit-plot-data FILE]"
            ),
        ),
        Action(
            name="harmonic",
            description="Estimate harmonic measures by walk-on-spheres",
            category="Harmonic measure",
            handler=cmd_harmonic,
            command="harmonic",
            command_usage=(
                "harmonic [--domain square|disc|FILE.json] [--w Z] --subset side:J|arc:T1,T2|"
                "length:S0,S1|segments:I,J|full ... [--N N] [--seed S] [--out FILE] [--csv FILE]"
            ),
        ),
        Action(
            name="verify",
            description="Run a verification suite and write its JSON report",
            category="Experiments",
            handler=cmd_verify,
            command="verify",
            command_usage="verify SUITE [options] [--out FILE]; suites: " + ", ".join(SUITES),
        ),
        Action(
            name="batch",
            description="Run newline-separated commands read from stdin",
            category="Experiments",
            handler=cmd_batch,
            command="batch",
            command_usage="batch < FILE",
        ),
    ]


def register_commands(registry: ActionRegistry) -> None:
    for action in command_actions():
        registry.register_action(action)


def create_registry(
    printer: Callable[..., None] = print, config: Optional[ExperimentConfig] = None
) -> ActionRegistry:
    """ActionRegistry with help plus every semiflow command."""
    registry = ActionRegistry(printer=printer, config=config)
    register_commands(registry)
    return registry


__all__ = [
    "CommandParser",
    "ErrorReport",
    "parse_subset",
    "cmd_catalog",
    "cmd_flow",
    "cmd_rate",
    "cmd_harmonic",
    "cmd_verify",
    "cmd_batch",
    "command_actions",
    "register_commands",
    "create_registry",
]
