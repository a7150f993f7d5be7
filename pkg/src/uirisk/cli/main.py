"""
Command-line entry point.

    uirisk risk eval   --measure SPEC (--dist SRC | --vector SRC)
    uirisk fold score  --measure SPEC [--search k=4,iters=1e5,seed=7] [--dist SRC | --vector SRC]
    uirisk ui check    --family FAMILY [--horizon N] [--grid dyadic:20] [--distortion SPEC [--second SPEC]]
    uirisk conv lln    --gen coin|normal|zero|pareto:A [--nmax N] [--reps R]
    uirisk conv es     --sequence shift|empirical|constant [--horizon N] [--levels 0.5,0.9]
    uirisk conv subseq --family FAMILY [--horizon N] [--min-length 3]
    uirisk invest solve  [--spec FILE|JSON] [--eps 1e-3]
    uirisk invest prop61 [--spec FILE|JSON] [--steps 5]
    uirisk gallery

Every leaf command takes --seed, --output, --format and --log-level. Reports
go to stdout unless --output is given. Exit codes: 0 success, 1 domain
failure, 2 usage or validation error, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from pydantic import BaseModel

from uirisk import __version__
from uirisk.cli.reports import ReportWriter
from uirisk.config import settings
from uirisk.convergence import (
    builtin_sequence,
    es_convergence_experiment,
    lln_experiment,
    parse_generator,
    subsequence_extract,
)
from uirisk.core.io import distribution_to_spec, load_distribution, load_vector
from uirisk.exceptions import CLIUsageError, ReportIOError, UIRiskError, ValidationError
from uirisk.folding import SearchConfig, counterexample_gallery, empirical_folding_score, folding_ratio
from uirisk.invest import prop61_experiment, problem_from_spec, solve_eps
from uirisk.invest.problem import InvestProblemSpec
from uirisk.logging_config import get_logger, setup_logging
from uirisk.measures.distortion import distortion_from_spec
from uirisk.measures.measures import evaluate, measure_from_spec
from uirisk.schemas import GalleryReport, RiskEvalReport
from uirisk.ui import load_family, parse_grid, tail_envelope, ui_from_distortion

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_IO = 3


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting on bad usage."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise CLIUsageError(message=message, details={"prog": self.prog})


def _count(text: str) -> int:
    """Positive integer, accepting float notation such as 1e5."""
    try:
        value = float(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected a count, got '{text}'") from e
    if not value.is_integer() or value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got '{text}'")
    return int(value)


def _levels(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated levels, got '{text}'") from e


def _read_spec(source: str) -> str:
    """Inline JSON, or the text of a JSON file."""
    if source.lstrip().startswith("{"):
        return source
    path = Path(source)
    try:
        return path.read_text(encoding="utf-8")
    except OSError as e:
        raise ReportIOError(source, e.strerror or str(e)) from e


def _position(args: argparse.Namespace):
    if args.dist is not None:
        return load_distribution(args.dist)
    if args.vector is not None:
        return load_vector(args.vector)
    raise CLIUsageError(message="one of --dist or --vector is required")


# ─── Command handlers ──────────────────────────────────────────


def _risk_eval(args: argparse.Namespace) -> BaseModel:
    rho = measure_from_spec(_read_spec(args.measure))
    X = _position(args)
    value = evaluate(rho, X)
    if isinstance(X, np.ndarray):
        return RiskEvalReport(measure=rho.to_spec(), value=value, vector=X.tolist())
    return RiskEvalReport(measure=rho.to_spec(), value=value, distribution=distribution_to_spec(X))


def _fold_score(args: argparse.Namespace) -> BaseModel:
    rho = measure_from_spec(_read_spec(args.measure))
    if args.dist is not None or args.vector is not None:
        return folding_ratio(rho, _position(args), absolute=args.absolute)
    config = SearchConfig.parse(args.search) if args.search else SearchConfig(seed=args.seed)
    return empirical_folding_score(rho, config)


def _ui_check(args: argparse.Namespace) -> BaseModel:
    family = load_family(args.family, args.horizon)
    if args.distortion is not None:
        g = distortion_from_spec(_read_spec(args.distortion))
        f = distortion_from_spec(_read_spec(args.second)) if args.second is not None else None
        return ui_from_distortion(family, g, f)
    grid = parse_grid(args.grid) if args.grid else None
    return tail_envelope(family, grid, construct=not args.no_construct)


def _conv_lln(args: argparse.Namespace) -> BaseModel:
    return lln_experiment(parse_generator(args.gen), args.nmax, args.reps, args.seed)


def _conv_es(args: argparse.Namespace) -> BaseModel:
    family, limit = builtin_sequence(args.sequence, args.horizon, args.seed)
    return es_convergence_experiment(family, limit, args.levels)


def _conv_subseq(args: argparse.Namespace) -> BaseModel:
    return subsequence_extract(load_family(args.family, args.horizon), args.min_length)


def _problem(args: argparse.Namespace):
    if args.spec is None:
        return problem_from_spec(InvestProblemSpec())
    return problem_from_spec(_read_spec(args.spec))


def _invest_solve(args: argparse.Namespace) -> BaseModel:
    return solve_eps(_problem(args), eps=args.eps, seed=args.seed)


def _invest_prop61(args: argparse.Namespace) -> BaseModel:
    return prop61_experiment(_problem(args), seed=args.seed, steps=args.steps)


def _gallery(args: argparse.Namespace) -> BaseModel:
    return GalleryReport(entries=counterexample_gallery(args.seed))


# ─── Parser ────────────────────────────────────────────────────


def _common() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=settings.runtime.seed, help="Master seed (default: %(default)s).")
    common.add_argument("--output", help="Report path; relative paths resolve under the output directory.")
    common.add_argument("--format", choices=ReportWriter.FORMATS, default="json", help="Report format.")
    common.add_argument("--log-level", default=settings.logging.level, help="Console log level.")
    return common


def _leaf(group, name: str, handler: Callable[[argparse.Namespace], BaseModel], common, help: str):
    parser = group.add_parser(name, parents=[common], help=help)
    parser.set_defaults(handler=handler)
    return parser


def _add_position(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dist", help="Law as a CSV/JSON file or inline JSON.")
    parser.add_argument("--vector", help="Position vector on a finite space: '1,0,-1', JSON list or CSV.")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="uirisk", description="Distortion risk measures and uniform integrability diagnostics.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _common()
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    risk = commands.add_parser("risk", help="Risk measure evaluation.").add_subparsers(dest="action", required=True)
    p = _leaf(risk, "eval", _risk_eval, common, "Evaluate a measure on a law or vector.")
    p.add_argument("--measure", required=True, help="Measure spec as JSON text or file.")
    _add_position(p)

    fold = commands.add_parser("fold", help="Folding scores.").add_subparsers(dest="action", required=True)
    p = _leaf(fold, "score", _fold_score, common, "Folding ratio on a position, or a searched score.")
    p.add_argument("--measure", required=True, help="Measure spec as JSON text or file.")
    p.add_argument("--search", help="Search options, e.g. k=4,iters=1e5,seed=7.")
    p.add_argument("--absolute", action="store_true", help="Use absolute values in the denominator.")
    _add_position(p)

    ui = commands.add_parser("ui", help="Uniform integrability diagnostics.").add_subparsers(dest="action", required=True)
    p = _leaf(ui, "check", _ui_check, common, "Tail-envelope or distortion verdict for a family.")
    p.add_argument("--family", required=True, help="Builtin family, single:<json> or a CSV directory.")
    p.add_argument("--horizon", type=_count, default=settings.ui.horizon, help="Family horizon N.")
    p.add_argument("--grid", help="Level grid: dyadic:K or a comma list.")
    p.add_argument("--distortion", help="Test distortion spec; switches to the distortion criterion.")
    p.add_argument("--second", help="Second distortion for the two-sided criterion.")
    p.add_argument("--no-construct", action="store_true", help="Skip the distortion construction.")

    conv = commands.add_parser("conv", help="Convergence experiments.").add_subparsers(dest="action", required=True)
    p = _leaf(conv, "lln", _conv_lln, common, "Weak law of large numbers under risk envelopes.")
    p.add_argument("--gen", required=True, help="coin, normal, zero or pareto:<alpha>.")
    p.add_argument("--nmax", type=_count, default=10_000, help="Largest sample size.")
    p.add_argument("--reps", type=_count, default=settings.convergence.replications, help="Replications.")
    p = _leaf(conv, "es", _conv_es, common, "ES convergence along a builtin sequence.")
    p.add_argument("--sequence", required=True, choices=("shift", "empirical", "constant"))
    p.add_argument("--horizon", type=_count, default=1024, help="Sequence horizon.")
    p.add_argument("--levels", type=_levels, default=[0.5, 0.9, 0.99], help="Comma-separated ES levels.")
    p = _leaf(conv, "subseq", _conv_subseq, common, "Extract a w1-convergent subsequence.")
    p.add_argument("--family", required=True, help="Builtin family, single:<json> or a CSV directory.")
    p.add_argument("--horizon", type=_count, default=64, help="Family horizon N.")
    p.add_argument("--min-length", type=_count, default=3, help="Shortest acceptable subsequence.")

    invest = commands.add_parser("invest", help="Risk-constrained investment.").add_subparsers(
        dest="action", required=True
    )
    p = _leaf(invest, "solve", _invest_solve, common, "Solve one problem to tolerance eps.")
    p.add_argument("--spec", help="Problem spec as JSON text or file; default instance when omitted.")
    p.add_argument("--eps", type=float, default=1e-3, help="Target optimality tolerance.")
    p = _leaf(invest, "prop61", _invest_prop61, common, "Stability of eps-optimizers under sampled backgrounds.")
    p.add_argument("--spec", help="Problem spec as JSON text or file; default instance when omitted.")
    p.add_argument("--steps", type=_count, default=5, help="Number of sample-size doublings.")

    _leaf(commands, "gallery", _gallery, common, "Counterexamples to the folding bound.")
    return parser


def _exit_code(error: Exception) -> int:
    if isinstance(error, ValidationError):
        return EXIT_USAGE
    if isinstance(error, (ReportIOError, OSError)):
        return EXIT_IO
    return EXIT_DOMAIN


def dispatch(argv: Sequence[str] | None = None) -> int:
    """Run one command; returns the process exit code."""
    try:
        args = build_parser().parse_args(argv)
        settings.setup(reports=bool(args.output))
        setup_logging(args.log_level, settings.logging.file, seed=args.seed)
        report = args.handler(args)
        writer = ReportWriter()
        if args.output:
            writer.write(report, args.output, args.format)
        else:
            sys.stdout.write(writer.render(report, args.format))
    except (UIRiskError, OSError) as e:
        message = e.message if isinstance(e, UIRiskError) else str(e)
        sys.stderr.write(f"error[{type(e).__name__}]: {' '.join(message.split())}\n")
        logger.debug("Command failed", exc_info=True)
        return _exit_code(e)
    return EXIT_OK


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
