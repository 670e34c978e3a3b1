"""
Command line front end.

Every subcommand prints one JSON document on standard output (or writes
it to ``--output``). Exit codes: 0 on success, 2 on validation errors
(named library errors and pydantic validation failures), 1 on internal
failures. Errors are reported as ``{"error": <name>, "message": <text>}``.

Usage:
    tame-quotient quotient --r 2 --weights 1,1
    tame-quotient serre --model affine:1 --r 2 --weights 1,1
    tame-quotient diagonalize --p 5 --r 2 --images "x; t"
    tame-quotient --json job.json
"""

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any, NoReturn, Optional, TextIO

from pydantic import ValidationError

from .algebra import PrimeField, RingEndomorphism, TruncatedLocalRing
from .config import config
from .count_oracle import fixed_count_report, model_count_report, presented_count_report
from .excel_exporter import export_to_excel
from .fiber_geometry import (
    fiber_dimension,
    fixed_locus,
    has_integral_point,
    section_through_fixed_point,
    special_fiber_presentation,
    standard_monomials,
)
from .invariant_ring import (
    connectivity_certificate,
    generation_certificate,
    quotient_presentation,
)
from .models import COMMANDS, JobSpec, StratifiedModel, WeightSystem
from .motivic import (
    check_euler_congruence,
    check_serre_theorem,
    check_volume_congruence,
    class_of_fixed_locus,
    class_of_special_fiber,
    class_of_weak_neron_fiber,
)
from .sweep import run_sweep
from .tame_action import TameEndomorphism, coordinate_names, diagonalize, make_diagonal_action
from .utils import TameQuotientError, UsageError, configure_logging, parse_int_list, to_json_text

logger = logging.getLogger(__name__)

Handler = Callable[[argparse.Namespace], tuple[dict, int]]


class _Parser(argparse.ArgumentParser):
    """Argument parser that raises instead of exiting."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    """Create the argument parser with one subparser per command."""
    parser = _Parser(prog="tame-quotient", description="Tame cyclic quotient calculator")
    parser.add_argument("--json", dest="job", help="Read a job document from a file ('-' for stdin)")
    parser.add_argument("--verbose", action="store_true", help="Debug logging on stderr")

    common = _Parser(add_help=False)
    common.add_argument("--output", help="Write the JSON result to this file")
    common.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS)

    weights = _Parser(add_help=False)
    weights.add_argument("--r", type=int, required=True, help="Group order")
    weights.add_argument("--weights", required=True, help="Comma-separated weights, l_0 first")

    model = _Parser(add_help=False)
    model.add_argument("--model", required=True, help='Factors, e.g. "affine:1,torus:2"')

    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    quotient = sub.add_parser("quotient", parents=[common, weights], help="Quotient presentation")
    quotient.add_argument("--degree-bound", type=int, default=config.DEFAULT_DEGREE_BOUND)

    sub.add_parser("fixed-locus", parents=[common, model, weights], help="Fixed locus")
    sub.add_parser("special-fiber", parents=[common, weights], help="Special fiber ideal")
    sub.add_parser("serre", parents=[common, model, weights], help="Serre invariant check")

    volume = sub.add_parser("volume", parents=[common, model, weights], help="Volume congruence")
    volume.add_argument("--q", type=int, required=True)
    volume.add_argument("--p", type=int, default=None, help="Residue characteristic")

    diag = sub.add_parser("diagonalize", parents=[common], help="Diagonalize a tame action")
    diag.add_argument("--p", type=int, default=config.DEFAULT_PRIME)
    diag.add_argument("--r", type=int, required=True)
    diag.add_argument("--N", type=int, default=config.DEFAULT_TRUNCATION, help="Truncation degree")
    diag.add_argument("--images", help='Variable images separated by ";", t first')
    diag.add_argument("--weights", help="Diagonal weights when no images are given")
    diag.add_argument("--pin", action="append", default=[], help='Pinned "element:weight"')

    section = sub.add_parser("section", parents=[common, weights], help="Section through a fixed point")
    section.add_argument("--point", default="", help="Zero-weight coordinate values")
    section.add_argument("--p", type=int, default=config.DEFAULT_PRIME)
    section.add_argument("--degree-bound", type=int, default=config.DEFAULT_DEGREE_BOUND)

    count = sub.add_parser("count", parents=[common], help="Brute-force point counts")
    count.add_argument("--q", type=int, required=True)
    count.add_argument("--model")
    count.add_argument("--r", type=int)
    count.add_argument("--weights")
    count.add_argument("--degree-bound", type=int, default=config.DEFAULT_DEGREE_BOUND)

    sweep = sub.add_parser("sweep", parents=[common], help="Randomized theorem checks")
    sweep.add_argument("--seed", type=int, default=config.SWEEP_SEED)
    sweep.add_argument("--models", type=int, default=config.SWEEP_MODELS)
    sweep.add_argument("--actions", type=int, default=config.SWEEP_ACTIONS)
    sweep.add_argument("--substitutions", type=int, default=config.SWEEP_SUBSTITUTIONS)
    sweep.add_argument("--excel", help="Also write an Excel workbook")

    return parser


# --- argument helpers ---


def _weight_system(args: argparse.Namespace) -> WeightSystem:
    return WeightSystem(r=args.r, weights=parse_int_list(args.weights, "--weights"))


def _model(args: argparse.Namespace) -> StratifiedModel:
    return StratifiedModel.parse(args.model, args.r, parse_int_list(args.weights, "--weights"))


def _parse_pin(ring: TruncatedLocalRing, text: str) -> tuple[Any, int]:
    element, sep, weight = text.rpartition(":")
    if not sep:
        raise UsageError(f'--pin must look like "element:weight", got {text!r}')
    try:
        return ring.parse(element), int(weight)
    except ValueError as e:
        raise UsageError(f"Pinned weight must be an integer, got {weight!r}") from e


# --- handlers ---


def _quotient(args: argparse.Namespace) -> tuple[dict, int]:
    pres = quotient_presentation(_weight_system(args), args.degree_bound)
    payload = pres.to_json()
    payload["certificates"] = {
        "degree_bound": args.degree_bound,
        "generation": generation_certificate(pres.basis, args.degree_bound),
        "connectivity": connectivity_certificate(pres, args.degree_bound),
    }
    return payload, 0


def _fixed_locus(args: argparse.Namespace) -> tuple[dict, int]:
    m = _model(args)
    locus = fixed_locus(m)
    payload = locus.to_json()
    for entry, component in zip(payload["components"], locus.components):
        entry["fiber_dimension"] = fiber_dimension(m, component)
    payload["has_integral_point"] = has_integral_point(m)
    payload["class"] = class_of_fixed_locus(m).to_json()
    payload["weak_neron_class"] = class_of_weak_neron_fiber(m).to_json()
    return payload, 0


def _special_fiber(args: argparse.Namespace) -> tuple[dict, int]:
    pres = special_fiber_presentation(_weight_system(args))
    payload = pres.to_json()
    payload["standard_monomials"] = [list(e) for e in standard_monomials(pres)]
    return payload, 0


def _serre(args: argparse.Namespace) -> tuple[dict, int]:
    return check_serre_theorem(_model(args)).to_json(), 0


def _volume(args: argparse.Namespace) -> tuple[dict, int]:
    m = _model(args)
    payload = check_volume_congruence(m, args.q, args.p).to_json()
    if all(f.kind == "projective" for f in m.factors):
        payload["euler"] = check_euler_congruence(m, args.q).to_json()
    return payload, 0


def _diagonalize(args: argparse.Namespace) -> tuple[dict, int]:
    if args.images:
        texts = [part.strip() for part in args.images.split(";") if part.strip()]
        if len(texts) < 2:
            raise UsageError("--images needs an image for t and at least one coordinate")
        ring = TruncatedLocalRing(PrimeField(args.p), coordinate_names(len(texts) - 1), args.N)
        endo = RingEndomorphism(ring, tuple(ring.parse(text) for text in texts))
        action = TameEndomorphism(endo, args.r)
    elif args.weights:
        action = make_diagonal_action(_weight_system(args), args.p, args.N)
    else:
        raise UsageError("diagonalize needs --images or --weights")

    pinned = [_parse_pin(action.ring, text) for text in args.pin]
    result = diagonalize(action, pinned)
    return {"action": action.to_json(), **result.to_json()}, 0


def _section(args: argparse.Namespace) -> tuple[dict, int]:
    pres = quotient_presentation(_weight_system(args), args.degree_bound)
    section = section_through_fixed_point(pres, parse_int_list(args.point, "--point"), args.p)
    return section.to_json(), 0


def _count(args: argparse.Namespace) -> tuple[dict, int]:
    if args.r is None or args.weights is None:
        raise UsageError("count needs --r and --weights")
    if args.model:
        m = _model(args)
        payload = {"special_fiber": model_count_report(m, args.q).to_json()}
        if (args.q - 1) % m.r == 0:
            payload["fixed_locus"] = fixed_count_report(m, args.q).to_json()
        payload["class"] = class_of_special_fiber(m).to_json()
        return payload, 0
    pres = quotient_presentation(_weight_system(args), args.degree_bound)
    return presented_count_report(pres, args.q).to_json(), 0


def _sweep(args: argparse.Namespace) -> tuple[dict, int]:
    report = run_sweep(
        seed=args.seed,
        models=args.models,
        actions=args.actions,
        substitutions=args.substitutions,
    )
    if args.excel:
        export_to_excel(report, args.excel)
    return report.to_json(), 0 if report.all_passed else 1


HANDLERS: dict[str, Handler] = {
    "quotient": _quotient,
    "fixed-locus": _fixed_locus,
    "special-fiber": _special_fiber,
    "serre": _serre,
    "volume": _volume,
    "diagonalize": _diagonalize,
    "section": _section,
    "count": _count,
    "sweep": _sweep,
}


# --- job documents ---

_JOB_FLAGS = {
    "r": "--r",
    "weights": "--weights",
    "model": "--model",
    "p": "--p",
    "truncation": "--N",
    "degree_bound": "--degree-bound",
    "q": "--q",
    "seed": "--seed",
    "output": "--output",
    "excel": "--excel",
    "images": "--images",
    "point": "--point",
}


def job_to_argv(job: JobSpec) -> list[str]:
    """
    Translate a job document into the equivalent command line.

    Example:
        >>> job_to_argv(JobSpec(command="quotient", r=2, weights=[1, 1]))
        ['quotient', '--r', '2', '--weights', '1,1']
    """
    lists = {
        "weights": ",".join(str(w) for w in job.weights) if job.weights is not None else None,
        "images": "; ".join(job.images) if job.images is not None else None,
        "point": ",".join(str(v) for v in job.point) if job.point is not None else None,
    }
    argv = [job.command]
    for field_name, flag in _JOB_FLAGS.items():
        value = lists.get(field_name, getattr(job, field_name, None))
        if value is not None:
            argv += [flag, str(value)]
    for pin in job.pin or []:
        argv += ["--pin", pin]
    return argv


def _read_job(source: str) -> JobSpec:
    if source == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as e:
            raise UsageError(f"Cannot read job document {source}: {e}") from e
    return JobSpec.model_validate_json(text)


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """
    Parse a command line, expanding ``--json`` job documents.

    Raises:
        UsageError: On malformed arguments or a missing subcommand
        ValidationError: On an invalid job document
    """
    parser = build_parser()
    args = parser.parse_args(list(argv) if argv is not None else None)
    if args.job is not None:
        if args.command is not None:
            raise UsageError("--json cannot be combined with a subcommand")
        job = _read_job(args.job)
        verbose = args.verbose
        args = parser.parse_args(job_to_argv(job))
        args.verbose = verbose or getattr(args, "verbose", False)
    if args.command is None:
        raise UsageError(f"A subcommand is required: {', '.join(COMMANDS)}")
    return args


def _validation_message(error: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(part) for part in err['loc']) or 'input'}: {err['msg']}"
        for err in error.errors(include_url=False)
    )


def run(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """
    Execute one command and print its JSON result.

    Args:
        argv: Arguments without the program name; defaults to ``sys.argv[1:]``
        stdout: Stream for the JSON document; defaults to ``sys.stdout``

    Returns:
        int: Exit code 0, 1 or 2
    """
    stream = stdout if stdout is not None else sys.stdout
    output: Optional[str] = None
    try:
        args = parse_args(argv)
        configure_logging(getattr(args, "verbose", False))
        output = getattr(args, "output", None)
        logger.debug(f"Running {args.command}")
        payload, code = HANDLERS[args.command](args)
    except TameQuotientError as e:
        logger.debug(f"{e.name}: {e}")
        payload, code = {"error": e.name, "message": str(e)}, e.exit_code
    except ValidationError as e:
        payload, code = {"error": "ValidationError", "message": _validation_message(e)}, 2
    except Exception as e:
        logger.exception("Unexpected failure")
        payload, code = {"error": "InternalError", "message": f"{type(e).__name__}: {e}"}, 1

    text = to_json_text(payload)
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
    else:
        stream.write(text + "\n")
    return code


def main() -> None:
    """Console script entry point."""
    sys.exit(run())
