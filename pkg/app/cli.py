"""
Command-line entry point.

    python -m app.cli verify functions/paper_h.json --exact
    python -m app.cli rho functions/reference_tv.json
    python -m app.cli optimize --pieces 2 --refine-breakpoints --out h2.json
    python -m app.cli plot functions/paper_h.json --what h --samples 101

Exit codes: 0 feasible / success, 1 infeasible, 2 error.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from app.core.config import settings
from app.core.errors import AuxBoundError, BoundNotEstablishedError, DomainError, StructuralError
from app.models import BreakpointMode, OptimizeConfig, StepFunction, TwoStepParams
from app.services import condition_engine, func_model, function_io, optimizer, plot_data, rho, two_step
from app.services.reporting import (
    CertificateOut,
    ClosedFormOut,
    DiscriminantsOut,
    OptimizeOut,
    RatioOut,
    TwoStepOut,
    certificate_summary,
    format_number,
    to_json_number,
)

logger = logging.getLogger(__name__)

EXIT_FEASIBLE = 0
EXIT_INFEASIBLE = 1
EXIT_ERROR = 2


def _existing_file(value: str) -> Path:
    path = Path(value)
    if not path.is_file():
        raise argparse.ArgumentTypeError(f"file not found: {value}")
    return path


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="auxbound", description="Certify auxiliary functions and compute ρ*")
    parser.add_argument("--digits", type=int, default=settings.OUTPUT_DIGITS, help="significant digits in output")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="feasibility certificate for a function-spec file")
    verify.add_argument("file", type=_existing_file)
    mode = verify.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exact rational decision (step/constant only)")
    mode.add_argument("--numeric", action="store_true", help="grid + golden-section float check")
    verify.add_argument("--grid", type=int, default=settings.NUMERIC_GRID_SIZE)
    verify.add_argument("--tol", type=float, default=settings.NUMERIC_TOL)

    certify = sub.add_parser("certify", help="discriminant triple plus exact certificate")
    certify.add_argument("file", type=_existing_file)

    ratio = sub.add_parser("rho", help="integrality-ratio bound ρ*")
    ratio.add_argument("file", type=_existing_file)
    ratio.add_argument("--no-require-feasible", action="store_true", help="skip the feasibility check")

    sub.add_parser("solve-two-step", help="solve the two-step optimum system")
    sub.add_parser("closed-form", help="evaluate the complex-radical closed forms")

    opt = sub.add_parser("optimize", help="cutting-plane optimum over k-step functions")
    opt.add_argument("--pieces", type=int, required=True)
    opt.add_argument("--refine-breakpoints", action="store_true")
    opt.add_argument("--max-rounds", type=int, default=settings.OPT_MAX_ROUNDS)
    opt.add_argument("--out", type=Path, default=None, help="write the optimum as a function-spec file")

    plot = sub.add_parser("plot", help="CSV samples of h or G")
    plot.add_argument("file", type=_existing_file)
    plot.add_argument("--samples", type=int, default=101)
    plot.add_argument("--what", choices=("h", "G"), default="h")
    return parser


def _load_valid(path: Path):
    h = function_io.load_function(path)
    violations = func_model.validate(h)
    if violations:
        raise DomainError("invalid function: " + "; ".join(violations))
    return h


def _verdict_code(feasible: bool) -> int:
    return EXIT_FEASIBLE if feasible else EXIT_INFEASIBLE


def cmd_verify(args: argparse.Namespace) -> int:
    h = _load_valid(args.file)
    if args.exact:
        cert = condition_engine.check_feasible_exact(h)
    elif args.numeric:
        cert = condition_engine.check_feasible_numeric(h, grid_size=args.grid, tol=args.tol)
    else:
        cert = condition_engine.check_feasible(h)
    print(CertificateOut.from_certificate(cert, args.digits).model_dump_json(indent=2))
    print(certificate_summary(cert, args.digits))
    return _verdict_code(cert.feasible)


def cmd_certify(args: argparse.Namespace) -> int:
    h = _load_valid(args.file)
    if isinstance(h, StepFunction) and h.num_pieces == 2 and h.is_exact:
        params = TwoStepParams.from_values(h.values[0].exact, h.values[1].exact, h.breakpoints[0].exact)
        try:
            paper_mode = two_step.check_paper_mode(params).value
        except StructuralError as e:
            paper_mode = f"not applicable: {e}"
        d1, d2, d3 = two_step.discriminants(params)
        out = DiscriminantsOut(
            d1=to_json_number(d1), d2=to_json_number(d2), d3=to_json_number(d3), paper_mode=paper_mode
        )
        print(out.model_dump_json(indent=2))
        print(
            f"d1={format_number(d1, args.digits)} d2={format_number(d2, args.digits)} "
            f"d3={format_number(d3, args.digits)} paper_mode={paper_mode}"
        )
    else:
        print("discriminants: not a rational two-step function")
    cert = condition_engine.check_feasible_exact(h)
    print(CertificateOut.from_certificate(cert, args.digits).model_dump_json(indent=2))
    print(certificate_summary(cert, args.digits))
    return _verdict_code(cert.feasible)


def cmd_rho(args: argparse.Namespace) -> int:
    h = _load_valid(args.file)
    try:
        result = rho.rho_star(h, require_feasible=not args.no_require_feasible)
    except BoundNotEstablishedError as e:
        print(f"bound not established: {e} (witness z={format_number(e.witness, args.digits)})")
        return EXIT_INFEASIBLE
    print(format_number(result.rho, args.digits))
    if result.feasibility is not None:
        print(certificate_summary(result.feasibility, args.digits))
    else:
        print("feasibility not checked")
    logger.debug(RatioOut.from_result(result, args.digits).model_dump_json())
    return EXIT_FEASIBLE


def cmd_solve_two_step(args: argparse.Namespace) -> int:
    params = two_step.solve_optimum()
    result = rho.rho_star(params.to_step_function(), require_feasible=False)
    print(TwoStepOut.from_params(params, result.rho, digits=max(15, args.digits)).model_dump_json(indent=2))
    return EXIT_FEASIBLE


def cmd_closed_form(args: argparse.Namespace) -> int:
    digits = max(15, args.digits)
    alpha, beta, x = two_step.closed_form_params()
    out = ClosedFormOut(
        alpha=format_number(alpha, digits),
        beta=format_number(beta, digits),
        x=format_number(x, digits),
        rho=format_number(two_step.closed_form_rho(), digits),
        alpha_imag_residue=format_number(abs(two_step.alpha_expression().imag), 3),
        rho_imag_residue=format_number(abs(two_step.rho_expression().imag), 3),
    )
    print(out.model_dump_json(indent=2))
    return EXIT_FEASIBLE


def cmd_optimize(args: argparse.Namespace) -> int:
    cfg = OptimizeConfig(
        num_pieces=args.pieces,
        breakpoint_mode=BreakpointMode.REFINE if args.refine_breakpoints else BreakpointMode.UNIFORM,
        max_rounds=args.max_rounds,
    )
    result = optimizer.optimize(cfg)
    if args.out is not None:
        function_io.write_function(args.out, result.h)
    print(format_number(result.rho, args.digits))
    print(certificate_summary(result.certificate, args.digits))
    logger.debug(OptimizeOut.from_result(result, args.digits).model_dump_json())
    return EXIT_FEASIBLE


def cmd_plot(args: argparse.Namespace) -> int:
    h = _load_valid(args.file)
    if args.what == "h":
        rows, header = plot_data.sample_function(h, args.samples), plot_data.H_HEADER
    else:
        rows, header = plot_data.sample_condition(h, args.samples), plot_data.G_HEADER
    sys.stdout.write(plot_data.render_csv(rows, header, args.digits))
    return EXIT_FEASIBLE


COMMANDS = {
    "verify": cmd_verify,
    "certify": cmd_certify,
    "rho": cmd_rho,
    "solve-two-step": cmd_solve_two_step,
    "closed-form": cmd_closed_form,
    "optimize": cmd_optimize,
    "plot": cmd_plot,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_FEASIBLE

    level = logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else settings.LOG_LEVEL
    logging.basicConfig(level=level, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s")

    try:
        return COMMANDS[args.command](args)
    except AuxBoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except (ValidationError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
