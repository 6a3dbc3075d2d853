"""Command line driver: ``jwf <command> [options]``.

JSON goes to stdout (or ``--output``), logs go to stderr. Exit codes: 0 on
success, 1 when an evaluation point is a pole, 2 on tolerance, lattice or
input failures.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Sequence

from mpmath import mp
from pydantic import ValidationError

from .config import Settings
from .errors import JacobiWeierstrassError, PoleError
from .fixtures import run_fixtures
from .mockform import (
    MockFormContext,
    f_value,
    holomorphic_part_q,
    pole_scan,
    rho_invariance_check,
    shadow_check,
)
from .numeric import PrecisionContext, complex_to_pair, parse_complex
from .periods import eichler_vector, modularity_defect, period_lattice
from .qforms import load_form
from .records import (
    EichlerRecord,
    FValueRecord,
    InvarianceRecord,
    PeriodLatticeRecord,
    PoleRecord,
    PoleScanRecord,
    QExpansionRecord,
    Record,
    ShadowRecord,
)
from .symrep import IDENTITY, SL2Z, display_order

logger = logging.getLogger("jacobi-weierstrass-cli")

EXIT_OK = 0
EXIT_POLE = 1
EXIT_FAILURE = 2


class RunConfig:
    """Validated command line inputs shared by every command."""

    def __init__(self, args: argparse.Namespace, settings: Settings) -> None:
        self.args = args
        self.settings = settings
        self.ctx = PrecisionContext(
            digits=args.digits if args.digits is not None else settings.DIGITS,
            guard=settings.GUARD,
            series_tail_tol=(
                args.tail_tol if args.tail_tol is not None else settings.SERIES_TAIL_TOL
            ),
        )
        self.form_name = getattr(args, "form", "delta")

    def form(self):
        return load_form(self.form_name)

    def tau(self) -> mp.mpc:
        with self.ctx.work():
            return parse_complex(self.args.tau)

    def matrix(self, text: str | None = None) -> SL2Z:
        text = text if text is not None else self.args.matrix
        return SL2Z.parse(text) if text else IDENTITY

    def mock_context(self) -> MockFormContext:
        return MockFormContext.build(
            self.form(),
            self.ctx,
            self.settings.DENOMINATOR_BOUND,
            self.settings.MAX_WORKERS,
        )


def _emit(record: Record, output: str | None) -> None:
    text = record.to_json()
    if output:
        Path(output).write_text(text + "\n")
        logger.info("Wrote %s", output)
    else:
        sys.stdout.write(text + "\n")


def cmd_periods(config: RunConfig) -> int:
    lattice = period_lattice(
        config.form(),
        config.ctx,
        config.settings.DENOMINATOR_BOUND,
        config.settings.MAX_WORKERS,
    )
    _emit(
        PeriodLatticeRecord.build(config.form_name, lattice, config.ctx.digits),
        config.args.output,
    )
    return EXIT_OK


def cmd_eichler(config: RunConfig) -> int:
    ctx = config.ctx
    with ctx.work():
        tau = config.tau()
        M = config.matrix()
        value = eichler_vector(config.form(), tau, M, ctx)
        display = display_order(value.components) if M == IDENTITY else ()
        record = EichlerRecord.build(config.form_name, tau, value, ctx.digits, display)
    _emit(record, config.args.output)
    return EXIT_OK


def cmd_evaluate(config: RunConfig) -> int:
    ctx = config.ctx
    with ctx.work():
        ctxm = config.mock_context()
        value = f_value(ctxm, config.tau(), config.matrix())
        record = FValueRecord.build(config.form_name, value, ctx.digits)
    _emit(record, config.args.output)
    return EXIT_POLE if value.pole_flag else EXIT_OK


def cmd_invariance(config: RunConfig) -> int:
    ctx = config.ctx
    with ctx.work():
        ctxm = config.mock_context()
        tau = config.tau()
        gamma = config.matrix(config.args.gamma)
        M = config.matrix()
        deviation = rho_invariance_check(ctxm, gamma, tau, M)
        defect = modularity_defect(ctxm.form, gamma, tau, ctxm.lattice, ctx)
        tolerance = ctx.check_tol
        record = InvarianceRecord(
            form=config.form_name,
            digits=ctx.digits,
            tau=complex_to_pair(tau, ctx.digits),
            gamma=list(gamma.as_tuple()),
            matrix=list(M.as_tuple()),
            deviation=mp.nstr(deviation, 5),
            tolerance=mp.nstr(tolerance, 5),
            passed=bool(deviation < tolerance),
            defect=[list(c) for c in defect.coordinates],
        )
    _emit(record, config.args.output)
    return EXIT_OK if record.passed else EXIT_FAILURE


def cmd_shadow(config: RunConfig) -> int:
    ctx = config.ctx
    with ctx.work():
        ctxm = config.mock_context()
        tau = config.tau()
        M = config.matrix()
        step = config.args.h if config.args.h is not None else config.settings.FD_STEP
        result = shadow_check(ctxm, tau, M, mp.mpf(step) if step is not None else None)
        tolerance = mp.mpf(config.args.tol)
        record = ShadowRecord.build(config.form_name, tau, M, result, ctx.digits, tolerance)
    _emit(record, config.args.output)
    return EXIT_OK if record.passed else EXIT_FAILURE


def _floats(text: str, count: int) -> list[str]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != count:
        raise argparse.ArgumentTypeError(f"expected {count} comma separated values")
    return parts


def cmd_polescan(config: RunConfig) -> int:
    ctx = config.ctx
    args = config.args
    with ctx.work():
        ctxm = config.mock_context()
        region = [mp.mpf(x) for x in _floats(args.region, 4)]
        nx, ny = (int(x) for x in _floats(args.grid, 2))
        matrices = [SL2Z.parse(m) for m in args.matrices] or [IDENTITY]
        epsilon = mp.mpf(args.epsilon) if args.epsilon is not None else None
        hits = pole_scan(
            ctxm,
            tuple(region),
            (nx, ny),
            matrices,
            epsilon,
            max_workers=config.settings.MAX_WORKERS,
        )
        record = PoleScanRecord(
            form=config.form_name,
            digits=ctx.digits,
            region=[mp.nstr(x, 15) for x in region],
            resolution=[nx, ny],
            hits=[PoleRecord.build(h, ctx.digits) for h in hits],
        )
    _emit(record, args.output)
    return EXIT_OK


def cmd_qexp(config: RunConfig) -> int:
    ctx = config.ctx
    args = config.args
    with ctx.work():
        ctxm = config.mock_context()
        scale = parse_complex(args.scale) if args.scale else None
        expansion = holomorphic_part_q(
            ctxm, 0, args.terms, scale=scale, divide_by_n=not args.no_divide
        )
        record = QExpansionRecord.build(config.form_name, expansion, ctx.digits)
    _emit(record, args.output)
    return EXIT_OK


def cmd_fixtures(config: RunConfig) -> int:
    report = run_fixtures(config.ctx, config.settings.MAX_WORKERS)
    sys.stderr.write(report.table() + "\n")
    _emit(report, config.args.output)
    return EXIT_OK if report.passed else EXIT_FAILURE


COMMANDS: dict[str, Callable[[RunConfig], int]] = {
    "periods": cmd_periods,
    "eichler": cmd_eichler,
    "evaluate": cmd_evaluate,
    "shadow": cmd_shadow,
    "invariance": cmd_invariance,
    "polescan": cmd_polescan,
    "qexp": cmd_qexp,
    "fixtures": cmd_fixtures,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--form", default="delta", help="built-in name or a JSON/text file")
    common.add_argument("--digits", type=int, default=None, help="significant digits")
    common.add_argument("--tail-tol", type=float, default=None, dest="tail_tol")
    common.add_argument("--output", default=None, help="write JSON here instead of stdout")
    common.add_argument("--log-level", default=None, dest="log_level")

    parser = argparse.ArgumentParser(
        prog="jwf", description="Vector-valued Jacobi-Weierstrass forms."
    )
    parser.add_argument(
        "--fixtures", action="store_true", help="run the golden suite and exit"
    )
    sub = parser.add_subparsers(dest="command")

    sub.add_parser("periods", parents=[common], help="recover the period lattice")
    sub.add_parser("fixtures", parents=[common], help="golden suite with a pass/fail table")

    for name, text in (("eichler", "Eichler vector"), ("evaluate", "F(tau, M)")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--tau", required=True, help="'re,im'")
        p.add_argument("--matrix", default="1,0,0,1", help="'a,b,c,d'")

    p = sub.add_parser("invariance", parents=[common], help="rho-action check")
    p.add_argument("--tau", required=True)
    p.add_argument("--gamma", required=True)
    p.add_argument("--matrix", default="1,0,0,1")

    p = sub.add_parser("shadow", parents=[common], help="finite-difference xi_0 check")
    p.add_argument("--tau", required=True)
    p.add_argument("--matrix", default="1,0,0,1")
    p.add_argument("--h", type=str, default=None, help="finite-difference step")
    p.add_argument("--tol", type=str, default="1e-6", help="relative tolerance")

    p = sub.add_parser("polescan", parents=[common], help="scan a rectangle for poles")
    p.add_argument("--region", required=True, help="'x_min,x_max,y_min,y_max'")
    p.add_argument("--grid", default="8,8", help="'nx,ny'")
    p.add_argument("--matrix", action="append", default=[], dest="matrices")
    p.add_argument("--epsilon", default=None)

    p = sub.add_parser("qexp", parents=[common], help="holomorphic part q-expansion")
    p.add_argument("--terms", type=int, default=10)
    p.add_argument("--scale", default=None, help="'re,im'; defaults to i/(2 pi)")
    p.add_argument("--no-divide", action="store_true", dest="no_divide")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if "--fixtures" in argv:
        argv.remove("--fixtures")
        argv.insert(0, "fixtures")
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_FAILURE

    settings = Settings()
    logging.basicConfig(
        level=(args.log_level or settings.LOG_LEVEL).upper(),
        stream=sys.stderr,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    try:
        config = RunConfig(args, settings)
        return COMMANDS[args.command](config)
    except PoleError as e:
        logger.error("Pole: %s", e)
        return EXIT_POLE
    except (JacobiWeierstrassError, ValidationError, ValueError, argparse.ArgumentTypeError) as e:
        logger.error("Error: %s", e)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
