import argparse
import logging
import sys
from typing import List, Optional

from app.config import (
    DEFAULT_AMPLITUDE,
    DEFAULT_CLASS,
    DEFAULT_GRID,
    DEFAULT_STEP,
    DEFAULT_WIDTH,
    LOG_LEVEL,
    OUTPUT_DIR,
    VERIFY_TOL,
)
from app.core.weingarten import CLASS_IDS
from app.errors import ConfigError, WeingartenError
from app.handlers.commands import command_handler
from app.models.job import COMMANDS, FORMATS, JobConfig

logger = logging.getLogger("weingarten")


def build_parser() -> argparse.ArgumentParser:
    """Subcommands share one set of job flags; unset flags fall back to the job file, then the defaults"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="job file of KEY=value lines")
    common.add_argument("--class", dest="class_id", choices=CLASS_IDS, help=f"basic class (default {DEFAULT_CLASS})")
    common.add_argument("--beta", type=float, help="class parameter beta")
    common.add_argument("--gamma", type=float, help="class parameter gamma")
    common.add_argument("--grid", help=f"resolution NxM (default {DEFAULT_GRID})")
    common.add_argument("--step", type=float, help=f"grid spacing when no extent is given (default {DEFAULT_STEP})")
    common.add_argument("--extent", help="u0,u1,v0,v1 (default u from 0, v centred on 0)")
    common.add_argument("--tol", type=float, help=f"verification tolerance (default {VERIFY_TOL})")
    common.add_argument("--omega", type=float, help="SOR relaxation factor in [1, 2) (default: optimal for the grid)")
    common.add_argument("--out", help=f"output directory (default {OUTPUT_DIR})")
    common.add_argument("--format", choices=FORMATS, help="mesh format (default obj)")
    common.add_argument("--offset", dest="offsets", type=float, action="append",
                        help="parallel offset a, repeatable")
    common.add_argument("--relation", help="alpha,beta,gamma,delta of delta K = alpha H + beta H' + gamma "
                                           "(write --relation=-1,... for a leading minus)")
    common.add_argument("--coeffs", help="A,B,C,D of the linear fractional pair")
    common.add_argument("--field", dest="field_path", help="nu or lambda field written by 'solve'")
    common.add_argument("--amplitude", type=float, help=f"initial bump amplitude (default {DEFAULT_AMPLITUDE})")
    common.add_argument("--width", type=float, help=f"initial bump width (default {DEFAULT_WIDTH})")

    parser = argparse.ArgumentParser(
        prog="weingarten",
        description="Time-like Weingarten surfaces in Minkowski 3-space",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "classes": "list the ten basic classes and their natural PDEs",
        "solve": "solve the natural PDE of a class and write the field",
        "reconstruct": "integrate the frame and export the surface",
        "verify": "reconstruct and compare recovered invariants with the prescribed ones",
        "parallel": "build parallel surfaces at the given offsets",
        "classify": "reduce a linear relation to its basic class",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def load_job(args: argparse.Namespace) -> JobConfig:
    cli_args = {k: v for k, v in vars(args).items() if k != "config"}
    if args.config:
        return JobConfig.from_file(args.config, cli_args)
    return JobConfig.from_sources({}, cli_args)


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(
        level=getattr(logging, LOG_LEVEL.upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # --help exits 0
        return ConfigError.exit_code if e.code else 0
    try:
        job = load_job(args)
        command_handler.run(job)
    except WeingartenError as e:
        print(e.describe(), file=sys.stderr)
        logger.debug("Job failed", exc_info=True)
        return e.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
