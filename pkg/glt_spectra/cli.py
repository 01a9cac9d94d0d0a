"""glt-spectra command-line entry-point.

Example – spectrum of the 3-point scheme
----------------------------------------
>>> glt-spectra spectrum --method fd --problem euler-cauchy --alpha 1 --n 100 --out spectrum.csv

Example – regenerate a table with four workers
----------------------------------------------
>>> glt-spectra table 4 --out results/ --jobs 4

The table and figure runners are importable as well, see
:func:`glt_spectra.tables.run_table`.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

import pandas as pd
from pydantic import ValidationError

from .analysis import (
    discrete_spectrum,
    grid_map,
    laplace2d_spectra,
    necessary_condition_gap,
    relative_errors,
    solve_discrete,
)
from .csvio import (
    FLOAT_FORMAT,
    error_report_frame,
    gap_frame,
    grid_frame,
    matrix_frame,
    rearrangement_frame,
    spectrum_frame,
    write_frame,
)
from .fd import assemble_fd
from .grids import Diffeomorphism
from .iga import assemble_iga
from .errors import ConfigError, NumericalError
from .models import GridName, Method, ProblemName, RunConfig
from .problems import SLProblem, dirichlet_laplacian, euler_cauchy, l1_case, liouville_transform, reference_spectrum
from .symbol import discretization_symbol, euler_cauchy_rearrangement, rearrange
from .tables import FIGURE_NAMES, TABLE_NAMES, run_figure, run_table

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


###############################################################################
# Commands
###############################################################################

def _problem(cfg: RunConfig) -> SLProblem:
    if cfg.problem == ProblemName.EULER_CAUCHY:
        return euler_cauchy(cfg.alpha)
    if cfg.problem == ProblemName.LAPLACIAN_1D:
        return dirichlet_laplacian()
    if cfg.problem == ProblemName.L1_CASE:
        return l1_case()
    raise ConfigError(f"{cfg.problem.value} has no one-dimensional problem instance")


def _emit(df: pd.DataFrame, out: Optional[Path]) -> None:
    if out is None:
        df.to_csv(sys.stdout, index=False, float_format=FLOAT_FORMAT)
    else:
        write_frame(df, out)
        logger.info("Wrote %d rows to %s", len(df), out)


def _dump_system(prob: SLProblem, tau: Diffeomorphism, cfg: RunConfig, outdir: Path) -> None:
    if cfg.method == Method.FD:
        system = assemble_fd(prob, tau, cfg.n, cfg.eta)
        write_frame(grid_frame(system.grid), outdir / "grid.csv")
        write_frame(matrix_frame(system.L + system.Q), outdir / "matrix.csv")
    else:
        pair = assemble_iga(prob, tau, cfg.n, cfg.eta)
        write_frame(matrix_frame(pair.K), outdir / "stiffness.csv")
        write_frame(matrix_frame(pair.M), outdir / "mass.csv")
    logger.info("Dumped %s system to %s", cfg.method.value, outdir)


def cmd_spectrum(cfg: RunConfig, dump_dir: Optional[Path] = None) -> None:
    if cfg.problem == ProblemName.LAPLACE_2D:
        if dump_dir is not None:
            raise ConfigError("--dump-dir is not available for laplace-2d")
        result, _ = laplace2d_spectra(cfg.n)
    else:
        prob = _problem(cfg)
        tau = grid_map(prob, cfg.grid, cfg.alpha)
        if dump_dir is not None:
            _dump_system(prob, tau, cfg, dump_dir)
        result = solve_discrete(prob, tau, cfg.method, cfg.n, cfg.eta)
    _emit(spectrum_frame(result), cfg.out)


def cmd_rearrange(cfg: RunConfig) -> None:
    if cfg.exact:
        rearr = euler_cauchy_rearrangement(cfg.alpha, cfg.n)
    else:
        prob = _problem(cfg)
        sym = discretization_symbol(prob, grid_map(prob, cfg.grid, cfg.alpha), cfg.method.value, cfg.eta)
        rearr = rearrange(sym, cfg.r)
    _emit(rearrangement_frame(rearr, cfg.n), cfg.out)


def cmd_errors(cfg: RunConfig, gap_out: Optional[Path] = None) -> None:
    """Numerical and analytic relative errors against the closed-form spectrum.

    ``gap_out`` also receives the (x, gap) samples of the necessary-condition gap.
    """
    prob = _problem(cfg)
    tau = grid_map(prob, cfg.grid, cfg.alpha)
    values = discrete_spectrum(prob, tau, cfg.method, cfg.n, cfg.eta)
    reference = reference_spectrum(prob, len(values))
    rearr = rearrange(discretization_symbol(prob, tau, cfg.method.value, cfg.eta), cfg.r)
    report = relative_errors(values, reference, rearr, cfg.n)
    logger.info("max relative error %.6g at k=%d", report.max_err, report.argmax_k)
    _emit(error_report_frame(report), cfg.out)
    if gap_out is not None:
        gap = necessary_condition_gap(rearr, liouville_transform(prob).B)
        write_frame(gap_frame(gap), gap_out)
        logger.info("max gap %.6g at x=%.4f", gap.gap, gap.argmax_x)


def cmd_table(table_id: str, outdir: Path, jobs: int = 1) -> None:
    if jobs < 1:
        raise ConfigError(f"--jobs must be >= 1 (got {jobs})")
    run_table(table_id=table_id, outdir=outdir, jobs=jobs)


def cmd_figure(figure_id: str, outdir: Path, jobs: int = 1) -> None:
    if jobs < 1:
        raise ConfigError(f"--jobs must be >= 1 (got {jobs})")
    run_figure(figure_id=figure_id, outdir=outdir, jobs=jobs)


###############################################################################
# CLI entry-point
###############################################################################

def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--method", choices=[m.value for m in Method], default=Method.FD.value)
    p.add_argument("--problem", choices=[m.value for m in ProblemName], default=ProblemName.EULER_CAUCHY.value)
    p.add_argument("--alpha", type=float, default=1.0, help="Euler-Cauchy parameter")
    p.add_argument("--n", type=int, default=100, help="Number of interior grid points / breakpoints")
    p.add_argument("--eta", type=int, default=1, help="FD stencil half-width or B-spline degree")
    p.add_argument("--grid", choices=[g.value for g in GridName], default=GridName.UNIFORM.value)
    p.add_argument("--out", type=Path, default=None, help="Output CSV (standard output if omitted)")


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="glt-spectra",
        description="Spectral symbols and eigenvalue errors of FD and IgA Sturm-Liouville discretizations",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    sub = p.add_subparsers(dest="command", required=True)

    spectrum = sub.add_parser("spectrum", help="Eigenvalues of the assembled operator",
                              formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    _add_run_options(spectrum)
    spectrum.add_argument("--dump-dir", type=Path, default=None, help="Also write the grid and matrices as CSV")

    rearr = sub.add_parser("rearrange", help="Monotone rearrangement of the spectral symbol",
                           formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    _add_run_options(rearr)
    rearr.add_argument("--r", type=int, default=1000, help="Symbol sampling grid is r x r")
    rearr.add_argument("--exact", action="store_true", help="Closed-form rearrangement (euler-cauchy, fd, eta=1)")

    errors = sub.add_parser("errors", help="Relative eigenvalue errors, numerical and symbol-predicted",
                            formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    _add_run_options(errors)
    errors.add_argument("--r", type=int, default=1000, help="Symbol sampling grid is r x r")
    errors.add_argument("--gap-out", type=Path, default=None, help="Also write the necessary-condition gap as CSV")

    table = sub.add_parser("table", help="Regenerate a table as CSV",
                           formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    table.add_argument("id", help=f"Table number or name ({', '.join(f'{k}={v}' for k, v in TABLE_NAMES.items())})")
    table.add_argument("--out", type=Path, default=Path("."), help="Output directory")
    table.add_argument("--jobs", type=int, default=1, help="Worker threads")

    figure = sub.add_parser("figure", help="Regenerate the data behind a figure as CSV",
                            formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    figure.add_argument("id", help=f"Figure name ({', '.join(FIGURE_NAMES)})")
    figure.add_argument("--out", type=Path, default=Path("."), help="Output directory")
    figure.add_argument("--jobs", type=int, default=1, help="Worker threads")
    return p


def _run_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        method=args.method,
        problem=args.problem,
        alpha=args.alpha,
        n=args.n,
        eta=args.eta,
        grid=args.grid,
        r=getattr(args, "r", 1000),
        exact=getattr(args, "exact", False),
        out=args.out,
    )


def main(argv: Optional[list[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(message)s")
    args = _build_parser().parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    try:
        if args.command == "spectrum":
            cmd_spectrum(_run_config(args), dump_dir=args.dump_dir)
        elif args.command == "rearrange":
            cmd_rearrange(_run_config(args))
        elif args.command == "errors":
            cmd_errors(_run_config(args), gap_out=args.gap_out)
        elif args.command == "table":
            cmd_table(args.id, args.out, args.jobs)
        elif args.command == "figure":
            cmd_figure(args.id, args.out, args.jobs)
    except (ConfigError, ValidationError) as exc:
        print(f"glt-spectra: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"glt-spectra: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
