"""Regenerate the numeric content of every table and figure as CSV.

Users who prefer Python can call the runners directly::

    from glt_spectra.tables import run_table
    run_table(table_id="max-error", outdir="out", jobs=4)
"""
from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .analysis import (
    attraction_report,
    count_outliers,
    discrete_spectrum,
    grid_map,
    l1_case_stats,
    max_relative_error,
    necessary_condition_check,
    relative_errors,
    saturation_constant,
    weighted,
)
from .config import L1_THETA_REFINE, max_n
from .csvio import records_frame, write_frame, write_provenance
from .errors import ConfigError, NumericalError
from .grids import identity_map
from .models import GridName, Method
from .problems import euler_cauchy, l1_case
from .symbol import discretization_symbol, euler_cauchy_omega, rearrange, sample_rearrangement
from .taskmanager import FunctionTask, Task, TaskManager

logger = logging.getLogger(__name__)

Row = Dict[str, Any]

TABLE_NAMES = {
    "1": "alpha-limit",
    "2": "saturation",
    "3": "attraction",
    "4": "max-error",
    "5": "fd-grids",
    "6": "iga-grids",
    "7": "iga-necessary",
    "8": "l1-case",
}
SUPPLEMENTARY_TABLES = ("fd-necessary",)

FIGURE_NAMES = (
    "eig-symbol-comparison",
    "relative-errors",
    "analytic-saturation",
    "fd-distribution",
    "iga-distribution",
    "l1-distribution",
)


###############################################################################
# Identifiers and caps
###############################################################################

def resolve_table_id(table_id: Union[str, int]) -> str:
    key = str(table_id).strip().lower()
    if key in TABLE_NAMES:
        return TABLE_NAMES[key]
    if key in TABLE_NAMES.values() or key in SUPPLEMENTARY_TABLES:
        return key
    known = ", ".join(list(TABLE_NAMES) + list(TABLE_NAMES.values()) + list(SUPPLEMENTARY_TABLES))
    raise ConfigError(f"unknown table {table_id!r} (known: {known})")


def resolve_figure_id(figure_id: str) -> str:
    key = str(figure_id).strip().lower()
    if key not in FIGURE_NAMES:
        raise ConfigError(f"unknown figure {figure_id!r} (known: {', '.join(FIGURE_NAMES)})")
    return key


class Provenance:
    """Notes on parameter substitutions, written next to the CSV output."""

    def __init__(self, target: str):
        self.lines: List[str] = [f"# {target}"]

    def note(self, line: str) -> None:
        logger.info(line)
        self.lines.append(line)

    def cap(self, n: int) -> int:
        limit = max_n()
        if n > limit:
            self.note(f"n={n} reduced to {limit} (raise with GLT_SPECTRA_MAX_N)")
            return limit
        return n


###############################################################################
# Table cells
###############################################################################

def _alpha_limit_cell(alpha: float, n: int) -> Row:
    x = np.arange(1, n + 1) / (n + 1.0)
    diff = np.abs(euler_cauchy_omega(alpha, x) - (2.0 - 2.0 * np.cos(math.pi * x)))
    return {"alpha": alpha, "n": n, "sup_diff": float(diff.max()), "argmax_x": float(x[int(np.argmax(diff))])}


def _saturation_cell(alpha: float, k: int, n: int) -> Row:
    prob = euler_cauchy(alpha)
    exact = float(prob.exact(k))
    omega = float(euler_cauchy_omega(alpha, np.array([k / (n + 1.0)]))[0])
    analytic = abs((n + 1.0) ** 2 * omega / exact - 1.0)
    c = float(saturation_constant(alpha, k))
    return {"alpha": alpha, "k": k, "n": n, "c": c, "analytic_err": analytic, "ratio_minus_one": abs(analytic / c - 1.0)}


def _attraction_cell(alpha: float, n: int) -> Row:
    return attraction_report(alpha, n).model_dump(mode="json")


def _necessary_cell(**kwargs) -> Row:
    return necessary_condition_check(**kwargs).model_dump(mode="json")


def _grid_cell(method: Method, grid: GridName, eta: int, n: int, alpha: float, exclude_outliers: bool) -> Row:
    prob = euler_cauchy(alpha)
    tau = grid_map(prob, grid, alpha)
    values = discrete_spectrum(prob, tau, method, n, eta)
    reference = prob.exact.first(len(values))
    sym = discretization_symbol(prob, tau, Method(method).value, eta) if exclude_outliers else None
    max_err, argmax_k = max_relative_error(values, reference, exclude_outliers, sym, n)
    row = {"method": Method(method).value, "grid": GridName(grid).value, "eta": eta, "n": n,
           "max_err": max_err, "argmax_k": argmax_k}
    if exclude_outliers:
        row["outliers"] = count_outliers(values, sym, n)
    return row


def _l1_cell(n: int) -> Row:
    return l1_case_stats(n).model_dump(mode="json")


def _table_tasks(name: str, prov: Provenance) -> List[Task]:
    tasks: List[Task] = []
    if name == "alpha-limit":
        for alpha in (1.0, 1e-2, 1e-5, 1e-10):
            tasks.append(FunctionTask(f"alpha={alpha:g}", _alpha_limit_cell, {"alpha": alpha, "n": 1000}))
    elif name == "saturation":
        prov.note("analytic columns only; n=10^4 runs at full size")
        for alpha in (0.1, 1.0, 2.0, 5.0):
            for k in (1, 5, 10):
                for n in (100, 1000, 10_000):
                    tasks.append(FunctionTask(f"alpha={alpha:g},k={k},n={n}", _saturation_cell,
                                              {"alpha": alpha, "k": k, "n": n}))
    elif name == "attraction":
        for alpha in (0.5, 1.2, 4.0):
            for n in (100, 1000, 3000):
                tasks.append(FunctionTask(f"alpha={alpha:g},n={n}", _attraction_cell,
                                          {"alpha": alpha, "n": prov.cap(n)}))
    elif name == "max-error":
        for alpha in (0.5, 1.0, 1.2, 3.0):
            for n in (100, 1000, 5000):
                tasks.append(FunctionTask(f"alpha={alpha:g},n={n}", _necessary_cell, {
                    "method": Method.FD, "grid": GridName.UNIFORM, "eta": 1, "alpha": alpha,
                    "n": prov.cap(n), "exact": True}))
    elif name in ("fd-necessary", "iga-necessary"):
        method, eta = (Method.FD, 5) if name == "fd-necessary" else (Method.IGA, 4)
        for grid in (GridName.UNIFORM, GridName.EXP):
            for alpha in (0.1, 3.0):
                for n in (100, 1000):
                    tasks.append(FunctionTask(f"{grid.value},alpha={alpha:g},n={n}", _necessary_cell, {
                        "method": method, "grid": grid, "eta": eta, "alpha": alpha, "n": prov.cap(n)}))
    elif name == "fd-grids":
        for grid in (GridName.UNIFORM, GridName.EXP):
            for eta in (1, 10, 15):
                tasks.append(FunctionTask(f"{grid.value},eta={eta}", _grid_cell, {
                    "method": Method.FD, "grid": grid, "eta": eta, "n": prov.cap(1000), "alpha": 1.0,
                    "exclude_outliers": False}))
    elif name == "iga-grids":
        prov.note("IgA outliers excluded from the maximum")
        for grid in (GridName.UNIFORM, GridName.EXP):
            for eta in (1, 5, 10):
                tasks.append(FunctionTask(f"{grid.value},eta={eta}", _grid_cell, {
                    "method": Method.IGA, "grid": grid, "eta": eta, "n": 100, "alpha": 1.0,
                    "exclude_outliers": True}))
    elif name == "l1-case":
        for n in (100, 1000, 2000):
            tasks.append(FunctionTask(f"n={n}", _l1_cell, {"n": prov.cap(n)}))
    return tasks


###############################################################################
# Figure series
###############################################################################

def _distribution_rows(series: str, values: np.ndarray, symbol: Optional[np.ndarray],
                       reference: Optional[np.ndarray]) -> List[Row]:
    m = len(values)
    k = np.arange(1, m + 1)
    symbol = np.full(m, np.nan) if symbol is None else symbol
    reference = np.full(m, np.nan) if reference is None else reference
    return [
        {"series": series, "k": int(k[i]), "x": k[i] / m, "eigenvalue": float(values[i]),
         "symbol": float(symbol[i]), "reference": float(reference[i])}
        for i in range(m)
    ]


def _error_rows(series: str, report) -> List[Row]:
    m = len(report.k)
    return [
        {"series": series, "k": report.k[i], "x": report.k[i] / m, "err_num": report.numerical_err[i],
         "err_analytic": report.analytic_err[i]}
        for i in range(m)
    ]


def _eig_symbol_series(alpha: float, n: int, r: int) -> List[Row]:
    prob = euler_cauchy(alpha)
    tau = identity_map(prob.a, prob.b)
    values = discrete_spectrum(prob, tau, Method.FD, n, 1)
    samples = sample_rearrangement(rearrange(discretization_symbol(prob, tau, "fd", 1), r), n)
    return _distribution_rows(f"alpha={alpha:g}", values, (n + 1.0) ** 2 * samples, prob.exact.first(n))


def _error_series(alpha: float, n: int, r: int, method: Method = Method.FD, eta: int = 1) -> List[Row]:
    prob = euler_cauchy(alpha)
    tau = identity_map(prob.a, prob.b)
    values = discrete_spectrum(prob, tau, method, n, eta)
    rearr = rearrange(discretization_symbol(prob, tau, Method(method).value, eta), r)
    report = relative_errors(values, prob.exact.first(len(values)), rearr, n)
    return _error_rows(f"{Method(method).value},eta={eta},r={r}", report)


def _grid_distribution_series(method: Method, grid: GridName, eta: int, n: int, alpha: float) -> List[Row]:
    prob = euler_cauchy(alpha)
    tau = grid_map(prob, grid, alpha)
    values = discrete_spectrum(prob, tau, method, n, eta)
    reference = prob.exact.first(len(values))
    return _distribution_rows(f"{Method(method).value},{GridName(grid).value},eta={eta}",
                              weighted(values, n), None, weighted(reference, n))


def _l1_series(n: int) -> List[Row]:
    prob = l1_case()
    tau = identity_map(prob.a, prob.b)
    values = discrete_spectrum(prob, tau, Method.FD, n, 1)
    samples = sample_rearrangement(rearrange(discretization_symbol(prob, tau, "fd", 1), n, L1_THETA_REFINE), n)
    return _distribution_rows(f"n={n}", values, (n + 1.0) ** 2 * samples, None)


def _figure_tasks(name: str, prov: Provenance) -> List[Task]:
    tasks: List[Task] = []
    if name == "eig-symbol-comparison":
        tasks.append(FunctionTask("alpha=1", _eig_symbol_series, {"alpha": 1.0, "n": 100, "r": 1000}))
    elif name == "relative-errors":
        prov.note("reference spectrum: closed form instead of n'=10^4 fine FD")
        for method, eta in ((Method.FD, 1), (Method.FD, 4), (Method.FD, 8), (Method.IGA, 1), (Method.IGA, 4)):
            for r in (100, 500, 800):
                tasks.append(FunctionTask(f"{method.value},eta={eta},r={r}", _error_series,
                                          {"alpha": 1.0, "n": 100, "r": r, "method": method, "eta": eta}))
    elif name == "analytic-saturation":
        alpha = 4.0 * math.pi ** 2
        prov.note(f"c(alpha,1)={float(saturation_constant(alpha, 1)):.17g} c(alpha,2)={float(saturation_constant(alpha, 2)):.17g}")
        for r in (800, 1000, 2000):
            tasks.append(FunctionTask(f"r={r}", _error_series, {"alpha": alpha, "n": 100, "r": r}))
    elif name == "fd-distribution":
        for grid in (GridName.UNIFORM, GridName.EXP):
            for eta in (1, 15):
                tasks.append(FunctionTask(f"{grid.value},eta={eta}", _grid_distribution_series, {
                    "method": Method.FD, "grid": grid, "eta": eta, "n": prov.cap(1000), "alpha": 1.0}))
    elif name == "iga-distribution":
        for grid in (GridName.UNIFORM, GridName.EXP):
            for eta in (1, 10):
                tasks.append(FunctionTask(f"{grid.value},eta={eta}", _grid_distribution_series, {
                    "method": Method.IGA, "grid": grid, "eta": eta, "n": 100, "alpha": 1.0}))
    elif name == "l1-distribution":
        tasks.append(FunctionTask("n=1000", _l1_series, {"n": prov.cap(1000)}))
    return tasks


###############################################################################
# Public runner API
###############################################################################

def _collect(tasks: Sequence[Task], jobs: int) -> Tuple[List[Row], List[str]]:
    rows: List[Row] = []
    failures: List[str] = []
    for result in TaskManager(num_workers=jobs).process_tasks(tasks):
        if not result.is_success:
            failures.append(f"{result.task.name}: {result.error}")
            continue
        value = result.value
        rows.extend(value if isinstance(value, list) else [value])
    return rows, failures


def _finish(name: str, kind: str, tasks: List[Task], prov: Provenance, outdir: Union[str, Path], jobs: int) -> Path:
    rows, failures = _collect(tasks, jobs)
    path = write_frame(records_frame(rows) if rows else pd.DataFrame(), Path(outdir) / f"{kind}-{name}.csv")
    for failure in failures:
        prov.note(f"FAILED {failure}")
    write_provenance(outdir, prov.lines)
    if failures:
        raise NumericalError(f"{len(failures)} of {len(tasks)} computations failed for {kind} {name}; "
                             f"first: {failures[0]}")
    logger.info("Wrote %s", path)
    return path


def run_table(*, table_id: Union[str, int], outdir: Union[str, Path], jobs: int = 1) -> Path:
    """Compute one table and write ``table-<name>.csv`` plus ``provenance.txt`` into ``outdir``."""
    name = resolve_table_id(table_id)
    prov = Provenance(f"table {name}")
    return _finish(name, "table", _table_tasks(name, prov), prov, outdir, jobs)


def run_figure(*, figure_id: str, outdir: Union[str, Path], jobs: int = 1) -> Path:
    """Compute the series behind one figure and write ``figure-<name>.csv``."""
    name = resolve_figure_id(figure_id)
    prov = Provenance(f"figure {name}")
    return _finish(name, "figure", _figure_tasks(name, prov), prov, outdir, jobs)
