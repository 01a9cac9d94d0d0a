"""CSV dumps: header row, comma separator, 17 significant digits."""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Iterable, List, Mapping, Optional, Sequence, Union

import numpy as np
import pandas as pd
import scipy.sparse
from pydantic import BaseModel

from .eig import SpectrumResult
from .grids import ExtendedGrid
from .symbol import MonotoneRearrangement

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"

PathLike = Union[str, Path]


def write_frame(df: pd.DataFrame, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.debug("Wrote %d rows to %s", len(df), path)
    return path


def grid_frame(grid: ExtendedGrid) -> pd.DataFrame:
    return pd.DataFrame({"j": grid.indices, "x": grid.nodes})


def matrix_frame(matrix) -> pd.DataFrame:
    """Nonzero entries as 1-based (i, j, value) triplets in row-major order."""
    coo = scipy.sparse.coo_matrix(matrix)
    order = np.lexsort((coo.col, coo.row))
    return pd.DataFrame({"i": coo.row[order] + 1, "j": coo.col[order] + 1, "value": coo.data[order]})


def spectrum_frame(result: Union[SpectrumResult, np.ndarray]) -> pd.DataFrame:
    if isinstance(result, SpectrumResult):
        values = result.values
        imag = result.imag if result.imag is not None else np.zeros_like(values)
    else:
        values = np.asarray(result, dtype=float)
        imag = np.zeros_like(values)
    return pd.DataFrame({"k": np.arange(1, len(values) + 1), "lambda_re": values, "lambda_im": imag})


def rearrangement_frame(rearr: MonotoneRearrangement, n: int) -> pd.DataFrame:
    x = np.arange(1, n + 1) / (n + 1.0)
    return pd.DataFrame({"x": x, "omega_tilde": rearr(x)})


def records_frame(records: Iterable[Union[BaseModel, Mapping]], columns: Optional[Sequence[str]] = None) -> pd.DataFrame:
    """One row per record; pydantic models are dumped in JSON mode so enums become their values."""
    rows: List[Mapping] = [r.model_dump(mode="json") if isinstance(r, BaseModel) else dict(r) for r in records]
    df = pd.DataFrame(rows)
    if columns is not None:
        df = df.reindex(columns=list(columns))
    return df


def error_report_frame(report) -> pd.DataFrame:
    return pd.DataFrame({"k": report.k, "err_num": report.numerical_err, "err_analytic": report.analytic_err})


def gap_frame(report) -> pd.DataFrame:
    """(x, gap) samples of the necessary-condition gap."""
    return pd.DataFrame({"x": report.x, "gap": report.series})


def write_provenance(outdir: PathLike, lines: Sequence[str]) -> Path:
    path = Path(outdir) / "provenance.txt"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(f"{line}\n" for line in lines))
    return path
