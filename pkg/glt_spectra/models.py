"""Validated records: run configuration and the reports the analysis emits."""
from __future__ import annotations

from enum import Enum
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class Method(str, Enum):
    FD = "fd"
    IGA = "iga"


class ProblemName(str, Enum):
    EULER_CAUCHY = "euler-cauchy"
    LAPLACIAN_1D = "laplacian-1d"
    L1_CASE = "l1-case"
    LAPLACE_2D = "laplace-2d"


class GridName(str, Enum):
    UNIFORM = "uniform"
    EXP = "exp"


FD_MAX_ETA = 20
IGA_MAX_ETA = 10
LAPLACE_2D_MAX_N = 256


class RunConfig(BaseModel):
    """Parameters of a single `spectrum` or `rearrange` run."""

    model_config = ConfigDict(frozen=True)

    method: Method = Method.FD
    problem: ProblemName = ProblemName.EULER_CAUCHY
    alpha: float = Field(1.0, gt=0)
    n: int = Field(100, ge=1)
    eta: int = Field(1, ge=1)
    grid: GridName = GridName.UNIFORM
    r: int = Field(1000, ge=2)
    exact: bool = False
    out: Optional[Path] = None

    @model_validator(mode="after")
    def _check_combination(self) -> "RunConfig":
        max_eta = FD_MAX_ETA if self.method == Method.FD else IGA_MAX_ETA
        if self.eta > max_eta:
            raise ValueError(f"eta={self.eta} exceeds {max_eta} for method {self.method.value}")
        if self.method == Method.FD and self.n < 2 * self.eta:
            raise ValueError(f"fd needs n >= 2*eta (got n={self.n}, eta={self.eta})")
        if self.method == Method.IGA and self.n < 2:
            raise ValueError("iga needs n >= 2")
        if self.grid == GridName.EXP and self.problem != ProblemName.EULER_CAUCHY:
            raise ValueError(f"grid=exp is only defined for euler-cauchy, not {self.problem.value}")
        if self.problem in (ProblemName.L1_CASE, ProblemName.LAPLACE_2D):
            if self.method != Method.FD or self.eta != 1:
                raise ValueError(f"{self.problem.value} is only available for fd with eta=1")
        if self.problem == ProblemName.LAPLACE_2D and self.n > LAPLACE_2D_MAX_N:
            raise ValueError(f"laplace-2d needs n <= {LAPLACE_2D_MAX_N}")
        if self.exact and not (
            self.problem == ProblemName.EULER_CAUCHY
            and self.method == Method.FD
            and self.eta == 1
            and self.grid == GridName.UNIFORM
        ):
            raise ValueError("--exact is only available for euler-cauchy, fd, eta=1, uniform grid")
        return self


class ErrorReport(BaseModel):
    """Per-index numerical and analytic relative errors."""

    k: List[int]
    numerical_err: List[float]
    analytic_err: List[float]
    max_err: float = Field(ge=0)
    argmax_k: int = Field(ge=1)
    outliers_excluded: int = Field(0, ge=0)

    @model_validator(mode="after")
    def _check_lengths(self) -> "ErrorReport":
        if len(self.numerical_err) != len(self.k) or len(self.analytic_err) != len(self.k):
            raise ValueError("error columns must align with k")
        return self


class GapReport(BaseModel):
    """Necessary-condition gap max_x |ω̃(x)B²/(x²π²) − 1|."""

    gap: float = Field(ge=0)
    argmax_x: float = Field(gt=0, le=1)
    grid: int = Field(ge=1)
    x: List[float] = Field(default_factory=list)
    series: List[float] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_series(self) -> "GapReport":
        if len(self.series) != len(self.x):
            raise ValueError("gap series must align with x")
        return self


class AttractionReport(BaseModel):
    alpha: float
    n: int
    r: int
    analytic_err_n: float = Field(ge=0)
    attraction_gap: float = Field(ge=0)


class L1CaseStats(BaseModel):
    """Statistics of the x^(-1/2) diffusion problem on (0, 1), weighted spectra."""

    n: int
    r: int
    theta_refine: int = Field(1, ge=1)
    sup_abs_err: float = Field(ge=0)
    max_analytic_rel_err: float = Field(ge=0)
    tail_ratio: float
    eig_ratio: float
    mean_eig: float
    gershgorin_bound: float


class Laplace2DStats(BaseModel):
    n: int
    max_rel_err: float = Field(ge=0)
    bound: float


class NecessaryConditionRow(BaseModel):
    """Observed maximum relative error against the limit gap of the rearranged symbol."""

    method: Method
    grid: GridName
    eta: int
    alpha: float
    n: int
    r: int
    max_err: float = Field(ge=0)
    gap: float = Field(ge=0)
    ratio_minus_one: float
    kbar_over_n: float
    gap_argmax_x: float
    outliers: int = Field(0, ge=0)
