"""Run configuration models: maps to the JSON config file."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.models.kernels import AnalyticKineticKernel, AngularKernelSet, HardSphereFit
from app.models.mixture import MixtureSpec
from app.models.quadrature import QuadratureConfig
from app.models.solver import Grid1D, ProfileTerm


# ---------------------------------------------------------------------------
# Raw sections, as written in the file
# ---------------------------------------------------------------------------

class HardSphereRequest(BaseModel):
    """Fit |z| on [0, r_max] by an even polynomial up to z^(2 * degree)."""

    r_max: float = Field(default=10.0, gt=0)
    degree: int = Field(default=6, ge=0, le=15)
    n_samples: int = Field(default=4001, ge=101)


class KernelSection(BaseModel):
    coefficients: list[float] | None = None
    r_max: float = Field(default=10.0, gt=0)
    hard_sphere_fit: HardSphereRequest | None = None

    @model_validator(mode="after")
    def one_source(self):
        if (self.coefficients is None) == (self.hard_sphere_fit is None):
            raise ValueError("give exactly one of 'coefficients' or 'hard_sphere_fit'")
        return self


class AngularEntry(BaseModel):
    """One pair's angular kernel: a constant, a CSV table path, or the L1 norm."""

    constant: float | None = None
    table: str | None = None
    l1_norm: float | None = None

    @model_validator(mode="after")
    def one_source(self):
        given = [v for v in (self.constant, self.table, self.l1_norm) if v is not None]
        if len(given) != 1:
            raise ValueError("give exactly one of 'constant', 'table' or 'l1_norm'")
        return self


class SolverSection(BaseModel):
    grid: Grid1D = Grid1D()
    dt: float | None = Field(default=None, gt=0)  # None = 0.9 x stability bound
    t_end: float = Field(default=0.05, ge=0)
    output_every: int = Field(default=0, ge=0)  # 0 = initial and final only
    profiles: dict[str, list[ProfileTerm]] = {}


class SweepSection(BaseModel):
    eps: list[float] = [0.2, 0.1, 0.05]
    reference_refinement: int = Field(default=3, ge=1)

    @field_validator("eps")
    @classmethod
    def check_eps(cls, v):
        for e in v:
            if not 0 <= e < 1:
                raise ValueError(f"epsilon {e} outside [0, 1)")
        return v

    @field_validator("reference_refinement")
    @classmethod
    def check_odd(cls, v):
        if v % 2 == 0:
            raise ValueError("reference_refinement must be odd so cell centers coincide")
        return v


class CoefficientSection(BaseModel):
    max_composition_order: int = Field(default=30, ge=1)


class RawConfig(BaseModel):
    """The config file after the defaults merge, before materialization."""

    mixture: MixtureSpec
    kernel: KernelSection
    angular: dict[str, AngularEntry]
    solver: SolverSection = SolverSection()
    sweep: SweepSection = SweepSection()
    oracle: QuadratureConfig = QuadratureConfig()
    coefficients: CoefficientSection = CoefficientSection()


# ---------------------------------------------------------------------------
# Materialized config handed to the pipelines
# ---------------------------------------------------------------------------

class RunConfig(BaseModel):
    """Fully validated configuration: kernels built, tables loaded."""

    model_config = ConfigDict(frozen=True)

    mixture: MixtureSpec
    kernel: AnalyticKineticKernel
    kernel_fit: HardSphereFit | None = None
    angular: AngularKernelSet
    solver: SolverSection
    sweep: SweepSection
    oracle: QuadratureConfig
    coefficients: CoefficientSection
    source: str = ""

    def metadata(self) -> dict[str, str]:
        """Header lines shared by every output file."""
        meta = {
            "species": ",".join(self.mixture.names),
            "masses": ",".join(f"{m:.17g}" for m in self.mixture.masses),
            "T": f"{self.mixture.temperature:.17g}",
            "k": f"{self.mixture.boltzmann_k:.17g}",
            "c": f"{self.mixture.total_concentration:.17g}",
            "kernel": self.kernel.label(),
            "truncation": str(self.kernel.truncation_order),
        }
        if self.kernel_fit is not None:
            meta["hard_sphere_fit_max_abs_error"] = f"{self.kernel_fit.max_abs_error:.17g}"
        return meta
