"""Grid and initial-profile models for the 1-D solvers."""

from __future__ import annotations

from typing import Annotated, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class Grid1D(BaseModel):
    """Uniform cell-centered grid on [x_min, x_max]."""

    model_config = ConfigDict(frozen=True)

    x_min: float = 0.0
    x_max: float = 1.0
    n_cells: int = Field(default=64, ge=8)
    boundary: Literal["periodic", "no_flux"] = "periodic"

    @model_validator(mode="after")
    def check_extent(self):
        if not self.x_max > self.x_min:
            raise ValueError("x_max must be greater than x_min")
        return self

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def dx(self) -> float:
        return self.length / self.n_cells

    @property
    def n_faces(self) -> int:
        return self.n_cells + 1

    def centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.n_cells) + 0.5) * self.dx

    def faces(self) -> np.ndarray:
        return self.x_min + np.arange(self.n_faces) * self.dx

    def refined(self, factor: int) -> "Grid1D":
        return self.model_copy(update={"n_cells": self.n_cells * factor})


# ---------------------------------------------------------------------------
# Initial profile terms (summed per species)
# ---------------------------------------------------------------------------

class ConstantTerm(BaseModel):
    kind: Literal["constant"] = "constant"
    value: float


class SineTerm(BaseModel):
    """amplitude * sin(2 pi wavenumber (x - x_min) / L + phase)."""

    kind: Literal["sine"] = "sine"
    amplitude: float
    wavenumber: float = 1.0
    phase: float = 0.0


class GaussianTerm(BaseModel):
    """height * exp(-((x - center) / width)^2 / 2)."""

    kind: Literal["gaussian"] = "gaussian"
    center: float
    width: float = Field(gt=0)
    height: float


ProfileTerm = Annotated[ConstantTerm | SineTerm | GaussianTerm, Field(discriminator="kind")]
