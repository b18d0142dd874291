"""Quadrature settings for the numerical oracle."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, field_validator


class QuadratureConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    nodes_per_axis: int = Field(default=40, ge=8, le=128)
    theta_nodes_per_axis: int = Field(default=8, ge=2, le=16)  # 6-D grid, q^6 points
    richardson_eps: tuple[float, float] = (1e-3, 5e-4)

    @field_validator("richardson_eps")
    @classmethod
    def check_eps(cls, v):
        e1, e2 = v
        if not (0 < e2 < e1 <= 0.1):
            raise ValueError("richardson_eps must satisfy 0 < eps2 < eps1 <= 0.1")
        return v
