"""Cross-section models: analytic kinetic kernel and angular kernels."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field


class AnalyticKineticKernel(BaseModel):
    """Truncated even power series Phi(r) = sum_n a_n r^(2n), n = 0..N."""

    model_config = ConfigDict(frozen=True)

    coefficients: tuple[float, ...] = Field(min_length=1)
    r_max: float = 10.0  # upper end of the nonnegativity check grid

    @property
    def truncation_order(self) -> int:
        return len(self.coefficients) - 1

    def label(self) -> str:
        return "phi[" + ",".join(f"{a:.17g}" for a in self.coefficients) + "]"


class AngularKernel(BaseModel):
    """Angular kernel b(eta), eta = cos(theta) in [-1, 1].

    Exactly one representation is set:
      - ``constant``: b(eta) = constant
      - ``samples``: values on a uniform grid of [-1, 1] (odd count, so eta = 0
        is a node)
      - ``l1_norm``: only the norm is known (enough for the coefficients,
        not for pointwise evaluation)
    """

    model_config = ConfigDict(frozen=True)

    constant: float | None = None
    samples: tuple[float, ...] | None = None
    l1_norm: float | None = None

    @property
    def is_tabulated(self) -> bool:
        return self.samples is not None


class AngularKernelSet(BaseModel):
    """Per-pair angular kernels, stored once per unordered pair (i < j)."""

    model_config = ConfigDict(frozen=True)

    n_species: int
    kernels: dict[tuple[int, int], AngularKernel]

    def get(self, i: int, j: int) -> AngularKernel:
        if i == j:
            raise ValueError(f"No angular kernel for the diagonal pair ({i}, {i})")
        key = (min(i, j), max(i, j))
        if key not in self.kernels:
            raise ValueError(f"No angular kernel for pair {key}")
        return self.kernels[key]


class HardSphereFit(BaseModel):
    """Result of fitting an even polynomial to the hard-sphere kernel |z|."""

    model_config = ConfigDict(frozen=True)

    kernel: AnalyticKineticKernel
    r_max: float
    degree: int
    n_samples: int
    max_abs_error: float
