"""Pydantic v2 models for the Maxwell-Stefan diffusion-limit toolkit."""

from app.models.common import ErrorResponse
from app.models.config import (
    AngularEntry,
    CoefficientSection,
    HardSphereRequest,
    KernelSection,
    RawConfig,
    RunConfig,
    SolverSection,
    SweepSection,
)
from app.models.kernels import (
    AnalyticKineticKernel,
    AngularKernel,
    AngularKernelSet,
    HardSphereFit,
)
from app.models.mixture import MixtureSpec, Species
from app.models.quadrature import QuadratureConfig
from app.models.solver import (
    ConstantTerm,
    GaussianTerm,
    Grid1D,
    ProfileTerm,
    SineTerm,
)

__all__ = [
    # common
    "ErrorResponse",
    # config
    "AngularEntry",
    "CoefficientSection",
    "HardSphereRequest",
    "KernelSection",
    "RawConfig",
    "RunConfig",
    "SolverSection",
    "SweepSection",
    # kernels
    "AnalyticKineticKernel",
    "AngularKernel",
    "AngularKernelSet",
    "HardSphereFit",
    # mixture
    "MixtureSpec",
    "Species",
    # quadrature
    "QuadratureConfig",
    # solver
    "ConstantTerm",
    "GaussianTerm",
    "Grid1D",
    "ProfileTerm",
    "SineTerm",
]
