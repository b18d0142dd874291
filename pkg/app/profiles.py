"""Initial concentration profiles built from {constant, sine, gaussian} terms."""

import math

import numpy as np

from app.models.mixture import MixtureSpec
from app.models.solver import ConstantTerm, GaussianTerm, Grid1D, SineTerm

SUM_TOL = 1e-10


def eval_term(term, x: np.ndarray, grid: Grid1D) -> np.ndarray:
    if isinstance(term, ConstantTerm):
        return np.full_like(x, term.value)
    if isinstance(term, SineTerm):
        arg = 2.0 * math.pi * term.wavenumber * (x - grid.x_min) / grid.length + term.phase
        return term.amplitude * np.sin(arg)
    if isinstance(term, GaussianTerm):
        return term.height * np.exp(-0.5 * ((x - term.center) / term.width) ** 2)
    raise ValueError(f"Unknown profile term {term!r}")


def build_profiles(profiles: dict, grid: Grid1D, spec: MixtureSpec) -> np.ndarray:
    """I x n_cells concentrations at cell centers, checked to sum to c everywhere."""
    missing = [name for name in spec.names if name not in profiles]
    if missing:
        raise ValueError(f"No initial profile for species {missing}")
    x = grid.centers()
    c = np.zeros((spec.n_species, grid.n_cells))
    for i, name in enumerate(spec.names):
        for term in profiles[name]:
            c[i] += eval_term(term, x, grid)
    if np.any(c < 0):
        i, k = np.unravel_index(int(np.argmin(c)), c.shape)
        raise ValueError(f"Profile of '{spec.names[i]}' is negative at x={x[k]:.6g}")
    worst = float(np.max(np.abs(c.sum(axis=0) - spec.total_concentration)))
    if worst > SUM_TOL:
        raise ValueError(
            f"Profiles must sum to c={spec.total_concentration} in every cell "
            f"(max deviation {worst:.3e})"
        )
    return c
