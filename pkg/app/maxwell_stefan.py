"""1-D finite-volume solver for the Maxwell-Stefan system.

Cell-centered concentrations, face-centered fluxes. At every face the fluxes
solve the Maxwell-Stefan relations

    -c grad(n_i) = (1/c) sum_{j != i} (c_j F_i - c_i F_j) / D_ij,   i = 1..I-1

with the last relation replaced by the equimolar closure sum_i F_i = 0.
"""

import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from app.coefficients import DiffusionMatrix
from app.models.solver import Grid1D

if TYPE_CHECKING:
    from app.moments import MomentState

logger = logging.getLogger(__name__)

NEGATIVE_TOL = 1e-12
STABILITY_FACTOR = 0.25


@dataclass(frozen=True)
class MixtureState:
    """c_i at cell centers (I x n_cells) and F_i at faces (I x n_cells+1)."""

    concentrations: np.ndarray
    fluxes: np.ndarray


@dataclass(frozen=True)
class Snapshot:
    step: int
    time: float
    state: "MixtureState | MomentState"


# ---------------------------------------------------------------------------
# Flux inversion
# ---------------------------------------------------------------------------

def _inverse_d(D: DiffusionMatrix) -> np.ndarray:
    return 1.0 / D.as_array(diagonal=np.inf)


def _flux_systems(c_face: np.ndarray, grad_c: np.ndarray, d_inv: np.ndarray, c_total: float):
    """Stacked (n_faces, I, I) matrices and (n_faces, I) right-hand sides."""
    n_species, n_faces = c_face.shape
    cf = c_face.T  # (n_faces, I)
    a = -(cf[:, :, None] * d_inv[None, :, :]) / c_total
    diag = (cf @ d_inv.T) / c_total  # sum_j c_j / D_ij
    idx = np.arange(n_species)
    a[:, idx, idx] = diag
    a[:, -1, :] = 1.0
    rhs = -grad_c.T.copy()
    rhs[:, -1] = 0.0
    return a, rhs


def _solve_stacked(a: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.solve(a, rhs[..., None])[..., 0]
    except np.linalg.LinAlgError:
        cond = float(np.max(np.linalg.cond(a)))
        raise np.linalg.LinAlgError(
            f"Singular Maxwell-Stefan flux system (condition estimate {cond:.3e})"
        ) from None


def solve_fluxes(c_at_face, grad_c, D: DiffusionMatrix, c_total: float) -> np.ndarray:
    """Fluxes at one face from face concentrations and gradients."""
    c_at_face = np.asarray(c_at_face, dtype=float)
    grad_c = np.asarray(grad_c, dtype=float)
    if np.any(c_at_face < 0):
        raise ValueError("Face concentrations must be nonnegative")
    a, rhs = _flux_systems(c_at_face[:, None], grad_c[:, None], _inverse_d(D), c_total)
    return _solve_stacked(a, rhs)[0]


def face_fluxes(c: np.ndarray, grid: Grid1D, D: DiffusionMatrix, c_total: float) -> np.ndarray:
    """Fluxes at all n_cells + 1 faces; face k is the left face of cell k."""
    n_species, n = c.shape
    fluxes = np.zeros((n_species, n + 1))
    if grid.boundary == "periodic":
        left, right = c, np.roll(c, -1, axis=1)
    else:
        left, right = c[:, :-1], c[:, 1:]
    a, rhs = _flux_systems(0.5 * (left + right), (right - left) / grid.dx, _inverse_d(D), c_total)
    interior = _solve_stacked(a, rhs).T
    if grid.boundary == "periodic":
        fluxes[:, 1:] = interior
        fluxes[:, 0] = fluxes[:, n]
    else:
        fluxes[:, 1:n] = interior
    return fluxes


# ---------------------------------------------------------------------------
# Time stepping
# ---------------------------------------------------------------------------

def stable_dt(grid: Grid1D, D: DiffusionMatrix) -> float:
    return STABILITY_FACTOR * grid.dx**2 / D.max_value()


def make_state(c: np.ndarray, grid: Grid1D, D: DiffusionMatrix, c_total: float) -> MixtureState:
    c = np.array(c, dtype=float)
    return MixtureState(concentrations=c, fluxes=face_fluxes(c, grid, D, c_total))


def clamp_negative(c: np.ndarray, what: str = "concentration") -> np.ndarray:
    """Zero out roundoff-level negatives (mass-neutral per cell), abort on larger ones."""
    low = float(np.min(c))
    if low >= 0:
        return c
    if low < -NEGATIVE_TOL:
        raise ValueError(f"Negative {what} {low:.3e} after update: unstable step")
    cells = np.any(c < 0, axis=0)
    before = c[:, cells].sum(axis=0)
    fixed = np.maximum(c[:, cells], 0.0)
    c = c.copy()
    c[:, cells] = fixed * (before / fixed.sum(axis=0))
    logger.warning("Clamped roundoff-level negative %s in %d cells", what, int(cells.sum()))
    return c


def step(state: MixtureState, grid: Grid1D, D: DiffusionMatrix, dt: float, c_total: float = 1.0) -> MixtureState:
    """One explicit Euler finite-volume update of the continuity equations."""
    bound = stable_dt(grid, D)
    if dt > bound * (1.0 + 1e-12):
        raise ValueError(f"dt={dt:.3e} exceeds the stability bound {bound:.3e}")
    f = state.fluxes
    c_new = state.concentrations - (dt / grid.dx) * (f[:, 1:] - f[:, :-1])
    c_new = clamp_negative(c_new)
    return make_state(c_new, grid, D, c_total)


def _step_plan(t_end: float, dt: float) -> tuple[int, float]:
    """Number of steps and the uniform dt (<= requested) that lands on t_end."""
    if t_end == 0:
        return 0, dt
    n_steps = max(1, math.ceil(t_end / dt - 1e-9))
    return n_steps, t_end / n_steps


def run(
    initial: MixtureState,
    grid: Grid1D,
    D: DiffusionMatrix,
    t_end: float,
    dt: float,
    output_every: int = 0,
    c_total: float = 1.0,
) -> list[Snapshot]:
    """Advance to t_end; snapshots at t=0, every output_every steps and at t_end."""
    if t_end < 0 or not dt > 0:
        raise ValueError("t_end must be >= 0 and dt > 0")
    n_steps, dt = _step_plan(t_end, dt)
    trajectory = [Snapshot(step=0, time=0.0, state=initial)]
    state = initial
    for k in range(1, n_steps + 1):
        state = step(state, grid, D, dt, c_total)
        if k == n_steps or (output_every and k % output_every == 0):
            trajectory.append(Snapshot(step=k, time=k * dt, state=state))
    logger.info("Maxwell-Stefan run: %d steps, dt=%.3e, %d snapshots", n_steps, dt, len(trajectory))
    return trajectory


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------

def species_mass(c: np.ndarray, grid: Grid1D) -> np.ndarray:
    return c.sum(axis=1) * grid.dx


def l2_error(a, b, dx: float) -> float:
    """Discrete L2 norm sqrt(dx sum (a - b)^2), summed over every entry."""
    d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    return math.sqrt(dx * float(np.sum(d * d)))


def analytic_binary_decay(x, t, mean, amplitude, wavenumber, D, length=1.0, x_min=0.0):
    """Periodic two-species solution c_1 = mean + A sin(k x) exp(-D k^2 t)."""
    k = 2.0 * math.pi * wavenumber / length
    return mean + amplitude * np.sin(k * (np.asarray(x) - x_min)) * math.exp(-D * k * k * t)
