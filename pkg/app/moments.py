"""Scaled kinetic moment system and its epsilon -> 0 diffusion limit.

Per species, in 1-D:

    d_t c_i + d_x q_i = 0                                   (mass)
    eps^2 [d_t q_i + d_x (q_i u_i)] + (kT/m_i) d_x c_i = Theta_i    (momentum)

with q_i = c_i u_i and Theta_i = sum_j Delta_ij c_i c_j (u_j - u_i). Friction
and pressure are taken implicitly in q, transport explicitly (local
Lax-Friedrichs). Mass is explicit, with face momenta from the same implicit
balance.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from app.coefficients import DiffusionMatrix, delta_plain_matrix, delta_tilde_matrix, diffusion_from_delta
from app.maxwell_stefan import Snapshot, clamp_negative, l2_error, make_state, run, stable_dt
from app.models.config import RunConfig
from app.models.solver import Grid1D
from app.profiles import build_profiles

logger = logging.getLogger(__name__)

DEFAULT_CFL = 0.5
SAFETY = 0.9


@dataclass(frozen=True)
class MomentState:
    """c_i and u_i at cell centers (I x n_cells each) for one epsilon."""

    concentrations: np.ndarray
    velocities: np.ndarray
    epsilon: float

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must lie in (0, 1) (got {self.epsilon})")
        if self.concentrations.shape != self.velocities.shape:
            raise ValueError("concentrations and velocities must have the same shape")

    @property
    def momenta(self) -> np.ndarray:
        return self.concentrations * self.velocities


def at_rest(c: np.ndarray, epsilon: float) -> MomentState:
    """Well-prepared initial data: u_i = 0 everywhere."""
    c = np.array(c, dtype=float)
    return MomentState(concentrations=c, velocities=np.zeros_like(c), epsilon=epsilon)


# ---------------------------------------------------------------------------
# Friction
# ---------------------------------------------------------------------------

def theta_eval(c, u, Delta) -> np.ndarray:
    """Theta_i = sum_{j != i} Delta_ij c_i c_j (u_j - u_i); c, u of shape (I,) or (I, n)."""
    c = np.asarray(c, dtype=float)
    u = np.asarray(u, dtype=float)
    Delta = np.array(Delta, dtype=float)
    np.fill_diagonal(Delta, 0.0)
    # pair brackets [i, j, ...]; u_j - u_i is formed first so equal drifts give exact zeros
    pairs = Delta.reshape(Delta.shape + (1,) * (c.ndim - 1)) * (c[:, None] * c[None, :])
    return np.sum(pairs * (u[None, :] - u[:, None]), axis=1)


def friction_momentum(state: MomentState, masses, Delta) -> np.ndarray:
    """sum_i m_i Theta_i per cell; vanishes for Delta built from a symmetric Delta~."""
    theta = theta_eval(state.concentrations, state.velocities, Delta)
    return np.asarray(masses, dtype=float) @ theta


def _friction_systems(c: np.ndarray, Delta: np.ndarray, shift: float) -> np.ndarray:
    """(n_cells, I, I) matrices shift * 1 + K with K q = -Theta(q) at frozen c."""
    n_species = c.shape[0]
    d = np.array(Delta, dtype=float)
    np.fill_diagonal(d, 0.0)
    ct = c.T
    a = -(ct[:, :, None] * d[None, :, :])
    idx = np.arange(n_species)
    a[:, idx, idx] = ct @ d.T + shift
    return a


# ---------------------------------------------------------------------------
# Spatial operators
# ---------------------------------------------------------------------------

def _padded(field: np.ndarray, grid: Grid1D, odd: bool = False) -> np.ndarray:
    """One ghost cell per side: periodic wrap, or mirror (negated for momenta)."""
    if grid.boundary == "periodic":
        return np.concatenate([field[:, -1:], field, field[:, :1]], axis=1)
    sign = -1.0 if odd else 1.0
    return np.concatenate([sign * field[:, :1], field, sign * field[:, -1:]], axis=1)


def centered_gradient(c: np.ndarray, grid: Grid1D) -> np.ndarray:
    p = _padded(c, grid)
    return (p[:, 2:] - p[:, :-2]) / (2.0 * grid.dx)


def _transport_divergence(q: np.ndarray, u: np.ndarray, grid: Grid1D) -> np.ndarray:
    """d_x (q u) with the local Lax-Friedrichs flux, wave speed 2|u|."""
    qp = _padded(q, grid, odd=True)
    up = _padded(u, grid, odd=True)
    f = qp * up
    speed = np.maximum(2.0 * np.abs(up[:, :-1]), 2.0 * np.abs(up[:, 1:]))
    face = 0.5 * (f[:, :-1] + f[:, 1:]) - 0.5 * speed * (qp[:, 1:] - qp[:, :-1])
    return (face[:, 1:] - face[:, :-1]) / grid.dx


def _face_values(field: np.ndarray, grid: Grid1D, odd: bool = False) -> np.ndarray:
    """Arithmetic means at the n_cells + 1 faces, ghost cells included."""
    p = _padded(field, grid, odd)
    return 0.5 * (p[:, :-1] + p[:, 1:])


def _face_gradient(c: np.ndarray, grid: Grid1D) -> np.ndarray:
    """Compact two-point gradient at the faces; zero on no-flux walls."""
    p = _padded(c, grid)
    return (p[:, 1:] - p[:, :-1]) / grid.dx


# ---------------------------------------------------------------------------
# Time stepping
# ---------------------------------------------------------------------------

def _acoustic_dt(epsilon: float, grid: Grid1D, masses, kT: float, cfl: float) -> float:
    return cfl * epsilon * grid.dx / math.sqrt(kT / min(masses))


def _advective_dt(u: np.ndarray, grid: Grid1D, cfl: float) -> float:
    u_max = float(np.max(np.abs(u))) if u.size else 0.0
    return math.inf if u_max == 0 else cfl * grid.dx / (2.0 * u_max)


def kinetic_stable_dt(
    state: MomentState, grid: Grid1D, D: DiffusionMatrix, masses, kT: float, cfl: float = DEFAULT_CFL
) -> float:
    return min(
        stable_dt(grid, D),
        _acoustic_dt(state.epsilon, grid, masses, kT, cfl),
        _advective_dt(state.velocities, grid, cfl),
    )


def _solve_friction(a: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve the stacked (k, I, I) systems for rhs of shape (I, k)."""
    try:
        return np.linalg.solve(a, rhs.T[..., None])[..., 0].T
    except np.linalg.LinAlgError:
        cond = float(np.max(np.linalg.cond(a)))
        raise np.linalg.LinAlgError(
            f"Singular implicit friction system (condition estimate {cond:.3e})"
        ) from None


def imex_step(state: MomentState, grid: Grid1D, masses, kT: float, Delta, dt: float) -> MomentState:
    """One IMEX step: implicit friction + pressure in q, explicit transport and mass.

    Cell momenta carry the state. The mass update uses face momenta from the
    same implicit balance, solved at the faces with the compact pressure
    gradient, so the eps -> 0 limit is the compact Maxwell-Stefan stencil.
    """
    eps = state.epsilon
    bound = min(
        _acoustic_dt(eps, grid, masses, kT, 1.0),
        _advective_dt(state.velocities, grid, 1.0),
    )
    if not 0 < dt <= bound:
        raise ValueError(f"dt={dt:.3e} violates the CFL bound {bound:.3e}")
    c = state.concentrations
    q = state.momenta
    eps2 = eps * eps
    kT_m = (kT / np.asarray(masses, dtype=float))[:, None]
    explicit = (eps2 / dt) * q - eps2 * _transport_divergence(q, state.velocities, grid)

    q_new = _solve_friction(
        _friction_systems(c, Delta, eps2 / dt), explicit - kT_m * centered_gradient(c, grid)
    )
    q_face = _solve_friction(
        _friction_systems(_face_values(c, grid), Delta, eps2 / dt),
        _face_values(explicit, grid, odd=True) - kT_m * _face_gradient(c, grid),
    )
    if grid.boundary == "no_flux":
        q_face[:, [0, -1]] = 0.0

    c_new = clamp_negative(c - (dt / grid.dx) * (q_face[:, 1:] - q_face[:, :-1]))
    u_new = np.divide(q_new, c_new, out=np.zeros_like(q_new), where=c_new > 0)
    return MomentState(concentrations=c_new, velocities=u_new, epsilon=eps)


def run_kinetic(
    initial: MomentState,
    grid: Grid1D,
    masses,
    kT: float,
    Delta,
    t_end: float,
    dt: float,
    output_every: int = 0,
) -> list[Snapshot]:
    """Advance the moment system to t_end with a uniform step no larger than dt."""
    if t_end < 0 or not dt > 0:
        raise ValueError("t_end must be >= 0 and dt > 0")
    n_steps = 0 if t_end == 0 else max(1, math.ceil(t_end / dt - 1e-9))
    if n_steps:
        dt = t_end / n_steps
    trajectory = [Snapshot(step=0, time=0.0, state=initial)]
    state = initial
    for k in range(1, n_steps + 1):
        state = imex_step(state, grid, masses, kT, Delta, dt)
        if k == n_steps or (output_every and k % output_every == 0):
            trajectory.append(Snapshot(step=k, time=k * dt, state=state))
    logger.info(
        "Kinetic run eps=%g: %d steps, dt=%.3e, %d snapshots",
        initial.epsilon, n_steps, dt, len(trajectory),
    )
    return trajectory


def momentum_residual(state: MomentState, grid: Grid1D, masses, kT: float, Delta) -> np.ndarray:
    """(kT/m_i) d_x c_i - Theta_i; O(eps^2) once the initial layer has relaxed."""
    pressure = (kT / np.asarray(masses, dtype=float))[:, None] * centered_gradient(state.concentrations, grid)
    return pressure - theta_eval(state.concentrations, state.velocities, Delta)


# ---------------------------------------------------------------------------
# Diffusion-limit sweep
# ---------------------------------------------------------------------------

def _coarse_samples(fine: np.ndarray, factor: int) -> np.ndarray:
    """Fine cells whose centers coincide with the coarse centers (odd factor)."""
    return fine[:, (factor - 1) // 2::factor]


def _ms_final(config: RunConfig, grid: Grid1D, D: DiffusionMatrix) -> np.ndarray:
    spec = config.mixture
    c0 = build_profiles(config.solver.profiles, grid, spec)
    dt = SAFETY * stable_dt(grid, D)
    initial = make_state(c0, grid, D, spec.total_concentration)
    final = run(initial, grid, D, config.solver.t_end, dt, 0, spec.total_concentration)[-1]
    return final.state.concentrations


def epsilon_sweep(config: RunConfig, eps_list=None) -> pd.DataFrame:
    """L2 error of the moment-system concentrations against the Maxwell-Stefan run.

    One row per epsilon (decreasing). The reference is one Maxwell-Stefan run on
    the grid refined by `reference_refinement`, sampled at the sweep cell centers.
    epsilon = 0 stands for the limit itself and reports that same run.
    """
    eps_list = list(config.sweep.eps if eps_list is None else eps_list)
    if not eps_list:
        raise ValueError("Empty epsilon list")
    if any(not 0 <= e < 1 for e in eps_list):
        raise ValueError(f"epsilon values must lie in [0, 1) (got {eps_list})")
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError(f"epsilon list must be strictly decreasing (got {eps_list})")

    spec = config.mixture
    grid = config.solver.grid
    factor = config.sweep.reference_refinement
    delta = delta_tilde_matrix(spec, config.kernel, config.angular, config.coefficients.max_composition_order)
    D = diffusion_from_delta(delta, spec.total_concentration)
    Delta = delta_plain_matrix(delta, spec)

    reference = _coarse_samples(_ms_final(config, grid.refined(factor), D), factor)
    c0 = build_profiles(config.solver.profiles, grid, spec)

    rows = []
    for eps in eps_list:
        if eps == 0:
            c_end = reference
            n_steps = None
        else:
            initial = at_rest(c0, eps)
            dt = SAFETY * kinetic_stable_dt(initial, grid, D, spec.masses, spec.kT)
            if config.solver.dt is not None:
                dt = min(dt, config.solver.dt)
            trajectory = run_kinetic(initial, grid, spec.masses, spec.kT, Delta, config.solver.t_end, dt)
            c_end = trajectory[-1].state.concentrations
            n_steps = trajectory[-1].step
        err = l2_error(c_end, reference, grid.dx)
        rows.append({"eps": eps, "l2_error": err, "n_steps": n_steps})
        logger.info("Sweep eps=%g: L2 error %.3e", eps, err)

    df = pd.DataFrame(rows)
    df["observed_order"] = _observed_orders(df["eps"].tolist(), df["l2_error"].tolist())
    return df[["eps", "l2_error", "observed_order", "n_steps"]]


def _observed_orders(eps: list[float], errors: list[float]) -> list[float]:
    """log(e_prev / e) / log(eps_prev / eps); NaN where undefined."""
    orders = [math.nan]
    for k in range(1, len(eps)):
        e0, e1 = errors[k - 1], errors[k]
        if eps[k] == 0 or e0 <= 0 or e1 <= 0:
            orders.append(math.nan)
        else:
            orders.append(math.log(e0 / e1) / math.log(eps[k - 1] / eps[k]))
    return orders
