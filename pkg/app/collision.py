"""Collision kinematics and factorized cross sections B_ij = Phi(|v - v*|) b_ij(cos theta)."""

import logging
from collections.abc import Callable

import numpy as np
import pandas as pd
from numpy.polynomial import Chebyshev, Polynomial
from scipy.integrate import simpson

from app.models.kernels import AnalyticKineticKernel, AngularKernel, HardSphereFit

logger = logging.getLogger(__name__)

UNIT_TOL = 1e-12
EVENNESS_TOL = 1e-12
PHI_CHECK_POINTS = 1001


# ---------------------------------------------------------------------------
# Kinematics
# ---------------------------------------------------------------------------

def post_collision_velocities(v, v_star, m_i, m_j, sigma):
    """Velocities after an elastic i-j collision with scattering direction sigma.

    Broadcasts over leading axes: v, v_star, sigma have shape (..., 3) and the
    masses are scalars or shape (...,).
    """
    v = np.asarray(v, dtype=float)
    v_star = np.asarray(v_star, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    if np.any(np.abs(np.linalg.norm(sigma, axis=-1) - 1.0) > UNIT_TOL):
        raise ValueError("sigma must be a unit vector")
    m_i = np.asarray(m_i, dtype=float)[..., None]
    m_j = np.asarray(m_j, dtype=float)[..., None]

    g = np.linalg.norm(v - v_star, axis=-1, keepdims=True)
    total = m_i + m_j
    momentum = m_i * v + m_j * v_star
    v_prime = (momentum + m_j * g * sigma) / total
    v_star_prime = (momentum - m_i * g * sigma) / total
    return v_prime, v_star_prime


def relative_speed_cosine(v, v_star, sigma) -> float:
    """cos(theta) = (v - v*) . sigma / |v - v*|."""
    w = np.asarray(v, dtype=float) - np.asarray(v_star, dtype=float)
    g = float(np.linalg.norm(w))
    if g == 0.0:
        raise ValueError("Coincident velocities: deviation angle undefined")
    return float(np.clip(np.dot(w, sigma) / g, -1.0, 1.0))


# ---------------------------------------------------------------------------
# Kinetic kernel Phi
# ---------------------------------------------------------------------------

def eval_phi(kernel: AnalyticKineticKernel, r):
    """Phi(r) = sum_n a_n r^(2n), Horner's scheme in r^2."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("Phi is evaluated at nonnegative relative speeds only")
    s = r * r
    acc = np.zeros_like(s)
    for a in reversed(kernel.coefficients):
        acc = acc * s + a
    return acc if acc.ndim else float(acc)


def validate_kernel(kernel: AnalyticKineticKernel) -> AnalyticKineticKernel:
    """Reject kernels that are not finite or go negative on [0, r_max]."""
    coeffs = np.asarray(kernel.coefficients, dtype=float)
    if not np.all(np.isfinite(coeffs)):
        raise ValueError("Kernel coefficients must be finite")
    if not kernel.r_max > 0:
        raise ValueError(f"Kernel r_max must be positive (got {kernel.r_max})")
    r = np.linspace(0.0, kernel.r_max, PHI_CHECK_POINTS)
    phi = eval_phi(kernel, r)
    if np.any(phi < 0):
        k = int(np.argmin(phi))
        raise ValueError(f"Phi is negative at r={r[k]:.6g} (value {phi[k]:.6g})")
    return kernel


def fit_hard_sphere(r_max: float, degree: int, n_samples: int = 4001) -> HardSphereFit:
    """Least-squares even polynomial approximation of Phi(r) = r on [0, r_max].

    The fit runs in s = (r / r_max)^2 with a Chebyshev basis and is converted
    to power-series coefficients afterwards.
    """
    if not r_max > 0 or degree < 0:
        raise ValueError("Hard-sphere fit needs r_max > 0 and degree >= 0")
    r = np.linspace(0.0, r_max, n_samples)
    t = r / r_max
    series = Chebyshev.fit(t * t, t, deg=degree, domain=[0.0, 1.0])
    power = series.convert(kind=Polynomial).coef
    power = np.pad(power, (0, degree + 1 - len(power)))
    coefficients = [float(r_max * b / r_max ** (2 * n)) for n, b in enumerate(power)]
    low = float(np.min(eval_phi(AnalyticKineticKernel(coefficients=tuple(coefficients), r_max=r_max), r)))
    if low < 0:
        # lift so that Phi >= 0 on the grid
        coefficients[0] += -low + 1e-12 * r_max
        logger.debug("Hard-sphere fit lifted by %.3e to stay nonnegative", -low)
    kernel = validate_kernel(AnalyticKineticKernel(coefficients=tuple(coefficients), r_max=r_max))
    max_err = float(np.max(np.abs(eval_phi(kernel, r) - r)))
    logger.info("Hard-sphere fit: r_max=%g degree=%d max_abs_error=%.3e", r_max, degree, max_err)
    return HardSphereFit(
        kernel=kernel, r_max=r_max, degree=degree, n_samples=n_samples, max_abs_error=max_err
    )


# ---------------------------------------------------------------------------
# Angular kernels b(eta)
# ---------------------------------------------------------------------------

def angular_grid(n_nodes: int) -> np.ndarray:
    return np.linspace(-1.0, 1.0, n_nodes)


def constant_angular_kernel(value: float) -> AngularKernel:
    return validate_angular(AngularKernel(constant=value))


def tabulate_angular_kernel(func: Callable, n_nodes: int = 33) -> AngularKernel:
    eta = angular_grid(n_nodes)
    samples = np.asarray(func(eta), dtype=float) * np.ones_like(eta)
    return validate_angular(AngularKernel(samples=tuple(float(b) for b in samples)))


def load_angular_csv(path) -> AngularKernel:
    """Read a two-column table (header eta,b) on a uniform grid of [-1, 1]."""
    df = pd.read_csv(path, comment="#", float_precision="round_trip")
    if list(df.columns[:2]) != ["eta", "b"]:
        raise ValueError(f"{path}: expected header 'eta,b' (got {list(df.columns)})")
    eta = df["eta"].to_numpy(dtype=float)
    expected = angular_grid(len(eta))
    if len(eta) < 3 or np.max(np.abs(eta - expected)) > 1e-12:
        raise ValueError(f"{path}: eta must be a uniform grid of [-1, 1] with >= 3 nodes")
    return validate_angular(AngularKernel(samples=tuple(df["b"].astype(float))))


def validate_angular(b: AngularKernel) -> AngularKernel:
    given = [x for x in (b.constant, b.samples, b.l1_norm) if x is not None]
    if len(given) != 1:
        raise ValueError("Angular kernel needs exactly one of constant, samples, l1_norm")
    if b.constant is not None and b.constant < 0:
        raise ValueError(f"Angular kernel constant must be nonnegative (got {b.constant})")
    if b.l1_norm is not None and b.l1_norm < 0:
        raise ValueError(f"Angular L1 norm must be nonnegative (got {b.l1_norm})")
    if b.samples is not None:
        samples = np.asarray(b.samples, dtype=float)
        if len(samples) < 3 or len(samples) % 2 == 0:
            raise ValueError("Angular table needs an odd number (>= 3) of nodes")
        if np.any(samples < 0):
            raise ValueError("Angular table has negative values")
        asym = float(np.max(np.abs(samples - samples[::-1])))
        if asym > EVENNESS_TOL:
            raise ValueError(f"Angular kernel is not even (max asymmetry {asym:.3e})")
    return b


def angular_l1_norm(b: AngularKernel) -> float:
    """||b||_L1 over [-1, 1]; exact for constants, composite Simpson for tables."""
    if b.l1_norm is not None:
        return float(b.l1_norm)
    if b.constant is not None:
        return 2.0 * abs(b.constant)
    samples = np.abs(np.asarray(b.samples, dtype=float))
    # folded table is identical for b and its reflection
    folded = samples + samples[::-1]
    return float(simpson(folded, x=angular_grid(len(samples)))) / 2.0


def angular_value(b: AngularKernel, eta):
    if b.constant is not None:
        return b.constant * np.ones_like(np.asarray(eta, dtype=float))
    if b.samples is None:
        raise ValueError("Angular kernel given only by its L1 norm cannot be evaluated")
    return np.interp(eta, angular_grid(len(b.samples)), np.asarray(b.samples, dtype=float))


def cross_section_eval(kernel: AnalyticKineticKernel, b: AngularKernel, v, v_star, sigma) -> float:
    """B(v, v*, sigma) = Phi(|v - v*|) b(cos theta)."""
    cos_theta = relative_speed_cosine(v, v_star, sigma)
    g = float(np.linalg.norm(np.asarray(v, dtype=float) - np.asarray(v_star, dtype=float)))
    return float(eval_phi(kernel, g) * angular_value(b, cos_theta))
