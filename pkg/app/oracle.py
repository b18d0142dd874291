"""Brute-force quadrature oracle for the closed-form moments and coefficients.

Everything here is evaluated by tensor-product Gauss-Hermite quadrature, which
is exact (up to roundoff) for polynomial integrands within its degree bound.
"""

import logging
import math

import numpy as np
import pandas as pd
from numpy.polynomial.hermite_e import hermegauss
from scipy.integrate import simpson

from app.coefficients import DEFAULT_MAX_ORDER, series_terms, sn_sum
from app.collision import angular_grid, angular_l1_norm, angular_value, eval_phi
from app.mixture import reduced_mass
from app.models.kernels import AnalyticKineticKernel, AngularKernel, AngularKernelSet
from app.models.mixture import MixtureSpec
from app.models.quadrature import QuadratureConfig

logger = logging.getLogger(__name__)

REPORT_FLAG_TOL = 1e-4


def _probabilist_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights integrating against the standard normal density."""
    z, w = hermegauss(n)
    return z, w / math.sqrt(2.0 * math.pi)


# ---------------------------------------------------------------------------
# Moments and densities
# ---------------------------------------------------------------------------

def gh_moment_3d(mass: float, kT: float, e, q: QuadratureConfig = QuadratureConfig()) -> float:
    """Normalized Maxwellian moment of v1^a v2^b v3^g on a 3-D tensor grid."""
    n = q.nodes_per_axis
    if sum(e) > 2 * n - 2:
        raise ValueError(f"Total degree {sum(e)} exceeds the bound {2 * n - 2} for {n} nodes")
    z, w = _probabilist_nodes(n)
    x = math.sqrt(kT / mass) * z
    x1, x2, x3 = np.meshgrid(x, x, x, indexing="ij")
    w1, w2, w3 = np.meshgrid(w, w, w, indexing="ij")
    return float(np.sum(w1 * w2 * w3 * x1 ** e[0] * x2 ** e[1] * x3 ** e[2]))


def maxwellian_density(c: float, u, mass: float, kT: float, v):
    """c (m / 2 pi kT)^(3/2) exp(-m |v - u|^2 / 2kT), broadcasting over v (..., 3)."""
    if c < 0:
        raise ValueError(f"Concentration must be nonnegative (got {c})")
    d = np.asarray(v, dtype=float) - np.asarray(u, dtype=float)
    norm = (mass / (2.0 * math.pi * kT)) ** 1.5
    return c * norm * np.exp(-mass * np.sum(d * d, axis=-1) / (2.0 * kT))


def angular_sigma_moment(b: AngularKernel, n_phi: int = 64) -> np.ndarray:
    """Integral over the sphere of b(omega . sigma) sigma, in the frame where omega = e3.

    The transverse components carry a full period of cos/sin in phi; the
    longitudinal one is 2 pi times the first moment of b over [-1, 1].
    """
    eta = angular_grid(len(b.samples) if b.is_tabulated else 33)
    values = angular_value(b, eta)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    dphi = 2.0 * math.pi / n_phi
    transverse = float(simpson(values * np.sqrt(1.0 - eta * eta), x=eta))
    return np.array([
        transverse * float(np.sum(np.cos(phi)) * dphi),
        transverse * float(np.sum(np.sin(phi)) * dphi),
        2.0 * math.pi * float(simpson(values * eta, x=eta)),
    ])


# ---------------------------------------------------------------------------
# Momentum exchange Theta
# ---------------------------------------------------------------------------

def theta_oracle(
    spec: MixtureSpec,
    kernel: AnalyticKineticKernel,
    b_norm: float,
    i: int,
    j: int,
    eps: float,
    u_i,
    u_j,
    c_i: float,
    c_j: float,
    q: QuadratureConfig = QuadratureConfig(),
) -> np.ndarray:
    """Theta_i contribution of species j, integrated in 6-D velocity space.

    (1/eps) (2 pi m_j ||b|| / (m_i + m_j)) int int Phi(|v - v*|) f_i(v) f_j(v*) (v* - v)
    with shifted Maxwellians f_i, f_j (means eps u_i, eps u_j). The tensor grid
    is centered at each species' shifted mean; outer-axis blocks are summed in
    node order.
    """
    if not 0 < eps <= 0.1:
        raise ValueError(f"eps must lie in (0, 0.1] (got {eps})")
    nq = q.theta_nodes_per_axis
    degree = 2 * kernel.truncation_order + 1
    if degree > 2 * nq - 1:
        raise ValueError(
            f"Kernel order {kernel.truncation_order} needs per-axis degree {degree}; "
            f"{nq} nodes are exact only up to {2 * nq - 1}"
        )
    m_i, m_j, kT = spec.masses[i], spec.masses[j], spec.kT
    z, w = _probabilist_nodes(nq)
    mean_i = eps * np.asarray(u_i, dtype=float)
    mean_j = eps * np.asarray(u_j, dtype=float)
    s_i, s_j = math.sqrt(kT / m_i), math.sqrt(kT / m_j)

    # axes of the 5-D block: v2, v3, v*1, v*2, v*3
    def axis(values, position):
        shape = [1] * 5
        shape[position] = nq
        return values.reshape(shape)

    v2 = axis(mean_i[1] + s_i * z, 0)
    v3 = axis(mean_i[2] + s_i * z, 1)
    vs1 = axis(mean_j[0] + s_j * z, 2)
    vs2 = axis(mean_j[1] + s_j * z, 3)
    vs3 = axis(mean_j[2] + s_j * z, 4)
    w_block = axis(w, 0) * axis(w, 1) * axis(w, 2) * axis(w, 3) * axis(w, 4)
    d2 = vs2 - v2
    d3 = vs3 - v3

    integral = np.zeros(3)
    for a in range(nq):
        v1 = mean_i[0] + s_i * z[a]
        d1 = vs1 - v1
        r2 = d1 * d1 + d2 * d2 + d3 * d3
        weight = w[a] * w_block * eval_phi(kernel, np.sqrt(r2))
        integral += np.array([
            np.sum(weight * d1),
            np.sum(weight * d2),
            np.sum(weight * d3),
        ])
    prefactor = 2.0 * math.pi * m_j * b_norm / (m_i + m_j)
    return prefactor * c_i * c_j * integral / eps


def delta_tilde_from_theta(
    spec: MixtureSpec,
    kernel: AnalyticKineticKernel,
    b_norm: float,
    i: int,
    j: int,
    u_i,
    u_j,
    c_i: float,
    c_j: float,
    q: QuadratureConfig = QuadratureConfig(),
) -> float:
    """Delta~_ij = (m_i / kT) Theta_l / (c_i c_j (u_j - u_i)_l), Richardson-extrapolated in eps."""
    du = np.asarray(u_j, dtype=float) - np.asarray(u_i, dtype=float)
    if not np.any(du != 0):
        raise ValueError("u_i and u_j coincide: no velocity-difference component to divide by")
    ell = int(np.argmax(np.abs(du)))
    eps1, eps2 = q.richardson_eps
    estimates = []
    for eps in (eps1, eps2):
        theta = theta_oracle(spec, kernel, b_norm, i, j, eps, u_i, u_j, c_i, c_j, q)
        estimates.append(spec.masses[i] / spec.kT * theta[ell] / (c_i * c_j * du[ell]))
    # remove the O(eps) remainder
    return (eps1 * estimates[1] - eps2 * estimates[0]) / (eps1 - eps2)


# ---------------------------------------------------------------------------
# Closed form vs oracle report
# ---------------------------------------------------------------------------

def _single_term(kernel: AnalyticKineticKernel, n: int) -> AnalyticKineticKernel:
    coeffs = [0.0] * (n + 1)
    coeffs[n] = kernel.coefficients[n]
    return AnalyticKineticKernel(coefficients=tuple(coeffs), r_max=kernel.r_max)


def oracle_report(
    spec: MixtureSpec,
    kernel: AnalyticKineticKernel,
    angular_set: AngularKernelSet,
    q: QuadratureConfig = QuadratureConfig(),
    max_order: int = DEFAULT_MAX_ORDER,
) -> pd.DataFrame:
    """One row per (pair, kernel term) plus a 'full' row per pair.

    ``closed_form`` is the generic series structure for every n >= 1 (so the a1
    row shows the n = 1 evaluation of the n >= 2 formula), ``printed`` is the
    value ``delta_tilde`` actually uses.
    """
    u_i, u_j = np.zeros(3), np.array([1.0, 0.0, 0.0])
    rows = []
    for i in range(spec.n_species):
        for j in range(i + 1, spec.n_species):
            pair = f"{spec.names[i]}-{spec.names[j]}"
            b_l1 = angular_l1_norm(angular_set.get(i, j))
            mu = reduced_mass(spec.masses[i], spec.masses[j])
            printed_terms = dict(series_terms(spec, kernel, b_l1, i, j, max_order))
            for n, printed in printed_terms.items():
                if n == 1:
                    a1 = kernel.coefficients[1]
                    closed = a1 * (2.0 * math.pi * b_l1 / spec.kT) * mu * sn_sum(
                        1, spec.masses[i], spec.masses[j], spec.kT, max_order
                    )
                else:
                    closed = printed
                oracle = delta_tilde_from_theta(
                    spec, _single_term(kernel, n), b_l1, i, j, u_i, u_j, 1.0, 1.0, q
                )
                rows.append(_report_row(pair, f"a{n}", closed, printed, oracle))
            total = sum(printed_terms.values())
            oracle = delta_tilde_from_theta(spec, kernel, b_l1, i, j, u_i, u_j, 1.0, 1.0, q)
            rows.append(_report_row(pair, "full", total, total, oracle))
    df = pd.DataFrame(rows, columns=["pair", "kernel", "closed_form", "printed", "oracle", "rel_diff", "flagged"])
    for row in df[df["flagged"]].itertuples():
        logger.warning(
            "Closed form and oracle disagree for %s/%s: %.6g vs %.6g (rel_diff %.3g)",
            row.pair, row.kernel, row.closed_form, row.oracle, row.rel_diff,
        )
    return df


def _report_row(pair, kernel, closed, printed, oracle):
    rel = abs(closed - oracle) / abs(oracle) if oracle != 0 else abs(closed)
    return {
        "pair": pair,
        "kernel": kernel,
        "closed_form": closed,
        "printed": printed,
        "oracle": oracle,
        "rel_diff": rel,
        "flagged": bool(rel > REPORT_FLAG_TOL),
    }
