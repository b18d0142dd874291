"""Friction coefficients Delta~_ij and binary diffusion coefficients D_ij.

Delta~_ij = a_0 2 pi m_i m_j ||b|| / ((m_i + m_j) kT) + a_1 10 pi ||b||
          + sum_{n >= 2} a_n (2 pi ||b|| / kT) (m_i m_j / (m_i + m_j)) S_n

with S_n the multinomial/binomial enumeration of centered Gaussian moments of
|v - v*|^(2n), and D_ij = 1 / (c Delta~_ij).
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from app.collision import angular_l1_norm
from app.gaussian import INT64_MAX, double_factorial_product
from app.mixture import reduced_mass
from app.models.kernels import AnalyticKineticKernel, AngularKernelSet
from app.models.mixture import MixtureSpec

logger = logging.getLogger(__name__)

DEFAULT_MAX_ORDER = 30


# ---------------------------------------------------------------------------
# Enumeration machinery
# ---------------------------------------------------------------------------

def compositions3(n: int, max_order: int = DEFAULT_MAX_ORDER) -> list[tuple[int, int, int]]:
    """All (n1, n2, n3) >= 0 with n1 + n2 + n3 = n, in lexicographic order."""
    if n < 0:
        raise ValueError(f"n must be nonnegative (got {n})")
    if n > max_order:
        raise ValueError(f"n={n} exceeds the configured maximum order {max_order}")
    return [
        (n1, n2, n - n1 - n2)
        for n1 in range(n + 1)
        for n2 in range(n - n1 + 1)
    ]


def even_splits(two_nr: int) -> list[tuple[int, int]]:
    """Even pairs (alpha, beta) with alpha + beta = two_nr, zeros included."""
    if two_nr < 0 or two_nr % 2:
        raise ValueError(f"Expected an even nonnegative integer (got {two_nr})")
    return [(alpha, two_nr - alpha) for alpha in range(0, two_nr + 1, 2)]


def _log_odd_double_factorial(x: int) -> float:
    # (x-1)!! = x! / (2^(x/2) (x/2)!) for even x
    return float(gammaln(x + 1) - (x // 2) * math.log(2.0) - gammaln(x // 2 + 1))


def _term(coef: int, e, p_i: int, p_j: int, ratio_i: float, ratio_j: float) -> float:
    try:
        coef *= double_factorial_product(e)
    except OverflowError:
        coef = None
    if coef is not None and coef <= INT64_MAX:
        return float(coef) * ratio_i**p_i * ratio_j**p_j
    # log-domain fallback above the 64-bit integer range
    log_value = math.log(_multinomial_binomials(e)) + sum(_log_odd_double_factorial(x) for x in e)
    return math.exp(log_value + p_i * math.log(ratio_i) + p_j * math.log(ratio_j))


def _multinomial_binomials(e) -> int:
    alpha, beta, gamma, delta, rho, eta = e
    n1, n2, n3 = (alpha + beta) // 2, (gamma + delta) // 2, (rho + eta) // 2
    f = math.factorial
    return (
        f(n1 + n2 + n3) // (f(n1) * f(n2) * f(n3))
        * math.comb(2 * n1, alpha)
        * math.comb(2 * n2, gamma)
        * math.comb(2 * n3, rho)
    )


def sn_sum(n: int, m_i: float, m_j: float, kT: float, max_order: int = DEFAULT_MAX_ORDER) -> float:
    """Bracketed sum S_n of the n-th kernel term, summed in a fixed order."""
    if n < 1:
        raise ValueError(f"S_n is defined for n >= 1 (got {n})")
    ratio_i, ratio_j = kT / m_i, kT / m_j
    total = 0.0
    for n1, n2, n3 in compositions3(n, max_order):
        for alpha, beta in even_splits(2 * n1):
            for gamma, delta in even_splits(2 * n2):
                for rho, eta in even_splits(2 * n3):
                    e = (alpha, beta, gamma, delta, rho, eta)
                    total += _term(
                        _multinomial_binomials(e),
                        e,
                        (alpha + gamma + rho) // 2,
                        (beta + delta + eta) // 2,
                        ratio_i,
                        ratio_j,
                    )
    return total


# ---------------------------------------------------------------------------
# Friction coefficients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DeltaMatrix:
    """Symmetric Delta~_ij, one stored value per unordered pair."""

    n_species: int
    values: dict[tuple[int, int], float]
    truncation: int = 0
    kT: float = 1.0
    masses: tuple[float, ...] = ()

    def get(self, i: int, j: int) -> float:
        if i == j:
            raise ValueError("Delta~ is defined for i != j only")
        return self.values[(min(i, j), max(i, j))]

    def as_array(self, diagonal: float = np.nan) -> np.ndarray:
        out = np.full((self.n_species, self.n_species), diagonal)
        for (i, j), value in self.values.items():
            out[i, j] = out[j, i] = value
        return out


@dataclass(frozen=True)
class DiffusionMatrix:
    """Symmetric binary diffusion coefficients D_ij > 0."""

    n_species: int
    values: dict[tuple[int, int], float]
    metadata: dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_pairs(cls, n_species: int, pairs: dict[tuple[int, int], float]) -> "DiffusionMatrix":
        values = {(min(i, j), max(i, j)): float(v) for (i, j), v in pairs.items()}
        expected = {(i, j) for i in range(n_species) for j in range(i + 1, n_species)}
        if set(values) != expected:
            raise ValueError(f"Need exactly one D_ij per pair {sorted(expected)}")
        for pair, v in values.items():
            if not v > 0:
                raise ValueError(f"D{pair} must be positive (got {v})")
        return cls(n_species=n_species, values=values)

    def get(self, i: int, j: int) -> float:
        if i == j:
            raise ValueError("D is defined for i != j only")
        return self.values[(min(i, j), max(i, j))]

    def as_array(self, diagonal: float = np.nan) -> np.ndarray:
        out = np.full((self.n_species, self.n_species), diagonal)
        for (i, j), value in self.values.items():
            out[i, j] = out[j, i] = value
        return out

    def max_value(self) -> float:
        return max(self.values.values())


def series_terms(
    spec: MixtureSpec,
    kernel: AnalyticKineticKernel,
    b_l1: float,
    i: int,
    j: int,
    max_order: int = DEFAULT_MAX_ORDER,
) -> list[tuple[int, float]]:
    """Per-order contributions (n, term_n) to Delta~_ij, zero coefficients skipped."""
    if i == j:
        raise ValueError(f"Delta~ needs two distinct species (got i = j = {i})")
    # canonical order makes (i, j) and (j, i) bit-identical
    p, q = min(i, j), max(i, j)
    m_p, m_q = spec.masses[p], spec.masses[q]
    kT = spec.kT
    mu = reduced_mass(m_p, m_q)
    terms = []
    for n, a in enumerate(kernel.coefficients):
        if a == 0:
            continue
        if n == 0:
            value = a * 2.0 * math.pi * mu * b_l1 / kT
        elif n == 1:
            value = a * 10.0 * math.pi * b_l1
        else:
            value = a * (2.0 * math.pi * b_l1 / kT) * mu * sn_sum(n, m_p, m_q, kT, max_order)
        terms.append((n, value))
    return terms


def delta_tilde(
    spec: MixtureSpec,
    kernel: AnalyticKineticKernel,
    b_l1: float,
    i: int,
    j: int,
    max_order: int = DEFAULT_MAX_ORDER,
) -> float:
    """Closed-form Delta~_ij truncated at the kernel's order N."""
    total = 0.0
    for _, value in series_terms(spec, kernel, b_l1, i, j, max_order):
        total += value
    return total


def delta_plain(delta_tilde_value: float, m_i: float, kT: float) -> float:
    """Delta_ij = kT Delta~_ij / m_i."""
    return kT * delta_tilde_value / m_i


def delta_tilde_matrix(
    spec: MixtureSpec,
    kernel: AnalyticKineticKernel,
    angular_set: AngularKernelSet,
    max_order: int = DEFAULT_MAX_ORDER,
) -> DeltaMatrix:
    values = {}
    for i in range(spec.n_species):
        for j in range(i + 1, spec.n_species):
            b_l1 = angular_l1_norm(angular_set.get(i, j))
            values[(i, j)] = delta_tilde(spec, kernel, b_l1, i, j, max_order)
            logger.debug("Delta~[%s,%s] = %.17g", spec.names[i], spec.names[j], values[(i, j)])
    return DeltaMatrix(
        n_species=spec.n_species,
        values=values,
        truncation=kernel.truncation_order,
        kT=spec.kT,
        masses=spec.masses,
    )


def delta_plain_matrix(delta: DeltaMatrix, spec: MixtureSpec) -> np.ndarray:
    """I x I matrix of Delta_ij = kT Delta~_ij / m_i (zero diagonal, not symmetric)."""
    out = np.zeros((delta.n_species, delta.n_species))
    for i in range(delta.n_species):
        for j in range(delta.n_species):
            if i != j:
                out[i, j] = delta_plain(delta.get(i, j), spec.masses[i], spec.kT)
    return out


def diffusion_from_delta(delta: DeltaMatrix, c_total: float) -> DiffusionMatrix:
    values = {}
    for pair, value in delta.values.items():
        if not value > 0:
            raise ValueError(f"Nonpositive Delta~ for pair {pair} ({value}): unphysical kernel")
        values[pair] = 1.0 / (c_total * value)
    return DiffusionMatrix(n_species=delta.n_species, values=values)


def diffusion_matrix(
    spec: MixtureSpec,
    kernel: AnalyticKineticKernel,
    angular_set: AngularKernelSet,
    max_order: int = DEFAULT_MAX_ORDER,
) -> DiffusionMatrix:
    """D_ij = 1 / (c Delta~_ij) for every unordered pair."""
    delta = delta_tilde_matrix(spec, kernel, angular_set, max_order)
    dm = diffusion_from_delta(delta, spec.total_concentration)
    logger.info("Diffusion matrix assembled for %d species", spec.n_species)
    return dm
