"""Mixture validation and composition helpers."""

import logging

import numpy as np

from app.models.mixture import MixtureSpec

logger = logging.getLogger(__name__)


def validate_mixture(spec: MixtureSpec) -> MixtureSpec:
    """Return spec unchanged if every invariant holds, else raise ValueError.

    Checks run in a fixed order and the first violation is reported.
    """
    if spec.n_species < 2:
        raise ValueError(f"I >= 2 required (got {spec.n_species} species)")
    seen = set()
    for s in spec.species:
        if not s.mass > 0:
            raise ValueError(f"Species '{s.name}' has nonpositive mass {s.mass}")
        if s.name in seen:
            raise ValueError(f"Duplicate species name '{s.name}'")
        seen.add(s.name)
    if not spec.temperature > 0:
        raise ValueError(f"Temperature must be positive (got {spec.temperature})")
    if not spec.boltzmann_k > 0:
        raise ValueError(f"Boltzmann constant must be positive (got {spec.boltzmann_k})")
    if not spec.total_concentration > 0:
        raise ValueError(
            f"Total concentration must be positive (got {spec.total_concentration})"
        )
    return spec


def mole_fractions(c_values, c_total: float) -> np.ndarray:
    """n_i = c_i / c_total. Works on vectors and on (I, n_cells) fields."""
    if not c_total > 0:
        raise ValueError(f"c_total must be positive (got {c_total})")
    c = np.asarray(c_values, dtype=float)
    if np.any(c < 0):
        raise ValueError("Concentrations must be nonnegative")
    return c / c_total


def reduced_mass(m_i: float, m_j: float) -> float:
    return m_i * m_j / (m_i + m_j)


def species_index(spec: MixtureSpec, name: str) -> int:
    try:
        return spec.names.index(name)
    except ValueError:
        raise ValueError(f"Unknown species '{name}'") from None
