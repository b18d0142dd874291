"""Species and mixture models: shared by every computation."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict


class Species(BaseModel):
    """One monatomic species of the mixture."""

    model_config = ConfigDict(frozen=True)

    name: str
    mass: float  # nondimensional by default


class MixtureSpec(BaseModel):
    """Ordered species list plus the thermodynamic constants of the mixture.

    Species order is fixed here; every matrix in the package is indexed by it.
    Invariants (I >= 2, positive masses, unique names, T, k, c > 0) are checked
    by ``app.mixture.validate_mixture``.
    """

    model_config = ConfigDict(frozen=True)

    species: tuple[Species, ...]
    temperature: float
    boltzmann_k: float = 1.0
    total_concentration: float = 1.0

    @property
    def n_species(self) -> int:
        return len(self.species)

    @property
    def masses(self) -> tuple[float, ...]:
        return tuple(s.mass for s in self.species)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.species)

    @property
    def kT(self) -> float:
        return self.boltzmann_k * self.temperature
