import json
import math

import pytest

from app.collision import constant_angular_kernel
from app.coefficients import DiffusionMatrix
from app.models import AngularKernelSet, MixtureSpec, Species


def make_spec(masses, temperature=1.0, c_total=1.0, names=None):
    names = names or [chr(ord("A") + i) for i in range(len(masses))]
    return MixtureSpec(
        species=tuple(Species(name=n, mass=m) for n, m in zip(names, masses)),
        temperature=temperature,
        total_concentration=c_total,
    )


def unit_angular_set(n_species, value=0.5):
    """Constant b on every pair; 0.5 gives ||b||_L1 = 1."""
    b = constant_angular_kernel(value)
    return AngularKernelSet(
        n_species=n_species,
        kernels={(i, j): b for i in range(n_species) for j in range(i + 1, n_species)},
    )


@pytest.fixture
def binary_spec():
    return make_spec([1.0, 1.0])


@pytest.fixture
def binary_d():
    return DiffusionMatrix.from_pairs(2, {(0, 1): 1.0 / math.pi})


def binary_config(**overrides):
    """Two unit-mass species with D_12 = 1/pi and the sine benchmark profile."""
    cfg = {
        "mixture": {
            "species": [{"name": "A", "mass": 1.0}, {"name": "B", "mass": 1.0}],
            "temperature": 1.0,
        },
        "kernel": {"coefficients": [1.0]},
        "angular": {"A-B": {"constant": 0.5}},
        "solver": {
            "grid": {"n_cells": 32},
            "t_end": 0.01,
            "profiles": {
                "A": [{"kind": "constant", "value": 0.5}, {"kind": "sine", "amplitude": 0.25}],
                "B": [{"kind": "constant", "value": 0.5}, {"kind": "sine", "amplitude": -0.25}],
            },
        },
    }
    for section, value in overrides.items():
        if isinstance(value, dict) and isinstance(cfg.get(section), dict):
            cfg[section] = {**cfg[section], **value}
        else:
            cfg[section] = value
    return cfg


@pytest.fixture
def write_config(tmp_path):
    def _write(data, name="run.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data, indent=2))
        return str(path)
    return _write
