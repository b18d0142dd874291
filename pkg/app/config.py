import json
import os

from pydantic import ValidationError

from app.collision import (
    constant_angular_kernel,
    fit_hard_sphere,
    load_angular_csv,
    validate_angular,
    validate_kernel,
)
from app.mixture import species_index, validate_mixture
from app.models.config import RawConfig, RunConfig
from app.models.kernels import AnalyticKineticKernel, AngularKernel, AngularKernelSet
from app.profiles import build_profiles

COMMENT_KEY = "_comment"

DEFAULT_CONFIG = {
    "mixture": {
        "boltzmann_k": 1.0,
        "total_concentration": 1.0,
    },
    "kernel": {"coefficients": [1.0]},
    "solver": {
        "grid": {"x_min": 0.0, "x_max": 1.0, "n_cells": 64, "boundary": "periodic"},
        "dt": None,  # None = 0.9 x stability bound
        "t_end": 0.05,
        "output_every": 0,
        "profiles": {},
    },
    "sweep": {"eps": [0.2, 0.1, 0.05], "reference_refinement": 3},
    "oracle": {"nodes_per_axis": 40, "theta_nodes_per_axis": 8, "richardson_eps": [1e-3, 5e-4]},
    "coefficients": {"max_composition_order": 30},
}

# Sections taken as written: merging would mix alternative representations.
REPLACED_SECTIONS = ("kernel", "angular")


class ConfigError(ValueError):
    """Invalid configuration file; the message carries line info or a field path."""


def _strip_comments(node):
    if isinstance(node, dict):
        return {k: _strip_comments(v) for k, v in node.items() if k != COMMENT_KEY}
    if isinstance(node, list):
        return [_strip_comments(v) for v in node]
    return node


def _merge(defaults: dict, given: dict) -> dict:
    merged = {}
    for key in sorted(set(defaults) | set(given)):
        base, over = defaults.get(key), given.get(key)
        if isinstance(base, dict) and isinstance(over, dict) and key not in REPLACED_SECTIONS:
            merged[key] = _merge(base, over)
        elif key in given:
            merged[key] = over
        else:
            merged[key] = base
    return merged


def load_config(path) -> dict:
    """Read a JSON config and merge it over DEFAULT_CONFIG, section by section."""
    with open(path) as f:
        text = f.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return _merge(DEFAULT_CONFIG, _strip_comments(data))


def _format_validation(e: ValidationError) -> str:
    parts = []
    for err in e.errors():
        loc = ".".join(str(p) for p in err["loc"])
        parts.append(f"{loc}: {err['msg']}")
    return "; ".join(parts)


def _section_error(section: str, e: Exception) -> ConfigError:
    if isinstance(e, ValidationError):
        return ConfigError(f"{section}: {_format_validation(e)}")
    return ConfigError(f"{section}: {e}")


def _build_kernel(raw: RawConfig):
    section = raw.kernel
    if section.hard_sphere_fit is not None:
        req = section.hard_sphere_fit
        fit = fit_hard_sphere(req.r_max, req.degree, req.n_samples)
        return fit.kernel, fit
    kernel = AnalyticKineticKernel(coefficients=tuple(section.coefficients), r_max=section.r_max)
    return validate_kernel(kernel), None


def _build_angular(raw: RawConfig, base_dir: str) -> AngularKernelSet:
    spec = raw.mixture
    kernels: dict[tuple[int, int], AngularKernel] = {}
    for key, entry in raw.angular.items():
        names = key.split("-")
        if len(names) != 2:
            raise ConfigError(f"angular.{key}: pair key must look like 'A-B'")
        try:
            i, j = (species_index(spec, n) for n in names)
        except ValueError as e:
            raise ConfigError(f"angular.{key}: {e}") from None
        if i == j:
            raise ConfigError(f"angular.{key}: a species cannot pair with itself")
        pair = (min(i, j), max(i, j))
        if pair in kernels:
            raise ConfigError(f"angular.{key}: pair given twice")
        try:
            if entry.constant is not None:
                kernels[pair] = constant_angular_kernel(entry.constant)
            elif entry.table is not None:
                kernels[pair] = load_angular_csv(os.path.join(base_dir, entry.table))
            else:
                kernels[pair] = validate_angular(AngularKernel(l1_norm=entry.l1_norm))
        except ValueError as e:
            raise ConfigError(f"angular.{key}: {e}") from None

    for i in range(spec.n_species):
        for j in range(i + 1, spec.n_species):
            if (i, j) not in kernels:
                a, b = spec.names[i], spec.names[j]
                raise ConfigError(f"angular.{a}-{b}: missing entry for pair ({i + 1},{j + 1})")
    return AngularKernelSet(n_species=spec.n_species, kernels=kernels)


def _check_profiles(raw: RawConfig):
    profiles = raw.solver.profiles
    if not profiles:
        return
    spec = raw.mixture
    for name in profiles:
        if name not in spec.names:
            raise ConfigError(f"solver.profiles.{name}: unknown species")
    for name in spec.names:
        if name not in profiles:
            raise ConfigError(f"solver.profiles.{name}: missing profile")
    try:
        build_profiles(profiles, raw.solver.grid, spec)
    except ValueError as e:
        raise ConfigError(f"solver.profiles: {e}") from None


def parse_config(path) -> RunConfig:
    """Load, validate and materialize a run configuration."""
    data = load_config(path)
    try:
        raw = RawConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"{path}: {_format_validation(e)}") from None

    try:
        validate_mixture(raw.mixture)
    except ValueError as e:
        raise _section_error("mixture", e) from None
    try:
        kernel, fit = _build_kernel(raw)
    except ValueError as e:
        raise _section_error("kernel", e) from None

    angular = _build_angular(raw, os.path.dirname(os.path.abspath(path)))
    _check_profiles(raw)

    return RunConfig(
        mixture=raw.mixture,
        kernel=kernel,
        kernel_fit=fit,
        angular=angular,
        solver=raw.solver,
        sweep=raw.sweep,
        oracle=raw.oracle,
        coefficients=raw.coefficients,
        source=os.path.basename(path),
    )
