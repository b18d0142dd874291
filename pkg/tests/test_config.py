from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from app.config import DEFAULT_CONFIG, ConfigError, load_config, parse_config
from tests.conftest import binary_config


def _ternary(**overrides):
    cfg = binary_config(**overrides)
    cfg["mixture"]["species"] = [
        {"name": "A", "mass": 1.0},
        {"name": "B", "mass": 2.0},
        {"name": "C", "mass": 3.0},
    ]
    cfg["solver"]["profiles"] = {}
    return cfg


def test_minimal_config_gets_defaults(write_config):
    data = binary_config()
    del data["solver"]
    cfg = parse_config(write_config(data))
    assert cfg.mixture.boltzmann_k == 1.0
    assert cfg.mixture.total_concentration == 1.0
    assert cfg.solver.grid.n_cells == 64
    assert cfg.solver.dt is None
    assert cfg.sweep.eps == [0.2, 0.1, 0.05]
    assert cfg.oracle.theta_nodes_per_axis == 8
    assert cfg.kernel.coefficients == (1.0,)
    assert cfg.kernel_fit is None


def test_comments_are_ignored(write_config):
    data = binary_config()
    data["_comment"] = "two species"
    data["mixture"]["_comment"] = "unit masses"
    cfg = parse_config(write_config(data))
    assert cfg.mixture.names == ("A", "B")


def test_defaults_are_not_mutated(write_config):
    load_config(write_config(binary_config(solver={"t_end": 1.0})))
    assert DEFAULT_CONFIG["solver"]["t_end"] == 0.05


def test_missing_angular_pair_reports_field_path(write_config):
    data = _ternary()
    data["angular"] = {"A-B": {"constant": 0.5}, "B-C": {"constant": 0.5}}
    with pytest.raises(ConfigError, match=r"angular\.A-C.*\(1,3\)"):
        parse_config(write_config(data))


def test_angular_pair_given_twice(write_config):
    data = binary_config()
    data["angular"] = {"A-B": {"constant": 0.5}, "B-A": {"l1_norm": 1.0}}
    with pytest.raises(ConfigError, match="twice"):
        parse_config(write_config(data))


def test_unknown_species_in_angular_key(write_config):
    data = binary_config()
    data["angular"] = {"A-Z": {"constant": 0.5}}
    with pytest.raises(ConfigError, match=r"angular\.A-Z"):
        parse_config(write_config(data))


def test_hard_sphere_fit_is_materialized(write_config):
    data = binary_config()
    data["kernel"] = {"hard_sphere_fit": {"r_max": 4.0, "degree": 6}}
    cfg = parse_config(write_config(data))
    assert cfg.kernel_fit is not None
    assert cfg.kernel.truncation_order == 6
    assert cfg.kernel_fit.max_abs_error > 0
    assert "hard_sphere_fit_max_abs_error" in cfg.metadata()


def test_angular_table_resolved_next_to_config(tmp_path, write_config):
    eta = np.linspace(-1.0, 1.0, 17)
    pd.DataFrame({"eta": eta, "b": 0.75 * (1 + eta**2)}).to_csv(tmp_path / "b_ab.csv", index=False)
    data = binary_config(angular={"A-B": {"table": "b_ab.csv"}})
    cfg = parse_config(write_config(data))
    assert cfg.angular.get(0, 1).is_tabulated


def test_json_syntax_error_has_line_info(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "mixture": {\n    "temperature": 1.0,\n  }\n}\n')
    with pytest.raises(ConfigError, match="line 4"):
        parse_config(str(path))


def test_validation_error_has_field_path(write_config):
    data = binary_config(solver={"grid": {"n_cells": 4}})
    with pytest.raises(ConfigError, match=r"solver\.grid\.n_cells"):
        parse_config(write_config(data))


def test_semantic_mixture_error(write_config):
    data = binary_config()
    data["mixture"]["species"][1]["mass"] = 0.0
    with pytest.raises(ConfigError, match="mixture: .*nonpositive mass"):
        parse_config(write_config(data))


def test_kernel_needs_exactly_one_source(write_config):
    data = binary_config(kernel={"coefficients": [1.0], "hard_sphere_fit": {"r_max": 4.0}})
    with pytest.raises(ConfigError, match="exactly one"):
        parse_config(write_config(data))


def test_profiles_must_cover_species_and_sum(write_config):
    data = binary_config()
    del data["solver"]["profiles"]["B"]
    with pytest.raises(ConfigError, match=r"solver\.profiles\.B"):
        parse_config(write_config(data))

    data = binary_config()
    data["solver"]["profiles"]["B"] = [{"kind": "constant", "value": 0.6}]
    with pytest.raises(ConfigError, match="sum"):
        parse_config(write_config(data))


def test_sweep_refinement_must_be_odd(write_config):
    with pytest.raises(ConfigError, match="odd"):
        parse_config(write_config(binary_config(sweep={"reference_refinement": 2})))


@pytest.mark.parametrize("name", ["binary.json", "ternary_duncan_toor.json", "hard_sphere.json"])
def test_shipped_configs_parse(name):
    root = Path(__file__).resolve().parent.parent
    cfg = parse_config(str(root / "configs" / name))
    assert cfg.angular.n_species == cfg.mixture.n_species


def test_ternary_config_reproduces_pair_diffusivities():
    from app.coefficients import diffusion_matrix

    root = Path(__file__).resolve().parent.parent
    cfg = parse_config(str(root / "configs" / "ternary_duncan_toor.json"))
    d = diffusion_matrix(cfg.mixture, cfg.kernel, cfg.angular)
    assert d.get(0, 1) == pytest.approx(0.833, rel=1e-12)
    assert d.get(0, 2) == pytest.approx(0.680, rel=1e-12)
    assert d.get(1, 2) == pytest.approx(0.168, rel=1e-12)
