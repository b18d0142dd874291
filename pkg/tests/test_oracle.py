import itertools
import math

import numpy as np
import pytest

from app.collision import tabulate_angular_kernel, constant_angular_kernel
from app.gaussian import gaussian_moment_3d
from app.models import AnalyticKineticKernel, QuadratureConfig
from app.oracle import (
    angular_sigma_moment,
    delta_tilde_from_theta,
    gh_moment_3d,
    maxwellian_density,
    oracle_report,
    theta_oracle,
)
from tests.conftest import make_spec, unit_angular_set

A0 = AnalyticKineticKernel(coefficients=(1.0,))
A1 = AnalyticKineticKernel(coefficients=(0.0, 1.0))
A2 = AnalyticKineticKernel(coefficients=(0.0, 0.0, 1.0))
E1 = np.array([1.0, 0.0, 0.0])
ZERO = np.zeros(3)


# ---------------------------------------------------------------------------
# Gaussian moments
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("e, expected", [((2, 0, 0), 1.0), ((4, 0, 0), 3.0)])
def test_gh_moment_examples(e, expected):
    assert gh_moment_3d(1.0, 1.0, e) == pytest.approx(expected, abs=1e-12)


def test_gh_moment_odd_vanishes():
    assert abs(gh_moment_3d(1.0, 1.0, (3, 0, 0))) < 1e-14


def test_gh_moment_degree_bound():
    with pytest.raises(ValueError, match="exceeds"):
        gh_moment_3d(1.0, 1.0, (20, 0, 0), QuadratureConfig(nodes_per_axis=8))


def test_closed_form_moments_match_quadrature():
    triples = [
        e for e in itertools.product(range(0, 13, 2), repeat=3) if sum(e) <= 12
    ]
    for mass, kT in itertools.product([0.5, 1.0, 2.0], repeat=2):
        for e in triples:
            closed = gaussian_moment_3d(mass, kT, e)
            assert gh_moment_3d(mass, kT, e) == pytest.approx(closed, rel=1e-10), (mass, kT, e)


def test_maxwellian_density():
    assert maxwellian_density(1.0, ZERO, 2.0 * math.pi, 1.0, ZERO) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        maxwellian_density(-1.0, ZERO, 1.0, 1.0, ZERO)


def test_maxwellian_density_moments():
    # trapezoid on a wide box is spectrally accurate for Gaussians
    mass, kT, c, u = 2.0, 1.5, 0.7, np.array([0.3, -0.2, 0.1])
    x = np.linspace(-8.0, 8.0, 121)
    dx = x[1] - x[0]
    v = np.stack(np.meshgrid(x, x, x, indexing="ij"), axis=-1)
    f = maxwellian_density(c, u, mass, kT, v)
    assert np.sum(f) * dx**3 == pytest.approx(c, rel=1e-10)
    mean = np.array([np.sum(f * v[..., k]) for k in range(3)]) * dx**3
    np.testing.assert_allclose(mean, c * u, atol=1e-10)


def test_angular_sigma_moment_vanishes_for_even_b():
    for b in (constant_angular_kernel(1.0), tabulate_angular_kernel(lambda eta: (1 + eta**2) / 2, 33)):
        np.testing.assert_allclose(angular_sigma_moment(b), 0.0, atol=1e-12)


# ---------------------------------------------------------------------------
# Theta and Delta~
# ---------------------------------------------------------------------------

def test_theta_oracle_maxwellian_kernel():
    spec = make_spec([1.0, 1.0])
    theta = theta_oracle(spec, A0, 1.0, 0, 1, 1e-3, ZERO, E1, 1.0, 1.0)
    assert theta[0] == pytest.approx(math.pi, abs=1e-6)
    assert abs(theta[1]) < 1e-9 and abs(theta[2]) < 1e-9


def test_theta_oracle_equal_drifts():
    spec = make_spec([1.0, 2.0])
    u = np.array([0.4, -0.1, 0.2])
    theta = theta_oracle(spec, A1, 1.0, 0, 1, 1e-3, u, u, 1.0, 1.0)
    np.testing.assert_allclose(theta, 0.0, atol=1e-10)


def test_theta_oracle_input_checks():
    spec = make_spec([1.0, 1.0])
    with pytest.raises(ValueError, match="eps"):
        theta_oracle(spec, A0, 1.0, 0, 1, 0.5, ZERO, E1, 1.0, 1.0)
    deep = AnalyticKineticKernel(coefficients=(0.0,) * 8 + (1.0,))
    with pytest.raises(ValueError, match="nodes"):
        theta_oracle(spec, deep, 1.0, 0, 1, 1e-3, ZERO, E1, 1.0, 1.0)


def test_delta_tilde_from_theta_low_orders():
    spec = make_spec([1.0, 1.0])
    a0 = delta_tilde_from_theta(spec, A0, 1.0, 0, 1, ZERO, E1, 1.0, 1.0)
    assert a0 == pytest.approx(math.pi, abs=1e-6)
    a1 = delta_tilde_from_theta(spec, A1, 1.0, 0, 1, ZERO, E1, 1.0, 1.0)
    assert a1 == pytest.approx(10.0 * math.pi, rel=1e-4)


def test_delta_tilde_from_theta_second_order_kernel():
    # exact value 2 pi ||b|| (mu / kT) s^2 7!! / 3, s = kT/m_i + kT/m_j
    spec = make_spec([1.0, 2.0])
    mu, s = 2.0 / 3.0, 1.5
    expected = 2.0 * math.pi * mu * s**2 * 105.0 / 3.0
    value = delta_tilde_from_theta(spec, A2, 1.0, 0, 1, ZERO, E1, 1.0, 1.0)
    assert value == pytest.approx(expected, rel=1e-4)


def test_delta_tilde_from_theta_needs_velocity_difference():
    spec = make_spec([1.0, 1.0])
    with pytest.raises(ValueError, match="coincide"):
        delta_tilde_from_theta(spec, A0, 1.0, 0, 1, E1, E1, 1.0, 1.0)


def test_theta_oracle_is_antisymmetric_for_equal_masses():
    spec = make_spec([1.5, 1.5])
    kernel = AnalyticKineticKernel(coefficients=(0.5, 1.0, 0.2))
    u_i = np.array([0.3, -0.2, 0.1])
    u_j = np.array([-0.4, 0.5, 0.0])
    forward = theta_oracle(spec, kernel, 0.8, 0, 1, 1e-2, u_i, u_j, 0.3, 0.7)
    backward = theta_oracle(spec, kernel, 0.8, 1, 0, 1e-2, u_j, u_i, 0.7, 0.3)
    assert np.max(np.abs(forward)) > 1e-3
    np.testing.assert_allclose(forward + backward, 0.0, atol=1e-10)


@pytest.mark.parametrize("kernel", [A0, A1, A2])
def test_delta_tilde_from_theta_is_symmetric(kernel):
    spec = make_spec([1.0, 2.5])
    u = np.array([0.2, 0.0, -0.1])
    forward = delta_tilde_from_theta(spec, kernel, 1.0, 0, 1, ZERO, u, 0.4, 0.6)
    backward = delta_tilde_from_theta(spec, kernel, 1.0, 1, 0, ZERO, u, 0.6, 0.4)
    assert forward == pytest.approx(backward, rel=1e-6)


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------

def test_oracle_report_flags_first_order_gap():
    spec = make_spec([1.0, 1.0])
    kernel = AnalyticKineticKernel(coefficients=(1.0, 1.0))
    df = oracle_report(spec, kernel, unit_angular_set(2))
    assert list(df["kernel"]) == ["a0", "a1", "full"]
    rows = df.set_index("kernel")

    assert rows.loc["a0", "closed_form"] == pytest.approx(math.pi, rel=1e-12)
    assert not rows.loc["a0", "flagged"]

    a1 = rows.loc["a1"]
    assert a1["closed_form"] == pytest.approx(6.0 * math.pi, rel=1e-12)
    assert a1["printed"] == pytest.approx(10.0 * math.pi, rel=1e-12)
    assert a1["oracle"] == pytest.approx(10.0 * math.pi, rel=1e-4)
    assert a1["rel_diff"] == pytest.approx(0.4, abs=1e-4)
    assert a1["flagged"]

    assert rows.loc["full", "oracle"] == pytest.approx(11.0 * math.pi, rel=1e-4)
    assert not rows.loc["full", "flagged"]
