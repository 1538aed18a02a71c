import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from qgibbs.errors import ValidationError
from qgibbs.lattice import PRESETS, Region, preset_potential
from qgibbs.states import StateFamily
from qgibbs.thermo import (
    bloch_grid,
    energy_density,
    free_energy_functional,
    information_rate,
    log_partition,
    mean_field_scan,
    pressure,
    relative_entropy_identity,
)

BOXES = [Region.centered_box(n) for n in (4, 6, 8, 10)]
ISING = preset_potential("classical_ising")


def test_pressure_infinite_temperature():
    s = pressure(preset_potential("tfi"), 0.0, BOXES)
    np.testing.assert_allclose(s.values, math.log(2), atol=1e-14)
    assert s.limit_estimate == pytest.approx(math.log(2))


def test_pressure_ising_closed_form():
    s = pressure(ISING, 1.0, BOXES)
    for n, v in s.points:
        assert v == pytest.approx(math.log(2) + (n - 1) / n * math.log(math.cosh(1)), abs=1e-12)
    assert s.limit_estimate == pytest.approx(math.log(2 * math.cosh(1)), abs=1e-9)


def test_pressure_scales_linearly_in_inverse_volume():
    s = pressure(preset_potential("tfi"), 0.8, BOXES)
    assert s.fit_residual < 1e-5
    assert math.isfinite(s.slope)


def test_energy_density_examples():
    tr = energy_density(ISING, StateFamily.tracial(), BOXES)
    np.testing.assert_allclose(tr.values, 0, atol=1e-14)
    up = energy_density(ISING, StateFamily.product([1.0, 0.0]), BOXES)
    for n, v in up.points:
        assert v == pytest.approx(-(n - 1) / n)
    assert up.limit_estimate == pytest.approx(-1)


@pytest.mark.parametrize("name", PRESETS)
def test_gibbs_energy_is_beta_derivative(name):
    pot = preset_potential(name)
    beta, step = 0.7, 1e-4
    region = Region.centered_box(6)
    e = energy_density(pot, StateFamily.internal_gibbs(pot, beta), [region]).values[0] * 6
    fd = -(log_partition(pot, beta + step, region) - log_partition(pot, beta - step, region)) / (2 * step)
    assert e == pytest.approx(fd, abs=1e-5)


def test_information_rate_tracial_ising():
    boxes = [Region.centered_box(n) for n in (4, 6, 8, 10, 12)]
    s = information_rate(ISING, 1.0, StateFamily.tracial(), boxes)
    assert s.limit_estimate == pytest.approx(math.log(math.cosh(1)), abs=1e-9)
    assert np.all(s.values >= -1e-10)


@pytest.mark.parametrize("name", PRESETS)
def test_information_rate_of_gibbs_is_zero(name):
    pot = preset_potential(name)
    s = information_rate(pot, 0.9, StateFamily.internal_gibbs(pot, 0.9), BOXES)
    np.testing.assert_allclose(s.values, 0, atol=1e-9)


@pytest.mark.parametrize("omega", [
    StateFamily.tracial(),
    StateFamily.product([0.3, 0.7]),
    StateFamily.product(np.array([[0.6, 0.2 - 0.1j], [0.2 + 0.1j, 0.4]])),
    StateFamily.internal_gibbs(preset_potential("heisenberg"), 0.4),
])
def test_relative_entropy_identity(omega):
    for name in PRESETS:
        for n in (3, 5):
            chk = relative_entropy_identity(preset_potential(name), 1.1, omega, Region.centered_box(n))
            assert chk.residual <= 1e-9
            assert chk.relative_entropy >= -1e-10


def test_free_energy_functional():
    tr = free_energy_functional(ISING, 1.0, StateFamily.tracial(), BOXES)
    assert tr.limit_estimate == pytest.approx(math.log(2))
    assert tr.limit_estimate < math.log(2 * math.cosh(1))
    g = free_energy_functional(ISING, 1.0, StateFamily.internal_gibbs(ISING, 1.0), BOXES)
    p = pressure(ISING, 1.0, BOXES)
    np.testing.assert_allclose(g.values, p.values, atol=1e-9)


@pytest.mark.parametrize("name", PRESETS)
def test_finite_volume_variational_inequality(name):
    pot = preset_potential(name)
    p = pressure(pot, 0.8, BOXES)
    for omega in (StateFamily.tracial(), StateFamily.product([0.1, 0.9])):
        f = free_energy_functional(pot, 0.8, omega, BOXES)
        assert np.all(f.values <= p.values + 1e-9)


def test_mean_field_infinite_temperature():
    r = mean_field_scan(ISING, 0.0, None, BOXES)
    np.testing.assert_allclose(r.rho0, np.eye(2) / 2, atol=1e-12)
    assert r.value == pytest.approx(math.log(2), abs=1e-9)


def test_mean_field_ising_low_temperature():
    beta = 3.0
    r = mean_field_scan(ISING, beta, None, BOXES)

    # scalar free energy of the two-point distribution (p, 1-p), per site
    def neg_f(p):
        return -(-p * math.log(p) - (1 - p) * math.log(1 - p) + beta * (2 * p - 1) ** 2)

    opt = minimize_scalar(neg_f, bounds=(0.5, 1 - 1e-15), method="bounded", options={"xatol": 1e-12})
    assert abs(r.params[2]) == pytest.approx(2 * opt.x - 1, abs=1e-5)
    # parameter tolerance 1e-6 bounds the value error through the steep entropy slope
    assert r.value == pytest.approx(-opt.fun, abs=1e-6)
    assert r.value <= -opt.fun + 1e-12
    assert abs(r.params[2]) > 0.99


@pytest.mark.parametrize("name", PRESETS)
def test_mean_field_below_pressure(name):
    pot = preset_potential(name)
    r = mean_field_scan(pot, 1.0, None, BOXES)
    assert r.value <= pressure(pot, 1.0, BOXES).limit_estimate + 1e-6


def test_mean_field_matrix_grid():
    r = mean_field_scan(ISING, 0.5, [np.diag([0.5, 0.5]), np.diag([0.9, 0.1])], BOXES)
    assert r.value >= math.log(2) - 1e-12


def test_mean_field_errors():
    with pytest.raises(ValidationError):
        mean_field_scan(ISING, 1.0, [], BOXES)
    with pytest.raises(ValidationError):
        pressure(ISING, 1.0, [Region.centered_box(4), Region.centered_box(4)])


def test_bloch_grid_contents():
    g = bloch_grid(3)
    assert len(g) == 1 + 3 * 26
    assert np.all(np.linalg.norm(g, axis=1) <= 1 + 1e-12)


@pytest.mark.parametrize("name", PRESETS)
def test_log_partition_matches_gibbs_normalization(name):
    from qgibbs.states import gibbs_density
    pot = preset_potential(name)
    for beta in (0.0, 0.9, 4.0):
        r = Region.centered_box(6)
        assert log_partition(pot, beta, r) == pytest.approx(gibbs_density(pot, beta, r)[1], abs=1e-11)
