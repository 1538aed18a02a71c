import numpy as np
import pytest
from hypothesis import given

from qgibbs.errors import ResourceError, ValidationError
from qgibbs.lattice import PRESETS, Region, preset_potential
from qgibbs.operators import partial_trace
from qgibbs.states import (
    DensityMatrix,
    StateFamily,
    buffered_drift,
    gibbs_density,
    marginal,
    random_density,
    translation_drift,
)

from conftest import seeds


def test_density_validation():
    with pytest.raises(ValidationError):
        DensityMatrix(((0,),), 2, np.diag([0.6, 0.6]))
    with pytest.raises(ValidationError):
        DensityMatrix(((0,),), 2, np.diag([1.2, -0.2]))


def test_tracial_marginal():
    m = marginal(StateFamily.tracial(), Region.interval(0, 1))
    np.testing.assert_allclose(m.matrix, np.eye(4) / 4)


def test_internal_gibbs_infinite_temperature():
    m = marginal(StateFamily.internal_gibbs(preset_potential("tfi"), 0.0), Region.interval(0, 2))
    np.testing.assert_allclose(m.matrix, np.eye(8) / 8, atol=1e-15)


def test_internal_gibbs_two_site_ising():
    m = marginal(StateFamily.internal_gibbs(preset_potential("classical_ising"), 1.0), Region.interval(0, 1))
    e = np.e
    expected = np.diag([e, 1 / e, 1 / e, e]) / (2 * e + 2 / e)
    np.testing.assert_allclose(m.matrix, expected, atol=1e-15)


@pytest.mark.parametrize("name", PRESETS)
@pytest.mark.parametrize("beta", [0.2, 1.0, 5.0])
def test_internal_gibbs_full_rank_with_exact_log(name, beta):
    rho, log_z = gibbs_density(preset_potential(name), beta, Region.interval(0, 4))
    assert rho._eigh[0].min() > 0
    np.testing.assert_allclose(rho.matrix, _expm(rho.log().matrix), atol=1e-12)


def _expm(a):
    w, v = np.linalg.eigh(a)
    return (v * np.exp(w)) @ v.conj().T


@given(seeds)
def test_product_marginals_consistent(seed):
    rng = np.random.default_rng(seed)
    fam = StateFamily.product(random_density(2, rng, support=((0,),)).matrix)
    big = marginal(fam, Region.interval(0, 3))
    small = marginal(fam, Region.interval(1, 2))
    np.testing.assert_allclose(partial_trace(big, small.support).matrix, small.matrix, atol=1e-12)
    assert translation_drift(fam, Region.interval(0, 2), 7) < 1e-12


def test_tracial_consistency():
    fam = StateFamily.tracial()
    big = marginal(fam, Region.interval(0, 3))
    np.testing.assert_allclose(partial_trace(big, ((1,),)).matrix, np.eye(2) / 2)


@pytest.mark.parametrize("method", ["dense", "auto"])
def test_buffered_translation_invariant(method):
    fam = StateFamily.buffered_gibbs(preset_potential("tfi"), 0.8, 2, method=method)
    assert translation_drift(fam, Region.interval(0, 3), 5) < 1e-12


def test_buffered_zero_buffer_is_internal_gibbs():
    pot = preset_potential("heisenberg")
    r = Region.interval(0, 3)
    a = marginal(StateFamily.buffered_gibbs(pot, 0.7, 0), r)
    b = marginal(StateFamily.internal_gibbs(pot, 0.7), r)
    np.testing.assert_allclose(a.matrix, b.matrix, atol=1e-13)


def test_buffered_drift_examples():
    fam = StateFamily.buffered_gibbs(preset_potential("tfi"), 0.8, 0)
    r = Region.interval(0, 3)
    assert buffered_drift(fam, r, 2, 2) == 0
    hot = StateFamily.buffered_gibbs(preset_potential("tfi"), 0.0, 0)
    assert buffered_drift(hot, r, 1, 3) < 1e-14
    base = buffered_drift(fam, r, 1, 3)
    assert base > 0
    assert buffered_drift(fam, r, 2, 4) < base


@pytest.mark.parametrize("name", PRESETS)
def test_buffer_convergence_monotone(name):
    fam = StateFamily.buffered_gibbs(preset_potential(name), 0.8, 0, method="dense")
    r = Region.interval(0, 2)
    drifts = [buffered_drift(fam, r, b, b + 1) for b in (1, 2, 3)]
    assert all(b <= a + 1e-12 for a, b in zip(drifts, drifts[1:]))


def test_buffered_resource_error_names_box():
    fam = StateFamily.buffered_gibbs(preset_potential("heisenberg"), 0.8, 3, max_dim=2**8)
    with pytest.raises(ResourceError, match="Region.interval"):
        marginal(fam, Region.interval(0, 3))


def test_gaussian_method_requires_quadratic():
    fam = StateFamily.buffered_gibbs(preset_potential("heisenberg"), 0.8, 1, method="gaussian")
    with pytest.raises(ValidationError):
        marginal(fam, Region.interval(0, 2))


def test_periodic_buffer_option():
    fam = StateFamily.buffered_gibbs(preset_potential("tfi"), 0.8, 2, boundary="periodic")
    m = marginal(fam, Region.interval(0, 2))
    assert m.trace() == pytest.approx(1)


def test_family_validation():
    with pytest.raises(ValidationError):
        StateFamily("bogus")
    with pytest.raises(ValidationError):
        StateFamily.internal_gibbs(preset_potential("tfi"), -1.0)
    with pytest.raises(ValidationError):
        StateFamily.product([0.5, 0.6])
    with pytest.raises(ValidationError):
        marginal(StateFamily.tracial(), Region.box((0, 0), (1, 1)))
