import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qgibbs.errors import ContainmentError, GeometryError, ResourceError, ValidationError
from qgibbs.lattice import (
    PRESETS,
    ModelSpec,
    Potential,
    Region,
    big_banach_norm,
    internal_energy,
    preset_potential,
    surface_energy,
    surface_norm,
)
from qgibbs.operators import SIGMA_X, LocalOperator, operator_norm


def one_site_field(g=1.0):
    return Potential(2, 1, (LocalOperator(((0,),), 2, -g * SIGMA_X, True),), "field")


def test_region_constructors():
    r = Region.interval(2, 5)
    assert r.volume == 4 and (3,) in r and 6 not in r
    box = Region.box((0, 0), (1, 2))
    assert box.volume == 6 and box.nu == 2
    assert Region.centered_box(4).sites == ((-2,), (-1,), (0,), (1,))
    assert Region.centered_box(3, 2).volume == 9


def test_region_set_operations():
    a, b = Region.interval(0, 3), Region.interval(2, 5)
    assert (a | b).volume == 6
    assert (a & b).sites == ((2,), (3,))
    assert (a - b).sites == ((0,), (1,))
    assert a.translate(10).sites[0] == (10,)
    assert a.collar(1) == Region.interval(-1, 4)
    assert Region.box((0, 0), (0, 0)).collar(1).volume == 9


def test_region_validation():
    with pytest.raises(ValidationError):
        Region(((0,), (0, 1)), 1)


def test_potential_terms_must_contain_origin():
    with pytest.raises(ValidationError):
        Potential(2, 1, (LocalOperator(((1,), (2,)), 2, np.eye(4), True),))


def test_empty_potential_energy():
    u = internal_energy(Potential(2, 1, ()), Region.interval(0, 2))
    np.testing.assert_allclose(u.matrix, np.zeros((8, 8)))
    assert big_banach_norm(Potential(2, 1, ())) == 0


def test_classical_ising_three_sites():
    u = internal_energy(preset_potential("classical_ising"), Region.interval(0, 2))
    spins = np.array([[1, 1, 1], [1, 1, -1], [1, -1, 1], [1, -1, -1],
                      [-1, 1, 1], [-1, 1, -1], [-1, -1, 1], [-1, -1, -1]])
    expected = -(spins[:, 0] * spins[:, 1] + spins[:, 1] * spins[:, 2])
    np.testing.assert_allclose(u.matrix, np.diag(expected), atol=1e-14)
    vals, counts = np.unique(np.round(np.linalg.eigvalsh(u.matrix), 12), return_counts=True)
    np.testing.assert_allclose(vals, [-2, 0, 2])
    assert list(counts) == [2, 4, 2]


@pytest.mark.parametrize("name", PRESETS)
def test_translation_covariance(name):
    pot = preset_potential(name)
    a = internal_energy(pot, Region.interval(0, 4))
    b = internal_energy(pot, Region.interval(3, 7))
    np.testing.assert_allclose(a.matrix, b.matrix, atol=1e-14)


def test_surface_energy_ising():
    pot = preset_potential("classical_ising", {"J": 1.5})
    n = 4
    w = surface_energy(pot, Region.interval(1, n), Region.interval(0, n + 1))
    assert operator_norm(w) == pytest.approx(3.0)
    assert surface_norm(pot, Region.interval(1, n)) == pytest.approx(3.0)


def test_surface_energy_one_site_is_zero():
    w = surface_energy(one_site_field(), Region.interval(0, 2), Region.interval(-1, 3))
    assert np.abs(w.matrix).max() == 0
    assert surface_norm(one_site_field(), Region.interval(0, 2)) == 0


def test_surface_energy_errors():
    pot = preset_potential("tfi")
    with pytest.raises(GeometryError):
        surface_energy(pot, Region.interval(0, 2), Region.interval(0, 3))
    with pytest.raises(ContainmentError):
        surface_energy(pot, Region.interval(0, 2), Region.interval(1, 4))


@pytest.mark.parametrize("name", PRESETS)
@pytest.mark.parametrize("split", [2, 3])
def test_energy_decomposition(name, split):
    pot = preset_potential(name, nu=1)
    amb = Region.interval(0, 6)
    inner = Region.interval(split, split + 2)
    total = internal_energy(pot, amb).matrix
    from qgibbs.operators import embed
    parts = (embed(internal_energy(pot, inner), amb.sites).matrix
             + embed(internal_energy(pot, amb - inner), amb.sites).matrix
             + surface_energy(pot, inner, amb).matrix)
    np.testing.assert_allclose(total, parts, atol=1e-12)


def test_energy_decomposition_two_dimensions():
    pot = preset_potential("tfi", nu=2)
    amb = Region.box((0, 0), (2, 2))
    inner = Region.box((1, 1), (1, 1))
    from qgibbs.operators import embed
    parts = (embed(internal_energy(pot, inner), amb.sites).matrix
             + embed(internal_energy(pot, amb - inner), amb.sites).matrix
             + surface_energy(pot, inner, amb).matrix)
    np.testing.assert_allclose(internal_energy(pot, amb).matrix, parts, atol=1e-12)


@pytest.mark.parametrize("name", PRESETS)
def test_surface_to_volume_decreases(name):
    pot = preset_potential(name)
    ratios = [surface_norm(pot, Region.centered_box(n)) / n for n in range(3, 12)]
    assert all(b < a for a, b in zip(ratios, ratios[1:]))


def test_surface_per_site_formula():
    pot = preset_potential("classical_ising", {"J": 0.7})
    for n in (4, 6, 8):
        assert surface_norm(pot, Region.centered_box(n)) / n == pytest.approx(2 * 0.7 / n)


@pytest.mark.parametrize("name", PRESETS)
def test_preset_terms_traceless(name):
    for t in preset_potential(name).terms:
        assert abs(t.trace()) < 1e-14


def test_big_banach_norm():
    assert big_banach_norm(one_site_field(0.7)) == pytest.approx(0.7)
    assert big_banach_norm(preset_potential("classical_ising", {"J": 1.3})) == pytest.approx(1.3)


@given(st.integers(0, 3), st.integers(0, 3), st.integers(4, 6))
def test_additivity_of_separated_regions(a_len, b_len, gap):
    pot = preset_potential("tfi")
    a = Region.interval(0, a_len)
    b = Region.interval(a_len + gap, a_len + gap + b_len)
    from qgibbs.operators import embed
    ab = a | b
    joint = internal_energy(pot, ab).matrix
    split = embed(internal_energy(pot, a), ab.sites).matrix + embed(internal_energy(pot, b), ab.sites).matrix
    np.testing.assert_allclose(joint, split, atol=1e-12)


def test_periodic_energy():
    pot = preset_potential("classical_ising")
    u = internal_energy(pot, Region.interval(0, 3), periodic=True)
    assert np.linalg.eigvalsh(u.matrix).min() == pytest.approx(-4)
    with pytest.raises(GeometryError):
        internal_energy(pot, Region.interval(0, 1), periodic=True)


def test_dimension_cap():
    with pytest.raises(ResourceError):
        internal_energy(preset_potential("tfi"), Region.interval(0, 9), max_dim=256)


def test_presets_and_model_spec():
    with pytest.raises(ValidationError):
        preset_potential("potts")
    with pytest.raises(ValidationError):
        preset_potential("tfi", {"delta": 1})
    with pytest.raises(ValidationError):
        ModelSpec("tfi", beta=-1.0)
    assert preset_potential("ising").name == "classical_ising"
    assert ModelSpec("tfi", {"g": 0.5}, 1.0).potential().couplings["g"] == 0.5
    # zero couplings drop terms
    assert preset_potential("tfi", {"J": 0}).range == 0
