import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ultrawave.local_field import PAdicRational as P
from ultrawave.radon import (
    RadonTable,
    ResolutionError,
    fourier_slice_defect,
    homogeneity_defect,
    joint_constancy_defect,
    radon_at,
    radon_forward,
    radon_inverse,
    radon_vanishing_check,
    required_resolution,
    slice_mass_spread,
)
from ultrawave.schwartz import TestFunction, random_test_function


def random_points(rng, p, n, lo, hi, count):
    return [tuple(P(p, int(rng.integers(0, p**3)), -int(rng.integers(lo, hi + 1))) for _ in range(n))
            for _ in range(count)]


def test_indicator_slices_are_indicators():
    tab = radon_forward(TestFunction.indicator_ball(2, 2, 0))
    for i in range(len(tab.etas)):
        sl = tab.slice(i)
        assert sl(P(2, 0)) == pytest.approx(1) and sl(P(2, 3)) == pytest.approx(1)
        assert abs(sl(P(2, 1, -1))) < 1e-15


def test_indicator_reconstruction():
    tab = radon_forward(TestFunction.indicator_ball(2, 2, 0), m=2)
    z = P(2, 0)
    vals = radon_inverse(tab, [(z, z), (P(2, 1, -1), z), (P(2, 5), P(2, 3, 1))]).values
    assert np.allclose(vals, [1, 0, 1], atol=1e-12)


@settings(max_examples=15)
@given(st.sampled_from([(2, 1, 1, 2), (3, 1, 0, 2), (2, 2, 1, 1), (3, 2, 0, 1), (2, 2, -1, 2)]), st.integers(0, 10**6))
def test_roundtrip(grid, seed):
    p, n, N, l = grid
    phi = random_test_function(seed, p, n, N, l)
    rng = np.random.default_rng(seed)
    xs = random_points(rng, p, n, -l - 1, N + 1, 12)
    tab = radon_forward(phi, required_resolution(N, l, xs))
    got = radon_inverse(tab, xs).values
    assert np.max(np.abs(got - [phi(x) for x in xs])) <= 1e-9


def test_linearity_of_inverse():
    a = random_test_function(1, 3, 2, 1, 1)
    b = random_test_function(2, 3, 2, 1, 1)
    ta, tb = radon_forward(a), radon_forward(b)
    xs = [(P(3, i), P(3, j, -1)) for i in range(3) for j in range(3)]
    lhs = radon_inverse(ta + tb, xs).values
    assert np.allclose(lhs, radon_inverse(ta, xs).values + radon_inverse(tb, xs).values, atol=1e-12)


def test_insufficient_resolution_is_reported():
    phi = random_test_function(0, 2, 2, 1, 1)
    tab = radon_forward(phi)
    far = (P(2, 1, -3), P(2, 0))
    with pytest.raises(ResolutionError) as err:
        radon_inverse(tab, [(P(2, 0), P(2, 0)), far])
    assert err.value.targets == [far] and err.value.required == 4
    with pytest.raises(ValueError):
        radon_forward(phi, m=1)


def test_structural_identities():
    for p, n, N, l in [(2, 2, 1, 1), (3, 2, 1, 2), (3, 1, 1, 1)]:
        phi = random_test_function(p + n, p, n, N, l)
        tab = radon_forward(phi)
        assert radon_vanishing_check(tab) <= 1e-12
        assert slice_mass_spread(tab) <= 1e-12
        assert homogeneity_defect(phi, tab) <= 1e-12
        assert fourier_slice_defect(phi, tab) <= 1e-11
        assert joint_constancy_defect(phi, tab) <= 1e-12


def test_slice_mass_is_the_integral():
    phi = random_test_function(5, 3, 2, 1, 1)
    tab = radon_forward(phi)
    assert tab.slice(7).integrate() == pytest.approx(phi.integrate(), abs=1e-12)


def test_vanishing_bound_moves_with_scaling():
    phi = random_test_function(3, 2, 2, 1, 1)
    scaled = phi.scaled_argument(1)  # phi(p x) lives on B_2
    tab = radon_forward(scaled, s_margin=1)
    assert tab.support_exp == 2 and radon_vanishing_check(tab) <= 1e-12
    inner = np.arange(tab.values.shape[1]) % 2 ** 2 == 0  # |s| <= q^1
    outer = ~inner & (np.arange(tab.values.shape[1]) % 2 == 0)  # |s| = q^2
    assert np.max(np.abs(tab.values[:, outer])) > 1e-3


def test_radon_at_matches_table():
    phi = random_test_function(6, 3, 2, 1, 1)
    tab = radon_forward(phi)
    for i in (0, 5, 11):
        eta = tab.eta_point(i)
        for s in (P(3, 0), P(3, 2, -1), P(3, 4)):
            assert abs(radon_at(phi, eta, s) - tab.slice(i)(s)) < 1e-12


def test_table_serialization():
    tab = radon_forward(random_test_function(0, 2, 2, 0, 1))
    back = RadonTable.from_json(tab.to_json())
    assert np.array_equal(back.values, tab.values) and back.m == tab.m
    lines = tab.to_csv().splitlines()
    assert lines[0] == "eta_repr,s_repr,re,im"
    assert len(lines) == 1 + tab.values.size
