import numpy as np
import pytest
from hypothesis import given, strategies as st

from ultrawave.fourier import fourier, fourier_at, inverse_fourier, plancherel_defect, transform_columns
from ultrawave.local_field import PAdicRational as P
from ultrawave.schwartz import TestFunction, random_test_function

grids = st.tuples(
    st.sampled_from([2, 3, 5]), st.integers(1, 2), st.integers(-1, 2), st.integers(0, 2), st.integers(0, 10**6)
).filter(lambda t: 0 <= t[2] + t[3] <= (3 if t[1] == 1 else 2))


def test_indicator_of_O_is_self_dual():
    f = TestFunction.indicator_ball(3, 2, 0, N=1, l=1)
    ft = fourier(f)
    assert (ft.N, ft.l) == (1, 1)
    assert np.allclose(ft.values, f.values, atol=1e-15)


def test_ball_transform():
    # F[1_{B_1}] = q 1_{B_-1} in one dimension
    f = TestFunction.indicator_ball(2, 1, 1, N=1, l=1)
    ft = fourier(f)
    assert ft(P(2, 0)) == pytest.approx(2)
    assert ft(P(2, 1, 1)) == pytest.approx(2)
    assert abs(ft(P(2, 1))) < 1e-15


@given(grids)
def test_roundtrip_and_plancherel(args):
    p, n, N, l, seed = args
    f = random_test_function(seed, p, n, N, l)
    assert np.max(np.abs(inverse_fourier(fourier(f)).values - f.values)) < 1e-12
    assert plancherel_defect(f) < 1e-12


@given(grids)
def test_direct_and_digit_paths_agree(args):
    p, n, N, l, seed = args
    f = random_test_function(seed, p, n, N, l)
    assert np.allclose(fourier(f, "direct").values, fourier(f, "digits").values, atol=1e-12)


def test_pointwise_oracle_matches_table():
    f = random_test_function(3, 3, 2, 1, 1)
    ft = fourier(f)
    for xi in ft.cosets()[::7]:
        assert abs(fourier_at(f, xi) - ft(xi)) < 1e-12


def test_pointwise_oracle_vanishes_outside_support():
    f = random_test_function(5, 2, 1, 2, 1)
    assert abs(fourier_at(f, (P(2, 1, -3),))) < 1e-12
    assert abs(fourier_at(f, (P(2, 3, -5),))) < 1e-12


def test_lizorkin_spaces_swap():
    phi = random_test_function(2, 3, 1, 1, 2, project_Phi=True)
    assert fourier(phi).lizorkin_tag(1e-12).in_Psi
    psi = random_test_function(2, 3, 1, 1, 2, project_Psi=True)
    assert fourier(psi).lizorkin_tag(1e-12).in_Phi


def test_linearity():
    f = random_test_function(1, 2, 2, 1, 1)
    g = random_test_function(2, 2, 2, 1, 1)
    lhs = fourier(f * 2 + g).values
    assert np.allclose(lhs, 2 * fourier(f).values + fourier(g).values, atol=1e-13)


def test_column_transform_rejects_unknown_method():
    with pytest.raises(ValueError):
        transform_columns(np.ones((4, 1)), 2, 1, "fft")
