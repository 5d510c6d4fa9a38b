from fractions import Fraction

import numpy as np
import pytest

from ultrawave.local_field import PAdicRational as P
from ultrawave.schwartz import TestFunction, indicator_coset, random_test_function


def test_indicator_of_unit_ball():
    f = TestFunction.indicator_ball(2, 2, 0, N=1, l=1)
    assert f.values.shape == (4, 4)
    assert f.integrate() == 1
    assert f((P(2, 1), P(2, 3))) == 1
    assert f((P(2, 1, -1), P(2, 0))) == 0
    assert f((P(2, 1, -3), P(2, 0))) == 0  # outside the support ball


def test_values_are_read_only():
    f = random_test_function(0, 3, 1, 1, 1)
    with pytest.raises(ValueError):
        f.values[0] = 1


def test_refine_preserves_function_and_integral():
    f = random_test_function(4, 3, 2, 1, 0)
    g = f.refine(2, 2)
    assert abs(g.integrate() - f.integrate()) < 1e-12
    for x in f.cosets():
        assert g(x) == f(x)
    with pytest.raises(ValueError):
        g.refine(1, 2)


def test_scaled_argument():
    f = random_test_function(2, 2, 1, 1, 2)
    g = f.scaled_argument(1)  # g(x) = f(p x)
    for x in g.cosets():
        assert g(x) == f(tuple(c * P(2, 2) for c in x))


def test_lizorkin_projections():
    phi = random_test_function(1, 3, 2, 1, 1, project_Phi=True)
    psi = random_test_function(1, 3, 2, 1, 1, project_Psi=True)
    assert phi.lizorkin_tag().in_Phi
    assert psi.lizorkin_tag().in_Psi
    with pytest.raises(ValueError):
        random_test_function(0, 2, 1, 0, 0, project_Phi=True)


def test_norms():
    f = indicator_coset(2, 1, 1, 1, (1,)) * 3
    assert f.lkappa_norm(1) == pytest.approx(1.5)
    assert f.lkappa_norm(2) == pytest.approx(3 / np.sqrt(2))
    with pytest.raises(ValueError):
        f.lkappa_norm(0.5)


def test_arithmetic_aligns_grids():
    a = TestFunction.indicator_ball(3, 1, 0)
    b = TestFunction.indicator_ball(3, 1, 1)
    c = b - a
    assert (c.N, c.l) == (1, 0)
    assert c.integrate() == pytest.approx(2)


def test_json_and_csv():
    f = random_test_function(9, 2, 2, 1, 0)
    g = TestFunction.from_json(f.to_json())
    assert np.array_equal(f.values, g.values) and (g.N, g.l) == (1, 0)
    lines = f.to_csv().splitlines()
    assert lines[0] == "coset_repr,re,im"
    assert lines[2].startswith("0*2^0;1*2^-1,")
    assert len(lines) == 1 + f.size


def test_from_radial():
    f = TestFunction.from_radial(2, 1, 2, 1, lambda k: 0 if k is None else Fraction(k + 5))
    assert f(P(2, 1, -2)) == 7
    assert f(P(2, 1, 0)) == 5
    assert f(P(2, 1, 1)) == 0  # inside the zero coset at l = 1
    assert f(P(2, 0)) == 0
