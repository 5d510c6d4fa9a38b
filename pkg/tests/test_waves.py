from fractions import Fraction

import numpy as np
import pytest

from ultrawave.local_field import PAdicRational as P
from ultrawave.schwartz import TestFunction, random_test_function
from ultrawave.vladimirov import apply_D_alpha, apply_D_alpha_n, EigenProfile
from ultrawave.waves import (
    ROUTES,
    CauchyKernels,
    PlaneWaveSpec,
    cauchy_convolution,
    cauchy_direct,
    cauchy_field,
    cauchy_radon,
    cauchy_spectral,
    huygens_check,
    initial_condition_defects,
    kernel_duality_defect,
    lambda_exponent,
    norm_report,
    plane_wave_eval,
    route_deltas,
    sphere_character_brute,
    sphere_character_integral,
    sphere_pushforward_integral,
    symbol_degeneracy,
    symbol_degeneracy_brute,
    symbol_degeneracy_closed_form,
    wave_residual,
)

half = P(2, 1, -1)


def test_plane_wave_eval_examples():
    one_O = TestFunction.indicator_ball(2, 1, 0, N=1, l=1)
    f = plane_wave_eval(PlaneWaveSpec(one_O, (P(2, 1),)), [(half, (half,))])
    assert f.values[0] == 1
    g = plane_wave_eval(PlaneWaveSpec(one_O, (P(2, 1), P(2, 1))), [(P(2, 0), (half, half))])
    assert g.values[0] == 1
    with pytest.raises(ValueError):
        PlaneWaveSpec(one_O, (P(2, 2), P(2, 4)))


def test_plane_wave_locally_constant():
    f = random_test_function(2, 3, 1, 1, 1)
    spec = PlaneWaveSpec(f, (P(3, 1), P(3, 3)))
    a = spec(P(3, 1, -1), (P(3, 2), P(3, 5)))
    b = spec(P(3, 1, -1) + P(3, 3), (P(3, 2), P(3, 5)))  # shifted within the same coset
    assert a == b


def test_sphere_pushforward_examples():
    one_O = TestFunction.indicator_ball(2, 1, 0)
    assert sphere_pushforward_integral(one_O, (P(2, 1), P(2, 1)), 1) == pytest.approx(1)
    big = TestFunction.indicator_ball(3, 1, 2)
    assert sphere_pushforward_integral(big, (P(3, 1), P(3, 0), P(3, 5)), 2, 3) == pytest.approx(
        float(Fraction(3) ** 6 * (1 - Fraction(1, 27))))


def test_sphere_pushforward_against_brute_sum():
    # direct 2-D coset sum of g(omega . y) over ||y|| = q^k at resolution l
    p, l, k = 2, 1, 1
    g = random_test_function(3, p, 1, 1, 1)
    omega = (P(p, 1), P(p, 3))
    from ultrawave.local_field import enumerate_sphere

    brute = sum(g((omega[0] * y[0] + omega[1] * y[1],)) for y in enumerate_sphere(p, 2, k, l)) * 2.0 ** (-2 * l)
    assert sphere_pushforward_integral(g, omega, k) == pytest.approx(brute, abs=1e-14)


def test_wave_equation_for_symmetric_profile():
    one_O = TestFunction.indicator_ball(3, 1, 0, N=1, l=1)
    pts = [(P(3, a, -1), (P(3, b, -1),)) for a in range(3) for b in range(3)]
    assert wave_residual(PlaneWaveSpec(one_O, (P(3, 1),)), 1, pts) <= 1e-14


@pytest.mark.parametrize("p,n,alpha", [(2, 2, 1), (3, 3, 0.5), (2, 3, 2)])
def test_wave_residual_random(p, n, alpha):
    rng = np.random.default_rng(p * n)
    f = random_test_function(int(rng.integers(1000)), p, 1, 1, 1)
    omega = (P(p, 1),) + tuple(P(p, int(rng.integers(0, 5)) * p) for _ in range(n - 1))
    pts = [(P(p, int(rng.integers(0, 9)), int(rng.integers(-2, 2))),
            tuple(P(p, int(rng.integers(0, 9)), int(rng.integers(-2, 2))) for _ in range(n)))
           for _ in range(30)]
    assert wave_residual(PlaneWaveSpec(f, omega), alpha, pts) <= 1e-9
    with pytest.raises(ValueError):
        wave_residual(PlaneWaveSpec(f, omega), -1, pts)


def test_plane_wave_restriction_of_eigenprofile():
    prof = EigenProfile.normalized(2, 0, 1).to_test_function()
    omega = (P(2, 1), P(2, 1))
    u = TestFunction.from_callable(2, 2, 1, 0, lambda x: prof((omega[0] * x[0] + omega[1] * x[1],)))
    xs = [(P(2, a), P(2, b, -1)) for a in range(2) for b in range(2)]
    lhs = apply_D_alpha_n(u, 1, xs).values
    rhs = apply_D_alpha(prof, 1, [omega[0] * x[0] + omega[1] * x[1] for x in xs]).values
    assert np.allclose(lhs, rhs, atol=1e-12)


def test_kernel_values():
    assert CauchyKernels(3, 2).b(1) == Fraction(-1, 2)
    assert CauchyKernels(3, 2).b_tilde(0) == Fraction(3, 2)
    assert CauchyKernels(3, 2).b_tilde(-2) == Fraction(-3)
    assert CauchyKernels(2, 2).c_A == 1
    assert CauchyKernels(2, 2).A(3) == Fraction(1, 8)
    assert kernel_duality_defect(3, 2) <= 1e-11
    assert kernel_duality_defect(2, 3) <= 1e-11


@pytest.mark.parametrize("s,z,want", [
    (P(2, 1, -1), (P(2, 1), P(2, 0)), Fraction(-1, 4)),
    (P(2, 1), (P(2, 1), P(2, 3)), Fraction(3, 4)),
    (P(3, 1, -2), (P(3, 1), P(3, 0)), Fraction(0)),
    (P(3, 1, -1), (P(3, 2), P(3, 1, 1)), Fraction(-1, 9)),
])
def test_sphere_character_formula(s, z, want):
    p = s.p
    assert sphere_character_integral(p, 2, s, z) == want
    assert abs(sphere_character_brute(p, 2, s, z) - float(want)) < 1e-14


PHI_CASES = [(2, 1, 1, 3), (3, 1, 1, 5)]


def _xs(p, count=8, seed=0):
    rng = np.random.default_rng(seed)
    return [tuple(P(p, int(rng.integers(0, 30)), int(rng.integers(-1, 2))) for _ in range(2)) for _ in range(count)]


@pytest.mark.parametrize("p,N,l,seed", PHI_CASES)
def test_routes_agree_for_zero_mean_data(p, N, l, seed):
    phi = random_test_function(seed, p, 2, N, l, project_Phi=True)
    fields = {r: cauchy_field(r, phi, (N + 2, l + 1), _xs(p)) for r in ROUTES}
    assert max(route_deltas(fields).values()) <= 1e-8
    for f in fields.values():
        assert f.radial_defect() <= 1e-12


@pytest.mark.parametrize("p", [2, 3])
def test_radon_and_direct_agree_for_general_data(p):
    phi = random_test_function(11, p, 2, 1, 1)
    a = cauchy_radon(phi, "F2", (3, 2), _xs(p, seed=1))
    b = cauchy_direct(phi, (3, 2), _xs(p, seed=1))
    assert np.max(np.abs(a.values - b.values)) <= 1e-8


def test_nonzero_mean_far_field_at_t0():
    # for data with nonzero integral, F2(0, x) = c_A I / ||x|| far away
    phi = TestFunction.indicator_ball(2, 2, 0)
    x = (P(2, 1, -3), P(2, 0))
    val = cauchy_direct(phi, (0, 0), [x]).values[0, 0]
    assert val == pytest.approx(float(CauchyKernels(2, 2).c_A) / 8)


def test_spectral_rejections_and_zero_coset():
    phi = random_test_function(1, 2, 2, 1, 1)
    with pytest.raises(ValueError):
        cauchy_spectral(phi, (1, 1), _xs(2))
    with pytest.raises(ValueError):
        cauchy_convolution(random_test_function(1, 2, 1, 1, 1, project_Phi=True), (1, 1), [(P(2, 0),)])
    with pytest.raises(ValueError):
        cauchy_convolution(random_test_function(1, 2, 2, 1, 2, project_Phi=True), (1, 1), _xs(2))


@pytest.mark.parametrize("n", [2, 3])
def test_initial_conditions(n):
    p = 2
    phi = random_test_function(7, p, n, 1, 1 if n == 2 else 0)
    xs = [tuple(P(p, a + i, -1) for i in range(n)) for a in range(4)]
    e1, e2 = initial_condition_defects(phi, xs)
    assert e1 <= 1e-9 and e2 <= 1e-9


def test_variants_coincide_for_n1():
    phi = random_test_function(3, 3, 1, 1, 1)
    xs = [(P(3, a, -1),) for a in range(3)]
    a = cauchy_radon(phi, "F1", (1, 1), xs)
    b = cauchy_radon(phi, "F2", (1, 1), xs)
    assert np.array_equal(a.values, b.values)


def test_radiality_in_t():
    phi = random_test_function(4, 3, 2, 1, 1)
    f = cauchy_radon(phi, "F2", (2, 2), _xs(3))
    assert f.radial_defect() <= 1e-12
    lines = f.to_csv().splitlines()
    assert lines[0] == "t_repr,x_repr,re,im,route"
    assert lines[1].endswith("radon:F2")


def test_huygens_on_perturbed_indicator():
    p = 2
    base = TestFunction.indicator_ball(p, 2, 0, N=0, l=1)
    bump = random_test_function(5, p, 2, 0, 1, project_Phi=True) * 0.25
    phi = base + bump
    xs = [(P(p, a), P(p, b)) for a in range(2) for b in range(2)] + [(P(p, 1, -1), P(p, 0))]
    field = cauchy_direct(phi, (3, 2), xs)
    rep = huygens_check(phi, field)
    assert rep.edge_max <= 1e-10
    assert rep.constancy_radius >= Fraction(1, p)  # nu = 1 for this grid
    rep0 = huygens_check(TestFunction.indicator_ball(p, 2, 0), cauchy_direct(TestFunction.indicator_ball(p, 2, 0), (3, 1), xs))
    assert rep0.edge_max <= 1e-10 and rep0.constancy_exponent <= 0


def test_degeneracy_fraction():
    assert symbol_degeneracy(2, 1, 6) == Fraction(1, 3) == symbol_degeneracy_closed_form(2, 1)
    assert symbol_degeneracy_brute(3, 2, 3) == symbol_degeneracy_closed_form(3, 2) == Fraction(8, 13)
    for p in (2, 3, 5):
        for n in (1, 2, 3):
            assert symbol_degeneracy(p, n, 2) == symbol_degeneracy_closed_form(p, n) > 0
    with pytest.raises(ValueError):
        symbol_degeneracy(2, 1, 0)


def test_lambda_exponent():
    assert lambda_exponent(2, 1.5) == pytest.approx(6)
    assert lambda_exponent(3, 1.2) == pytest.approx(3 * 1.2 / (3 - 2.4))
    for bad in (1.0, 2.0, 0.5):
        with pytest.raises(ValueError):
            lambda_exponent(2, bad)
    with pytest.raises(ValueError):
        lambda_exponent(1, 1.5)


def test_norm_report_and_B_t_mass():
    phi = random_test_function(2, 3, 2, 1, 1, project_Phi=True)
    rep = norm_report(phi, [1.25, 1.5], [None, -1, 0, 1, 2])
    assert len(set(rep.B_l1.values())) == 1
    assert rep.B_l1[0] == rep.B_l1_exact == Fraction(5, 3)
    assert all(np.isfinite(r["F1_ratio"]) and np.isfinite(r["F2_ratio"]) for r in rep.rows)
    one_d = norm_report(random_test_function(2, 3, 1, 1, 1), [2.0], [None, 0], routes=("F1",))
    assert all("F2_ratio" not in r for r in one_d.rows)
