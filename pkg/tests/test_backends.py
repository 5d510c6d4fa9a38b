import numpy as np
import pytest

from ultrawave._backend import available_backends

BACKENDS = available_backends()
needs_compiled = pytest.mark.skipif("compiled" not in BACKENDS, reason="extension not built")


def _pair():
    return BACKENDS["python"], BACKENDS["compiled"]


@needs_compiled
@pytest.mark.parametrize("G1,sign", [(8, 1), (27, -1), (25, 1)])
def test_char_sum_parity(G1, sign):
    rng = np.random.default_rng(G1)
    x = rng.normal(size=(G1, 3)) + 1j * rng.normal(size=(G1, 3))
    py, cy = _pair()
    assert np.allclose(py.char_sum(x, G1, sign), cy.char_sum(x, G1, sign), atol=1e-12)


@needs_compiled
@pytest.mark.parametrize("p,n,N,l,M", [(2, 2, 1, 1, 2), (3, 1, 0, 2, 1), (3, 2, 1, 0, 2)])
def test_hypersingular_parity(p, n, N, l, M):
    rng = np.random.default_rng(p + n)
    table = rng.normal(size=p ** (n * (N + l))) + 0j
    weights = rng.normal(size=M + l + 1)
    R = [int(r) for r in rng.integers(0, p ** (M + l), size=n)]
    py, cy = _pair()
    a = py.hypersingular_brute(table, p, n, N, l, M, R, weights)
    b = cy.hypersingular_brute(table, p, n, N, l, M, R, weights)
    assert abs(a - b) <= 1e-12 * max(1.0, abs(a))


@needs_compiled
@pytest.mark.parametrize("p,n,M", [(2, 2, 2), (3, 3, 1), (2, 1, 3)])
def test_planewave_parity(p, n, M):
    rng = np.random.default_rng(p * n)
    Nf, lf = 1, 1
    f = rng.normal(size=p ** (Nf + lf)) + 1j * rng.normal(size=p ** (Nf + lf))
    omega = [1] + [int(w) for w in rng.integers(0, 9, size=n - 1)]
    weights = rng.normal(size=M + lf + 1)
    py, cy = _pair()
    for S in (0, 1, 5):
        a = py.planewave_near_field(f, p, n, Nf, lf, M, S, omega, weights)
        b = cy.planewave_near_field(f, p, n, Nf, lf, M, S, omega, weights)
        assert abs(a - b) <= 1e-12 * max(1.0, abs(a))


@needs_compiled
@pytest.mark.parametrize("G1,n", [(4, 2), (9, 2), (8, 1)])
def test_convolution_parity(G1, n):
    rng = np.random.default_rng(G1 * n)
    a = rng.normal(size=G1**n) + 0j
    b = rng.normal(size=G1**n) * (rng.random(G1**n) < 0.4)
    py, cy = _pair()
    assert np.allclose(py.cyclic_convolve(a, b, G1, n), cy.cyclic_convolve(a, b, G1, n), atol=1e-12)


def test_fallback_convolution_against_fft():
    rng = np.random.default_rng(0)
    a, b = rng.normal(size=(2, 27))
    want = np.real(np.fft.ifft(np.fft.fft(a) * np.fft.fft(b)))
    got = BACKENDS["python"].cyclic_convolve(a, b, 27, 1).real
    assert np.allclose(got, want, atol=1e-12)
