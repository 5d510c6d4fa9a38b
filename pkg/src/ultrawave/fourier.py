"""Fourier transform on Q_p^n as an exact finite character sum.

For ``f`` in ``D_N^l`` the transform lies in ``D_l^N``.  With grid points
``x = m p^-N`` and ``xi = k p^-l`` the phase of ``chi(x xi)`` is the exact
rational ``(m k mod p^(N+l)) / p^(N+l)``, so along each axis the transform is
a character sum over the cyclic group ``Z / p^(N+l)``.

Two evaluation paths: the direct character sum (the baseline, compiled when
available) and a digit-recursive path that splits off one base-p digit per
stage.  ``method="auto"`` uses the digit path for long axes.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from ._backend import kernels
from .local_field import PAdicRational, character, roots_table
from .schwartz import TestFunction

DIRECT_MAX = 64


def _direct_axis(x: np.ndarray, G1: int, sign: int) -> np.ndarray:
    return kernels.char_sum(x, G1, sign)


def _digit_axis(x: np.ndarray, p: int, G1: int, sign: int) -> np.ndarray:
    # X[k] = sum_r w^(r k) Y_r[k mod G1/p],  Y_r = transform of x[p m' + r]
    if G1 <= p:
        return _direct_axis(x, G1, sign)
    B = x.shape[1]
    H = G1 // p
    sub = x.reshape(H, p, B).reshape(H, p * B)
    Y = _digit_axis(np.ascontiguousarray(sub), p, H, sign).reshape(H, p, B)
    k = np.arange(G1, dtype=np.int64)
    r = np.arange(p, dtype=np.int64)
    twiddle = roots_table(G1, sign)[np.outer(k, r) % G1]
    return np.einsum("kr,krb->kb", twiddle, Y[k % H])


def transform_columns(x: np.ndarray, p: int, sign: int, method: str = "auto") -> np.ndarray:
    """Unscaled 1-D character sum of every column of ``x`` (shape ``(G1, B)``)."""
    x = np.ascontiguousarray(x, dtype=np.complex128)
    G1 = x.shape[0]
    if G1 == 1:
        return x.copy()
    if method not in ("auto", "direct", "digits"):
        raise ValueError(f"unknown method {method!r}")
    if method == "digits" or (method == "auto" and G1 > DIRECT_MAX):
        return _digit_axis(x, p, G1, sign)
    return _direct_axis(x, G1, sign)


def transform_axes(values: np.ndarray, p: int, sign: int, method: str = "auto") -> np.ndarray:
    """Unscaled character sum along every axis of an n-D table."""
    out = np.asarray(values, dtype=np.complex128)
    n = out.ndim
    G1 = out.shape[0]
    if G1 == 1:
        return out.copy()
    for ax in range(n):
        moved = np.moveaxis(out, ax, 0)
        shape = moved.shape
        flat = np.ascontiguousarray(moved.reshape(G1, -1))
        use_digits = method == "digits" or (method == "auto" and G1 > DIRECT_MAX)
        if method not in ("auto", "direct", "digits"):
            raise ValueError(f"unknown method {method!r}")
        res = _digit_axis(flat, p, G1, sign) if use_digits else _direct_axis(flat, G1, sign)
        out = np.moveaxis(res.reshape(shape), 0, ax)
    return np.ascontiguousarray(out)


def _transform(f: TestFunction, sign: int, method: str) -> TestFunction:
    vals = transform_axes(f.values, f.p, sign, method)
    scale = float(Fraction(f.p) ** (-f.n * f.l))
    return TestFunction(f.p, f.n, f.l, f.N, vals * scale)


def fourier(f: TestFunction, method: str = "auto") -> TestFunction:
    """``f~(xi) = int chi(x . xi) f(x) dx``; maps ``D_N^l`` to ``D_l^N``."""
    return _transform(f, +1, method)


def inverse_fourier(g: TestFunction, method: str = "auto") -> TestFunction:
    """``f(x) = int chi(-x . xi) g(xi) dxi``."""
    return _transform(g, -1, method)


def fourier_at(f: TestFunction, xi: Sequence[PAdicRational], sign: int = 1) -> complex:
    """Pointwise transform at an arbitrary ``xi`` via exact characters.

    Independent of the table transforms.  When ``||xi|| > q^l`` the table is
    first refined until the character is constant on every coset, so values
    outside ``B_l^n`` are computed, not assumed to vanish.
    """
    p, n = f.p, f.n
    k = max((c.norm_exponent() for c in xi if not c.is_zero()), default=None)
    if k is not None and k > f.l:
        f = f.refine(f.N, k)
    vol = float(Fraction(p) ** (-n * f.l))
    total = 0j
    for x, v in zip(f.cosets(), f.values.reshape(-1)):
        if v == 0:
            continue
        s = PAdicRational(p, 0)
        for xc, xic in zip(x, xi):
            s = s + xc * xic
        total += character(s * sign) * v
    return total * vol


def plancherel_defect(f: TestFunction) -> float:
    return abs(f.lkappa_norm(2) - fourier(f).lkappa_norm(2))
