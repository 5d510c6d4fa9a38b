"""Pure numpy versions of the hot kernels (same signatures as ``_kernels``).

Used when the compiled extension is unavailable or when
``ULTRAWAVE_BACKEND=python`` is set.
"""

from __future__ import annotations

import numpy as np

from .local_field import index_valuations, roots_table


def char_sum(x, G1, sign):
    """``out[k, b] = sum_m exp(sign 2 pi i m k / G1) x[m, b]`` with exact phases."""
    x = np.ascontiguousarray(x, dtype=np.complex128)
    m = np.arange(G1, dtype=np.int64)
    phase = np.outer(m, m) % G1
    E = roots_table(G1, sign)[phase]
    return E @ x


def _axis_lookup(p, G, R, shift, G1):
    # table index of the point (R - j) * p^-M for every j, or -1 outside B_N
    d = (R - np.arange(G, dtype=np.int64)) % G
    div = p**shift
    idx = np.where(d % div == 0, d // div, -1)
    idx[idx >= G1] = -1
    return idx


def hypersingular_brute(table, p, n, N, l, M, R, weights):
    """Brute coset sum ``sum_y w(||y||) (u(x - y) - u(x))`` over ``B_M^n``.

    ``table`` is the flat value table of a function in ``D_N^l(Q_p^n)``,
    ``R`` the residues of the target at scale ``M`` (``x = R p^-M``), and
    ``weights[i]`` the weight for ``||y|| = q^(M + l - ... )``; precisely,
    index ``i = M + l - min_j v_p(j)`` (``i = 0`` is the zero coset).
    """
    table = np.asarray(table, dtype=np.complex128)
    G = p ** (M + l)
    G1 = p ** (N + l)
    vals = index_valuations(p, G)
    R = [int(r) for r in R]
    lookups = [_axis_lookup(p, G, R[i], M - N, G1) for i in range(n)]
    # u(x)
    ux_idx = [lk[0] for lk in lookups]
    ux = 0j
    if all(i >= 0 for i in ux_idx):
        ux = table[np.ravel_multi_index(ux_idx, (G1,) * n)]
    shape = (G,) * n
    flat = np.zeros(shape, dtype=np.int64)
    inside = np.ones(shape, dtype=bool)
    minv = np.full(shape, M + l, dtype=np.int64)
    for ax in range(n):
        view = [1] * n
        view[ax] = G
        lk = lookups[ax].reshape(view)
        inside &= lk >= 0
        flat = flat * G1 + np.maximum(lk, 0)
        minv = np.minimum(minv, vals.reshape(view))
    uy = np.where(inside, table[flat], 0)
    w = np.asarray(weights, dtype=np.float64)[M + l - minv]
    return complex(np.sum(w * (uy - ux)))


def planewave_near_field(f, p, n, Nf, lf, M, S, omega, weights):
    """Brute coset sum ``sum_y w(||y||) (f(s - omega.y) - f(s))`` over ``B_M^n``.

    ``s = S p^-M``; ``omega`` holds integer coordinates; the weight index is
    as in :func:`hypersingular_brute`.
    """
    f = np.asarray(f, dtype=np.complex128)
    G = p ** (M + lf)
    G1 = p ** (Nf + lf)
    vals = index_valuations(p, G)
    omega = [int(w) % G for w in omega]
    shape = (G,) * n
    acc = np.zeros(shape, dtype=np.int64)
    minv = np.full(shape, M + lf, dtype=np.int64)
    j = np.arange(G, dtype=np.int64)
    for ax in range(n):
        view = [1] * n
        view[ax] = G
        acc = (acc + (omega[ax] * j % G).reshape(view)) % G
        minv = np.minimum(minv, vals.reshape(view))
    r = (int(S) - acc) % G
    div = p ** (M - Nf)
    idx = np.where(r % div == 0, r // div, -1)
    fr = np.where(idx >= 0, f[np.maximum(idx, 0) % G1], 0)
    fs_idx = int(S) % G
    fs = f[fs_idx // div] if fs_idx % div == 0 else 0j
    w = np.asarray(weights, dtype=np.float64)[M + lf - minv]
    return complex(np.sum(w * (fr - fs)))


def cyclic_convolve(a, b, G1, n):
    """``out[x] = sum_y a[x - y] b[y]`` on the group ``(Z / G1)^n`` (flat tables)."""
    shape = (G1,) * n
    a = np.asarray(a, dtype=np.complex128).reshape(shape)
    b = np.asarray(b, dtype=np.complex128).reshape(shape)
    out = np.zeros(shape, dtype=np.complex128)
    for y in zip(*np.nonzero(b)):
        out += b[y] * np.roll(a, y, axis=tuple(range(n)))
    return out.reshape(-1)
