# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.  Signatures mirror ``_fallback``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, M_PI

cnp.import_array()


cdef cnp.ndarray _valuations(long p, long G):
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.zeros(G, dtype=np.int64)
    cdef long step = p
    cdef long j
    while step <= G:
        for j in range(0, G, step):
            out[j] += 1
        step *= p
    return out


cdef cnp.ndarray _roots(long G, long sign):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(G, dtype=np.complex128)
    cdef long r, rr
    cdef double ang
    for r in range(G):
        rr = (sign * r) % G
        if rr < 0:
            rr += G
        if 2 * rr > G:
            rr -= G
        if rr == 0:
            out[r] = 1.0
        elif 2 * rr == G:
            out[r] = -1.0
        elif 4 * rr == G:
            out[r] = 1j
        elif 4 * rr == -G:
            out[r] = -1j
        else:
            ang = 2.0 * M_PI * rr / G
            out[r] = cos(ang) + 1j * sin(ang)
    return out


def char_sum(x, long G1, long sign):
    # exact phases filled in C; the product itself goes to BLAS, which beats a hand loop
    xx = np.ascontiguousarray(x, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] roots = _roots(G1, sign)
    cdef double complex[::1] rv = roots
    E = np.empty((G1, G1), dtype=np.complex128)
    cdef double complex[:, ::1] ev = E
    cdef long k, m, ph
    with nogil:
        for k in range(G1):
            ph = 0
            for m in range(G1):
                ev[k, m] = rv[ph]
                ph = ph + k
                if ph >= G1:
                    ph = ph - G1
    return E @ xx


def hypersingular_brute(table, long p, long n, long N, long l, long M, R, weights):
    cdef const double complex[::1] tv = np.ascontiguousarray(table, dtype=np.complex128)
    cdef const double[::1] wv = np.ascontiguousarray(weights, dtype=np.float64)
    cdef long G = p ** (M + l)
    cdef long G1 = p ** (N + l)
    cdef long div = p ** (M - N)
    cdef long[::1] vals = _valuations(p, G)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] look = np.empty((n, G), dtype=np.int64)
    cdef long i, j, d, c, total, rem, flat, minv, ok
    cdef double complex ux = 0, acc = 0
    Rl = [int(r) for r in R]
    for i in range(n):
        for j in range(G):
            d = (Rl[i] - j) % G
            if d % div == 0 and d // div < G1:
                look[i, j] = d // div
            else:
                look[i, j] = -1
    cdef long[:, ::1] lk = look
    ok = 1
    flat = 0
    for i in range(n):
        if lk[i, 0] < 0:
            ok = 0
        else:
            flat = flat * G1 + lk[i, 0]
    if ok:
        ux = tv[flat]
    total = G ** n
    with nogil:
        for c in range(1, total):
            rem = c
            flat = 0
            ok = 1
            minv = M + l
            # most significant digit is axis 0
            for i in range(n - 1, -1, -1):
                j = rem % G
                rem = rem // G
                if vals[j] < minv:
                    minv = vals[j]
                if lk[i, j] < 0:
                    ok = 0
            if ok:
                rem = c
                flat = 0
                d = 1
                for i in range(n - 1, -1, -1):
                    j = rem % G
                    rem = rem // G
                    flat = flat + lk[i, j] * d
                    d = d * G1
                acc = acc + wv[M + l - minv] * (tv[flat] - ux)
            else:
                acc = acc - wv[M + l - minv] * ux
    return complex(acc)


def planewave_near_field(f, long p, long n, long Nf, long lf, long M, long S, omega, weights):
    cdef const double complex[::1] fv = np.ascontiguousarray(f, dtype=np.complex128)
    cdef const double[::1] wv = np.ascontiguousarray(weights, dtype=np.float64)
    cdef long G = p ** (M + lf)
    cdef long G1 = p ** (Nf + lf)
    cdef long div = p ** (M - Nf)
    cdef long[::1] vals = _valuations(p, G)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] om = np.array([int(w) % G for w in omega], dtype=np.int64)
    cdef long[::1] omv = om
    cdef long i, j, c, rem, minv, r, s0
    cdef double complex fs = 0, fr, acc = 0
    s0 = S % G
    if s0 % div == 0:
        fs = fv[(s0 // div) % G1]
    cdef long total = G ** n
    with nogil:
        for c in range(1, total):
            rem = c
            minv = M + lf
            r = s0
            for i in range(n - 1, -1, -1):
                j = rem % G
                rem = rem // G
                if vals[j] < minv:
                    minv = vals[j]
                r = (r - (omv[i] * j) % G) % G
            if r < 0:
                r = r + G
            if r % div == 0:
                fr = fv[(r // div) % G1]
            else:
                fr = 0
            acc = acc + wv[M + lf - minv] * (fr - fs)
    return complex(acc)


def cyclic_convolve(a, b, long G1, long n):
    cdef const double complex[::1] av = np.ascontiguousarray(a, dtype=np.complex128)
    cdef const double complex[::1] bv = np.ascontiguousarray(b, dtype=np.complex128)
    cdef long total = G1 ** n
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.zeros(total, dtype=np.complex128)
    cdef double complex[::1] ov = out
    cdef long x, y, i, rx, ry, d, flat, mult
    with nogil:
        for y in range(total):
            if bv[y] == 0:
                continue
            for x in range(total):
                rx = x
                ry = y
                flat = 0
                mult = 1
                for i in range(n):
                    d = (rx % G1 - ry % G1) % G1
                    if d < 0:
                        d = d + G1
                    flat = flat + d * mult
                    mult = mult * G1
                    rx = rx // G1
                    ry = ry // G1
                ov[x] = ov[x] + av[flat] * bv[y]
    return out
