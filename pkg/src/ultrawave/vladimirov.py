"""Vladimirov operators ``D^alpha`` / ``D^{alpha,n}`` on finite tables.

The hypersingular form is evaluated exactly: for ``u`` in ``D_N^l`` the
integral over ``y`` splits into sup-norm spheres ``||y|| = q^k``.  Spheres
with ``k <= -l`` contribute nothing (``u(x - y) = u(x)`` there), spheres with
``-l < k <= M`` are sums of whole cosets, and the spheres beyond ``M`` form a
geometric series summed in closed form.  Sphere integrals of ``u`` around a
target are differences of ball integrals, and a ball of radius ``q^k`` around
a grid point is a residue class of indices modulo ``p^(N-k)`` along every
axis, so all ball integrals come from one pass of hierarchical aggregation.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Integral
from typing import Sequence

import numpy as np

from ._backend import kernels
from .fourier import fourier, inverse_fourier
from .local_field import PAdicRational, index_valuations, norm_exponent
from .schwartz import PHI_TOL, TestFunction


# --------------------------------------------------------------------------
# exact scalar helpers


def _is_integral(alpha) -> bool:
    if isinstance(alpha, Integral):
        return True
    if isinstance(alpha, Fraction):
        return alpha.denominator == 1
    return float(alpha).is_integer()


def qpow(q: int, x) -> float | Fraction:
    """``q**x``: exact Fraction for integer exponents, float otherwise."""
    if _is_integral(x):
        return Fraction(q) ** int(x)
    return float(q) ** float(x)


def _f(x) -> float:
    return float(x)


def hypersingular_prefactor(q: int, alpha, n: int = 1):
    """``(1 - q^alpha) / (1 - q^(-alpha-n))``."""
    return (1 - qpow(q, alpha)) / (1 - qpow(q, -alpha - n))


def kernel_sphere_integral(p: int, k: int, alpha, n: int = 1):
    """``int_{||y|| = q^k} ||y||^(-alpha-n) d^n y = q^(-k alpha) (1 - q^-n)``.

    Exact (Fraction) for integer ``alpha``.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return qpow(p, -k * alpha) * (1 - Fraction(1, p**n))


def kernel_tail(p: int, M: int, alpha, n: int = 1):
    """``int_{||y|| > q^M} ||y||^(-alpha-n) d^n y``, a geometric series."""
    if _is_integral(alpha):
        a = int(alpha)
        return (1 - Fraction(1, p**n)) * Fraction(p) ** (-(M + 1) * a) / (1 - Fraction(p) ** (-a))
    a = float(alpha)
    return (1 - p ** (-n)) * p ** (-(M + 1) * a) / (1 - p ** (-a))


# --------------------------------------------------------------------------
# target encoding


def as_points(targets, n: int) -> list[tuple]:
    out = []
    for t in targets:
        if isinstance(t, PAdicRational):
            t = (t,)
        t = tuple(t)
        if len(t) != n:
            raise ValueError(f"target {t} has wrong dimension (expected {n})")
        out.append(t)
    return out


def encode_targets(points: Sequence[tuple], p: int, N: int, l: int) -> tuple[int, np.ndarray]:
    """Common scale ``L >= N`` and residues ``R`` (shape ``(T, n)``) such that
    each target is ``R p^-L`` modulo ``p^l O^n``."""
    L = N
    for x in points:
        k = norm_exponent(x)
        if k is not None and k > L:
            L = k
    shift = PAdicRational(p, 1, L)
    R = np.array([[(c * shift).residue(L + l) for c in x] for x in points], dtype=np.int64)
    return L, R.reshape(len(points), -1)


# --------------------------------------------------------------------------
# ball and sphere integrals


class BallSums:
    """Ball integrals ``int_{||y - x|| <= q^k} u(y) dy`` for a batch of tables.

    ``tables`` has shape ``(B,) + (p**(N+l),) * n``.
    """

    def __init__(self, tables: np.ndarray, p: int, n: int, N: int, l: int):
        self.p, self.n, self.N, self.l = p, n, N, l
        self.tables = np.asarray(tables, dtype=np.complex128)
        self.B = self.tables.shape[0]
        self.vol = float(Fraction(p) ** (-n * l))
        flat = self.tables.reshape(self.B, -1)
        self.total = (flat.sum(axis=1)) * self.vol
        # aggs[k + l] is indexed by residues modulo p^(N-k), k = -l .. N-1
        self.aggs = [self.tables]
        cur = self.tables
        for _ in range(-l, N - 1):
            side = cur.shape[1]
            for ax in range(1, n + 1):
                shp = list(cur.shape)
                shp[ax : ax + 1] = [p, side // p]
                cur = cur.reshape(shp).sum(axis=ax)
            self.aggs.append(cur)

    def evaluate(self, L: int, R: np.ndarray, kmax: int | None = None):
        """Values ``u(x)`` (shape ``(B, T)``) and ball integrals for
        ``k = -l .. kmax`` (shape ``(B, T, kmax + l + 1)``).

        ``R`` has shape ``(T, n)`` (shared targets) or ``(B, T, n)``.
        """
        p, n, N, l = self.p, self.n, self.N, self.l
        kmax = L if kmax is None else kmax
        R = np.asarray(R, dtype=np.int64)
        if R.ndim == 2:
            R = np.broadcast_to(R, (self.B,) + R.shape)
        B, T, _ = R.shape
        G = p ** (L + l)
        vals = index_valuations(p, G)
        rv = vals[R % G]  # (B, T, n)
        minv = rv.min(axis=2)
        normexp = L - minv  # ||x|| = q^normexp  (zero coset reads as -l)
        inside = minv >= L - N
        idx = np.where(inside[..., None], R // p ** (L - N), 0)
        brow = np.arange(B)[:, None]
        ux = np.where(inside, self.tables[(brow,) + tuple(idx[..., i] for i in range(n))], 0)
        ks = np.arange(-l, kmax + 1)
        balls = np.empty((B, T, len(ks)), dtype=np.complex128)
        for j, k in enumerate(ks):
            if k == -l:
                balls[..., j] = ux * self.vol
            elif k < N:
                agg = self.aggs[k + l]
                mod = p ** (N - k)
                sub = idx % mod
                val = agg[(brow,) + tuple(sub[..., i] for i in range(n))] * self.vol
                balls[..., j] = np.where(inside, val, 0)
            else:
                balls[..., j] = np.where(inside | (normexp <= k), self.total[:, None], 0)
        return ux, balls, ks


def sphere_sums(u: TestFunction | np.ndarray, targets, *, p=None, n=None, N=None, l=None,
                encoded=None, kmax=None):
    """``int_{||y|| = q^k} u(x - y) dy`` for ``k = -l+1 .. kmax`` at each target.

    Returns ``(ux, spheres, ks)`` with batch axis first.
    """
    if isinstance(u, TestFunction):
        p, n, N, l = u.p, u.n, u.N, u.l
        tables = u.values[None]
    else:
        tables = u
    bs = BallSums(tables, p, n, N, l)
    if encoded is None:
        L, R = encode_targets(as_points(targets, n), p, N, l)
    else:
        L, R = encoded
    ux, balls, ks = bs.evaluate(L, R, kmax)
    return ux, balls[..., 1:] - balls[..., :-1], ks[1:]


def _hypersingular_from_spheres(ux, spheres, ks, p, n, alpha, M):
    # sphere levels ks run up to M; the closed-form tail covers ||y|| > q^M
    q = p
    exact = _is_integral(alpha)
    if not len(ks):
        tail = -ux * _f(kernel_tail(p, M, alpha, n))
        return _f(hypersingular_prefactor(q, alpha, n)) * tail
    if exact:
        wm = [qpow(q, -int(k) * (int(alpha) + n)) for k in ks]
        w = np.array([_f(x) for x in wm])
        wmu = _f(sum(x * Fraction(q) ** (n * int(k)) for x, k in zip(wm, ks)) * (1 - Fraction(1, q**n)))
    else:
        w = np.array([float(q) ** (-int(k) * (float(alpha) + n)) for k in ks])
        wmu = math.fsum(w[i] * float(q) ** (n * int(k)) for i, k in enumerate(ks)) * (1 - q ** (-n))
    body = (spheres * w).sum(axis=-1) - ux * wmu
    tail = -ux * _f(kernel_tail(p, M, alpha, n))
    return _f(hypersingular_prefactor(q, alpha, n)) * (body + tail)


# --------------------------------------------------------------------------
# sampled output


@dataclass
class SampledField:
    """Complex values attached to exact evaluation points."""

    points: list
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.complex128).reshape(-1)
        if len(self.points) != len(self.values):
            raise ValueError("points and values differ in length")

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(["point", "re", "im", "operator", "alpha"])
        op = self.metadata.get("operator", "")
        alpha = self.metadata.get("alpha", "")
        for x, v in zip(self.points, self.values):
            pt = ";".join(c.serialize() for c in (x if isinstance(x, tuple) else (x,)))
            w.writerow([pt, repr(float(v.real)), repr(float(v.imag)), op, alpha])
        return buf.getvalue()


# --------------------------------------------------------------------------
# operators


def apply_D_alpha_n(u: TestFunction, alpha, targets) -> SampledField:
    """Hypersingular ``D^{alpha,n} u`` at exact targets (closed-form tail)."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    pts = as_points(targets, u.n)
    L, R = encode_targets(pts, u.p, u.N, u.l)
    ux, spheres, ks = sphere_sums(u, None, encoded=(L, R))
    vals = _hypersingular_from_spheres(ux[0], spheres[0], ks, u.p, u.n, alpha, L)
    return SampledField(pts, vals, {"operator": f"D^{{alpha,{u.n}}}", "alpha": alpha})


def apply_D_alpha(u: TestFunction, alpha, targets) -> SampledField:
    """1-D operator ``D^alpha``; the same code path as ``apply_D_alpha_n``."""
    if u.n != 1:
        raise ValueError("apply_D_alpha acts on functions of one variable")
    out = apply_D_alpha_n(u, alpha, targets)
    out.metadata["operator"] = "D^alpha"
    return out


def apply_D_alpha_batch(tables: np.ndarray, p: int, N: int, l: int, alpha, L: int,
                        R: np.ndarray) -> np.ndarray:
    """``D^alpha`` of many 1-D tables (``(B, G1)``), each at its own targets
    ``R`` (``(B, T, 1)``) on the common scale ``L``."""
    ux, spheres, ks = sphere_sums(tables, None, p=p, n=1, N=N, l=l, encoded=(L, R))
    return _hypersingular_from_spheres(ux, spheres, ks, p, 1, alpha, L)


def hypersingular_coset_sum(u: TestFunction, alpha, x: Sequence[PAdicRational]) -> complex:
    """Brute-force ``D^{alpha,n} u (x)``: every coset of ``B_M^n`` at resolution
    ``l`` is visited (compiled kernel when available), plus the closed-form
    tail.  Independent oracle for :func:`apply_D_alpha_n`."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    p, n, N, l = u.p, u.n, u.N, u.l
    (x,) = as_points([x], n)
    L, R = encode_targets([x], p, N, l)
    M = L
    exact = _is_integral(alpha)
    weights = np.zeros(M + l + 1)
    vol = Fraction(p) ** (-n * l)
    for i in range(1, M + l + 1):
        k = -l + i
        w = qpow(p, -k * (alpha + n)) if exact else float(p) ** (-k * (float(alpha) + n))
        weights[i] = _f(w * vol) if exact else w * float(vol)
    body = kernels.hypersingular_brute(u.values.reshape(-1), p, n, N, l, M, R[0], weights)
    ux = u.evaluate(x)
    tail = -ux * _f(kernel_tail(p, M, alpha, n))
    return _f(hypersingular_prefactor(p, alpha, n)) * (body + tail)


def symbol_table(p: int, n: int, N: int, l: int, power) -> np.ndarray:
    """``||xi||^power`` on the grid ``(N, l)``; zero on the coset of 0."""
    G1 = p ** (N + l)
    v1 = index_valuations(p, G1)
    minv = np.full((G1,) * n, N + l, dtype=np.int64)
    for ax in range(n):
        view = [1] * n
        view[ax] = G1
        minv = np.minimum(minv, v1.reshape(view))
    exps = N - minv
    levels = {int(e): _f(qpow(p, int(e) * power) if _is_integral(power)
                        else float(p) ** (int(e) * float(power))) for e in np.unique(exps)}
    out = np.vectorize(lambda e: levels[int(e)], otypes=[np.float64])(exps)
    out[minv == N + l] = 0.0
    return out


def apply_spectral(u: TestFunction, alpha, method: str = "auto") -> TestFunction:
    """``F^-1[ ||xi||^alpha F u ]`` for ``u`` in Phi; stays in ``D_N^l``."""
    scale = max(1.0, u.lkappa_norm(1))
    if abs(u.integrate()) > 1e-10 * scale:
        raise ValueError("apply_spectral needs a zero-mean (Lizorkin Phi) input")
    ut = fourier(u, method)
    sym = symbol_table(u.p, u.n, ut.N, ut.l, alpha)
    return inverse_fourier(TestFunction(u.p, u.n, ut.N, ut.l, ut.values * sym), method)


# --------------------------------------------------------------------------
# radial eigenfunctions


@dataclass(frozen=True)
class EigenProfile:
    """Radial eigenfunction of ``D^alpha`` with eigenvalue ``q^(alpha N)``:
    ``c q^N (1 - 1/q)`` on ``|x| <= q^-N``, ``-c q^(N-1)`` on ``|x| = q^(1-N)``."""

    p: int
    N: int
    c: complex
    alpha: float

    @property
    def eigenvalue(self) -> float:
        return _f(qpow(self.p, self.alpha * self.N) if _is_integral(self.alpha)
                  else float(self.p) ** (float(self.alpha) * self.N))

    @classmethod
    def normalized(cls, p: int, N: int, alpha) -> "EigenProfile":
        """The profile with ``u(0) = 1``."""
        c = float(Fraction(p) ** (-N) / (1 - Fraction(1, p)))
        return cls(p, N, c, alpha)

    def plateau(self) -> complex:
        return self.c * float(Fraction(self.p) ** self.N * (1 - Fraction(1, self.p)))

    def ring(self) -> complex:
        return -self.c * float(Fraction(self.p) ** (self.N - 1))

    def to_test_function(self) -> TestFunction:
        vals = np.full(self.p, self.ring(), dtype=np.complex128)
        vals[0] = self.plateau()
        return TestFunction(self.p, 1, -self.N + 1, self.N, vals)

    def __call__(self, x: PAdicRational) -> complex:
        k = x.norm_exponent()
        if k is None or k <= -self.N:
            return self.plateau()
        if k == -self.N + 1:
            return self.ring()
        return 0j


def window_targets(p: int, exponents: Sequence[int]) -> list[PAdicRational]:
    """0 plus three points on each sphere ``|x| = q^k``."""
    pts = [PAdicRational(p, 0)]
    for k in exponents:
        for unit in (1, p - 1, 1 + p):
            pts.append(PAdicRational(p, unit, -k))
    return pts


def eigen_residual(p: int, N: int, alpha, window: Sequence[int] | None = None,
                   c: complex | None = None) -> float:
    """``max |D^alpha u - q^(alpha N) u|`` over window targets for the radial
    profile (``c`` defaults to the ``u(0) = 1`` normalization)."""
    if window is None:
        window = range(-N - 2, -N + 4)
    if max(window) < -N + 2:
        raise ValueError("window must reach |x| = q^(2-N)")
    prof = EigenProfile.normalized(p, N, alpha) if c is None else EigenProfile(p, N, c, alpha)
    if prof.c == 0:
        return 0.0
    u = prof.to_test_function()
    pts = window_targets(p, window)
    got = apply_D_alpha(u, alpha, pts).values
    want = np.array([prof(x) for x in pts]) * prof.eigenvalue
    return float(np.max(np.abs(got - want)))


@dataclass
class NullspaceResult:
    dimension: int
    match_error: float
    singular_values: np.ndarray
    null_vector: np.ndarray
    weights: np.ndarray
    window: tuple


class WindowTooSmall(ValueError):
    pass


def radial_operator_matrix(p: int, alpha, window_M: int, window_l: int) -> tuple[np.ndarray, np.ndarray]:
    """``D^alpha`` compressed to radial functions on the window.

    Basis: indicator of ``B_{-window_l}`` followed by indicators of the spheres
    ``|x| = q^k`` for ``k = -window_l + 1 .. window_M``; each image is sampled
    at one point of the same sets.  Returns ``(T, measures)``.
    """
    L, M = window_l, window_M
    levels = [None] + list(range(-L + 1, M + 1))
    basis = []
    for lev in levels:
        if lev is None:
            basis.append(TestFunction.from_radial(p, 1, M, L, lambda k: 1.0 if k is None else 0.0))
        else:
            basis.append(TestFunction.from_radial(p, 1, M, L, lambda k, lev=lev: 1.0 if k == lev else 0.0))
    pts = [PAdicRational(p, 0)] + [PAdicRational(p, 1, -k) for k in levels[1:]]
    T = np.column_stack([apply_D_alpha(b, alpha, pts).values for b in basis])
    meas = [float(Fraction(p) ** (-L))] + [float(Fraction(p) ** k * (1 - Fraction(1, p))) for k in levels[1:]]
    return T, np.array(meas)


def radial_nullspace_check(p: int, alpha, N: int, window_M: int, window_l: int,
                           tol: float = 1e-10) -> NullspaceResult:
    """Null space of ``T - q^(alpha N) I`` on the truncated radial window.

    Works in L2-weighted coordinates; ``match_error`` is the sine of the angle
    between the computed null vector and the closed-form radial profile.
    """
    if -N + 1 > window_M or N > window_l:
        raise WindowTooSmall(f"profile of level {N} leaks outside window (M={window_M}, l={window_l})")
    T, meas = radial_operator_matrix(p, alpha, window_M, window_l)
    lam = EigenProfile.normalized(p, N, alpha).eigenvalue
    sq = np.sqrt(meas)
    A = (T - lam * np.eye(len(meas))) * sq[:, None] / sq[None, :]
    _, s, vh = np.linalg.svd(A)
    dim = int(np.sum(s <= tol * s[0]))
    v = vh[-1].conj()
    prof = EigenProfile.normalized(p, N, alpha)
    levels = [-window_l] + list(range(-window_l + 1, window_M + 1))
    pv = np.array([prof(PAdicRational(p, 1, -k)) if k > -window_l else prof.plateau() for k in levels])
    pw = pv * sq
    # sine of the angle as the norm of the orthogonal component (no cancellation)
    u = pw / np.linalg.norm(pw)
    vv = v / np.linalg.norm(v)
    err = float(np.linalg.norm(u - np.vdot(vv, u) * vv))
    return NullspaceResult(dim, err, s, v / sq, meas, (window_M, window_l))
