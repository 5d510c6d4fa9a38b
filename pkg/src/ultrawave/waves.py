"""Plane waves and the Cauchy problem for ``D_t^alpha F = D_x^{alpha,n} F``.

Four independent routes produce the solution ``F2`` with
``(D_t^{n-1} F2)(0, .) = phi``:

* ``radon``: sphere average of Radon slices, ``phi^(u, t + u . x)``;
* ``direct``: a 1-D ``s``-integral of ``chi(-s t) R(s, x)`` where ``R`` is a
  combination of ball and sphere integrals of ``phi`` around ``x``;
* ``spectral``: ``F2~(t, xi) = ||xi||^(1-n) b(t xi) phi~(xi)`` (needs zero mean);
* ``convolution``: ``A * B_t * phi`` (needs zero mean).

All routes depend on ``t`` only through ``|t|``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._backend import kernels, parallel_map
from .fourier import fourier, inverse_fourier
from .local_field import (
    PAdicRational,
    character,
    coset_point,
    index_valuations,
    norm_exponent,
    sphere_index_array,
)
from .radon import radon_forward, required_resolution, sphere_average
from .schwartz import TestFunction
from .vladimirov import (
    BallSums,
    SampledField,
    _is_integral,
    apply_D_alpha,
    as_points,
    encode_targets,
    hypersingular_prefactor,
    kernel_tail,
    qpow,
    sphere_sums,
    symbol_table,
)

ROUTES = ("radon", "direct", "spectral", "convolution")


def _dot(omega, x) -> PAdicRational:
    s = PAdicRational(omega[0].p, 0)
    for w, c in zip(omega, x):
        s = s + w * c
    return s


def _norm_levels(p: int, n: int, N: int, l: int) -> np.ndarray:
    """Exponent ``k`` with ``||x|| = q^k`` per grid cell; ``-l`` marks the zero coset."""
    G1 = p ** (N + l)
    v1 = index_valuations(p, G1)
    minv = np.full((G1,) * n, N + l, dtype=np.int64)
    for ax in range(n):
        view = [1] * n
        view[ax] = G1
        minv = np.minimum(minv, v1.reshape(view))
    return N - minv


# --------------------------------------------------------------------------
# plane waves


@dataclass(frozen=True)
class PlaneWaveSpec:
    """``F(t, x) = f(t + omega . x)`` with ``||omega|| = 1``."""

    f: TestFunction
    omega: tuple

    def __post_init__(self) -> None:
        if self.f.n != 1:
            raise ValueError("profile must be a function of one variable")
        om = tuple(c if isinstance(c, PAdicRational) else PAdicRational.of(self.f.p, c) for c in self.omega)
        object.__setattr__(self, "omega", om)
        if norm_exponent(om) != 0:
            raise ValueError("omega must have sup-norm 1")

    @property
    def n(self) -> int:
        return len(self.omega)

    @property
    def p(self) -> int:
        return self.f.p

    def phase(self, t: PAdicRational, x) -> PAdicRational:
        return t + _dot(self.omega, x)

    def __call__(self, t: PAdicRational, x) -> complex:
        return self.f.evaluate((self.phase(t, x),))


def plane_wave_eval(spec: PlaneWaveSpec, points) -> SampledField:
    pts = [(t, tuple(x)) for t, x in points]
    vals = [spec(t, x) for t, x in pts]
    return SampledField([(t,) + x for t, x in pts], vals, {"operator": "plane_wave", "alpha": ""})


def ball_integral(g: TestFunction, center: PAdicRational, k: int) -> complex:
    """``int_{|r - center| <= q^k} g(r) dr`` for 1-D ``g``."""
    L, R = encode_targets([(center,)], g.p, g.N, g.l)
    kmax = max(k, L)
    ux, balls, ks = BallSums(g.values[None], g.p, 1, g.N, g.l).evaluate(L, R, kmax)
    if k < -g.l:
        return complex(ux[0, 0]) * float(Fraction(g.p) ** k)
    return complex(balls[0, 0, k + g.l])


def sphere_pushforward_integral(g: TestFunction, omega, k: int, n: int | None = None,
                                shift: PAdicRational | None = None) -> complex:
    """``int_{||y|| = q^k} g(shift - omega . y) d^n y`` via the pushforward of Haar
    measure under a unit linear form (uniform with density ``q^((n-1)k)`` on ``B_k``)."""
    n = len(omega) if n is None else n
    if norm_exponent(tuple(omega)) != 0:
        raise ValueError("omega must have sup-norm 1")
    shift = PAdicRational(g.p, 0) if shift is None else shift
    q = Fraction(g.p)
    hi = ball_integral(g, shift, k)
    lo = ball_integral(g, shift, k - 1)
    return float(q ** ((n - 1) * k)) * hi - float(q ** ((n - 1) * (k - 1))) * lo


def _kernel_weight(p: int, k: int, alpha, n: int) -> float:
    if _is_integral(alpha):
        return float(Fraction(p) ** (-k * (int(alpha) + n)))
    return float(p) ** (-k * (float(alpha) + n))


def planewave_dx(spec: PlaneWaveSpec, alpha, t: PAdicRational, x) -> complex:
    """``D_x^{alpha,n} F(t, x)`` by n-D coset enumeration over ``||y|| <= q^M``
    plus the exact tail from sphere pushforwards."""
    f, p, n = spec.f, spec.p, spec.n
    s = spec.phase(t, x)
    M = max(f.N, s.norm_exponent() if not s.is_zero() else f.N)
    lf = f.l
    S = (s * PAdicRational(p, 1, M)).residue(M + lf)
    om = [(c).residue(M + lf) for c in spec.omega]
    vol = float(Fraction(p) ** (-n * lf))
    weights = np.zeros(M + lf + 1)
    for i in range(1, M + lf + 1):
        weights[i] = _kernel_weight(p, i - lf, alpha, n) * vol
    near = kernels.planewave_near_field(f.values, p, n, f.N, lf, M, S, om, weights)
    # beyond M the pushforward grows like q^((n-1)k): a geometric series
    first = sphere_pushforward_integral(f, spec.omega, M + 1, n, shift=s)
    ratio = float(qpow(p, -(alpha + 1))) if _is_integral(alpha) else float(p) ** (-(float(alpha) + 1))
    far = _kernel_weight(p, M + 1, alpha, n) * first / (1 - ratio)
    fs = f.evaluate((s,))
    tail = -fs * float(kernel_tail(p, M, alpha, n))
    return float(hypersingular_prefactor(p, alpha, n)) * (near + far + tail)


def wave_residual(spec: PlaneWaveSpec, alpha, points) -> float:
    """``max |D_t^alpha F - D_x^{alpha,n} F|`` over ``(t, x)`` points.

    The ``t`` side is the 1-D operator on ``f`` at ``t + omega . x``; the ``x``
    side is a genuine n-D sum, so the comparison is not circular.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    pts = [(t, tuple(x)) for t, x in points]
    lhs = apply_D_alpha(spec.f, alpha, [spec.phase(t, x) for t, x in pts]).values
    rhs = np.array(parallel_map(lambda tx: planewave_dx(spec, alpha, tx[0], tx[1]), pts))
    return float(np.max(np.abs(lhs - rhs), initial=0.0))


# --------------------------------------------------------------------------
# kernels of the Cauchy problem


@dataclass(frozen=True)
class CauchyKernels:
    """``b``, its transform ``b~``, the Riesz-type kernel ``A`` and ``B_t``."""

    p: int
    n: int

    @property
    def q(self) -> int:
        return self.p

    def b(self, k: int | None) -> Fraction:
        """``b(z)`` with ``||z|| = q^k`` (``None`` for ``z = 0``)."""
        if k is None or k <= 0:
            return Fraction(1)
        if k == 1:
            return Fraction(-1, self.q - 1)
        return Fraction(0)

    def b_tilde(self, k: int | None) -> Fraction:
        q, n = self.q, self.n
        if k is None or k <= -1:
            return Fraction(q - q**n, q - 1)
        if k == 0:
            return Fraction(q, q - 1)
        return Fraction(0)

    @property
    def c_A(self) -> Fraction:
        q, n = Fraction(self.q), self.n
        return (1 - q ** (1 - n)) / (1 - 1 / q)

    def A(self, k: int) -> Fraction:
        """``A(x)`` at ``||x|| = q^k``."""
        return self.c_A * Fraction(self.q) ** (-k)

    def B(self, tau: int, k: int | None) -> Fraction:
        """``B_t(x)`` with ``|t| = q^tau`` and ``||x|| = q^k``."""
        kk = None if k is None else k - tau
        return Fraction(self.q) ** (-self.n * tau) * self.b_tilde(kk)

    def b_table(self) -> TestFunction:
        return TestFunction.from_radial(self.p, self.n, 1, 0, lambda k: float(self.b(k)))

    def b_tilde_table(self) -> TestFunction:
        return TestFunction.from_radial(self.p, self.n, 0, 1, lambda k: float(self.b_tilde(k)))

    def B_table(self, tau: int) -> TestFunction:
        """``B_t`` on its natural grid ``(tau, 1 - tau)``."""
        return TestFunction.from_radial(self.p, self.n, tau, 1 - tau, lambda k: float(self.B(tau, k)))

    def B_l1(self, tau: int) -> Fraction:
        """Exact ``||B_t||_1`` from grid counts of the ``B_t`` table."""
        levels = _norm_levels(self.p, self.n, tau, 1 - tau)
        vol = Fraction(self.p) ** (-self.n * (1 - tau))
        total = Fraction(0)
        for k, cnt in zip(*np.unique(levels, return_counts=True)):
            # the zero coset reads as level tau - 1, inside the inner plateau
            total += abs(self.B(tau, int(k))) * int(cnt) * vol
        return total

    def b_tilde_l1(self) -> Fraction:
        q, n = Fraction(self.q), self.n
        return abs(self.b_tilde(-1)) * q ** (-n) + abs(self.b_tilde(0)) * (1 - q ** (-n))


def kernel_duality_defect(p: int, n: int) -> float:
    """``max |F[b] - b~|`` on the natural grid."""
    ck = CauchyKernels(p, n)
    return float(np.max(np.abs(fourier(ck.b_table()).values - ck.b_tilde_table().values)))


def sphere_character_integral(p: int, n: int, s: PAdicRational, z) -> Fraction:
    """``int_{||u|| = 1} chi(s (u . z)) d^n u`` in closed form."""
    q = Fraction(p)
    if s.is_zero() or norm_exponent(tuple(z)) is None:
        return 1 - q ** (-n)
    k = s.norm_exponent() + norm_exponent(tuple(z))
    if k <= 0:
        return 1 - q ** (-n)
    if k == 1:
        return -(q ** (-n))
    return Fraction(0)


def sphere_character_brute(p: int, n: int, s: PAdicRational, z) -> complex:
    """Same integral by summing exact characters over unit-sphere cosets."""
    k = 0
    if not s.is_zero() and norm_exponent(tuple(z)) is not None:
        k = s.norm_exponent() + norm_exponent(tuple(z))
    m = max(1, k)
    vol = float(Fraction(p) ** (-n * m))
    total = 0j
    for u in sphere_index_array(p, n, m):
        total += character(s * _dot([PAdicRational(p, int(c)) for c in u], z))
    return total * vol


# --------------------------------------------------------------------------
# space-time fields


def t_grid_points(p: int, N_t: int, l_t: int) -> list[PAdicRational]:
    """Coset representatives ``j p^-N_t`` of ``B_{N_t} / p^{l_t} O``."""
    return [coset_point(p, j, N_t) for j in range(p ** (N_t + l_t))]


@dataclass(eq=False)
class SpaceTimeField:
    """``values[i, j] = F(t_i, x_j)`` on a ``t``-grid and a list of ``x`` targets."""

    p: int
    n: int
    t_params: tuple
    x_points: list
    values: np.ndarray
    route: str
    phi_id: str = ""
    metadata: dict = field(default_factory=dict)

    @property
    def t_points(self) -> list[PAdicRational]:
        return t_grid_points(self.p, *self.t_params)

    def t_levels(self) -> list[int | None]:
        return [t.norm_exponent() for t in self.t_points]

    def radial_defect(self) -> float:
        """Largest difference between rows with equal ``|t|``."""
        first: dict = {}
        worst = 0.0
        for i, k in enumerate(self.t_levels()):
            if k in first:
                worst = max(worst, float(np.max(np.abs(self.values[i] - self.values[first[k]]), initial=0.0)))
            else:
                first[k] = i
        return worst

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(["t_repr", "x_repr", "re", "im", "route"])
        xs = [";".join(c.serialize() for c in x) for x in self.x_points]
        for t, row in zip(self.t_points, self.values):
            tr = t.serialize()
            for xr, v in zip(xs, row):
                w.writerow([tr, xr, repr(float(v.real)), repr(float(v.imag)), self.route])
        return buf.getvalue()


def _field(phi, t_grid, x_targets, vals, route, **meta) -> SpaceTimeField:
    return SpaceTimeField(phi.p, phi.n, tuple(t_grid), as_points(x_targets, phi.n),
                          np.asarray(vals, dtype=np.complex128), route, meta.pop("phi_id", ""), meta)


def _require_phi_zero_mean(phi: TestFunction) -> None:
    if not phi.lizorkin_tag(1e-10).in_Phi:
        raise ValueError("this route needs a zero-mean (Lizorkin Phi) initial function")


def _level_of(t: PAdicRational) -> int | None:
    return None if t.is_zero() else t.norm_exponent()


def cauchy_radon(phi: TestFunction, variant: str, t_grid, x_targets, m: int | None = None) -> SpaceTimeField:
    """``F1`` or ``F2`` as a sphere average of Radon slices."""
    if variant not in ("F1", "F2"):
        raise ValueError("variant must be F1 or F2")
    xs = as_points(x_targets, phi.n)
    need = required_resolution(phi.N, phi.l, xs)
    m = need if m is None else m
    if m < need:
        raise ValueError(f"sphere resolution m={m} too coarse for these targets (need {need})")
    table = radon_forward(phi, m, s_margin=0)
    ts = t_grid_points(phi.p, *t_grid)
    pairs = [(t, x) for t in ts for x in xs]
    d = phi.n - 1 if (variant == "F1" and phi.n > 1) else 0
    vals = sphere_average(table, pairs, d).reshape(len(ts), len(xs))
    return _field(phi, t_grid, xs, vals, f"radon:{variant}", m=m)


def _direct_R(phi: TestFunction, xs) -> tuple[int, np.ndarray, complex]:
    """``R_j(x)`` for ``j = J0+1 .. l`` (rows: targets) and the constant
    ``R`` value for ``j <= J0``; ``|s| = q^j``."""
    p, n, l = phi.p, phi.n, phi.l
    L, R = encode_targets(xs, p, phi.N, l)
    ux, balls, ks = BallSums(phi.values[None], p, n, phi.N, l).evaluate(L, R, L + 1)
    balls = balls[0]
    J0 = -L - 1
    qn = float(Fraction(p) ** (-n))
    js = np.arange(J0 + 1, l + 1)
    ball = balls[:, -js + l]  # radius q^-j
    ball_out = balls[:, 1 - js + l]  # radius q^(1-j)
    Rj = (1 - qn) * ball - qn * (ball_out - ball)
    total = complex(phi.integrate())
    return J0, Rj, (1 - qn) * total


def cauchy_direct(phi: TestFunction, t_grid, x_targets) -> SpaceTimeField:
    """``F2`` from the 1-D ``s``-integral of ``chi(-s t) R(s, x)``."""
    if phi.n < 2:
        raise ValueError("the direct route is derived for n >= 2")
    p = phi.p
    xs = as_points(x_targets, phi.n)
    J0, Rj, Rinf = _direct_R(phi, xs)
    js = np.arange(J0 + 1, phi.l + 1)
    pref = float(1 / (1 - Fraction(1, p)))

    def a(j: int, tau: int | None) -> float:
        # q^j 1(|t| <= q^-j)
        return float(Fraction(p) ** j) if (tau is None or tau <= -j) else 0.0

    ts = t_grid_points(p, *t_grid)
    cache: dict = {}
    rows = []
    for t in ts:
        tau = _level_of(t)
        if tau not in cache:
            coeff = np.array([a(int(j), tau) - a(int(j) - 1, tau) for j in js])
            cache[tau] = pref * (Rj @ coeff + Rinf * a(J0, tau))
        rows.append(cache[tau])
    return _field(phi, t_grid, xs, rows, "direct")


def _b_symbol(p: int, levels: np.ndarray, tau: int | None) -> np.ndarray:
    # b(t xi) from the exponent of ||xi|| (zero coset: level below the grid)
    ck = CauchyKernels(p, 1)
    if tau is None:
        return np.ones(levels.shape)
    out = np.zeros(levels.shape)
    for k in np.unique(levels):
        out[levels == k] = float(ck.b(int(k) + tau))
    return out


def _targets_index(phi: TestFunction, xs) -> list:
    return [phi.index_of(x) for x in xs]


def cauchy_spectral(phi: TestFunction, t_grid, x_targets) -> SpaceTimeField:
    """``F2`` through ``F2~(t, xi) = ||xi||^(1-n) b(t xi) phi~(xi)``."""
    if phi.n < 2:
        raise ValueError("the spectral route needs n >= 2")
    _require_phi_zero_mean(phi)
    p, n = phi.p, phi.n
    xs = as_points(x_targets, n)
    ft = fourier(phi)
    riesz = symbol_table(p, n, ft.N, ft.l, 1 - n)
    levels = _norm_levels(p, n, ft.N, ft.l)
    idx = _targets_index(phi, xs)
    cache: dict = {}
    rows = []
    for t in t_grid_points(p, *t_grid):
        tau = _level_of(t)
        if tau not in cache:
            g = TestFunction(p, n, ft.N, ft.l, riesz * _b_symbol(p, levels, tau) * ft.values)
            tab = inverse_fourier(g).values
            cache[tau] = np.array([0j if i is None else tab[i] for i in idx])
        rows.append(cache[tau])
    return _field(phi, t_grid, xs, rows, "spectral")


def _riesz_at(h: TestFunction, xs, c_A: float) -> np.ndarray:
    """``(A * h)(x)``: sphere sums for radii above the grid resolution plus the
    inner ball where ``h(x - y) = h(x)``."""
    p, n, l = h.p, h.n, h.l
    ux, spheres, ks = sphere_sums(h, xs)
    w = np.array([float(Fraction(p) ** (-int(k))) for k in ks])
    inner = float((1 - Fraction(1, p**n)) * Fraction(p) ** (-(n - 1) * l) / (1 - Fraction(p) ** (1 - n)))
    return c_A * ((spheres[0] * w).sum(axis=-1) + ux[0] * inner)


def cauchy_convolution(phi: TestFunction, t_grid, x_targets) -> SpaceTimeField:
    """``F2 = A * B_t * phi``; ``B_t * phi`` by direct convolution on a common
    grid.  The ``t``-coset of 0 uses the representative ``p^l_t``, valid
    because the solution is constant in ``t`` on ``|t| <= q^-l``."""
    if phi.n < 2:
        raise ValueError("the convolution route needs n >= 2")
    _require_phi_zero_mean(phi)
    N_t, l_t = t_grid
    if l_t < phi.l:
        raise ValueError("t-grid resolution must reach the constancy exponent of phi")
    p, n = phi.p, phi.n
    xs = as_points(x_targets, n)
    ck = CauchyKernels(p, n)
    c_A = float(ck.c_A)
    ts = t_grid_points(p, *t_grid)
    taus = sorted({-l_t if t.is_zero() else t.norm_exponent() for t in ts})

    def level(tau: int) -> np.ndarray:
        Nc, lc = max(phi.N, tau), max(phi.l, 1 - tau)
        B = ck.B_table(tau).refine(Nc, lc)
        f = phi.refine(Nc, lc)
        vol = float(Fraction(p) ** (-n * lc))
        h = kernels.cyclic_convolve(B.values.reshape(-1), f.values.reshape(-1), p ** (Nc + lc), n) * vol
        return _riesz_at(TestFunction(p, n, Nc, lc, h), xs, c_A)

    by_tau = dict(zip(taus, parallel_map(level, taus)))
    rows = [by_tau[-l_t if t.is_zero() else t.norm_exponent()] for t in ts]
    return _field(phi, t_grid, xs, rows, "convolution")


def cauchy_field(route: str, phi: TestFunction, t_grid, x_targets) -> SpaceTimeField:
    if route == "radon":
        return cauchy_radon(phi, "F2", t_grid, x_targets)
    if route == "direct":
        return cauchy_direct(phi, t_grid, x_targets)
    if route == "spectral":
        return cauchy_spectral(phi, t_grid, x_targets)
    if route == "convolution":
        return cauchy_convolution(phi, t_grid, x_targets)
    raise ValueError(f"unknown route {route!r}")


def route_deltas(fields: dict) -> dict:
    """Pairwise max differences, keyed ``"a-b"`` in sorted order."""
    names = sorted(fields)
    out = {}
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            out[f"{a}-{b}"] = float(np.max(np.abs(fields[a].values - fields[b].values)))
    return out


def initial_condition_defects(phi: TestFunction, x_targets) -> tuple[float, float]:
    """``max |F1(0, x) - phi(x)|`` and ``max |(D_t^{n-1} F2)(0, x) - phi(x)|``.

    The second check builds the full ``t``-table of ``F2(., x)`` from the Radon
    route and applies the 1-D operator in ``t``.
    """
    xs = as_points(x_targets, phi.n)
    want = np.array([phi(x) for x in xs])
    zero = PAdicRational(phi.p, 0)
    F1 = cauchy_radon(phi, "F1", (0, 0), xs).values[0]
    e1 = float(np.max(np.abs(F1 - want)))
    if phi.n == 1:
        return e1, e1
    e2 = 0.0
    for x, w in zip(xs, want):
        L = max(phi.N, norm_exponent(x) or phi.N)
        F2 = cauchy_radon(phi, "F2", (L, phi.l), [x])
        g = TestFunction(phi.p, 1, L, phi.l, F2.values[:, 0])
        got = apply_D_alpha(g, phi.n - 1, [zero]).values[0]
        e2 = max(e2, abs(got - w))
    return e1, float(e2)


# --------------------------------------------------------------------------
# Huygens principle


@dataclass
class HuygensReport:
    edge_max: float
    constancy_exponent: int  # F2 is constant on |t'| <= q^-k for this k
    nu: int
    N: int
    q: int

    @property
    def constancy_radius(self) -> Fraction:
        return Fraction(self.q) ** (-self.constancy_exponent)

    def to_dict(self) -> dict:
        return {"edge_max": self.edge_max,
                "constancy_radius": str(self.constancy_radius),
                "constancy_exponent": self.constancy_exponent,
                "nu": self.nu, "N": self.N}

    @property
    def passed(self) -> bool:
        return self.edge_max <= 1e-10 and self.constancy_exponent <= self.nu


def huygens_check(phi: TestFunction, field_: SpaceTimeField, tol: float = 1e-10) -> HuygensReport:
    """Trailing edge and ``t``-constancy radius of an ``F2`` field."""
    p, N = phi.p, phi.N
    N_t, l_t = field_.t_params
    levels = field_.t_levels()
    inside = [j for j, x in enumerate(field_.x_points) if (norm_exponent(x) or -10**9) <= N]
    late = [i for i, k in enumerate(levels) if k is not None and k > N + 1]
    edge = 0.0
    if late and inside:
        edge = float(np.max(np.abs(field_.values[np.ix_(late, inside)])))
    scale = max(1.0, float(np.max(np.abs(field_.values), initial=0.0)))
    G = p ** (N_t + l_t)
    j = np.arange(G)
    best = l_t
    for k in range(l_t, -N_t - 1, -1):
        cls = j % p ** (N_t + k)
        ok = True
        for c in np.unique(cls):
            block = field_.values[cls == c]
            if np.max(np.abs(block - block[0])) > tol * scale:
                ok = False
                break
        if not ok:
            break
        best = k
    return HuygensReport(edge, best, phi.l, N, p)


# --------------------------------------------------------------------------
# symbol degeneracy


def symbol_degeneracy_closed_form(p: int, n: int) -> Fraction:
    """Haar fraction of ``B_0 x B_0^n`` where ``|tau| = ||xi||``."""
    q = Fraction(p)
    return (1 - 1 / q) * (1 - q ** (-n)) / (1 - q ** (-(n + 1)))


def symbol_degeneracy(p: int, n: int, l: int, alpha=1) -> Fraction:
    """Zero-set fraction of ``|tau|^alpha - ||xi||^alpha`` on ``B_0 x B_0^n``
    from exact coset counts at resolution ``l``.

    Coset pairs away from the origin are decided exactly; the undecided pair
    ``p^l O x p^l O^n`` is a scaled copy of the whole set, which fixes the
    fraction as ``resolved / (1 - q^(-l(n+1)))``.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if l < 1:
        raise ValueError("resolution l must be >= 1")
    lev1 = -_norm_levels(p, 1, 0, l).reshape(-1)  # -log_q |tau| (l marks the zero coset)
    levn = -_norm_levels(p, n, 0, l).reshape(-1)
    c1 = np.bincount(lev1, minlength=l + 1)
    cn = np.bincount(levn, minlength=l + 1)
    hits = sum(int(c1[k]) * int(cn[k]) for k in range(l))
    cell = Fraction(p) ** (-(n + 1) * l)
    return hits * cell / (1 - cell)


def symbol_degeneracy_brute(p: int, n: int, l: int) -> Fraction:
    """Pairwise enumeration of all coset pairs (small grids only)."""
    lev1 = -_norm_levels(p, 1, 0, l).reshape(-1)
    levn = -_norm_levels(p, n, 0, l).reshape(-1)
    hits = int(np.sum((lev1[:, None] == levn[None, :]) & (lev1[:, None] < l)))
    cell = Fraction(p) ** (-(n + 1) * l)
    return hits * cell / (1 - cell)


# --------------------------------------------------------------------------
# norms


def lambda_exponent(n: int, kappa: float) -> float:
    """``lambda = n kappa / (n - kappa (n - 1))`` for ``1 < kappa < n / (n - 1)``."""
    if n < 2:
        raise ValueError("the F2 estimate needs n >= 2")
    if not (1 < kappa < n / (n - 1)):
        raise ValueError(f"kappa={kappa} outside (1, {n}/{n - 1})")
    return n * kappa / (n - kappa * (n - 1))


def F1_slice(phi: TestFunction, tau: int | None) -> TestFunction:
    """``F1(t, .)`` with ``|t| = q^tau`` as a table: ``F1~ = b(t xi) phi~``."""
    Np = phi.N if tau is None else max(phi.N, tau)
    f = phi.refine(Np, phi.l)
    ft = fourier(f)
    levels = _norm_levels(f.p, f.n, ft.N, ft.l)
    return inverse_fourier(TestFunction(f.p, f.n, ft.N, ft.l, ft.values * _b_symbol(f.p, levels, tau)))


def F2_slice(phi: TestFunction, tau: int | None) -> TestFunction:
    _require_phi_zero_mean(phi)
    ft = fourier(phi)
    levels = _norm_levels(phi.p, phi.n, ft.N, ft.l)
    riesz = symbol_table(phi.p, phi.n, ft.N, ft.l, 1 - phi.n)
    return inverse_fourier(TestFunction(phi.p, phi.n, ft.N, ft.l, riesz * _b_symbol(phi.p, levels, tau) * ft.values))


@dataclass
class NormReport:
    rows: list
    B_l1: dict
    B_l1_exact: Fraction

    def to_dict(self) -> dict:
        return {"rows": self.rows,
                "B_t_l1": {str(k): str(v) for k, v in self.B_l1.items()},
                "b_tilde_l1": str(self.B_l1_exact)}


def norm_report(phi: TestFunction, kappas: Sequence[float], t_levels: Sequence[int | None],
                routes: Sequence[str] = ("F1", "F2")) -> NormReport:
    """Norm ratios ``||F(t, .)|| / ||phi||_kappa`` per ``|t|`` level (report only)."""
    n = phi.n
    rows = []
    for kappa in kappas:
        lam = None
        if "F2" in routes and n >= 2:
            lam = lambda_exponent(n, kappa)
        elif kappa < 1:
            raise ValueError("kappa must be >= 1")
        base = phi.lkappa_norm(kappa)
        for tau in t_levels:
            row = {"kappa": kappa, "t_exp": tau}
            if "F1" in routes:
                row["F1_ratio"] = F1_slice(phi, tau).lkappa_norm(kappa) / base
            if lam is not None:
                row["lambda"] = lam
                row["F2_ratio"] = F2_slice(phi, tau).lkappa_norm(lam) / base
            rows.append(row)
    ck = CauchyKernels(phi.p, n)
    taus = [t for t in t_levels if t is not None]
    return NormReport(rows, {t: ck.B_l1(t) for t in taus}, ck.b_tilde_l1())
