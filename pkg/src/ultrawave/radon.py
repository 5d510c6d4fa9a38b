"""Radon transform on Q_p^n through the Fourier-slice identity.

``phi^(eta, r) = int chi(-s r) phi~(s eta) ds``.  For ``phi`` in ``D_N^l`` the
transform ``phi~`` lies in ``D_l^N``; on a unit vector ``eta`` the slice
``s -> phi~(s eta)`` is a 1-D table on ``(l, N)`` and its inverse transform, a
1-D function in ``D_N^l``, is the Radon slice.  Unit vectors are grouped into
cosets of ``p^m O^n``; ``m >= N + l`` makes every slice constant on a coset.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .fourier import fourier, inverse_fourier, transform_columns
from .local_field import PAdicRational, coset_point, norm_exponent, sphere_index_array
from .schwartz import TestFunction
from .vladimirov import SampledField, apply_D_alpha_batch, as_points, sphere_sums


class ResolutionError(ValueError):
    """Sphere resolution too coarse for some targets."""

    def __init__(self, required: int, have: int, targets: list):
        self.required, self.have, self.targets = required, have, targets
        shown = ", ".join(";".join(c.serialize() for c in x) for x in targets[:5])
        super().__init__(f"sphere resolution m={have} too coarse; need m >= {required} for: {shown}")


def joint_constancy_bound(N: int, l: int) -> int:
    """Smallest ``m`` with ``phi~(s eta)`` constant on ``eta``-cosets."""
    return max(N + l, 1)


def required_resolution(N: int, l: int, targets: Sequence[tuple] = ()) -> int:
    """``m`` needed to invert at the targets: ``eta . x`` must also be constant
    modulo ``p^l`` on each ``eta``-coset, i.e. ``m >= l + log_q ||x||``."""
    m = joint_constancy_bound(N, l)
    for x in targets:
        k = norm_exponent(x)
        if k is not None:
            m = max(m, l + k)
    return m


@dataclass(eq=False)
class RadonTable:
    """``values[i, j]`` is ``phi^(eta_i, s_j)`` with ``s_j = j p^-N_s``."""

    p: int
    n: int
    m: int
    N_s: int
    l_s: int
    etas: np.ndarray
    values: np.ndarray
    support_exp: int  # phi vanishes outside ||x|| <= q^support_exp

    @property
    def eta_volume(self) -> float:
        return float(Fraction(self.p) ** (-self.n * self.m))

    def slice(self, i: int) -> TestFunction:
        return TestFunction(self.p, 1, self.N_s, self.l_s, self.values[i])

    def eta_point(self, i: int) -> tuple:
        return tuple(PAdicRational(self.p, int(c)) for c in self.etas[i])

    def __add__(self, other: "RadonTable") -> "RadonTable":
        if (self.p, self.n, self.m, self.N_s, self.l_s) != (other.p, other.n, other.m, other.N_s, other.l_s):
            raise ValueError("tables live on different grids")
        return RadonTable(self.p, self.n, self.m, self.N_s, self.l_s, self.etas,
                          self.values + other.values, max(self.support_exp, other.support_exp))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["eta_repr", "s_repr", "re", "im"])
        s_repr = [coset_point(self.p, j, self.N_s).serialize() for j in range(self.values.shape[1])]
        for i, eta in enumerate(self.etas):
            er = ";".join(PAdicRational(self.p, int(c)).serialize() for c in eta)
            for j, v in enumerate(self.values[i]):
                w.writerow([er, s_repr[j], repr(float(v.real)), repr(float(v.imag))])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({
            "n": self.n, "p": self.p, "m": self.m, "N_s": self.N_s, "l_s": self.l_s,
            "support_exp": self.support_exp,
            "etas": self.etas.tolist(),
            "values": [[[float(v.real), float(v.imag)] for v in row] for row in self.values],
        })

    @classmethod
    def from_json(cls, text: str) -> "RadonTable":
        d = json.loads(text)
        vals = np.array([[complex(a, b) for a, b in row] for row in d["values"]], dtype=np.complex128)
        return cls(d["p"], d["n"], d["m"], d["N_s"], d["l_s"],
                   np.array(d["etas"], dtype=np.int64).reshape(-1, d["n"]), vals, d["support_exp"])


def _slices(phi_t: TestFunction, etas: np.ndarray) -> np.ndarray:
    # phi~(s eta) for s = j p^-l, as rows over eta; phi_t lives on (l, N)
    G1 = phi_t.G1
    j = np.arange(G1, dtype=np.int64)
    idx = (j[None, :, None] * (etas[:, None, :] % G1)) % G1
    return phi_t.values[tuple(idx[..., i] for i in range(phi_t.n))]


def radon_forward(phi: TestFunction, m: int | None = None, s_margin: int = 1) -> RadonTable:
    """Radon slices of ``phi`` over all unit-sphere cosets at resolution ``m``.

    ``s_margin`` widens the ``s``-grid beyond ``|s| <= q^N`` so the support
    bound is observed in the table rather than built in.
    """
    p, n, N, l = phi.p, phi.n, phi.N, phi.l
    need = joint_constancy_bound(N, l)
    m = need if m is None else m
    if m < need:
        raise ValueError(f"sphere resolution m={m} below the joint-constancy bound {need}")
    if s_margin < 0:
        raise ValueError("s_margin must be non-negative")
    etas = sphere_index_array(p, n, m)
    g = _slices(fourier(phi), etas)  # rows: 1-D tables on (l, N)
    if s_margin:
        G1 = p ** (N + l)
        big = p ** (N + l + s_margin)
        k = np.arange(big)
        g = g[:, k % G1]  # same function on (l, N + s_margin)
    Ns = N + s_margin
    vals = transform_columns(g.T, p, -1).T * float(Fraction(p) ** (-Ns))
    return RadonTable(p, n, m, Ns, l, etas, vals, N)


def radon_at(phi: TestFunction, xi: Sequence[PAdicRational], r: PAdicRational) -> complex:
    """``phi^(xi, r)`` for any nonzero ``xi``; the slice lies in
    ``D_{N+j}^{l-j}`` where ``||xi|| = q^j``."""
    p, n, N, l = phi.p, phi.n, phi.N, phi.l
    j = norm_exponent(tuple(xi))
    if j is None:
        raise ValueError("xi must be nonzero")
    G1 = p ** (N + l)
    scale = PAdicRational(p, 1, j)
    e = np.array([[(c * scale).residue(N + l) for c in xi]], dtype=np.int64)
    g = _slices(fourier(phi), e)[0]
    sl = inverse_fourier(TestFunction(p, 1, l - j, N + j, g))
    return sl.evaluate((r,))


# --------------------------------------------------------------------------
# evaluating sums over the unit sphere


def _shift_residues(table: RadonTable, pairs: Sequence[tuple]) -> tuple[int, np.ndarray]:
    """Encode ``r = t + eta . x`` for every ``eta`` and every ``(t, x)`` pair."""
    p, N, l = table.p, table.N_s, table.l_s
    L = N
    for t, x in pairs:
        for k in (t.norm_exponent(), norm_exponent(x)):
            if k is not None and k > L:
                L = k
    G = p ** (L + l)
    shift = PAdicRational(p, 1, L)
    T = np.array([(t * shift).residue(L + l) for t, _ in pairs], dtype=object)
    X = np.array([[(c * shift).residue(L + l) for c in x] for _, x in pairs], dtype=object)
    # residues can exceed int64 range only for absurd grids; reduce in Python ints
    R = (np.asarray(T, dtype=object)[None, :] + table.etas.astype(object) @ X.T) % G
    return L, R.astype(np.int64)[..., None]


def sphere_average(table: RadonTable, pairs: Sequence[tuple], d_order=0) -> np.ndarray:
    """``(1 - 1/q)^-1 sum_eta vol(eta) (D^d phi^(eta, .))(t + eta . x)``.

    ``pairs`` holds ``(t, x)``; ``d_order = 0`` skips the operator.
    """
    L, R = _shift_residues(table, pairs)
    if d_order:
        vals = apply_D_alpha_batch(table.values, table.p, table.N_s, table.l_s, d_order, L, R)
    else:
        ux, _, _ = sphere_sums(table.values, None, p=table.p, n=1, N=table.N_s, l=table.l_s,
                               encoded=(L, R), kmax=-table.l_s)
        vals = ux
    pref = float(1 / (1 - Fraction(1, table.p))) * table.eta_volume
    return pref * vals.sum(axis=0)


def check_resolution(table: RadonTable, points: Sequence[tuple]) -> None:
    need = required_resolution(table.support_exp, table.l_s, ())
    bad = []
    req = need
    for x in points:
        r = required_resolution(table.support_exp, table.l_s, [x])
        if r > table.m:
            bad.append(x)
            req = max(req, r)
    if bad:
        raise ResolutionError(req, table.m, bad)


def radon_inverse(table: RadonTable, targets) -> SampledField:
    """Reconstruct ``phi`` at exact targets from its Radon slices."""
    pts = as_points(targets, table.n)
    check_resolution(table, pts)
    zero = PAdicRational(table.p, 0)
    vals = sphere_average(table, [(zero, x) for x in pts], table.n - 1)
    return SampledField(pts, vals, {"operator": "radon_inverse", "alpha": table.n - 1})


# --------------------------------------------------------------------------
# structural checks


def radon_vanishing_check(table: RadonTable) -> float:
    """``max |phi^(eta, s)|`` over ``|s| > q^N`` (``N`` the support exponent of phi)."""
    margin = table.N_s - table.support_exp
    if margin <= 0:
        return 0.0
    s = np.arange(table.values.shape[1])
    outside = s % table.p**margin != 0
    return float(np.max(np.abs(table.values[:, outside]), initial=0.0))


def slice_mass_spread(table: RadonTable) -> float:
    """Spread over ``eta`` of ``int phi^(eta, s) ds`` (all equal ``phi~(0)``)."""
    mass = table.values.sum(axis=1) * float(Fraction(table.p) ** (-table.l_s))
    return float(np.max(np.abs(mass - mass[0])))


def homogeneity_defect(phi: TestFunction, table: RadonTable, scalings=(1, -1, 2),
                       max_etas: int = 6) -> float:
    """``max |phi^(p^j eta, p^j s) - q^j phi^(eta, s)|`` with ``phi^(p^j eta, .)``
    computed independently by :func:`radon_at`."""
    p = table.p
    worst = 0.0
    for i in range(min(max_etas, len(table.etas))):
        eta = table.eta_point(i)
        sl = table.slice(i)
        for j in scalings:
            pj = PAdicRational(p, 1, j)
            xi = tuple(c * pj for c in eta)
            for s in sl.cosets()[:: max(1, sl.size // 7)]:
                lhs = radon_at(phi, xi, s[0] * pj)
                rhs = float(Fraction(p) ** j) * sl.evaluate(s)
                worst = max(worst, abs(lhs - rhs))
    return worst


def fourier_slice_defect(phi: TestFunction, table: RadonTable, max_etas: int = 8) -> float:
    """``max |phi~(s eta) - int chi(s r) phi^(eta, r) dr|`` against the pointwise
    exact-character transform of ``phi``."""
    from .fourier import fourier_at

    worst = 0.0
    for i in range(min(max_etas, len(table.etas))):
        eta = table.eta_point(i)
        ft = fourier(table.slice(i))  # table of s -> int chi(s r) phi^(eta, r) dr
        for s in ft.cosets()[:: max(1, ft.size // 5)]:
            want = fourier_at(phi, tuple(c * s[0] for c in eta))
            worst = max(worst, abs(ft.evaluate(s) - want))
    return worst


def joint_constancy_defect(phi: TestFunction, table: RadonTable) -> float:
    """Recompute at resolution ``m + 1`` and compare each finer coset with its parent."""
    fine = radon_forward(phi, table.m + 1, table.N_s - table.support_exp)
    G = table.p**table.m
    index = {tuple(int(c) for c in e): i for i, e in enumerate(table.etas)}
    parent = [index[tuple(int(c) % G for c in e)] for e in fine.etas]
    return float(np.max(np.abs(fine.values - table.values[parent])))
