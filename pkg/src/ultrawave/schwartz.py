"""Finite tables for Bruhat-Schwartz test functions on Q_p^n."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .local_field import (
    PAdicRational,
    coset_point,
    enumerate_cosets,
    grid_size,
    index_valuations,
    norm_exponent,
)

PHI_TOL = 1e-12


@dataclass(frozen=True)
class LizorkinTag:
    in_Phi: bool
    in_Psi: bool


@dataclass(frozen=True, eq=False)
class TestFunction:
    """Element of ``D_N^l(Q_p^n)``: zero outside ``B_N^n``, constant on cosets
    of ``p^l O^n``.

    ``values`` has shape ``(p**(N+l),) * n``; entry ``(m_1, ..., m_n)`` is the
    value on the coset of ``(m_1 p^-N, ..., m_n p^-N)``.  Flattening in C order
    gives the order of :func:`enumerate_cosets`.
    """

    __test__ = False  # keep pytest from collecting this class

    p: int
    n: int
    N: int
    l: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        G1 = grid_size(self.p, self.N, self.l)
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.size != G1**self.n:
            raise ValueError(f"table has {vals.size} entries, expected {G1**self.n}")
        vals = vals.reshape((G1,) * self.n).copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    # grid facts ---------------------------------------------------------
    @property
    def G1(self) -> int:
        return self.p ** (self.N + self.l)

    @property
    def size(self) -> int:
        return self.values.size

    @property
    def cell_volume(self) -> Fraction:
        return Fraction(self.p) ** (-self.n * self.l)

    def cosets(self) -> list:
        return enumerate_cosets(self.p, self.n, self.N, self.l)

    # constructors -------------------------------------------------------
    @classmethod
    def zeros(cls, p: int, n: int, N: int, l: int) -> "TestFunction":
        G1 = grid_size(p, N, l)
        return cls(p, n, N, l, np.zeros((G1,) * n, dtype=np.complex128))

    @classmethod
    def indicator_ball(cls, p: int, n: int, radius_exp: int, N: int | None = None,
                       l: int | None = None) -> "TestFunction":
        """Indicator of ``B_radius^n`` on the grid ``(N, l)`` (defaults: tight)."""
        N = radius_exp if N is None else N
        l = -radius_exp if l is None else l
        if N < radius_exp or l < -radius_exp:
            raise ValueError("grid too coarse for the ball")
        G1 = grid_size(p, N, l)
        vals1 = index_valuations(p, G1) >= N - radius_exp
        grid = np.ones((G1,) * n, dtype=bool)
        for ax in range(n):
            view = [1] * n
            view[ax] = G1
            grid = grid & vals1.reshape(view)
        return cls(p, n, N, l, grid.astype(np.complex128))

    @classmethod
    def from_callable(cls, p: int, n: int, N: int, l: int,
                      fn: Callable[[tuple], complex]) -> "TestFunction":
        vals = [fn(x) for x in enumerate_cosets(p, n, N, l)]
        return cls(p, n, N, l, np.array(vals, dtype=np.complex128))

    @classmethod
    def from_radial(cls, p: int, n: int, N: int, l: int,
                    profile: Callable[[int | None], complex]) -> "TestFunction":
        """Table of ``x -> profile(k)`` where ``||x|| = q^k`` (``None`` on the
        zero coset).  Values on ``||x|| <= q^-l`` must not depend on ``k``."""
        G1 = grid_size(p, N, l)
        v1 = index_valuations(p, G1)
        minv = np.full((G1,) * n, N + l, dtype=np.int64)
        for ax in range(n):
            view = [1] * n
            view[ax] = G1
            minv = np.minimum(minv, v1.reshape(view))
        lookup = {}
        for v in range(N + l + 1):
            lookup[v] = profile(None if v == N + l else N - v)
        vals = np.vectorize(lambda v: lookup[int(v)], otypes=[np.complex128])(minv)
        return cls(p, n, N, l, vals)

    # pointwise ----------------------------------------------------------
    def index_of(self, x: Sequence[PAdicRational]) -> tuple | None:
        """Table index of the coset containing ``x``, or ``None`` outside ``B_N^n``."""
        if isinstance(x, PAdicRational):
            x = (x,)
        if len(x) != self.n:
            raise ValueError("dimension mismatch")
        k = norm_exponent(x)
        if k is not None and k > self.N:
            return None
        K = self.N + self.l
        return tuple((c * PAdicRational(self.p, 1, self.N)).residue(K) for c in x)

    def evaluate(self, x: Sequence[PAdicRational]) -> complex:
        idx = self.index_of(x)
        return 0j if idx is None else complex(self.values[idx])

    def __call__(self, x: Sequence[PAdicRational]) -> complex:
        return self.evaluate(x)

    # integrals ----------------------------------------------------------
    def integrate(self) -> complex:
        vol = float(self.cell_volume)
        flat = self.values.reshape(-1)
        return complex(math.fsum(flat.real) * vol, math.fsum(flat.imag) * vol)

    def lkappa_norm(self, kappa: float) -> float:
        if kappa < 1:
            raise ValueError("kappa must be >= 1")
        s = math.fsum(np.abs(self.values.reshape(-1)) ** kappa) * float(self.cell_volume)
        return s ** (1.0 / kappa)

    def lizorkin_tag(self, tol: float = PHI_TOL) -> LizorkinTag:
        scale = max(1.0, self.lkappa_norm(1))
        return LizorkinTag(
            in_Phi=abs(self.integrate()) <= tol * scale,
            in_Psi=abs(self.values[(0,) * self.n]) <= tol * scale,
        )

    # grid changes -------------------------------------------------------
    def refine(self, N_new: int, l_new: int) -> "TestFunction":
        """Same function on the finer/larger grid ``(N_new, l_new)``."""
        if N_new < self.N or l_new < self.l:
            raise ValueError("refine cannot shrink the support or coarsen the grid")
        G1n = grid_size(self.p, N_new, l_new)
        m = np.arange(G1n, dtype=np.int64)
        div = self.p ** (N_new - self.N)
        inside = m % div == 0
        old = np.where(inside, (m // div) % self.G1, 0)
        vals = self.values
        mask = np.ones((G1n,) * self.n, dtype=bool)
        for ax in range(self.n):
            vals = np.take(vals, old, axis=ax)
            view = [1] * self.n
            view[ax] = G1n
            mask = mask & inside.reshape(view)
        return TestFunction(self.p, self.n, N_new, l_new, np.where(mask, vals, 0))

    def scaled_argument(self, j: int) -> "TestFunction":
        """``x -> f(p^j x)``; exact re-indexing (support and constancy shift by j)."""
        return TestFunction(self.p, self.n, self.N + j, self.l - j, self.values)

    # algebra ------------------------------------------------------------
    def _like(self, vals) -> "TestFunction":
        return TestFunction(self.p, self.n, self.N, self.l, vals)

    def _aligned(self, other: "TestFunction") -> tuple["TestFunction", "TestFunction"]:
        if (self.p, self.n) != (other.p, other.n):
            raise ValueError("incompatible test functions")
        N, l = max(self.N, other.N), max(self.l, other.l)
        return self.refine(N, l), other.refine(N, l)

    def __add__(self, other: "TestFunction") -> "TestFunction":
        a, b = self._aligned(other)
        return a._like(a.values + b.values)

    def __sub__(self, other: "TestFunction") -> "TestFunction":
        a, b = self._aligned(other)
        return a._like(a.values - b.values)

    def __mul__(self, c: complex) -> "TestFunction":
        return self._like(self.values * c)

    __rmul__ = __mul__

    # serialization ------------------------------------------------------
    def to_json(self) -> str:
        flat = self.values.reshape(-1)
        payload = {
            "n": self.n, "N": self.N, "l": self.l, "p": self.p,
            "values": [[float(v.real), float(v.imag)] for v in flat],
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "TestFunction":
        d = json.loads(text)
        vals = np.array([complex(re, im) for re, im in d["values"]], dtype=np.complex128)
        return cls(d["p"], d["n"], d["N"], d["l"], vals)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["coset_repr", "re", "im"])
        G1 = self.G1
        axis = [coset_point(self.p, m, self.N).serialize() for m in range(G1)]
        for idx, v in np.ndenumerate(self.values):
            w.writerow([";".join(axis[i] for i in idx), repr(float(v.real)), repr(float(v.imag))])
        return buf.getvalue()


def indicator_coset(p: int, n: int, N: int, l: int, idx: tuple) -> TestFunction:
    f = np.zeros((grid_size(p, N, l),) * n, dtype=np.complex128)
    f[tuple(idx)] = 1
    return TestFunction(p, n, N, l, f)


def random_test_function(seed: int, p: int, n: int, N: int, l: int,
                         project_Phi: bool = False, project_Psi: bool = False,
                         amplitude: int = 8) -> TestFunction:
    """Deterministic pseudo-random table with rational values ``k / 4``.

    ``project_Phi`` subtracts the exact rational mean (so the integral is zero
    up to float rounding of each entry); ``project_Psi`` zeroes the coset of 0.
    """
    G1 = grid_size(p, N, l)
    G = G1**n
    free = G - (1 if project_Psi else 0)
    if project_Phi and free < 2 or project_Psi and G < 2:
        raise ValueError("too few cosets for a nontrivial projected function")
    rng = np.random.default_rng(seed)
    re = rng.integers(-amplitude, amplitude + 1, size=G)
    im = rng.integers(-amplitude, amplitude + 1, size=G)
    if project_Psi:
        re[0] = im[0] = 0
    if not project_Phi:
        vals = (re + 1j * im) / 4.0
    else:
        mask = np.ones(G, dtype=bool)
        if project_Psi:
            mask[0] = False
        mean_re = Fraction(int(re[mask].sum()), free)
        mean_im = Fraction(int(im[mask].sum()), free)
        vals = np.zeros(G, dtype=np.complex128)
        for i in np.nonzero(mask)[0]:
            vals[i] = complex(float((int(re[i]) - mean_re) / 4), float((int(im[i]) - mean_im) / 4))
    return TestFunction(p, n, N, l, vals.reshape((G1,) * n))


def integrate(f: TestFunction) -> complex:
    return f.integrate()


def evaluate(f: TestFunction, x) -> complex:
    return f.evaluate(x)


def refine(f: TestFunction, N_new: int, l_new: int) -> TestFunction:
    return f.refine(N_new, l_new)


def lkappa_norm(f: TestFunction, kappa: float) -> float:
    return f.lkappa_norm(kappa)
