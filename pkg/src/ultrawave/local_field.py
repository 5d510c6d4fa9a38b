"""Exact arithmetic in Q_p, the canonical additive character, and coset grids.

Every scalar is an exact rational ``p**e * a / b`` with ``a`` and ``b`` prime
to ``p``; absolute values are exact powers of ``p`` returned as
:class:`fractions.Fraction`.  Grids of cosets ``B_N / p^l O`` are encoded by
integer indices ``m`` in ``[0, p**(N+l))`` standing for the point
``m * p**-N``; along each axis the grid is the cyclic group ``Z / p**(N+l)``.
"""

from __future__ import annotations

import cmath
import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

RationalLike = Union[int, Fraction, "PAdicRational"]

_SERIAL_RE = re.compile(r"^\s*(-?\d+)(?:/(\d+))?\*(\d+)\^(-?\d+)\s*$")


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    return all(p % d for d in range(3, math.isqrt(p) + 1, 2))


def valuation(a: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if a == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


@dataclass(frozen=True)
class FieldParams:
    """Residue data of Q_p.  ``q`` equals ``p``; the digit set is ``range(p)``."""

    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"p must be a prime integer, got {self.p!r}")

    @property
    def q(self) -> int:
        return self.p

    @property
    def digits(self) -> range:
        return range(self.p)


class PAdicRational:
    """Exact element ``p**e * a / b`` of Q (seen inside Q_p).

    Normalized so that ``a`` and ``b`` are prime to ``p``, ``b > 0`` and
    ``gcd(a, b) == 1``; zero is stored as ``a = 0, e = 0``.  Grid points
    always have ``b == 1``; the denominator exists so that the set is closed
    under division.
    """

    __slots__ = ("p", "a", "b", "e")

    def __init__(self, p: int, a: int, e: int = 0, b: int = 1):
        if b == 0:
            raise ZeroDivisionError("denominator is zero")
        if a == 0:
            a, b, e = 0, 1, 0
        else:
            if b < 0:
                a, b = -a, -b
            g = math.gcd(a, b)
            a, b = a // g, b // g
            while a % p == 0:
                a //= p
                e += 1
            while b % p == 0:
                b //= p
                e -= 1
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "e", e)

    def __setattr__(self, name, value):
        raise AttributeError("PAdicRational is immutable")

    # construction -------------------------------------------------------
    @classmethod
    def of(cls, p: int, x: RationalLike) -> "PAdicRational":
        if isinstance(x, PAdicRational):
            if x.p != p:
                raise ValueError("mixing different primes")
            return x
        fx = Fraction(x)
        return cls(p, fx.numerator, 0, fx.denominator)

    @classmethod
    def parse(cls, text: str) -> "PAdicRational":
        """Inverse of :meth:`serialize`, e.g. ``"7*3^-2"`` or ``"5/2*3^1"``."""
        m = _SERIAL_RE.match(text)
        if not m:
            raise ValueError(f"cannot parse p-adic rational {text!r}")
        a = int(m.group(1))
        b = int(m.group(2)) if m.group(2) else 1
        p = int(m.group(3))
        e = int(m.group(4))
        x = cls(p, a, e, b)
        if (x.a, x.b, x.e) != (a, b, e) and a != 0:
            raise ValueError(f"{text!r} is not in normal form")
        return x

    def serialize(self) -> str:
        if self.b == 1:
            return f"{self.a}*{self.p}^{self.e}"
        return f"{self.a}/{self.b}*{self.p}^{self.e}"

    __str__ = serialize

    def __repr__(self) -> str:
        return f"PAdicRational({self.serialize()!r})"

    # conversions --------------------------------------------------------
    def to_fraction(self) -> Fraction:
        if self.e >= 0:
            return Fraction(self.a * self.p**self.e, self.b)
        return Fraction(self.a, self.b * self.p ** (-self.e))

    def __float__(self) -> float:
        return float(self.to_fraction())

    def is_zero(self) -> bool:
        return self.a == 0

    # absolute value -----------------------------------------------------
    def abs(self) -> Fraction:
        return Fraction(0) if self.a == 0 else Fraction(self.p) ** (-self.e)

    def norm_exponent(self) -> int | None:
        """``k`` with ``|x| = q**k``; ``None`` for zero."""
        return None if self.a == 0 else -self.e

    def residue(self, K: int) -> int:
        """Integer ``r`` in ``[0, p**K)`` with ``x = r mod p**K Z_p``.

        Requires ``|x| <= 1``.
        """
        if self.a == 0 or self.e >= K:
            return 0
        if self.e < 0:
            raise ValueError(f"{self} is not a p-adic integer")
        mod = self.p ** (K - self.e)
        unit = self.a * pow(self.b, -1, mod) % mod
        return unit * self.p**self.e

    def fractional_phase(self) -> tuple[int, int]:
        """Exact fractional part ``{x}_p`` as ``(r, G)`` meaning ``r / G``."""
        if self.a == 0 or self.e >= 0:
            return 0, 1
        G = self.p ** (-self.e)
        return self.a * pow(self.b, -1, G) % G, G

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "PAdicRational":
        if isinstance(other, PAdicRational):
            if other.p != self.p:
                raise ValueError("mixing different primes")
            return other
        if isinstance(other, (int, Fraction)):
            return PAdicRational.of(self.p, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PAdicRational.of(self.p, self.to_fraction() + o.to_fraction())

    __radd__ = __add__

    def __neg__(self):
        return PAdicRational(self.p, -self.a, self.e, self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PAdicRational(self.p, self.a * o.a, self.e + o.e, self.b * o.b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.a == 0:
            raise ZeroDivisionError("division by zero in Q_p")
        return PAdicRational(self.p, self.a * o.b, self.e - o.e, self.b * o.a)

    def __rtruediv__(self, other):
        return PAdicRational.of(self.p, other) / self

    def __eq__(self, other) -> bool:
        if isinstance(other, PAdicRational):
            return (self.p, self.a, self.b, self.e) == (other.p, other.a, other.b, other.e)
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.p, self.a, self.b, self.e))


PointKn = tuple  # tuple[PAdicRational, ...]


def padic(p: int, x: RationalLike) -> PAdicRational:
    return PAdicRational.of(p, x)


def point(p: int, coords: Iterable[RationalLike]) -> PointKn:
    return tuple(PAdicRational.of(p, c) for c in coords)


def padic_abs(x: PAdicRational) -> Fraction:
    return x.abs()


def sup_norm(x: Sequence[PAdicRational]) -> Fraction:
    if len(x) == 0:
        raise ValueError("points need at least one coordinate")
    return max(c.abs() for c in x)


def norm_exponent(x: Sequence[PAdicRational]) -> int | None:
    """``k`` with ``||x|| = q**k``, or ``None`` at the origin."""
    exps = [c.norm_exponent() for c in x if not c.is_zero()]
    return max(exps) if exps else None


def dot(u: Sequence[RationalLike], x: Sequence[PAdicRational]) -> PAdicRational:
    p = x[0].p
    total = Fraction(0)
    for ui, xi in zip(u, x):
        total += Fraction(ui if not isinstance(ui, PAdicRational) else ui.to_fraction()) * xi.to_fraction()
    return PAdicRational.of(p, total)


def root_of_unity(r: int, G: int) -> complex:
    """``exp(2 pi i r / G)`` with the phase reduced exactly to ``(-1/2, 1/2]``."""
    r %= G
    if 2 * r > G:
        r -= G
    if r == 0:
        return 1.0 + 0.0j
    if 4 * r == G:
        return 1j
    if 4 * r == -G:
        return -1j
    if 2 * r == G:
        return -1.0 + 0.0j
    return cmath.exp(2j * math.pi * r / G)


def roots_table(G: int, sign: int = 1) -> np.ndarray:
    """All ``exp(sign * 2 pi i r / G)`` for ``r in range(G)``."""
    r = (sign * np.arange(G, dtype=np.int64)) % G
    r = np.where(2 * r > G, r - G, r)
    out = np.exp(2j * np.pi * r / G)
    # exact values at the quarter turns
    out[r == 0] = 1.0
    if G % 2 == 0:
        out[r == G // 2] = -1.0
    if G % 4 == 0:
        out[r == G // 4] = 1j
        out[r == -G // 4] = -1j
    return out


def character(x: PAdicRational) -> complex:
    """Canonical additive character ``exp(2 pi i {x}_p)``; trivial on Z_p."""
    r, G = x.fractional_phase()
    return root_of_unity(r, G)


# --------------------------------------------------------------------------
# coset grids


def grid_size(p: int, N: int, l: int) -> int:
    if N + l < 0:
        raise ValueError(f"need N + l >= 0, got N={N}, l={l}")
    return p ** (N + l)


def index_valuations(p: int, G: int) -> np.ndarray:
    """``v_p(m)`` for ``m in range(G)``, with ``v_p(0)`` set to ``log_p G``."""
    K = round(math.log(G, p)) if G > 1 else 0
    out = np.zeros(G, dtype=np.int64)
    step = p
    for _ in range(K):
        out[::step] += 1
        step *= p
    return out


def coset_point(p: int, m: int, N: int) -> PAdicRational:
    return PAdicRational(p, m, -N) if m else PAdicRational(p, 0)


def enumerate_cosets(p: int, n: int, N: int, l: int) -> list[PointKn]:
    """Representatives of the cosets of ``p^l O^n`` in ``B_N^n``.

    Coordinate reps are ``sum_{i=-N}^{l-1} d_i p^i``; the order is row-major
    over coordinates with each coordinate ascending in ``m = rep * p**N``.
    """
    if n < 1:
        raise ValueError("dimension must be >= 1")
    G1 = grid_size(p, N, l)
    axis = [coset_point(p, m, N) for m in range(G1)]
    return [tuple(c) for c in itertools.product(axis, repeat=n)]


def enumerate_sphere(p: int, n: int, k: int, l: int) -> list[PointKn]:
    """Representatives of the cosets of ``p^l O^n`` covering ``{||x|| = q^k}``."""
    if l < -k + 1:
        raise ValueError(f"sphere of radius q^{k} is not a union of cosets at l={l}")
    return [x for x in enumerate_cosets(p, n, k, l) if norm_exponent(x) == k]


def sphere_measure(p: int, n: int, k: int) -> Fraction:
    return Fraction(p) ** (n * k) * (1 - Fraction(1, p**n))


def sphere_index_array(p: int, n: int, m: int) -> np.ndarray:
    """Integer reps (shape ``(count, n)``) of unit-sphere cosets at resolution m.

    Row ``j`` is the representative ``eta`` with coordinates in
    ``range(p**m)``, in the same order as ``enumerate_sphere(p, n, 0, m)``.
    """
    if m < 1:
        raise ValueError("the unit sphere needs resolution m >= 1")
    G1 = grid_size(p, 0, m)
    grids = np.indices((G1,) * n).reshape(n, -1).T.astype(np.int64)
    return grids[np.any(grids % p != 0, axis=1)]
