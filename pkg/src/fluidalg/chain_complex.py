"""Periodic cubic lattice chains and the boundary / star operators on them.

All fields are numpy arrays whose last three axes index the lattice
``(a1, a2, a3)`` modulo ``N``.  Component-bearing chains carry one more axis
in front of those (axis ``-4``); component ``e`` of a square chain is the
square whose normal is axis ``e`` (``yz, zx, xy``), and component ``e`` of a
stick chain is the stick along axis ``e`` (``x, y, z``).  Arbitrary leading
batch axes are allowed everywhere.

Operations only add, subtract, multiply and divide by small integers, so they
run unchanged on float arrays and on object arrays of exact rationals
(``fractions.Fraction`` or ``gmpy2.mpq``).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

AXES = ("x", "y", "z")
PLANES = ("yz", "zx", "xy")

_FIELD_AXES = (-3, -2, -1)


class LatticeError(ValueError):
    pass


def check_period(N: int) -> int:
    """Validate a lattice period; the construction needs N odd and N >= 3."""
    if int(N) != N or N < 3:
        raise LatticeError(f"N must be an integer >= 3, got {N!r}")
    if N % 2 == 0:
        raise LatticeError(
            f"N must be odd (2h-sticks only form a basis for odd periods), got {N}"
        )
    return int(N)


@dataclass(frozen=True)
class Lattice:
    """Periodic lattice of period ``N`` with spacing fixed to 1."""

    N: int

    def __post_init__(self):
        check_period(self.N)

    @property
    def size(self) -> int:
        return self.N**3

    def wrap(self, index: Iterable[int]) -> tuple[int, int, int]:
        i, j, k = index
        return (i % self.N, j % self.N, k % self.N)

    def points(self):
        N = self.N
        for i in range(N):
            for j in range(N):
                for k in range(N):
                    yield (i, j, k)


# ---------------------------------------------------------------- field helpers


def shift(f: np.ndarray, offset) -> np.ndarray:
    """Return ``g`` with ``g[a] = f[a + offset]`` (periodic)."""
    return np.roll(f, tuple(-int(o) for o in offset), axis=_FIELD_AXES)


def translate(f: np.ndarray, offset) -> np.ndarray:
    """Return ``g`` with ``g[a + offset] = f[a]`` (periodic)."""
    return np.roll(f, tuple(int(o) for o in offset), axis=_FIELD_AXES)


def unit_offset(axis: int, step: int = 1) -> tuple[int, int, int]:
    off = [0, 0, 0]
    off[axis] = step
    return tuple(off)


def shift_axis(f: np.ndarray, axis: int, step: int) -> np.ndarray:
    """``g[a] = f[a + step * e_axis]``."""
    return np.roll(f, -step, axis=_FIELD_AXES[axis])


def zeros_like(f: np.ndarray) -> np.ndarray:
    """Zeros of the same shape and scalar type (object arrays keep their type)."""
    if f.dtype == object:
        out = np.empty(f.shape, dtype=object)
        zero = f.flat[0] * 0 if f.size else Fraction(0)
        out.fill(zero)
        return out
    return np.zeros_like(f)


def new_field(shape, mode: str = "float", kind=Fraction) -> np.ndarray:
    """Zero array; ``mode='rational'`` builds an object array of ``kind`` zeros."""
    if mode == "float":
        return np.zeros(shape)
    if mode == "rational":
        out = np.empty(shape, dtype=object)
        out.fill(kind(0))
        return out
    raise ValueError(f"unknown scalar mode {mode!r}")


def to_rational(f: np.ndarray, kind=Fraction) -> np.ndarray:
    """Exact conversion of a float array to an object array of rationals."""
    out = np.empty(f.shape, dtype=object)
    flat = out.reshape(-1)
    for n, v in enumerate(np.asarray(f, dtype=float).reshape(-1)):
        flat[n] = kind(Fraction(float(v)))
    return out


def rotate_field(f: np.ndarray, times: int = 1) -> np.ndarray:
    """Relabel a scalar field under the cyclic rotation x->y->z->x.

    The rotation sends the point ``(a1, a2, a3)`` to ``(a3, a1, a2)``.
    """
    n = f.ndim
    lead = tuple(range(n - 3))
    for _ in range(times % 3):
        f = np.transpose(f, lead + (n - 1, n - 3, n - 2))
    return f


def rotate_components(f: np.ndarray, times: int = 1) -> np.ndarray:
    """Rotate a component-bearing array (components on axis -4)."""
    times %= 3
    if times == 0:
        return f
    return np.roll(rotate_field(f, times), times, axis=-4)


# ---------------------------------------------------------------- chain types


class _Linear:
    """Vector-space arithmetic shared by the chain dataclasses."""

    _fields: tuple[str, ...] = ()

    def _map(self, fn):
        return type(self)(*(fn(getattr(self, n)) for n in self._fields))

    def _zip(self, other, fn):
        if type(other) is not type(self):
            return NotImplemented
        return type(self)(
            *(fn(getattr(self, n), getattr(other, n)) for n in self._fields)
        )

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return self._map(lambda a: -a)

    def __mul__(self, scalar):
        return self._map(lambda a: a * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self._map(lambda a: a / scalar)

    def arrays(self) -> tuple[np.ndarray, ...]:
        return tuple(getattr(self, n) for n in self._fields)

    def equals(self, other) -> bool:
        """Exact equality of all coefficients."""
        return type(other) is type(self) and all(
            np.array_equal(a, b) for a, b in zip(self.arrays(), other.arrays())
        )

    def max_abs(self) -> float:
        return max(float(np.max(np.abs(np.asarray(a, dtype=float)))) for a in self.arrays())

    @property
    def N(self) -> int:
        return self.arrays()[0].shape[-1]

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return self.arrays()[0].shape[: -self._rank]

    _rank = 4


@dataclass(frozen=True, eq=False)
class Chain0(_Linear):
    """Coefficients of points: ``p[..., i, j, k]``."""

    p: np.ndarray
    _fields = ("p",)
    _rank = 3

    @classmethod
    def zeros(cls, N, mode="float", batch=()):
        return cls(new_field(tuple(batch) + (N, N, N), mode))

    @classmethod
    def unit(cls, N, point, mode="float"):
        c = cls.zeros(N, mode)
        c.p[tuple(np.mod(point, N))] += 1
        return c


@dataclass(frozen=True, eq=False)
class Chain1(_Linear):
    """Infinitesimal sticks ``inf[..., e, a]`` and h-sticks ``hstick[..., e, a]``.

    ``hstick[e, a]`` is the stick of length one from ``a`` to ``a + e``.
    """

    inf: np.ndarray
    hstick: np.ndarray
    _fields = ("inf", "hstick")

    @classmethod
    def zeros(cls, N, mode="float", batch=()):
        shape = tuple(batch) + (3, N, N, N)
        return cls(new_field(shape, mode), new_field(shape, mode))

    @classmethod
    def from_inf(cls, inf: np.ndarray) -> "Chain1":
        return cls(inf, zeros_like(inf))

    @classmethod
    def unit_inf(cls, N, axis, point, mode="float"):
        c = cls.zeros(N, mode)
        c.inf[(axis,) + tuple(np.mod(point, N))] += 1
        return c

    @classmethod
    def unit_hstick(cls, N, axis, lower, mode="float"):
        c = cls.zeros(N, mode)
        c.hstick[(axis,) + tuple(np.mod(lower, N))] += 1
        return c

    def has_hsticks(self) -> bool:
        return bool(np.any(self.hstick != 0))

    def has_inf(self) -> bool:
        return bool(np.any(self.inf != 0))


@dataclass(frozen=True, eq=False)
class TwoHChain1(_Linear):
    """2h-sticks ``t[..., e, a]``: the stick along ``e`` from ``a - e`` to ``a + e``."""

    t: np.ndarray
    _fields = ("t",)

    @classmethod
    def zeros(cls, N, mode="float", batch=()):
        return cls(new_field(tuple(batch) + (3, N, N, N), mode))

    @classmethod
    def unit(cls, N, axis, center, mode="float"):
        c = cls.zeros(N, mode)
        c.t[(axis,) + tuple(np.mod(center, N))] += 1
        return c


@dataclass(frozen=True, eq=False)
class Chain2(_Linear):
    """2h-squares ``u[..., e, a]`` with normal axis ``e``: ``u[0]`` = yz, ``u[1]`` = zx, ``u[2]`` = xy."""

    u: np.ndarray
    _fields = ("u",)

    @classmethod
    def zeros(cls, N, mode="float", batch=()):
        return cls(new_field(tuple(batch) + (3, N, N, N), mode))

    @classmethod
    def unit(cls, N, plane, center, mode="float"):
        if isinstance(plane, str):
            plane = PLANES.index(plane)
        c = cls.zeros(N, mode)
        c.u[(plane,) + tuple(np.mod(center, N))] += 1
        return c

    @property
    def yz(self):
        return self.u[..., 0, :, :, :]

    @property
    def zx(self):
        return self.u[..., 1, :, :, :]

    @property
    def xy(self):
        return self.u[..., 2, :, :, :]


def rotate(chain, times: int = 1):
    """Apply the cyclic rotation x->y->z->x to any chain (orientation preserving)."""
    if isinstance(chain, Chain0):
        return Chain0(rotate_field(chain.p, times))
    return chain._map(lambda a: rotate_components(a, times))


def basis_chain2(N: int, mode: str = "float") -> Chain2:
    """All ``3 N^3`` unit squares stacked along one leading batch axis."""
    n = 3 * N**3
    eye = np.eye(n) if mode == "float" else _exact_eye(n)
    return Chain2(eye.reshape(n, 3, N, N, N))


def basis_inf_sticks(N: int, mode: str = "float") -> Chain1:
    n = 3 * N**3
    eye = np.eye(n) if mode == "float" else _exact_eye(n)
    return Chain1.from_inf(eye.reshape(n, 3, N, N, N))


def _exact_eye(n, kind=Fraction):
    out = new_field((n, n), "rational", kind)
    for i in range(n):
        out[i, i] = kind(1)
    return out


# ---------------------------------------------------------------- operators


def boundary2(x: Chain2) -> TwoHChain1:
    """Boundary of 2h-squares as 2h-sticks.

    ``d(yz_a) = y_{a-k} + z_{a+j} - y_{a+k} - z_{a-j}`` and cyclically.
    """
    u = x.u
    t = zeros_like(u)
    for e in range(3):
        f = u[..., e, :, :, :]
        p, q = (e + 1) % 3, (e + 2) % 3
        # square with normal e has edges along p (at +-q) and along q (at +-p)
        t_p = translate(f, unit_offset(q, -1)) - translate(f, unit_offset(q, 1))
        t_q = translate(f, unit_offset(p, 1)) - translate(f, unit_offset(p, -1))
        t[..., p, :, :, :] += t_p
        t[..., q, :, :, :] += t_q
    return TwoHChain1(t)


def boundary1(x: Chain1) -> Chain0:
    """Boundary of h-sticks; infinitesimal sticks have zero boundary.

    The h-stick from ``a`` to ``b`` maps to ``pt_a - pt_b``.  This orientation
    is the one for which ``d(A.B) = dA.B - A.dB`` holds pointwise with the
    square products of :mod:`fluidalg.intersection`.
    """
    s = x.hstick
    p = None
    for e in range(3):
        f = s[..., e, :, :, :]
        term = f - translate(f, unit_offset(e, 1))
        p = term if p is None else p + term
    return Chain0(p)


def star2(x: Chain2) -> TwoHChain1:
    """yz_a -> x_a, zx_a -> y_a, xy_a -> z_a (same centre, same orientation)."""
    return TwoHChain1(x.u.copy())


def star1(x: TwoHChain1) -> Chain2:
    return Chain2(x.t.copy())


def expand2h(x: TwoHChain1) -> Chain1:
    """Write each 2h-stick centred at ``a`` as the h-sticks on ``[a-e, a]`` and ``[a, a+e]``."""
    t = x.t
    h = np.empty_like(t)
    for e in range(3):
        f = t[..., e, :, :, :]
        h[..., e, :, :, :] = f + translate(f, unit_offset(e, -1))
    return Chain1(zeros_like(t), h)


def collapse2h(x: Chain1) -> TwoHChain1:
    """Inverse of :func:`expand2h` on chains with no infinitesimal part.

    Along each line the relation ``s[p] = t[p] + t[p+1]`` is circulant and,
    for odd N, inverted by ``t[m] = 1/2 sum_k (-1)^k s[m+k]``.
    """
    if x.has_inf():
        raise ValueError("collapse2h needs a chain without infinitesimal sticks")
    s = x.hstick
    N = s.shape[-1]
    t = np.empty_like(s)
    for e in range(3):
        f = s[..., e, :, :, :]
        acc = f.copy()
        for k in range(1, N):
            term = shift_axis(f, e, k)
            acc = acc - term if k % 2 else acc + term
        t[..., e, :, :, :] = acc / 2
    return TwoHChain1(t)


def augmentation(x: Chain0):
    """Sum of point coefficients (per batch entry)."""
    return x.p.sum(axis=_FIELD_AXES)


def cboundary1(q: TwoHChain1) -> Chain0:
    """Boundary in the 2h complex: the 2h-stick at ``a`` along ``e`` maps to ``pt_{a+e} - pt_{a-e}``."""
    t = q.t
    p = None
    for e in range(3):
        f = t[..., e, :, :, :]
        term = translate(f, unit_offset(e, 1)) - translate(f, unit_offset(e, -1))
        p = term if p is None else p + term
    return Chain0(p)


def cgrad(p: Chain0) -> TwoHChain1:
    """Coboundary ``*d*`` on points, signed so that ``cboundary1(cgrad(p))`` is the 2h Laplacian."""
    f = p.p
    comps = [shift_axis(f, e, -1) - shift_axis(f, e, 1) for e in range(3)]
    return TwoHChain1(np.stack(comps, axis=-4))


def laplacian(p: Chain0) -> Chain0:
    """``(Lp)_a = sum_e (p_{a+2e} + p_{a-2e}) - 6 p_a``."""
    f = p.p
    out = -6 * f
    for e in range(3):
        out = out + shift_axis(f, e, 2) + shift_axis(f, e, -2)
    return Chain0(out)


def harmonic_part(q: TwoHChain1) -> TwoHChain1:
    """Constant field per axis equal to the mean coefficient along that axis."""
    t = q.t
    N = t.shape[-1]
    mean = t.sum(axis=_FIELD_AXES, keepdims=True) / N**3
    return TwoHChain1(np.broadcast_to(mean, t.shape).copy())
