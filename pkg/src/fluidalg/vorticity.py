"""Discrete curl ``D = *d`` and the Euler nonlinearity ``i(X . DX)``.

Two independent evaluations of the nonlinearity are provided.
:func:`nonlinear_generic` multiplies chains with the general square product
and then applies the i-map; :func:`nonlinear_optimized` uses the closed
eighteen-term formula in smeared fields and is the one used for time
stepping.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain_complex import Chain1, Chain2, shift, shift_axis
from .intersection import imap, intersect22, smear


def curl(X: Chain2) -> Chain2:
    """``v^yz_a = u^zx_{a-k} - u^zx_{a+k} + u^xy_{a+j} - u^xy_{a-j}`` and cyclically."""
    u = X.u
    comps = []
    for e in range(3):
        p, q = (e + 1) % 3, (e + 2) % 3
        up = u[..., p, :, :, :]
        uq = u[..., q, :, :, :]
        comps.append(
            shift_axis(up, q, -1) - shift_axis(up, q, 1)
            + shift_axis(uq, p, 1) - shift_axis(uq, p, -1)
        )
    return Chain2(np.stack(comps, axis=-4))


def _s(f, di=0, dj=0, dk=0):
    return shift(f, (di, dj, dk))


@dataclass(frozen=True)
class SmearedFields:
    """Three-point smears ``U^{pq,r}`` of ``u`` and ``V^{pq,r}`` of ``v = curl(u)``.

    Keys are ``(plane, axis)``, e.g. ``U[("zx", "z")]``.
    """

    U: dict
    V: dict

    @classmethod
    def from_chain(cls, X: Chain2) -> "SmearedFields":
        yz, zx, xy = X.yz, X.zx, X.xy
        U = {
            ("xy", "x"): smear(xy, 0),
            ("xy", "y"): smear(xy, 1),
            ("zx", "z"): smear(zx, 2),
            ("zx", "x"): smear(zx, 0),
            ("yz", "y"): smear(yz, 1),
            ("yz", "z"): smear(yz, 2),
        }
        # ten-term expansions; the two copies of the centre value cancel
        V = {
            ("xy", "x"): _s(yz, 0, -1) - _s(yz, 0, 1) + _s(zx, 1) - _s(zx, -1)
            + (_s(yz, -1, -1) - _s(yz, -1, 1) + _s(yz, 1, -1) - _s(yz, 1, 1)
               + _s(zx, 2) - _s(zx, -2)) / 2,
            ("xy", "y"): _s(yz, 0, -1) - _s(yz, 0, 1) + _s(zx, 1) - _s(zx, -1)
            + (_s(zx, 1, 1) - _s(zx, -1, 1) + _s(zx, 1, -1) - _s(zx, -1, -1)
               + _s(yz, 0, -2) - _s(yz, 0, 2)) / 2,
            ("zx", "z"): _s(xy, -1) - _s(xy, 1) + _s(yz, 0, 0, 1) - _s(yz, 0, 0, -1)
            + (_s(xy, -1, 0, -1) - _s(xy, 1, 0, -1) + _s(xy, -1, 0, 1) - _s(xy, 1, 0, 1)
               + _s(yz, 0, 0, 2) - _s(yz, 0, 0, -2)) / 2,
            ("zx", "x"): _s(xy, -1) - _s(xy, 1) + _s(yz, 0, 0, 1) - _s(yz, 0, 0, -1)
            + (_s(yz, 1, 0, 1) - _s(yz, 1, 0, -1) + _s(yz, -1, 0, 1) - _s(yz, -1, 0, -1)
               + _s(xy, -2) - _s(xy, 2)) / 2,
            ("yz", "y"): _s(zx, 0, 0, -1) - _s(zx, 0, 0, 1) + _s(xy, 0, 1) - _s(xy, 0, -1)
            + (_s(zx, 0, -1, -1) - _s(zx, 0, -1, 1) + _s(zx, 0, 1, -1) - _s(zx, 0, 1, 1)
               + _s(xy, 0, 2) - _s(xy, 0, -2)) / 2,
            ("yz", "z"): _s(zx, 0, 0, -1) - _s(zx, 0, 0, 1) + _s(xy, 0, 1) - _s(xy, 0, -1)
            + (_s(xy, 0, 1, 1) - _s(xy, 0, -1, 1) + _s(xy, 0, 1, -1) - _s(xy, 0, -1, -1)
               + _s(zx, 0, 0, -2) - _s(zx, 0, 0, 2)) / 2,
        }
        return cls(U, V)


# (offset of the U/V pair on the first square, offset on the second, weight)
_CONFIGURATIONS = (
    (-1, 1, 1), (1, -1, 1),
    (0, 1, 2), (0, -1, 2), (1, 0, 2), (-1, 0, 2),
    (0, 0, 4),
    (1, 1, 1), (-1, -1, 1),
)

# for each output axis: (first plane, its smear axis, second plane, its smear axis)
_CYCLIC_ROLES = (
    ("zx", "z", "xy", "y"),
    ("xy", "x", "yz", "z"),
    ("yz", "y", "zx", "x"),
)


def _eighteen_terms(Ua, Va, Ub, Vb, axis):
    out = None
    for p, q, w in _CONFIGURATIONS:
        term = (shift_axis(Ua, axis, p) * shift_axis(Vb, axis, q)
                - shift_axis(Ub, axis, q) * shift_axis(Va, axis, p))
        if w != 1:
            term = w * term
        out = term if out is None else out + term
    return out


def nonlinear_optimized(X: Chain2, fields: SmearedFields | None = None) -> Chain1:
    """Coefficients of ``i(X . DX)`` from the eighteen smeared products per axis."""
    sf = fields if fields is not None else SmearedFields.from_chain(X)
    comps = []
    for axis, (pa, ra, pb, rb) in enumerate(_CYCLIC_ROLES):
        comps.append(_eighteen_terms(
            sf.U[(pa, ra)], sf.V[(pa, ra)], sf.U[(pb, rb)], sf.V[(pb, rb)], axis
        ))
    return Chain1.from_inf(np.stack(comps, axis=-4))


def nonlinear_generic(X: Chain2) -> Chain1:
    """``i(X . DX)`` through the general square product."""
    return imap(intersect22(X, curl(X)))
