"""Transverse intersection products and the three fluid-algebra forms.

Sign conventions: the ordered products (x-stick, yz-square), (y, zx), (z, xy)
and (zx, xy), (xy, yz), (yz, zx) are positive; reversed square orders are
negative, parallel squares give zero.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .chain_complex import (
    Chain0,
    Chain1,
    Chain2,
    augmentation,
    boundary1,
    boundary2,
    expand2h,
    rotate_components,
    rotate_field,
    shift,
    shift_axis,
    star2,
    translate,
    unit_offset,
    zeros_like,
)


def pairing_weight(d_axis: int, d2: int, d3: int) -> Fraction:
    """Intersection number of an infinitesimal stick with an orthogonal 2h-square.

    ``d_axis`` is the offset along the stick, ``d2, d3`` the in-plane offsets
    between the stick and the square centre.
    """
    if d_axis != 0 or abs(d2) > 1 or abs(d3) > 1:
        return Fraction(0)
    return Fraction(1, 4) / 2 ** (abs(d2) + abs(d3))


def smear(f: np.ndarray, axis: int) -> np.ndarray:
    """``f + f(. - e)/2 + f(. + e)/2`` along ``axis``."""
    return f + (shift_axis(f, axis, -1) + shift_axis(f, axis, 1)) / 2


def _square_density(f: np.ndarray, normal: int) -> np.ndarray:
    """``sum_d pairing_weight(0, d) f[c + d]`` over the in-plane offsets of a square field."""
    p, q = (normal + 1) % 3, (normal + 2) % 3
    return smear(smear(f, p), q) / 4


def intersect12(a: Chain1, v: Chain2) -> Chain0:
    """Point-valued product of sticks with squares.

    An h-stick meets a square's plane at one endpoint and counts there with
    twice the infinitesimal weight of that endpoint.
    """
    out = None
    for e in range(3):
        dens = _square_density(v.u[..., e, :, :, :], e)
        h = a.hstick[..., e, :, :, :]
        term = a.inf[..., e, :, :, :] * dens
        term = term + 2 * h * dens
        term = term + 2 * translate(h * shift_axis(dens, e, 1), unit_offset(e, 1))
        out = term if out is None else out + term
    return Chain0(out)


def pair_stick_square(a: Chain1, v: Chain2):
    """Intersection number ``#(a . v)``."""
    return augmentation(intersect12(a, v))


def imap(a: Chain1) -> Chain1:
    """Replace each h-stick by two infinitesimal sticks of weight 2 at its endpoints."""
    h = a.hstick
    inf = a.inf + 2 * h
    for e in range(3):
        inf[..., e, :, :, :] += 2 * translate(h[..., e, :, :, :], unit_offset(e, 1))
    return Chain1.from_inf(inf)


def _square_product_x(F: np.ndarray, G: np.ndarray):
    """x-directed part of ``sum_{a,b} F_a G_b zx_a . xy_b``.

    Returns ``(inf_x, hstick_x)`` fields.  The intersection lies on the line
    ``(., a2, b3)`` and is weighted by ``2^-(|a2-b2| + |a3-b3|)``.
    """
    like = F * G
    inf = zeros_like(like)
    hst = zeros_like(like)
    for d1 in range(-2, 3):
        for d2 in (-1, 0, 1):
            for d3 in (-1, 0, 1):
                prod = F * shift(G, (d1, d2, d3))
                w = 2 ** (abs(d2) + abs(d3))
                if w != 1:
                    prod = prod / w
                if abs(d1) == 2:
                    inf += translate(prod, (d1 // 2, 0, d3))
                elif d1 == 1:
                    hst += translate(prod, (0, 0, d3))
                elif d1 == -1:
                    hst += translate(prod, (-1, 0, d3))
                else:
                    # 2h-stick centred at a minus infinitesimals at its ends
                    hst += translate(prod, (-1, 0, d3)) + translate(prod, (0, 0, d3))
                    inf -= translate(prod, (-1, 0, d3)) + translate(prod, (1, 0, d3))
    return inf, hst


def _product_x(A: np.ndarray, B: np.ndarray):
    inf1, h1 = _square_product_x(A[..., 1, :, :, :], B[..., 2, :, :, :])
    inf2, h2 = _square_product_x(B[..., 1, :, :, :], A[..., 2, :, :, :])
    return inf1 - inf2, h1 - h2


def intersect22(a: Chain2, b: Chain2) -> Chain1:
    """Product of square chains, a 1-chain; anticommutative."""
    infs, hs = [], []
    for e in range(3):
        inf, h = _product_x(rotate_components(a.u, -e), rotate_components(b.u, -e))
        infs.append(rotate_field(inf, e))
        hs.append(rotate_field(h, e))
    return Chain1(np.stack(infs, axis=-4), np.stack(hs, axis=-4))


def gram_apply(x: Chain2) -> Chain2:
    """Apply the metric's Gram matrix: weight ``2^-|d|_1`` for ``|d|_inf <= 1``."""
    return Chain2(smear(smear(smear(x.u, 0), 1), 2))


def _contract(a: np.ndarray, b: np.ndarray):
    return (a * b).sum(axis=(-4, -3, -2, -1))


def metric(a: Chain2, b: Chain2):
    """``(a, b)`` from the closed-form Gram stencil."""
    return _contract(a.u, gram_apply(b).u)


def metric_via_pairing(a: Chain2, b: Chain2):
    """``(a, b) = #(a . *b)`` evaluated through stick/square intersections."""
    return pair_stick_square(expand2h(star2(b)), a)


def linking(a: Chain2, b: Chain2):
    """``<a, b> = #(a . d b)``."""
    return pair_stick_square(expand2h(boundary2(b)), a)


def triple(a: Chain2, b: Chain2, c: Chain2):
    """``{a, b, c} = #(a . b . c)``."""
    return pair_stick_square(intersect22(a, b), c)


def leibniz_defect(a: Chain2, b: Chain2) -> Chain0:
    """``d(a . b) - (da . b - a . db)``; identically zero."""
    da = expand2h(boundary2(a))
    db = expand2h(boundary2(b))
    return boundary1(intersect22(a, b)) - (intersect12(da, b) - intersect12(db, a))
