"""Poisson solves, Hodge splitting of 2h 1-chains and the projector onto V."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.sparse.linalg import LinearOperator, cg

from .chain_complex import (
    Chain0,
    Chain1,
    Chain2,
    TwoHChain1,
    cboundary1,
    cgrad,
    check_period,
    harmonic_part,
    laplacian,
    rotate,
    star1,
    translate,
    unit_offset,
)

log = logging.getLogger(__name__)


class SolvabilityError(ValueError):
    """Raised when a Poisson right-hand side has nonzero total."""


class SolverError(RuntimeError):
    pass


def rmap(g: Chain1) -> TwoHChain1:
    """Replace infinitesimal sticks by 2h-sticks with the same intersection numbers.

    ``(x)_c`` maps to ``sum_k (-1)^k (N - 2k)/8`` times the 2h-stick centred at ``c + k i``.
    """
    if g.has_hsticks():
        raise ValueError("rmap takes infinitesimal sticks only")
    inf = g.inf
    N = inf.shape[-1]
    comps = []
    for e in range(3):
        f = inf[..., e, :, :, :]
        acc = None
        for k in range(N):
            term = translate(f, unit_offset(e, k)) * (N - 2 * k) / 8
            if k % 2:
                term = -term
            acc = term if acc is None else acc + term
        comps.append(acc)
    return TwoHChain1(np.stack(comps, axis=-4))


def solve_poisson_cg(rhs: Chain0, rtol: float = 1e-13) -> Chain0:
    """Zero-mean solution of ``laplacian(p) = rhs`` by conjugate gradients."""
    b = np.asarray(rhs.p, dtype=float)
    N = b.shape[-1]
    scale = float(np.abs(b).sum())
    if abs(float(b.sum())) > 1e-12 * max(scale, 1.0):
        raise SolvabilityError(
            f"Poisson right-hand side must sum to zero (sum = {float(b.sum()):.3e})"
        )
    if scale == 0.0:
        return Chain0(np.zeros_like(b))
    shape = (N, N, N)
    n = N**3

    def neg_lap(v):
        return -laplacian(Chain0(v.reshape(shape))).p.reshape(n)

    op = LinearOperator((n, n), matvec=neg_lap, dtype=float)
    centred = b - b.mean()
    x, info = cg(op, -centred.reshape(n), rtol=rtol, atol=0.0, maxiter=50 * n)
    if info != 0:
        raise SolverError(f"conjugate gradient did not converge (info={info})")
    p = x.reshape(shape)
    p = p - p.mean()
    resid = np.abs(laplacian(Chain0(p)).p - centred).max()
    if resid > 1e-12 * np.abs(centred).max():
        raise SolverError(f"Poisson residual {resid:.3e} above tolerance")
    return Chain0(p)


def nu_largest(N: int, l, m):
    """Largest root of ``nu^2 + nu^-2 = 6 - 2cos(4 pi l/N) - 2cos(4 pi m/N)``."""
    c = 0.5 * np.cos(4 * np.pi * np.asarray(l) / N) + 0.5 * np.cos(4 * np.pi * np.asarray(m) / N)
    return np.sqrt(1 - c) + np.sqrt(2 - c)


def dipole_line_source(N: int) -> Chain0:
    """``1/2 (-1)^(a1-1)`` on the x-axis points ``a1 != 0``, zero elsewhere."""
    p = np.zeros((N, N, N))
    for a1 in range(1, N):
        p[a1, 0, 0] = 0.5 * (-1) ** (a1 - 1)
    return Chain0(p)


def green_p_field(N: int) -> Chain0:
    """Closed-form potential solving ``laplacian(p) = dipole_line_source(N)``.

    A double Fourier sum over the two transverse directions, with the third
    direction handled by the four real roots ``+-nu, +-1/nu``.
    """
    N = check_period(N)
    a = np.arange(N)
    a1, a2, a3 = np.meshgrid(a, a, a, indexing="ij")
    p = np.zeros((N, N, N))
    for l in range(1, N):
        tan = np.tan(np.pi * l / N)
        for m in range(N):
            nu = float(nu_largest(N, l, m))
            nuN = nu**N
            profile = (
                (nu**a3 + nu ** (N - a3)) / (1 - nuN)
                + ((-nu) ** a3 + (-nu) ** (N - a3)) / (1 + nuN)
            ) / (nu**2 - nu**-2)
            p += tan * np.sin(2 * np.pi * (l * a1 + m * a2) / N) * profile
    p /= 4 * N**2
    return Chain0(p - p.mean())


@dataclass(frozen=True)
class HodgeSplit:
    """``q = e + f + c``: boundary part, gradient part, constant part."""

    e: TwoHChain1
    f: TwoHChain1
    c: TwoHChain1
    potential: Chain0


def hodge_split(q: TwoHChain1, solver=solve_poisson_cg) -> HodgeSplit:
    c = harmonic_part(q)
    p = solver(cboundary1(q))
    f = cgrad(p)
    return HodgeSplit(e=q - f - c, f=f, c=c, potential=p)


def _unit_x(N: int) -> Chain1:
    return Chain1.unit_inf(N, 0, (0, 0, 0))


@dataclass(frozen=True)
class GreenSet:
    """Images under the projector of the unit infinitesimal sticks at the origin."""

    G: tuple  # (G_x, G_y, G_z) as Chain2
    _spectrum: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def N(self) -> int:
        return self.G[0].N

    @classmethod
    def from_x(cls, Gx: Chain2) -> "GreenSet":
        G = (Gx, rotate(Gx, 1), rotate(Gx, 2))
        stacked = np.stack([g.u for g in G])  # (input axis, output plane, N, N, N)
        return cls(G, np.fft.rfftn(stacked, axes=(-3, -2, -1)))


def green_x(N: int, method: str = "cg") -> Chain2:
    """``pi((x)_0)`` via the Hodge split of ``rmap((x)_0)``."""
    N = check_period(N)
    q = rmap(_unit_x(N))
    if method == "cg":
        split = hodge_split(q)
    elif method == "closed_form":
        source = cboundary1(q)
        expected = dipole_line_source(N)
        if np.abs(source.p - expected.p).max() > 1e-14:
            raise AssertionError("boundary of rmap((x)_0) is not the dipole line source")
        split = hodge_split(q, solver=lambda _rhs: green_p_field(N))
    else:
        raise ValueError(f"unknown Green method {method!r}")
    return star1(split.e)


def build_green_set(N: int, method: str = "cg") -> GreenSet:
    return GreenSet.from_x(green_x(N, method))


@lru_cache(maxsize=8)
def cached_green_set(N: int, method: str = "cg") -> GreenSet:
    log.debug("building Green set N=%d method=%s", N, method)
    return build_green_set(N, method)


def project_pi(a: Chain1, green: GreenSet | None = None, method: str = "fft") -> Chain2:
    """Project infinitesimal sticks onto V by convolving with the Green set."""
    if a.has_hsticks():
        raise ValueError("project_pi takes infinitesimal sticks only")
    inf = np.asarray(a.inf, dtype=float)
    N = inf.shape[-1]
    if green is None:
        green = cached_green_set(N)
    if green.N != N:
        raise ValueError(f"Green set is for N={green.N}, chain has N={N}")
    if method == "fft":
        F = np.fft.rfftn(inf, axes=(-3, -2, -1))
        # sum over input axis s: out[plane] = sum_s F[s] * G_hat[s, plane]
        out_hat = np.einsum("...sxyz,spxyz->...pxyz", F, green._spectrum)
        return Chain2(np.fft.irfftn(out_hat, s=(N, N, N), axes=(-3, -2, -1)))
    if method == "direct":
        stacked = np.stack([g.u for g in green.G])
        out = np.zeros(inf.shape[:-4] + (3, N, N, N))
        for d in np.ndindex(N, N, N):
            w = stacked[(slice(None), slice(None)) + d]  # (s, plane)
            moved = translate(inf, d)  # moved[s, x] = inf[s, x - d]
            out += np.einsum("...sxyz,sp->...pxyz", moved, w)
        return Chain2(out)
    raise ValueError(f"unknown projection method {method!r}")
