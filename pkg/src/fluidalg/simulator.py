"""Initial data, the Euler right-hand side, time steppers and invariants."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .chain_complex import (
    PLANES,
    Chain2,
    boundary2,
    cboundary1,
    check_period,
    expand2h,
    harmonic_part,
    shift,
    star2,
)
from .config import SimConfig
from .hodge import GreenSet, cached_green_set, project_pi
from .intersection import metric, pair_stick_square
from .vorticity import curl, nonlinear_generic, nonlinear_optimized

log = logging.getLogger(__name__)


class ConvergenceError(RuntimeError):
    def __init__(self, residual, iterations):
        super().__init__(
            f"implicit midpoint did not converge in {iterations} iterations "
            f"(residual {residual:.3e})"
        )
        self.residual = residual
        self.iterations = iterations


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class FluidState:
    X: Chain2
    t: float = 0.0
    step: int = 0


@dataclass(frozen=True)
class Diagnostics:
    step: int
    time: float
    energy: float
    helicity: float
    rhs_energy_residual: float
    rhs_helicity_residual: float


def membership_residual(X: Chain2) -> float:
    """Largest violation of the two conditions cutting out V = Im(*d)."""
    q = star2(X)
    return max(cboundary1(q).max_abs(), harmonic_part(q).max_abs())


# half of the 26 neighbours, with the divisor of their weight in the energy expansion
_HALF_NEIGHBOURS = (
    ((1, 0, 0), 1), ((0, 1, 0), 1), ((0, 0, 1), 1),
    ((1, 1, 0), 2), ((1, -1, 0), 2), ((1, 0, 1), 2),
    ((1, 0, -1), 2), ((0, 1, 1), 2), ((0, 1, -1), 2),
    ((1, 1, 1), 4), ((1, 1, -1), 4), ((1, -1, 1), 4), ((1, -1, -1), 4),
)


def energy_closed_form(X: Chain2):
    """``(X, X)`` written out over the thirteen forward neighbours of each square."""
    u = X.u
    total = (u * u).sum(axis=(-4, -3, -2, -1))
    for off, div in _HALF_NEIGHBOURS:
        nb = (u * shift(u, off)).sum(axis=(-4, -3, -2, -1))
        total = total + (nb if div == 1 else nb / div)
    return total


def energy(X: Chain2):
    return metric(X, X)


def helicity(X: Chain2):
    return metric(X, curl(X))


def helicity_via_boundary(X: Chain2):
    """``#(X . dX)``, equal to ``(X, DX)``."""
    return pair_stick_square(expand2h(boundary2(X)), X)


def rhs(X: Chain2, green: GreenSet | None = None) -> Chain2:
    """Euler right-hand side ``pi(i(X . DX))``."""
    if green is None:
        green = cached_green_set(X.N)
    return project_pi(nonlinear_optimized(X), green)


def rhs_generic(X: Chain2, green: GreenSet | None = None) -> Chain2:
    if green is None:
        green = cached_green_set(X.N)
    return project_pi(nonlinear_generic(X), green)


def diagnostics(X: Chain2, step: int = 0, time: float = 0.0, green=None) -> Diagnostics:
    Xdot = rhs(X, green)
    DX = curl(X)
    return Diagnostics(
        step=step,
        time=time,
        energy=float(energy_closed_form(X)),
        helicity=float(metric(X, DX)),
        rhs_energy_residual=float(metric(Xdot, X)),
        rhs_helicity_residual=float(metric(Xdot, DX)),
    )


def relative_conservation(X: Chain2, green: GreenSet | None = None) -> tuple[float, float]:
    """``|(X', X)|`` and ``|(X', DX)|`` divided by their Cauchy-Schwarz bounds."""
    Xdot = rhs(X, green)
    DX = curl(X)
    norm = math.sqrt(float(metric(Xdot, Xdot)))
    if norm == 0.0:
        return 0.0, 0.0
    e = abs(float(metric(Xdot, X))) / (norm * math.sqrt(float(metric(X, X))))
    h = abs(float(metric(Xdot, DX))) / (norm * math.sqrt(float(metric(DX, DX))))
    return e, h


def _generator(recipe, N, rng, k, orientation):
    w = np.zeros((3, N, N, N))
    a = np.arange(N)
    a1, a2, a3 = np.meshgrid(a, a, a, indexing="ij")
    if recipe == "random":
        w = rng.standard_normal((3, N, N, N))
    elif recipe == "single_mode":
        plane = PLANES.index(orientation) if isinstance(orientation, str) else orientation
        phase = 2 * np.pi * (k[0] * a1 + k[1] * a2 + k[2] * a3) / N
        w[plane] = np.cos(phase)
    elif recipe == "taylor_green":
        w[2] = np.sin(2 * np.pi * a1 / N) * np.sin(2 * np.pi * a2 / N)
    else:
        raise ValueError(f"unknown initial-condition recipe {recipe!r}")
    return Chain2(w)


def init_state(recipe: str, seed: int, N: int, k=(1, 0, 0), orientation="xy") -> FluidState:
    """Unit-energy state ``X = *d w`` for a generator ``w`` built by ``recipe``."""
    N = check_period(N)
    rng = np.random.default_rng(seed)
    X = curl(_generator(recipe, N, rng, k, orientation))
    E = float(energy(X))
    if E <= 1e-24:
        raise ValueError(
            f"recipe {recipe!r} produced X = 0 (generator has zero curl); "
            "choose another seed or mode"
        )
    return FluidState(X / math.sqrt(E))


def _advance(s: FluidState, X: Chain2, dt: float) -> FluidState:
    return FluidState(X, (s.step + 1) * dt, s.step + 1)


def step_euler(s: FluidState, dt: float, f=rhs) -> FluidState:
    if not dt > 0:
        raise ValueError("dt must be positive")
    return _advance(s, s.X + f(s.X) * dt, dt)


def step_rk4(s: FluidState, dt: float, f=rhs) -> FluidState:
    if not dt > 0:
        raise ValueError("dt must be positive")
    X = s.X
    k1 = f(X)
    k2 = f(X + k1 * (dt / 2))
    k3 = f(X + k2 * (dt / 2))
    k4 = f(X + k3 * dt)
    return _advance(s, X + (k1 + k2 * 2 + k3 * 2 + k4) * (dt / 6), dt)


def step_midpoint(s: FluidState, dt: float, tol: float = 1e-10, max_iter: int = 50,
                  f=rhs) -> FluidState:
    """Implicit midpoint rule, fixed-point iteration on the new state."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    if not tol > 0:
        raise ValueError("tol must be positive")
    X = s.X
    Y = X + f(X) * dt
    residual = math.inf
    for _ in range(max_iter):
        Y_new = X + f((X + Y) * 0.5) * dt
        residual = (Y_new - Y).max_abs()
        Y = Y_new
        if residual <= tol:
            return _advance(s, Y, dt)
    raise ConvergenceError(residual, max_iter)


def run(config: SimConfig, on_diagnostics=None, on_snapshot=None,
        green: GreenSet | None = None) -> list[Diagnostics]:
    """Integrate from the configured initial state.

    ``on_diagnostics(d)`` is called every ``diag_every`` steps (and at step 0),
    ``on_snapshot(step, X)`` every ``snapshot_every`` steps when enabled.
    """
    if config.scalar_mode != "float":
        raise ValueError("time integration runs in float mode; rational mode is for tests")
    if green is None:
        green = cached_green_set(config.N, config.green_method)
    elif green.N != config.N:
        raise ValueError(f"Green set is for N={green.N}, config has N={config.N}")

    def f(X):
        return rhs(X, green)

    state = init_state(config.init, config.seed, config.N, config.init_k,
                       config.init_orientation)
    series = []

    def emit(s):
        d = diagnostics(s.X, s.step, s.t, green)
        series.append(d)
        if on_diagnostics is not None:
            on_diagnostics(d)

    emit(state)
    if on_snapshot is not None and config.snapshot_every:
        on_snapshot(0, state.X)
    for n in range(1, config.steps + 1):
        try:
            if config.integrator == "euler":
                state = step_euler(state, config.dt, f)
            elif config.integrator == "rk4":
                state = step_rk4(state, config.dt, f)
            else:
                state = step_midpoint(state, config.dt, config.midpoint_tol,
                                      config.midpoint_max_iter, f)
        except ConvergenceError as exc:
            raise IntegrationError(f"step {n}: {exc}") from exc
        if not np.all(np.isfinite(state.X.u)):
            raise IntegrationError(f"step {n}: state became non-finite")
        if n % config.diag_every == 0 or n == config.steps:
            emit(state)
        if on_snapshot is not None and config.snapshot_every and n % config.snapshot_every == 0:
            on_snapshot(n, state.X)
    log.info("finished %d steps, final energy %.17g", config.steps, series[-1].energy)
    return series
