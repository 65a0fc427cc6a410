import numpy as np
import pytest

from conftest import random_chain2
from fluidalg.chain_complex import Chain2
from fluidalg.config import SimConfig
from fluidalg.hodge import cached_green_set
from fluidalg.intersection import metric
from fluidalg.simulator import (
    ConvergenceError,
    FluidState,
    IntegrationError,
    diagnostics,
    energy,
    energy_closed_form,
    helicity,
    helicity_via_boundary,
    init_state,
    membership_residual,
    relative_conservation,
    rhs,
    rhs_generic,
    run,
    step_euler,
    step_midpoint,
    step_rk4,
)
from fluidalg.vorticity import curl

N = 5


def test_constant_generator_is_rejected():
    with pytest.raises(ValueError, match="X = 0"):
        init_state("single_mode", 0, N, k=(0, 0, 0))


def test_random_state_has_unit_energy():
    assert energy(init_state("random", 42, N).X) == pytest.approx(1, abs=1e-14)


@pytest.mark.parametrize("recipe", ["random", "single_mode", "taylor_green"])
def test_initial_states_lie_in_v(recipe):
    X = init_state(recipe, 7, N).X
    assert membership_residual(X) < 1e-15


def test_initial_state_depends_only_on_seed():
    a, b = init_state("random", 9, N).X, init_state("random", 9, N).X
    assert np.array_equal(a.u, b.u)
    assert not np.array_equal(a.u, init_state("random", 10, N).X.u)


def test_energy_closed_form_matches_metric(rng):
    X = random_chain2(rng, N, (3,))
    assert np.allclose(energy_closed_form(X), metric(X, X), rtol=1e-14, atol=0)


def test_rhs_of_zero():
    assert rhs(Chain2.zeros(N)).max_abs() == 0


@pytest.mark.parametrize("n", [3, 5, 7])
def test_rhs_conserves_energy_and_helicity(n):
    rng = np.random.default_rng(n)
    for _ in range(5):
        X = curl(Chain2(rng.standard_normal((3, n, n, n))))
        e, h = relative_conservation(X)
        assert e <= 1e-10 and h <= 1e-10


def test_rhs_lands_in_v(rng):
    X = curl(random_chain2(rng, N))
    Xdot = rhs(X)
    assert membership_residual(Xdot) < 1e-14 * Xdot.max_abs()


@pytest.mark.parametrize("stepper", [step_euler, step_rk4, step_midpoint])
def test_zero_state_is_stationary(stepper):
    s = stepper(FluidState(Chain2.zeros(N)), 0.01)
    assert s.X.max_abs() == 0 and s.step == 1 and s.t == 0.01


def test_midpoint_step_conserves_invariants():
    s = init_state("random", 1, N)
    E0, H0 = energy(s.X), helicity(s.X)
    for _ in range(5):
        s = step_midpoint(s, 1e-2, tol=1e-12)
        assert abs(energy(s.X) - E0) <= 1e-8
        assert abs(helicity(s.X) - H0) <= 1e-8


def test_rk4_step_matches_reference_stages_with_generic_rhs():
    s = init_state("random", 2, N)
    dt = 1e-2
    f = rhs_generic
    X = s.X
    k1 = f(X)
    k2 = f(X + k1 * (dt / 2))
    k3 = f(X + k2 * (dt / 2))
    k4 = f(X + k3 * dt)
    expected = X + (k1 + k2 * 2 + k3 * 2 + k4) * (dt / 6)
    assert (step_rk4(s, dt).X - expected).max_abs() <= 1e-12


def test_midpoint_reports_non_convergence():
    s = init_state("random", 3, N)
    with pytest.raises(ConvergenceError) as info:
        step_midpoint(s, 0.5, tol=1e-15, max_iter=2)
    assert info.value.iterations == 2


@pytest.mark.parametrize("stepper", [step_euler, step_rk4, step_midpoint])
def test_steppers_reject_non_positive_dt(stepper):
    with pytest.raises(ValueError):
        stepper(FluidState(Chain2.zeros(N)), 0.0)


def test_diagnostics_of_single_square():
    d = diagnostics(Chain2.unit(N, "yz", (0, 0, 0)))
    assert d.energy == 1 and d.helicity == 0


def test_energy_of_two_adjacent_squares():
    X = Chain2.unit(N, "yz", (0, 0, 0), mode="rational") + Chain2.unit(N, "yz", (1, 0, 0),
                                                                       mode="rational")
    assert energy(X) == 3
    assert energy_closed_form(X) == 3


def test_helicity_routes_agree(rng):
    X = random_chain2(rng, N, (4,))
    assert np.allclose(helicity(X), helicity_via_boundary(X), rtol=0, atol=1e-12)


def test_run_with_zero_steps_emits_initial_diagnostics_only():
    series = run(SimConfig(N=3, steps=0))
    assert len(series) == 1 and series[0].step == 0
    assert series[0].energy == pytest.approx(1, abs=1e-14)


def test_run_cadence_and_snapshots():
    seen, snaps = [], []
    run(SimConfig(N=3, steps=7, diag_every=3, snapshot_every=2, integrator="rk4"),
        on_diagnostics=lambda d: seen.append(d.step),
        on_snapshot=lambda n, X: snaps.append(n))
    assert seen == [0, 3, 6, 7]
    assert snaps == [0, 2, 4, 6]


def test_run_is_deterministic():
    cfg = SimConfig(N=3, steps=5, seed=11)
    assert run(cfg) == run(cfg)


def test_run_refuses_rational_mode():
    with pytest.raises(ValueError):
        run(SimConfig(N=3, steps=1, scalar_mode="rational"))


def test_run_wraps_integrator_failure_with_step_index():
    cfg = SimConfig(N=3, steps=3, dt=0.9, midpoint_tol=1e-300, midpoint_max_iter=1)
    with pytest.raises(IntegrationError, match="step 1"):
        run(cfg)


def test_run_rejects_mismatched_green_set():
    with pytest.raises(ValueError):
        run(SimConfig(N=3, steps=1), green=cached_green_set(5))
