"""Acceptance suite: one test and one PASS/FAIL line per criterion.

Run on its own with ``pytest tests/test_acceptance.py -v``; the lines are
repeated in an "acceptance criteria" section at the end of the session.
"""
import filecmp
import time
from itertools import product

import numpy as np
import scipy.linalg
from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from conftest import all_zero, exact, random_chain2
from fluidalg import cli
from fluidalg.chain_complex import (
    Chain1,
    Chain2,
    basis_chain2,
    basis_inf_sticks,
    boundary2,
    expand2h,
    laplacian,
    star1,
    star2,
)
from fluidalg.config import SimConfig
from fluidalg.hodge import (
    build_green_set,
    cached_green_set,
    dipole_line_source,
    green_p_field,
    green_x,
    project_pi,
)
from fluidalg.intersection import gram_apply, leibniz_defect, linking, pair_stick_square, triple
from fluidalg.simulator import relative_conservation, run
from fluidalg.vorticity import curl, nonlinear_generic, nonlinear_optimized


def test_criterion_1_algebra_axioms_exact(acceptance_report):
    N = 3
    rng = np.random.default_rng(1)
    start = time.perf_counter()

    B = Chain2(exact(basis_chain2(N).u))
    defect = leibniz_defect(Chain2(B.u[:, None]), Chain2(B.u[None, :]))
    pairs = defect.p.shape[0] * defect.p.shape[1]
    leibniz_ok = all_zero(defect.p)

    a, b, c = (random_chain2(rng, N, (200,), mode="rational") for _ in range(3))
    symmetric = all_zero(linking(a, b) - linking(b, a))
    t = triple(a, b, c)
    alternating = (all_zero(t + triple(b, a, c)) and all_zero(t - triple(b, c, a))
                   and all_zero(triple(a, a, b)))
    elapsed = time.perf_counter() - start

    ok = leibniz_ok and symmetric and alternating and elapsed < 60
    acceptance_report(
        "1", ok,
        f"product rule on {pairs} ordered basis pairs {'exact' if leibniz_ok else 'BROKEN'}; "
        f"linking symmetry x200 {symmetric}; triple alternation x200 {alternating}; "
        f"{elapsed:.1f}s (limit 60s)",
    )
    assert ok


def test_criterion_2_metric_spectrum(acceptance_report):
    N = 3
    B = basis_chain2(N)
    gram = gram_apply(B).u.reshape(3 * N**3, -1)
    eig = np.sort(np.linalg.eigvalsh(gram))
    one_d = [1 + np.cos(2 * np.pi * j / N) for j in range(N)]
    expected = np.sort([x * y * z for x, y, z in product(one_d, repeat=3)] * 3)
    err = np.abs(eig - expected).max()
    ok = err <= 1e-10 and abs(eig.min() - 0.125) <= 1e-10
    acceptance_report("2", ok, f"max eigenvalue error {err:.2e}, min eigenvalue {eig.min():.12f}")
    assert ok


def exact_rank_of_curl(N):
    M = star1(boundary2(basis_chain2(N, "rational"))).u.reshape(3 * N**3, -1)
    rows = [[ZZ(int(v)) for v in row] for row in M]
    return DomainMatrix(rows, M.shape, ZZ).convert_to(QQ).rank()


def test_criterion_3_rank_of_v(acceptance_report):
    targets = {3: 72, 5: 360}
    ranks = {N: exact_rank_of_curl(N) for N in targets}
    ok = all(ranks[N] == targets[N] for N in targets)
    detail = "; ".join(f"N={N}: rank {ranks[N]} (target {targets[N]}, "
                       f"2(N^3-1) = {2 * (N**3 - 1)})" for N in targets)
    acceptance_report("3", ok, detail)
    assert ranks == targets


def test_criterion_4_rhs_paths(acceptance_report):
    rng = np.random.default_rng(4)
    X = random_chain2(rng, 3, (20,), mode="rational")
    exact_ok = all_zero(nonlinear_generic(X).inf - nonlinear_optimized(X).inf)

    X = Chain2(rng.standard_normal((100, 3, 7, 7, 7)))
    fast, slow = nonlinear_optimized(X).inf, nonlinear_generic(X).inf
    rel = (np.abs(fast - slow).max(axis=(-4, -3, -2, -1))
           / np.abs(slow).max(axis=(-4, -3, -2, -1))).max()
    ok = exact_ok and rel <= 1e-12
    acceptance_report("4", ok, f"N=3 rationals x20 exact {exact_ok}; "
                               f"N=7 floats x100 max relative {rel:.2e} (limit 1e-12)")
    assert ok


def test_criterion_5_poisson_closed_form(acceptance_report):
    lap_err, green_err = {}, {}
    for N in (3, 5, 7, 9):
        lap_err[N] = np.abs(laplacian(green_p_field(N)).p - dipole_line_source(N).p).max()
        green_err[N] = (green_x(N, "cg") - green_x(N, "closed_form")).max_abs()
    ok = max(lap_err.values()) <= 1e-10 and max(green_err.values()) <= 1e-10
    acceptance_report("5", ok, "N=3,5,7,9: Laplacian residual max "
                               f"{max(lap_err.values()):.2e}, Green set agreement max "
                               f"{max(green_err.values()):.2e} (limit 1e-10)")
    assert ok


def v_basis(N):
    """Independent columns of the curl images (a basis of V), by pivoted QR."""
    span = curl(basis_chain2(N)).u.reshape(3 * N**3, -1)
    _, R, piv = scipy.linalg.qr(span.T, pivoting=True)
    rank = int((np.abs(np.diag(R)) > 1e-9).sum())
    return Chain2(span[piv[:rank]].reshape((rank, 3, N, N, N)))


def test_criterion_6_projection_defining_property(acceptance_report):
    N = 3
    green = build_green_set(N)
    V = v_basis(N)
    A = basis_inf_sticks(N)
    P = project_pi(A, green)
    n_a, n_v = A.inf.shape[0], V.u.shape[0]
    lhs = pair_stick_square(expand2h(star2(Chain2(P.u[:, None]))), Chain2(V.u[None]))
    rhs = pair_stick_square(Chain1.from_inf(A.inf[:, None]), Chain2(V.u[None]))
    err = np.abs(lhs - rhs).max()
    ok = err <= 1e-10
    acceptance_report("6", ok, f"{n_a} sticks x {n_v} basis vectors of V, max error {err:.2e}")
    assert ok


def test_criterion_7_semidiscrete_conservation(acceptance_report):
    worst = {}
    for N in (3, 5, 7):
        rng = np.random.default_rng(70 + N)
        green = cached_green_set(N)
        vals = [relative_conservation(curl(Chain2(rng.standard_normal((3, N, N, N)))), green)
                for _ in range(50)]
        worst[N] = max(max(v) for v in vals)
    ok = max(worst.values()) <= 1e-10
    acceptance_report("7", ok, "50 states per N, worst relative residual "
                      + ", ".join(f"N={N}: {w:.1e}" for N, w in worst.items()))
    assert ok


def test_criterion_8_integrator_behaviour(acceptance_report):
    common = dict(N=7, dt=1e-3, steps=10_000, seed=0, init="random")
    start = time.perf_counter()
    mid = run(SimConfig(integrator="midpoint", midpoint_tol=1e-10, diag_every=1, **common))
    t_mid = time.perf_counter() - start
    rk = run(SimConfig(integrator="rk4", diag_every=100, **common))
    elapsed = time.perf_counter() - start

    dE = max(abs(d.energy - 1) for d in mid)
    dH = max(abs(d.helicity - mid[0].helicity) for d in mid)
    mid_ok = dE <= 1e-6 and dH <= 1e-6

    drift = np.array([abs(d.energy - 1) for d in rk[1:]])
    quarters = [q.mean() for q in np.array_split(drift, 4)]
    rk_ok = drift[-1] > 0 and quarters[-1] > quarters[0]
    ok = mid_ok and rk_ok and elapsed < 600
    acceptance_report(
        "8", ok,
        f"midpoint max|E-1| {dE:.1e}, max|H-H0| {dH:.1e} ({t_mid:.0f}s); "
        f"RK4 |E-1| quarter means " + ", ".join(f"{q:.1e}" for q in quarters)
        + f", final {drift[-1]:.1e}; total {elapsed:.0f}s",
    )
    assert ok


def test_criterion_9_determinism(tmp_path, acceptance_report):
    argv = ["run", "--N", "5", "--steps", "30", "--seed", "123", "--snapshot-every", "10",
            "--integrator", "midpoint"]
    for name in ("a", "b"):
        assert cli.main(argv + ["--out-dir", str(tmp_path / name)]) == 0
    # config.txt differs by design (it records each run's out_dir)
    files = ["diagnostics.csv"] + sorted(p.name for p in (tmp_path / "a").glob("*.fceu"))
    same = all(filecmp.cmp(tmp_path / "a" / f, tmp_path / "b" / f, shallow=False)
               for f in files)
    ok = same and len(files) == 5
    acceptance_report("9", ok, f"CSV and {len(files) - 1} snapshots byte-identical "
                               f"across two runs: {same}")
    assert ok
