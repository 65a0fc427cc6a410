"""Invariant checks run by ``fluidalg check``, in floating point and without time stepping."""
from __future__ import annotations

import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .chain_complex import (
    Chain1,
    Chain2,
    basis_chain2,
    boundary2,
    check_period,
    star1,
)
from .hodge import build_green_set, project_pi
from .intersection import (
    gram_apply,
    leibniz_defect,
    linking,
    metric,
    metric_via_pairing,
    pair_stick_square,
    triple,
)
from .simulator import membership_residual, relative_conservation
from .storage import read_snapshot, write_snapshot
from .vorticity import curl, nonlinear_generic, nonlinear_optimized


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    value: float
    limit: float

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status}  {self.name:<34} {self.value:.3e}  (limit {self.limit:.3g})"


def expected_dim_v(N: int) -> int:
    """Rank of the curl: the 2h complex is a standard cubical torus, so ``2(N^3 - 1)``."""
    return 2 * (N**3 - 1)


def _random_chain(rng, N, batch=()):
    return Chain2(rng.standard_normal(batch + (3, N, N, N)))


def _within(name, value, limit):
    return CheckResult(name, bool(value <= limit), float(value), limit)


def _basis_matrix(op, N):
    """Dense matrix of a linear map on 2-chains, one column per basis square."""
    B = basis_chain2(N)
    return op(B).u.reshape(B.u.shape[0], -1).T


def check_leibniz(N, rng):
    a, b = _random_chain(rng, N, (8,)), _random_chain(rng, N, (8,))
    return _within("product rule", leibniz_defect(a, b).max_abs(), 1e-12)


def check_linking_symmetry(N, rng):
    a, b = _random_chain(rng, N, (8,)), _random_chain(rng, N, (8,))
    return _within("linking symmetry", float(np.abs(linking(a, b) - linking(b, a)).max()), 1e-11)


def check_triple_alternation(N, rng):
    a, b, c = (_random_chain(rng, N, (8,)) for _ in range(3))
    t = triple(a, b, c)
    err = max(
        np.abs(t + triple(b, a, c)).max(),
        np.abs(t + triple(a, c, b)).max(),
        np.abs(t - triple(b, c, a)).max(),
    )
    return _within("triple alternation", float(err), 1e-11)


def check_metric(N, rng):
    a, b = _random_chain(rng, N, (4,)), _random_chain(rng, N, (4,))
    err = np.abs(metric(a, b) - metric_via_pairing(a, b)).max()
    return _within("metric closed form vs pairing", float(err), 1e-11)


def check_metric_positive(N, rng):
    eig = np.linalg.eigvalsh(_basis_matrix(gram_apply, N))
    # minimum of (1 + cos(2 pi j / N))^3 over j
    floor = (1 + np.cos(2 * np.pi * ((N - 1) // 2) / N)) ** 3
    return _within("metric minimum eigenvalue", float(abs(eig.min() - floor)), 1e-10)


def check_dim_v(N, rng):
    rank = np.linalg.matrix_rank(_basis_matrix(curl, N), tol=1e-9)
    return CheckResult(f"dim V == {expected_dim_v(N)}", rank == expected_dim_v(N),
                       float(rank), float(expected_dim_v(N)))


def check_curl(N, rng):
    X = _random_chain(rng, N)
    return _within("curl == star1(boundary2)", (curl(X) - star1(boundary2(X))).max_abs(), 1e-14)


def check_rhs_paths(N, rng):
    X = curl(_random_chain(rng, N))
    fast, slow = nonlinear_optimized(X), nonlinear_generic(X)
    rel = (fast - slow).max_abs() / max(slow.max_abs(), 1e-300)
    return _within("nonlinear term, two paths", rel, 1e-12)


def check_projection(N, rng, green):
    a = Chain1.from_inf(rng.standard_normal((3, N, N, N)))
    pa = project_pi(a, green)
    vs = curl(_random_chain(rng, N, (6,)))
    # #(*pi(a) . v) equals the metric (pi(a), v)
    err = np.abs(metric(pa, vs) - pair_stick_square(a, vs)).max()
    return _within("projection reproduces pairings", max(float(err), membership_residual(pa)),
                   1e-10)


def check_conservation(N, rng, green):
    X = curl(_random_chain(rng, N))
    return _within("energy and helicity conservation", max(relative_conservation(X, green)),
                   1e-10)


def check_snapshot(N, rng):
    X = _random_chain(rng, N)
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "x.fceu"
        write_snapshot(X, path)
        Y = read_snapshot(path)
    return CheckResult("snapshot round trip", bool(np.array_equal(X.u, Y.u)), 0.0, 0.0)


def run_checks(N: int = 3, seed: int = 0, green_method: str = "cg") -> list[CheckResult]:
    N = check_period(N)
    rng = np.random.default_rng(seed)
    green = build_green_set(N, green_method)
    results = [
        check_leibniz(N, rng),
        check_linking_symmetry(N, rng),
        check_triple_alternation(N, rng),
        check_metric(N, rng),
        check_metric_positive(N, rng),
        check_curl(N, rng),
        check_rhs_paths(N, rng),
        check_projection(N, rng, green),
        check_conservation(N, rng, green),
        check_snapshot(N, rng),
    ]
    if N <= 7:
        results.append(check_dim_v(N, rng))
    return results
