import sys
from pathlib import Path

import gmpy2
import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fluidalg.chain_complex import Chain2, to_rational  # noqa: E402


def dyadic(rng, shape, denom=4, span=8):
    """Random dyadic rationals: exactly representable as floats and as mpq."""
    return rng.integers(-span, span + 1, size=shape) / denom


def exact(a):
    """Float array (exact dyadics) to an object array of ``gmpy2.mpq``."""
    return to_rational(np.asarray(a, dtype=float), gmpy2.mpq)


def random_chain2(rng, N, batch=(), mode="float"):
    u = dyadic(rng, batch + (3, N, N, N))
    return Chain2(exact(u) if mode == "rational" else u)


def all_zero(a) -> bool:
    return all(x == 0 for x in np.asarray(a).flat)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


_ACCEPTANCE = []


@pytest.fixture
def acceptance_report():
    """Record one PASS/FAIL line per acceptance criterion, echoed after the run."""
    def report(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {label}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return ok
    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: s.split("criterion ")[1]):
            terminalreporter.write_line(line)
