import numpy as np
import pytest

from cqbound.matcore import get_eig_method, set_eig_method


@pytest.fixture
def rng():
    return np.random.default_rng(20191104)


@pytest.fixture
def jacobi():
    """Run a test with the Jacobi eigensolver as the module default."""
    old = get_eig_method()
    set_eig_method("jacobi")
    yield
    set_eig_method(old)


def random_hermitian(rng, d):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return g + g.conj().T


def ket(d, i):
    v = np.zeros(d, dtype=complex)
    v[i] = 1.0
    return v


def proj(v):
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def pure_partner(psi, eps, rng):
    """Unit vector at trace distance ``eps`` from ``psi``: for pure states
    the distance is ``sqrt(1 - |<psi|phi>|^2)``."""
    chi = rng.standard_normal(psi.size) + 1j * rng.standard_normal(psi.size)
    chi -= np.vdot(psi, chi) * psi
    chi /= np.linalg.norm(chi)
    return np.sqrt(1 - eps * eps) * psi + eps * chi


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
