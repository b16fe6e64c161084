"""Dense complex linear algebra: Hermitian eigensystems, tensor products and
partial traces.

Two eigensolvers are available.  :func:`jacobi_eigh` is a cyclic complex
Jacobi iteration written out here; ``"lapack"`` delegates to
:func:`numpy.linalg.eigh`.  Both go through the same validation and
post-processing in :func:`hermitian_eig`, so callers never see the
difference.  The module-level default can be switched with
:func:`set_eig_method`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import MAX_DIM, MAX_SWEEPS, TOL
from .errors import DimensionMismatch, DimensionOverflow, NoConvergence, NotHermitian

_EIG_METHOD = "lapack"


def set_eig_method(method: str) -> None:
    """Select the default eigensolver, ``"lapack"`` or ``"jacobi"``."""
    global _EIG_METHOD
    if method not in ("lapack", "jacobi"):
        raise ValueError(f"unknown eigensolver {method!r}")
    _EIG_METHOD = method


def get_eig_method() -> str:
    return _EIG_METHOD


@dataclass(frozen=True)
class HermitianEigensystem:
    """Eigenvalues in descending order with eigenvectors as matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def projector(self, i: int) -> np.ndarray:
        v = self.eigenvectors[:, i]
        return np.outer(v, v.conj())


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def hermiticity_error(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def _check_hermitian(m) -> np.ndarray:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"matrix is not square: {a.shape}")
    err = hermiticity_error(a)
    if err > TOL.herm:
        raise NotHermitian(f"max |M - M^dagger| = {err:.3e} exceeds {TOL.herm:g}")
    return a


def jacobi_eigh(a: np.ndarray, max_sweeps: int = MAX_SWEEPS, tol: float = 1e-15):
    """Cyclic Jacobi diagonalisation of a complex Hermitian matrix.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies the real symmetric Jacobi rotation that annihilates it.

    Returns ``(w, v)`` in no particular order, like an unsorted ``eigh``.
    Raises :class:`NoConvergence` after ``max_sweeps`` full sweeps.
    """
    a = np.array(a, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    if n < 2:
        return a.diagonal().real.copy(), v
    scale = max(np.linalg.norm(a), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a[~np.eye(n, dtype=bool)])
        if off <= tol * scale:
            return a.diagonal().real.copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ rot
    raise NoConvergence(f"Jacobi iteration did not converge in {max_sweeps} sweeps")


def hermitian_eig(m, method: str | None = None) -> HermitianEigensystem:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Raises :class:`NotHermitian` when ``max|M - M^dagger|`` exceeds the
    Hermiticity tolerance.  The matrix is symmetrised before solving.
    """
    a = _check_hermitian(m)
    a = 0.5 * (a + a.conj().T)
    method = method or _EIG_METHOD
    if method == "jacobi":
        w, v = jacobi_eigh(a)
    elif method == "lapack":
        try:
            w, v = np.linalg.eigh(a)
        except np.linalg.LinAlgError as exc:
            raise NoConvergence(str(exc)) from exc
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    order = np.argsort(w, kind="stable")[::-1]
    return HermitianEigensystem(np.asarray(w[order], dtype=float), v[:, order])


def eigvalsh(m) -> np.ndarray:
    """Eigenvalues only, descending; cheaper when vectors are not needed."""
    a = _check_hermitian(m)
    a = 0.5 * (a + a.conj().T)
    if _EIG_METHOD == "jacobi":
        w, _ = jacobi_eigh(a)
    else:
        w = np.linalg.eigvalsh(a)
    return np.sort(w)[::-1]


def tensor_product(a, b, max_dim: int = MAX_DIM) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    rows, cols = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
    if max(rows, cols) > max_dim:
        raise DimensionOverflow(f"tensor product dimension {rows}x{cols} exceeds cap {max_dim}")
    return np.kron(a, b)


def partial_trace(m, dim_first: int, dim_second: int, keep: str = "first") -> np.ndarray:
    """Trace out one factor of a bipartite operator.

    ``keep`` is ``"first"`` (trace over the second factor) or ``"second"``.
    """
    a = as_matrix(m)
    n = dim_first * dim_second
    if a.shape != (n, n):
        raise DimensionMismatch(
            f"matrix shape {a.shape} does not factor as {dim_first}x{dim_second}"
        )
    t = a.reshape(dim_first, dim_second, dim_first, dim_second)
    if keep == "first":
        return np.einsum("ijkj->ik", t)
    if keep == "second":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 'first' or 'second', not {keep!r}")


def swap_subsystems(m, dim_first: int, dim_second: int) -> np.ndarray:
    """Reorder an operator on ``A (x) B`` to act on ``B (x) A``."""
    a = as_matrix(m)
    n = dim_first * dim_second
    if a.shape != (n, n):
        raise DimensionMismatch(f"matrix shape {a.shape} does not factor as {dim_first}x{dim_second}")
    t = a.reshape(dim_first, dim_second, dim_first, dim_second)
    return t.transpose(1, 0, 3, 2).reshape(n, n)
