"""Entropy functionals, all in bits."""

from __future__ import annotations

import math

import numpy as np

from .config import TOL
from .errors import DimensionMismatch, NotPSD, OutOfRange
from .matcore import eigvalsh, hermitian_eig, partial_trace, tensor_product
from .states import CQState, embed_cq

# eigenvalues at or below this are treated as exact zeros when deciding
# support inclusion for the relative entropy
_SUPPORT_FLOOR = 1e-14


def _xlog2x(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    pos = p > 0
    out[pos] = p[pos] * np.log2(p[pos])
    return out


def binary_entropy(eps: float) -> float:
    """``h2(eps)`` with ``0 log 0 = 0``."""
    if not 0.0 <= eps <= 1.0:
        raise OutOfRange(f"binary entropy argument {eps!r} outside [0, 1]")
    return float(-_xlog2x(np.array([eps, 1.0 - eps])).sum())


def shannon_entropy(p) -> float:
    return float(-_xlog2x(np.ravel(p)).sum())


def shannon_conditional(p) -> float:
    """``H(Y|X)`` of a joint table ``p[x, y]``; rows with ``p_X(x) = 0`` are skipped."""
    p = np.asarray(p, dtype=float)
    px = p.sum(axis=1)
    total = 0.0
    for x in np.nonzero(px > 0)[0]:
        total += px[x] * shannon_entropy(p[x] / px[x])
    return total


def clamped_spectrum(rho) -> np.ndarray:
    """Eigenvalues with negative rounding dust set to zero.

    Eigenvalues below ``-TOL.psd`` mean the input is not a state and raise
    :class:`NotPSD`.  No renormalisation is applied.
    """
    lam = eigvalsh(rho)
    if lam.size and lam[-1] < -TOL.psd:
        raise NotPSD(f"eigenvalue {lam[-1]:.3e} below -{TOL.psd:g}")
    return np.clip(lam, 0.0, None)


def von_neumann(rho) -> float:
    return float(-_xlog2x(clamped_spectrum(rho)).sum())


def conditional_entropy_cq(state: CQState) -> float:
    """``H(B|X) = sum_x r(x) H(rho_x)``."""
    total = 0.0
    for r, rho in zip(state.weights, state.conditionals):
        if r > 0:
            total += r * von_neumann(rho)
    return float(total)


def conditional_entropy_bipartite(rho, dim_a: int, dim_b: int) -> float:
    """``H(A|B) = H(AB) - H(B)``; may be negative for entangled states."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (dim_a * dim_b, dim_a * dim_b):
        raise DimensionMismatch(f"state of shape {rho.shape} is not on {dim_a}x{dim_b}")
    rho_b = partial_trace(rho, dim_a, dim_b, keep="second")
    return von_neumann(rho) - von_neumann(rho_b)


def relative_entropy(omega, tau) -> float:
    """Quantum relative entropy ``D(omega || tau)`` in bits.

    Evaluated term by term over the two eigenbases,

        (1/ln 2) sum_{x,y} |<phi_x|psi_y>|^2 [l_x ln(l_x/m_y) + m_y - l_x],

    and returns ``math.inf`` when some eigenvector of ``omega`` with positive
    weight overlaps (above ``TOL.overlap``) the kernel of ``tau``.
    """
    omega = np.asarray(omega, dtype=complex)
    tau = np.asarray(tau, dtype=complex)
    if omega.shape != tau.shape:
        raise DimensionMismatch(f"shapes {omega.shape} and {tau.shape} differ")
    eo = hermitian_eig(omega)
    et = hermitian_eig(tau)
    lam = np.where(eo.eigenvalues > _SUPPORT_FLOOR, eo.eigenvalues, 0.0)
    mu = np.where(et.eigenvalues > _SUPPORT_FLOOR, et.eigenvalues, 0.0)
    overlap = np.abs(eo.eigenvectors.conj().T @ et.eigenvectors) ** 2
    lam_col = lam[:, None]
    mu_row = mu[None, :]
    violated = (lam_col > 0) & (mu_row == 0) & (overlap > TOL.overlap)
    if np.any(violated):
        return math.inf
    both = (lam_col > 0) & (mu_row > 0)
    log_term = np.zeros_like(overlap)
    ratio = np.divide(lam_col, mu_row, out=np.ones_like(overlap), where=both)
    log_term[both] = (lam_col * np.log(ratio))[both]
    total = np.sum(overlap * (log_term + mu_row - lam_col))
    return float(total / math.log(2))


def mutual_information(rho, dim_l: int, dim_m: int) -> float:
    """``I(L;M) = D(rho_LM || rho_L (x) rho_M)``."""
    rho = np.asarray(rho, dtype=complex)
    rho_l = partial_trace(rho, dim_l, dim_m, keep="first")
    rho_m = partial_trace(rho, dim_l, dim_m, keep="second")
    return relative_entropy(rho, tensor_product(rho_l, rho_m))


def cq_entropy_via_mutual_information(state: CQState) -> float:
    """``H(B) - I(X;B)`` evaluated on the embedded state.

    Agrees with :func:`conditional_entropy_cq` for every cq state; the two
    routes share nothing but the eigensolver.
    """
    n, d = state.alphabet_size, state.dim_b
    rho = embed_cq(state)
    rho_b = partial_trace(rho, n, d, keep="second")
    return von_neumann(rho_b) - mutual_information(rho, n, d)
