"""The conditional dephasing channel and the truncating projection channel.

The conditional dephasing channel built from a cq state ``rho`` measures the
classical register and then dephases ``B`` in the eigenbasis of the
conditional state ``rho_x`` for the observed letter ``x``.  It is unital,
idempotent, fixes ``rho`` itself and leaves the ``X`` marginal of every
input unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import TOL
from .errors import BadTruncationLevel, DimensionMismatch
from .matcore import hermitian_eig, partial_trace
from .states import CQState, embed_cq, extract_cq, make_joint


@dataclass(frozen=True, eq=False)
class ConditionalDephasingChannel:
    """``bases[x]`` holds the orthonormal basis for letter ``x`` as columns."""

    bases: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.bases, dtype=complex)
        if b.ndim != 3 or b.shape[1] != b.shape[2]:
            raise DimensionMismatch(f"bases must have shape (n, d, d), got {b.shape}")
        eye = np.eye(b.shape[1])
        for x, v in enumerate(b):
            err = np.max(np.abs(v.conj().T @ v - eye))
            if err > TOL.ortho:
                raise ValueError(f"basis for letter {x} is not orthonormal (error {err:.2e})")
        object.__setattr__(self, "bases", b)

    @property
    def alphabet_size(self) -> int:
        return self.bases.shape[0]

    @property
    def dim_b(self) -> int:
        return self.bases.shape[1]

    def __call__(self, omega) -> np.ndarray:
        return apply_conditional_dephasing(self, omega)


def build_conditional_dephasing(state: CQState) -> ConditionalDephasingChannel:
    """Channel that dephases each letter in the eigenbasis of its conditional.

    Degenerate eigenspaces get whatever orthonormal basis the eigensolver
    returns.
    """
    return ConditionalDephasingChannel(
        np.stack([hermitian_eig(rho).eigenvectors for rho in state.conditionals])
    )


def _check_dims(ch: ConditionalDephasingChannel, omega) -> np.ndarray:
    omega = np.asarray(omega, dtype=complex)
    n = ch.alphabet_size * ch.dim_b
    if omega.shape != (n, n):
        raise DimensionMismatch(
            f"state of shape {omega.shape} does not match channel on "
            f"{ch.alphabet_size}x{ch.dim_b}"
        )
    return omega


def apply_conditional_dephasing(ch: ConditionalDephasingChannel, omega) -> np.ndarray:
    """Apply the channel blockwise: rotate each diagonal block into its basis,
    keep the diagonal, rotate back.  Off-diagonal blocks are discarded."""
    omega = _check_dims(ch, omega)
    d = ch.dim_b
    out = np.zeros_like(omega)
    for x, v in enumerate(ch.bases):
        sl = slice(x * d, (x + 1) * d)
        diag = np.einsum("ji,jk,ki->i", v.conj(), omega[sl, sl], v)
        out[sl, sl] = (v * diag.real) @ v.conj().T
    return out


def apply_conditional_dephasing_literal(ch: ConditionalDephasingChannel, omega) -> np.ndarray:
    """Reference form ``sum_{x,y} P_xy omega P_xy`` with
    ``P_xy = |x><x| (x) |phi_yx><phi_yx|``.  Quadratically slower; kept for
    cross-checking :func:`apply_conditional_dephasing`."""
    omega = _check_dims(ch, omega)
    n, d = ch.alphabet_size, ch.dim_b
    out = np.zeros_like(omega)
    for x in range(n):
        ket_x = np.zeros(n)
        ket_x[x] = 1.0
        for y in range(d):
            phi = ch.bases[x][:, y]
            proj = np.kron(np.outer(ket_x, ket_x), np.outer(phi, phi.conj()))
            out += proj @ omega @ proj
    return out


def check_unital(ch: ConditionalDephasingChannel, atol: float = 1e-10) -> bool:
    n = ch.alphabet_size * ch.dim_b
    mixed = np.eye(n) / n
    return bool(np.max(np.abs(apply_conditional_dephasing(ch, mixed) - mixed)) <= atol)


def extract_joint(ch: ConditionalDephasingChannel, state: CQState) -> np.ndarray:
    """Joint table ``s(x, y) = s(x) <phi_yx| sigma_x |phi_yx>``.

    This is the classical distribution obtained by dephasing ``state`` with
    ``ch``.  Diagonal elements of a state are non-negative, so rounding dust
    below zero is clipped.
    """
    if (state.alphabet_size, state.dim_b) != (ch.alphabet_size, ch.dim_b):
        raise DimensionMismatch(
            f"cq state on {state.alphabet_size}x{state.dim_b} does not match channel on "
            f"{ch.alphabet_size}x{ch.dim_b}"
        )
    cond = np.einsum("xji,xjk,xki->xi", ch.bases.conj(), state.conditionals, ch.bases).real
    p = state.weights[:, None] * np.clip(cond, 0.0, None)
    return make_joint(p / p.sum())


def apply_projection_channel(k: int, rho, alphabet_size: int, dim_b: int) -> np.ndarray:
    """Truncate the classical register to its first ``k`` letters.

    Computes ``Pi rho Pi + (Pi / k) (x) Tr_X[(I - Pi) rho]`` where ``Pi``
    projects onto letters ``0..k-1``.  Mass on the discarded letters is
    spread uniformly over the kept ones.
    """
    n, d = alphabet_size, dim_b
    if not 1 <= k <= n:
        raise BadTruncationLevel(f"truncation level {k} outside 1..{n}")
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (n * d, n * d):
        raise DimensionMismatch(f"state of shape {rho.shape} is not on {n}x{d}")
    pi_x = np.diag((np.arange(n) < k).astype(float))
    pi = np.kron(pi_x, np.eye(d))
    leaked = partial_trace((np.eye(n * d) - pi) @ rho, n, d, keep="second")
    return pi @ rho @ pi + np.kron(pi_x / k, leaked)


def truncate_cq(state: CQState, k: int) -> CQState:
    """Projection channel applied to a cq state, returned on ``k`` letters."""
    n, d = state.alphabet_size, state.dim_b
    out = apply_projection_channel(k, embed_cq(state), n, d)
    return extract_cq(out[: k * d, : k * d], k, d)
