"""Density operators, classical-quantum states and joint distributions.

Density operators and probability vectors are plain numpy arrays that have
passed through the validating constructors :func:`make_density`,
:func:`make_distribution` and :func:`make_joint`.  A classical-quantum
state gets its own small container, :class:`CQState`, holding the letter
weights and one conditional density operator per letter.

Randomness is always passed in explicitly, either as an integer seed or as a
``numpy.random.Generator``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import MAX_DIM, TOL
from .errors import (
    DimensionMismatch,
    DimensionOverflow,
    NotBlockDiagonal,
    NotNormalized,
    NotPSD,
    TraceNotOne,
    Unreachable,
)
from .matcore import _check_hermitian, eigvalsh

MAX_RESAMPLE = 32


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def make_density(m) -> np.ndarray:
    """Validate ``m`` as a density operator and return it symmetrised.

    Raises
    ------
    NotHermitian, TraceNotOne, NotPSD
    """
    a = _check_hermitian(m)
    a = 0.5 * (a + a.conj().T)
    tr = np.trace(a).real
    if abs(tr - 1.0) > TOL.trace:
        raise TraceNotOne(f"trace is {tr!r}, expected 1")
    lam_min = eigvalsh(a)[-1] if a.size else 0.0
    if lam_min < -TOL.psd:
        raise NotPSD(f"smallest eigenvalue {lam_min:.3e} is below -{TOL.psd:g}")
    return a


def make_distribution(p) -> np.ndarray:
    w = np.asarray(p, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise DimensionMismatch(f"expected a non-empty 1-d weight vector, got shape {w.shape}")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise NotNormalized("weights must be finite and non-negative")
    if abs(w.sum() - 1.0) > TOL.prob:
        raise NotNormalized(f"weights sum to {w.sum()!r}, expected 1")
    return w


def make_joint(p) -> np.ndarray:
    """Validate a joint distribution ``p[x, y]``."""
    a = np.asarray(p, dtype=float)
    if a.ndim != 2 or a.size == 0:
        raise DimensionMismatch(f"expected a 2-d probability table, got shape {a.shape}")
    if not np.all(np.isfinite(a)) or np.any(a < 0):
        raise NotNormalized("probabilities must be finite and non-negative")
    if abs(a.sum() - 1.0) > TOL.prob:
        raise NotNormalized(f"probabilities sum to {a.sum()!r}, expected 1")
    return a


@dataclass(frozen=True, eq=False)
class CQState:
    """``sum_x r(x) |x><x| (x) rho_x`` stored as its weights and conditionals.

    ``conditionals`` has shape ``(alphabet_size, dim_b, dim_b)``.
    """

    weights: np.ndarray
    conditionals: np.ndarray

    def __post_init__(self):
        w = make_distribution(self.weights)
        c = np.asarray(self.conditionals, dtype=complex)
        if c.ndim != 3 or c.shape[1] != c.shape[2]:
            raise DimensionMismatch(f"conditionals must have shape (n, d, d), got {c.shape}")
        if c.shape[0] != w.size:
            raise DimensionMismatch(
                f"{w.size} weights but {c.shape[0]} conditional states"
            )
        c = np.stack([make_density(rho) for rho in c])
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "conditionals", c)

    @property
    def alphabet_size(self) -> int:
        return self.weights.size

    @property
    def dim_b(self) -> int:
        return self.conditionals.shape[1]

    def embed(self) -> np.ndarray:
        return embed_cq(self)


def embed_cq(state: CQState, max_dim: int = MAX_DIM) -> np.ndarray:
    """Block-diagonal matrix on ``X (x) B`` whose block ``x`` is ``r(x) rho_x``."""
    n, d = state.alphabet_size, state.dim_b
    if n * d > max_dim:
        raise DimensionOverflow(f"embedding dimension {n * d} exceeds cap {max_dim}")
    out = np.zeros((n * d, n * d), dtype=complex)
    for x in range(n):
        out[x * d:(x + 1) * d, x * d:(x + 1) * d] = state.weights[x] * state.conditionals[x]
    return out


def extract_cq(rho, alphabet_size: int, dim_b: int) -> CQState:
    """Inverse of :func:`embed_cq`.

    Letters whose weight is below ``TOL.zero_weight`` get the maximally mixed
    conditional ``I/dim_b``; they never contribute to conditional entropies.
    """
    a = np.asarray(rho, dtype=complex)
    n, d = alphabet_size, dim_b
    if a.shape != (n * d, n * d):
        raise DimensionMismatch(f"state of shape {a.shape} is not on a {n}x{d} system")
    t = a.reshape(n, d, n, d)
    blocks = t[np.arange(n), :, np.arange(n), :]
    off = t.copy()
    off[np.arange(n), :, np.arange(n), :] = 0.0
    leak = float(np.max(np.abs(off))) if n > 1 else 0.0
    if leak > TOL.offdiag:
        raise NotBlockDiagonal(f"off-block entry of size {leak:.3e} exceeds {TOL.offdiag:g}")
    weights = np.trace(blocks, axis1=1, axis2=2).real.copy()
    weights[np.abs(weights) < TOL.zero_weight] = 0.0
    conds = np.empty((n, d, d), dtype=complex)
    for x in range(n):
        if weights[x] < TOL.zero_weight:
            conds[x] = np.eye(d) / d
        else:
            conds[x] = blocks[x] / weights[x]
    return CQState(weights / weights.sum(), conds)


def trace_distance(rho, sigma) -> float:
    """Normalised trace distance ``(1/2) ||rho - sigma||_1``."""
    a = np.asarray(rho, dtype=complex)
    b = np.asarray(sigma, dtype=complex)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    return 0.5 * float(np.sum(np.abs(eigvalsh(a - b))))


def total_variation(p, q) -> float:
    a = np.asarray(p, dtype=float)
    b = np.asarray(q, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    return 0.5 * float(np.sum(np.abs(a - b)))


def sample_density(d: int, seed=None, rank: int | None = None) -> np.ndarray:
    """Random density operator ``G G^dagger / Tr(G G^dagger)``.

    With ``rank=None`` this is the Hilbert-Schmidt ensemble (``G`` square
    Ginibre).  A smaller ``rank`` draws ``G`` as ``d x rank`` and gives the
    induced measure on rank-deficient states.
    """
    if d < 1:
        raise ValueError("dimension must be positive")
    rng = _rng(seed)
    k = d if rank is None else rank
    if not 1 <= k <= d:
        raise ValueError(f"rank {k} outside 1..{d}")
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    m = g @ g.conj().T
    m /= np.trace(m).real
    return 0.5 * (m + m.conj().T)


def sample_pure(d: int, seed=None) -> np.ndarray:
    """Haar-random unit vector of length ``d``."""
    rng = _rng(seed)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def sample_cq(alphabet_size: int, dim_b: int, seed=None, low_rank: bool = False) -> CQState:
    """Random cq state: flat-Dirichlet weights, independent conditionals.

    With ``low_rank`` each conditional gets a uniformly chosen rank, which
    reaches the corners of state space that full-rank samples rarely visit.
    """
    rng = _rng(seed)
    w = rng.dirichlet(np.ones(alphabet_size))
    conds = []
    for _ in range(alphabet_size):
        rank = int(rng.integers(1, dim_b + 1)) if low_rank else None
        conds.append(sample_density(dim_b, rng, rank=rank))
    return CQState(w, np.stack(conds))


def _random_rank_density(d: int) -> Callable[[np.random.Generator], np.ndarray]:
    def draw(rng):
        return sample_density(d, rng, rank=int(rng.integers(1, d + 1)))

    return draw


def pair_at_distance(rho, eps: float, seed=None, sampler=None) -> np.ndarray:
    """A state ``sigma`` with ``trace_distance(rho, sigma) == eps``.

    A target ``tau`` is drawn from ``sampler(rng)`` (default: random-rank
    density operators) and ``sigma`` is placed on the segment from ``rho``
    to ``tau``.  Along ``sigma(t) = (1 - t) rho + t tau`` the distance is
    ``t * trace_distance(rho, tau)``, so the segment parameter is solved for
    directly.  Targets closer than ``eps`` are redrawn up to
    ``MAX_RESAMPLE`` times before :class:`Unreachable` is raised.
    """
    rho = np.asarray(rho, dtype=complex)
    if eps == 0:
        return rho.copy()
    if eps < 0:
        raise ValueError("eps must be non-negative")
    rng = _rng(seed)
    draw = sampler or _random_rank_density(rho.shape[0])
    best = 0.0
    for _ in range(MAX_RESAMPLE):
        tau = np.asarray(draw(rng), dtype=complex)
        full = trace_distance(rho, tau)
        best = max(best, full)
        if full < eps:
            continue
        t = eps / full
        sigma = (1.0 - t) * rho + t * tau
        sigma = 0.5 * (sigma + sigma.conj().T)
        if abs(trace_distance(rho, sigma) - eps) <= 1e-8:
            return sigma
    raise Unreachable(
        f"no target within {MAX_RESAMPLE} draws reached distance {eps}; farthest was {best:.6f}"
    )


def cq_sampler(alphabet_size: int, dim_b: int, low_rank: bool = True):
    """Target sampler for :func:`pair_at_distance` that stays block diagonal."""

    def draw(rng):
        return embed_cq(sample_cq(alphabet_size, dim_b, rng, low_rank=low_rank))

    return draw


def cq_pair_at_distance(state: CQState, eps: float, seed=None) -> CQState:
    """cq partner of ``state`` at trace distance ``eps`` from it."""
    n, d = state.alphabet_size, state.dim_b
    sigma = pair_at_distance(embed_cq(state), eps, seed, sampler=cq_sampler(n, d))
    return extract_cq(sigma, n, d)
