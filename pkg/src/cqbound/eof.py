"""Entanglement of formation by search over pure-state decompositions.

Every decomposition of ``rho = sum_i l_i |e_i><e_i|`` (rank ``r``) into
``m`` subnormalised pure states has the form

    |phi_x> = sum_i U[x, i] sqrt(l_i) |e_i>

for an ``m x r`` matrix ``U`` with orthonormal columns.  The estimator
minimises the average entanglement over ``U`` with a derivative-free
coordinate descent made of complex Givens rotations between pairs of rows,
which keeps ``U`` exactly on the constraint manifold.  The result is an
upper bound on the entanglement of formation, exact for pure states.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .bounds import BoundReport, eof_bound, eof_epsilon_max, in_range
from .config import TOL
from .entropy import von_neumann
from .errors import DimensionMismatch, DimensionOverflow, EpsilonOutOfRange, NotNormalized
from .matcore import hermitian_eig, partial_trace
from .states import make_distribution, trace_distance

MAX_EOF_DIM = 16
_RANK_TOL = 1e-12


@dataclass(frozen=True)
class EofConfig:
    starts: int = 32
    seed: int = 0
    size: int | None = None
    initial_step: float = np.pi / 4
    min_step: float = 1e-7
    stall_sweeps: int = 50
    stall_tol: float = 1e-9
    max_sweeps: int = 10_000
    zero_floor: float = 1e-12
    prune_after: int = 20
    prune_gap: float = 1e-3


@dataclass(frozen=True, eq=False)
class PureDecomposition:
    """Weights ``p(x)`` and unit vectors ``|phi_x>`` (rows of ``states``)."""

    weights: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        w = make_distribution(self.weights)
        s = np.asarray(self.states, dtype=complex)
        if s.ndim != 2 or s.shape[0] != w.size:
            raise DimensionMismatch(f"{w.size} weights but states of shape {s.shape}")
        norms = np.linalg.norm(s, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-10):
            raise NotNormalized("decomposition states must be unit vectors")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "states", s)

    @property
    def size(self) -> int:
        return self.weights.size

    def reconstruct(self) -> np.ndarray:
        s = self.states
        return (s.T * self.weights) @ s.conj()

    def to_json(self) -> str:
        return json.dumps(
            {
                "weights": [float(w) for w in self.weights],
                "states": [[[float(z.real), float(z.imag)] for z in v] for v in self.states],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "PureDecomposition":
        obj = json.loads(text)
        states = np.array([[complex(re, im) for re, im in v] for v in obj["states"]])
        return cls(np.array(obj["weights"], dtype=float), states)


@dataclass(frozen=True, eq=False)
class EofResult:
    value: float
    witness: PureDecomposition
    converged: bool
    start_values: list = field(default_factory=list)


def eof_pure(psi, dim_a: int, dim_b: int) -> float:
    """Entanglement entropy ``H(Tr_B |psi><psi|)`` of a unit vector."""
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.size != dim_a * dim_b:
        raise DimensionMismatch(f"vector of length {psi.size} is not on {dim_a}x{dim_b}")
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise NotNormalized(f"state has norm {np.linalg.norm(psi)!r}")
    return von_neumann(partial_trace(np.outer(psi, psi.conj()), dim_a, dim_b, keep="first"))


def decomposition_value(dec: PureDecomposition, dim_a: int, dim_b: int) -> float:
    """Average entanglement ``sum_x p(x) E(phi_x)``: an upper bound on the
    entanglement of formation of ``dec.reconstruct()``."""
    return float(sum(p * eof_pure(v, dim_a, dim_b) for p, v in zip(dec.weights, dec.states) if p > 0))


def eigen_decomposition(rho) -> PureDecomposition:
    eig = hermitian_eig(rho)
    keep = eig.eigenvalues > _RANK_TOL
    w = eig.eigenvalues[keep]
    return PureDecomposition(w / w.sum(), eig.eigenvectors[:, keep].T)


def _xlog2x(t: np.ndarray) -> np.ndarray:
    t = np.maximum(t, 1e-300)
    return t * np.log2(t)


def _weighted_entanglement(vecs: np.ndarray, dim_a: int, dim_b: int) -> np.ndarray:
    """``p E(v/|v|)`` in bits for subnormalised vectors ``vecs[..., dim_a*dim_b]``.

    Uses ``p E = p log p - sum_k mu_k log mu_k`` with ``mu`` the spectrum of
    the unnormalised reduced state.  For a qubit factor the small
    eigenvalue is taken as ``det / mu_max`` to keep relative accuracy near
    product states.
    """
    if dim_a == 2 and dim_b == 2:
        a, b, c, d = (vecs[..., k] for k in range(4))
        det = a * d - b * c
        det = det.real**2 + det.imag**2
        p = np.sum(vecs.real**2 + vecs.imag**2, axis=-1)
    else:
        psi = vecs.reshape(vecs.shape[:-1] + (dim_a, dim_b))
        if dim_a > dim_b:
            psi = np.swapaxes(psi, -1, -2)
        gram = psi @ np.swapaxes(psi.conj(), -1, -2)
        p = np.einsum("...ii->...", gram).real
        if gram.shape[-1] != 2:
            mu = np.linalg.eigvalsh(gram)
            return np.maximum(_xlog2x(p) - np.sum(_xlog2x(mu), axis=-1), 0.0)
        g01 = gram[..., 0, 1]
        det = gram[..., 0, 0].real * gram[..., 1, 1].real - (g01.real**2 + g01.imag**2)
    disc = np.sqrt(np.maximum(p * p - 4.0 * det, 0.0))
    big = 0.5 * (p + disc)
    small = np.divide(np.maximum(det, 0.0), big, out=np.zeros_like(big), where=big > 0)
    return np.maximum(_xlog2x(p) - _xlog2x(big) - _xlog2x(small), 0.0)


def _mix(u: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Rows of ``u`` combined with the columns of ``w`` as one GEMM."""
    return (u.reshape(-1, u.shape[-1]) @ w.T).reshape(u.shape[:-1] + (w.shape[0],))


def _round_robin(m: int) -> list[np.ndarray]:
    """Rounds of disjoint index pairs covering every pair once (circle method)."""
    idx = list(range(m)) + ([-1] if m % 2 else [])
    n = len(idx)
    rounds = []
    for _ in range(n - 1):
        pairs = [(idx[i], idx[n - 1 - i]) for i in range(n // 2)]
        pairs = [p for p in pairs if -1 not in p]
        if pairs:
            rounds.append(np.array(pairs))
        idx = [idx[0]] + [idx[-1]] + idx[1:-1]
    return rounds


def _descend(u: np.ndarray, w: np.ndarray, dim_a: int, dim_b: int, cfg: EofConfig):
    """Givens-rotation coordinate descent on a stack of isometries.

    ``u`` has shape ``(starts, m, r)``; every start is updated in the same
    vectorised pass but keeps its own step size.  A step is halved after a
    sweep that gains less than ``cfg.stall_tol`` and a start stops once its
    step falls below ``cfg.min_step``.  After ``cfg.prune_after`` sweeps,
    starts trailing the current best by more than ``cfg.prune_gap`` bits are
    frozen.  The whole search stops when the best
    value over all starts gains less than ``cfg.stall_tol`` in
    ``cfg.stall_sweeps`` sweeps.
    """
    n_starts, m, _ = u.shape
    rounds = _round_robin(m)
    phases = np.array([1.0, 1j, 1.0, 1j])
    signs = np.array([1.0, 1.0, -1.0, -1.0])
    costs = _weighted_entanglement(_mix(u, w), dim_a, dim_b)
    totals = costs.sum(axis=1)
    history = [totals.copy()]
    step = np.full(n_starts, cfg.initial_step)
    active = np.ones(n_starts, dtype=bool)
    for _ in range(cfg.max_sweeps):
        before = totals.copy()
        act = np.nonzero(active)[0]
        ua, ca = u[act], costs[act]
        c = np.cos(step[act])[:, None, None, None]
        s = (np.sin(step[act])[:, None] * signs)[:, None, :, None] * phases[None, None, :, None]
        for pairs in rounds:
            i, j = pairs[:, 0], pairs[:, 1]
            ui, uj = ua[:, i, None, :], ua[:, j, None, :]
            new = np.stack([c * ui - s * uj, s.conj() * ui + c * uj])
            cand = _weighted_entanglement(_mix(new, w), dim_a, dim_b)
            trial = cand[0] + cand[1]
            best = np.argmin(trial, axis=2)
            pick = trial.min(axis=2)
            take = ca[:, i] + ca[:, j] - pick > 1e-15
            if not np.any(take):
                continue
            si, pi = np.nonzero(take)
            bi = best[si, pi]
            ua[si, i[pi]] = new[0, si, pi, bi]
            ua[si, j[pi]] = new[1, si, pi, bi]
            ca[si, i[pi]] = cand[0, si, pi, bi]
            ca[si, j[pi]] = cand[1, si, pi, bi]
        u[act], costs[act] = ua, ca
        totals = costs.sum(axis=1)
        history.append(totals)
        step = np.where(before - totals < cfg.stall_tol, step * 0.5, step)
        active &= step >= cfg.min_step
        if len(history) > cfg.prune_after:
            active &= totals <= totals.min() + cfg.prune_gap
        if len(history) > cfg.stall_sweeps:
            if history[-cfg.stall_sweeps - 1].min() - totals.min() < cfg.stall_tol:
                return u, totals, True
        # nothing beats a separable decomposition
        if not np.any(active) or totals.min() <= cfg.zero_floor:
            return u, totals, True
    return u, totals, False


def _random_isometry(m: int, r: int, rng) -> np.ndarray:
    g = rng.standard_normal((m, r)) + 1j * rng.standard_normal((m, r))
    q, rr = np.linalg.qr(g)
    return q * (np.diag(rr) / np.abs(np.diag(rr)))


def eof_estimate(rho, dim_a: int, dim_b: int, config: EofConfig | None = None) -> EofResult:
    """Upper estimate of the entanglement of formation with a witness.

    Start 0 is the eigendecomposition itself, so the estimate never exceeds
    its value; the remaining ``config.starts`` starts are random isometries,
    start ``k`` drawing from a generator seeded with ``(config.seed, k)``.
    The returned value is recomputed from the witness.
    """
    cfg = config or EofConfig()
    rho = np.asarray(rho, dtype=complex)
    D = dim_a * dim_b
    if D > MAX_EOF_DIM:
        raise DimensionOverflow(f"dim_a*dim_b = {D} exceeds {MAX_EOF_DIM}")
    if rho.shape != (D, D):
        raise DimensionMismatch(f"state of shape {rho.shape} is not on {dim_a}x{dim_b}")
    eig = hermitian_eig(rho)
    r = int(np.sum(eig.eigenvalues > _RANK_TOL))
    lam = eig.eigenvalues[:r]
    w = eig.eigenvectors[:, :r] * np.sqrt(lam)
    if r == 1:
        dec = PureDecomposition([1.0], eig.eigenvectors[:, :1].T)
        val = decomposition_value(dec, dim_a, dim_b)
        return EofResult(val, dec, True, [val])

    m = cfg.size or min(r * r, D * D)
    m = max(m, r)
    starts = [np.vstack([np.eye(r, dtype=complex), np.zeros((m - r, r), dtype=complex)])]
    for k in range(cfg.starts):
        starts.append(_random_isometry(m, r, np.random.default_rng([cfg.seed, k])))

    u, values, converged = _descend(np.stack(starts), w, dim_a, dim_b, cfg)
    vecs = u[int(np.argmin(values))] @ w.T
    p = np.sum(np.abs(vecs) ** 2, axis=1)
    keep = p > 1e-300
    dec = PureDecomposition(p[keep] / p[keep].sum(), vecs[keep] / np.sqrt(p[keep])[:, None])
    if np.max(np.abs(dec.reconstruct() - rho)) > TOL.decomp:
        raise AssertionError("witness does not reconstruct the input state")
    return EofResult(decomposition_value(dec, dim_a, dim_b), dec, converged, [float(v) for v in values])


def is_pure(rho) -> bool:
    lam = hermitian_eig(rho).eigenvalues
    return bool(lam.size < 2 or lam[1] <= _RANK_TOL)


@dataclass(frozen=True)
class EofCorollaryReport:
    report: BoundReport
    heuristic: bool
    value_rho: float
    value_sigma: float
    converged: bool

    def to_dict(self) -> dict:
        return {
            "report": self.report.to_dict(),
            "heuristic": self.heuristic,
            "value_rho": self.value_rho,
            "value_sigma": self.value_sigma,
            "converged": self.converged,
        }


def certify_eof_corollary(rho, sigma, dim_a: int, dim_b: int, config: EofConfig | None = None):
    """Compare estimated entanglement of formation of two states against
    :func:`eof_bound` at their trace distance.

    The estimates are upper bounds, so for mixed inputs the left-hand side
    is only an estimate of the true difference and ``heuristic`` is set.
    Two pure inputs are evaluated exactly.
    """
    eps = trace_distance(rho, sigma)
    d = min(dim_a, dim_b)
    high = eof_epsilon_max(d)
    if d > 1 and eps != 0.0 and not in_range(eps, high):
        raise EpsilonOutOfRange(eps, 0, high)
    a = eof_estimate(rho, dim_a, dim_b, config)
    b = eof_estimate(sigma, dim_a, dim_b, config)
    rhs = eof_bound(eps, dim_a, dim_b) if eps > 0 else 0.0
    rep = BoundReport.from_values(abs(a.value - b.value), rhs, eps, eps > 0 or d == 1, d)
    heuristic = not (is_pure(rho) and is_pure(sigma))
    return EofCorollaryReport(rep, heuristic, a.value, b.value, a.converged and b.converged)
