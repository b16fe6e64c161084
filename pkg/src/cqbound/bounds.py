"""Continuity bound evaluators and certifiers.

``as_bound(eps, d) = eps log2(d - 1) + h2(eps)`` bounds the change in
conditional entropy ``H(B|X)`` between two cq states at trace distance at
most ``eps``, for ``eps`` in ``(0, 1 - 1/d]`` with ``d = dim B``.  The bound
is attained, which :func:`saturating_pair` demonstrates constructively.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .channels import truncate_cq
from .config import TOL
from .entropy import binary_entropy, conditional_entropy_cq
from .errors import BadTruncationLevel, DimensionMismatch, EpsilonOutOfRange, Unreachable
from .states import CQState, cq_pair_at_distance, embed_cq, sample_cq, sample_density, trace_distance

# float slack when testing eps against a closed right endpoint
_ENDPOINT_SLACK = 1e-12

SWEEP_HEADER = ("d", "epsilon", "lhs", "rhs", "margin", "satisfied")


@dataclass(frozen=True)
class BoundReport:
    lhs: float
    rhs: float
    epsilon: float
    epsilon_valid: bool
    dim: int
    satisfied: bool
    margin: float

    @classmethod
    def from_values(cls, lhs, rhs, epsilon, epsilon_valid, dim):
        margin = rhs - lhs
        return cls(
            lhs=float(lhs),
            rhs=float(rhs),
            epsilon=float(epsilon),
            epsilon_valid=bool(epsilon_valid),
            dim=int(dim),
            satisfied=bool(margin >= -TOL.bound),
            margin=float(margin),
        )

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def epsilon_range(d: int) -> tuple[float, float]:
    """Open-closed interval ``(0, 1 - 1/d]`` of admissible distances."""
    return 0.0, 1.0 - 1.0 / d


def in_range(eps: float, high: float) -> bool:
    return 0.0 < eps <= high + _ENDPOINT_SLACK


def as_bound(eps: float, d: int) -> float:
    """``eps log2(d - 1) + h2(eps)``.

    ``d = 1`` returns 0: every state on a one-dimensional system has zero
    entropy.
    """
    if d < 1:
        raise ValueError(f"dimension must be positive, got {d}")
    if d == 1:
        return 0.0
    _, high = epsilon_range(d)
    if not in_range(eps, high):
        raise EpsilonOutOfRange(eps, 0, high)
    eps = min(eps, high)
    return eps * math.log2(d - 1) + binary_entropy(eps)


def clamped_bound(eps: float, d: int) -> tuple[float, bool]:
    """``(as_bound(eps, d), True)`` in range, else the endpoint value ``log2 d``
    with ``False``."""
    if d == 1:
        return 0.0, False
    _, high = epsilon_range(d)
    if in_range(eps, high):
        return as_bound(eps, d), True
    return as_bound(high, d), False


def _same_shape(rho: CQState, sigma: CQState):
    if (rho.alphabet_size, rho.dim_b) != (sigma.alphabet_size, sigma.dim_b):
        raise DimensionMismatch(
            f"cq states on {rho.alphabet_size}x{rho.dim_b} and "
            f"{sigma.alphabet_size}x{sigma.dim_b} differ"
        )


def certify_prop1(rho: CQState, sigma: CQState) -> BoundReport:
    """Check ``|H(B|X)_rho - H(B|X)_sigma| <= as_bound(eps, dim_b)``.

    ``eps`` is the trace distance between the embedded states.  When it
    falls outside ``(0, 1 - 1/d]`` the report uses the bound at the right
    endpoint, ``log2 d``, which dominates any entropy difference, and sets
    ``epsilon_valid`` to false.
    """
    _same_shape(rho, sigma)
    lhs = abs(conditional_entropy_cq(rho) - conditional_entropy_cq(sigma))
    eps = trace_distance(embed_cq(rho), embed_cq(sigma))
    rhs, valid = clamped_bound(eps, rho.dim_b)
    return BoundReport.from_values(lhs, rhs, eps, valid, rho.dim_b)


def saturating_pair(d: int, eps: float) -> tuple[CQState, CQState]:
    """Single-letter cq pair attaining the bound with equality.

    ``rho_B`` is the pure state ``|0><0|`` and ``sigma_B`` is diagonal with
    spectrum ``(1 - eps, eps/(d-1), ..., eps/(d-1))``.
    """
    if d < 2:
        raise ValueError(f"saturating pair needs d >= 2, got {d}")
    _, high = epsilon_range(d)
    if not in_range(eps, high):
        raise EpsilonOutOfRange(eps, 0, high)
    pure = np.zeros((d, d))
    pure[0, 0] = 1.0
    spread = np.diag([1.0 - eps] + [eps / (d - 1)] * (d - 1))
    return CQState([1.0], pure[None]), CQState([1.0], spread[None])


def eof_delta(eps: float) -> float:
    """``sqrt(eps (2 - eps))``, the distance used by the EoF corollary."""
    if not 0.0 <= eps <= 1.0:
        raise EpsilonOutOfRange(eps, 0, 1)
    return math.sqrt(eps * (2.0 - eps))


def eof_epsilon_max(d: int) -> float:
    return 1.0 - math.sqrt(2 * d - 1) / d


def eof_bound(eps: float, dim_a: int, dim_b: int) -> float:
    """``delta log2(d - 1) + h2(delta)`` with ``delta = eof_delta(eps)`` and
    ``d = min(dim_a, dim_b)``, for ``eps`` in ``(0, 1 - sqrt(2d-1)/d]``."""
    d = min(dim_a, dim_b)
    if d == 1:
        return 0.0
    high = eof_epsilon_max(d)
    if not in_range(eps, high):
        raise EpsilonOutOfRange(eps, 0, high)
    delta = min(eof_delta(min(eps, high)), 1.0 - 1.0 / d)
    return delta * math.log2(d - 1) + binary_entropy(delta)


@dataclass(frozen=True)
class TruncationLevel:
    k: int
    report: BoundReport
    truncation_error: float
    epsilon_full: float

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "report": self.report.to_dict(),
            "truncation_error": self.truncation_error,
            "epsilon_full": self.epsilon_full,
        }


def certify_countable(rho: CQState, sigma: CQState, levels) -> list[TruncationLevel]:
    """Certify the bound on truncations of a large alphabet.

    For each ``k`` both states pass through the projection channel onto the
    first ``k`` letters and :func:`certify_prop1` is applied to the results.
    ``truncation_error`` is ``|H(B|X)_{rho^k} - H(B|X)_rho|``.
    """
    _same_shape(rho, sigma)
    n = rho.alphabet_size
    for k in levels:
        if not 1 <= k <= n:
            raise BadTruncationLevel(f"truncation level {k} outside 1..{n}")
    eps = trace_distance(embed_cq(rho), embed_cq(sigma))
    h_full = conditional_entropy_cq(rho)
    out = []
    for k in levels:
        rk, sk = truncate_cq(rho, k), truncate_cq(sigma, k)
        out.append(
            TruncationLevel(
                k=int(k),
                report=certify_prop1(rk, sk),
                truncation_error=abs(conditional_entropy_cq(rk) - h_full),
                epsilon_full=eps,
            )
        )
    return out


def profile_weights(profile: str, n: int, exponent: float = 2.0) -> np.ndarray:
    """Normalised weights over ``n`` letters: ``geometric`` (``2^-x``) or
    ``zeta`` (``x^-exponent``), letters numbered from 1."""
    x = np.arange(1, n + 1, dtype=float)
    if profile == "geometric":
        w = 2.0 ** -x
    elif profile == "zeta":
        w = x ** -exponent
    else:
        raise ValueError(f"unknown weight profile {profile!r}")
    return w / w.sum()


def countable_proxy_state(n: int, dim_b: int, profile="geometric", seed=None) -> CQState:
    """cq state on ``n`` letters with profile weights and random conditionals.

    ``profile`` may also be an explicit weight vector.
    """
    rng = np.random.default_rng(seed)
    w = profile_weights(profile, n) if isinstance(profile, str) else np.asarray(profile, float)
    conds = np.stack([sample_density(dim_b, rng) for _ in range(n)])
    return CQState(w, conds)


@dataclass(frozen=True)
class SweepRow:
    d: int
    epsilon: float
    lhs: float
    rhs: float
    margin: float
    satisfied: bool
    trials: int


def random_cq_pair(dim_b: int, eps: float, rng, alphabet_max: int = 5, attempts: int = 16):
    """Random cq pair at trace distance ``eps``.

    The base state is redrawn when no partner at distance ``eps`` is found.
    """
    last = None
    for _ in range(attempts):
        n = int(rng.integers(1, alphabet_max + 1))
        rho = sample_cq(n, dim_b, rng, low_rank=bool(rng.integers(2)))
        try:
            return rho, cq_pair_at_distance(rho, eps, rng)
        except Unreachable as exc:
            last = exc
    raise Unreachable(f"no cq pair at distance {eps} on dim_b={dim_b}: {last}")


def sweep(dims, eps_grid, trials: int, seed: int, alphabet_max: int = 5) -> list[SweepRow]:
    """Worst-case :func:`certify_prop1` margin over random pairs per ``(d, eps)`` cell.

    Each cell draws its own generator from ``(seed, d, cell index)``, so
    rows do not depend on which other cells are requested alongside them.
    """
    rows = []
    for d in dims:
        for i, eps in enumerate(eps_grid):
            rng = np.random.default_rng([seed, d, i])
            worst = None
            done = 0
            for _ in range(trials):
                try:
                    rho, sigma = random_cq_pair(d, eps, rng, alphabet_max)
                except Unreachable:
                    continue
                rep = certify_prop1(rho, sigma)
                done += 1
                if worst is None or rep.margin < worst.margin:
                    worst = rep
            if worst is None:
                rhs, _ = clamped_bound(eps, d)
                rows.append(SweepRow(d, float(eps), 0.0, rhs, rhs, True, 0))
            else:
                rows.append(
                    SweepRow(d, float(eps), worst.lhs, worst.rhs, worst.margin, worst.satisfied, done)
                )
    return rows


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for r in rows:
        w.writerow([r.d, repr(r.epsilon), repr(r.lhs), repr(r.rhs), repr(r.margin), str(r.satisfied).lower()])
    return buf.getvalue()
