"""Random search for counterexamples to two conjectured continuity bounds.

``qc``: for cq states on ``X (x) B``, conditioning on the quantum side,

    |H(X|B)_rho - H(X|B)_sigma| <= eps log2(d_X - 1) + h2(eps).

``fq``: for arbitrary states on ``A (x) B``,

    |H(A|B)_rho - H(A|B)_sigma| <= eps log2(d_A^2 - 1) + h2(eps),
    eps in (0, 1 - 1/d_A^2].

Neither inequality is known to hold.  The search reports the smallest
margin (right side minus left side) it finds per distance cell and only
ever says "no violation found" or "violation candidate"; a candidate comes
with its witness pair for independent re-checking.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .entropy import binary_entropy, conditional_entropy_bipartite
from .errors import DimensionMismatch, Unreachable
from .serialize import density_to_dict, state_from_dict
from .states import (
    CQState,
    cq_sampler,
    embed_cq,
    pair_at_distance,
    sample_cq,
    sample_density,
    trace_distance,
)

NO_VIOLATION = "no violation found"
VIOLATION_CANDIDATE = "violation candidate"
VIOLATION_THRESHOLD = -1e-6

REFINE_STEPS = 64
REFINE_STREAK = 8
REFINE_INITIAL = 0.5

CSV_HEADER = ("conjecture", "d1", "d2", "epsilon", "best_margin", "trials", "seed")


@dataclass(frozen=True)
class Gap:
    lhs: float
    rhs: float
    margin: float
    epsilon: float
    epsilon_valid: bool


def _conjectured_rhs(eps: float, k: int) -> tuple[float, bool]:
    """``eps log2(k - 1) + h2(eps)`` on ``(0, 1 - 1/k]``, clamped to the
    endpoint value ``log2 k`` outside it."""
    high = 1.0 - 1.0 / k
    valid = 0.0 < eps <= high + 1e-12
    e = min(eps, high) if valid else high
    return e * math.log2(k - 1) + binary_entropy(e), valid


def _gap(rho, sigma, dim_a, dim_b, k) -> Gap:
    lhs = abs(
        conditional_entropy_bipartite(rho, dim_a, dim_b)
        - conditional_entropy_bipartite(sigma, dim_a, dim_b)
    )
    eps = trace_distance(rho, sigma)
    rhs, valid = _conjectured_rhs(eps, k)
    return Gap(float(lhs), float(rhs), float(rhs - lhs), float(eps), valid)


def qc_gap(rho: CQState, sigma: CQState) -> Gap:
    """Margin of the quantum-classical conjecture, ``H(X|B)`` on the embeddings."""
    if (rho.alphabet_size, rho.dim_b) != (sigma.alphabet_size, sigma.dim_b):
        raise DimensionMismatch("cq states have different shapes")
    n, d = rho.alphabet_size, rho.dim_b
    return _gap(embed_cq(rho), embed_cq(sigma), n, d, n)


def fq_gap(rho, sigma, dim_a: int, dim_b: int) -> Gap:
    """Margin of the fully quantum conjecture with ``k = dim_a**2``."""
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape or rho.shape != (dim_a * dim_b,) * 2:
        raise DimensionMismatch(f"states must both be on {dim_a}x{dim_b}")
    return _gap(rho, sigma, dim_a, dim_b, dim_a * dim_a)


def flipped_saturating_pair(d_x: int, d_b: int, eps: float) -> tuple[CQState, CQState]:
    """Classical saturating pair carried by ``X`` with an uninformative ``B``.

    ``H(X|B)`` reduces to ``H(X)``, so the pair meets the ``qc`` bound with
    equality at trace distance ``eps``.
    """
    w_rho = np.zeros(d_x)
    w_rho[0] = 1.0
    w_sigma = np.full(d_x, eps / (d_x - 1))
    w_sigma[0] = 1.0 - eps
    conds = np.stack([np.eye(d_b) / d_b] * d_x)
    return CQState(w_rho, conds), CQState(w_sigma, conds)


@dataclass(frozen=True)
class SearchConfig:
    conjecture: str
    dims: tuple[int, int]
    epsilon_grid: tuple[float, ...]
    trials_per_cell: int
    seed: int = 0
    local_refine_steps: int = REFINE_STEPS

    def __post_init__(self):
        if self.conjecture not in ("qc", "fq"):
            raise ValueError(f"conjecture must be 'qc' or 'fq', not {self.conjecture!r}")
        if len(self.dims) != 2 or min(self.dims) < 2:
            raise ValueError(f"both dimensions must be >= 2, got {self.dims}")
        if self.trials_per_cell < 1:
            raise ValueError("trials_per_cell must be >= 1")
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "epsilon_grid", tuple(float(e) for e in self.epsilon_grid))


@dataclass(frozen=True, eq=False)
class CellResult:
    epsilon: float
    best_margin: float
    lhs: float
    rhs: float
    achieved_epsilon: float
    trials: int
    skipped: int
    status: str
    witness_rho: np.ndarray | None = field(default=None, repr=False)
    witness_sigma: np.ndarray | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        out = {k: v for k, v in asdict(self).items() if not k.startswith("witness")}
        if not math.isfinite(out["best_margin"]):
            out["best_margin"] = None
        if self.witness_rho is not None:
            out["witness"] = {
                "rho": density_to_dict(self.witness_rho),
                "sigma": density_to_dict(self.witness_sigma),
            }
        return out


@dataclass(frozen=True, eq=False)
class SearchRecord:
    config: SearchConfig
    cells: list

    @property
    def best_margin(self) -> float:
        return min((c.best_margin for c in self.cells), default=math.inf)

    @property
    def violation_candidates(self) -> list:
        return [c for c in self.cells if c.status == VIOLATION_CANDIDATE]

    def to_dict(self) -> dict:
        return {"config": asdict(self.config), "cells": [c.to_dict() for c in self.cells]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        d1, d2 = self.config.dims
        for c in self.cells:
            w.writerow(
                [self.config.conjecture, d1, d2, repr(c.epsilon), repr(c.best_margin),
                 c.trials, self.config.seed]
            )
        return buf.getvalue()

    def write_witnesses(self, directory) -> list[Path]:
        """Write each violation candidate's pair as state-JSON files."""
        out = []
        directory = Path(directory)
        for i, c in enumerate(self.cells):
            if c.status != VIOLATION_CANDIDATE:
                continue
            for name, m in (("rho", c.witness_rho), ("sigma", c.witness_sigma)):
                p = directory / f"candidate_{self.config.conjecture}_cell{i}_{name}.json"
                p.write_text(json.dumps(density_to_dict(m)) + "\n")
                out.append(p)
        return out


def evaluate_witness(conjecture: str, dims, rho, sigma) -> Gap:
    """Recompute a margin from witness matrices (or parsed state documents)."""
    if isinstance(rho, dict):
        rho, sigma = state_from_dict(rho), state_from_dict(sigma)
    d1, d2 = dims
    k = d1 if conjecture == "qc" else d1 * d1
    return _gap(np.asarray(rho, complex), np.asarray(sigma, complex), d1, d2, k)


def _sampler(config: SearchConfig):
    d1, d2 = config.dims
    if config.conjecture == "qc":
        return cq_sampler(d1, d2)

    def draw(rng):
        D = d1 * d2
        return sample_density(D, rng, rank=int(rng.integers(1, D + 1)))

    return draw


def _base_state(config: SearchConfig, rng) -> np.ndarray:
    d1, d2 = config.dims
    if config.conjecture == "qc":
        return embed_cq(sample_cq(d1, d2, rng, low_rank=bool(rng.integers(2))))
    return _sampler(config)(rng)


def _refine(config, eps, rho, sigma, gap, rng):
    """Accept random moves of one endpoint that lower the margin.

    The moved endpoint is pulled toward a fresh random state and then put
    back at distance ``eps`` from the fixed endpoint along the segment
    joining them.  The step halves after ``REFINE_STREAK`` rejections in a
    row.
    """
    d1, d2 = config.dims
    draw = _sampler(config)
    step, streak = REFINE_INITIAL, 0
    for _ in range(config.local_refine_steps):
        move_sigma = bool(rng.integers(2))
        fixed, moving = (rho, sigma) if move_sigma else (sigma, rho)
        cand = (1.0 - step) * moving + step * draw(rng)
        dist = trace_distance(fixed, cand)
        accepted = False
        if dist >= eps > 0:
            t = eps / dist
            moved = (1.0 - t) * fixed + t * cand
            moved = 0.5 * (moved + moved.conj().T)
            new_rho, new_sigma = (rho, moved) if move_sigma else (moved, sigma)
            new_gap = evaluate_witness(config.conjecture, (d1, d2), new_rho, new_sigma)
            if new_gap.margin < gap.margin:
                rho, sigma, gap, accepted = new_rho, new_sigma, new_gap, True
        if accepted:
            streak = 0
        else:
            streak += 1
            if streak >= REFINE_STREAK:
                step, streak = step / 2, 0
    return rho, sigma, gap


def _nearest_cell(grid, eps: float) -> int:
    return int(np.argmin([abs(e - eps) for e in grid]))


def search(config: SearchConfig, seed_pairs=()) -> SearchRecord:
    """Search every distance cell for the smallest conjecture margin.

    Trial ``t`` of cell ``c`` draws from a generator seeded with
    ``(seed, c, t)``; refinement of cell ``c`` uses ``(seed, c, trials)``.
    ``seed_pairs`` are extra ``(rho, sigma)`` matrix pairs evaluated in the
    cell whose distance is closest to theirs.
    """
    d1, d2 = config.dims
    sampler = _sampler(config)
    seeded = {}
    for rho, sigma in seed_pairs:
        rho, sigma = np.asarray(rho, complex), np.asarray(sigma, complex)
        if config.epsilon_grid:
            cell = _nearest_cell(config.epsilon_grid, trace_distance(rho, sigma))
            seeded.setdefault(cell, []).append((rho, sigma))

    cells = []
    for ci, eps in enumerate(config.epsilon_grid):
        best = None
        skipped = 0
        for rho, sigma in seeded.get(ci, []):
            gap = evaluate_witness(config.conjecture, (d1, d2), rho, sigma)
            if best is None or gap.margin < best[2].margin:
                best = (rho, sigma, gap)
        for t in range(config.trials_per_cell):
            rng = np.random.default_rng([config.seed, ci, t])
            base = _base_state(config, rng)
            try:
                other = pair_at_distance(base, eps, rng, sampler=sampler)
            except Unreachable:
                skipped += 1
                continue
            gap = evaluate_witness(config.conjecture, (d1, d2), base, other)
            if best is None or gap.margin < best[2].margin:
                best = (base, other, gap)
        if best is None:
            cells.append(CellResult(eps, math.inf, 0.0, 0.0, 0.0, 0, skipped, NO_VIOLATION))
            continue
        rng = np.random.default_rng([config.seed, ci, config.trials_per_cell])
        rho, sigma, gap = _refine(config, eps, *best, rng)
        # report the margin exactly as recomputed from the stored witness
        gap = evaluate_witness(config.conjecture, (d1, d2), rho, sigma)
        status = VIOLATION_CANDIDATE if gap.margin < VIOLATION_THRESHOLD else NO_VIOLATION
        cells.append(
            CellResult(
                eps, gap.margin, gap.lhs, gap.rhs, gap.epsilon,
                config.trials_per_cell - skipped, skipped, status, rho, sigma,
            )
        )
    return SearchRecord(config, cells)
