import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cqbound.bounds import as_bound, certify_prop1
from cqbound.errors import DimensionMismatch
from cqbound.explorer import (
    CSV_HEADER,
    NO_VIOLATION,
    SearchConfig,
    evaluate_witness,
    flipped_saturating_pair,
    fq_gap,
    qc_gap,
    search,
)
from cqbound.states import CQState, embed_cq, sample_cq, sample_density, trace_distance

from conftest import proj


def test_qc_gap_identical(rng):
    s = sample_cq(3, 2, rng)
    g = qc_gap(s, s)
    assert g.lhs == 0.0 and g.margin == g.rhs > 0


def test_qc_gap_perfectly_readable():
    # B holds an orthogonal copy of X, so H(X|B) = 0 for any weights
    conds = np.stack([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
    g = qc_gap(CQState([0.5, 0.5], conds), CQState([0.8, 0.2], conds))
    assert g.lhs == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("d_x, d_b, eps", [(2, 2, 0.3), (3, 2, 0.25), (4, 3, 0.6)])
def test_flipped_saturator_is_tight(d_x, d_b, eps):
    g = qc_gap(*flipped_saturating_pair(d_x, d_b, eps))
    assert g.epsilon == pytest.approx(eps, abs=1e-12)
    assert abs(g.margin) <= 1e-9


def test_qc_gap_dimension_mismatch(rng):
    with pytest.raises(DimensionMismatch):
        qc_gap(sample_cq(2, 2, rng), sample_cq(3, 2, rng))


def test_fq_gap_examples(rng):
    rho = sample_density(4, rng)
    g = fq_gap(rho, rho, 2, 2)
    assert g.margin == g.rhs
    bell = proj(np.array([1, 0, 0, 1]) / math.sqrt(2))
    prod = proj(np.array([1, 0, 0, 0]))
    g = fq_gap(bell, prod, 2, 2)
    assert g.epsilon == pytest.approx(math.sqrt(0.5), abs=1e-12)
    assert g.lhs == pytest.approx(1.0, abs=1e-12)
    assert math.isfinite(g.margin) and g.epsilon_valid
    with pytest.raises(DimensionMismatch):
        fq_gap(rho, np.eye(6) / 6, 2, 2)


def test_fq_clamps_out_of_range():
    a = proj(np.array([1, 0, 0, 0]))
    b = proj(np.array([0, 0, 0, 1]))
    g = fq_gap(a, b, 2, 2)
    assert not g.epsilon_valid and g.rhs == pytest.approx(2.0, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 4))
def test_rhs_ordering(seed, d):
    rng = np.random.default_rng(seed)
    rho, sigma = sample_cq(d, d, rng), sample_cq(d, d, rng)
    cq = certify_prop1(rho, sigma)
    qc = qc_gap(rho, sigma)
    fq = fq_gap(embed_cq(rho), embed_cq(sigma), d, d)
    assert fq.rhs >= qc.rhs - 1e-12
    assert qc.rhs >= cq.rhs - 1e-12


def test_search_single_trial_reproducible():
    cfg = SearchConfig("qc", (2, 2), (0.2,), 1, seed=3)
    assert search(cfg).to_json() == search(cfg).to_json()


@pytest.mark.parametrize("conjecture", ["qc", "fq"])
def test_search_small(conjecture):
    cfg = SearchConfig(conjecture, (2, 2), (0.05, 0.2, 0.4), 40, seed=1)
    rec = search(cfg)
    assert len(rec.cells) == 3
    for c in rec.cells:
        assert c.status == NO_VIOLATION and c.best_margin >= -1e-6
        assert trace_distance(c.witness_rho, c.witness_sigma) == pytest.approx(c.epsilon, abs=1e-8)
        g = evaluate_witness(conjecture, (2, 2), c.witness_rho, c.witness_sigma)
        assert g.margin == c.best_margin
    assert rec.to_csv().splitlines()[0] == ",".join(CSV_HEADER)
    assert len(rec.to_csv().splitlines()) == 4


def test_search_json_witness_reverifies():
    rec = search(SearchConfig("fq", (2, 2), (0.1, 0.3), 20, seed=2))
    doc = json.loads(rec.to_json())
    for cell in doc["cells"]:
        w = cell["witness"]
        g = evaluate_witness("fq", (2, 2), w["rho"], w["sigma"])
        assert abs(g.margin - cell["best_margin"]) <= 1e-10


def test_fq_seeded_with_flipped_family():
    eps = 0.3
    rho, sigma = flipped_saturating_pair(2, 2, eps)
    # the same pair read as a fully quantum state with A = X
    r, s = embed_cq(rho), embed_cq(sigma)
    seed_margin = fq_gap(r, s, 2, 2).margin
    rec = search(SearchConfig("fq", (2, 2), (eps,), 5, seed=0), seed_pairs=[(r, s)])
    assert rec.cells[0].best_margin <= seed_margin


def test_search_config_validation():
    with pytest.raises(ValueError):
        SearchConfig("xx", (2, 2), (0.1,), 1)
    with pytest.raises(ValueError):
        SearchConfig("qc", (1, 2), (0.1,), 1)
    with pytest.raises(ValueError):
        SearchConfig("qc", (2, 2), (0.1,), 0)


def test_unreachable_cells_are_reported():
    # no qubit pair sits at trace distance 1.5
    rec = search(SearchConfig("qc", (2, 2), (1.5,), 3))
    c = rec.cells[0]
    assert c.trials == 0 and c.skipped == 3 and c.status == NO_VIOLATION
    assert json.loads(rec.to_json())["cells"][0]["best_margin"] is None


def test_write_witnesses_only_for_candidates(tmp_path):
    rec = search(SearchConfig("qc", (2, 2), (0.2,), 5))
    assert rec.write_witnesses(tmp_path) == []
