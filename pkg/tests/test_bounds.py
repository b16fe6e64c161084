import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cqbound.bounds import (
    SWEEP_HEADER,
    as_bound,
    certify_countable,
    certify_prop1,
    clamped_bound,
    countable_proxy_state,
    eof_bound,
    eof_delta,
    eof_epsilon_max,
    profile_weights,
    random_cq_pair,
    saturating_pair,
    sweep,
    sweep_csv,
)
from cqbound.entropy import conditional_entropy_cq
from cqbound.errors import BadTruncationLevel, DimensionMismatch, EpsilonOutOfRange
from cqbound.states import CQState, cq_pair_at_distance, embed_cq, sample_cq, trace_distance


@pytest.mark.parametrize(
    "eps, d, value",
    [(0.5, 2, 1.0), (0.25, 3, 1.0612781244591328), (0.75, 4, 2.0), (0.3, 1, 0.0)],
)
def test_as_bound_examples(eps, d, value):
    assert as_bound(eps, d) == pytest.approx(value, abs=1e-14)


@pytest.mark.parametrize("eps, d", [(0.6, 2), (0.0, 3), (-0.1, 3), (0.9, 5)])
def test_as_bound_out_of_range(eps, d):
    with pytest.raises(EpsilonOutOfRange) as info:
        as_bound(eps, d)
    assert str(1 - 1 / d)[:5] in str(info.value)


@pytest.mark.parametrize("d", range(2, 17))
def test_as_bound_endpoint(d):
    assert as_bound(1 - 1 / d, d) == pytest.approx(math.log2(d), abs=1e-12)


@settings(max_examples=200)
@given(st.integers(2, 12), st.floats(0.001, 0.999), st.floats(0.001, 0.999))
def test_as_bound_increasing_and_concave(d, u, v):
    high = 1 - 1 / d
    a, b = sorted((u * high, v * high))
    assert as_bound(a, d) <= as_bound(b, d) + 1e-12
    assert as_bound((a + b) / 2, d) >= (as_bound(a, d) + as_bound(b, d)) / 2 - 1e-12


def test_clamped_bound():
    assert clamped_bound(0.25, 3) == (as_bound(0.25, 3), True)
    value, valid = clamped_bound(0.9, 3)
    assert not valid and value == pytest.approx(math.log2(3), abs=1e-12)


def test_certify_identical_states(rng):
    s = sample_cq(3, 2, rng)
    rep = certify_prop1(s, s)
    assert rep.lhs == 0.0 and rep.satisfied and not rep.epsilon_valid


def test_certify_dimension_mismatch(rng):
    with pytest.raises(DimensionMismatch):
        certify_prop1(sample_cq(2, 2, rng), sample_cq(2, 3, rng))


@pytest.mark.parametrize(
    "d, eps, gap",
    [(2, 0.3, 0.8812908992306927), (2, 0.5, 1.0), (4, 0.75, 2.0)],
)
def test_saturating_pair_examples(d, eps, gap):
    rho, sigma = saturating_pair(d, eps)
    assert conditional_entropy_cq(rho) == 0.0
    assert conditional_entropy_cq(sigma) == pytest.approx(gap, abs=1e-12)
    assert trace_distance(embed_cq(rho), embed_cq(sigma)) == pytest.approx(eps, abs=1e-12)
    rep = certify_prop1(rho, sigma)
    assert rep.satisfied and abs(rep.margin) <= 1e-8 and rep.epsilon_valid


def test_saturating_pair_errors():
    with pytest.raises(EpsilonOutOfRange):
        saturating_pair(2, 0.6)
    with pytest.raises(ValueError):
        saturating_pair(1, 0.1)


@pytest.mark.parametrize("eps, delta", [(0.0, 0.0), (1.0, 1.0), (0.5, 0.8660254037844386)])
def test_eof_delta_examples(eps, delta):
    assert eof_delta(eps) == pytest.approx(delta, abs=1e-15)


def test_eof_delta_monotone():
    grid = np.linspace(0, 1, 101)
    assert np.all(np.diff([eof_delta(e) for e in grid]) > 0)
    with pytest.raises(EpsilonOutOfRange):
        eof_delta(1.5)


def test_eof_bound_examples():
    high = 1 - math.sqrt(3) / 2
    assert eof_epsilon_max(2) == pytest.approx(high, abs=1e-15)
    assert eof_delta(high) == pytest.approx(0.5, abs=1e-12)
    assert eof_bound(high, 2, 2) == pytest.approx(1.0, abs=1e-12)
    assert eof_delta(0.01) == pytest.approx(0.14106735979665884, abs=1e-14)
    assert eof_bound(0.01, 2, 3) == pytest.approx(0.5870273195919694, abs=1e-12)
    with pytest.raises(EpsilonOutOfRange):
        eof_bound(0.5, 3, 3)


def test_profile_weights():
    w = profile_weights("geometric", 4)
    np.testing.assert_allclose(w, np.array([8, 4, 2, 1]) / 15)
    z = profile_weights("zeta", 3)
    np.testing.assert_allclose(z, np.array([1, 1 / 4, 1 / 9]) / (1 + 1 / 4 + 1 / 9))
    with pytest.raises(ValueError):
        profile_weights("flat", 3)


def test_countable_full_level_matches_direct_certificate(rng):
    rho = sample_cq(6, 2, rng)
    sigma = cq_pair_at_distance(rho, 0.1, rng)
    (level,) = certify_countable(rho, sigma, [6])
    direct = certify_prop1(rho, sigma).to_dict()
    for key, value in level.report.to_dict().items():
        assert value == pytest.approx(direct[key], abs=1e-12)
    assert level.truncation_error == pytest.approx(0.0, abs=1e-12)


def test_countable_geometric_errors_decrease():
    rho = countable_proxy_state(64, 2, "geometric", seed=5)
    sigma = cq_pair_at_distance(rho, 0.1, 6)
    res = certify_countable(rho, sigma, [4, 8, 16, 32])
    errs = [r.truncation_error for r in res]
    assert all(a > b for a, b in zip(errs, errs[1:]))
    for r in res:
        assert r.report.satisfied
        assert r.report.epsilon <= r.epsilon_full + 1e-9


def test_countable_point_mass_has_no_truncation_error(rng):
    w = np.zeros(8)
    w[0] = 1.0
    rho = countable_proxy_state(8, 2, w, seed=1)
    sigma = CQState(w, sample_cq(8, 2, rng).conditionals)
    for r in certify_countable(rho, sigma, [1, 3, 8]):
        assert r.truncation_error == pytest.approx(0.0, abs=1e-12)


def test_countable_bad_level(rng):
    s = sample_cq(4, 2, rng)
    with pytest.raises(BadTruncationLevel):
        certify_countable(s, s, [5])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 6), st.floats(0.01, 0.99))
def test_random_pairs_satisfy_bound(seed, d, frac):
    eps = frac * (1 - 1 / d)
    rho, sigma = random_cq_pair(d, eps, np.random.default_rng(seed))
    rep = certify_prop1(rho, sigma)
    assert rep.satisfied
    assert rep.epsilon == pytest.approx(eps, abs=1e-8)


def test_sweep_rows_and_reproducibility():
    grid = [0.1, 0.2, 0.3, 0.4, 0.5]
    rows = sweep([2, 3], grid, trials=10, seed=4)
    assert len(rows) == 10 and all(r.satisfied for r in rows)
    assert sweep_csv(rows) == sweep_csv(sweep([2, 3], grid, trials=10, seed=4))
    # cells do not depend on their neighbours
    assert sweep([3], grid, trials=10, seed=4) == rows[5:]


def test_sweep_empty_grid():
    assert sweep_csv(sweep([2], [], 5, 0)) == ",".join(SWEEP_HEADER) + "\n"
