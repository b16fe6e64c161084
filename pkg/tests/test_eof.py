import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cqbound.bounds import eof_bound
from cqbound.entropy import binary_entropy
from cqbound.eof import (
    EofConfig,
    PureDecomposition,
    certify_eof_corollary,
    decomposition_value,
    eigen_decomposition,
    eof_estimate,
    eof_pure,
    is_pure,
)
from cqbound.errors import DimensionMismatch, DimensionOverflow, EpsilonOutOfRange, NotNormalized
from cqbound.matcore import tensor_product
from cqbound.states import pair_at_distance, sample_density, sample_pure, trace_distance

from conftest import proj, pure_partner

FAST = EofConfig(starts=8)


def wootters(rho):
    """Closed-form two-qubit entanglement of formation, used only as an
    independent reference."""
    yy = np.kron([[0, -1j], [1j, 0]], [[0, -1j], [1j, 0]])
    tilde = yy @ rho.conj() @ yy
    ev = np.sqrt(np.abs(np.linalg.eigvals(rho @ tilde)))
    ev = np.sort(ev)[::-1]
    c = max(0.0, ev[0] - ev[1] - ev[2] - ev[3])
    return binary_entropy((1 + math.sqrt(1 - c * c)) / 2)


def test_eof_pure_examples():
    assert eof_pure(np.array([1, 0, 0, 1]) / math.sqrt(2), 2, 2) == pytest.approx(1.0, abs=1e-12)
    assert eof_pure(np.array([1, 0, 0, 0]), 2, 2) == pytest.approx(0.0, abs=1e-12)
    psi = np.array([math.sqrt(0.75), 0, 0, math.sqrt(0.25)])
    assert eof_pure(psi, 2, 2) == pytest.approx(0.8112781244591328, abs=1e-12)
    with pytest.raises(NotNormalized):
        eof_pure(np.array([1, 1, 0, 0]), 2, 2)
    with pytest.raises(DimensionMismatch):
        eof_pure(np.ones(3) / math.sqrt(3), 2, 2)


def test_pure_state_estimate_is_exact(rng):
    for da, db in [(2, 2), (2, 3), (3, 3), (2, 4)]:
        psi = sample_pure(da * db, rng)
        res = eof_estimate(proj(psi), da, db)
        assert res.value == pytest.approx(eof_pure(psi, da, db), abs=1e-9)
        assert res.witness.size == 1


def test_maximally_mixed_and_product_states(rng):
    assert eof_estimate(np.eye(4) / 4, 2, 2, FAST).value <= 1e-3
    prod = tensor_product(sample_density(2, rng), sample_density(2, rng))
    assert eof_estimate(prod, 2, 2, FAST).value <= 1e-3


def test_separable_diagonal_eigendecomposition_is_zero():
    rho = np.diag([0.1, 0.2, 0.3, 0.4])
    assert decomposition_value(eigen_decomposition(rho), 2, 2) == pytest.approx(0.0, abs=1e-12)


def test_single_term_decomposition_value(rng):
    psi = sample_pure(6, rng)
    dec = PureDecomposition([1.0], psi[None])
    assert decomposition_value(dec, 2, 3) == pytest.approx(eof_pure(psi, 2, 3), abs=1e-14)


@pytest.mark.parametrize("seed", range(6))
def test_matches_two_qubit_closed_form(seed):
    rho = sample_density(4, seed, rank=2 + seed % 3)
    res = eof_estimate(rho, 2, 2)
    assert res.value == pytest.approx(wootters(rho), abs=1e-6)
    assert res.value >= wootters(rho) - 1e-9


def test_werner_state():
    bell = proj(np.array([1, 0, 0, 1]) / math.sqrt(2))
    p = 0.8
    rho = p * bell + (1 - p) * np.eye(4) / 4
    assert eof_estimate(rho, 2, 2, FAST).value == pytest.approx(wootters(rho), abs=1e-6)


def test_estimate_below_any_decomposition(rng):
    rho = sample_density(4, rng, rank=3)
    res = eof_estimate(rho, 2, 2, FAST)
    assert res.value <= decomposition_value(eigen_decomposition(rho), 2, 2) + 1e-12
    assert res.value <= min(res.start_values) + 1e-9


def test_witness_reconstructs_and_round_trips(rng):
    rho = sample_density(6, rng, rank=2)
    res = eof_estimate(rho, 2, 3, FAST)
    np.testing.assert_allclose(res.witness.reconstruct(), rho, atol=1e-8)
    assert decomposition_value(res.witness, 2, 3) == pytest.approx(res.value, abs=1e-14)
    back = PureDecomposition.from_json(res.witness.to_json())
    np.testing.assert_array_equal(back.states, res.witness.states)
    np.testing.assert_array_equal(back.weights, res.witness.weights)


def test_estimate_deterministic(rng):
    rho = sample_density(4, rng, rank=2)
    assert eof_estimate(rho, 2, 2, FAST).value == eof_estimate(rho, 2, 2, FAST).value


def test_estimate_errors():
    with pytest.raises(DimensionOverflow):
        eof_estimate(np.eye(20) / 20, 4, 5)
    with pytest.raises(DimensionMismatch):
        eof_estimate(np.eye(4) / 4, 2, 3)


def test_is_pure(rng):
    assert is_pure(proj(sample_pure(4, rng)))
    assert not is_pure(np.eye(2) / 2)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.01, 0.13))
def test_corollary_on_pure_pairs(seed, eps):
    rng = np.random.default_rng(seed)
    psi = sample_pure(4, rng)
    rho, sigma = proj(psi), proj(pure_partner(psi, eps, rng))
    rep = certify_eof_corollary(rho, sigma, 2, 2)
    assert not rep.heuristic
    assert rep.report.epsilon == pytest.approx(eps, abs=1e-8)
    assert rep.report.satisfied
    assert rep.report.rhs == pytest.approx(eof_bound(rep.report.epsilon, 2, 2), abs=1e-12)


def test_corollary_identical_states(rng):
    rho = proj(sample_pure(4, rng))
    rep = certify_eof_corollary(rho, rho, 2, 2)
    assert rep.report.lhs == 0.0 and rep.report.satisfied


def test_corollary_mixed_pair_is_heuristic(rng):
    rho = sample_density(4, rng, rank=2)
    sigma = pair_at_distance(rho, 0.05, rng)
    rep = certify_eof_corollary(rho, sigma, 2, 2, FAST)
    assert rep.heuristic and rep.report.satisfied


def test_corollary_out_of_range(rng):
    rho = proj(np.array([1, 0, 0, 0]))
    sigma = proj(np.array([0, 0, 0, 1]))
    with pytest.raises(EpsilonOutOfRange):
        certify_eof_corollary(rho, sigma, 2, 2)
