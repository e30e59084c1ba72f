from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projlab.circuit import OutcomeDistribution, ShotTally, sample
from projlab.errors import ParameterError
from projlab.estimators import (
    EstimatorPlan,
    diff_proj_estimator,
    hoeffding_T,
    res_identity_estimator,
    res_identity_value,
)
from projlab.experiments import werner_row
from projlab.gates import swap_matrix
from projlab.states import (
    PIZZA_TERMS,
    bipartite,
    cut_purity,
    make_state,
    parse_state_spec,
    pizza,
    random_pure,
    singlet,
    werner,
)
from projlab.tensor import random_unitary

REGS3 = ("C3", "C2", "C1")


@pytest.mark.parametrize(
    "eps, delta, T",
    [(1.0, 2 / math.e**2, 4), (0.01, 0.05, 73778), (0.1, 0.01, 1060), (0.05, 0.1, 2397)],
)
def test_hoeffding_values(eps, delta, T):
    assert hoeffding_T(eps, delta) == T


@pytest.mark.parametrize("eps, delta", [(0, 0.1), (-1, 0.1), (0.1, 0), (0.1, 1)])
def test_hoeffding_rejects(eps, delta):
    with pytest.raises(ParameterError):
        hoeffding_T(eps, delta)


@settings(max_examples=50)
@given(eps=st.floats(0.01, 1.0), delta=st.floats(0.001, 0.5))
def test_hoeffding_monotone(eps, delta):
    T = hoeffding_T(eps, delta)
    assert T >= 2 / eps**2 * math.log(2 / delta) - 1e-6
    assert hoeffding_T(eps / 2, delta) >= T
    assert EstimatorPlan.for_accuracy(eps, delta).T == T


def test_plan_below_requirement():
    with pytest.raises(ParameterError):
        EstimatorPlan(0.1, 0.01, 1000)


def test_diff_proj_estimator_tallies():
    assert diff_proj_estimator(ShotTally(REGS3, 10, {"011": 10}, None)) == 0.0
    assert diff_proj_estimator(ShotTally(REGS3, 10, {"001": 10}, None)) == pytest.approx(0.25)
    assert diff_proj_estimator(ShotTally(REGS3, 4, {"001": 2, "110": 2}, None)) == 0.0


def test_res_identity_concentrated():
    est = res_identity_estimator(ShotTally(REGS3, 7, {"012": 7}, None), 1, 2)
    assert est.value == pytest.approx(0.25)
    assert not est.diagonal
    assert res_identity_estimator(ShotTally(REGS3, 7, {"012": 7}, None), 2, 1).value == pytest.approx(0.25)
    assert res_identity_estimator(ShotTally(REGS3, 7, {"011": 7}, None), 1, 1).diagonal


def test_res_identity_sampling_within_binomial_bound():
    rng = np.random.default_rng(21)
    raw = rng.random(18)
    keys = [f"{x}{a}{b}" for x in range(2) for a in range(3) for b in range(3)]
    dist = OutcomeDistribution(REGS3, (2, 3, 3), dict(zip(keys, raw / raw.sum())))
    tally = sample(dist, 1_000_000, seed=4)
    truth = res_identity_value(dist, 0, 2)
    p_hit = sum(dist[k] for k in ("002", "020", "102", "120"))
    sigma = math.sqrt(p_hit / 1_000_000) / 4
    assert abs(res_identity_estimator(tally, 0, 2).value - truth) < 3 * sigma


def test_singlet_shot_noise():
    row = werner_row(singlet(), shots=100_000, seed=9)
    assert abs(row.shot_noise) < 0.01


def test_singlet_amplitudes():
    assert np.allclose(singlet().state.amplitudes, np.array([0, 1, -1, 0]) / math.sqrt(2))


def test_pizza_terms_and_antisymmetry():
    v = pizza().state.amplitudes
    signs = [PIZZA_TERMS[k] for k in ("000111", "111000", "001110", "110001", "010101", "101010", "011100", "100011")]
    assert signs == [1, -1, -1, 1, -1, 1, 1, -1]
    assert np.count_nonzero(np.abs(v) > 1e-12) == 8
    assert np.allclose(np.abs(v[np.abs(v) > 1e-12]), 1 / math.sqrt(8))
    assert np.allclose(swap_matrix(8) @ v, -v)
    assert bipartite(pizza()).layout.dims == (8, 8)


@pytest.mark.parametrize("p", [0.0, 0.3, 1.0])
@pytest.mark.parametrize("d", [2, 3])
def test_werner_twirl_invariance(p, d):
    rho = werner(p, d).state.matrix
    rng = np.random.default_rng(int(10 * p) + d)
    assert np.trace(rho).real == pytest.approx(1.0)
    for _ in range(10):
        u = random_unitary(d, rng)
        uu = np.kron(u, u)
        assert np.allclose(uu @ rho @ uu.conj().T, rho, atol=1e-9)


def test_werner_weight_checked():
    with pytest.raises(ParameterError):
        werner(1.5)


def test_random_pure_is_seeded():
    a, b = random_pure(7), random_pure(7)
    assert np.array_equal(a.state.amplitudes, b.state.amplitudes)
    assert not np.allclose(a.state.amplitudes, random_pure(8).state.amplitudes)
    assert 0.5 < cut_purity(a) < 1.0


@pytest.mark.parametrize(
    "spec, name, dims",
    [
        ("singlet", "singlet", (2, 2)),
        ("w:n=4", "w4", (2, 2, 2, 2)),
        ("ghz", "ghz3", (2, 2, 2)),
        ("random_pure:seed=3,dims=2x3", "random_pure(3)", (2, 3)),
        ("0110", "0110", (2, 2, 2, 2)),
        ("werner:p=0.5,d=3", "werner(0.5,3)", (3, 3)),
    ],
)
def test_parse_state_spec(spec, name, dims):
    named = parse_state_spec(spec)
    assert named.name == name
    assert named.layout.dims == dims


def test_unknown_state():
    with pytest.raises(ParameterError):
        make_state("cat")
