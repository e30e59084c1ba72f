from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projlab import gates
from projlab.circuit import (
    Circuit,
    ControlledOnState,
    ControlledUnitary,
    Measure,
    OutcomeDistribution,
    Prepare,
    ShotTally,
    Unitary,
    circuit_from_json,
    circuit_to_json,
    circuit_unitary,
    measure_distribution,
    sample,
    simulate,
)
from projlab.constructions import build_projector_uncompute, build_res_identity, build_sk_sym_test
from projlab.errors import CapacityError, LayoutError
from projlab.groups import barenco_encoding, standard_rep
from projlab.states import singlet
from projlab.tensor import ComplexTensorState, Operator, RegisterLayout, random_state_vector

Q1 = RegisterLayout.qubits(["q"])
H = Operator(gates.H, (2,))


def _random(layout: RegisterLayout, seed: int) -> ComplexTensorState:
    return ComplexTensorState(layout, random_state_vector(layout.dim, np.random.default_rng(seed)))


def test_empty_circuit_is_identity():
    psi = _random(RegisterLayout.qubits(["a", "b"]), 0)
    out = simulate(Circuit(psi.layout, ()), psi)
    assert np.allclose(out.amplitudes, psi.amplitudes)


def test_double_hadamard():
    psi = _random(Q1, 1)
    c = Circuit(Q1, (Unitary(("q",), H), Unitary(("q",), H)))
    assert np.allclose(simulate(c, psi).amplitudes, psi.amplitudes, atol=1e-12)


def test_controlled_on_values_of_a_qutrit():
    layout = RegisterLayout((("c", 3), ("t", 2)))
    gate = ControlledUnitary(("c",), ("t",), Operator(gates.X, (2,)), frozenset({(2,)}))
    c = Circuit(layout, (gate,))
    for digit, flipped in ((0, 0), (1, 0), (2, 1)):
        out = simulate(c, ComplexTensorState.basis(layout, [digit, 0]))
        assert np.allclose(out.amplitudes, ComplexTensorState.basis(layout, [digit, flipped]).amplitudes)


def test_prepare_then_unprepare():
    layout = RegisterLayout.qubits(["a", "b"])
    column = np.array([1, 1, 1, 0]) / np.sqrt(3)
    prep = Prepare(("a", "b"), column)
    zero = ComplexTensorState.basis(layout, "00")
    once = simulate(Circuit(layout, (prep,)), zero)
    assert np.allclose(once.amplitudes, column)
    back = simulate(Circuit(layout, (prep, prep.dagger())), zero)
    assert np.allclose(back.amplitudes, zero.amplitudes)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 3))
def test_controlled_on_state_lowering(seed, n):
    rng = np.random.default_rng(seed)
    names = [f"c{i}" for i in range(n)]
    layout = RegisterLayout.qubits(names + ["t"])
    chi = random_state_vector(2**n, rng)
    c = Circuit(layout, (ControlledOnState(tuple(names), chi, "t"),))
    direct = circuit_unitary(c)
    assert np.allclose(direct, circuit_unitary(c.lowered()), atol=1e-10)
    assert np.allclose(direct.conj().T @ direct, np.eye(layout.dim), atol=1e-10)


def test_measured_register_cannot_be_reused():
    with pytest.raises(LayoutError):
        Circuit(Q1, (Measure(("q",)), Unitary(("q",), H)))


def test_gate_dims_checked():
    with pytest.raises(LayoutError):
        Circuit(Q1, (Unitary(("q",), Operator(np.eye(3), (3,))),))


def test_symmetric_projection_of_01():
    rep = standard_rep(2, 2)
    c = build_projector_uncompute(rep, barenco_encoding(2))
    psi = ComplexTensorState.basis(rep.data_layout, "01")
    dist = measure_distribution(c, psi, post_states=True)
    assert dist["1"] == pytest.approx(0.5)
    post = dist.post_states["1"]
    data = post.reorder(["flag", "c2_1", "A1", "A2"]).amplitudes.reshape(4, 4)[2]
    assert np.allclose(data, np.array([0, 1, 1, 0]) / np.sqrt(2))


def test_antisymmetric_projection_keeps_singlet():
    rep = standard_rep(2, 2)
    c = build_projector_uncompute(rep, barenco_encoding(2), anti=True)
    psi = singlet().state.relabel({"A": "A1", "B": "A2"})
    dist = measure_distribution(c, psi, post_states=True)
    assert dist["1"] == pytest.approx(1.0)
    post = dist.post_states["1"].reorder(["flag", "c2_1", "A1", "A2"]).amplitudes.reshape(4, 4)[2]
    assert abs(np.vdot(post, psi.amplitudes)) == pytest.approx(1.0)


def test_marginal_and_json_round_trip():
    c = build_sk_sym_test(3, 2)
    dist = measure_distribution(c, ComplexTensorState.basis(RegisterLayout.qubits(["A1", "A2", "A3"]), "001"))
    assert dist[(0, 0, 0)] == pytest.approx(1 / 3)
    again = OutcomeDistribution.from_json(json.loads(json.dumps(dist.to_json())))
    assert again.entries == dist.entries
    assert sum(dist.marginal("c2_1").entries.values()) == pytest.approx(1.0)


def test_deterministic_sampling():
    dist = OutcomeDistribution(("q",), (2,), {"1": 1.0})
    tally = sample(dist, 100, seed=3)
    assert tally.counts == {"1": 100}


def test_fair_coin_within_five_sigma():
    dist = OutcomeDistribution(("q",), (2,), {"0": 0.5, "1": 0.5})
    tally = sample(dist, 100_000, seed=11)
    assert abs(tally.counts["0"] - 50_000) < 5 * np.sqrt(100_000 * 0.25)


def test_sampling_is_reproducible_and_block_split():
    dist = OutcomeDistribution(("q",), (2,), {"0": 0.3, "1": 0.7})
    a = sample(dist, 250_000, seed=5)
    b = sample(dist, 250_000, seed=5)
    assert a.counts == b.counts
    assert sample(dist, 250_000, seed=6).counts != a.counts
    assert ShotTally.from_json(json.loads(json.dumps(a.to_json()))).counts == a.counts


def test_circuit_json_round_trip():
    c = build_res_identity(Operator(gates.swap_matrix(2), (2, 2)), 2)
    text = circuit_to_json(c)
    back = circuit_from_json(text)
    psi = _random(RegisterLayout.qubits(["S0", "S1"]), 4)
    assert measure_distribution(back, psi).entries == pytest.approx(measure_distribution(c, psi).entries)
    c2 = build_projector_uncompute(standard_rep(3, 2), barenco_encoding(3), anti=True)
    back2 = circuit_from_json(circuit_to_json(c2))
    assert np.allclose(circuit_unitary(back2), circuit_unitary(c2))


def test_prepare_checks_capacity_before_building(monkeypatch):
    layout = RegisterLayout.qubits(["a", "b", "c", "d"])
    column = np.full(16, 0.25)
    c = Circuit(layout, (Prepare(layout.names, column),), (layout.names,))
    monkeypatch.setenv("PROJLAB_CAPACITY", "8")
    with pytest.raises(CapacityError):
        simulate(c, ComplexTensorState.basis(layout, "0000"))


def test_controlled_on_state_wide_control():
    # the rank-1 predicate is applied without a dense control projector
    names = [f"c{i}" for i in range(12)]
    layout = RegisterLayout.qubits(names + ["t"])
    v = np.full(2**12, 2**-6, dtype=complex)
    c = Circuit(layout, (Prepare(names, v), ControlledOnState(names, v, "t"), Measure(("t",))), (tuple(layout.names),))
    dist = measure_distribution(c, ComplexTensorState.basis(layout, "0" * 13))
    assert dist["1"] == pytest.approx(1.0)
