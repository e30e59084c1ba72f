"""One test per acceptance criterion; each prints a single PASS/FAIL line via the ``criterion`` fixture."""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from functools import reduce
from typing import Callable

import numpy as np

from projlab import gates
from projlab.circuit import Circuit, measure_distribution, outcome_key, sample
from projlab.constructions import (
    build_antisym_test,
    build_commutator,
    build_concatenation,
    build_diff_proj,
    build_gbose_test,
    build_projector_uncompute,
    build_res_identity,
    build_schmidt_test,
    build_sk_sym_test,
    build_sym_anti_concat,
    build_werner_test,
    schmidt_zero_probability,
    table_resource_formula,
)
from projlab.estimators import diff_proj_estimator, hoeffding_T, res_identity_estimator, res_identity_value
from projlab.experiments import schmidt_scan, werner_inputs, werner_row
from projlab.groups import (
    UnitaryRep,
    ControlEncoding,
    a_j_unitary,
    barenco_encoding,
    cyclic_group,
    parity_encoding,
    plus_state,
    s3_two_qubit_rep,
    standard_rep,
)
from projlab.oracle import (
    ProjectorMatrix,
    antisym_schmidt_value,
    commutator_probability,
    diff_proj_probs,
    nested_commutator_probability,
    projector_anti,
    projector_sym,
    res_identity_probs,
    roots_of_unity_unitary,
    sym_anti_branch_states,
    sym_anti_probs,
)
from projlab.states import basis, bell, double_bell, pizza, random_pure, singlet, w_state, werner
from projlab.tensor import (
    ComplexTensorState,
    Operator,
    RegisterLayout,
    householder_completion,
    partial_trace,
    random_state_vector,
    random_unitary,
)

N_INPUTS = 25


def _random_state(layout: RegisterLayout, rng: np.random.Generator) -> ComplexTensorState:
    return ComplexTensorState(layout, random_state_vector(layout.dim, rng))


def _norm2(v: np.ndarray) -> float:
    return float(np.vdot(v, v).real)


def _random_resolution(r: int, dim: int, rng: np.random.Generator) -> list[ProjectorMatrix]:
    q = random_unitary(dim, rng)
    labels = np.concatenate([np.arange(r), rng.integers(0, r, dim - r)])
    return [ProjectorMatrix.from_matrix(q[:, labels == j] @ q[:, labels == j].conj().T) for j in range(r)]


# dense oracles -------------------------------------------------------------------


def control_register_law(rep: UnitaryRep, enc: ControlEncoding, psi: np.ndarray, anti: bool) -> dict[str, float]:
    """Law of the control register after prepare, controlled U(g), optional signs, unprepare."""
    k = rep.group.degree
    if enc.is_barenco:
        w = reduce(np.kron, [a_j_unitary(j).matrix for j in range(k, 1, -1)])
    else:
        w = householder_completion(plus_state(enc).amplitudes)
    joint = np.zeros((enc.control_layout.dim, rep.dim), dtype=complex)
    for g in rep.group:
        weight = g.sign() if anti else 1
        joint[enc.index_of(g)] += weight * (rep[g].matrix @ psi) / math.sqrt(rep.group.order)
    out = w.conj().T @ joint
    probs = np.sum(np.abs(out) ** 2, axis=1)
    dims = enc.control_layout.dims
    return {outcome_key(np.unravel_index(i, dims), dims): float(p) for i, p in enumerate(probs)}


def projector_flag_law(p: np.ndarray, psi: np.ndarray) -> dict[str, float]:
    hit = _norm2(p @ psi)
    return {"1": hit, "0": 1.0 - hit}


def two_projector_law(pg: np.ndarray, ph: np.ndarray, psi: np.ndarray) -> dict[str, float]:
    eye = np.eye(len(psi))
    out = {}
    for fg, fh in itertools.product((0, 1), repeat=2):
        og = pg if fg else eye - pg
        oh = ph if fh else eye - ph
        out[f"{fg}{fh}"] = _norm2(oh @ og @ psi)
    return out


@dataclass
class EquivalenceCase:
    name: str
    circuit: Circuit
    input_layout: RegisterLayout
    oracle: Callable[[ComplexTensorState], dict[str, float]]
    registers: tuple[str, ...] | None = None


def gbose_case(name: str, rep: UnitaryRep, enc: ControlEncoding, anti: bool, circuit: Circuit | None = None) -> EquivalenceCase:
    return EquivalenceCase(
        name,
        circuit or build_gbose_test(rep, enc, anti),
        rep.data_layout,
        lambda psi: control_register_law(rep, enc, psi.amplitudes, anti),
    )


def uncompute_case(name: str, rep: UnitaryRep, anti: bool) -> EquivalenceCase:
    enc = barenco_encoding(rep.group.degree)
    p = (projector_anti if anti else projector_sym)(rep).matrix
    return EquivalenceCase(
        name, build_projector_uncompute(rep, enc, anti), rep.data_layout, lambda psi: projector_flag_law(p, psi.amplitudes)
    )


def two_copy_case(name: str, circuit: Circuit, system: RegisterLayout, reference: RegisterLayout, law) -> EquivalenceCase:
    def oracle(psi: ComplexTensorState) -> dict[str, float]:
        rho = partial_trace(psi.density(), system.names).matrix
        return law(rho)

    return EquivalenceCase(name, circuit, system + reference, oracle)


def equivalence_cases(rng: np.random.Generator) -> list[EquivalenceCase]:
    cases = []
    for k, d in ((2, 2), (3, 2), (2, 3), (4, 2)):
        rep = standard_rep(k, d)
        circuit = build_sk_sym_test(k, d)
        cases.append(gbose_case(f"sym-test S{k} d={d}", rep, barenco_encoding(k), False, circuit))
    for k, d in ((2, 2), (3, 3), (2, 3)):
        rep = standard_rep(k, d)
        circuit = build_antisym_test(k, d)
        cases.append(gbose_case(f"antisym-test S{k} d={d}", rep, barenco_encoding(k), True, circuit))
    z3 = standard_rep(3, 2, group=cyclic_group(3))
    cases.append(gbose_case("sym-test Z3 d=2", z3, parity_encoding(z3.group), anti=False))
    table = s3_two_qubit_rep()
    cases.append(gbose_case("sym-test S3 table rep", table, barenco_encoding(3), anti=False))

    cases.append(uncompute_case("uncompute sym S3 d=2", standard_rep(3, 2), anti=False))
    cases.append(uncompute_case("uncompute anti S2 d=3", standard_rep(2, 3), anti=True))
    cases.append(uncompute_case("uncompute anti S3 table rep", table, anti=True))

    pair = standard_rep(2, 2, names=("D1", "D2"))
    pg, ph = projector_sym(pair).matrix, projector_anti(table).matrix
    cases.append(
        EquivalenceCase(
            "concatenation separate controls",
            build_concatenation(pair, table, anti_h=True),
            table.data_layout,
            lambda psi: two_projector_law(pg, ph, psi.amplitudes),
        )
    )
    for rep in (table, standard_rep(3, 2)):
        cases.append(
            EquivalenceCase(
                f"sym/anti shared control {rep.kind}",
                build_sym_anti_concat(rep),
                rep.data_layout,
                lambda psi, rep=rep: sym_anti_probs(rep, psi),
            )
        )
    z3_enc = parity_encoding(z3.group)
    cases.append(
        EquivalenceCase(
            "sym/anti shared control Z3 branches",
            build_concatenation(z3, z3, enc_g=z3_enc, anti_h=True, shared_control=True, unprepare=False),
            z3.data_layout,
            lambda psi: {k: _norm2(v) for k, v in sym_anti_branch_states(z3, z3_enc, psi).items()},
        )
    )

    system = RegisterLayout.qubits(["S0", "S1"])
    ref = RegisterLayout((("R", 4),))
    q = random_unitary(4, rng)
    involution = q @ np.diag([1, 1, -1, 1]) @ q.conj().T
    p_inv = ProjectorMatrix.from_matrix((np.eye(4) + involution) / 2)
    cases.append(
        two_copy_case(
            "difference of projectors",
            build_diff_proj(Operator(involution, (2, 2)), system, ref),
            system,
            ref,
            lambda rho: diff_proj_probs(p_inv, rho),
        )
    )
    for r in (2, 3):
        projs = _random_resolution(r, 4, rng)
        u = roots_of_unity_unitary(projs)
        cases.append(
            two_copy_case(
                f"resolution of identity r={r}",
                build_res_identity(u, r, system, ref),
                system,
                ref,
                lambda rho, projs=projs: res_identity_probs(projs, rho),
            )
        )
    for d in (2, 3):
        halves = RegisterLayout((("A", d), ("B", d)))
        ref_d = RegisterLayout((("R", d),))
        p_sym = ProjectorMatrix.from_matrix((np.eye(d * d) + gates.swap_matrix(d)) / 2)
        cases.append(
            two_copy_case(
                f"werner test d={d}",
                build_werner_test(d, ref_d),
                halves,
                ref_d,
                lambda rho, p_sym=p_sym: diff_proj_probs(p_sym, rho),
            )
        )

    for n_r, n_s, r in ((1, 1, 1), (1, 1, 2), (1, 2, 1), (2, 1, 2)):
        circuit, _ = build_schmidt_test(n_r, n_s, r)
        names = list(circuit.copies[0])
        cut = names[:n_r]
        zero = "0" * len(circuit.measured)
        cases.append(
            EquivalenceCase(
                f"schmidt test {n_r}:{n_s} r={r}",
                circuit,
                RegisterLayout.qubits(names),
                lambda psi, cut=cut, r=r, zero=zero: {zero: antisym_schmidt_value(psi, cut, r)},
            )
        )

    def commutator_case(nested: bool) -> EquivalenceCase:
        a = random_unitary(4, rng)
        if nested:
            h = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            a = (h + h.conj().T) / 2
        b = random_unitary(4, rng)
        fn = nested_commutator_probability if nested else commutator_probability

        def law(psi: ComplexTensorState) -> dict[str, float]:
            p0 = fn(a, b, psi.amplitudes)
            return {"0": p0, "1": 1.0 - p0}

        c = build_commutator(Operator(a, (2, 2)), Operator(b, (2, 2)), nested=nested, system=system)
        return EquivalenceCase(f"commutator {'nested' if nested else 'plain'}", c, system, law)

    cases.append(commutator_case(False))
    cases.append(commutator_case(True))
    return cases


# criteria ------------------------------------------------------------------------


def test_criterion_1_projector_algebra(criterion):
    start = time.perf_counter()
    worst = 0.0
    rank_ok = True
    checked = 0
    for k, d in itertools.product(range(1, 5), (2, 3)):
        rep = standard_rep(k, d)
        ps, pa = projector_sym(rep).matrix, projector_anti(rep).matrix
        for p in (ps, pa):
            worst = max(worst, np.max(np.abs(p @ p - p)), np.max(np.abs(p - p.conj().T)))
        if k >= 2:
            # S_1 has no odd element, so both projectors are the identity there
            worst = max(worst, np.max(np.abs(ps @ pa)))
        rank_ok &= projector_anti(rep).rank() == math.comb(d, k)
        checked += 1
    elapsed = time.perf_counter() - start
    passed = worst <= 1e-10 and rank_ok and elapsed < 10
    criterion(1, passed, f"{checked} reps, max defect {worst:.2e}, ranks ok={rank_ok}, {elapsed:.2f}s")
    assert passed


def test_criterion_2_s3_table_rep(criterion):
    sym_x4 = np.array([[3, 1, 1, 1]] + [[1, 1 / 3, 1 / 3, 1 / 3]] * 3)
    anti_x4 = np.array([[1, -1, -1, -1]] + [[-1, 1, 1, 1]] * 3)
    rep = s3_two_qubit_rep()
    err_s = np.max(np.abs(projector_sym(rep).matrix - sym_x4 / 4))
    err_a = np.max(np.abs(projector_anti(rep).matrix - anti_x4 / 4))
    dist = measure_distribution(build_sym_anti_concat(rep), ComplexTensorState.basis(rep.data_layout, "00"))
    err_p = max(abs(dist["10"] - 0.75), abs(dist["01"] - 0.25), abs(dist["11"]))
    passed = err_s <= 1e-12 and err_a <= 1e-12 and err_p <= 1e-10
    criterion(2, passed, f"matrix errors {err_s:.1e}/{err_a:.1e}, P(10)={dist['10']:.12g} P(01)={dist['01']:.12g} P(11)={dist['11']:.1e}")
    assert passed


def test_criterion_3_oracle_circuit_equivalence(criterion):
    start = time.perf_counter()
    rng = np.random.default_rng(20240611)
    cases = equivalence_cases(rng)
    worst = 0.0
    worst_case = ""
    for case in cases:
        for _ in range(N_INPUTS):
            psi = _random_state(case.input_layout, rng)
            dist = measure_distribution(case.circuit, psi)
            oracle = case.oracle(psi)
            if len(oracle) == len(dist.entries):
                assert abs(sum(oracle.values()) - 1) < 1e-9, case.name
            for key, value in oracle.items():
                err = abs(dist[key] - value)
                if err > worst:
                    worst, worst_case = err, case.name
    elapsed = time.perf_counter() - start
    passed = worst <= 1e-9 and elapsed < 120
    criterion(3, passed, f"{len(cases)} builders x {N_INPUTS} inputs, max error {worst:.2e} ({worst_case}), {elapsed:.1f}s")
    assert passed


def test_criterion_4_werner_table(criterion):
    zero_rows = [singlet(), pizza(), werner(0.3), basis("00"), basis("11")]
    exact_err = 0.0
    for named in zero_rows:
        row = werner_row(named)
        exact_err = max(exact_err, abs(row.true_value), abs(row.noiseless))
    rand = werner_row(random_pure(7))
    random_ok = rand.true_value > 0 and abs(rand.true_value - rand.noiseless) <= 1e-9

    worst_fraction = 1.0
    for named in zero_rows + [random_pure(7)]:
        circuit, psi, _ = werner_inputs(named)
        dist = measure_distribution(circuit, psi)
        truth = werner_row(named).true_value
        hits = sum(abs(diff_proj_estimator(sample(dist, 100_000, seed)) - truth) <= 0.01 for seed in range(100))
        worst_fraction = min(worst_fraction, hits / 100)
    passed = exact_err <= 1e-9 and random_ok and worst_fraction >= 0.95
    criterion(
        4,
        passed,
        f"zero rows max |value| {exact_err:.1e}, random row {rand.true_value:.12g} vs {rand.noiseless:.12g}, "
        f"shot column worst coverage {worst_fraction:.2f}",
    )
    assert passed


def test_criterion_5_schmidt_scans(criterion):
    start = time.perf_counter()
    expected = [
        (bell(), ("R",), {1: 0.25, 2: 0.0}),
        (w_state(3), ("q1", "q2"), {1: 2 / 9, 2: 0.0}),
        (double_bell(), ("R",), {1: 0.25, 2: 0.0}),
    ]
    worst = 0.0
    verdicts = []
    for named, cut, series in expected:
        scan = schmidt_scan(named, cut, r_max=2)
        for r, v in series.items():
            worst = max(worst, abs(scan.exact[r] - v), abs(schmidt_zero_probability(named.state, cut, r) - v))
        verdicts.append(scan.verdict)
    elapsed = time.perf_counter() - start
    passed = worst <= 1e-9 and verdicts == [2, 2, 2] and elapsed < 60
    criterion(5, passed, f"max error {worst:.1e}, rank verdicts {verdicts}, {elapsed:.1f}s")
    assert passed


def test_criterion_6_resource_counts(criterion):
    mismatches = []
    for n, r in itertools.product(range(1, 5), range(1, 4)):
        _, got = build_schmidt_test(n - n // 2, n // 2, r)
        want = table_resource_formula(n, r)
        if got != want:
            mismatches.append(f"(n={n},r={r}) got {tuple(vars(got).values())} want {tuple(vars(want).values())}")
    passed = not mismatches
    detail = "all 12 (n, r) pairs match" if passed else f"{len(mismatches)}/12 mismatch, e.g. {mismatches[0]}"
    criterion(6, passed, detail)
    assert passed, "; ".join(mismatches)


def test_criterion_7_resolution_of_identity(criterion):
    rng = np.random.default_rng(7)
    system = RegisterLayout.qubits(["S0", "S1"])
    ref = RegisterLayout((("R", 2),))
    stat_err = lemma_err = unitary_err = 0.0
    for r in (2, 3):
        for _ in range(10):
            projs = _random_resolution(r, 4, rng)
            for i, j in itertools.product(range(r), repeat=2):
                target = projs[i].matrix if i == j else 0.0
                lemma_err = max(lemma_err, np.max(np.abs(projs[i].matrix @ projs[j].matrix - target)))
            u = roots_of_unity_unitary(projs)
            unitary_err = max(unitary_err, np.max(np.abs(u.matrix.conj().T @ u.matrix - np.eye(4))))
            psi = _random_state(system + ref, rng)
            rho = partial_trace(psi.density(), system.names).matrix
            dist = measure_distribution(build_res_identity(u, r, system, ref), psi)
            for a, b in itertools.product(range(r), repeat=2):
                pa, pb = projs[(a - 1) % r].matrix, projs[(b - 1) % r].matrix
                trace = np.trace(pa @ rho @ pb @ rho).real
                stat_err = max(stat_err, abs(dist[f"0{a}{b}"] - dist[f"1{a}{b}"] - trace))
    passed = stat_err <= 1e-9 and lemma_err <= 1e-10 and unitary_err <= 1e-10
    criterion(7, passed, f"statistics {stat_err:.1e}, lemma {lemma_err:.1e}, unitarity {unitary_err:.1e}")
    assert passed


def test_criterion_8_commutators(criterion):
    rng = np.random.default_rng(8)
    system = RegisterLayout.qubits(["S0", "S1"])
    worst = 0.0
    for _ in range(25):
        a, b = random_unitary(4, rng), random_unitary(4, rng)
        h = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        h = (h + h.conj().T) / 2
        psi = _random_state(system, rng)
        v = psi.amplitudes
        plain = measure_distribution(build_commutator(Operator(a, (2, 2)), Operator(b, (2, 2)), system=system), psi)["0"]
        direct = _norm2((a @ b - b @ a) @ v) / 4
        e = np.linalg.eigh(h)
        exp_h = e[1] @ np.diag(np.exp(1j * e[0])) @ e[1].conj().T
        nested = measure_distribution(
            build_commutator(Operator(h, (2, 2)), Operator(b, (2, 2)), nested=True, system=system), psi
        )["0"]
        direct_nested = _norm2((exp_h @ b @ exp_h.conj().T - b) @ v) / 4
        worst = max(worst, abs(plain - direct), abs(nested - direct_nested))
    qubit = RegisterLayout.qubits(["S0"])
    zero = ComplexTensorState.basis(qubit, "0")
    x, z, hd = (Operator(m, (2,)) for m in (gates.X, gates.Z, gates.H))
    xz = measure_distribution(build_commutator(x, z, system=qubit), zero)["0"]
    hz = measure_distribution(build_commutator(hd, z, system=qubit), zero)["0"]
    passed = worst <= 1e-9 and abs(xz - 1) <= 1e-9 and abs(hz - 0.5) <= 1e-9
    criterion(8, passed, f"25 instances max error {worst:.1e}, (X,Z)={xz:.12g}, (H,Z,|0>)={hz:.12g}")
    assert passed


def test_criterion_9_hoeffding(criterion):
    eps, delta = 0.05, 0.1
    T = hoeffding_T(eps, delta)
    circuit, psi, _ = werner_inputs(random_pure(7))
    dist = measure_distribution(circuit, psi)
    truth = werner_row(random_pure(7)).true_value
    res_dist = measure_distribution(build_res_identity(Operator(gates.swap_matrix(2), (2, 2)), 2), psi.relabel({"A": "S0", "B": "S1"}))
    res_truth = res_identity_value(res_dist, 0, 1)
    failures = res_failures = 0
    for seed in range(200):
        failures += abs(diff_proj_estimator(sample(dist, T, seed)) - truth) > eps
        res_failures += abs(res_identity_estimator(sample(res_dist, T, seed), 0, 1).value - res_truth) > eps
    rate = max(failures, res_failures) / 200
    passed = rate <= delta
    criterion(9, passed, f"T={T}, failure rates {failures / 200:.3f} (werner) {res_failures / 200:.3f} (res-identity), delta={delta}")
    assert passed
