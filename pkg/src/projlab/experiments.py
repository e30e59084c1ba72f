"""Table and series producers shared by the CLI and the acceptance suite."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import gates as gate_lib
from .circuit import measure_distribution, sample
from .constructions import (
    build_commutator,
    build_res_identity,
    build_sym_anti_concat,
    build_werner_test,
    commutator_norm_summaries,
    commutator_zero_probability,
    schmidt_zero_probability,
    werner_value,
)
from .errors import LayoutError, ParameterError
from .estimators import diff_proj_estimator, res_identity_estimator, res_identity_value
from .groups import Permutation, UnitaryRep, permutation_operator, s3_two_qubit_rep, standard_rep
from .oracle import (
    ProjectorMatrix,
    antisym_schmidt_value,
    commutator_norms,
    commutator_probability,
    nested_commutator_probability,
    real_cross_norm,
    res_identity_probs,
    spectral_projectors,
    sym_anti_probs,
)
from .states import NamedState, antisymmetric_projector, bipartite, symmetric_projector
from .tensor import ComplexTensorState, DensityOperator, Operator, RegisterLayout, purify

ZERO_TOL = 1e-9


@dataclass(frozen=True)
class WernerRow:
    state: str
    true_value: float
    noiseless: float
    shot_noise: float | None


def werner_inputs(named: NamedState):
    """(circuit, input state, density matrix) for the two-copy Werner test at the state's cut."""
    ab = bipartite(named)
    half = ab.layout.dims[0]
    if ab.layout.dims != (half, half):
        raise LayoutError(f"Werner test needs equal halves, got dims {ab.layout.dims}")
    if isinstance(ab, DensityOperator):
        purified = purify(ab, "Ref").reorder(["A", "B", "Ref"])
        ref = RegisterLayout((("Ref", purified.layout.dim_of("Ref")),))
        return build_werner_test(half, ref), purified, ab.matrix
    return build_werner_test(half), ab, np.outer(ab.amplitudes, ab.amplitudes.conj())


def werner_row(named: NamedState, shots: int | None = None, seed: int = 0) -> WernerRow:
    circuit, psi, rho = werner_inputs(named)
    d = circuit.layout.dim_of("A_1")
    p_s = ProjectorMatrix.from_matrix(symmetric_projector(d))
    p_a = ProjectorMatrix.from_matrix(antisymmetric_projector(d))
    truth = real_cross_norm(p_s, p_a, rho)
    dist = measure_distribution(circuit, psi)
    shot = diff_proj_estimator(sample(dist, shots, seed)) if shots else None
    return WernerRow(named.name, truth, werner_value(dist), shot)


@dataclass(frozen=True)
class SchmidtScan:
    state: str
    exact: dict[int, float]
    oracle: dict[int, float]
    sampled: dict[int, float] | None
    verdict: int | None


def schmidt_scan(
    named: NamedState, cut: Sequence[str] | None = None, r_max: int = 2, shots: int | None = None, seed: int = 0
) -> SchmidtScan:
    if not named.is_pure:
        raise ParameterError("Schmidt scans need a pure state")
    cut = tuple(cut) if cut is not None else named.cut
    exact, oracle, sampled = {}, {}, {}
    for r in range(1, r_max + 1):
        p = schmidt_zero_probability(named.state, cut, r)
        exact[r] = p
        oracle[r] = antisym_schmidt_value(named.state, cut, r)
        if shots:
            ss = np.random.SeedSequence([seed, r])
            rng = np.random.Generator(np.random.Philox(ss))
            sampled[r] = float(rng.binomial(shots, min(max(p, 0.0), 1.0)) / shots)
    verdict = next((r for r in sorted(exact) if exact[r] <= ZERO_TOL), None)
    return SchmidtScan(named.name, exact, oracle, sampled if shots else None, verdict)


def rep_by_name(name: str, named: NamedState) -> UnitaryRep:
    key = name.lower()
    if key in ("s3-two-qubit", "s3-table", "table"):
        if named.layout.dims != (2, 2):
            raise LayoutError("the two-qubit S3 representation needs a two-qubit state")
        return s3_two_qubit_rep(named.layout.names)
    if key == "standard":
        dims = set(named.layout.dims)
        if len(dims) != 1:
            raise LayoutError("standard representation needs registers of equal dimension")
        return standard_rep(len(named.layout), dims.pop(), names=named.layout.names)
    raise ParameterError(f"unknown representation {name!r}")


def sym_anti_table(named: NamedState, rep_name: str = "standard", shots: int | None = None, seed: int = 0):
    if not named.is_pure:
        raise ParameterError("sym-anti needs a pure state")
    rep = rep_by_name(rep_name, named)
    dist = measure_distribution(build_sym_anti_concat(rep), named.state)
    oracle = sym_anti_probs(rep, named.state)
    tally = sample(dist, shots, seed) if shots else None
    rows = []
    for key in ("00", "01", "10", "11"):
        rows.append(
            {
                "outcome": key,
                "circuit": dist[key],
                "oracle": oracle[key],
                "sampled": tally.frequency(key) if tally else None,
            }
        )
    return rows


def cycle_unitary(named: NamedState) -> tuple[Operator, int]:
    """Cyclic shift of the state's registers; its order k gives spectrum in the k-th roots of unity."""
    dims = set(named.layout.dims)
    if len(dims) != 1:
        raise LayoutError("cyclic shift needs registers of equal dimension")
    k = len(named.layout)
    d = dims.pop()
    shift = Permutation(tuple(list(range(2, k + 1)) + [1]))
    return Operator(permutation_operator(shift, d), named.layout.dims), k


def res_identity_dump(named: NamedState, unitary: str = "cycle", shots: int | None = None, seed: int = 0):
    if unitary == "swap":
        ab = bipartite(named)
        if not isinstance(ab, ComplexTensorState):
            raise ParameterError("res-identity needs a pure state")
        d = ab.layout.dims[0]
        u, r, psi = Operator(gate_lib.swap_matrix(d), (d, d)), 2, ab
    elif unitary == "cycle":
        if not named.is_pure:
            raise ParameterError("res-identity needs a pure state")
        (u, r), psi = cycle_unitary(named), named.state
    else:
        raise ParameterError(f"unknown unitary {unitary!r}")
    circuit = build_res_identity(u, r, psi.layout)
    dist = measure_distribution(circuit, psi)
    oracle = res_identity_probs(spectral_projectors(Operator(u.matrix, psi.layout.dims), r), psi.density())
    tally = sample(dist, shots, seed) if shots else None
    rows = []
    for a in range(r):
        for b in range(r):
            exact_diff = dist[f"0{a}{b}"] - dist[f"1{a}{b}"]
            oracle_diff = oracle[f"0{a}{b}"] - oracle[f"1{a}{b}"]
            rows.append(
                {
                    "a": a,
                    "b": b,
                    "circuit_diff": exact_diff,
                    "oracle_diff": oracle_diff,
                    "estimator": res_identity_value(dist, a, b),
                    "sampled": res_identity_estimator(tally, a, b).value if tally else None,
                }
            )
    return rows


def parse_operator(spec: str) -> Operator:
    """``X``, ``XZ`` (tensor product, one letter per qubit), ``CNOT`` or ``SWAP``."""
    text = spec.strip().upper()
    if text in ("CNOT", "SWAP"):
        return gate_lib.named(text)
    if not text or any(ch not in "IXYZHST" for ch in text):
        raise ParameterError(f"cannot parse operator {spec!r}")
    m = np.array([[1.0]], dtype=complex)
    for ch in text:
        m = np.kron(m, gate_lib.named(ch).matrix)
    return Operator(m, (2,) * len(text))


def commutator_compare(a_spec: str, b_spec: str, mode: str = "plain", input_spec: str = "0") -> dict:
    a, b = parse_operator(a_spec), parse_operator(b_spec)
    if a.dims != b.dims:
        raise LayoutError("A and B act on different numbers of qubits")
    nested = mode == "bch"
    if mode not in ("plain", "bch"):
        raise ParameterError(f"unknown mode {mode!r}")
    system = RegisterLayout(tuple((f"S{i}", 2) for i in range(len(a.dims))))
    if input_spec in ("mixed", "max"):
        if nested:
            raise ParameterError("mixed/max summaries are defined for the plain commutator")
        frob, spec = commutator_norm_summaries(a, b)
        f_dir, s_dir = commutator_norms(a.matrix, b.matrix)
        circuit_value, oracle_value = (frob, f_dir) if input_spec == "mixed" else (spec, s_dir)
        return {"mode": mode, "input": input_spec, "circuit": circuit_value, "oracle": oracle_value}
    bits = input_spec
    if len(bits) != len(a.dims) or any(ch not in "01" for ch in bits):
        raise ParameterError(f"input must be a {len(a.dims)}-bit string, 'mixed' or 'max'")
    psi = ComplexTensorState.basis(system, bits)
    circuit = build_commutator(a, b, nested=nested, system=system)
    value = commutator_zero_probability(circuit, psi)
    if nested:
        oracle_value = nested_commutator_probability(a.matrix, b.matrix, psi.amplitudes)
    else:
        oracle_value = commutator_probability(a.matrix, b.matrix, psi.amplitudes)
    return {"mode": mode, "input": input_spec, "circuit": value, "oracle": oracle_value}


__all__ = [
    "WernerRow",
    "SchmidtScan",
    "werner_row",
    "werner_inputs",
    "schmidt_scan",
    "sym_anti_table",
    "res_identity_dump",
    "commutator_compare",
    "parse_operator",
    "rep_by_name",
    "cycle_unitary",
]
