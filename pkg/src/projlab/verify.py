"""Registry of oracle-versus-circuit and invariant checks behind ``projlab verify``."""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import gates as gate_lib
from .circuit import Circuit, ControlledOnState, circuit_unitary, measure_distribution, sample
from .constructions import (
    acceptance,
    build_antisym_test,
    build_commutator,
    build_concatenation,
    build_diff_proj,
    build_projector_uncompute,
    build_res_identity,
    build_sk_sym_test,
    schmidt_zero_probability,
)
from .estimators import hoeffding_T
from .experiments import werner_row
from .groups import (
    a_j_unitary,
    barenco_encoding,
    plus_state,
    s3_two_qubit_rep,
    standard_rep,
)
from .oracle import (
    ProjectorMatrix,
    antisym_schmidt_value,
    check_resolution,
    commutator_probability,
    diff_proj_probs,
    nested_commutator_probability,
    projector_anti,
    projector_sym,
    res_identity_probs,
    roots_of_unity_unitary,
    spectral_projectors,
)
from .states import basis, pizza, random_pure, singlet, werner
from .tensor import (
    ComplexTensorState,
    DensityOperator,
    Operator,
    RegisterLayout,
    apply,
    partial_trace,
    purify,
    random_state_vector,
    random_unitary,
    reduced_density,
)

MODULES = ("tensor-core", "groups-reps", "oracle-projectors", "circuit-ir-sim", "constructions", "estimators-states")
MUTATIONS = ("drop-zbar",)


@dataclass(frozen=True)
class Check:
    name: str
    module: str
    tolerance: float
    run: Callable[[np.random.Generator, frozenset[str]], float]


@dataclass(frozen=True)
class CheckResult:
    name: str
    module: str
    tolerance: float
    max_error: float
    margin: float
    passed: bool


REGISTRY: list[Check] = []


def check(name: str, module: str, tolerance: float):
    def wrap(fn):
        REGISTRY.append(Check(name, module, tolerance, fn))
        return fn

    return wrap


def _random_state(layout: RegisterLayout, rng: np.random.Generator) -> ComplexTensorState:
    return ComplexTensorState(layout, random_state_vector(layout.dim, rng))


def _expect(p: np.ndarray, v: np.ndarray) -> float:
    return float(np.vdot(v, p @ v).real)


# tensor-core


@check("unitary-preserves-norm", "tensor-core", 1e-10)
def _norm(rng, mutations):
    layout = RegisterLayout((("a", 2), ("b", 3), ("c", 2)))
    err = 0.0
    for _ in range(100):
        psi = _random_state(layout, rng)
        u = Operator(random_unitary(6, rng), (3, 2))
        err = max(err, abs(apply(u, ("b", "c"), psi).norm() - 1.0))
    return err


@check("partial-trace-of-product", "tensor-core", 1e-12)
def _ptrace(rng, mutations):
    layout = RegisterLayout((("x", 2), ("y", 3)))
    err = 0.0
    for _ in range(20):
        a = random_state_vector(2, rng)
        b = random_state_vector(3, rng)
        rho = DensityOperator(layout, np.kron(np.outer(a, a.conj()), np.outer(b, b.conj())))
        err = max(err, np.max(np.abs(partial_trace(rho, ["x"]).matrix - np.outer(a, a.conj()))))
    return float(err)


@check("purify-round-trip", "tensor-core", 1e-9)
def _purify(rng, mutations):
    err = 0.0
    for _ in range(20):
        psi = _random_state(RegisterLayout((("s", 3), ("e", 2))), rng)
        rho = reduced_density(psi, ["s"])
        pure = purify(rho, "p")
        err = max(err, np.max(np.abs(reduced_density(pure, ["s"]).matrix - rho.matrix)))
    return float(err)


# groups-reps


@check("rep-inverse-is-dagger", "groups-reps", 1e-10)
def _inverse(rng, mutations):
    err = 0.0
    for rep in (standard_rep(3, 2), standard_rep(2, 3), s3_two_qubit_rep()):
        for g in rep.group:
            err = max(err, np.max(np.abs(rep[g.inverse()].matrix - rep[g].matrix.conj().T)))
    return float(err)


@check("barenco-parity", "groups-reps", 0.0)
def _parity(rng, mutations):
    bad = 0
    for k in range(2, 6):
        enc = barenco_encoding(k)
        for g, digits in enc.element_to_basis.items():
            bad += int(sum(digits) % 2 != (1 - g.sign()) // 2)
    return float(bad)


@check("plus-state-product-form", "groups-reps", 1e-12)
def _plus(rng, mutations):
    err = 0.0
    for k in range(2, 6):
        v = np.array([1.0 + 0j])
        for j in range(k, 1, -1):
            v = np.kron(v, a_j_unitary(j).matrix[:, 0])
        err = max(err, np.max(np.abs(plus_state(barenco_encoding(k)).amplitudes - v)))
    return float(err)


# oracle-projectors


@check("projectors-hermitian-idempotent", "oracle-projectors", 1e-10)
def _idem(rng, mutations):
    err = 0.0
    for k, d in itertools.product((2, 3, 4), (2, 3)):
        rep = standard_rep(k, d)
        for p in (projector_sym(rep), projector_anti(rep)):
            m = p.matrix
            err = max(err, np.max(np.abs(m @ m - m)), np.max(np.abs(m - m.conj().T)))
        if projector_anti(rep).rank() != math.comb(d, k):
            return math.inf
    return float(err)


@check("sym-times-anti-zero", "oracle-projectors", 1e-12)
def _orth(rng, mutations):
    err = 0.0
    for k, d in itertools.product((2, 3), (2, 3)):
        rep = standard_rep(k, d)
        err = max(err, np.max(np.abs(projector_sym(rep).matrix @ projector_anti(rep).matrix)))
    return float(err)


def _random_resolution(r: int, dim: int, rng: np.random.Generator) -> list[ProjectorMatrix]:
    q = random_unitary(dim, rng)
    labels = np.concatenate([np.arange(r), rng.integers(0, r, dim - r)])
    out = []
    for j in range(r):
        cols = q[:, labels == j]
        out.append(ProjectorMatrix.from_matrix(cols @ cols.conj().T))
    return out


@check("resolution-lemma-and-unitarity", "oracle-projectors", 1e-10)
def _lemma(rng, mutations):
    err = 0.0
    for r in (2, 3, 4):
        projs = _random_resolution(r, 4, rng)
        check_resolution(projs)
        for i, j in itertools.product(range(r), repeat=2):
            target = projs[i].matrix if i == j else 0.0
            err = max(err, np.max(np.abs(projs[i].matrix @ projs[j].matrix - target)))
        u = roots_of_unity_unitary(projs).matrix
        err = max(err, np.max(np.abs(u @ u.conj().T - np.eye(4))), np.max(np.abs(u.conj().T @ u - np.eye(4))))
    return float(err)


# circuit-ir-sim


@check("controlled-on-state-lowering", "circuit-ir-sim", 1e-10)
def _lower(rng, mutations):
    err = 0.0
    for n in (1, 2, 3):
        layout = RegisterLayout.qubits([f"c{i}" for i in range(n)] + ["t"])
        chi = random_state_vector(2**n, rng)
        c = Circuit(layout, (ControlledOnState(tuple(f"c{i}" for i in range(n)), chi, "t"),))
        err = max(err, np.max(np.abs(circuit_unitary(c) - circuit_unitary(c.lowered()))))
    return float(err)


@check("sample-counts-consistent", "circuit-ir-sim", 0.0)
def _sample(rng, mutations):
    c = build_sk_sym_test(2, 2)
    dist = measure_distribution(c, basis("01").state.relabel({"q1": "A1", "q2": "A2"}))
    a = sample(dist, 1000, 5)
    b = sample(dist, 1000, 5)
    return float((a.counts != b.counts) + abs(sum(a.counts.values()) - 1000))


# constructions


def _strip_zbar(c: Circuit, mutations: frozenset[str]) -> Circuit:
    if "drop-zbar" not in mutations:
        return c
    return c.with_gates(g for g in c.gates if g.label != "Zbar")


@check("sk-symmetric-test", "constructions", 1e-9)
def _sk(rng, mutations):
    err = 0.0
    for k, d in ((2, 2), (3, 2), (2, 3), (4, 2)):
        rep = standard_rep(k, d)
        c = build_sk_sym_test(k, d)
        p = projector_sym(rep).matrix
        for _ in range(10):
            psi = _random_state(rep.data_layout, rng)
            err = max(err, abs(acceptance(c, psi) - _expect(p, psi.amplitudes)))
    return err


@check("antisymmetric-test", "constructions", 1e-9)
def _anti(rng, mutations):
    err = 0.0
    for k, d in ((2, 2), (3, 3), (2, 3)):
        rep = standard_rep(k, d)
        c = _strip_zbar(build_antisym_test(k, d), mutations)
        p = projector_anti(rep).matrix
        for _ in range(10):
            psi = _random_state(rep.data_layout, rng)
            err = max(err, abs(acceptance(c, psi) - _expect(p, psi.amplitudes)))
    return err


@check("uncompute-projectors", "constructions", 1e-9)
def _uncompute(rng, mutations):
    err = 0.0
    rep = s3_two_qubit_rep()
    enc = barenco_encoding(3)
    for anti in (False, True):
        c = _strip_zbar(build_projector_uncompute(rep, enc, anti), mutations)
        p = (projector_anti if anti else projector_sym)(rep).matrix
        for _ in range(10):
            psi = _random_state(rep.data_layout, rng)
            err = max(err, abs(measure_distribution(c, psi)["1"] - _expect(p, psi.amplitudes)))
    return err


@check("concatenation-branches", "constructions", 1e-9)
def _concat(rng, mutations):
    err = 0.0
    rep_g = standard_rep(2, 2, names=("D1", "D2"))
    rep_h = s3_two_qubit_rep()
    pg = projector_sym(rep_g).matrix
    ph = projector_anti(rep_h).matrix
    c = _strip_zbar(build_concatenation(rep_g, rep_h, anti_h=True), mutations)
    eye = np.eye(4)
    for _ in range(10):
        psi = _random_state(rep_h.data_layout, rng)
        v = psi.amplitudes
        dist = measure_distribution(c, psi)
        for fg, fh in itertools.product((0, 1), repeat=2):
            opg = pg if fg else eye - pg
            oph = ph if fh else eye - ph
            w = oph @ opg @ v
            err = max(err, abs(dist[f"{fg}{fh}"] - float(np.vdot(w, w).real)))
    return err


@check("difference-of-projectors", "constructions", 1e-9)
def _diff(rng, mutations):
    err = 0.0
    u = Operator(gate_lib.swap_matrix(2), (2, 2))
    system = RegisterLayout.qubits(["A", "B"])
    ref = RegisterLayout((("R", 4),))
    c = build_diff_proj(u, system, ref)
    p = ProjectorMatrix.from_matrix((np.eye(4) + u.matrix) / 2)
    for _ in range(5):
        psi = _random_state(system + ref, rng)
        dist = measure_distribution(c, psi)
        oracle = diff_proj_probs(p, reduced_density(psi, ["A", "B"]))
        err = max(err, max(abs(dist[k] - v) for k, v in oracle.items()))
    return err


@check("resolution-of-identity", "constructions", 1e-9)
def _res(rng, mutations):
    err = 0.0
    system = RegisterLayout.qubits(["A", "B"])
    for r in (2, 3):
        projs = _random_resolution(r, 4, rng)
        u = roots_of_unity_unitary(projs)
        c = build_res_identity(u, r, system)
        for _ in range(3):
            psi = _random_state(system, rng)
            dist = measure_distribution(c, psi)
            oracle = res_identity_probs(spectral_projectors(u, r), psi.density())
            err = max(err, max(abs(dist[k] - v) for k, v in oracle.items()))
    return err


@check("schmidt-rank-test", "constructions", 1e-9)
def _schmidt(rng, mutations):
    err = 0.0
    layout = RegisterLayout.qubits(["R", "S1", "S2"])
    for _ in range(3):
        psi = _random_state(layout, rng)
        for r in (1, 2):
            err = max(err, abs(schmidt_zero_probability(psi, ["R"], r) - antisym_schmidt_value(psi, ["R"], r)))
    return err


@check("commutator-circuits", "constructions", 1e-9)
def _comm(rng, mutations):
    err = 0.0
    system = RegisterLayout.qubits(["S0", "S1"])
    for _ in range(5):
        a = random_unitary(4, rng)
        b = random_unitary(4, rng)
        h = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        h = (h + h.conj().T) / 2
        psi = _random_state(system, rng)
        plain = build_commutator(Operator(a, (2, 2)), Operator(b, (2, 2)), system=system)
        nested = build_commutator(Operator(h, (2, 2)), Operator(b, (2, 2)), nested=True, system=system)
        err = max(
            err,
            abs(measure_distribution(plain, psi)["0"] - commutator_probability(a, b, psi.amplitudes)),
            abs(measure_distribution(nested, psi)["0"] - nested_commutator_probability(h, b, psi.amplitudes)),
        )
    return err


@check("werner-table-zeros", "constructions", 1e-9)
def _werner(rng, mutations):
    err = 0.0
    for named in (singlet(), pizza(), werner(0.3), basis("00"), basis("11")):
        row = werner_row(named)
        err = max(err, abs(row.true_value), abs(row.noiseless))
    row = werner_row(random_pure(7))
    if row.true_value <= 0:
        return math.inf
    return max(err, abs(row.true_value - row.noiseless))


# estimators-states


@check("werner-unitary-invariance", "estimators-states", 1e-9)
def _invariance(rng, mutations):
    err = 0.0
    for p in (0.0, 0.3, 1.0):
        for d in (2, 3):
            rho = werner(p, d).state.matrix
            for _ in range(20):
                u = random_unitary(d, rng)
                uu = np.kron(u, u)
                err = max(err, np.max(np.abs(uu @ rho @ uu.conj().T - rho)))
    return float(err)


@check("pizza-half-swap-antisymmetry", "estimators-states", 1e-12)
def _pizza(rng, mutations):
    v = pizza().state.amplitudes
    return float(np.max(np.abs(gate_lib.swap_matrix(8) @ v + v)))


@check("hoeffding-sample-sizes", "estimators-states", 0.0)
def _hoeffding(rng, mutations):
    expected = {(1.0, 2 / math.e**2): 4, (0.01, 0.05): 73778, (0.1, 0.01): 1060}
    return float(sum(hoeffding_T(e, d) != t for (e, d), t in expected.items()))


def run_checks(
    scope: str = "all", tolerance: float | None = None, mutations: frozenset[str] = frozenset(), seed: int = 2024
) -> dict:
    if scope != "all" and scope not in MODULES:
        raise ValueError(f"unknown scope {scope!r}; choose all or one of {', '.join(MODULES)}")
    unknown = set(mutations) - set(MUTATIONS)
    if unknown:
        raise ValueError(f"unknown mutation(s) {sorted(unknown)}")
    results = []
    for chk in REGISTRY:
        if scope != "all" and chk.module != scope:
            continue
        tol = chk.tolerance if tolerance is None else tolerance
        rng = np.random.default_rng([seed, len(results)])
        err = float(chk.run(rng, frozenset(mutations)))
        results.append(CheckResult(chk.name, chk.module, tol, err, tol - err, err <= tol))
    return {
        "scope": scope,
        "mutations": sorted(mutations),
        "passed": all(r.passed for r in results),
        "checks": [asdict(r) for r in results],
    }
