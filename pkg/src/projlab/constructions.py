"""Circuit builders for the projector tests, with structural resource counts.

Outcome conventions
-------------------
* Control-register tests (G-Bose, S_k symmetry, antisymmetry, Schmidt rank)
  un-prepare the control before measuring it, so acceptance is the
  all-zeros control outcome.
* Uncompute-style builders carry one flag qubit per projector; flag value 1
  marks the projected branch and 0 the complement.
* The two-copy estimators measure ``(C3, C2, C1)`` and key outcomes as the
  digit string in that order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import gates as gate_lib
from .circuit import (
    Circuit,
    ControlledOnState,
    ControlledUnitary,
    Gate,
    Measure,
    OutcomeDistribution,
    Prepare,
    Unitary,
    measure_distribution,
    simulate,
)
from .errors import (
    GroupError,
    InvalidGeneratorError,
    InvalidUnitaryError,
    LayoutError,
    ParityError,
)
from .groups import (
    ControlEncoding,
    Permutation,
    UnitaryRep,
    a_j_cascade,
    a_j_column,
    barenco_encoding,
    minus_state,
    parity_encoding,
    plus_state,
    standard_rep,
)
from .oracle import hermitian_exp, spectral_projectors
from .tensor import NORM_TOL, ComplexTensorState, Operator, RegisterLayout

FLAG = "flag"
SYM_FLAG = "flag_sym"
ANTI_FLAG = "flag_anti"


@dataclass(frozen=True)
class ResourceCount:
    qubits: int
    two_qubit_gates: int
    cswaps: int

    def __post_init__(self) -> None:
        if min(self.qubits, self.two_qubit_gates, self.cswaps) < 0:
            raise ValueError("resource counts must be nonnegative")


def _op(m: np.ndarray, dims: Sequence[int]) -> Operator:
    return Operator(m, tuple(dims))


def _x() -> Operator:
    return _op(gate_lib.X, (2,))


def _qubit_gate(name: str, m: np.ndarray, label: str | None = None) -> Unitary:
    return Unitary((name,), _op(m, (2,)), label or "U")


# control preparation ----------------------------------------------------------


def _block_wire_names(enc: ControlEncoding) -> list[tuple[int, list[str]]]:
    blocks: dict[int, list[str]] = {}
    for j, _i, name in enc.transposition_wires:
        blocks.setdefault(j, []).append(name)
    return sorted(blocks.items(), reverse=True)


def _cascade_gates(j: int, names: Sequence[str]) -> list[Gate]:
    """Elementary A_j preparation; cascade wire w is the block's w-th qubit from the right."""
    m = len(names)
    out: list[Gate] = []
    for step in a_j_cascade(j):
        wires = [names[m - 1 - w] for w in step.wires]
        if step.kind == "ry":
            out.append(Unitary((wires[0],), _op(gate_lib.ry(step.angle), (2,)), f"RY{j}"))
        elif step.kind == "cry":
            out.append(
                ControlledUnitary((wires[0],), (wires[1],), _op(gate_lib.ry(step.angle), (2,)), frozenset({(1,)}), label="CRY")
            )
        else:
            out.append(ControlledUnitary((wires[0],), (wires[1],), _x(), frozenset({(1,)}), label="CNOT"))
    return out


def control_prep(enc: ControlEncoding, elementary: bool = False) -> list[Gate]:
    """Gates taking the all-zeros control register to the uniform superposition over encoded elements."""
    if enc.is_barenco:
        out: list[Gate] = []
        for j, names in _block_wire_names(enc):
            if elementary:
                out.extend(_cascade_gates(j, names))
            else:
                out.append(Prepare(tuple(names), a_j_column(j), f"A{j}"))
        return out
    return [Prepare(enc.control_layout.names, plus_state(enc).amplitudes, "P+")]


def control_unprep(enc: ControlEncoding, elementary: bool = False) -> list[Gate]:
    return [g.dagger() for g in reversed(control_prep(enc, elementary))]


def sign_layer(enc: ControlEncoding) -> list[Gate]:
    """Z on every control qubit; with a parity-respecting encoding this multiplies |g> by sgn(g)."""
    if any(d != 2 for d in enc.control_layout.dims):
        raise ParityError("sign layer needs qubit control registers")
    return [_qubit_gate(n, gate_lib.Z, "Zbar") for n in enc.control_layout.names]


def _check_pair(rep: UnitaryRep, enc: ControlEncoding) -> None:
    if not rep.group.same_as(enc.group):
        raise GroupError("encoding and representation are over different groups")


def controlled_group_action(
    rep: UnitaryRep, enc: ControlEncoding, data: Sequence[str], inverse: bool = False
) -> list[Gate]:
    """Controlled U(g) on ``data`` for the encoded control register.

    Barenco encodings use one controlled transposition per control qubit,
    applied in block order j = 2, ..., k so the composite matches the
    encoding's composition rule.  Standard representations act on the two
    swapped registers only (a CSWAP); other encodings use one select gate per
    non-identity element.
    """
    _check_pair(rep, enc)
    data = tuple(data)
    if len(data) != len(rep.data_layout):
        raise LayoutError("data registers do not match the representation layout")
    out: list[Gate] = []
    k = rep.group.degree
    if enc.is_barenco:
        for j, i, name in sorted(enc.transposition_wires, key=lambda w: (w[0], w[1])):
            tau = Permutation.transposition(k, i, j)
            if rep.kind == "standard":
                d = rep.data_layout.dims[0]
                gate = ControlledUnitary(
                    (name,), (data[i - 1], data[j - 1]), _op(gate_lib.swap_matrix(d), (d, d)), frozenset({(1,)}), label="CSWAP"
                )
            else:
                gate = ControlledUnitary((name,), data, rep[tau], frozenset({(1,)}), label="CU")
            out.append(gate)
    else:
        for g in rep.group:
            if g.is_identity():
                continue
            digits = enc.element_to_basis[g]
            out.append(ControlledUnitary(enc.control_layout.names, data, rep[g], frozenset({digits}), label="SEL"))
    if inverse:
        out = [g.dagger() for g in reversed(out)]
    return out


# symmetry tests -----------------------------------------------------------------


def _data_names(rep: UnitaryRep) -> tuple[str, ...]:
    return rep.data_layout.names


def build_gbose_test(rep: UnitaryRep, enc: ControlEncoding, anti: bool = False) -> Circuit:
    """Control-register symmetry test; acceptance (all-zeros control) has probability Tr[Pi rho]."""
    _check_pair(rep, enc)
    if anti and not enc.require_parity:
        raise ParityError("antisymmetric test needs a parity-respecting encoding")
    layout = enc.control_layout + rep.data_layout
    body = control_prep(enc) + controlled_group_action(rep, enc, _data_names(rep))
    if anti:
        body += sign_layer(enc)
    body += control_unprep(enc) + [Measure(enc.control_layout.names)]
    kind = "antisym-test" if anti else "gbose-test"
    return Circuit(layout, tuple(body), (_data_names(rep),), {"builder": kind})


def build_sk_sym_test(k: int, d: int) -> Circuit:
    rep = standard_rep(k, d)
    return build_gbose_test(rep, barenco_encoding(k))


def build_antisym_test(k: int, d: int) -> Circuit:
    rep = standard_rep(k, d)
    return build_gbose_test(rep, barenco_encoding(k), anti=True)


def acceptance(c: Circuit, psi: ComplexTensorState) -> float:
    """Probability that every measured register reads 0."""
    dist = measure_distribution(c, psi)
    return dist[(0,) * len(dist.registers)]


# uncompute-based projectors ------------------------------------------------------


def _flag_section(rep: UnitaryRep, enc: ControlEncoding, flag: str, anti: bool) -> list[Gate]:
    plus = plus_state(enc).amplitudes
    ctrl = enc.control_layout.names
    if anti:
        # flip on |+> between two sign layers, which is the same as flipping on |->
        return sign_layer(enc) + [ControlledOnState(ctrl, plus, flag, "COS+")] + sign_layer(enc)
    return [ControlledOnState(ctrl, plus, flag, "COS+")]


def build_projector_uncompute(rep: UnitaryRep, enc: ControlEncoding, anti: bool = False, flag: str = FLAG) -> Circuit:
    """Flag qubit reads 1 with probability ||Pi psi||^2 and leaves Pi psi on the data, control back in |0>."""
    _check_pair(rep, enc)
    if anti and not enc.require_parity:
        raise ParityError("antisymmetric projection needs a parity-respecting encoding")
    data = _data_names(rep)
    layout = RegisterLayout.qubits([flag]) + enc.control_layout + rep.data_layout
    body = (
        control_prep(enc)
        + controlled_group_action(rep, enc, data)
        + _flag_section(rep, enc, flag, anti)
        + controlled_group_action(rep, enc, data, inverse=True)
        + control_unprep(enc)
        + [Measure((flag,))]
    )
    return Circuit(layout, tuple(body), (data,), {"builder": "uncompute", "anti": anti})


def _same_rep(a: UnitaryRep, b: UnitaryRep) -> bool:
    if not a.group.same_as(b.group) or a.data_layout.dims != b.data_layout.dims:
        return False
    return all(np.allclose(a[g].matrix, b[g].matrix, atol=NORM_TOL) for g in a.group)


def build_concatenation(
    rep_g: UnitaryRep,
    rep_h: UnitaryRep,
    *,
    enc_g: ControlEncoding | None = None,
    enc_h: ControlEncoding | None = None,
    anti_g: bool = False,
    anti_h: bool = False,
    shared_control: bool = False,
    flags: tuple[str, str] = ("flag_G", "flag_H"),
    unprepare: bool = True,
) -> Circuit:
    """Two projectors in sequence with one flag each.

    Outcome ``(f_G, f_H)`` carries the branch Pi_H^{f_H} Pi_G^{f_G} psi, where
    exponent 0 stands for the complement.  With ``shared_control`` both flags
    read the same control register and the middle inverse/forward controlled
    actions are omitted, which needs identical representations.
    """
    if rep_g.data_layout.dims != rep_h.data_layout.dims:
        raise LayoutError("the two representations act on different data dimensions")
    enc_g = enc_g or _default_encoding(rep_g)
    flag_g, flag_h = flags
    data = _data_names(rep_g)
    if shared_control:
        if not _same_rep(rep_g, rep_h):
            raise GroupError("a shared control register needs the same representation twice")
        enc = enc_g
        if (anti_g or anti_h) and not enc.require_parity:
            raise ParityError("antisymmetric projection needs a parity-respecting encoding")
        layout = RegisterLayout.qubits([flag_g, flag_h]) + enc.control_layout + rep_g.data_layout
        body = (
            control_prep(enc)
            + controlled_group_action(rep_g, enc, data)
            + _shared_flag(enc, flag_g, anti_g)
            + _shared_flag(enc, flag_h, anti_h)
            + controlled_group_action(rep_g, enc, data, inverse=True)
        )
        if unprepare:
            body += control_unprep(enc)
        body.append(Measure((flag_g, flag_h)))
        return Circuit(layout, tuple(body), (data,), {"builder": "concatenation", "shared": True})

    enc_h = enc_h or _default_encoding(rep_h, prefix="h")
    if set(enc_g.control_layout.names) & set(enc_h.control_layout.names):
        raise LayoutError("separate control registers need distinct names")
    for enc, anti in ((enc_g, anti_g), (enc_h, anti_h)):
        if anti and not enc.require_parity:
            raise ParityError("antisymmetric projection needs a parity-respecting encoding")
    layout = RegisterLayout.qubits([flag_g, flag_h]) + enc_g.control_layout + enc_h.control_layout + rep_g.data_layout
    body: list[Gate] = []
    for rep, enc, flag, anti in ((rep_g, enc_g, flag_g, anti_g), (rep_h, enc_h, flag_h, anti_h)):
        # rep_h may name its data registers differently; act on the shared data wires
        rep_on_data = _rebind(rep, data)
        body += (
            control_prep(enc)
            + controlled_group_action(rep_on_data, enc, data)
            + _flag_section(rep_on_data, enc, flag, anti)
            + controlled_group_action(rep_on_data, enc, data, inverse=True)
            + control_unprep(enc)
        )
    body.append(Measure((flag_g, flag_h)))
    return Circuit(layout, tuple(body), (data,), {"builder": "concatenation", "shared": False})


def _shared_flag(enc: ControlEncoding, flag: str, anti: bool) -> list[Gate]:
    state = minus_state(enc) if anti else plus_state(enc)
    return [ControlledOnState(enc.control_layout.names, state.amplitudes, flag, "COS-" if anti else "COS+")]


def _rebind(rep: UnitaryRep, names: Sequence[str]) -> UnitaryRep:
    if rep.data_layout.names == tuple(names):
        return rep
    layout = RegisterLayout(tuple(zip(names, rep.data_layout.dims)))
    return UnitaryRep(rep.group, layout, rep.matrices, rep.kind)


def _default_encoding(rep: UnitaryRep, prefix: str = "c") -> ControlEncoding:
    k = rep.group.degree
    if rep.group.order == math.factorial(k) and k >= 2:
        return barenco_encoding(k, prefix=prefix)
    return parity_encoding(rep.group, prefix=prefix + "g")


def build_sym_anti_concat(rep: UnitaryRep, enc: ControlEncoding | None = None, unprepare: bool = True) -> Circuit:
    """Symmetric then antisymmetric projection on a shared control; outcomes keyed (sym flag, anti flag)."""
    enc = enc or _default_encoding(rep)
    if not enc.require_parity:
        raise ParityError("antisymmetric projection needs a parity-respecting encoding")
    return build_concatenation(
        rep, rep, enc_g=enc, anti_h=True, shared_control=True, flags=(SYM_FLAG, ANTI_FLAG), unprepare=unprepare
    )


# two-copy estimators ---------------------------------------------------------------


def _system_layout(op: Operator, system: RegisterLayout | None) -> RegisterLayout:
    if system is None:
        system = RegisterLayout(tuple((f"S{i}", d) for i, d in enumerate(op.dims)))
    if system.dim != op.dim:
        raise LayoutError(f"system layout dimension {system.dim} does not match operator {op.dim}")
    return system


def _two_copy_layout(
    controls: RegisterLayout, system: RegisterLayout, reference: RegisterLayout | None
) -> tuple[RegisterLayout, list[tuple[str, ...]], list[tuple[str, ...]]]:
    full = system + reference if reference is not None else system
    copies = [full.suffixed(f"_{m}") for m in (1, 2)]
    sys_names = [tuple(n + f"_{m}" for n in system.names) for m in (1, 2)]
    layout = controls + copies[0] + copies[1]
    return layout, [c.names for c in copies], sys_names


def _sys_ops(u: Operator, system: RegisterLayout) -> Operator:
    return Operator(u.matrix, system.dims)


def build_diff_proj(
    u: Operator, system: RegisterLayout | None = None, reference: RegisterLayout | None = None
) -> Circuit:
    """Two-copy circuit whose (C3, C2, C1) statistics expose Tr{P_b rho P_c rho} for P = (I+U)/2."""
    if not u.is_unitary():
        raise InvalidUnitaryError("U must be unitary")
    if np.max(np.abs(u.matrix @ u.matrix - np.eye(u.dim))) > NORM_TOL:
        raise InvalidUnitaryError("U must square to the identity")
    system = _system_layout(u, system)
    controls = RegisterLayout.qubits(["C3", "C2", "C1"])
    layout, copies, sys_names = _two_copy_layout(controls, system, reference)
    uop = _sys_ops(u, system)
    h = gate_lib.H
    body: list[Gate] = [_qubit_gate(c, h, "H") for c in ("C1", "C2", "C3")]
    body += [
        ControlledUnitary(("C1",), sys_names[0], uop, frozenset({(1,)}), label="CU"),
        ControlledUnitary(("C2",), sys_names[1], uop, frozenset({(1,)}), label="CU"),
    ]
    body += [_qubit_gate(c, gate_lib.Z, "Z") for c in ("C1", "C2")]
    body += [_qubit_gate(c, h, "H") for c in ("C1", "C2")]
    body += _copy_swaps(system, sys_names, layout)
    body.append(ControlledUnitary(("C3",), ("C1", "C2"), _op(gate_lib.swap_matrix(2), (2, 2)), frozenset({(1,)}), label="CSWAP"))
    body += [_qubit_gate("C3", h, "H"), Measure(("C3", "C2", "C1"))]
    return Circuit(layout, tuple(body), tuple(copies), {"builder": "diff-proj"})


def _copy_swaps(system: RegisterLayout, sys_names: list[tuple[str, ...]], layout: RegisterLayout) -> list[Gate]:
    out: list[Gate] = []
    for a, b in zip(*sys_names):
        d = layout.dim_of(a)
        out.append(ControlledUnitary(("C3",), (a, b), _op(gate_lib.swap_matrix(d), (d, d)), frozenset({(1,)}), label="CSWAP"))
    return out


def build_res_identity(
    u: Operator, r: int, system: RegisterLayout | None = None, reference: RegisterLayout | None = None
) -> Circuit:
    """Two-copy circuit with r-level controls; (C3, C2, C1) = (x, a, b) exposes Tr{P_(a-1) rho P_(b-1) rho}."""
    spectral_projectors(u, r)
    system = _system_layout(u, system)
    controls = RegisterLayout((("C3", 2), ("C2", r), ("C1", r)))
    layout, copies, sys_names = _two_copy_layout(controls, system, reference)
    uop = _sys_ops(u, system)
    qft = _op(gate_lib.qft_matrix(r), (r,))
    clock = _op(gate_lib.clock_matrix(r), (r,))
    body: list[Gate] = [_qubit_gate("C3", gate_lib.H, "H")]
    body += [Unitary((c,), qft, "QFT") for c in ("C2", "C1")]
    for ctrl, target in (("C1", sys_names[0]), ("C2", sys_names[1])):
        for a in range(1, r):
            body.append(ControlledUnitary((ctrl,), target, uop.power(a), frozenset({(a,)}), label="CU^a"))
    body += [Unitary((c,), clock, "Ztilde") for c in ("C2", "C1")]
    body += [Unitary((c,), qft.dagger, "IQFT") for c in ("C2", "C1")]
    body += _copy_swaps(system, sys_names, layout)
    body.append(ControlledUnitary(("C3",), ("C2", "C1"), _op(gate_lib.swap_matrix(r), (r, r)), frozenset({(1,)}), label="CSWAP"))
    body += [_qubit_gate("C3", gate_lib.H, "H"), Measure(("C3", "C2", "C1"))]
    return Circuit(layout, tuple(body), tuple(copies), {"builder": "res-identity", "r": r})


def build_werner_test(half_dim: int, reference: RegisterLayout | None = None) -> Circuit:
    """Two-copy estimator of ||Re(Pi_S rho Pi_A)||^2 for a pair of half_dim-level halves."""
    if half_dim < 2:
        raise LayoutError("half_dim must be at least 2")
    swap = _op(gate_lib.swap_matrix(half_dim), (half_dim, half_dim))
    system = RegisterLayout((("A", half_dim), ("B", half_dim)))
    c = build_diff_proj(swap, system, reference)
    return Circuit(c.layout, c.gates, c.copies, {"builder": "werner", "half_dim": half_dim})


def werner_value(dist: OutcomeDistribution) -> float:
    """Exact counterpart of the shot estimator: (p001 + p010 - p101 - p110) / 4."""
    return (dist["001"] + dist["010"] - dist["101"] - dist["110"]) / 4


# Schmidt rank ----------------------------------------------------------------------


def schmidt_names(side: str, copy: int, qubit: int) -> str:
    return f"{side}{copy}_q{qubit}"


def build_schmidt_test(n_r: int, n_s: int, r: int) -> tuple[Circuit, ResourceCount]:
    """Antisymmetry tests on r+1 copies of each side, swapping registers qubit by qubit.

    Copy ``m`` of the input occupies ``R{m}_q1..`` followed by ``S{m}_q1..``.
    Control preparation uses the elementary A_j cascade so two-qubit gates can
    be counted.  All-zeros on both control registers flags the
    antisymmetric component.  A side may have zero qubits, in which case
    only its control register is built.
    """
    if n_r < 0 or n_s < 0 or n_r + n_s < 1 or r < 1:
        raise LayoutError("need a nonempty input and r >= 1")
    k = r + 1
    enc_r = barenco_encoding(k, prefix="cR")
    enc_s = barenco_encoding(k, prefix="cS")
    data_names = []
    copies = []
    for m in range(1, k + 1):
        rs = [schmidt_names("R", m, q) for q in range(1, n_r + 1)]
        ss = [schmidt_names("S", m, q) for q in range(1, n_s + 1)]
        copies.append(tuple(rs + ss))
        data_names.extend(rs + ss)
    layout = enc_r.control_layout + enc_s.control_layout + RegisterLayout.qubits(data_names)
    swap = _op(gate_lib.swap_matrix(2), (2, 2))
    body: list[Gate] = []
    for enc, side, n in ((enc_r, "R", n_r), (enc_s, "S", n_s)):
        body += control_prep(enc, elementary=True)
        for j, i, name in sorted(enc.transposition_wires, key=lambda w: (w[0], w[1])):
            for q in range(1, n + 1):
                body.append(
                    ControlledUnitary(
                        (name,),
                        (schmidt_names(side, i, q), schmidt_names(side, j, q)),
                        swap,
                        frozenset({(1,)}),
                        label="CSWAP",
                    )
                )
        body += sign_layer(enc)
        body += control_unprep(enc, elementary=True)
    body.append(Measure(enc_r.control_layout.names + enc_s.control_layout.names))
    circuit = Circuit(layout, tuple(body), tuple(copies), {"builder": "schmidt", "r": r, "n_r": n_r, "n_s": n_s})
    return circuit, resource_count(circuit)


def resource_count(c: Circuit) -> ResourceCount:
    """Count qubits, two-qubit gates and controlled swaps directly from the gate list."""
    qubits = 0
    for _, d in c.layout:
        if d & (d - 1):
            raise LayoutError("resource counts are defined for qubit registers only")
        qubits += d.bit_length() - 1
    two = 0
    cswaps = 0
    for g in c.unitary_gates:
        if g.label.rstrip("†") == "CSWAP":
            cswaps += 1
        elif len(g.wires) == 2 and all(c.layout.dim_of(w) == 2 for w in g.wires):
            two += 1
    return ResourceCount(qubits, two, cswaps)


def table_resource_formula(n: int, r: int) -> ResourceCount:
    """Closed-form resource table for an n-qubit input and rank bound r."""
    return ResourceCount((r + 1) * (n + r), 4 * r * (r - 1), n * r * (r + 1))


def schmidt_zero_probability(psi: ComplexTensorState, cut: Sequence[str], r: int) -> float:
    """Simulate the Schmidt test on ``psi`` split into ``cut`` (R side) and the rest (S side)."""
    side = list(cut)
    rest = [n for n in psi.layout.names if n not in side]
    for n in side:
        psi.layout.index(n)
    ordered = psi.reorder(side + rest)
    n_r = int(round(math.log2(ordered.layout.select(side).dim)))
    n_s = int(round(math.log2(ordered.layout.select(rest).dim)))
    if 2**n_r != ordered.layout.select(side).dim or 2**n_s != ordered.layout.select(rest).dim:
        raise LayoutError("Schmidt circuit needs qubit-dimension sides")
    circuit, _ = build_schmidt_test(n_r, n_s, r)
    qubit_layout = RegisterLayout.qubits(circuit.copies[0])
    return acceptance(circuit, ComplexTensorState(qubit_layout, ordered.amplitudes))


# commutators -----------------------------------------------------------------------


def build_commutator(
    a: Operator,
    b: Operator,
    nested: bool = False,
    system: RegisterLayout | None = None,
    reference: RegisterLayout | None = None,
) -> Circuit:
    """Control qubit C reads 0 with probability 1/4 ||[A,B] psi||^2, or the conjugation form when nested."""
    if a.dim != b.dim:
        raise LayoutError("A and B act on different dimensions")
    if not b.is_unitary():
        raise InvalidUnitaryError("B must be unitary")
    if nested:
        if not a.is_hermitian():
            raise InvalidGeneratorError("nested mode needs a Hermitian generator A")
    elif not a.is_unitary():
        raise InvalidUnitaryError("A must be unitary")
    system = _system_layout(a, system)
    full = system + reference if reference is not None else system
    layout = RegisterLayout.qubits(["C"]) + full
    targets = system.names
    aop, bop = _sys_ops(a, system), _sys_ops(b, system)
    zero, one = frozenset({(0,)}), frozenset({(1,)})
    body: list[Gate] = [_qubit_gate("C", gate_lib.H, "H"), _qubit_gate("C", gate_lib.Z, "Z")]
    if nested:
        v = Operator(hermitian_exp(a.matrix), system.dims)
        body += [
            ControlledUnitary(("C",), targets, v.dagger, zero, label="CV†"),
            ControlledUnitary(("C",), targets, bop, zero, label="CB"),
            ControlledUnitary(("C",), targets, v, zero, label="CV"),
            ControlledUnitary(("C",), targets, bop, one, label="CB"),
        ]
    else:
        body += [
            ControlledUnitary(("C",), targets, bop, zero, label="CB"),
            ControlledUnitary(("C",), targets, aop, one, label="CA"),
            ControlledUnitary(("C",), targets, aop, zero, label="CA"),
            ControlledUnitary(("C",), targets, bop, one, label="CB"),
        ]
    body += [_qubit_gate("C", gate_lib.H, "H"), Measure(("C",))]
    return Circuit(layout, tuple(body), (full.names,), {"builder": "commutator", "nested": nested})


def commutator_zero_probability(c: Circuit, psi: ComplexTensorState) -> float:
    return measure_distribution(c, psi)["0"]


def maximally_entangled(dim: int, system: RegisterLayout, reference_name: str = "Ref") -> ComplexTensorState:
    """|Phi+> between ``system`` and a reference register, ordered (system, reference)."""
    amps = np.eye(dim, dtype=complex).reshape(-1) / math.sqrt(dim)
    return ComplexTensorState(system + RegisterLayout(((reference_name, dim),)), amps)


def commutator_norm_summaries(a: Operator, b: Operator) -> tuple[float, float]:
    """Circuit values of the maximally-mixed and worst-case commutator probabilities.

    The mixed input is a maximally entangled state with a reference register;
    the worst case feeds the top right-singular vector of [A, B].
    """
    if a.dim != b.dim:
        raise LayoutError("A and B act on different dimensions")
    d = a.dim
    system = RegisterLayout(tuple((f"S{i}", dd) for i, dd in enumerate(a.dims)))
    ref = RegisterLayout((("Ref", d),))
    mixed_circuit = build_commutator(a, b, system=system, reference=ref)
    frob = commutator_zero_probability(mixed_circuit, maximally_entangled(d, system))
    comm = a.matrix @ b.matrix - b.matrix @ a.matrix
    _, _, vh = np.linalg.svd(comm)
    top = ComplexTensorState(system, vh[0].conj())
    spec = commutator_zero_probability(build_commutator(a, b, system=system), top)
    return frob, spec


__all__ = [
    "ResourceCount",
    "acceptance",
    "build_antisym_test",
    "build_commutator",
    "build_concatenation",
    "build_diff_proj",
    "build_gbose_test",
    "build_projector_uncompute",
    "build_res_identity",
    "build_schmidt_test",
    "build_sk_sym_test",
    "build_sym_anti_concat",
    "build_werner_test",
    "commutator_norm_summaries",
    "commutator_zero_probability",
    "control_prep",
    "control_unprep",
    "controlled_group_action",
    "maximally_entangled",
    "resource_count",
    "schmidt_zero_probability",
    "sign_layer",
    "simulate",
    "table_resource_formula",
    "werner_value",
]
