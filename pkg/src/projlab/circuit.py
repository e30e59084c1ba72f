"""Circuit IR over named mixed-dimension registers, exact simulation and shot sampling."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence, Union

import numpy as np

from . import gates as gate_lib
from .errors import InvalidProjectorError, LayoutError
from .tensor import (
    NORM_TOL,
    ComplexTensorState,
    Operator,
    RegisterLayout,
    _check_operator_dim,
    householder_completion,
    place,
)

SHOT_BLOCK = 100_000


def _names(x: str | Iterable[str]) -> tuple[str, ...]:
    return (x,) if isinstance(x, str) else tuple(x)


def _frozen(m: np.ndarray) -> np.ndarray:
    a = np.array(m, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Unitary:
    targets: tuple[str, ...]
    op: Operator
    label: str = "U"

    def __post_init__(self) -> None:
        object.__setattr__(self, "targets", _names(self.targets))

    @property
    def wires(self) -> tuple[str, ...]:
        return self.targets

    def dagger(self) -> Unitary:
        return Unitary(self.targets, self.op.dagger, _dagger_label(self.label))


@dataclass(frozen=True, eq=False)
class Prepare:
    """Unitary on ``registers`` (jointly) that maps |0...0> to ``column``."""

    registers: tuple[str, ...]
    column: np.ndarray
    label: str = "P"

    def __post_init__(self) -> None:
        object.__setattr__(self, "registers", _names(self.registers))
        object.__setattr__(self, "column", _frozen(np.reshape(self.column, -1)))

    @property
    def wires(self) -> tuple[str, ...]:
        return self.registers

    def unitary(self, layout: RegisterLayout) -> Operator:
        dims = layout.select(self.registers).dims
        _check_operator_dim(len(self.column))
        return Operator(householder_completion(self.column), dims)

    def dagger(self) -> Unprepare:
        return Unprepare(self.registers, self.column, _dagger_label(self.label))


@dataclass(frozen=True, eq=False)
class Unprepare(Prepare):
    """Inverse of a :class:`Prepare` with the same column."""

    def unitary(self, layout: RegisterLayout) -> Operator:
        return super().unitary(layout).dagger

    def dagger(self) -> Prepare:
        return Prepare(self.registers, self.column, _dagger_label(self.label))


@dataclass(frozen=True, eq=False)
class ControlledUnitary:
    """Apply ``op`` to ``targets`` when the controls lie in ``values`` (basis digits) or in ``projector``'s range."""

    controls: tuple[str, ...]
    targets: tuple[str, ...]
    op: Operator
    values: frozenset[tuple[int, ...]] | None = None
    projector: np.ndarray | None = None
    label: str = "CU"

    def __post_init__(self) -> None:
        object.__setattr__(self, "controls", _names(self.controls))
        object.__setattr__(self, "targets", _names(self.targets))
        if (self.values is None) == (self.projector is None):
            raise LayoutError("give exactly one of values or projector")
        if self.values is not None:
            object.__setattr__(self, "values", frozenset(tuple(int(x) for x in v) for v in self.values))
        else:
            p = _frozen(self.projector)
            if np.max(np.abs(p - p.conj().T)) > NORM_TOL or np.max(np.abs(p @ p - p)) > NORM_TOL:
                raise InvalidProjectorError("control predicate is not a Hermitian idempotent")
            object.__setattr__(self, "projector", p)

    @property
    def wires(self) -> tuple[str, ...]:
        return self.controls + self.targets

    def dagger(self) -> ControlledUnitary:
        return ControlledUnitary(
            self.controls, self.targets, self.op.dagger, self.values, self.projector, _dagger_label(self.label)
        )


@dataclass(frozen=True, eq=False)
class ControlledOnState:
    """Flip a qubit target exactly when the controls are in the state ``state``."""

    controls: tuple[str, ...]
    state: np.ndarray
    target: str
    label: str = "COS"

    def __post_init__(self) -> None:
        object.__setattr__(self, "controls", _names(self.controls))
        v = np.reshape(np.asarray(self.state, dtype=complex), -1)
        if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
            raise LayoutError("control state must have unit norm")
        object.__setattr__(self, "state", _frozen(v))

    @property
    def wires(self) -> tuple[str, ...]:
        return self.controls + (self.target,)

    def as_controlled(self) -> ControlledUnitary:
        return ControlledUnitary(
            self.controls,
            (self.target,),
            Operator(gate_lib.X, (2,)),
            projector=np.outer(self.state, self.state.conj()),
            label=self.label,
        )

    def lower(self) -> list[Gate]:
        """Unprepare the control state, flip on all-zeros, prepare again."""
        zeros = frozenset({(0,) * len(self.controls)})
        return [
            Unprepare(self.controls, self.state, f"{self.label}:unprep"),
            ControlledUnitary(self.controls, (self.target,), Operator(gate_lib.X, (2,)), zeros, label=f"{self.label}:flip"),
            Prepare(self.controls, self.state, f"{self.label}:prep"),
        ]

    def dagger(self) -> ControlledOnState:
        return self


@dataclass(frozen=True, eq=False)
class Measure:
    registers: tuple[str, ...]
    label: str = "M"

    def __post_init__(self) -> None:
        object.__setattr__(self, "registers", _names(self.registers))

    @property
    def wires(self) -> tuple[str, ...]:
        return self.registers


Gate = Union[Unitary, Prepare, ControlledUnitary, ControlledOnState, Measure]


def _dagger_label(label: str) -> str:
    return label[:-1] if label.endswith("†") else label + "†"


@dataclass(frozen=True, eq=False)
class Circuit:
    """Ordered gates on a layout.

    ``copies`` lists, for each copy of the input state, the registers it is
    loaded into (in the input's own register order); see :meth:`input_state`.
    """

    layout: RegisterLayout
    gates: tuple[Gate, ...]
    copies: tuple[tuple[str, ...], ...] = ()
    meta: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "copies", tuple(tuple(c) for c in self.copies))
        measured: set[str] = set()
        for g in self.gates:
            wires = g.wires
            if len(set(wires)) != len(wires):
                raise LayoutError(f"gate {g.label} repeats a wire: {wires}")
            for w in wires:
                self.layout.index(w)
                if w in measured:
                    raise LayoutError(f"register {w!r} used after its measurement")
            if isinstance(g, Measure):
                measured.update(g.registers)
            elif isinstance(g, (Unitary, ControlledUnitary)):
                dims = self.layout.select(g.targets).dims
                if dims != g.op.dims:
                    raise LayoutError(f"gate {g.label}: op dims {g.op.dims} vs targets {dims}")
            if isinstance(g, ControlledUnitary) and g.projector is not None:
                if g.projector.shape[0] != self.layout.select(g.controls).dim:
                    raise LayoutError("control projector dimension mismatch")
            if isinstance(g, ControlledOnState):
                if self.layout.dim_of(g.target) != 2:
                    raise LayoutError("controlled-on-state target must be a qubit")
                if self.layout.select(g.controls).dim != g.state.shape[0]:
                    raise LayoutError("control state dimension mismatch")
            if isinstance(g, Prepare) and self.layout.select(g.registers).dim != g.column.shape[0]:
                raise LayoutError("prepared column dimension mismatch")
        for copy in self.copies:
            for w in copy:
                self.layout.index(w)

    @property
    def measured(self) -> tuple[str, ...]:
        out: list[str] = []
        for g in self.gates:
            if isinstance(g, Measure):
                out.extend(g.registers)
        return tuple(out)

    @property
    def unitary_gates(self) -> tuple[Gate, ...]:
        return tuple(g for g in self.gates if not isinstance(g, Measure))

    def input_state(self, psi: ComplexTensorState) -> ComplexTensorState:
        """Load a copy of ``psi`` into each declared copy; everything else starts in |0>."""
        if not self.copies:
            raise LayoutError("circuit declares no input copies")
        parts = []
        for copy in self.copies:
            if len(copy) != len(psi.layout):
                raise LayoutError(f"input has {len(psi.layout)} registers, copy expects {len(copy)}")
            sub = self.layout.select(copy)
            if sub.dims != psi.layout.dims:
                raise LayoutError(f"input dims {psi.layout.dims} do not match copy dims {sub.dims}")
            parts.append(ComplexTensorState(sub, psi.amplitudes, psi.normalized))
        return place(self.layout, parts)

    def with_gates(self, gates: Iterable[Gate]) -> Circuit:
        return Circuit(self.layout, tuple(gates), self.copies, dict(self.meta))

    def lowered(self) -> Circuit:
        """Replace every controlled-on-state gate by its unprepare / flip / prepare form."""
        out: list[Gate] = []
        for g in self.gates:
            out.extend(g.lower() if isinstance(g, ControlledOnState) else [g])
        return self.with_gates(out)

    def count(self, label: str) -> int:
        return sum(1 for g in self.gates if g.label == label)


# simulation ------------------------------------------------------------------


def _grouped(psi: np.ndarray, axes_front: Sequence[int]) -> tuple[np.ndarray, list[int]]:
    rest = [i for i in range(psi.ndim) if i not in axes_front]
    order = list(axes_front) + rest
    return np.transpose(psi, order), order


def _ungroup(t: np.ndarray, order: Sequence[int]) -> np.ndarray:
    return np.transpose(t, np.argsort(order))


def _apply_gate(g: Gate, psi: np.ndarray, layout: RegisterLayout) -> np.ndarray:
    dims = layout.dims
    if isinstance(g, Measure):
        return psi
    if isinstance(g, ControlledOnState):
        return _apply_controlled_on_state(g, psi, layout)
    if isinstance(g, Prepare):
        op = g.unitary(layout)
        targets: tuple[str, ...] = g.registers
        controls: tuple[str, ...] = ()
    elif isinstance(g, Unitary):
        op, targets, controls = g.op, g.targets, ()
    else:
        op, targets, controls = g.op, g.targets, g.controls
    c_axes = [layout.index(n) for n in controls]
    t_axes = [layout.index(n) for n in targets]
    dc = int(np.prod([dims[a] for a in c_axes])) if c_axes else 1
    dt = int(np.prod([dims[a] for a in t_axes]))
    t, order = _grouped(psi, c_axes + t_axes)
    shape = t.shape
    flat = t.reshape(dc, dt, -1)
    if not controls:
        out = np.einsum("tu,cur->ctr", op.matrix, flat)
    elif g.values is not None:
        out = flat.copy()
        cdims = [dims[a] for a in c_axes]
        for v in g.values:
            ci = int(np.ravel_multi_index(v, cdims))
            out[ci] = op.matrix @ flat[ci]
    else:
        delta = np.einsum("tu,cur->ctr", op.matrix - np.eye(dt), flat)
        out = flat + np.einsum("ab,btr->atr", g.projector, delta)
    return _ungroup(out.reshape(shape), order)


def _apply_controlled_on_state(g: ControlledOnState, psi: np.ndarray, layout: RegisterLayout) -> np.ndarray:
    # rank-1 predicate: psi + |v><v| (X - I) psi, without forming |v><v|
    c_axes = [layout.index(n) for n in g.controls]
    t, order = _grouped(psi, c_axes + [layout.index(g.target)])
    shape = t.shape
    flat = t.reshape(len(g.state), 2, -1)
    delta = flat[:, ::-1, :] - flat
    overlap = np.einsum("c,ctr->tr", g.state.conj(), delta)
    out = flat + np.einsum("c,tr->ctr", g.state, overlap)
    return _ungroup(out.reshape(shape), order)


def simulate(c: Circuit, state: ComplexTensorState) -> ComplexTensorState:
    """Run every non-measurement gate.  ``state`` is either on the full layout or one input copy."""
    if state.layout.names != c.layout.names:
        state = c.input_state(state)
    if state.layout.dims != c.layout.dims:
        raise LayoutError("input state dims do not match circuit layout")
    psi = state.tensor_view().copy()
    for g in c.gates:
        psi = _apply_gate(g, psi, c.layout)
    amps = psi.reshape(-1)
    normal = state.normalized and abs(np.linalg.norm(amps) - 1.0) <= NORM_TOL
    return ComplexTensorState(c.layout, amps, normal)


def outcome_key(digits: Sequence[int], dims: Sequence[int]) -> str:
    if any(d > 10 for d in dims):
        return ",".join(str(x) for x in digits)
    return "".join(str(x) for x in digits)


def parse_key(key: str, n: int) -> tuple[int, ...]:
    parts = key.split(",") if "," in key else list(key)
    if len(parts) != n:
        raise LayoutError(f"outcome key {key!r} does not have {n} digits")
    return tuple(int(p) for p in parts)


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    registers: tuple[str, ...]
    dims: tuple[int, ...]
    entries: Mapping[str, float]
    post_states: Mapping[str, ComplexTensorState] | None = None

    def __post_init__(self) -> None:
        entries = {k: float(v) for k, v in self.entries.items()}
        for k, v in entries.items():
            parse_key(k, len(self.registers))
            if v < -1e-12:
                raise LayoutError(f"negative probability {v} for outcome {k}")
        total = sum(entries.values())
        if abs(total - 1.0) > NORM_TOL:
            raise LayoutError(f"probabilities sum to {total}")
        object.__setattr__(self, "entries", entries)

    def __getitem__(self, key: str | Sequence[int]) -> float:
        if not isinstance(key, str):
            key = outcome_key(key, self.dims)
        return self.entries.get(key, 0.0)

    def marginal(self, registers: str | Sequence[str]) -> OutcomeDistribution:
        keep = _names(registers)
        idx = [self.registers.index(r) for r in keep]
        dims = tuple(self.dims[i] for i in idx)
        out: dict[str, float] = {}
        for k, v in self.entries.items():
            digits = parse_key(k, len(self.registers))
            nk = outcome_key([digits[i] for i in idx], dims)
            out[nk] = out.get(nk, 0.0) + v
        return OutcomeDistribution(keep, dims, out)

    def to_json(self) -> dict[str, Any]:
        return {"registers": list(self.registers), "dims": list(self.dims), "probabilities": dict(self.entries)}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> OutcomeDistribution:
        return cls(tuple(data["registers"]), tuple(data["dims"]), dict(data["probabilities"]))


def measure_distribution(
    c: Circuit, state: ComplexTensorState, *, post_states: bool = False, registers: Sequence[str] | None = None
) -> OutcomeDistribution:
    """Exact Born-rule law of the measured registers (or ``registers`` if given)."""
    final = simulate(c, state)
    regs = tuple(registers) if registers is not None else c.measured
    if not regs:
        raise LayoutError("circuit has no measured registers")
    axes = [c.layout.index(r) for r in regs]
    dims = tuple(c.layout.dims[a] for a in axes)
    t, order = _grouped(final.tensor_view(), axes)
    flat = t.reshape(int(np.prod(dims)), -1)
    probs = np.sum(np.abs(flat) ** 2, axis=1)
    entries = {}
    posts: dict[str, ComplexTensorState] = {}
    for i, p in enumerate(probs):
        digits = np.unravel_index(i, dims)
        key = outcome_key(digits, dims)
        entries[key] = float(p)
        if post_states and p > 1e-14:
            proj = np.zeros_like(flat)
            proj[i] = flat[i]
            amps = _ungroup(proj.reshape(t.shape), order).reshape(-1)
            posts[key] = ComplexTensorState(c.layout, amps / np.sqrt(p))
    return OutcomeDistribution(regs, dims, entries, posts if post_states else None)


@dataclass(frozen=True, eq=False)
class ShotTally:
    registers: tuple[str, ...]
    shots: int
    counts: Mapping[str, int]
    seed: int | None

    def __post_init__(self) -> None:
        counts = {k: int(v) for k, v in self.counts.items() if v}
        if sum(counts.values()) != self.shots:
            raise LayoutError("counts do not add up to the number of shots")
        object.__setattr__(self, "counts", counts)

    def frequency(self, key: str) -> float:
        return self.counts.get(key, 0) / self.shots

    def to_json(self) -> dict[str, Any]:
        return {"registers": list(self.registers), "shots": self.shots, "seed": self.seed, "counts": dict(self.counts)}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> ShotTally:
        return cls(tuple(data["registers"]), int(data["shots"]), dict(data["counts"]), data.get("seed"))


def sample(dist: OutcomeDistribution, shots: int, seed: int | None = 0) -> ShotTally:
    """Multinomial draw using one Philox sub-stream per block of ``SHOT_BLOCK`` shots."""
    if shots < 1:
        raise ValueError("shots must be at least 1")
    keys = sorted(dist.entries)
    p = np.clip(np.array([dist.entries[k] for k in keys]), 0.0, None)
    p = p / p.sum()
    n_blocks = -(-shots // SHOT_BLOCK)
    streams = np.random.SeedSequence(seed).spawn(n_blocks)
    total = np.zeros(len(keys), dtype=np.int64)
    for b, ss in enumerate(streams):
        n = min(SHOT_BLOCK, shots - b * SHOT_BLOCK)
        rng = np.random.Generator(np.random.Philox(ss))
        total += rng.multinomial(n, p)
    return ShotTally(dist.registers, shots, dict(zip(keys, total.tolist())), seed)


# JSON ------------------------------------------------------------------------


def _matrix_to_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.atleast_2d(m)]


def _vector_to_json(v: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in v]


def _matrix_from_json(data: list) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in data], dtype=complex)


def _vector_from_json(data: list) -> np.ndarray:
    return np.array([complex(re, im) for re, im in data], dtype=complex)


def _op_to_json(op: Operator, name: str | None) -> dict:
    if name is not None:
        return {"name": name, "dims": list(op.dims)}
    return {"matrix": _matrix_to_json(op.matrix), "dims": list(op.dims)}


def _named_op(op: Operator) -> str | None:
    for name in ("I", "X", "Y", "Z", "H", "S", "T", "CNOT"):
        ref = gate_lib.named(name)
        if ref.dims == op.dims and np.array_equal(ref.matrix, op.matrix):
            return name
    if len(op.dims) == 2 and op.dims[0] == op.dims[1]:
        if np.array_equal(op.matrix, gate_lib.swap_matrix(op.dims[0])):
            return "SWAP"
    return None


def _op_from_json(data: Mapping) -> Operator:
    dims = tuple(data["dims"])
    if "name" in data:
        name = data["name"]
        if name == "SWAP":
            return gate_lib.named("SWAP", dims[0])
        if name in ("QFT", "IQFT", "CLOCK"):
            return gate_lib.named(name, dims[0])
        return gate_lib.named(name)
    return Operator(_matrix_from_json(data["matrix"]), dims)


def gate_to_json(g: Gate) -> dict:
    if isinstance(g, Measure):
        return {"type": "measure", "registers": list(g.registers), "label": g.label}
    if isinstance(g, Prepare):
        kind = "unprepare" if isinstance(g, Unprepare) else "prepare"
        return {"type": kind, "registers": list(g.registers), "column": _vector_to_json(g.column), "label": g.label}
    if isinstance(g, ControlledOnState):
        return {
            "type": "controlled_on_state",
            "controls": list(g.controls),
            "target": g.target,
            "state": _vector_to_json(g.state),
            "label": g.label,
        }
    if isinstance(g, Unitary):
        return {"type": "unitary", "targets": list(g.targets), "op": _op_to_json(g.op, _named_op(g.op)), "label": g.label}
    out = {
        "type": "controlled_unitary",
        "controls": list(g.controls),
        "targets": list(g.targets),
        "op": _op_to_json(g.op, _named_op(g.op)),
        "label": g.label,
    }
    if g.values is not None:
        out["values"] = sorted(list(v) for v in g.values)
    else:
        out["projector"] = _matrix_to_json(g.projector)
    return out


def gate_from_json(data: Mapping) -> Gate:
    kind = data["type"]
    label = data.get("label")
    kw = {"label": label} if label is not None else {}
    if kind == "measure":
        return Measure(tuple(data["registers"]), **kw)
    if kind == "prepare":
        return Prepare(tuple(data["registers"]), _vector_from_json(data["column"]), **kw)
    if kind == "unprepare":
        return Unprepare(tuple(data["registers"]), _vector_from_json(data["column"]), **kw)
    if kind == "controlled_on_state":
        return ControlledOnState(tuple(data["controls"]), _vector_from_json(data["state"]), data["target"], **kw)
    if kind == "unitary":
        return Unitary(tuple(data["targets"]), _op_from_json(data["op"]), **kw)
    if kind == "controlled_unitary":
        values = frozenset(tuple(v) for v in data["values"]) if "values" in data else None
        projector = _matrix_from_json(data["projector"]) if "projector" in data else None
        return ControlledUnitary(
            tuple(data["controls"]), tuple(data["targets"]), _op_from_json(data["op"]), values, projector, **kw
        )
    raise LayoutError(f"unknown gate type {kind!r}")


def circuit_to_json(c: Circuit) -> str:
    meta = {k: v for k, v in c.meta.items() if isinstance(v, (str, int, float, bool, list, dict, type(None)))}
    return json.dumps(
        {
            "layout": [[n, d] for n, d in c.layout],
            "copies": [list(cp) for cp in c.copies],
            "gates": [gate_to_json(g) for g in c.gates],
            "meta": meta,
        }
    )


def circuit_from_json(text: str) -> Circuit:
    data = json.loads(text)
    layout = RegisterLayout(tuple((n, int(d)) for n, d in data["layout"]))
    gates = tuple(gate_from_json(g) for g in data["gates"])
    return Circuit(layout, gates, tuple(tuple(c) for c in data.get("copies", [])), data.get("meta", {}))


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Dense matrix of the non-measurement gates, column by column (small circuits only)."""
    dim = c.layout.dim
    cols = []
    for i in range(dim):
        e = np.zeros(dim, dtype=complex)
        e[i] = 1.0
        cols.append(simulate(c, ComplexTensorState(c.layout, e)).amplitudes)
    return np.stack(cols, axis=1)
