"""Permutation groups, unitary representations and control-register encodings."""

from __future__ import annotations

import itertools
import json
import math
import re
from dataclasses import dataclass, field
from functools import cached_property, reduce
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import gates
from .errors import CapacityError, GroupError, LayoutError, ParityError
from .tensor import (
    NORM_TOL,
    ComplexTensorState,
    Operator,
    RegisterLayout,
    capacity,
    householder_completion,
)

MAX_LETTERS = 6


@dataclass(frozen=True, order=True)
class Permutation:
    """Bijection on {1..k} stored as its image list; ``p * q`` applies ``q`` first."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        imgs = tuple(int(i) for i in self.images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise GroupError(f"{imgs} is not a permutation of 1..{len(imgs)}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, k: int) -> Permutation:
        return cls(tuple(range(1, k + 1)))

    @classmethod
    def transposition(cls, k: int, i: int, j: int) -> Permutation:
        imgs = list(range(1, k + 1))
        imgs[i - 1], imgs[j - 1] = j, i
        return cls(tuple(imgs))

    @classmethod
    def from_cycles(cls, k: int, cycles: Iterable[Sequence[int]]) -> Permutation:
        imgs = list(range(1, k + 1))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                imgs[a - 1] = b
        return cls(tuple(imgs))

    @classmethod
    def parse(cls, text: str, k: int) -> Permutation:
        """Parse cycle notation such as ``"(1 2 3)(4 5)"``; ``"e"`` or ``"()"`` is the identity."""
        text = text.strip()
        if text in ("e", "()", ""):
            return cls.identity(k)
        groups = re.findall(r"\(([^()]*)\)", text)
        if not groups or re.sub(r"\([^()]*\)", "", text).strip():
            raise GroupError(f"cannot parse permutation {text!r}")
        cycles = [[int(x) for x in re.split(r"[\s,]+", g.strip()) if x] for g in groups]
        perm = cls.identity(k)
        for cyc in cycles:
            if any(not 1 <= x <= k for x in cyc) or len(set(cyc)) != len(cyc):
                raise GroupError(f"bad cycle {cyc} for k={k}")
            # cycles written left to right compose right to left
            perm = perm * cls.from_cycles(k, [cyc])
        return perm

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: Permutation) -> Permutation:
        if self.degree != other.degree:
            raise GroupError("composing permutations of different degree")
        return Permutation(tuple(self.images[q - 1] for q in other.images))

    def inverse(self) -> Permutation:
        inv = [0] * self.degree
        for i, img in enumerate(self.images, start=1):
            inv[img - 1] = i
        return Permutation(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for start in range(1, self.degree + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            nxt = self(start)
            while nxt != start:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = self(nxt)
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def sign(self) -> int:
        transpositions = sum(len(c) - 1 for c in self.cycles())
        return -1 if transpositions % 2 else 1

    @property
    def parity(self) -> int:
        return 0 if self.sign() == 1 else 1

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.degree + 1))

    def __str__(self) -> str:
        cyc = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) if cyc else "e"


def sign(p: Permutation) -> int:
    return p.sign()


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """Permutation group given by its full element list; the identity sits at ``identity_index``."""

    elements: tuple[Permutation, ...]
    identity_index: int = 0

    def __post_init__(self) -> None:
        elems = tuple(self.elements)
        if not elems:
            raise GroupError("a group needs at least the identity")
        k = elems[0].degree
        if any(e.degree != k for e in elems):
            raise GroupError("all elements must act on the same number of letters")
        members = set(elems)
        if len(members) != len(elems):
            raise GroupError("repeated group element")
        ident = Permutation.identity(k)
        if ident not in members:
            raise GroupError("identity missing")
        raw = {e.images for e in elems}
        for a in elems:
            if a.inverse() not in members:
                raise GroupError(f"inverse of {a} missing")
            ai = a.images
            for b in raw:
                if tuple(ai[q - 1] for q in b) not in raw:
                    raise GroupError(f"{a} * {Permutation(b)} is missing; set is not closed")
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "identity_index", elems.index(ident))

    @classmethod
    def generated_by(cls, generators: Iterable[Permutation]) -> FiniteGroup:
        gens = list(generators)
        if not gens:
            raise GroupError("need at least one generator")
        return cls(tuple(_closure(gens)))

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def degree(self) -> int:
        return self.elements[0].degree

    @property
    def identity(self) -> Permutation:
        return self.elements[self.identity_index]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, p: object) -> bool:
        return p in self._members

    @cached_property
    def _members(self) -> frozenset[Permutation]:
        return frozenset(self.elements)

    @cached_property
    def generators(self) -> tuple[Permutation, ...]:
        """A small generating set, found greedily."""
        gens: list[Permutation] = []
        span = {self.identity}
        for g in self.elements:
            if g in span:
                continue
            gens.append(g)
            span = set(_closure(gens))
            if len(span) == self.order:
                break
        return tuple(gens)

    def same_as(self, other: FiniteGroup) -> bool:
        return self._members == other._members


def _closure(gens: Sequence[Permutation]) -> list[Permutation]:
    ident = Permutation.identity(gens[0].degree)
    found = [ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = g * a
                if b not in seen:
                    seen.add(b)
                    found.append(b)
                    nxt.append(b)
        frontier = nxt
    return found


def symmetric_group(k: int) -> FiniteGroup:
    if not 1 <= k <= MAX_LETTERS:
        raise CapacityError(f"symmetric group on {k} letters is outside 1..{MAX_LETTERS}")
    perms = tuple(Permutation(tuple(p)) for p in itertools.permutations(range(1, k + 1)))
    return FiniteGroup(perms)


def cyclic_group(k: int) -> FiniteGroup:
    """Rotations of k letters, generated by (1 2 ... k)."""
    return FiniteGroup.generated_by([Permutation(tuple(list(range(2, k + 1)) + [1]))])


def permutation_operator(p: Permutation, d: int) -> np.ndarray:
    """Matrix moving the content of tensor slot j to slot p(j) on k registers of dimension d."""
    k = p.degree
    dim = d**k
    if dim > capacity():
        raise CapacityError(f"standard representation dimension {dim} exceeds capacity")
    # out axis p(j) takes in axis j, so np.transpose needs the inverse images
    axes = [i - 1 for i in p.inverse().images]
    basis = np.eye(dim, dtype=complex).reshape((d,) * k + (dim,))
    return np.transpose(basis, axes + [k]).reshape(dim, dim)


@dataclass(frozen=True, eq=False)
class UnitaryRep:
    """A unitary representation of a permutation group on ``data_layout``."""

    group: FiniteGroup
    data_layout: RegisterLayout
    matrices: Mapping[Permutation, Operator]
    kind: str = "custom"
    signs: Mapping[Permutation, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        mats = dict(self.matrices)
        if set(mats) != set(self.group.elements):
            raise GroupError("representation must assign a matrix to every group element")
        for g, op in mats.items():
            if op.dim != self.data_layout.dim:
                raise LayoutError(f"U({g}) has dimension {op.dim}, data layout {self.data_layout.dim}")
            if not op.is_unitary():
                raise GroupError(f"U({g}) is not unitary")
        # checking generators against every element proves the homomorphism for all pairs
        for s in self.group.generators:
            for h in self.group.elements:
                if np.max(np.abs(mats[s].matrix @ mats[h].matrix - mats[s * h].matrix)) > NORM_TOL:
                    raise GroupError(f"U({s})U({h}) != U({s * h})")
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "signs", {g: g.sign() for g in self.group.elements})

    def __getitem__(self, g: Permutation) -> Operator:
        return self.matrices[g]

    @property
    def dim(self) -> int:
        return self.data_layout.dim


def standard_rep(k: int, d: int, names: Sequence[str] | None = None, group: FiniteGroup | None = None) -> UnitaryRep:
    """Permutation of k registers of dimension d, optionally restricted to a subgroup."""
    if k < 1 or d < 2:
        raise GroupError(f"standard representation needs k >= 1 and d >= 2, got k={k}, d={d}")
    if d**k > capacity():
        raise CapacityError(f"d**k = {d**k} exceeds capacity {capacity()}")
    grp = group if group is not None else symmetric_group(k)
    if grp.degree != k:
        raise GroupError("group degree does not match k")
    names = list(names) if names is not None else [f"A{i}" for i in range(1, k + 1)]
    layout = RegisterLayout(tuple((n, d) for n in names))
    mats = {g: Operator(permutation_operator(g, d), (d,) * k) for g in grp}
    return UnitaryRep(grp, layout, mats, kind="standard")


def _s3_table() -> dict[str, np.ndarray]:
    hh = np.kron(gates.H, gates.H)
    sw = gates.swap_matrix(2)
    cx = gates.CNOT
    return {
        "e": np.eye(4, dtype=complex),
        "(1 2)": hh,
        "(2 3)": hh @ cx @ sw,
        "(1 3)": hh @ sw @ cx,
        "(1 2 3)": cx @ sw,
        "(1 3 2)": sw @ cx,
    }


def s3_two_qubit_rep(names: Sequence[str] = ("D1", "D2")) -> UnitaryRep:
    """Two-dimensional-irrep-carrying action of S3 on two qubits built from H, CNOT and SWAP."""
    layout = RegisterLayout.qubits(names)
    mats = {Permutation.parse(key, 3): Operator(m, (2, 2)) for key, m in _s3_table().items()}
    return UnitaryRep(symmetric_group(3), layout, mats, kind="table")


def _gate_product(spec: Sequence, n_qubits: int) -> np.ndarray:
    """Product of named gates on explicit wires, rightmost factor applied first."""
    total = np.eye(2**n_qubits, dtype=complex)
    for item in spec:
        name, wires = item["gate"], list(item.get("wires", []))
        op = gates.named(name)
        if len(wires) != len(op.dims):
            raise GroupError(f"gate {name} needs {len(op.dims)} wires, got {wires}")
        full = _embed(op.matrix, wires, n_qubits)
        total = total @ full
    return total


def _embed(matrix: np.ndarray, wires: Sequence[int], n: int) -> np.ndarray:
    k = len(wires)
    rest = [w for w in range(n) if w not in wires]
    order = list(wires) + rest
    big = np.kron(matrix, np.eye(2 ** (n - k)))
    t = big.reshape((2,) * (2 * n))
    inv = np.argsort(order)
    t = np.transpose(t, list(inv) + [n + i for i in inv])
    return t.reshape(2**n, 2**n)


def rep_from_spec(spec: Mapping | str | Path) -> UnitaryRep:
    """Build a representation from its JSON description.

    ``{"k": 3, "d": 2, "kind": "standard"}`` or
    ``{"k": 3, "qubits": 2, "kind": "table", "table": {"(1 2)": [{"gate": "H", "wires": [0]}, ...]}}``.
    Gate lists multiply left to right as written, so the last entry acts first.
    """
    if isinstance(spec, (str, Path)):
        spec = json.loads(Path(spec).read_text())
    kind = spec.get("kind", "standard")
    k = int(spec["k"])
    if kind == "standard":
        return standard_rep(k, int(spec.get("d", 2)))
    if kind != "table":
        raise GroupError(f"unknown representation kind {kind!r}")
    n = int(spec.get("qubits", 1))
    table = {Permutation.parse(key, k): _gate_product(val, n) for key, val in spec["table"].items()}
    ident = Permutation.identity(k)
    table.setdefault(ident, np.eye(2**n, dtype=complex))
    grp = FiniteGroup(tuple(sorted(table)))
    layout = RegisterLayout.qubits([f"D{i}" for i in range(1, n + 1)])
    return UnitaryRep(grp, layout, {g: Operator(m, (2,) * n) for g, m in table.items()}, kind="table")


@dataclass(frozen=True, eq=False)
class ControlEncoding:
    """Injective map from group elements to basis states of a control register."""

    group: FiniteGroup
    control_layout: RegisterLayout
    element_to_basis: Mapping[Permutation, tuple[int, ...]]
    kind: str = "custom"
    require_parity: bool = True
    # Barenco only: (block j, slot i, register name) per control qubit
    transposition_wires: tuple[tuple[int, int, str], ...] = ()

    def __post_init__(self) -> None:
        enc = {g: tuple(int(x) for x in v) for g, v in self.element_to_basis.items()}
        if set(enc) != set(self.group.elements):
            raise GroupError("encoding must cover every group element")
        if len(set(enc.values())) != len(enc):
            raise GroupError("encoding is not injective")
        for g, digits in enc.items():
            if len(digits) != len(self.control_layout):
                raise LayoutError(f"basis digits {digits} do not fit control layout")
            if any(not 0 <= x < d for x, d in zip(digits, self.control_layout.dims)):
                raise LayoutError(f"basis digits {digits} out of range")
        if any(enc[self.group.identity]):
            raise GroupError("identity must map to the all-zeros control state")
        if self.require_parity:
            for g, digits in enc.items():
                weight = sum(1 for x in digits if x)
                if weight % 2 != g.parity:
                    raise ParityError(f"{g} has parity {g.parity} but encodes to weight {weight}")
        object.__setattr__(self, "element_to_basis", enc)

    def index_of(self, g: Permutation) -> int:
        return int(np.ravel_multi_index(self.element_to_basis[g], self.control_layout.dims))

    @property
    def is_barenco(self) -> bool:
        return self.kind == "barenco"


def barenco_blocks(k: int, prefix: str = "c") -> list[tuple[int, list[str]]]:
    """Control qubit names per block j = k, k-1, ..., 2; qubit ``{prefix}{j}_{i}`` drives (i j)."""
    return [(j, [f"{prefix}{j}_{i}" for i in range(1, j)]) for j in range(k, 1, -1)]


def barenco_encoding(k: int, prefix: str = "c") -> ControlEncoding:
    if not 2 <= k <= MAX_LETTERS:
        raise CapacityError(f"Barenco encoding supports 2 <= k <= {MAX_LETTERS}, got {k}")
    blocks = barenco_blocks(k, prefix)
    names = [n for _, block in blocks for n in block]
    layout = RegisterLayout.qubits(names)
    wires = tuple((j, i, f"{prefix}{j}_{i}") for j, block in blocks for i in range(1, j))
    enc: dict[Permutation, tuple[int, ...]] = {}
    # each block contributes either nothing or one transposition (i j); gates act j = 2 first
    choices = [[None] + list(range(1, j)) for j, _ in blocks]
    for pick in itertools.product(*choices):
        digits: list[int] = []
        perm = Permutation.identity(k)
        for (j, block), i in zip(blocks, pick):
            digits.extend(1 if (i is not None and slot == i) else 0 for slot in range(1, j))
            if i is not None:
                perm = perm * Permutation.transposition(k, i, j)
        enc[perm] = tuple(digits)
    if len(enc) != math.factorial(k):
        raise GroupError("Barenco patterns did not produce every permutation")
    return ControlEncoding(symmetric_group(k), layout, enc, kind="barenco", transposition_wires=wires)


def parity_encoding(group: FiniteGroup, prefix: str = "g") -> ControlEncoding:
    """Smallest qubit register where even elements get even-weight and odd elements odd-weight states."""
    evens = [g for g in group if g.parity == 0]
    odds = [g for g in group if g.parity == 1]
    n = 1
    while 2 ** (n - 1) < max(len(evens), len(odds)):
        n += 1
    patterns = list(itertools.product((0, 1), repeat=n))
    even_pats = [p for p in patterns if sum(p) % 2 == 0]
    odd_pats = [p for p in patterns if sum(p) % 2 == 1]
    evens.sort(key=lambda g: (not g.is_identity(), g))
    enc = dict(zip(evens, even_pats))
    enc.update(zip(sorted(odds), odd_pats))
    layout = RegisterLayout.qubits([f"{prefix}{i}" for i in range(n)])
    return ControlEncoding(group, layout, enc, kind="parity")


def _superposition(enc: ControlEncoding, signed: bool) -> ComplexTensorState:
    amps = np.zeros(enc.control_layout.dim, dtype=complex)
    norm = 1.0 / math.sqrt(enc.group.order)
    for g in enc.group:
        amps[enc.index_of(g)] = norm * (g.sign() if signed else 1)
    return ComplexTensorState(enc.control_layout, amps)


def plus_state(enc: ControlEncoding) -> ComplexTensorState:
    return _superposition(enc, signed=False)


def minus_state(enc: ControlEncoding) -> ComplexTensorState:
    return _superposition(enc, signed=True)


def g_p(rep: UnitaryRep | FiniteGroup) -> float:
    """Mean sign over the group, which equals the overlap of the minus and plus control states."""
    grp = rep.group if isinstance(rep, UnitaryRep) else rep
    return sum(g.sign() for g in grp) / grp.order


def a_j_column(j: int) -> np.ndarray:
    if j < 2:
        raise GroupError(f"A_j needs j >= 2, got {j}")
    col = np.zeros(2 ** (j - 1), dtype=complex)
    col[0] = 1.0
    for i in range(1, j):
        col[2 ** (i - 1)] = 1.0
    return col / math.sqrt(j)


def a_j_unitary(j: int) -> Operator:
    """Uniform superposition of |0...0> and the j-1 one-hot states, completed by a Householder reflection."""
    return Operator(householder_completion(a_j_column(j)), (2,) * (j - 1))


@dataclass(frozen=True)
class CascadeStep:
    """One elementary gate of the A_j cascade: ``kind`` is ``ry``, ``cry`` or ``cnot``."""

    kind: str
    wires: tuple[int, ...]
    angle: float = 0.0

    @property
    def two_qubit(self) -> bool:
        return len(self.wires) == 2


def a_j_cascade(j: int) -> list[CascadeStep]:
    """Elementary preparation of the A_j column from |0...0>.

    Wires are positions inside the (j-1)-qubit block, numbered from the least
    significant qubit, so wire ``i`` carries the one-hot state |2**i>.  The
    cascade uses one single-qubit rotation and 2(j-2) two-qubit gates.
    """
    m = j - 1
    steps = [CascadeStep("ry", (0,), 2 * math.acos(math.sqrt(1.0 / j)))]
    for i in range(1, m):
        # weight left on wire i-1 is (j-i)/j; keep 1/(j-i) of it for |0..0>, pass the rest on
        theta = 2 * math.acos(math.sqrt(1.0 / (j - i)))
        steps.append(CascadeStep("cry", (i - 1, i), theta))
        steps.append(CascadeStep("cnot", (i, i - 1)))
    return steps


def cascade_matrix(j: int) -> np.ndarray:
    """Dense unitary of :func:`a_j_cascade` on the (j-1)-qubit block (most significant first)."""
    m = j - 1
    total = np.eye(2**m, dtype=complex)
    for step in a_j_cascade(j):
        pos = [m - 1 - w for w in step.wires]
        if step.kind == "ry":
            g = gates.ry(step.angle)
        elif step.kind == "cry":
            g = gates.controlled(gates.ry(step.angle))
        else:
            g = gates.CNOT
        total = _embed(g, pos, m) @ total
    return total


def compose(perms: Iterable[Permutation]) -> Permutation:
    return reduce(lambda a, b: a * b, perms)
