"""Dense complex linear algebra over tensor products of named, mixed-dimension registers.

Index convention: registers are ordered most-significant first, so digit ``i``
of a flat index addresses register ``i`` of the layout.  A state on a layout
``(("C", 2), ("S", 3))`` therefore has amplitude ``psi[c * 3 + s]``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import CapacityError, InvalidStateError, LayoutError

DEFAULT_CAPACITY = 2**14

NORM_TOL = 1e-10
SPECTRAL_TOL = 1e-9


def capacity() -> int:
    """Largest dense operator dimension; ``PROJLAB_CAPACITY`` overrides the default."""
    value = os.environ.get("PROJLAB_CAPACITY")
    if value is None:
        return DEFAULT_CAPACITY
    try:
        cap = int(value)
    except ValueError as exc:
        raise CapacityError(f"PROJLAB_CAPACITY must be an integer, got {value!r}") from exc
    if cap < 2:
        raise CapacityError("PROJLAB_CAPACITY must be at least 2")
    return cap


def state_capacity() -> int:
    # a statevector of length cap**2 costs the same memory as one cap x cap operator
    return capacity() ** 2


def _check_operator_dim(dim: int) -> None:
    if dim > capacity():
        raise CapacityError(f"operator dimension {dim} exceeds capacity {capacity()}")


def _check_state_dim(dim: int) -> None:
    if dim > state_capacity():
        raise CapacityError(f"state dimension {dim} exceeds capacity {state_capacity()}")


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered, uniquely named registers, each of dimension at least 2."""

    registers: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        regs = tuple((str(name), int(dim)) for name, dim in self.registers)
        object.__setattr__(self, "registers", regs)
        names = [name for name, _ in regs]
        if len(set(names)) != len(names):
            raise LayoutError(f"duplicate register names in {names}")
        for name, dim in regs:
            if dim < 2:
                raise LayoutError(f"register {name!r} has dimension {dim} < 2")

    @classmethod
    def of(cls, *registers: tuple[str, int]) -> RegisterLayout:
        return cls(tuple(registers))

    @classmethod
    def qubits(cls, names: Iterable[str]) -> RegisterLayout:
        return cls(tuple((name, 2) for name in names))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.registers)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(dim for _, dim in self.registers)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64)) if self.registers else 1

    def __len__(self) -> int:
        return len(self.registers)

    def __iter__(self) -> Iterator[tuple[str, int]]:
        return iter(self.registers)

    def __contains__(self, name: object) -> bool:
        return name in self.names

    def __add__(self, other: RegisterLayout) -> RegisterLayout:
        return RegisterLayout(self.registers + other.registers)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise LayoutError(f"unknown register {name!r}; layout has {self.names}") from None

    def dim_of(self, name: str) -> int:
        return self.registers[self.index(name)][1]

    def select(self, names: Iterable[str]) -> RegisterLayout:
        return RegisterLayout(tuple((name, self.dim_of(name)) for name in names))

    def without(self, names: Iterable[str]) -> RegisterLayout:
        drop = set(names)
        for name in drop:
            self.index(name)
        return RegisterLayout(tuple(reg for reg in self.registers if reg[0] not in drop))

    def rename(self, mapping: Mapping[str, str]) -> RegisterLayout:
        return RegisterLayout(tuple((mapping.get(name, name), dim) for name, dim in self.registers))

    def suffixed(self, suffix: str) -> RegisterLayout:
        return RegisterLayout(tuple((name + suffix, dim) for name, dim in self.registers))


def _as_names(targets: str | Iterable[str]) -> tuple[str, ...]:
    if isinstance(targets, str):
        return (targets,)
    return tuple(targets)


@dataclass(frozen=True, eq=False)
class Operator:
    """A square matrix acting on registers of the given dimensions.

    The operator carries only dimensions; register names are bound when it is
    applied, so the same SWAP can act on any pair of equal-dimension registers.
    """

    matrix: np.ndarray
    dims: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise LayoutError(f"operator matrix must be square, got shape {m.shape}")
        dims = tuple(int(d) for d in self.dims) or (m.shape[0],)
        if int(np.prod(dims)) != m.shape[0]:
            raise LayoutError(f"dims {dims} do not multiply to matrix size {m.shape[0]}")
        _check_operator_dim(m.shape[0])
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def dagger(self) -> Operator:
        return Operator(self.matrix.conj().T, self.dims)

    def __matmul__(self, other: Operator) -> Operator:
        if self.dims != other.dims:
            raise LayoutError(f"cannot multiply operators on {self.dims} and {other.dims}")
        return Operator(self.matrix @ other.matrix, self.dims)

    def power(self, n: int) -> Operator:
        return Operator(np.linalg.matrix_power(self.matrix, n), self.dims)

    def is_unitary(self, tol: float = NORM_TOL) -> bool:
        eye = np.eye(self.dim)
        return bool(np.max(np.abs(self.matrix @ self.matrix.conj().T - eye)) <= tol)

    def is_hermitian(self, tol: float = NORM_TOL) -> bool:
        return bool(np.max(np.abs(self.matrix - self.matrix.conj().T)) <= tol)

    @classmethod
    def identity(cls, dims: Sequence[int]) -> Operator:
        dims = tuple(dims)
        return cls(np.eye(int(np.prod(dims))), dims)


def kron(a: Operator, b: Operator) -> Operator:
    return Operator(np.kron(a.matrix, b.matrix), a.dims + b.dims)


@dataclass(frozen=True, eq=False)
class ComplexTensorState:
    """Statevector over a register layout.

    ``normalized`` marks states that must have unit norm; unnormalized
    intermediates (projected branches, for instance) set it to ``False``.
    """

    layout: RegisterLayout
    amplitudes: np.ndarray
    normalized: bool = True

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape[0] != self.layout.dim:
            raise LayoutError(
                f"{amps.shape[0]} amplitudes for layout of dimension {self.layout.dim}"
            )
        _check_state_dim(amps.shape[0])
        if self.normalized and abs(np.linalg.norm(amps) - 1.0) > NORM_TOL:
            raise InvalidStateError(f"state norm {np.linalg.norm(amps)!r} is not 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_vector(
        cls, vector: Sequence[complex] | np.ndarray, layout: RegisterLayout, normalize: bool = False
    ) -> ComplexTensorState:
        v = np.asarray(vector, dtype=complex).reshape(-1)
        if normalize:
            v = v / np.linalg.norm(v)
        return cls(layout, v)

    @classmethod
    def basis(cls, layout: RegisterLayout, digits: Sequence[int] | str) -> ComplexTensorState:
        if isinstance(digits, str):
            digits = [int(ch) for ch in digits]
        if len(digits) != len(layout):
            raise LayoutError(f"{len(digits)} digits for {len(layout)} registers")
        for digit, dim in zip(digits, layout.dims):
            if not 0 <= digit < dim:
                raise LayoutError(f"digit {digit} out of range for dimension {dim}")
        amps = np.zeros(layout.dim, dtype=complex)
        amps[np.ravel_multi_index(tuple(digits), layout.dims)] = 1.0
        return cls(layout, amps)

    @classmethod
    def zeros(cls, layout: RegisterLayout) -> ComplexTensorState:
        return cls.basis(layout, [0] * len(layout))

    @property
    def dim(self) -> int:
        return self.layout.dim

    def tensor_view(self) -> np.ndarray:
        return self.amplitudes.reshape(self.layout.dims)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalize(self) -> ComplexTensorState:
        n = self.norm()
        if n == 0.0:
            raise InvalidStateError("cannot normalize the zero vector")
        return ComplexTensorState(self.layout, self.amplitudes / n)

    def inner(self, other: ComplexTensorState) -> complex:
        if self.layout.dims != other.layout.dims:
            raise LayoutError("inner product of states on different layouts")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def tensor(self, other: ComplexTensorState) -> ComplexTensorState:
        return ComplexTensorState(
            self.layout + other.layout,
            np.kron(self.amplitudes, other.amplitudes),
            self.normalized and other.normalized,
        )

    def relabel(self, mapping: Mapping[str, str]) -> ComplexTensorState:
        return ComplexTensorState(self.layout.rename(mapping), self.amplitudes, self.normalized)

    def with_layout(self, layout: RegisterLayout) -> ComplexTensorState:
        """Reinterpret amplitudes under a layout of equal total dimension."""
        return ComplexTensorState(layout, self.amplitudes, self.normalized)

    def reorder(self, names: Sequence[str]) -> ComplexTensorState:
        axes = [self.layout.index(n) for n in names]
        if sorted(axes) != list(range(len(self.layout))):
            raise LayoutError("reorder needs every register exactly once")
        amps = np.transpose(self.tensor_view(), axes).reshape(-1)
        return ComplexTensorState(self.layout.select(names), amps, self.normalized)

    def density(self) -> DensityOperator:
        return DensityOperator(self.layout, np.outer(self.amplitudes, self.amplitudes.conj()))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True, eq=False)
class DensityOperator:
    layout: RegisterLayout
    matrix: np.ndarray
    validate: bool = field(default=True, repr=False)

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (self.layout.dim, self.layout.dim):
            raise LayoutError(f"density matrix shape {m.shape} does not fit layout")
        _check_operator_dim(m.shape[0])
        if self.validate:
            if np.max(np.abs(m - m.conj().T)) > NORM_TOL:
                raise InvalidStateError("density operator is not Hermitian")
            if abs(np.trace(m).real - 1.0) > NORM_TOL:
                raise InvalidStateError(f"density operator trace {np.trace(m).real!r} is not 1")
            if np.linalg.eigvalsh(m).min() < -NORM_TOL:
                raise InvalidStateError("density operator has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.layout.dim

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def expectation(self, op: Operator) -> float:
        return float(np.real(np.trace(op.matrix @ self.matrix)))


def _apply_array(psi: np.ndarray, matrix: np.ndarray, op_dims: tuple[int, ...], axes: Sequence[int]) -> np.ndarray:
    """Apply ``matrix`` to the given axes of the tensor ``psi``; returns a new tensor."""
    k = len(axes)
    op_t = matrix.reshape(op_dims + op_dims)
    out = np.tensordot(op_t, psi, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(out, list(range(k)), list(axes))


def apply(op: Operator, targets: str | Iterable[str], state: ComplexTensorState) -> ComplexTensorState:
    names = _as_names(targets)
    if len(set(names)) != len(names):
        raise LayoutError(f"repeated target in {names}")
    axes = [state.layout.index(n) for n in names]
    target_dims = tuple(state.layout.dims[a] for a in axes)
    if target_dims != op.dims:
        raise LayoutError(f"operator dims {op.dims} do not match targets {names} with dims {target_dims}")
    out = _apply_array(state.tensor_view(), op.matrix, op.dims, axes).reshape(-1)
    still_normal = state.normalized and abs(np.linalg.norm(out) - 1.0) <= NORM_TOL
    return ComplexTensorState(state.layout, out, still_normal)


def _trace_indices(n: int, keep_axes: Sequence[int]) -> tuple[list[int], list[int]]:
    rows = list(range(n))
    cols = [n + i if i in keep_axes else i for i in range(n)]
    out = list(keep_axes) + [n + i for i in keep_axes]
    return rows + cols, out


def partial_trace(rho: DensityOperator, keep: str | Iterable[str]) -> DensityOperator:
    """Trace out everything except ``keep``; the result lists registers in ``keep`` order."""
    names = _as_names(keep)
    axes = [rho.layout.index(n) for n in names]
    n = len(rho.layout)
    dims = rho.layout.dims
    subscripts, out = _trace_indices(n, axes)
    t = rho.matrix.reshape(dims + dims)
    reduced = np.einsum(t, subscripts, out)
    d = int(np.prod([dims[a] for a in axes], dtype=np.int64)) if axes else 1
    sub = rho.layout.select(names)
    return DensityOperator(sub, reduced.reshape(d, d), validate=False)


def reduced_density(state: ComplexTensorState, keep: str | Iterable[str]) -> DensityOperator:
    """Reduced state of a pure state without forming the full density matrix."""
    names = _as_names(keep)
    axes = [state.layout.index(n) for n in names]
    rest = [i for i in range(len(state.layout)) if i not in axes]
    sub = state.layout.select(names)
    m = np.transpose(state.tensor_view(), axes + rest).reshape(sub.dim, -1)
    return DensityOperator(sub, m @ m.conj().T, validate=False)


def purify(rho: DensityOperator, purifier: str = "purifier") -> ComplexTensorState:
    """Purification sum_i sqrt(lambda_i) |i>_purifier |v_i> from the spectral decomposition."""
    if purifier in rho.layout:
        raise LayoutError(f"purifier name {purifier!r} collides with the state's registers")
    evals, evecs = np.linalg.eigh(rho.matrix)
    # largest weight on purifier level 0, so a pure input gives |0>|psi>
    evals, evecs = evals[::-1], evecs[:, ::-1]
    if evals.min() < -NORM_TOL:
        raise InvalidStateError(f"negative eigenvalue {evals.min()!r}")
    weights = np.sqrt(np.clip(evals, 0.0, None))
    d = rho.dim
    # amplitude[i, s] = sqrt(lambda_i) <s|v_i>
    amps = (evecs * weights).T.reshape(-1)
    layout = RegisterLayout(((purifier, d),)) + rho.layout
    return ComplexTensorState(layout, amps / np.linalg.norm(amps))


def place(layout: RegisterLayout, parts: Iterable[ComplexTensorState]) -> ComplexTensorState:
    """Tensor ``parts`` together, put unlisted registers in |0>, and order by ``layout``."""
    full: ComplexTensorState | None = None
    for part in parts:
        full = part if full is None else full.tensor(part)
    covered = set(full.layout.names) if full is not None else set()
    for name in covered:
        if layout.dim_of(name) != full.layout.dim_of(name):
            raise LayoutError(f"register {name!r} has mismatched dimension")
    missing = [reg for reg in layout.registers if reg[0] not in covered]
    if missing:
        zeros = ComplexTensorState.zeros(RegisterLayout(tuple(missing)))
        full = zeros if full is None else full.tensor(zeros)
    return full.reorder(layout.names)


def householder_completion(vector: np.ndarray) -> np.ndarray:
    """Deterministic unitary whose first column is ``vector`` (unit norm)."""
    v = np.asarray(vector, dtype=complex).reshape(-1)
    nrm = np.linalg.norm(v)
    if abs(nrm - 1.0) > NORM_TOL:
        raise InvalidStateError(f"column to complete has norm {nrm!r}")
    phase = v[0] / abs(v[0]) if abs(v[0]) > 0 else 1.0
    u = v * np.conj(phase)
    w = -u.copy()
    w[0] += 1.0
    ww = np.vdot(w, w).real
    if ww < 1e-28:
        return phase * np.eye(len(v), dtype=complex)
    reflect = np.eye(len(v), dtype=complex) - 2.0 * np.outer(w, w.conj()) / ww
    return phase * reflect


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Gaussian matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_state_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)
