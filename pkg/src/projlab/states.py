"""Catalog of named test states with their default bipartitions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .errors import LayoutError, ParameterError
from .gates import swap_matrix
from .tensor import ComplexTensorState, DensityOperator, RegisterLayout

CATALOG = ("bell", "singlet", "w", "ghz", "double_bell", "pizza", "werner", "random_pure", "basis")


@dataclass(frozen=True, eq=False)
class NamedState:
    name: str
    state: ComplexTensorState | DensityOperator
    cut: tuple[str, ...]

    @property
    def layout(self) -> RegisterLayout:
        return self.state.layout

    @property
    def is_pure(self) -> bool:
        return isinstance(self.state, ComplexTensorState)

    def density(self) -> DensityOperator:
        return self.state.density() if isinstance(self.state, ComplexTensorState) else self.state


def _qubits(n: int) -> RegisterLayout:
    return RegisterLayout.qubits([f"q{i}" for i in range(1, n + 1)])


def _from_terms(layout: RegisterLayout, terms: dict[str, float]) -> ComplexTensorState:
    amps = np.zeros(layout.dim, dtype=complex)
    for bits, coeff in terms.items():
        amps[int(bits, 2)] = coeff
    return ComplexTensorState.from_vector(amps, layout, normalize=True)


def bell() -> NamedState:
    layout = RegisterLayout.qubits(["R", "S"])
    return NamedState("bell", _from_terms(layout, {"00": 1, "11": 1}), ("R",))


def singlet() -> NamedState:
    layout = RegisterLayout.qubits(["A", "B"])
    return NamedState("singlet", _from_terms(layout, {"01": 1, "10": -1}), ("A",))


def w_state(n: int = 3) -> NamedState:
    if n < 2:
        raise ParameterError("W state needs at least 2 qubits")
    terms = {"".join("1" if i == j else "0" for i in range(n)): 1 for j in range(n)}
    layout = _qubits(n)
    return NamedState(f"w{n}", _from_terms(layout, terms), layout.names[: n - 1])


def ghz(n: int = 3) -> NamedState:
    if n < 2:
        raise ParameterError("GHZ state needs at least 2 qubits")
    layout = _qubits(n)
    return NamedState(f"ghz{n}", _from_terms(layout, {"0" * n: 1, "1" * n: 1}), layout.names[:1])


def double_bell() -> NamedState:
    """Bell pairs on (R, S1) and (S2, S3)."""
    layout = RegisterLayout.qubits(["R", "S1", "S2", "S3"])
    terms = {a + b: 1 for a in ("00", "11") for b in ("00", "11")}
    return NamedState("double_bell", _from_terms(layout, terms), ("R",))


PIZZA_TERMS = {
    "000111": 1, "111000": -1, "001110": -1, "110001": 1,
    "010101": -1, "101010": 1, "011100": 1, "100011": -1,
}


def pizza() -> NamedState:
    layout = _qubits(6)
    return NamedState("pizza", _from_terms(layout, PIZZA_TERMS), layout.names[:3])


def symmetric_projector(d: int) -> np.ndarray:
    return (np.eye(d * d) + swap_matrix(d)) / 2


def antisymmetric_projector(d: int) -> np.ndarray:
    return (np.eye(d * d) - swap_matrix(d)) / 2


def werner(p: float, d: int = 2) -> NamedState:
    """Normalized mixture p Pi_S / dim(S) + (1 - p) Pi_A / dim(A) on two d-level halves."""
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"Werner weight must lie in [0, 1], got {p}")
    if d < 2:
        raise ParameterError("Werner states need d >= 2")
    rho = p * symmetric_projector(d) / (d * (d + 1) / 2) + (1 - p) * antisymmetric_projector(d) / (d * (d - 1) / 2)
    layout = RegisterLayout((("A", d), ("B", d)))
    return NamedState(f"werner({p:g},{d})", DensityOperator(layout, rho), ("A",))


def random_pure(seed: int = 0, dims: Sequence[int] = (2, 2)) -> NamedState:
    """Haar-random pure state from normalized complex Gaussians drawn with the given seed."""
    dims = tuple(int(d) for d in dims)
    if len(dims) < 2:
        raise ParameterError("random_pure needs at least two registers")
    layout = RegisterLayout(tuple((f"q{i}", d) for i, d in enumerate(dims, start=1)))
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(layout.dim) + 1j * rng.standard_normal(layout.dim)
    return NamedState(f"random_pure({seed})", ComplexTensorState.from_vector(v, layout, normalize=True), layout.names[:1])


def basis(bits: str) -> NamedState:
    if len(bits) < 2 or any(b not in "01" for b in bits):
        raise ParameterError(f"basis label must be a bitstring of length >= 2, got {bits!r}")
    layout = _qubits(len(bits))
    return NamedState(bits, ComplexTensorState.basis(layout, bits), layout.names[: len(bits) // 2])


def make_state(name: str, **params: Any) -> NamedState:
    key = name.lower()
    if key == "bell":
        return bell()
    if key == "singlet":
        return singlet()
    if key == "w":
        return w_state(int(params.get("n", 3)))
    if key == "ghz":
        return ghz(int(params.get("n", 3)))
    if key == "double_bell":
        return double_bell()
    if key == "pizza":
        return pizza()
    if key == "werner":
        return werner(float(params.get("p", 0.3)), int(params.get("d", 2)))
    if key == "random_pure":
        return random_pure(int(params.get("seed", 0)), params.get("dims", (2, 2)))
    if key == "basis":
        return basis(str(params["bits"]))
    raise ParameterError(f"unknown state {name!r}; catalog: {', '.join(CATALOG)}")


def parse_state_spec(spec: str) -> NamedState:
    """CLI form: ``name`` or ``name:key=value,key=value``; a bare bitstring is a basis state."""
    if spec and all(ch in "01" for ch in spec):
        return basis(spec)
    name, _, rest = spec.partition(":")
    params: dict[str, Any] = {}
    if rest:
        for item in rest.split(","):
            k, sep, v = item.partition("=")
            if not sep:
                raise ParameterError(f"bad state parameter {item!r}")
            params[k.strip()] = v.strip()
    if "dims" in params:
        params["dims"] = tuple(int(x) for x in str(params["dims"]).split("x"))
    return make_state(name, **params)


def regroup(state: ComplexTensorState, groups: Sequence[tuple[str, Sequence[str]]]) -> ComplexTensorState:
    """Merge consecutive runs of registers into single registers, e.g. six qubits into two 8-level halves."""
    order = [n for _, members in groups for n in members]
    if sorted(order) != sorted(state.layout.names):
        raise LayoutError("groups must cover every register exactly once")
    ordered = state.reorder(order)
    layout = RegisterLayout(tuple((name, state.layout.select(members).dim) for name, members in groups))
    return ComplexTensorState(layout, ordered.amplitudes, state.normalized)


def bipartite(named: NamedState) -> ComplexTensorState | DensityOperator:
    """The state as two registers (A, B) split at its canonical cut."""
    if not named.is_pure:
        return named.state
    cut = list(named.cut)
    rest = [n for n in named.layout.names if n not in cut]
    return regroup(named.state, [("A", cut), ("B", rest)])


def cut_purity(named: NamedState) -> float:
    """Purity of the reduced state on the canonical cut (pure states only)."""
    if not named.is_pure:
        raise ParameterError("purity check needs a pure state")
    rest = [n for n in named.layout.names if n not in named.cut]
    m = named.state.reorder(list(named.cut) + rest)
    mat = m.amplitudes.reshape(named.layout.select(named.cut).dim, -1)
    rho = mat @ mat.conj().T
    return float(np.real(np.trace(rho @ rho)))
