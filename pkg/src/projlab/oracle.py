"""Brute-force dense projectors and closed-form outcome laws.

Nothing here simulates a circuit.  Every function builds the relevant operator
directly from group sums, spectral data or traces, so circuit simulations can
be checked against it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    CapacityError,
    InvalidGeneratorError,
    InvalidProjectorError,
    InvalidResolutionError,
    InvalidUnitaryError,
    LayoutError,
    OrthogonalityError,
    UnsupportedGroupError,
)
from .groups import ControlEncoding, UnitaryRep, g_p, minus_state, plus_state
from .tensor import (
    NORM_TOL,
    ComplexTensorState,
    DensityOperator,
    Operator,
    state_capacity,
)

RANK_TOL = 1e-9
ROOT_TOL = 1e-8

PROJECTOR_KINDS = ("group-sym", "sk-sym", "antisym", "custom")


@dataclass(frozen=True, eq=False)
class ProjectorMatrix:
    operator: Operator
    kind: str = "custom"

    def __post_init__(self) -> None:
        if self.kind not in PROJECTOR_KINDS:
            raise InvalidProjectorError(f"unknown projector kind {self.kind!r}")
        m = self.operator.matrix
        if np.max(np.abs(m - m.conj().T)) > NORM_TOL:
            raise InvalidProjectorError("projector is not Hermitian")
        if np.max(np.abs(m @ m - m)) > NORM_TOL:
            raise InvalidProjectorError("projector is not idempotent")

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, dims: Sequence[int] = (), kind: str = "custom") -> ProjectorMatrix:
        return cls(Operator(matrix, tuple(dims)), kind)

    @property
    def matrix(self) -> np.ndarray:
        return self.operator.matrix

    @property
    def dim(self) -> int:
        return self.operator.dim

    def rank(self) -> int:
        return int(np.sum(np.linalg.svd(self.matrix, compute_uv=False) > RANK_TOL))

    def complement(self) -> ProjectorMatrix:
        return ProjectorMatrix(Operator(np.eye(self.dim) - self.matrix, self.operator.dims), "custom")


def _is_full_symmetric(rep: UnitaryRep) -> bool:
    return rep.group.order == math.factorial(rep.group.degree)


def projector_sym(rep: UnitaryRep) -> ProjectorMatrix:
    total = sum(op.matrix for op in rep.matrices.values()) / rep.group.order
    kind = "sk-sym" if _is_full_symmetric(rep) else "group-sym"
    return ProjectorMatrix(Operator(total, rep.data_layout.dims), kind)


def projector_anti(rep: UnitaryRep) -> ProjectorMatrix:
    total = sum(rep.signs[g] * op.matrix for g, op in rep.matrices.items()) / rep.group.order
    return ProjectorMatrix(Operator(total, rep.data_layout.dims), "antisym")


def _vector(psi: ComplexTensorState | np.ndarray, dim: int) -> np.ndarray:
    v = psi.amplitudes if isinstance(psi, ComplexTensorState) else np.asarray(psi, dtype=complex).reshape(-1)
    if v.shape[0] != dim:
        raise LayoutError(f"state of dimension {v.shape[0]} does not match operator dimension {dim}")
    return v


def _sq(v: np.ndarray) -> float:
    return float(np.vdot(v, v).real)


def sym_anti_probs(rep: UnitaryRep, psi: ComplexTensorState | np.ndarray) -> dict[str, float]:
    """Outcome law of the symmetric-then-antisymmetric flags, keyed ``sym_flag + anti_flag``."""
    if abs(g_p(rep)) > NORM_TOL:
        raise UnsupportedGroupError(
            f"closed form needs a group with mean sign 0, got {g_p(rep)}; use sym_anti_branch_states"
        )
    v = _vector(psi, rep.dim)
    ps = projector_sym(rep).matrix @ v
    pa = projector_anti(rep).matrix @ v
    return {"00": _sq(v - ps - pa), "01": _sq(pa), "10": _sq(ps), "11": 0.0}


def sym_anti_branch_states(
    rep: UnitaryRep, enc: ControlEncoding, psi: ComplexTensorState | np.ndarray
) -> dict[str, np.ndarray]:
    """Unnormalized (control, data) branch vectors of the shared-control concatenation.

    Valid for any group.  The vectors describe the joint state after the
    controlled inverse representation and before the control is un-prepared;
    the overlap between the plus and minus control states enters explicitly.
    """
    if not rep.group.same_as(enc.group):
        raise LayoutError("encoding and representation use different groups")
    v = _vector(psi, rep.dim)
    plus = plus_state(enc).amplitudes
    minus = minus_state(enc).amplitudes
    overlap = g_p(rep)
    ps = projector_sym(rep).matrix @ v
    pa = projector_anti(rep).matrix @ v
    both = overlap * np.kron(minus, ps)
    return {
        "11": both,
        "10": np.kron(plus, ps) - both,
        "01": np.kron(plus, pa) - both,
        "00": np.kron(plus, v) - np.kron(plus, ps) - np.kron(plus, pa) + both,
    }


def _check_projector_pair(p: ProjectorMatrix) -> np.ndarray:
    q = np.eye(p.dim) - p.matrix
    if np.max(np.abs(q @ q - q)) > NORM_TOL:
        raise InvalidProjectorError("complement is not a projector")
    return q


def _rho_matrix(rho: DensityOperator | np.ndarray, dim: int) -> np.ndarray:
    m = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho, dtype=complex)
    if m.shape != (dim, dim):
        raise LayoutError(f"density matrix shape {m.shape} does not match projector dimension {dim}")
    return m


def diff_proj_probs(p: ProjectorMatrix, rho: DensityOperator | np.ndarray) -> dict[str, float]:
    """Eight-outcome law keyed ``abc``; ``b`` and ``c`` select Q (0) or P (1)."""
    q = _check_projector_pair(p)
    r = _rho_matrix(rho, p.dim)
    proj = {0: q, 1: p.matrix}
    out = {}
    for a, b, c in itertools.product((0, 1), repeat=3):
        single = np.trace(proj[b] @ r).real * np.trace(proj[c] @ r).real
        cross = np.trace(proj[b] @ r @ proj[c] @ r).real
        out[f"{a}{b}{c}"] = float(0.5 * (single + (-1) ** a * cross))
    return out


def real_cross_norm(p: ProjectorMatrix, q: ProjectorMatrix, rho: DensityOperator | np.ndarray) -> float:
    """Squared Frobenius norm of the Hermitian part of P rho Q, for orthogonal P and Q."""
    if np.max(np.abs(p.matrix @ q.matrix)) > NORM_TOL:
        raise OrthogonalityError("P Q is not zero")
    r = _rho_matrix(rho, p.dim)
    m = p.matrix @ r @ q.matrix
    herm = (m + m.conj().T) / 2
    direct = float(np.sum(np.abs(herm) ** 2))
    via_trace = 0.5 * float(np.trace(p.matrix @ r @ q.matrix @ r).real)
    if abs(direct - via_trace) > NORM_TOL:
        raise OrthogonalityError(f"cross-norm routes disagree: {direct} vs {via_trace}")
    return via_trace


def check_resolution(projectors: Sequence[ProjectorMatrix], tol: float = NORM_TOL) -> None:
    """Raise unless the projectors sum to I and multiply as P_i P_j = delta_ij P_i."""
    if not projectors:
        raise InvalidResolutionError("empty resolution")
    dim = projectors[0].dim
    if any(p.dim != dim for p in projectors):
        raise InvalidResolutionError("projectors of different dimension")
    total = sum(p.matrix for p in projectors)
    if np.max(np.abs(total - np.eye(dim))) > tol:
        raise InvalidResolutionError("projectors do not sum to the identity")
    for i, pi in enumerate(projectors):
        for j, pj in enumerate(projectors):
            target = pi.matrix if i == j else 0.0
            if np.max(np.abs(pi.matrix @ pj.matrix - target)) > tol:
                raise InvalidResolutionError(f"P_{i} P_{j} violates orthogonality")


def res_identity_probs(projectors: Sequence[ProjectorMatrix], rho: DensityOperator | np.ndarray) -> dict[str, float]:
    """Outcome law keyed ``xab``; register value ``a`` selects projector index (a - 1) mod r."""
    check_resolution(projectors)
    r = len(projectors)
    if r > 10:
        raise InvalidResolutionError("digit-string keys support at most 10 projectors")
    rm = _rho_matrix(rho, projectors[0].dim)
    singles = [np.trace(p.matrix @ rm).real for p in projectors]
    out = {}
    for x, a, b in itertools.product((0, 1), range(r), range(r)):
        pa, pb = projectors[(a - 1) % r], projectors[(b - 1) % r]
        cross = np.trace(pa.matrix @ rm @ pb.matrix @ rm).real
        out[f"{x}{a}{b}"] = float(0.5 * (singles[(a - 1) % r] * singles[(b - 1) % r] + (-1) ** x * cross))
    return out


def roots_of_unity_unitary(projectors: Sequence[ProjectorMatrix]) -> Operator:
    """Sum of omega**j P_j with omega the primitive r-th root of unity."""
    r = len(projectors)
    w = np.exp(2j * np.pi / r)
    return Operator(sum(w**j * p.matrix for j, p in enumerate(projectors)), projectors[0].operator.dims)


def spectral_projectors(u: Operator, r: int) -> list[ProjectorMatrix]:
    """Eigenprojectors of a unitary whose spectrum lies in the r-th roots of unity.

    Built by Lagrange interpolation, P_j = prod_{m != j} (U - w^m)/(w^j - w^m),
    so no eigenvectors are needed.
    """
    if r < 2:
        raise InvalidUnitaryError("need r >= 2")
    if not u.is_unitary():
        raise InvalidUnitaryError("operator is not unitary")
    roots = np.exp(2j * np.pi * np.arange(r) / r)
    evals = np.linalg.eigvals(u.matrix)
    dist = np.min(np.abs(evals[:, None] - roots[None, :]), axis=1)
    if np.max(dist) > ROOT_TOL:
        raise InvalidUnitaryError(f"spectrum is not within the {r}-th roots of unity")
    eye = np.eye(u.dim, dtype=complex)
    out = []
    for j in range(r):
        m = eye.copy()
        for k in range(r):
            if k != j:
                m = m @ (u.matrix - roots[k] * eye) / (roots[j] - roots[k])
        # clean the rounding so the idempotence check sees a true projector
        m = (m + m.conj().T) / 2
        out.append(ProjectorMatrix(Operator(m, u.dims), "custom"))
    return out


def schmidt_coefficients(psi: ComplexTensorState, cut: Sequence[str]) -> np.ndarray:
    side = list(cut)
    rest = [n for n in psi.layout.names if n not in side]
    for n in side:
        psi.layout.index(n)
    m = psi.reorder(side + rest).amplitudes.reshape(psi.layout.select(side).dim, -1)
    return np.linalg.svd(m, compute_uv=False)


def schmidt_rank_oracle(psi: ComplexTensorState, cut: Sequence[str]) -> int:
    return int(np.sum(schmidt_coefficients(psi, cut) > RANK_TOL))


def _antisymmetrize(t: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """Apply (1/k!) sum_sigma sgn(sigma) U(sigma) on the listed tensor axes."""
    k = len(axes)
    out = np.zeros_like(t)
    base = list(range(t.ndim))
    for perm in itertools.permutations(range(k)):
        sgn = _perm_sign(perm)
        order = base.copy()
        for slot, src in enumerate(perm):
            order[axes[slot]] = axes[src]
        out += sgn * np.transpose(t, order)
    return out / math.factorial(k)


def _perm_sign(perm: Sequence[int]) -> int:
    sgn = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sgn = -sgn
    return sgn


def antisym_schmidt_value(psi: ComplexTensorState, cut: Sequence[str], r: int) -> float:
    """Squared norm of both-sides antisymmetrization of r+1 copies of psi."""
    if r < 1:
        raise LayoutError("r must be at least 1")
    k = r + 1
    side = list(cut)
    rest = [n for n in psi.layout.names if n not in side]
    if not side or not rest:
        raise LayoutError("cut must split the registers into two nonempty sides")
    d_r = psi.layout.select(side).dim
    d_s = psi.layout.select(rest).dim
    if (d_r * d_s) ** k > state_capacity():
        raise CapacityError(f"{k} copies of a {d_r * d_s}-dimensional state exceed capacity")
    m = psi.reorder(side + rest).amplitudes.reshape(d_r, d_s)
    t = m
    for _ in range(k - 1):
        t = np.multiply.outer(t, m)
    # axes alternate R, S, R, S, ...
    t = _antisymmetrize(t, [2 * i for i in range(k)])
    t = _antisymmetrize(t, [2 * i + 1 for i in range(k)])
    return float(np.vdot(t, t).real)


def sym_projector_on_copies(dim: int, k: int, anti: bool) -> np.ndarray:
    """Dense (anti)symmetrizer on k copies of a dim-level register, for cross-checks."""
    total = np.zeros((dim**k, dim**k), dtype=complex)
    eye = np.eye(dim**k).reshape((dim,) * k + (dim**k,))
    for perm in itertools.permutations(range(k)):
        sgn = _perm_sign(perm) if anti else 1
        total += sgn * np.transpose(eye, list(perm) + [k]).reshape(dim**k, dim**k)
    return total / math.factorial(k)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def hermitian_exp(generator: np.ndarray, scale: complex = 1j) -> np.ndarray:
    """exp(scale * A) for Hermitian A via its eigendecomposition."""
    a = np.asarray(generator, dtype=complex)
    if np.max(np.abs(a - a.conj().T)) > NORM_TOL:
        raise InvalidGeneratorError("generator is not Hermitian")
    w, v = np.linalg.eigh(a)
    return (v * np.exp(scale * w)) @ v.conj().T


def commutator_probability(a: np.ndarray, b: np.ndarray, psi: np.ndarray) -> float:
    v = np.asarray(psi, dtype=complex).reshape(-1)
    return 0.25 * _sq(commutator(a, b) @ v)


def nested_commutator_probability(generator: np.ndarray, b: np.ndarray, psi: np.ndarray) -> float:
    """Quarter squared norm of (e^{iA} B e^{-iA} - B) psi."""
    v = np.asarray(psi, dtype=complex).reshape(-1)
    u = hermitian_exp(generator)
    return 0.25 * _sq((u @ b @ u.conj().T - b) @ v)


def commutator_norms(a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    """(||C||_F^2 / (4d), ||C||_inf^2 / 4) for C = [A, B]."""
    c = commutator(a, b)
    d = c.shape[0]
    fro = float(np.linalg.norm(c, "fro") ** 2) / (4 * d)
    spec = float(np.linalg.norm(c, 2) ** 2) / 4
    return fro, spec


def branch_probabilities(branches: Mapping[str, np.ndarray]) -> dict[str, float]:
    return {k: _sq(v) for k, v in branches.items()}


def density_of(psi: ComplexTensorState, keep: Sequence[str] | None = None) -> np.ndarray:
    """Dense reduced density matrix on ``keep`` (all registers when omitted)."""
    names = list(keep) if keep is not None else list(psi.layout.names)
    rest = [n for n in psi.layout.names if n not in names]
    m = psi.reorder(names + rest).amplitudes.reshape(psi.layout.select(names).dim, -1)
    return m @ m.conj().T


__all__ = [
    "ProjectorMatrix",
    "projector_sym",
    "projector_anti",
    "sym_anti_probs",
    "sym_anti_branch_states",
    "diff_proj_probs",
    "real_cross_norm",
    "check_resolution",
    "res_identity_probs",
    "roots_of_unity_unitary",
    "spectral_projectors",
    "schmidt_coefficients",
    "schmidt_rank_oracle",
    "antisym_schmidt_value",
    "sym_projector_on_copies",
    "commutator",
    "hermitian_exp",
    "commutator_probability",
    "nested_commutator_probability",
    "commutator_norms",
    "branch_probabilities",
    "density_of",
]
