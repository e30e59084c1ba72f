"""Named gate matrices used by the builders and the JSON formats."""

from __future__ import annotations

import numpy as np

from .errors import LayoutError
from .tensor import Operator

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.diag([1, 1j]).astype(complex)
T = np.diag([1, np.exp(1j * np.pi / 4)]).astype(complex)
# control is the first (most significant) qubit
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def swap_matrix(d: int) -> np.ndarray:
    """Exchange of two d-level registers."""
    m = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            m[b * d + a, a * d + b] = 1.0
    return m


def ry(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def qft_matrix(r: int) -> np.ndarray:
    j = np.arange(r)
    return np.exp(2j * np.pi * np.outer(j, j) / r) / np.sqrt(r)


def clock_matrix(r: int) -> np.ndarray:
    """diag(omega^c) for c = 0..r-1; reduces to Z at r = 2."""
    return np.diag(np.exp(2j * np.pi * np.arange(r) / r))


def controlled(u: np.ndarray) -> np.ndarray:
    """|0><0| (x) I + |1><1| (x) u, control first."""
    d = u.shape[0]
    out = np.eye(2 * d, dtype=complex)
    out[d:, d:] = u
    return out


_FIXED = {"I": I2, "X": X, "Y": Y, "Z": Z, "H": H, "S": S, "T": T, "CNOT": CNOT, "SWAP": swap_matrix(2)}


def named(name: str, dim: int | None = None) -> Operator:
    """Look up a named gate.  ``SWAP``, ``QFT``, ``IQFT`` and ``CLOCK`` accept a register dimension."""
    key = name.upper()
    if key == "SWAP" and dim is not None:
        return Operator(swap_matrix(dim), (dim, dim))
    if key in ("QFT", "IQFT", "CLOCK"):
        if dim is None:
            raise LayoutError(f"{name} needs a register dimension")
        m = qft_matrix(dim) if key != "CLOCK" else clock_matrix(dim)
        return Operator(m.conj().T if key == "IQFT" else m, (dim,))
    try:
        m = _FIXED[key]
    except KeyError:
        raise LayoutError(f"unknown gate name {name!r}") from None
    return Operator(m, (2,) * int(round(np.log2(m.shape[0]))))
