"""Pauli-string primitives shared by the statevector engine and the dense oracle.

Register convention used across the package: qubit 0 is the most significant
bit of the basis-state index, so a register of `width` qubits stores qubit q
at bit position `width - 1 - q`, and np.kron(A, B) composes operators as
A on the lower qubit indices, B on the higher ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

AXES = "IXYZ"

PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_matrix(axes: str) -> np.ndarray:
    """Dense 2^n x 2^n matrix for a Pauli string, axes[0] on qubit 0 (MSB)."""
    if not axes or any(c not in AXES for c in axes):
        raise ValueError(f"invalid Pauli string {axes!r}")
    return reduce(np.kron, (PAULI_1Q[c] for c in axes))


@lru_cache(maxsize=512)
def _parity_signs(mask: int, dim: int) -> np.ndarray:
    """signs[x] = (-1)^popcount(x & mask) for x in [0, dim)."""
    idx = np.arange(dim, dtype=np.uint64)
    parity = (np.bitwise_count(idx & np.uint64(mask)) & np.uint64(1)).astype(np.float64)
    return 1.0 - 2.0 * parity


@lru_cache(maxsize=512)
def _xor_perm(flip: int, dim: int) -> np.ndarray:
    return np.arange(dim) ^ flip


@dataclass(frozen=True)
class PauliAction:
    """Bitmask form of a Pauli string P on a `width`-qubit register.

    P|x> = scalar * signs[x] * |x XOR flip| with signs read off sign_mask,
    so applying P is one permutation plus a diagonal phase.
    """

    width: int
    flip: int
    scalar: complex
    sign_mask: int

    @property
    def dim(self) -> int:
        return 1 << self.width

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """Return P @ vec without building the dense matrix.

        vec may be a single amplitude vector or any (..., 2^width) batch;
        the string acts along the last axis.
        """
        signs = _parity_signs(self.sign_mask, self.dim)
        phased = (self.scalar * signs) * vec
        if self.flip == 0:
            return phased
        return phased[..., _xor_perm(self.flip, self.dim)]


def pauli_action(axes: str, width: int, start: int = 0) -> PauliAction:
    """PauliAction for `axes` occupying qubits start .. start+len(axes)-1."""
    if start < 0 or start + len(axes) > width:
        raise ValueError("Pauli string does not fit the register")
    flip = 0
    sign_mask = 0
    n_y = 0
    for q, axis in enumerate(axes, start=start):
        bit = 1 << (width - 1 - q)
        if axis == "X":
            flip |= bit
        elif axis == "Y":
            flip |= bit
            sign_mask |= bit
            n_y += 1
        elif axis == "Z":
            sign_mask |= bit
        elif axis != "I":
            raise ValueError(f"invalid Pauli axis {axis!r}")
    return PauliAction(width=width, flip=flip, scalar=1j**n_y, sign_mask=sign_mask)
