"""Statevector execution of compiled plans on an ancilla-extended register.

The register always holds n_qubits + 1 qubits with the ancilla at qubit 0
(the most significant bit), so the two ancilla blocks of the amplitude
vector are contiguous halves. Time operators act on the system register
only; swift operators act on both. Total width is capped at 22 qubits.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._pauli import AXES, PauliAction, pauli_action
from .errors import WidthOverflow
from .hamiltonian import HamiltonianModel, PauliTerm

MAX_TOTAL_QUBITS = 22


@dataclass(frozen=True)
class State:
    """Pure state of the ancilla-extended register (2^(n+1) amplitudes)."""

    amplitudes: np.ndarray
    n_qubits: int

    def __post_init__(self):
        expected = 1 << (self.n_qubits + 1)
        if self.amplitudes.shape != (expected,):
            raise ValueError(
                f"amplitude vector has shape {self.amplitudes.shape}, "
                f"expected ({expected},)"
            )

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def density_matrix(self) -> np.ndarray:
        """Dense (2^(n+1))^2 projector, for oracle comparisons."""
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass(frozen=True)
class Observable:
    """Pauli-string observable Q on the system register.

    with_ancilla_x measures X (x) Q on the extended register instead of
    I (x) Q; that is the readout the swift-operator corrections need.
    """

    axes: str
    with_ancilla_x: bool = False

    def __post_init__(self):
        if not self.axes or any(c not in AXES for c in self.axes):
            raise ValueError(f"invalid observable axes {self.axes!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.axes)


def prepare_plus_input(n_qubits: int, system_zero: bool = False) -> State:
    """|+> ancilla tensor (|+>^n or |0>^n) as the default circuit input."""
    if n_qubits < 1 or n_qubits + 1 > MAX_TOTAL_QUBITS:
        raise WidthOverflow(
            f"system width {n_qubits} outside [1, {MAX_TOTAL_QUBITS - 1}]"
        )
    half = 1 << n_qubits
    system = np.zeros(half, dtype=complex)
    if system_zero:
        system[0] = 1.0
    else:
        system[:] = 1.0 / np.sqrt(half)
    amps = np.concatenate([system, system]) / np.sqrt(2.0)
    return State(amplitudes=amps, n_qubits=n_qubits)


@lru_cache(maxsize=512)
def _system_action(axes: str, n_qubits: int) -> PauliAction:
    """Pauli string acting on the system half-register (width n)."""
    return pauli_action(axes, width=n_qubits, start=0)


def _rotated(vec: np.ndarray, action: PauliAction, theta: float) -> np.ndarray:
    """e^{i theta P} vec = cos(theta) vec + i sin(theta) P vec (P^2 = I)."""
    return np.cos(theta) * vec + 1j * np.sin(theta) * action.apply(vec)


def apply_pauli_rotation(state: State, axes: str, theta: float) -> State:
    """Apply e^{i theta P} with P the bare system Pauli string `axes`.

    Plan TimeOp angles are stored with the term sign already folded in and
    execute through this bare rotation.
    """
    action = _system_action(axes, state.n_qubits)
    half = 1 << state.n_qubits
    amps = state.amplitudes.copy()
    amps[:half] = _rotated(amps[:half], action, theta)
    amps[half:] = _rotated(amps[half:], action, theta)
    return State(amplitudes=amps, n_qubits=state.n_qubits)


def apply_time_op(state: State, term: PauliTerm, angle: float) -> State:
    """Evolve under term ell: the unitary e^{i sign * angle * P} on the system."""
    return apply_pauli_rotation(state, term.axes, term.sign * angle)


def apply_swift_op(state: State, term: PauliTerm, b: int) -> State:
    """Apply the swift operator S^(b) for H_ell = sign * P.

    Net unitaries (ancilla block form): S^(0) = diag(I, i H_ell) and
    S^(1) = diag(H_ell, -i I). Their channel actions on the ancilla
    off-diagonal blocks are rho -> (-i rho H, +i H rho) for b = 0 and
    rho -> (+i H rho, -i rho H) for b = 1, so the two sum to i[H, .].
    """
    if b not in (0, 1):
        raise ValueError("swift branch b must be 0 or 1")
    action = _system_action(term.axes, state.n_qubits)
    half = 1 << state.n_qubits
    amps = state.amplitudes.copy()
    if b == 0:
        amps[half:] = 1j * term.sign * action.apply(amps[half:])
    else:
        amps[:half] = term.sign * action.apply(amps[:half])
        amps[half:] = -1j * amps[half:]
    return State(amplitudes=amps, n_qubits=state.n_qubits)


def expectation(state: State, observable: Observable) -> float:
    """Exact <O> for O = X (x) Q or I (x) Q; the value is real for Paulis."""
    if observable.n_qubits != state.n_qubits:
        raise ValueError("observable width does not match the state")
    action = _system_action(observable.axes, state.n_qubits)
    half = 1 << state.n_qubits
    lower = state.amplitudes[:half]
    upper = state.amplitudes[half:]
    if observable.with_ancilla_x:
        value = np.vdot(lower, action.apply(upper)) + np.vdot(upper, action.apply(lower))
    else:
        value = np.vdot(lower, action.apply(lower)) + np.vdot(upper, action.apply(upper))
    if abs(value.imag) > 1e-10:
        raise ValueError(f"non-real Pauli expectation (imag {value.imag:.3e})")
    return float(value.real)


def sample_shots(state: State, observable: Observable, n_shots: int, rng_seed) -> float:
    """Mean of n_shots simulated +-1 outcomes, drawn binomially.

    Outcomes are sampled from the exact eigenvalue distribution
    P(+1) = (1 + <O>)/2, which is the shot model throughout: unbiased with
    variance (1 - <O>^2)/n_shots.
    """
    if n_shots < 1:
        raise ValueError("need at least one shot")
    exact = expectation(state, observable)
    p_plus = min(1.0, max(0.0, 0.5 * (1.0 + exact)))
    rng = np.random.default_rng(rng_seed)
    k = rng.binomial(n_shots, p_plus)
    return 2.0 * k / n_shots - 1.0


def run_plan(state: State, plan, model: HamiltonianModel) -> State:
    """Execute a compiled GatePlan instruction list in application order."""
    from .compiler import SwiftOp, TimeOp

    for op in plan.ops:
        term = model.term(op.ell)
        if isinstance(op, TimeOp):
            state = apply_pauli_rotation(state, term.axes, op.angle)
        elif isinstance(op, SwiftOp):
            state = apply_swift_op(state, term, op.b)
        else:
            raise TypeError(f"unknown instruction {op!r}")
    return state
