"""Dense superoperator oracle for small registers (up to 3 system qubits).

Vectorization is column-stacking throughout: vec(A rho B) = kron(B.T, A) vec(rho),
so the conjugation channel rho -> U rho U* has matrix kron(conj(U), U). This is
the reference implementation every randomized path is validated against; it is
deliberately dense and capped, not a performance path.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb, factorial

import numpy as np
import scipy.linalg

from ._pauli import pauli_matrix
from .errors import CombinatorialCap, DimensionCap, OrderExceedsSegments
from .hamiltonian import HamiltonianModel, PauliTerm, tau

MAX_ORACLE_QUBITS = 3
MIXTURE_TERM_CAP = 10**5


def _check_width(n_qubits: int):
    if n_qubits > MAX_ORACLE_QUBITS:
        raise DimensionCap(
            f"dense oracle supports at most {MAX_ORACLE_QUBITS} system qubits, got {n_qubits}"
        )


@dataclass(frozen=True)
class Superoperator:
    """Linear map on vectorized density matrices of an n-qubit system."""

    matrix: np.ndarray
    n_qubits: int

    def __post_init__(self):
        _check_width(self.n_qubits)
        d2 = 4**self.n_qubits
        if self.matrix.shape != (d2, d2):
            raise ValueError(f"superoperator shape {self.matrix.shape} != ({d2}, {d2})")

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def apply(self, rho: np.ndarray) -> np.ndarray:
        vec = np.asarray(rho, dtype=complex).reshape(-1, order="F")
        out = self.matrix @ vec
        return out.reshape((self.dim, self.dim), order="F")

    def compose(self, other: "Superoperator") -> "Superoperator":
        """self after other (matrix product)."""
        return Superoperator(self.matrix @ other.matrix, self.n_qubits)

    def __matmul__(self, other: "Superoperator") -> "Superoperator":
        return self.compose(other)

    def power(self, exponent: int) -> "Superoperator":
        return Superoperator(
            np.linalg.matrix_power(self.matrix, exponent), self.n_qubits
        )

    @classmethod
    def identity(cls, n_qubits: int) -> "Superoperator":
        return cls(np.eye(4**n_qubits, dtype=complex), n_qubits)


def dense_hamiltonian(model: HamiltonianModel) -> np.ndarray:
    """Sum_ell h_ell * sign_ell * P_ell as a dense matrix."""
    _check_width(model.n_qubits)
    total = np.zeros((2**model.n_qubits,) * 2, dtype=complex)
    for term in model.terms:
        total += term.coefficient * pauli_matrix(term.axes)
    return total


def term_unitary(term: PauliTerm, theta: float) -> np.ndarray:
    """e^{i theta H_ell} for H_ell = sign * P, using P^2 = I."""
    _check_width(term.n_qubits)
    p = term.sign * pauli_matrix(term.axes)
    return np.cos(theta) * np.eye(p.shape[0]) + 1j * np.sin(theta) * p


def swift_unitary(term: PauliTerm, b: int) -> np.ndarray:
    """Dense swift operator on the (n+1)-qubit register, ancilla first.

    Ancilla-block form: S^(0) = diag(I, i H_ell); S^(1) = diag(H_ell, -i I).
    """
    _check_width(term.n_qubits)
    if b not in (0, 1):
        raise ValueError("swift branch b must be 0 or 1")
    h = term.sign * pauli_matrix(term.axes)
    eye = np.eye(h.shape[0])
    if b == 0:
        return scipy.linalg.block_diag(eye, 1j * h)
    return scipy.linalg.block_diag(h, -1j * eye)


def conjugation(u: np.ndarray, n_qubits: int) -> Superoperator:
    """Channel rho -> U rho U* as a superoperator."""
    return Superoperator(np.kron(u.conj(), u), n_qubits)


def liouvillian_term(model: HamiltonianModel, ell: int) -> Superoperator:
    """L_ell(rho) = i(H_ell rho - rho H_ell)."""
    _check_width(model.n_qubits)
    term = model.term(ell)
    h = term.sign * pauli_matrix(term.axes)
    eye = np.eye(h.shape[0])
    mat = 1j * (np.kron(eye, h) - np.kron(h.T, eye))
    return Superoperator(mat, model.n_qubits)


def mean_liouvillian(model: HamiltonianModel) -> Superoperator:
    """L = sum_ell p_ell L_ell, the importance-weighted generator."""
    probs = model.probs
    total = sum(
        probs[ell - 1] * liouvillian_term(model, ell).matrix
        for ell in range(1, model.n_terms + 1)
    )
    return Superoperator(total, model.n_qubits)


def qdrift_channel(model: HamiltonianModel, tau_angle: float) -> Superoperator:
    """One-segment sampling channel sum_ell p_ell e^{L_ell tau}."""
    _check_width(model.n_qubits)
    probs = model.probs
    total = np.zeros((4**model.n_qubits,) * 2, dtype=complex)
    for ell in range(1, model.n_terms + 1):
        u = term_unitary(model.term(ell), tau_angle)
        total += probs[ell - 1] * np.kron(u.conj(), u)
    return Superoperator(total, model.n_qubits)


def ideal_channel(model: HamiltonianModel, t: float, n_segments: int = 1) -> Superoperator:
    """Conjugation by e^{iHt/N}; N = 1 is the full target evolution."""
    _check_width(model.n_qubits)
    if n_segments < 1:
        raise ValueError("segment count must be positive")
    u = scipy.linalg.expm(1j * dense_hamiltonian(model) * (t / n_segments))
    return conjugation(u, model.n_qubits)


def mixture(parts, filler: Superoperator, n_copies: int) -> Superoperator:
    """Sum over the C(N,k) order-preserving interleavings of parts into fillers.

    Slots 0..N-1 are in application order; part j sits at the j-th smallest
    chosen slot, so part 1 acts first (rightmost factor of each product).
    """
    k = len(parts)
    if k > n_copies:
        raise ValueError(f"{k} parts cannot interleave into {n_copies} slots")
    n_terms = comb(n_copies, k)
    if n_terms > MIXTURE_TERM_CAP:
        raise CombinatorialCap(
            f"C({n_copies},{k}) = {n_terms} interleavings exceed {MIXTURE_TERM_CAP}"
        )
    n = filler.n_qubits
    powers = [np.eye(4**n, dtype=complex)]
    for _ in range(n_copies):
        powers.append(filler.matrix @ powers[-1])
    total = np.zeros((4**n,) * 2, dtype=complex)
    for slots in combinations(range(n_copies), k):
        prod = powers[slots[0]]
        for j in range(k):
            prod = parts[j].matrix @ prod
            gap = (slots[j + 1] - slots[j] - 1) if j + 1 < k else (n_copies - 1 - slots[j])
            prod = powers[gap] @ prod
        total += prod
    return Superoperator(total, n)


def script_l_n(model: HamiltonianModel, n: int) -> Superoperator:
    """Moment-difference generator L^(n) = L^n - sum_ell p_ell L_ell^n."""
    if n < 2:
        raise ValueError("moment order must be >= 2")
    _check_width(model.n_qubits)
    probs = model.probs
    total = np.linalg.matrix_power(mean_liouvillian(model).matrix, n)
    for ell in range(1, model.n_terms + 1):
        total = total - probs[ell - 1] * np.linalg.matrix_power(
            liouvillian_term(model, ell).matrix, n
        )
    return Superoperator(total, model.n_qubits)


def qswift_channel(model: HamiltonianModel, t: float, n_segments: int, order: int) -> Superoperator:
    """Order-K corrected channel: qDRIFT product plus mixture correction buckets.

    order = 1 returns the plain qDRIFT product channel. The correction part
    sums tau^xi / prod(n_j!) weighted mixtures over all compositions of
    xi into k parts >= 2, for xi = 2 .. 2K-2 and k = 1 .. K.
    """
    from .compiler import enumerate_g2

    if order < 1:
        raise ValueError("order must be >= 1")
    if order > n_segments:
        raise OrderExceedsSegments(f"order {order} exceeds {n_segments} segments")
    tau_angle = tau(model, t, n_segments)
    base = qdrift_channel(model, tau_angle)
    total = base.power(n_segments).matrix
    moments = {}
    for xi in range(2, 2 * order - 1):
        for k in range(1, order + 1):
            for n_vec in enumerate_g2(k, xi):
                for n in n_vec:
                    if n not in moments:
                        moments[n] = script_l_n(model, n)
                weight = tau_angle**xi / np.prod([factorial(n) for n in n_vec])
                parts = [moments[n] for n in n_vec]
                total = total + weight * mixture(parts, base, n_segments).matrix
    return Superoperator(total, model.n_qubits)


def choi_matrix(channel: Superoperator) -> np.ndarray:
    """Unnormalized Choi matrix sum_ij |i><j| (x) channel(|i><j|); PSD iff CP."""
    d = channel.dim
    out = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            basis = np.zeros((d, d), dtype=complex)
            basis[i, j] = 1.0
            out[i * d : (i + 1) * d, j * d : (j + 1) * d] = channel.apply(basis)
    return out


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Half the nuclear norm of rho - sigma."""
    return 0.5 * float(np.linalg.norm(np.linalg.svd(rho - sigma, compute_uv=False), 1))


def random_pure_density(n_qubits: int, rng) -> np.ndarray:
    d = 2**n_qubits
    vec = rng.normal(size=d) + 1j * rng.normal(size=d)
    vec /= np.linalg.norm(vec)
    return np.outer(vec, vec.conj())


def channel_distance_surrogate(
    a: Superoperator, b: Superoperator, n_inputs: int = 20, rng_seed=7
) -> float:
    """Max output trace distance over a fixed set of random pure inputs.

    A lower bound on the diamond distance, used for one-sided checks that an
    analytic upper bound dominates.
    """
    rng = np.random.default_rng(rng_seed)
    worst = 0.0
    for _ in range(n_inputs):
        rho = random_pure_density(a.n_qubits, rng)
        worst = max(worst, trace_distance(a.apply(rho), b.apply(rho)))
    return worst
