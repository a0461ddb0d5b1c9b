"""Superoperators, Lindblad propagation and Choi matrices.

Vectorization stacks columns, so ``vec(A X B) = (B^T kron A) vec(X)`` and a
Kraus channel ``X -> sum_k K X K^dagger`` has superoperator
``sum_k conj(K) kron K``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .linalg import HERMITIAN_TOL, as_matrix, hermitian_eigen, is_hermitian, symmetrize

DEFAULT_STEPS = 16


def vec(x: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization; also works on stacks of shape ``(..., d, d)``."""
    x = np.asarray(x)
    return np.swapaxes(x, -1, -2).reshape(*x.shape[:-2], -1)


def unvec(v: np.ndarray, d: int) -> np.ndarray:
    v = np.asarray(v)
    return np.swapaxes(v.reshape(*v.shape[:-1], d, d), -1, -2)


def matrix_units(d: int) -> np.ndarray:
    """The d*d matrix units E_ij, ordered so that ``units[k]`` has ``vec(units[k]) = e_k``."""
    units = np.zeros((d * d, d, d), dtype=np.complex128)
    for k in range(d * d):
        j, i = divmod(k, d)
        units[k, i, j] = 1.0
    return units


@dataclass(frozen=True)
class Superoperator:
    dim: int
    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape != (self.dim**2, self.dim**2):
            raise ValueError(f"superoperator for d={self.dim} must be {self.dim**2}x{self.dim**2}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, d: int) -> "Superoperator":
        return cls(d, np.eye(d * d, dtype=np.complex128))

    @classmethod
    def from_kraus(cls, kraus: Sequence[np.ndarray]) -> "Superoperator":
        ks = [as_matrix(k) for k in kraus]
        return cls(ks[0].shape[0], sum(np.kron(k.conj(), k) for k in ks))

    def apply(self, rho) -> np.ndarray:
        return unvec(self.matrix @ vec(as_matrix(rho)), self.dim)

    def compose(self, first: "Superoperator") -> "Superoperator":
        """``self`` after ``first``."""
        return Superoperator(self.dim, self.matrix @ first.matrix)

    def trace_preservation_error(self) -> float:
        traces = np.array([np.trace(self.apply(e)) for e in matrix_units(self.dim)])
        return float(np.max(np.abs(traces - vec(np.eye(self.dim)))))

    def hermiticity_preservation_error(self) -> float:
        d = self.dim
        # Lambda(E_ij)^dagger must equal Lambda(E_ji)
        out = unvec(self.matrix.T, d)
        worst = 0.0
        for i in range(d):
            for j in range(d):
                a = out[j * d + i]
                b = out[i * d + j]
                worst = max(worst, float(np.max(np.abs(a.conj().T - b))))
        return worst


@dataclass(frozen=True)
class ChoiMatrix:
    system_dim: int
    matrix: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        return hermitian_eigen(symmetrize(self.matrix)).eigenvalues

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))


Rate = Callable[[float], float]


@dataclass
class LindbladGenerator:
    """Time-local generator ``-i[H(t), rho] + sum_k rate_k(t) (L rho L^+ - {L^+ L, rho}/2)``.

    Rates may go negative; that is the non-Markovian regime.
    """

    dim: int
    hamiltonian: Callable[[float], np.ndarray] | None = None
    jumps: list[tuple[Rate, np.ndarray]] = field(default_factory=list)

    def __post_init__(self):
        self.jumps = [(rate, as_matrix(op)) for rate, op in self.jumps]
        for _, op in self.jumps:
            if op.shape != (self.dim, self.dim):
                raise ValueError("jump operator dimension does not match generator")


def lindblad_action(g: LindbladGenerator, t: float, rho) -> np.ndarray:
    """Right-hand side d(rho)/dt at time ``t``.

    ``rho`` may also be a stack of shape ``(n, d, d)``; each slice is mapped
    independently.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape[-2:] != (g.dim, g.dim):
        raise ValueError(f"rho has shape {rho.shape[-2:]}, generator has dim {g.dim}")
    out = np.zeros_like(rho)
    if g.hamiltonian is not None:
        h = as_matrix(g.hamiltonian(t))
        if not is_hermitian(h, HERMITIAN_TOL):
            raise ValueError(f"Hamiltonian is not Hermitian at t={t}")
        out += -1j * (h @ rho - rho @ h)
    for rate, op in g.jumps:
        gamma = float(rate(t))
        if gamma == 0.0:
            continue
        op_dag = op.conj().T
        n = op_dag @ op
        out += gamma * (op @ rho @ op_dag - 0.5 * (n @ rho + rho @ n))
    return out


def intermediate_map(g: LindbladGenerator, t: float, eps: float, steps: int = DEFAULT_STEPS) -> Superoperator:
    """The map Lambda(t, t+eps), obtained by RK4 propagation of every matrix unit.

    :param steps: number of equal RK4 substeps covering ``[t, t + eps]``.
    """
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if int(steps) != steps or steps < 1:
        raise ValueError(f"steps must be a positive integer, got {steps}")
    d = g.dim
    h = eps / steps
    state = matrix_units(d)
    for k in range(int(steps)):
        s = t + k * h
        k1 = lindblad_action(g, s, state)
        k2 = lindblad_action(g, s + 0.5 * h, state + 0.5 * h * k1)
        k3 = lindblad_action(g, s + 0.5 * h, state + 0.5 * h * k2)
        k4 = lindblad_action(g, s + h, state + h * k3)
        state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    # column k of the superoperator is vec(Lambda(E_k))
    return Superoperator(d, vec(state).T)


def max_entangled_state(d: int) -> np.ndarray:
    """Projector onto (1/sqrt d) sum_i |i>|i>."""
    if int(d) != d or d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d}")
    psi = np.eye(d, dtype=np.complex128).reshape(-1) / np.sqrt(d)
    return np.outer(psi, psi.conj())


def choi_from_superop(s: Superoperator) -> ChoiMatrix:
    """(id kron Lambda)(|psi><psi|): block (i, j) holds Lambda(E_ij)/d."""
    d = s.dim
    blocks = unvec(s.matrix.T, d)  # blocks[k] = Lambda(E_k) with E_k = E_{k%d, k//d}
    choi = np.zeros((d * d, d * d), dtype=np.complex128)
    for j in range(d):
        for i in range(d):
            choi[i * d:(i + 1) * d, j * d:(j + 1) * d] = blocks[j * d + i] / d
    return ChoiMatrix(d, choi)


def _inverse_sqrt(s: np.ndarray) -> np.ndarray | None:
    eig = hermitian_eigen(s)
    if eig.eigenvalues[0] < 1e-12:
        return None
    v = eig.eigenvectors
    return (v / np.sqrt(eig.eigenvalues)) @ v.conj().T


def random_kraus(d: int, kraus_count: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Gaussian Kraus operators normalized by ``S^{-1/2}`` with ``S = sum K^+ K``."""
    if not 1 <= kraus_count <= d * d:
        raise ValueError(f"kraus_count must lie in [1, {d * d}], got {kraus_count}")
    while True:
        ks = rng.standard_normal((kraus_count, d, d)) + 1j * rng.standard_normal((kraus_count, d, d))
        s = sum(k.conj().T @ k for k in ks)
        inv_sqrt = _inverse_sqrt(symmetrize(s))
        if inv_sqrt is not None:
            return [k @ inv_sqrt for k in ks]


def random_cptp(d: int, kraus_count: int, seed: int | np.random.Generator) -> Superoperator:
    """Seeded random CPTP map. Uses numpy's PCG64 via ``default_rng(seed)``."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return Superoperator.from_kraus(random_kraus(d, kraus_count, rng))
