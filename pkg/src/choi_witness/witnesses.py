"""Entropy and uncertainty-relation witnesses, accumulated measures, time scans.

All witnesses accept any Hermitian unit-trace matrix. Positivity is *not*
required: a negative value on an indefinite Choi matrix is the signal that the
underlying intermediate map fails to be completely positive.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import dephasing
from .choi import DEFAULT_STEPS, choi_from_superop, intermediate_map
from .dephasing import DEFAULT_POLE_EXCLUSION, DephasingParams
from .linalg import HERMITIAN_TOL, as_matrix, hermitian_eigen, is_hermitian, symmetrize

log = logging.getLogger(__name__)

PSD_TOL = 1e-10
DEFAULT_MEASURE_STEP = 1e-3


def _check_state(m, tol: float) -> np.ndarray:
    m = as_matrix(m)
    if not is_hermitian(m, tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    tr = np.trace(m)
    if abs(tr - 1.0) > tol:
        raise ValueError(f"matrix trace is {tr:.6g}, expected 1")
    return m


def linear_entropy(m, tol: float = HERMITIAN_TOL) -> float:
    """d/(d-1) (1 - Tr m^2), with d the dimension of ``m`` itself."""
    m = _check_state(m, tol)
    d = m.shape[0]
    purity = float(np.sum(np.abs(symmetrize(m)) ** 2))
    return d / (d - 1) * (1.0 - purity)


def renyi_from_eigenvalues(eigenvalues: np.ndarray, alpha: float) -> float:
    if alpha <= 0 or alpha == 1:
        raise ValueError(f"Renyi order must lie in (0, 1) or (1, inf), got {alpha}")
    indefinite = eigenvalues[0] < -PSD_TOL
    integer_order = float(alpha).is_integer() and alpha >= 2
    if indefinite and not integer_order:
        raise ValueError(
            f"fractional order {alpha} is undefined on a matrix with negative eigenvalue "
            f"{eigenvalues[0]:.3g}; use an integer order >= 2"
        )
    if integer_order:
        total = float(np.sum(eigenvalues ** int(alpha)))
    else:
        total = float(np.sum(np.clip(eigenvalues, 0.0, None) ** alpha))
    if total <= 0:
        raise ValueError(f"Tr(rho^{alpha}) = {total:.3g} <= 0: logarithm undefined")
    return math.log2(total) / (1.0 - alpha)


def renyi_entropy(m, alpha: float, tol: float = HERMITIAN_TOL) -> float:
    """Base-2 Renyi entropy of order ``alpha`` computed from the eigenvalues of ``m``.

    On an indefinite ``m`` only integer orders >= 2 are accepted, since fractional
    powers of negative eigenvalues are not real.
    """
    m = _check_state(m, tol)
    return renyi_from_eigenvalues(hermitian_eigen(symmetrize(m), tol).eigenvalues, alpha)


def _observable(a, dim: int) -> np.ndarray:
    a = as_matrix(a)
    if a.shape != (dim, dim):
        raise ValueError(f"observable has shape {a.shape}, state has dimension {dim}")
    if not is_hermitian(a, HERMITIAN_TOL):
        raise ValueError("observable is not Hermitian")
    return a


class _SurTerms(NamedTuple):
    var_a: float
    var_b: float
    commutator: complex
    anticommutator: complex


def _sur_terms(a, b, rho) -> _SurTerms:
    rho = _check_state(rho, HERMITIAN_TOL)
    d = rho.shape[0]
    a = _observable(a, d)
    b = _observable(b, d)

    def expect(o):
        return np.trace(rho @ o)

    mean_a = expect(a).real
    mean_b = expect(b).real
    a_c = a - mean_a * np.eye(d)
    b_c = b - mean_b * np.eye(d)
    return _SurTerms(
        var_a=float(expect(a @ a).real - mean_a**2),
        var_b=float(expect(b @ b).real - mean_b**2),
        commutator=complex(expect(a @ b - b @ a)),
        anticommutator=complex(expect(a_c @ b_c + b_c @ a_c)),
    )


def sur_q(a, b, rho) -> float:
    """Sum-form Schroedinger-Robertson gap; negative means the relation is violated."""
    s = _sur_terms(a, b, rho)
    return s.var_a + s.var_b - math.sqrt(abs(s.commutator) ** 2 + abs(s.anticommutator) ** 2)


def sur_product_gap(a, b, rho) -> float:
    """Product-form gap  dA^2 dB^2 - |<[A,B]>|^2/4 - |<{A,B}>|^2/4  (centered anticommutator)."""
    s = _sur_terms(a, b, rho)
    return s.var_a * s.var_b - 0.25 * abs(s.commutator) ** 2 - 0.25 * abs(s.anticommutator) ** 2


# -- accumulated measures -----------------------------------------------------


class MeasureResult(NamedTuple):
    value: float
    excluded_length: float
    """Total time removed from the integration range around poles."""


def valid_segments(p: DephasingParams, t0: float, exclusion: float) -> tuple[list[tuple[float, float]], float]:
    """Split ``[0, t0]`` into pieces that stay at least ``exclusion`` away from every pole."""
    segments = []
    start = 0.0
    excluded = 0.0
    for pole in dephasing.pole_locations(p, t0 + exclusion):
        lo, hi = max(pole - exclusion, 0.0), pole + exclusion
        if lo > start:
            segments.append((start, min(lo, t0)))
        excluded += max(0.0, min(hi, t0) - max(lo, start))
        start = max(start, hi)
        if start >= t0:
            break
    if start < t0:
        segments.append((start, t0))
    return segments, excluded


def _segment_nodes(a: float, b: float, step: float) -> np.ndarray:
    # anchored at a so that extending b only appends nodes
    n_full = int(math.floor((b - a) / step * (1 + 1e-12)))
    nodes = a + step * np.arange(n_full + 1)
    if b - nodes[-1] > 1e-12 * max(1.0, b):
        nodes = np.append(nodes, b)
    else:
        nodes[-1] = b
    return nodes


def _accumulate(integrand, p: DephasingParams, t0: float, grid_step: float, exclusion: float) -> MeasureResult:
    if not t0 > 0:
        raise ValueError(f"t0 must be positive, got {t0}")
    if not grid_step > 0:
        raise ValueError(f"grid_step must be positive, got {grid_step}")
    segments, excluded = valid_segments(p, t0, exclusion)
    pieces = []
    for a, b in segments:
        if b <= a:
            continue
        nodes = _segment_nodes(a, b, grid_step)
        f = integrand(nodes)
        pieces.extend(0.5 * (f[:-1] + f[1:]) * np.diff(nodes))
    # fsum is correctly rounded, so the result cannot shrink as t0 grows
    return MeasureResult(math.fsum(pieces), excluded)


def measure_ns(
    p: DephasingParams,
    t0: float,
    grid_step: float = DEFAULT_MEASURE_STEP,
    exclusion: float = DEFAULT_POLE_EXCLUSION,
) -> MeasureResult:
    """Accumulated negative linear entropy, the integral of max(0, -S_l(t)) on [0, t0]."""
    return _accumulate(
        lambda ts: np.maximum(0.0, -dephasing.linear_entropy_values(p, ts)), p, t0, grid_step, exclusion
    )


def measure_ne(
    p: DephasingParams,
    t0: float,
    grid_step: float = DEFAULT_MEASURE_STEP,
    exclusion: float = DEFAULT_POLE_EXCLUSION,
) -> MeasureResult:
    """Accumulated negative rate, the integral of max(0, -2 gamma(t)) on [0, t0]."""
    return _accumulate(
        lambda ts: np.maximum(0.0, -2.0 * dephasing.gamma_values(p, ts)), p, t0, grid_step, exclusion
    )


# -- time scans ---------------------------------------------------------------


@dataclass
class WitnessSample:
    t: float
    gamma: float
    linear_entropy: float
    renyi: dict[int, float]
    q: float | None
    choi_eigenvalues: np.ndarray
    numerical_linear_entropy: float | None = None
    numerical_renyi: dict[int, float] = field(default_factory=dict)
    discrepancy: float | None = None
    """Largest elementwise |closed form - RK4| Choi difference (mode ``both``)."""

    @property
    def lam_min(self) -> float:
        return float(self.choi_eigenvalues[0])


class ScanResult(NamedTuple):
    samples: list[WitnessSample]
    skipped: list[float]
    """Grid points dropped because they fell inside a pole exclusion zone."""


MODES = ("closed_form", "numerical", "both")


def _witness_values(choi: np.ndarray, orders: Sequence[int]):
    eigenvalues = hermitian_eigen(symmetrize(choi)).eigenvalues
    s_l = linear_entropy(choi)
    renyi = {int(a): renyi_from_eigenvalues(eigenvalues, a) for a in orders}
    return s_l, renyi, eigenvalues


def witness_scan(
    p: DephasingParams,
    t_grid: Iterable[float],
    orders: Sequence[int] = (2, 5, 10),
    mode: str = "closed_form",
    exclusion: float = DEFAULT_POLE_EXCLUSION,
    steps: int = DEFAULT_STEPS,
) -> ScanResult:
    """Evaluate every witness on the dephasing Choi state at each grid time.

    ``mode`` picks the Choi matrix source: the closed form, RK4 propagation of the
    master equation, or both (entropies from the closed form, RK4 values and the
    elementwise discrepancy recorded alongside).
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    gen = dephasing.generator(p)
    samples: list[WitnessSample] = []
    skipped: list[float] = []
    for t in t_grid:
        t = float(t)
        if dephasing.distance_to_pole(p, t) <= exclusion:
            log.info("skipping t=%.6g: within %.3g of a pole", t, exclusion)
            skipped.append(t)
            continue
        gamma = dephasing.gamma_t(p, t)
        q = dephasing.q_closed_form(p, t)
        closed = numerical = None
        if mode in ("closed_form", "both"):
            closed = dephasing.choi_closed_form(p, t).matrix
        if mode in ("numerical", "both"):
            numerical = symmetrize(choi_from_superop(intermediate_map(gen, t, p.epsilon, steps)).matrix)
        primary = closed if closed is not None else numerical
        s_l, renyi, eigenvalues = _witness_values(primary, orders)
        sample = WitnessSample(t, gamma, s_l, renyi, q, eigenvalues)
        if mode == "both":
            sample.numerical_linear_entropy, sample.numerical_renyi, _ = _witness_values(numerical, orders)
            sample.discrepancy = float(np.max(np.abs(closed - numerical)))
        samples.append(sample)
    return ScanResult(samples, skipped)
