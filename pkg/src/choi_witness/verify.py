"""Invariant suite run by ``choi-witness verify``.

Every check returns a :class:`CheckResult`; none of them raise on failure.
Tolerances are fixed numbers, so verdicts do not depend on the RNG seed.
"""
from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np

from . import dephasing
from .choi import choi_from_superop, intermediate_map, random_cptp
from .dephasing import DephasingParams
from .linalg import hermitian_eigen, symmetrize
from .witnesses import linear_entropy, renyi_from_eigenvalues

CPTP_DRAWS = 1000
CPTP_TOL = 1e-9
ORACLE_POINTS = 50
ORACLE_TOL = 1e-5
ORACLE_REFERENCE_EPS = 1e-4
ORDER_CHECK = dict(t=1.0, eps=0.5, steps=16)
ORDER_RATIO_BAND = (14.0, 18.0)


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str
    expected_failure: bool = False
    """Failure that the configuration makes unavoidable; does not fail the suite."""

    @property
    def verdict(self) -> str:
        if self.passed:
            return "PASS"
        return "XFAIL" if self.expected_failure else "FAIL"


def theorem_property(seed: int, draws: int = CPTP_DRAWS, orders=(2, 5, 10)) -> CheckResult:
    """Random CPTP qubit maps must give PSD unit-trace Choi states with nonnegative entropies."""
    rng = np.random.default_rng(seed)
    violations = []
    worst_eig = math.inf
    for i in range(draws):
        kraus_count = 1 + i % 4
        choi = symmetrize(choi_from_superop(random_cptp(2, kraus_count, rng)).matrix)
        eig = hermitian_eigen(choi).eigenvalues
        worst_eig = min(worst_eig, eig[0])
        tr = np.trace(choi).real
        s_l = linear_entropy(choi)
        renyi = [renyi_from_eigenvalues(eig, a) for a in orders]
        ok = (
            eig[0] >= -CPTP_TOL
            and eig[-1] <= 1 + CPTP_TOL
            and abs(tr - 1) <= CPTP_TOL
            and -CPTP_TOL <= s_l <= 1 + CPTP_TOL
            and min(renyi) >= -CPTP_TOL
        )
        if not ok:
            violations.append(i)
    return CheckResult(
        "theorem: random CPTP maps have PSD Choi and nonnegative entropies",
        not violations,
        f"{draws} draws, {len(violations)} violations, smallest eigenvalue {worst_eig:.3e}",
    )


def oracle_grid(p: DephasingParams, t_max: float, exclusion: float, count: int = ORACLE_POINTS) -> list[float]:
    """``count`` evenly spread times whose whole window [t, t+eps] stays clear of poles."""
    poles = dephasing.pole_locations(p, t_max + p.epsilon + exclusion + 1.0)

    def clear(t):
        return all(not (t - exclusion <= s <= t + p.epsilon + exclusion) for s in poles)

    candidates = [t for t in np.linspace(0, t_max, 20 * count + 1)[1:] if clear(t)]
    picks = np.linspace(0, len(candidates) - 1, count).round().astype(int)
    return [float(candidates[i]) for i in picks]


def oracle_tolerance(epsilon: float) -> float:
    # the closed form is first order in eps; its error grows like eps^2
    return ORACLE_TOL * max(1.0, (epsilon / ORACLE_REFERENCE_EPS) ** 2)


def closed_form_oracle(p: DephasingParams, t_max: float, exclusion: float, steps: int = 16) -> CheckResult:
    gen = dephasing.generator(p)
    tol = oracle_tolerance(p.epsilon)
    worst = 0.0
    worst_t = None
    for t in oracle_grid(p, t_max, exclusion):
        numerical = choi_from_superop(intermediate_map(gen, t, p.epsilon, steps)).matrix
        diff = float(np.max(np.abs(numerical - dephasing.choi_closed_form(p, t).matrix)))
        if diff > worst:
            worst, worst_t = diff, t
    detail = f"{ORACLE_POINTS} points, max elementwise difference {worst:.3e} at t={worst_t} (tol {tol:.1e})"
    coarse = p.epsilon > ORACLE_REFERENCE_EPS
    if worst > tol and coarse:
        detail += "; closed form is first order in eps, expected to fail at this eps"
    return CheckResult("oracle: RK4 Choi matches closed form", worst <= tol, detail, expected_failure=coarse)


def exact_offdiagonal(p: DephasingParams, t: float, eps: float) -> float:
    """Exact coherence factor exp(-2 * integral of gamma over [t, t+eps])."""
    f = dephasing.gamma_antiderivative
    return math.exp(-2.0 * (f(p, t + eps) - f(p, t)))


def rk4_order(p: DephasingParams) -> CheckResult:
    t, eps, steps = ORDER_CHECK["t"], ORDER_CHECK["eps"], ORDER_CHECK["steps"]
    poles = dephasing.pole_locations(p, t + eps + 1.0)
    if any(t - 0.1 <= s <= t + eps + 0.1 for s in poles):
        # shrink the window in front of the first pole
        eps = min(eps, 0.5 * (poles[0] - 0.1))
        t = 0.5 * eps
    gen = dephasing.generator(p)
    exact = exact_offdiagonal(p, t, eps)
    unit = np.array([[0, 1], [0, 0]])
    errors = []
    for n in (steps, 2 * steps):
        out = intermediate_map(gen, t, eps, n).apply(unit)
        errors.append(abs(out[0, 1] - exact))
    ratio = errors[0] / errors[1] if errors[1] > 0 else math.inf
    lo, hi = ORDER_RATIO_BAND
    return CheckResult(
        "rk4: halving the substep divides the error by ~16",
        bool(lo <= ratio <= hi),
        f"t={t:.3g}, window {eps:.3g}: errors {errors[0]:.3e} -> {errors[1]:.3e}, ratio {ratio:.2f}",
    )


def sign_equivalence(p: DephasingParams, t_max: float, grid_step: float, exclusion: float) -> CheckResult:
    """Negative linear entropy exactly where gamma < 0 on the scan grid."""
    mismatches = []
    n = 0
    for t in scan_grid(t_max, grid_step):
        if dephasing.distance_to_pole(p, t) <= exclusion:
            continue
        gamma = dephasing.gamma_t(p, t)
        if abs(gamma) <= 1e-8:
            continue
        n += 1
        s_l = linear_entropy(dephasing.choi_closed_form(p, t).matrix)
        if (s_l < 0) != (gamma < 0):
            mismatches.append(t)
    return CheckResult(
        "sign: S_l < 0 iff gamma < 0",
        not mismatches,
        f"{n} grid points, {len(mismatches)} mismatches" + (f" (first t={mismatches[0]})" if mismatches else ""),
    )


def composition(p: DephasingParams, t: float = 1.0) -> CheckResult:
    gen = dephasing.generator(p)
    eps = p.epsilon
    whole = intermediate_map(gen, t, 2 * eps, 32)
    split = intermediate_map(gen, t + eps, eps, 16).compose(intermediate_map(gen, t, eps, 16))
    diff = float(np.max(np.abs(whole.matrix - split.matrix)))
    return CheckResult("composition: L(t,t+2e) = L(t+e,t+2e) L(t,t+e)", diff <= 1e-9, f"difference {diff:.3e}")


def scan_grid(t_max: float, grid_step: float) -> np.ndarray:
    n = int(math.floor(t_max / grid_step + 1e-9))
    return np.round(np.arange(1, n + 1) * grid_step, 12)


def run_all(
    p: DephasingParams,
    t_max: float = 10.0,
    grid_step: float = 0.01,
    exclusion: float = dephasing.DEFAULT_POLE_EXCLUSION,
    seed: int = 42,
    orders=(2, 5, 10),
) -> list[CheckResult]:
    checks: list[Callable[[], CheckResult]] = [
        lambda: theorem_property(seed, orders=orders),
        lambda: closed_form_oracle(p, t_max, exclusion),
        lambda: sign_equivalence(p, t_max, grid_step, exclusion),
        lambda: rk4_order(p),
        lambda: composition(p),
    ]
    return [check() for check in checks]


def suite_passed(results: list[CheckResult]) -> bool:
    return all(r.passed or r.expected_failure for r in results)
