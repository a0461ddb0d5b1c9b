"""Closed-form pure dephasing channel with a time-dependent rate.

The qubit obeys ``d rho/dt = gamma(t) (Z rho Z - rho)`` with

    gamma(t) = 2 lam g0 sinh(t g/2) / (g cosh(t g/2) + lam sinh(t g/2)),
    g = sqrt(lam^2 - 2 g0 lam).

For ``lam >= 2 g0`` the square root is real (overdamped). Otherwise ``g = i w``
with ``w = sqrt(2 g0 lam - lam^2)`` and every hyperbolic function turns into its
trigonometric partner; the denominator then has zeros where ``gamma`` diverges.
Both branches are evaluated in real arithmetic.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .choi import ChoiMatrix, LindbladGenerator

PAULI_Z = np.diag([1.0, -1.0]).astype(np.complex128)
POLE_TOL = 1e-9
DEFAULT_POLE_EXCLUSION = 0.05


class PoleError(ValueError):
    """Raised when the dephasing rate is evaluated at (or next to) a pole."""

    def __init__(self, t: float, pole: float):
        super().__init__(f"gamma(t) diverges at t={pole:.12g} (requested t={t:.12g})")
        self.t = t
        self.pole = pole


class Regime(enum.Enum):
    OVERDAMPED = "overdamped"
    OSCILLATORY = "oscillatory"


@dataclass(frozen=True)
class DephasingParams:
    gamma0: float = 1.0
    lam: float = 1.0
    epsilon: float = 1e-4

    def __post_init__(self):
        for name in ("gamma0", "lam", "epsilon"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value}")

    @property
    def regime(self) -> Regime:
        return Regime.OVERDAMPED if self.lam >= 2 * self.gamma0 else Regime.OSCILLATORY

    @property
    def frequency(self) -> float:
        """|g|: the real root in the overdamped regime, w in the oscillatory one."""
        return math.sqrt(abs(self.lam**2 - 2 * self.gamma0 * self.lam))


def _numerator_denominator(p: DephasingParams, t):
    """Real-valued (sinh-like, denominator) pair with gamma = 2 lam g0 * num / den."""
    w = p.frequency
    x = np.asarray(t, dtype=float) * w / 2
    if p.regime is Regime.OSCILLATORY:
        return np.sin(x), w * np.cos(x) + p.lam * np.sin(x)
    if w == 0.0:
        # lam == 2 g0: sinh(xg)/g -> t/2, cosh -> 1
        half_t = np.asarray(t, dtype=float) / 2
        return half_t, 1.0 + p.lam * half_t
    return np.sinh(x), w * np.cosh(x) + p.lam * np.sinh(x)


def pole_locations(p: DephasingParams, t_max: float) -> list[float]:
    """Zeros of the rate denominator in ``(0, t_max]``.

    Oscillatory regime only: ``w cos(tw/2) + lam sin(tw/2) = 0`` means
    ``tan(tw/2) = -w/lam``, so ``tw/2 = pi - atan(w/lam) + n pi``.
    """
    if not t_max > 0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    if p.regime is Regime.OVERDAMPED:
        return []
    w = p.frequency
    first = 2.0 * (math.pi - math.atan(w / p.lam)) / w
    period = 2.0 * math.pi / w
    poles = []
    n = 0
    while first + n * period <= t_max:
        poles.append(first + n * period)
        n += 1
    return poles


def nearest_pole(p: DephasingParams, t: float) -> float | None:
    poles = pole_locations(p, max(t, 0.0) + 2 * math.pi / max(p.frequency, 1e-300) + 1.0)
    if not poles:
        return None
    return min(poles, key=lambda s: abs(s - t))


def _check_time(p: DephasingParams, t: float) -> None:
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    pole = nearest_pole(p, t)
    if pole is not None and abs(pole - t) <= POLE_TOL:
        raise PoleError(t, pole)


def gamma_t(p: DephasingParams, t: float) -> float:
    """Dephasing rate gamma(t)."""
    _check_time(p, t)
    num, den = _numerator_denominator(p, t)
    return float(2 * p.lam * p.gamma0 * num / den)


def gamma_values(p: DephasingParams, ts) -> np.ndarray:
    """Vectorized rate without pole checks; callers exclude pole neighborhoods."""
    num, den = _numerator_denominator(p, ts)
    return 2 * p.lam * p.gamma0 * num / den


def gamma_antiderivative(p: DephasingParams, t):
    """A primitive of gamma: ``lam t - 2 ln|den(t)|``, valid between poles."""
    _, den = _numerator_denominator(p, t)
    return p.lam * np.asarray(t, dtype=float) - 2.0 * np.log(np.abs(den))


def chi_t(p: DephasingParams, t: float) -> float:
    """Exponent chi = -4 g0 eps lam / (lam + g coth(tg/2)) of the Choi off-diagonal.

    Multiplying through by sinh(tg/2) avoids the coth singularity at t = 0, which
    also makes chi = -2 eps gamma(t) hold exactly.
    """
    _check_time(p, t)
    num, den = _numerator_denominator(p, t)
    return float(-4 * p.gamma0 * p.epsilon * p.lam * num / den)


def choi_closed_form(p: DephasingParams, t: float) -> ChoiMatrix:
    chi = chi_t(p, t)
    return _choi_from_chi(chi)


def _choi_from_chi(chi: float) -> ChoiMatrix:
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0] = m[3, 3] = 0.5
    m[0, 3] = m[3, 0] = 0.5 * math.exp(chi)
    return ChoiMatrix(2, m)


def choi_eigenvalues_closed_form(p: DephasingParams, t: float) -> np.ndarray:
    x = math.exp(chi_t(p, t))
    return np.sort(np.array([0.0, 0.0, (1 - x) / 2, (1 + x) / 2]))


def linear_entropy_closed_form(p: DephasingParams, t: float) -> float:
    """(1/3)(2 - 2 e^{2 chi}), evaluated with expm1 to keep the sign for tiny chi."""
    return -(2.0 / 3.0) * math.expm1(2 * chi_t(p, t))


def q_closed_form(p: DephasingParams, t: float) -> float:
    """Sum-form uncertainty quantity 5/4 - e^{2 chi} for the dephasing Choi state."""
    return 1.25 - math.exp(2 * chi_t(p, t))


def linear_entropy_values(p: DephasingParams, ts) -> np.ndarray:
    """Vectorized closed-form linear entropy; no pole checks."""
    chi = -2.0 * p.epsilon * gamma_values(p, ts)
    return -(2.0 / 3.0) * np.expm1(2 * chi)


def generator(p: DephasingParams) -> LindbladGenerator:
    """Lindblad generator with no Hamiltonian and a single Z jump at rate gamma(t)."""
    return LindbladGenerator(dim=2, jumps=[(lambda s: float(gamma_values(p, s)), PAULI_Z)])


def distance_to_pole(p: DephasingParams, t: float) -> float:
    pole = nearest_pole(p, t)
    return math.inf if pole is None else abs(t - pole)
