"""Driven degenerate paramp coupled to a vacuum Markovian bath.

Everything here is in the frame rotating at half the pump frequency and
uses the quadratures ``X1, X2`` aligned with the amplified and
de-amplified directions, so the relaxation matrix is
``diag(lambda1, lambda2)``.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, RegimeError
from .gaussian import QuadCovariance, entropy_from_gammas


@dataclass(frozen=True)
class ParampParams:
    """Raw model parameters, all rates in the same inverse-time unit.

    Attributes
    ----------
    gamma : float
        Decay rate into the line, ``> 0``.
    f : float
        Pump amplitude, ``> 0``.
    delta_omega : float
        Detuning ``omega_s - omega_p / 2``.
    omega_p : float
        Pump frequency; only enters the power bookkeeping.
    """

    gamma: float = 1.0
    f: float = 0.4
    delta_omega: float = 0.0
    omega_p: float = 1.0

    def __post_init__(self):
        for name in ("gamma", "f", "omega_p"):
            v = getattr(self, name)
            if not (isinstance(v, numbers.Real) and math.isfinite(v) and v > 0):
                raise ContractViolation(f"{name} must be a positive finite number, got {v!r}")
        if not (isinstance(self.delta_omega, numbers.Real) and math.isfinite(self.delta_omega)):
            raise ContractViolation(f"delta_omega must be finite, got {self.delta_omega!r}")

    @classmethod
    def from_f_prime(cls, gamma: float, f: float, f_prime: float, omega_p: float = 1.0) -> "ParampParams":
        """Off-resonant operating point fixed by ``f`` and ``f' = sqrt(f^2 - dw^2)``."""
        if not 0 < f_prime <= f:
            raise RegimeError(f"need 0 < f' <= f, got f'={f_prime}, f={f}")
        return cls(gamma=gamma, f=f, delta_omega=math.sqrt(f * f - f_prime * f_prime), omega_p=omega_p)


@dataclass(frozen=True)
class DerivedParams:
    """Relaxation exponents and quadrature frame derived from :class:`ParampParams`."""

    lambda1: float
    lambda2: float
    f_prime: float
    phi: float
    norm_N: float
    params: ParampParams

    @property
    def gamma(self) -> float:
        return self.params.gamma

    @property
    def f(self) -> float:
        return self.params.f

    @property
    def delta_omega(self) -> float:
        return self.params.delta_omega

    @property
    def sin2phi(self) -> float:
        return self.params.delta_omega / self.params.f

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([self.lambda1, self.lambda2])

    @property
    def kappa(self) -> float:
        return self.gamma * self.f * self.norm_N


@dataclass(frozen=True, eq=False)
class NoiseMatrices:
    """Input-noise weight ``M``, its real part ``N`` and output kernel weight ``L``."""

    M_hat: np.ndarray
    N_hat: np.ndarray
    L_hat: np.ndarray


def derive(p: ParampParams) -> DerivedParams:
    """Derived parameters of the paramp.

    Raises
    ------
    RegimeError
        If ``|delta_omega| >= f`` or ``f' >= gamma / 2``.
    """
    if abs(p.delta_omega) >= p.f:
        raise RegimeError(
            f"need |delta_omega| < f (near resonance); got |{p.delta_omega}| >= {p.f}"
        )
    f_prime = math.sqrt((p.f - p.delta_omega) * (p.f + p.delta_omega))
    if f_prime >= 0.5 * p.gamma:
        raise RegimeError(
            f"need f' < gamma/2 (below threshold); got f'={f_prime} >= {0.5 * p.gamma}"
        )
    phi = 0.5 * math.atan2(p.delta_omega, f_prime)
    return DerivedParams(
        lambda1=-0.5 * p.gamma + f_prime,
        lambda2=-0.5 * p.gamma - f_prime,
        f_prime=f_prime,
        phi=phi,
        norm_N=p.f / f_prime,
        params=p,
    )


def noise_matrices(d: DerivedParams) -> NoiseMatrices:
    N = d.norm_N
    e = np.exp(2j * d.phi)
    M = N * np.array([[1.0, 1j / e], [-1j * e, 1.0]])
    Nh = N * np.array([[1.0, d.sin2phi], [d.sin2phi, 1.0]])
    L = np.diag([-d.f / d.lambda1, d.f / d.lambda2])
    return NoiseMatrices(M_hat=M, N_hat=Nh, L_hat=L)


def squeezed_initial_covariance(r: float, d: DerivedParams) -> QuadCovariance:
    """Squeezed vacuum of ``a(0)`` with squeezing ``r`` along ``Re a``.

    ``r = 0`` is the vacuum, which in the tilted quadratures reads ``N_hat``.
    """
    ch, sh = math.cosh(2 * r), math.sinh(2 * r)
    c2, s2 = 1.0 / d.norm_N, d.sin2phi
    N = d.norm_N
    return QuadCovariance(N * (ch + sh * c2), N * ch * s2, N * (ch - sh * c2))


def _rate_matrix(d: DerivedParams) -> np.ndarray:
    lam = d.lambdas
    return lam[:, None] + lam[None, :]


def covariance_at(t: float, C0: QuadCovariance, d: DerivedParams) -> QuadCovariance:
    """Symmetrized paramp covariance at time ``t`` from ``C0`` at ``t = 0``."""
    if t < 0:
        raise ContractViolation(f"t must be >= 0, got {t}")
    s = _rate_matrix(d)
    e = np.exp(s * t)
    N = noise_matrices(d).N_hat
    # expm1 keeps the noise term accurate at small t
    C = C0.matrix * e + d.gamma * N * np.expm1(s * t) / s
    return QuadCovariance.from_matrix(C)


def covariance_trajectory(ts, C0: QuadCovariance, d: DerivedParams) -> np.ndarray:
    """Vectorized :func:`covariance_at`; returns shape ``(len(ts), 2, 2)``."""
    ts = np.asarray(ts, dtype=float)
    if np.any(ts < 0):
        raise ContractViolation("times must be >= 0")
    s = _rate_matrix(d)
    N = noise_matrices(d).N_hat
    st = ts[:, None, None] * s
    return C0.matrix * np.exp(st) + d.gamma * N * np.expm1(st) / s


def asymptotic_covariance(d: DerivedParams) -> QuadCovariance:
    """Late-time fixed point of the covariance flow."""
    N = noise_matrices(d).N_hat
    return QuadCovariance.from_matrix(-d.gamma * N / _rate_matrix(d))


def asymptotic_det(d: DerivedParams) -> float:
    """Closed form ``1 + f^2 / (lambda1 lambda2)``."""
    return 1.0 + d.f ** 2 / (d.lambda1 * d.lambda2)


def thermal_entropy_from_det(det) -> np.ndarray | float:
    """Entropy of a single mode whose covariance has determinant ``det``."""
    det = np.asarray(det, dtype=float)
    out = np.array([entropy_from_gammas([g]) for g in np.sqrt(det).ravel()]).reshape(det.shape)
    return float(out) if out.ndim == 0 else out


def paramp_entropy(t, C0: QuadCovariance, d: DerivedParams):
    """Entanglement entropy of the paramp mode at time(s) ``t``, in nats."""
    scalar = np.ndim(t) == 0
    C = covariance_trajectory(np.atleast_1d(t), C0, d)
    det = C[:, 0, 0] * C[:, 1, 1] - C[:, 0, 1] * C[:, 1, 0]
    S = thermal_entropy_from_det(det)
    return float(S[0]) if scalar else S


def asymptotic_entropy(d: DerivedParams) -> float:
    return thermal_entropy_from_det(asymptotic_det(d))


def early_time_det(C0: QuadCovariance, d: DerivedParams, t: float) -> float:
    """Determinant of the paramp covariance to linear order in ``t``.

    Valid for ``t << 1 / gamma``.  For a squeezed-vacuum ``C0`` this
    reduces to ``1 + 4 gamma t sinh(r)^2``.
    """
    slope = d.gamma * d.norm_N * (C0.c11 + C0.c22 - 2 * C0.c12 * d.sin2phi)
    return C0.det * (1 - 2 * d.gamma * t) + slope * t


def streaming_det(r: float, d: DerivedParams, t: float) -> float:
    """``1 + 4 gamma t sinh(r)^2``: early-time determinant for squeezed input."""
    return 1.0 + 4.0 * d.gamma * t * math.sinh(r) ** 2


def streaming_entropy(r: float, d: DerivedParams, t):
    """Leading ``-gamma t sinh(r)^2 ln t`` growth of the entropy at small ``t``."""
    t = np.asarray(t, dtype=float)
    return -d.gamma * t * math.sinh(r) ** 2 * np.log(t)


def _require_resonant(d: DerivedParams) -> None:
    if d.delta_omega != 0:
        raise RegimeError(f"resonant formulas need delta_omega == 0, got {d.delta_omega}")


def resonant_exact_det(t, r: float, d: DerivedParams):
    """Exact determinant of the diagonal resonant covariance for squeezed input."""
    _require_resonant(d)
    t = np.asarray(t, dtype=float)
    l1, l2, g = d.lambda1, d.lambda2, d.gamma
    c11 = np.exp(2 * r + 2 * l1 * t) + g / (2 * l1) * np.expm1(2 * l1 * t)
    c22 = np.exp(-2 * r + 2 * l2 * t) + g / (2 * l2) * np.expm1(2 * l2 * t)
    return c11 * c22


def transition_parameter(r: float, d: DerivedParams) -> float:
    """``x = 2 |lambda1| exp(2r) / gamma``, the only memory of the initial state."""
    return 2 * abs(d.lambda1) * math.exp(2 * r) / d.gamma


def resonant_transition(t, r: float, d: DerivedParams):
    """Approximate determinant across the early/late crossover at resonance.

    Neglects ``exp(-2r)`` and replaces ``exp(2 lambda2 t)`` by
    ``exp(-2 gamma t)``; good for ``t`` past the initial streaming stage and
    ``t << exp(2r) / gamma``.
    """
    _require_resonant(d)
    if r <= 0:
        raise ContractViolation(f"r must be > 0, got {r}")
    t = np.asarray(t, dtype=float)
    x = transition_parameter(r, d)
    pref = d.gamma ** 2 / (4 * d.lambda1 * d.lambda2)
    out = pref * (1 - x * np.exp(-2 * d.gamma * t) + (x - 1) * np.exp(2 * d.lambda1 * t))
    return float(out) if out.ndim == 0 else out


def resonant_t_max(r: float, d: DerivedParams) -> float:
    """Time of the entropy maximum in the resonant crossover (needs ``x > 1``)."""
    _require_resonant(d)
    x = transition_parameter(r, d)
    if x <= 1:
        raise RegimeError(f"t_max exists only for x > 1, got x={x}")
    l1, l2 = abs(d.lambda1), abs(d.lambda2)
    return math.log(d.gamma * x / (l1 * (x - 1))) / (2 * l2)
