"""Gabor-atom discretization of the paramp output line at late times.

The output quadratures are cut into windows of width ``delta_t`` and
expanded in the cosine harmonics

    u_k(t) = eta_k / sqrt(delta_t) * cos(omega_k t),  omega_k = pi k / delta_t,

with ``eta_0 = 1`` and ``eta_k = sqrt(2)`` otherwise.  All quantities
below neglect terms of order ``exp(-|lambda| delta_t)`` and are the same
for every window, so no window index appears in the API.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import ContractViolation, NumericalFailure, ResourceLimitError
from .gaussian import MultimodeCovariance, QuadCovariance, SymplecticSpectrum, clamp_gammas, TOL_PHYS
from .paramp import DerivedParams, noise_matrices

DEFAULT_K_MAX_CAP = 8192
#: below this value of delta_t * |lambda1| the neglected boundary tails matter
MIN_WINDOW_RELAXATIONS = 5.0


class ShortWindowWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ModeGrid:
    """Window width and harmonic cutoff of the cosine transform."""

    delta_t: float
    k_max: int

    def __post_init__(self):
        if not self.delta_t > 0:
            raise ContractViolation(f"delta_t must be > 0, got {self.delta_t}")
        if int(self.k_max) != self.k_max or self.k_max < 0:
            raise ContractViolation(f"k_max must be a non-negative integer, got {self.k_max}")
        object.__setattr__(self, "k_max", int(self.k_max))

    @property
    def n_modes(self) -> int:
        return self.k_max + 1

    @property
    def ks(self) -> np.ndarray:
        return np.arange(self.k_max + 1)

    @property
    def omegas(self) -> np.ndarray:
        return np.pi * self.ks / self.delta_t

    @property
    def etas(self) -> np.ndarray:
        e = np.full(self.k_max + 1, np.sqrt(2.0))
        e[0] = 1.0
        return e

    def omega(self, k: int) -> float:
        return np.pi * k / self.delta_t

    def eta(self, k: int) -> float:
        return 1.0 if k == 0 else float(np.sqrt(2.0))

    def window_function(self, k: int, t):
        """``u_k`` on the window ``[0, delta_t]`` (zero outside)."""
        t = np.asarray(t, dtype=float)
        inside = (t >= 0) & (t <= self.delta_t)
        return np.where(inside, self.eta(k) / np.sqrt(self.delta_t) * np.cos(self.omega(k) * t), 0.0)

    def parity_order(self) -> np.ndarray:
        """Mode indices with all even ``k`` first, then all odd ``k``."""
        return np.concatenate([self.ks[0::2], self.ks[1::2]])

    def with_k_max(self, k_max: int) -> "ModeGrid":
        return ModeGrid(self.delta_t, k_max)


@dataclass(frozen=True, eq=False)
class CoherenceMatrix:
    """Second moments of the window operators ``B_k``.

    ``kind == "off_diagonal"`` holds ``<B_k B_k'>``;
    ``kind == "diagonal"`` holds ``<B_k^dag B_k'>``.
    """

    entries: np.ndarray
    kind: Literal["off_diagonal", "diagonal"]


def _check_window(d: DerivedParams, g: ModeGrid) -> None:
    if g.delta_t * abs(d.lambda1) < MIN_WINDOW_RELAXATIONS:
        warnings.warn(
            f"delta_t*|lambda1| = {g.delta_t * abs(d.lambda1):.3g} < {MIN_WINDOW_RELAXATIONS}; "
            "neglected boundary tails are not small",
            ShortWindowWarning,
            stacklevel=3,
        )


def _check_cap(g: ModeGrid, cap: int | None) -> None:
    cap = DEFAULT_K_MAX_CAP if cap is None else cap
    if g.k_max > cap:
        raise ResourceLimitError(
            f"k_max={g.k_max} exceeds the cap {cap} (matrix size {2 * (g.k_max + 1)})"
        )


def _lam(d: DerivedParams, alpha: int) -> float:
    if alpha not in (1, 2):
        raise ContractViolation(f"alpha must be 1 or 2, got {alpha}")
    return d.lambda1 if alpha == 1 else d.lambda2


def f_kernel(k: int, k_prime: int, alpha: int, d: DerivedParams, g: ModeGrid) -> float:
    """Windowed relaxation kernel ``F_kk'(alpha)`` for a single entry."""
    if not (0 <= k <= g.k_max and 0 <= k_prime <= g.k_max):
        raise ContractViolation(f"k, k' must lie in [0, {g.k_max}], got {k}, {k_prime}")
    lam = _lam(d, alpha)
    dk = lam * lam + g.omega(k) ** 2
    dkp = lam * lam + g.omega(k_prime) ** 2
    value = 1.0 / dk if k == k_prime else 0.0
    if (k + k_prime) % 2 == 0:
        value -= abs(lam) * g.eta(k) * g.eta(k_prime) / (g.delta_t * dk * dkp)
    return value


def kernel_vector(alpha: int, d: DerivedParams, g: ModeGrid) -> np.ndarray:
    """``v_k = eta_k / (lambda^2 + omega_k^2)``; the boundary term is ``-|lambda|/delta_t v v^T``."""
    lam = _lam(d, alpha)
    return g.etas / (lam * lam + g.omegas ** 2)


def f_matrix(alpha: int, d: DerivedParams, g: ModeGrid, method: Literal["rank1", "entrywise"] = "rank1",
             k_max_cap: int | None = None) -> np.ndarray:
    """Full ``(k_max+1)^2`` kernel matrix.

    ``"rank1"`` builds the diagonal plus a parity-masked outer product;
    ``"entrywise"`` loops over :func:`f_kernel` and exists as a cross-check.
    """
    _check_cap(g, k_max_cap)
    if method == "entrywise":
        n = g.n_modes
        return np.array([[f_kernel(i, j, alpha, d, g) for j in range(n)] for i in range(n)])
    if method != "rank1":
        raise ContractViolation(f"unknown method {method!r}")
    lam = _lam(d, alpha)
    v = kernel_vector(alpha, d, g)
    ks = g.ks
    same_parity = (ks[:, None] + ks[None, :]) % 2 == 0
    F = -(abs(lam) / g.delta_t) * np.outer(v, v) * same_parity
    F[np.diag_indices_from(F)] += 1.0 / (lam * lam + g.omegas ** 2)
    return F


def output_covariance(d: DerivedParams, g: ModeGrid, k_max_cap: int | None = None) -> MultimodeCovariance:
    """Covariance of the window quadratures ``Z_{alpha k}``, interleaved by ``k``."""
    _check_cap(g, k_max_cap)
    _check_window(d, g)
    n = g.n_modes
    Nh = noise_matrices(d).N_hat
    c = 2.0 * d.gamma * d.f
    C = np.zeros((2 * n, 2 * n))
    C[0::2, 0::2] = c * f_matrix(1, d, g, k_max_cap=k_max_cap)
    C[1::2, 1::2] = -c * f_matrix(2, d, g, k_max_cap=k_max_cap)
    C += np.kron(np.eye(n), Nh)
    return MultimodeCovariance(C)


def diagonal_block(omega: float, d: DerivedParams) -> QuadCovariance:
    """Covariance of one harmonic when the boundary term is dropped."""
    if omega < 0:
        raise ContractViolation(f"omega must be >= 0, got {omega}")
    N = d.norm_N
    g2f = 2.0 * d.gamma * d.f_prime
    return QuadCovariance(
        N * (1.0 + g2f / (d.lambda1 ** 2 + omega ** 2)),
        N * d.sin2phi,
        N * (1.0 - g2f / (d.lambda2 ** 2 + omega ** 2)),
    )


def offdiag_coherences(d: DerivedParams, g: ModeGrid, k_max_cap: int | None = None) -> CoherenceMatrix:
    e = np.exp(2j * d.phi)
    B = 0.5 * d.kappa * (f_matrix(1, d, g, k_max_cap=k_max_cap) / e + e * f_matrix(2, d, g, k_max_cap=k_max_cap))
    return CoherenceMatrix(B, "off_diagonal")


def diag_coherences(d: DerivedParams, g: ModeGrid, k_max_cap: int | None = None) -> CoherenceMatrix:
    B = 0.5 * d.kappa * (f_matrix(1, d, g, k_max_cap=k_max_cap) - f_matrix(2, d, g, k_max_cap=k_max_cap))
    return CoherenceMatrix(B.astype(complex), "diagonal")


def diag_occupations(d: DerivedParams, g: ModeGrid) -> np.ndarray:
    """``<B_k^dag B_k>`` for every harmonic, without building a matrix."""
    def f_diag(lam):
        den = lam * lam + g.omegas ** 2
        return 1.0 / den - abs(lam) / g.delta_t * (g.etas / den) ** 2

    return 0.5 * d.kappa * (f_diag(d.lambda1) - f_diag(d.lambda2))


def quadratures_from_coherences(offdiag: CoherenceMatrix, diag: CoherenceMatrix, d: DerivedParams) -> MultimodeCovariance:
    """Rebuild the quadrature covariance from ``<B B>`` and ``<B^dag B>``.

    Inverts ``B = sqrt(N)/2 (Z1 e^{-i phi} + i Z2 e^{i phi})`` together with
    its adjoint and symmetrizes.
    """
    if offdiag.kind != "off_diagonal" or diag.kind != "diagonal":
        raise ContractViolation("expected (off_diagonal, diagonal) coherence matrices")
    BB = offdiag.entries
    BdB = diag.entries
    n = BB.shape[0]
    eye = np.eye(n)
    # second moments of xi = (B_0, B_0^dag, B_1, B_1^dag, ...)
    S = np.zeros((2 * n, 2 * n), dtype=complex)
    S[0::2, 0::2] = BB
    S[1::2, 1::2] = BB.conj()
    S[0::2, 1::2] = BdB.T + eye
    S[1::2, 0::2] = BdB
    ph = np.exp(1j * d.phi)
    T = 0.5 * np.sqrt(d.norm_N) * np.array([[1 / ph, 1j * ph], [ph, -1j / ph]])
    Tinv = np.kron(eye, np.linalg.inv(T))
    Z = Tinv @ S @ Tinv.T
    C = 0.5 * (Z + Z.T)
    if np.max(np.abs(C.imag)) > 1e-9 * max(1.0, np.max(np.abs(C.real))):
        raise NumericalFailure("reconstructed quadrature covariance is not real", size=2 * n)
    return MultimodeCovariance(C.real)


def corZ_continuum(t: float, t_prime: float, d: DerivedParams) -> tuple[np.ndarray, np.ndarray]:
    """Late-time correlator ``<Z_a(t) Z_b(t')>`` of the continuous output.

    Returns the smooth part ``gamma L_ab h_ab(t, t')`` and, separately, the
    weight ``M_ab`` multiplying ``delta(t - t')``.
    """
    nm = noise_matrices(d)
    lam = d.lambdas
    tau = t - t_prime
    if tau >= 0:
        h = np.exp(lam[:, None] * tau) * np.ones((1, 2))
    else:
        h = np.ones((2, 1)) * np.exp(lam[None, :] * (-tau))
    smooth = (d.gamma * nm.L_hat * h).astype(complex)
    return smooth, nm.M_hat.copy()


def equal_time_occupation(d: DerivedParams) -> float:
    """Late-time ``<b_out^dag(t) b_out(t)>`` excluding the vacuum delta.

    Combines the smooth part of :func:`corZ_continuum` at ``t = t'`` with
    ``b_out = sqrt(N)/2 (Z1 e^{-i phi} + i Z2 e^{i phi})``.
    """
    smooth, _ = corZ_continuum(0.0, 0.0, d)
    ph = np.exp(1j * d.phi)
    c = 0.5 * np.sqrt(d.norm_N) * np.array([1 / ph, 1j * ph])
    return float(np.real(c.conj() @ smooth @ c))


def _block_gammas(d: DerivedParams, g: ModeGrid, parity: int) -> np.ndarray:
    ks = g.ks[parity::2]
    n = len(ks)
    if n == 0:
        return np.empty(0)
    w2 = (np.pi * ks / g.delta_t) ** 2
    eta = np.where(ks == 0, 1.0, np.sqrt(2.0))
    N, c = d.norm_N, 2.0 * d.gamma * d.f
    d1 = d.lambda1 ** 2 + w2
    d2 = d.lambda2 ** 2 + w2
    Da = N + c / d1
    Db = N - c / d2
    # Da*Db - s^2 is the determinant of each diagonal block, which is 1
    resid = np.max(np.abs(Da * Db - (N * d.sin2phi) ** 2 - 1.0))
    if resid > 1e-10:
        raise NumericalFailure(f"diagonal blocks are not unimodular (defect {resid:.2e})", size=2 * n)
    u = eta / d1
    w = eta / d2
    a = c * abs(d.lambda1) / g.delta_t
    b = c * abs(d.lambda2) / g.delta_t
    # A = Da - a u u^T, B = Db + b w w^T; gamma^2 = eig(A B - s^2) = eig(I + U V^T)
    p = b * (Da * w - a * (u @ w) * u)
    small = np.array([
        [w @ p, -a * (w @ u)],
        [u @ (Db * p), -a * (u @ (Db * u))],
    ])
    mu = np.linalg.eigvals(small)
    if np.max(np.abs(mu.imag)) > 1e-9 * max(1.0, np.max(np.abs(mu.real))):
        raise NumericalFailure("complex symplectic eigenvalue in structured path", size=2 * n)
    mu = mu.real[np.argsort(-np.abs(mu.real))][:min(n, 2)]
    gam = np.ones(n)
    gam[:len(mu)] = np.sqrt(np.clip(1.0 + mu, 0.0, None))
    return gam


def structured_spectrum(d: DerivedParams, g: ModeGrid, tol: float = TOL_PHYS,
                        k_max_cap: int | None = None) -> SymplecticSpectrum:
    """Symplectic spectrum of :func:`output_covariance` in ``O(k_max)`` time.

    Within each parity class of ``k`` the quadrature blocks are a diagonal
    matrix plus a rank-1 correction, and every diagonal 2x2 block has unit
    determinant.  The squared symplectic eigenvalues are then the spectrum
    of ``I + U V^T`` with ``U, V`` of width two, so all but two per parity
    class equal 1 exactly and the remaining pair comes from a 2x2 matrix.
    """
    _check_cap(g, k_max_cap)
    _check_window(d, g)
    gam = np.concatenate([_block_gammas(d, g, 0), _block_gammas(d, g, 1)])
    return SymplecticSpectrum(clamp_gammas(gam, tol))


def parity_blocks(C: MultimodeCovariance) -> tuple[MultimodeCovariance, MultimodeCovariance | None]:
    """Split an output covariance into its even-``k`` and odd-``k`` blocks."""
    n = C.n_modes
    even = C.permute_modes(list(range(0, n, 2)) + list(range(1, n, 2)))
    ne = (n + 1) // 2
    E = MultimodeCovariance(even.entries[:2 * ne, :2 * ne])
    O = MultimodeCovariance(even.entries[2 * ne:, 2 * ne:]) if n > 1 else None
    return E, O
