"""Gaussian-state linear algebra for zero-mean bosonic modes.

Quadratures are normalized so that ``[Z1, Z2] = 2i`` and the vacuum
covariance is the identity.  With that convention the symplectic
eigenvalues of a covariance matrix ``C`` are the moduli of the eigenvalues
of ``J @ C``, where ``J`` is block diagonal with ``[[0, 1], [-1, 0]]`` per
mode, and a pure mode has ``gamma == 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ContractViolation, NumericalFailure

#: symplectic eigenvalues this far below 1 are clamped to exactly 1
TOL_PHYS = 1e-10
#: relative symmetry defect tolerated (and then removed) on construction
TOL_SYMMETRY = 1e-12


@dataclass(frozen=True)
class QuadCovariance:
    """Symmetric 2x2 covariance of one mode's quadratures."""

    c11: float
    c12: float
    c22: float

    def __post_init__(self):
        if not (self.c11 > 0 and self.c22 > 0):
            raise ContractViolation(
                f"diagonal variances must be positive, got c11={self.c11}, c22={self.c22}"
            )

    @classmethod
    def from_matrix(cls, m) -> "QuadCovariance":
        m = np.asarray(m, dtype=float)
        if m.shape != (2, 2):
            raise ContractViolation(f"expected a 2x2 matrix, got shape {m.shape}")
        _check_symmetric(m)
        return cls(float(m[0, 0]), float(0.5 * (m[0, 1] + m[1, 0])), float(m[1, 1]))

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.c11, self.c12], [self.c12, self.c22]])

    @property
    def det(self) -> float:
        return self.c11 * self.c22 - self.c12 * self.c12

    @property
    def gamma(self) -> float:
        """Single symplectic eigenvalue, ``sqrt(det C)``."""
        return float(np.sqrt(self.det))

    def is_physical(self, tol: float = TOL_PHYS) -> bool:
        return self.det >= (1.0 - tol) ** 2

    def entropy(self) -> float:
        return entropy_from_gammas([self.gamma])

    def as_multimode(self) -> "MultimodeCovariance":
        return MultimodeCovariance(self.matrix)


@dataclass(frozen=True, eq=False)
class MultimodeCovariance:
    """Real symmetric ``2n x 2n`` covariance in interleaved ordering.

    Rows and columns run ``(Z1 of mode 0, Z2 of mode 0, Z1 of mode 1, ...)``.
    Input that is symmetric up to a relative defect of ``TOL_SYMMETRY`` is
    symmetrized exactly; anything worse raises :class:`ContractViolation`.
    """

    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2 or m.shape[0] == 0:
            raise ContractViolation(
                f"covariance must be a non-empty square matrix of even size, got {m.shape}"
            )
        _check_symmetric(m)
        m = 0.5 * (m + m.T)
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def n_modes(self) -> int:
        return self.entries.shape[0] // 2

    def mode_block(self, i: int, j: int | None = None) -> np.ndarray:
        j = i if j is None else j
        return self.entries[2 * i:2 * i + 2, 2 * j:2 * j + 2]

    def permute_modes(self, order: Sequence[int]) -> "MultimodeCovariance":
        order = np.asarray(order)
        if sorted(order.tolist()) != list(range(self.n_modes)):
            raise ContractViolation("order must be a permutation of the mode indices")
        idx = np.empty(2 * len(order), dtype=int)
        idx[0::2] = 2 * order
        idx[1::2] = 2 * order + 1
        return MultimodeCovariance(self.entries[np.ix_(idx, idx)])

    @classmethod
    def direct_sum(cls, parts: Iterable["MultimodeCovariance | QuadCovariance"]) -> "MultimodeCovariance":
        mats = [p.matrix if isinstance(p, QuadCovariance) else p.entries for p in parts]
        n = sum(m.shape[0] for m in mats)
        out = np.zeros((n, n))
        i = 0
        for m in mats:
            out[i:i + m.shape[0], i:i + m.shape[0]] = m
            i += m.shape[0]
        return cls(out)


@dataclass(frozen=True, eq=False)
class SymplecticSpectrum:
    """Symplectic eigenvalues sorted in descending order."""

    gammas: np.ndarray
    occupancies: np.ndarray = field(init=False)

    def __post_init__(self):
        g = np.sort(np.asarray(self.gammas, dtype=float).ravel())[::-1].copy()
        g.setflags(write=False)
        object.__setattr__(self, "gammas", g)
        n = np.clip(0.5 * (g - 1.0), 0.0, None)
        n.setflags(write=False)
        object.__setattr__(self, "occupancies", n)

    def __len__(self):
        return len(self.gammas)

    @property
    def n_modes(self) -> int:
        return len(self.gammas)

    @property
    def min_gamma(self) -> float:
        return float(self.gammas[-1])

    def nontrivial(self, tol: float) -> np.ndarray:
        """Eigenvalues exceeding ``1 + tol``."""
        return self.gammas[self.gammas > 1.0 + tol]

    def union(self, other: "SymplecticSpectrum") -> "SymplecticSpectrum":
        return SymplecticSpectrum(np.concatenate([self.gammas, other.gammas]))


def _check_symmetric(m: np.ndarray) -> None:
    scale = max(float(np.max(np.abs(m))), 1.0)
    defect = float(np.max(np.abs(m - m.T))) if m.size else 0.0
    if defect > TOL_SYMMETRY * scale:
        raise ContractViolation(
            f"covariance is not symmetric (max |C - C^T| = {defect:.3e}, scale {scale:.3e})"
        )


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal ``J`` with ``[[0, 1], [-1, 0]]`` per mode."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def clamp_gammas(gammas, tol: float = TOL_PHYS) -> np.ndarray:
    g = np.array(gammas, dtype=float)
    g[(g < 1.0) & (g >= 1.0 - tol)] = 1.0
    return g


def symplectic_spectrum(C: MultimodeCovariance | QuadCovariance, tol: float = TOL_PHYS) -> SymplecticSpectrum:
    """Symplectic eigenvalues of a covariance matrix by dense eigen-decomposition.

    The eigenvalues of ``J @ C`` come in pairs ``+-i*gamma``; the moduli of
    the imaginary parts are sorted and every second one is kept.  Values
    within ``tol`` below 1 are clamped to exactly 1.

    Parameters
    ----------
    C : MultimodeCovariance or QuadCovariance
    tol : float
        Clamping tolerance.

    Returns
    -------
    SymplecticSpectrum

    Raises
    ------
    NumericalFailure
        If LAPACK fails to converge; carries the matrix size.
    """
    if isinstance(C, QuadCovariance):
        C = C.as_multimode()
    n = C.n_modes
    if n == 1:
        # closed form for a single mode, exact to rounding
        b = C.entries
        det = b[0, 0] * b[1, 1] - b[0, 1] * b[1, 0]
        if det < 0:
            raise ContractViolation(f"single-mode covariance has negative determinant {det}")
        return SymplecticSpectrum(clamp_gammas([np.sqrt(det)], tol))
    try:
        ev = np.linalg.eigvals(symplectic_form(n) @ C.entries)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(
            f"eigen-solver did not converge for a {2 * n}x{2 * n} matrix", size=2 * n
        ) from exc
    mod = np.sort(np.abs(ev.imag))
    return SymplecticSpectrum(clamp_gammas(mod[::2], tol))


def _h(n: np.ndarray) -> np.ndarray:
    """Entropy of a thermal mode with occupancy ``n`` (nats)."""
    n = np.asarray(n, dtype=float)
    out = (n + 1.0) * np.log1p(n)
    pos = n > 0
    out[pos] -= n[pos] * np.log(n[pos])
    return out


def entropy_from_gammas(gammas, tol: float = TOL_PHYS) -> float:
    g = clamp_gammas(np.atleast_1d(gammas), tol)
    if np.any(g < 1.0):
        raise ContractViolation(
            f"symplectic eigenvalue {g.min():.15g} is below the vacuum bound"
        )
    return float(np.sum(_h(0.5 * (g - 1.0))))


def entropy_from_spectrum(spec: SymplecticSpectrum) -> float:
    """Von Neumann entropy of the Gaussian state, in nats.

    Sums ``(n+1) ln(n+1) - n ln n`` over the thermal occupancies
    ``n = (gamma - 1) / 2``; the ``n ln n`` term is 0 at ``n = 0``.
    """
    return entropy_from_gammas(spec.gammas)


def is_physical(C: MultimodeCovariance | QuadCovariance, tol: float = TOL_PHYS) -> bool:
    """True iff every symplectic eigenvalue is at least ``1 - tol``."""
    return symplectic_spectrum(C, tol).min_gamma >= 1.0 - tol
