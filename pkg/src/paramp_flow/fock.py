"""Few-mode Fock-space witnesses of entanglement transfer and swapping.

Everything is exact dense linear algebra on a truncated occupation basis:
at most 4 modes with occupations ``0..cutoff`` (``cutoff <= 4``), so the
largest space has 625 states.  Basis states are ordered lexicographically
in their occupation tuples, mode 0 most significant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np
from scipy.linalg import expm

from .errors import ContractViolation, TruncationError

MAX_MODES = 4
MAX_CUTOFF = 4
LEAK_TOL = 1e-12


def _check_space(n_modes: int, cutoff: int) -> None:
    if not 1 <= n_modes <= MAX_MODES:
        raise ContractViolation(f"n_modes must be in [1, {MAX_MODES}], got {n_modes}")
    if not 1 <= cutoff <= MAX_CUTOFF:
        raise ContractViolation(f"cutoff must be in [1, {MAX_CUTOFF}], got {cutoff}")


@lru_cache(maxsize=None)
def basis(n_modes: int, cutoff: int) -> tuple[tuple[int, ...], ...]:
    _check_space(n_modes, cutoff)
    return tuple(itertools.product(range(cutoff + 1), repeat=n_modes))


@lru_cache(maxsize=None)
def _annihilator(n_modes: int, cutoff: int, mode: int) -> np.ndarray:
    a1 = np.diag(np.sqrt(np.arange(1, cutoff + 1)), 1)
    eye = np.eye(cutoff + 1)
    op = np.ones((1, 1))
    for m in range(n_modes):
        op = np.kron(op, a1 if m == mode else eye)
    op.setflags(write=False)
    return op


def annihilator(n_modes: int, cutoff: int, mode: int) -> np.ndarray:
    """Truncated ``a_mode`` on the full basis."""
    _check_space(n_modes, cutoff)
    if not 0 <= mode < n_modes:
        raise ContractViolation(f"mode {mode} out of range for {n_modes} modes")
    return _annihilator(n_modes, cutoff, mode)


@dataclass(frozen=True, eq=False)
class FockState:
    n_modes: int
    cutoff: int
    amplitudes: np.ndarray

    def __post_init__(self):
        _check_space(self.n_modes, self.cutoff)
        amp = np.array(self.amplitudes, dtype=complex).ravel()
        if amp.shape != ((self.cutoff + 1) ** self.n_modes,):
            raise ContractViolation(
                f"expected {(self.cutoff + 1) ** self.n_modes} amplitudes, got {amp.size}"
            )
        norm = np.linalg.norm(amp)
        if norm == 0:
            raise ContractViolation("state has zero norm")
        amp = amp / norm
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def from_occupations(cls, n_modes: int, cutoff: int, terms: Mapping[Sequence[int], complex]) -> "FockState":
        """Build ``sum_n c_n |n>`` from ``{occupation tuple: amplitude}``."""
        index = {b: i for i, b in enumerate(basis(n_modes, cutoff))}
        amp = np.zeros(len(index), dtype=complex)
        for occ, c in terms.items():
            occ = tuple(occ)
            if occ not in index:
                raise TruncationError(f"occupation {occ} is outside cutoff {cutoff}")
            amp[index[occ]] += c
        return cls(n_modes, cutoff, amp)

    @classmethod
    def vacuum(cls, n_modes: int, cutoff: int) -> "FockState":
        return cls.from_occupations(n_modes, cutoff, {(0,) * n_modes: 1.0})

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((self.cutoff + 1,) * self.n_modes)

    def expectation(self, op: np.ndarray) -> complex:
        return complex(self.amplitudes.conj() @ op @ self.amplitudes)

    def mean_number(self, mode: int) -> float:
        a = annihilator(self.n_modes, self.cutoff, mode)
        return self.expectation(a.conj().T @ a).real

    def reduced_density_matrix(self, keep: Sequence[int]) -> np.ndarray:
        keep = list(keep)
        rest = [m for m in range(self.n_modes) if m not in keep]
        psi = np.transpose(self.tensor(), keep + rest).reshape((self.cutoff + 1) ** len(keep), -1)
        return psi @ psi.conj().T

    def entropy(self, keep: Sequence[int]) -> float:
        """Von Neumann entropy (nats) of the reduced state on ``keep``."""
        p = np.linalg.eigvalsh(self.reduced_density_matrix(keep))
        p = p[p > 1e-15]
        return max(0.0, float(-np.sum(p * np.log(p))))

    def fidelity(self, other: "FockState") -> float:
        if (other.n_modes, other.cutoff) != (self.n_modes, self.cutoff):
            raise ContractViolation("states live on different spaces")
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2)


def beamsplitter_unitary(n_modes: int, cutoff: int, src: int, dst: int, theta: float = np.pi / 2) -> np.ndarray:
    """``exp[theta (b^dag a - a^dag b)]`` with ``a = src``, ``b = dst``."""
    a = annihilator(n_modes, cutoff, src)
    b = annihilator(n_modes, cutoff, dst)
    gen = b.conj().T @ a - a.conj().T @ b
    return expm(theta * gen)


def apply_beamsplitter(state: FockState, src: int, dst: int, theta: float = np.pi / 2) -> FockState:
    """Mix modes ``src`` and ``dst``.

    The mixer conserves ``n_src + n_dst``, and the truncated generator is
    exact on states with ``n_src + n_dst <= cutoff``.  Any amplitude above
    that would be distorted, so it raises instead.
    """
    occ = np.array(basis(state.n_modes, state.cutoff))
    leaking = occ[:, src] + occ[:, dst] > state.cutoff
    if np.any(np.abs(state.amplitudes[leaking]) > LEAK_TOL):
        raise TruncationError(
            f"state has n_{src} + n_{dst} > cutoff {state.cutoff}; raise the cutoff"
        )
    U = beamsplitter_unitary(state.n_modes, state.cutoff, src, dst, theta)
    return FockState(state.n_modes, state.cutoff, U @ state.amplitudes)


@dataclass(frozen=True)
class TransferResult:
    b_squared_coherence: complex
    residual_entanglement: float
    state: FockState


def beamsplitter_transfer(c1: complex, c2: complex, cutoff: int = 4) -> TransferResult:
    """Move ``[c1 + c2 (a^dag)^2]|0>`` from mode ``a`` into bath mode ``b``.

    Returns ``<b^2>`` after the quarter-turn mixer and the entropy left in
    the reduced state of ``a``.  The sign of ``<b^2>`` depends on the
    mixer's phase convention; its modulus does not.
    """
    if c1 == 0 and c2 == 0:
        raise ContractViolation("c1 and c2 cannot both vanish")
    if cutoff < 2:
        raise TruncationError("(a^dag)^2 needs cutoff >= 2")
    # (a^dag)^2 |0> = sqrt(2) |2>
    psi = FockState.from_occupations(2, cutoff, {(0, 0): c1, (2, 0): np.sqrt(2) * c2})
    out = apply_beamsplitter(psi, src=0, dst=1)
    b = annihilator(2, cutoff, 1)
    return TransferResult(
        b_squared_coherence=out.expectation(b @ b),
        residual_entanglement=out.entropy([0]),
        state=out,
    )


@dataclass(frozen=True)
class SwapResult:
    projection_probability: float
    complement_probability: float
    post_state: FockState
    b_pair_entanglement: float


# mode order for the swap: a1, a2, b1, b2
A1, A2, B1, B2 = range(4)


def pair_state(cutoff: int = 1) -> FockState:
    """``(1/2)(1 + a1^dag b1^dag)(1 + a2^dag b2^dag)|0>`` on modes (a1, a2, b1, b2)."""
    terms = {}
    for n1, n2 in itertools.product((0, 1), repeat=2):
        terms[(n1, n2, n1, n2)] = 0.5
    return FockState.from_occupations(4, cutoff, terms)


def swap_target_state(cutoff: int = 1) -> FockState:
    """``(1/sqrt 2)(1 + b1^dag b2^dag)|0>_b``, as a two-mode state."""
    return FockState.from_occupations(2, cutoff, {(0, 0): 1.0, (1, 1): 1.0})


def entanglement_swap(cutoff: int = 1) -> SwapResult:
    """Project the infalling pair (a1, a2) of two entangled pairs onto
    ``(1/sqrt 2)(1 + a1^dag a2^dag)|0>_a``; the outgoing b1, b2 end up entangled.
    """
    psi = pair_state(cutoff).tensor()
    d = cutoff + 1
    phi = np.zeros((d, d), dtype=complex)
    phi[0, 0] = phi[1, 1] = 1 / np.sqrt(2)
    # <Phi|_a contracted over (a1, a2) leaves an unnormalized b-state
    b_state = np.einsum("ij,ijkl->kl", phi.conj(), psi)
    prob = float(np.sum(np.abs(b_state) ** 2))
    rejected = psi - np.einsum("ij,kl->ijkl", phi, b_state)
    post = FockState(2, cutoff, b_state.ravel())
    return SwapResult(
        projection_probability=prob,
        complement_probability=float(np.sum(np.abs(rejected) ** 2)),
        post_state=post,
        b_pair_entanglement=post.entropy([0]),
    )
