import math

import numpy as np
import pytest

from paramp_flow.errors import ContractViolation, TruncationError
from paramp_flow.fock import (
    FockState,
    annihilator,
    apply_beamsplitter,
    basis,
    beamsplitter_transfer,
    beamsplitter_unitary,
    entanglement_swap,
    pair_state,
    swap_target_state,
)


def _oracle_unitary(n_modes, cutoff, src, dst, theta):
    """exp(theta G) through the eigendecomposition of the Hermitian i G."""
    a = annihilator(n_modes, cutoff, src)
    b = annihilator(n_modes, cutoff, dst)
    H = 1j * (b.conj().T @ a - a.conj().T @ b)
    w, V = np.linalg.eigh(H)
    return V @ np.diag(np.exp(-1j * theta * w)) @ V.conj().T


class TestSpace:
    def test_basis_order(self):
        assert basis(2, 1) == ((0, 0), (0, 1), (1, 0), (1, 1))

    def test_annihilator_action(self):
        a = annihilator(2, 3, 0)
        psi = FockState.from_occupations(2, 3, {(2, 1): 1.0})
        out = a @ psi.amplitudes
        ref = FockState.from_occupations(2, 3, {(1, 1): 1.0}).amplitudes
        np.testing.assert_allclose(out, math.sqrt(2) * ref)

    @pytest.mark.parametrize("n,c", [(0, 2), (5, 2), (2, 0), (2, 5)])
    def test_limits(self, n, c):
        with pytest.raises(ContractViolation):
            basis(n, c)

    def test_normalizes(self):
        psi = FockState.from_occupations(1, 2, {(0,): 3.0, (1,): 4.0})
        assert np.linalg.norm(psi.amplitudes) == pytest.approx(1.0)
        assert psi.mean_number(0) == pytest.approx(16 / 25)

    def test_outside_cutoff(self):
        with pytest.raises(TruncationError):
            FockState.from_occupations(1, 2, {(3,): 1.0})

    def test_zero_state(self):
        with pytest.raises(ContractViolation):
            FockState(1, 2, np.zeros(3))


class TestBeamsplitter:
    @pytest.mark.parametrize("theta", [0.3, math.pi / 2, 2.0])
    def test_unitary_and_matches_oracle(self, theta):
        U = beamsplitter_unitary(2, 3, 0, 1, theta)
        np.testing.assert_allclose(U.conj().T @ U, np.eye(16), atol=1e-12)
        np.testing.assert_allclose(U, _oracle_unitary(2, 3, 0, 1, theta), atol=1e-12)

    @pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
    def test_quarter_turn_moves_everything(self, n):
        psi = FockState.from_occupations(2, 4, {(n, 0): 1.0})
        out = apply_beamsplitter(psi, 0, 1)
        assert out.mean_number(0) == pytest.approx(0.0, abs=1e-12)
        assert out.mean_number(1) == pytest.approx(n, abs=1e-12)

    def test_conserves_total_number(self):
        psi = FockState.from_occupations(3, 2, {(1, 1, 0): 1.0, (0, 1, 2): 0.5j})
        out = apply_beamsplitter(psi, 0, 2, 0.7)
        before = sum(psi.mean_number(m) for m in range(3))
        after = sum(out.mean_number(m) for m in range(3))
        assert after == pytest.approx(before, rel=1e-12)

    def test_truncation_guard(self):
        psi = FockState.from_occupations(2, 2, {(2, 1): 1.0})
        with pytest.raises(TruncationError):
            apply_beamsplitter(psi, 0, 1)


class TestTransfer:
    def test_coherence_moves_to_bath(self):
        res = beamsplitter_transfer(1.0, 1.0)
        # (|0> + sqrt2 |2>)/sqrt3 in b gives <b^2> = sqrt2 * sqrt2 / 3
        assert abs(res.b_squared_coherence) == pytest.approx(2 / 3, rel=1e-12)
        assert res.residual_entanglement < 1e-10
        assert res.state.mean_number(0) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("c1,c2", [(1.0, 0.5j), (0.2, -1.0), (1 + 1j, 0.3)])
    def test_general_coefficients(self, c1, c2):
        res = beamsplitter_transfer(c1, c2)
        norm = abs(c1) ** 2 + 2 * abs(c2) ** 2
        hand = abs(np.conj(c1) * c2 * 2) / norm
        assert abs(res.b_squared_coherence) == pytest.approx(hand, rel=1e-12)
        assert res.residual_entanglement < 1e-10

    def test_bad_input(self):
        with pytest.raises(ContractViolation):
            beamsplitter_transfer(0, 0)
        with pytest.raises(TruncationError):
            beamsplitter_transfer(1, 1, cutoff=1)

    def test_entanglement_with_reference_mode_is_handed_over(self):
        # a is entangled with r; after the mixer b carries that entanglement and a is left pure
        psi = FockState.from_occupations(3, 2, {(0, 0, 0): 1.0, (1, 0, 1): 1.0})
        before = psi.entropy([0])
        out = apply_beamsplitter(psi, 0, 1)
        assert before == pytest.approx(math.log(2), abs=1e-12)
        assert out.entropy([0]) < 1e-10
        assert out.entropy([1]) == pytest.approx(math.log(2), abs=1e-12)
        assert out.entropy([2]) == pytest.approx(math.log(2), abs=1e-12)


class TestSwap:
    def test_pair_state_entanglement(self):
        psi = pair_state()
        assert psi.entropy([0, 2]) == pytest.approx(0.0, abs=1e-12)
        assert psi.entropy([0]) == pytest.approx(math.log(2), abs=1e-12)

    def test_swap(self):
        res = entanglement_swap()
        assert res.projection_probability == pytest.approx(0.25, abs=1e-12)
        assert res.complement_probability == pytest.approx(0.75, abs=1e-12)
        assert res.post_state.fidelity(swap_target_state()) >= 1 - 1e-12
        assert res.b_pair_entanglement == pytest.approx(math.log(2), abs=1e-10)

    def test_larger_cutoff_same_answer(self):
        res = entanglement_swap(cutoff=2)
        assert res.projection_probability == pytest.approx(0.25, abs=1e-12)
        assert res.post_state.fidelity(swap_target_state(cutoff=2)) >= 1 - 1e-12

    def test_fidelity_space_mismatch(self):
        with pytest.raises(ContractViolation):
            swap_target_state(1).fidelity(swap_target_state(2))
