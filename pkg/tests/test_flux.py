import math

import numpy as np
import pytest

from paramp_flow.errors import ContractViolation
from paramp_flow.flux import (
    continuum_number_flux,
    converged_output_entropy,
    delta_N,
    drive_power,
    entropy_flux_scan,
    flux_exponent,
    k_max_schedule,
    naive_blockwise_entropy,
    number_flux,
    output_entropy,
    output_power,
    output_spectrum,
)
from paramp_flow.output import ModeGrid
from paramp_flow.paramp import ParampParams, asymptotic_entropy, derive

pytestmark = pytest.mark.filterwarnings("ignore::paramp_flow.output.ShortWindowWarning")

DOUBLING = [2 ** i for i in range(11)]


class TestNumberFlux:
    def test_closed_form_values(self, fig1, fig2):
        assert number_flux(fig1) == pytest.approx(0.16 / 0.18, rel=1e-12)
        assert number_flux(fig1) == pytest.approx(0.888889, abs=5e-7)
        assert number_flux(fig2) == pytest.approx(0.09 / 0.42, rel=1e-12)
        assert number_flux(fig2) == pytest.approx(0.2142857, abs=5e-8)

    def test_continuum_route_agrees(self, derived):
        assert continuum_number_flux(derived) == pytest.approx(number_flux(derived), rel=1e-12)

    @pytest.mark.parametrize("relax", [10.0, 20.0, 40.0])
    def test_window_sum(self, derived, relax):
        dt = relax / abs(derived.lambda1)
        got = delta_N(derived, ModeGrid(dt, 4096)) / dt
        assert abs(got / number_flux(derived) - 1) < 2 / (abs(derived.lambda1) * dt)

    def test_window_sum_grows_with_k_max(self, fig2):
        vals = [delta_N(fig2, ModeGrid(40.0, k)) for k in (0, 4, 64, 1024)]
        assert np.all(np.diff(vals) > 0)


class TestPower:
    def test_balance(self, derived):
        assert drive_power(derived) == pytest.approx(output_power(derived), rel=1e-10)

    def test_closed_form(self, derived):
        d = derived
        hand = d.params.omega_p * d.gamma * d.f ** 2 / (4 * d.lambda1 * d.lambda2)
        assert output_power(d) == pytest.approx(hand, rel=1e-12)

    def test_values(self):
        d = derive(ParampParams(1.0, 0.4, 0.0, omega_p=10.0))
        assert output_power(d) == pytest.approx(4.444444, abs=5e-7)
        d2 = derive(ParampParams.from_f_prime(1.0, 0.3, 0.2))
        assert drive_power(d2) == pytest.approx(0.1071429, abs=5e-8)

    def test_half_pump_quantum_each(self, derived):
        assert output_power(derived) / number_flux(derived) == pytest.approx(derived.params.omega_p / 2, rel=1e-14)

    def test_override_pump_frequency(self, fig1):
        assert output_power(fig1, omega_p=3.0) == pytest.approx(3 * output_power(fig1), rel=1e-14)


class TestWindowEntropy:
    def test_naive_is_zero(self, derived):
        g = ModeGrid(40.0 / abs(derived.lambda1), 256)
        assert naive_blockwise_entropy(derived, g) == pytest.approx(0.0, abs=1e-8)

    def test_boundary_term_carries_entropy(self, fig2):
        g = ModeGrid(40.0, 256)
        assert output_entropy(fig2, g).delta_S_out - naive_blockwise_entropy(fig2, g) > 0.1

    def test_two_nontrivial_modes(self, fig2):
        rep = output_entropy(fig2, ModeGrid(40.0, 256))
        assert len(rep.nontrivial_gammas) == 2
        assert rep.n_trivial_modes == 255
        g1, g2 = rep.nontrivial_gammas
        assert g1 == pytest.approx(g2, rel=1e-6)

    def test_nondecreasing_in_k_max(self, fig2):
        for dt in (20.0, 40.0, 80.0):
            vals = [output_entropy(fig2, ModeGrid(dt, k)).delta_S_out for k in DOUBLING]
            assert np.all(np.diff(vals) >= -1e-9)

    def test_undriven_has_no_entropy(self):
        d = derive(ParampParams(1.0, 1e-8, 0.0))
        assert output_entropy(d, ModeGrid(40.0, 64)).delta_S_out < 1e-10

    def test_report_fields(self, fig2):
        rep = output_entropy(fig2, ModeGrid(40.0, 16))
        out = rep.to_dict()
        assert out["k_max"] == 16 and isinstance(out["nontrivial_gammas"], list)
        assert rep.entropy_flux_estimate == pytest.approx(rep.delta_S_out / 40.0)

    def test_methods_agree(self, fig2):
        g = ModeGrid(40.0, 100)
        a = output_entropy(fig2, g, method="structured").delta_S_out
        b = output_entropy(fig2, g, method="dense").delta_S_out
        assert a == pytest.approx(b, abs=1e-10)
        with pytest.raises(ContractViolation):
            output_spectrum(fig2, g, method="qr")


class TestConvergence:
    def test_schedule(self):
        assert k_max_schedule(64, 512) == [64, 128, 256, 512]
        assert k_max_schedule(64, 300) == [64, 128, 256, 300]
        assert k_max_schedule(64, 10) == [10]

    def test_cauchy_stop(self, fig2):
        res = converged_output_entropy(fig2, 40.0, schedule=DOUBLING)
        assert res.converged
        assert abs(res.delta_S_values[-1] - res.delta_S_values[-2]) < 1e-3
        assert res.k_max < DOUBLING[-1]

    def test_flags_exhausted_schedule(self, fig2):
        res = converged_output_entropy(fig2, 160.0, schedule=[1, 2, 4])
        assert not res.converged
        assert res.k_max_values == (1, 2, 4)

    def test_empty_schedule(self, fig2):
        with pytest.raises(ContractViolation):
            converged_output_entropy(fig2, 40.0, schedule=[])

    def test_independent_of_window(self, fig2):
        vals = [converged_output_entropy(fig2, dt, schedule=DOUBLING).value for dt in (20.0, 40.0, 80.0)]
        assert (max(vals) - min(vals)) / np.mean(vals) < 0.01

    def test_twice_the_paramp_entropy(self, fig2):
        target = 2 * asymptotic_entropy(fig2)
        assert target == pytest.approx(0.6587059, abs=5e-8)
        val = converged_output_entropy(fig2, 40.0, schedule=DOUBLING).value
        assert val == pytest.approx(target, rel=0.05)

    def test_factor_two_across_points(self, derived):
        res = converged_output_entropy(derived, 40.0 / abs(derived.lambda1), schedule=[64, 128, 256, 512, 1024],
                                       cauchy_tol=1e-6)
        assert res.value == pytest.approx(2 * asymptotic_entropy(derived), rel=0.05)


class TestFluxScan:
    def test_exponent(self, fig2):
        scan = entropy_flux_scan(fig2, [20.0, 40.0, 80.0, 160.0], schedule=DOUBLING)
        assert scan.flagged == []
        assert scan.exponent == pytest.approx(-1.0, abs=0.2)
        np.testing.assert_allclose(scan.fluxes * scan.delta_ts, [r.value for r in scan.rows])

    def test_single_row_matches_direct(self, fig2):
        scan = entropy_flux_scan(fig2, [40.0], schedule=DOUBLING)
        assert math.isnan(scan.exponent)
        assert scan.rows[0].value == converged_output_entropy(fig2, 40.0, schedule=DOUBLING).value

    def test_flagged_rows(self, fig2):
        scan = entropy_flux_scan(fig2, [20.0, 160.0], schedule=[1, 2])
        assert 160.0 in scan.flagged

    def test_exponent_fit(self):
        dts = np.array([1.0, 2.0, 4.0])
        assert flux_exponent(dts, 3.0 / dts) == pytest.approx(-1.0, abs=1e-12)
        assert flux_exponent(dts, np.full(3, 2.0)) == pytest.approx(0.0, abs=1e-12)
