import math

import numpy as np
import pytest

from lineshape import (
    COULOMB,
    POINCARE,
    SYMMETRIC,
    DomainError,
    Envelope,
    GaugeRepresentation,
    LineshapeParams,
    PulseConfig,
    closed_form_amplitude,
    detuning_sensitivity_scan,
    excited_amplitude_during_pulse,
    integrate_dynamics,
    lineshape_S,
    lorentzian_reference_spectrum,
    pulse_spectrum,
    resonant_amplitude,
)
from lineshape.pulse import (
    DetuningSet,
    ground_amplitude_during_pulse,
    laser_coupling_pair,
    rk4_fixed,
)
from lineshape.representations import coupling_pair
from lineshape.spectra import numerator

OMEGA0 = 1.0
GAMMA = 0.1
RESONANT = PulseConfig(rabi=1.0, omega_l=OMEGA0)
ALL_REPS = (COULOMB, POINCARE, SYMMETRIC, GaugeRepresentation.constant(0.3))


class TestConfig:
    def test_rectangular_duration(self):
        cfg = PulseConfig(rabi=2.0, omega_l=1.0)
        assert cfg.duration == math.pi / 2.0
        assert cfg.envelope.start == -math.pi / 2.0
        assert cfg.envelope.end == 0.0

    def test_rejects_nonpositive_rabi(self):
        with pytest.raises(DomainError):
            PulseConfig(rabi=0.0, omega_l=1.0)

    def test_detuning_closure_is_exact(self):
        for wk in (0.3, 0.9999, 2.7):
            cfg = PulseConfig(rabi=1.0, omega_l=0.9)
            d = DetuningSet.build(cfg, SYMMETRIC, OMEGA0, wk)
            # The closure is definitional, hence bitwise in this form.
            assert d.delta_kl == d.delta_l - d.delta_k
            assert d.mu == math.hypot(
                cfg.rabi * laser_coupling_pair(cfg, SYMMETRIC, OMEGA0)[1],
                d.delta_l,
            )

    def test_resonant_coupling_is_representation_independent(self):
        for rep in ALL_REPS:
            assert laser_coupling_pair(RESONANT, rep, OMEGA0)[1] == (
                pytest.approx(1.0, abs=1e-15)
            )

    def test_alpha_laser_override(self):
        cfg = PulseConfig(rabi=1.0, omega_l=OMEGA0, alpha_laser=0.5)
        up, um = laser_coupling_pair(cfg, COULOMB, OMEGA0)
        assert um == pytest.approx(1.0) and up == pytest.approx(0.0)


class TestDuringPulse:
    def test_starts_from_zero(self):
        cfg = RESONANT
        assert excited_amplitude_during_pulse(-cfg.duration, cfg, SYMMETRIC,
                                              OMEGA0) == 0.0

    def test_full_inversion_phase(self):
        value = excited_amplitude_during_pulse(0.0, RESONANT, SYMMETRIC, OMEGA0)
        assert value == pytest.approx(-1j, abs=1e-15)

    def test_amplitude_bound(self):
        cfg = PulseConfig(rabi=1.0, omega_l=0.8)  # detuned
        t = np.linspace(-cfg.duration, 0.0, 300)
        u_l = laser_coupling_pair(cfg, COULOMB, OMEGA0)[1]
        mu = math.hypot(cfg.rabi * u_l, OMEGA0 - cfg.omega_l)
        b = excited_amplitude_during_pulse(t, cfg, COULOMB, OMEGA0)
        assert np.all(np.abs(b) <= cfg.rabi * u_l / mu + 1e-15)

    def test_outside_window_rejected(self):
        with pytest.raises(DomainError):
            excited_amplitude_during_pulse(0.5, RESONANT, SYMMETRIC, OMEGA0)

    def test_closed_pair_is_unitary(self):
        cfg = PulseConfig(rabi=1.0, omega_l=0.85)
        t = np.linspace(-cfg.duration, 0.0, 200)
        bg = ground_amplitude_during_pulse(t, cfg, SYMMETRIC, OMEGA0)
        be = excited_amplitude_during_pulse(t, cfg, SYMMETRIC, OMEGA0)
        np.testing.assert_allclose(np.abs(bg) ** 2 + np.abs(be) ** 2, 1.0,
                                   atol=1e-14)


class TestClosedForm:
    def test_reduces_to_resonant_form_including_singular_points(self):
        delta = (np.arange(0, 1001) - 500) / 100.0  # hits +/- 0.5 exactly
        wk = OMEGA0 - delta
        general = closed_form_amplitude(wk, RESONANT, SYMMETRIC, OMEGA0, GAMMA)
        reduced = resonant_amplitude(wk, 1.0, OMEGA0, GAMMA)
        np.testing.assert_allclose(general, reduced, rtol=1e-12)

    def test_singular_point_matches_derivative_oracle(self):
        # Pulse term of the resonant form at delta_k = rabi/2, by l'Hopital
        # on numerator/denominator written out independently.
        rabi = 1.0

        def num(d):
            return 2.0 * (rabi * np.exp(1j * math.pi * d / rabi) - 2j * d)

        def den(d):
            return rabi**2 - 4.0 * d**2

        h = 1e-6
        d0 = rabi / 2.0
        dnum = (num(d0 + h) - num(d0 - h)) / (2 * h)
        dden = (den(d0 + h) - den(d0 - h)) / (2 * h)
        oracle = dnum / dden
        tail = 1.0 / (1j * d0 + GAMMA / 2.0)
        got = resonant_amplitude(OMEGA0 - d0, rabi, OMEGA0, GAMMA)
        assert got == pytest.approx(tail + (-1j) * oracle, rel=1e-9)
        # The analytic limit itself: (pi + 2i) / (2 rabi).
        assert oracle == pytest.approx((math.pi + 2j) / (2 * rabi), rel=1e-9)

    def test_large_rabi_leaves_only_the_lorentzian_tail(self):
        wk = OMEGA0 - 0.3
        big = PulseConfig(rabi=1e6, omega_l=OMEGA0)
        beta = closed_form_amplitude(wk, big, COULOMB, OMEGA0, GAMMA)
        tail = 1.0 / (1j * 0.3 + GAMMA / 2.0)
        assert abs(beta - tail) < 3.0 / 1e6

    def test_offresonant_pulse_depends_on_laser_coupling(self):
        cfg = PulseConfig(rabi=1.0, omega_l=0.9)
        wk = np.linspace(0.5, 1.5, 11)
        a = closed_form_amplitude(wk, cfg, COULOMB, OMEGA0, GAMMA)
        b = closed_form_amplitude(wk, cfg, POINCARE, OMEGA0, GAMMA)
        assert not np.allclose(a, b)
        # but modest even for a 10% detuned drive
        assert np.max(np.abs(a - b) / np.abs(a)) < 0.2

    def test_detuned_amplitude_continuous_through_zero_locus(self):
        # For delta_l != 0 the singular locus moves; sweep densely through
        # it and require a smooth curve (no spikes).
        cfg = PulseConfig(rabi=1.0, omega_l=0.8)
        wk = np.linspace(0.2, 1.9, 20_001)
        beta = closed_form_amplitude(wk, cfg, SYMMETRIC, OMEGA0, GAMMA)
        assert np.all(np.isfinite(beta.view(float)))
        # Away from the Lorentzian peak (where the curve is legitimately
        # steep) successive samples must stay close: the singular-locus
        # crossings near omega_k = 0.39 and 1.41 leave no spikes.
        away = np.abs(wk - OMEGA0)[:-1] > 0.25
        jumps = np.abs(np.diff(beta))[away]
        assert jumps.max() < 5e-3


class TestDynamics:
    def test_trajectory_matches_closed_form_pointwise(self):
        for cfg, rep in ((RESONANT, SYMMETRIC),
                         (PulseConfig(rabi=1.0, omega_l=0.7), COULOMB)):
            traj = integrate_dynamics(cfg, rep, OMEGA0, GAMMA)
            want = excited_amplitude_during_pulse(traj.times, cfg, rep, OMEGA0)
            assert np.max(np.abs(traj.b_e - want)) < 1e-8

    def test_long_time_modes_match_closed_form(self):
        modes = OMEGA0 - np.linspace(-5.0, 5.0, 41)
        traj = integrate_dynamics(RESONANT, SYMMETRIC, OMEGA0, GAMMA, modes)
        beta = closed_form_amplitude(modes, RESONANT, SYMMETRIC, OMEGA0, GAMMA)
        rel = np.abs(traj.beta_final - beta) / np.abs(beta)
        assert rel.max() < 1e-6

    @pytest.mark.parametrize("rabi,omega_l", [
        (1.0, 0.5),   # half-resonant drive
        (2.5, 0.8),   # strong fast pulse
        (0.4, 1.3),   # weak blue-detuned pulse
    ])
    def test_closed_form_holds_at_strong_detuning(self, rabi, omega_l):
        cfg = PulseConfig(rabi=rabi, omega_l=omega_l)
        for rep in (SYMMETRIC, COULOMB, GaugeRepresentation.constant(0.3)):
            modes = OMEGA0 - np.linspace(-5.0 * rabi, 5.0 * rabi, 61)
            traj = integrate_dynamics(cfg, rep, OMEGA0, GAMMA, modes)
            beta = closed_form_amplitude(modes, cfg, rep, OMEGA0, GAMMA)
            rel = np.abs(traj.beta_final - beta) / np.abs(beta)
            assert rel.max() < 1e-9, rep.name

    def test_unitarity_along_trajectory(self):
        traj = integrate_dynamics(RESONANT, SYMMETRIC, OMEGA0, GAMMA)
        norm = np.abs(traj.b_g) ** 2 + np.abs(traj.b_e) ** 2
        assert np.max(np.abs(norm - 1.0)) < 1e-9

    def test_zero_drive_envelope_keeps_ground_state(self):
        cfg = PulseConfig(
            rabi=1.0, omega_l=OMEGA0,
            envelope=Envelope(start=-1.0, end=0.0, amplitude=lambda t: 0.0),
        )
        traj = integrate_dynamics(cfg, SYMMETRIC, OMEGA0, GAMMA)
        assert np.all(traj.b_e == 0.0)
        assert np.all(traj.b_g == 1.0)

    def test_fixed_step_cross_check(self):
        # Classical RK4 at fixed step vs the adaptive integrator.
        cfg = RESONANT
        u_l = laser_coupling_pair(cfg, SYMMETRIC, OMEGA0)[1]

        def rhs(t, y):
            drive = 0.5 * cfg.rabi * u_l
            return np.array([-1j * drive * y[1], -1j * drive * y[0]])

        y = rk4_fixed(rhs, np.array([1.0, 0.0], dtype=complex),
                      -cfg.duration, 0.0, 2000)
        y_half = rk4_fixed(rhs, np.array([1.0, 0.0], dtype=complex),
                           -cfg.duration, 0.0, 4000)
        assert abs(y[1] - (-1j)) < 1e-10
        assert abs(y[1] - y_half[1]) < 1e-11
        traj = integrate_dynamics(cfg, SYMMETRIC, OMEGA0, GAMMA)
        assert abs(traj.b_e[-1] - y[1]) < 1e-9

    def test_counter_rotating_terms_are_small_but_nonzero(self):
        # Retaining the u_plus drive path changes the endpoint only a little.
        cfg = RESONANT
        with_rwa = integrate_dynamics(cfg, COULOMB, OMEGA0, GAMMA)
        without = integrate_dynamics(cfg, COULOMB, OMEGA0, GAMMA, rwa=False)
        dev = abs(without.b_e[-1] - with_rwa.b_e[-1])
        assert 0.0 < dev < 0.2
        norm = np.abs(without.b_g) ** 2 + np.abs(without.b_e) ** 2
        assert np.max(np.abs(norm - 1.0)) < 1e-9  # still unitary

    def test_field_back_reaction_produces_decay(self):
        # Beyond-closed-form check: with the modes retained, the excited
        # amplitude decays roughly exponentially after the pulse.
        gamma = 0.2
        modes = np.linspace(0.05, 3.0, 240)
        traj = integrate_dynamics(RESONANT, SYMMETRIC, OMEGA0, gamma, modes,
                                  include_field_during_pulse=True,
                                  samples=201, rtol=1e-8, atol=1e-10,
                                  post_horizon=10.0)
        assert traj.post_times is not None
        mid = np.searchsorted(traj.post_times, 5.0)
        expect = math.exp(-gamma * traj.post_times[mid] / 2.0)
        assert abs(traj.post_b_e[mid]) == pytest.approx(expect, rel=0.2)

    def test_final_state_snapshot(self):
        modes = np.array([0.8, 1.0, 1.2])
        traj = integrate_dynamics(RESONANT, SYMMETRIC, OMEGA0, GAMMA, modes)
        state = traj.final_state()
        assert state.b_e0 == traj.b_e[-1]
        assert abs(state.b_g0) ** 2 + abs(state.b_e0) ** 2 == pytest.approx(
            1.0, abs=1e-9
        )
        assert set(state.b_gk) == {0.8, 1.0, 1.2}

    def test_trajectory_csv_schema(self, tmp_path):
        traj = integrate_dynamics(RESONANT, SYMMETRIC, OMEGA0, GAMMA)
        path = tmp_path / "traj.csv"
        traj.to_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "t,re_bg0,im_bg0,re_be0,im_be0"
        assert len(lines) == len(traj.times) + 1


class TestPulseSpectrum:
    def test_laser_free_is_bitwise_the_lineshape(self):
        grid = np.linspace(0.1, 3.0, 301)
        spec = pulse_spectrum(RESONANT, SYMMETRIC, OMEGA0, GAMMA, grid,
                              include_laser=False)
        bare = lineshape_S(LineshapeParams(SYMMETRIC, OMEGA0, GAMMA), grid)
        np.testing.assert_array_equal(spec.values, bare.values)

    def test_normalization_contract(self):
        # Mode density times angular-summed squared coupling equals
        # (Gamma/2pi) numerator: both sides for a two-level atom.
        from lineshape import build_two_level, gamma_onshell

        model = build_two_level(OMEGA0, 0.7)
        gamma = gamma_onshell(model, "e", "g")
        grid = np.linspace(0.2, 3.0, 50)
        d2 = 0.7**2
        u2 = np.asarray(coupling_pair(SYMMETRIC, grid, OMEGA0).u_minus) ** 2
        lhs = grid**2 / (3 * math.pi**2) * (OMEGA0 / 2.0) * d2 * u2
        rhs = gamma / (2 * math.pi) * np.asarray(
            numerator(SYMMETRIC, grid, OMEGA0)
        )
        np.testing.assert_allclose(lhs, rhs, rtol=1e-12)

    def test_positive_and_deviates_from_lorentzian_in_the_wings(self):
        grid = np.linspace(0.02, 3.0, 400)
        spec = pulse_spectrum(RESONANT, SYMMETRIC, OMEGA0, GAMMA, grid)
        bare = lorentzian_reference_spectrum(OMEGA0, GAMMA, grid)
        assert np.all(spec.values >= 0.0)
        rel = np.abs(spec.values - bare.values) / bare.values
        window = np.abs(OMEGA0 - grid) <= 2.0
        assert rel[window].max() > 0.10

    def test_zero_locus_flagged_in_metadata(self):
        grid = np.linspace(0.02, 3.0, 100)
        spec = pulse_spectrum(RESONANT, SYMMETRIC, OMEGA0, GAMMA, grid)
        assert spec.metadata.get("denominator_zero_on_grid") is True
        narrow = pulse_spectrum(RESONANT, SYMMETRIC, OMEGA0, GAMMA,
                                np.linspace(0.9, 1.1, 20))
        assert "denominator_zero_on_grid" not in narrow.metadata

    def test_rejects_nonpositive_grid(self):
        with pytest.raises(DomainError):
            pulse_spectrum(RESONANT, SYMMETRIC, OMEGA0, GAMMA,
                           np.array([-1.0, 1.0]))


class TestDetuningScan:
    def test_baseline_row_is_exactly_zero(self):
        grid = np.linspace(0.3, 1.8, 60)
        rows = detuning_sensitivity_scan(RESONANT, [SYMMETRIC, COULOMB],
                                         [0.0, 0.01, 0.05], grid)
        base = [r for r in rows if r["delta_l"] == 0.0]
        assert all(r["max_rel_deviation"] == 0.0 for r in base)

    def test_dependence_is_weak(self):
        grid = np.linspace(0.3, 1.8, 60)
        rows = detuning_sensitivity_scan(RESONANT, list(ALL_REPS),
                                         [0.01], grid)
        for row in rows:
            assert row["max_rel_deviation"] < 0.1
