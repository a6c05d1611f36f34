import numpy as np
import pytest

from lineshape import (
    COULOMB,
    POINCARE,
    SYMMETRIC,
    DomainError,
    GaugeRepresentation,
    alpha_k,
    coupling_pair,
)

ALPHA_03 = GaugeRepresentation.constant(0.3)


class TestAlpha:
    def test_coulomb_is_zero(self):
        for wk in (0.1, 1.0, 17.3):
            assert alpha_k(COULOMB, wk, 1.0) == 0.0

    def test_poincare_is_one(self):
        assert alpha_k(POINCARE, 2.5, 1.0) == 1.0

    @pytest.mark.parametrize("wk,expected", [(1.0, 0.5), (3.0, 0.25)])
    def test_symmetric_values(self, wk, expected):
        assert alpha_k(SYMMETRIC, wk, 1.0) == pytest.approx(expected, rel=1e-15)

    def test_custom_constant(self):
        assert alpha_k(ALPHA_03, 5.0, 1.0) == 0.3

    def test_rejects_nonpositive_frequency(self):
        with pytest.raises(DomainError):
            alpha_k(COULOMB, 0.0, 1.0)
        with pytest.raises(DomainError):
            alpha_k(COULOMB, 1.0, -2.0)

    def test_rejects_alpha_outside_unit_interval(self):
        with pytest.raises(DomainError):
            GaugeRepresentation.constant(1.5)
        with pytest.raises(DomainError):
            GaugeRepresentation.constant(float("nan"))


class TestCouplingPair:
    def test_coulomb_at_four_omega(self):
        u = coupling_pair(COULOMB, 4.0, 1.0)
        assert u.u_plus == 0.5 and u.u_minus == 0.5

    def test_poincare_at_four_omega(self):
        u = coupling_pair(POINCARE, 4.0, 1.0)
        assert u.u_plus == -2.0 and u.u_minus == 2.0

    def test_symmetric_u_plus_is_exactly_zero(self):
        wk = np.geomspace(1e-3, 1e3, 10_000)
        u = coupling_pair(SYMMETRIC, wk, 1.0)
        assert np.all(u.u_plus == 0.0)

    def test_symmetric_u_minus_peaks_at_resonance(self):
        wk = np.geomspace(1e-3, 1e3, 10_000)
        u = coupling_pair(SYMMETRIC, wk, 1.0).u_minus
        assert np.all(u <= 1.0)
        assert np.all(u[wk != 1.0] < 1.0)
        assert coupling_pair(SYMMETRIC, 1.0, 1.0).u_minus == 1.0

    def test_sum_identity(self):
        # u_plus + u_minus = 2 (1 - alpha) sqrt(omega_0 / omega_k)
        wk = np.geomspace(1e-2, 1e2, 2000)
        for rep in (COULOMB, POINCARE, SYMMETRIC, ALPHA_03):
            u = coupling_pair(rep, wk, 1.0)
            alpha = np.asarray(alpha_k(rep, wk, 1.0))
            expected = 2.0 * (1.0 - alpha) * np.sqrt(1.0 / wk)
            np.testing.assert_allclose(u.u_plus + u.u_minus, expected,
                                       rtol=1e-13, atol=1e-15)

    def test_on_resonance_u_minus_is_one_for_every_representation(self):
        for rep in (COULOMB, POINCARE, SYMMETRIC, ALPHA_03,
                    GaugeRepresentation.constant(0.77)):
            assert coupling_pair(rep, 2.0, 2.0).u_minus == pytest.approx(
                1.0, abs=1e-15
            )

    def test_custom_endpoints_match_named_representations_bitwise(self):
        wk = np.geomspace(1e-3, 1e3, 10_000)
        for named, alpha in ((COULOMB, 0.0), (POINCARE, 1.0)):
            a = coupling_pair(named, wk, 1.0)
            b = coupling_pair(GaugeRepresentation.constant(alpha), wk, 1.0)
            assert np.array_equal(a.u_plus, b.u_plus)
            assert np.array_equal(a.u_minus, b.u_minus)

    def test_vectorized_matches_pointwise(self):
        # The data-parallel contract: array evaluation is elementwise
        # identical to scalar evaluation.
        wk = np.geomspace(0.1, 10.0, 37)
        for rep in (COULOMB, POINCARE, SYMMETRIC, ALPHA_03):
            batch = coupling_pair(rep, wk, 1.0)
            singles = [coupling_pair(rep, float(w), 1.0) for w in wk]
            assert list(batch.u_plus) == [s.u_plus for s in singles]
            assert list(batch.u_minus) == [s.u_minus for s in singles]


class TestParsing:
    @pytest.mark.parametrize("text,kind", [
        ("coulomb", "coulomb"),
        ("POINCARE", "poincare"),
        ("symmetric", "symmetric"),
    ])
    def test_named(self, text, kind):
        assert GaugeRepresentation.parse(text).kind == kind

    def test_alpha_form_round_trips(self):
        rep = GaugeRepresentation.parse("alpha:0.3")
        assert rep.kind == "custom" and rep.custom_alpha == 0.3
        assert GaugeRepresentation.parse(rep.name) == rep

    @pytest.mark.parametrize("text", ["weyl", "alpha:", "alpha:zz", "alpha:2"])
    def test_rejects_bad_strings(self, text):
        with pytest.raises(DomainError):
            GaugeRepresentation.parse(text)
