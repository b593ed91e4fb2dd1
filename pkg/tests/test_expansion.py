from fractions import Fraction as F
from math import factorial

import pytest

from affgrav import (
    DiffPoly,
    GradedClass,
    QR2Scalar,
    VerificationError,
    build_frame,
    build_pipeline,
    h_leading_law,
    lemma4_check,
    theorem1_criterion,
    theorem2_symbolic,
    wronskian_series,
)
from affgrav.expansion import component_series

k = DiffPoly.kappa
SQRT2 = QR2Scalar.sqrt2()


@pytest.fixture(scope="module")
def pipe():
    return build_pipeline(10)


class TestFrameRecursion:
    def test_initial_rows(self):
        fr = build_frame(4)
        assert fr.phi[1] == 1 and fr.psi[1].is_zero
        assert fr.phi[2].is_zero and fr.psi[2] == 1

    def test_third_to_sixth_derivative(self):
        fr = build_frame(6)
        assert fr.phi[3] == -k(0) and fr.psi[3].is_zero
        assert fr.phi[4] == -k(1) and fr.psi[4] == -k(0)
        assert fr.phi[5] == -k(2) + k(0) * k(0) and fr.psi[5] == -2 * k(1)
        assert fr.phi[6] == -k(3) + 4 * k(0) * k(1)
        assert fr.psi[6] == -3 * k(2) + k(0) * k(0)

    def test_seventh_derivative(self):
        fr = build_frame(8)
        assert fr.phi[7] == -k(4) + 4 * k(1) * k(1) + 7 * k(0) * k(2) - k(0) * k(0) * k(0)
        assert fr.psi[7] == -4 * k(3) + 6 * k(0) * k(1)

    def test_eighth_derivative(self):
        fr = build_frame(8)
        assert fr.phi[8] == (
            -k(5) + 15 * k(1) * k(2) + 11 * k(0) * k(3) - 9 * k(0) * k(0) * k(1)
        )
        assert fr.psi[8] == (
            -5 * k(4) + 10 * k(1) * k(1) + 13 * k(0) * k(2) - k(0) * k(0) * k(0)
        )

    def test_rejects_tiny_order(self):
        with pytest.raises(ValueError):
            build_frame(1)


class TestComponentExpansions:
    def test_f_printed_coefficients(self, pipe):
        f = pipe.f
        assert f[0].is_zero and f[1] == 1 and f[2].is_zero
        assert f[3] == F(-1, 6) * k(0)
        assert f[4] == F(-1, 24) * k(1)
        assert f[5] == F(1, 120) * (-k(2) + k(0) * k(0))
        assert f[6] == F(1, 720) * (-k(3) + 4 * k(0) * k(1))

    def test_g_printed_coefficients(self, pipe):
        g = pipe.g
        assert g[0].is_zero and g[1].is_zero
        assert g[2] == F(1, 2) and g[3].is_zero
        assert g[4] == F(-1, 24) * k(0)
        assert g[5] == F(-1, 60) * k(1)
        assert g[6] == F(1, 720) * (-3 * k(2) + k(0) * k(0))

    def test_scaled_coefficients_class_membership(self, pipe):
        for kk in range(pipe.order + 1):
            fk = pipe.f[kk] * F(factorial(kk))
            gk = pipe.g[kk] * F(factorial(kk))
            assert fk.in_class(GradedClass(kk - 3, kk + 1))
            assert gk.in_class(GradedClass(kk - 4, kk))


class TestInversionSeries:
    def test_v_printed_coefficients(self, pipe):
        v = pipe.v
        assert v[0].is_zero and v[2].is_zero
        assert v[1] == DiffPoly.constant(SQRT2)
        assert v[3] == DiffPoly.monomial(QR2Scalar(0, F(1, 12)), {0: 1})
        assert v[4] == F(1, 15) * k(1)
        assert v[5] == (8 * k(2) + 9 * k(0) * k(0)) * QR2Scalar(0, F(1, 480))
        assert v[6] == (2 * k(3) + 11 * k(0) * k(1)) * F(1, 315)

    def test_v_from_g_relations(self, pipe):
        g = pipe.g
        g7 = component_series(build_frame(7))[1][7]
        assert pipe.v[3] == -2 * SQRT2 * g[4]
        assert pipe.v[4] == -4 * g[5]
        assert pipe.v[5] == 2 * SQRT2 * (7 * g[4] * g[4] - 2 * g[6])
        assert pipe.v[6] == 64 * g[4] * g[5] - 8 * g7

    def test_u_squares_to_g(self, pipe):
        u = pipe.u
        full_g = component_series(build_frame(pipe.order + 1))[1]
        assert u.mul(u, order=pipe.order + 1) == full_g

    def test_g_of_v_is_t_squared(self, pipe):
        gt = pipe.g.compose(pipe.v)
        assert gt[2] == 1
        assert all(gt[i].is_zero for i in range(gt.order + 1) if i != 2)


class TestCompositionH:
    def test_h_printed_coefficients(self, pipe):
        h = pipe.h
        assert h[0].is_zero and h[2].is_zero
        assert h[1] == DiffPoly.constant(SQRT2)
        assert h[3] == DiffPoly.monomial(QR2Scalar(0, F(-1, 4)), {0: 1})
        assert h[4] == F(-1, 10) * k(1)
        assert h[5] == -(8 * k(2) + 15 * k(0) * k(0)) * QR2Scalar(0, F(1, 480))
        assert h[6] == -(k(3) + 9 * k(0) * k(1)) * F(1, 210)

    def test_pipeline_series_explicitness(self, pipe):
        assert pipe.f.explicitness(3).is_explicit
        assert pipe.g.explicitness(4).is_explicit
        assert pipe.u.explicitness(3).is_explicit
        assert pipe.v.explicitness(3).is_explicit
        assert pipe.h.explicitness(3).is_explicit

    def test_gravity_is_even_part(self, pipe):
        gx = pipe.gravity_x
        assert gx[0].is_zero and gx[2].is_zero
        assert all(gx[i].is_zero for i in range(1, gx.order + 1, 2))
        assert all(gx[i] == pipe.h[i] for i in range(0, gx.order + 1, 2))

    def test_wronskian_is_one(self, pipe):
        w = wronskian_series(pipe)
        assert w[0] == 1
        assert all(w[i].is_zero for i in range(1, w.order + 1))


class TestLemma4:
    def test_report_laws(self):
        rep = lemma4_check(12)
        for kk in range(3, 13):
            assert rep.f_report.leading[kk] == QR2Scalar(F(-1, factorial(kk)))
        for kk in range(4, 13):
            assert rep.g_report.leading[kk] == QR2Scalar(F(-(kk - 3), factorial(kk)))

    def test_g_leading_vanishes_at_three(self):
        rep = lemma4_check(8)
        assert rep.g_report.leading[3] == QR2Scalar(0)
        assert component_series(build_frame(8))[1][3].is_zero

    def test_q6_residual(self):
        # 6! g_6 + 3 k2 = k0^2
        rep = lemma4_check(8)
        assert rep.q_residuals[6] == k(0) * k(0)
        assert rep.q_residuals[6].in_class(GradedClass(0, 0))

    def test_residual_classes(self):
        rep = lemma4_check(12)
        for kk in range(13):
            assert rep.p_residuals[kk].in_class(GradedClass(kk - 5, kk + 1))
            assert rep.q_residuals[kk].in_class(GradedClass(kk - 6, kk))

    def test_corrupted_frame_is_detected(self):
        frame = build_frame(8, corrupt=True)
        with pytest.raises(VerificationError) as info:
            lemma4_check(8, frame=frame)
        assert info.value.check == "lemma4.leading.f"


class TestHLeadingLaw:
    def test_values_through_order(self):
        leads = h_leading_law(8)
        for kk in range(3, 9):
            assert leads[kk] == QR2Scalar(-3) * SQRT2**kk * F(1, factorial(kk + 1))

    def test_low_order_closed_forms(self):
        leads = h_leading_law(6)
        assert leads[3] == QR2Scalar(0, F(-1, 4))     # -3*2*sqrt2/24
        assert leads[4] == QR2Scalar(F(-1, 10))       # -3*4/120
        assert leads[5] == QR2Scalar(0, F(-1, 60))    # -3*4*sqrt2/720


class TestTheorems:
    def test_flatness_criterion(self):
        h4 = theorem1_criterion()
        assert h4 == F(-1, 10) * k(1)
        assert h4.substitute({1: 0.0}) == 0.0
        assert h4.substitute({1: 1.0}) == pytest.approx(-0.1)

    def test_straightness_symbolic(self):
        assert theorem2_symbolic(12)

    def test_h6_reduces_to_third_derivative(self, pipe):
        reduced = pipe.h[6].substitute_partial({1: 0})
        assert reduced == F(-1, 210) * k(3)

    def test_h8_reduces_to_fifth_derivative(self, pipe):
        reduced = pipe.h[8].substitute_partial({1: 0, 3: 0})
        expect_lead = QR2Scalar(-3) * SQRT2**8 * F(1, factorial(9))
        assert reduced == DiffPoly.monomial(expect_lead, {5: 1})

    def test_even_coefficients_die_without_odd_derivatives(self, pipe):
        for kk in range(0, pipe.order + 1, 2):
            assert pipe.h[kk].kill_odd_derivatives().is_zero


class TestPipelineValidation:
    def test_minimum_order(self):
        with pytest.raises(ValueError):
            build_pipeline(5)

    def test_alternating_structure(self, pipe):
        assert pipe.f.is_alternating(3, 3)
        assert pipe.g.is_alternating(4, 0)
        assert pipe.g.is_alternating(4, 4)
        assert pipe.u.is_alternating(3, 1)
        assert pipe.v.is_alternating(3, 1)
        assert pipe.h.is_alternating(3, 1)
