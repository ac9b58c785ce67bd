"""Closed-form packet images: normalization, assemblies, gauges, limits."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from holofrft.closedform import (
    Form,
    coherent_overlap,
    coherent_state,
    coherent_sum_values,
    endpoint_coherent_sum,
    hfrft_coherent,
    hfrft_coherent_sum,
    hfrft_endpoint_coherent,
    sb_coherent,
    sb_coherent_sum,
)
from holofrft.core import CoherentLabel, TransformParameter, gauge_factor
from holofrft.errors import DegenerateCoordinateError
from holofrft.quadrature import QuadratureRule

LABELS = st.builds(CoherentLabel,
                   st.floats(min_value=-2.0, max_value=2.0),
                   st.floats(min_value=-2.0, max_value=2.0))


def quadrature_inner(a: CoherentLabel, b: CoherentLabel) -> complex:
    """Weighted inner product sqrt(pi) * integral conj(psi_a) psi_b by a rule
    centered between the packets (independent of coherent_overlap)."""
    center = (a.Q + b.Q) / 2
    rule = QuadratureRule.gauss_hermite(96, center=center, scale=1.0)
    va = coherent_state(rule.nodes, a)
    vb = coherent_state(rule.nodes, b)
    return math.pi ** 0.5 * complex(np.conj(va) * vb @ rule.absorbed)


class TestPackets:
    @given(LABELS)
    def test_packet_has_unit_norm_by_quadrature(self, label):
        norm = quadrature_inner(label, label)
        assert abs(norm - 1.0) < 1e-12

    def test_peak_amplitude_follows_the_weighted_convention(self):
        # amplitude pi^{-1/2}, not the plain-Lebesgue pi^{-1/4}
        got = complex(coherent_state(np.array(0.3), CoherentLabel(0.0, 0.3)))
        assert got == pytest.approx(math.pi ** -0.5, rel=1e-15)

    @given(LABELS, LABELS)
    def test_overlap_matches_quadrature(self, a, b):
        exact = coherent_overlap(a, b)
        numeric = quadrature_inner(a, b)
        assert abs(exact - numeric) < 1e-12

    def test_self_overlap_is_one(self):
        assert coherent_overlap(CoherentLabel(1.7, -2.2),
                                CoherentLabel(1.7, -2.2)) == pytest.approx(
            1.0, abs=1e-15)

    def test_momentum_separation_dampens_overlap(self):
        for P in (0.5, 1.0, 3.0):
            got = coherent_overlap(CoherentLabel(0.0, 0.0),
                                   CoherentLabel(P, 0.0))
            assert abs(got) == pytest.approx(math.exp(-P * P / 4), rel=1e-13)


class TestImageAssemblies:
    @given(st.floats(min_value=1e-3, max_value=math.pi / 2 - 1e-3), LABELS,
           st.floats(min_value=-4.0, max_value=4.0),
           st.floats(min_value=-4.0, max_value=4.0))
    def test_direct_and_factored_forms_agree(self, t, label, x, p):
        param = TransformParameter.from_t(t)
        direct = hfrft_coherent(x, p, param, label, Form.DIRECT)
        factored = hfrft_coherent(x, p, param, label, Form.FACTORED)
        assert abs(direct - factored) <= 1e-11 * abs(direct)

    def test_factored_form_rejects_the_endpoint(self):
        with pytest.raises(DegenerateCoordinateError):
            hfrft_coherent(0.0, 0.0, TransformParameter.from_t(math.pi / 2),
                           CoherentLabel(0.0, 0.0), Form.FACTORED)

    def test_direct_form_reaches_the_endpoint(self):
        param = TransformParameter.from_t(math.pi / 2)
        label = CoherentLabel(0.4, -1.0)
        x = np.linspace(-2, 2, 9)
        p = np.linspace(-2, 2, 9)
        direct = hfrft_coherent(x[:, None], p[None, :], param, label)
        limit = hfrft_endpoint_coherent(x[:, None], p[None, :], label)
        np.testing.assert_allclose(direct, limit, atol=1e-14)

    def test_quarter_pi_amplitude_and_display(self):
        param = TransformParameter.from_t(math.pi / 4)
        origin = complex(hfrft_coherent(0.0, 0.0, param,
                                        CoherentLabel(0.0, 0.0)))
        assert origin == pytest.approx((math.sqrt(2) * math.pi) ** -0.5,
                                       rel=1e-14)
        x = np.linspace(-2, 2, 11)[:, None]
        p = np.linspace(-2, 2, 11)[None, :]
        got = hfrft_coherent(x, p, param, CoherentLabel(0.0, 0.0))
        display = (math.sqrt(2) * math.pi) ** -0.5 * np.exp(
            -(p * p + x * x + 2j * x * p) / 4)
        np.testing.assert_allclose(got, display, atol=1e-14)

    def test_identity_member_returns_the_signal(self):
        param = TransformParameter.from_t(0.0)
        label = CoherentLabel(0.9, -0.4)
        x = np.linspace(-3, 3, 13)
        got = hfrft_coherent(x, np.zeros_like(x) + 0.7, param, label)
        np.testing.assert_allclose(got, coherent_state(x, label), atol=1e-14)


class TestGaugeIdentity:
    @pytest.mark.parametrize("s", [0.25, 0.5, 1.0, 2.0, 4.0])
    def test_weighted_image_factorizes_through_the_holomorphic_one(self, s):
        param = TransformParameter.from_s(s)
        label = CoherentLabel(0.6, -0.8)
        x = np.linspace(-3, 3, 21)[:, None]
        p = np.linspace(-3, 3, 21)[None, :]
        z = x + 1j * s * p
        lhs = hfrft_coherent(x, p, param, label)
        rhs = gauge_factor(param, p) * sb_coherent(s, label, z)
        scale = np.abs(lhs)
        np.testing.assert_allclose(lhs, rhs, atol=1e-12 * scale.max())
        rel = np.abs(lhs - rhs) / np.maximum(scale, 1e-30)
        assert float(rel.max()) < 1e-11

    def test_unit_scale_origin_value(self):
        got = complex(sb_coherent(1.0, CoherentLabel(0.0, 0.0),
                                  np.array(0.0j)))
        assert got == pytest.approx((2 * math.pi) ** -0.5, rel=1e-15)

    @pytest.mark.parametrize("s", [0.0, math.inf, -1.0])
    def test_degenerate_scales_rejected(self, s):
        with pytest.raises(DegenerateCoordinateError):
            sb_coherent(s, CoherentLabel(0.0, 0.0), np.array(0.0j))

    def test_small_scale_image_approaches_the_signal(self):
        label = CoherentLabel(0.7, 0.2)
        x = np.linspace(-2, 2, 41)
        errors = []
        for s in (1e-2, 1e-3, 1e-4):
            got = sb_coherent(s, label, x.astype(complex))
            errors.append(float(np.max(np.abs(got -
                                              coherent_state(x, label)))))
        # first-order in s: each tenfold drop in s divides the error by ~10
        assert errors[0] / errors[1] == pytest.approx(10.0, rel=0.3)
        assert errors[1] / errors[2] == pytest.approx(10.0, rel=0.3)


class TestEndpointLimit:
    def test_transform_converges_to_the_endpoint_image(self):
        label = CoherentLabel(0.5, -0.3)
        x = np.linspace(-2, 2, 17)[:, None]
        p = np.linspace(-2, 2, 17)[None, :]
        limit = hfrft_endpoint_coherent(x, p, label)
        gaps = []
        for k in (2, 3, 4, 5):
            param = TransformParameter.from_t(math.pi / 2 - 10.0 ** -k)
            gaps.append(float(np.max(np.abs(
                hfrft_coherent(x, p, param, label) - limit))))
        assert all(b < a for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < 1e-3

    def test_endpoint_modulus_is_x_independent(self):
        label = CoherentLabel(0.8, 1.2)
        x = np.linspace(-3, 3, 13)[:, None]
        p = np.linspace(-2, 2, 9)[None, :]
        mods = np.abs(hfrft_endpoint_coherent(x, p, label))
        np.testing.assert_allclose(
            mods, np.broadcast_to(mods[:1, :], mods.shape), rtol=1e-13)


class TestHolomorphy:
    @staticmethod
    def cr_residual(f, x, p, s, h):
        """Discrete d/dz-bar: [f(x+h) - f(x-h)]/(2h) + (i/s) of the p pair."""
        fx = (f(x + h, p) - f(x - h, p)) / (2 * h)
        fp = (f(x, p + h) - f(x, p - h)) / (2 * h)
        return fx + 1j / s * fp

    def test_holomorphic_image_kills_the_antiholomorphic_derivative(self):
        s = 0.8
        label = CoherentLabel(0.4, -0.2)

        def f(x, p):
            return sb_coherent(s, label, x + 1j * s * p)

        res_h = abs(self.cr_residual(f, 0.3, 0.5, s, 1e-2))
        res_half = abs(self.cr_residual(f, 0.3, 0.5, s, 5e-3))
        assert res_h < 1e-4
        # second-order stencil: halving h quarters the residual
        assert res_h / res_half == pytest.approx(4.0, rel=0.1)

    def test_weighted_image_is_holomorphic_after_ungauging(self):
        param = TransformParameter.from_t(math.pi / 4)
        s = param.s
        label = CoherentLabel(0.3, 0.6)

        def g(x, p):
            return hfrft_coherent(x, p, param, label) * np.exp(
                s * p * p / 2)

        res_h = abs(self.cr_residual(g, 0.2, -0.4, s, 1e-2))
        res_half = abs(self.cr_residual(g, 0.2, -0.4, s, 5e-3))
        assert res_h < 1e-4
        assert res_h / res_half == pytest.approx(4.0, rel=0.1)


class TestSumHelpers:
    def test_all_sum_helpers_apply_linearity(self):
        weights = (0.8 + 0.1j, -0.5)
        labels = (CoherentLabel(0.5, 1.2), CoherentLabel(-0.4, -0.9))
        x = np.linspace(-2, 2, 7)
        p = np.linspace(-1, 1, 5)
        param = TransformParameter.from_s(1.5)
        z = x.astype(complex)

        def manual(parts):
            return weights[0] * parts[0] + weights[1] * parts[1]

        np.testing.assert_allclose(
            coherent_sum_values(weights, labels, x),
            manual([coherent_state(x, lab) for lab in labels]), rtol=1e-15)
        np.testing.assert_allclose(
            sb_coherent_sum(1.5, weights, labels, z),
            manual([sb_coherent(1.5, lab, z) for lab in labels]), rtol=1e-15)
        np.testing.assert_allclose(
            hfrft_coherent_sum(x[:, None], p[None, :], param, weights,
                               labels),
            manual([hfrft_coherent(x[:, None], p[None, :], param, lab)
                    for lab in labels]), rtol=1e-15)
        np.testing.assert_allclose(
            endpoint_coherent_sum(x[:, None], p[None, :], weights, labels),
            manual([hfrft_endpoint_coherent(x[:, None], p[None, :], lab)
                    for lab in labels]), rtol=1e-15)
