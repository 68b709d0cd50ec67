import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crouzeix_lab import kms, omega
from crouzeix_lab.bounds import build_H, toeplitz_upper
from crouzeix_lab.linalg import cond2

ZERO7 = (0.0,) * 7


def rmap(num, den=ZERO7):
    return omega.RationalMap(tuple(num) + (0.0,) * (7 - len(num)), tuple(den) + (0.0,) * (7 - len(den)))


def test_f1_examples():
    assert omega.f1_eval(0) == 0
    ident = rmap([1.0])
    np.testing.assert_allclose(ident(np.array([0.3j, -0.5])), [0.3j, -0.5])
    z = 0.4 - 0.2j
    num = sum(c * z ** (j + 1) for j, c in enumerate(omega.PUBLISHED_C))
    den = 1 + sum(d * z ** (j + 1) for j, d in enumerate(omega.PUBLISHED_D))
    assert omega.f1_eval(z) == pytest.approx(num / den, abs=1e-15)


def test_f1_derivative_matches_difference():
    z, h = 0.3 + 0.4j, 1e-6
    fd = (omega.f1_eval(z + h) - omega.f1_eval(z - h)) / (2 * h)
    assert omega.PUBLISHED_F1.derivative(z) == pytest.approx(fd, abs=1e-8)


def test_pole_proximity():
    f = rmap([1.0], [2.0])
    with pytest.raises(omega.PoleProximity):
        f(-0.5)


def test_g1_identity_and_scaling():
    assert omega.g1_derivs(rmap([1.0])) == pytest.approx((1.0, 1.0))
    assert omega.g1_derivs(rmap([2.0])) == pytest.approx((0.5, 0.5))
    # inverse of z / (1 + d z) is w / (1 - d w)
    assert omega.g1_derivs(rmap([1.0], [0.3])) == pytest.approx((1.0, 1.3))


def test_degenerate_map():
    with pytest.raises(omega.DegenerateMap):
        omega.g1_derivs(rmap([0.0, 1.0]))


def test_g1_against_cauchy_oracle():
    a1, b1 = omega.g1_derivs()
    t1, t2 = omega.inverse_taylor()
    assert a1 == pytest.approx(t1, abs=1e-10)
    assert b1 == pytest.approx(t1 + t2, abs=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.5, 2), st.floats(-0.3, 0.3), st.floats(-0.3, 0.3))
def test_g1_oracle_random_maps(c1, c2, d1):
    f = rmap([c1, c2], [d1])
    a1, b1 = omega.g1_derivs(f)
    t1, t2 = omega.inverse_taylor(f, radius=0.02)
    assert a1 == pytest.approx(t1, abs=1e-9)
    assert b1 - a1 == pytest.approx(t2, abs=1e-8)


def test_published_g1_values():
    a1, b1 = omega.g1_derivs()
    assert a1 == pytest.approx(1 / 0.734, rel=1e-15)
    assert a1 == pytest.approx(1.36239782, abs=5e-9)
    assert b1 == pytest.approx(0.70911103, abs=5e-9)


def test_cond_H1_examples():
    assert omega.cond_H1() == pytest.approx(1.9996221893, abs=1e-9)
    assert omega.cond_H1() < 2
    ident = rmap([1.0])
    assert omega.cond_H1(ident) == pytest.approx(cond2(build_H(3, (1.0, 1.0)).H), rel=1e-14)


def test_m1_matrix():
    a1, b1 = omega.g1_derivs()
    np.testing.assert_array_equal(omega.m1_matrix(), toeplitz_upper((a1, b1)))


def test_denominator_zero_count():
    assert omega.PUBLISHED_F1.denominator_zeros_in_disk() == 0
    assert rmap([1.0], [2.0]).denominator_zeros_in_disk() == 1
    assert rmap([1.0], [0.0, 4.0]).denominator_zeros_in_disk() == 2
    with pytest.raises(omega.PoleProximity):
        rmap([1.0], [1.0]).denominator_zeros_in_disk()


@pytest.mark.parametrize("samples", [99, 101, 102, 40])
def test_samples_validation(samples):
    with pytest.raises(ValueError):
        omega.verify_inclusion(samples)


def test_rectangle():
    assert omega.rectangle_in_w()
    corners = omega.rectangle_corners()
    assert np.all(kms.support_excess(kms.build_kms(3), corners) < 0)
    # pushing the box out to Re = -0.6 leaves W(A_3)
    assert np.max(kms.support_excess(kms.build_kms(3), corners - 0.1)) > 0


def test_omega_inside_w():
    curve = omega.f1_eval(np.exp(1j * np.linspace(0, 2 * np.pi, 2001)))
    assert np.max(kms.support_excess(kms.build_kms(3), curve)) < 0


def test_default_caps_rule():
    f = omega.PUBLISHED_F1
    assert omega.default_caps(1000, f, 0.01, 0.01) == (0.018, 0.015)
    caps = omega.default_caps(1000, f, 0.2, 0.01)
    assert caps == pytest.approx((0.21, 0.015))
    assert omega.default_caps(2000, f, 0.01, 0.01) == pytest.approx((0.0105, 0.0105))


def test_inclusion_published_run():
    rep = omega.verify_inclusion()
    assert rep.included
    assert rep.denominator_zeros == 0
    assert rep.segment_box_ok and rep.rectangle_in_w
    assert rep.cardioid_cap >= rep.max_dp_quotient
    assert rep.segment_cap >= rep.max_dre_quotient
    assert rep.min_re_segment == pytest.approx(-0.4998968, abs=5e-6)


def test_inclusion_refinement():
    coarse = omega.verify_inclusion(200)
    assert not coarse.included
    results = [omega.verify_inclusion(s) for s in (1000, 2000, 4000)]
    assert all(r.included for r in results)
    margins = [r.cardioid_certified_bound for r in results]
    assert margins == sorted(margins, reverse=True)


def test_explicit_caps_are_used():
    rep = omega.verify_inclusion(1000, caps=(0.0, 0.0))
    assert rep.cardioid_certified_bound == rep.max_p_cardioid
    assert rep.segment_certified_bound == rep.min_re_segment


def test_record_has_cond():
    rec = omega.verify_inclusion(1000).to_record()
    assert "curves" not in rec
    assert rec["cond_H1"] == pytest.approx(1.9996221893, abs=1e-9)
    assert math.isfinite(rec["max_p_cardioid"])
