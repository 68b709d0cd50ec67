import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crouzeix_lab import kms


def det_oracle(k, u, v, w):
    """det(u B + v C + w I) with A = B + iC, computed directly."""
    a = kms.build_kms(k)
    b = (a + a.conj().T) / 2
    c = (a - a.conj().T) / 2j
    return np.linalg.det(u * b + v * c + w * np.eye(k)).real


def test_build_kms_3():
    np.testing.assert_array_equal(kms.build_kms(3), [[0, 1, 1], [0, 0, 1], [0, 0, 0]])


def test_build_kms_2():
    np.testing.assert_array_equal(kms.build_kms(2), [[0, 1], [0, 0]])


@pytest.mark.parametrize("n", [3, 4, 6, 9])
def test_build_kms_nilpotent(n):
    a = kms.build_kms(n)
    assert np.all(np.tril(a) == 0)
    assert np.any(np.linalg.matrix_power(a, n - 1) != 0)
    assert np.all(np.linalg.matrix_power(a, n) == 0)


def test_build_kms_bad():
    with pytest.raises(kms.BadDimension):
        kms.build_kms(1)


def test_boundary_point_examples():
    assert kms.boundary_point(3, 0.0) == pytest.approx(1, abs=1e-15)
    assert kms.boundary_point(3, math.pi) == pytest.approx(-1 / 3, abs=1e-15)
    assert kms.boundary_point(3, 2 * math.pi / 3) == pytest.approx(complex(-0.5, math.sqrt(3) / 6), abs=1e-15)


@pytest.mark.parametrize("k", range(3, 11))
def test_boundary_arc_endpoints(k):
    assert kms.boundary_point(k, 0.0) == pytest.approx((k - 1) / 2, abs=1e-14)
    end = kms.boundary_point(k, 2 * math.pi / k)
    assert end == pytest.approx(complex(-0.5, kms.segment_half_height(k)), abs=1e-14)
    th = np.linspace(-math.pi, math.pi, 101)
    np.testing.assert_allclose(kms.boundary_point(k, -th), np.conj(kms.boundary_point(k, th)), atol=1e-15)


def test_t1():
    assert kms.tangential_poly(1, 0.3, -0.7, 2.5) == 2.5


def test_t3_displayed():
    for w in (-1.0, 0.0, 0.3, 2.0):
        assert kms.tangential_poly(3, 1, 0, w) == pytest.approx(w**3 - 0.75 * w + 0.25, abs=1e-14)


def test_t4_displayed():
    rng = np.random.default_rng(4)
    for u, v, w in rng.normal(size=(20, 3)):
        r2 = u * u + v * v
        expected = w**4 - 1.5 * w**2 * r2 + w * r2 * u - r2 * (3 * u * u - v * v) / 16
        assert kms.tangential_poly(4, u, v, w) == pytest.approx(expected, abs=1e-12)


def test_closed_form_agreement():
    rng = np.random.default_rng(100)
    for _ in range(100):
        k = int(rng.integers(1, 9))
        phi = rng.uniform(0.05, math.pi - 0.05) * rng.choice([-1, 1])
        w = rng.uniform(-2, 2)
        got = kms.tangential_poly(k, math.cos(phi), math.sin(phi), w)
        assert got == pytest.approx(kms.tangential_closed_form(k, phi, w), abs=1e-11)


@settings(max_examples=100, deadline=None)
@given(
    st.integers(2, 8),
    st.floats(-2, 2),
    st.floats(-2, 2) | st.just(0.0),
    st.floats(-2, 2),
)
def test_recursion_matches_determinant(k, u, v, w):
    if u == 0 and v == 0:
        return
    assert kms.tangential_poly(k, u, v, w) == pytest.approx(det_oracle(k, u, v, w), abs=1e-10)


def test_degenerate_direction():
    with pytest.raises(kms.DegenerateDirection):
        kms.tangential_poly(3, 0.0, 0.0, 1.0)


@pytest.mark.parametrize("k", range(2, 9))
def test_tangency_identity(k):
    # theta = 0 is the removable singularity of sin((k-1)t/2)/sin(t/2)
    for theta in np.linspace(-math.pi, math.pi, 97):
        if abs(math.sin(theta / 2)) < 1e-9:
            continue
        w = -math.sin((k - 1) * theta / 2) / (2 * math.sin(theta / 2))
        assert kms.tangential_poly(k, math.cos(k * theta / 2), math.sin(k * theta / 2), w) == pytest.approx(0, abs=1e-10)


def test_cardioid_examples():
    assert kms.cardioid_p(0) == -1
    assert kms.cardioid_p(1) == pytest.approx(0, abs=1e-15)
    assert kms.cardioid_p(-1 / 3) == pytest.approx(0, abs=1e-15)


def test_cardioid_vanishes_on_arc():
    th = np.linspace(-2 * math.pi / 3, 2 * math.pi / 3, 2001)
    assert np.max(np.abs(kms.cardioid_p(kms.boundary_point(3, th)))) <= 1e-11


@pytest.mark.parametrize("k", range(3, 8))
def test_support_function_extremes(k):
    a = kms.build_kms(k)
    assert kms.support_function(a, 0.0) == pytest.approx((k - 1) / 2, abs=1e-12)
    assert kms.support_function(a, math.pi) == pytest.approx(0.5, abs=1e-12)


def test_support_function_zero():
    assert kms.support_function(np.zeros((3, 3)), 1.234) == 0


def phi_prime(k, theta):
    return 1j * sum(j * (k - j) * np.exp(1j * (k - j) * theta) for j in range(1, k)) / k


@pytest.mark.parametrize("k", range(3, 9))
def test_cusps_are_stationary(k):
    cusps = kms.cusp_angles(k)
    assert len(cusps) == k - 2
    for theta in cusps:
        assert abs(phi_prime(k, theta)) < 1e-12
    # each sits within pi/(2k) of a horizontal-tangent angle (2j-1) pi / k, j = 2..k-1
    near = kms.horizontal_tangent_angles(k)[1:-1]
    assert np.max(np.abs(cusps - near)) < math.pi / (2 * k)


@pytest.mark.parametrize("k", range(3, 9))
def test_horizontal_tangents(k):
    # the outer normal e^{i k theta / 2} is vertical there
    for theta in kms.horizontal_tangent_angles(k):
        d = phi_prime(k, theta)
        assert abs(d.imag) <= 1e-12 * max(1.0, abs(d))


def test_k3_cusp_is_at_pi():
    np.testing.assert_allclose(kms.cusp_angles(3), [math.pi], atol=1e-14)


def test_closed_form_sign_against_determinant():
    # the closed form with (-1)^k in front has the opposite sign to det(uB + vC + wI)
    k, phi, w = 3, 0.7, 0.3
    det = det_oracle(k, math.cos(phi), math.sin(phi), w)
    printed = (-1) ** k / math.sin(phi) * (np.exp(-1j * phi) * (np.exp(1j * phi) / 2 - w) ** k).imag
    assert det == pytest.approx(-printed, abs=1e-13)
    assert kms.tangential_closed_form(k, phi, w) == pytest.approx(det, abs=1e-13)


@pytest.mark.parametrize("k", range(3, 9))
def test_flat_points(k):
    pts = kms.flat_points(k)
    assert len(pts) == k - 1
    assert np.all(pts.real == -0.5)
    assert np.all(np.abs(pts.imag) <= kms.segment_half_height(k) + 1e-15)
    on_curve = kms.boundary_point(k, 2 * math.pi * np.arange(1, k) / k)
    np.testing.assert_allclose(pts, on_curve, atol=1e-13)


def test_discretize_k3_n8():
    d = kms.discretize_boundary(3, 8)
    assert d.nodes[0] == 1
    assert d.nodes[8] == pytest.approx(complex(-0.5, math.sqrt(3) / 6), abs=1e-14)
    # the end step is longer than the half segment: no interior segment node
    assert d.n_segment == 0 and d.nn == 17
    assert d.nodes[9] == d.nodes[8].conjugate()


def test_discretize_k3_n100_segment():
    d = kms.discretize_boundary(3, 100)
    assert d.n_segment > 0
    assert d.parts[100] == "algebraic" and d.parts[101] == "segment"


@pytest.mark.parametrize("k", range(3, 8))
@pytest.mark.parametrize("n", [4, 8, 17, 50, 200])
def test_discretize_odd_and_symmetric(k, n):
    d = kms.discretize_boundary(k, n)
    assert d.nn % 2 == 1
    assert d.nn == kms.node_count(k, n)
    # node j and node nn - j are conjugate, exactly
    idx = (-np.arange(d.nn)) % d.nn
    np.testing.assert_array_equal(d.nodes[idx], d.nodes.conj())
    seg = d.nodes[np.array(d.parts) == "segment"]
    if len(seg):
        assert np.all(seg.real == d.nodes[n].real)
        assert np.min(np.abs(seg.imag)) == pytest.approx(d.step / 2, rel=1e-12)


def test_discretize_on_boundary_k4():
    d = kms.discretize_boundary(4, 16)
    a = kms.build_kms(4)
    assert np.max(kms.support_excess(a, d.nodes)) <= 1e-10
    # every node touches the supporting line of its own outer normal
    th = 2 * np.pi * np.arange(17) / (16 * 4)
    for j, t in enumerate(th):
        omega = 4 * t / 2
        z = d.nodes[j]
        assert (np.exp(-1j * omega) * z).real == pytest.approx(kms.support_function(a, omega), abs=1e-8)
    for z in d.nodes[np.array(d.parts) == "segment"]:
        assert (-z).real == pytest.approx(kms.support_function(a, math.pi), abs=1e-12)


def test_too_coarse():
    with pytest.raises(ValueError):
        kms.discretize_boundary(3, 3)


@pytest.mark.parametrize("nn", [23, 47, 95, 191, 383, 767, 1205, 1447])
def test_discretize_total_exact_counts(nn):
    assert kms.discretize_total(3, nn).nn == nn


def test_discretize_total_k100():
    d = kms.discretize_total(100, 1205)
    assert abs(d.nn - 1205) <= 4
    assert d.nodes[0] == pytest.approx(49.5)


def test_boundary_rows():
    d = kms.discretize_boundary(3, 40)
    rows = kms.boundary_rows(d)
    assert len(rows) == d.nn
    assert rows[0] == (0, 1.0, 0.0, "algebraic")
    assert {r[3] for r in rows} == {"algebraic", "segment"}
