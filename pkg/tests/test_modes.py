import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holowalsh.channel import build_channel, channel_svd
from holowalsh.experiment import rayleigh_distance
from holowalsh.geometry import SamplePoint, sample_disk
from holowalsh.modes import (
    ModeSpec,
    build_mode_precoder,
    build_svd_precoder,
    continuous_walsh_gram,
    gram_orthogonality,
    oam_angular_gram,
    oam_focused_value,
    oam_order,
    oam_unfocused_value,
    walsh_value,
)

R_T = 10.0
AMP = 1 / (math.sqrt(math.pi) * R_T)


def polar(rho, theta):
    return SamplePoint(rho * math.cos(theta), rho * math.sin(theta), rho, theta)


def wrap(phi):
    return (phi + math.pi) % (2 * math.pi) - math.pi


def test_oam_orders():
    assert [oam_order(n) for n in range(7)] == [0, 1, -1, 2, -2, 3, -3]
    with pytest.raises(ValueError):
        oam_order(-1)


def test_oam_unfocused_examples():
    v0 = oam_unfocused_value(0, polar(3.0, 1.234), R_T)
    assert v0 == pytest.approx(AMP)
    assert cmath.phase(oam_unfocused_value(1, polar(2.0, math.pi / 2), R_T)) == pytest.approx(math.pi / 2)
    assert cmath.phase(oam_unfocused_value(2, polar(2.0, math.pi / 2), R_T)) == pytest.approx(-math.pi / 2)


def test_oam_focused_examples():
    p0 = polar(0.0, 0.0)
    f, u = oam_focused_value(3, p0, R_T, 20.0), oam_unfocused_value(3, p0, R_T)
    assert abs(wrap(cmath.phase(f / u) - 2 * math.pi * 20.0)) < 1e-9
    assert abs(f) == pytest.approx(abs(u))

    p = polar(5.0, 0.7)
    extra = 2 * math.pi * 20 * (1 + 25 / 800)
    f0, u0 = oam_focused_value(0, p, R_T, 20.0), oam_unfocused_value(0, p, R_T)
    assert abs(wrap(cmath.phase(f0) - cmath.phase(u0) - extra)) < 1e-9
    with pytest.raises(ValueError):
        oam_focused_value(0, p, R_T, 0.0)


@settings(max_examples=50)
@given(n=st.integers(0, 40), rho=st.floats(0, R_T), theta=st.floats(0, 2 * math.pi, exclude_max=True),
       d=st.floats(1, 500))
def test_oam_constant_amplitude(n, rho, theta, d):
    p = polar(rho, theta)
    assert abs(oam_focused_value(n, p, R_T, d)) == pytest.approx(AMP, rel=1e-12)
    assert abs(oam_unfocused_value(n, p, R_T)) == pytest.approx(AMP, rel=1e-12)


def test_walsh_examples():
    assert walsh_value(0, 0, 2, 2, polar(7.3, 4.0), R_T) == pytest.approx(AMP)
    assert walsh_value(0, 1, 0, 1, polar(3.0, math.pi / 4), R_T) == pytest.approx(AMP)
    assert walsh_value(0, 1, 0, 1, polar(3.0, 3 * math.pi / 2), R_T) == pytest.approx(-AMP)
    assert walsh_value(1, 0, 1, 0, polar(0.5 * R_T, 0.0), R_T) == pytest.approx(AMP)
    assert walsh_value(1, 0, 1, 0, polar(0.9 * R_T, 0.0), R_T) == pytest.approx(-AMP)


def test_walsh_sign_of_zero_is_positive():
    # cos(theta / 2) == 0 at theta == pi; cos(pi u) == 0 at u == 1/2
    assert walsh_value(0, 1, 0, 1, polar(1.0, math.pi), R_T) > 0
    from holowalsh.modes import _sgn
    assert list(_sgn(np.array([0.0, -0.0, -1e-300, 2.0]))) == [1.0, 1.0, -1.0, 1.0]


def test_walsh_index_range():
    with pytest.raises(ValueError):
        walsh_value(4, 0, 2, 2, polar(1.0, 0.0), R_T)
    with pytest.raises(ValueError):
        ModeSpec("walsh", (0, 2), 2, 1)


@settings(max_examples=100)
@given(m=st.integers(0, 3), n=st.integers(0, 3), rho=st.floats(0, R_T),
       theta=st.floats(0, 2 * math.pi, exclude_max=True))
def test_walsh_separable_and_binary(m, n, rho, theta):
    p = polar(rho, theta)
    v = walsh_value(m, n, 2, 2, p, R_T)
    assert abs(v) == pytest.approx(AMP)
    assert v == pytest.approx(walsh_value(m, 0, 2, 2, p, R_T) * walsh_value(0, n, 2, 2, p, R_T)
                              * math.sqrt(math.pi) * R_T)


def test_walsh_precoder_ordering():
    F = build_mode_precoder("walsh", sample_disk(3.0), 16, mu=2, nu=2)
    assert [s.index for s in F.modes] == [(m, n) for m in range(4) for n in range(4)]


@pytest.mark.parametrize("family,kw", [
    ("oam_unfocused", {}),
    ("oam_focused", {"d": 37.0}),
    ("walsh", {"mu": 4, "nu": 0}),
    ("walsh", {"mu": 0, "nu": 4}),
    ("walsh", {"mu": 2, "nu": 2}),
])
def test_precoder_unit_columns_and_constant_amplitude(family, kw):
    ap = sample_disk(R_T)
    F = build_mode_precoder(family, ap, 16, **kw)
    assert F.matrix.shape == (len(ap), 16)
    assert np.abs(np.linalg.norm(F.matrix, axis=0) - 1).max() <= 1e-12
    mags = np.abs(F.matrix)
    np.testing.assert_allclose(mags, 1 / math.sqrt(len(ap)), rtol=1e-12)
    if family == "walsh":
        assert np.all(F.matrix.imag == 0)


def test_oam_unfocused_gram_at_half_wavelength():
    F = build_mode_precoder("oam_unfocused", sample_disk(R_T, 0.5), 16)
    g = F.matrix.conj().T @ F.matrix
    assert np.abs(g - np.eye(16)).max() <= 0.05


def test_focused_and_unfocused_share_gram_magnitudes():
    ap = sample_disk(R_T)
    gu = build_mode_precoder("oam_unfocused", ap, 16).matrix
    gf = build_mode_precoder("oam_focused", ap, 16, d=50.0).matrix
    np.testing.assert_allclose(np.abs(gf.conj().T @ gf), np.abs(gu.conj().T @ gu), atol=1e-12)


def test_precoder_errors():
    ap = sample_disk(1.0)  # 13 points
    with pytest.raises(ValueError):
        build_mode_precoder("oam_unfocused", ap, 14)
    with pytest.raises(ValueError):
        build_mode_precoder("walsh", sample_disk(5.0), 17, mu=2, nu=2)
    with pytest.raises(ValueError):
        build_mode_precoder("oam_focused", ap, 4)
    with pytest.raises(ValueError):
        build_mode_precoder("bessel", ap, 4)


def test_walsh_defect_shrinks_with_refinement():
    coarse = build_mode_precoder("walsh", sample_disk(R_T, 0.5), 16, mu=2, nu=2)
    fine = build_mode_precoder("walsh", sample_disk(R_T, 0.25), 16, mu=2, nu=2)
    assert gram_orthogonality(fine) < gram_orthogonality(coarse)


def test_gram_single_column():
    assert gram_orthogonality(np.ones((5, 1)) / math.sqrt(5)) == 0.0


@pytest.fixture(scope="module")
def paper_channel():
    tx = sample_disk(R_T, 0.5, 0.0)
    H = build_channel(tx, tx.at(0.5 * rayleigh_distance(R_T)))
    return H, channel_svd(H)


def test_svd_precoder(paper_channel):
    H, svd = paper_channel
    F = build_svd_precoder(svd, 16)
    assert gram_orthogonality(F) <= 1e-10
    assert np.abs(F.matrix.conj().T @ F.matrix - np.eye(16)).max() <= 1e-10
    gains = np.linalg.norm(H.entries @ F.matrix, axis=0)
    np.testing.assert_allclose(gains, svd.singular_values[:16], rtol=1e-8)
    with pytest.raises(ValueError):
        build_svd_precoder(svd, svd.right_vectors.shape[1] + 1)


def test_svd_precoder_rank_one():
    h = np.outer([1.0, 2.0], [3.0, 4j])
    F = build_svd_precoder(channel_svd(h), 1)
    v = np.array([3.0, -4j]) / 5  # conj of row space, unit norm
    assert abs(abs(np.vdot(v, F.matrix[:, 0])) - 1) < 1e-12


def test_continuous_walsh_orthonormal():
    G = continuous_walsh_gram(2, 2, r_t=R_T, n_radial=512, n_angular=512)
    assert np.abs(G - np.eye(16)).max() <= 1e-2


def test_oam_angular_orthogonality():
    assert np.abs(oam_angular_gram(16) - np.eye(16)).max() <= 1e-10
