"""Noncentrality formulas and tail probabilities.

Oracles: mpmath for the regularized gamma tail, direct quadrature of the
Marcum Q integrand, scipy's chi-square quantiles for the threshold solve, and
hand-reduced closed forms for the single-stream noncentrality.
"""

import math

import mpmath
import numpy as np
import pytest
from scipy import integrate, special, stats
from scipy.optimize import brentq

from passive_isac.asymptotics import (
    asymptotic_perf,
    asymptotic_pd,
    asymptotic_pfa,
    asymptotic_threshold,
    gamma_tail_regularized,
    kappa_active,
    kappa_eigform,
    kappa_general,
    kappa_single_cu,
    marcum_q,
    snr_d,
    snr_t,
)
from passive_isac.errors import ConfigError, DimensionMismatch


def _pair(rng, m, c, scale_t=1.0, scale_d=1.0):
    h_t = scale_t * (rng.standard_normal((m, c)) + 1j * rng.standard_normal((m, c)))
    h_d = scale_d * (rng.standard_normal((m, c)) + 1j * rng.standard_normal((m, c)))
    return h_t, h_d


def test_noncentrality_vanishes_without_either_path():
    rng = np.random.default_rng(0)
    h_t, h_d = _pair(rng, 3, 2)
    assert kappa_general(np.zeros_like(h_t), h_d, 1.0, 100) == 0.0
    assert kappa_general(h_t, np.zeros_like(h_d), 1.0, 100) == 0.0


def test_noncentrality_linear_in_block_length():
    rng = np.random.default_rng(1)
    h_t, h_d = _pair(rng, 4, 2)
    k1 = kappa_general(h_t, h_d, 0.3, 250)
    k2 = kappa_general(h_t, h_d, 0.3, 500)
    assert k2 == pytest.approx(2.0 * k1, rel=1e-12)


def test_noncentrality_single_stream_closed_form():
    # one stream: kappa = 2 L (|h_t|^2/s2) x/(1+x) with x = |h_d|^2/s2
    s2, l = 2.0, 500
    h_t = np.array([[math.sqrt(0.01 * s2)], [0.0]], dtype=complex)
    h_d = np.array([[0.0], [math.sqrt(10.0 * s2)]], dtype=complex)
    want = 2.0 * l * 0.01 * 10.0 / 11.0
    assert kappa_general(h_t, h_d, s2, l) == pytest.approx(want, rel=1e-12)
    # and the SNR-space wrapper agrees on the same scene
    st = snr_t(h_t, s2)
    sd = snr_d(h_d, s2)
    assert kappa_single_cu(st, sd, 2, l) == pytest.approx(want, rel=1e-12)


def test_noncentrality_eigenform_agrees_with_direct_formula():
    rng = np.random.default_rng(2)
    for _ in range(25):
        m = int(rng.integers(1, 7))
        c = int(rng.integers(1, 5))
        h_t, h_d = _pair(rng, m, c, scale_t=10.0 ** rng.uniform(-1, 1))
        s2 = 10.0 ** rng.uniform(-1, 1)
        k_direct = kappa_general(h_t, h_d, s2, 300)
        k_eig, sb, deltas, _ = kappa_eigform(h_t, h_d, s2, 300)
        assert k_eig == pytest.approx(k_direct, rel=1e-10, abs=1e-12)
        rebuilt = 2.0 * 300 / s2 * float(np.sum(sb / (1.0 + sb) * deltas))
        assert rebuilt == pytest.approx(k_direct, rel=1e-10, abs=1e-12)


def test_noncentrality_invariant_to_common_stream_rotation():
    rng = np.random.default_rng(3)
    h_t, h_d = _pair(rng, 4, 3)
    z = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    u, _ = np.linalg.qr(z)
    a = kappa_general(h_t, h_d, 0.5, 200)
    b = kappa_general(h_t @ u, h_d @ u, 0.5, 200)
    assert b == pytest.approx(a, rel=1e-10)


def test_noncentrality_bounded_by_known_waveform_benchmark():
    rng = np.random.default_rng(4)
    for _ in range(50):
        m = int(rng.integers(1, 7))
        c = int(rng.integers(1, 5))
        h_t, h_d = _pair(rng, m, c, scale_d=10.0 ** rng.uniform(-2, 2))
        s2 = 10.0 ** rng.uniform(-1, 1)
        k = kappa_general(h_t, h_d, s2, 100)
        cap = kappa_active(snr_t(h_t, s2), m, 100)
        assert k <= cap * (1.0 + 1e-12)


def test_noncentrality_input_validation():
    with pytest.raises(DimensionMismatch):
        kappa_general(np.zeros((2, 1)), np.zeros((3, 1)), 1.0, 10)
    with pytest.raises(ConfigError):
        kappa_general(np.zeros((2, 1)), np.zeros((2, 1)), 0.0, 10)
    with pytest.raises(ConfigError):
        kappa_single_cu(-0.1, 1.0, 2, 10)
    with pytest.raises(ConfigError):
        kappa_active(0.1, 0, 10)


def test_snr_definitions():
    h = (1.0 + 1.0j) / math.sqrt(2.0) * np.arange(1.0, 9.0).reshape(4, 2)
    s2 = 2.0
    want = float(np.sum(np.arange(1.0, 9.0) ** 2)) / (4 * s2)  # 204 / 8
    assert snr_t(h, s2) == pytest.approx(want, rel=1e-12)
    assert snr_d(h, s2) == pytest.approx(want, rel=1e-12)
    assert snr_t(np.zeros((3, 2)), 1.0) == 0.0
    assert snr_t(2.0 * h, s2) == pytest.approx(4.0 * want, rel=1e-12)


def test_single_stream_wrapper_limits():
    assert kappa_single_cu(0.0, 5.0, 4, 500) == 0.0
    assert kappa_single_cu(0.01, 0.0, 4, 500) == 0.0
    # strong direct path saturates at the known-waveform value
    k = kappa_single_cu(0.01, 1e9, 4, 500)
    assert k == pytest.approx(kappa_active(0.01, 4, 500), rel=1e-8)
    assert kappa_single_cu(0.01, 1.0, 4, 500) == pytest.approx(32.0, rel=1e-12)


def test_gamma_tail_against_mpmath():
    assert gamma_tail_regularized(3.0, 0.0) == 1.0
    for x in (0.1, 1.0, 5.0):
        assert gamma_tail_regularized(1.0, x) == pytest.approx(math.exp(-x), rel=1e-12)
    mpmath.mp.dps = 40
    for s, x in ((8.0, 19.626), (2.0, 0.3), (12.5, 30.0), (1.5, 1e-3)):
        want = float(mpmath.gammainc(s, x, mpmath.inf, regularized=True))
        assert gamma_tail_regularized(s, x) == pytest.approx(want, rel=1e-9)


def _marcum_quadrature(m, a, b):
    def f(x):
        return x * (x / a) ** (m - 1) * math.exp(-(x * x + a * a) / 2.0) * special.iv(m - 1, a * x)

    val, _ = integrate.quad(f, b, b + 60.0, limit=400)
    return val


def test_marcum_q_against_quadrature():
    assert marcum_q(2.0, 1.5, 0.0) == 1.0
    for b in (0.5, 1.0, 2.0):
        assert marcum_q(1.0, 0.0, b) == pytest.approx(math.exp(-b * b / 2.0), rel=1e-12)
    for m, a, b in ((1.0, 1.0, 1.0), (4.0, 4.47, 6.26), (2.0, 0.3, 4.0)):
        assert marcum_q(m, a, b) == pytest.approx(_marcum_quadrature(m, a, b), rel=1e-9)


def test_false_alarm_matches_chi_square():
    assert asymptotic_pfa(0.0, 4) == 1.0
    for rho in (0.5, 2.0, 8.0):
        assert asymptotic_pfa(rho, 2) == pytest.approx(math.exp(-rho), rel=1e-12)
    # twice the threshold is the chi-square quantile with nu degrees of freedom
    rho = asymptotic_threshold(1e-3, 16)
    assert 2.0 * rho == pytest.approx(stats.chi2.isf(1e-3, 16), rel=1e-9)
    assert asymptotic_pfa(rho, 16) == pytest.approx(1e-3, rel=1e-9)


def test_detection_probability_limits_and_monotonicity():
    assert asymptotic_pd(0.0, 4, 5.0) == 1.0
    for rho in (1.0, 4.0):
        assert asymptotic_pd(rho, 4, 0.0) == pytest.approx(asymptotic_pfa(rho, 4), rel=1e-12)
    rho = asymptotic_threshold(0.01, 8)
    pds = [asymptotic_pd(rho, 8, k) for k in (0.0, 2.0, 8.0, 32.0, 128.0)]
    assert all(b > a for a, b in zip(pds, pds[1:]))
    assert pds[-1] > 0.99
    drops = [asymptotic_pd(r, 8, 20.0) for r in (2.0, 8.0, 20.0, 40.0)]
    assert all(b < a for a, b in zip(drops, drops[1:]))
    with pytest.raises(ConfigError):
        asymptotic_pd(-1.0, 8, 1.0)
    with pytest.raises(ConfigError):
        asymptotic_pd(1.0, 8, -1.0)


def test_perf_bundle_reproduces_direct_formula():
    rng = np.random.default_rng(5)
    h_t, h_d = _pair(rng, 4, 2)
    perf = asymptotic_perf(h_t, h_d, 0.4, 500)
    assert perf.nu == 16
    assert perf.kappa == pytest.approx(kappa_general(h_t, h_d, 0.4, 500), rel=1e-10)
    rho = asymptotic_threshold(0.05, perf.nu)
    assert perf.pfa(rho) == pytest.approx(0.05, rel=1e-8)
    assert perf.pd(rho) == pytest.approx(asymptotic_pd(rho, perf.nu, perf.kappa), rel=1e-12)


def test_strong_direct_path_needs_same_snr_as_known_waveform():
    """With M snr_d = 1e4 the unknown-signal detector loses almost nothing:
    the target SNR needed for Pd = 0.9 matches the known-waveform benchmark
    to within one percent."""
    m, l, nu = 4, 500, 8
    sd = 1e4 / m
    rho = asymptotic_threshold(1e-4, nu)

    def passive_gap(st):
        return asymptotic_pd(rho, nu, kappa_single_cu(st, sd, m, l)) - 0.9

    def active_gap(st):
        return asymptotic_pd(rho, nu, kappa_active(st, m, l)) - 0.9

    st_p = brentq(passive_gap, 1e-6, 10.0, xtol=1e-12)
    st_a = brentq(active_gap, 1e-6, 10.0, xtol=1e-12)
    assert st_p > st_a  # unknown signal can never be easier
    assert abs(st_p / st_a - 1.0) < 0.01
