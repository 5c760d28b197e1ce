"""Detection statistics, thresholds, and decisions."""

import numpy as np
import pytest

from passive_isac.asymptotics import asymptotic_threshold
from passive_isac.detector import (
    active_statistic,
    calibrate_threshold,
    decide,
    glrt_statistic,
    threshold_from_samples,
)
from passive_isac.errors import (
    DimensionMismatch,
    InsufficientTrials,
    NumericalFailure,
    SingularGram,
)
from passive_isac.waveform import gen_symbols_gaussian, synth_equivalent_from_matrices


def _rows_with_gram(gram: np.ndarray, l: int) -> np.ndarray:
    """Rows Y (k x L) with Y Y^H exactly equal to ``gram``."""
    chol = np.linalg.cholesky(gram)
    out = np.zeros((gram.shape[0], l), dtype=complex)
    out[:, : gram.shape[0]] = chol
    return out


def test_statistic_matches_hand_computed_eigenvalues():
    # scaled Gram [[3, 1], [1, 3]] has eigenvalues 4 and 2; the direct block
    # alone is the scalar 3.  With one stream only the top eigenvalue of each
    # enters, so the statistic is L * ((4 - ln 4) - (3 - ln 3)).
    l, s2 = 100, 1.0
    res = glrt_statistic(_rows_with_gram(np.array([[3.0, 1.0], [1.0, 3.0]]) * l * s2, l), s2, 1)
    want = l * (1.0 - np.log(4.0 / 3.0))
    assert res.statistic == pytest.approx(want, rel=1e-12)
    assert res.psi == pytest.approx([4.0, 2.0], rel=1e-12)
    assert res.phi == pytest.approx([3.0], rel=1e-12)
    assert (res.epsilon0, res.zeta0) == (1, 1)


def test_statistic_invariant_to_right_unitary_rotation():
    rng = np.random.default_rng(0)
    m, l, s2, c = 2, 40, 0.7, 2
    y = rng.standard_normal((2 * m, l)) + 1j * rng.standard_normal((2 * m, l))
    z = rng.standard_normal((l, l)) + 1j * rng.standard_normal((l, l))
    u, _ = np.linalg.qr(z)
    a = glrt_statistic(y, s2, c).statistic
    b = glrt_statistic(y @ u, s2, c).statistic
    assert b == pytest.approx(a, rel=1e-10)


def test_statistic_invariant_to_receiver_relabeling():
    rng = np.random.default_rng(1)
    m, l, s2, c = 2, 30, 1.3, 1
    y = rng.standard_normal((2 * m, l)) + 1j * rng.standard_normal((2 * m, l))
    perm = np.r_[[1, 0], [3, 2]]  # swap receivers in both blocks
    a = glrt_statistic(y, s2, c).statistic
    b = glrt_statistic(y[perm], s2, c).statistic
    assert b == pytest.approx(a, rel=1e-10)


def test_statistic_nonnegative_on_random_inputs():
    rng = np.random.default_rng(2)
    for _ in range(200):
        m = int(rng.integers(1, 4))
        l = int(rng.integers(2 * m, 60))
        scale = 10.0 ** rng.uniform(-2, 2)
        y = scale * (rng.standard_normal((2 * m, l)) + 1j * rng.standard_normal((2 * m, l)))
        c = int(rng.integers(1, 4))
        assert glrt_statistic(y, 1.0, c).statistic >= -1e-9


def test_statistic_zero_when_all_eigenvalues_subunit():
    # every eigenvalue below one means no component is kept on either side
    l = 50
    y = _rows_with_gram(np.diag([0.5, 0.3, 0.2, 0.1]) * l, l)
    res = glrt_statistic(y, 1.0, 3)
    assert res.statistic == 0.0
    assert (res.epsilon0, res.zeta0) == (0, 0)


def test_component_counts_follow_eigenvalue_and_stream_caps():
    l = 64
    y = _rows_with_gram(np.diag([5.0, 3.0, 0.5, 0.2]) * l, l)
    for c, eps_want in ((1, 1), (2, 2), (3, 2)):
        res = glrt_statistic(y, 1.0, c)
        assert res.epsilon0 == eps_want
        assert res.zeta0 == 0  # direct block eigenvalues are 0.5 and 0.2

    y = _rows_with_gram(np.diag([5.0, 3.0, 2.0, 1.5]) * l, l)
    res = glrt_statistic(y, 1.0, 3)
    assert (res.epsilon0, res.zeta0) == (3, 2)  # zeta capped by M = 2


def test_statistic_input_validation():
    rng = np.random.default_rng(3)
    y = rng.standard_normal((3, 10))
    with pytest.raises(DimensionMismatch):
        glrt_statistic(y, 1.0, 1)  # odd row count
    with pytest.raises(DimensionMismatch):
        glrt_statistic(rng.standard_normal((4, 3)), 1.0, 1)  # L < 2M
    with pytest.raises(NumericalFailure):
        glrt_statistic(rng.standard_normal((2, 10)), 0.0, 1)
    bad = rng.standard_normal((2, 10)).astype(complex)
    bad[0, 0] = np.nan
    with pytest.raises(NumericalFailure):
        glrt_statistic(bad, 1.0, 1)


def test_known_waveform_statistic_zero_and_projection_identity():
    rng = np.random.default_rng(4)
    c, l, m, s2 = 2, 40, 3, 0.5
    s = gen_symbols_gaussian(rng, c, l)
    assert active_statistic(np.zeros((m, l), dtype=complex), s, s2) == 0.0

    h = rng.standard_normal((m, c)) + 1j * rng.standard_normal((m, c))
    y = h @ s.data
    got = active_statistic(y, s, s2)
    gram = s.data @ s.data.conj().T
    want = float(np.real(np.trace(h @ gram @ h.conj().T))) / s2
    assert got == pytest.approx(want, rel=1e-10)


def test_known_waveform_statistic_null_mean():
    rng = np.random.default_rng(5)
    m, c, l, s2 = 3, 2, 50, 2.0
    s = gen_symbols_gaussian(rng, c, l)
    acc = 0.0
    n = 10_000
    for _ in range(n):
        noise = np.sqrt(s2 / 2) * (rng.standard_normal((m, l)) + 1j * rng.standard_normal((m, l)))
        acc += active_statistic(noise, s, s2)
    # twice the statistic is chi-square with 2 * M * C degrees of freedom
    assert 2.0 * acc / n == pytest.approx(2 * m * c, rel=0.05)


def test_known_waveform_statistic_rejects_degenerate_symbols():
    rng = np.random.default_rng(6)
    s = rng.standard_normal((2, 30)) + 1j * rng.standard_normal((2, 30))
    s[1] = s[0]
    y = rng.standard_normal((4, 30)) + 1j * rng.standard_normal((4, 30))
    with pytest.raises(SingularGram):
        active_statistic(y, s, 1.0)
    with pytest.raises(DimensionMismatch):
        active_statistic(y, s[:, :20], 1.0)


def test_threshold_rank_rule():
    stats = np.arange(1.0, 101.0)
    rho = threshold_from_samples(stats, 0.1)
    assert rho == 91.0
    assert np.mean(stats > rho) == pytest.approx(0.09)
    with pytest.raises(InsufficientTrials):
        threshold_from_samples(stats, 0.05)  # n * pfa < 10
    with pytest.raises(InsufficientTrials):
        threshold_from_samples(stats, 1.5)


def test_calibration_deterministic_in_master_seed():
    def sampler(rng):
        return float(rng.standard_normal())

    a = calibrate_threshold(sampler, 0.1, 200, 42)
    b = calibrate_threshold(sampler, 0.1, 200, 42)
    assert a.rho == b.rho
    assert a.seed == 42 and a.n_trials == 200 and a.method == "empirical"
    with pytest.raises(InsufficientTrials):
        calibrate_threshold(sampler, 0.01, 100, 0)


def test_calibrated_threshold_close_to_asymptotic():
    m, c, l, s2, pfa = 2, 1, 2000, 1.0, 0.05
    h_d = np.array([[1.0 + 0.5j], [0.8 - 0.3j]])
    h_t = np.zeros((m, c), dtype=complex)

    def sampler(rng):
        block = gen_symbols_gaussian(rng, c, l)
        obs = synth_equivalent_from_matrices(h_t, h_d, block, s2, "h1", rng)
        return 2.0 * glrt_statistic(obs, s2, c).statistic

    thr = calibrate_threshold(sampler, pfa, 2000, 7)
    rho = asymptotic_threshold(pfa, 2 * m * c)
    assert abs(thr.rho / (2.0 * rho) - 1.0) < 0.10


def test_decision_is_strict_exceedance():
    assert decide(1.5, 1.0)
    assert not decide(1.0, 1.0)
    assert not decide(0.5, 1.0)
    thr = calibrate_threshold(lambda rng: float(rng.random()), 0.2, 100, 0)
    assert decide(thr.rho + 1e-9, thr)
    assert not decide(thr.rho, thr)


def test_mean_statistic_grows_with_target_strength():
    rng = np.random.default_rng(8)
    m, c, l, s2 = 2, 1, 64, 1.0
    h_d = rng.standard_normal((m, c)) + 1j * rng.standard_normal((m, c))
    h_t_base = rng.standard_normal((m, c)) + 1j * rng.standard_normal((m, c))
    means = []
    for scale in (0.0, 0.3, 0.6, 1.0):
        acc = 0.0
        for t in range(1000):
            trial = np.random.default_rng((int(scale * 10), t))
            block = gen_symbols_gaussian(trial, c, l)
            obs = synth_equivalent_from_matrices(
                scale * h_t_base, h_d, block, s2, "h1", trial)
            acc += glrt_statistic(obs, s2, c).statistic
        means.append(acc / 1000)
    assert all(b > a for a, b in zip(means, means[1:]))
