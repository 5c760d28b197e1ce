"""Transmit designs: SINR evaluation, the kappa surrogate, and the optimizers."""

import numpy as np
import pytest

from passive_isac.beamform import (
    BeamformerResult,
    comm_only,
    eval_sinr,
    gaussian_randomization,
    kappa_from_covariance,
    optimize_active,
    optimize_max_pd,
    optimize_snrd_threshold,
    quadratic_surrogate,
    quadratic_transform_u,
    snr_d_from_covariance,
    sweep_gamma_d,
)
from passive_isac.errors import ConfigError, DimensionMismatch, Infeasible
from passive_isac.scenario import ScenarioConfig, build_channels
from passive_isac.sdp import SdpConstraint, SdpProblem, solve_sdp

GAMMA_C = 10.0 ** 1.2  # 12 dB


def _scene(m=2, c=2, n_t=8, seed=7, **kw):
    srs = ((141.4, 141.4), (141.4, -141.4), (-141.4, 141.4), (-141.4, -141.4))[:m]
    cus = ((50.0, 86.6), (50.0, -86.6))[:c]
    return ScenarioConfig(sr_positions=srs, cu_positions=cus,
                          target_position=(0.0, -100.0), n_t=n_t, seed=seed, **kw)


def _power_ok(res: BeamformerResult, p_t: float):
    return res.power <= p_t * (1.0 + 1e-9)


def test_sinr_single_user_closed_form():
    rng = np.random.default_rng(0)
    h = rng.standard_normal((1, 4)) + 1j * rng.standard_normal((1, 4))
    w = rng.standard_normal((4, 1)) + 1j * rng.standard_normal((4, 1))
    s2 = 0.3
    got = eval_sinr(w, h, s2)
    want = abs(h[0].conj() @ w[:, 0]) ** 2 / s2
    assert got[0] == pytest.approx(want, rel=1e-12)

    w_orth = w - h[0][:, None] * (h[0].conj() @ w) / (h[0].conj() @ h[0])
    assert eval_sinr(w_orth, h, s2)[0] == pytest.approx(0.0, abs=1e-20)


def test_sinr_two_users_hand_oracle():
    h = np.array([[1.0, 1.0j], [1.0, -1.0j]], dtype=complex)
    w = np.array([[1.0, 0.5], [0.5j, 1.0]], dtype=complex)
    s2 = 0.1
    # user 0: signal |1 + 0.5j * -1j|^2 .. write the gains out explicitly
    g = np.abs(h.conj() @ w) ** 2
    want = np.array([
        g[0, 0] / (s2 + g[0, 1]),
        g[1, 1] / (s2 + g[1, 0]),
    ])
    assert eval_sinr(w, h, s2) == pytest.approx(want, rel=1e-12)
    with pytest.raises(DimensionMismatch):
        eval_sinr(w, h[:, :1], s2)
    with pytest.raises(DimensionMismatch):
        eval_sinr(w[:, :1], h, s2)
    with pytest.raises(ConfigError):
        eval_sinr(w, h, 0.0)


def test_surrogate_inner_maximizer_identity():
    """The closed-form inner step makes the surrogate meet the true value:
    2 L mu0 * g(R, u*) equals the covariance noncentrality exactly."""
    rng = np.random.default_rng(1)
    l, mu0 = 200, 0.7
    for _ in range(50):
        m = int(rng.integers(1, 5))
        n_t = int(rng.integers(2, 7))
        b = rng.standard_normal((m, n_t)) + 1j * rng.standard_normal((m, n_t))
        a = rng.standard_normal(n_t) + 1j * rng.standard_normal(n_t)
        f = rng.standard_normal((n_t, n_t)) + 1j * rng.standard_normal((n_t, n_t))
        r_c = f @ f.conj().T / n_t
        u_star = quadratic_transform_u(r_c, b, a)
        want = kappa_from_covariance(r_c, b, a, mu0, l)
        got = 2.0 * l * mu0 * quadratic_surrogate(r_c, b, a, u_star)
        assert got == pytest.approx(want, rel=1e-9, abs=1e-12)
        # any other u can only do worse
        u_bad = u_star + 0.1 * (rng.standard_normal(m) + 1j * rng.standard_normal(m))
        assert quadratic_surrogate(r_c, b, a, u_bad) <= quadratic_surrogate(r_c, b, a, u_star) + 1e-12


def test_surrogate_scalar_receiver_case():
    rng = np.random.default_rng(2)
    b = rng.standard_normal((1, 3)) + 1j * rng.standard_normal((1, 3))
    a = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    f = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    r_c = f @ f.conj().T
    u = quadratic_transform_u(r_c, b, a)
    want = (b[0] @ (r_c @ a)) / (1.0 + np.real(b[0] @ (r_c @ b[0].conj())))
    assert u[0] == pytest.approx(want, rel=1e-12)
    assert quadratic_transform_u(np.zeros((3, 3)), b, a) == pytest.approx(0.0, abs=1e-30)


def test_kappa_from_zero_covariance():
    b = np.ones((2, 3), dtype=complex)
    a = np.ones(3, dtype=complex)
    assert kappa_from_covariance(np.zeros((3, 3)), b, a, 1.0, 100) == 0.0
    assert snr_d_from_covariance(np.zeros((3, 3)), b) == 0.0


def test_sensing_only_beam_uses_full_power_on_target():
    ch = build_channels(_scene())
    res = optimize_active(ch, None, 0.1, n_candidates=50)
    illum = float(np.real(ch.a_t.conj() @ (res.r_c @ ch.a_t)))
    assert illum == pytest.approx(0.1 * ch.a_t.size, rel=1e-6)
    assert _power_ok(res, 0.1)
    assert res.design == "active"


def test_illumination_beats_constrained_variants():
    ch = build_channels(_scene())
    base = optimize_active(ch, GAMMA_C, 0.1, n_candidates=50)
    floored = optimize_snrd_threshold(ch, GAMMA_C, base.snr_d * 1.5, 0.1, n_candidates=50)
    a = ch.a_t

    def illum(res):
        return float(np.real(a.conj() @ (res.r_c @ a)))

    assert illum(base) >= illum(floored) * (1.0 - 1e-6)
    assert floored.snr_d >= base.snr_d * 1.5 * (1.0 - 1e-6)
    assert np.all(base.sinrs >= GAMMA_C * (1.0 - 1e-4))
    assert np.all(floored.sinrs >= GAMMA_C * (1.0 - 1e-4))
    assert _power_ok(base, 0.1) and _power_ok(floored, 0.1)


def test_zero_floor_reduces_to_illumination_design():
    ch = build_channels(_scene())
    a = ch.a_t
    base = optimize_active(ch, GAMMA_C, 0.1, n_candidates=50)
    zero = optimize_snrd_threshold(ch, GAMMA_C, 0.0, 0.1, n_candidates=50)
    got = float(np.real(a.conj() @ (zero.r_c @ a)))
    want = float(np.real(a.conj() @ (base.r_c @ a)))
    assert got == pytest.approx(want, rel=1e-6)
    with pytest.raises(ConfigError):
        optimize_snrd_threshold(ch, GAMMA_C, -1.0, 0.1)


def test_unreachable_floor_is_infeasible():
    ch = build_channels(_scene())
    base = optimize_active(ch, None, 0.1, n_candidates=20)
    with pytest.raises(Infeasible):
        optimize_snrd_threshold(ch, GAMMA_C, base.snr_d * 1e6, 0.1, n_candidates=20)


def test_alternation_trace_is_monotone_and_dominates_comm_design():
    ch = build_channels(_scene())
    res = optimize_max_pd(ch, GAMMA_C, 0.1, n_candidates=50)
    trace = np.asarray(res.trace)
    assert trace.size >= 2
    dips = np.diff(trace)
    assert dips.min() >= -1e-8 * trace.max()
    assert np.all(res.sinrs >= GAMMA_C * (1.0 - 1e-4))
    assert _power_ok(res, 0.1)

    comm = comm_only(ch, GAMMA_C, 0.1, n_candidates=50)
    assert res.kappa_achieved >= comm.kappa_achieved


def test_design_ordering_by_sensing_freedom():
    # fewer constraints can only help the sensing figure
    ch = build_channels(_scene())
    free = optimize_max_pd(ch, None, 0.1, n_candidates=50)
    joint = optimize_max_pd(ch, GAMMA_C, 0.1, n_candidates=50)
    comm = comm_only(ch, GAMMA_C, 0.1, n_candidates=50)
    assert free.kappa_achieved >= joint.kappa_achieved * (1.0 - 1e-6)
    assert joint.kappa_achieved >= comm.kappa_achieved * (1.0 - 1e-6)


def test_min_power_single_user_closed_form():
    scen = _scene(c=1)
    ch = build_channels(scen)
    h = ch.comm_channels[0]
    gain = float(np.real(h.conj() @ h))
    gamma = 0.5 * scen.p_t * gain / scen.sigma_c2  # sits at half the budget
    res = comm_only(ch, gamma, scen.p_t, n_candidates=20)
    want = scen.sigma_c2 * gamma / gain
    assert res.power == pytest.approx(want, rel=1e-5)
    assert res.sinrs[0] >= gamma * (1.0 - 1e-4)

    with pytest.raises(Infeasible):
        comm_only(ch, 2.0 * scen.p_t * gain / scen.sigma_c2, scen.p_t)


def test_floor_sweep_grid_and_feasibility():
    ch = build_channels(_scene())
    pts = sweep_gamma_d(ch, None, 0.1, n_points=5, n_candidates=20)
    assert len(pts) == 5
    floors = [g for g, _ in pts]
    assert all(b > a for a, b in zip(floors, floors[1:]))
    base = optimize_active(ch, None, 0.1, n_candidates=20)
    assert floors[0] == pytest.approx(0.1 * base.snr_d, rel=1e-9)
    assert floors[-1] == pytest.approx(100.0 * base.snr_d, rel=1e-9)
    feasible = [(g, r) for g, r in pts if r is not None]
    assert feasible, "every floor in the sweep came back infeasible"
    for g, r in feasible:
        assert r.snr_d >= g * (1.0 - 1e-6)
        assert _power_ok(r, 0.1)


def test_randomization_keeps_rank_one_input():
    ch = build_channels(_scene(c=1))
    rng = np.random.default_rng(3)
    v = rng.standard_normal(ch.a_t.size) + 1j * rng.standard_normal(ch.a_t.size)
    v *= np.sqrt(0.1) / np.linalg.norm(v)
    w = gaussian_randomization([np.outer(v, v.conj())], ch, None, 0.1, 10, 0)
    got = abs(ch.a_t.conj() @ w[:, 0]) ** 2
    want = abs(ch.a_t.conj() @ v) ** 2
    assert got == pytest.approx(want, rel=1e-6)


def test_randomization_recovers_most_of_the_sdp_bound():
    losses = []
    for seed in range(20):
        scen = _scene(n_t=4, seed=100 + seed)
        ch = build_channels(scen)
        a = ch.a_t
        h_rows = ch.comm_channels / np.sqrt(scen.sigma_c2)
        cons = [SdpConstraint([np.eye(4)] * 2, "<=", scen.p_t)]
        for n in range(2):
            outer = np.outer(h_rows[n], h_rows[n].conj())
            mats = [outer.copy() for _ in range(2)]
            mats[n] = -outer / GAMMA_C
            cons.append(SdpConstraint(mats, "<=", -1.0))
        sol = solve_sdp(SdpProblem(objective=[np.outer(a, a.conj())] * 2, constraints=cons))
        if sol.status != "optimal":
            continue
        w = gaussian_randomization(sol.x_blocks, ch, GAMMA_C, scen.p_t, 60, seed)
        achieved = float(np.real(a.conj() @ (w @ (w.conj().T @ a))))
        losses.append(achieved / sol.objective_value)
        sinrs = eval_sinr(w, ch.comm_channels, scen.sigma_c2)
        assert np.all(sinrs >= GAMMA_C * (1.0 - 1e-4))
        assert float(np.sum(np.abs(w) ** 2)) <= scen.p_t * (1.0 + 1e-9)
    assert len(losses) >= 15
    assert np.mean(losses) >= 0.9
