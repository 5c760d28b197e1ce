"""Transmit covariance designs for joint communication and passive sensing.

All designs shape the per-user transmit covariances R_1..R_C (R_c is their
sum, W the N_t x C beamforming matrix with R_c = W W^H) under a total power
budget and per-user SINR floors

    sinr_n = |h_n^H w_n|^2 / (sigma_c2 + sum_{k != n} |h_n^H w_k|^2) >= gamma_c.

The sensing figure of merit is the detection noncentrality, which depends on
the design only through R_c:

    kappa(R_c) = 2 L mu0 * a^H R_c B^H (I + B R_c B^H)^{-1} B R_c a,

with a the transmit response toward the target, B the noise-normalized
direct-path map, and mu0 the aggregate target-return gain. kappa is not
concave in R_c, but fixing the auxiliary vector u in

    g(R_c, u) = 2 Re{u^H B R_c a} - u^H (I + B R_c B^H) u

makes the objective linear in the blocks, and maximizing over u in closed
form (u* = (I + B R_c B^H)^{-1} B R_c a) recovers kappa = 2 L mu0 g(R_c, u*).
Alternating those two steps yields a monotone iteration; randomized rounding
then extracts a rank-one-per-user W from the block solution, repairing
feasibility with a small linear program over per-user power scalars.

Designs provided: kappa maximization ("max_pd"), target illumination with a
direct-path SNR floor ("snrd_threshold"), pure illumination ("active", the
known-waveform benchmark's transmitter), and minimum-power communication
("comm_only"). Passing gamma_c=None drops the SINR constraints and gives the
sensing-only variants.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import (
    ConfigError,
    DimensionMismatch,
    Infeasible,
    MaxIterations,
    RandomizationFailure,
)
from .scenario import ChannelSet
from .sdp import SdpConstraint, SdpProblem, solve_sdp

RANK_ONE_RATIO = 1e-6
POWER_SLACK = 1e-9


@dataclass
class BeamformerResult:
    """One transmit design: beamformers, covariance, and achieved figures."""

    w: np.ndarray
    r_c: np.ndarray
    kappa_achieved: float
    sinrs: np.ndarray
    power: float
    design: str
    trace: list | None = None
    gamma_d_used: float | None = None
    snr_d: float | None = None


def eval_sinr(w: np.ndarray, comm_channels: np.ndarray, sigma_c2: float) -> np.ndarray:
    """Per-user downlink SINR of beamforming matrix w under channels h_n."""
    w = np.asarray(w, dtype=complex)
    h = np.asarray(comm_channels, dtype=complex)
    if h.shape[1] != w.shape[0]:
        raise DimensionMismatch("channel and beamformer dimensions differ")
    if h.shape[0] != w.shape[1]:
        raise DimensionMismatch("need one beamformer column per user")
    if sigma_c2 <= 0:
        raise ConfigError("sigma_c2 must be positive")
    gains = np.abs(h.conj() @ w) ** 2  # gains[n, k] = |h_n^H w_k|^2
    sig = np.diag(gains)
    interf = gains.sum(axis=1) - sig
    return sig / (sigma_c2 + interf)


def kappa_from_covariance(r_c: np.ndarray, b_matrix: np.ndarray, a_t: np.ndarray,
                          mu0: float, l: int) -> float:
    """Noncentrality reachable with transmit covariance r_c."""
    v = b_matrix @ (r_c @ a_t)
    gram = np.eye(b_matrix.shape[0]) + b_matrix @ r_c @ b_matrix.conj().T
    val = float(np.real(v.conj() @ np.linalg.solve(gram, v)))
    return 2.0 * l * mu0 * val


def quadratic_transform_u(r_c: np.ndarray, b_matrix: np.ndarray, a_t: np.ndarray) -> np.ndarray:
    """Closed-form inner maximizer u* = (I + B R B^H)^{-1} B R a."""
    gram = np.eye(b_matrix.shape[0]) + b_matrix @ r_c @ b_matrix.conj().T
    return np.linalg.solve(gram, b_matrix @ (r_c @ a_t))


def quadratic_surrogate(r_c: np.ndarray, b_matrix: np.ndarray, a_t: np.ndarray,
                        u: np.ndarray) -> float:
    """g(R, u) = 2 Re{u^H B R a} - u^H (I + B R B^H) u."""
    lin = 2.0 * np.real(u.conj() @ (b_matrix @ (r_c @ a_t)))
    gram = np.eye(b_matrix.shape[0]) + b_matrix @ r_c @ b_matrix.conj().T
    quad = np.real(u.conj() @ gram @ u)
    return float(lin - quad)


def snr_d_from_covariance(r_c: np.ndarray, b_matrix: np.ndarray) -> float:
    """Per-receiver direct-path SNR tr(B R B^H) / M produced by covariance r_c."""
    return float(np.real(np.einsum("ij,jk,ik->", b_matrix, r_c, b_matrix.conj()))) / b_matrix.shape[0]


def _resolve(channels: ChannelSet, sigma_c2, l):
    if sigma_c2 is None:
        if channels.config is None:
            raise ConfigError("sigma_c2 not given and channels carry no config")
        sigma_c2 = channels.config.sigma_c2
    if l is None:
        if channels.config is None:
            raise ConfigError("block length not given and channels carry no config")
        l = channels.config.block_length
    return float(sigma_c2), int(l)


def _scaled_comm_rows(channels: ChannelSet, sigma_c2: float) -> np.ndarray:
    return np.asarray(channels.comm_channels, dtype=complex) / np.sqrt(sigma_c2)


def _sinr_constraints(h_rows: np.ndarray, gamma_c: float, n_blocks: int) -> list:
    """(30a)-style rows: interference minus signal/gamma at most -1 (noise normalized)."""
    if gamma_c <= 0:
        raise ConfigError("gamma_c must be positive (linear scale)")
    cons = []
    c = h_rows.shape[0]
    if n_blocks != c:
        raise DimensionMismatch("need one covariance block per user")
    for n in range(c):
        outer = np.outer(h_rows[n], h_rows[n].conj())
        mats = [outer.copy() for _ in range(c)]
        mats[n] = -outer / gamma_c
        cons.append(SdpConstraint(matrices=mats, sense="<=", rhs=-1.0))
    return cons


def _power_constraint(n_blocks: int, n_t: int, p_t: float) -> SdpConstraint:
    return SdpConstraint(matrices=[np.eye(n_t)] * n_blocks, sense="<=", rhs=float(p_t))


def _snrd_constraint(b_matrix: np.ndarray, gamma_d: float, n_blocks: int) -> SdpConstraint:
    if gamma_d <= 0:
        raise ConfigError("gamma_d must be positive (linear scale)")
    m = b_matrix.shape[0]
    g = b_matrix.conj().T @ b_matrix / (m * gamma_d)
    return SdpConstraint(matrices=[g] * n_blocks, sense=">=", rhs=1.0)


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def _block_factors(x_blocks: list) -> list:
    """Square roots F with F F^H = X for candidate sampling."""
    factors = []
    for x in x_blocks:
        vals, vecs = np.linalg.eigh(x)
        vals = np.clip(vals, 0.0, None)
        factors.append(vecs * np.sqrt(vals))
    return factors


def _principal_columns(x_blocks: list) -> np.ndarray:
    cols = []
    for x in x_blocks:
        vals, vecs = np.linalg.eigh(x)
        top = max(vals[-1], 0.0)
        cols.append(np.sqrt(top) * vecs[:, -1])
    return np.column_stack(cols)


def _all_rank_one(x_blocks: list) -> bool:
    total = sum(float(np.real(np.trace(x))) for x in x_blocks)
    for x in x_blocks:
        vals = np.linalg.eigvalsh(x)
        if vals[-1] <= 1e-14 * max(total, 1.0):
            continue  # numerically zero block
        if len(vals) > 1 and vals[-2] > RANK_ONE_RATIO * vals[-1]:
            return False
    return True


def _trim_power(w: np.ndarray, p_t: float) -> np.ndarray:
    power = float(np.sum(np.abs(w) ** 2))
    if power > p_t:
        w = w * np.sqrt(p_t * (1.0 - 1e-12) / power)
    return w


def _repair_lp(cand: np.ndarray, h_rows, gamma_c, p_t, snrd_mat, lp_coeff):
    """Per-user power reallocation: maximize lp_coeff^T p over feasible p >= 0.

    SINR and SNR floors are linear in the per-user powers p once the
    candidate directions are fixed, so feasibility repair is one small LP.
    Returns the scaled beamformer or None when this candidate cannot be
    repaired.
    """
    c = cand.shape[1]
    a_ub, b_ub = [], []
    if h_rows is not None:
        gains = np.abs(h_rows.conj() @ cand) ** 2
        for n in range(c):
            row = gains[n].copy()
            row[n] = -gains[n, n] / gamma_c
            a_ub.append(row)
            b_ub.append(-1.0)
    col_power = np.sum(np.abs(cand) ** 2, axis=0)
    a_ub.append(col_power)
    b_ub.append(p_t)
    if snrd_mat is not None:
        gain_d = np.real(np.einsum("ik,ij,jk->k", cand.conj(), snrd_mat, cand))
        a_ub.append(-gain_d)
        b_ub.append(-1.0)
    res = linprog(-np.asarray(lp_coeff, dtype=float), A_ub=np.asarray(a_ub),
                  b_ub=np.asarray(b_ub), bounds=[(0.0, None)] * c, method="highs")
    if not res.success:
        return None
    return cand * np.sqrt(np.clip(res.x, 0.0, None))


def gaussian_randomization(
    x_blocks: list,
    channels: ChannelSet,
    gamma_c: float | None,
    p_t: float,
    n_candidates: int = 1000,
    rng=0,
    *,
    sigma_c2: float | None = None,
    gamma_d: float | None = None,
    objective=None,
    lp_mode: str = "illum",
    u_vec: np.ndarray | None = None,
) -> np.ndarray:
    """Extract a rank-one-per-user beamformer from SDP covariance blocks.

    When every block is already rank-one (eigenvalue ratio below 1e-6) the
    principal eigenvectors are returned directly. Otherwise candidates are
    drawn per block from CN(0, X_k), repaired to feasibility by the per-user
    power LP, scored with ``objective`` (a callable on W), and the best
    survivor wins. The principal-eigenvector candidate always participates.
    """
    rng = _as_rng(rng)
    h_rows = None
    if gamma_c is not None:
        sigma_c2, _ = _resolve(channels, sigma_c2, 0)
        h_rows = _scaled_comm_rows(channels, sigma_c2)
    snrd_mat = None
    if gamma_d is not None:
        m = channels.b_matrix.shape[0]
        snrd_mat = channels.b_matrix.conj().T @ channels.b_matrix / (m * gamma_d)
    a_t = channels.a_t
    if objective is None:
        objective = lambda w: float(np.real(a_t.conj() @ (w @ (w.conj().T @ a_t))))  # noqa: E731

    def _lp_coeff(cand: np.ndarray) -> np.ndarray:
        if lp_mode == "illum":
            return np.abs(a_t.conj() @ cand) ** 2
        if lp_mode == "minpower":
            return -np.sum(np.abs(cand) ** 2, axis=0)
        if lp_mode == "surrogate":
            bu = channels.b_matrix.conj().T @ u_vec
            lin = 2.0 * np.real((bu.conj() @ cand) * (cand.conj().T @ a_t))
            quad = np.abs(bu.conj() @ cand) ** 2
            return lin - quad
        raise ConfigError(f"unknown lp_mode {lp_mode!r}")

    principal = _principal_columns(x_blocks)
    if _all_rank_one(x_blocks) and gamma_d is None:
        return _trim_power(principal, p_t)

    factors = _block_factors(x_blocks)
    best_w, best_val = None, -np.inf
    candidates = [principal]
    for _ in range(n_candidates):
        cand = np.column_stack([
            f @ ((rng.standard_normal(f.shape[1]) + 1j * rng.standard_normal(f.shape[1]))
                 / np.sqrt(2.0)) for f in factors])
        candidates.append(cand)
    for cand in candidates:
        norms = np.linalg.norm(cand, axis=0)
        if np.any(norms < 1e-30):
            # a zero column can never serve its user; only allowed without SINR floors
            if h_rows is not None:
                continue
        repaired = _repair_lp(cand, h_rows, gamma_c, p_t, snrd_mat, _lp_coeff(cand))
        if repaired is None:
            continue
        repaired = _trim_power(repaired, p_t)
        val = objective(repaired)
        if val > best_val:
            best_val, best_w = val, repaired
    if best_w is None:
        raise RandomizationFailure(
            f"no candidate out of {len(candidates)} could satisfy the constraints")
    return best_w


def _finalize(channels, w, design, sigma_c2, l, trace=None, gamma_d_used=None) -> BeamformerResult:
    r_c = w @ w.conj().T
    return BeamformerResult(
        w=w,
        r_c=r_c,
        kappa_achieved=kappa_from_covariance(r_c, channels.b_matrix, channels.a_t,
                                             channels.mu0, l),
        sinrs=eval_sinr(w, channels.comm_channels, sigma_c2),
        power=float(np.real(np.trace(r_c))),
        design=design,
        trace=trace,
        gamma_d_used=gamma_d_used,
        snr_d=snr_d_from_covariance(r_c, channels.b_matrix),
    )


def _solve_min_power(channels, gamma_c, sigma_c2):
    n_t, c = channels.a_t.size, channels.c
    h_rows = _scaled_comm_rows(channels, sigma_c2)
    prob = SdpProblem(
        objective=[-np.eye(n_t)] * c,
        constraints=_sinr_constraints(h_rows, gamma_c, c),
    )
    sol = solve_sdp(prob)
    if sol.status == "infeasible":
        raise Infeasible("SINR floors cannot be met at any power")
    if sol.status != "optimal":
        raise MaxIterations("minimum-power design did not converge")
    return sol.x_blocks, -sol.objective_value


def comm_only(channels: ChannelSet, gamma_c: float, p_t: float, *,
              sigma_c2: float | None = None, l: int | None = None,
              n_candidates: int = 1000, rng=0) -> BeamformerResult:
    """Minimum-power beamformer meeting the SINR floors; no sensing objective.

    Raises Infeasible when the floors cannot be met within the power budget.
    """
    sigma_c2, l = _resolve(channels, sigma_c2, l)
    blocks, min_power = _solve_min_power(channels, gamma_c, sigma_c2)
    if min_power > p_t * (1.0 + POWER_SLACK):
        raise Infeasible(
            f"SINR floors need {min_power:.4g} W, exceeding the budget {p_t:.4g} W")
    w = gaussian_randomization(
        blocks, channels, gamma_c, p_t, n_candidates, rng,
        sigma_c2=sigma_c2, lp_mode="minpower",
        objective=lambda wm: -float(np.sum(np.abs(wm) ** 2)))
    return _finalize(channels, w, "comm_only", sigma_c2, l)


def optimize_active(channels: ChannelSet, gamma_c: float | None, p_t: float, *,
                    sigma_c2: float | None = None, l: int | None = None,
                    n_candidates: int = 1000, rng=0) -> BeamformerResult:
    """Maximize transmit energy on the target direction, a^H R_c a.

    This is the transmitter used by the known-waveform benchmark; with
    gamma_c=None it reduces to full-power beaming at the target.
    """
    sigma_c2, l = _resolve(channels, sigma_c2, l)
    a = channels.a_t
    n_t, c = a.size, channels.c
    cons = [_power_constraint(c, n_t, p_t)]
    if gamma_c is not None:
        cons = _sinr_constraints(_scaled_comm_rows(channels, sigma_c2), gamma_c, c) + cons
    prob = SdpProblem(objective=[np.outer(a, a.conj())] * c, constraints=cons)
    sol = solve_sdp(prob)
    if sol.status == "infeasible":
        raise Infeasible("SINR floors cannot be met within the power budget")
    if sol.status != "optimal":
        raise MaxIterations("illumination design did not converge")
    w = gaussian_randomization(
        sol.x_blocks, channels, gamma_c, p_t, n_candidates, rng,
        sigma_c2=sigma_c2, lp_mode="illum",
        objective=lambda wm: float(np.real(a.conj() @ (wm @ (wm.conj().T @ a)))))
    return _finalize(channels, w, "active", sigma_c2, l)


def optimize_snrd_threshold(channels: ChannelSet, gamma_c: float | None, gamma_d: float,
                            p_t: float, *, sigma_c2: float | None = None,
                            l: int | None = None, n_candidates: int = 1000,
                            rng=0) -> BeamformerResult:
    """Maximize target illumination subject to a direct-path SNR floor gamma_d.

    gamma_d = 0 drops the floor entirely, leaving the illumination design.
    """
    sigma_c2, l = _resolve(channels, sigma_c2, l)
    if gamma_d < 0:
        raise ConfigError("gamma_d must be nonnegative (linear scale)")
    a = channels.a_t
    n_t, c = a.size, channels.c
    cons = [_power_constraint(c, n_t, p_t)]
    if gamma_d > 0:
        cons.append(_snrd_constraint(channels.b_matrix, gamma_d, c))
    if gamma_c is not None:
        cons = _sinr_constraints(_scaled_comm_rows(channels, sigma_c2), gamma_c, c) + cons
    prob = SdpProblem(objective=[np.outer(a, a.conj())] * c, constraints=cons)
    sol = solve_sdp(prob)
    if sol.status == "infeasible":
        raise Infeasible(
            f"direct-path SNR floor {gamma_d:.4g} unreachable within the power budget")
    if sol.status != "optimal":
        raise MaxIterations("SNR-floor design did not converge")
    w = gaussian_randomization(
        sol.x_blocks, channels, gamma_c, p_t, n_candidates, rng,
        sigma_c2=sigma_c2, gamma_d=gamma_d if gamma_d > 0 else None, lp_mode="illum",
        objective=lambda wm: float(np.real(a.conj() @ (wm @ (wm.conj().T @ a)))))
    return _finalize(channels, w, "snrd_threshold", sigma_c2, l, gamma_d_used=gamma_d)


def optimize_max_pd(channels: ChannelSet, gamma_c: float | None, p_t: float,
                    eps: float = 1e-4, k_max: int = 50, *,
                    sigma_c2: float | None = None, l: int | None = None,
                    n_candidates: int = 1000, rng=0) -> BeamformerResult:
    """Alternating maximization of the detection noncentrality kappa.

    Starts from the constrained target-illumination covariance (or a
    full-power target beam when gamma_c is None), then alternates the
    closed-form u update with the block SDP until the kappa trace gains
    less than ``eps`` relative or ``k_max`` iterations pass. The trace of
    kappa values (one entry per SDP solve, plus the starting point) is
    monotone nondecreasing up to solver tolerance. The illumination start
    matters: it is already near-stationary for the alternation, where a
    bare communication solution can take the slow ridge path.
    """
    sigma_c2, l = _resolve(channels, sigma_c2, l)
    a = channels.a_t
    b = channels.b_matrix
    n_t, c = a.size, channels.c

    cons = [_power_constraint(c, n_t, p_t)]
    if gamma_c is not None:
        cons = _sinr_constraints(_scaled_comm_rows(channels, sigma_c2), gamma_c, c) + cons

    if gamma_c is not None:
        beam_obj = np.outer(a, a.conj())
        sol0 = solve_sdp(SdpProblem(objective=[beam_obj] * c, constraints=cons))
        if sol0.status == "infeasible":
            raise Infeasible(
                f"SINR floors cannot be met within the budget {p_t:.4g} W")
        if sol0.status != "optimal":
            raise MaxIterations("illumination initialization did not converge")
        blocks = sol0.x_blocks
    else:
        beam = np.outer(a, a.conj()) * (p_t / float(np.real(a.conj() @ a)))
        blocks = [beam] + [np.zeros((n_t, n_t), dtype=complex) for _ in range(c - 1)]

    r_c = sum(blocks)
    kappa = kappa_from_covariance(r_c, b, a, channels.mu0, l)
    trace = [kappa]
    for _ in range(k_max):
        u = quadratic_transform_u(r_c, b, a)
        t = b.conj().T @ u
        lin = np.outer(a, t.conj())
        obj = lin + lin.conj().T - np.outer(t, t.conj())
        sol = solve_sdp(SdpProblem(objective=[obj] * c, constraints=cons))
        if sol.status != "optimal":
            raise MaxIterations("surrogate SDP step did not converge")
        blocks = sol.x_blocks
        r_c = sum(blocks)
        kappa_new = kappa_from_covariance(r_c, b, a, channels.mu0, l)
        trace.append(kappa_new)
        if kappa_new - kappa < eps * max(kappa, 1e-30):
            kappa = kappa_new
            break
        kappa = kappa_new

    u_final = quadratic_transform_u(r_c, b, a)
    w = gaussian_randomization(
        blocks, channels, gamma_c, p_t, n_candidates, rng,
        sigma_c2=sigma_c2, lp_mode="surrogate", u_vec=u_final,
        objective=lambda wm: kappa_from_covariance(
            wm @ wm.conj().T, b, a, channels.mu0, l))
    return _finalize(channels, w, "max_pd", sigma_c2, l, trace=trace)


def sweep_gamma_d(channels: ChannelSet, gamma_c: float | None, p_t: float,
                  n_points: int = 20, *, sigma_c2: float | None = None,
                  l: int | None = None, n_candidates: int = 1000, rng=0) -> list:
    """Grid of SNR-floor designs between 0.1x and 100x the unconstrained floor.

    Returns [(gamma_d, BeamformerResult | None), ...] with None marking
    floors that are infeasible within the power budget. The unconstrained
    reference point is the direct-path SNR achieved by the illumination
    design.
    """
    sigma_c2, l = _resolve(channels, sigma_c2, l)
    base = optimize_active(channels, gamma_c, p_t, sigma_c2=sigma_c2, l=l,
                           n_candidates=n_candidates, rng=rng)
    if base.snr_d <= 0:
        raise ConfigError("reference design produces no direct-path SNR")
    out = []
    for gamma_d in np.geomspace(0.1 * base.snr_d, 100.0 * base.snr_d, n_points):
        try:
            res = optimize_snrd_threshold(
                channels, gamma_c, float(gamma_d), p_t, sigma_c2=sigma_c2, l=l,
                n_candidates=n_candidates, rng=rng)
        except Infeasible:
            res = None
        out.append((float(gamma_d), res))
    return out
