"""Target-presence tests on the stacked post-processing observation.

The passive test compares two covariance factor models for the 2M x L stack
Y (target rows above direct rows): under the null only the direct rows carry
a rank-C factor, under the alternative the full stack does. Maximizing the
Gaussian likelihood over the unknown factors in both models gives a
closed-form statistic built from the eigenvalues of the noise-normalized
sample covariances

    psi: eigenvalues of (Y Y^H / L) / sigma_r2     (full stack, 2M of them)
    phi: eigenvalues of (Y_d Y_d^H / L) / sigma_r2 (direct rows, M of them)

both in decreasing order. With eps0 = min(#{psi_i >= 1}, C, 2M) and
zeta0 = min(#{phi_i >= 1}, C, M),

    Lambda = L * [ sum_{i<=eps0} (psi_i - ln psi_i)
                 - sum_{i<=zeta0} (phi_i - ln phi_i)
                 + (zeta0 - eps0) ],

which is nonnegative because the null model is nested in the alternative.

The active benchmark knows the probing waveform S and projects the
observation onto its row space:

    Lambda_a = tr(Y S^H (S S^H)^{-1} S Y^H) / sigma_r2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InsufficientTrials,
    NumericalFailure,
    SingularGram,
)

GRAM_CONDITION_LIMIT = 1e12


@dataclass
class GlrtResult:
    statistic: float
    psi: np.ndarray
    phi: np.ndarray
    epsilon0: int
    zeta0: int


@dataclass
class Threshold:
    rho: float
    pfa_target: float
    n_trials: int
    method: str
    seed: int | None = None

    def as_dict(self) -> dict:
        return {
            "rho": float(self.rho),
            "pfa_target": float(self.pfa_target),
            "n_trials": int(self.n_trials),
            "method": self.method,
            "seed": None if self.seed is None else int(self.seed),
        }


def _observation_matrix(y) -> np.ndarray:
    mat = getattr(y, "y", y)
    if mat is None:
        raise DimensionMismatch("observation has no processed matrix; run frontend_process")
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2:
        raise DimensionMismatch("observation must be a 2-D matrix")
    if not np.all(np.isfinite(mat.view(float))):
        raise NumericalFailure("observation contains non-finite values")
    return mat


def glrt_statistic(y, sigma_r2: float, c: int) -> GlrtResult:
    """Closed-form likelihood-ratio statistic for C unknown streams.

    ``y`` is an Observation or a bare 2M x L array with target rows stacked
    above direct rows. Requires L >= 2M so the sample covariance has full
    rank almost surely.
    """
    mat = _observation_matrix(y)
    rows, l = mat.shape
    if rows % 2 != 0:
        raise DimensionMismatch("stacked observation must have an even row count (2M)")
    m = rows // 2
    if l < rows:
        raise DimensionMismatch(f"need L >= 2M (got L={l}, 2M={rows})")
    if sigma_r2 <= 0:
        raise NumericalFailure("sigma_r2 must be positive")
    if c < 1:
        raise DimensionMismatch("stream count c must be at least 1")

    try:
        x_full = mat @ mat.conj().T / (l * sigma_r2)
        x_dir = x_full[m:, m:]
        psi = np.linalg.eigvalsh(x_full)[::-1]
        phi = np.linalg.eigvalsh(x_dir)[::-1]
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigendecomposition failed: {exc}") from exc

    eps0 = int(min(np.count_nonzero(psi >= 1.0), c, 2 * m))
    zeta0 = int(min(np.count_nonzero(phi >= 1.0), c, m))
    top_psi = psi[:eps0]
    top_phi = phi[:zeta0]
    stat = l * (
        float(np.sum(top_psi - np.log(top_psi)))
        - float(np.sum(top_phi - np.log(top_phi)))
        + (zeta0 - eps0)
    )
    return GlrtResult(statistic=float(stat), psi=psi, phi=phi, epsilon0=eps0, zeta0=zeta0)


def active_statistic(y, s, sigma_r2: float) -> float:
    """Known-waveform energy statistic tr(Y P_S Y^H) / sigma_r2.

    ``s`` is a SymbolBlock or a bare C x L array of probing symbols; P_S is
    the orthogonal projector onto its row space. Requires L > C and a
    well-conditioned symbol Gram matrix.
    """
    mat = _observation_matrix(y)
    s_mat = np.asarray(getattr(s, "data", s), dtype=complex)
    if s_mat.ndim != 2:
        raise DimensionMismatch("symbol block must be a 2-D matrix")
    c, l = s_mat.shape
    if mat.shape[1] != l:
        raise DimensionMismatch("observation and symbols disagree on block length")
    if l <= c:
        raise DimensionMismatch(f"need L > C (got L={l}, C={c})")
    if sigma_r2 <= 0:
        raise NumericalFailure("sigma_r2 must be positive")

    gram = s_mat @ s_mat.conj().T
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond) or cond > GRAM_CONDITION_LIMIT:
        raise SingularGram(f"symbol Gram matrix condition {cond:.3g} exceeds {GRAM_CONDITION_LIMIT:.0e}")
    proj = mat @ s_mat.conj().T
    try:
        solved = np.linalg.solve(gram, proj.conj().T)
    except np.linalg.LinAlgError as exc:
        raise SingularGram(f"symbol Gram matrix is singular: {exc}") from exc
    return float(np.real(np.trace(proj @ solved))) / sigma_r2


def threshold_from_samples(stats: np.ndarray, pfa: float) -> float:
    """k-th largest statistic with k = ceil(n * pfa); exceedance rate <= pfa."""
    stats = np.asarray(stats, dtype=float)
    n = stats.size
    if not (0.0 < pfa < 1.0):
        raise InsufficientTrials("pfa must be in (0, 1)")
    if n * pfa < 10:
        raise InsufficientTrials(
            f"{n} trials cannot calibrate pfa={pfa:g}; need n * pfa >= 10")
    k = math.ceil(n * pfa)
    return float(np.partition(stats, n - k)[n - k])


def calibrate_threshold(statistic_sampler, pfa: float, n_trials: int, rng) -> Threshold:
    """Empirical threshold from ``n_trials`` independent null trials.

    ``statistic_sampler`` is a callable rng -> float producing one null-trial
    statistic. ``rng`` may be an integer master seed (recorded on the result)
    or a Generator. Each trial gets an independent child stream, so the
    result does not depend on how trials would be batched across workers.
    """
    if n_trials * pfa < 10:
        raise InsufficientTrials(
            f"{n_trials} trials cannot calibrate pfa={pfa:g}; need n * pfa >= 10")
    if isinstance(rng, (int, np.integer)):
        seed = int(rng)
        children = (np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n_trials))
    else:
        seed = None
        children = iter(rng.spawn(n_trials))
    stats = np.fromiter(
        (statistic_sampler(child) for child in children), dtype=float, count=n_trials)
    rho = threshold_from_samples(stats, pfa)
    return Threshold(rho=rho, pfa_target=pfa, n_trials=n_trials, method="empirical", seed=seed)


def decide(statistic: float, threshold) -> bool:
    """Declare a target present iff the statistic strictly exceeds the threshold."""
    rho = getattr(threshold, "rho", threshold)
    return bool(statistic > rho)
