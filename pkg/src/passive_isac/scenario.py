"""Scene geometry and channel synthesis for a multi-static sensing setup.

One base station (BS) with an N_t-element transmit ULA serves C single-antenna
communication users while M passive receivers listen. Each receiver carries two
ULAs: a surveillance array (N_1 elements) pointed at the scene and a reference
array (N_2 elements) pointed at the BS. All nodes live in a 2-D plane.

Conventions
-----------
* ULAs are oriented along the y-axis; the bearing of a point seen from a node
  is theta = asin(dy / distance), so broadside (theta = 0) looks along +x.
  Points behind the array alias onto the front half-plane, which is the usual
  ULA front-back ambiguity and is harmless here because every scene in this
  package keeps its nodes in the forward half-plane.
* Element k of a ULA contributes a phase 2*pi/wavelength * spacing * k *
  sin(theta).
* Target returns carry a two-hop inverse-square loss, direct BS-to-receiver
  paths a one-hop loss. Complex reflectivity (RCS amplitude) is drawn by the
  caller so that detection trials can re-draw it per trial.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict, replace
import numpy as np

from .errors import ConfigError, DegenerateGeometry, DimensionMismatch

SPEED_OF_LIGHT = 299792458.0
DEFAULT_CARRIER_HZ = 3.5e9


def _as_point(p) -> np.ndarray:
    q = np.asarray(p, dtype=float).reshape(-1)
    if q.size != 2:
        raise ConfigError(f"positions are 2-D points, got shape {np.shape(p)}")
    return q


def bearing(from_pos, to_pos) -> float:
    """Angle (radians) of ``to_pos`` seen from a y-axis ULA at ``from_pos``."""
    d = _as_point(to_pos) - _as_point(from_pos)
    dist = float(np.hypot(d[0], d[1]))
    if dist <= 0.0:
        raise DegenerateGeometry("bearing undefined for coincident points")
    return float(np.arcsin(np.clip(d[1] / dist, -1.0, 1.0)))


def steering_vector(angle: float, n: int, spacing: float, wavelength: float) -> np.ndarray:
    """ULA response exp(j*2*pi/wavelength * spacing * k * sin(angle)), k = 0..n-1."""
    if n < 1:
        raise ConfigError("steering vector needs at least one element")
    if spacing <= 0 or wavelength <= 0:
        raise ConfigError("spacing and wavelength must be positive")
    k = np.arange(n)
    return np.exp(1j * 2.0 * np.pi / wavelength * spacing * k * np.sin(angle))


def path_loss(kind: str, positions, wavelength: float) -> float:
    """Free-space power gain of a propagation path.

    kind "target": positions = (bs, target, receiver), two-hop loss
        wavelength^2 / ((4 pi)^3 * d_bs_tar^2 * d_tar_rx^2).
    kind "direct": positions = (bs, receiver), one-hop loss
        wavelength^2 / ((4 pi)^2 * d^2).
    """
    if wavelength <= 0:
        raise ConfigError("wavelength must be positive")
    pts = [_as_point(p) for p in positions]
    if kind == "target":
        if len(pts) != 3:
            raise ConfigError("target path needs (bs, target, receiver) positions")
        d1 = np.linalg.norm(pts[1] - pts[0])
        d2 = np.linalg.norm(pts[2] - pts[1])
        if d1 <= 0 or d2 <= 0:
            raise DegenerateGeometry("coincident nodes on target path")
        return float(wavelength**2 / ((4.0 * np.pi) ** 3 * d1**2 * d2**2))
    if kind == "direct":
        if len(pts) != 2:
            raise ConfigError("direct path needs (bs, receiver) positions")
        d = np.linalg.norm(pts[1] - pts[0])
        if d <= 0:
            raise DegenerateGeometry("coincident BS and receiver")
        return float(wavelength**2 / ((4.0 * np.pi) ** 2 * d**2))
    raise ConfigError(f"unknown path kind {kind!r}")


def receive_beamformers(
    b_t1: np.ndarray,
    b_d1: np.ndarray,
    b_t2: np.ndarray,
    b_d2: np.ndarray,
    tol: float = 1e-10,
) -> tuple[np.ndarray, np.ndarray]:
    """Unit-norm combiners that null the unwanted path on each array.

    The surveillance combiner q_t keeps the target response b_t1 while nulling
    the direct response b_d1; the reference combiner q_d keeps b_d2 while
    nulling b_t2. Both are plain Gram-Schmidt residuals, normalized.

    Raises DegenerateGeometry when the paired responses are parallel within
    ``tol`` (relative residual norm), in which case no null-preserving
    combiner exists.
    """

    def _project_out(keep: np.ndarray, null: np.ndarray) -> np.ndarray:
        keep = np.asarray(keep, dtype=complex).reshape(-1)
        null = np.asarray(null, dtype=complex).reshape(-1)
        if keep.shape != null.shape:
            raise DimensionMismatch("paired steering vectors differ in length")
        resid = keep - (null.conj() @ keep) / (null.conj() @ null) * null
        rnorm = np.linalg.norm(resid)
        if rnorm <= tol * np.linalg.norm(keep):
            raise DegenerateGeometry("steering vectors are parallel; cannot null the unwanted path")
        return resid / rnorm

    q_t = _project_out(b_t1, b_d1)
    q_d = _project_out(b_d2, b_t2)
    return q_t, q_d


def synth_comm_channels(rng: np.random.Generator, c: int, n_t: int, variance=1.0) -> np.ndarray:
    """C i.i.d. Rayleigh downlink channels, rows h_n with per-entry variance.

    ``variance`` may be a scalar or a length-C sequence (per-user variance).
    """
    if c < 0 or n_t < 1:
        raise ConfigError("need c >= 0 and n_t >= 1")
    if c == 0:
        return np.zeros((0, n_t), dtype=complex)
    v = np.broadcast_to(np.asarray(variance, dtype=float), (c,))
    if np.any(v <= 0):
        raise ConfigError("channel variance must be positive")
    h = rng.standard_normal((c, n_t)) + 1j * rng.standard_normal((c, n_t))
    return h * np.sqrt(v / 2.0)[:, None]


@dataclass
class ScenarioConfig:
    """Static description of one scene.

    Distances in meters, powers in watts, angles derived from positions.
    ``sigma_r2`` is the per-element noise power at the passive receivers,
    ``sigma_c2`` at the communication users. ``rcs_variance`` is the mean
    square of the complex target reflectivity. ``cu_channel_variance``
    defaults to the one-hop free-space loss at each user's distance so the
    default noise floor and SINR targets are simultaneously reachable.
    """

    bs_position: tuple = (0.0, 0.0)
    sr_positions: tuple = ((141.4, 141.4), (141.4, -141.4), (-141.4, 141.4), (-141.4, -141.4))
    target_position: tuple = (0.0, -100.0)
    cu_positions: tuple = ((50.0, 86.6), (50.0, -86.6))
    n_t: int = 16
    n_1: int = 14
    n_2: int = 2
    n_r: int = 14
    carrier_wavelength: float = SPEED_OF_LIGHT / DEFAULT_CARRIER_HZ
    antenna_spacing: float | None = None
    p_t: float = 0.1
    sigma_r2: float = 10 ** (-114 / 10)
    sigma_c2: float = 10 ** (-114 / 10)
    rcs_variance: float = 1.0
    block_length: int = 500
    sample_rate: float = 30.72e6
    target_velocity: tuple = (0.0, 0.0)
    cu_channel_variance: float | tuple | None = None
    seed: int = 0

    def __post_init__(self):
        if self.antenna_spacing is None:
            self.antenna_spacing = self.carrier_wavelength / 2.0
        if min(self.n_t, self.n_1, self.n_2, self.n_r) < 1:
            raise ConfigError("antenna counts must be at least 1")
        if self.m < 1:
            raise ConfigError("need at least one passive receiver")
        if self.c < 1:
            raise ConfigError("need at least one communication user")
        if self.n_t < self.c:
            raise ConfigError("transmit array must have at least as many elements as users")
        if self.block_length < 1:
            raise ConfigError("block_length must be at least 1")
        for name in ("p_t", "sigma_r2", "sigma_c2", "rcs_variance", "sample_rate",
                     "carrier_wavelength", "antenna_spacing"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        bs = _as_point(self.bs_position)
        for label, pts in (("receiver", self.sr_positions),
                           ("user", self.cu_positions),
                           ("target", [self.target_position])):
            for p in pts:
                if np.linalg.norm(_as_point(p) - bs) <= 0:
                    raise ConfigError(f"{label} position coincides with the BS")
        if not (0 <= int(self.seed) < 2**64):
            raise ConfigError("seed must fit in an unsigned 64-bit integer")

    @property
    def m(self) -> int:
        return len(self.sr_positions)

    @property
    def c(self) -> int:
        return len(self.cu_positions)

    def cu_variances(self) -> np.ndarray:
        """Per-user channel variance; free-space loss at the user distance by default."""
        if self.cu_channel_variance is not None:
            return np.broadcast_to(np.asarray(self.cu_channel_variance, dtype=float), (self.c,)).copy()
        return np.array([
            path_loss("direct", (self.bs_position, p), self.carrier_wavelength)
            for p in self.cu_positions
        ])

    def as_dict(self) -> dict:
        d = asdict(self)
        d["sr_positions"] = [list(map(float, p)) for p in self.sr_positions]
        d["cu_positions"] = [list(map(float, p)) for p in self.cu_positions]
        d["bs_position"] = list(map(float, self.bs_position))
        d["target_position"] = list(map(float, self.target_position))
        d["target_velocity"] = list(map(float, self.target_velocity))
        return d


@dataclass
class ChannelSet:
    """Everything the signal chain needs about one scene realization.

    ``h_t_tilde`` and ``h_d_tilde`` are the M x C post-combining channels of
    the target and direct paths for a given transmit beamformer; ``b_matrix``
    is the noise-normalized direct-path spatial map (M x N_t) used by the
    transmit designs; ``mu0`` aggregates target-path gain over receivers.
    """

    h_t_tilde: np.ndarray
    h_d_tilde: np.ndarray
    b_matrix: np.ndarray
    mu0: float
    mu_t: np.ndarray
    mu_d: np.ndarray
    comm_channels: np.ndarray
    angles: dict
    delays: dict
    dopplers: np.ndarray
    a_t: np.ndarray
    a_d: np.ndarray
    b_t1: np.ndarray
    b_d1: np.ndarray
    b_t2: np.ndarray
    b_d2: np.ndarray
    q_t: np.ndarray
    q_d: np.ndarray
    alpha_t: np.ndarray
    alpha_d: np.ndarray
    sigma_r2: float
    sample_rate: float
    config: ScenarioConfig | None = field(default=None, repr=False)

    @property
    def m(self) -> int:
        return self.h_d_tilde.shape[0]

    @property
    def c(self) -> int:
        return self.h_d_tilde.shape[1]

    def __post_init__(self):
        m, c = self.h_d_tilde.shape
        if self.h_t_tilde.shape != (m, c):
            raise DimensionMismatch("h_t_tilde and h_d_tilde shapes differ")
        if self.b_matrix.shape[0] != m:
            raise DimensionMismatch("b_matrix must have one row per receiver")
        if self.comm_channels.shape[0] != c:
            raise DimensionMismatch("comm_channels must have one row per user")
        if self.mu_t.shape != (m,) or self.mu_d.shape != (m,):
            raise DimensionMismatch("mu_t and mu_d must be length-M vectors")


def build_channels(config: ScenarioConfig, rcs_draw: complex = 1.0,
                   beamformer: np.ndarray | None = None) -> ChannelSet:
    """Assemble a ChannelSet for one scene and one transmit beamformer.

    ``rcs_draw`` is the complex reflectivity of the target for this
    realization (the caller draws it, typically CN(0, rcs_variance)).
    ``beamformer`` is the N_t x C transmit matrix W; when omitted, power
    is split evenly over C orthogonal columns, a neutral placeholder the
    design routines replace via ``with_beamformer``. Communication channels
    are drawn once from ``config.seed`` so a config pins the whole scene.
    """
    if beamformer is None:
        w = np.zeros((config.n_t, config.c), dtype=complex)
        w[: config.c, :] = np.eye(config.c) * np.sqrt(config.p_t / config.c)
    else:
        w = np.asarray(beamformer, dtype=complex)
    if w.shape != (config.n_t, config.c):
        raise DimensionMismatch(
            f"beamformer shape {w.shape} does not match (n_t, c) = {(config.n_t, config.c)}")

    lam = config.carrier_wavelength
    spacing = config.antenna_spacing
    bs = _as_point(config.bs_position)
    tar = _as_point(config.target_position)
    vel = _as_point(config.target_velocity)
    m = config.m

    theta_t = bearing(bs, tar)
    a_t = steering_vector(theta_t, config.n_t, spacing, lam)

    theta_d = np.empty(m)
    phi_t = np.empty(m)
    phi_d = np.empty(m)
    tau_t = np.empty(m)
    tau_d = np.empty(m)
    dopp = np.empty(m)
    alpha_t = np.empty(m, dtype=complex)
    alpha_d = np.empty(m, dtype=complex)
    a_d = np.empty((m, config.n_t), dtype=complex)
    b_t1 = np.empty((m, config.n_1), dtype=complex)
    b_d1 = np.empty((m, config.n_1), dtype=complex)
    b_t2 = np.empty((m, config.n_2), dtype=complex)
    b_d2 = np.empty((m, config.n_2), dtype=complex)
    q_t = np.empty((m, config.n_1), dtype=complex)
    q_d = np.empty((m, config.n_2), dtype=complex)

    d_bs_tar = np.linalg.norm(tar - bs)
    u_bs_tar = (tar - bs) / d_bs_tar
    for i, sr_pos in enumerate(config.sr_positions):
        sr = _as_point(sr_pos)
        theta_d[i] = bearing(bs, sr)
        phi_t[i] = bearing(sr, tar)
        phi_d[i] = bearing(sr, bs)
        a_d[i] = steering_vector(theta_d[i], config.n_t, spacing, lam)
        b_t1[i] = steering_vector(phi_t[i], config.n_1, spacing, lam)
        b_d1[i] = steering_vector(phi_d[i], config.n_1, spacing, lam)
        b_t2[i] = steering_vector(phi_t[i], config.n_2, spacing, lam)
        b_d2[i] = steering_vector(phi_d[i], config.n_2, spacing, lam)
        q_t[i], q_d[i] = receive_beamformers(b_t1[i], b_d1[i], b_t2[i], b_d2[i])

        d_tar_sr = np.linalg.norm(sr - tar)
        tau_t[i] = (d_bs_tar + d_tar_sr) / SPEED_OF_LIGHT
        tau_d[i] = np.linalg.norm(sr - bs) / SPEED_OF_LIGHT
        u_sr_tar = (tar - sr) / d_tar_sr
        # Doppler from the bistatic range rate; zero for a static target.
        dopp[i] = -float((u_bs_tar + u_sr_tar) @ vel) / lam
        alpha_t[i] = rcs_draw * np.sqrt(path_loss("target", (bs, tar, sr), lam))
        alpha_d[i] = np.sqrt(path_loss("direct", (bs, sr), lam))

    mu_t = alpha_t * np.einsum("ij,ij->i", q_t.conj(), b_t1)
    mu_d = alpha_d * np.einsum("ij,ij->i", q_d.conj(), b_d2)

    h_t_tilde = mu_t[:, None] * (a_t.conj() @ w)[None, :]
    h_d_tilde = mu_d[:, None] * (a_d.conj() @ w)
    b_matrix = mu_d[:, None] * a_d.conj() / np.sqrt(config.sigma_r2)
    mu0 = float(np.sum(np.abs(mu_t) ** 2) / config.sigma_r2)

    comm = synth_comm_channels(
        np.random.default_rng(config.seed), config.c, config.n_t, config.cu_variances())

    return ChannelSet(
        h_t_tilde=h_t_tilde,
        h_d_tilde=h_d_tilde,
        b_matrix=b_matrix,
        mu0=mu0,
        mu_t=mu_t,
        mu_d=mu_d,
        comm_channels=comm,
        angles={"theta_t": theta_t, "theta_d": theta_d, "phi_t": phi_t, "phi_d": phi_d},
        delays={"target": tau_t, "direct": tau_d},
        dopplers=dopp,
        a_t=a_t,
        a_d=a_d,
        b_t1=b_t1,
        b_d1=b_d1,
        b_t2=b_t2,
        b_d2=b_d2,
        q_t=q_t,
        q_d=q_d,
        alpha_t=alpha_t,
        alpha_d=alpha_d,
        sigma_r2=config.sigma_r2,
        sample_rate=config.sample_rate,
        config=config,
    )


def with_beamformer(channels: ChannelSet, beamformer: np.ndarray) -> ChannelSet:
    """New ChannelSet with the same scene but a different transmit matrix.

    Only the post-combining equivalent channels depend on W; geometry,
    gains, and the drawn communication channels are carried over unchanged.
    """
    w = np.asarray(beamformer, dtype=complex)
    n_t = channels.a_t.size
    if w.ndim != 2 or w.shape[0] != n_t:
        raise DimensionMismatch(
            f"beamformer shape {w.shape} does not match n_t = {n_t}")
    return replace(
        channels,
        h_t_tilde=channels.mu_t[:, None] * (channels.a_t.conj() @ w)[None, :],
        h_d_tilde=channels.mu_d[:, None] * (channels.a_d.conj() @ w),
    )


def rescale_reflectivity(channels: ChannelSet, ratio: complex) -> ChannelSet:
    """New ChannelSet with the target reflectivity multiplied by ``ratio``.

    Target-path quantities scale linearly in the reflectivity draw; direct
    paths are untouched. Building a set once with rcs_draw=1 and rescaling
    per trial avoids recomputing the geometry inside Monte Carlo loops.
    """
    ratio = complex(ratio)
    return replace(
        channels,
        h_t_tilde=channels.h_t_tilde * ratio,
        mu_t=channels.mu_t * ratio,
        alpha_t=channels.alpha_t * ratio,
        mu0=channels.mu0 * abs(ratio) ** 2,
    )
