"""Transmit symbol generation and the receive-side signal chain.

The narrowband snapshot model works on blocks of L samples. A propagation
path with delay tau and Doppler shift f acts on a length-L sample sequence
through the unitary operator

    D(tau, f) = (1/L) * K(f / f_s) * F^H * K(-tau * f_s / L) * F,

where F is the unnormalized DFT matrix F[m, n] = exp(-j 2 pi m n / L) and
K(x) = diag(1, e^{j 2 pi x}, ..., e^{j 2 pi (L-1) x}). Delay is implemented
as a phase ramp across DFT bins (circular, fractional delays allowed) and
Doppler as a phase ramp across time. D(0, 0) is the identity and a delay of
exactly one sample period is a circular shift by one sample.

Right-multiplying a 1 x L row by D^T applies the path to a transmit
sequence; right-multiplying by D^* undoes a hypothesized path during
receive compensation. Both have dense and FFT-factored implementations; the
factored form must match the dense operator to 1e-10 and is the default in
the processing chain.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .errors import ConfigError, DimensionMismatch
from .scenario import ChannelSet

QAM16_LEVELS = np.array([-3.0, -1.0, 1.0, 3.0]) / np.sqrt(10.0)
# Gray code order: index by the 2-bit pair (b0, b1) -> level position
_GRAY_TO_LEVEL = {(0, 0): 0, (0, 1): 1, (1, 1): 2, (1, 0): 3}
_LEVEL_TO_GRAY = {v: k for k, v in _GRAY_TO_LEVEL.items()}


@dataclass
class SymbolBlock:
    """A C x L block of transmit symbols with unit average power per sample."""

    data: np.ndarray
    modulation: str
    sample_rate: float | None = None
    bits: np.ndarray | None = None
    n_sc: int | None = None
    cp_len: int | None = None

    @property
    def c(self) -> int:
        return self.data.shape[0]

    @property
    def l(self) -> int:
        return self.data.shape[1]


@dataclass
class Observation:
    """Receive-side data, either raw per-receiver arrays or the stacked 2M x L matrix.

    ``per_sr_raw`` holds (surveillance, reference) array outputs per receiver
    before combining; ``y`` holds the post-combining, path-compensated stack
    with target rows on top and direct rows below.
    """

    y: np.ndarray | None = None
    per_sr_raw: list | None = None
    hypothesis: str = "h1"


def _phase_ramp(x: float, l: int) -> np.ndarray:
    return np.exp(1j * 2.0 * np.pi * x * np.arange(l))


@dataclass
class DelayDopplerOp:
    """Unitary L x L action of one propagation path at sample rate f_s."""

    tau: float
    doppler: float
    sample_rate: float
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise ConfigError("operator length must be at least 1")
        if self.sample_rate <= 0:
            raise ConfigError("sample rate must be positive")
        self._dense = None

    @property
    def matrix(self) -> np.ndarray:
        """Dense operator matrix; built on first access."""
        if self._dense is None:
            l = self.length
            n = np.arange(l)
            dft = np.exp(-2j * np.pi * np.outer(n, n) / l)
            k1 = _phase_ramp(self.doppler / self.sample_rate, l)
            k2 = _phase_ramp(-self.tau * self.sample_rate / l, l)
            self._dense = (k1[:, None] * dft.conj().T) @ (k2[:, None] * dft) / l
        return self._dense

    def apply_to_rows(self, rows: np.ndarray) -> np.ndarray:
        """rows @ D^T: push transmit sequences through the path (FFT fast path)."""
        rows = np.atleast_2d(np.asarray(rows, dtype=complex))
        if rows.shape[-1] != self.length:
            raise DimensionMismatch("row length does not match operator length")
        k1 = _phase_ramp(self.doppler / self.sample_rate, self.length)
        k2 = _phase_ramp(-self.tau * self.sample_rate / self.length, self.length)
        return np.fft.ifft(np.fft.fft(rows, axis=-1) * k2, axis=-1) * k1

    def compensate_rows(self, rows: np.ndarray) -> np.ndarray:
        """rows @ D^*: undo a hypothesized path on received sequences (FFT fast path)."""
        rows = np.atleast_2d(np.asarray(rows, dtype=complex))
        if rows.shape[-1] != self.length:
            raise DimensionMismatch("row length does not match operator length")
        k1 = _phase_ramp(self.doppler / self.sample_rate, self.length)
        k2 = _phase_ramp(-self.tau * self.sample_rate / self.length, self.length)
        return np.fft.ifft(np.fft.fft(rows * k1.conj(), axis=-1) * k2.conj(), axis=-1)


def delay_doppler_operator(tau: float, doppler: float, sample_rate: float, length: int) -> DelayDopplerOp:
    """Build the unitary path operator D(tau, doppler) for L samples at rate f_s."""
    return DelayDopplerOp(tau=tau, doppler=doppler, sample_rate=sample_rate, length=length)


def gen_symbols_gaussian(rng: np.random.Generator, c: int, l: int) -> SymbolBlock:
    """C x L i.i.d. circular complex Gaussian symbols, unit power per sample."""
    if c < 1 or l < 1:
        raise ConfigError("need c >= 1 and l >= 1")
    data = (rng.standard_normal((c, l)) + 1j * rng.standard_normal((c, l))) / np.sqrt(2.0)
    return SymbolBlock(data=data, modulation="gaussian")


def _qam16_map(bits: np.ndarray) -> np.ndarray:
    """bits (..., 4) -> complex symbols, Gray-coded 16-QAM with unit average energy."""
    idx_i = np.array([_GRAY_TO_LEVEL[(int(a), int(b))] for a, b in bits[..., :2].reshape(-1, 2)])
    idx_q = np.array([_GRAY_TO_LEVEL[(int(a), int(b))] for a, b in bits[..., 2:].reshape(-1, 2)])
    sym = QAM16_LEVELS[idx_i] + 1j * QAM16_LEVELS[idx_q]
    return sym.reshape(bits.shape[:-1])


def _qam16_demap(symbols: np.ndarray) -> np.ndarray:
    """Nearest-point 16-QAM decision back to bits (..., 4)."""
    flat = symbols.reshape(-1)
    idx_i = np.argmin(np.abs(flat.real[:, None] - QAM16_LEVELS[None, :]), axis=1)
    idx_q = np.argmin(np.abs(flat.imag[:, None] - QAM16_LEVELS[None, :]), axis=1)
    bits = np.empty((flat.size, 4), dtype=np.int64)
    for n, (ii, qq) in enumerate(zip(idx_i, idx_q)):
        bits[n, :2] = _LEVEL_TO_GRAY[int(ii)]
        bits[n, 2:] = _LEVEL_TO_GRAY[int(qq)]
    return bits.reshape(symbols.shape + (4,))


def gen_symbols_ofdm(
    rng: np.random.Generator,
    n_sc: int,
    delta_f: float,
    l_frames: int,
    cp_len: int | None = None,
    expected_length: int | None = None,
) -> SymbolBlock:
    """Single-stream OFDM block: 16-QAM on n_sc subcarriers, l_frames frames.

    Each frame is an inverse DFT of the subcarrier symbols scaled to unit
    average sample power, with a cyclic prefix of ``cp_len`` samples
    (n_sc / 8 by default). The sample rate is n_sc * delta_f. Raises
    ConfigError when ``expected_length`` does not match the produced length
    l_frames * (n_sc + cp_len).
    """
    if n_sc < 2 or l_frames < 1:
        raise ConfigError("need n_sc >= 2 and l_frames >= 1")
    if delta_f <= 0:
        raise ConfigError("subcarrier spacing must be positive")
    if cp_len is None:
        cp_len = n_sc // 8
    if cp_len < 0:
        raise ConfigError("cyclic prefix length cannot be negative")
    total = l_frames * (n_sc + cp_len)
    if expected_length is not None and expected_length != total:
        raise ConfigError(
            f"requested block length {expected_length} inconsistent with "
            f"{l_frames} frames of {n_sc}+{cp_len} samples ({total})")

    bits = rng.integers(0, 2, size=(l_frames, n_sc, 4))
    freq = _qam16_map(bits)
    time = np.fft.ifft(freq, axis=1) * np.sqrt(n_sc)
    with_cp = np.concatenate([time[:, n_sc - cp_len:], time], axis=1) if cp_len else time
    data = with_cp.reshape(1, total)
    return SymbolBlock(
        data=data,
        modulation="qam16-ofdm",
        sample_rate=n_sc * delta_f,
        bits=bits,
        n_sc=n_sc,
        cp_len=cp_len,
    )


def ofdm_demodulate(block: SymbolBlock) -> np.ndarray:
    """Recover the bit array from a noiseless (or low-noise) OFDM SymbolBlock."""
    if block.modulation != "qam16-ofdm":
        raise ConfigError("not an OFDM block")
    n_sc, cp = block.n_sc, block.cp_len
    frames = block.data.reshape(-1, n_sc + cp)[:, cp:]
    freq = np.fft.fft(frames, axis=1) / np.sqrt(n_sc)
    return _qam16_demap(freq)


def _noise(rng: np.random.Generator, shape, power: float) -> np.ndarray:
    if power == 0.0:
        return np.zeros(shape, dtype=complex)
    return np.sqrt(power / 2.0) * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def _check_hypothesis(hypothesis: str) -> bool:
    if hypothesis not in ("h0", "h1"):
        raise ConfigError("hypothesis must be 'h0' (no target) or 'h1' (target present)")
    return hypothesis == "h1"


def synth_received(
    channels: ChannelSet,
    beamformer: np.ndarray,
    symbols: SymbolBlock,
    hypothesis: str,
    rng: np.random.Generator,
) -> Observation:
    """Raw two-array outputs at every receiver for one block.

    Under "h1" each array sees the delayed/Doppler-shifted target return plus
    the direct BS path plus noise; under "h0" the target term is absent from
    both arrays. Returns an Observation with ``per_sr_raw`` filled and ``y``
    empty (run frontend_process next).
    """
    target_present = _check_hypothesis(hypothesis)
    w = np.asarray(beamformer, dtype=complex)
    s = symbols.data
    if w.shape[1] != s.shape[0]:
        raise DimensionMismatch("beamformer column count must match symbol stream count")
    if w.shape[0] != channels.a_t.size:
        raise DimensionMismatch("beamformer row count must match transmit array size")
    l = s.shape[1]
    fs = channels.sample_rate

    x_t = (channels.a_t.conj() @ w) @ s
    raw = []
    for i in range(channels.m):
        x_d = (channels.a_d[i].conj() @ w) @ s
        op_d = delay_doppler_operator(channels.delays["direct"][i], 0.0, fs, l)
        sig_d = op_d.apply_to_rows(x_d)[0]
        y1 = channels.alpha_d[i] * np.outer(channels.b_d1[i], sig_d)
        y2 = channels.alpha_d[i] * np.outer(channels.b_d2[i], sig_d)
        if target_present:
            op_t = delay_doppler_operator(
                channels.delays["target"][i], channels.dopplers[i], fs, l)
            sig_t = op_t.apply_to_rows(x_t)[0]
            y1 = y1 + channels.alpha_t[i] * np.outer(channels.b_t1[i], sig_t)
            y2 = y2 + channels.alpha_t[i] * np.outer(channels.b_t2[i], sig_t)
        y1 = y1 + _noise(rng, y1.shape, channels.sigma_r2)
        y2 = y2 + _noise(rng, y2.shape, channels.sigma_r2)
        raw.append((y1, y2))
    return Observation(y=None, per_sr_raw=raw, hypothesis=hypothesis)


def frontend_process(
    raw: Observation,
    channels: ChannelSet,
    hypothesized: list | None = None,
) -> Observation:
    """Combine and path-compensate raw arrays into the 2M x L detection stack.

    Each receiver's surveillance array is combined with its direct-nulling
    weights and compensated with the hypothesized target (tau, doppler) pair;
    the reference array is combined with its target-nulling weights and
    compensated with the known direct-path delay. ``hypothesized`` is a list
    of (tau, doppler) per receiver; None means the true target parameters
    (matched processing).
    """
    if raw.per_sr_raw is None:
        raise DimensionMismatch("raw observation has no per-receiver arrays")
    m = channels.m
    if len(raw.per_sr_raw) != m:
        raise DimensionMismatch("raw arrays do not match receiver count")
    if hypothesized is None:
        hypothesized = [
            (channels.delays["target"][i], channels.dopplers[i]) for i in range(m)
        ]
    if len(hypothesized) != m:
        raise DimensionMismatch("need one hypothesized (tau, doppler) per receiver")

    l = raw.per_sr_raw[0][0].shape[1]
    fs = channels.sample_rate
    rows_t = np.empty((m, l), dtype=complex)
    rows_d = np.empty((m, l), dtype=complex)
    for i, (y1, y2) in enumerate(raw.per_sr_raw):
        tau_hat, f_hat = hypothesized[i]
        comb_t = channels.q_t[i].conj() @ y1
        comb_d = channels.q_d[i].conj() @ y2
        rows_t[i] = delay_doppler_operator(tau_hat, f_hat, fs, l).compensate_rows(comb_t)[0]
        rows_d[i] = delay_doppler_operator(
            channels.delays["direct"][i], 0.0, fs, l).compensate_rows(comb_d)[0]
    return Observation(y=np.vstack([rows_t, rows_d]), per_sr_raw=raw.per_sr_raw,
                       hypothesis=raw.hypothesis)


def synth_equivalent_from_matrices(
    h_t: np.ndarray,
    h_d: np.ndarray,
    symbols: SymbolBlock,
    sigma_r2: float,
    hypothesis: str,
    rng: np.random.Generator,
) -> Observation:
    """Post-processing model: y = [h_t; h_d] s + noise, target rows zeroed under h0."""
    target_present = _check_hypothesis(hypothesis)
    h_t = np.asarray(h_t, dtype=complex)
    h_d = np.asarray(h_d, dtype=complex)
    if h_t.shape != h_d.shape:
        raise DimensionMismatch("target and direct channel matrices must share a shape")
    if h_t.shape[1] != symbols.c:
        raise DimensionMismatch("channel columns must match symbol stream count")
    h_top = h_t if target_present else np.zeros_like(h_t)
    y = np.vstack([h_top, h_d]) @ symbols.data
    y = y + _noise(rng, y.shape, sigma_r2)
    return Observation(y=y, per_sr_raw=None, hypothesis=hypothesis)


def synth_equivalent(
    channels: ChannelSet,
    symbols: SymbolBlock,
    hypothesis: str,
    rng: np.random.Generator,
) -> Observation:
    """Fast-path observation straight from the equivalent channels.

    Statistically identical to synth_received + frontend_process with matched
    compensation, skipping the per-antenna arrays entirely.
    """
    return synth_equivalent_from_matrices(
        channels.h_t_tilde, channels.h_d_tilde, symbols, channels.sigma_r2, hypothesis, rng)
