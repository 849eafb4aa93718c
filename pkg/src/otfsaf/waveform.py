"""Delay-Doppler to time-frequency symbol transforms and signal synthesis."""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvalidOversample


@dataclass(frozen=True)
class GridConfig:
    """OTFS frame geometry: N Doppler bins / time slots, M delay bins / subcarriers.

    The subcarrier spacing is locked to the symbol duration, delta_f = 1/t.
    """

    n: int
    m: int
    t: float = 1.0
    delta_f: float = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be >= 1")
        if self.t <= 0.0:
            raise ValueError("symbol duration t must be > 0")
        if self.delta_f is None:
            object.__setattr__(self, "delta_f", 1.0 / self.t)
        if abs(self.delta_f * self.t - 1.0) > 1e-12:
            raise ValueError("delta_f * t must equal 1 (within 1e-12)")


@dataclass(frozen=True)
class SampledSignal:
    """Uniformly sampled baseband signal supported on [start_time, start_time + num_slots*slot_duration).

    slot_duration/num_slots record the pulse-train geometry so that numerical
    quadrature can split integrals at the rectangular-pulse boundaries.
    """

    sample_rate: float
    start_time: float
    samples: np.ndarray
    slot_duration: float
    num_slots: int


def _check_shape(x: np.ndarray, cfg: GridConfig):
    if x.shape != (cfg.n, cfg.m):
        raise DimensionMismatch(f"symbol matrix shape {x.shape} does not match (N, M)=({cfg.n}, {cfg.m})")


def dd_to_tf(x: np.ndarray, cfg: GridConfig) -> np.ndarray:
    """Map delay-Doppler symbols x[k, l] to time-frequency symbols X[n, m].

    X[n, m] = sum_{k,l} x[k, l] * exp(j*2*pi*(n*k/N - m*l/M)); the transform is
    unnormalized, so sum |X|^2 = N*M * sum |x|^2.
    """
    x = np.asarray(x, dtype=complex)
    _check_shape(x, cfg)
    n_idx = np.arange(cfg.n)
    m_idx = np.arange(cfg.m)
    e_n = np.exp(2j * np.pi * np.outer(n_idx, n_idx) / cfg.n)  # [n, k]
    e_m = np.exp(-2j * np.pi * np.outer(m_idx, m_idx) / cfg.m)  # [l, m]
    return e_n @ x @ e_m


def tf_to_dd(x_tf: np.ndarray, cfg: GridConfig) -> np.ndarray:
    """Exact inverse of dd_to_tf (carries the 1/(N*M) factor)."""
    x_tf = np.asarray(x_tf, dtype=complex)
    _check_shape(x_tf, cfg)
    n_idx = np.arange(cfg.n)
    m_idx = np.arange(cfg.m)
    e_n = np.exp(-2j * np.pi * np.outer(n_idx, n_idx) / cfg.n)
    e_m = np.exp(2j * np.pi * np.outer(m_idx, m_idx) / cfg.m)
    return (e_n @ x_tf @ e_m) / (cfg.n * cfg.m)


def ofdm_map(x: np.ndarray) -> np.ndarray:
    """OFDM places the data directly on the time-frequency grid: X[n, m] = x[n, m]."""
    return np.array(x, dtype=complex, copy=True)


def synthesize(x_tf: np.ndarray, cfg: GridConfig, oversample: int) -> SampledSignal:
    """Sample s(t) = (1/sqrt(NM)) sum X[n,m] g(t-nT) exp(j*2*pi*m*df*(t-nT)) on [0, NT).

    g is the rectangular pulse of amplitude 1/sqrt(T) on [0, T); samples use the
    left-closed convention, so the sample at t = nT belongs to slot n. The rate
    is oversample * M * delta_f.
    """
    x_tf = np.asarray(x_tf, dtype=complex)
    _check_shape(x_tf, cfg)
    if int(oversample) != oversample or oversample < 2:
        raise InvalidOversample(f"oversample must be an integer >= 2, got {oversample}")
    oversample = int(oversample)
    rate = oversample * cfg.m * cfg.delta_f
    per_slot = oversample * cfg.m
    u = np.arange(per_slot) / rate  # offsets within one slot
    tones = np.exp(2j * np.pi * cfg.delta_f * np.outer(u, np.arange(cfg.m)))  # [sample, m]
    scale = 1.0 / np.sqrt(cfg.n * cfg.m * cfg.t)
    samples = (tones @ x_tf.T).T.reshape(-1) * scale  # slot-major layout
    return SampledSignal(
        sample_rate=rate,
        start_time=0.0,
        samples=samples,
        slot_duration=cfg.t,
        num_slots=cfg.n,
    )


def signal_energy(s: SampledSignal) -> float:
    """Trapezoid energy of the sampled signal, split at the slot boundaries.

    Each slot waveform is periodic over the slot (subcarriers complete whole
    cycles), so the missing right-edge sample equals the slot's first sample.
    """
    per_slot = round(s.sample_rate * s.slot_duration)
    h = 1.0 / s.sample_rate
    power = np.abs(s.samples) ** 2
    total = 0.0
    for n in range(s.num_slots):
        block = power[n * per_slot : (n + 1) * per_slot]
        closed = np.concatenate([block, block[:1]])
        total += np.trapezoid(closed, dx=h)
    return float(total)
