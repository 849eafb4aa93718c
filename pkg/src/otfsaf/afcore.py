"""Complex ambiguity function of a modulated frame: closed form, grids, and a
matched-filter quadrature oracle."""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch
from .waveform import GridConfig, SampledSignal


class DelayDopplerPoint(NamedTuple):
    tau: float
    fd: float


@dataclass(frozen=True)
class AfAxes:
    """Sampled delay and Doppler axes (strictly increasing)."""

    tau_values: np.ndarray
    fd_values: np.ndarray

    def __post_init__(self):
        tau = np.asarray(self.tau_values, dtype=float)
        fd = np.asarray(self.fd_values, dtype=float)
        if tau.ndim != 1 or fd.ndim != 1 or tau.size == 0 or fd.size == 0:
            raise ValueError("axes must be non-empty 1-D arrays")
        if np.any(np.diff(tau) <= 0) or np.any(np.diff(fd) <= 0):
            raise ValueError("axis values must be strictly increasing")
        object.__setattr__(self, "tau_values", tau)
        object.__setattr__(self, "fd_values", fd)


@dataclass(frozen=True)
class AfGrid:
    """Complex ambiguity surface sampled on AfAxes, indexed [tau_index, fd_index]."""

    axes: AfAxes
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.axes.tau_values.size, self.axes.fd_values.size):
            raise DimensionMismatch("grid values do not match the axes")


def default_axes(cfg: GridConfig, tau_samples_per_t: int = 16, fd_samples_per_df: int = 16,
                 fd_max: float = 10.0) -> AfAxes:
    """Symmetric axes covering |tau| <= N*T and |fd| <= fd_max * delta_f."""
    n_tau = cfg.n * tau_samples_per_t
    n_fd = round(fd_max * fd_samples_per_df)
    tau = np.arange(-n_tau, n_tau + 1) * (cfg.t / tau_samples_per_t)
    fd = np.arange(-n_fd, n_fd + 1) * (cfg.delta_f / fd_samples_per_df)
    return AfAxes(tau_values=tau, fd_values=fd)


def _sinc(z):
    """sin(z)/z with sinc(0) = 1; 4-term Taylor series below |z| = 1e-4."""
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < 1e-4
    safe = np.where(small, 1.0, z)
    out = np.where(small, 1.0 - z**2 / 6.0 + z**4 / 120.0 - z**6 / 5040.0, np.sin(safe) / safe)
    return out


def rect_pulse_af(t_shift, freq_shift, t_symbol: float):
    """Ambiguity kernel of the unit-energy rectangular pulse of duration t_symbol.

    Equals ((T - |t'|)/T) * sinc(pi * alpha * (T - |t'|)) for |t'| < T and zero
    otherwise. Broadcasts over t_shift and freq_shift; returns a float for
    scalar inputs.
    """
    if t_symbol <= 0.0:
        raise ValueError("t_symbol must be > 0")
    t_shift = np.asarray(t_shift, dtype=float)
    freq_shift = np.asarray(freq_shift, dtype=float)
    width = t_symbol - np.abs(t_shift)
    width, alpha = np.broadcast_arrays(width, freq_shift)
    inside = width > 0.0
    w = np.where(inside, width, 0.0)
    val = np.where(inside, (w / t_symbol) * _sinc(np.pi * alpha * w), 0.0)
    if val.ndim == 0:
        return float(val)
    return val


def complex_af(x_tf: np.ndarray, cfg: GridConfig, point) -> complex:
    """Closed-form complex ambiguity function of the frame at one (tau, fd) point.

    Evaluates the quadruple sum over symbol pairs; the kernel support limits the
    slot difference n1 - n2 to at most two values, so the cost is O(N * M^2).
    The phase convention is pinned to the matched filter
    int s(t) conj(s(t - tau)) exp(j*2*pi*fd*t) dt for the signal synthesized
    from the same frame.
    """
    x_tf = np.asarray(x_tf, dtype=complex)
    if x_tf.shape != (cfg.n, cfg.m):
        raise DimensionMismatch(f"symbol matrix shape {x_tf.shape} does not match ({cfg.n}, {cfg.m})")
    tau, fd = float(point[0]), float(point[1])
    n_dim, m_dim, t_sym, df = cfg.n, cfg.m, cfg.t, cfg.delta_f
    m_idx = np.arange(m_dim)
    e_diff = m_idx[:, None] - m_idx[None, :]  # m1 - m2
    e_sum = m_idx[:, None] + m_idx[None, :]
    acc = 0.0 + 0.0j
    for d in range(-(n_dim - 1), n_dim):
        t_prime = d * t_sym - tau
        if abs(t_prime) >= t_sym:
            continue
        n2 = np.arange(max(0, -d), n_dim - max(0, d))
        doppler = np.exp(2j * np.pi * t_sym * fd * n2)
        corr = (x_tf[n2 + d, :] * doppler[:, None]).T @ np.conj(x_tf[n2, :])  # [m1, m2]
        kernel = rect_pulse_af(t_prime, e_diff * df + fd, t_sym)
        phase = np.exp(1j * np.pi * e_sum * df * tau) * np.exp(1j * np.pi * fd * (d + 1) * t_sym)
        sign = 1.0 - 2.0 * ((e_diff * (d + 1)) % 2)
        acc += np.sum(corr * kernel * phase * sign)
    return complex(acc * np.exp(1j * np.pi * tau * fd) / (n_dim * m_dim))


class AfGridEvaluator:
    """Batch evaluator of complex_af over a fixed (config, axes) grid.

    Precomputes every data-independent factor (kernel slabs and phase tables),
    so repeated evaluation across Monte Carlo realizations only pays for the
    symbol-dependent correlations. Output matches pointwise complex_af.
    """

    def __init__(self, cfg: GridConfig, axes: AfAxes):
        self.cfg = cfg
        self.axes = axes
        n_dim, m_dim, t_sym, df = cfg.n, cfg.m, cfg.t, cfg.delta_f
        tau = axes.tau_values
        fd = axes.fd_values
        self._shape = (tau.size, fd.size)
        self._cross = np.exp(1j * np.pi * np.outer(tau, fd)) / (n_dim * m_dim)
        self._plan = []
        for d in range(-(n_dim - 1), n_dim):
            pidx = np.where(np.abs(d * t_sym - tau) < t_sym)[0]
            if pidx.size == 0:
                continue
            tsel = tau[pidx]
            width = t_sym - np.abs(d * t_sym - tsel)
            n2 = np.arange(max(0, -d), n_dim - max(0, d))
            doppler = np.exp(2j * np.pi * t_sym * np.outer(n2, fd))  # [n2, fd]
            fd_phase = np.exp(1j * np.pi * fd * (d + 1) * t_sym)
            entries = []
            for e in range(-(m_dim - 1), m_dim):
                m2r = np.arange(max(0, -e), m_dim - max(0, e))
                ph_tau = np.exp(2j * np.pi * df * np.outer(tsel, m2r))  # [tau, m2]
                kernel = (width / t_sym)[:, None] * _sinc(
                    np.pi * np.outer(width, e * df + fd)
                )
                sign = 1.0 if (e * (d + 1)) % 2 == 0 else -1.0
                slab = kernel * (sign * np.exp(1j * np.pi * e * df * tsel))[:, None] * fd_phase[None, :]
                entries.append((e, m2r, ph_tau, slab))
            self._plan.append((d, pidx, n2, doppler, entries))

    def evaluate(self, x_tf: np.ndarray) -> np.ndarray:
        """Complex AF values on the grid for one symbol frame, [tau, fd]."""
        x_tf = np.asarray(x_tf, dtype=complex)
        if x_tf.shape != (self.cfg.n, self.cfg.m):
            raise DimensionMismatch(
                f"symbol matrix shape {x_tf.shape} does not match ({self.cfg.n}, {self.cfg.m})"
            )
        out = np.zeros(self._shape, dtype=complex)
        for d, pidx, n2, doppler, entries in self._plan:
            a = x_tf[n2 + d, :]
            b = np.conj(x_tf[n2, :])
            corr = np.einsum("ka,kb,kq->abq", a, b, doppler, optimize=True)  # [m1, m2, fd]
            acc = np.zeros((pidx.size, self._shape[1]), dtype=complex)
            for e, m2r, ph_tau, slab in entries:
                f_de = corr[m2r + e, m2r, :]  # [m2, fd]
                acc += slab * (ph_tau @ f_de)
            out[pidx, :] += acc
        out *= self._cross
        return out


def af_grid(x_tf: np.ndarray, cfg: GridConfig, axes: AfAxes) -> AfGrid:
    """Sample the complex AF on the Cartesian product of the axes."""
    values = AfGridEvaluator(cfg, axes).evaluate(x_tf)
    return AfGrid(axes=axes, values=values)


# --- matched-filter quadrature oracle ---------------------------------------


def _slot_interp(s: SampledSignal, slot: int, offsets: np.ndarray) -> np.ndarray:
    """Values of the slot waveform at offsets in [0, T] from the slot start.

    Subcarriers complete whole cycles per slot, so the waveform is periodic
    over the slot and the right edge wraps to the slot's first sample. Offsets
    that fall on sample positions are read exactly; others are linearly
    interpolated.
    """
    per_slot = round(s.sample_rate * s.slot_duration)
    base = slot * per_slot
    j = offsets * s.sample_rate
    j = np.clip(j, 0.0, float(per_slot))
    j0 = np.floor(j + 1e-9).astype(int)
    frac = j - j0
    frac = np.where(np.abs(frac) < 1e-9, 0.0, frac)
    j0 = np.minimum(j0, per_slot)
    lo = base + np.where(j0 == per_slot, 0, j0)
    hi = base + np.where(j0 + 1 >= per_slot, 0, j0 + 1)
    return (1.0 - frac) * s.samples[lo] + frac * s.samples[hi]


def _segment_nodes(t0: float, h: float, a: float, b: float) -> np.ndarray:
    eps = 1e-9 * h
    i_lo = int(np.ceil((a - t0) / h - 1e-9))
    while t0 + i_lo * h <= a + eps:
        i_lo += 1
    i_hi = int(np.floor((b - t0) / h + 1e-9))
    while t0 + i_hi * h >= b - eps:
        i_hi -= 1
    inner = t0 + np.arange(i_lo, i_hi + 1) * h
    return np.concatenate([[a], inner, [b]])


def _edge_derivatives(nodes: np.ndarray, f: np.ndarray, at_start: bool):
    """First and third derivative at a segment edge from a local degree-5 fit."""
    k = 6
    if at_start:
        x = nodes[:k] - nodes[0]
        y = f[:k]
    else:
        x = nodes[-k:] - nodes[-1]
        y = f[-k:]
    scale = np.max(np.abs(x))
    coef = np.polynomial.polynomial.polyfit(x / scale, y, deg=5)
    return coef[1] / scale, 6.0 * coef[3] / scale**3


def matched_filter_af(s: SampledSignal, point) -> float:
    """|int s(t) conj(s(t - tau)) exp(j*2*pi*fd*t) dt| from the sampled signal.

    Trapezoid quadrature split at the pulse boundaries of both copies, with
    Euler-Maclaurin endpoint corrections; the delayed copy is linearly
    interpolated where the delay is not a multiple of the sample step.
    """
    tau, fd = float(point[0]), float(point[1])
    h = 1.0 / s.sample_rate
    t0 = s.start_time
    t_sym = s.slot_duration
    n_slots = s.num_slots
    end = t0 + n_slots * t_sym
    lo, hi = max(t0, t0 + tau), min(end, end + tau)
    if hi - lo <= 1e-15:
        return 0.0
    bks = sorted(
        {t0 + k * t_sym for k in range(n_slots + 1)}
        | {t0 + k * t_sym + tau for k in range(n_slots + 1)}
    )
    cuts = [lo] + [x for x in bks if lo + 1e-12 * t_sym < x < hi - 1e-12 * t_sym] + [hi]
    total = 0.0 + 0.0j
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b - a <= 1e-13 * t_sym:
            continue
        nodes = _segment_nodes(t0, h, a, b)
        mid = 0.5 * (a + b)
        slot1 = min(max(int(np.floor((mid - t0) / t_sym)), 0), n_slots - 1)
        slot2 = min(max(int(np.floor((mid - tau - t0) / t_sym)), 0), n_slots - 1)
        if nodes.size < 7:
            # short segment: the quadrature error of coarse nodes would be
            # dominated by the phase oscillation, so refine; the factor
            # interpolation error integrates to O(length * h^2)
            nodes = np.linspace(a, b, 65)
            step = (b - a) / 64.0
        else:
            step = h
        v1 = _slot_interp(s, slot1, nodes - (t0 + slot1 * t_sym))
        v2 = _slot_interp(s, slot2, nodes - tau - (t0 + slot2 * t_sym))
        f = v1 * np.conj(v2) * np.exp(2j * np.pi * fd * nodes)
        seg = np.trapezoid(f, nodes)
        d1a, d3a = _edge_derivatives(nodes, f, at_start=True)
        d1b, d3b = _edge_derivatives(nodes, f, at_start=False)
        seg -= step**2 / 12.0 * (d1b - d1a)
        seg += step**4 / 720.0 * (d3b - d3a)
        total += seg
    return float(np.abs(total))
