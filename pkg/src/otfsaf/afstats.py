"""Closed-form statistics of the ambiguity surface over random data.

Everything here averages over i.i.d. unit-energy symbols: the exact complex
mean of the AF, its exact second moment, Jensen bounds for the mean and
variance of |AF|, and the Rice approximation built from those two moments.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import ive

from .afcore import AfAxes, rect_pulse_af, _sinc
from .constellation import ConstellationMoments
from .errors import DomainError, IndexOutOfRange
from .waveform import GridConfig

_TAU_ZERO_RTOL = 1e-12
_INT_ATOL = 1e-9


@dataclass(frozen=True)
class RiceParams:
    """Line-of-sight / scale parameters of the Rice magnitude model.

    nu is the magnitude of the complex AF mean, sigma the per-component
    standard deviation of the fluctuation, so nu^2 + 2*sigma^2 equals the
    second moment the parameters were built from.
    """

    nu: float
    sigma: float

    def __post_init__(self):
        if self.nu < 0.0 or self.sigma < 0.0:
            raise ValueError("nu and sigma must be >= 0")


@dataclass(frozen=True)
class MomentSurfaces:
    """Per-point closed-form statistics on a delay-Doppler grid.

    All matrices are indexed [tau_index, fd_index].
    """

    axes: AfAxes
    mean_abs_complex: np.ndarray
    second_moment: np.ndarray
    rice_mean: np.ndarray
    rice_var: np.ndarray
    mean_lower: np.ndarray
    mean_upper: np.ndarray
    var_upper: np.ndarray


def dirichlet_sq(x, n: int):
    """Normalized squared Dirichlet kernel |sum_{k<n} e^{j2pi k x}|^2 / n^2.

    Equals 1 at integer x and sin^2(n pi x) / (n^2 sin^2(pi x)) elsewhere;
    always in [0, 1]. Vectorized over x.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    x = np.asarray(x, dtype=float)
    frac = x - np.round(x)
    near_int = np.abs(frac) <= _INT_ATOL
    safe = np.where(near_int, 0.25, x)
    val = (np.sin(n * np.pi * safe) / (n * np.sin(np.pi * safe))) ** 2
    out = np.where(near_int, 1.0, np.minimum(val, 1.0))
    if out.ndim == 0:
        return float(out)
    return out


def mod_indicator(numerator: int, modulus: int) -> float:
    """1.0 when numerator is a multiple of modulus, else 0.0 (exact integers)."""
    if modulus < 1:
        raise ValueError("modulus must be >= 1")
    return 1.0 if int(numerator) % int(modulus) == 0 else 0.0


def _geometric_sum(k: int, x):
    """sum_{r=0}^{k-1} exp(j*2*pi*r*x), evaluated term by term (exact at integers)."""
    r = np.arange(k)
    return np.exp(2j * np.pi * np.multiply.outer(r, x)).sum(axis=0)


# --- exact complex mean ------------------------------------------------------


def _mean_abs_row(cfg: GridConfig, tau: float, fd: np.ndarray) -> np.ndarray:
    """|E{AF}| for one delay and a vector of Doppler values."""
    n_dim, m_dim, t_sym, df = cfg.n, cfg.m, cfg.t, cfg.delta_f
    fd = np.asarray(fd, dtype=float)
    abs_tau = abs(tau)
    if abs_tau >= t_sym:
        return np.zeros(fd.shape)
    if abs_tau < _TAU_ZERO_RTOL * t_sym:
        return n_dim * m_dim * np.abs(_sinc(np.pi * n_dim * t_sym * fd))
    width = t_sym - abs_tau
    base = (
        n_dim
        * m_dim
        / t_sym
        * width
        * np.abs(_sinc(np.pi * m_dim * df * tau) / _sinc(np.pi * df * tau))
        * np.abs(_sinc(np.pi * width * fd))
    )
    x = t_sym * fd
    frac = x - np.round(x)
    near_int = np.abs(frac) <= _INT_ATOL
    safe = np.where(near_int, 0.25, x)
    ratio = np.abs(_sinc(np.pi * n_dim * safe) / _sinc(np.pi * safe))
    return base * np.where(near_int, 1.0, ratio)


def mean_abs_complex_af(cfg: GridConfig, point) -> float:
    """Magnitude of the data-averaged complex AF at one (tau, fd) point.

    Piecewise closed form with branches at tau = 0, at integer T*fd (where the
    Dirichlet ratio degenerates to magnitude one) and at |tau| >= T (zero).
    """
    tau, fd = float(point[0]), float(point[1])
    return float(_mean_abs_row(cfg, tau, np.asarray([fd]))[0])


# --- exact second moment -----------------------------------------------------


def _second_moment_row(cfg: GridConfig, cm: ConstellationMoments, tau: float,
                       fd: np.ndarray) -> np.ndarray:
    """E{A^2} for one delay and a vector of Doppler values."""
    n_dim, m_dim, t_sym, df = cfg.n, cfg.m, cfg.t, cfg.delta_f
    fd = np.asarray(fd, dtype=float)
    q = fd.size
    active = [d for d in range(-(n_dim - 1), n_dim) if abs(d * t_sym - tau) < t_sym]
    if not active:
        return np.zeros(q)

    e_vals = np.arange(-(m_dim - 1), m_dim)
    # pulse kernel per active slot difference, indexed [e + M - 1, fd]
    kernel = {
        d: rect_pulse_af(d * t_sym - tau, np.add.outer(e_vals * df, fd), t_sym)
        for d in active
    }

    # coherent peak term
    total = (
        (n_dim * m_dim) ** 2
        * rect_pulse_af(-tau, fd, t_sym) ** 2
        * dirichlet_sq(t_sym * fd, n_dim)
        * dirichlet_sq(df * tau, m_dim)
    )

    # incoherent pair term: counts (N-|d|)(M-|e|) over the kernel support
    for d in active:
        total = total + (n_dim - abs(d)) * ((m_dim - np.abs(e_vals))[:, None] * kernel[d] ** 2).sum(axis=0)

    # paired-difference family, weight (E|x|^4 - |E x^2|^2 - 2) / (N M)
    q_w = (cm.e_abs4 - cm.e_x2_abs_sq - 2.0 * cm.e_abs2**2) / (n_dim * m_dim)
    # delay-side sums over pairs with equal slot difference n1+n2 phase
    s_n = {}
    for d in active:
        n0 = max(0, -d)
        s_n[d] = (
            np.exp(1j * np.pi * d * t_sym * fd)
            * np.exp(2j * np.pi * n0 * t_sym * fd)
            * _geometric_sum(n_dim - abs(d), t_sym * fd)
        )
    # Doppler-side sums bucketed by e mod M
    s_m = np.empty(e_vals.size, dtype=complex)
    for i, e in enumerate(e_vals):
        m0 = max(0, -e)
        s_m[i] = (
            np.exp(1j * np.pi * e * df * tau)
            * np.exp(2j * np.pi * m0 * df * tau)
            * _geometric_sum(m_dim - abs(e), df * tau)
        )
    residues = np.mod(e_vals, m_dim)
    bucket = {}
    for d in active:
        v = np.zeros((m_dim, q), dtype=complex)
        weighted = s_m[:, None] * kernel[d]
        np.add.at(v, residues, weighted)
        bucket[d] = v
    part_b = np.zeros(q, dtype=complex)
    for d1 in active:
        for d2 in active:
            if (d1 - d2) % n_dim != 0:
                continue
            part_b += s_n[d1] * np.conj(s_n[d2]) * (bucket[d1] * np.conj(bucket[d2])).sum(axis=0)
    total = total + q_w * part_b.real

    # conjugate-pair family, weight |E{x^2}|^2 (vanishes for square QAM)
    if cm.e_x2_abs_sq > 0.0:
        n1g, n2g = np.meshgrid(np.arange(n_dim), np.arange(n_dim), indexing="ij")
        d_a = (n1g - n2g).ravel()
        nb1 = ((-n2g) % n_dim).ravel()
        nb2 = ((-n1g) % n_dim).ravel()
        db_a = nb1 - nb2
        sn_a = (n1g + n2g).ravel() - nb1 - nb2
        keep = np.isin(d_a, active) & np.isin(db_a, active)
        if keep.any():
            m1g, m2g = np.meshgrid(np.arange(m_dim), np.arange(m_dim), indexing="ij")
            e_a = (m1g - m2g).ravel()
            mb1 = ((-m2g) % m_dim).ravel()
            mb2 = ((-m1g) % m_dim).ravel()
            eb_a = mb1 - mb2
            sm_a = (m1g + m2g).ravel() - mb1 - mb2
            m_phase = np.exp(1j * np.pi * sm_a * df * tau)
            part_a = np.zeros(q, dtype=complex)
            combos = {}
            for dv, dbv, snv in zip(d_a[keep], db_a[keep], sn_a[keep]):
                combos.setdefault((dv, dbv), []).append(snv)
            for (dv, dbv), sn_list in combos.items():
                w_n = np.exp(1j * np.pi * np.asarray(sn_list)[:, None] * t_sym * fd).sum(axis=0)
                pm = (m_phase[:, None] * kernel[dv][e_a + m_dim - 1, :] * kernel[dbv][eb_a + m_dim - 1, :]).sum(axis=0)
                part_a += w_n * pm
            total = total + cm.e_x2_abs_sq * part_a.real

    return np.maximum(total, 0.0)


def second_moment_af(cfg: GridConfig, cm: ConstellationMoments, point) -> float:
    """E{A^2(tau, fd)}: coherent peak + incoherent pair sum + data-kurtosis and
    conjugate-pair corrections, enumerated only over index tuples the modular
    constraints allow. Clamped at zero against roundoff."""
    tau, fd = float(point[0]), float(point[1])
    return float(_second_moment_row(cfg, cm, tau, np.asarray([fd]))[0])


# --- time-frequency symbol moments -------------------------------------------


def tf_pair_moment(cfg: GridConfig, n1: int, m1: int, n2: int, m2: int) -> float:
    """E{X[n1,m1] X*[n2,m2]} for unit-energy i.i.d. data: N*M at equal indices, else 0."""
    _check_indices(cfg, (n1, n2), (m1, m2))
    return cfg.n * mod_indicator(n1 - n2, cfg.n) * cfg.m * mod_indicator(m1 - m2, cfg.m)


def _check_indices(cfg: GridConfig, n_indices, m_indices):
    for v in n_indices:
        if not 0 <= v < cfg.n:
            raise IndexOutOfRange(f"slot index {v} outside [0, {cfg.n})")
    for v in m_indices:
        if not 0 <= v < cfg.m:
            raise IndexOutOfRange(f"subcarrier index {v} outside [0, {cfg.m})")


def tf_fourth_moment(cfg: GridConfig, cm: ConstellationMoments,
                     n1: int, m1: int, n2: int, m2: int,
                     nb1: int, mb1: int, nb2: int, mb2: int) -> complex:
    """E{X[n1,m1] X*[n2,m2] X*[nb1,mb1] X[nb2,mb2]} for i.i.d. symbols.

    Closed form driven by divisibility indicators of the index combinations;
    only E{|x|^4} and |E{x^2}|^2 depend on the constellation.
    """
    _check_indices(cfg, (n1, n2, nb1, nb2), (m1, m2, mb1, mb2))
    n_dim, m_dim = cfg.n, cfg.m
    c2n = lambda v: mod_indicator(v, n_dim)
    c2m = lambda v: mod_indicator(v, m_dim)
    dn = n1 - n2 - nb1 + nb2
    dm = m1 - m2 - mb1 + mb2
    joint = n_dim * c2n(dn) * m_dim * c2m(dm)
    val = cm.e_abs4 * joint
    val += cm.e_abs2**2 * (
        -2.0 * joint
        + n_dim * c2n(n1 - n2) * n_dim * c2n(nb1 - nb2) * m_dim * c2m(m1 - m2) * m_dim * c2m(mb1 - mb2)
        + n_dim * c2n(n1 - nb1) * n_dim * c2n(n2 - nb2) * m_dim * c2m(m1 - mb1) * m_dim * c2m(m2 - mb2)
    )
    val += cm.e_x2_abs_sq * (
        -joint
        + n_dim * c2n(n1 + nb2) * n_dim * c2n(n2 + nb1) * m_dim * c2m(m1 + mb2) * m_dim * c2m(m2 + mb1)
    )
    return complex(val)


# --- Rice approximation --------------------------------------------------------


def laguerre_half(x):
    """Laguerre function of order 1/2 for x <= 0.

    L_{1/2}(x) = e^{x/2} [(1 - x) I0(-x/2) - x I1(-x/2)], evaluated with
    exponentially scaled modified Bessel functions so the product never
    overflows. Vectorized over x.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x > 0.0):
        raise DomainError("laguerre_half is defined here for x <= 0 only")
    z = -0.5 * x
    out = (1.0 - x) * ive(0, z) - x * ive(1, z)
    if out.ndim == 0:
        return float(out)
    return out


def rice_moments(rp: RiceParams) -> tuple[float, float]:
    """Mean and variance of the Rice magnitude model.

    mean = sigma*sqrt(pi/2)*L_{1/2}(-nu^2 / (2 sigma^2)); the variance is the
    second moment nu^2 + 2 sigma^2 minus the squared mean. A zero sigma is the
    degenerate point mass at nu.
    """
    if rp.sigma == 0.0:
        return rp.nu, 0.0
    arg = -(rp.nu**2) / (2.0 * rp.sigma**2)
    mean = rp.sigma * np.sqrt(np.pi / 2.0) * laguerre_half(arg)
    var = (rp.nu**2 + 2.0 * rp.sigma**2) - mean**2
    return float(mean), float(var)


def jensen_bounds(cfg: GridConfig, cm: ConstellationMoments, point) -> tuple[float, float, float]:
    """Lower/upper bounds on E{A} and the upper bound 2*sigma^2 on Var{A}.

    mean_lower = |E{AF}|, mean_upper = sqrt(E{A^2}); sigma^2 is half their
    squared gap, clamped at zero against roundoff.
    """
    lo = mean_abs_complex_af(cfg, point)
    ea2 = second_moment_af(cfg, cm, point)
    up = float(np.sqrt(ea2))
    sigma_sq = max((ea2 - lo**2) / 2.0, 0.0)
    return lo, up, 2.0 * sigma_sq


def moment_surfaces(cfg: GridConfig, cm: ConstellationMoments, axes: AfAxes) -> MomentSurfaces:
    """Assemble every closed-form statistic of this module on a grid."""
    tau = axes.tau_values
    fd = axes.fd_values
    shape = (tau.size, fd.size)
    mean_abs = np.empty(shape)
    second = np.empty(shape)
    for i, tv in enumerate(tau):
        mean_abs[i] = _mean_abs_row(cfg, float(tv), fd)
        second[i] = _second_moment_row(cfg, cm, float(tv), fd)
    sigma_sq = np.maximum((second - mean_abs**2) / 2.0, 0.0)
    rice_mean = np.where(
        sigma_sq > 0.0,
        np.sqrt(np.pi * np.maximum(sigma_sq, 1e-300) / 2.0)
        * laguerre_half(-(mean_abs**2) / (2.0 * np.maximum(sigma_sq, 1e-300))),
        mean_abs,
    )
    rice_var = second - rice_mean**2
    return MomentSurfaces(
        axes=axes,
        mean_abs_complex=mean_abs,
        second_moment=second,
        rice_mean=rice_mean,
        rice_var=rice_var,
        mean_lower=mean_abs,
        mean_upper=np.sqrt(second),
        var_upper=2.0 * sigma_sq,
    )
