"""Global radar-accuracy metrics (PSLR, ISLR) of a sampled ambiguity surface."""

from dataclasses import dataclass

import numpy as np

from .afcore import AfGrid, DelayDopplerPoint
from .errors import NoSidelobeSamples, ZeroPeak

_NEG_INF = float("-inf")


@dataclass(frozen=True)
class MainlobeRegion:
    """Closed rectangle |tau| <= tau_half_width and |fd| <= fd_half_width."""

    tau_half_width: float
    fd_half_width: float

    def __post_init__(self):
        if self.tau_half_width <= 0.0 or self.fd_half_width <= 0.0:
            raise ValueError("mainlobe half-widths must be > 0")


@dataclass(frozen=True)
class SidelobeReport:
    pslr_db: float
    islr_db: float
    peak_location: DelayDopplerPoint
    mainlobe_energy: float
    total_energy: float
    doppler_edge_energy: float


def _origin(grid: AfGrid) -> tuple[int, int]:
    tau = grid.axes.tau_values
    fd = grid.axes.fd_values
    i = int(np.argmin(np.abs(tau)))
    j = int(np.argmin(np.abs(fd)))
    tol_t = 1e-9 * max(1.0, np.max(np.abs(tau)))
    tol_f = 1e-9 * max(1.0, np.max(np.abs(fd)))
    if abs(tau[i]) > tol_t or abs(fd[j]) > tol_f:
        raise ValueError("grid does not contain the point (0, 0)")
    return i, j


def pslr(grid: AfGrid, region: MainlobeRegion) -> tuple[float, DelayDopplerPoint]:
    """Peak-to-sidelobe ratio in dB and the location of the largest sidelobe.

    The sidelobe search runs over grid samples with |tau| >= tau_half_width or
    |fd| >= fd_half_width; ties go to the smallest (|tau|, then |fd|). Returns
    -inf when every sample outside the region is zero.
    """
    i0, j0 = _origin(grid)
    mag = np.abs(grid.values)
    peak = mag[i0, j0]
    if peak == 0.0:
        raise ZeroPeak("ambiguity surface is zero at (0, 0)")
    tau = grid.axes.tau_values
    fd = grid.axes.fd_values
    outside = (np.abs(tau)[:, None] >= region.tau_half_width) | (
        np.abs(fd)[None, :] >= region.fd_half_width
    )
    if not outside.any():
        raise NoSidelobeSamples("no grid samples outside the mainlobe region")
    masked = np.where(outside, mag, -1.0)
    vmax = masked.max()
    cand = np.argwhere(masked == vmax)
    order = np.lexsort((np.abs(fd)[cand[:, 1]], np.abs(tau)[cand[:, 0]]))
    it, jf = cand[order[0]]
    loc = DelayDopplerPoint(float(tau[it]), float(fd[jf]))
    if vmax <= 0.0:
        return _NEG_INF, loc
    return float(20.0 * np.log10(vmax / peak)), loc


def _trapz2d(z: np.ndarray, tau: np.ndarray, fd: np.ndarray) -> float:
    return float(np.trapezoid(np.trapezoid(z, fd, axis=1), tau))


def islr(grid: AfGrid, region: MainlobeRegion) -> float:
    """Integrated sidelobe ratio 10*log10(total/mainlobe - 1) in dB.

    Both energies are 2-D trapezoid integrals of |AF|^2: the total over the
    whole grid, the mainlobe over the closed region rectangle. Returns -inf
    when no energy lies outside the region.
    """
    tau = grid.axes.tau_values
    fd = grid.axes.fd_values
    if tau[0] > -region.tau_half_width or tau[-1] < region.tau_half_width or (
        fd[0] > -region.fd_half_width or fd[-1] < region.fd_half_width
    ):
        raise ValueError("grid does not span the mainlobe region")
    sq = np.abs(grid.values) ** 2
    total = _trapz2d(sq, tau, fd)
    sel_t = np.abs(tau) <= region.tau_half_width
    sel_f = np.abs(fd) <= region.fd_half_width
    main = _trapz2d(sq[np.ix_(sel_t, sel_f)], tau[sel_t], fd[sel_f])
    if total <= main:
        return _NEG_INF
    return float(10.0 * np.log10(total / main - 1.0))


def sidelobe_report(grid: AfGrid, region: MainlobeRegion) -> SidelobeReport:
    """PSLR/ISLR plus the energies behind them and the Doppler-truncation band.

    doppler_edge_energy is the |AF|^2 energy in the outermost Doppler strips,
    a transparency measure for how much the finite Doppler extent truncates
    the total-energy integral.
    """
    tau = grid.axes.tau_values
    fd = grid.axes.fd_values
    sq = np.abs(grid.values) ** 2
    pslr_db, loc = pslr(grid, region)
    islr_db = islr(grid, region)
    total = _trapz2d(sq, tau, fd)
    sel_t = np.abs(tau) <= region.tau_half_width
    sel_f = np.abs(fd) <= region.fd_half_width
    main = _trapz2d(sq[np.ix_(sel_t, sel_f)], tau[sel_t], fd[sel_f])
    edge = _trapz2d(sq[:, :2], tau, fd[:2]) + _trapz2d(sq[:, -2:], tau, fd[-2:])
    return SidelobeReport(
        pslr_db=pslr_db,
        islr_db=islr_db,
        peak_location=loc,
        mainlobe_energy=main,
        total_energy=total,
        doppler_edge_energy=edge,
    )
