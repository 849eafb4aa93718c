"""Normalized QAM constellations, their data moments, and i.i.d. symbol draws."""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidOrder

SUPPORTED_ORDERS = (4, 8, 16, 32, 64)


@dataclass(frozen=True)
class Constellation:
    """A zero-mean symbol set normalized to unit average energy."""

    order: int
    points: np.ndarray


@dataclass(frozen=True)
class ConstellationMoments:
    """Data moments that drive the second-moment formula of the ambiguity surface.

    e_abs2 is E{|x|^2} (1 by normalization), e_abs4 is E{|x|^4} and
    e_x2_abs_sq is |E{x^2}|^2.
    """

    e_abs2: float
    e_abs4: float
    e_x2_abs_sq: float


def _raw_points(order: int) -> np.ndarray:
    if order == 8:
        # rectangular 4x2 grid
        re = np.array([-3.0, -1.0, 1.0, 3.0])
        im = np.array([-1.0, 1.0])
    elif order == 32:
        # cross constellation: 6x6 grid minus the four corner points
        levels = np.array([-5.0, -3.0, -1.0, 1.0, 3.0, 5.0])
        re, im = np.meshgrid(levels, levels, indexing="ij")
        keep = ~((np.abs(re) == 5.0) & (np.abs(im) == 5.0))
        return (re + 1j * im)[keep]
    else:
        side = round(np.sqrt(order))
        levels = np.arange(-(side - 1), side, 2, dtype=float)
        re = levels
        im = levels
    re_g, im_g = np.meshgrid(re, im, indexing="ij")
    return (re_g + 1j * im_g).ravel()


def make_qam(order: int) -> Constellation:
    """Build a normalized M'-QAM constellation.

    Square grids for 4/16/64, a rectangular 4x2 grid for 8 and a cross
    constellation for 32. Points are scaled so the average energy is exactly 1.
    """
    if order not in SUPPORTED_ORDERS:
        raise InvalidOrder(f"unsupported QAM order {order}; expected one of {SUPPORTED_ORDERS}")
    pts = _raw_points(order)
    pts = pts / np.sqrt(np.mean(np.abs(pts) ** 2))
    pts.flags.writeable = False
    return Constellation(order=order, points=pts)


def moments(c: Constellation) -> ConstellationMoments:
    """Exact arithmetic averages of |x|^2, |x|^4 and |E{x^2}|^2 over the point set."""
    p = c.points
    return ConstellationMoments(
        e_abs2=float(np.mean(np.abs(p) ** 2)),
        e_abs4=float(np.mean(np.abs(p) ** 4)),
        e_x2_abs_sq=float(np.abs(np.mean(p**2)) ** 2),
    )


def draw_iid(c: Constellation, n: int, m: int, seed: int) -> np.ndarray:
    """Draw an n-by-m matrix of i.i.d. uniform symbols from the constellation.

    Counter-based: entry (k, l) is produced by the Philox word at counter
    position k*m + l under a key derived from `seed`, so the output never
    depends on evaluation order. All supported orders are powers of two,
    which makes the bit-masked index draw exactly uniform.
    """
    if n < 1 or m < 1:
        raise ValueError("grid dimensions must be >= 1")
    bg = np.random.Philox(np.random.SeedSequence(seed))
    raw = bg.random_raw(n * m)
    idx = raw & np.uint64(c.order - 1)
    return c.points[idx.astype(np.intp)].reshape(n, m)
