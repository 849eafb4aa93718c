"""Seeded Monte Carlo harness, paper-scale experiment drivers, and result emission."""

import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, is_dataclass

import numpy as np

from .afcore import AfAxes, AfGrid, AfGridEvaluator, default_axes
from .afstats import MomentSurfaces, moment_surfaces
from .constellation import draw_iid, make_qam, moments
from .errors import EmptyMask
from .metrics import MainlobeRegion, islr, pslr
from .waveform import GridConfig, dd_to_tf, ofdm_map

WAVEFORM_KINDS = ("otfs", "ofdm")


@dataclass(frozen=True)
class ExperimentConfig:
    cfg: GridConfig
    qam_order: int
    realizations: int
    seed: int
    axes: AfAxes
    region: MainlobeRegion
    waveform_kind: str = "otfs"

    def __post_init__(self):
        if self.realizations < 1:
            raise ValueError("realizations must be >= 1")
        if self.waveform_kind not in WAVEFORM_KINDS:
            raise ValueError(f"waveform_kind must be one of {WAVEFORM_KINDS}")


@dataclass(frozen=True)
class McMomentEstimate:
    """Streaming per-point mean/variance of |AF| and mean of the complex AF."""

    axes: AfAxes
    mean_mag: np.ndarray
    var_mag: np.ndarray
    mean_complex: np.ndarray
    realizations: int


@dataclass(frozen=True)
class RelErrorRow:
    """One constellation's grid-averaged relative errors vs the simulation."""

    qam_order: int
    mean_approx_err: float
    mean_bound_err: float
    var_approx_err: float
    var_bound_err: float


def realization_seed(seed: int, *indices: int) -> int:
    """Deterministic 64-bit sub-seed for one realization (or any index tuple)."""
    ss = np.random.SeedSequence((int(seed), *[int(i) for i in indices]))
    return int(ss.generate_state(1, np.uint64)[0])


def _frame(grid_dd: np.ndarray, cfg: GridConfig, kind: str) -> np.ndarray:
    return dd_to_tf(grid_dd, cfg) if kind == "otfs" else ofdm_map(grid_dd)


def run_mc_moments(ec: ExperimentConfig) -> McMomentEstimate:
    """Monte Carlo mean/variance surfaces over i.i.d. data realizations.

    Realization r draws its symbols under a sub-seed derived from (seed, r),
    so the estimate is a pure function of the config regardless of execution
    order. Magnitude statistics use a streaming (Welford) accumulator;
    variance is the population variance over the realizations.
    """
    const = make_qam(ec.qam_order)
    ev = AfGridEvaluator(ec.cfg, ec.axes)
    shape = (ec.axes.tau_values.size, ec.axes.fd_values.size)
    mean_mag = np.zeros(shape)
    m2 = np.zeros(shape)
    mean_complex = np.zeros(shape, dtype=complex)
    for r in range(ec.realizations):
        x = draw_iid(const, ec.cfg.n, ec.cfg.m, realization_seed(ec.seed, r))
        vals = ev.evaluate(_frame(x, ec.cfg, ec.waveform_kind))
        mag = np.abs(vals)
        k = r + 1
        delta = mag - mean_mag
        mean_mag += delta / k
        m2 += delta * (mag - mean_mag)
        mean_complex += (vals - mean_complex) / k
    return McMomentEstimate(
        axes=ec.axes,
        mean_mag=mean_mag,
        var_mag=m2 / ec.realizations,
        mean_complex=mean_complex,
        realizations=ec.realizations,
    )


def avg_relative_error(reference: np.ndarray, estimate: np.ndarray, threshold: float | None = None) -> float:
    """Mean of |estimate - reference| / |reference| where |reference| > threshold.

    The default threshold masks points below 1e-3 of the reference maximum,
    where the ratio would measure nothing but noise.
    """
    reference = np.asarray(reference, dtype=float)
    estimate = np.asarray(estimate, dtype=float)
    if reference.shape != estimate.shape:
        raise ValueError("reference and estimate shapes differ")
    if threshold is None:
        threshold = 1e-3 * float(np.max(np.abs(reference)))
    mask = np.abs(reference) > threshold
    if not mask.any():
        raise EmptyMask("no reference values exceed the masking threshold")
    return float(np.mean(np.abs(estimate[mask] - reference[mask]) / np.abs(reference[mask])))


def relative_error_row(order: int, mc: McMomentEstimate, surf: MomentSurfaces) -> RelErrorRow:
    """Grid-averaged relative errors of the Rice approximations and Jensen bounds."""
    return RelErrorRow(
        qam_order=order,
        mean_approx_err=avg_relative_error(mc.mean_mag, surf.rice_mean),
        mean_bound_err=avg_relative_error(mc.mean_mag, surf.mean_upper),
        var_approx_err=avg_relative_error(mc.var_mag, surf.rice_var),
        var_bound_err=avg_relative_error(mc.var_mag, surf.var_upper),
    )


def reproduce_table1(orders, realizations: int = 1000, seed: int = 0,
                     cfg: GridConfig | None = None, axes: AfAxes | None = None) -> list[RelErrorRow]:
    """Accuracy-of-approximation table: one row of four relative errors per order.

    Defaults to the N=4, M=8 frame with |tau| <= NT, |fd| <= 10 delta_f.
    """
    cfg = cfg or GridConfig(4, 8)
    axes = axes or default_axes(cfg)
    region = MainlobeRegion(cfg.t, cfg.delta_f)
    rows = []
    for order in orders:
        ec = ExperimentConfig(cfg, order, realizations, realization_seed(seed, order), axes, region)
        mc = run_mc_moments(ec)
        surf = moment_surfaces(cfg, moments(make_qam(order)), axes)
        rows.append(relative_error_row(order, mc, surf))
    return rows


def sidelobe_distribution(ec: ExperimentConfig) -> list[tuple[float, float]]:
    """Per-realization (PSLR, ISLR) pairs, in realization order."""
    const = make_qam(ec.qam_order)
    ev = AfGridEvaluator(ec.cfg, ec.axes)
    out = []
    for r in range(ec.realizations):
        x = draw_iid(const, ec.cfg.n, ec.cfg.m, realization_seed(ec.seed, r))
        grid = AfGrid(ec.axes, ev.evaluate(_frame(x, ec.cfg, ec.waveform_kind)))
        p, _ = pslr(grid, ec.region)
        out.append((p, islr(grid, ec.region)))
    return out


def compare_otfs_ofdm(n: int, m_values, realizations: int = 1000, seed: int = 0,
                      qam_order: int = 4, t: float = 1.0,
                      tau_samples_per_t: int = 16, fd_samples_per_df: int = 16,
                      fd_max: float = 10.0) -> list[dict]:
    """Mean PSLR/ISLR of OTFS vs OFDM over a sweep of subcarrier counts.

    Both waveforms consume the identical symbol draw in each realization, so
    the comparison is paired.
    """
    if not m_values:
        raise ValueError("m_values must be non-empty")
    const = make_qam(qam_order)
    rows = []
    for m in m_values:
        cfg = GridConfig(n, m, t)
        axes = default_axes(cfg, tau_samples_per_t, fd_samples_per_df, fd_max)
        region = MainlobeRegion(cfg.t, cfg.delta_f)
        ev = AfGridEvaluator(cfg, axes)
        sums = {kind: np.zeros(2) for kind in WAVEFORM_KINDS}
        for r in range(realizations):
            x = draw_iid(const, n, m, realization_seed(seed, m, r))
            for kind in WAVEFORM_KINDS:
                grid = AfGrid(axes, ev.evaluate(_frame(x, cfg, kind)))
                p, _ = pslr(grid, region)
                sums[kind] += (p, islr(grid, region))
        for kind in WAVEFORM_KINDS:
            mean_p, mean_i = sums[kind] / realizations
            rows.append({
                "waveform": kind,
                "m": m,
                "mean_pslr_db": float(mean_p),
                "mean_islr_db": float(mean_i),
            })
    return rows


# --- result emission ----------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _grid_rows(axes: AfAxes, columns: dict[str, np.ndarray]):
    header = ["tau", "fd", *columns.keys()]
    rows = []
    for i, tv in enumerate(axes.tau_values):
        for j, fv in enumerate(axes.fd_values):  # fd is the inner loop
            rows.append([float(tv), float(fv)] + [float(c[i, j]) for c in columns.values()])
    return header, rows


def _tabular(results):
    """(header, rows) for any supported result object."""
    if isinstance(results, AfGrid):
        return _grid_rows(results.axes, {
            "re": results.values.real,
            "im": results.values.imag,
            "mag": np.abs(results.values),
        })
    if isinstance(results, MomentSurfaces):
        return _grid_rows(results.axes, {
            "mean_abs_complex": results.mean_abs_complex,
            "second_moment": results.second_moment,
            "rice_mean": results.rice_mean,
            "rice_var": results.rice_var,
            "mean_lower": results.mean_lower,
            "mean_upper": results.mean_upper,
            "var_upper": results.var_upper,
        })
    if isinstance(results, McMomentEstimate):
        return _grid_rows(results.axes, {
            "mean_mag": results.mean_mag,
            "var_mag": results.var_mag,
            "mean_complex_re": results.mean_complex.real,
            "mean_complex_im": results.mean_complex.imag,
        })
    if isinstance(results, list) and results and isinstance(results[0], RelErrorRow):
        header = ["qam_order", "mean_approx_err", "mean_bound_err", "var_approx_err", "var_bound_err"]
        return header, [[r.qam_order, r.mean_approx_err, r.mean_bound_err,
                         r.var_approx_err, r.var_bound_err] for r in results]
    if isinstance(results, list) and results and isinstance(results[0], dict):
        header = list(results[0].keys())
        return header, [[r[k] for k in header] for r in results]
    if isinstance(results, list):
        # realization-indexed (pslr, islr) pairs
        header = ["realization", "pslr_db", "islr_db"]
        return header, [[i, p, q] for i, (p, q) in enumerate(results)]
    raise TypeError(f"cannot tabulate results of type {type(results)!r}")


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if is_dataclass(obj) and not isinstance(obj, type):
        return {k: _jsonable(v) for k, v in asdict(obj).items()}
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def emit(results, path: str, format: str = "csv", config: dict | None = None):
    """Write results to path ('-' for stdout) as CSV rows or a JSON document.

    CSV holds one record per grid point (Doppler as the inner loop) or one per
    report row, with floats at 17 significant digits so values round-trip
    exactly. JSON wraps everything in {"config": ..., "results": ...}.
    """
    if format not in ("csv", "json"):
        raise ValueError("format must be 'csv' or 'json'")
    if format == "csv":
        header, rows = _tabular(results)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
        text = buf.getvalue()
        if config:
            comment = " ".join(f"{k}={v}" for k, v in config.items())
            text = f"# {comment}\n{text}"
    else:
        if isinstance(results, np.ndarray):
            body = results.tolist()
        elif isinstance(results, complex):
            body = _jsonable(results)
        else:
            try:
                header, rows = _tabular(results)
                body = {"columns": header, "rows": _jsonable(rows)}
            except TypeError:
                body = _jsonable(results)
        text = json.dumps({"config": _jsonable(config or {}), "results": body}, indent=2) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
