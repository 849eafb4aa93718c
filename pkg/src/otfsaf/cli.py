"""Command-line interface: grids, closed-form surfaces, Monte Carlo runs,
sidelobe metrics, waveform comparison, and self-validation.

Exit codes: 0 success, 1 validation failure, 2 bad arguments.
"""

import sys

import click
import numpy as np

from .afcore import AfAxes, AfGrid, AfGridEvaluator, af_grid, complex_af, default_axes, matched_filter_af
from .afstats import mean_abs_complex_af, moment_surfaces, second_moment_af
from .constellation import SUPPORTED_ORDERS, draw_iid, make_qam, moments
from .experiments import (
    ExperimentConfig,
    compare_otfs_ofdm,
    emit,
    realization_seed,
    reproduce_table1,
    run_mc_moments,
    sidelobe_distribution,
)
from .metrics import MainlobeRegion
from .waveform import GridConfig, dd_to_tf, ofdm_map, synthesize

_QAM = click.Choice([str(o) for o in SUPPORTED_ORDERS])


def _grid_options(fn):
    fn = click.option("--n", default=4, show_default=True, help="Doppler bins / time slots N")(fn)
    fn = click.option("--m", default=8, show_default=True, help="delay bins / subcarriers M")(fn)
    fn = click.option("--t", default=1.0, show_default=True, help="symbol duration T in seconds")(fn)
    fn = click.option("--qam", type=_QAM, default="4", show_default=True, help="QAM order")(fn)
    fn = click.option("--seed", default=0, show_default=True, help="base RNG seed")(fn)
    fn = click.option("--tau-samples-per-t", default=16, show_default=True)(fn)
    fn = click.option("--fd-samples-per-df", default=16, show_default=True)(fn)
    fn = click.option("--fd-max", default=10.0, show_default=True,
                      help="Doppler extent in units of delta_f")(fn)
    return fn


def _out_options(fn):
    fn = click.option("--out", default="-", show_default=True, help="output path ('-' for stdout)")(fn)
    fn = click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
                      show_default=True)(fn)
    return fn


def _setup(n, m, t, tau_samples_per_t, fd_samples_per_df, fd_max):
    cfg = GridConfig(n, m, t)
    axes = default_axes(cfg, tau_samples_per_t, fd_samples_per_df, fd_max)
    region = MainlobeRegion(cfg.t, cfg.delta_f)
    return cfg, axes, region


def _config_echo(cfg, qam, seed, **extra):
    base = {"n": cfg.n, "m": cfg.m, "t": cfg.t, "delta_f": cfg.delta_f,
            "qam_order": int(qam), "seed": seed}
    base.update(extra)
    return base


@click.group()
@click.version_option()
def cli():
    """Ambiguity-function analysis of data-modulated OTFS/OFDM frames."""


@cli.command()
@_grid_options
@_out_options
@click.option("--waveform", type=click.Choice(["otfs", "ofdm"]), default="otfs", show_default=True)
def af(n, m, t, qam, seed, tau_samples_per_t, fd_samples_per_df, fd_max, out, fmt, waveform):
    """Complex AF grid of one random data realization."""
    cfg, axes, _ = _setup(n, m, t, tau_samples_per_t, fd_samples_per_df, fd_max)
    const = make_qam(int(qam))
    x = draw_iid(const, cfg.n, cfg.m, seed)
    x_tf = dd_to_tf(x, cfg) if waveform == "otfs" else ofdm_map(x)
    grid = af_grid(x_tf, cfg, axes)
    emit(grid, out, fmt, config=_config_echo(cfg, qam, seed, waveform=waveform))


@cli.command(name="moments")
@_grid_options
@_out_options
def moments_cmd(n, m, t, qam, seed, tau_samples_per_t, fd_samples_per_df, fd_max, out, fmt):
    """Closed-form moment and Rice-approximation surfaces."""
    cfg, axes, _ = _setup(n, m, t, tau_samples_per_t, fd_samples_per_df, fd_max)
    surf = moment_surfaces(cfg, moments(make_qam(int(qam))), axes)
    emit(surf, out, fmt, config=_config_echo(cfg, qam, seed))


@cli.command()
@_grid_options
@_out_options
@click.option("--realizations", default=1000, show_default=True)
@click.option("--waveform", type=click.Choice(["otfs", "ofdm"]), default="otfs", show_default=True)
def montecarlo(n, m, t, qam, seed, tau_samples_per_t, fd_samples_per_df, fd_max,
               out, fmt, realizations, waveform):
    """Monte Carlo mean/variance surfaces of |AF|."""
    cfg, axes, region = _setup(n, m, t, tau_samples_per_t, fd_samples_per_df, fd_max)
    ec = ExperimentConfig(cfg, int(qam), realizations, seed, axes, region, waveform)
    emit(run_mc_moments(ec), out, fmt,
         config=_config_echo(cfg, qam, seed, realizations=realizations, waveform=waveform))


@cli.command()
@_grid_options
@_out_options
@click.option("--realizations", default=1000, show_default=True)
@click.option("--waveform", type=click.Choice(["otfs", "ofdm"]), default="otfs", show_default=True)
def metrics(n, m, t, qam, seed, tau_samples_per_t, fd_samples_per_df, fd_max,
            out, fmt, realizations, waveform):
    """Per-realization PSLR/ISLR distribution."""
    cfg, axes, region = _setup(n, m, t, tau_samples_per_t, fd_samples_per_df, fd_max)
    ec = ExperimentConfig(cfg, int(qam), realizations, seed, axes, region, waveform)
    emit(sidelobe_distribution(ec), out, fmt,
         config=_config_echo(cfg, qam, seed, realizations=realizations, waveform=waveform))


@cli.command()
@_out_options
@click.option("--n", default=4, show_default=True)
@click.option("--m-values", default="2,4,8,16", show_default=True,
              help="comma-separated subcarrier counts")
@click.option("--t", default=1.0, show_default=True)
@click.option("--qam", type=_QAM, default="4", show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--realizations", default=1000, show_default=True)
@click.option("--tau-samples-per-t", default=16, show_default=True)
@click.option("--fd-samples-per-df", default=16, show_default=True)
@click.option("--fd-max", default=10.0, show_default=True)
def compare(out, fmt, n, m_values, t, qam, seed, realizations,
            tau_samples_per_t, fd_samples_per_df, fd_max):
    """Paired OTFS-vs-OFDM mean PSLR/ISLR sweep over M."""
    try:
        m_list = [int(v) for v in m_values.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter("--m-values must be comma-separated integers")
    rows = compare_otfs_ofdm(n, m_list, realizations, seed, qam_order=int(qam), t=t,
                             tau_samples_per_t=tau_samples_per_t,
                             fd_samples_per_df=fd_samples_per_df, fd_max=fd_max)
    emit(rows, out, fmt, config={"n": n, "m_values": m_list, "t": t, "qam_order": int(qam),
                                 "seed": seed, "realizations": realizations})


@cli.command()
@_out_options
@click.option("--orders", default="4,8,16,32,64", show_default=True)
@click.option("--realizations", default=1000, show_default=True)
@click.option("--seed", default=0, show_default=True)
def table1(out, fmt, orders, realizations, seed):
    """Relative-error table of the approximations vs Monte Carlo."""
    try:
        order_list = [int(v) for v in orders.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter("--orders must be comma-separated integers")
    bad = [o for o in order_list if o not in SUPPORTED_ORDERS]
    if bad:
        raise click.BadParameter(f"unsupported QAM orders: {bad}")
    rows = reproduce_table1(order_list, realizations, seed)
    emit(rows, out, fmt, config={"n": 4, "m": 8, "orders": order_list,
                                 "realizations": realizations, "seed": seed})


@cli.command()
@click.option("--seed", default=0, show_default=True)
def validate(seed):
    """Run the built-in oracles (enumeration and matched filter) and report."""
    import itertools

    failures = 0

    # exact enumeration at N=M=2 over all 256 4-QAM matrices
    cfg = GridConfig(2, 2)
    const = make_qam(4)
    cm = moments(const)
    axes = AfAxes(np.linspace(-2 * cfg.t, 2 * cfg.t, 11),
                  np.linspace(-2 * cfg.delta_f, 2 * cfg.delta_f, 11))
    ev = AfGridEvaluator(cfg, axes)
    mean_acc = np.zeros((11, 11), dtype=complex)
    sq_acc = np.zeros((11, 11))
    for idx in itertools.product(range(4), repeat=4):
        x_tf = dd_to_tf(const.points[np.asarray(idx)].reshape(2, 2), cfg)
        vals = ev.evaluate(x_tf)
        mean_acc += vals
        sq_acc += np.abs(vals) ** 2
    mean_acc /= 256
    sq_acc /= 256
    mean_cf = np.array([[mean_abs_complex_af(cfg, (tv, fv)) for fv in axes.fd_values]
                        for tv in axes.tau_values])
    sq_cf = np.array([[second_moment_af(cfg, cm, (tv, fv)) for fv in axes.fd_values]
                      for tv in axes.tau_values])
    scale = cfg.n * cfg.m
    ok = np.allclose(np.abs(mean_acc), mean_cf, rtol=1e-9, atol=1e-9 * scale) and np.allclose(
        sq_acc, sq_cf, rtol=1e-9, atol=1e-9 * scale**2)
    click.echo(f"enumeration oracle (N=M=2, 256 sequences): {'PASS' if ok else 'FAIL'}")
    failures += 0 if ok else 1

    # matched-filter oracle at N=M=4
    cfg4 = GridConfig(4, 4)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for r in range(3):
        x = draw_iid(const, 4, 4, realization_seed(seed, r))
        x_tf = dd_to_tf(x, cfg4)
        s = synthesize(x_tf, cfg4, 64)
        h = 1.0 / s.sample_rate
        for _ in range(10):
            tau = h * int(rng.integers(-4 * 64 * 4 + 1, 4 * 64 * 4))
            fd = float(rng.uniform(-10, 10))
            cf = abs(complex_af(x_tf, cfg4, (tau, fd)))
            if cf <= 0.01:
                continue
            worst = max(worst, abs(matched_filter_af(s, (tau, fd)) - cf) / cf)
    ok = worst <= 1e-3
    click.echo(f"matched-filter oracle (N=M=4, worst rel err {worst:.2e}): {'PASS' if ok else 'FAIL'}")
    failures += 0 if ok else 1

    if failures:
        sys.exit(1)


def main():
    cli()


if __name__ == "__main__":
    main()
