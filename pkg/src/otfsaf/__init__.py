"""Ambiguity-function analysis of data-modulated OTFS and OFDM waveforms.

Core pipeline: draw QAM data on the delay-Doppler grid, spread it to the
time-frequency grid (or map it directly for OFDM), evaluate the complex
ambiguity function in closed form, and compare against its exact data-averaged
statistics, Rice approximation, and matched-filter quadrature.
"""

from .afcore import (
    AfAxes,
    AfGrid,
    AfGridEvaluator,
    DelayDopplerPoint,
    af_grid,
    complex_af,
    default_axes,
    matched_filter_af,
    rect_pulse_af,
)
from .afstats import (
    MomentSurfaces,
    RiceParams,
    dirichlet_sq,
    jensen_bounds,
    laguerre_half,
    mean_abs_complex_af,
    mod_indicator,
    moment_surfaces,
    rice_moments,
    second_moment_af,
    tf_fourth_moment,
    tf_pair_moment,
)
from .constellation import (
    Constellation,
    ConstellationMoments,
    SUPPORTED_ORDERS,
    draw_iid,
    make_qam,
    moments,
)
from .experiments import (
    ExperimentConfig,
    McMomentEstimate,
    RelErrorRow,
    avg_relative_error,
    compare_otfs_ofdm,
    emit,
    realization_seed,
    reproduce_table1,
    run_mc_moments,
    sidelobe_distribution,
)
from .metrics import MainlobeRegion, SidelobeReport, islr, pslr, sidelobe_report
from .waveform import GridConfig, SampledSignal, dd_to_tf, ofdm_map, signal_energy, synthesize, tf_to_dd

__version__ = "0.1.0"

__all__ = [
    "AfAxes",
    "AfGrid",
    "AfGridEvaluator",
    "Constellation",
    "ConstellationMoments",
    "DelayDopplerPoint",
    "ExperimentConfig",
    "GridConfig",
    "MainlobeRegion",
    "McMomentEstimate",
    "MomentSurfaces",
    "RelErrorRow",
    "RiceParams",
    "SampledSignal",
    "SidelobeReport",
    "SUPPORTED_ORDERS",
    "af_grid",
    "avg_relative_error",
    "compare_otfs_ofdm",
    "complex_af",
    "dd_to_tf",
    "default_axes",
    "dirichlet_sq",
    "draw_iid",
    "emit",
    "islr",
    "jensen_bounds",
    "laguerre_half",
    "make_qam",
    "matched_filter_af",
    "mean_abs_complex_af",
    "mod_indicator",
    "moment_surfaces",
    "moments",
    "ofdm_map",
    "pslr",
    "realization_seed",
    "rect_pulse_af",
    "reproduce_table1",
    "rice_moments",
    "run_mc_moments",
    "second_moment_af",
    "sidelobe_distribution",
    "sidelobe_report",
    "signal_energy",
    "synthesize",
    "tf_fourth_moment",
    "tf_pair_moment",
    "tf_to_dd",
]
