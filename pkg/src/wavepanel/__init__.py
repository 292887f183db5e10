"""Multiscale wavelet dependence, contagion and long-memory analysis."""

from .panel import Panel, StatsSummary, load_panel, log_returns, descriptive_stats
from .modwt import (
    FilterPair,
    Decomposition,
    build_filter,
    modwt_transform,
    mra_components,
    mra_reconstruct,
    nonboundary_counts,
)
from .dependence import (
    ScaleProfile,
    CrossCorrProfile,
    WmcProfile,
    horizon_label,
    wavelet_variance,
    wavelet_correlation,
    wavelet_cross_correlation,
    covariance_decomposition,
    wmc,
    wmcc,
    scale_leader_table,
)
from .coherence import (
    MorletParams,
    Smoothing,
    CwtField,
    CoherenceField,
    Ar1Params,
    PhaseClass,
    cwt_morlet,
    wavelet_coherence,
    phase_classify,
    cone_of_influence,
    ar1_fit,
    significance_montecarlo,
)
from .contagion import (
    RollingCorrSeries,
    EventTestResult,
    rolling_wavelet_correlation,
    event_ttest,
)
from .longmemory import (
    LogscaleDiagram,
    HurstFit,
    ScalingParams,
    RollingHurstSeries,
    Dendrogram,
    ConnectivityResult,
    synth_fgn,
    logscale_diagram,
    hurst_wls,
    scaling_parameters,
    scaling_parameters_from_fit,
    rolling_hurst,
    fractal_connectivity,
    cluster_markets,
)

__version__ = "0.1.0"
