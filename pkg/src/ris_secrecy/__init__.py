"""Secrecy performance of a RIS-aided wiretap link with hardware impairments.

Closed-form secrecy outage probability and average secrecy capacity for
a surface-assisted link whose transceivers suffer residual hardware
impairments, together with the signal-level Monte Carlo simulator that
cross-validates every closed form.
"""

from .channel import (
    ChannelStats,
    LinkGeometry,
    SystemParams,
    cdf_gamma_d,
    cdf_rho_d,
    cdf_rho_e,
    ccdf_rho_d,
    db_to_linear,
    derive_stats,
    pdf_rho_d,
    pdf_rho_e,
)
from .montecarlo import (
    EstimateWithCI,
    McConfig,
    TrialOutcome,
    empirical_cdf,
    estimate_asc,
    estimate_mean_sndr,
    estimate_sop,
    ks_distance,
    sample_quantity,
    sample_trial,
    simulate_metrics,
)
from .secrecy import (
    NumericsConfig,
    SecrecyCapacity,
    SopEvaluation,
    ThetaSet,
    UnsupportedRegimeError,
    avg_secrecy_capacity,
    avg_secrecy_capacity_reference,
    destination_rate,
    eavesdropper_rate,
    eavesdropper_rate_gain_clipped,
    sop,
    sop_asymptotic,
    sop_asymptotic_reference,
    sop_detail,
    sop_reference,
    theta_coefficients,
)
from .specfun import (
    ConvergenceError,
    SeriesControl,
    bessel_i,
    e1_scaled,
    exp_integral_ei,
    lower_inc_gamma,
    marcum_q_half,
    upper_inc_gamma,
)
from .sweeps import (
    ConfigError,
    Row,
    SweepSpec,
    emit,
    load_config,
    load_preset,
    load_table,
    run_sweep,
    save_config,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelStats",
    "ConfigError",
    "ConvergenceError",
    "EstimateWithCI",
    "LinkGeometry",
    "McConfig",
    "NumericsConfig",
    "Row",
    "SecrecyCapacity",
    "SeriesControl",
    "SopEvaluation",
    "SweepSpec",
    "SystemParams",
    "ThetaSet",
    "TrialOutcome",
    "UnsupportedRegimeError",
    "avg_secrecy_capacity",
    "avg_secrecy_capacity_reference",
    "bessel_i",
    "ccdf_rho_d",
    "cdf_gamma_d",
    "cdf_rho_d",
    "cdf_rho_e",
    "db_to_linear",
    "derive_stats",
    "destination_rate",
    "e1_scaled",
    "eavesdropper_rate",
    "eavesdropper_rate_gain_clipped",
    "empirical_cdf",
    "emit",
    "estimate_asc",
    "estimate_mean_sndr",
    "estimate_sop",
    "exp_integral_ei",
    "ks_distance",
    "load_config",
    "load_preset",
    "load_table",
    "lower_inc_gamma",
    "marcum_q_half",
    "pdf_rho_d",
    "pdf_rho_e",
    "run_sweep",
    "sample_quantity",
    "sample_trial",
    "save_config",
    "simulate_metrics",
    "sop",
    "sop_asymptotic",
    "sop_asymptotic_reference",
    "sop_detail",
    "sop_reference",
    "theta_coefficients",
    "upper_inc_gamma",
]
