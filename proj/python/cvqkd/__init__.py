"""Collective-attack secret key rates for PSK-modulated CV-QKD."""

from ._core import (  # noqa: F401
    CorrelationRow,
    Detection,
    DetectorParams,
    KeyRateReport,
    LinkParams,
    ModulationKind,
    ModulationScheme,
    NoiseBudget,
    OptimizeResult,
    Protocol,
    QuadratureStats,
    SourceCovariance,
    SpectrumPath,
    __version__,
    correlation_z,
    gaussian_correlation,
    holevo_g,
    mutual_information,
    noise_budget,
    optimize_variance,
    psk8_eigenvalues_closed,
    psk_eigenvalues,
    secret_key_rate,
    simulate_quadratures,
    source_covariance,
    sweep_correlation,
    transmittance,
)
