"""Probe transmittance and fidelity through a quantized-coupling EIT medium."""

from ._core import (
    CoherentCoupling,
    CoherentProbe,
    DomainError,
    EitConfig,
    EngineResult,
    FockProbe,
    PropagationCoefficients,
    SqueezedCoupling,
    TruncationError,
    TruncationPolicy,
    c2_moments,
    delta_metrics,
    evaluate,
    fidelity,
    oracle,
    output_density_matrix,
    parse_coupling,
    parse_probe,
    preset_names,
    propagation_coefficients,
    second_moments,
    sweep,
    transmittance,
    validate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
