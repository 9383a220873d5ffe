"""Python bindings for the naqae amplitude-estimation toolkit."""

from ._core import (
    DomainError,
    Error,
    SingularCorrectionError,
    UsageError,
    depol_equivalent,
    estimate,
    fit,
    p1,
    p1_gaussian_quadrature,
    run_experiment,
    shot_schedule,
    simulate,
)

__all__ = [
    "DomainError",
    "Error",
    "SingularCorrectionError",
    "UsageError",
    "depol_equivalent",
    "estimate",
    "fit",
    "p1",
    "p1_gaussian_quadrature",
    "run_experiment",
    "shot_schedule",
    "simulate",
]
