from ._core import (
    P_INF,
    NlcdError,
    apply_L,
    error_to_rarefaction,
    kernel_weights,
    rarefaction,
    run,
    viscous_profile,
)

__all__ = [
    "P_INF",
    "NlcdError",
    "apply_L",
    "error_to_rarefaction",
    "kernel_weights",
    "rarefaction",
    "run",
    "viscous_profile",
]
