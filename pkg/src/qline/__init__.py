"""Transition probabilities of a finite-size qubit on a transmission line.

Quick start::

    from qline import make_bundle, transition_probability

    res = transition_probability(make_bundle(process="emission", model="gaussian"))
    res.p_over_lambda_sq
"""
__version__ = "0.1.0"

from .core import (  # noqa: E402
    DEFAULTS,
    Bundle,
    CutoffModel,
    CutoffSpec,
    ProbabilityResult,
    Process,
    QubitConfig,
    Shape,
    SmearingSpec,
    SwitchingProfile,
    ValidationError,
    make_bundle,
    validate,
)
from .response import (  # noqa: E402
    QuadratureSettings,
    coupling_from_spin_boson,
    transition_probability,
)

__all__ = [
    "DEFAULTS",
    "Bundle",
    "CutoffModel",
    "CutoffSpec",
    "ProbabilityResult",
    "Process",
    "QuadratureSettings",
    "QubitConfig",
    "Shape",
    "SmearingSpec",
    "SwitchingProfile",
    "ValidationError",
    "coupling_from_spin_boson",
    "make_bundle",
    "transition_probability",
    "validate",
]
