"""Domain types, reference scales and parameter validation.

All quantities are dimensionless, measured in units of the reference qubit
gap ``OMEGA0 = 1`` (natural units, hbar = c = 1): frequencies and wavenumbers
in ``OMEGA0``, lengths and times in ``1 / OMEGA0``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass


class QlineError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(QlineError, ValueError):
    """A parameter violates a type invariant; the message names it."""


class QuadratureError(QlineError):
    """Numerical integration could not meet its contract."""


class MaxPanelsExceeded(QuadratureError):
    def __init__(self, estimate: float, error: float, panels: int):
        super().__init__(
            f"max panels exceeded ({panels} panels): partial estimate "
            f"{estimate!r} with error bound {error!r}"
        )
        self.estimate = estimate
        self.error = error
        self.panels = panels


class TailBoundUnavailable(QuadratureError):
    pass


class TailNotCertified(QuadratureError):
    pass


class Process(enum.Enum):
    EXCITATION = "excitation"
    EMISSION = "emission"

    @property
    def sign(self) -> int:
        """+1 for excitation, -1 for emission (gap sign flip)."""
        return 1 if self is Process.EXCITATION else -1


class Shape(enum.Enum):
    GAUSSIAN = "gaussian"
    LORENTZIAN = "lorentzian"
    QUARTIC = "quartic"
    SHARP = "sharp"

    @property
    def code(self) -> str:
        return _SHAPE_CODES[self]


class CutoffModel(enum.Enum):
    GAUSSIAN = "gaussian"
    LORENTZIAN = "lorentzian"
    EXPONENTIAL = "exponential"
    SHARP = "sharp"

    @property
    def code(self) -> str:
        return _CUTOFF_CODES[self]


_SHAPE_CODES = {
    Shape.GAUSSIAN: "G",
    Shape.LORENTZIAN: "L",
    Shape.QUARTIC: "Q",
    Shape.SHARP: "S",
}
_CUTOFF_CODES = {
    CutoffModel.GAUSSIAN: "G",
    CutoffModel.LORENTZIAN: "L",
    CutoffModel.EXPONENTIAL: "E",
    CutoffModel.SHARP: "S",
}


def parse_enum(kind: type[enum.Enum], value) -> enum.Enum:
    """Accept an enum member, its value (``"gaussian"``) or its one-letter code."""
    if isinstance(value, kind):
        return value
    text = str(value).strip().lower()
    for member in kind:
        if text == member.value or text == member.name.lower():
            return member
        code = getattr(member, "code", None)
        if code is not None and text == code.lower():
            return member
    choices = ", ".join(m.value for m in kind)
    raise ValidationError(f"unknown {kind.__name__} {value!r} (expected one of: {choices})")


@dataclass(frozen=True)
class QubitConfig:
    omega: float = 1.0
    coupling: float = 1.0
    process: Process = Process.EXCITATION

    @property
    def signed_gap(self) -> float:
        """Gap entering the kernel argument: ``+omega`` or ``-omega``."""
        return self.process.sign * self.omega


@dataclass(frozen=True)
class SmearingSpec:
    shape: Shape = Shape.GAUSSIAN
    sigma: float = 1e-4


@dataclass(frozen=True)
class CutoffSpec:
    model: CutoffModel = CutoffModel.EXPONENTIAL
    epsilon: float = 5.0


@dataclass(frozen=True)
class SwitchingProfile:
    ramp: float = 1.0
    plateau: float = 1.0

    @property
    def half_support(self) -> float:
        return 0.5 * self.plateau + self.ramp

    @property
    def area(self) -> float:
        return self.plateau + self.ramp


@dataclass(frozen=True)
class ProbabilityResult:
    p_over_lambda_sq: float
    p: float
    abs_error_estimate: float
    panels_used: int
    tail_bound: float
    k_max: float = math.inf


@dataclass(frozen=True)
class ScaleDefaults:
    """Reference scales in units of the qubit gap.

    ``r0`` and ``t0`` (ramp and plateau reference times) are not fixed by
    the physical setup; they default to one inverse gap and every emitted
    dataset records the values actually used.
    """

    omega0: float = 1.0
    epsilon0: float = 5.0
    sigma0: float = 1e-4
    r0: float = 1.0
    t0: float = 1.0


DEFAULTS = ScaleDefaults()


@dataclass(frozen=True)
class Bundle:
    """A validated parameter set; build it with :func:`validate`."""

    config: QubitConfig
    smearing: SmearingSpec
    cutoff: CutoffSpec
    switching: SwitchingProfile

    def replace(self, **changes) -> Bundle:
        """Return a re-validated copy with flat parameters changed.

        Recognised keys: ``omega, coupling, process, shape, sigma, model,
        epsilon, ramp, plateau``.
        """
        flat = self.as_dict()
        unknown = set(changes) - set(flat)
        if unknown:
            raise ValidationError(f"unknown parameter(s): {sorted(unknown)}")
        flat.update(changes)
        return make_bundle(**flat)

    def as_dict(self) -> dict:
        return {
            "omega": self.config.omega,
            "coupling": self.config.coupling,
            "process": self.config.process.value,
            "shape": self.smearing.shape.value,
            "sigma": self.smearing.sigma,
            "model": self.cutoff.model.value,
            "epsilon": self.cutoff.epsilon,
            "ramp": self.switching.ramp,
            "plateau": self.switching.plateau,
        }


def _finite_positive(value, name: str) -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ValidationError(f"{name} must be positive")


def validate(
    config: QubitConfig,
    smearing: SmearingSpec,
    cutoff: CutoffSpec,
    switching: SwitchingProfile,
) -> Bundle:
    """Check every type invariant and return the validated bundle.

    Raises
    ------
    ValidationError
        Naming the first violated invariant, e.g. ``"sigma must be positive"``.
    """
    _finite_positive(config.omega, "omega")
    if not (math.isfinite(config.coupling) and config.coupling >= 0):
        raise ValidationError("lambda must be non-negative")
    if not isinstance(config.process, Process):
        raise ValidationError("process must be excitation or emission")
    if not isinstance(smearing.shape, Shape):
        raise ValidationError("shape must be one of gaussian, lorentzian, quartic, sharp")
    _finite_positive(smearing.sigma, "sigma")
    if not isinstance(cutoff.model, CutoffModel):
        raise ValidationError("cutoff must be one of gaussian, lorentzian, exponential, sharp")
    _finite_positive(cutoff.epsilon, "epsilon")
    _finite_positive(switching.ramp, "ramp")
    if not (math.isfinite(switching.plateau) and switching.plateau >= 0):
        raise ValidationError("plateau must be non-negative")
    return Bundle(config, smearing, cutoff, switching)


def make_bundle(
    omega: float = DEFAULTS.omega0,
    coupling: float = 1.0,
    process: Process | str = Process.EXCITATION,
    shape: Shape | str = Shape.GAUSSIAN,
    sigma: float = DEFAULTS.sigma0,
    model: CutoffModel | str = CutoffModel.EXPONENTIAL,
    epsilon: float = DEFAULTS.epsilon0,
    ramp: float = DEFAULTS.r0,
    plateau: float = DEFAULTS.t0,
) -> Bundle:
    """Flat-keyword convenience constructor; defaults are the reference scales."""
    return validate(
        QubitConfig(float(omega), float(coupling), parse_enum(Process, process)),
        SmearingSpec(parse_enum(Shape, shape), float(sigma)),
        CutoffSpec(parse_enum(CutoffModel, model), float(epsilon)),
        SwitchingProfile(float(ramp), float(plateau)),
    )


# Unit conversion. The reference gap is 10 GHz; whether that is an ordinary
# or an angular frequency is not pinned down, so both conventions are offered.
OMEGA0_GHZ = 10.0
SPEED_OF_LIGHT_UM_PER_NS = 299_792.458


def _omega0_per_ns(convention: str) -> float:
    if convention == "ordinary":
        return OMEGA0_GHZ
    if convention == "angular":
        return 2.0 * math.pi * OMEGA0_GHZ
    raise ValidationError(f"unknown frequency convention {convention!r}")


def frequency_from_ghz(value: float) -> float:
    """GHz -> units of OMEGA0; a ratio, so identical in both conventions."""
    return value / OMEGA0_GHZ


def frequency_to_ghz(value: float) -> float:
    return value * OMEGA0_GHZ


def time_from_ns(value: float, convention: str = "ordinary") -> float:
    """ns -> units of 1/OMEGA0 (``t * OMEGA0`` with OMEGA0 in 1/ns or rad/ns)."""
    return value * _omega0_per_ns(convention)


def time_to_ns(value: float, convention: str = "ordinary") -> float:
    return value / _omega0_per_ns(convention)


def length_from_um(value: float, convention: str = "ordinary") -> float:
    """Micrometres -> units of c/OMEGA0 (light travel time at speed c)."""
    return time_from_ns(value / SPEED_OF_LIGHT_UM_PER_NS, convention)


def length_to_um(value: float, convention: str = "ordinary") -> float:
    return time_to_ns(value, convention) * SPEED_OF_LIGHT_UM_PER_NS
