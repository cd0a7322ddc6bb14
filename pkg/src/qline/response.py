"""Leading-order excitation and emission probabilities.

To second order in the coupling the qubit population transfer is::

    P = lambda**2 / (4 pi) * int dk  Ft(k)**2 C(k)**2 |k| K(|k| + s omega)

with ``K = |chi_hat|**2`` and ``s = +1`` (vacuum excitation) or ``s = -1``
(spontaneous emission).  The integrand is even in ``k``; it is integrated
over the half line with a factor 2, up to a cutoff ``k_max`` chosen so that
an analytic envelope of the discarded tail is negligible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import erfc

from . import switching
from .core import (
    Bundle,
    CutoffModel,
    ProbabilityResult,
    TailBoundUnavailable,
    ValidationError,
)
from .formfactor import cutoff_breakpoints, effective_weight
from .quadrature import integrate

KernelFn = Callable[[np.ndarray], np.ndarray]

_PILOT_REL_TOL = 1e-4


@dataclass(frozen=True)
class QuadratureSettings:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-30
    max_panels: int = 1_000_000
    tail_safety: float = 100.0

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValidationError("rel_tol must be positive")
        if not self.abs_tol > 0:
            raise ValidationError("abs_tol must be positive")
        if not self.max_panels >= 1:
            raise ValidationError("max_panels must be at least 1")
        if not self.tail_safety > 0:
            raise ValidationError("tail_safety must be positive")


def integrand(bundle: Bundle, k, kernel: KernelFn | None = None):
    """Half-line integrand for ``P / lambda**2`` at ``k >= 0``."""
    k = np.asarray(k, dtype=float)
    if kernel is None:
        kernel = _analytic_kernel(bundle)
    omega = bundle.config.omega
    weight = effective_weight(bundle.smearing, bundle.cutoff, omega, k)
    return weight * k * kernel(k + bundle.config.signed_gap) / (2.0 * math.pi)


def integrand_full_line(bundle: Bundle, k, kernel: KernelFn | None = None):
    """Integrand over the whole real line (no evenness factor)."""
    k = np.asarray(k, dtype=float)
    return 0.5 * integrand(bundle, np.abs(k), kernel)


def _analytic_kernel(bundle: Bundle) -> KernelFn:
    profile = bundle.switching
    return lambda w: switching.kernel(profile, w)


def integration_breakpoints(bundle: Bundle, k_max: float | None = None) -> list[float]:
    """Sorted wavenumbers where the integrand is non-smooth or peaked.

    Includes the cutoff kink at ``omega``, the sharp-cutoff edge, and every
    ``k >= 0`` with ``k + s omega`` in ``{0, +-pi/r}``.  If ``k_max`` is given
    the list is clipped to ``[0, k_max]`` and ends with ``k_max``.
    """
    omega = bundle.config.omega
    shift = bundle.config.signed_gap
    pulse_zero = math.pi / bundle.switching.ramp
    points = {0.0, *cutoff_breakpoints(bundle.cutoff, omega)}
    for w in (0.0, pulse_zero, -pulse_zero):
        k = w - shift
        if k >= 0:
            points.add(k)
    if k_max is not None:
        points = {p for p in points if p < k_max}
        points.add(float(k_max))
    return sorted(points)


def tail_bound(bundle: Bundle, k: float) -> float:
    """Upper bound on ``int_k^inf integrand`` for ``k >= 2 omega``.

    Uses ``Ft**2 <= 1``, the cutoff envelope of each model and the power-law
    envelopes ``K(w) <= 4/w**2`` and, once ``w >= 2 pi / r``,
    ``K(w) <= A6 / w**6``.  For ``k >= 2 omega`` the kernel argument obeys
    ``w >= c k`` with ``c = 1`` (excitation) or ``1/2`` (emission).
    """
    omega = bundle.config.omega
    eps = bundle.cutoff.epsilon
    model = bundle.cutoff.model
    if k < 2.0 * omega:
        return math.inf
    if model is CutoffModel.SHARP:
        return 0.0 if k >= omega + eps else math.inf
    c = 1.0 if bundle.config.process.sign > 0 else 0.5
    profile = bundle.switching
    envelopes = [(2, switching.envelope_p2())]
    if c * k >= switching.envelope_p6_threshold(profile):
        envelopes.append((6, switching.envelope_p6(profile)))

    best = math.inf
    for p, amplitude in envelopes:
        scale = amplitude * c ** (-p)
        if model is CutoffModel.GAUSSIAN:
            mass = 0.5 * math.sqrt(math.pi) * eps * erfc((k - omega) / eps)
            tail = scale * k ** (1 - p) * mass
        elif model is CutoffModel.EXPONENTIAL:
            mass = eps / math.sqrt(2.0) * math.exp(-math.sqrt(2.0) * (k - omega) / eps)
            tail = scale * k ** (1 - p) * mass
        elif model is CutoffModel.LORENTZIAN:
            # (k - omega)**4 >= k**4 / 16 for k >= 2 omega
            tail = scale * 16.0 * eps**4 * k ** (-2 - p) / (2 + p)
        else:
            raise TailBoundUnavailable(f"no integrable envelope for cutoff {model!r}")
        best = min(best, tail)
    return float(best / (2.0 * math.pi))


def _truncation_point(bundle: Bundle, start: float, target: float) -> float:
    """Smallest (to bisection accuracy) ``k >= start`` with ``tail_bound <= target``."""
    lo = hi = start
    while tail_bound(bundle, hi) > target:
        lo, hi = hi, 2.0 * hi
        if hi > 1e300:
            raise TailBoundUnavailable("tail bound does not reach the target")
    if hi == start:
        return start
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if tail_bound(bundle, mid) <= target:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-6 * hi:
            break
    return hi


def probability_with_kernel(
    bundle: Bundle, settings: QuadratureSettings, kernel: KernelFn
) -> ProbabilityResult:
    """k-quadrature driver shared by the analytic and the numeric kernels."""
    omega = bundle.config.omega
    f = lambda k: integrand(bundle, k, kernel)
    cap = switching.panel_width_cap(bundle.switching)
    core_points = integration_breakpoints(bundle)
    core_end = max(2.0 * omega, *core_points)

    if bundle.cutoff.model is CutoffModel.SHARP:
        k_max = omega + bundle.cutoff.epsilon
        tail = 0.0
    else:
        if bundle.cutoff.model is CutoffModel.EXPONENTIAL:
            core_end = max(core_end, omega + bundle.cutoff.epsilon)
        pilot = integrate(
            f,
            integration_breakpoints(bundle, core_end),
            max_width=cap,
            rel_tol=_PILOT_REL_TOL,
            abs_tol=settings.abs_tol,
            max_panels=settings.max_panels,
        )
        lower = max(pilot.value - pilot.error, 0.0)
        target = max(settings.rel_tol * lower / settings.tail_safety, settings.abs_tol)
        k_max = _truncation_point(bundle, core_end, target)
        tail = tail_bound(bundle, k_max)

    quad = integrate(
        f,
        integration_breakpoints(bundle, k_max),
        max_width=cap,
        rel_tol=settings.rel_tol,
        abs_tol=settings.abs_tol,
        max_panels=settings.max_panels,
    )
    value = max(quad.value, 0.0)
    lam_sq = bundle.config.coupling**2
    return ProbabilityResult(
        p_over_lambda_sq=value,
        p=lam_sq * value,
        abs_error_estimate=quad.error + tail,
        panels_used=quad.panels,
        tail_bound=tail,
        k_max=k_max,
    )


def transition_probability(
    bundle: Bundle, settings: QuadratureSettings | None = None
) -> ProbabilityResult:
    """Excitation or emission probability for a validated bundle.

    Raises
    ------
    MaxPanelsExceeded
        When the tolerance needs more than ``settings.max_panels`` panels.
    """
    settings = settings or QuadratureSettings()
    return probability_with_kernel(bundle, settings, _analytic_kernel(bundle))


def coupling_from_spin_boson(alpha_sb: float) -> float:
    """Coupling ``lambda = sqrt(2 pi alpha_SB)`` for an Ohmic spin-boson constant."""
    if not (math.isfinite(alpha_sb) and alpha_sb >= 0):
        raise ValidationError("alpha_sb must be non-negative")
    return math.sqrt(2.0 * math.pi * alpha_sb)
