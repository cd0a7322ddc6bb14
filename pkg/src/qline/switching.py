"""Cosine-trapezoid switching and its spectral kernel.

The switching ``chi(t)`` is 1 on ``[-T/2, T/2]`` with half-cosine ramps of
duration ``r`` on either side.  It equals a unit box of width ``T + r``
convolved with the unit-area pulse ``(pi / 2r) cos(pi t / r)`` on
``|t| <= r/2``, so its transform factorises::

    chi_hat(w) = (T + r) sinc(w (T + r) / 2) * pi**2 cos(w r / 2) / (pi**2 - w**2 r**2)

The second factor is rewritten with ``cos(x/2) = sin((pi - x)/2)`` as
``pi**2 sinc((pi - x)/2) / (2 (pi + x))`` (``x = |w| r``), which has no
removable singularity left: the kernel ``|chi_hat|**2`` is evaluated with
the same expression at ``w = 0`` and ``w = pi/r``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import SwitchingProfile

PI = math.pi
# points this close (relative to pi/r) to 0 or pi/r are tagged as limits
_LIMIT_WINDOW = 1e-6


class KernelBranch(enum.Enum):
    REGULAR = "regular"
    REMOVABLE_LIMIT = "removable-limit"


@dataclass(frozen=True)
class KernelValue:
    omega: float
    value: float
    branch: KernelBranch


def chi(profile: SwitchingProfile, t):
    """Switching amplitude in ``[0, 1]``; zero outside ``|t| <= T/2 + r``."""
    t = np.abs(np.asarray(t, dtype=float))
    r, half_plateau = profile.ramp, 0.5 * profile.plateau
    ramp = 0.5 + 0.5 * np.cos(PI / r * (t - half_plateau))
    return np.where(
        t <= half_plateau, 1.0, np.where(t <= half_plateau + r, ramp, 0.0)
    )


def _sinc(u):
    # numpy's sinc is normalised: sinc(x) = sin(pi x) / (pi x)
    return np.sinc(np.asarray(u) / PI)


def transform(profile: SwitchingProfile, omega):
    """Real Fourier transform ``int chi(t) exp(i w t) dt`` (chi is even)."""
    w = np.abs(np.asarray(omega, dtype=float))
    r, width = profile.ramp, profile.area
    x = w * r
    box = width * _sinc(0.5 * w * width)
    pulse = PI**2 * _sinc(0.5 * (PI - x)) / (2.0 * (PI + x))
    return box * pulse


def kernel(profile: SwitchingProfile, omega):
    """Vectorised ``K(w) = |chi_hat(w)|**2`` in units of time squared."""
    c = transform(profile, omega)
    return c * c


def spectral_kernel(profile: SwitchingProfile, omega: float) -> KernelValue:
    w = abs(float(omega))
    limit_scale = _LIMIT_WINDOW * PI / profile.ramp
    near = min(w, abs(w - PI / profile.ramp)) <= limit_scale
    branch = KernelBranch.REMOVABLE_LIMIT if near else KernelBranch.REGULAR
    return KernelValue(float(omega), float(kernel(profile, w)), branch)


def kernel_breakpoints(profile: SwitchingProfile) -> list[float]:
    """``0``, the pulse zero-crossing ``pi/r`` and the oscillation scale ``2 pi/(T + 2r)``."""
    return sorted({0.0, PI / profile.ramp, 2.0 * PI / (profile.plateau + 2.0 * profile.ramp)})


def panel_width_cap(profile: SwitchingProfile) -> float:
    """Half of the kernel oscillation period ``2 pi / (T + 2r)``."""
    return PI / (profile.plateau + 2.0 * profile.ramp)


# Power-law envelopes K(w) <= A / |w|**p used to bound semi-infinite tails.
# p = 2 holds everywhere (|sinc| <= 1 and the pulse transform is at most 1);
# p = 6 holds for |w| r >= 2 pi, where pi**2 - w**2 r**2 <= -(3/4) w**2 r**2.


def envelope_p2() -> float:
    return 4.0


def envelope_p6(profile: SwitchingProfile) -> float:
    return 64.0 * PI**4 / (9.0 * profile.ramp**4)


def envelope_p6_threshold(profile: SwitchingProfile) -> float:
    return 2.0 * PI / profile.ramp


def kernel_envelope(profile: SwitchingProfile, omega):
    """Pointwise upper bound on ``K``; used by tests and tail estimates."""
    w = np.abs(np.asarray(omega, dtype=float))
    bound = np.full_like(w, profile.area**2)
    with np.errstate(divide="ignore", over="ignore"):
        bound = np.minimum(bound, envelope_p2() / w**2)
        tight = envelope_p6(profile) / w**6
    return np.where(w >= envelope_p6_threshold(profile), np.minimum(bound, tight), bound)
