"""Smearing profiles, their Fourier transforms and UV cutoff weights.

The qubit couples to the line through ``F_sigma(x)`` (a normalised, even
density of width ``sigma``) and each field mode is weighted by ``C_eps(k)``.
Only the product ``Ft_sigma(k)**2 * C_eps(k)**2`` enters transition
probabilities; :func:`effective_form_factor` returns it.

Every function here accepts scalars or numpy arrays for ``x`` / ``k``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CutoffModel, CutoffSpec, Shape, SmearingSpec

_SQRT2 = np.sqrt(2.0)
# below this |k sigma / 2| the sharp-profile sinc is summed as a series
_SINC_SERIES_LIMIT = 1e-4


def smearing_value(spec: SmearingSpec, x):
    """Position-space density ``F_sigma(x)`` in units of ``1/length``."""
    # |x| makes the evenness exact (pow of a negative base can differ by an ulp)
    x = np.abs(np.asarray(x, dtype=float))
    s = spec.sigma
    if spec.shape is Shape.GAUSSIAN:
        return np.exp(-((x / s) ** 2)) / (s * np.sqrt(np.pi))
    if spec.shape is Shape.LORENTZIAN:
        return s / (2.0 * np.pi) / (x**2 + (0.5 * s) ** 2)
    if spec.shape is Shape.QUARTIC:
        a = 0.5 * s
        return _SQRT2 * a**3 / np.pi / (x**4 + a**4)
    if spec.shape is Shape.SHARP:
        # top hat of width sigma; the edges |x| = sigma/2 are a measure-zero set
        return np.where(x < 0.5 * s, 1.0 / s, 0.0)
    raise TypeError(f"unsupported shape {spec.shape!r}")


def smearing_ft(spec: SmearingSpec, k):
    """Fourier transform ``int F_sigma(x) exp(ikx) dx`` (real and even in k)."""
    k = np.abs(np.asarray(k, dtype=float))
    s = spec.sigma
    if spec.shape is Shape.GAUSSIAN:
        return np.exp(-((s * k) ** 2) / 4.0)
    if spec.shape is Shape.LORENTZIAN:
        return np.exp(-0.5 * s * k)
    if spec.shape is Shape.QUARTIC:
        u = 0.5 * s * k / _SQRT2
        return np.exp(-u) * (np.cos(u) + np.sin(u))
    if spec.shape is Shape.SHARP:
        return _sinc(0.5 * s * k)
    raise TypeError(f"unsupported shape {spec.shape!r}")


def _sinc(u):
    """sin(u)/u with a Taylor branch near the removable singularity."""
    u = np.asarray(u, dtype=float)
    small = np.abs(u) < _SINC_SERIES_LIMIT
    safe = np.where(small, 1.0, u)
    u2 = u * u
    return np.where(small, 1.0 - u2 / 6.0 + u2 * u2 / 120.0, np.sin(safe) / safe)


def cutoff_value(spec: CutoffSpec, omega: float, k):
    """UV weight ``C_eps(k)``: 1 below the gap, decaying above it.

    The sharp model is the indicator of ``|k| < omega + eps``.
    """
    k = np.abs(np.asarray(k, dtype=float))
    eps = spec.epsilon
    excess = np.maximum(k - omega, 0.0)
    if spec.model is CutoffModel.GAUSSIAN:
        return np.exp(-(excess**2) / (2.0 * eps**2))
    if spec.model is CutoffModel.LORENTZIAN:
        return eps**2 / (excess**2 + eps**2)
    if spec.model is CutoffModel.EXPONENTIAL:
        return np.exp(-excess / (_SQRT2 * eps))
    if spec.model is CutoffModel.SHARP:
        return np.where(k < omega + eps, 1.0, 0.0)
    raise TypeError(f"unsupported cutoff model {spec.model!r}")


def cutoff_breakpoints(spec: CutoffSpec, omega: float) -> list[float]:
    """Wavenumbers >= 0 where ``C_eps`` is not smooth."""
    points = [float(omega)]
    if spec.model is CutoffModel.SHARP:
        points.append(float(omega + spec.epsilon))
    return points


@dataclass(frozen=True)
class FormFactorPoint:
    k: float
    smearing_ft: float
    cutoff_weight: float
    effective_weight: float


def effective_weight(smearing: SmearingSpec, cutoff: CutoffSpec, omega: float, k):
    """Vectorised ``Ft_sigma(k)**2 * C_eps(k)**2``."""
    ft = smearing_ft(smearing, k)
    c = cutoff_value(cutoff, omega, k)
    return ft * ft * (c * c)


def effective_form_factor(
    smearing: SmearingSpec, cutoff: CutoffSpec, omega: float, k: float
) -> FormFactorPoint:
    ft = float(smearing_ft(smearing, k))
    c = float(cutoff_value(cutoff, omega, k))
    return FormFactorPoint(float(k), ft, c, ft * ft * (c * c))
