"""Brute-force reference evaluations used to check the closed forms.

Nothing here uses the closed-form transforms of :mod:`qline.formfactor`
or :mod:`qline.switching`; everything is computed by composite quadrature
from the position-space smearing and the time-domain switching function.

The switching transform is computed in one of two ways.  For small
``|w|`` it is the direct integral of ``chi(t) cos(w t)``.  For large ``|w|``
the result is tiny compared to ``int chi`` and direct summation loses it to
cancellation, so two integrations by parts are used instead (``chi`` and
``chi'`` vanish at the support ends and ``chi'`` is continuous)::

    chi_hat(w) = -(1 / w**2) int chi''(t) cos(w t) dt

which involves only the ramps.  The switch-over balances the magnitudes of
the two summands: ``w**2 >= 2 pi / (r (T + 2 r))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate as sp_integrate
from scipy.special import erfc

from .core import Bundle, ProbabilityResult, Shape, SmearingSpec, SwitchingProfile, TailNotCertified
from .formfactor import smearing_value
from .response import QuadratureSettings, probability_with_kernel
from .switching import chi

_GL_ORDER = 20
# cap on (omega count) x (time nodes) per vectorised block
_BLOCK_ELEMENTS = 4_000_000


@dataclass(frozen=True)
class OracleSettings:
    time_grid_points: int = 4096
    ft_truncation: float = 40.0
    rel_tol: float = 1e-8

    def __post_init__(self):
        if not (self.time_grid_points > 0 and self.ft_truncation > 0 and self.rel_tol > 0):
            raise ValueError("oracle settings must all be positive")


def _gauss_legendre(order: int = _GL_ORDER):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def composite_nodes(a: float, b: float, panels: int, order: int = _GL_ORDER):
    """Nodes and weights of composite Gauss-Legendre on ``[a, b]``."""
    x, w = _gauss_legendre(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _panels_for(length: float, omega_max: float, settings: OracleSettings) -> int:
    by_count = math.ceil(settings.time_grid_points / _GL_ORDER)
    # at most half an oscillation per panel
    by_phase = math.ceil(length * omega_max / math.pi)
    return max(1, by_count, by_phase)


def _ramp_second_derivative(profile: SwitchingProfile, t):
    # right ramp only: chi = 1/2 + 1/2 cos(pi (t - T/2) / r)
    r = profile.ramp
    return -(math.pi**2) / (2.0 * r * r) * np.cos(math.pi / r * (t - 0.5 * profile.plateau))


def _cosine_sum(omega, nodes, weighted_values):
    """``sum_j weighted_values[j] cos(omega_i nodes[j])`` for every ``omega_i``."""
    out = np.empty(omega.size)
    step = max(1, _BLOCK_ELEMENTS // max(nodes.size, 1))
    for start in range(0, omega.size, step):
        block = omega[start : start + step]
        out[start : start + step] = np.cos(np.outer(block, nodes)) @ weighted_values
    return out


def transform_numeric(profile: SwitchingProfile, omega, settings: OracleSettings | None = None):
    """Numeric ``int chi(t) exp(i w t) dt`` (real since chi is even)."""
    settings = settings or OracleSettings()
    w = np.abs(np.atleast_1d(np.asarray(omega, dtype=float)))
    r, T = profile.ramp, profile.plateau
    out = np.empty_like(w)
    by_parts = w * w >= 2.0 * math.pi / (r * (T + 2.0 * r))

    direct = np.flatnonzero(~by_parts)
    if direct.size:
        wd = w[direct]
        nodes, weights = [], []
        for a, b in ((0.0, 0.5 * T), (0.5 * T, 0.5 * T + r)):
            if b > a:
                n, q = composite_nodes(a, b, _panels_for(b - a, wd.max(), settings))
                nodes.append(n)
                weights.append(q * chi(profile, n))
        nodes = np.concatenate(nodes)
        weights = np.concatenate(weights)
        out[direct] = 2.0 * _cosine_sum(wd, nodes, weights)

    parts = np.flatnonzero(by_parts)
    if parts.size:
        # group by magnitude so low frequencies do not pay for high ones
        order = parts[np.argsort(w[parts], kind="stable")]
        for group in np.array_split(order, max(1, order.size // 256)):
            wg = w[group]
            a, b = 0.5 * T, 0.5 * T + r
            n, q = composite_nodes(a, b, _panels_for(r, wg.max(), settings))
            integral = 2.0 * _cosine_sum(wg, n, q * _ramp_second_derivative(profile, n))
            out[group] = -integral / (wg * wg)

    return out if np.ndim(omega) else float(out[0])


def kernel_numeric(profile: SwitchingProfile, omega, settings: OracleSettings | None = None):
    """Numeric ``int int chi(t) chi(t') exp(i w (t - t')) dt dt'``.

    The double integral separates into ``|chi_hat(w)|**2``; see
    :func:`kernel_double_integral` for the literal two-dimensional sum.
    """
    c = transform_numeric(profile, omega, settings)
    return c * c


def kernel_double_integral(profile: SwitchingProfile, omega: float, panels: int = 64) -> float:
    """Literal tensor-product quadrature of the double time integral.

    Slow (``O(n**2)`` in the node count) and meant for spot checks at
    moderate ``w``; the grid is split at the ramp/plateau joins.
    """
    r, T = profile.ramp, profile.plateau
    cuts = [-0.5 * T - r, -0.5 * T, 0.5 * T, 0.5 * T + r]
    per_unit = max(panels, math.ceil(abs(omega) * (T + 2 * r) / math.pi))
    nodes, weights = [], []
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b > a:
            count = max(4, math.ceil(per_unit * (b - a) / (T + 2 * r)))
            n, q = composite_nodes(a, b, count)
            nodes.append(n)
            weights.append(q * chi(profile, n))
    t = np.concatenate(nodes)
    v = np.concatenate(weights)
    phase = omega * (t[:, None] - t[None, :])
    return float(v @ (np.cos(phase) @ v))


def _tail_integral(spec: SmearingSpec, k: float, start: float, settings: OracleSettings) -> float:
    f = lambda x: float(smearing_value(spec, x))
    if spec.shape is Shape.SHARP:
        return 0.0
    if spec.shape is Shape.GAUSSIAN:
        bound = 0.5 * erfc(start / spec.sigma)
        if bound > settings.rel_tol:
            raise TailNotCertified(f"gaussian tail {bound:.3e} exceeds {settings.rel_tol:.1e}")
        return 0.0
    if k == 0:
        value, err = sp_integrate.quad(f, start, np.inf, epsabs=1e-15, epsrel=1e-13, limit=200)
    else:
        value, err = sp_integrate.quad(
            f, start, np.inf, weight="cos", wvar=k, epsabs=1e-15, limlst=200
        )
    if err > 0.1 * settings.rel_tol:
        raise TailNotCertified(f"tail error {err:.3e} at k={k!r} exceeds {0.1 * settings.rel_tol:.1e}")
    return value


def smearing_ft_numeric(spec: SmearingSpec, k, settings: OracleSettings | None = None):
    """Numeric cosine transform ``2 int_0^inf F(x) cos(k x) dx``.

    Composite Gauss-Legendre on ``[0, ft_truncation * sigma]`` (or the
    support edge for the sharp profile); the remainder is integrated by
    QUADPACK's Fourier routine for power-law profiles and bounded by ``erfc``
    for the Gaussian.
    """
    settings = settings or OracleSettings()
    ks = np.abs(np.atleast_1d(np.asarray(k, dtype=float)))
    s = spec.sigma
    end = 0.5 * s if spec.shape is Shape.SHARP else settings.ft_truncation * s
    # resolve the core (width ~ sigma/2) and the oscillation
    panels = max(math.ceil(4 * end / s), math.ceil(end * ks.max() / math.pi), 1)
    nodes, weights = composite_nodes(0.0, end, panels)
    values = weights * smearing_value(spec, nodes)
    out = 2.0 * _cosine_sum(ks, nodes, values)
    for i, kk in enumerate(ks):
        out[i] += 2.0 * _tail_integral(spec, float(kk), end, settings)
    return out if np.ndim(k) else float(out[0])


def probability_numeric(
    bundle: Bundle,
    settings: QuadratureSettings | None = None,
    oracle_settings: OracleSettings | None = None,
) -> ProbabilityResult:
    """Same k-quadrature as the analytic path, with :func:`kernel_numeric`."""
    settings = settings or QuadratureSettings()
    profile = bundle.switching
    kernel = lambda w: kernel_numeric(profile, w, oracle_settings)
    return probability_with_kernel(bundle, settings, kernel)
