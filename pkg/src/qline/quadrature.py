"""Vectorised adaptive Gauss-Kronrod (G10/K21) quadrature on panels.

The integrand is evaluated for many panels at once, which matters because
the probability integrand is cheap per point but needs thousands of
oscillation-resolving panels.  Panels are seeded at declared breakpoints,
capped in width, then bisected by largest error until the global estimate
meets ``max(rel_tol * |I|, abs_tol)``.

Totals are summed with :func:`math.fsum` over panels sorted by position, so
results do not depend on evaluation order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import MaxPanelsExceeded

# Kronrod 21-point abscissae (descending, last one is 0) and weights; the
# odd-indexed abscissae are the 10-point Gauss-Legendre nodes.
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208292526127,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

# full 21-node rule on [-1, 1], nodes ascending
NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(21)
GAUSS_WEIGHTS[1:10:2] = _WG
GAUSS_WEIGHTS[11:20:2] = _WG[::-1]

_ROUNDOFF = 50.0 * np.finfo(float).eps


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    panels: int


def gauss_kronrod(f: Callable[[np.ndarray], np.ndarray], a: np.ndarray, b: np.ndarray):
    """Apply the G10/K21 pair to panels ``[a_i, b_i]``.

    Returns ``(kronrod, error, at_floor)``; the error is ``|K21 - G10|``,
    floored at a roundoff level of the panel's absolute integral, and
    ``at_floor`` marks panels whose error is that floor.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[:, None] + half[:, None] * NODES[None, :]
    y = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    kron = half * (y @ KRONROD_WEIGHTS)
    gauss = half * (y @ GAUSS_WEIGHTS)
    absint = np.abs(half) * (np.abs(y) @ KRONROD_WEIGHTS)
    floor = _ROUNDOFF * absint
    raw = np.abs(kron - gauss)
    return kron, np.maximum(raw, floor), raw <= floor


def seed_panels(breakpoints: Sequence[float], max_width: float | None = None) -> np.ndarray:
    """Split ``[min, max]`` of the sorted unique breakpoints into capped panels.

    Returns an ``(n, 2)`` array of panel edges ordered by position.
    """
    edges = np.unique(np.asarray(breakpoints, dtype=float))
    if edges.size < 2:
        raise ValueError("need at least two distinct breakpoints")
    lefts, rights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        n = 1 if not max_width else max(1, math.ceil((hi - lo) / max_width))
        cuts = np.linspace(lo, hi, n + 1)
        cuts[-1] = hi
        lefts.append(cuts[:-1])
        rights.append(cuts[1:])
    return np.column_stack([np.concatenate(lefts), np.concatenate(rights)])


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    breakpoints: Sequence[float],
    *,
    max_width: float | None = None,
    rel_tol: float = 1e-9,
    abs_tol: float = 1e-30,
    max_panels: int = 1_000_000,
) -> QuadResult:
    """Integrate vectorised ``f`` over ``[min(breakpoints), max(breakpoints)]``.

    Raises
    ------
    MaxPanelsExceeded
        If the tolerance cannot be met within ``max_panels`` panels; the
        exception carries the partial estimate and its error bound.
    """
    panels = seed_panels(breakpoints, max_width)
    if len(panels) > max_panels:
        raise MaxPanelsExceeded(math.nan, math.inf, len(panels))
    values, errors, floors = gauss_kronrod(f, panels[:, 0], panels[:, 1])

    while True:
        total = math.fsum(values)
        err = math.fsum(errors)
        target = max(rel_tol * abs(total), abs_tol)
        if err <= target:
            break
        # panels whose error sits at the roundoff floor cannot improve; once
        # the rest is below the accumulated floor the target is out of reach
        active = np.flatnonzero(~floors)
        if active.size == 0:
            break
        floor_total = math.fsum(errors[floors])
        if err - floor_total <= floor_total:
            break
        order = active[np.lexsort((panels[active, 0], -errors[active]))]
        excess = err - 0.5 * target
        cumulative = np.cumsum(errors[order])
        n_split = int(np.searchsorted(cumulative, excess) + 1)
        chosen = np.sort(order[: min(n_split, order.size)])
        if len(panels) + chosen.size > max_panels:
            raise MaxPanelsExceeded(total, err, len(panels))

        left, right = panels[chosen, 0], panels[chosen, 1]
        mid = 0.5 * (left + right)
        degenerate = (mid <= left) | (mid >= right)
        floors[chosen[degenerate]] = True
        chosen, left, right, mid = (
            chosen[~degenerate], left[~degenerate], right[~degenerate], mid[~degenerate]
        )
        if chosen.size == 0:
            continue
        new_a = np.concatenate([left, mid])
        new_b = np.concatenate([mid, right])
        v, e, fl = gauss_kronrod(f, new_a, new_b)
        n = chosen.size
        keep = np.ones(len(panels), dtype=bool)
        keep[chosen] = False
        panels = np.concatenate([panels[keep], np.column_stack([left, mid]), np.column_stack([mid, right])])
        values = np.concatenate([values[keep], v[:n], v[n:]])
        errors = np.concatenate([errors[keep], e[:n], e[n:]])
        floors = np.concatenate([floors[keep], fl[:n], fl[n:]])
        # restore positional order so ties and sums stay order-independent
        idx = np.argsort(panels[:, 0], kind="stable")
        panels, values, errors, floors = panels[idx], values[idx], errors[idx], floors[idx]

    return QuadResult(math.fsum(values), math.fsum(errors), len(panels))
