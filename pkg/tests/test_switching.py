import math

import numpy as np
from hypothesis import given, strategies as st

from qline.core import SwitchingProfile
from qline.switching import (
    KernelBranch,
    chi,
    kernel,
    kernel_breakpoints,
    kernel_envelope,
    panel_width_cap,
    spectral_kernel,
    transform,
)

ramps = st.floats(0.01, 100)
plateaus = st.floats(0.0, 100)
omegas = st.floats(-1e4, 1e4, allow_nan=False)


def test_chi_examples():
    p = SwitchingProfile(1.0, 1.0)
    assert chi(p, 0.0) == 1.0
    assert chi(p, -1.5) == 0.0
    assert math.isclose(chi(p, -1.0), 0.5, abs_tol=1e-15)


@given(ramps, plateaus, st.floats(-300, 300))
def test_chi_even_bounded_supported(r, T, t):
    p = SwitchingProfile(r, T)
    v = chi(p, t)
    assert 0.0 <= v <= 1.0
    assert v == chi(p, -t)
    if abs(t) >= T / 2 + r:
        assert v == 0.0


@given(ramps, plateaus)
def test_chi_c1_at_joins(r, T):
    p = SwitchingProfile(r, T)
    h = 1e-4 * r
    for t0 in (T / 2, T / 2 + r):
        left, mid, right = chi(p, t0 - h), chi(p, t0), chi(p, t0 + h)
        assert abs(left - right) < 1e-6
        # one-sided slopes agree to O(h chi''), in units of the peak slope
        assert abs((right - mid) - (mid - left)) / h * r < 1e-3


@given(ramps, plateaus)
def test_kernel_at_zero(r, T):
    p = SwitchingProfile(r, T)
    assert math.isclose(kernel(p, 0.0), (T + r) ** 2, rel_tol=1e-14)


@given(ramps, plateaus, omegas)
def test_kernel_even_bounded(r, T, w):
    p = SwitchingProfile(r, T)
    k = kernel(p, w)
    assert k == kernel(p, -w)
    assert 0.0 <= k <= (T + r) ** 2 * (1 + 1e-14)
    assert k <= kernel_envelope(p, w) * (1 + 1e-12)


def test_kernel_sixth_power_decay():
    p = SwitchingProfile(1.0, 1.0)
    w = np.geomspace(1e2, 1e4, 2001)
    scaled = kernel(p, w) * w**6
    assert np.all(np.isfinite(scaled))
    assert scaled.max() <= 64 * math.pi**4 / 9 * 1.0001


def test_removable_points_smooth():
    p = SwitchingProfile(0.7, 1.3)
    for w0 in (0.0, math.pi / 0.7):
        w = w0 + np.array([-1e-7, 0.0, 1e-7])
        v = transform(p, w)
        assert np.all(np.isfinite(v))
        assert abs(v[0] - 2 * v[1] + v[2]) < 1e-10
    assert spectral_kernel(p, math.pi / 0.7).branch is KernelBranch.REMOVABLE_LIMIT
    assert spectral_kernel(p, 1.0).branch is KernelBranch.REGULAR


def test_breakpoints():
    assert math.pi in kernel_breakpoints(SwitchingProfile(1.0, 1.0))
    assert 2 * math.pi in kernel_breakpoints(SwitchingProfile(0.5, 2.0))
    bp = kernel_breakpoints(SwitchingProfile(1.0, 1.0))
    assert all(a < b for a, b in zip(bp, bp[1:]))
    assert panel_width_cap(SwitchingProfile(1.0, 1.0)) == math.pi / 3
