import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qline.core import CutoffModel, CutoffSpec, Shape, SmearingSpec
from qline.formfactor import (
    cutoff_breakpoints,
    cutoff_value,
    effective_form_factor,
    effective_weight,
    smearing_ft,
    smearing_value,
)

shapes = st.sampled_from(list(Shape))
models = st.sampled_from(list(CutoffModel))
sigmas = st.floats(1e-5, 10.0)
ks = st.floats(-1e4, 1e4, allow_nan=False)


def test_smearing_values():
    assert math.isclose(smearing_value(SmearingSpec(Shape.GAUSSIAN, 1.0), 0.0), 1 / math.sqrt(math.pi))
    assert smearing_value(SmearingSpec(Shape.SHARP, 2.0), 3.0) == 0.0
    # sqrt(2) a**3 / pi / a**4 with a = 1/2
    assert math.isclose(smearing_value(SmearingSpec(Shape.QUARTIC, 1.0), 0.0), 2 * math.sqrt(2) / math.pi)


@pytest.mark.parametrize("shape", [Shape.GAUSSIAN, Shape.LORENTZIAN])
def test_ft_e_inverse(shape):
    assert math.isclose(smearing_ft(SmearingSpec(shape, 2.0), 1.0), math.exp(-1), rel_tol=1e-15)


@given(shapes, sigmas)
def test_ft_normalized(shape, sigma):
    assert smearing_ft(SmearingSpec(shape, sigma), 0.0) == 1.0


@given(shapes, sigmas, ks)
def test_ft_even_and_bounded(shape, sigma, k):
    spec = SmearingSpec(shape, sigma)
    assert smearing_ft(spec, k) == smearing_ft(spec, -k)
    assert abs(smearing_ft(spec, k)) <= 1.0


@given(shapes, sigmas, st.floats(0, 100))
def test_density_even_nonnegative(shape, sigma, x):
    spec = SmearingSpec(shape, sigma)
    assert smearing_value(spec, x) == smearing_value(spec, -x) >= 0


def test_sharp_ft_series_branch_accurate():
    # either side of the series switch at k sigma / 2 = 1e-4
    spec = SmearingSpec(Shape.SHARP, 1.0)
    k = np.array([1e-9, 1.999e-4, 2.0e-4, 2.001e-4, 1e-2])
    u = k / 2
    np.testing.assert_allclose(smearing_ft(spec, k), np.sin(u) / u, rtol=2e-16)


def test_cutoff_examples():
    for model in CutoffModel:
        assert cutoff_value(CutoffSpec(model, 5.0), 1.0, 0.5) == 1.0
    assert math.isclose(cutoff_value(CutoffSpec(CutoffModel.GAUSSIAN, 5.0), 1.0, 6.0), math.exp(-0.5))
    assert cutoff_value(CutoffSpec(CutoffModel.SHARP, 5.0), 1.0, 6.001) == 0.0
    assert cutoff_value(CutoffSpec(CutoffModel.LORENTZIAN, 5.0), 1.0, 6.0) == 0.5
    assert math.isclose(cutoff_value(CutoffSpec(CutoffModel.EXPONENTIAL, 5.0), 1.0, 6.0),
                        math.exp(-1 / math.sqrt(2)))


@given(models, st.floats(0.01, 100), st.floats(0.01, 10), ks)
def test_cutoff_even_in_unit_interval(model, eps, omega, k):
    spec = CutoffSpec(model, eps)
    c = cutoff_value(spec, omega, k)
    assert 0.0 <= c <= 1.0
    assert c == cutoff_value(spec, omega, -k)
    if abs(k) < omega:
        assert c == 1.0


@given(models, st.floats(0.01, 100), st.floats(0.01, 10))
def test_cutoff_nonincreasing_above_gap(model, eps, omega):
    k = np.linspace(omega, omega + 20 * eps, 4001)
    c = cutoff_value(CutoffSpec(model, eps), omega, k)
    assert np.all(np.diff(c) <= 0)


@given(models, st.floats(0.01, 10), st.floats(0.01, 10), st.floats(0, 100))
def test_cutoff_nondecreasing_in_eps(model, eps, omega, k):
    lo = cutoff_value(CutoffSpec(model, eps), omega, k)
    hi = cutoff_value(CutoffSpec(model, 2 * eps), omega, k)
    assert hi >= lo


def test_cutoff_breakpoints():
    assert cutoff_breakpoints(CutoffSpec(CutoffModel.SHARP, 5.0), 1.0) == [1.0, 6.0]
    assert cutoff_breakpoints(CutoffSpec(CutoffModel.GAUSSIAN, 5.0), 1.0) == [1.0]


@given(shapes, models, sigmas, st.floats(0.1, 50), ks)
def test_effective_weight_composition(shape, model, sigma, eps, k):
    sm, cu = SmearingSpec(shape, sigma), CutoffSpec(model, eps)
    pt = effective_form_factor(sm, cu, 1.0, k)
    assert pt.effective_weight == pt.smearing_ft**2 * pt.cutoff_weight**2
    assert effective_weight(sm, cu, 1.0, k) == effective_weight(sm, cu, 1.0, -k)


def test_effective_weight_examples():
    sm = SmearingSpec(Shape.GAUSSIAN, 1e-4)
    for model in CutoffModel:
        assert effective_weight(sm, CutoffSpec(model, 5.0), 1.0, 0.0) == 1.0
    assert effective_weight(sm, CutoffSpec(CutoffModel.SHARP, 5.0), 1.0, 7.0) == 0.0
    w = effective_weight(sm, CutoffSpec(CutoffModel.GAUSSIAN, 5.0), 1.0, 6.0)
    assert math.isclose(w, math.exp(-1) * math.exp(-0.5 * (1e-4 * 6) ** 2), rel_tol=1e-15)
    assert abs(w / math.exp(-1) - 1) < 1e-6
