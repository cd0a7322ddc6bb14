import json
import hashlib
import math
import warnings

import pytest
from hypothesis import given, strategies as st

from qline.core import CutoffModel, Shape, ValidationError, DEFAULTS
from qline.response import QuadratureSettings
from qline.sweep import (
    Axis,
    DegenerateComparison,
    SweepPointError,
    SweepSpec,
    figure_spec,
    input_hash,
    parse_spec_file,
    read_dataset,
    relative_difference,
    run_sweep,
)

probs = st.floats(0, 1e3)


def test_relative_difference_examples():
    assert relative_difference(0.3, 0.3) == 0
    assert relative_difference(2, 1) == 0.5
    with pytest.warns(DegenerateComparison):
        assert relative_difference(0.0, 0.0) == 0.0
    with pytest.raises(ValueError):
        relative_difference(-1, 1)


@given(probs, probs)
def test_relative_difference_properties(a, b):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateComparison)
        d = relative_difference(a, b)
        assert d == relative_difference(b, a)
    assert 0 <= d <= 1


def test_axis_validation():
    with pytest.raises(ValidationError):
        Axis("sigma", ())
    with pytest.raises(ValidationError):
        Axis("eps", (1.0, 3.0, 2.0))
    with pytest.raises(ValidationError):
        Axis("omega", (1.0, 2.0))
    assert Axis.log("r", 0.01, 100, 5).values[2] == pytest.approx(1.0)


def test_sigma_sweep_cardinality():
    spec = SweepSpec((Axis.log("sigma", 1e-5, 1e-3, 3),), "shapes", tuple(Shape),
                     {"process": "emission", "model": "exponential"})
    ds = run_sweep(spec)
    assert len(ds.records) == 3 * 6
    assert [r.pair for r in ds.records[:6]] == sorted(r.pair for r in ds.records[:6])


def test_rt_grid_cardinality():
    spec = SweepSpec((Axis.log("r", 0.01, 100, 20), Axis.log("T", 0.01, 100, 20)), "cutoffs",
                     (CutoffModel.EXPONENTIAL, CutoffModel.SHARP), {"process": "excitation"})
    ds = run_sweep(spec)
    assert len(ds.records) == 400 and {r.pair for r in ds.records} == {"ES"}


def _small(**fixed):
    return SweepSpec((Axis.log("eps", 0.5, 50, 3),), "cutoffs",
                     ("exponential", "gaussian", "sharp", "lorentzian"), {"process": "emission", **fixed})


def test_pair_ids_and_symmetry():
    fwd = run_sweep(_small())
    rev = run_sweep(SweepSpec(fwd.spec.axes, "cutoffs", tuple(reversed(fwd.spec.models)), fwd.spec.fixed))
    assert sorted({r.pair for r in fwd.records}) == ["EG", "EL", "ES", "GL", "GS", "SL"]
    a = {(r.axes, frozenset(r.pair)): r.delta for r in fwd.records}
    b = {(r.axes, frozenset(r.pair)): r.delta for r in rev.records}
    assert a == b


def test_delta_lambda_invariant():
    one = run_sweep(_small(coupling=1.0))
    ten = run_sweep(_small(coupling=10.0))
    assert [r.delta for r in one.records] == [r.delta for r in ten.records]


def test_parallel_output_identical():
    spec = _small()
    assert run_sweep(spec, workers=1).to_text() == run_sweep(spec, workers=2).to_text()


def test_failure_policy():
    settings = QuadratureSettings(max_panels=2)
    with pytest.raises(SweepPointError) as info:
        run_sweep(_small(), settings)
    assert "epsilon" in info.value.params
    spec = SweepSpec(_small().axes, "cutoffs", _small().models, _small().fixed, continue_on_error=True)
    ds = run_sweep(spec, settings)
    assert {r.status for r in ds.records} == {"failed"}
    assert all(math.isnan(r.delta) for r in ds.records)


def test_dataset_format(tmp_path):
    ds = run_sweep(_small())
    text = ds.to_text()
    assert "\r" not in text and text.endswith("\n")
    header = text.splitlines()[0].split(",")
    assert header[:8] == ["eps", "pair", "p_a", "p_b", "delta", "err_a", "err_b", "status"]
    first = text.splitlines()[1].split(",")
    mantissa = first[2].split("e")[0].replace(".", "").lstrip("-")
    assert len(mantissa) >= 12
    manifest_path = ds.write(tmp_path / "out.csv")
    manifest = json.loads(manifest_path.read_text())
    data = (tmp_path / "out.csv").read_bytes()
    assert manifest["dataset"]["sha256"] == hashlib.sha256(data).hexdigest()
    assert manifest["input_hash"] == input_hash(ds.spec, ds.settings)
    assert manifest["scales"]["r0"] == DEFAULTS.r0
    rows = read_dataset(tmp_path / "out.csv")
    assert len(rows) == len(ds.records) and rows[0]["process"] == "emission"


def test_input_hash_tracks_physics_only():
    a = _small()
    b = SweepSpec(a.axes, a.compare, a.models, a.fixed, label="other")
    s = QuadratureSettings()
    assert input_hash(a, s) == input_hash(b, s)
    assert input_hash(a, s) != input_hash(a, QuadratureSettings(rel_tol=1e-8))
    assert input_hash(a, s) != input_hash(_small(ramp=2.0), s)


def test_figure_specs():
    assert figure_spec("Fig2c").axes[0].name == "eps"
    assert figure_spec("Fig2a").compare == "shapes"
    f3 = figure_spec("Fig3")
    assert f3.fixed["ramp"] == 0.1 * DEFAULTS.r0 and f3.fixed["process"] == "excitation"
    assert [a.name for a in figure_spec("Fig5").axes] == ["r", "T"]
    assert len(figure_spec("Fig4").axes[0].values) == 20
    with pytest.raises(ValidationError):
        figure_spec("Fig9")


def test_parse_spec_file(tmp_path):
    path = tmp_path / "s.spec"
    path.write_text(
        "[fixed]\nprocess = emission\nshape = gaussian\nlambda = 2\n"
        "[axis.eps]\nmin = 0.5\nmax = 100\npoints = 4\n"
        "[axis.r]\nvalues = 0.1, 1, 10\n"
        "[models]\ncompare = cutoffs\nset = E, S\n"
        "[output]\npath = out.csv\nworkers = 2\n"
        "[quadrature]\nrel_tol = 1e-8\n"
    )
    spec, opts = parse_spec_file(path)
    assert [a.name for a in spec.axes] == ["eps", "r"]
    assert spec.axes[1].values == (0.1, 1.0, 10.0)
    assert spec.fixed["coupling"] == 2.0
    assert spec.models == (CutoffModel.EXPONENTIAL, CutoffModel.SHARP)
    assert opts == {"path": "out.csv", "workers": 2, "settings": QuadratureSettings(rel_tol=1e-8)}


@pytest.mark.parametrize("body", [
    "[fixed]\nprocess = emission\n",
    "[axis.eps]\nmin = 1\n",
    "[axis.eps]\nvalues = 1, 1\n",
    "[fixed]\nsigma = -1\n[axis.eps]\nvalues = 1 2\n",
    "not an ini file",
])
def test_parse_spec_file_rejects(tmp_path, body):
    path = tmp_path / "bad.spec"
    path.write_text(body)
    with pytest.raises(ValidationError):
        parse_spec_file(path)
