"""Model-comparison sweeps and figure datasets.

A sweep evaluates probabilities on a grid of parameter values for a set of
smearing shapes or cutoff models and reports, for every unordered pair of
models, the relative difference ``|P_a - P_b| / max(P_a, P_b)``.

Probabilities are compared as ``P / lambda**2`` so that relative
differences do not depend on the coupling, not even in the last bit.
"""
from __future__ import annotations

import csv
import hashlib
import itertools
import json
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .core import (
    DEFAULTS,
    CutoffModel,
    QlineError,
    QuadratureError,
    Shape,
    ValidationError,
    make_bundle,
    parse_enum,
)
from .response import QuadratureSettings, transition_probability

# dataset axis name -> flat bundle keyword
AXIS_PARAMETERS = {"sigma": "sigma", "eps": "epsilon", "r": "ramp", "T": "plateau"}
FIXED_COLUMNS = ("process", "omega", "lambda", "shape", "cutoff", "sigma", "eps", "r", "T")
RESULT_COLUMNS = ("pair", "p_a", "p_b", "delta", "err_a", "err_b", "status")

# model orders whose pairwise combinations give the conventional pair ids
CUTOFF_ORDER = (CutoffModel.EXPONENTIAL, CutoffModel.GAUSSIAN, CutoffModel.SHARP, CutoffModel.LORENTZIAN)
SHAPE_ORDER = (Shape.GAUSSIAN, Shape.LORENTZIAN, Shape.QUARTIC, Shape.SHARP)

FIGURES = ("Fig2a", "Fig2b", "Fig2c", "Fig2d", "Fig3", "Fig4", "Fig5")


class DegenerateComparison(UserWarning):
    """Both probabilities are zero; the relative difference is set to 0."""


class SweepPointError(QlineError):
    def __init__(self, params: dict, cause: Exception):
        super().__init__(f"evaluation failed at {params}: {cause}")
        self.params = params
        self.cause = cause


def relative_difference(p_a: float, p_b: float) -> float:
    """``|p_a - p_b| / max(p_a, p_b)``; 0 (with a warning) when both vanish."""
    if not (p_a >= 0 and p_b >= 0):
        raise ValueError("probabilities must be non-negative")
    top = max(p_a, p_b)
    if top == 0:
        warnings.warn("both probabilities are zero", DegenerateComparison, stacklevel=2)
        return 0.0
    return abs(p_a - p_b) / top


@dataclass(frozen=True)
class Axis:
    name: str
    values: tuple[float, ...]

    def __post_init__(self):
        if self.name not in AXIS_PARAMETERS:
            raise ValidationError(f"unknown axis {self.name!r} (expected one of {sorted(AXIS_PARAMETERS)})")
        if not self.values:
            raise ValidationError(f"axis {self.name} has an empty grid")
        v = np.asarray(self.values, dtype=float)
        if not (np.all(np.diff(v) > 0) or np.all(np.diff(v) < 0)):
            raise ValidationError(f"axis {self.name} grid must be strictly monotone")

    @classmethod
    def log(cls, name: str, lo: float, hi: float, points: int) -> Axis:
        if not (lo > 0 and hi > 0):
            raise ValidationError(f"log axis {name} needs positive bounds")
        return cls(name, tuple(float(x) for x in np.geomspace(lo, hi, points)))

    @classmethod
    def linear(cls, name: str, lo: float, hi: float, points: int) -> Axis:
        return cls(name, tuple(float(x) for x in np.linspace(lo, hi, points)))


@dataclass(frozen=True)
class SweepSpec:
    """What to evaluate.

    ``fixed`` holds flat :func:`qline.core.make_bundle` keywords; ``compare``
    is ``"cutoffs"`` or ``"shapes"`` and ``models`` the members to pair up.
    """

    axes: tuple[Axis, ...]
    compare: str = "cutoffs"
    models: tuple = CUTOFF_ORDER
    fixed: dict = field(default_factory=dict)
    continue_on_error: bool = False
    label: str = ""

    def __post_init__(self):
        if not self.axes:
            raise ValidationError("sweep needs at least one axis")
        if self.compare not in ("cutoffs", "shapes"):
            raise ValidationError("compare must be 'cutoffs' or 'shapes'")
        kind = CutoffModel if self.compare == "cutoffs" else Shape
        models = tuple(parse_enum(kind, m) for m in self.models)
        if len(set(models)) < 2:
            raise ValidationError("need at least two distinct models to compare")
        object.__setattr__(self, "models", models)
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ValidationError("duplicate axis")
        # fail early on bad fixed parameters
        make_bundle(**self.fixed)

    @property
    def pairs(self) -> list[tuple]:
        return list(itertools.combinations(self.models, 2))

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "compare": self.compare,
            "models": [m.value for m in self.models],
            "axes": {a.name: list(a.values) for a in self.axes},
            "fixed": {k: (v.value if hasattr(v, "value") else v) for k, v in sorted(self.fixed.items())},
            "continue_on_error": self.continue_on_error,
        }


@dataclass(frozen=True)
class ComparisonRecord:
    axes: tuple[tuple[str, float], ...]
    pair: str
    p_a: float
    p_b: float
    delta: float
    err_a: float
    err_b: float
    status: str = "ok"
    fixed: tuple[tuple[str, object], ...] = ()


@dataclass
class Dataset:
    spec: SweepSpec
    settings: QuadratureSettings
    records: list[ComparisonRecord]

    @property
    def columns(self) -> list[str]:
        axis_names = [a.name for a in self.spec.axes]
        extra = [c for c in FIXED_COLUMNS if c not in axis_names]
        return axis_names + list(RESULT_COLUMNS) + extra

    def rows(self) -> list[list[str]]:
        out = []
        for rec in self.records:
            row = [_fmt(v) for _, v in rec.axes]
            row += [rec.pair] + [_fmt(v) for v in (rec.p_a, rec.p_b, rec.delta, rec.err_a, rec.err_b)]
            row.append(rec.status)
            row += [_fmt(v) for _, v in rec.fixed]
            out.append(row)
        return out

    def to_text(self) -> str:
        lines = [",".join(self.columns)] + [",".join(r) for r in self.rows()]
        return "\n".join(lines) + "\n"

    def write(self, path: str | Path) -> Path:
        """Write the dataset and a ``<path>.manifest.json`` beside it."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        data = self.to_text().encode("ascii")
        path.write_bytes(data)
        manifest = run_manifest(self.spec, self.settings)
        manifest["dataset"] = {"file": path.name, "sha256": hashlib.sha256(data).hexdigest(), "rows": len(self.records)}
        manifest_path = path.with_name(path.name + ".manifest.json")
        manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        return manifest_path


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(value).lower()
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        value = float(value)
    if isinstance(value, (float, np.floating)):
        return "nan" if math.isnan(value) else f"{float(value):.16e}"
    return str(value)


def input_hash(spec: SweepSpec, settings: QuadratureSettings) -> str:
    """Content hash of everything that determines the numbers."""
    payload = {"spec": spec.to_dict(), "settings": asdict(settings), "version": __version__}
    payload["spec"].pop("label", None)
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def run_manifest(spec: SweepSpec, settings: QuadratureSettings) -> dict:
    from datetime import datetime, timezone

    return {
        "tool": "qline",
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "input_hash": input_hash(spec, settings),
        "spec": spec.to_dict(),
        "settings": asdict(settings),
        "scales": asdict(DEFAULTS),
    }


def _flat_params(spec: SweepSpec, point: dict, model) -> dict:
    params = dict(spec.fixed)
    for name, value in point.items():
        params[AXIS_PARAMETERS[name]] = value
    params["model" if spec.compare == "cutoffs" else "shape"] = model
    return params


def _evaluate(params: dict, settings: QuadratureSettings):
    bundle = make_bundle(**params)
    res = transition_probability(bundle, settings)
    return res.p_over_lambda_sq, res.abs_error_estimate


def _evaluate_cached(params: dict, settings: QuadratureSettings, cache):
    bundle = make_bundle(**params)
    hit = cache.lookup(bundle, settings)
    if hit is not None:
        return hit.p_over_lambda_sq, hit.abs_error_estimate
    res = transition_probability(bundle, settings)
    cache.store(bundle, settings, res)
    return res.p_over_lambda_sq, res.abs_error_estimate


def _safe(fn, params, *args):
    try:
        return fn(params, *args)
    except QuadratureError as exc:
        return exc


def run_sweep(
    spec: SweepSpec,
    settings: QuadratureSettings | None = None,
    *,
    workers: int = 1,
    cache=None,
) -> Dataset:
    """Evaluate every grid point and model, then form all pairwise differences.

    Rows are ordered by axis values (in axis order), then by pair id, so
    the output does not depend on ``workers`` or evaluation order.
    """
    settings = settings or QuadratureSettings()
    grid = [dict(zip([a.name for a in spec.axes], combo)) for combo in itertools.product(*(a.values for a in spec.axes))]
    jobs = []
    for point in grid:
        for model in spec.models:
            jobs.append((tuple(point.items()), model, _flat_params(spec, point, model)))

    if cache is not None:
        results = [_safe(_evaluate_cached, p, settings, cache) for _, _, p in jobs]
    elif workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_safe, _evaluate, p, settings) for _, _, p in jobs]
            results = [f.result() for f in futures]
    else:
        results = [_safe(_evaluate, p, settings) for _, _, p in jobs]

    table = {}
    for (point, model, params), result in zip(jobs, results):
        if isinstance(result, Exception) and not spec.continue_on_error:
            raise SweepPointError(params, result) from result
        table[(point, model)] = result

    axis_names = [a.name for a in spec.axes]
    records = []
    for point in grid:
        key = tuple(point.items())
        fixed = _fixed_columns(spec, point, axis_names)
        for a, b in spec.pairs:
            ra, rb = table[(key, a)], table[(key, b)]
            pair = a.code + b.code
            if isinstance(ra, Exception) or isinstance(rb, Exception):
                pa, ea = (math.nan, math.nan) if isinstance(ra, Exception) else ra
                pb, eb = (math.nan, math.nan) if isinstance(rb, Exception) else rb
                records.append(ComparisonRecord(key, pair, pa, pb, math.nan, ea, eb, "failed", fixed))
                continue
            (pa, ea), (pb, eb) = ra, rb
            status = "ok"
            if pa == 0 and pb == 0:
                status = "degenerate"
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", DegenerateComparison)
                    delta = relative_difference(pa, pb)
            else:
                delta = relative_difference(pa, pb)
            records.append(ComparisonRecord(key, pair, pa, pb, delta, ea, eb, status, fixed))

    records.sort(key=lambda r: (tuple(v for _, v in r.axes), r.pair))
    return Dataset(spec, settings, records)


def _fixed_columns(spec: SweepSpec, point: dict, axis_names: Sequence[str]) -> tuple:
    bundle = make_bundle(**{**spec.fixed, **{AXIS_PARAMETERS[k]: v for k, v in point.items()}})
    flat = bundle.as_dict()
    values = {
        "process": flat["process"],
        "omega": flat["omega"],
        "lambda": flat["coupling"],
        "shape": flat["shape"] if spec.compare == "cutoffs" else "*",
        "cutoff": flat["model"] if spec.compare == "shapes" else "*",
        "sigma": flat["sigma"],
        "eps": flat["epsilon"],
        "r": flat["ramp"],
        "T": flat["plateau"],
    }
    return tuple((c, values[c]) for c in FIXED_COLUMNS if c not in axis_names)


def figure_spec(figure_id: str, points: int | None = None) -> SweepSpec:
    """Pre-configured sweep matching one of the comparison figures.

    One-dimensional figures default to 41 log-spaced points, the (r, T)
    maps to a 20 x 20 log grid on ``[0.01, 100]``.
    """
    d = DEFAULTS
    n1 = points or 41
    n2 = points or 20
    emission = {"process": "emission", "sigma": d.sigma0, "epsilon": d.epsilon0, "ramp": d.r0, "plateau": d.t0}
    if figure_id == "Fig2a":
        return SweepSpec((Axis.log("sigma", 0.1 * d.sigma0, 10 * d.sigma0, n1),), "shapes", SHAPE_ORDER,
                         {**emission, "model": "exponential"}, label=figure_id)
    if figure_id == "Fig2b":
        return SweepSpec((Axis.log("eps", 0.1 * d.epsilon0, 20 * d.epsilon0, n1),), "shapes", SHAPE_ORDER,
                         {**emission, "model": "exponential"}, label=figure_id)
    if figure_id == "Fig2c":
        return SweepSpec((Axis.log("eps", 0.1 * d.epsilon0, 20 * d.epsilon0, n1),), "cutoffs", CUTOFF_ORDER,
                         {**emission, "shape": "gaussian"}, label=figure_id)
    if figure_id == "Fig2d":
        return SweepSpec((Axis.log("sigma", 0.1 * d.sigma0, 10 * d.sigma0, n1),), "cutoffs", CUTOFF_ORDER,
                         {**emission, "shape": "gaussian"}, label=figure_id)
    if figure_id == "Fig3":
        return SweepSpec((Axis.log("T", 0.01, 100.0, n1),), "cutoffs", CUTOFF_ORDER,
                         {"process": "excitation", "shape": "gaussian", "sigma": d.sigma0,
                          "epsilon": d.epsilon0, "ramp": 0.1 * d.r0}, label=figure_id)
    if figure_id in ("Fig4", "Fig5"):
        process = "excitation" if figure_id == "Fig4" else "emission"
        return SweepSpec((Axis.log("r", 0.01, 100.0, n2), Axis.log("T", 0.01, 100.0, n2)), "cutoffs",
                         CUTOFF_ORDER, {"process": process, "shape": "gaussian", "sigma": d.sigma0,
                                        "epsilon": d.epsilon0}, label=figure_id)
    raise ValidationError(f"unknown figure {figure_id!r} (expected one of {', '.join(FIGURES)})")


def figure_dataset(
    figure_id: str,
    settings: QuadratureSettings | None = None,
    *,
    points: int | None = None,
    workers: int = 1,
    cache=None,
) -> Dataset:
    return run_sweep(figure_spec(figure_id, points), settings, workers=workers, cache=cache)


def deltas_by_pair(dataset: Dataset) -> dict[str, list[float]]:
    """Group the ``delta`` column by pair id, in row order."""
    out: dict[str, list[float]] = {}
    for rec in dataset.records:
        out.setdefault(rec.pair, []).append(rec.delta)
    return out


def read_dataset(path: str | Path) -> list[dict]:
    """Parse a dataset file back into a list of column -> string dicts."""
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def parse_spec_file(path: str | Path) -> tuple[SweepSpec, dict]:
    """Read an INI-style sweep description.

    Sections: ``[fixed]`` (bundle parameters, CLI names accepted),
    ``[axis.<name>]`` with either ``values = a, b, c`` or
    ``min/max/points[/scale = log|linear]``, ``[models]`` with ``compare``
    and ``set``, ``[output]`` with ``path``, ``continue_on_error``,
    ``workers``, and an optional ``[quadrature]`` section.

    Returns the sweep description and a dict of output options (``path``, ``workers``,
    ``settings``).
    """
    import configparser

    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ValidationError(f"cannot read spec file {path}: {exc}") from exc

    aliases = {"lambda": "coupling", "eps": "epsilon", "r": "ramp", "T": "plateau", "cutoff": "model"}
    fixed = {}
    if parser.has_section("fixed"):
        for key, raw in parser.items("fixed"):
            name = aliases.get(key, key)
            fixed[name] = raw.strip() if name in ("process", "shape", "model") else _float(raw, key)

    axes = []
    for section in parser.sections():
        if not section.startswith("axis."):
            continue
        name = section[len("axis."):]
        opts = dict(parser.items(section))
        if "values" in opts:
            values = tuple(_float(v, section) for v in opts["values"].replace(",", " ").split())
            axes.append(Axis(name, values))
            continue
        try:
            lo, hi, n = _float(opts["min"], section), _float(opts["max"], section), int(opts["points"])
        except KeyError as exc:
            raise ValidationError(f"section [{section}] needs values or min/max/points") from exc
        scale = opts.get("scale", "log").strip()
        if scale not in ("log", "linear"):
            raise ValidationError(f"section [{section}]: scale must be log or linear")
        axes.append((Axis.log if scale == "log" else Axis.linear)(name, lo, hi, n))
    if not axes:
        raise ValidationError("spec has no [axis.<name>] sections")

    compare = "cutoffs"
    models: Iterable = ()
    if parser.has_section("models"):
        compare = parser.get("models", "compare", fallback="cutoffs").strip()
        raw = parser.get("models", "set", fallback="")
        models = [m.strip() for m in raw.split(",") if m.strip()]
    if not models:
        models = CUTOFF_ORDER if compare == "cutoffs" else SHAPE_ORDER

    out = dict(parser.items("output")) if parser.has_section("output") else {}
    continue_on_error = out.get("continue_on_error", "false").strip().lower() in ("1", "true", "yes")
    settings = QuadratureSettings()
    if parser.has_section("quadrature"):
        q = dict(parser.items("quadrature"))
        settings = QuadratureSettings(
            rel_tol=_float(q.get("rel_tol", settings.rel_tol), "rel_tol"),
            abs_tol=_float(q.get("abs_tol", settings.abs_tol), "abs_tol"),
            max_panels=int(q.get("max_panels", settings.max_panels)),
            tail_safety=_float(q.get("tail_safety", settings.tail_safety), "tail_safety"),
        )
    label = Path(path).stem
    spec = SweepSpec(tuple(axes), compare, tuple(models), fixed, continue_on_error, label)
    options = {"path": out.get("path"), "workers": int(out.get("workers", 1)), "settings": settings}
    return spec, options


def _float(raw, where: str) -> float:
    try:
        return float(raw)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{where}: {raw!r} is not a number") from exc
