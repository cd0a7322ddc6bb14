"""Command-line front end: ``qline <subcommand> ...``.

Exit codes: 0 success, 1 failed verification, 2 invalid input, 3 quadrature
failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__, checks
from .cache import ResultCache
from .core import (
    DEFAULTS,
    QlineError,
    QuadratureError,
    ValidationError,
    frequency_from_ghz,
    length_from_um,
    make_bundle,
    time_from_ns,
)
from .response import QuadratureSettings, coupling_from_spin_boson, transition_probability
from .sweep import FIGURES, figure_spec, parse_spec_file, run_sweep


def _add_settings(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rel-tol", type=float, default=QuadratureSettings.rel_tol)
    p.add_argument("--abs-tol", type=float, default=QuadratureSettings.abs_tol)
    p.add_argument("--max-panels", type=int, default=QuadratureSettings.max_panels)
    p.add_argument("--cache-dir", help="result cache directory (default: $QLINE_CACHE_DIR)")


def _settings(args) -> QuadratureSettings:
    return QuadratureSettings(rel_tol=args.rel_tol, abs_tol=args.abs_tol, max_panels=args.max_panels)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qline", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"qline {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("probability", help="evaluate one excitation/emission probability")
    p.add_argument("--process", default="excitation", choices=["excitation", "emission"])
    p.add_argument("--omega", type=float, default=DEFAULTS.omega0, help="qubit gap")
    p.add_argument("--shape", default="gaussian")
    p.add_argument("--sigma", type=float, default=DEFAULTS.sigma0, help="qubit size")
    p.add_argument("--cutoff", default="exponential")
    p.add_argument("--eps", type=float, default=DEFAULTS.epsilon0, help="cutoff scale")
    p.add_argument("--r", type=float, default=DEFAULTS.r0, help="ramp time")
    p.add_argument("--T", type=float, default=DEFAULTS.t0, help="plateau time")
    p.add_argument("--lambda", dest="coupling", type=float, default=1.0)
    p.add_argument("--units", choices=["natural", "ghz"], default="natural",
                   help="ghz: gap/cutoff in GHz, sigma in um, times in ns (gap reference 10 GHz)")
    p.add_argument("--convention", choices=["ordinary", "angular"], default="ordinary",
                   help="read the 10 GHz reference as an ordinary or angular frequency")
    p.add_argument("--csv", action="store_true", help="also print a CSV header and row")
    _add_settings(p)

    p = sub.add_parser("sweep", help="run a sweep described by a spec file")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", help="dataset path (overrides [output] path)")
    p.add_argument("--workers", type=int)
    p.add_argument("--cache-dir")

    p = sub.add_parser("figure", help="regenerate a figure dataset")
    p.add_argument("figure", choices=FIGURES)
    p.add_argument("--out", required=True)
    p.add_argument("--points", type=int, help="points per axis")
    p.add_argument("--workers", type=int, default=1)
    _add_settings(p)

    p = sub.add_parser("verify", help="check closed forms against brute-force oracles")
    p.add_argument("--points", type=int, default=20, help="random switching profiles")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inject-kernel-fault", type=float, default=0.0, help=argparse.SUPPRESS)

    p = sub.add_parser("convert-coupling", help="spin-boson alpha -> coupling lambda")
    p.add_argument("--alpha", type=float, required=True)
    return parser


def cmd_probability(args) -> int:
    omega, eps, sigma, r, T = args.omega, args.eps, args.sigma, args.r, args.T
    if args.units == "ghz":
        omega, eps = frequency_from_ghz(omega), frequency_from_ghz(eps)
        sigma = length_from_um(sigma, args.convention)
        r, T = time_from_ns(r, args.convention), time_from_ns(T, args.convention)
    bundle = make_bundle(omega, args.coupling, args.process, args.shape, sigma, args.cutoff, eps, r, T)
    settings = _settings(args)
    cache = ResultCache.from_env(args.cache_dir)
    res = cache.lookup(bundle, settings) if cache else None
    if res is None:
        res = transition_probability(bundle, settings)
        if cache:
            cache.store(bundle, settings, res)
    print(f"p = {res.p:.16e}")
    print(f"p/lambda^2 = {res.p_over_lambda_sq:.16e}")
    print(f"abs error estimate = {res.abs_error_estimate:.3e}")
    if args.csv:
        flat = bundle.as_dict()
        cols = ["process", "omega", "lambda", "shape", "sigma", "cutoff", "eps", "r", "T",
                "p", "p_over_lambda_sq", "abs_error"]
        vals = [flat["process"], flat["omega"], flat["coupling"], flat["shape"], flat["sigma"],
                flat["model"], flat["epsilon"], flat["ramp"], flat["plateau"],
                res.p, res.p_over_lambda_sq, res.abs_error_estimate]
        print(",".join(cols))
        print(",".join(v if isinstance(v, str) else f"{v:.16e}" for v in vals))
    return 0


def cmd_sweep(args) -> int:
    spec, options = parse_spec_file(args.spec)
    out = args.out or options["path"]
    if not out:
        raise ValidationError("no output path: give --out or [output] path")
    out = Path(out)
    if not out.is_absolute() and not args.out:
        out = Path(args.spec).parent / out
    workers = args.workers or options["workers"]
    cache = ResultCache.from_env(args.cache_dir)
    dataset = run_sweep(spec, options["settings"], workers=workers, cache=cache)
    manifest = dataset.write(out)
    print(f"wrote {len(dataset.records)} rows to {out} (manifest {manifest.name})")
    return 0


def cmd_figure(args) -> int:
    spec = figure_spec(args.figure, args.points)
    cache = ResultCache.from_env(args.cache_dir)
    dataset = run_sweep(spec, _settings(args), workers=args.workers, cache=cache)
    manifest = dataset.write(args.out)
    print(f"wrote {len(dataset.records)} rows to {args.out} (manifest {manifest.name})")
    return 0


def cmd_verify(args) -> int:
    omegas = 25 if args.points >= 20 else 10
    transform_points = 201 if args.points >= 20 else 41
    reports = [
        checks.kernel_check(args.points, omegas, args.seed, args.inject_kernel_fault),
        checks.transform_check(transform_points),
        checks.normalization_check(),
    ]
    for rep in reports:
        print(rep.line())
    return 0 if all(r.passed for r in reports) else 1


def cmd_convert_coupling(args) -> int:
    print(f"lambda = {coupling_from_spin_boson(args.alpha):.16e}")
    return 0


COMMANDS = {
    "probability": cmd_probability,
    "sweep": cmd_sweep,
    "figure": cmd_figure,
    "verify": cmd_verify,
    "convert-coupling": cmd_convert_coupling,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QuadratureError as exc:
        print(f"quadrature failure: {exc}", file=sys.stderr)
        return 3
    except QlineError as exc:
        # a failed sweep point wraps its cause
        cause = getattr(exc, "cause", None)
        print(f"error: {exc}", file=sys.stderr)
        return 3 if isinstance(cause, QuadratureError) else 2


if __name__ == "__main__":
    sys.exit(main())
