"""Oracle-versus-closed-form equivalence checks behind ``qline verify``."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import formfactor, oracle, switching
from .core import Shape, SmearingSpec, SwitchingProfile

KERNEL_TOL = 1e-6
TRANSFORM_TOL = 1e-8
NORMALIZATION_TOL = 1e-9


@dataclass
class CheckReport:
    name: str
    max_deviation: float
    tolerance: float
    worst: dict = field(default_factory=dict)
    metric: str = "rel dev"

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tolerance

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        tol = f"1e{round(math.log10(self.tolerance))}"
        text = f"{self.name} max {self.metric} < {tol}: {verdict} (observed {self.max_deviation:.3e})"
        if not self.passed:
            text += f" worst at {self.worst}"
        return text


def kernel_check(
    profiles: int = 20, omegas: int = 25, seed: int = 0, fault: float = 0.0
) -> CheckReport:
    """Closed-form kernel vs numeric double integral.

    ``(r, T)`` log-uniform in ``[0.05, 50]**2``, ``w`` log-uniform in
    ``[1e-3, 1e3]``.  The deviation is relative to
    ``max(numeric, 1e-30 (T + r)**2)``.  ``fault`` rescales the closed form
    by ``1 + fault`` to exercise the failure path.
    """
    rng = np.random.default_rng(seed)
    worst = CheckReport("kernel", 0.0, KERNEL_TOL)
    for _ in range(profiles):
        r, T = np.exp(rng.uniform(np.log(0.05), np.log(50.0), 2))
        profile = SwitchingProfile(float(r), float(T))
        w = np.exp(rng.uniform(np.log(1e-3), np.log(1e3), omegas))
        analytic = switching.kernel(profile, w) * (1.0 + fault)
        numeric = oracle.kernel_numeric(profile, w)
        dev = np.abs(analytic - numeric) / np.maximum(numeric, 1e-30 * profile.area**2)
        i = int(np.argmax(dev))
        if dev[i] > worst.max_deviation:
            worst.max_deviation = float(dev[i])
            worst.worst = {"r": float(r), "T": float(T), "omega": float(w[i])}
    return worst


def transform_check(points: int = 201, sigmas=(1e-4, 1.0)) -> CheckReport:
    """Closed-form smearing transforms vs numeric ones on ``k in [0, 50/sigma]``."""
    report = CheckReport("transform", 0.0, TRANSFORM_TOL, metric="abs dev")
    for shape in Shape:
        for sigma in sigmas:
            spec = SmearingSpec(shape, sigma)
            k = np.linspace(0.0, 50.0 / sigma, points)
            dev = np.abs(formfactor.smearing_ft(spec, k) - oracle.smearing_ft_numeric(spec, k))
            i = int(np.argmax(dev))
            if dev[i] > report.max_deviation:
                report.max_deviation = float(dev[i])
                report.worst = {"shape": shape.value, "sigma": sigma, "k": float(k[i])}
    return report


def normalization_check(sigmas=(1e-4, 1.0)) -> CheckReport:
    report = CheckReport("normalization", 0.0, NORMALIZATION_TOL, metric="abs dev")
    for shape in Shape:
        for sigma in sigmas:
            dev = abs(oracle.smearing_ft_numeric(SmearingSpec(shape, sigma), 0.0) - 1.0)
            if dev > report.max_deviation:
                report.max_deviation = dev
                report.worst = {"shape": shape.value, "sigma": sigma}
    return report
