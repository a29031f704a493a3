"""Photodetection statistics, shot-noise referencing and the loss-model fit.

The quantum noise limit of a measurement is the same measurement on a
coherent state with identical mean amplitudes. Sideband structure is not
modeled; every mode stands for a single spectral mode.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .exceptions import InvalidArgument
from .gaussian_core import GaussianState, attenuate, coherent
from .observables import QuadraticObservable, quadratic_stats, total_photon_number
from .states import MAX_ZETA, CylindricalStateSpec, build

SCHEMES = ("direct", "sum", "difference")
DEFAULT_ALPHA = 1e3


class TargetUnreachable(InvalidArgument):
    """A dB target lies outside what the model can produce."""

    def __init__(self, message: str, bound_db: float):
        super().__init__(message)
        self.bound_db = bound_db


@dataclass(frozen=True)
class DetectionResult:
    mean: float
    variance: float
    qnl_variance: float
    db_vs_qnl: float
    reference_defined: bool = True

    @property
    def variance_ratio(self) -> float:
        return self.variance / self.qnl_variance if self.reference_defined else math.nan

    def to_dict(self) -> dict:
        out = asdict(self)
        out["variance_ratio"] = self.variance_ratio
        return out


def to_decibel(variance: float, reference: float) -> float:
    """``10 log10(variance / reference)``."""
    if variance <= 0 or reference <= 0:
        raise InvalidArgument("variance and reference must both be positive")
    return 10.0 * math.log10(variance / reference)


def _detect(state: GaussianState, obs: QuadraticObservable) -> DetectionResult:
    mean, var = quadratic_stats(state, obs)
    _, qnl = quadratic_stats(coherent(state.amplitudes()), obs)
    if qnl <= 1e-300:
        return DetectionResult(mean, var, qnl, math.nan, reference_defined=False)
    return DetectionResult(mean, var, qnl, to_decibel(var, qnl))


def direct_detection(state: GaussianState, modes: Sequence[int]) -> DetectionResult:
    """Total photocurrent of ``modes`` falling on one detector."""
    if not len(modes):
        raise InvalidArgument("need at least one mode to detect")
    return _detect(state, total_photon_number(state.num_modes, modes))


def sum_difference(
    state: GaussianState, modes_a: Sequence[int], modes_b: Sequence[int], sign: int = 1
) -> DetectionResult:
    """Sum (``sign=+1``) or difference (``sign=-1``) of two detectors' photocurrents."""
    if not len(modes_a) or not len(modes_b):
        raise InvalidArgument("both detectors need at least one mode")
    if set(modes_a) & set(modes_b):
        raise InvalidArgument("detector mode sets must be disjoint")
    if sign not in (1, -1):
        raise InvalidArgument("sign must be +1 or -1")
    n = state.num_modes
    obs = total_photon_number(n, modes_a) + sign * total_photon_number(n, modes_b)
    return _detect(state, obs)


def emulate_detection(
    kind: str = "azimuthal",
    s: float = 0.0,
    eta: float = 1.0,
    scheme: str = "direct",
    alpha: float = DEFAULT_ALPHA,
) -> DetectionResult:
    """Detect an amplitude-squeezed bright beam after loss ``eta`` on both modes.

    ``direct`` sends the whole beam onto one detector; ``sum`` and
    ``difference`` split it at the mode splitter into its two Schmidt modes.
    """
    if scheme not in SCHEMES:
        raise InvalidArgument(f"scheme must be one of {SCHEMES}")
    state = build(CylindricalStateSpec(kind, alpha, s))
    state = attenuate(attenuate(state, 0, eta), 1, eta)
    if scheme == "direct":
        return direct_detection(state, [0, 1])
    return sum_difference(state, [0], [1], 1 if scheme == "sum" else -1)


def fit_squeezing(
    target_db: float, scheme: str = "direct", eta: float = 1.0, kind: str = "azimuthal", alpha: float = DEFAULT_ALPHA
) -> float:
    """Squeezing ``s`` at which the emulated reading equals ``target_db``."""

    def reading(s):
        return emulate_detection(kind, s, eta, scheme, alpha).db_vs_qnl

    best = minimize_scalar(reading, bounds=(0.0, MAX_ZETA), method="bounded", options={"xatol": 1e-10})
    lo_db, hi_db = reading(best.x), reading(0.0)
    if not lo_db <= target_db <= hi_db:
        bound = lo_db if target_db < lo_db else hi_db
        raise TargetUnreachable(
            f"target {target_db} dB outside achievable range [{lo_db:.4f}, {hi_db:.4f}] dB", bound
        )
    if target_db == hi_db:
        return 0.0
    return brentq(lambda s: reading(s) - target_db, 0.0, best.x, xtol=1e-14)


def fit_loss(
    target_db: float, s: float, scheme: str = "sum", kind: str = "azimuthal", alpha: float = DEFAULT_ALPHA
) -> float:
    """Transmissivity ``eta`` at which the emulated reading equals ``target_db``."""

    def reading(eta):
        return emulate_detection(kind, s, eta, scheme, alpha).db_vs_qnl

    eta_min = 1e-9
    lossless, lossy = reading(1.0), reading(eta_min)
    lo, hi = min(lossless, lossy), max(lossless, lossy)
    if not lo <= target_db <= hi:
        bound = lo if target_db < lo else hi
        raise TargetUnreachable(
            f"target {target_db} dB outside achievable range [{lo:.4f}, {hi:.4f}] dB at s={s}", bound
        )
    if target_db == lossless:
        return 1.0
    return brentq(lambda eta: reading(eta) - target_db, eta_min, 1.0, xtol=1e-14)


def detection_scan(
    parameter: str,
    values: Sequence[float],
    kind: str = "azimuthal",
    s: float = 0.0,
    eta: float = 1.0,
    scheme: str = "direct",
    alpha: float = DEFAULT_ALPHA,
) -> list[tuple[float, DetectionResult]]:
    """Sweep ``s`` or ``eta`` with the other held fixed."""
    if parameter not in ("s", "eta"):
        raise InvalidArgument("parameter must be 's' or 'eta'")
    rows = []
    for v in values:
        kwargs = {"s": s, "eta": eta, parameter: v}
        rows.append((v, emulate_detection(kind, kwargs["s"], kwargs["eta"], scheme, alpha)))
    return rows


def scan_to_csv(rows: Sequence[tuple[float, DetectionResult]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["parameter", "mean", "variance", "db_vs_qnl"])
    for value, result in rows:
        writer.writerow([f"{value:.12g}", f"{result.mean:.12g}", f"{result.variance:.12g}", f"{result.db_vs_qnl:.12g}"])
    return buf.getvalue()


def db_to_ratio(db: float) -> float:
    return float(np.power(10.0, db / 10.0))
