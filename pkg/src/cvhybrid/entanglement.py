"""Duan-type inseparability test on Stokes operators of the two split arms.

Arm ``a`` carries mode 0 and arm ``b`` mode 1 of a two-mode state from
:mod:`cvhybrid.states`. Each arm is combined with an auxiliary coherent beam
(an orthogonal polarization for ``pol``, an orthogonal spatial mode for
``spa``); the auxiliary beam is the first mode of each arm's Stokes pair.

For separable states

    V(S_mu^a + S_mu^b) + V(S_nu^a - S_nu^b) >= |<[S_mu^a, S_nu^a]>| + |<[S_mu^b, S_nu^b]>|,

and the right-hand side is ``2 (|c_a| + |c_b|)`` with ``c = <[S_mu, S_nu]>/(2i)``,
which is ``4 |c|`` for a symmetric pair. Reports carry the left-hand side
divided by that bound, so entanglement shows as ``lhs < 1``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exceptions import InvalidArgument
from .gaussian_core import GaussianState
from .observables import (
    DOFS,
    commutator_expectation,
    linearized_stokes,
    quadratic_covariance,
    quadratic_stats,
    stokes_observable,
)
from .states import CylindricalStateSpec, arm_phases, build

PAIRS = ((1, 2), (1, 3), (2, 3))
SYMMETRY_RTOL = 1e-6
DEFAULT_LO = 1e4


@dataclass(frozen=True)
class MeasurementCombination:
    mu: int = 2
    nu: int = 3
    dof_a: str = "spa"
    dof_b: str = "pol"

    def __post_init__(self):
        if (self.mu, self.nu) not in PAIRS:
            raise InvalidArgument(f"(mu, nu) must be one of {PAIRS}, got {(self.mu, self.nu)}")
        for dof in (self.dof_a, self.dof_b):
            if dof not in DOFS:
                raise InvalidArgument(f"dof must be one of {DOFS}, got {dof!r}")

    @property
    def hybrid(self) -> bool:
        return self.dof_a != self.dof_b

    @property
    def label(self) -> str:
        return f"{self.dof_a}/{self.dof_b}"


def dof_combinations(mu: int = 2, nu: int = 3) -> list[MeasurementCombination]:
    """Polarization, spatial and hybrid measurement sets for one Stokes pair."""
    return [
        MeasurementCombination(mu, nu, "pol", "pol"),
        MeasurementCombination(mu, nu, "spa", "spa"),
        MeasurementCombination(mu, nu, "spa", "pol"),
    ]


@dataclass(frozen=True)
class LinearizedLO:
    """Strong auxiliary beams; S2 and S3 become scaled signal quadratures."""

    lo_amplitude: float = DEFAULT_LO

    def __post_init__(self):
        if self.lo_amplitude <= 0:
            raise InvalidArgument("lo_amplitude must be positive")


@dataclass(frozen=True)
class ExactLO:
    """Auxiliary coherent beams of amplitude ``aux_amplitude`` with exact quadratic Stokes statistics."""

    aux_amplitude: float

    def __post_init__(self):
        if self.aux_amplitude <= 0:
            raise InvalidArgument("aux_amplitude must be positive")


@dataclass(frozen=True)
class EntanglementReport:
    lhs: float
    bound: float
    entangled: bool
    s: float
    combination: MeasurementCombination
    stokes_cov_bound: float
    variances: tuple[float, float] = (math.nan, math.nan)
    degenerate: bool = False
    warn_asymmetric: bool = False
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "mu": self.combination.mu,
            "nu": self.combination.nu,
            "dof_a": self.combination.dof_a,
            "dof_b": self.combination.dof_b,
            "lhs": self.lhs,
            "bound": self.bound,
            "entangled": self.entangled,
            "stokes_cov_bound": self.stokes_cov_bound,
            "degenerate": self.degenerate,
            "warn_asymmetric": self.warn_asymmetric,
        }


def with_auxiliary_beams(state: GaussianState, amplitude: float, phases: Sequence[float]) -> GaussianState:
    """Append one coherent auxiliary mode per arm (modes 2 and 3)."""
    if state.num_modes != 2:
        raise InvalidArgument("expected the two signal modes")
    aux = amplitude * np.exp(1j * np.asarray(phases, dtype=float))
    mean = np.concatenate([state.mean, [2 * aux[0].real, 2 * aux[0].imag, 2 * aux[1].real, 2 * aux[1].imag]])
    cov = np.eye(8)
    cov[:4, :4] = state.cov
    return GaussianState(4, mean, cov)


def _default_phases(state: GaussianState) -> tuple[float, float]:
    amps = state.amplitudes()[:2]
    return tuple(float(np.angle(a)) if abs(a) > 1e-12 else 0.0 for a in amps)


def arm_observables(
    state: GaussianState,
    comb: MeasurementCombination,
    lo_model: LinearizedLO | ExactLO,
    lo_phases: Sequence[float] | None = None,
):
    """The measured state and ``((S_mu^a, S_nu^a), (S_mu^b, S_nu^b))``."""
    if state.num_modes not in (2, 4):
        raise InvalidArgument("state must hold the two signal modes, optionally followed by two auxiliary modes")
    phases = _default_phases(state) if lo_phases is None else tuple(lo_phases)
    dofs = (comb.dof_a, comb.dof_b)
    if isinstance(lo_model, LinearizedLO):
        if comb.mu == 1:
            raise InvalidArgument("S1 has no linearized form; use ExactLO for pairs involving S1")
        signal = state.reduced([0, 1])
        arms = tuple(
            tuple(linearized_stokes(dofs[k], m, lo_model.lo_amplitude, k, 2, phases[k]) for m in (comb.mu, comb.nu))
            for k in (0, 1)
        )
        return signal, arms
    if isinstance(lo_model, ExactLO):
        full = state if state.num_modes == 4 else with_auxiliary_beams(state, lo_model.aux_amplitude, phases)
        arms = tuple(
            tuple(stokes_observable(dofs[k], m, (2 + k, k), 4) for m in (comb.mu, comb.nu)) for k in (0, 1)
        )
        return full, arms
    raise InvalidArgument(f"unknown LO model {lo_model!r}")


def duan_criterion(
    state: GaussianState,
    comb: MeasurementCombination,
    lo_model: LinearizedLO | ExactLO = LinearizedLO(),
    lo_phases: Sequence[float] | None = None,
    s: float = math.nan,
) -> EntanglementReport:
    """Normalized Duan sum for one measurement combination.

    ``lo_phases`` fixes the auxiliary-beam phase of each arm. By default each
    arm's auxiliary beam is locked to that arm's mean field (phase 0 for an
    arm with no mean field).
    """
    measured, ((ma, na), (mb, nb)) = arm_observables(state, comb, lo_model, lo_phases)
    _, v_plus = quadratic_stats(measured, ma + mb)
    _, v_minus = quadratic_stats(measured, na - nb)
    c_a = commutator_expectation(measured, ma, na)
    c_b = commutator_expectation(measured, mb, nb)
    sym_a = quadratic_covariance(measured, ma, na)
    sym_b = quadratic_covariance(measured, mb, nb)
    scale = max(abs(c_a), abs(c_b), abs(sym_a), abs(sym_b), 1.0)
    warn = abs(c_a - c_b) > SYMMETRY_RTOL * scale or abs(sym_a - sym_b) > SYMMETRY_RTOL * scale
    raw = v_plus + v_minus
    norm = 2.0 * (abs(c_a) + abs(c_b))
    cov_bound = 0.5 * (c_a + c_b)
    if norm <= 1e-12 * max(raw, 1.0):
        return EntanglementReport(
            math.nan, 1.0, False, s, comb, cov_bound, (v_plus, v_minus), degenerate=True, warn_asymmetric=warn
        )
    lhs = raw / norm
    return EntanglementReport(
        lhs, 1.0, bool(0.0 <= lhs < 1.0), s, comb, cov_bound, (v_plus, v_minus), warn_asymmetric=warn
    )


def closed_form(s: float) -> float:
    """Strong-auxiliary-beam Duan value ``e^{-s} cosh(s)`` for squeezing ``s``."""
    if s < 0:
        raise InvalidArgument("s must be non-negative")
    return 0.5 * (1.0 + math.exp(-2.0 * s))


def scan(
    kind: str,
    s_values: Sequence[float],
    combinations: Sequence[MeasurementCombination],
    lo_model: LinearizedLO | ExactLO = LinearizedLO(),
    alpha: complex = 1.0,
) -> list[EntanglementReport]:
    """One report per ``(s, combination)``, ``s`` outer.

    The state is ``D(alpha) S(s)`` on the composite mode, so ``s`` is the
    magnitude of the squeezing parameter; auxiliary beams are phase-locked
    per :func:`cvhybrid.states.arm_phases`.
    """
    if not len(s_values):
        raise InvalidArgument("s_values must be non-empty")
    reports = []
    for s in s_values:
        if s < 0:
            raise InvalidArgument("s must be non-negative")
        state = build(CylindricalStateSpec(kind, alpha, s))
        phases = arm_phases(kind, s, alpha)
        for comb in combinations:
            reports.append(duan_criterion(state, comb, lo_model, phases, s=float(s)))
    return reports


def equal_amplitude_probe(
    kind: str,
    s: float,
    alpha_signal: float,
    alpha_aux: float,
    comb: MeasurementCombination = MeasurementCombination(1, 3, "spa", "pol"),
) -> EntanglementReport:
    """Exact-Stokes test with auxiliary beams comparable to the signal.

    ``alpha_signal`` is the mean amplitude of each arm, so the composite
    mode carries ``sqrt(2) * alpha_signal``.
    """
    if alpha_aux <= 0:
        raise InvalidArgument("alpha_aux must be positive")
    alpha = math.sqrt(2.0) * alpha_signal
    state = build(CylindricalStateSpec(kind, alpha, s))
    return duan_criterion(state, comb, ExactLO(alpha_aux), arm_phases(kind, s, alpha or 1.0), s=float(s))


REPORT_COLUMNS = ["s", "mu", "nu", "dof_a", "dof_b", "lhs", "bound", "entangled", "warn_asymmetric"]


def reports_to_csv(reports: Sequence[EntanglementReport], with_closed_form: bool = False) -> str:
    """CSV with 12 significant digits; optionally adds ``closed_form`` and ``rel_gap``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = list(REPORT_COLUMNS)
    if with_closed_form:
        header += ["closed_form", "rel_gap"]
    writer.writerow(header)
    for r in reports:
        row = [
            f"{r.s:.12g}",
            r.combination.mu,
            r.combination.nu,
            r.combination.dof_a,
            r.combination.dof_b,
            f"{r.lhs:.12g}",
            f"{r.bound:.12g}",
            str(r.entangled).lower(),
            str(r.warn_asymmetric).lower(),
        ]
        if with_closed_form:
            ref = closed_form(r.s)
            row += [f"{ref:.12g}", f"{abs(r.lhs - ref) / ref:.12g}"]
        writer.writerow(row)
    return buf.getvalue()
