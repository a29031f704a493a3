"""Acceptance criteria, one test each.

Every test appends a ``PASS``/``FAIL`` line to the acceptance summary that
pytest prints at the end of the run::

    python3 -m pytest tests/test_acceptance.py -v
"""

import itertools
import json
import time

import numpy as np
import pytest

from cvhybrid import gaussian_core as gc
from cvhybrid.cli import main
from cvhybrid.entanglement import (
    LinearizedLO,
    MeasurementCombination,
    closed_form,
    dof_combinations,
    scan,
    with_auxiliary_beams,
)
from cvhybrid.fock import ConvergedOracle
from cvhybrid.observables import linearized_stokes, photon_number, quadratic_stats, quadrature, stokes_observable
from cvhybrid.states import KINDS, CylindricalStateSpec, arm_phases, build, verify_factorization
from cvhybrid.vector_modes import schmidt_decompose, standard_mode, to_circular_oam

from helpers import random_oracle_recipe, random_transforms

H = np.sqrt(0.5)


def record(log, number, ok, detail):
    log.append(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
    assert ok, detail


def test_criterion_1_factorization(acceptance_log):
    alphas = [0, 1, 3, 1 + 2j]
    zetas = [0, 0.3, 0.8, 0.5 * np.exp(1j * np.pi / 3)]
    start = time.perf_counter()
    worst = max(verify_factorization(k, a, z) for k, a, z in itertools.product(KINDS, alphas, zetas))
    elapsed = time.perf_counter() - start
    record(acceptance_log, 1, worst < 1e-10 and elapsed < 1.0,
           f"max factorization deviation {worst:.2e} (< 1e-10) in {elapsed:.3f} s (< 1 s)")


def test_criterion_2_closed_form_scan(acceptance_log):
    s_values = np.linspace(0, 2, 21)
    start = time.perf_counter()
    reports = scan("azimuthal", s_values, [MeasurementCombination(2, 3, "spa", "pol")], LinearizedLO(1e4))
    elapsed = time.perf_counter() - start
    gap = max(abs(r.lhs - closed_form(r.s)) / closed_form(r.s) for r in reports)
    entangled = all(r.entangled for r in reports if r.s > 0)
    boundary = abs(reports[0].lhs - reports[0].bound)
    ok = gap < 1e-6 and entangled and boundary < 1e-9 and elapsed < 5.0
    record(acceptance_log, 2, ok,
           f"max rel gap {gap:.2e} (< 1e-6), s>0 all entangled={entangled}, "
           f"s=0 distance to bound {boundary:.1e} (< 1e-9), {elapsed:.3f} s (< 5 s)")


def test_criterion_3_three_way_entanglement(acceptance_log):
    reports = scan("azimuthal", [0.5], dof_combinations(2, 3))
    lhs = [r.lhs for r in reports]
    spread = max(lhs) - min(lhs)
    ok = all(r.entangled for r in reports) and spread < 1e-9
    labels = ", ".join(f"{r.combination.label}={r.lhs:.9f}" for r in reports)
    record(acceptance_log, 3, ok, f"s=0.5 {labels}; spread {spread:.1e} (< 1e-9)")


def test_criterion_4_schmidt_structure(acceptance_log):
    checks = []
    expected = {"radial": np.array([[0, H], [H, 0]]), "azimuthal": np.array([[0, H], [-H, 0]])}
    worst_sv = worst_pattern = worst_k = 0.0
    for kind in KINDS:
        c = standard_mode(kind)
        dec = schmidt_decompose(c)
        worst_k = max(worst_k, abs(dec.schmidt_rank - 2.0), float(np.max(np.abs(dec.lambdas - 0.5))))
        out = to_circular_oam(c)
        phase = out.coeffs[0, 1] / abs(out.coeffs[0, 1])
        worst_pattern = max(worst_pattern, float(np.max(np.abs(out.coeffs / phase - expected[kind]))))
        sv_in = np.linalg.svd(c.coeffs, compute_uv=False)
        sv_out = np.linalg.svd(out.coeffs, compute_uv=False)
        worst_sv = max(worst_sv, float(np.max(np.abs(sv_in - sv_out))))
    checks = worst_k < 1e-12 and worst_pattern < 1e-12 and worst_sv < 1e-12
    record(acceptance_log, 4, checks,
           f"|K-2|,|lambda-1/2| <= {worst_k:.1e}; circular/OAM pattern error {worst_pattern:.1e}; "
           f"singular value change {worst_sv:.1e} (all < 1e-12)")


def test_criterion_5_fock_oracle(acceptance_log):
    rng = np.random.default_rng(5)
    observables = [quadrature(2, m, w) for m in (0, 1) for w in "xp"]
    observables += [photon_number(2, 0), photon_number(2, 1)]
    observables += [stokes_observable("pol", mu, (0, 1), 2) for mu in range(4)]
    recipes, worst, worst_change = 16, 0.0, 0.0
    start = time.perf_counter()
    for _ in range(recipes):
        recipe = random_oracle_recipe(rng, length=4, max_alpha=1.0, max_zeta=0.5)
        state = gc.apply_recipe(gc.vacuum(2), recipe)
        oracle = ConvergedOracle(recipe, 2, n_max=50)
        for obs in observables:
            worst = max(worst, float(np.max(np.abs(np.subtract(quadratic_stats(state, obs), oracle.stats(obs))))))
        worst_change = max(worst_change, oracle.max_change)
    elapsed = time.perf_counter() - start
    ok = worst < 1e-8 and elapsed < 60.0
    record(acceptance_log, 5, ok,
           f"{recipes} recipes x {len(observables)} observables, max |Gaussian - Fock| {worst:.1e} (< 1e-8); "
           f"truncation converged (max relative change n_max 50->60: {worst_change:.1e}); {elapsed:.1f} s (< 60 s)")


def test_criterion_6_physicality_and_symplecticity(acceptance_log):
    rng = np.random.default_rng(6)
    physical, worst_det, worst_sympl = True, 0.0, 0.0
    for k in range(1000):
        n = int(rng.integers(1, 4))
        lossy = k % 4 == 0
        state = gc.vacuum(n)
        for entry, transform in random_transforms(rng, n, int(rng.integers(1, 8))):
            worst_sympl = max(worst_sympl, transform.symplectic_error())
            state = gc.apply_recipe(state, [entry])
            if lossy and rng.uniform() < 0.4:
                state = gc.attenuate(state, int(rng.integers(n)), float(rng.uniform()))
        physical &= gc.is_physical(state, 1e-9)
        if not lossy:
            worst_det = max(worst_det, abs(np.linalg.det(state.cov) - 1.0))
    ok = physical and worst_det < 1e-9 and worst_sympl < 1e-10
    record(acceptance_log, 6, ok,
           f"1000 sequences physical={physical}; lossless |det-1| {worst_det:.1e} (< 1e-9); "
           f"max |S^T Omega S - Omega| {worst_sympl:.1e} (< 1e-10)")


def test_criterion_7_detection_fit(acceptance_log, capsys):
    assert main(["detect", "--fit-db", "-0.6", "--scheme", "direct"]) == 0
    direct = json.loads(capsys.readouterr().out)
    s = direct["fit"]["value"]
    assert main(["detect", "--fit-db", "-0.5", "--scheme", "sum", "--s", repr(s)]) == 0
    split = json.loads(capsys.readouterr().out)
    eta = split["fit"]["value"]
    db_direct, db_sum = direct["result"]["db_vs_qnl"], split["result"]["db_vs_qnl"]
    verdicts = [r.entangled for r in scan("azimuthal", [s], dof_combinations(2, 3), LinearizedLO(1e4))]
    ok = abs(db_direct + 0.6) <= 0.01 and abs(db_sum + 0.5) <= 0.01 and all(verdicts)
    record(acceptance_log, 7, ok,
           f"fitted s={s:.6f} gives direct {db_direct:.4f} dB; fitted eta={eta:.5f} gives sum {db_sum:.4f} dB "
           f"(each within 0.01 dB); entangled at fitted s for all combinations={all(verdicts)}")


def test_criterion_8_linearization_convergence(acceptance_log):
    s, alpha = 0.5, 1.0
    signal = build(CylindricalStateSpec("azimuthal", alpha, s))
    phases = arm_phases("azimuthal", s, alpha)
    gaps = []
    for lo in (1e2, 4e2, 1.6e3, 6.4e3):
        state = with_auxiliary_beams(signal, lo, phases)
        gap = 0.0
        for k, dof, mu in itertools.product((0, 1), ("pol", "spa"), (2, 3)):
            exact = quadratic_stats(state, stokes_observable(dof, mu, (2 + k, k), 4))[1]
            lin = quadratic_stats(state, linearized_stokes(dof, mu, lo, k, 4, phases[k]))[1]
            gap = max(gap, abs(exact - lin) / exact)
        gaps.append(gap)
    monotone = all(b < a for a, b in zip(gaps, gaps[1:]))
    ok = monotone and gaps[-1] < 1e-4
    record(acceptance_log, 8, ok,
           "relative gaps " + ", ".join(f"{g:.2e}" for g in gaps) + f"; decreasing={monotone}, final < 1e-4")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
