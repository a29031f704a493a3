import numpy as np
import pytest

from cvhybrid import InvalidArgument
from cvhybrid import gaussian_core as gc
from cvhybrid.fock import ConvergedOracle
from cvhybrid.observables import (
    QuadraticObservable,
    commutator_expectation,
    linearized_stokes,
    photon_number,
    quadratic_covariance,
    quadratic_stats,
    quadrature,
    stokes_observable,
)

from helpers import random_oracle_recipe


def stokes_set(num_modes=2, pair=(0, 1)):
    return [stokes_observable("pol", mu, pair, num_modes) for mu in range(4)]


def test_vacuum_quadrature_is_qnl():
    assert quadratic_stats(gc.vacuum(1), quadrature(1, 0)) == pytest.approx((0.0, 1.0))


def test_photon_number_on_coherent_state():
    state = gc.coherent([np.exp(0.3j)])
    mean, var = quadratic_stats(state, photon_number(1, 0))
    assert (mean, var) == pytest.approx((1.0, 1.0), abs=1e-12)
    oracle = ConvergedOracle([("displace", 0, np.exp(0.3j))], 1, n_max=30)
    assert oracle.stats(photon_number(1, 0)) == pytest.approx((mean, var), abs=1e-8)


def test_s1_on_x_polarized_coherent_beam():
    state = gc.coherent([2.0, 0.0])
    assert quadratic_stats(state, stokes_observable("pol", 1, (0, 1))) == pytest.approx((4.0, 4.0), abs=1e-12)
    oracle = ConvergedOracle([("displace", 0, 2.0)], 2, n_max=40)
    assert oracle.stats(stokes_observable("pol", 1, (0, 1))) == pytest.approx((4.0, 4.0), abs=1e-8)


def test_covariance_reduces_to_variance():
    state = gc.vacuum(1)
    assert quadratic_covariance(state, quadrature(1, 0), quadrature(1, 0)) == pytest.approx(1.0)


def test_symmetric_xp_covariance_vanishes_on_vacuum():
    assert quadratic_covariance(gc.vacuum(1), quadrature(1, 0), quadrature(1, 0, "p")) == pytest.approx(0.0)


def test_s2_s3_uncorrelated_on_bright_coherent_beam():
    state = gc.coherent([1.5, 0.5j])
    s2, s3 = stokes_observable("pol", 2, (0, 1)), stokes_observable("pol", 3, (0, 1))
    assert quadratic_covariance(state, s2, s3) == pytest.approx(0.0, abs=1e-12)
    oracle = ConvergedOracle([("displace", 0, 1.5), ("displace", 1, 0.5j)], 2, n_max=40)
    assert oracle.covariance(s2, s3) == pytest.approx(0.0, abs=1e-8)


def test_s3_vanishes_without_circular_component():
    assert quadratic_stats(gc.coherent([1.2, 0]), stokes_observable("pol", 3, (0, 1)))[0] == pytest.approx(0.0)


def test_s1_mean_for_intense_beam():
    assert quadratic_stats(gc.coherent([3.0, 0]), stokes_observable("spa", 1, (0, 1)))[0] == pytest.approx(9.0)
    oracle = ConvergedOracle([("displace", 0, 1.8)], 2, n_max=40)
    assert oracle.stats(stokes_observable("spa", 1, (0, 1)))[0] == pytest.approx(1.8**2, abs=1e-8)


def test_s2_mean_for_in_phase_beams():
    assert quadratic_stats(gc.coherent([1.0, 1.0]), stokes_observable("pol", 2, (0, 1)))[0] == pytest.approx(2.0)
    oracle = ConvergedOracle([("displace", 0, 1.0), ("displace", 1, 1.0)], 2, n_max=40)
    assert oracle.stats(stokes_observable("pol", 2, (0, 1)))[0] == pytest.approx(2.0, abs=1e-8)


def test_stokes_needs_distinct_modes():
    with pytest.raises(InvalidArgument):
        stokes_observable("pol", 2, (1, 1))


def test_stokes_commutator_algebra():
    state = gc.squeeze(gc.coherent([1.0 + 0.5j, -0.3j]), 1, 0.2)
    s = stokes_set()
    s1_mean = quadratic_stats(state, s[1])[0]
    assert commutator_expectation(state, s[2], s[3]) == pytest.approx(s1_mean)
    assert commutator_expectation(state, s[3], s[1]) == pytest.approx(quadratic_stats(state, s[2])[0])
    assert commutator_expectation(state, s[1], s[2]) == pytest.approx(quadratic_stats(state, s[3])[0])


def test_canonical_commutator():
    assert commutator_expectation(gc.vacuum(1), quadrature(1, 0), quadrature(1, 0, "p")) == pytest.approx(1.0)


@pytest.mark.parametrize("seed", range(4))
def test_stokes_vector_within_total_intensity(seed):
    rng = np.random.default_rng(seed)
    state = gc.squeeze(gc.coherent(rng.normal(size=2) + 1j * rng.normal(size=2)), 0, 0.3)
    means = [quadratic_stats(state, s)[0] for s in stokes_set()]
    assert means[1] ** 2 + means[2] ** 2 + means[3] ** 2 <= means[0] ** 2 + 1e-9


@pytest.mark.parametrize("seed", range(5))
def test_moments_match_oracle(seed):
    rng = np.random.default_rng(seed)
    recipe = random_oracle_recipe(rng)
    state = gc.apply_recipe(gc.vacuum(2), recipe)
    oracle = ConvergedOracle(recipe, 2, n_max=40)
    observables = [quadrature(2, m, w) for m in (0, 1) for w in "xp"]
    observables += [photon_number(2, 0), photon_number(2, 1)] + stokes_set()
    for a in observables:
        assert quadratic_stats(state, a) == pytest.approx(oracle.stats(a), abs=1e-8)
        for b in observables:
            assert quadratic_covariance(state, a, b) == pytest.approx(oracle.covariance(a, b), abs=1e-8)
            assert commutator_expectation(state, a, b) == pytest.approx(oracle.commutator(a, b), abs=1e-8)


def test_dimension_mismatch():
    with pytest.raises(InvalidArgument, match="dimension"):
        quadratic_stats(gc.vacuum(2), quadrature(1, 0))


def test_asymmetric_form_rejected():
    with pytest.raises(InvalidArgument):
        QuadraticObservable(np.array([[0, 1], [0, 0]]), np.zeros(2))


class TestLinearizedStokes:
    def test_vacuum_variance_is_shot_noise_reference(self):
        lo = 37.0
        assert quadratic_stats(gc.vacuum(1), linearized_stokes("pol", 2, lo, 0, 1))[1] == pytest.approx(lo**2)

    def test_squeezed_signal(self):
        lo, r = 5.0, 0.4
        state = gc.squeeze(gc.vacuum(1), 0, r)
        assert quadratic_stats(state, linearized_stokes("spa", 2, lo, 0, 1))[1] == pytest.approx(
            lo**2 * np.exp(-2 * r)
        )
        assert quadratic_stats(state, linearized_stokes("spa", 3, lo, 0, 1))[1] == pytest.approx(
            lo**2 * np.exp(2 * r)
        )

    @pytest.mark.parametrize("mu", [0, 1])
    def test_s0_s1_not_linearizable(self, mu):
        with pytest.raises(InvalidArgument):
            linearized_stokes("pol", mu, 10.0, 0, 1)

    def test_agrees_with_exact_for_strong_lo(self):
        signal = gc.squeeze(gc.displace(gc.vacuum(2), 1, 0.8), 1, 0.3)
        for mu in (2, 3):
            lo = 100 * 0.8
            state = gc.displace(signal, 0, lo)
            exact = quadratic_stats(state, stokes_observable("pol", mu, (0, 1)))[1]
            lin = quadratic_stats(state, linearized_stokes("pol", mu, lo, 1, 2))[1]
            assert abs(exact - lin) / exact < 0.01

    def test_gap_shrinks_at_least_twofold_per_fourfold_lo(self):
        signal = gc.squeeze(gc.displace(gc.vacuum(2), 1, 1.0), 1, 0.5)
        for mu in (2, 3):
            gaps = []
            for lo in 10.0 * 4.0 ** np.arange(4):
                state = gc.displace(signal, 0, lo)
                exact = quadratic_stats(state, stokes_observable("pol", mu, (0, 1)))[1]
                lin = quadratic_stats(state, linearized_stokes("pol", mu, lo, 1, 2))[1]
                gaps.append(abs(exact - lin) / exact)
            assert all(b <= a / 2 for a, b in zip(gaps, gaps[1:]))
