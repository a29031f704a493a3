import itertools

import numpy as np
import pytest

from cvhybrid import InvalidArgument
from cvhybrid import gaussian_core as gc
from cvhybrid.fock import ConvergedOracle
from cvhybrid.observables import quadrature, quadratic_stats
from cvhybrid.states import (
    KINDS,
    CylindricalStateSpec,
    build,
    composite_unitary,
    verify_factorization,
)

ALPHAS = [0, 1, 3, 1 + 2j]
ZETAS = [0, 0.3, 0.8, 0.5 * np.exp(1j * np.pi / 3)]


@pytest.mark.parametrize("construction", ["composite", "factored"])
def test_trivial_spec_is_vacuum(construction):
    state = build(CylindricalStateSpec("azimuthal", 0, 0, construction))
    assert np.allclose(state.mean, 0) and np.allclose(state.cov, np.eye(4))


def test_coherent_azimuthal_beam_splits_with_opposite_signs():
    state = build(CylindricalStateSpec("azimuthal", 2, 0))
    assert np.allclose(state.amplitudes(), [-np.sqrt(2), np.sqrt(2)])
    oracle = ConvergedOracle([("displace", 0, 2.0), ("unitary", composite_unitary("azimuthal").T)], 2, n_max=30)
    for k in range(4):
        obs = quadrature(2, k // 2, "xp"[k % 2])
        assert oracle.stats(obs)[0] == pytest.approx(state.mean[k], abs=1e-8)


def test_squeezed_composite_quadrature():
    state = build(CylindricalStateSpec("azimuthal", 0, 0.6))
    composite_x = (-1 * quadrature(2, 0) + quadrature(2, 1)) * np.sqrt(0.5)
    assert quadratic_stats(state, composite_x)[1] == pytest.approx(np.exp(-1.2), abs=1e-12)
    assert quadratic_stats(state, composite_x)[1] == pytest.approx(0.30119, abs=1e-5)


def test_factorization_trivial_is_exact():
    assert verify_factorization("azimuthal", 0, 0) == 0.0


@pytest.mark.parametrize("kind, alpha, zeta", list(itertools.product(KINDS, ALPHAS, ZETAS)))
def test_factorization_grid(kind, alpha, zeta):
    assert verify_factorization(kind, alpha, zeta) < 1e-10


def test_factored_construction_matches_oracle():
    # Right-hand product of operators built independently in the number basis.
    alpha, zeta = 0.8, 0.4
    recipe = [
        ("two_mode_squeeze", 0, 1, -zeta / 2),
        ("squeeze", 1, zeta / 2),
        ("displace", 1, alpha / np.sqrt(2)),
        ("squeeze", 0, zeta / 2),
        ("displace", 0, -alpha / np.sqrt(2)),
    ]
    state = build(CylindricalStateSpec("azimuthal", alpha, zeta, "composite"))
    oracle = ConvergedOracle(recipe, 2, n_max=40)
    for i in range(4):
        for j in range(4):
            a, b = quadrature(2, i // 2, "xp"[i % 2]), quadrature(2, j // 2, "xp"[j % 2])
            assert oracle.covariance(a, b) == pytest.approx(state.cov[i, j], abs=1e-8)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("zeta", ZETAS)
def test_built_states_are_pure(kind, zeta):
    state = build(CylindricalStateSpec(kind, 1 + 1j, zeta))
    assert state.purity_det() == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("zeta", [0.1, 0.8, 0.5j])
def test_marginals_are_mixed(kind, zeta):
    state = build(CylindricalStateSpec(kind, 2.0, zeta))
    for mode in (0, 1):
        assert np.linalg.det(state.reduced([mode]).cov) > 1.0 + 1e-6


def test_mode_exchange_symmetry():
    swap = np.array([[0, 1], [1, 0]])
    for alpha, zeta in itertools.product(ALPHAS, ZETAS):
        a = build(CylindricalStateSpec("azimuthal", alpha, zeta))
        b = build(CylindricalStateSpec("azimuthal", -alpha, zeta))
        swapped = gc.apply_mode_unitary(a, swap)
        assert np.allclose(swapped.cov, b.cov, atol=1e-12)
        assert np.allclose(swapped.mean, b.mean, atol=1e-12)


def test_radial_kind_uses_symmetric_composite():
    state = build(CylindricalStateSpec("radial", 2, 0))
    assert np.allclose(state.amplitudes(), [np.sqrt(2), np.sqrt(2)])


def test_zeta_guard():
    with pytest.raises(InvalidArgument):
        CylindricalStateSpec("azimuthal", 0, 6.0)
    CylindricalStateSpec("azimuthal", 0, 6.0, max_zeta=10.0)


def test_spec_json_round_trip():
    spec = CylindricalStateSpec("radial", 1 - 2j, 0.3j, "factored")
    assert CylindricalStateSpec.from_json(spec.to_json()) == spec


def test_unknown_kind():
    with pytest.raises(InvalidArgument):
        CylindricalStateSpec("spiral")
