"""Quadratic observables on Gaussian states.

An observable is ``O = 1/2 r^T G r + g^T r + c`` with Weyl (symmetric)
ordering of the quadrature products. Photon numbers and Stokes operators are
quadratic forms of this kind; normal-ordering offsets live in ``c``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import InvalidArgument
from .gaussian_core import GaussianState, _frozen, symplectic_form

STOKES_INDICES = (0, 1, 2, 3)
DOFS = ("pol", "spa")


@dataclass(frozen=True)
class QuadraticObservable:
    G: np.ndarray
    g: np.ndarray
    c: float = 0.0

    def __post_init__(self):
        G = np.asarray(self.G, dtype=float)
        g = np.asarray(self.g, dtype=float)
        if G.ndim != 2 or G.shape[0] != G.shape[1] or G.shape[0] % 2:
            raise InvalidArgument(f"G must be a square 2N x 2N matrix, got {G.shape}")
        if g.shape != (G.shape[0],):
            raise InvalidArgument(f"g has shape {g.shape}, expected ({G.shape[0]},)")
        if np.max(np.abs(G - G.T), initial=0.0) > 1e-12:
            raise InvalidArgument("G must be symmetric")
        object.__setattr__(self, "G", _frozen(G))
        object.__setattr__(self, "g", _frozen(g))
        object.__setattr__(self, "c", float(self.c))

    @property
    def num_modes(self) -> int:
        return self.G.shape[0] // 2

    def __add__(self, other: "QuadraticObservable") -> "QuadraticObservable":
        _check_dims(self, other)
        return QuadraticObservable(self.G + other.G, self.g + other.g, self.c + other.c)

    def __sub__(self, other: "QuadraticObservable") -> "QuadraticObservable":
        _check_dims(self, other)
        return QuadraticObservable(self.G - other.G, self.g - other.g, self.c - other.c)

    def __neg__(self) -> "QuadraticObservable":
        return QuadraticObservable(-self.G, -self.g, -self.c)

    def __mul__(self, k: float) -> "QuadraticObservable":
        return QuadraticObservable(k * self.G, k * self.g, k * self.c)

    __rmul__ = __mul__

    def embed(self, num_modes: int, modes: Sequence[int]) -> "QuadraticObservable":
        """Lift onto a larger mode register, mode ``k`` going to ``modes[k]``."""
        if len(modes) != self.num_modes:
            raise InvalidArgument("need one target mode per observable mode")
        idx = [i for m in modes for i in (2 * m, 2 * m + 1)]
        G = np.zeros((2 * num_modes, 2 * num_modes))
        g = np.zeros(2 * num_modes)
        G[np.ix_(idx, idx)] = self.G
        g[idx] = self.g
        return QuadraticObservable(G, g, self.c)


def _check_dims(*items) -> None:
    sizes = {item.G.shape[0] if isinstance(item, QuadraticObservable) else item.cov.shape[0] for item in items}
    if len(sizes) != 1:
        raise InvalidArgument(f"dimension mismatch between operands: {sorted(sizes)}")


def zero_observable(num_modes: int) -> QuadraticObservable:
    return QuadraticObservable(np.zeros((2 * num_modes, 2 * num_modes)), np.zeros(2 * num_modes))


def quadrature(num_modes: int, mode: int, which: str = "x", phase: float = 0.0) -> QuadraticObservable:
    """Rotated quadrature ``x_phi = cos(phi) x + sin(phi) p`` (``which='x'``) or
    its conjugate ``p_phi = -sin(phi) x + cos(phi) p`` (``which='p'``)."""
    if not 0 <= mode < num_modes:
        raise InvalidArgument(f"mode {mode} out of range for {num_modes} modes")
    c, s = np.cos(phase), np.sin(phase)
    obs = zero_observable(num_modes)
    g = np.zeros(2 * num_modes)
    if which == "x":
        g[2 * mode : 2 * mode + 2] = (c, s)
    elif which == "p":
        g[2 * mode : 2 * mode + 2] = (-s, c)
    else:
        raise InvalidArgument(f"which must be 'x' or 'p', got {which!r}")
    return QuadraticObservable(obs.G, g)


def photon_number(num_modes: int, mode: int) -> QuadraticObservable:
    """``a^dagger a = (x^2 + p^2 - 2) / 4``."""
    if not 0 <= mode < num_modes:
        raise InvalidArgument(f"mode {mode} out of range for {num_modes} modes")
    G = np.zeros((2 * num_modes, 2 * num_modes))
    G[2 * mode, 2 * mode] = G[2 * mode + 1, 2 * mode + 1] = 0.5
    return QuadraticObservable(G, np.zeros(2 * num_modes), -0.5)


def total_photon_number(num_modes: int, modes: Sequence[int]) -> QuadraticObservable:
    obs = zero_observable(num_modes)
    for m in modes:
        obs = obs + photon_number(num_modes, m)
    return obs


def stokes_observable(
    dof: str, mu: int, mode_pair: tuple[int, int], num_modes: int | None = None
) -> QuadraticObservable:
    """Stokes operator ``S_mu`` of the ordered mode pair ``(m, n)``.

    ``S0 = n_m + n_n``, ``S1 = n_m - n_n``, ``S2 = a_m^dag a_n + a_n^dag a_m``,
    ``S3 = -i (a_m^dag a_n - a_n^dag a_m)``. Polarization and spatial Stokes
    operators share this algebra; ``dof`` only records which physical partner
    mode forms the pair.
    """
    if dof not in DOFS:
        raise InvalidArgument(f"dof must be one of {DOFS}, got {dof!r}")
    if mu not in STOKES_INDICES:
        raise InvalidArgument(f"Stokes index must be 0..3, got {mu}")
    m, n = mode_pair
    if m == n:
        raise InvalidArgument("Stokes operators need two distinct modes")
    if num_modes is None:
        num_modes = max(m, n) + 1
    if mu == 0:
        return photon_number(num_modes, m) + photon_number(num_modes, n)
    if mu == 1:
        return photon_number(num_modes, m) - photon_number(num_modes, n)
    G = np.zeros((2 * num_modes, 2 * num_modes))
    xm, pm, xn, pn = 2 * m, 2 * m + 1, 2 * n, 2 * n + 1
    if mu == 2:
        # (x_m x_n + p_m p_n) / 2
        G[xm, xn] = G[xn, xm] = G[pm, pn] = G[pn, pm] = 0.5
    else:
        # (x_m p_n - p_m x_n) / 2
        G[xm, pn] = G[pn, xm] = 0.5
        G[pm, xn] = G[xn, pm] = -0.5
    return QuadraticObservable(G, np.zeros(2 * num_modes))


def linearized_stokes(
    dof: str,
    mu: int,
    lo_amplitude: float,
    signal_mode: int,
    num_modes: int,
    lo_phase: float = 0.0,
) -> QuadraticObservable:
    """Strong-auxiliary-beam limit of ``S2`` / ``S3`` as a linear observable.

    With the auxiliary coherent beam ``lo_amplitude * e^{i lo_phase}`` as the
    first mode of the Stokes pair, ``S2 -> lo_amplitude * x_phi`` and
    ``S3 -> lo_amplitude * p_phi`` of the signal mode. Its vacuum variance
    ``lo_amplitude**2`` is the shot-noise reference.
    """
    if dof not in DOFS:
        raise InvalidArgument(f"dof must be one of {DOFS}, got {dof!r}")
    if lo_amplitude <= 0:
        raise InvalidArgument("lo_amplitude must be positive")
    if mu in (0, 1):
        raise InvalidArgument(f"S{mu} has no linearized form; use the exact quadratic observable")
    if mu not in (2, 3):
        raise InvalidArgument(f"Stokes index must be 2 or 3, got {mu}")
    which = "x" if mu == 2 else "p"
    return lo_amplitude * quadrature(num_modes, signal_mode, which, lo_phase)


def quadratic_mean(state: GaussianState, obs: QuadraticObservable) -> float:
    _check_dims(state, obs)
    mu = state.mean
    return float(0.5 * (np.trace(obs.G @ state.cov) + mu @ obs.G @ mu) + obs.g @ mu + obs.c)


def quadratic_covariance(state: GaussianState, obs_a: QuadraticObservable, obs_b: QuadraticObservable) -> float:
    """Symmetrized covariance ``<{dA, dB}>/2`` via Gaussian moment factorization."""
    _check_dims(state, obs_a, obs_b)
    sigma, mu = state.cov, state.mean
    omega = symplectic_form(state.num_modes)
    la = obs_a.G @ mu + obs_a.g
    lb = obs_b.G @ mu + obs_b.g
    quad = 0.5 * np.trace(obs_a.G @ sigma @ obs_b.G @ sigma) + 0.5 * np.trace(obs_a.G @ omega @ obs_b.G @ omega)
    return float(quad + la @ sigma @ lb)


def quadratic_stats(state: GaussianState, obs: QuadraticObservable) -> tuple[float, float]:
    """Exact ``(mean, variance)`` of a quadratic observable on a Gaussian state."""
    return quadratic_mean(state, obs), quadratic_covariance(state, obs, obs)


def commutator_expectation(state: GaussianState, obs_a: QuadraticObservable, obs_b: QuadraticObservable) -> float:
    """``<[A, B]> / (2i)``, i.e. the imaginary part of ``<dA dB>``.

    For Stokes operators ``[S2, S3] = 2i S1`` and cyclic, so this returns
    ``<S1>`` for the pair (2, 3).
    """
    _check_dims(state, obs_a, obs_b)
    omega = symplectic_form(state.num_modes)
    Ga, Gb, ga, gb = obs_a.G, obs_b.G, obs_a.g, obs_b.g
    M = Ga @ omega @ Gb - Gb @ omega @ Ga
    mu = state.mean
    quad = 0.5 * (np.trace(M @ state.cov) + mu @ M @ mu)
    lin = (ga @ omega @ Gb - gb @ omega @ Ga) @ mu
    return float(quad + lin + ga @ omega @ gb)
