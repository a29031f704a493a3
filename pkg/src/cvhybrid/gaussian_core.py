"""Phase-space engine for Gaussian states of N optical modes.

Conventions used throughout the package:

* quadratures ``x = a + a^dagger`` and ``p = -i (a - a^dagger)``, so the
  vacuum has unit variance in every quadrature (the quantum noise limit);
* interleaved ordering ``(x_1, p_1, x_2, p_2, ...)``;
* the symplectic form is the block diagonal sum of ``[[0, 1], [-1, 0]]`` and
  the canonical commutator reads ``[r_i, r_j] = 2 i Omega_ij``.

States are immutable. Every operation returns a new :class:`GaussianState`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .exceptions import InvalidArgument

PHYSICAL_TOL = 1e-9
SYMPLECTIC_TOL = 1e-10
UNITARY_TOL = 1e-10


def symplectic_form(num_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form for ``num_modes`` modes."""
    return np.kron(np.eye(num_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class GaussianState:
    """First and second moments of an N-mode Gaussian state in shot-noise units."""

    num_modes: int
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        n = int(self.num_modes)
        if n < 1:
            raise InvalidArgument("num_modes must be >= 1")
        mean = np.asarray(self.mean, dtype=float)
        cov = np.asarray(self.cov, dtype=float)
        if mean.shape != (2 * n,):
            raise InvalidArgument(f"Invalid 'mean' vector shape {mean.shape} for {n} modes")
        if cov.shape != (2 * n, 2 * n):
            raise InvalidArgument(f"Invalid 'cov' matrix shape {cov.shape} for {n} modes")
        object.__setattr__(self, "num_modes", n)
        object.__setattr__(self, "mean", _frozen(mean))
        object.__setattr__(self, "cov", _frozen(0.5 * (cov + cov.T)))

    def reduced(self, modes: Sequence[int]) -> "GaussianState":
        """Marginal state of the given modes, in the order given."""
        idx = _quadrature_indices(self.num_modes, modes)
        return GaussianState(len(modes), self.mean[idx], self.cov[np.ix_(idx, idx)])

    def amplitudes(self) -> np.ndarray:
        """Complex mean amplitudes ``<a_k>`` of every mode."""
        return 0.5 * (self.mean[0::2] + 1j * self.mean[1::2])

    def purity_det(self) -> float:
        """``det(cov)``; equals 1 for pure states in this convention."""
        return float(np.linalg.det(self.cov))

    def to_dict(self) -> dict:
        return {
            "num_modes": self.num_modes,
            "mean": self.mean.tolist(),
            "cov": self.cov.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GaussianState":
        try:
            return cls(int(data["num_modes"]), np.array(data["mean"]), np.array(data["cov"]))
        except KeyError as exc:
            raise InvalidArgument(f"missing field {exc.args[0]!r} in state document") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "GaussianState":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class SymplecticTransform:
    """Affine phase-space map ``r -> matrix @ r + displacement``."""

    matrix: np.ndarray
    displacement: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen(self.matrix))
        object.__setattr__(self, "displacement", _frozen(self.displacement))

    @property
    def num_modes(self) -> int:
        return self.matrix.shape[0] // 2

    def symplectic_error(self) -> float:
        omega = symplectic_form(self.num_modes)
        return float(np.max(np.abs(self.matrix.T @ omega @ self.matrix - omega)))

    def is_symplectic(self, tol: float = SYMPLECTIC_TOL) -> bool:
        return self.symplectic_error() <= tol

    def apply(self, state: GaussianState) -> GaussianState:
        if state.num_modes != self.num_modes:
            raise InvalidArgument(
                f"transform acts on {self.num_modes} modes, state has {state.num_modes}"
            )
        s = self.matrix
        return GaussianState(state.num_modes, s @ state.mean + self.displacement, s @ state.cov @ s.T)


def _quadrature_indices(num_modes: int, modes: Iterable[int]) -> list[int]:
    idx = []
    for m in modes:
        _check_mode(num_modes, m)
        idx += [2 * m, 2 * m + 1]
    return idx


def _check_mode(num_modes: int, mode: int) -> None:
    if not 0 <= mode < num_modes:
        raise InvalidArgument(f"mode {mode} out of range for {num_modes} modes")


def _embed(num_modes: int, modes: Sequence[int], block: np.ndarray) -> np.ndarray:
    s = np.eye(2 * num_modes)
    idx = _quadrature_indices(num_modes, modes)
    s[np.ix_(idx, idx)] = block
    return s


def _reflection(phase: float) -> np.ndarray:
    # Quadrature image of a -> e^{i phase} a^dagger.
    c, s = np.cos(phase), np.sin(phase)
    return np.array([[c, s], [s, -c]])


def vacuum(n_modes: int) -> GaussianState:
    """Vacuum state of ``n_modes`` modes: zero mean, identity covariance."""
    if n_modes < 1:
        raise InvalidArgument("n_modes must be >= 1")
    return GaussianState(n_modes, np.zeros(2 * n_modes), np.eye(2 * n_modes))


def coherent(amplitudes: Sequence[complex]) -> GaussianState:
    """Product of coherent states with the given complex amplitudes."""
    amplitudes = np.asarray(amplitudes, dtype=complex)
    mean = np.empty(2 * amplitudes.size)
    mean[0::2] = 2 * amplitudes.real
    mean[1::2] = 2 * amplitudes.imag
    return GaussianState(amplitudes.size, mean, np.eye(mean.size))


def displacement_transform(num_modes: int, mode: int, amplitude: complex) -> SymplecticTransform:
    _check_mode(num_modes, mode)
    d = np.zeros(2 * num_modes)
    d[2 * mode] = 2 * np.real(amplitude)
    d[2 * mode + 1] = 2 * np.imag(amplitude)
    return SymplecticTransform(np.eye(2 * num_modes), d)


def squeeze_transform(num_modes: int, mode: int, zeta: complex) -> SymplecticTransform:
    """Image of ``exp[(zeta^* a^2 - zeta a^dagger^2) / 2]`` on one mode."""
    r, theta = abs(zeta), np.angle(zeta)
    block = np.cosh(r) * np.eye(2) - np.sinh(r) * _reflection(theta)
    return SymplecticTransform(_embed(num_modes, [mode], block), np.zeros(2 * num_modes))


def two_mode_squeeze_transform(
    num_modes: int, mode_i: int, mode_j: int, zeta: complex
) -> SymplecticTransform:
    """Image of ``exp[zeta^* a_i a_j - zeta a_i^dagger a_j^dagger]``.

    In the Heisenberg picture ``a_i -> cosh(r) a_i - e^{i theta} sinh(r) a_j^dagger``
    with ``zeta = r e^{i theta}``; for real ``zeta > 0`` the combinations
    ``x_i + x_j`` and ``p_i - p_j`` are squeezed by ``e^{-r}``.
    """
    if mode_i == mode_j:
        raise InvalidArgument("two_mode_squeeze needs two distinct modes")
    r, theta = abs(zeta), np.angle(zeta)
    ch, sh = np.cosh(r) * np.eye(2), np.sinh(r) * _reflection(theta)
    block = np.block([[ch, -sh], [-sh, ch]])
    return SymplecticTransform(_embed(num_modes, [mode_i, mode_j], block), np.zeros(2 * num_modes))


def unitary_error(u: np.ndarray) -> float:
    u = np.asarray(u, dtype=complex)
    return float(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))))


def passive_transform(u: np.ndarray) -> SymplecticTransform:
    """Image of the passive linear-optics unitary mapping amplitudes ``beta -> u @ beta``."""
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise InvalidArgument(f"mode unitary must be square, got shape {u.shape}")
    err = unitary_error(u)
    if err > UNITARY_TOL:
        raise InvalidArgument(f"mode matrix is not unitary (max deviation {err:.3e})")
    n = u.shape[0]
    s = np.zeros((2 * n, 2 * n))
    for j in range(n):
        for k in range(n):
            a, b = u[j, k].real, u[j, k].imag
            s[2 * j : 2 * j + 2, 2 * k : 2 * k + 2] = [[a, -b], [b, a]]
    return SymplecticTransform(s, np.zeros(2 * n))


def displace(state: GaussianState, mode: int, amplitude: complex) -> GaussianState:
    """Apply ``D(amplitude) = exp(amplitude a^dagger - amplitude^* a)`` to ``mode``."""
    return displacement_transform(state.num_modes, mode, amplitude).apply(state)


def squeeze(state: GaussianState, mode: int, zeta: complex) -> GaussianState:
    """Apply ``S(zeta) = exp[(zeta^* a^2 - zeta a^dagger^2)/2]`` to ``mode``.

    For real ``zeta = r`` the x variance of vacuum becomes ``e^{-2r}``; a
    complex argument rotates the squeezed axis by half its phase.
    """
    return squeeze_transform(state.num_modes, mode, zeta).apply(state)


def two_mode_squeeze(state: GaussianState, mode_i: int, mode_j: int, zeta: complex) -> GaussianState:
    """Apply ``exp[zeta^* a_i a_j - zeta a_i^dagger a_j^dagger]`` to a mode pair."""
    for m in (mode_i, mode_j):
        _check_mode(state.num_modes, m)
    return two_mode_squeeze_transform(state.num_modes, mode_i, mode_j, zeta).apply(state)


def apply_mode_unitary(state: GaussianState, u: np.ndarray) -> GaussianState:
    """Mix all modes with a passive unitary; mode amplitudes transform as ``u @ beta``."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (state.num_modes, state.num_modes):
        raise InvalidArgument(f"unitary shape {u.shape} does not match {state.num_modes} modes")
    return passive_transform(u).apply(state)


def attenuate(state: GaussianState, mode: int, eta: float) -> GaussianState:
    """Pure-loss channel of transmissivity ``eta`` on one mode."""
    if not 0.0 <= eta <= 1.0:
        raise InvalidArgument(f"eta must lie in [0, 1], got {eta}")
    _check_mode(state.num_modes, mode)
    scale = np.ones(2 * state.num_modes)
    scale[2 * mode : 2 * mode + 2] = np.sqrt(eta)
    cov = scale[:, None] * state.cov * scale[None, :]
    cov[2 * mode, 2 * mode] += 1.0 - eta
    cov[2 * mode + 1, 2 * mode + 1] += 1.0 - eta
    return GaussianState(state.num_modes, scale * state.mean, cov)


def min_uncertainty_eigenvalue(state: GaussianState) -> float:
    """Smallest eigenvalue of ``cov + i Omega``."""
    h = state.cov + 1j * symplectic_form(state.num_modes)
    return float(np.linalg.eigvalsh(h)[0])


def is_physical(state: GaussianState, tol: float = PHYSICAL_TOL) -> bool:
    """True iff the covariance obeys the uncertainty principle to within ``tol``."""
    return min_uncertainty_eigenvalue(state) >= -tol


def apply_recipe(state: GaussianState, recipe: Sequence[tuple]) -> GaussianState:
    """Apply a list of operations, first element first.

    Recipe entries are tuples ``("displace", mode, alpha)``,
    ``("squeeze", mode, zeta)``, ``("two_mode_squeeze", i, j, zeta)``,
    ``("unitary", u)`` and ``("attenuate", mode, eta)``. The same format is
    understood by :func:`cvhybrid.fock.fock_oracle_stats` (without loss).
    """
    for op in recipe:
        name, args = op[0], op[1:]
        if name == "displace":
            state = displace(state, *args)
        elif name == "squeeze":
            state = squeeze(state, *args)
        elif name == "two_mode_squeeze":
            state = two_mode_squeeze(state, *args)
        elif name == "unitary":
            state = apply_mode_unitary(state, *args)
        elif name == "attenuate":
            state = attenuate(state, *args)
        else:
            raise InvalidArgument(f"unknown recipe operation {name!r}")
    return state
