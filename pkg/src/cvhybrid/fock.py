"""Brute-force number-basis oracle for one- and two-mode recipes.

Independent of the phase-space engine: every operation is exponentiated as a
sparse truncated matrix acting on the vacuum ket, and observables are built
from truncated ladder operators. Use it to check Gaussian-moment formulas.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .exceptions import InvalidArgument, TruncationNotConverged, Unsupported
from .observables import QuadraticObservable

MAX_ALPHA = 2.0
MAX_ZETA = 0.6
MIN_NMAX = 30
CONVERGENCE_RTOL = 1e-8


def _ladder(n_max: int) -> sp.csr_matrix:
    return sp.diags(np.sqrt(np.arange(1, n_max + 1)), 1, format="csr", dtype=complex)


class FockRegister:
    """Truncated ladder operators of ``num_modes`` modes, cutoff ``n_max`` each."""

    def __init__(self, num_modes: int, n_max: int):
        if num_modes not in (1, 2):
            raise Unsupported("the number-basis oracle handles at most 2 modes")
        self.num_modes = num_modes
        self.n_max = n_max
        a = _ladder(n_max)
        eye = sp.identity(n_max + 1, format="csr", dtype=complex)
        if num_modes == 1:
            self.a = [a]
        else:
            self.a = [sp.kron(a, eye, format="csr"), sp.kron(eye, a, format="csr")]
        self.dim = (n_max + 1) ** num_modes
        self.r = []
        for ak in self.a:
            self.r.append(ak + ak.getH())
            self.r.append(-1j * (ak - ak.getH()))

    def vacuum(self) -> np.ndarray:
        psi = np.zeros(self.dim, dtype=complex)
        psi[0] = 1.0
        return psi

    def generator(self, op: tuple) -> sp.csr_matrix:
        """Anti-Hermitian generator ``K`` with the operation equal to ``exp(K)``."""
        name, args = op[0], op[1:]
        if name == "displace":
            mode, alpha = args
            self._check(mode)
            if abs(alpha) > MAX_ALPHA:
                raise InvalidArgument(f"|alpha| = {abs(alpha):.3g} exceeds oracle limit {MAX_ALPHA}")
            a = self.a[mode]
            return alpha * a.getH() - np.conj(alpha) * a
        if name == "squeeze":
            mode, zeta = args
            self._check(mode)
            self._check_zeta(zeta)
            a = self.a[mode]
            return 0.5 * (np.conj(zeta) * (a @ a) - zeta * (a.getH() @ a.getH()))
        if name == "two_mode_squeeze":
            i, j, zeta = args
            self._check(i)
            self._check(j)
            if i == j:
                raise InvalidArgument("two_mode_squeeze needs two distinct modes")
            self._check_zeta(zeta)
            ai, aj = self.a[i], self.a[j]
            return np.conj(zeta) * (ai @ aj) - zeta * (ai.getH() @ aj.getH())
        if name == "unitary":
            (u,) = args
            u = np.asarray(u, dtype=complex)
            if u.shape != (self.num_modes, self.num_modes):
                raise InvalidArgument(f"unitary shape {u.shape} does not match {self.num_modes} modes")
            # u = exp(-iH); amplitudes beta -> u beta under exp(-i sum a_j^dag H_jk a_k).
            h = 1j * scipy.linalg.logm(u)
            k = sp.csr_matrix((self.dim, self.dim), dtype=complex)
            for j in range(self.num_modes):
                for l in range(self.num_modes):
                    if h[j, l] != 0:
                        k = k + (-1j * h[j, l]) * (self.a[j].getH() @ self.a[l])
            return k
        if name == "attenuate":
            raise Unsupported("loss is not unitary; model it with an ancilla mode and a beam splitter")
        raise InvalidArgument(f"unknown recipe operation {name!r}")

    def _check(self, mode: int) -> None:
        if not 0 <= mode < self.num_modes:
            raise Unsupported(f"recipe references mode {mode}; oracle register has {self.num_modes}")

    @staticmethod
    def _check_zeta(zeta: complex) -> None:
        if abs(zeta) > MAX_ZETA:
            raise InvalidArgument(f"|zeta| = {abs(zeta):.3g} exceeds oracle limit {MAX_ZETA}")

    def prepare(self, recipe: Sequence[tuple]) -> np.ndarray:
        psi = self.vacuum()
        for op in recipe:
            psi = expm_multiply(self.generator(op).tocsc(), psi)
        return psi

    def apply(self, obs: QuadraticObservable, psi: np.ndarray) -> np.ndarray:
        """``O |psi>`` with ``O = 1/2 sum G_ij r_i r_j + g.r + c``."""
        if obs.num_modes != self.num_modes:
            raise InvalidArgument(f"observable acts on {obs.num_modes} modes, register has {self.num_modes}")
        r_psi = [r @ psi for r in self.r]
        out = obs.c * psi
        for i, r in enumerate(self.r):
            row = obs.G[i]
            if np.any(row):
                out = out + 0.5 * (r @ sum(row[j] * r_psi[j] for j in range(len(self.r)) if row[j]))
            if obs.g[i]:
                out = out + obs.g[i] * r_psi[i]
        return out


class FockOracle:
    """Moments of observables on the ket produced by ``recipe`` at a fixed cutoff."""

    def __init__(self, recipe: Sequence[tuple], num_modes: int, n_max: int = 40):
        if n_max < MIN_NMAX:
            raise InvalidArgument(f"n_max must be >= {MIN_NMAX}")
        self.register = FockRegister(num_modes, n_max)
        self.psi = self.register.prepare(recipe)

    def mean(self, obs: QuadraticObservable) -> float:
        return float(np.vdot(self.psi, self.register.apply(obs, self.psi)).real)

    def covariance(self, obs_a: QuadraticObservable, obs_b: QuadraticObservable) -> float:
        """Symmetrized covariance ``Re <dA dB>``."""
        fa = self.register.apply(obs_a, self.psi)
        fb = self.register.apply(obs_b, self.psi)
        return float(np.vdot(fa, fb).real - self.mean(obs_a) * self.mean(obs_b))

    def commutator(self, obs_a: QuadraticObservable, obs_b: QuadraticObservable) -> float:
        """``<[A, B]> / (2i)``."""
        fa = self.register.apply(obs_a, self.psi)
        fb = self.register.apply(obs_b, self.psi)
        return float(np.vdot(fa, fb).imag)

    def stats(self, obs: QuadraticObservable) -> tuple[float, float]:
        return self.mean(obs), self.covariance(obs, obs)


def _converged(coarse: Sequence[float], fine: Sequence[float]) -> float:
    return max(abs(f - c) / max(1.0, abs(f)) for c, f in zip(coarse, fine))


def _num_modes(recipe: Sequence[tuple], observables: Sequence[QuadraticObservable]) -> int:
    n = observables[0].num_modes
    if n > 2:
        raise Unsupported("the number-basis oracle handles at most 2 modes")
    return n


def fock_oracle_stats(
    recipe: Sequence[tuple], obs: QuadraticObservable, n_max: int = 40
) -> tuple[float, float]:
    """``(mean, variance)`` of ``obs`` on the recipe's state, by brute force.

    The computation is repeated at ``n_max + 10``; the relative change
    (measured against ``max(1, |value|)``) must stay below 1e-8, otherwise
    :class:`TruncationNotConverged` is raised. The finer result is returned.
    """
    n = _num_modes(recipe, [obs])
    coarse = FockOracle(recipe, n, n_max).stats(obs)
    fine = FockOracle(recipe, n, n_max + 10).stats(obs)
    change = _converged(coarse, fine)
    if change >= CONVERGENCE_RTOL:
        raise TruncationNotConverged(f"relative change {change:.3e} between n_max={n_max} and {n_max + 10}")
    return fine


def fock_oracle_covariance(
    recipe: Sequence[tuple], obs_a: QuadraticObservable, obs_b: QuadraticObservable, n_max: int = 40
) -> float:
    """Symmetrized covariance by brute force, with the same convergence check."""
    n = _num_modes(recipe, [obs_a, obs_b])
    coarse = FockOracle(recipe, n, n_max).covariance(obs_a, obs_b)
    fine = FockOracle(recipe, n, n_max + 10).covariance(obs_a, obs_b)
    change = _converged([coarse], [fine])
    if change >= CONVERGENCE_RTOL:
        raise TruncationNotConverged(f"relative change {change:.3e} between n_max={n_max} and {n_max + 10}")
    return fine


class ConvergedOracle:
    """Pair of oracles at ``n_max`` and ``n_max + 10`` sharing one recipe.

    Cheaper than calling :func:`fock_oracle_stats` repeatedly when many
    observables are checked against the same state.
    """

    def __init__(self, recipe: Sequence[tuple], num_modes: int, n_max: int = 40):
        self.coarse = FockOracle(recipe, num_modes, n_max)
        self.fine = FockOracle(recipe, num_modes, n_max + 10)
        self.n_max = n_max
        self.max_change = 0.0

    def _check(self, coarse, fine):
        change = _converged(coarse, fine)
        self.max_change = max(self.max_change, change)
        if change >= CONVERGENCE_RTOL:
            raise TruncationNotConverged(
                f"relative change {change:.3e} between n_max={self.n_max} and {self.n_max + 10}"
            )

    def stats(self, obs: QuadraticObservable) -> tuple[float, float]:
        coarse, fine = self.coarse.stats(obs), self.fine.stats(obs)
        self._check(coarse, fine)
        return fine

    def covariance(self, obs_a: QuadraticObservable, obs_b: QuadraticObservable) -> float:
        coarse, fine = self.coarse.covariance(obs_a, obs_b), self.fine.covariance(obs_a, obs_b)
        self._check([coarse], [fine])
        return fine

    def commutator(self, obs_a: QuadraticObservable, obs_b: QuadraticObservable) -> float:
        coarse, fine = self.coarse.commutator(obs_a, obs_b), self.fine.commutator(obs_a, obs_b)
        self._check([coarse], [fine])
        return fine
