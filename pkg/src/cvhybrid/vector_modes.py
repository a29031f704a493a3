"""Classical vector beams as polarization x spatial coefficient matrices.

Rows index the polarization basis, columns the spatial basis. In the linear /
Hermite-Gauss basis the rows are ``(x, y)`` and the columns ``(psi_10, psi_01)``
with ``psi_10`` odd in x and ``psi_01`` odd in y.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import InvalidArgument
from .gaussian_core import UNITARY_TOL, unitary_error

POL_BASES = ("linear_xy", "circular")
SPA_BASES = ("HG_10_01", "OAM_pm")

SQ2 = np.sqrt(0.5)
# Rows: e_+ = (x + i y)/sqrt2, e_- = (x - i y)/sqrt2 in (x, y) components.
CIRCULAR = SQ2 * np.array([[1, 1j], [1, -1j]])
# Rows: phi_+ = (psi_10 + i psi_01)/sqrt2, phi_- = (psi_10 - i psi_01)/sqrt2.
OAM = SQ2 * np.array([[1, 1j], [1, -1j]])


@dataclass(frozen=True)
class VectorModeCoefficients:
    coeffs: np.ndarray
    pol_basis: str = "linear_xy"
    spa_basis: str = "HG_10_01"

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != 2:
            raise InvalidArgument("coefficients must form a 2-d matrix")
        if self.pol_basis not in POL_BASES:
            raise InvalidArgument(f"pol_basis must be one of {POL_BASES}")
        if self.spa_basis not in SPA_BASES:
            raise InvalidArgument(f"spa_basis must be one of {SPA_BASES}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def normalized(self) -> "VectorModeCoefficients":
        n = self.norm
        if n == 0:
            raise InvalidArgument("cannot normalize a zero coefficient matrix")
        return VectorModeCoefficients(self.coeffs / n, self.pol_basis, self.spa_basis)

    def to_dict(self) -> dict:
        return {
            "pol_basis": self.pol_basis,
            "spa_basis": self.spa_basis,
            "coeffs": [[[z.real, z.imag] for z in row] for row in self.coeffs],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "VectorModeCoefficients":
        """Parse the JSON document form; errors name the offending field path."""
        if not isinstance(data, dict):
            raise InvalidArgument("$: expected an object")
        for key in ("pol_basis", "spa_basis", "coeffs"):
            if key not in data:
                raise InvalidArgument(f"$.{key}: missing field")
        rows = data["coeffs"]
        if not isinstance(rows, list) or not rows:
            raise InvalidArgument("$.coeffs: expected a non-empty list of rows")
        matrix = []
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != len(rows[0]):
                raise InvalidArgument(f"$.coeffs[{i}]: expected a row of {len(rows[0])} [re, im] pairs")
            out = []
            for j, pair in enumerate(row):
                if (
                    not isinstance(pair, list)
                    or len(pair) != 2
                    or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)
                ):
                    raise InvalidArgument(f"$.coeffs[{i}][{j}]: expected [re, im] numbers")
                out.append(complex(pair[0], pair[1]))
            matrix.append(out)
        try:
            return cls(np.array(matrix), data["pol_basis"], data["spa_basis"])
        except InvalidArgument as exc:
            field = "pol_basis" if "pol_basis" in str(exc) else "spa_basis"
            raise InvalidArgument(f"$.{field}: {exc}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "VectorModeCoefficients":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidArgument(f"$: invalid JSON ({exc.msg})") from None
        return cls.from_dict(data)


@dataclass(frozen=True)
class SchmidtDecomposition:
    lambdas: np.ndarray
    schmidt_rank: float


@dataclass(frozen=True)
class HermiteGaussMode:
    """First-order Hermite-Gauss mode ``psi_nm`` in the waist plane."""

    n: int
    m: int
    waist: float = 1.0

    def __post_init__(self):
        if (self.n, self.m) not in ((0, 0), (1, 0), (0, 1)):
            raise InvalidArgument("only psi_00, psi_10 and psi_01 are supported")
        if self.waist <= 0:
            raise InvalidArgument("waist must be positive")

    def __call__(self, x, y):
        w = self.waist
        envelope = np.sqrt(2 / np.pi) / w * np.exp(-(np.square(x) + np.square(y)) / w**2)
        return envelope * (2 * np.asarray(x) / w) ** self.n * (2 * np.asarray(y) / w) ** self.m


def standard_mode(kind: str) -> VectorModeCoefficients:
    """Radially or azimuthally polarized first-order beam.

    Azimuthal: ``(-x psi_01 + y psi_10)/sqrt2``, a field ``~ (-y, x)``.
    Radial: ``(x psi_10 + y psi_01)/sqrt2``, a field ``~ (x, y)``.
    """
    if kind == "radial":
        c = [[SQ2, 0], [0, SQ2]]
    elif kind == "azimuthal":
        c = [[0, -SQ2], [SQ2, 0]]
    else:
        raise InvalidArgument(f"kind must be 'radial' or 'azimuthal', got {kind!r}")
    return VectorModeCoefficients(np.array(c, dtype=complex))


def schmidt_decompose(c: VectorModeCoefficients) -> SchmidtDecomposition:
    """Schmidt weights (squared singular values) and rank ``K = 1/sum(lambda^2)``."""
    if not np.any(c.coeffs):
        raise InvalidArgument("zero coefficient matrix has no Schmidt decomposition")
    sv = np.linalg.svd(c.coeffs, compute_uv=False)
    lambdas = sv**2 / np.sum(sv**2)
    return SchmidtDecomposition(lambdas, float(1.0 / np.sum(lambdas**2)))


def transform_bases(
    c: VectorModeCoefficients,
    u_pol: np.ndarray,
    w_spa: np.ndarray,
    pol_basis: str | None = None,
    spa_basis: str | None = None,
) -> VectorModeCoefficients:
    """Re-express the same field in new polarization and spatial bases.

    Row ``k`` of ``u_pol`` gives the new polarization vector ``e'_k`` in the
    current basis, likewise ``w_spa`` for the spatial modes. The new
    coefficients are ``conj(u_pol) @ c @ conj(w_spa).T``.
    """
    u_pol = np.asarray(u_pol, dtype=complex)
    w_spa = np.asarray(w_spa, dtype=complex)
    for name, mat, size in (("u_pol", u_pol, c.coeffs.shape[0]), ("w_spa", w_spa, c.coeffs.shape[1])):
        if mat.shape != (size, size):
            raise InvalidArgument(f"{name} must be {size}x{size}, got {mat.shape}")
        err = unitary_error(mat)
        if err > UNITARY_TOL:
            raise InvalidArgument(f"{name} is not unitary (max deviation {err:.3e})")
    new = u_pol.conj() @ c.coeffs @ w_spa.conj().T
    return VectorModeCoefficients(new, pol_basis or c.pol_basis, spa_basis or c.spa_basis)


def to_circular_oam(c: VectorModeCoefficients) -> VectorModeCoefficients:
    """Linear/HG coefficients to the circular-polarization / OAM basis pair."""
    if (c.pol_basis, c.spa_basis) != ("linear_xy", "HG_10_01"):
        raise InvalidArgument("expected linear_xy / HG_10_01 coefficients")
    return transform_bases(c, CIRCULAR, OAM, "circular", "OAM_pm")


def to_linear_hg(c: VectorModeCoefficients) -> VectorModeCoefficients:
    if (c.pol_basis, c.spa_basis) != ("circular", "OAM_pm"):
        raise InvalidArgument("expected circular / OAM_pm coefficients")
    return transform_bases(c, CIRCULAR.conj().T, OAM.conj().T, "linear_xy", "HG_10_01")


def is_structurally_separable(c: VectorModeCoefficients, tol: float = 1e-9) -> bool:
    """True iff the beam factors into a uniform polarization times one spatial mode."""
    return schmidt_decompose(c).schmidt_rank <= 1.0 + tol


def evaluate_field(c: VectorModeCoefficients, x, y, waist: float = 1.0) -> np.ndarray:
    """Transverse field ``(E_x, E_y)`` at points ``(x, y)``; shape ``(2,) + shape(x)``."""
    if waist <= 0:
        raise InvalidArgument("waist must be positive")
    if c.spa_basis != "HG_10_01":
        raise InvalidArgument("evaluate_field needs HG_10_01 spatial coefficients; transform first")
    if c.pol_basis == "circular":
        c = transform_bases(c, CIRCULAR.conj().T, np.eye(2), "linear_xy")
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    psi = np.stack([HermiteGaussMode(1, 0, waist)(x, y), HermiteGaussMode(0, 1, waist)(x, y)])
    return np.tensordot(c.coeffs, psi, axes=(1, 0))


def intensity_grid(c: VectorModeCoefficients, grid_size: int = 256, extent: float = 3.0, waist: float = 1.0):
    """Sample points and ``|E_x|^2 + |E_y|^2`` on a square grid spanning ``+-extent``.

    The array is indexed ``[row, col] = [y, x]`` with ``y`` increasing downward
    in row order.
    """
    axis = np.linspace(-extent, extent, grid_size)
    xx, yy = np.meshgrid(axis, axis)
    field = evaluate_field(c, xx, yy, waist)
    return axis, np.sum(np.abs(field) ** 2, axis=0)


def render_intensity(
    c: VectorModeCoefficients, grid_size: int = 256, extent: float = 3.0, waist: float = 1.0
) -> np.ndarray:
    """Max-normalized intensity image in ``[0, 1]``; ``extent`` is in waists."""
    if grid_size < 16:
        raise InvalidArgument("grid_size must be >= 16")
    _, image = intensity_grid(c, grid_size, extent * waist, waist)
    peak = image.max()
    return image / peak if peak > 0 else image


def to_pgm(image: np.ndarray) -> bytes:
    """Encode a ``[0, 1]`` image as binary 8-bit PGM (P5)."""
    image = np.asarray(image, dtype=float)
    if image.ndim != 2:
        raise InvalidArgument("PGM needs a 2-d image")
    pixels = np.clip(np.rint(255 * image), 0, 255).astype(np.uint8)
    rows, cols = pixels.shape
    return b"P5\n%d %d\n255\n" % (cols, rows) + pixels.tobytes()


def read_pgm(data: bytes) -> np.ndarray:
    """Decode a P5 image written by :func:`to_pgm` into ``uint8`` pixels."""
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5" or len(parts) < 4:
        raise InvalidArgument("not a binary PGM (P5) image")
    cols, rows = map(int, parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(rows, cols)


def coefficients_from_pairs(pairs: Sequence[tuple[str, str, complex]]) -> VectorModeCoefficients:
    """Build linear/HG coefficients from ``(pol, spatial, amplitude)`` triples.

    ``pol`` is ``'x'`` or ``'y'``, ``spatial`` is ``'10'`` or ``'01'``.
    """
    c = np.zeros((2, 2), dtype=complex)
    for pol, spa, amp in pairs:
        c["xy".index(pol), ("10", "01").index(spa)] += amp
    return VectorModeCoefficients(c)
