"""Bright squeezed cylindrically polarized states as two-mode Gaussian states.

The two modes are the Schmidt pair of the beam: for the azimuthal kind
``(x-polarized psi_01, y-polarized psi_10)``, for the radial kind
``(x-polarized psi_10, y-polarized psi_01)``. The composite annihilation
operator is ``a_C = (sign * a_0 + a_1)/sqrt2`` with ``sign = -1`` for the
azimuthal and ``+1`` for the radial beam; its orthogonal partner is
``a_B = (a_0 - sign * a_1)/sqrt2``.

Two constructions of ``D_C(alpha) S_C(zeta)|0>`` are provided:

* ``composite`` rotates into the ``(C, B)`` basis, squeezes and displaces
  mode C, and rotates back;
* ``factored`` applies the two-mode squeezer
  ``exp[xi^* a_0 a_1 - xi a_0^dag a_1^dag]`` with ``xi = sign * zeta / 2``,
  then ``S(zeta/2)`` on each mode, then displacements
  ``(sign * alpha/sqrt2, alpha/sqrt2)``.

The two agree exactly because ``S_C(z) S_B(-z)`` is that two-mode squeezer
and ``S_C(z) S_B(z)`` is the product of single-mode squeezers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidArgument
from .gaussian_core import (
    GaussianState,
    apply_mode_unitary,
    displace,
    squeeze,
    two_mode_squeeze,
    vacuum,
)

KINDS = ("radial", "azimuthal")
CONSTRUCTIONS = ("composite", "factored")
MAX_ZETA = 5.0

MODE_LABELS = {
    "azimuthal": ("x01", "y10"),
    "radial": ("x10", "y01"),
}


def kind_sign(kind: str) -> int:
    if kind not in KINDS:
        raise InvalidArgument(f"kind must be one of {KINDS}, got {kind!r}")
    return -1 if kind == "azimuthal" else 1


def composite_unitary(kind: str) -> np.ndarray:
    """Rows are the composite mode and its orthogonal partner in the ``(a_0, a_1)`` basis."""
    sign = kind_sign(kind)
    return np.sqrt(0.5) * np.array([[sign, 1.0], [1.0, -sign]])


@dataclass(frozen=True)
class CylindricalStateSpec:
    kind: str = "azimuthal"
    alpha: complex = 0j
    zeta: complex = 0j
    construction: str = "composite"
    max_zeta: float = MAX_ZETA

    def __post_init__(self):
        kind_sign(self.kind)
        if self.construction not in CONSTRUCTIONS:
            raise InvalidArgument(f"construction must be one of {CONSTRUCTIONS}")
        if abs(self.zeta) > self.max_zeta:
            raise InvalidArgument(f"|zeta| = {abs(self.zeta):.3g} exceeds the limit {self.max_zeta}")
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "zeta", complex(self.zeta))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "alpha": [self.alpha.real, self.alpha.imag],
            "zeta": [self.zeta.real, self.zeta.imag],
            "construction": self.construction,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CylindricalStateSpec":
        def pair(key):
            value = data.get(key, [0.0, 0.0])
            if not (isinstance(value, (list, tuple)) and len(value) == 2):
                raise InvalidArgument(f"$.{key}: expected [re, im]")
            return complex(float(value[0]), float(value[1]))

        return cls(
            kind=data.get("kind", "azimuthal"),
            alpha=pair("alpha"),
            zeta=pair("zeta"),
            construction=data.get("construction", "composite"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "CylindricalStateSpec":
        return cls.from_dict(json.loads(text))


def build(spec: CylindricalStateSpec) -> GaussianState:
    """Two-mode Gaussian state ``D_C(alpha) S_C(zeta)|0>`` over the Schmidt pair."""
    sign = kind_sign(spec.kind)
    state = vacuum(2)
    if spec.construction == "composite":
        if spec.alpha == 0 and spec.zeta == 0:
            # Nothing acts on the composite mode; skip the rotation round trip.
            return state
        u = composite_unitary(spec.kind)
        state = apply_mode_unitary(state, u)
        state = squeeze(state, 0, spec.zeta)
        state = displace(state, 0, spec.alpha)
        return apply_mode_unitary(state, u.conj().T)
    # Operators act right to left: two-mode squeezer first.
    state = two_mode_squeeze(state, 0, 1, sign * spec.zeta / 2)
    state = squeeze(state, 1, spec.zeta / 2)
    state = displace(state, 1, spec.alpha / np.sqrt(2))
    state = squeeze(state, 0, spec.zeta / 2)
    return displace(state, 0, sign * spec.alpha / np.sqrt(2))


def verify_factorization(kind: str, alpha: complex, zeta: complex) -> float:
    """Largest elementwise difference between the two constructions."""
    a = build(CylindricalStateSpec(kind, alpha, zeta, "composite"))
    b = build(CylindricalStateSpec(kind, alpha, zeta, "factored"))
    return float(max(np.max(np.abs(a.mean - b.mean)), np.max(np.abs(a.cov - b.cov))))


def arm_phases(kind: str, zeta: complex = 0.0, alpha: complex = 1.0) -> tuple[float, float]:
    """Auxiliary-beam phases that lock each arm to its share of the composite mode.

    Each arm's reference follows the sign of its coefficient in the composite
    mode, the phase of ``alpha`` and half the squeezing phase, so that the
    squeezed composite quadrature maps onto the Stokes S2 direction.
    """
    sign = kind_sign(kind)
    common = (np.angle(alpha) if alpha else 0.0) + 0.5 * np.angle(zeta)
    return (common + (np.pi if sign < 0 else 0.0), common)
