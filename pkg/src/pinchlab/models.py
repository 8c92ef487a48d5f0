"""Closed-form curvature tensors for the sharp product model spaces.

Four models ship: flat space, the round 4-sphere, the S^3 x R cylinder and
the S^2 x R^2 cylinder.  The curved factor always occupies the lowest frame
indices; the pinching quantities checked here are frame-invariant, so the
choice is cosmetic.  ``remark_report`` verifies the exact relations that
make the two cylinders the boundary cases of the pinching inequality:

* S^2 x R^2:  |ric0| = R/2,  |W| = R/sqrt(3),  lam1+lam2 = 0, and the
  pinching residual vanishes exactly at gamma = 1+sqrt(3);
* S^3 x R:    |ric0| = R/(2 sqrt 3),  |W| = 0,  lam1+lam2 = R/3.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .curvature import (
    CurvatureTensor,
    PinchProfile,
    build_curvature,
    decompose,
    invariant_norms,
    pinch_residual,
    ricci_spectrum,
)

SQRT3 = math.sqrt(3.0)
GAMMA_STAR = 1.0 + SQRT3


class ModelKind(str, enum.Enum):
    FLAT4 = "flat"
    SPHERE_S4 = "s4"
    S3XR = "s3xr"
    S2XR2 = "s2xr2"


@dataclass(frozen=True)
class ModelSpace:
    """A model geometry; k is the sectional curvature of the curved factor."""

    kind: ModelKind
    k: float = 1.0

    def __post_init__(self) -> None:
        if self.kind is not ModelKind.FLAT4 and not self.k > 0.0:
            raise ValueError("curved models need k > 0")


def model_curvature(m: ModelSpace) -> CurvatureTensor:
    """Curvature tensor of the model in an adapted orthonormal frame."""
    k = m.k
    if m.kind is ModelKind.FLAT4:
        entries = {}
    elif m.kind is ModelKind.SPHERE_S4:
        entries = {(i, j, i, j): k for i in range(1, 5) for j in range(i + 1, 5)}
    elif m.kind is ModelKind.S3XR:
        entries = {(i, j, i, j): k for i in range(1, 4) for j in range(i + 1, 4)}
    else:
        entries = {(1, 2, 1, 2): k}
    return build_curvature(entries)


@dataclass(frozen=True)
class CheckRow:
    name: str
    value: float
    expected: float
    tol: float = 1e-12

    @property
    def error(self) -> float:
        return abs(self.value - self.expected)

    @property
    def passed(self) -> bool:
        return self.error <= self.tol


@dataclass(frozen=True)
class ModelReport:
    model: ModelSpace
    scalar: float
    checks: tuple[CheckRow, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "model": self.model.kind.value,
            "k": self.model.k,
            "scalar": self.scalar,
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "value": c.value,
                    "expected": c.expected,
                    "error": c.error,
                    "passed": c.passed,
                }
                for c in self.checks
            ],
        }


def remark_report(m: ModelSpace) -> ModelReport:
    """Verify the sharp model-space relations at 1e-12 absolute tolerance."""
    rm = model_curvature(m)
    d = decompose(rm)
    weyl_norm, ricci0_norm = invariant_norms(d)
    spectrum = ricci_spectrum(rm)
    l1, l2, l3, l4 = spectrum.lam
    scalar = d.scalar
    residual_star = pinch_residual(rm, PinchProfile(gamma=GAMMA_STAR))
    pair_low = l1 + l2
    b = (l3 + l4) - (l1 + l2)

    checks: list[CheckRow]
    if m.kind is ModelKind.FLAT4:
        checks = [
            CheckRow("ricci0_norm", ricci0_norm, 0.0),
            CheckRow("weyl_norm", weyl_norm, 0.0),
            CheckRow("pinch_residual(gamma_star)", residual_star, 0.0),
            CheckRow("lambda1+lambda2", pair_low, 0.0),
        ]
    elif m.kind is ModelKind.SPHERE_S4:
        checks = [
            CheckRow("ricci0_norm", ricci0_norm, 0.0),
            CheckRow("weyl_norm", weyl_norm, 0.0),
            CheckRow("b", b, 0.0),
            CheckRow("eta", b / scalar, 0.0),
            CheckRow("lambda1+lambda2", pair_low, scalar / 2.0),
            CheckRow(
                "pinch_residual(gamma_star)",
                residual_star,
                GAMMA_STAR * scalar / (2.0 * SQRT3),
            ),
        ]
    elif m.kind is ModelKind.S3XR:
        checks = [
            CheckRow("ricci0_norm", ricci0_norm, scalar / (2.0 * SQRT3)),
            CheckRow("weyl_norm", weyl_norm, 0.0),
            CheckRow("pinch_residual(gamma_star)", residual_star, 0.0),
            CheckRow("lambda1+lambda2", pair_low, scalar / 3.0),
        ]
    else:
        checks = [
            CheckRow("ricci0_norm", ricci0_norm, scalar / 2.0),
            CheckRow("weyl_norm", weyl_norm, scalar / SQRT3),
            CheckRow("pinch_residual(gamma_star)", residual_star, 0.0),
            CheckRow("lambda1+lambda2", pair_low, 0.0),
        ]
    return ModelReport(model=m, scalar=scalar, checks=tuple(checks))
