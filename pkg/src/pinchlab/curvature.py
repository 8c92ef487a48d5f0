"""Exact algebra of 4-dimensional curvature tensors in an orthonormal frame.

Conventions used throughout:

* Indices run over four orthonormal directions; arrays are 0-based while the
  public ``component(i, j, k, l)`` accessors take 1-based indices.
* Ricci contraction: ``Ric_ij = sum_k R_ikjk``, so the unit round 2-sphere
  plane contributes +1 to each of its directions.
* Norms are full-component Frobenius norms: ``|T|^2 = sum_{ijkl} T_ijkl^2``,
  which counts every sectional value four times.  This is the unique
  convention under which the S^2 x R^2 cylinder satisfies ``|W| = R/sqrt(3)``.

The orthogonal decomposition splits a curvature tensor ``Rm`` into

    Rm = W + E(ric0) + S(R)

with ``E_ijkl = (ric0_ik d_jl + ric0_jl d_ik - ric0_il d_jk - ric0_jk d_il)/2``
and ``S_ijkl = R (d_ik d_jl - d_il d_jk)/12``; the three parts are mutually
orthogonal and W is totally trace-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

SQRT3 = math.sqrt(3.0)

# Index pairs spanning the 6-dimensional space of 2-forms, in lexicographic
# order.  A curvature tensor is a symmetric 6x6 matrix over these pairs,
# subject to one Bianchi constraint: M[12,34] - M[13,24] + M[14,23] = 0.
PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

# The 20 independent slots: upper-triangular pair-pairs minus the derived
# slot ((1,4),(2,3)), which Bianchi fixes as M[13,24] - M[12,34].
_BIANCHI_DERIVED = (2, 3)
INDEPENDENT_SLOTS = tuple(
    (p, q)
    for p in range(6)
    for q in range(p, 6)
    if (p, q) != _BIANCHI_DERIVED
)

_SYMMETRY_TOL = 1e-10


class SymmetryViolation(ValueError):
    """Input components contradict the curvature symmetries."""


class ZeroScalar(ValueError):
    """Pinching quantities are undefined at zero scalar curvature."""


class DegenerateSpectrum(ValueError):
    """Ricci eigenvalues too close for an unambiguous eigenframe."""


def _pair_index(i: int, j: int) -> tuple[int, float]:
    """Map an ordered index pair to (pair slot, orientation sign)."""
    if i < j:
        return PAIRS.index((i, j)), 1.0
    return PAIRS.index((j, i)), -1.0


def _dense_from_pair_matrix(m: np.ndarray) -> np.ndarray:
    a = np.zeros((4, 4, 4, 4))
    for p, (i, j) in enumerate(PAIRS):
        for q, (k, l) in enumerate(PAIRS):
            v = m[p, q]
            a[i, j, k, l] = v
            a[j, i, k, l] = -v
            a[i, j, l, k] = -v
            a[j, i, l, k] = v
    return a


@dataclass(frozen=True)
class CurvatureTensor:
    """Dense 4^4 array with all algebraic curvature symmetries."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.shape != (4, 4, 4, 4):
            raise ValueError("curvature tensor must be a 4x4x4x4 array")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @classmethod
    def from_array(cls, values: np.ndarray, tol: float = _SYMMETRY_TOL) -> "CurvatureTensor":
        """Build from a raw array, validating every symmetry."""
        v = np.asarray(values, dtype=float)
        scale = max(1.0, float(np.max(np.abs(v))))
        if np.max(np.abs(v + np.swapaxes(v, 0, 1))) > tol * scale:
            raise SymmetryViolation("antisymmetry in the first index pair fails")
        if np.max(np.abs(v + np.swapaxes(v, 2, 3))) > tol * scale:
            raise SymmetryViolation("antisymmetry in the second index pair fails")
        if np.max(np.abs(v - np.transpose(v, (2, 3, 0, 1)))) > tol * scale:
            raise SymmetryViolation("pair symmetry fails")
        bianchi = v + np.transpose(v, (0, 2, 3, 1)) + np.transpose(v, (0, 3, 1, 2))
        if np.max(np.abs(bianchi)) > tol * scale:
            raise SymmetryViolation("first Bianchi identity fails")
        return cls(v)

    def component(self, i: int, j: int, k: int, l: int) -> float:
        """Entry R_ijkl with 1-based indices."""
        return float(self.values[i - 1, j - 1, k - 1, l - 1])

    def sectional(self, i: int, j: int) -> float:
        """Sectional component R_ijij with 1-based indices."""
        return self.component(i, j, i, j)

    def ricci(self) -> np.ndarray:
        """Ricci contraction Ric_ij = sum_k R_ikjk as a symmetric 4x4 array."""
        return np.einsum("ikjk->ij", self.values)

    def scalar(self) -> float:
        return float(np.trace(self.ricci()))

    def rotate(self, q: np.ndarray) -> "CurvatureTensor":
        """Pull back along the orthogonal matrix q (columns = new frame)."""
        rotated = np.einsum("ia,jb,kc,ld,ijkl->abcd", q, q, q, q, self.values, optimize=True)
        return CurvatureTensor(rotated)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.values**2)))


@dataclass(frozen=True)
class WeylTensor:
    """Totally trace-free curvature-type tensor (same index symmetries)."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float).copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def component(self, i: int, j: int, k: int, l: int) -> float:
        return float(self.values[i - 1, j - 1, k - 1, l - 1])

    def sectional(self, i: int, j: int) -> float:
        return self.component(i, j, i, j)

    def norm(self) -> float:
        """Full-sum Frobenius norm."""
        return float(np.sqrt(np.sum(self.values**2)))


@dataclass(frozen=True)
class Decomposition:
    weyl: WeylTensor
    traceless_ricci: np.ndarray
    scalar: float

    def __post_init__(self) -> None:
        r = np.asarray(self.traceless_ricci, dtype=float).copy()
        r.flags.writeable = False
        object.__setattr__(self, "traceless_ricci", r)


@dataclass(frozen=True)
class RicciSpectrum:
    """Ricci eigenvalues sorted ascending."""

    lam: tuple[float, float, float, float]

    def __post_init__(self) -> None:
        if list(self.lam) != sorted(self.lam):
            raise ValueError("eigenvalues must be sorted ascending")

    @property
    def scalar(self) -> float:
        return float(sum(self.lam))


@dataclass(frozen=True)
class SpectrumParams:
    """Pinching quantities of a Ricci spectrum with nonzero scalar curvature.

    b = (lam3 + lam4) - (lam1 + lam2), eta = b/R, x = (lam2 - lam1)/2,
    y = (lam4 - lam3)/2.
    """

    scalar: float
    b: float
    eta: float
    x: float
    y: float


@dataclass(frozen=True)
class PinchProfile:
    """Pinching strength gamma and which threshold regime it targets.

    The bounds gamma < 1+sqrt(3) ("star") and gamma <= (1+sqrt(3))/sqrt(3)
    ("star-star") are deliberately not enforced: probing out-of-range gamma
    is how counterexamples are found.
    """

    gamma: float
    mode: str = "star"

    def __post_init__(self) -> None:
        if self.mode not in ("star", "star-star"):
            raise ValueError("mode must be 'star' or 'star-star'")


def build_curvature(components: Mapping | Sequence[float]) -> CurvatureTensor:
    """Construct a curvature tensor from independent components.

    Accepts either

    * a sequence of 20 reals in the order of ``INDEPENDENT_SLOTS`` (the
      upper-triangular pair-space entries minus the Bianchi-derived slot), or
    * a mapping from 1-based index quadruples ``(i, j, k, l)`` to values.
      Unspecified entries default to zero; the slot R_1423 is derived from
      the Bianchi identity unless given explicitly.

    Raises SymmetryViolation if the mapping contradicts antisymmetry, pair
    symmetry, or the Bianchi identity beyond 1e-10.
    """
    m = np.zeros((6, 6))
    given = np.zeros((6, 6), dtype=bool)

    def put(p: int, q: int, value: float) -> None:
        if p > q:
            p, q = q, p
        if given[p, q] and abs(m[p, q] - value) > _SYMMETRY_TOL:
            raise SymmetryViolation(
                f"conflicting values for pair slot {PAIRS[p]},{PAIRS[q]}: "
                f"{m[p, q]} vs {value}"
            )
        m[p, q] = value
        given[p, q] = True

    if isinstance(components, Mapping):
        for idx, value in components.items():
            i, j, k, l = idx
            for n in (i, j, k, l):
                if not 1 <= n <= 4:
                    raise SymmetryViolation(f"index out of range in {idx}")
            if i == j or k == l:
                if abs(value) > _SYMMETRY_TOL:
                    raise SymmetryViolation(f"antisymmetry forces R{idx} = 0")
                continue
            p, si = _pair_index(i - 1, j - 1)
            q, sk = _pair_index(k - 1, l - 1)
            put(p, q, si * sk * float(value))
    else:
        vals = list(components)
        if len(vals) != len(INDEPENDENT_SLOTS):
            raise SymmetryViolation(
                f"expected {len(INDEPENDENT_SLOTS)} independent components, got {len(vals)}"
            )
        for (p, q), value in zip(INDEPENDENT_SLOTS, vals):
            put(p, q, float(value))

    # Bianchi: M[12,34] - M[13,24] + M[14,23] = 0.  The slot ((1,4),(2,3))
    # is derived when not explicitly given; an explicit inconsistent triple
    # is rejected.
    violation = m[0, 5] - m[1, 4] + m[2, 3]
    if abs(violation) > _SYMMETRY_TOL:
        if given[_BIANCHI_DERIVED]:
            raise SymmetryViolation(
                f"first Bianchi identity violated by {violation:.3e}"
            )
        m[_BIANCHI_DERIVED] = m[1, 4] - m[0, 5]

    m = np.triu(m) + np.triu(m, 1).T
    return CurvatureTensor(_dense_from_pair_matrix(m))


def _ricci_part(ric0: np.ndarray) -> np.ndarray:
    eye = np.eye(4)
    return 0.5 * (
        np.einsum("ik,jl->ijkl", ric0, eye)
        + np.einsum("jl,ik->ijkl", ric0, eye)
        - np.einsum("il,jk->ijkl", ric0, eye)
        - np.einsum("jk,il->ijkl", ric0, eye)
    )


def _scalar_part(scalar: float) -> np.ndarray:
    eye = np.eye(4)
    g2 = np.einsum("ik,jl->ijkl", eye, eye) - np.einsum("il,jk->ijkl", eye, eye)
    return (scalar / 12.0) * g2


def decompose(rm: CurvatureTensor) -> Decomposition:
    """Split into Weyl, traceless-Ricci and scalar parts."""
    ric = rm.ricci()
    scalar = float(np.trace(ric))
    ric0 = ric - (scalar / 4.0) * np.eye(4)
    weyl = rm.values - _ricci_part(ric0) - _scalar_part(scalar)
    return Decomposition(weyl=WeylTensor(weyl), traceless_ricci=ric0, scalar=scalar)


def recompose(d: Decomposition) -> CurvatureTensor:
    """Inverse of :func:`decompose`."""
    values = d.weyl.values + _ricci_part(d.traceless_ricci) + _scalar_part(d.scalar)
    return CurvatureTensor(values)


def jacobi_eigh(a: np.ndarray, tol: float = 1e-12, max_sweeps: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigensolver for a small symmetric matrix.

    Returns eigenvalues sorted ascending and the orthogonal matrix whose
    columns are the matching eigenvectors.  Iteration stops when every
    off-diagonal entry is below ``tol`` relative to the largest initial
    entry.  Fully deterministic.
    """
    m = np.asarray(a, dtype=float).copy()
    n = m.shape[0]
    v = np.eye(n)
    scale = max(float(np.max(np.abs(m))), 1.0)
    threshold = tol * scale
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off = max(off, abs(m[p, q]))
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                if abs(apq) <= threshold * 1e-2:
                    continue
                theta = (m[q, q] - m[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(1.0, theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                m = rot.T @ m @ rot
                v = v @ rot
    m = 0.5 * (m + m.T)
    w = np.diag(m).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def ricci_spectrum(rm: CurvatureTensor) -> RicciSpectrum:
    """Sorted Ricci eigenvalues of the tensor."""
    w, _ = jacobi_eigh(rm.ricci())
    return RicciSpectrum(lam=tuple(float(x) for x in w))


def spectrum_params(s: RicciSpectrum) -> SpectrumParams:
    """Derived pinching quantities; requires nonzero scalar curvature."""
    scalar = s.scalar
    if scalar == 0.0:
        raise ZeroScalar("eta = b/R is undefined at R = 0")
    l1, l2, l3, l4 = s.lam
    b = (l3 + l4) - (l1 + l2)
    return SpectrumParams(
        scalar=scalar,
        b=b,
        eta=b / scalar,
        x=(l2 - l1) / 2.0,
        y=(l4 - l3) / 2.0,
    )


def invariant_norms(d: Decomposition) -> tuple[float, float]:
    """(|W|, |ric0|) in the full-sum convention."""
    weyl_norm = d.weyl.norm()
    ricci0_norm = float(np.sqrt(np.sum(d.traceless_ricci**2)))
    return weyl_norm, ricci0_norm


def pinch_residual(rm: CurvatureTensor, p: PinchProfile) -> float:
    """gamma * | |ric0| - R/(2 sqrt 3) | - |W|; nonnegative iff pinched."""
    d = decompose(rm)
    weyl_norm, ricci0_norm = invariant_norms(d)
    return p.gamma * abs(ricci0_norm - d.scalar / (2.0 * SQRT3)) - weyl_norm


_GAP_RTOL = 1e-8


def pair_derivatives(rm: CurvatureTensor) -> tuple[float, float, float]:
    """Reaction-ODE derivatives of the eigenvalue pair sums.

    Works in the Ricci eigenframe, where ``d lam_i/dt = 2 sum_k R_ikik lam_k``.
    Returns (d(lam1+lam2)/dt, d(lam3+lam4)/dt, db/dt).  Requires pairwise
    distinct eigenvalues (relative gap > 1e-8); the zero-Ricci case is the
    one degeneracy with a frame-independent answer and returns zeros.
    """
    w, q = jacobi_eigh(rm.ricci())
    scale = float(np.max(np.abs(w)))
    if scale == 0.0:
        return 0.0, 0.0, 0.0
    if float(np.min(np.diff(w))) <= _GAP_RTOL * scale:
        raise DegenerateSpectrum(
            "repeated Ricci eigenvalues: pair sums need the support-function rule"
        )
    rot = rm.rotate(q)
    sect = np.einsum("ikik->ik", rot.values)
    dlam = 2.0 * sect @ w
    d12 = float(dlam[0] + dlam[1])
    d34 = float(dlam[2] + dlam[3])
    return d12, d34, d34 - d12
