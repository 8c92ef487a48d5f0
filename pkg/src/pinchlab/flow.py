"""Reduced Ricci-flow eigenvalue dynamics under selectable Weyl policies.

The curvature operator is modeled diagonally in the Ricci eigenframe with
the one-parameter Weyl family

    w_12 = w_34 = w,      w_13 = w_14 = w_23 = w_24 = -w/2,

the unique diagonal family compatible with the four-dimensional trace
identities.  The eigenvalues then close into the autonomous system

    d lam_i / dt = 2 * sum_{k != i} lam_k * (w_ik + (lam_i + lam_k)/2 - R/6),

which reproduces d R/dt = 2*|Ric|^2 exactly and, for the bottom/top pair
sums, the closed forms

    d(lam1+lam2)/dt / 2 = (w + R/3)(lam1+lam2-lam3-lam4) + lam3^2 + lam4^2,
    db/dt / 2           = 2 b (R/3 + w) + (lam1^2+lam2^2) - (lam3^2+lam4^2).

Worst-case policies recompute w from the instantaneous state (a memoryless
adversary saturating the pinching bound); no Weyl evolution equation is
imposed.  Integration is classical fixed-step RK4 with re-sorting after
each step, which keeps traces exactly reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SQRT3 = math.sqrt(3.0)


class StepTooLarge(RuntimeError):
    """A single step moved an eigenvalue by more than half the spread."""


@dataclass(frozen=True)
class ZeroWeyl:
    def weyl_value(self, lam: np.ndarray) -> float:
        return 0.0


@dataclass(frozen=True)
class ConstantWeyl:
    w: float

    def weyl_value(self, lam: np.ndarray) -> float:
        return self.w


def _worst_weyl(lam: np.ndarray, gamma: float) -> float:
    """Largest w the pinching bound allows, signed to push db/dt up."""
    scalar = float(lam.sum())
    dev = lam - scalar / 4.0
    ric0_norm = math.sqrt(float(np.dot(dev, dev)))
    return (gamma / (2.0 * SQRT3)) * abs(ric0_norm - scalar / (2.0 * SQRT3))


@dataclass(frozen=True)
class WorstStarWeyl:
    gamma: float

    def weyl_value(self, lam: np.ndarray) -> float:
        return _worst_weyl(lam, self.gamma)


@dataclass(frozen=True)
class WorstStarStarWeyl:
    gamma: float

    def weyl_value(self, lam: np.ndarray) -> float:
        return _worst_weyl(lam, self.gamma)


WeylPolicy = ZeroWeyl | ConstantWeyl | WorstStarWeyl | WorstStarStarWeyl


@dataclass(frozen=True)
class FlowState:
    t: float
    lam: tuple[float, float, float, float]

    def __post_init__(self) -> None:
        if list(self.lam) != sorted(self.lam):
            raise ValueError("eigenvalues must be sorted ascending")

    @property
    def scalar(self) -> float:
        return float(sum(self.lam))

    @property
    def b(self) -> float:
        return (self.lam[2] + self.lam[3]) - (self.lam[0] + self.lam[1])

    @property
    def eta(self) -> float:
        r = self.scalar
        return self.b / r if r != 0.0 else math.nan


@dataclass(frozen=True)
class FlowTrace:
    states: tuple[FlowState, ...]
    weyl_values: tuple[float, ...]
    dt: float
    reason: str  # "t_end" | "blowup" | "collision"

    def final(self) -> FlowState:
        return self.states[-1]

    def etas(self) -> np.ndarray:
        return np.array([s.eta for s in self.states])

    def scalars(self) -> np.ndarray:
        return np.array([s.scalar for s in self.states])

    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.states])


def _weyl_matrix(w: float) -> np.ndarray:
    m = np.full((4, 4), -w / 2.0)
    m[0, 1] = m[1, 0] = m[2, 3] = m[3, 2] = w
    np.fill_diagonal(m, 0.0)
    return m


def _field(lam: np.ndarray, policy: WeylPolicy) -> np.ndarray:
    w = policy.weyl_value(lam)
    scalar = float(lam.sum())
    m = _weyl_matrix(w) + (lam[:, None] + lam[None, :]) / 2.0 - scalar / 6.0
    np.fill_diagonal(m, 0.0)
    return 2.0 * m @ lam


def vector_field(s: FlowState, p: WeylPolicy) -> tuple[float, float, float, float]:
    """d lam/dt at the state under the restricted Weyl ansatz."""
    d = _field(np.array(s.lam, dtype=float), p)
    return tuple(float(v) for v in d)


_COLLISION_RTOL = 1e-9


def integrate(
    s0: FlowState,
    p: WeylPolicy,
    dt: float,
    t_end: float,
    r_cap: float,
) -> FlowTrace:
    """Fixed-step RK4 integration with re-sorting after each step.

    Terminates at t_end, when the scalar curvature exceeds r_cap, or when a
    step swaps an eigenvalue across the pair boundary by more than a
    relative 1e-9 (ties within tolerance are absorbed by sorting).  Raises
    StepTooLarge when a step moves any eigenvalue by more than half the
    spectral spread.
    """
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    if not t_end > s0.t:
        raise ValueError("t_end must exceed the initial time")
    if not r_cap > s0.scalar:
        raise ValueError("r_cap must exceed the initial scalar curvature")

    lam = np.array(s0.lam, dtype=float)
    states = [s0]
    weyl_values = [p.weyl_value(lam)]
    n_steps = max(1, int(round((t_end - s0.t) / dt)))
    reason = "t_end"

    for i in range(1, n_steps + 1):
        k1 = _field(lam, p)
        k2 = _field(lam + 0.5 * dt * k1, p)
        k3 = _field(lam + 0.5 * dt * k2, p)
        k4 = _field(lam + dt * k3, p)
        new = lam + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

        spread = lam[3] - lam[0]
        if spread == 0.0:
            spread = float(np.max(np.abs(lam)))
        if spread > 0.0 and float(np.max(np.abs(new - lam))) > 0.5 * spread:
            raise StepTooLarge(
                f"step at t={s0.t + (i - 1) * dt} moved an eigenvalue by more "
                f"than half the spectral spread {spread}"
            )

        crossed = new[1] - new[2] > _COLLISION_RTOL * max(
            abs(new[3] - new[0]), 1e-300
        )
        lam = np.sort(new)
        t = s0.t + i * dt
        state = FlowState(t=t, lam=tuple(float(v) for v in lam))
        states.append(state)
        weyl_values.append(p.weyl_value(lam))
        if crossed:
            reason = "collision"
            break
        if state.scalar > r_cap:
            reason = "blowup"
            break

    return FlowTrace(
        states=tuple(states),
        weyl_values=tuple(weyl_values),
        dt=dt,
        reason=reason,
    )


@dataclass(frozen=True)
class TraceDiagnostics:
    """Barrier and monotonicity summary of a trace.

    ``max_barrier_slack`` is the largest value of b - (eta0 - delta*t)*R
    along the trace; the barrier is violated when it exceeds a relative
    1e-9 allowance.  ``scalar_decreases`` counts dR/dt >= 0 failures and
    must be zero.
    """

    max_barrier_slack: float
    barrier_violated: bool
    eta_segments: tuple[tuple[int, int, str], ...]
    scalar_decreases: int
    allowance: float = field(default=0.0)


def trace_diagnostics(trace: FlowTrace, eta0: float, delta: float) -> TraceDiagnostics:
    if not trace.states:
        raise ValueError("empty trace")
    slack = -math.inf
    scale = 1.0
    for s in trace.states:
        r = s.scalar
        scale = max(scale, abs(r))
        slack = max(slack, s.b - (eta0 - delta * s.t) * r)
    allowance = 1e-9 * scale

    etas = trace.etas()
    segments: list[tuple[int, int, str]] = []
    eps = 1e-12 * max(1.0, float(np.max(np.abs(etas[np.isfinite(etas)]), initial=0.0)))

    def trend(d: float) -> str:
        if d > eps:
            return "increasing"
        if d < -eps:
            return "decreasing"
        return "constant"

    start = 0
    current: str | None = None
    for i in range(1, len(etas)):
        t = trend(float(etas[i] - etas[i - 1]))
        if current is None:
            current = t
        elif t != current:
            segments.append((start, i - 1, current))
            start = i - 1
            current = t
    if current is not None:
        segments.append((start, len(etas) - 1, current))

    scalars = trace.scalars()
    decreases = int(np.sum(np.diff(scalars) < -1e-12 * np.maximum(scalars[:-1], 1.0)))

    return TraceDiagnostics(
        max_barrier_slack=slack,
        barrier_violated=slack > allowance,
        eta_segments=tuple(segments),
        scalar_decreases=decreases,
        allowance=allowance,
    )


_TRACE_COLUMNS = ("t", "lambda1", "lambda2", "lambda3", "lambda4", "R", "b", "eta", "w")


def serialize_trace(trace: FlowTrace) -> str:
    """Tab-separated table, one row per step, full double precision."""
    lines = ["\t".join(_TRACE_COLUMNS)]
    for s, w in zip(trace.states, trace.weyl_values):
        row = (s.t, *s.lam, s.scalar, s.b, s.eta, w)
        lines.append("\t".join(repr(v) for v in row))
    return "\n".join(lines) + "\n"
