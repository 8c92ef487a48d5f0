"""Rigorous positivity certification of the worst-case pinching envelope.

With the scalar curvature normalized to 1 and sorted Ricci eigenvalues
written as

    lam1, lam2 = (1-eta)/4 -+ x,      lam3, lam4 = (1+eta)/4 -+ y,

the envelope evaluated here is

    I(eta, x, y; gamma) = eta*(3*eta^2+1)/12 + 2*(1+eta)*y^2 - 2*(1-eta)*x^2
                          - (gamma*eta/sqrt(3)) * | s - 1/(2*sqrt(3)) |,

    s = sqrt(eta^2/4 + 2*x^2 + 2*y^2)  (the traceless-Ricci norm),

an exact algebraic simplification of
``(1+eta)(lam3^2+lam4^2) - (1-eta)(lam1^2+lam2^2) - 2*eta/3 - 2*eta*W`` with
the Weyl sectional term pushed to the worst value the pinching bound and the
sector inequality ``W_1212^2 <= |W|^2/12`` allow.  The absolute value merges
the two sign regimes (traceless-Ricci norm above or below R/(2*sqrt(3)))
into one formula.

``certify`` runs a deterministic branch-and-bound over the admissible domain

    D(eta_lo) = { eta_lo <= eta <= 1, 0 <= x <= (1-eta)/4, y >= 0,
                  x + y <= eta/2 },

discharging boxes whose interval enclosure is strictly positive and
refining the rest, depth-first with the lower half first.  A counterexample
is only reported from a box already refined below the width tolerance, so
the reported witness sits at a local minimizer of the envelope rather than
at the first coarse box that happens to dip negative.  The traversal order
is a pure function of the inputs, so results are identical for any thread
count; threads only parallelize batched box evaluation.
"""

from __future__ import annotations

import enum
import heapq
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .interval import Interval

SQRT3 = math.sqrt(3.0)
_SQRT3_IV = Interval(3.0, 3.0).sqrt()
_K_IV = 1.0 / (2.0 * _SQRT3_IV)  # 1/(2 sqrt 3) as a rigorous enclosure
_K = 1.0 / (2.0 * SQRT3)

_DOMAIN_SLACK = 1e-9


class DomainViolation(ValueError):
    """Point or box lies wholly outside the admissible domain."""


class ThresholdViolation(ValueError):
    """eta0 does not exceed the mode threshold required for a positive gap."""


class BudgetExhaustedError(RuntimeError):
    """Certification ran out of boxes before deciding the domain."""

    def __init__(self, result: "CertResult"):
        super().__init__(
            f"budget exhausted after {result.boxes_processed} boxes "
            f"({result.boxes_remaining} undecided)"
        )
        self.result = result


class EnvelopeNegative(RuntimeError):
    """Certification found a rigorous counterexample where positivity was assumed."""

    def __init__(self, result: "CertResult"):
        w = result.witness
        super().__init__(
            f"envelope negative at (eta={w.eta}, x={w.x}, y={w.y}): {w.value}"
        )
        self.result = result


@dataclass(frozen=True)
class Constants:
    """Exact radical constants of the gap thresholds.

    c_tilde is the positive root of 3*t^2 + (6+2*sqrt(3))*t - (1+2*sqrt(3));
    c0 = (1 - c_tilde)/2 is the resulting eigenvalue-sum gap constant.
    """

    c_tilde: float
    c0: float
    gamma_star: float
    gamma_starstar: float


def constants() -> Constants:
    root = math.sqrt(5.0 + 4.0 * SQRT3)
    return Constants(
        c_tilde=(root - (1.0 + SQRT3)) / SQRT3,
        c0=((1.0 + 2.0 * SQRT3) - root) / (2.0 * SQRT3),
        gamma_star=1.0 + SQRT3,
        gamma_starstar=(1.0 + SQRT3) / SQRT3,
    )


class Case(enum.Enum):
    CASE1 = 1
    CASE2 = 2


def _check_point_domain(eta: float, x: float, y: float) -> None:
    s = _DOMAIN_SLACK
    inside = (
        -s <= eta <= 1.0 + s
        and x >= -s
        and y >= -s
        and x <= (1.0 - eta) / 4.0 + s
        and x + y <= eta / 2.0 + s
    )
    if not inside:
        raise DomainViolation(f"({eta}, {x}, {y}) lies outside the admissible domain")


def _check_box_domain(eta: Interval, x: Interval, y: Interval) -> None:
    s = _DOMAIN_SLACK
    overlaps = (
        eta.hi >= -s
        and eta.lo <= 1.0 + s
        and x.hi >= -s
        and y.hi >= -s
        and x.lo <= (1.0 - eta.lo) / 4.0 + s
        and x.lo + y.lo <= eta.hi / 2.0 + s
    )
    if not overlaps:
        raise DomainViolation(f"box ({eta}, {x}, {y}) misses the admissible domain")


def classify_case(eta: float, x: float, y: float) -> Case:
    """Which side of the traceless-Ricci threshold a domain point sits on."""
    _check_point_domain(eta, x, y)
    ric0_sq = eta * eta / 4.0 + 2.0 * x * x + 2.0 * y * y
    return Case.CASE1 if ric0_sq >= 1.0 / 12.0 else Case.CASE2


def _envelope_float(eta: float, x: float, y: float, gamma: float) -> float:
    s = math.sqrt(eta * eta / 4.0 + 2.0 * x * x + 2.0 * y * y)
    return (
        eta * (3.0 * eta * eta + 1.0) / 12.0
        + 2.0 * (1.0 + eta) * y * y
        - 2.0 * (1.0 - eta) * x * x
        - (gamma * eta / SQRT3) * abs(s - _K)
    )


def _envelope_interval(eta: Interval, x: Interval, y: Interval, gamma: float) -> Interval:
    base = eta * (3.0 * eta.square() + 1.0) / 12.0
    s = (eta.square() / 4.0 + 2.0 * x.square() + 2.0 * y.square()).sqrt()
    weyl = (gamma / _SQRT3_IV) * eta * abs(s - _K_IV)
    return base + 2.0 * (1.0 + eta) * y.square() - 2.0 * (1.0 - eta) * x.square() - weyl


def envelope_I(eta, x, y, gamma: float):
    """Worst-case pinching envelope at a point (floats) or over a box
    (three :class:`Interval` arguments).  Point evaluation is exact to
    roundoff; interval evaluation returns a rigorous enclosure."""
    if isinstance(eta, Interval) or isinstance(x, Interval) or isinstance(y, Interval):
        if not (isinstance(eta, Interval) and isinstance(x, Interval) and isinstance(y, Interval)):
            raise TypeError("mix of interval and scalar arguments")
        _check_box_domain(eta, x, y)
        return _envelope_interval(eta, x, y, gamma)
    _check_point_domain(eta, x, y)
    return _envelope_float(float(eta), float(x), float(y), float(gamma))


def envelope_unnormalized(eta: float, x: float, y: float, scalar: float, gamma: float) -> float:
    """The envelope before normalizing the scalar curvature to 1.

    x and y are absolute eigenvalue half-gaps; degree-2 homogeneous under
    (scalar, x, y) -> (s*scalar, s*x, s*y).
    """
    r2 = scalar * scalar
    s = math.sqrt(eta * eta * r2 / 4.0 + 2.0 * x * x + 2.0 * y * y)
    return (
        eta * (3.0 * eta * eta + 1.0) / 12.0 * r2
        + 2.0 * (1.0 + eta) * y * y
        - 2.0 * (1.0 - eta) * x * x
        - (gamma * eta / SQRT3) * scalar * abs(s - scalar / (2.0 * SQRT3))
    )


def _envelope_np(eta, x, y, gamma: float):
    """Vectorized float evaluation (numpy arrays), no domain checking."""
    s = np.sqrt(eta * eta / 4.0 + 2.0 * x * x + 2.0 * y * y)
    return (
        eta * (3.0 * eta * eta + 1.0) / 12.0
        + 2.0 * (1.0 + eta) * y * y
        - 2.0 * (1.0 - eta) * x * x
        - (gamma * eta / SQRT3) * np.abs(s - _K)
    )


# ---------------------------------------------------------------------------
# Batched interval evaluation of the envelope over many boxes at once.
#
# Endpoint arrays are padded outward by 8 ulp after every elementary
# operation, mirroring the scalar Interval class.  All products below are
# between quantities guaranteed nonnegative after clipping, so endpoint
# monotonicity applies.
# ---------------------------------------------------------------------------

_ULPS = 8.0


def _dn(a):
    return a - _ULPS * np.spacing(np.abs(a))


def _up(a):
    return a + _ULPS * np.spacing(np.abs(a))


def _eval_boxes(bounds: np.ndarray, gamma: float) -> tuple[np.ndarray, np.ndarray]:
    """Enclosures of the envelope over boxes.

    ``bounds`` has shape (n, 6): columns eta_lo, eta_hi, x_lo, x_hi, y_lo,
    y_hi, clipped to the admissible domain (so eta in [0,1], x, y >= 0).
    Requires gamma >= 0.  Returns (lo, hi) arrays.
    """
    el, eh = bounds[:, 0], bounds[:, 1]
    xl, xh = bounds[:, 2], bounds[:, 3]
    yl, yh = bounds[:, 4], bounds[:, 5]

    e2l = np.maximum(_dn(el * el), 0.0)
    e2h = _up(eh * eh)
    x2l = np.maximum(_dn(xl * xl), 0.0)
    x2h = _up(xh * xh)
    y2l = np.maximum(_dn(yl * yl), 0.0)
    y2h = _up(yh * yh)

    # base = eta*(3*eta^2+1)/12
    t1l = _dn(_dn(3.0 * e2l) + 1.0)
    t1h = _up(_up(3.0 * e2h) + 1.0)
    basel = _dn(_dn(el * t1l) / 12.0)
    baseh = _up(_up(eh * t1h) / 12.0)

    # 2*(1+eta)*y^2 and 2*(1-eta)*x^2
    t2l = _dn(2.0 * _dn(_dn(1.0 + el) * y2l))
    t2h = _up(2.0 * _up(_up(1.0 + eh) * y2h))
    oml = np.maximum(_dn(1.0 - eh), 0.0)
    omh = _up(1.0 - el)
    t3l = _dn(2.0 * np.maximum(_dn(oml * x2l), 0.0))
    t3h = _up(2.0 * _up(omh * x2h))

    # s = sqrt(eta^2/4 + 2 x^2 + 2 y^2)
    al = _dn(_dn(e2l / 4.0 + 2.0 * x2l) + 2.0 * y2l)
    ah = _up(_up(e2h / 4.0 + 2.0 * x2h) + 2.0 * y2h)
    sl = np.maximum(_dn(np.sqrt(np.maximum(al, 0.0))), 0.0)
    sh = _up(np.sqrt(np.maximum(ah, 0.0)))

    # |s - k|, k = 1/(2 sqrt 3)
    dl = _dn(sl - _K_IV.hi)
    dh = _up(sh - _K_IV.lo)
    adl = np.where(dl >= 0.0, dl, np.where(dh <= 0.0, -dh, 0.0))
    adh = np.maximum(-dl, dh)

    # (gamma/sqrt(3)) * eta * |s - k|
    c_iv = gamma / _SQRT3_IV
    col = np.maximum(_dn(c_iv.lo * el), 0.0)
    coh = _up(c_iv.hi * eh)
    t4l = np.maximum(_dn(col * adl), 0.0)
    t4h = _up(coh * adh)

    lo = _dn(_dn(basel + t2l) - t3h)
    lo = _dn(lo - t4h)
    hi = _up(_up(baseh + t2h) - t3l)
    hi = _up(hi - t4l)
    return lo, hi


# ---------------------------------------------------------------------------
# Branch and bound
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Box:
    """Sub-box of the admissible domain (scalar curvature normalized to 1)."""

    eta: Interval
    x: Interval
    y: Interval

    def clip(self, eta_lo: float = 0.0) -> "Box | None":
        """Intersect with D(eta_lo); None when the box misses the domain."""
        c = _clip(
            (self.eta.lo, self.eta.hi, self.x.lo, self.x.hi, self.y.lo, self.y.hi),
            eta_lo,
        )
        if c is None:
            return None
        return Box(eta=Interval(c[0], c[1]), x=Interval(c[2], c[3]), y=Interval(c[4], c[5]))

    def envelope(self, gamma: float) -> Interval:
        """Rigorous enclosure of the envelope over the box."""
        return envelope_I(self.eta, self.x, self.y, gamma)

    @property
    def max_width(self) -> float:
        return max(self.eta.width, self.x.width, self.y.width)


@dataclass(frozen=True)
class Witness:
    eta: float
    x: float
    y: float
    value: float


@dataclass(frozen=True)
class CertResult:
    """Outcome of a branch-and-bound run.

    * ``certified``: every box discharged; ``lower_bound`` > 0 bounds the
      envelope over the whole domain.
    * ``counterexample``: ``witness`` is a feasible point whose envelope
      value is rigorously negative.
    * ``budget_exhausted``: boxes remained undecided (below the width
      tolerance, or the box budget ran out).  ``best_lower`` is the bound
      over the discharged region; ``worst_upper`` the smallest rigorous
      upper bound seen among undecided midpoints.
    """

    status: str
    boxes_processed: int
    lower_bound: float | None = None
    witness: Witness | None = None
    best_lower: float | None = None
    worst_upper: float | None = None
    boxes_remaining: int = 0


_BoxT = tuple[float, float, float, float, float, float]


def _clip(b: _BoxT, eta_lo: float) -> _BoxT | None:
    el, eh, xl, xh, yl, yh = b
    el = max(el, eta_lo)
    eh = min(eh, 1.0)
    if el > eh:
        return None
    xl = max(xl, 0.0)
    xh = min(xh, (1.0 - el) / 4.0, eh / 2.0)
    if xl > xh:
        return None
    yl = max(yl, 0.0)
    yh = min(yh, eh / 2.0 - xl)
    if yl > yh:
        return None
    return (el, eh, xl, xh, yl, yh)


def _midpoint(b: _BoxT) -> tuple[float, float, float]:
    el, eh, xl, xh, yl, yh = b
    em = 0.5 * (el + eh)
    xm = min(0.5 * (xl + xh), (1.0 - em) / 4.0, em / 2.0)
    ym = min(0.5 * (yl + yh), max(em / 2.0 - xm, 0.0))
    return em, xm, ym


def _split(b: _BoxT, scales: tuple[float, float, float]) -> tuple[_BoxT, _BoxT]:
    """Bisect the widest normalized dimension; ties break eta, x, y."""
    el, eh, xl, xh, yl, yh = b
    widths = (
        (eh - el) / scales[0],
        (xh - xl) / scales[1],
        (yh - yl) / scales[2],
    )
    dim = max(range(3), key=lambda i: (widths[i], -i))
    if dim == 0:
        mid = 0.5 * (el + eh)
        return (el, mid, xl, xh, yl, yh), (mid, eh, xl, xh, yl, yh)
    if dim == 1:
        mid = 0.5 * (xl + xh)
        return (el, eh, xl, mid, yl, yh), (el, eh, mid, xh, yl, yh)
    mid = 0.5 * (yl + yh)
    return (el, eh, xl, xh, yl, mid), (el, eh, xl, xh, mid, yh)


def _point_enclosure(eta: float, x: float, y: float, gamma: float) -> Interval:
    return _envelope_interval(
        Interval.point(eta), Interval.point(x), Interval.point(y), gamma
    )


_BATCH = 512
_SHARPEN_CAP = 100_000
_SHARPEN_RTOL = 0.02


def certify(
    gamma: float,
    eta_lo: float,
    tol: float = 1e-6,
    max_boxes: int = 10_000_000,
    threads: int = 1,
) -> CertResult:
    """Branch-and-bound positivity certification of the envelope over
    D(eta_lo).  Deterministic: the traversal is a pure function of the
    arguments, so the report is identical for every thread count."""
    if not 0.0 < eta_lo <= 1.0:
        raise ValueError("eta_lo must lie in (0, 1]")
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    if not max_boxes > 0:
        raise ValueError("max_boxes must be positive")
    if not gamma >= 0.0:
        raise ValueError("gamma must be nonnegative")
    threads = max(1, int(threads))

    root: _BoxT = (eta_lo, 1.0, 0.0, (1.0 - eta_lo) / 4.0, 0.0, 0.5)
    scales = (
        max(1.0 - eta_lo, tol),
        max((1.0 - eta_lo) / 4.0, tol),
        0.5,
    )

    stack: list[_BoxT] = [root]
    cache: dict[_BoxT, tuple[float, float]] = {}
    undecided: list[_BoxT] = []
    discharged: list[tuple[float, int, _BoxT]] = []
    seq = 0
    processed = 0
    min_discharged = math.inf
    worst_upper = math.inf
    executor = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None

    def eval_batch(batch: list[_BoxT]) -> None:
        bounds = np.array(batch, dtype=float)
        if executor is not None and len(batch) >= 2 * threads:
            chunks = np.array_split(np.arange(len(batch)), threads)
            parts = list(
                executor.map(lambda ix: _eval_boxes(bounds[ix], gamma), chunks)
            )
            lo = np.concatenate([p[0] for p in parts])
            hi = np.concatenate([p[1] for p in parts])
        else:
            lo, hi = _eval_boxes(bounds, gamma)
        for bb, blo, bhi in zip(batch, lo, hi):
            cache[bb] = (float(blo), float(bhi))

    def enclosure(clipped: _BoxT) -> tuple[float, float]:
        if clipped not in cache:
            batch = [clipped]
            for raw in reversed(stack[-(_BATCH - 1):]):
                c = _clip(raw, eta_lo)
                if c is not None and c not in cache and c != clipped:
                    batch.append(c)
            eval_batch(batch)
        return cache.pop(clipped)

    try:
        while stack:
            if processed >= max_boxes:
                best = None if math.isinf(min_discharged) else min_discharged
                worst = None if math.isinf(worst_upper) else worst_upper
                return CertResult(
                    status="budget_exhausted",
                    boxes_processed=processed,
                    lower_bound=best,
                    best_lower=best,
                    worst_upper=worst,
                    boxes_remaining=len(stack) + len(undecided),
                )
            raw = stack.pop()
            processed += 1
            clipped = _clip(raw, eta_lo)
            if clipped is None:
                continue
            lo, _ = enclosure(clipped)
            if lo > 0.0:
                min_discharged = min(min_discharged, lo)
                discharged.append((lo, seq, clipped))
                seq += 1
                continue
            el, eh, xl, xh, yl, yh = clipped
            if max(eh - el, xh - xl, yh - yl) <= tol:
                em, xm, ym = _midpoint(clipped)
                point = _point_enclosure(em, xm, ym, gamma)
                if point.hi < 0.0:
                    return CertResult(
                        status="counterexample",
                        boxes_processed=processed,
                        witness=Witness(
                            eta=em, x=xm, y=ym, value=_envelope_float(em, xm, ym, gamma)
                        ),
                    )
                undecided.append(clipped)
                worst_upper = min(worst_upper, point.hi)
                continue
            low, high = _split(clipped, scales)
            stack.append(high)
            stack.append(low)

        if undecided:
            best = None if math.isinf(min_discharged) else min_discharged
            return CertResult(
                status="budget_exhausted",
                boxes_processed=processed,
                lower_bound=best,
                best_lower=best,
                worst_upper=worst_upper,
                boxes_remaining=len(undecided),
            )

        # Bound sharpening: the discharge rule stops splitting at the first
        # positive enclosure, which can leave the binding box coarse and the
        # reported bound far below the true minimum.  Keep bisecting the box
        # with the smallest enclosure minimum until that bound sits within
        # 2% of a midpoint upper bound (or the box falls below the width
        # tolerance); children always partition their parent, so the heap
        # keeps covering the domain and its minimum stays a rigorous bound.
        heapq.heapify(discharged)
        upper = math.inf
        budget = min(max_boxes, processed + _SHARPEN_CAP)
        while discharged and processed < budget:
            lo, _, box = discharged[0]
            el, eh, xl, xh, yl, yh = box
            em, xm, ym = _midpoint(box)
            upper = min(upper, _envelope_float(em, xm, ym, gamma))
            if upper - lo <= max(_SHARPEN_RTOL * abs(upper), 1e-12):
                break
            if max(eh - el, xh - xl, yh - yl) <= tol:
                break
            heapq.heappop(discharged)
            children = []
            ok = True
            for child in _split(box, scales):
                processed += 1
                c = _clip(child, eta_lo)
                if c is None:
                    continue
                clo, _ = enclosure(c)
                if clo <= 0.0:
                    ok = False
                    break
                children.append((clo, c))
            if not ok:
                # Pathological padding slack: restore the parent and stop;
                # the parent's bound is still valid.
                heapq.heappush(discharged, (lo, seq, box))
                seq += 1
                break
            for clo, c in children:
                heapq.heappush(discharged, (clo, seq, c))
                seq += 1
        if discharged:
            min_discharged = discharged[0][0]
    finally:
        if executor is not None:
            executor.shutdown(wait=False)

    return CertResult(
        status="certified",
        boxes_processed=processed,
        lower_bound=min_discharged,
    )


def approx_min(
    gamma: float, eta_lo: float, grid: int
) -> tuple[float, tuple[float, float, float]]:
    """Floating-point minimum of the envelope over a uniform grid on
    D(eta_lo); a cross-check of :func:`certify`, never below the certified
    bound by more than roundoff."""
    if grid < 2:
        raise ValueError("grid must be at least 2 per dimension")
    if not 0.0 < eta_lo <= 1.0:
        raise ValueError("eta_lo must lie in (0, 1]")
    best = math.inf
    arg = (eta_lo, 0.0, 0.0)
    for eta in np.linspace(eta_lo, 1.0, grid):
        xmax = min((1.0 - eta) / 4.0, eta / 2.0)
        cap = eta / 2.0
        xs = np.linspace(0.0, xmax, grid)
        ys = np.linspace(0.0, cap, grid)
        xg, yg = np.meshgrid(xs, ys, indexing="ij")
        feasible = xg + yg <= cap + 1e-15
        values = _envelope_np(eta, xg, yg, gamma)
        values = np.where(feasible, values, np.inf)
        k = int(np.argmin(values))
        v = float(values.flat[k])
        if v < best:
            best = v
            i, j = np.unravel_index(k, values.shape)
            arg = (float(eta), float(xg[i, j]), float(yg[i, j]))
    return best, arg


# ---------------------------------------------------------------------------
# Constants and auxiliary inequality checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ConstantsReport:
    constants: Constants
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def constants_eval(digits_tolerance: float = 5e-6) -> ConstantsReport:
    """Evaluate the radical constants and verify their algebraic identities."""
    c = constants()
    sum_identity = 2.0 * c.c0 + c.c_tilde - 1.0
    quad = 3.0 * c.c_tilde**2 + (6.0 + 2.0 * SQRT3) * c.c_tilde - (1.0 + 2.0 * SQRT3)
    checks = (
        Check(
            "c0 = 0.29167 (5 digits)",
            abs(c.c0 - 0.29167) <= digits_tolerance,
            {"value": c.c0, "reference": 0.29167, "tolerance": digits_tolerance},
        ),
        Check(
            "c_tilde = 0.41666 (5 digits)",
            abs(c.c_tilde - 0.41666) <= digits_tolerance,
            {"value": c.c_tilde, "reference": 0.41666, "tolerance": digits_tolerance},
        ),
        Check(
            "2*c0 + c_tilde = 1",
            abs(sum_identity) <= 1e-14,
            {"residual": sum_identity, "tolerance": 1e-14},
        ),
        Check(
            "3*c_tilde^2 + (6+2*sqrt3)*c_tilde - (1+2*sqrt3) = 0",
            abs(quad) <= 1e-13,
            {"residual": quad, "tolerance": 1e-13},
        ),
    )
    return ConstantsReport(constants=c, checks=checks)


def case2_bracket(eta: float, gamma: float) -> float:
    """The quadratic bracket 3*eta^2 + 1 + 2*gamma*(sqrt(3)*eta - 1).

    The envelope at (eta, 0, 0) in the small-norm regime equals
    (eta/12) times this bracket; its positive root at gamma = 1+sqrt(3)
    is c_tilde, and at gamma = (1+sqrt(3))/sqrt(3) it is exactly 1/3.
    """
    return 3.0 * eta * eta + 1.0 + 2.0 * gamma * (SQRT3 * eta - 1.0)


def aux_checks() -> tuple[Check, ...]:
    """Rigorous verification of the auxiliary inequalities behind the
    envelope's positivity analysis, each by interval evaluation or a
    certified one-dimensional minimization."""
    c = constants()
    checks: list[Check] = []

    # (a) 12*(sqrt(3)-1) > (1+sqrt(3))^2
    lhs = 12.0 * (_SQRT3_IV - 1.0)
    rhs = (1.0 + _SQRT3_IV).square()
    checks.append(
        Check(
            "12*(sqrt3-1) > (1+sqrt3)^2",
            lhs.lo > rhs.hi,
            {"lhs_min": lhs.lo, "rhs_max": rhs.hi},
        )
    )

    # (b) min over [1/3, 1] of ((1+eta)/eta)*sqrt(3*eta^2-2*eta+1)
    #     certified against 2*sqrt(2*sqrt(3)-2).
    threshold = 2.0 * (2.0 * _SQRT3_IV - 2.0).sqrt()
    n = 6700
    grid = np.linspace(1.0 / 3.0, 1.0, n + 1)
    certified_min = math.inf
    for a, b in zip(grid[:-1], grid[1:]):
        eta = Interval(float(a), float(b))
        f = ((1.0 + eta) / eta) * (3.0 * eta.square() - 2.0 * eta + 1.0).sqrt()
        certified_min = min(certified_min, f.lo)
    checks.append(
        Check(
            "min (1+eta)/eta*sqrt(3*eta^2-2*eta+1) >= 2*sqrt(2*sqrt3-2) on [1/3,1]",
            certified_min >= threshold.hi,
            {"certified_min": certified_min, "threshold_max": threshold.hi},
        )
    )

    # (c) (1-eta)*(1 + eta - 4*eta/(1+sqrt3)) >= 0 on [1/3, 1]:
    #     the first factor is nonnegative on the domain by construction,
    #     the second is certified strictly positive.
    eta_dom = Interval(1.0 / 3.0, 1.0)
    coeff = 1.0 - 4.0 / (1.0 + _SQRT3_IV)
    factor2 = 1.0 + eta_dom * coeff
    checks.append(
        Check(
            "(1-eta)*(1+eta-4*eta/(1+sqrt3)) >= 0 on [1/3,1]",
            factor2.lo > 0.0,
            {"second_factor_min": factor2.lo, "first_factor": "1-eta >= 0 on domain"},
        )
    )

    # (d) (eta-1/3)*((3*eta-1)^2 + 8) >= 0 on [1/3, 1]: same structure.
    quad = (3.0 * eta_dom - 1.0).square() + 8.0
    checks.append(
        Check(
            "(eta-1/3)*((3*eta-1)^2+8) >= 0 on [1/3,1]",
            quad.lo > 0.0,
            {"second_factor_min": quad.lo, "first_factor": "eta-1/3 >= 0 on domain"},
        )
    )

    # (e) bracket root identities at the two critical gammas.
    at_root = case2_bracket(c.c_tilde, c.gamma_star)
    etas = np.linspace(0.0, 1.0, 51)
    factored_max_err = 0.0
    for eta in etas:
        factored = 3.0 * (eta - 1.0 / 3.0) * (eta + (2.0 + SQRT3) / SQRT3)
        factored_max_err = max(
            factored_max_err, abs(case2_bracket(float(eta), c.gamma_starstar) - factored)
        )
    at_third = case2_bracket(1.0 / 3.0, c.gamma_starstar)
    checks.append(
        Check(
            "bracket(eta=c_tilde, gamma=1+sqrt3) = 0",
            abs(at_root) <= 1e-13,
            {"residual": at_root, "tolerance": 1e-13},
        )
    )
    checks.append(
        Check(
            "bracket(gamma=(1+sqrt3)/sqrt3) = 3*(eta-1/3)*(eta+(2+sqrt3)/sqrt3)",
            factored_max_err <= 1e-12 and abs(at_third) <= 1e-13,
            {"max_factorization_error": factored_max_err, "residual_at_third": at_third},
        )
    )
    return tuple(checks)


_THRESHOLDS = {"star": None, "star-star": 1.0 / 3.0}


def delta_of(
    gamma: float,
    eta0: float,
    r0: float,
    mode: str = "star",
    tol: float = 1e-6,
    max_boxes: int = 10_000_000,
    threads: int = 1,
) -> float:
    """Pinching-improvement rate delta = min(1, 2*m*r0), with m the
    certified envelope minimum over D((eta0 + threshold)/2).

    By degree-2 homogeneity the unnormalized envelope satisfies
    I >= m*R^2 >= m*r0*R wherever R >= r0, which is the (delta/2)*R decay
    target.  The mode threshold is c_tilde for "star" and 1/3 for
    "star-star"; eta0 must exceed it.
    """
    if mode not in _THRESHOLDS:
        raise ValueError("mode must be 'star' or 'star-star'")
    if not r0 > 0.0:
        raise ValueError("r0 must be positive")
    threshold = _THRESHOLDS[mode]
    if threshold is None:
        threshold = constants().c_tilde
    if not eta0 > threshold:
        raise ThresholdViolation(
            f"eta0 = {eta0} does not exceed the {mode} threshold {threshold}"
        )
    eta_lo = 0.5 * (eta0 + threshold)
    result = certify(gamma, eta_lo, tol=tol, max_boxes=max_boxes, threads=threads)
    if result.status == "budget_exhausted":
        raise BudgetExhaustedError(result)
    if result.status == "counterexample":
        raise EnvelopeNegative(result)
    return min(1.0, 2.0 * result.lower_bound * r0)
