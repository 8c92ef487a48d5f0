"""Validated interval arithmetic with outward ulp padding.

Python exposes no portable control over the FPU rounding mode, so every
elementary operation is computed in round-to-nearest and then padded
outward by eight units in the last place of each endpoint.  IEEE-754
arithmetic and sqrt are correctly rounded (error <= 0.5 ulp), so the
padding strictly dominates the rounding error and every operation returns
an enclosure of the exact image.  Padding by ulps of the endpoint itself
keeps enclosures tight at every scale, including across binade boundaries
(stepping down from a power of two covers at least eight representable
numbers).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_ULPS = 8


def _down(v: float) -> float:
    if math.isinf(v):
        return v
    return v - _ULPS * math.ulp(v)


def _up(v: float) -> float:
    if math.isinf(v):
        return v
    return v + _ULPS * math.ulp(v)


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] of reals."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.lo <= self.hi:
            raise ValueError(f"empty or invalid interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, v: float) -> "Interval":
        return cls(v, v)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, v: float) -> bool:
        return self.lo <= v <= self.hi

    def intersect(self, other: "Interval") -> "Interval | None":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        return Interval(lo, hi) if lo <= hi else None

    # -- arithmetic -------------------------------------------------------

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __add__(self, other) -> "Interval":
        o = _coerce(other)
        return Interval(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        o = _coerce(other)
        return Interval(_down(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other) -> "Interval":
        return _coerce(other).__sub__(self)

    def __mul__(self, other) -> "Interval":
        o = _coerce(other)
        products = (
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        )
        return Interval(_down(min(products)), _up(max(products)))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        o = _coerce(other)
        if o.lo <= 0.0 <= o.hi:
            raise ZeroDivisionError(f"division by interval containing zero: {o}")
        quotients = (
            self.lo / o.lo,
            self.lo / o.hi,
            self.hi / o.lo,
            self.hi / o.hi,
        )
        return Interval(_down(min(quotients)), _up(max(quotients)))

    def __rtruediv__(self, other) -> "Interval":
        return _coerce(other).__truediv__(self)

    def __abs__(self) -> "Interval":
        if self.lo >= 0.0:
            return self
        if self.hi <= 0.0:
            return Interval(-self.hi, -self.lo)
        return Interval(0.0, max(-self.lo, self.hi))

    def square(self) -> "Interval":
        """Tight enclosure of {v^2}; beats self*self on sign-crossing inputs."""
        if self.lo >= 0.0:
            lo, hi = self.lo * self.lo, self.hi * self.hi
        elif self.hi <= 0.0:
            lo, hi = self.hi * self.hi, self.lo * self.lo
        else:
            lo, hi = 0.0, max(self.lo * self.lo, self.hi * self.hi)
        return Interval(max(_down(lo), 0.0), _up(hi))

    def sqrt(self) -> "Interval":
        """Enclosure of the square root; negative slack from outward padding
        is clipped at zero, which is sound for arguments that are exact
        sums of squares."""
        if self.hi < 0.0:
            raise ValueError(f"sqrt of negative interval {self}")
        lo = max(self.lo, 0.0)
        return Interval(max(_down(math.sqrt(lo)), 0.0), _up(math.sqrt(self.hi)))

    def __repr__(self) -> str:
        return f"[{self.lo!r}, {self.hi!r}]"


def _coerce(v) -> Interval:
    if isinstance(v, Interval):
        return v
    return Interval(float(v), float(v))
