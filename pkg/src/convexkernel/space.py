"""Finite-dimensional normed spaces over CReal: vectors, balls, segments."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .reals import (
    CReal,
    add,
    as_creal,
    creal_abs,
    creal_max,
    format_rational,
    from_rational,
    mul,
    parse_rational,
    scale_rational,
    sqrt,
    sub,
    _as_fraction,
    _precision_for,
)

__all__ = [
    "NormKind",
    "Vector",
    "Ball",
    "Segment",
    "Membership",
    "norm",
    "distance",
    "midpoint",
    "hull_point",
    "in_ball",
]


class NormKind(enum.Enum):
    P1 = "p1"
    P2 = "p2"
    PINF = "pinf"

    @classmethod
    def parse(cls, text: "str | NormKind") -> "NormKind":
        if isinstance(text, NormKind):
            return text
        return cls(text.lower())


class Membership(enum.Enum):
    INSIDE = "Inside"
    OUTSIDE = "Outside"
    BOUNDARY_INDETERMINATE = "Boundary-Indeterminate"


@dataclass(frozen=True)
class Vector:
    coords: tuple[CReal, ...]

    def __post_init__(self):
        if len(self.coords) < 1:
            raise ValueError("vectors need dimension >= 1")
        object.__setattr__(self, "coords", tuple(as_creal(c) for c in self.coords))

    @classmethod
    def of(cls, *values) -> "Vector":
        """Build from rationals, ints, rational strings or CReals."""
        return cls(tuple(v if isinstance(v, CReal) else from_rational(_as_fraction(v))
                         for v in values))

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def is_exact(self) -> bool:
        return all(c.exact is not None for c in self.coords)

    def exact_coords(self) -> tuple[Fraction, ...]:
        return tuple(c.exact for c in self.coords)

    def approx(self, k: int) -> tuple[Fraction, ...]:
        return tuple(c.approx(k) for c in self.coords)

    def _check(self, other: "Vector") -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "Vector") -> "Vector":
        self._check(other)
        return Vector(tuple(add(a, b) for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Vector") -> "Vector":
        self._check(other)
        return Vector(tuple(sub(a, b) for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Vector":
        return Vector(tuple(-c for c in self.coords))

    def scale(self, s) -> "Vector":
        """Multiply by a rational or a CReal scalar."""
        if isinstance(s, CReal):
            return Vector(tuple(mul(s, c) for c in self.coords))
        return Vector(tuple(scale_rational(c, s) for c in self.coords))

    def to_json(self, k: int = 64) -> dict:
        """Coordinates are exact when known, else the approximation at ``k``."""
        return {
            "dim": self.dim,
            "coords": [format_rational(c.exact if c.exact is not None else c.approx(k))
                       for c in self.coords],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Vector":
        coords = [parse_rational(c) for c in data["coords"]]
        if data.get("dim", len(coords)) != len(coords):
            raise ValueError("dim does not match number of coordinates")
        return cls.of(*coords)


def _sum(terms: Iterable[CReal]) -> CReal:
    terms = list(terms)
    exact = [t.exact for t in terms]
    if all(e is not None for e in exact):
        return from_rational(sum(exact, Fraction(0)))
    n = len(terms)
    if n == 1:
        return terms[0]
    # one extra bit per doubling of the term count
    shift = (n - 1).bit_length()
    return CReal(lambda k: sum((t.approx(k + shift) for t in terms), Fraction(0)))


def norm(x: Vector, kind: NormKind = NormKind.P2) -> CReal:
    kind = NormKind.parse(kind)
    if x.dim == 1:
        return creal_abs(x.coords[0])
    if kind is NormKind.P1:
        return _sum(creal_abs(c) for c in x.coords)
    if kind is NormKind.PINF:
        out = creal_abs(x.coords[0])
        for c in x.coords[1:]:
            out = creal_max(out, creal_abs(c))
        return out
    return sqrt(_sum(mul(c, c) for c in x.coords))


def distance(x: Vector, y: Vector, kind: NormKind = NormKind.P2) -> CReal:
    return norm(x - y, kind)


def midpoint(u: Vector, v: Vector) -> Vector:
    return (u + v).scale(Fraction(1, 2))


@dataclass(frozen=True)
class Ball:
    center: Vector
    radius: CReal
    norm: NormKind = NormKind.P2

    def __post_init__(self):
        object.__setattr__(self, "radius", creal_max(as_creal(self.radius), 0))
        object.__setattr__(self, "norm", NormKind.parse(self.norm))

    @property
    def dim(self) -> int:
        return self.center.dim

    def to_json(self, k: int = 64) -> dict:
        r = self.radius
        return {
            "center": self.center.to_json(k),
            "radius": format_rational(r.exact if r.exact is not None else r.approx(k)),
            "norm": self.norm.value,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Ball":
        return cls(Vector.from_json(data["center"]),
                   from_rational(parse_rational(data["radius"])),
                   NormKind.parse(data.get("norm", "p2")))


@dataclass(frozen=True)
class Segment:
    """Convex hull of two points, parametrised by t in [0, 1]."""

    endpoint_u: Vector
    endpoint_v: Vector

    def __post_init__(self):
        self.endpoint_u._check(self.endpoint_v)


def hull_point(seg: Segment, t) -> Vector:
    """(1 - t) u + t v"""
    t = as_creal(t)
    u, v = seg.endpoint_u, seg.endpoint_v
    if t.exact is not None:
        if not 0 <= t.exact <= 1:
            raise ValueError("t must lie in [0, 1]")
        if t.exact == 0:
            return u
        if t.exact == 1:
            return v
    return u + (v - u).scale(t if t.exact is None else t.exact)


def in_ball(p: Vector, b: Ball, tol) -> Membership:
    """Three-valued closed-ball membership at tolerance ``tol``."""
    tol = _as_fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    excess = sub(distance(p, b.center, b.norm), b.radius)
    a = excess.approx(_precision_for(tol / 4))
    if a <= -tol / 2:
        return Membership.INSIDE
    if a >= tol / 2:
        return Membership.OUTSIDE
    return Membership.BOUNDARY_INDETERMINATE
