"""Exact rational geometry: points of Q^n, betweenness and friends.

Everything here works over :class:`fractions.Fraction`; there is no
floating point anywhere. Betweenness is decided by affine
parameterisation rather than by comparing distances, since distances
between rational points are generally irrational.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

Rational = Fraction

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


class DimensionError(ValueError):
    """Points of different (or unsupported) dimension were combined."""


class DegenerateError(ValueError):
    """Input is geometrically degenerate (e.g. affinely dependent vertices)."""


def parse_rational(text: str) -> Fraction:
    """Parse ``[sign]int[/posint]``, e.g. ``-3/7`` or ``2``."""
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise ValueError(f"not a rational literal: {text!r}")
    value = Fraction(text)  # raises ZeroDivisionError on "/0"
    return value


def format_rational(q: Fraction) -> str:
    return str(q)


@dataclass(frozen=True)
class Point:
    coords: tuple

    def __init__(self, *coords):
        if len(coords) == 1 and not isinstance(coords[0], (int, Fraction, str)):
            coords = tuple(coords[0])
        if not coords:
            raise DimensionError("a point needs at least one coordinate")
        object.__setattr__(self, "coords", tuple(_as_fraction(c) for c in coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __sub__(self, other: "Point") -> tuple:
        _same_dim(self, other)
        return tuple(a - b for a, b in zip(self.coords, other.coords))

    def __repr__(self) -> str:
        return "Point(" + ", ".join(str(c) for c in self.coords) + ")"


def _as_fraction(c: Union[int, str, Fraction]) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return parse_rational(c)
    raise TypeError(f"coordinates must be exact rationals, got {type(c).__name__}")


def _same_dim(*points: Point) -> int:
    dims = {p.dim for p in points}
    if len(dims) != 1:
        raise DimensionError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


@dataclass(frozen=True)
class LineSpec:
    """A line given by two distinct anchor points."""

    a: Point
    b: Point

    def __post_init__(self):
        _same_dim(self.a, self.b)
        if self.a == self.b:
            raise DegenerateError("line anchors must be distinct")

    def same_line(self, other: "LineSpec") -> bool:
        return all(
            collinear_points(self.a, self.b, p) for p in (other.a, other.b)
        ) and all(collinear_points(other.a, other.b, p) for p in (self.a, self.b))


class _Identical:
    __slots__ = ()

    def __repr__(self) -> str:
        return "IDENTICAL"


#: Returned by :func:`intersect_lines` when both specs denote the same line.
IDENTICAL = _Identical()


def between(s: Point, t: Point, u: Point) -> bool:
    """True iff ``t`` lies on the closed segment ``[s, u]``."""
    _same_dim(s, t, u)
    if s == u:
        return t == s
    lam = None
    for si, ti, ui in zip(s.coords, t.coords, u.coords):
        d = ui - si
        if d:
            lam = (ti - si) / d
            break
    if lam < 0 or lam > 1:
        return False
    return all(ti - si == lam * (ui - si) for si, ti, ui in zip(s.coords, t.coords, u.coords))


def strictly_between(s: Point, t: Point, u: Point) -> bool:
    # literal reading: s != t and t != u (s == u is then impossible anyway)
    return between(s, t, u) and s != t and t != u


def collinear_points(x: Point, y: Point, z: Point) -> bool:
    return between(x, y, z) or between(x, z, y) or between(y, x, z)


def intersect_lines(l1: LineSpec, l2: LineSpec) -> Union[Point, None, _Identical]:
    """Intersect two planar lines exactly.

    Returns the intersection point, ``None`` for distinct parallel lines,
    or :data:`IDENTICAL` when both specs span the same line.
    """
    if _same_dim(l1.a, l1.b, l2.a, l2.b) != 2:
        raise DimensionError("intersect_lines is planar only")
    (dx1, dy1), (dx2, dy2) = l1.b - l1.a, l2.b - l2.a
    det = dx1 * dy2 - dy1 * dx2
    if det == 0:
        return IDENTICAL if collinear_points(l1.a, l1.b, l2.a) else None
    rx, ry = l2.a - l1.a
    s = (rx * dy2 - ry * dx2) / det
    return Point(l1.a[0] + s * dx1, l1.a[1] + s * dy1)


def solve_linear(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Optional[list]:
    """Solve ``A x = b`` over Q for a full-column-rank ``A``.

    Returns ``None`` when the (possibly overdetermined) system is
    inconsistent. Raises :class:`DegenerateError` if the columns of ``A``
    are linearly dependent.
    """
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    aug = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if aug[i][c] != 0), None)
        if piv is None:
            raise DegenerateError("linearly dependent columns")
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(n_rows):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [vi - f * vr for vi, vr in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(aug[i][-1] != 0 for i in range(r, n_rows)):
        return None
    return [aug[i][-1] for i in range(n_cols)]


def barycentric(vertices: Sequence[Point], z: Point) -> Optional[list]:
    """Barycentric coordinates of ``z`` w.r.t. affinely independent vertices.

    ``None`` if ``z`` is outside the affine hull.
    """
    if not vertices:
        raise DegenerateError("need at least one vertex")
    _same_dim(z, *vertices)
    v0 = vertices[0]
    if len(vertices) == 1:
        return [Fraction(1)] if z == v0 else None
    edges = [v - v0 for v in vertices[1:]]
    if len(edges) > v0.dim:
        raise DegenerateError("more than n+1 vertices in n dimensions")
    rows = [[e[i] for e in edges] for i in range(v0.dim)]
    sol = solve_linear(rows, z - v0)
    if sol is None:
        return None
    return [1 - sum(sol)] + sol


def in_open_simplex(vertices: Sequence[Point], z: Point) -> bool:
    """Strict interior test: all barycentric coordinates positive."""
    lam = barycentric(vertices, z)
    return lam is not None and all(l > 0 for l in lam)


def points_from(rows: Iterable[Iterable]) -> list:
    return [Point(*r) for r in rows]
