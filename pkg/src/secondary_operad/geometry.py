"""Exact planar predicates over rationals.

Coordinates are :class:`fractions.Fraction`; nothing in here touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence


class Point(NamedTuple):
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x, y) -> "Point":
        return cls(Fraction(x), Fraction(y))

    def __sub__(self, other):  # type: ignore[override]
        return Point(self.x - other.x, self.y - other.y)


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, an integer, or an integer-valued string."""
    if isinstance(text, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text.strip())
    raise TypeError(f"cannot read a rational from {text!r}")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def cross(u, v) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def orientation(p, q, r) -> int:
    """Sign of det(q - p, r - p): +1 for a left (counterclockwise) turn."""
    d = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (d > 0) - (d < 0)


def signed_area2(pts: Sequence) -> Fraction:
    """Twice the signed area of a polygon (positive when counterclockwise)."""
    total = Fraction(0)
    n = len(pts)
    for i in range(n):
        p, q = pts[i], pts[(i + 1) % n]
        total += p[0] * q[1] - p[1] * q[0]
    return total


class ConfigurationError(ValueError):
    pass


class DuplicatePoint(ConfigurationError):
    def __init__(self, i: int, j: int):
        super().__init__(f"points {i} and {j} coincide")
        self.indices = (i, j)


class CollinearTriple(ConfigurationError):
    def __init__(self, i: int, j: int, k: int):
        super().__init__(f"points {i}, {j}, {k} are collinear")
        self.indices = (i, j, k)


@dataclass(frozen=True)
class Configuration:
    """Labeled planar points in general position; label i is ``points[i]``."""

    points: tuple

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i: int) -> Point:
        return self.points[i]

    @property
    def labels(self) -> range:
        return range(len(self.points))

    def coords(self, labels: Iterable[int]) -> list:
        return [self.points[i] for i in labels]


def validate_configuration(points) -> Configuration:
    """Build a :class:`Configuration`, rejecting duplicates and collinear triples."""
    pts = tuple(p if isinstance(p, Point) else Point.of(*p) for p in points)
    if not pts:
        raise ConfigurationError("configuration is empty")
    for i, j in combinations(range(len(pts)), 2):
        if pts[i] == pts[j]:
            raise DuplicatePoint(i, j)
    for i, j, k in combinations(range(len(pts)), 3):
        if orientation(pts[i], pts[j], pts[k]) == 0:
            raise CollinearTriple(i, j, k)
    return Configuration(pts)


def convex_hull(config: Configuration, indices: Iterable[int] | None = None):
    """Counterclockwise hull cycle of ``indices`` and the labels strictly inside it.

    The cycle starts at its smallest label, so the result does not depend on
    the input order.
    """
    idx = sorted(set(config.labels if indices is None else indices))
    if len(idx) < 3:
        raise ValueError("need at least three points for a hull")
    pts = config.points
    # Andrew's monotone chain on (x, y)-sorted labels
    order = sorted(idx, key=lambda i: (pts[i].x, pts[i].y))
    lower: list[int] = []
    for i in order:
        while len(lower) >= 2 and orientation(pts[lower[-2]], pts[lower[-1]], pts[i]) <= 0:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in reversed(order):
        while len(upper) >= 2 and orientation(pts[upper[-2]], pts[upper[-1]], pts[i]) <= 0:
            upper.pop()
        upper.append(i)
    cycle = lower[:-1] + upper[:-1]
    cycle = rotate_to_min(cycle)
    on_hull = set(cycle)
    interior = tuple(i for i in idx if i not in on_hull)
    return tuple(cycle), interior


def rotate_to_min(cycle: Sequence[int]) -> tuple:
    k = min(range(len(cycle)), key=lambda i: cycle[i])
    return tuple(cycle[k:]) + tuple(cycle[:k])


def strictly_inside_convex(poly: Sequence, p) -> bool:
    """``p`` lies in the open interior of the counterclockwise convex polygon."""
    n = len(poly)
    return all(orientation(poly[i], poly[(i + 1) % n], p) > 0 for i in range(n))


def segment_meets_open_convex(poly: Sequence, a, b) -> bool:
    """Whether the closed segment ab meets the open interior of a convex CCW polygon."""
    lo, hi = Fraction(0), Fraction(1)
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        ex, ey = q[0] - p[0], q[1] - p[1]
        f0 = ex * (a[1] - p[1]) - ey * (a[0] - p[0])
        f1 = ex * (b[1] - p[1]) - ey * (b[0] - p[0])
        if f0 <= 0 and f1 <= 0:
            return False
        if f0 > 0 and f1 > 0:
            continue
        tc = f0 / (f0 - f1)
        if f0 > 0:
            hi = min(hi, tc)
        else:
            lo = max(lo, tc)
        if lo >= hi:
            return False
    return lo < hi


def segments_cross_properly(a, b, c, d) -> bool:
    return (
        orientation(a, b, c) * orientation(a, b, d) < 0
        and orientation(c, d, a) * orientation(c, d, b) < 0
    )


def point_in_polygon(poly: Sequence, p) -> int:
    """+1 strictly inside, 0 on the boundary, -1 outside (any simple polygon)."""
    n = len(poly)
    inside = False
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        if orientation(a, b, p) == 0 and min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) \
                and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]):
            return 0
        if (a[1] > p[1]) != (b[1] > p[1]):
            xint = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
            if p[0] < xint:
                inside = not inside
    return 1 if inside else -1


def convex_interiors_disjoint(p: Sequence, q: Sequence) -> bool:
    """Separating-axis test for two convex CCW polygons (touching allowed)."""
    for poly, other in ((p, q), (q, p)):
        n = len(poly)
        for i in range(n):
            a, b = poly[i], poly[(i + 1) % n]
            if all(orientation(a, b, x) <= 0 for x in other):
                return True
    return False
