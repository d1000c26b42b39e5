"""Polygonal subdivisions: representation, exhaustive enumeration, and the
subdivision induced by a weight vector (upper hull of the lifted points)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .geometry import (
    Configuration,
    convex_hull,
    convex_interiors_disjoint,
    orientation,
    point_in_polygon,
    rotate_to_min,
    segment_meets_open_convex,
    segments_cross_properly,
    signed_area2,
    strictly_inside_convex,
)

DEFAULT_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    def __init__(self, limit: int):
        super().__init__(f"enumeration budget of {limit} search nodes exhausted")
        self.limit = limit


class InvalidSubdivision(ValueError):
    pass


def _edges(cycle: Sequence[int]):
    n = len(cycle)
    return [(cycle[i], cycle[(i + 1) % n]) for i in range(n)]


@dataclass(frozen=True)
class Region:
    """A simple polygon given by a counterclockwise cycle of labels."""

    boundary: tuple

    @classmethod
    def from_labels(cls, config: Configuration, labels: Iterable[int]) -> "Region":
        cyc = tuple(labels)
        if len(cyc) < 3 or len(set(cyc)) != len(cyc):
            raise InvalidSubdivision(f"region {cyc} needs at least 3 distinct labels")
        if any(i not in config.labels for i in cyc):
            raise InvalidSubdivision(f"region {cyc} uses unknown labels")
        pts = config.coords(cyc)
        if signed_area2(pts) <= 0:
            raise InvalidSubdivision(f"region {cyc} is not counterclockwise")
        edges = _edges(cyc)
        for (a, b), (c, d) in combinations(edges, 2):
            if len({a, b, c, d}) == 4 and segments_cross_properly(
                config[a], config[b], config[c], config[d]
            ):
                raise InvalidSubdivision(f"region {cyc} is not simple")
        return cls(rotate_to_min(cyc))

    @classmethod
    def hull(cls, config: Configuration) -> "Region":
        cyc, _ = convex_hull(config)
        return cls(cyc)

    @property
    def edges(self):
        return _edges(self.boundary)

    def is_convex(self, config: Configuration) -> bool:
        pts = config.coords(self.boundary)
        n = len(pts)
        return all(orientation(pts[i], pts[(i + 1) % n], pts[(i + 2) % n]) > 0 for i in range(n))

    def labels_inside(self, config: Configuration) -> tuple:
        """Labels in the closed region (boundary vertices included)."""
        pts = config.coords(self.boundary)
        return tuple(i for i in config.labels if point_in_polygon(pts, config[i]) >= 0)


@dataclass(frozen=True, order=True)
class Cell:
    """Strictly convex polygon as a counterclockwise label cycle starting at its minimum."""

    vertices: tuple

    @property
    def edges(self):
        return _edges(self.vertices)

    def coords(self, config: Configuration) -> list:
        return config.coords(self.vertices)


@dataclass(frozen=True)
class Subdivision:
    region: Region
    cells: tuple
    unused: tuple = ()
    walls: tuple = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        count: dict = {}
        for c in self.cells:
            for a, b in c.edges:
                e = (min(a, b), max(a, b))
                count[e] = count.get(e, 0) + 1
        object.__setattr__(self, "walls", tuple(sorted(e for e, k in count.items() if k == 2)))

    @property
    def key(self) -> tuple:
        return tuple(c.vertices for c in self.cells)

    @property
    def is_trivial(self) -> bool:
        return len(self.cells) == 1

    def used_labels(self) -> set:
        return {i for c in self.cells for i in c.vertices}

    def cell_of_wall(self, wall) -> tuple:
        """Indices (a, b), a < b, of the two cells sharing ``wall``."""
        i, j = wall
        found = [k for k, c in enumerate(self.cells) if i in c.vertices and j in c.vertices
                 and _has_edge(c.vertices, i, j)]
        return tuple(found)

    def to_json(self) -> dict:
        return {
            "region": list(self.region.boundary),
            "cells": [list(c.vertices) for c in self.cells],
            "unused": list(self.unused),
        }

    def __str__(self) -> str:
        return "|".join("-".join(map(str, c.vertices)) for c in self.cells)


def _has_edge(cycle, i, j) -> bool:
    n = len(cycle)
    k = cycle.index(i)
    return cycle[(k + 1) % n] == j or cycle[(k - 1) % n] == j


def _build(config: Configuration, region: Region, cells: Iterable[Cell]) -> Subdivision:
    cells = tuple(sorted(cells))
    used = {i for c in cells for i in c.vertices}
    unused = tuple(i for i in region.labels_inside(config) if i not in used)
    return Subdivision(region, cells, unused)


def make_cell(config: Configuration, labels: Sequence[int]) -> Cell:
    cyc = tuple(labels)
    pts = config.coords(cyc)
    n = len(pts)
    if n < 3 or any(orientation(pts[i], pts[(i + 1) % n], pts[(i + 2) % n]) <= 0 for i in range(n)):
        raise InvalidSubdivision(f"cell {cyc} is not a strictly convex counterclockwise polygon")
    if signed_area2(pts) <= 0:
        raise InvalidSubdivision(f"cell {cyc} winds more than once")
    return Cell(rotate_to_min(cyc))


def make_subdivision(config: Configuration, region: Region, cells) -> Subdivision:
    """Validate user-supplied cells and build the subdivision."""
    cells = [c if isinstance(c, Cell) else make_cell(config, c) for c in cells]
    rpts = config.coords(region.boundary)
    for c in cells:
        cp = c.coords(config)
        if any(point_in_polygon(rpts, p) < 0 for p in cp):
            raise InvalidSubdivision(f"cell {c.vertices} leaves the region")
        for a, b in region.edges:
            if segment_meets_open_convex(cp, config[a], config[b]):
                raise InvalidSubdivision(f"cell {c.vertices} crosses the region boundary")
    for c, d in combinations(cells, 2):
        if not convex_interiors_disjoint(c.coords(config), d.coords(config)):
            raise InvalidSubdivision(f"cells {c.vertices} and {d.vertices} overlap")
    if sum(signed_area2(c.coords(config)) for c in cells) != signed_area2(rpts):
        raise InvalidSubdivision("cells do not cover the region")
    inside = region.labels_inside(config)
    used = {i for c in cells for i in c.vertices}
    for i in inside:
        if i not in used and not any(strictly_inside_convex(c.coords(config), config[i]) for c in cells):
            raise InvalidSubdivision(f"point {i} is neither a vertex nor inside a cell")
    return _build(config, region, cells)


def trivial_subdivision(config: Configuration, region: Region) -> Subdivision:
    return make_subdivision(config, region, [region.boundary])


def codimension(D: Subdivision) -> int:
    """Expected codimension 2 * #cells - #walls - 2."""
    return 2 * len(D.cells) - len(D.walls) - 2


def sort_key(D: Subdivision) -> tuple:
    return (len(D.walls), D.key)


# -- enumeration -------------------------------------------------------------

def _cells_on_edge(config, u, v, candidates, frontier):
    pts = config.points
    out = []

    def closes(chain):
        poly = [pts[i] for i in chain]
        for fa, fb in frontier:
            if segment_meets_open_convex(poly, pts[fa], pts[fb]):
                return False
        return True

    def extend(chain):
        last, prev = chain[-1], chain[-2]
        if len(chain) >= 3 and orientation(pts[prev], pts[last], pts[u]) > 0 \
                and orientation(pts[last], pts[u], pts[v]) > 0:
            if closes(chain):
                out.append(tuple(chain))
        for w in candidates:
            if w in chain:
                continue
            if orientation(pts[prev], pts[last], pts[w]) > 0 \
                    and orientation(pts[last], pts[w], pts[u]) > 0:
                chain.append(w)
                extend(chain)
                chain.pop()

    extend([u, v])
    return out


def _search(config: Configuration, region: Region, budget: int) -> list:
    pts = config.points
    inside = region.labels_inside(config)
    results: dict = {}
    nodes = 0

    def rec(frontier: frozenset, cells: list):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(budget)
        if not frontier:
            D = _build(config, region, [Cell(rotate_to_min(c)) for c in cells])
            results.setdefault(D.key, D)
            return
        u, v = min(frontier)
        cands = [w for w in inside if w != u and w != v and orientation(pts[u], pts[v], pts[w]) > 0]
        for cyc in _cells_on_edge(config, u, v, cands, frontier):
            nf = set(frontier)
            for a, b in _edges(cyc):
                if (a, b) in nf:
                    nf.remove((a, b))
                else:
                    nf.add((b, a))
            cells.append(cyc)
            rec(frozenset(nf), cells)
            cells.pop()

    rec(frozenset(region.edges), [])
    return sorted(results.values(), key=sort_key)


@lru_cache(maxsize=4096)
def _enumerate_cached(config: Configuration, region: Region, budget: int) -> tuple:
    return tuple(_search(config, region, budget))


def enumerate_subdivisions(config: Configuration, region: Region | None = None,
                           max_codim: int | None = None, budget: int = DEFAULT_BUDGET) -> list:
    """All subdivisions of ``region`` (default: the convex hull) into convex cells.

    Sorted by wall count, then by the canonical tuple of cells.
    """
    if region is None:
        region = Region.hull(config)
    subs = _enumerate_cached(config, region, budget)
    if max_codim is None:
        return list(subs)
    return [D for D in subs if codimension(D) <= max_codim]


def refinement_splits(config: Configuration, cell: Cell, max_codim: int,
                      budget: int = DEFAULT_BUDGET) -> list:
    """Non-trivial subdivisions of one cell with codimension at most ``max_codim``."""
    region = Region(cell.vertices)
    return [D for D in enumerate_subdivisions(config, region, max_codim, budget) if not D.is_trivial]


def refine(config: Configuration, D: Subdivision, cell: Cell, split: Subdivision) -> Subdivision:
    """Replace ``cell`` of ``D`` by the cells of ``split``."""
    if cell not in D.cells or split.region.boundary != cell.vertices:
        raise InvalidSubdivision("split does not match a cell of the subdivision")
    cells = [c for c in D.cells if c != cell] + list(split.cells)
    return _build(config, D.region, cells)


def refines(config: Configuration, fine: Subdivision, coarse: Subdivision) -> bool:
    """Every cell of ``fine`` lies inside some cell of ``coarse``."""
    if fine.region != coarse.region:
        return False
    return all(any(_contains(config, d, c) for d in coarse.cells) for c in fine.cells)


def _contains(config: Configuration, outer: Cell, inner: Cell) -> bool:
    op = outer.coords(config)
    n = len(op)
    return all(
        orientation(op[i], op[(i + 1) % n], config[v]) >= 0
        for v in inner.vertices for i in range(n)
    )


# -- weights -> subdivision --------------------------------------------------

def _plane(p, q, r, wp, wq, wr):
    """Affine g(x, y) = a x + b y + c through three lifted points."""
    det = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    a = ((wq - wp) * (r[1] - p[1]) - (wr - wp) * (q[1] - p[1])) / det
    b = ((q[0] - p[0]) * (wr - wp) - (r[0] - p[0]) * (wq - wp)) / det
    c = wp - a * p[0] - b * p[1]
    return a, b, c


def subdivision_from_weights(config: Configuration, w: Sequence) -> Subdivision:
    """Domains of linearity of the smallest concave function above the lifted points."""
    w = [Fraction(x) for x in w]
    if len(w) != len(config):
        raise ValueError(f"expected {len(config)} weights, got {len(w)}")
    pts = config.points
    facets: dict = {}
    for i, j, k in combinations(config.labels, 3):
        a, b, c = _plane(pts[i], pts[j], pts[k], w[i], w[j], w[k])
        if (a, b, c) in facets:
            continue
        on = []
        for m in config.labels:
            g = a * pts[m].x + b * pts[m].y + c
            if g < w[m]:
                break
            if g == w[m]:
                on.append(m)
        else:
            facets[(a, b, c)] = on
    region = Region.hull(config)
    cells = [Cell(convex_hull(config, on)[0]) for on in facets.values()]
    return _build(config, region, cells)
