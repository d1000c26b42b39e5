"""Regularity of subdivisions, normal (affine) fans and secondary cones."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import NamedTuple, Optional

from .geometry import Configuration, format_rational, strictly_inside_convex
from .linalg import rank
from .lp import eq, ge, lp_feasible
from .subdivisions import Region, Subdivision


class WrongRegion(ValueError):
    pass


def barycentric(p, a, b, c):
    """Coordinates (alpha, beta, gamma) with p = alpha a + beta b + gamma c."""
    det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    s = ((p[0] - a[0]) * (c[1] - a[1]) - (p[1] - a[1]) * (c[0] - a[0])) / det
    t = ((b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])) / det
    return 1 - s - t, s, t


def _lift_form(config, cell, p_label) -> dict:
    """Linear form in w equal to g_cell(p) - w(p); g_cell interpolates the first three vertices."""
    v0, v1, v2 = cell.vertices[:3]
    bc = barycentric(config[p_label], config[v0], config[v1], config[v2])
    form: dict = {}
    for v, coef in zip((v0, v1, v2), bc):
        form[v] = form.get(v, 0) + coef
    form[p_label] = form.get(p_label, 0) - 1
    return {i: c for i, c in form.items() if c}


def _cone_forms(config: Configuration, D: Subdivision):
    """(equalities, strict inequalities) as linear forms over the weights."""
    equalities = []
    for cell in D.cells:
        for v in cell.vertices[3:]:
            equalities.append(_lift_form(config, cell, v))
    inequalities = []
    for wall in D.walls:
        a, b = D.cell_of_wall(wall)
        for this, other in ((a, b), (b, a)):
            for x in D.cells[other].vertices:
                if x not in wall:
                    inequalities.append(_lift_form(config, D.cells[this], x))
    for p in D.unused:
        for cell in D.cells:
            if strictly_inside_convex(cell.coords(config), config[p]):
                inequalities.append(_lift_form(config, cell, p))
                break
    return equalities, inequalities


def _check_region(config, D):
    if D.region != Region.hull(config):
        raise WrongRegion(f"subdivision region {D.region.boundary} is not the convex hull")


class Regularity(NamedTuple):
    regular: bool
    witness: Optional[list]

    def __bool__(self) -> bool:
        return self.regular


def is_regular(config: Configuration, D: Subdivision) -> Regularity:
    """Decide whether ``D`` is induced by some weight vector; return one if so."""
    _check_region(config, D)
    equalities, inequalities = _cone_forms(config, D)
    cons = [eq(f) for f in equalities] + [ge(f, 1) for f in inequalities]
    w = lp_feasible(cons, len(config))
    return Regularity(w is not None, w)


def lift_gradients(config: Configuration, D: Subdivision, w) -> list:
    """Gradient of the affine interpolation of ``w`` on each cell."""
    out = []
    for cell in D.cells:
        p0, p1, p2 = (config[v] for v in cell.vertices[:3])
        w0, w1, w2 = (Fraction(w[v]) for v in cell.vertices[:3])
        det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p1[1] - p0[1]) * (p2[0] - p0[0])
        gx = ((w1 - w0) * (p2[1] - p0[1]) - (w2 - w0) * (p1[1] - p0[1])) / det
        gy = ((p1[0] - p0[0]) * (w2 - w0) - (p2[0] - p0[0]) * (w1 - w0)) / det
        out.append((gx, gy))
    return out


def inward_normal(config: Configuration, a: int, b: int):
    """Normal of the directed edge a -> b pointing to its left."""
    pa, pb = config[a], config[b]
    return (-(pb[1] - pa[1]), pb[0] - pa[0])


@dataclass(frozen=True)
class AffineFan:
    """Vertices (one per cell), bounded edges (one per wall) and rays (one per
    region boundary edge, pointing into the region's side of that edge)."""

    vertices: tuple
    edges: tuple
    rays: tuple

    def to_json(self) -> dict:
        return {
            "vertices": [[format_rational(x), format_rational(y)] for x, y in self.vertices],
            "edges": [list(e) for e in self.edges],
            "rays": [[v, [format_rational(d[0]), format_rational(d[1])]] for v, d in self.rays],
        }


def boundary_rays(config: Configuration, D: Subdivision) -> tuple:
    rays = []
    for a, b in D.region.edges:
        owner = next(k for k, c in enumerate(D.cells) if (a, b) in c.edges)
        rays.append((owner, inward_normal(config, a, b)))
    return tuple(rays)


def normal_fan(config: Configuration, D: Subdivision) -> Optional[AffineFan]:
    """Affine fan dual to ``D`` built from a lifting witness, or None when irregular."""
    reg = is_regular(config, D)
    if not reg:
        return None
    gammas = lift_gradients(config, D, reg.witness)
    edges = tuple(D.cell_of_wall(w) for w in D.walls)
    return AffineFan(tuple(gammas), edges, boundary_rays(config, D))


@dataclass(frozen=True)
class SecondaryCone:
    """Closed cone {w : eq.w = 0, ineq.w >= 0} over weights indexed by label."""

    equalities: tuple
    inequalities: tuple
    dim: int
    nvars: int

    def contains(self, w) -> bool:
        val = lambda f: sum((c * Fraction(w[i]) for i, c in f.items()), Fraction(0))
        return all(val(f) == 0 for f in self.equalities) and all(val(f) >= 0 for f in self.inequalities)

    def to_json(self) -> dict:
        def row(f):
            return [format_rational(Fraction(f.get(i, 0))) for i in range(self.nvars)]
        return {
            "dim": self.dim,
            "equalities": [row(f) for f in self.equalities],
            "inequalities": [row(f) for f in self.inequalities],
        }


def secondary_cone(config: Configuration, D: Subdivision) -> SecondaryCone:
    _check_region(config, D)
    equalities, inequalities = _cone_forms(config, D)
    n = len(config)
    implicit = []
    base = [eq(f) for f in equalities] + [ge(f) for f in inequalities]
    for f in inequalities:
        if lp_feasible(base + [ge(f, 1)], n) is None:
            implicit.append(f)
    rows = [[Fraction(f.get(i, 0)) for i in range(n)] for f in equalities + implicit]
    dim = n - rank(rows) if rows else n
    return SecondaryCone(tuple(equalities), tuple(inequalities), dim, n)


def _primitive(d) -> tuple:
    den = lcm(Fraction(d[0]).denominator, Fraction(d[1]).denominator)
    x, y = int(d[0] * den), int(d[1] * den)
    g = gcd(x, y)
    return (x // g, y // g)


def _angle_key(d):
    # half-plane index, then a monotone pseudo-angle within the half-plane
    x, y = d
    upper = y > 0 or (y == 0 and x > 0)
    return (0 if upper else 1, Fraction(-x, abs(x) + abs(y)) if upper else Fraction(x, abs(x) + abs(y)))


@dataclass(frozen=True)
class ConicalFan:
    rays: tuple


def recession_fan(F: AffineFan) -> ConicalFan:
    """Rescale every vertex to the origin: bounded edges vanish, rays remain."""
    rays = {_primitive(d) for _, d in F.rays}
    return ConicalFan(tuple(sorted(rays, key=_angle_key)))


def region_normal_fan(config: Configuration, region: Region) -> ConicalFan:
    rays = {_primitive(inward_normal(config, a, b)) for a, b in region.edges}
    return ConicalFan(tuple(sorted(rays, key=_angle_key)))
