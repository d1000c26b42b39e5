"""Graphs with directions dual to subdivisions, their representation spaces,
and the generic first-order deformation of wall directions."""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .geometry import Configuration
from .linalg import rank
from .lp import eq, ge, le, lp_feasible
from .regularity import boundary_rays, is_regular
from .subdivisions import (
    DEFAULT_BUDGET,
    Region,
    Subdivision,
    codimension,
    enumerate_subdivisions,
    refinement_splits,
    refines,
)

FIRST_K = 16
K_STEP = 8
LAST_K = 64


class NonGenericPerturbation(RuntimeError):
    pass


class NotTooRigid(ValueError):
    pass


def rot90(d):
    return (-d[1], d[0])


@dataclass(frozen=True)
class GwD:
    """Dual graph of a subdivision.

    ``edges`` holds ``(a, b, wall, d)`` with cell indices a < b and the wall
    normal ``d`` pointing into cell a. ``rays`` holds ``(vertex, direction)``.
    """

    n_vertices: int
    edges: tuple
    rays: tuple


def wall_direction(config: Configuration, D: Subdivision, wall) -> tuple:
    i, j = wall
    pi, pj = config[i], config[j]
    d = rot90((pj[0] - pi[0], pj[1] - pi[1]))
    a, _ = D.cell_of_wall(wall)
    x = next(v for v in D.cells[a].vertices if v not in wall)
    px = config[x]
    if d[0] * (px[0] - pi[0]) + d[1] * (px[1] - pi[1]) < 0:
        d = (-d[0], -d[1])
    return d


def dual_gwd(config: Configuration, D: Subdivision) -> GwD:
    edges = []
    for wall in D.walls:
        a, b = D.cell_of_wall(wall)
        edges.append((a, b, wall, wall_direction(config, D, wall)))
    return GwD(len(D.cells), tuple(edges), boundary_rays(config, D))


@dataclass(frozen=True)
class PerturbationScheme:
    """Rotate the normal of wall {i, j} to d + t * theta[i, j] * rot90(d)."""

    seed: int
    theta: tuple  # ((i, j), theta) sorted by pair
    k: int

    @property
    def t(self) -> Fraction:
        return Fraction(1, 2**self.k)

    def theta_of(self, pair) -> Fraction:
        return dict(self.theta)[tuple(sorted(pair))]

    def at(self, k: int) -> "PerturbationScheme":
        return PerturbationScheme(self.seed, self.theta, k)

    def direction(self, wall, d) -> tuple:
        th = _theta_lookup(self.theta)[wall]
        r = rot90(d)
        s = self.t * th
        return (d[0] + s * r[0], d[1] + s * r[1])


@lru_cache(maxsize=64)
def _theta_lookup(theta: tuple) -> dict:
    return dict(theta)


def make_scheme(n_points: int, seed: int = 1, k: int = FIRST_K) -> PerturbationScheme:
    """Pairwise-distinct nonzero coefficients in [-1, 1], one per unordered pair."""
    rng = random.Random(seed)
    pairs = [(i, j) for i in range(n_points) for j in range(i + 1, n_points)]
    scale = 10**6
    values = rng.sample(range(1, 2 * scale + 1), len(pairs))
    theta = tuple((p, Fraction(v - scale - (v <= scale), scale)) for p, v in zip(pairs, values))
    return PerturbationScheme(seed, theta, k)


def _directions(gwd: GwD, scheme: Optional[PerturbationScheme]) -> list:
    if scheme is None:
        return [e[3] for e in gwd.edges]
    return [scheme.direction(e[2], e[3]) for e in gwd.edges]


def rep_matrix(gwd: GwD, scheme: Optional[PerturbationScheme] = None) -> list:
    """Rows cross(p_b - p_a, d) = 0, columns (x_0, y_0, x_1, y_1, ...)."""
    rows = []
    for (a, b, _, _), d in zip(gwd.edges, _directions(gwd, scheme)):
        row = [Fraction(0)] * (2 * gwd.n_vertices)
        row[2 * b] += d[1]
        row[2 * b + 1] -= d[0]
        row[2 * a] -= d[1]
        row[2 * a + 1] += d[0]
        rows.append(row)
    return rows


def rep_dim(gwd: GwD, scheme: Optional[PerturbationScheme] = None) -> tuple:
    """(rank of the representation system, dimension of Rep modulo translations)."""
    r = rank(rep_matrix(gwd, scheme))
    return r, 2 * gwd.n_vertices - r - 2


def is_too_rigid(gwd: GwD, scheme: Optional[PerturbationScheme] = None) -> bool:
    return rep_dim(gwd, scheme)[0] < len(gwd.edges)


@dataclass(frozen=True)
class PositiveRep:
    points: tuple
    lambdas: tuple


def _tree_positions(gwd: GwD, dirs) -> tuple:
    """Express every vertex position as a combination of edge scalars along a
    spanning tree rooted at vertex 0; also return the non-tree edge indices."""
    adj: dict = {i: [] for i in range(gwd.n_vertices)}
    for k, (a, b, _, _) in enumerate(gwd.edges):
        adj[a].append((b, k, 1))
        adj[b].append((a, k, -1))
    pos = {0: {}}
    used = set()
    queue = [0]
    while queue:
        u = queue.pop(0)
        for w, k, sgn in adj[u]:
            if w in pos:
                continue
            # p_b - p_a = lambda_k d_k, walking u -> w
            form = {j: (cx, cy) for j, (cx, cy) in pos[u].items()}
            dx, dy = dirs[k]
            cx, cy = form.get(k, (0, 0))
            form[k] = (cx + sgn * dx, cy + sgn * dy)
            pos[w] = form
            used.add(k)
            queue.append(w)
    return pos, [k for k in range(len(gwd.edges)) if k not in used]


def _prep_constraints(gwd: GwD, dirs) -> tuple:
    """Equalities on the edge scalars closing every cycle of the dual graph."""
    pos, chords = _tree_positions(gwd, dirs)
    cons = []
    for k in chords:
        a, b, _, _ = gwd.edges[k]
        for c in range(2):
            form = {j: v[c] for j, v in pos[b].items()}
            for j, v in pos[a].items():
                form[j] = form.get(j, 0) - v[c]
            form[k] = form.get(k, 0) - dirs[k][c]
            cons.append(eq(form))
    return cons, pos


def _positions(pos, lambdas) -> tuple:
    out = []
    for i in range(len(pos)):
        x = sum((v[0] * lambdas[j] for j, v in pos[i].items()), Fraction(0))
        y = sum((v[1] * lambdas[j] for j, v in pos[i].items()), Fraction(0))
        out.append((x, y))
    return tuple(out)


def prep_feasible(gwd: GwD, scheme: Optional[PerturbationScheme] = None) -> Optional[PositiveRep]:
    """A representation with p_b - p_a = lambda * d and every lambda >= 1, if any.

    Vertex 0 is placed at the origin.
    """
    dirs = _directions(gwd, scheme)
    cons, pos = _prep_constraints(gwd, dirs)
    e = len(gwd.edges)
    cons += [ge({k: 1}, 1) for k in range(e)]
    lam = lp_feasible(cons, e, nonneg=range(e))
    if lam is None:
        return None
    return PositiveRep(_positions(pos, lam), tuple(lam))


@lru_cache(maxsize=200_000)
def _pr_cached(config: Configuration, D: Subdivision, scheme: Optional[PerturbationScheme]) -> bool:
    return prep_feasible(dual_gwd(config, D), scheme) is not None


def is_perturbedly_regular(config: Configuration, D: Subdivision, scheme: PerturbationScheme) -> bool:
    return _pr_cached(config, D, scheme)


class Status(str, Enum):
    REGULAR = "Regular"
    IRREGULAR_PR = "IrregularPerturbedlyRegular"
    IRREGULAR_NOT_PR = "IrregularNotPerturbedlyRegular"


@dataclass(frozen=True)
class Classification:
    status: Status
    codim: int
    rank: int
    rep_dim_mod_translations: int
    too_rigid: bool
    perturbed_rank: int


def _regular(config, D) -> bool:
    if D.region == Region.hull(config):
        return bool(is_regular(config, D))
    return prep_feasible(dual_gwd(config, D)) is not None


def classify(config: Configuration, D: Subdivision, scheme: PerturbationScheme) -> Classification:
    gwd = dual_gwd(config, D)
    r, dim = rep_dim(gwd)
    pr, _ = rep_dim(gwd, scheme)
    if _regular(config, D):
        status = Status.REGULAR
    elif is_perturbedly_regular(config, D, scheme):
        status = Status.IRREGULAR_PR
    else:
        status = Status.IRREGULAR_NOT_PR
    return Classification(status, codimension(D), r, dim, r < len(gwd.edges), pr)


def classification_universe(config: Configuration, region: Region | None = None,
                            budget: int = DEFAULT_BUDGET) -> list:
    """Subdivisions of the region plus every codim <= 1 split of every cell they use."""
    subs = enumerate_subdivisions(config, region, budget=budget)
    out = {D.key: D for D in subs}
    cells = sorted({c for D in subs for c in D.cells})
    for c in cells:
        for s in refinement_splits(config, c, 1, budget):
            out.setdefault((c.vertices, s.key), s)
    return list(out.values())


def stabilize_t(config: Configuration, seed: int = 1, region: Region | None = None,
                budget: int = DEFAULT_BUDGET) -> PerturbationScheme:
    """Smallest t = 2^-k (k = 16, 24, ...) whose perturbed classification agrees
    with the next two samples, checked to leave no too-rigid dual graph."""
    universe = classification_universe(config, region, budget)
    base = make_scheme(len(config), seed)
    samples: dict = {}

    def sample(k):
        if k not in samples:
            sc = base.at(k)
            samples[k] = tuple(is_perturbedly_regular(config, D, sc) for D in universe)
        return samples[k]

    k = FIRST_K
    while k <= LAST_K:
        if sample(k) == sample(k + K_STEP) == sample(k + 2 * K_STEP):
            break
        k += K_STEP
    else:
        raise NonGenericPerturbation(f"classification did not stabilize by k={LAST_K}; try another seed")
    scheme = base.at(k)
    for D in universe:
        if is_too_rigid(dual_gwd(config, D), scheme):
            raise NonGenericPerturbation(
                f"subdivision {D} stays too rigid at t=2^-{k}; try another seed")
    return scheme


def _limit_feasible(config, Dp: Subdivision, D: Subdivision, scheme: PerturbationScheme, k: int) -> bool:
    """Perturbed positive representation of Dp at t = 2^-k whose walls not in D
    are shorter than 2^-(k/2) times the total length of the walls of D."""
    gwd = dual_gwd(config, Dp)
    cons, _ = _prep_constraints(gwd, _directions(gwd, scheme.at(k)))
    old = [i for i, e in enumerate(gwd.edges) if e[2] in D.walls]
    new = [i for i, e in enumerate(gwd.edges) if e[2] not in D.walls]
    eps = Fraction(1, 2 ** (k // 2))
    cons += [ge({j: 1}, 1) for j in old]
    for j in new:
        form = {i: -eps for i in old}
        form[j] = 1
        cons.append(le(form, 0))
    e = len(gwd.edges)
    return lp_feasible(cons, e, nonneg=range(e)) is not None


def perturbation_set(config: Configuration, D: Subdivision, scheme: PerturbationScheme,
                     budget: int = DEFAULT_BUDGET) -> list:
    """Perturbedly regular codim-1 refinements of a too-rigid ``D`` whose perturbed
    realisations collapse onto a representation of D's dual as t -> 0."""
    if not is_too_rigid(dual_gwd(config, D)):
        raise NotTooRigid(f"subdivision {D} is not too rigid")
    out = []
    for Dp in enumerate_subdivisions(config, D.region, max_codim=1, budget=budget):
        if codimension(Dp) != 1 or not refines(config, Dp, D):
            continue
        if not is_perturbedly_regular(config, Dp, scheme):
            continue
        ks = (scheme.k, scheme.k + K_STEP, scheme.k + 2 * K_STEP)
        if all(_limit_feasible(config, Dp, D, scheme, k) for k in ks):
            out.append(Dp)
    return out


def perturbation_sensitive(config: Configuration, D: Subdivision) -> bool:
    """Whether small perturbations can change D's status: its dual is too rigid,
    or it has a nonzero weakly positive representation but no strictly positive one."""
    gwd = dual_gwd(config, D)
    e = len(gwd.edges)
    if e == 0:
        return False
    if is_too_rigid(gwd):
        return True
    if prep_feasible(gwd) is not None:
        return False
    cons, _ = _prep_constraints(gwd, _directions(gwd, None))
    cons.append(ge({k: 1 for k in range(e)}, 1))
    return lp_feasible(cons, e, nonneg=range(e)) is not None
