"""Signed subdivisions, the differential, edge gluing, and the chain complex.

A basis element is a subdivision with an ordering of its walls; reordering
multiplies by the sign of the permutation. Chain elements are stored against
the sorted wall order.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional

from .geometry import Configuration, convex_interiors_disjoint, signed_area2
from .linalg import det, rank, solve
from .rigidity import (
    PerturbationScheme,
    dual_gwd,
    is_perturbedly_regular,
    prep_feasible,
    rep_matrix,
)
from .subdivisions import (
    DEFAULT_BUDGET,
    Cell,
    Region,
    Subdivision,
    _build,
    codimension,
    enumerate_subdivisions,
    refine,
    refinement_splits,
    sort_key,
)


class NotCodimOne(ValueError):
    pass


class NotPerturbedlyRegular(ValueError):
    pass


class RegionsOverlap(ValueError):
    pass


class NotSharedEdge(ValueError):
    pass


class UnionNotSimple(ValueError):
    pass


class DSquaredNonzero(RuntimeError):
    pass


def permutation_sign(seq) -> int:
    """Sign of the permutation sorting ``seq`` (distinct items)."""
    seq = list(seq)
    sign = 1
    seen = [False] * len(seq)
    order = sorted(range(len(seq)), key=lambda i: seq[i])
    for i in range(len(seq)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def parity(D: Subdivision) -> int:
    return (len(D.walls) + 1) % 2


class ChainElement(dict):
    """Sparse integer combination of subdivisions (sorted wall order)."""

    def add(self, D: Subdivision, coeff: int, wall_order=None) -> None:
        if wall_order is not None:
            coeff *= permutation_sign(wall_order)
        c = self.get(D, 0) + coeff
        if c:
            self[D] = c
        else:
            self.pop(D, None)

    @classmethod
    def basis(cls, D: Subdivision, coeff: int = 1, wall_order=None) -> "ChainElement":
        out = cls()
        out.add(D, coeff, wall_order)
        return out

    def __add__(self, other):
        out = ChainElement(self)
        for D, c in other.items():
            out.add(D, c)
        return out

    def scaled(self, k: int) -> "ChainElement":
        return ChainElement({D: k * c for D, c in self.items()} if k else {})

    def sorted_terms(self) -> list:
        return sorted(self.items(), key=lambda kv: sort_key(kv[0]))


# -- sign of a codim-1 split -------------------------------------------------

def orientation_matrix(M, ray, right_inverse=None) -> list:
    """Columns [t_x, t_y, ray, u_1, ..., u_e] with M u_j = e_j."""
    e = len(M)
    n = len(M[0])
    tx = [Fraction(1 - i % 2) for i in range(n)]
    ty = [Fraction(i % 2) for i in range(n)]
    if right_inverse is None:
        right_inverse = []
        for j in range(e):
            u = solve(M, [Fraction(int(i == j)) for i in range(e)], n)
            if u is None:
                raise NotPerturbedlyRegular("representation system is rank deficient")
            right_inverse.append(u)
    cols = [tx, ty, list(ray)] + list(right_inverse)
    return [list(r) for r in zip(*cols)]


def _check_split(config, split, scheme):
    if codimension(split) != 1:
        raise NotCodimOne(f"split {split} has codimension {codimension(split)}")
    if not is_perturbedly_regular(config, split, scheme):
        raise NotPerturbedlyRegular(f"split {split} is not perturbedly regular")


def sigma(config: Configuration, split: Subdivision, scheme: PerturbationScheme,
          wall_order=None) -> int:
    """Canonical sign of a perturbedly regular codim-1 subdivision of a cell.

    ``wall_order`` permutes the rows; default is the sorted wall order.
    """
    base = _sigma_cached(config, split, scheme)
    if wall_order is None:
        return base
    return base * permutation_sign([split.walls.index(tuple(w)) for w in wall_order])


@lru_cache(maxsize=100_000)
def _sigma_cached(config, split, scheme) -> int:
    _check_split(config, split, scheme)
    gwd = dual_gwd(config, split)
    M = rep_matrix(gwd, scheme)
    rep = prep_feasible(gwd, scheme)
    ray = [c for p in rep.points for c in p]
    d = det(orientation_matrix(M, ray))
    if d == 0:
        raise NotPerturbedlyRegular(f"degenerate orientation for {split}")
    return 1 if d > 0 else -1


# -- differential ------------------------------------------------------------

@lru_cache(maxsize=100_000)
def pr_splits(config: Configuration, cell: Cell, scheme: PerturbationScheme,
              budget: int = DEFAULT_BUDGET) -> tuple:
    """Perturbedly regular codim-1 splits of a cell, in canonical order."""
    return tuple(s for s in refinement_splits(config, cell, 1, budget)
                 if codimension(s) == 1 and is_perturbedly_regular(config, s, scheme))


def differential(config: Configuration, element: Mapping, scheme: PerturbationScheme,
                 flipped: Iterable = (), budget: int = DEFAULT_BUDGET) -> ChainElement:
    """Refine one cell by a signed codim-1 split, summed over cells and splits.

    ``flipped`` lists (cell vertices, split key) pairs whose sign is inverted;
    it exists only to check that verification catches a corrupted sign.
    """
    flipped = set(flipped)
    out = ChainElement()
    for D, coeff in element.items():
        e = len(D.walls)
        pre = -coeff if e % 2 else coeff
        for cell in D.cells:
            for s in pr_splits(config, cell, scheme, budget):
                sg = sigma(config, s, scheme)
                if (cell.vertices, s.key) in flipped:
                    sg = -sg
                Dn = refine(config, D, cell, s)
                order = list(D.walls) + list(s.walls)
                out.add(Dn, pre * sg, order)
    return out


# -- composition -------------------------------------------------------------

def _glue_regions(config, q1: Region, g, q2: Region) -> Region:
    u, v = g
    e1, e2 = q1.edges, q2.edges
    if (u, v) not in e1:
        u, v = v, u
    if (u, v) not in e1 or (v, u) not in e2:
        raise NotSharedEdge(f"edge {g} is not a boundary edge of both regions")
    b1, b2 = q1.boundary, q2.boundary
    i = b1.index(v)
    path1 = b1[i:] + b1[:i]  # v ... u
    j = b2.index(u)
    path2 = b2[j:] + b2[:j]  # u ... v
    labels = list(path1) + list(path2[1:-1])
    if len(set(labels)) != len(labels):
        raise UnionNotSimple(f"regions {b1} and {b2} touch away from {g}")
    try:
        return Region.from_labels(config, labels)
    except ValueError as exc:
        raise UnionNotSimple(str(exc)) from exc


def compose_subdivisions(config: Configuration, a: Subdivision, g, b: Subdivision) -> Subdivision:
    """Union of two subdivisions glued along the boundary edge ``g`` (unsigned)."""
    for c in a.cells:
        for d in b.cells:
            if not convex_interiors_disjoint(c.coords(config), d.coords(config)):
                raise RegionsOverlap(f"cells {c.vertices} and {d.vertices} overlap")
    region = _glue_regions(config, a.region, g, b.region)
    return _build(config, region, list(a.cells) + list(b.cells))


def compose(config: Configuration, a: Mapping, g, b: Mapping) -> ChainElement:
    """Bilinear gluing along one edge with wall order (walls of a, g, walls of b)."""
    g = (min(g), max(g))
    out = ChainElement()
    for Da, ca in a.items():
        for Db, cb in b.items():
            U = compose_subdivisions(config, Da, g, Db)
            order = list(Da.walls) + [g] + list(Db.walls)
            out.add(U, ca * cb, order)
    return out


def glue_many(config: Configuration, a: Subdivision, b: Subdivision) -> Subdivision:
    """Glue along a chain of shared boundary edges; no sign is attached."""
    shared = {(min(e), max(e)) for e in a.region.edges} & {(min(e), max(e)) for e in b.region.edges}
    if not shared:
        raise NotSharedEdge("regions share no boundary edge")
    for c in a.cells:
        for d in b.cells:
            if not convex_interiors_disjoint(c.coords(config), d.coords(config)):
                raise RegionsOverlap(f"cells {c.vertices} and {d.vertices} overlap")
    # boundary of the union: directed edges of either region whose reverse is absent
    edges = [e for e in a.region.edges + b.region.edges if (min(e), max(e)) not in shared]
    nxt = {}
    for u, v in edges:
        if u in nxt:
            raise UnionNotSimple("union boundary revisits a vertex")
        nxt[u] = v
    start = min(nxt)
    cyc = [start]
    while nxt[cyc[-1]] != start:
        cyc.append(nxt[cyc[-1]])
        if len(cyc) > len(nxt):
            raise UnionNotSimple("union boundary is not a single cycle")
    if len(cyc) != len(nxt):
        raise UnionNotSimple("union boundary is not a single cycle")
    try:
        region = Region.from_labels(config, cyc)
    except ValueError as exc:
        raise UnionNotSimple(str(exc)) from exc
    return _build(config, region, list(a.cells) + list(b.cells))


def leibniz_defect(config: Configuration, a: Mapping, g, b: Mapping,
                   scheme: PerturbationScheme, budget: int = DEFAULT_BUDGET) -> ChainElement:
    """d(a o b) - (da o b + (-1)^parity(a) a o db) for homogeneous ``a``."""
    pars = {parity(D) for D in a}
    if len(pars) > 1:
        raise ValueError("left factor must have a single parity")
    sign = -1 if pars and pars.pop() else 1
    lhs = differential(config, compose(config, a, g, b), scheme, budget=budget)
    rhs = compose(config, differential(config, a, scheme, budget=budget), g, b) + \
        compose(config, a, g, differential(config, b, scheme, budget=budget)).scaled(sign)
    return lhs + rhs.scaled(-1)


def chord_splits(config: Configuration, region: Region) -> list:
    """(chord, Q1, Q2) for every diagonal of the region cutting it into two regions."""
    b = region.boundary
    m = len(b)
    out = []
    for i in range(m):
        for j in range(i + 2, m):
            if i == 0 and j == m - 1:
                continue
            try:
                q1 = Region.from_labels(config, b[i:j + 1])
                q2 = Region.from_labels(config, b[j:] + b[:i + 1])
                _glue_regions(config, q1, (b[i], b[j]), q2)
            except ValueError:
                continue
            pts1 = config.coords(q1.boundary)
            pts2 = config.coords(q2.boundary)
            if signed_area2(pts1) + signed_area2(pts2) != signed_area2(config.coords(b)):
                continue
            out.append(((min(b[i], b[j]), max(b[i], b[j])), q1, q2))
    return out


def composable_regions(config: Configuration, region: Region | None = None,
                       budget: int = DEFAULT_BUDGET) -> list:
    """Distinct (edge, Q1, Q2) gluing data: chords of the region plus every
    pair of adjacent cells of its subdivisions."""
    if region is None:
        region = Region.hull(config)
    seen = {}
    for g, q1, q2 in chord_splits(config, region):
        seen[(g, q1, q2)] = None
    for D in enumerate_subdivisions(config, region, budget=budget):
        for wall in D.walls:
            a, b = D.cell_of_wall(wall)
            seen[(wall, Region(D.cells[a].vertices), Region(D.cells[b].vertices))] = None
    return sorted(seen, key=lambda t: (t[0], t[1].boundary, t[2].boundary))


# -- chain complex -----------------------------------------------------------

@dataclass
class ChainComplex:
    """Bases graded by wall count and sparse blocks {(src, dst): {(row, col): value}}."""

    region: Region
    bases: dict
    blocks: dict
    scheme: Optional[PerturbationScheme] = None
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        self.index = {D: (k, i) for k, basis in self.bases.items() for i, D in enumerate(basis)}

    @property
    def degrees(self) -> list:
        return sorted(self.bases)

    def sizes(self) -> tuple:
        top = max(self.bases) if self.bases else -1
        return tuple(len(self.bases.get(k, [])) for k in range(top + 1))

    def block_dense(self, src: int, dst: int) -> list:
        rows, cols = len(self.bases.get(dst, [])), len(self.bases.get(src, []))
        M = [[0] * cols for _ in range(rows)]
        for (r, c), v in self.blocks.get((src, dst), {}).items():
            M[r][c] = v
        return M

    def image(self, D: Subdivision) -> ChainElement:
        k, i = self.index[D]
        out = ChainElement()
        for (src, dst), entries in self.blocks.items():
            if src != k:
                continue
            for (r, c), v in entries.items():
                if c == i:
                    out.add(self.bases[dst][r], v)
        return out


def chain_complex(config: Configuration, region: Region | None, scheme: PerturbationScheme,
                  flipped: Iterable = (), budget: int = DEFAULT_BUDGET) -> ChainComplex:
    if region is None:
        region = Region.hull(config)
    subs = enumerate_subdivisions(config, region, budget=budget)
    bases: dict = defaultdict(list)
    for D in subs:
        bases[len(D.walls)].append(D)
    bases = dict(bases)
    index = {D: (k, i) for k, basis in bases.items() for i, D in enumerate(basis)}
    blocks: dict = defaultdict(dict)
    flipped = tuple(flipped)
    for D in subs:
        k, i = index[D]
        for T, v in differential(config, ChainElement.basis(D), scheme, flipped, budget).items():
            kt, j = index[T]
            blocks[(k, kt)][(j, i)] = v
    return ChainComplex(region, bases, dict(blocks), scheme)


def sign_table(config: Configuration, region: Region | None, scheme: PerturbationScheme,
               budget: int = DEFAULT_BUDGET) -> list:
    """All (cell, split, sigma) used by the differential on the region, in canonical order."""
    if region is None:
        region = Region.hull(config)
    cells = sorted({c for D in enumerate_subdivisions(config, region, budget=budget) for c in D.cells})
    return [(c, s, sigma(config, s, scheme)) for c in cells for s in pr_splits(config, c, scheme, budget)]


@dataclass
class DSquaredReport:
    ok: bool
    failures: list
    checked_pairs: int
    unmatched_groups: int

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checked_pairs": self.checked_pairs,
            "unmatched_groups": self.unmatched_groups,
            "failures": self.failures,
        }


def verify_d_squared(cx: ChainComplex) -> DSquaredReport:
    """Check that every composite of two differential blocks vanishes.

    Contributions to each (source, target) entry are grouped by the
    intermediate subdivision; a failure names the target and lists the paths.
    """
    out_edges: dict = defaultdict(list)  # source -> [(mid, value)]
    for (src, dst), entries in cx.blocks.items():
        for (r, c), v in entries.items():
            out_edges[cx.bases[src][c]].append((cx.bases[dst][r], v))
    failures = []
    checked = 0
    unmatched = 0
    for S in sorted(out_edges, key=sort_key):
        paths: dict = defaultdict(list)
        for mid, v1 in out_edges[S]:
            for T, v2 in out_edges.get(mid, []):
                paths[T].append((mid, v1, v2))
        for T in sorted(paths, key=sort_key):
            checked += 1
            contribs = [v1 * v2 for _, v1, v2 in paths[T]]
            pos = sorted(c for c in contribs if c > 0)
            neg = sorted(-c for c in contribs if c < 0)
            if pos != neg:
                unmatched += 1
            if sum(contribs) != 0:
                failures.append({
                    "source": str(S),
                    "target": str(T),
                    "target_codim": codimension(T),
                    "sum": sum(contribs),
                    "paths": [{"via": str(m), "first": v1, "second": v2} for m, v1, v2 in paths[T]],
                })
    return DSquaredReport(not failures, failures, checked, unmatched)


def homology_ranks(cx: ChainComplex) -> list:
    """Rational homology rank by codimension, dim ker(out) - rank(in).

    Each term of the differential raises the codimension by exactly one, so
    this grading is homogeneous even when a split adds several walls.
    """
    if not verify_d_squared(cx).ok:
        raise DSquaredNonzero("differential does not square to zero")
    by_codim: dict = defaultdict(list)
    for k in sorted(cx.bases):
        for D in cx.bases[k]:
            by_codim[codimension(D)].append(D)
    images = {D: cx.image(D) for D in cx.index}
    top = max(by_codim)

    def matrix(src, dst):
        rows = {D: i for i, D in enumerate(by_codim.get(dst, []))}
        M = [[0] * len(by_codim.get(src, [])) for _ in rows]
        for j, D in enumerate(by_codim.get(src, [])):
            for T, v in images[D].items():
                M[rows[T]][j] = v
        return M

    ranks = []
    for k in range(top + 1):
        n = len(by_codim.get(k, []))
        out = matrix(k, k + 1)
        inc = matrix(k - 1, k)
        r_out = rank(out) if out and n else 0
        r_in = rank(inc) if inc and inc[0] else 0
        ranks.append(n - r_out - r_in)
    return ranks


def total_homology_rank(cx: ChainComplex) -> int:
    """N - 2 rank(total differential)."""
    order = [D for k in sorted(cx.bases) for D in cx.bases[k]]
    pos = {D: i for i, D in enumerate(order)}
    N = len(order)
    M = [[0] * N for _ in range(N)]
    for (src, dst), entries in cx.blocks.items():
        for (r, c), v in entries.items():
            M[pos[cx.bases[dst][r]]][pos[cx.bases[src][c]]] = v
    return N - 2 * (rank(M) if N else 0)
