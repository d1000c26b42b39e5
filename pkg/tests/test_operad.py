import pytest

from conftest import load, points
from secondary_operad import Region, enumerate_subdivisions, validate_configuration
from secondary_operad.operad import (
    ChainElement,
    DSquaredNonzero,
    NotCodimOne,
    NotSharedEdge,
    RegionsOverlap,
    UnionNotSimple,
    chain_complex,
    chord_splits,
    composable_regions,
    compose,
    compose_subdivisions,
    differential,
    glue_many,
    homology_ranks,
    leibniz_defect,
    parity,
    permutation_sign,
    sigma,
    sign_table,
    total_homology_rank,
    verify_d_squared,
)
from secondary_operad.rigidity import PerturbationScheme, stabilize_t
from secondary_operad.subdivisions import make_subdivision


def test_permutation_sign():
    assert permutation_sign([1, 2, 3]) == 1
    assert permutation_sign([2, 1, 3]) == -1
    assert permutation_sign([3, 1, 2]) == 1
    assert permutation_sign([(0, 2), (0, 1)]) == -1


def test_chain_element_arithmetic():
    c = load("square")
    T, A, B = enumerate_subdivisions(c)
    x = ChainElement.basis(A) + ChainElement.basis(B, 2)
    assert (x + x.scaled(-1)) == {}
    assert x.scaled(0) == {}
    assert ChainElement.basis(T, 1, wall_order=[]) == {T: 1}
    assert [D for D, _ in x.sorted_terms()] == [A, B]


def test_parity():
    c = load("pentagon")
    assert [parity(D) for D in enumerate_subdivisions(c)][:2] == [1, 0]


def test_square_differential():
    c = load("square")
    scheme = stabilize_t(c, 1)
    T, A, B = enumerate_subdivisions(c)
    dT = differential(c, ChainElement.basis(T), scheme)
    assert set(dT) == {A, B}
    assert all(abs(v) == 1 for v in dT.values())
    assert differential(c, ChainElement.basis(A), scheme) == {}


def test_pentagon_differential_support():
    c = load("pentagon")
    scheme = stabilize_t(c, 1)
    subs = enumerate_subdivisions(c)
    dT = differential(c, ChainElement.basis(subs[0]), scheme)
    assert len(dT) == 5
    for D in subs[1:6]:
        # a quadrilateral cell has two diagonals
        assert len(differential(c, ChainElement.basis(D), scheme)) == 2


def test_sigma_rejects_non_codim_one():
    c = load("pentagon")
    scheme = stabilize_t(c, 1)
    tri = [D for D in enumerate_subdivisions(c) if len(D.walls) == 2][0]
    with pytest.raises(NotCodimOne):
        sigma(c, tri, scheme)


def _moved(name, f):
    return validate_configuration([f(x, y) for x, y in points(name)])


@pytest.mark.parametrize("f", [
    lambda x, y: (x + 17, y - 4),
    lambda x, y: (3 * x, 3 * y),
    lambda x, y: (-y, x),
    lambda x, y: (2 * x + y, x + y),
])
def test_sigma_invariant_under_proper_affine_maps(f):
    for name in ("hexagon", "nested"):
        c = load(name)
        c2 = _moved(name, f)
        s1, s2 = stabilize_t(c, 1), stabilize_t(c2, 1)
        s2 = PerturbationScheme(s2.seed, s2.theta, s1.k)
        for cell, split, sg in sign_table(c, None, s1):
            split2 = make_subdivision(c2, Region(cell.vertices), [x.vertices for x in split.cells])
            assert sigma(c2, split2, s2) == sg


def test_sigma_wall_order():
    c = load("hexagon")
    scheme = stabilize_t(c, 1)
    for _, split, sg in sign_table(c, None, scheme):
        if len(split.walls) >= 2:
            rev = list(reversed(split.walls))
            assert sigma(c, split, scheme, rev) == sg * permutation_sign([split.walls.index(w) for w in rev])


def _relabel(name, perm):
    pts = points(name)
    moved = [None] * len(pts)
    for i, p in enumerate(pts):
        moved[perm[i]] = p
    return validate_configuration(moved)


def _relabel_scheme(scheme, perm):
    theta = sorted((tuple(sorted((perm[i], perm[j]))), v) for (i, j), v in scheme.theta)
    return PerturbationScheme(scheme.seed, tuple(theta), scheme.k)


def _map_element(c2, element, perm):
    out = ChainElement()
    for D, v in element.items():
        region = Region.from_labels(c2, [perm[i] for i in D.region.boundary])
        D2 = make_subdivision(c2, region, [[perm[i] for i in x.vertices] for x in D.cells])
        out.add(D2, v, [tuple(sorted((perm[a], perm[b]))) for a, b in D.walls])
    return out


@pytest.mark.parametrize("name,perm", [
    ("pentagon", [2, 3, 4, 0, 1]),
    ("hexagon", [5, 3, 1, 0, 2, 4]),
    ("nested", [1, 0, 2, 5, 3, 4]),
])
def test_differential_equivariant_under_relabeling(name, perm):
    c = load(name)
    c2 = _relabel(name, perm)
    scheme = stabilize_t(c, 1)
    scheme2 = _relabel_scheme(scheme, perm)
    for D in enumerate_subdivisions(c):
        e = ChainElement.basis(D)
        lhs = differential(c2, _map_element(c2, e, perm), scheme2)
        rhs = _map_element(c2, differential(c, e, scheme), perm)
        assert lhs == rhs, str(D)


def test_compose_and_errors():
    c = load("hexagon")
    q1 = Region.from_labels(c, [0, 1, 2, 3])
    q2 = Region.from_labels(c, [0, 3, 4, 5])
    a = enumerate_subdivisions(c, q1)[1]
    b = enumerate_subdivisions(c, q2)[0]
    U = compose_subdivisions(c, a, (0, 3), b)
    assert U.region == Region.hull(c)
    assert (0, 3) in U.walls
    assert glue_many(c, a, b) == U
    with pytest.raises(NotSharedEdge):
        compose_subdivisions(c, a, (1, 2), b)
    with pytest.raises(RegionsOverlap):
        compose_subdivisions(c, a, (0, 3), enumerate_subdivisions(c, Region.from_labels(c, [0, 2, 3]))[0])
    sq = load("square")
    t1 = enumerate_subdivisions(sq, Region.from_labels(sq, [0, 1, 2]))[0]
    t2 = enumerate_subdivisions(sq, Region.from_labels(sq, [0, 2, 3]))[0]
    assert compose_subdivisions(sq, t1, (0, 2), t2) == enumerate_subdivisions(sq)[1]


def test_union_must_be_simple():
    c = validate_configuration([(0, 0), (4, 0), (2, 1), (4, 4), (0, 4), (2, 3)])
    a = enumerate_subdivisions(c, Region.from_labels(c, [0, 1, 2]))[0]
    b = enumerate_subdivisions(c, Region.from_labels(c, [1, 3, 5, 2]))[0]
    bc = enumerate_subdivisions(c, Region.from_labels(c, [0, 2, 5, 4]))[0]
    ab = compose_subdivisions(c, a, (1, 2), b)
    with pytest.raises(UnionNotSimple):
        compose_subdivisions(c, ab, (2, 5), bc)


def test_compose_sign_follows_wall_order():
    c = load("hexagon")
    q1 = Region.from_labels(c, [0, 1, 2, 3])
    q2 = Region.from_labels(c, [0, 3, 4, 5])
    a = enumerate_subdivisions(c, q1)[1]  # one wall
    b = enumerate_subdivisions(c, q2)[1]  # one wall
    ab = compose(c, ChainElement.basis(a), (0, 3), ChainElement.basis(b))
    ba = compose(c, ChainElement.basis(b), (0, 3), ChainElement.basis(a))
    (U, s1), = ab.items()
    (V, s2), = ba.items()
    assert U == V
    assert s1 * s2 == permutation_sign([a.walls[0], (0, 3), b.walls[0]]) * \
        permutation_sign([b.walls[0], (0, 3), a.walls[0]])


def test_compose_associative():
    c = load("hexagon")
    regions = [Region.from_labels(c, r) for r in ([0, 1, 2, 3], [0, 3, 4], [0, 4, 5])]
    subs = [enumerate_subdivisions(c, r) for r in regions]
    for a in subs[0]:
        for b in subs[1]:
            for d in subs[2]:
                A, B, C = (ChainElement.basis(x) for x in (a, b, d))
                left = compose(c, compose(c, A, (0, 3), B), (0, 4), C)
                right = compose(c, A, (0, 3), compose(c, B, (0, 4), C))
                assert left == right


def test_chord_splits():
    c = load("pentagon")
    chords = chord_splits(c, Region.hull(c))
    assert sorted(g for g, _, _ in chords) == [(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)]
    assert chord_splits(load("nested"), Region.hull(load("nested"))) == []
    assert len(composable_regions(load("nested"))) > 0


@pytest.mark.parametrize("name", ["square", "pentagon", "hexagon", "triangle_interior"])
def test_leibniz(name):
    c = load(name)
    scheme = stabilize_t(c, 1)
    for g, q1, q2 in composable_regions(c):
        for a in enumerate_subdivisions(c, q1):
            for b in enumerate_subdivisions(c, q2):
                assert leibniz_defect(c, ChainElement.basis(a), g, ChainElement.basis(b), scheme) == {}


def test_leibniz_on_sums():
    c = load("hexagon")
    scheme = stabilize_t(c, 1)
    q1 = Region.from_labels(c, [0, 1, 2, 3])
    q2 = Region.from_labels(c, [0, 3, 4, 5])
    A = enumerate_subdivisions(c, q1)
    B = enumerate_subdivisions(c, q2)
    a = ChainElement.basis(A[1]) + ChainElement.basis(A[2], -3)
    b = ChainElement.basis(B[0], 2) + ChainElement.basis(B[1]) + ChainElement.basis(B[2], 5)
    assert leibniz_defect(c, a, (0, 3), b, scheme) == {}


@pytest.mark.parametrize("name,total", [
    ("square", 1), ("pentagon", 1), ("hexagon", 1), ("triangle_interior", 0), ("nested", 0), ("frustum", 0),
])
def test_d_squared_and_homology(name, total):
    c = load(name)
    cx = chain_complex(c, None, stabilize_t(c, 1))
    rep = verify_d_squared(cx)
    assert rep.ok and rep.unmatched_groups == 0
    assert total_homology_rank(cx) == total
    assert sum(homology_ranks(cx)) == total


def test_flipped_sign_is_caught():
    c = load("pentagon")
    scheme = stabilize_t(c, 1)
    table = sign_table(c, None, scheme)
    for cell, split, _ in table:
        cx = chain_complex(c, None, scheme, flipped=[(cell.vertices, split.key)])
        rep = verify_d_squared(cx)
        assert not rep.ok
        assert rep.failures[0]["target_codim"] == 2
        with pytest.raises(DSquaredNonzero):
            homology_ranks(cx)


def test_complex_sizes():
    c = load("hexagon")
    cx = chain_complex(c, None, stabilize_t(c, 1))
    assert cx.sizes() == (1, 9, 21, 14)
    assert len(cx.block_dense(0, 1)) == 9
