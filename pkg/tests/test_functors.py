import pytest

import reference
from comical.opcalc import (
    FLAVOR_BOTH,
    FLAVOR_NEG,
    FLAVOR_NONE,
    FLAVOR_POS,
)
from comical.complexes import (
    ComplexError,
    boundary,
    compose_maps,
    enumerate_maps,
    identity_map,
    invertible_interval,
    isomorphic,
    maps_equal,
    marked_cube,
    open_box,
    rezk_complex,
    rezk_elementary,
    standard_cube,
    tensor,
)
from comical.functors import (
    FlavorInclusion,
    cofree,
    core,
    counit_map,
    cubify,
    effective_cap,
    enumerate_s_maps,
    flat,
    flavor_ez,
    forget_connections,
    forget_connections_indexed,
    forget_connections_map,
    forget_markings,
    free_connections,
    free_connections_map,
    iota_chain,
    materialize_forgotten,
    s_isomorphic,
    sharp,
    triangulate,
    triangulate_indexed,
    triangulate_map,
    trivialize,
    unit_map,
)

INCLUSIONS = [
    FlavorInclusion(FLAVOR_NONE, FLAVOR_NEG),
    FlavorInclusion(FLAVOR_NONE, FLAVOR_POS),
    FlavorInclusion(FLAVOR_NONE, FLAVOR_BOTH),
    FlavorInclusion(FLAVOR_NEG, FLAVOR_BOTH),
    FlavorInclusion(FLAVOR_POS, FLAVOR_BOTH),
]
INC0 = INCLUSIONS[0]


# ---------------------------------------------------------------------------
# Free and forgotten connections
# ---------------------------------------------------------------------------


def test_forget_interval_counts_and_markings():
    P, refs = forget_connections_indexed(
        standard_cube(1, FLAVOR_NEG), INC0, 3
    )
    P.validate()
    assert reference.counts_of(P) == {0: 2, 1: 1, 2: 1, 3: 1}
    assert sorted(P.cube_dim(x) for x in P.markings) == [2, 3]


def test_materialization_is_exact_at_the_cap():
    X = standard_cube(1, FLAVOR_NEG)
    for cap in (1, 2, 4):
        P, refs = materialize_forgotten(X, INC0, cap)
        assert P.dim == max(cap, 1)
        assert reference.counts_of(P) == {
            0: 2, **{k: 1 for k in range(1, cap + 1)}
        }
    assert effective_cap(X, 0) == X.dim + 2
    assert effective_cap(X, 5) == 5


def test_free_connections_relabels_the_flavor():
    F = free_connections(standard_cube(1, FLAVOR_NONE), INC0)
    assert isomorphic(F, standard_cube(1, FLAVOR_NEG))
    with pytest.raises(ComplexError):
        free_connections(standard_cube(1, FLAVOR_NEG), INC0)


def test_flavor_ez_splits_connection_words():
    from comical.opcalc import run_nf

    Y = standard_cube(1, FLAVOR_NEG)
    conn_square = Y.apply(Y.identity_ref("int"), run_nf(2, 1, 1, 0))
    acc, cur = flavor_ez(Y, conn_square, FLAVOR_NONE)
    assert acc.source_dim == 2 and cur == conn_square
    acc2, cur2 = flavor_ez(Y, conn_square, FLAVOR_NEG)
    assert acc2 == run_nf(2, 1, 1, 0) and cur2 == Y.identity_ref("int")


def test_triangle_identity_free_then_counit():
    for inc in INCLUSIONS:
        for X in [
            standard_cube(0, inc.small),
            standard_cube(1, inc.small),
            marked_cube(1, inc.small),
        ]:
            cap = max(X.dim, 1)
            eta = unit_map(X, inc, cap=cap)
            lhs = compose_maps(
                counit_map(free_connections(X, inc), inc, cap=cap),
                free_connections_map(eta, inc),
            )
            assert maps_equal(lhs, identity_map(free_connections(X, inc)))


def test_triangle_identity_forget_then_unit():
    for inc in INCLUSIONS:
        Y = standard_cube(0, inc.large)
        cap = 2
        PY, _ = forget_connections_indexed(Y, inc, cap)
        eta = unit_map(PY, inc, cap=max(cap, PY.dim))
        eps = counit_map(Y, inc, cap=cap)
        lhs = compose_maps(
            forget_connections_map(eps, inc, cap=max(cap, PY.dim)), eta
        )
        assert maps_equal(lhs, identity_map(PY))


def test_hom_bijection_free_forget():
    inc = INC0
    Y = standard_cube(1, FLAVOR_NEG)
    for A in [
        standard_cube(1, FLAVOR_NONE),
        boundary(2, FLAVOR_NONE),
        open_box(2, 1, 0, FLAVOR_NONE),
    ]:
        lhs = enumerate_maps(free_connections(A, inc), Y)
        rhs = enumerate_maps(A, forget_connections(Y, inc, max(A.dim, 1)))
        assert len(lhs) == len(rhs)


def test_hom_bijection_forget_cofree():
    inc = INC0
    X = standard_cube(1, FLAVOR_NONE)
    W = cofree(X, inc, 2)
    W.validate()
    for Y in [
        standard_cube(0, FLAVOR_NEG),
        standard_cube(1, FLAVOR_NEG),
        marked_cube(1, FLAVOR_NEG),
        boundary(2, FLAVOR_NEG),
    ]:
        lhs = enumerate_maps(forget_connections(Y, inc, max(Y.dim, 1)), X)
        rhs = enumerate_maps(Y, W)
        assert len(lhs) == len(rhs)


# ---------------------------------------------------------------------------
# Marking functors
# ---------------------------------------------------------------------------


def test_trivialize_matches_the_elementary_codomain():
    L = rezk_complex(FLAVOR_NEG)
    tau = trivialize(L, 0)
    cod = rezk_elementary(FLAVOR_NEG).codomain
    assert tau.markings == cod.markings
    assert isomorphic(tau, cod)
    with pytest.raises(ComplexError):
        trivialize(forget_markings(L, "unmarked"), 0)


def test_flat_sharp_core_round_trips():
    K = invertible_interval(FLAVOR_NEG)
    Kf = flat(K)
    assert Kf.regime == "full-marked" and Kf.markings == K.markings
    assert forget_markings(Kf, "edge-marked").markings == K.markings
    Ks = sharp(K)
    assert {x for x in Ks.markings if Ks.cube_dim(x) >= 2} == {"s1", "s2"}
    cored = core(trivialize(standard_cube(2, FLAVOR_NEG), 0))
    assert reference.counts_of(cored) == reference.counts_of(
        standard_cube(2, FLAVOR_NEG)
    )
    cored2 = core(standard_cube(2, FLAVOR_NEG))
    assert 2 not in reference.counts_of(cored2)
    with pytest.raises(ComplexError):
        forget_markings(K, "full-marked")


# ---------------------------------------------------------------------------
# Triangulation
# ---------------------------------------------------------------------------


def test_triangulation_counts_and_canonical_simplex():
    for n in range(4):
        S, lookup = triangulate_indexed(standard_cube(n, FLAVOR_NONE))
        S.validate()
        tops = S.nondeg(n) if n > 0 else S.all_nondeg()
        assert len(tops) == reference.simplex_count(n)
        iota = lookup[("int", iota_chain(n))]
        assert iota.surj == tuple(range(n + 1))
        if n >= 1:
            unmarked = [x for x in tops if x not in S.markings]
            assert unmarked == [iota.base]


def test_triangulation_of_marked_cube_marks_everything_on_top():
    for n in (1, 2):
        S, lookup = triangulate_indexed(marked_cube(n, FLAVOR_NONE))
        iota = lookup[("int", iota_chain(n))]
        assert iota.base in S.markings
        assert all(x in S.markings for x in S.nondeg(n))


def test_triangulation_respects_edge_regime():
    K = invertible_interval(FLAVOR_NEG)
    TK = triangulate(K)
    TK.validate()
    assert TK.regime == "edge-marked"


def test_triangulate_map_validates():
    tm = triangulate_map(rezk_elementary(FLAVOR_NEG))
    tm.validate()


def test_triangulation_commutes_with_free_connections():
    for n in (0, 1, 2):
        X = standard_cube(n, FLAVOR_NONE)
        assert s_isomorphic(
            triangulate(X), triangulate(free_connections(X, INC0))
        )
    Y = tensor(standard_cube(1, FLAVOR_NONE), standard_cube(1, FLAVOR_NONE))
    assert s_isomorphic(
        triangulate(Y), triangulate(free_connections(Y, INC0))
    )


def test_hom_bijection_triangulate_cubify():
    S = triangulate(standard_cube(1, FLAVOR_NONE))
    US = cubify(S, FLAVOR_NONE, 2)
    US.validate()
    X = standard_cube(1, FLAVOR_NONE)
    assert len(enumerate_s_maps(triangulate(X), S)) == len(
        enumerate_maps(X, US)
    )
    K = invertible_interval(FLAVOR_NEG)
    SK = triangulate(K)
    USK = cubify(SK, FLAVOR_NEG, 2)
    for Xc in [
        standard_cube(1, FLAVOR_NEG, regime="edge-marked"),
        K,
    ]:
        assert len(enumerate_s_maps(triangulate(Xc), SK)) == len(
            enumerate_maps(Xc, USK)
        )
