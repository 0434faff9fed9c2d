import pytest

import reference
from corpus import random_complex
from comical.opcalc import (
    FLAVOR_BOTH,
    FLAVOR_NEG,
    FLAVOR_NONE,
    FLAVOR_POS,
    NormalForm,
    all_morphisms,
    compose,
    format_nf,
    identity_nf,
    mono_from_fixed,
    parse_nf,
)
from comical.complexes import (
    ComplexError,
    CubeRef,
    MCMap,
    boundary,
    boundary_inclusion,
    comical_cube,
    comical_marking_extension,
    comical_open_box_inclusion,
    compose_maps,
    empty_complex,
    enumerate_maps,
    find_iso,
    generated_subcomplex,
    identity_map,
    inclusion_map,
    inner_open_box_inclusion,
    invertible_interval,
    isomorphic,
    make_mcset,
    maps_equal,
    marked_cube,
    marked_open_box_inclusion,
    marker,
    open_box,
    pushout,
    pushout_product,
    rezk_complex,
    rezk_elementary,
    saturation_map,
    skeleton,
    standard_cube,
    standard_monos,
    subcomplex,
    tensor,
    tensor_indexed,
    tensor_map,
    three_out_of_four,
)

FLAVORS = [FLAVOR_NONE, FLAVOR_NEG, FLAVOR_POS, FLAVOR_BOTH]


def catalog_pattern(X, x):
    """Fixed-coordinate pattern of a catalog cube id, via its printed mono."""
    if x == "int":
        mono = identity_nf(X.dim)
    else:
        mono = parse_nf(x, X.cube_dim(x))
    return reference.pattern_of(
        reference.triples_of(mono.to_word()), mono.source_dim, X.dim
    )


# ---------------------------------------------------------------------------
# Cubes, references, presheaf action
# ---------------------------------------------------------------------------


def test_standard_cube_counts():
    for n in range(5):
        X = standard_cube(n, FLAVOR_BOTH)
        X.validate()
        assert reference.counts_of(X) == {
            k: reference.cube_count(n, k) for k in range(n + 1)
        }
        assert len(standard_monos(n)) == 3**n


def test_faces_agree_with_mono_evaluation():
    X = standard_cube(2, FLAVOR_NEG)
    for i in (1, 2):
        for eps in (0, 1):
            assert X.face("int", i, eps) == X.evaluate_mono(
                "int", mono_from_fixed(2, [(i, eps)])
            )


def test_apply_respects_composition():
    X = standard_cube(2, FLAVOR_BOTH)
    refs = [X.identity_ref(x) for x in X.all_nondeg()]
    for r in refs:
        for a in range(3):
            for phi in all_morphisms(a, r.dim, FLAVOR_BOTH):
                mid = X.apply(r, phi)
                for b in range(3):
                    for psi in all_morphisms(b, a, FLAVOR_BOTH):
                        assert X.apply(mid, psi) == X.apply(
                            r, compose(phi, psi)
                        )


def test_elements_are_the_yoneda_maps():
    for fl in [FLAVOR_NONE, FLAVOR_NEG]:
        for X in [
            standard_cube(2, fl),
            marked_cube(1, fl),
            tensor(standard_cube(1, fl), marked_cube(1, fl)),
        ]:
            for m in range(3):
                maps = enumerate_maps(standard_cube(m, fl), X)
                assert len(maps) == len(X.elements(m))


def test_cube_ref_pushing():
    collapse = NormalForm(1, (), (), (1,))
    r = CubeRef(identity_nf(0), "v")
    d = r.pushed(collapse)
    assert d.dim == 1 and d.is_degenerate
    assert not r.is_degenerate
    with pytest.raises(ComplexError):
        CubeRef(NormalForm(1, ((1, 0),)), "v")


def test_validation_rejects_broken_tables():
    vref = CubeRef(identity_nf(0), "v")
    with pytest.raises(ComplexError):
        make_mcset(FLAVOR_NONE, "full-marked", {"e": 1}, {("e", 1, 0): vref})
    with pytest.raises(ComplexError):
        make_mcset(
            FLAVOR_NONE,
            "full-marked",
            {"v": 0, "e": 1},
            {("e", 1, 0): vref, ("e", 1, 1): vref},
            markings={"v"},
        )
    with pytest.raises(ComplexError):
        make_mcset(
            FLAVOR_NONE,
            "unmarked",
            {"v": 0, "e": 1},
            {("e", 1, 0): vref, ("e", 1, 1): vref},
            markings={"e"},
        )
    X = standard_cube(2, FLAVOR_NONE)
    with pytest.raises(ComplexError):
        subcomplex(X, ["int"])


def test_random_complexes_validate():
    for seed in range(12):
        X = random_complex(seed, FLAVOR_BOTH)
        X.validate()
        assert X.dim <= 2


def test_subcomplex_skeleton_generated():
    X = standard_cube(2, FLAVOR_NEG)
    sk = skeleton(X, 1)
    assert isomorphic(sk, boundary(2, FLAVOR_NEG))
    gen = generated_subcomplex(X, ["d(1,0)"])
    assert reference.counts_of(gen) == {0: 2, 1: 1}
    sub = subcomplex(X, [x for x in X.all_nondeg() if x != "int"])
    assert maps_equal(
        inclusion_map(sub, X),
        MCMap(sub, X, {x: X.identity_ref(x) for x in sub.cubes}),
    )


# ---------------------------------------------------------------------------
# Maps
# ---------------------------------------------------------------------------


def test_map_validation_checks_faces_and_markings():
    S = standard_cube(1, FLAVOR_NONE)
    M = marked_cube(1, FLAVOR_NONE)
    v0, v1 = M.face("int", 1, 0), M.face("int", 1, 1)
    f = MCMap(S, M, {"int": M.identity_ref("int"), "d(1,0)": v0, "d(1,1)": v1})
    f.validate()
    bad = MCMap(S, M, {"int": M.identity_ref("int"), "d(1,0)": v1, "d(1,1)": v0})
    with pytest.raises(ComplexError):
        bad.validate()
    g = MCMap(M, S, {"int": S.identity_ref("int"), "d(1,0)": S.face("int", 1, 0), "d(1,1)": S.face("int", 1, 1)})
    with pytest.raises(ComplexError):
        g.validate()


def test_compose_and_identity_maps():
    S = standard_cube(1, FLAVOR_NEG)
    B = boundary(1, FLAVOR_NEG)
    i = inclusion_map(B, S)
    assert maps_equal(compose_maps(identity_map(S), i), i)
    assert maps_equal(compose_maps(i, identity_map(B)), i)


def test_enumerate_maps_pinned_and_limited():
    S = standard_cube(1, FLAVOR_NEG)
    all_maps = enumerate_maps(S, S)
    assert len(all_maps) == len(S.elements(1))
    pinned = enumerate_maps(S, S, pinned={"int": S.identity_ref("int")})
    assert len(pinned) == 1 and maps_equal(pinned[0], identity_map(S))
    limited = enumerate_maps(S, S, limit=2)
    assert len(limited) == 2


def test_iso_search():
    A = standard_cube(2, FLAVOR_NEG)
    assert isomorphic(A, A)
    assert find_iso(A, boundary(2, FLAVOR_NEG)) is None
    assert not isomorphic(standard_cube(1, FLAVOR_NEG), marked_cube(1, FLAVOR_NEG))


# ---------------------------------------------------------------------------
# Tensor
# ---------------------------------------------------------------------------


def test_tensor_counts_follow_convolution():
    for m in range(3):
        for n in range(3 - m + 1):
            X = standard_cube(m, FLAVOR_NEG)
            Y = standard_cube(n, FLAVOR_NEG)
            T = tensor(X, Y)
            T.validate()
            want = reference.convolve(
                reference.counts_of(X), reference.counts_of(Y)
            )
            assert reference.counts_of(T) == want
            assert reference.counts_of(T) == reference.counts_of(
                standard_cube(m + n, FLAVOR_NEG)
            )
            assert isomorphic(T, standard_cube(m + n, FLAVOR_NEG))


def test_tensor_counts_on_general_complexes():
    X = tensor(standard_cube(1, FLAVOR_NONE), marked_cube(1, FLAVOR_NONE))
    Y = boundary(2, FLAVOR_NONE)
    T = tensor(X, Y)
    T.validate()
    assert reference.counts_of(T) == reference.convolve(
        reference.counts_of(X), reference.counts_of(Y)
    )


def test_tensor_marks_when_either_factor_is_marked():
    T, pairs = tensor_indexed(
        standard_cube(1, FLAVOR_NONE), marked_cube(1, FLAVOR_NONE)
    )
    assert sorted(T.markings) == ["d(1,0)*int", "d(1,1)*int", "int*int"]
    assert pairs[("int", "int")] == "int*int"


def test_tensor_units_and_associativity():
    pt = standard_cube(0, FLAVOR_NEG)
    for X in [
        standard_cube(1, FLAVOR_NEG),
        marked_cube(1, FLAVOR_NEG),
        tensor(standard_cube(1, FLAVOR_NEG), marked_cube(1, FLAVOR_NEG)),
    ]:
        assert isomorphic(tensor(X, pt), X)
        assert isomorphic(tensor(pt, X), X)
    A = standard_cube(1, FLAVOR_NEG)
    B = marked_cube(1, FLAVOR_NEG)
    C = standard_cube(1, FLAVOR_NEG)
    assert isomorphic(tensor(tensor(A, B), C), tensor(A, tensor(B, C)))


def test_tensor_map_validates():
    mk = marker(1, FLAVOR_NEG)
    tm = tensor_map(mk, identity_map(standard_cube(1, FLAVOR_NEG)))
    tm.validate()
    assert tm.is_entire()


# ---------------------------------------------------------------------------
# Pushouts
# ---------------------------------------------------------------------------


def test_pushout_wedge_of_intervals():
    S = standard_cube(1, FLAVOR_NEG)
    pt = standard_cube(0, FLAVOR_NEG)
    f = MCMap(pt, S, {"int": S.face("int", 1, 1)})
    g = MCMap(pt, S, {"int": S.face("int", 1, 0)})
    res = pushout(f, g)
    res.apex.validate()
    assert reference.counts_of(res.apex) == {0: 3, 1: 2}
    assert maps_equal(
        compose_maps(res.into_x, f), compose_maps(res.into_b, g)
    )
    end = S.face("int", 1, 1)
    const = MCMap(
        S,
        S,
        {
            "int": end.pushed(NormalForm(1, (), (), (1,))),
            "d(1,0)": end,
            "d(1,1)": end,
        },
    )
    ind = res.induced(identity_map(S), const)
    ind.validate()


def test_pushout_product_of_boundary_inclusions():
    fl = FLAVOR_NEG
    pp = pushout_product(
        boundary_inclusion(1, fl), boundary_inclusion(1, fl)
    )
    pp.validate()
    assert isomorphic(pp.codomain, standard_cube(2, fl))
    assert isomorphic(pp.domain, boundary(2, fl))


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------


def test_boundary_and_open_box_shapes():
    for n in (1, 2, 3):
        B = boundary(n, FLAVOR_NEG)
        want = {
            k: reference.cube_count(n, k) for k in range(n)
        }
        assert reference.counts_of(B) == want
        for i in range(1, n + 1):
            for eps in (0, 1):
                V = open_box(n, i, eps, FLAVOR_NEG)
                missing = format_nf(mono_from_fixed(n, [(i, eps)]))
                assert set(B.cubes) - set(V.cubes) == {missing}
        boundary_inclusion(n, FLAVOR_NEG).validate()


def test_comical_cube_marks_the_reference_critical_faces():
    for n in (1, 2, 3):
        for i in range(1, n + 1):
            for eps in (0, 1):
                C = comical_cube(n, i, eps, FLAVOR_BOTH)
                C.validate()
                got = {catalog_pattern(C, x) for x in C.markings}
                assert got == reference.critical_patterns(n, i, eps)


def test_comical_open_box_inclusion_shape():
    g = comical_open_box_inclusion(2, 1, 0, FLAVOR_NEG)
    g.validate()
    missing = set(g.codomain.cubes) - set(g.domain.cubes)
    assert missing == {"int", "d(1,0)"}
    assert all(r.epi.is_identity for r in g.assignment.values())


def test_comical_marking_extension_is_entire():
    ext = comical_marking_extension(2, 1, 0, FLAVOR_NEG)
    ext.validate()
    assert ext.is_entire()
    assert set(ext.domain.cubes) == set(ext.codomain.cubes)
    added = ext.codomain.markings - ext.domain.markings
    assert added == {"d(1,0)"}
    others = {
        x
        for x in ext.domain.cubes
        if ext.domain.cube_dim(x) == 1 and x != "d(1,0)"
    }
    assert others <= ext.domain.markings


def test_marker_and_marked_cube():
    for n in (1, 2):
        M = marked_cube(n, FLAVOR_NEG)
        assert M.markings == {"int"}
        mk = marker(n, FLAVOR_NEG)
        mk.validate()
        assert mk.is_entire()
        assert set(mk.domain.cubes) == set(mk.codomain.cubes)


def test_special_complex_constructors_validate():
    fl = FLAVOR_NEG
    rezk_complex(fl).validate()
    el = rezk_elementary(fl)
    el.validate()
    assert el.is_entire()
    K = invertible_interval(fl)
    assert K.regime == "edge-marked"
    K.validate()
    saturation_map(fl).validate()
    three_out_of_four(1, 0, fl).validate()
    inner_open_box_inclusion(2, 1, 0, fl).validate()
    marked_open_box_inclusion(2, 1, 0, fl).validate()
    assert reference.counts_of(empty_complex(fl)) == {}
