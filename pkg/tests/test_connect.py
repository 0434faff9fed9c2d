import pytest

from comical.opcalc import (
    FLAVOR_NEG,
    FLAVOR_NONE,
    NormalForm,
    identity_nf,
    mono_from_fixed,
    run_nf,
)
from comical.complexes import (
    ComplexError,
    MCMap,
    boundary,
    empty_complex,
    identity_map,
    inclusion_map,
    marked_cube,
    standard_cube,
    tensor_indexed,
)
from comical.functors import FlavorInclusion, materialize_forgotten
from comical.homotopy import (
    BruteLiftOracle,
    FillingOracle,
    FreeFillingComplex,
    terminal_map,
)
from comical.connect import (
    check_scs,
    cube_table,
    element_map,
    empty_wcs,
    extend_wcs,
    ez_decompose_wrt,
    gamma_degenerate_witness,
    make_wcs_table,
    not_surj_quotient,
    point_wcs,
    precompose_wcs,
    promote_scs,
    restrict_wcs,
    synthesize_on_cube,
    synthesize_scs,
    validate_wcs,
    wcs_from_counit,
)

INC = FlavorInclusion(FLAVOR_NONE, FLAVOR_NEG)
GAMMA = run_nf(2, 1, 1, 0)


@pytest.fixture(scope="module")
def counit_table():
    return wcs_from_counit(marked_cube(1, FLAVOR_NEG), INC, 3)


def test_counit_table_is_a_strong_structure(counit_table):
    assert validate_wcs(counit_table) == []
    assert check_scs(counit_table) is None


def test_perturbed_table_is_rejected(counit_table):
    S = counit_table.subject.domain
    vals = {(b, e): counit_table.value(b, e) for _, b, e in counit_table.pairs()}
    vals[("int", GAMMA)] = S.identity_ref("int").pushed(
        NormalForm(2, (), (), (1,))
    )
    bad = make_wcs_table(INC, identity_map(S), 3, lambda b, e: vals[(b, e)])
    assert validate_wcs(bad) != []


def test_degeneracy_witness_and_unique_decomposition(counit_table):
    S = counit_table.subject.domain
    pair2 = next(x for x in S.all_nondeg() if S.cube_dim(x) == 2)
    ref = S.identity_ref(pair2)
    assert gamma_degenerate_witness(counit_table, ref) == ("int", GAMMA)
    assert ez_decompose_wrt(counit_table, ref, verify=True) == ("int", GAMMA)


def test_decomposition_refuses_refs_above_the_cap(counit_table):
    S = counit_table.subject.domain
    tall = S.identity_ref("int").pushed(run_nf(4, 1, 3, 0))
    with pytest.raises(ComplexError):
        ez_decompose_wrt(counit_table, tall, verify=True)


def test_restriction_matches_precomposition(counit_table):
    S = counit_table.subject.domain
    r = restrict_wcs(cube_table(counit_table, "int"), mono_from_fixed(1, [(1, 0)]))
    assert validate_wcs(r) == []
    ch = precompose_wcs(counit_table, element_map(S, S.face("int", 1, 0)))
    assert r.value("int", identity_nf(0)) == ch.value("int", identity_nf(0))


def test_promotion_round_trips_the_counit_table(counit_table):
    Xbar2, iso = promote_scs(counit_table)
    xbar = marked_cube(1, FLAVOR_NEG)
    assert sorted(Xbar2.cubes.values()) == sorted(xbar.cubes.values())
    assert Xbar2.markings == xbar.markings
    iso.validate()


def test_synthesis_on_an_edge_builds_the_connection_square():
    seed = standard_cube(1, FLAVOR_NONE, "full-marked")
    oracle = FillingOracle(FreeFillingComplex(terminal_map(seed)))
    bd = boundary(1, FLAVOR_NONE, "full-marked")
    bd_subject = MCMap(bd, seed, {b: seed.identity_ref(b) for b in bd.cubes})
    gamma_bd = make_wcs_table(INC, bd_subject, 2, lambda b, e: seed.identity_ref(b))
    pt_t = point_wcs(INC, 3)
    gamma_fx = precompose_wcs(
        pt_t, element_map(pt_t.subject.domain, oracle.p.on_cube("int"))
    )
    tbl, approx = synthesize_on_cube(identity_map(seed), gamma_bd, gamma_fx, oracle, 2)
    E = oracle.p.domain
    val = tbl.value("int", GAMMA)
    x_ref = E.identity_ref("int")
    deg_edge = E.apply(seed.face("int", 1, 1), NormalForm(1, (), (), (1,)))
    assert E.apply(val, mono_from_fixed(2, [(1, 0)])) == x_ref
    assert E.apply(val, mono_from_fixed(2, [(2, 0)])) == x_ref
    assert E.apply(val, mono_from_fixed(2, [(1, 1)])) == deg_edge
    assert E.apply(val, mono_from_fixed(2, [(2, 1)])) == deg_edge
    assert E.is_marked(val)
    assert len(approx.cubes) == 3


def test_synthesis_on_a_vertex_is_trivial():
    seed0 = standard_cube(0, FLAVOR_NONE, "full-marked")
    o0 = FillingOracle(FreeFillingComplex(terminal_map(seed0)))
    bd0 = empty_complex(FLAVOR_NONE, "full-marked")
    gamma_bd0 = make_wcs_table(INC, MCMap(bd0, seed0, {}), 2, lambda b, e: None)
    pt2 = point_wcs(INC, 2)
    gfx0 = precompose_wcs(
        pt2, element_map(pt2.subject.domain, o0.p.on_cube("int"))
    )
    tbl0, approx0 = synthesize_on_cube(identity_map(seed0), gamma_bd0, gfx0, o0, 2)
    assert len(tbl0.pairs()) == 1
    assert approx0.cubes == {}


def test_extension_from_the_empty_subcomplex():
    seed = standard_cube(1, FLAVOR_NONE, "full-marked")
    oracle = FillingOracle(FreeFillingComplex(terminal_map(seed)))
    t_ext = extend_wcs(
        inclusion_map(empty_complex(FLAVOR_NONE, "full-marked"), seed),
        inclusion_map(seed, seed),
        oracle,
        empty_wcs(INC, seed, 2),
        point_wcs(INC, 3),
        2,
    )
    assert validate_wcs(t_ext) == []
    assert oracle.p.domain.is_marked(t_ext.value("int", GAMMA))


@pytest.fixture(scope="module")
def static_synthesis():
    host, _ = materialize_forgotten(standard_cube(1, FLAVOR_NEG), INC, 3)
    empty0 = empty_complex(FLAVOR_NONE, "full-marked")
    gamma_empty = make_wcs_table(INC, identity_map(empty0), 2, lambda b, e: None)
    t = synthesize_scs(
        inclusion_map(empty0, host),
        BruteLiftOracle(terminal_map(host)),
        gamma_empty,
        point_wcs(INC, 3),
        2,
    )
    return host, t


def test_static_synthesis_is_a_strong_structure(static_synthesis):
    host, t = static_synthesis
    assert validate_wcs(t) == []
    assert check_scs(t) is None


def test_cube_table_of_the_synthesis_validates(static_synthesis):
    host, t = static_synthesis
    edge = next(x for x in host.all_nondeg() if host.cube_dim(x) == 1)
    assert validate_wcs(cube_table(t, edge)) == []


def test_collapsing_the_cylinder_leaves_the_interval():
    S1 = standard_cube(1, FLAVOR_NONE, "full-marked")
    M1 = marked_cube(1, FLAVOR_NONE)
    T, _pairs = tensor_indexed(S1, M1)
    res = not_surj_quotient(T, identity_map(T))
    assert sorted(res.apex.cubes.values()) == [0, 0, 1]
    assert res.identified[0] != res.identified[1]
    assert res.quotient.domain is T or res.quotient.domain.cubes == T.cubes
    res.quotient.validate()
    res.apex.validate()


def test_quotient_rejects_the_wrong_domain():
    X = standard_cube(1, FLAVOR_NONE, "full-marked")
    with pytest.raises(ComplexError):
        not_surj_quotient(X, identity_map(X))
