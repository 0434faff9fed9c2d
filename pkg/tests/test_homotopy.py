import pytest

from comical.opcalc import FLAVOR_NEG, FLAVOR_NONE
from comical.complexes import (
    ComplexError,
    MCMap,
    comical_marking_extension,
    comical_open_box_inclusion,
    enumerate_maps,
    identity_map,
    marked_cube,
    standard_cube,
)
from comical.functors import (
    FlavorInclusion,
    forget_connections_map,
    free_connections_map,
)
from comical.homotopy import (
    FreeFillingComplex,
    LiftProblem,
    bounded_fibrant_approx,
    brute_lift_oracle,
    find_lift,
    generating_family,
    has_rlp,
    is_comical_set,
    terminal_map,
)


def test_generating_family_schedule():
    fam = generating_family(FLAVOR_NEG, 2)
    assert [str(s) for s in fam] == [
        "box(1,1,0)",
        "box(1,1,1)",
        "box(2,1,0)",
        "box(2,1,1)",
        "box(2,2,0)",
        "box(2,2,1)",
        "extension(2,1,0)",
        "extension(2,1,1)",
        "extension(2,2,0)",
        "extension(2,2,1)",
    ]
    sat = generating_family(FLAVOR_NEG, 2, saturated=True, n_trivial=0)
    assert [str(s) for s in sat if s.family == "rezk"] == ["rezk(0,0)"]
    assert [str(s) for s in sat if s.family == "marker"] == [
        "marker(1)",
        "marker(2)",
    ]
    for spec in fam:
        spec.map.validate()
    with pytest.raises(ComplexError):
        generating_family(FLAVOR_NEG, 0)


def test_identity_lifts_against_all_generators():
    for spec in generating_family(FLAVOR_NEG, 2):
        p = identity_map(spec.map.codomain)
        assert has_rlp(p, spec.map).holds


def test_point_lifts_against_saturated_trivial_generators():
    pt = standard_cube(0, FLAVOR_NEG)
    p0 = identity_map(pt)
    for spec in generating_family(FLAVOR_NEG, 3, saturated=True, n_trivial=0):
        assert has_rlp(p0, spec.map).holds


def test_interval_lifts_one_dimensional_boxes():
    p1 = terminal_map(standard_cube(1, FLAVOR_NEG))
    g1 = comical_open_box_inclusion(1, 1, 0, FLAVOR_NEG)
    assert has_rlp(p1, g1).holds


def test_failing_rlp_reports_a_validated_square():
    pt = standard_cube(0, FLAVOR_NEG)
    M = marked_cube(1, FLAVOR_NEG)
    pv = MCMap(pt, M, {"int": M.face("int", 1, 0)})
    g1f = comical_open_box_inclusion(1, 1, 1, FLAVOR_NEG)
    verdict = has_rlp(pv, g1f)
    assert not verdict.holds
    verdict.counterexample.validate()
    assert find_lift(verdict.counterexample) is None


def _box_problem(h, g):
    u = enumerate_maps(g.domain, h.complex)[0]
    u = MCMap(g.domain, h.complex, dict(u.assignment))
    return LiftProblem(g, u, terminal_map(g.codomain), h.projection)


def test_box_fill_adds_one_marked_square_and_one_edge():
    h = FreeFillingComplex(terminal_map(standard_cube(1, FLAVOR_NEG)))
    g = comical_open_box_inclusion(2, 1, 0, FLAVOR_NEG)
    before = dict(h.complex.summary())
    ref = h.fill(_box_problem(h, g))
    after = dict(h.complex.summary())
    assert after == {0: before.get(0, 0), 1: before.get(1, 0) + 1, 2: 1}
    assert ref.base in h.complex.markings
    h.complex.validate()
    h.projection.validate()


def test_repeated_fills_mint_distinct_cells():
    h = FreeFillingComplex(terminal_map(standard_cube(1, FLAVOR_NEG)))
    g = comical_open_box_inclusion(2, 1, 0, FLAVOR_NEG)
    ref = h.fill(_box_problem(h, g))
    ref2 = h.fill(_box_problem(h, g))
    assert ref2.base != ref.base
    assert len(h.events) == 2


def test_extension_fill_adds_only_a_marking():
    ext = comical_marking_extension(2, 1, 0, FLAVOR_NEG)
    h = FreeFillingComplex(terminal_map(ext.domain))
    prob = LiftProblem(
        ext, identity_map(ext.domain), terminal_map(ext.codomain), h.projection
    )
    before = dict(h.complex.summary())
    marks_before = set(h.complex.markings)
    h.fill(prob)
    assert dict(h.complex.summary()) == before
    assert len(h.complex.markings - marks_before) == 1


def test_fill_rejects_maps_outside_the_catalog():
    ext = comical_marking_extension(2, 1, 0, FLAVOR_NEG)
    h = FreeFillingComplex(terminal_map(ext.domain))
    iv = standard_cube(1, FLAVOR_NEG)
    bad = MCMap(standard_cube(0, FLAVOR_NEG), iv, {"int": iv.face("int", 1, 0)})
    ub = MCMap(
        bad.domain, h.complex, {"int": h.complex.identity_ref("d(1,0),d(2,0)")}
    )
    with pytest.raises(ComplexError, match="open-box"):
        h.fill(LiftProblem(bad, ub, terminal_map(iv), h.projection))


def test_bounded_fibrant_approx_grows_the_interval():
    X = standard_cube(1, FLAVOR_NEG)
    harness, incl = bounded_fibrant_approx(X, 2, 1)
    assert len(harness.complex.cubes) > len(X.cubes)
    assert len(harness.events) > 0
    harness.complex.validate()
    incl.validate()
    assert incl.domain is X


def test_comical_verdicts_on_point_and_interval():
    pt = standard_cube(0, FLAVOR_NEG)
    assert is_comical_set(pt, 2, saturated=True, n_trivial=0).holds
    interval = standard_cube(1, FLAVOR_NEG)
    assert is_comical_set(interval, 1).holds
    verdict = is_comical_set(interval, 2)
    assert not verdict.holds
    assert str(verdict.generator) == "box(2,1,1)"
    verdict.counterexample.validate()


def test_brute_oracle_answers_via_search():
    p1 = terminal_map(standard_cube(1, FLAVOR_NEG))
    g1 = comical_open_box_inclusion(1, 1, 0, FLAVOR_NEG)
    oracle = brute_lift_oracle(p1)
    u = enumerate_maps(g1.domain, p1.domain)[0]
    probe = LiftProblem(g1, u, terminal_map(g1.codomain), p1)
    sol = oracle.lift(probe)
    assert sol is not None and probe.accepts(sol)


def test_rlp_transport_across_a_flavor_inclusion():
    inc = FlavorInclusion(FLAVOR_NONE, FLAVOR_NEG)
    gA = comical_open_box_inclusion(1, 1, 0, FLAVOR_NONE)
    pB = terminal_map(standard_cube(1, FLAVOR_NEG))
    lhs = has_rlp(pB, free_connections_map(gA, inc)).holds
    rhs = has_rlp(forget_connections_map(pB, inc, 2), gA).holds
    assert lhs == rhs
