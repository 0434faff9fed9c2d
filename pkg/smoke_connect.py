"""Smoke checks for connect.py against hand-computed examples."""

from comical.opcalc import (
    FLAVOR_NEG,
    FLAVOR_NONE,
    NormalForm,
    compose,
    identity_nf,
    mono_from_fixed,
    run_nf,
)
from comical.complexes import (
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


def check(tag, cond):
    print(("ok  " if cond else "FAIL") + " " + tag)
    if not cond:
        raise SystemExit(1)


# 1. counit tables are valid and composition closed
xbar = marked_cube(1, FLAVOR_NEG)
t = wcs_from_counit(xbar, INC, 3)
check("counit table validates", validate_wcs(t) == [])
check("counit table is composition closed", check_scs(t) is None)

# 2. a perturbed table is caught
S = t.subject.domain
gam = run_nf(2, 1, 1, 0)
bad_vals = {(b, e): t.value(b, e) for _, b, e in t.pairs()}
bad_vals[("int", gam)] = S.identity_ref("int").pushed(
    NormalForm(2, (), (), (1,))
)
bad = make_wcs_table(INC, identity_map(S), 3, lambda b, e: bad_vals[(b, e)])
check("perturbed counit table is rejected", validate_wcs(bad) != [])

# 3. gamma-degeneracy witnesses and EZ decomposition
pair2 = next(x for x in S.all_nondeg() if S.cube_dim(x) == 2)
check(
    "degenerate pair has a witness",
    gamma_degenerate_witness(t, S.identity_ref(pair2)) == ("int", gam),
)
check(
    "EZ decomposition is unique",
    ez_decompose_wrt(t, S.identity_ref(pair2), verify=True) == ("int", gam),
)

# 4. restriction agrees with precomposition on a face
t_int = cube_table(t, "int")
r = restrict_wcs(t_int, mono_from_fixed(1, [(1, 0)]))
check("restricted table validates", validate_wcs(r) == [])
v0 = S.face("int", 1, 0)
ch = precompose_wcs(t, element_map(S, v0))
check(
    "restriction matches precomposition",
    r.value("int", identity_nf(0)) == ch.value("int", identity_nf(0)),
)

# 5. promotion round-trips the counit table
Xbar2, iso = promote_scs(t)
check(
    "promotion recovers the enlargement",
    sorted(Xbar2.cubes.values()) == sorted(xbar.cubes.values())
    and Xbar2.markings == xbar.markings,
)

# 6. synthesis on one edge over the point, cap 2, exact face pattern
seed = standard_cube(1, FLAVOR_NONE, "full-marked")
harness = FreeFillingComplex(terminal_map(seed))
oracle = FillingOracle(harness)
xmap = identity_map(seed)
bd = boundary(1, FLAVOR_NONE, "full-marked")
bd_subject = MCMap(bd, seed, {b: seed.identity_ref(b) for b in bd.cubes})
gamma_bd = make_wcs_table(
    INC, bd_subject, 2, lambda b, e: seed.identity_ref(b)
)
pt_t = point_wcs(INC, 3)
gamma_fx = precompose_wcs(
    pt_t, element_map(pt_t.subject.domain, oracle.p.on_cube("int"))
)
tbl, approx = synthesize_on_cube(xmap, gamma_bd, gamma_fx, oracle, 2)
E = oracle.p.domain
val = tbl.value("int", gam)
x_ref = E.identity_ref("int")
vtx1 = seed.face("int", 1, 1)
deg_edge = E.apply(vtx1, NormalForm(1, (), (), (1,)))
check(
    "synthesized connection has the expected faces",
    E.apply(val, mono_from_fixed(2, [(1, 0)])) == x_ref
    and E.apply(val, mono_from_fixed(2, [(2, 0)])) == x_ref
    and E.apply(val, mono_from_fixed(2, [(1, 1)])) == deg_edge
    and E.apply(val, mono_from_fixed(2, [(2, 1)])) == deg_edge,
)
check("synthesized connection is marked", E.is_marked(val))
check("approximations recorded", len(approx.cubes) == 3)

# 7. synthesis on a vertex is trivial
seed0 = standard_cube(0, FLAVOR_NONE, "full-marked")
h0 = FreeFillingComplex(terminal_map(seed0))
o0 = FillingOracle(h0)
bd0 = empty_complex(FLAVOR_NONE, "full-marked")
gamma_bd0 = make_wcs_table(
    INC, MCMap(bd0, seed0, {}), 2, lambda b, e: None
)
gfx0 = precompose_wcs(
    point_wcs(INC, 2), element_map(point_wcs(INC, 2).subject.domain, o0.p.on_cube("int"))
)
tbl0, approx0 = synthesize_on_cube(identity_map(seed0), gamma_bd0, gfx0, o0, 2)
check(
    "vertex synthesis is trivial",
    len(tbl0.pairs()) == 1 and approx0.cubes == {},
)

# 8. extension from the empty subcomplex over a whole edge
seed2 = standard_cube(1, FLAVOR_NONE, "full-marked")
h2 = FreeFillingComplex(terminal_map(seed2))
o2 = FillingOracle(h2)
t_ext = extend_wcs(
    inclusion_map(empty_complex(FLAVOR_NONE, "full-marked"), seed2),
    inclusion_map(seed2, seed2),
    o2,
    empty_wcs(INC, seed2, 2),
    point_wcs(INC, 3),
    2,
)
check("extension from nothing validates", validate_wcs(t_ext) == [])
check(
    "extension is marked on the connection word",
    o2.p.domain.is_marked(t_ext.value("int", gam)),
)

# 9. strong synthesis over a static fibrant host
host, _ = materialize_forgotten(
    standard_cube(1, FLAVOR_NEG), INC, 3
)
p_host = terminal_map(host)
empty0 = empty_complex(FLAVOR_NONE, "full-marked")
gamma_empty = make_wcs_table(INC, identity_map(empty0), 2, lambda b, e: None)
t_scs = synthesize_scs(
    inclusion_map(empty0, host),
    BruteLiftOracle(p_host),
    gamma_empty,
    point_wcs(INC, 3),
    2,
)
check("strong synthesis validates", validate_wcs(t_scs) == [])
check("strong synthesis is composition closed", check_scs(t_scs) is None)

# 10. cube table of the strong synthesis restricts cleanly
edge = next(x for x in host.all_nondeg() if host.cube_dim(x) == 1)
ct = cube_table(t_scs, edge)
check("cube table validates", validate_wcs(ct) == [])

# 11. quotient witness on the cylinder itself
fl = FLAVOR_NONE
S1 = standard_cube(1, fl, "full-marked")
M1 = marked_cube(1, fl)
T, _pairs = tensor_indexed(S1, M1)
res = not_surj_quotient(T, identity_map(T))
check(
    "collapsing the cylinder leaves the interval",
    sorted(res.apex.cubes.values()) == [0, 0, 1],
)
check("the long edges are identified", res.identified[0] != res.identified[1])

print("all connect smoke checks passed")
