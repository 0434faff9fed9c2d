import time

from comical.opcalc import (
    FLAVOR_NONE, FLAVOR_NEG, FLAVOR_POS, FLAVOR_BOTH, identity_nf, NormalForm,
)
from comical.complexes import (
    standard_cube, marked_cube, isomorphic, find_iso, rezk_complex,
    rezk_elementary, invertible_interval, enumerate_maps, tensor,
)
from comical.functors import (
    FlavorInclusion, free_connections, forget_connections,
    forget_connections_indexed, unit_map, counit_map, cofree, trivialize,
    flat, sharp, core, forget_markings, triangulate, triangulate_indexed,
    triangulate_map, cubify, enumerate_s_maps, find_s_iso, s_isomorphic,
    iota_chain, free_connections_map, forget_connections_map,
)

t0 = time.time()

inc0 = FlavorInclusion(FLAVOR_NONE, FLAVOR_NEG)

# 1. forget the 1-cube with negative connections down to no connections
sq1 = standard_cube(1, FLAVOR_NEG)
P, refs = forget_connections_indexed(sq1, inc0, 3)
P.validate()
counts = P.summary()
print("forget(cube1, none<neg) counts:", counts)
assert counts == {0: 2, 1: 1, 2: 1, 3: 1}, counts
marked_dims = sorted(P.cube_dim(x) for x in P.markings)
print("marked dims:", marked_dims)
assert marked_dims == [2, 3]

# 2. free enlargement is the relabelled cube
c1_none = standard_cube(1, FLAVOR_NONE)
F = free_connections(c1_none, inc0)
assert isomorphic(F, standard_cube(1, FLAVOR_NEG))

# 3. unit and counit validate
eta = unit_map(c1_none, inc0)
eta.validate()
eps_map = counit_map(sq1, inc0)
eps_map.validate()
print("unit/counit validate ok", round(time.time() - t0, 2))

# triangle identity 1 on the 1-cube: eps_{free X} . free(eta_X) = id
from comical.complexes import compose_maps, maps_equal, identity_map
capT = 1
etaX = unit_map(c1_none, inc0, cap=capT)
lhs = compose_maps(counit_map(free_connections(c1_none, inc0), inc0, cap=capT),
                   free_connections_map(etaX, inc0))
assert maps_equal(lhs, identity_map(free_connections(c1_none, inc0)))
print("triangle identity 1 ok", round(time.time() - t0, 2))

# triangle identity 2 on the point: forget(eps_Y) . eta_{forget Y} = id
Y0 = standard_cube(0, FLAVOR_NEG)
capU = 2
PY, _ = forget_connections_indexed(Y0, inc0, capU)
eta2 = unit_map(PY, inc0, cap=max(capU, PY.dim))
epsY = counit_map(Y0, inc0, cap=capU)
fc_eps = forget_connections_map(epsY, inc0, cap=max(capU, PY.dim))
lhs2 = compose_maps(fc_eps, eta2)
assert maps_equal(lhs2, identity_map(PY)), (
    sorted(str(v) for v in lhs2.assignment.values()))
print("triangle identity 2 ok", round(time.time() - t0, 2))

# 4. triangulation of standard cubes
T1 = triangulate(standard_cube(1, FLAVOR_NONE))
T1.validate()
print("T(cube1):", T1.summary(), "markings", sorted(T1.markings))
assert T1.summary() == {0: 2, 1: 1}
assert not T1.markings

T2 = triangulate(standard_cube(2, FLAVOR_BOTH))
T2.validate()
print("T(cube2):", T2.summary(), "markings", sorted(T2.markings))
assert T2.summary() == {0: 4, 1: 5, 2: 2}
# exactly one unmarked triangle (the canonical chain), diagonal edge unmarked
tri_marks = [x for x in T2.markings if T2.simp_dim(x) == 2]
assert len(tri_marks) == 1

T2m = triangulate(marked_cube(2, FLAVOR_BOTH))
T2m.validate()
tri_marks_m = [x for x in T2m.markings if T2m.simp_dim(x) == 2]
print("T(marked cube2) marked triangles:", len(tri_marks_m))
assert len(tri_marks_m) == 2

T3 = triangulate(standard_cube(3, FLAVOR_BOTH))
T3.validate()
print("T(cube3):", T3.summary())
assert sum(1 for x in T3.simplices if T3.simp_dim(x) == 3) == 6
top_unmarked = [x for x in T3.nondeg(3) if x not in T3.markings]
assert len(top_unmarked) == 1

# 5. triangulate a map and the invertible interval (edge regime)
tm = triangulate_map(rezk_elementary(FLAVOR_NEG))
tm.validate()
K = invertible_interval(FLAVOR_NEG)
TK = triangulate(K)
TK.validate()
print("T(K):", TK.summary(), "marked", sorted(TK.markings))
assert TK.regime == "edge-marked"

# 6. trivialize(L, 0) matches the codomain of the elementary map
L = rezk_complex(FLAVOR_NEG)
tau = trivialize(L, 0)
cod = rezk_elementary(FLAVOR_NEG).codomain
assert tau.markings == cod.markings
assert isomorphic(tau, cod)
print("trivialize(L,0) ok", round(time.time() - t0, 2))

# 7. flat / sharp / core / forget_markings round trips
Kf = flat(K)
assert Kf.regime == "full-marked" and Kf.markings == K.markings
assert forget_markings(Kf, "edge-marked").markings == K.markings
Ks = sharp(K)
assert {x for x in Ks.markings if Ks.cube_dim(x) >= 2} == {"s1", "s2"}
cored = core(trivialize(standard_cube(2, FLAVOR_NEG), 0))
assert cored.summary() == standard_cube(2, FLAVOR_NEG).summary()
cored2 = core(standard_cube(2, FLAVOR_NEG))
print("core(cube2 unmarked-interior):", cored2.summary())
assert 2 not in cored2.summary()

# 8. cofree on a point, and the hom bijection with forget
X0 = standard_cube(0, FLAVOR_NONE)
W = cofree(X0, inc0, 2)
W.validate()
print("cofree(point) counts:", W.summary(), round(time.time() - t0, 2))
Y = standard_cube(1, FLAVOR_NEG)
lhsH = enumerate_maps(forget_connections(Y, inc0, 2), X0)
rhsH = enumerate_maps(Y, W)
print("hom bijection forget -| cofree:", len(lhsH), len(rhsH))
assert len(lhsH) == len(rhsH)

# 9. cubify and the triangulation hom bijection
S = triangulate(standard_cube(1, FLAVOR_NONE))
US = cubify(S, FLAVOR_NONE, 2)
US.validate()
print("U(T cube1) counts:", US.summary(), round(time.time() - t0, 2))
Xsmall = standard_cube(1, FLAVOR_NONE)
lhsT = enumerate_s_maps(triangulate(Xsmall), S)
rhsT = enumerate_maps(Xsmall, US)
print("hom bijection T -| U:", len(lhsT), len(rhsT))
assert len(lhsT) == len(rhsT)

# 10. T(free X) is T(X)
X = tensor(standard_cube(1, FLAVOR_NONE), standard_cube(1, FLAVOR_NONE))
iso = find_s_iso(triangulate(X), triangulate(free_connections(X, inc0)))
assert iso is not None
print("T . free == T ok")

print("all functor smoke checks passed in", round(time.time() - t0, 2), "s")
