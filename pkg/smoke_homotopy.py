"""Smoke checks for the lifting machinery."""

import time

from comical.opcalc import FLAVOR_BOTH, FLAVOR_NEG, FLAVOR_NONE
from comical.complexes import (
    MCMap,
    enumerate_maps,
    identity_map,
    inclusion_map,
    marked_cube,
    standard_cube,
    comical_open_box_inclusion,
    comical_marking_extension,
)
from comical.functors import FlavorInclusion, forget_connections_map, free_connections_map
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

t0 = time.time()

# 1. identity lifts against everything
for spec in generating_family(FLAVOR_NEG, 2):
    p = identity_map(spec.map.codomain)
    assert has_rlp(p, spec.map).holds, f"identity fails {spec}"
print("1. identity RLP against dim<=2 generators: ok", round(time.time() - t0, 2))

# 2. point over point vs generators of dim <= 3
pt = standard_cube(0, FLAVOR_NEG)
p0 = identity_map(pt)
for spec in generating_family(FLAVOR_NEG, 3, saturated=True, n_trivial=0):
    assert has_rlp(p0, spec.map).holds, f"point fails {spec}"
print("2. point RLP against dim<=3 generators (sat, 0-triv): ok", round(time.time() - t0, 2))

# 3. interval over point vs 1-dimensional comical box
p1 = terminal_map(standard_cube(1, FLAVOR_NEG))
g1 = comical_open_box_inclusion(1, 1, 0, FLAVOR_NEG)
assert has_rlp(p1, g1).holds
print("3. interval->point RLP vs 1-box: ok", round(time.time() - t0, 2))

# 3b. a failing RLP yields a validated witness square with no lift
# (vertex-0 over the marked interval vs the box missing the (1,1)-face:
# the square can send the interior to the marked edge, which never lifts)
pv = MCMap(pt, marked_cube(1, FLAVOR_NEG), {"int": marked_cube(1, FLAVOR_NEG).face("int", 1, 0)})
g1f = comical_open_box_inclusion(1, 1, 1, FLAVOR_NEG)
verdict = has_rlp(pv, g1f)
assert not verdict.holds
verdict.counterexample.validate()
assert find_lift(verdict.counterexample) is None
print("3b. failing RLP witness validates: ok", round(time.time() - t0, 2))

# 4. box fill adds one marked square and one edge
interval = standard_cube(1, FLAVOR_NEG)
h = FreeFillingComplex(terminal_map(interval))
g = comical_open_box_inclusion(2, 1, 0, FLAVOR_NEG)
u = enumerate_maps(g.domain, h.complex)[0]
u = MCMap(g.domain, h.complex, dict(u.assignment))
prob = LiftProblem(g, u, terminal_map(g.codomain), h.projection)
before = dict(h.complex.summary())
ref = h.fill(prob)
after = dict(h.complex.summary())
assert after == {0: before.get(0, 0), 1: before.get(1, 0) + 1, 2: 1}, (before, after)
assert ref.base in h.complex.markings
h.complex.validate()
h.projection.validate()
print("4. box fill adds marked square + edge: ok", round(time.time() - t0, 2))

# 5. repeated identical problems give distinct fillers
u2 = MCMap(g.domain, h.complex, dict(u.assignment))
prob2 = LiftProblem(g, u2, terminal_map(g.codomain), h.projection)
ref2 = h.fill(prob2)
assert ref2.base != ref.base
assert len(h.events) == 2
print("5. no caching, distinct fillers: ok", round(time.time() - t0, 2))

# 6. marking extension fill adds zero cubes, one marking
ext = comical_marking_extension(2, 1, 0, FLAVOR_NEG)
h2 = FreeFillingComplex(terminal_map(ext.domain))
prob3 = LiftProblem(
    ext, identity_map(ext.domain), terminal_map(ext.codomain), h2.projection
)
before = dict(h2.complex.summary())
marks_before = set(h2.complex.markings)
h2.fill(prob3)
assert dict(h2.complex.summary()) == before
assert len(h2.complex.markings - marks_before) == 1
print("6. extension fill: zero cubes, one marking: ok", round(time.time() - t0, 2))

# 7. non-generator g is rejected (plain vertex inclusion, codomain unmarked)
iv = standard_cube(1, FLAVOR_NEG)
bad = MCMap(standard_cube(0, FLAVOR_NEG), iv, {"int": iv.face("int", 1, 0)})
ub = MCMap(bad.domain, h2.complex, {"int": h2.complex.identity_ref("d(1,0),d(2,0)")})
try:
    h2.fill(LiftProblem(bad, ub, terminal_map(iv), h2.projection))
    raise AssertionError("non-generator accepted")
except Exception as e:
    assert "open-box" in str(e), e
print("7. non-generator rejected: ok", round(time.time() - t0, 2))

# 8. bounded fibrant approx on the interval, cap 2, 1 round
X = standard_cube(1, FLAVOR_NEG)
harness, incl = bounded_fibrant_approx(X, 2, 1)
assert len(harness.complex.cubes) > len(X.cubes)
harness.complex.validate()
incl.validate()
print(
    "8. fibrant approx grows the interval:",
    dict(sorted(harness.complex.summary().items())),
    f"{len(harness.events)} fills",
    round(time.time() - t0, 2),
)

# 9. point is comical, saturated, 0-trivial
assert is_comical_set(pt, 2, saturated=True, n_trivial=0).holds
print("9. point comical verdict: ok", round(time.time() - t0, 2))

# 10. oracle answers via the same search
oracle = brute_lift_oracle(p1)
uu = enumerate_maps(g1.domain, p1.domain)[0]
probe = LiftProblem(g1, uu, terminal_map(g1.codomain), p1)
sol = oracle.lift(probe)
assert sol is not None and probe.accepts(sol)
print("10. brute oracle: ok", round(time.time() - t0, 2))

# 11. generator transport on a small instance
inc = FlavorInclusion(FLAVOR_NONE, FLAVOR_NEG)
gA = comical_open_box_inclusion(1, 1, 0, FLAVOR_NONE)
pB = terminal_map(standard_cube(1, FLAVOR_NEG))
lhs = has_rlp(pB, free_connections_map(gA, inc)).holds
rhs = has_rlp(forget_connections_map(pB, inc, 2), gA).holds
assert lhs == rhs, (lhs, rhs)
print("11. transport agreement (1-box):", lhs, round(time.time() - t0, 2))

print("all homotopy smoke checks passed", round(time.time() - t0, 2))
