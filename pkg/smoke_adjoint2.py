import time

from comical.opcalc import FLAVOR_NONE, FLAVOR_NEG, FLAVOR_BOTH
from comical.complexes import (
    standard_cube, marked_cube, boundary, enumerate_maps, tensor,
    invertible_interval, open_box,
)
from comical.functors import (
    FlavorInclusion, forget_connections, cofree, free_connections,
    triangulate, cubify, enumerate_s_maps,
)

t0 = time.time()
inc = FlavorInclusion(FLAVOR_NONE, FLAVOR_NEG)

# forget -| cofree with a 1-dimensional X and several Y shapes
X = standard_cube(1, FLAVOR_NONE)
W1 = cofree(X, inc, 1)
W1.validate()
print("cofree(cube1) cap1 counts:", W1.summary(), round(time.time() - t0, 2))
W2 = cofree(X, inc, 2)
W2.validate()
print("cofree(cube1) cap2 counts:", W2.summary(), round(time.time() - t0, 2))

for name, Y in [
    ("cube0", standard_cube(0, FLAVOR_NEG)),
    ("cube1", standard_cube(1, FLAVOR_NEG)),
    ("marked1", marked_cube(1, FLAVOR_NEG)),
    ("bd2", boundary(2, FLAVOR_NEG)),
    ("cube2", standard_cube(2, FLAVOR_NEG)),
]:
    cap = max(Y.dim, 1)
    W = W2 if cap >= 2 else W1
    lhs = enumerate_maps(forget_connections(Y, inc, cap), X)
    rhs = enumerate_maps(Y, W)
    status = "ok" if len(lhs) == len(rhs) else "MISMATCH"
    print(f"  {name}: |Hom(forget Y, X)| = {len(lhs)}, "
          f"|Hom(Y, cofree X)| = {len(rhs)} {status} "
          f"({round(time.time() - t0, 2)}s)")
    assert len(lhs) == len(rhs), name

# free -| forget hom bijection on the same corpus
for name, A in [
    ("cube1", standard_cube(1, FLAVOR_NONE)),
    ("bd2", boundary(2, FLAVOR_NONE)),
    ("box", open_box(2, 1, 0, FLAVOR_NONE)),
]:
    Yb = standard_cube(1, FLAVOR_NEG)
    lhs = enumerate_maps(free_connections(A, inc), Yb)
    rhs = enumerate_maps(A, forget_connections(Yb, inc, A.dim))
    status = "ok" if len(lhs) == len(rhs) else "MISMATCH"
    print(f"  free/forget {name}: {len(lhs)} vs {len(rhs)} {status}")
    assert len(lhs) == len(rhs), name

# T -| U with a marked simplicial target
K = invertible_interval(FLAVOR_NEG)
S = triangulate(K)
US = cubify(S, FLAVOR_NEG, 2)
US.validate()
print("U(T K) counts:", US.summary(), round(time.time() - t0, 2))
for name, Xc in [
    ("cube1", standard_cube(1, FLAVOR_NEG, regime="edge-marked")),
    ("cube2", standard_cube(2, FLAVOR_NEG, regime="edge-marked")),
    ("K", K),
]:
    lhs = enumerate_s_maps(triangulate(Xc), S)
    rhs = enumerate_maps(Xc, US)
    status = "ok" if len(lhs) == len(rhs) else "MISMATCH"
    print(f"  T/U {name}: {len(lhs)} vs {len(rhs)} {status} "
          f"({round(time.time() - t0, 2)}s)")
    assert len(lhs) == len(rhs), name

print("all adjoint spot checks passed in", round(time.time() - t0, 2), "s")
