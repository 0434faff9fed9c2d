"""Flavor-change functors, triangulation, and marking adjustments.

A flavor inclusion induces three functors between the complex categories:
freely adding connection structure (relabel the flavor, keep every cell),
forgetting it (re-normalize every element against the smaller flavor and
keep the ones that stay nondegenerate), and the cofree construction
(maps out of forgotten standard cubes).  Forgetting does not preserve
finite dimensionality, so it materializes cubes only up to a cap; the
effective cap is never below dim(X) + 2 so that unit and counit maps have
room to be validated.

Triangulation sends a cubical complex to a simplicial one: simplices of
the triangulated n-cube are weak vertex chains in [1]^n, and a general
complex is glued from those along its face table.  The right adjoint
rebuilds a cubical complex from maps out of triangulated standard cubes.
The simplicial side gets its own minimal presheaf representation here,
mirroring the cubical one (nondegenerate simplices plus a face table of
degeneracy-applied references).

Marking adjustments (trivialize, flat, sharp, core, forget_markings)
move complexes between marking regimes without touching cells.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .opcalc import (
    Flavor,
    NormalForm,
    compose,
    epi_mono_factor,
    eval_poset,
    flavor_name,
    identity_nf,
    one_step_epis,
    sections,
)
from .complexes import (
    ComplexError,
    CubeRef,
    MCMap,
    MCSet,
    compose_maps,
    enumerate_maps,
    interior_id,
    make_mcset,
    markable,
    standard_cube,
    standard_monos,
    with_flavor,
    with_markings,
)


# ---------------------------------------------------------------------------
# Flavor inclusions and the free functor
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FlavorInclusion:
    """An inclusion of connection flavors, small into large."""

    small: Flavor
    large: Flavor

    def __post_init__(self) -> None:
        if not frozenset(self.small) <= frozenset(self.large):
            raise ComplexError(
                f"{flavor_name(self.small)} is not included in "
                f"{flavor_name(self.large)}"
            )


def free_connections(X: MCSet, inc: FlavorInclusion) -> MCSet:
    """Freely enlarge the flavor: same cells, same faces, same markings.

    The new connection degeneracies act freely, so no new nondegenerate
    cubes appear and the stored data is reused verbatim.
    """
    if X.flavor != inc.small:
        raise ComplexError("complex flavor does not match the inclusion source")
    return with_flavor(X, inc.large)


def free_connections_map(f: MCMap, inc: FlavorInclusion) -> MCMap:
    return MCMap(
        free_connections(f.domain, inc),
        free_connections(f.codomain, inc),
        dict(f.assignment),
    )


# ---------------------------------------------------------------------------
# Degeneracy relative to a smaller flavor
# ---------------------------------------------------------------------------


def flavor_degeneracy_witness(
    X: MCSet, ref: CubeRef, flavor: Flavor
) -> NormalForm | None:
    """A one-step epi psi over the given flavor with ref == (ref . s) . psi
    for a section s of psi, or None if ref is nondegenerate over it.

    If ref factors through any epi of the flavor it factors through a
    one-step one (the first generator applied), and then the lower cube
    is forced to be ref . s, so checking a single section per candidate
    is a complete test.
    """
    n = ref.dim
    for psi in one_step_epis(n, flavor):
        s = sections(psi)[0]
        z = X.apply(ref, s)
        if X.apply(z, psi) == ref:
            return psi
    return None


def flavor_ez(
    X: MCSet, ref: CubeRef, flavor: Flavor
) -> tuple[NormalForm, CubeRef]:
    """Split ref as (epi over flavor, cube nondegenerate over flavor).

    Greedy peeling: each round strips one flavor-epi generator, keeping
    the invariant ref == cur . acc.
    """
    acc = identity_nf(ref.dim)
    cur = ref
    while True:
        psi = flavor_degeneracy_witness(X, cur, flavor)
        if psi is None:
            return acc, cur
        s = sections(psi)[0]
        z = X.apply(cur, s)
        acc = compose(psi, acc)
        cur = z


# ---------------------------------------------------------------------------
# Forgetting connection structure (capped)
# ---------------------------------------------------------------------------


def effective_cap(X: MCSet, cap: int) -> int:
    return max(X.dim + 2, cap)


def forget_connections_indexed(
    X: MCSet, inc: FlavorInclusion, cap: int
) -> tuple[MCSet, dict[str, CubeRef]]:
    """Forget down to the small flavor, materialized through the cap.

    Returns the complex together with the table sending each new cube id
    to the element of X it names.  New nondegenerate cubes are exactly
    the elements of X that stay nondegenerate over the small flavor; a
    cube that is degenerate over the large flavor is marked wherever the
    regime allows, since it carries an invertibility witness.
    """
    return materialize_forgotten(X, inc, effective_cap(X, cap))


def materialize_forgotten(
    X: MCSet, inc: FlavorInclusion, eff: int
) -> tuple[MCSet, dict[str, CubeRef]]:
    """forget_connections_indexed with the materialization bound taken
    literally: cubes appear through dimension eff and no further."""
    if X.flavor != inc.large:
        raise ComplexError("complex flavor does not match the inclusion target")
    small = inc.small

    cubes: dict[str, int] = {}
    ref_of: dict[str, CubeRef] = {}
    name_of: dict[tuple, str] = {}
    for n in range(eff + 1):
        for u in X.elements(n):
            if flavor_degeneracy_witness(X, u, small) is not None:
                continue
            name = str(u)
            if name in cubes:
                k = 2
                while f"{name}#{k}" in cubes:
                    k += 1
                name = f"{name}#{k}"
            cubes[name] = n
            ref_of[name] = u
            name_of[u.key()] = name

    faces: dict[tuple[str, int, int], CubeRef] = {}
    for name, u in ref_of.items():
        n = u.dim
        for i in range(1, n + 1):
            for eps in (0, 1):
                v = X.apply(u, NormalForm(n - 1, ((i, eps),)))
                acc, w = flavor_ez(X, v, small)
                faces[(name, i, eps)] = CubeRef(acc, name_of[w.key()])

    markings = frozenset(
        name
        for name, u in ref_of.items()
        if markable(X.regime, u.dim) and X.is_marked(u)
    )
    P = make_mcset(small, X.regime, cubes, faces, markings, check=False)
    return P, ref_of


def forget_connections(X: MCSet, inc: FlavorInclusion, cap: int) -> MCSet:
    return forget_connections_indexed(X, inc, cap)[0]


def forget_connections_map(f: MCMap, inc: FlavorInclusion, cap: int) -> MCMap:
    """Forget a map: each materialized element of the domain is sent to
    the re-normalized image element."""
    domP, dom_ref = forget_connections_indexed(f.domain, inc, cap)
    cod_cap = max(cap, effective_cap(f.domain, cap))
    codP, cod_ref = forget_connections_indexed(f.codomain, inc, cod_cap)
    back = {u.key(): name for name, u in cod_ref.items()}
    assignment: dict[str, CubeRef] = {}
    for name, u in dom_ref.items():
        v = f.on_ref(u)
        acc, w = flavor_ez(f.codomain, v, inc.small)
        assignment[name] = CubeRef(acc, back[w.key()])
    return MCMap(domP, codP, assignment)


def unit_map(X: MCSet, inc: FlavorInclusion, cap: int | None = None) -> MCMap:
    """X into the forgotten free enlargement, identity on every cube."""
    if X.flavor != inc.small:
        raise ComplexError("complex flavor does not match the inclusion source")
    Z = free_connections(X, inc)
    P, ref_of = forget_connections_indexed(Z, inc, X.dim if cap is None else cap)
    back = {u.key(): name for name, u in ref_of.items()}
    assignment = {
        x: CubeRef(
            identity_nf(X.cube_dim(x)), back[Z.identity_ref(x).key()]
        )
        for x in X.cubes
    }
    return MCMap(X, P, assignment)


def counit_map(Y: MCSet, inc: FlavorInclusion, cap: int | None = None) -> MCMap:
    """The free enlargement of the forgotten complex back into Y; each
    materialized element evaluates to itself."""
    if Y.flavor != inc.large:
        raise ComplexError("complex flavor does not match the inclusion target")
    P, ref_of = forget_connections_indexed(Y, inc, Y.dim if cap is None else cap)
    FP = free_connections(P, inc)
    return MCMap(FP, Y, {name: ref_of[name] for name in FP.cubes})


# ---------------------------------------------------------------------------
# Cofree connection structure
# ---------------------------------------------------------------------------


def _forget_probe(
    n: int, inc: FlavorInclusion, regime: str, probe_cap: int
) -> tuple[MCSet, MCSet, dict[str, CubeRef], dict[tuple, str], dict[str, NormalForm]]:
    Q = standard_cube(n, inc.large, regime)
    P, ref_of = forget_connections_indexed(Q, inc, probe_cap)
    back = {u.key(): name for name, u in ref_of.items()}
    return P, Q, ref_of, back, standard_monos(n)


def cofree(X: MCSet, inc: FlavorInclusion, cap: int) -> MCSet:
    """Right adjoint to forgetting: n-cubes through the cap are the maps
    from the forgotten standard n-cube of the large flavor into X, with
    the cube-category action given by precomposition."""
    if X.flavor != inc.small:
        raise ComplexError("complex flavor does not match the inclusion source")
    big = inc.large
    # one shared materialization cap so precomposition between probes of
    # different dimensions never leaves the registered range
    probe_cap = max(X.dim, cap) + 2
    probes = {
        n: _forget_probe(n, inc, X.regime, probe_cap) for n in range(cap + 1)
    }

    H: dict[int, list[MCMap]] = {}
    index: dict[int, dict[tuple, int]] = {}

    def key_of(f: MCMap) -> tuple:
        return tuple(sorted((x, r.key()) for x, r in f.assignment.items()))

    for n in range(cap + 1):
        H[n] = enumerate_maps(probes[n][0], X)
        index[n] = {key_of(f): j for j, f in enumerate(H[n])}

    op_cache: dict[NormalForm, MCMap] = {}

    def operator_map(phi: NormalForm) -> MCMap:
        if phi in op_cache:
            return op_cache[phi]
        m, n = phi.source_dim, phi.target_dim
        Pm, _, refm, _, monos_m = probes[m]
        Pn, Qn, _, backn, _ = probes[n]
        assignment: dict[str, CubeRef] = {}
        for name, u in refm.items():
            theta = compose(monos_m[u.base], u.epi)
            e2, m2 = epi_mono_factor(compose(phi, theta))
            v = Qn.evaluate_mono(interior_id(n), m2).pushed(e2)
            acc, w = flavor_ez(Qn, v, inc.small)
            assignment[name] = CubeRef(acc, backn[w.key()])
        out = MCMap(Pm, Pn, assignment)
        op_cache[phi] = out
        return out

    def act(u: MCMap, phi: NormalForm) -> int:
        moved = compose_maps(u, operator_map(phi))
        return index[phi.source_dim][key_of(moved)]

    wit: dict[tuple[int, int], tuple[NormalForm, int]] = {}
    for n in range(1, cap + 1):
        for lo in range(len(H[n - 1])):
            for psi in one_step_epis(n, big):
                j = act(H[n - 1][lo], psi)
                wit.setdefault((n, j), (psi, lo))

    def ez(n: int, j: int) -> tuple[NormalForm, tuple[int, int]]:
        if (n, j) not in wit:
            return identity_nf(n), (n, j)
        psi, lo = wit[(n, j)]
        acc, base = ez(n - 1, lo)
        return compose(acc, psi), base

    ids: dict[tuple[int, int], str] = {}
    cubes: dict[str, int] = {}
    for n in range(cap + 1):
        k = 0
        for j in range(len(H[n])):
            if (n, j) not in wit:
                ids[(n, j)] = f"w{n}.{k}"
                cubes[f"w{n}.{k}"] = n
                k += 1

    faces: dict[tuple[str, int, int], CubeRef] = {}
    for (n, j), name in ids.items():
        for i in range(1, n + 1):
            for eps in (0, 1):
                lo = act(H[n][j], NormalForm(n - 1, ((i, eps),)))
                acc, base = ez(n - 1, lo)
                faces[(name, i, eps)] = CubeRef(acc, ids[base])

    markings = set()
    for (n, j), name in ids.items():
        if not markable(X.regime, n):
            continue
        _, Qn, _, backn, _ = probes[n]
        int_pair = backn[Qn.identity_ref(interior_id(n)).key()]
        if X.is_marked(H[n][j].assignment[int_pair]):
            markings.add(name)

    return make_mcset(big, X.regime, cubes, faces, markings, check=False)


# ---------------------------------------------------------------------------
# Marking adjustments
# ---------------------------------------------------------------------------


def trivialize(X: MCSet, n: int) -> MCSet:
    """Mark every nondegenerate cube of dimension greater than n."""
    if X.regime == "unmarked":
        raise ComplexError("cannot trivialize in the unmarked regime")
    extra = {
        x
        for x, d in X.cubes.items()
        if d > n and markable(X.regime, d)
    }
    return with_markings(X, set(X.markings) | extra, check=False)


def flat(X: MCSet) -> MCSet:
    """Edge-marked to full-marked, marking nothing above dimension one."""
    if X.regime != "edge-marked":
        raise ComplexError("flat starts from the edge-marked regime")
    return MCSet(X.flavor, "full-marked", X.cubes, X.face_table, X.markings)


def sharp(X: MCSet) -> MCSet:
    """Edge-marked to full-marked, marking everything above dimension one."""
    if X.regime != "edge-marked":
        raise ComplexError("sharp starts from the edge-marked regime")
    extra = {x for x, d in X.cubes.items() if d >= 2}
    return MCSet(
        X.flavor, "full-marked", X.cubes, X.face_table,
        X.markings | frozenset(extra),
    )


def core(X: MCSet) -> MCSet:
    """The largest subcomplex whose cubes above dimension one are all
    marked, viewed edge-marked."""
    if X.regime != "full-marked":
        raise ComplexError("core starts from the full-marked regime")
    keep = {
        x for x, d in X.cubes.items() if d <= 1 or x in X.markings
    }
    changed = True
    while changed:
        changed = False
        for x in list(keep):
            n = X.cube_dim(x)
            for i in range(1, n + 1):
                for eps in (0, 1):
                    if X.face(x, i, eps).base not in keep:
                        keep.discard(x)
                        changed = True
                        break
                else:
                    continue
                break
    cubes = {x: d for x, d in X.cubes.items() if x in keep}
    faces = {k: r for k, r in X.face_table.items() if k[0] in keep}
    markings = frozenset(x for x in X.markings if x in keep and X.cubes[x] == 1)
    return make_mcset(X.flavor, "edge-marked", cubes, faces, markings, check=False)


_REGIME_LEVEL = {"full-marked": 2, "edge-marked": 1, "unmarked": 0}


def forget_markings(X: MCSet, target_regime: str) -> MCSet:
    """Drop markings the target regime cannot carry.  Only moves toward
    a weaker regime; enriching is flat or sharp's job."""
    if target_regime not in _REGIME_LEVEL:
        raise ComplexError(f"unknown regime {target_regime!r}")
    if _REGIME_LEVEL[target_regime] > _REGIME_LEVEL[X.regime]:
        raise ComplexError(
            f"cannot forget from {X.regime} to richer {target_regime}"
        )
    markings = frozenset(
        x for x in X.markings if markable(target_regime, X.cubes[x])
    )
    return MCSet(X.flavor, target_regime, X.cubes, X.face_table, markings)


# ---------------------------------------------------------------------------
# Simplicial complexes (the triangulation target)
# ---------------------------------------------------------------------------
#
# Operators of the simplex category are monotone maps [m] -> [n], stored
# as the value tuple (alpha(0), ..., alpha(m)).  Composition is indexing,
# the epi-mono split is image extraction, and elementary faces and
# degeneracies are the usual skip and double maps.


def s_identity(n: int) -> tuple[int, ...]:
    return tuple(range(n + 1))


def s_compose(g: tuple[int, ...], f: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(g[v] for v in f)


def s_face(i: int, n: int) -> tuple[int, ...]:
    """The injection [n-1] -> [n] skipping i."""
    return tuple(v if v < i else v + 1 for v in range(n))


def s_degen(j: int, n: int) -> tuple[int, ...]:
    """The surjection [n] -> [n-1] hitting j twice."""
    return tuple(v if v <= j else v - 1 for v in range(n + 1))


def s_split(alpha: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """alpha == inj . surj with surj onto [k] and inj strictly monotone."""
    img = sorted(set(alpha))
    pos = {v: i for i, v in enumerate(img)}
    return tuple(img), tuple(pos[v] for v in alpha)


def monotone_surjections(r: int, t: int) -> list[tuple[int, ...]]:
    """All monotone surjections [r] ->> [t], by ascent positions."""
    out = []
    for S in itertools.combinations(range(1, r + 1), t):
        vals = [0]
        for i in range(1, r + 1):
            vals.append(vals[-1] + (1 if i in S else 0))
        out.append(tuple(vals))
    return out


@dataclass(frozen=True)
class SimpRef:
    """A presheaf element: a degeneracy applied to a nondegenerate
    simplex id.  The surjection is stored as its value tuple."""

    surj: tuple[int, ...]
    base: str

    def __post_init__(self) -> None:
        if not self.surj or self.surj[0] != 0 or any(
            b - a not in (0, 1) for a, b in zip(self.surj, self.surj[1:])
        ):
            raise ComplexError(f"not a degeneracy tuple: {self.surj}")

    @property
    def dim(self) -> int:
        return len(self.surj) - 1

    @property
    def is_degenerate(self) -> bool:
        return self.surj != s_identity(self.dim)

    def pushed(self, surj: tuple[int, ...]) -> SimpRef:
        return SimpRef(s_compose(self.surj, surj), self.base)

    def key(self) -> tuple:
        return (self.base, self.surj)

    def __str__(self) -> str:
        if not self.is_degenerate:
            return self.base
        return f"{self.base}{list(self.surj)}"


@dataclass(frozen=True)
class MSSet:
    """A finite marked simplicial complex: nondegenerate simplices, a
    face table sending (simplex, vertex index) to a SimpRef, and
    markings on nondegenerate simplices in regime-allowed dimensions."""

    regime: str
    simplices: Mapping[str, int]
    face_table: Mapping[tuple[str, int], SimpRef]
    markings: frozenset[str]

    @property
    def dim(self) -> int:
        return max(self.simplices.values(), default=-1)

    def nondeg(self, n: int) -> list[str]:
        return sorted(x for x, d in self.simplices.items() if d == n)

    def all_nondeg(self) -> list[str]:
        return sorted(self.simplices, key=lambda x: (self.simplices[x], x))

    def simp_dim(self, x: str) -> int:
        try:
            return self.simplices[x]
        except KeyError:
            raise ComplexError(f"no simplex named {x!r}") from None

    def face(self, x: str, i: int) -> SimpRef:
        try:
            return self.face_table[(x, i)]
        except KeyError:
            raise ComplexError(f"no face {i} recorded for {x!r}") from None

    def identity_ref(self, x: str) -> SimpRef:
        return SimpRef(s_identity(self.simp_dim(x)), x)

    def evaluate_inj(self, x: str, inj: tuple[int, ...]) -> SimpRef:
        n = self.simp_dim(x)
        if len(inj) == n + 1:
            return self.identity_ref(x)
        missing = max(v for v in range(n + 1) if v not in inj)
        sub = self.face(x, missing)
        inj2 = tuple(v if v < missing else v - 1 for v in inj)
        return self.apply(sub, inj2)

    def apply(self, ref: SimpRef, alpha: tuple[int, ...]) -> SimpRef:
        beta = s_compose(ref.surj, alpha)
        inj, surj = s_split(beta)
        sub = self.evaluate_inj(ref.base, inj)
        return SimpRef(s_compose(sub.surj, surj), sub.base)

    def elements(self, r: int) -> list[SimpRef]:
        out = []
        for x, t in self.simplices.items():
            if t > r:
                continue
            for s in monotone_surjections(r, t):
                out.append(SimpRef(s, x))
        return out

    def is_marked(self, ref: SimpRef) -> bool:
        if not markable(self.regime, ref.dim):
            return False
        if ref.is_degenerate:
            return True
        return ref.base in self.markings

    def validate(self) -> None:
        if self.regime not in _REGIME_LEVEL:
            raise ComplexError(f"unknown regime {self.regime!r}")
        for (x, i), ref in self.face_table.items():
            if x not in self.simplices:
                raise ComplexError(f"face table names unknown simplex {x!r}")
            n = self.simplices[x]
            if not 0 <= i <= n:
                raise ComplexError(f"face index {i} invalid for {x!r} of dim {n}")
            if ref.base not in self.simplices:
                raise ComplexError(f"face of {x!r} points at unknown {ref.base!r}")
            if ref.surj[-1] != self.simplices[ref.base]:
                raise ComplexError(f"face ref of {x!r} is not onto its base")
            if ref.dim != n - 1:
                raise ComplexError(f"face {i} of {x!r} has dim {ref.dim}, want {n - 1}")
        for x, n in self.simplices.items():
            if n == 0:
                continue
            for i in range(n + 1):
                if (x, i) not in self.face_table:
                    raise ComplexError(f"simplex {x!r} is missing face {i}")
            if n >= 2:
                for j in range(1, n + 1):
                    for i in range(j):
                        left = self.apply(self.face(x, j), s_face(i, n - 1))
                        right = self.apply(self.face(x, i), s_face(j - 1, n - 1))
                        if left != right:
                            raise ComplexError(
                                f"faces {j}/{i} of {x!r} disagree: {left} vs {right}"
                            )
        for x in self.markings:
            if x not in self.simplices:
                raise ComplexError(f"marking names unknown simplex {x!r}")
            if not markable(self.regime, self.simplices[x]):
                raise ComplexError(
                    f"marking on {x!r} of dim {self.simplices[x]} "
                    f"not allowed in {self.regime} regime"
                )

    def summary(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for d in self.simplices.values():
            counts[d] = counts.get(d, 0) + 1
        return counts


def make_msset(
    regime: str,
    simplices: Mapping[str, int],
    face_table: Mapping[tuple[str, int], SimpRef],
    markings: Iterable[str] = (),
    check: bool = True,
) -> MSSet:
    S = MSSet(regime, dict(simplices), dict(face_table), frozenset(markings))
    if check:
        S.validate()
    return S


@dataclass(frozen=True)
class MSMap:
    domain: MSSet
    codomain: MSSet
    assignment: Mapping[str, SimpRef]

    def on_ref(self, ref: SimpRef) -> SimpRef:
        return self.assignment[ref.base].pushed(ref.surj)

    def on_simplex(self, x: str) -> SimpRef:
        return self.assignment[x]

    def validate(self) -> None:
        dom, cod = self.domain, self.codomain
        if dom.regime != cod.regime:
            raise ComplexError(
                f"map crosses regimes: {dom.regime} to {cod.regime}"
            )
        for x in dom.simplices:
            if x not in self.assignment:
                raise ComplexError(f"map misses simplex {x!r}")
        for x, ref in self.assignment.items():
            n = dom.simp_dim(x)
            if ref.base not in cod.simplices:
                raise ComplexError(f"image of {x!r} names unknown {ref.base!r}")
            if ref.dim != n:
                raise ComplexError(f"image of {x!r} has dim {ref.dim}, want {n}")
            if n >= 1:
                for i in range(n + 1):
                    via_image = cod.apply(ref, s_face(i, n))
                    via_face = self.on_ref(dom.face(x, i))
                    if via_image != via_face:
                        raise ComplexError(
                            f"map not natural at {x!r} face {i}: "
                            f"{via_image} vs {via_face}"
                        )
            if x in dom.markings and not cod.is_marked(ref):
                raise ComplexError(f"marked simplex {x!r} maps to unmarked {ref}")


def s_maps_equal(f: MSMap, g: MSMap) -> bool:
    return (
        f.domain.simplices == g.domain.simplices
        and f.codomain.simplices == g.codomain.simplices
        and dict(f.assignment) == dict(g.assignment)
    )


def enumerate_s_maps(
    S1: MSSet,
    S2: MSSet,
    pinned: Mapping[str, SimpRef] | None = None,
    limit: int | None = None,
) -> list[MSMap]:
    """All simplicial maps S1 -> S2, by backtracking over nondegenerate
    simplices in (dimension, id) order."""
    if S1.regime != S2.regime:
        raise ComplexError(
            f"map enumeration crosses regimes: {S1.regime} to {S2.regime}"
        )
    order = S1.all_nondeg()
    pinned = dict(pinned or {})
    out: list[MSMap] = []
    assign: dict[str, SimpRef] = {}
    elements_cache: dict[int, list[SimpRef]] = {}

    def candidates(x: str) -> list[SimpRef]:
        n = S1.simp_dim(x)
        if x in pinned:
            return [pinned[x]]
        if n not in elements_cache:
            elements_cache[n] = S2.elements(n)
        return elements_cache[n]

    def compatible(x: str, cand: SimpRef) -> bool:
        n = S1.simp_dim(x)
        if cand.dim != n:
            return False
        if x in S1.markings and not S2.is_marked(cand):
            return False
        for i in range(n + 1 if n >= 1 else 0):
            want_ref = S1.face(x, i)
            want = assign[want_ref.base].pushed(want_ref.surj)
            got = S2.apply(cand, s_face(i, n))
            if got != want:
                return False
        return True

    def rec(k: int) -> bool:
        if limit is not None and len(out) >= limit:
            return True
        if k == len(order):
            out.append(MSMap(S1, S2, dict(assign)))
            return limit is not None and len(out) >= limit
        x = order[k]
        for cand in candidates(x):
            if compatible(x, cand):
                assign[x] = cand
                if rec(k + 1):
                    return True
                del assign[x]
        return False

    rec(0)
    return out


def _s_iso_shape(S: MSSet) -> tuple:
    dims = sorted(set(S.simplices.values()))
    return tuple(
        (d, len(S.nondeg(d)), sum(1 for x in S.nondeg(d) if x in S.markings))
        for d in dims
    )


def find_s_iso(S1: MSSet, S2: MSSet) -> MSMap | None:
    """An isomorphism S1 -> S2 (dimension- and marking-exact), or None."""
    if S1.regime != S2.regime or _s_iso_shape(S1) != _s_iso_shape(S2):
        return None
    order = S1.all_nondeg()
    assign: dict[str, SimpRef] = {}
    used: set[str] = set()

    def compatible(x: str, y: str) -> bool:
        n = S1.simp_dim(x)
        if (x in S1.markings) != (y in S2.markings):
            return False
        for i in range(n + 1 if n >= 1 else 0):
            want_ref = S1.face(x, i)
            want = assign[want_ref.base].pushed(want_ref.surj)
            if S2.face(y, i) != want:
                return False
        return True

    def rec(k: int) -> bool:
        if k == len(order):
            return True
        x = order[k]
        for y in S2.nondeg(S1.simp_dim(x)):
            if y in used:
                continue
            if compatible(x, y):
                assign[x] = S2.identity_ref(y)
                used.add(y)
                if rec(k + 1):
                    return True
                del assign[x]
                used.discard(y)
        return False

    if rec(0):
        return MSMap(S1, S2, dict(assign))
    return None


def s_isomorphic(S1: MSSet, S2: MSSet) -> bool:
    return find_s_iso(S1, S2) is not None


# ---------------------------------------------------------------------------
# Triangulation
# ---------------------------------------------------------------------------
#
# An r-simplex of the triangulated n-cube is a weak chain of r+1 vertices
# of [1]^n.  Chains decompose coordinatewise: each coordinate is a
# monotone 0/1 sequence, determined by the step at which it flips to 1
# (0 meaning already 1 at the start, r+1 meaning never).  A general
# complex is the colimit of its cubes' triangulations along the face
# table, computed with a union-find per dimension; degeneracy of a class
# is witnessed by an elementary degeneracy from one dimension down, and
# marking is decided per member.


def _weak_chains(k: int, r: int) -> list[tuple[tuple[int, ...], ...]]:
    out = []
    for flips in itertools.product(range(r + 2), repeat=k):
        out.append(
            tuple(
                tuple(1 if p >= t else 0 for t in flips) for p in range(r + 1)
            )
        )
    return out


def _chain_flips(chain: tuple[tuple[int, ...], ...]) -> list[int]:
    r = len(chain) - 1
    k = len(chain[0])
    flips = []
    for i in range(k):
        t = r + 1
        for p in range(r + 1):
            if chain[p][i] == 1:
                t = p
                break
        flips.append(t)
    return flips


def _staircase(chain: tuple[tuple[int, ...], ...]) -> bool:
    """Whether coordinates i_1 < ... < i_r exist flipping at steps
    1, ..., r in order."""
    r = len(chain) - 1
    flips = _chain_flips(chain)
    prev = 0
    for p in range(1, r + 1):
        cands = [i + 1 for i, t in enumerate(flips) if t == p and i + 1 > prev]
        if not cands:
            return False
        prev = min(cands)
    return True


def iota_chain(n: int) -> tuple[tuple[int, ...], ...]:
    """The canonical maximal chain: coordinate i flips at step i."""
    return tuple(
        tuple(1 if p >= i else 0 for i in range(1, n + 1)) for p in range(n + 1)
    )


def _member_marked(
    X: MCSet, x: str, chain: tuple[tuple[int, ...], ...]
) -> bool:
    r = len(chain) - 1
    if r == 0:
        return False
    k = X.cube_dim(x)
    if X.regime == "unmarked":
        return False
    if X.regime == "edge-marked":
        return r == 1 and k == 1 and x in X.markings and chain == ((0,), (1,))
    if not _staircase(chain):
        return True
    return x in X.markings and r == k and chain == iota_chain(k)


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict = {}

    def find(self, a):
        path = []
        while self.parent.setdefault(a, a) != a:
            path.append(a)
            a = self.parent[a]
        for b in path:
            self.parent[b] = a
        return a

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _chain_label(chain: tuple[tuple[int, ...], ...]) -> str:
    return "-".join("".join(str(b) for b in v) or "." for v in chain)


def triangulate_indexed(
    X: MCSet, depth: int | None = None
) -> tuple[MSSet, dict[tuple[str, tuple], SimpRef]]:
    """Triangulate, also returning the table sending every (cube, weak
    chain) pair to its element of the result.  Pairs are enumerated for
    chains of up to max(dim X, depth) + 1 vertices."""
    D = max(X.dim, depth if depth is not None else X.dim)
    uf: dict[int, _UnionFind] = {r: _UnionFind() for r in range(D + 1)}
    pairs: dict[int, list[tuple[str, tuple]]] = {r: [] for r in range(D + 1)}

    for x in X.all_nondeg():
        k = X.cube_dim(x)
        for r in range(D + 1):
            for c in _weak_chains(k, r):
                pairs[r].append((x, c))

    for x in X.all_nondeg():
        k = X.cube_dim(x)
        for i in range(1, k + 1):
            for eps in (0, 1):
                ref = X.face(x, i, eps)
                word = ref.epi.to_word()
                for r in range(D + 1):
                    for c in _weak_chains(k - 1, r):
                        lifted = tuple(
                            v[: i - 1] + (eps,) + v[i - 1 :] for v in c
                        )
                        routed = tuple(eval_poset(word, v) for v in c)
                        uf[r].union((x, lifted), (ref.base, routed))

    members: dict[int, dict[tuple, list[tuple[str, tuple]]]] = {}
    for r in range(D + 1):
        members[r] = {}
        for p in pairs[r]:
            members[r].setdefault(uf[r].find(p), []).append(p)

    wit: dict[tuple[int, tuple], tuple[int, tuple]] = {}
    for r in range(1, D + 1):
        for root in members[r - 1]:
            x, c = root
            for j in range(r):
                pushed = (x, c[: j + 1] + c[j:])
                hi = uf[r].find(pushed)
                wit.setdefault((r, hi), (j, root))

    ids: dict[tuple[int, tuple], str] = {}
    simplices: dict[str, int] = {}
    for r in range(D + 1):
        for root in sorted(members[r]):
            if (r, root) in wit:
                continue
            x, c = root
            name = f"{x}|{_chain_label(c)}"
            if name in simplices:
                k2 = 2
                while f"{name}#{k2}" in simplices:
                    k2 += 1
                name = f"{name}#{k2}"
            ids[(r, root)] = name
            simplices[name] = r

    ez_memo: dict[tuple[int, tuple], SimpRef] = {}

    def ez(r: int, root: tuple) -> SimpRef:
        key = (r, root)
        if key in ez_memo:
            return ez_memo[key]
        if key not in wit:
            out = SimpRef(s_identity(r), ids[key])
        else:
            j, low = wit[key]
            sub = ez(r - 1, low)
            out = SimpRef(s_compose(sub.surj, s_degen(j, r)), sub.base)
        ez_memo[key] = out
        return out

    face_table: dict[tuple[str, int], SimpRef] = {}
    for (r, root), name in ids.items():
        if r == 0:
            continue
        x, c = root
        for i in range(r + 1):
            dropped = c[:i] + c[i + 1 :]
            low = uf[r - 1].find((x, dropped))
            face_table[(name, i)] = ez(r - 1, low)

    markings = set()
    for (r, root), name in ids.items():
        if not markable(X.regime, r):
            continue
        if any(_member_marked(X, x, c) for x, c in members[r][root]):
            markings.add(name)

    S = make_msset(X.regime, simplices, face_table, markings, check=False)
    lookup = {
        p: ez(r, uf[r].find(p)) for r in range(D + 1) for p in pairs[r]
    }
    return S, lookup


def triangulate(X: MCSet, depth: int | None = None) -> MSSet:
    return triangulate_indexed(X, depth)[0]


def _tri_reps(lookup: Mapping[tuple[str, tuple], SimpRef]) -> dict[str, tuple[str, tuple]]:
    """One (cube, chain) member per nondegenerate simplex of a
    triangulation, read off its lookup table."""
    reps: dict[str, tuple[str, tuple]] = {}
    for pair, ref in lookup.items():
        if ref.is_degenerate:
            continue
        if ref.base not in reps or reps[ref.base] > pair:
            reps[ref.base] = pair
    return reps


def triangulate_map(f: MCMap) -> MSMap:
    """Triangulate a map: a class member (cube, chain) goes to the image
    cube with the chain routed through the image's epi part."""
    TX, lookX = triangulate_indexed(f.domain)
    TY, lookY = triangulate_indexed(f.codomain, depth=f.domain.dim)
    assignment: dict[str, SimpRef] = {}
    for name, (x, c) in _tri_reps(lookX).items():
        img = f.on_cube(x)
        word = img.epi.to_word()
        routed = tuple(eval_poset(word, v) for v in c)
        assignment[name] = lookY[(img.base, routed)]
    return MSMap(TX, TY, assignment)


def cubify(S: MSSet, flavor: Flavor, cap: int) -> MCSet:
    """Right adjoint to triangulation: n-cubes through the cap are the
    simplicial maps from the triangulated standard n-cube into S, acted
    on by precomposition.  Cost grows steeply with the cap."""
    if cap >= 4:
        warnings.warn(
            "cubify at cap >= 4 enumerates maps from large complexes",
            RuntimeWarning,
            stacklevel=2,
        )
    probes: dict[int, tuple[MSSet, dict]] = {
        n: triangulate_indexed(standard_cube(n, flavor, S.regime), depth=cap)
        for n in range(cap + 1)
    }

    H: dict[int, list[MSMap]] = {}
    index: dict[int, dict[tuple, int]] = {}

    def key_of(f: MSMap) -> tuple:
        return tuple(sorted((x, r.key()) for x, r in f.assignment.items()))

    for n in range(cap + 1):
        H[n] = enumerate_s_maps(probes[n][0], S)
        index[n] = {key_of(f): j for j, f in enumerate(H[n])}

    op_cache: dict[NormalForm, MSMap] = {}

    def operator_map(phi: NormalForm) -> MSMap:
        if phi in op_cache:
            return op_cache[phi]
        m, n = phi.source_dim, phi.target_dim
        Tm, lookm = probes[m]
        Tn, lookn = probes[n]
        word = phi.to_word()
        monos_m = standard_monos(m)
        assignment: dict[str, SimpRef] = {}
        for name, (x, c) in _tri_reps(lookm).items():
            mono_word = monos_m[x].to_word()
            ambient = tuple(eval_poset(mono_word, v) for v in c)
            routed = tuple(eval_poset(word, v) for v in ambient)
            assignment[name] = lookn[(interior_id(n), routed)]
        out = MSMap(Tm, Tn, assignment)
        op_cache[phi] = out
        return out

    def act(u: MSMap, phi: NormalForm) -> int:
        op = operator_map(phi)
        moved = {
            x: u.on_ref(op.assignment[x]) for x in op.domain.simplices
        }
        return index[phi.source_dim][
            tuple(sorted((x, r.key()) for x, r in moved.items()))
        ]

    wit: dict[tuple[int, int], tuple[NormalForm, int]] = {}
    for n in range(1, cap + 1):
        for lo in range(len(H[n - 1])):
            for psi in one_step_epis(n, flavor):
                j = act(H[n - 1][lo], psi)
                wit.setdefault((n, j), (psi, lo))

    def ez(n: int, j: int) -> tuple[NormalForm, tuple[int, int]]:
        if (n, j) not in wit:
            return identity_nf(n), (n, j)
        psi, lo = wit[(n, j)]
        acc, base = ez(n - 1, lo)
        return compose(acc, psi), base

    ids: dict[tuple[int, int], str] = {}
    cubes: dict[str, int] = {}
    for n in range(cap + 1):
        k = 0
        for j in range(len(H[n])):
            if (n, j) not in wit:
                ids[(n, j)] = f"u{n}.{k}"
                cubes[f"u{n}.{k}"] = n
                k += 1

    faces: dict[tuple[str, int, int], CubeRef] = {}
    for (n, j), name in ids.items():
        for i in range(1, n + 1):
            for eps in (0, 1):
                lo = act(H[n][j], NormalForm(n - 1, ((i, eps),)))
                acc, base = ez(n - 1, lo)
                faces[(name, i, eps)] = CubeRef(acc, ids[base])

    markings = set()
    for (n, j), name in ids.items():
        if not markable(S.regime, n):
            continue
        _, lookn = probes[n]
        iota_ref = lookn[(interior_id(n), iota_chain(n))]
        if S.is_marked(H[n][j].on_ref(iota_ref)):
            markings.add(name)

    return make_mcset(flavor, S.regime, cubes, faces, markings, check=False)
