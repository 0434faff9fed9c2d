"""Finite marked cubical sets as normalized presheaves.

A complex stores only its nondegenerate cubes plus a face table sending
each (cube, elementary face) to a CubeRef: an epi applied to another
nondegenerate cube.  Every element of the presheaf in every dimension is
recovered uniquely in this shape, and the action of an arbitrary
cube-category morphism is computed by composing into the epi part and
re-splitting with the epi-mono factorization.

Markings live on nondegenerate cubes only; degenerate cubes report marked
in any dimension the regime allows, and that is never stored.  The regime
("full-marked" / "edge-marked" / "unmarked") is a validation flag saying
which dimensions may carry markings at all.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .opcalc import (
    Flavor,
    NormalForm,
    all_epis,
    all_monos,
    compose,
    critical_edge,
    epi_mono_factor,
    format_nf,
    identity_nf,
    is_critical_face,
    mono_from_fixed,
)


class ComplexError(ValueError):
    """A structural defect in a complex, map, or construction input."""


REGIMES = ("full-marked", "edge-marked", "unmarked")


def markable(regime: str, dim: int) -> bool:
    if regime == "full-marked":
        return dim >= 1
    if regime == "edge-marked":
        return dim == 1
    return False


@dataclass(frozen=True)
class CubeRef:
    """A presheaf element: an epi applied to a nondegenerate cube id."""

    epi: NormalForm
    base: str

    def __post_init__(self) -> None:
        if not self.epi.is_epi:
            raise ComplexError(f"CubeRef epi part has faces: {format_nf(self.epi)}")

    @property
    def dim(self) -> int:
        return self.epi.source_dim

    @property
    def is_degenerate(self) -> bool:
        return not self.epi.is_identity

    def pushed(self, e: NormalForm) -> CubeRef:
        """self . e for an epi e landing in self's dimension."""
        return CubeRef(compose(self.epi, e), self.base)

    def key(self) -> tuple:
        return (self.base, self.epi.faces, self.epi.conns, self.epi.degens)

    def __str__(self) -> str:
        if self.epi.is_identity:
            return self.base
        return f"{self.base}({format_nf(self.epi)})"


@dataclass(frozen=True)
class MCSet:
    """A finite marked cubical set in one flavor and marking regime."""

    flavor: Flavor
    regime: str
    cubes: Mapping[str, int]
    face_table: Mapping[tuple[str, int, int], CubeRef]
    markings: frozenset[str]

    # -- basic views --------------------------------------------------------

    @property
    def dim(self) -> int:
        return max(self.cubes.values(), default=-1)

    def nondeg(self, n: int) -> list[str]:
        return sorted(x for x, d in self.cubes.items() if d == n)

    def all_nondeg(self) -> list[str]:
        return sorted(self.cubes, key=lambda x: (self.cubes[x], x))

    def cube_dim(self, x: str) -> int:
        if x not in self.cubes:
            raise ComplexError(f"no cube named {x!r}")
        return self.cubes[x]

    def face(self, x: str, i: int, eps: int) -> CubeRef:
        try:
            return self.face_table[(x, i, eps)]
        except KeyError:
            raise ComplexError(f"no face ({i},{eps}) recorded for cube {x!r}") from None

    def identity_ref(self, x: str) -> CubeRef:
        return CubeRef(identity_nf(self.cube_dim(x)), x)

    # -- presheaf action ----------------------------------------------------

    def evaluate_mono(self, x: str, mono: NormalForm) -> CubeRef:
        """x . mono: route a mono through the face table, largest index
        first, splitting off epi parts as they appear."""
        if not mono.is_mono:
            raise ComplexError("evaluate_mono needs a mono")
        if mono.target_dim != self.cube_dim(x):
            raise ComplexError(
                f"mono lands in dim {mono.target_dim}, cube {x!r} has dim {self.cubes[x]}"
            )
        if mono.is_identity:
            return self.identity_ref(x)
        c, e = mono.faces[0]
        rest = NormalForm(mono.source_dim, mono.faces[1:])
        return self.apply(self.face(x, c, e), rest)

    def apply(self, ref: CubeRef, phi: NormalForm) -> CubeRef:
        """ref . phi for an arbitrary morphism phi into ref's dimension."""
        if phi.target_dim != ref.dim:
            raise ComplexError(
                f"morphism lands in dim {phi.target_dim}, ref has dim {ref.dim}"
            )
        whole = compose(ref.epi, phi)
        epi, mono = epi_mono_factor(whole)
        sub = self.evaluate_mono(ref.base, mono)
        return sub.pushed(epi)

    def elements(self, n: int) -> list[CubeRef]:
        """All n-dimensional elements, nondegenerate and degenerate, in
        canonical order."""
        out: list[CubeRef] = []
        for x in self.all_nondeg():
            t = self.cubes[x]
            if t > n:
                continue
            for e in all_epis(n, t, self.flavor):
                out.append(CubeRef(e, x))
        out.sort(key=lambda r: (self.cubes[r.base], r.key()))
        return out

    # -- markings -----------------------------------------------------------

    def is_marked(self, ref: CubeRef) -> bool:
        if not markable(self.regime, ref.dim):
            return False
        if ref.is_degenerate:
            return True
        return ref.base in self.markings

    # -- validation ---------------------------------------------------------

    def validate(self) -> None:
        if self.regime not in REGIMES:
            raise ComplexError(f"unknown regime {self.regime!r}")
        for x, d in self.cubes.items():
            if d < 0:
                raise ComplexError(f"cube {x!r} has negative dimension")
        for (x, i, eps), ref in self.face_table.items():
            if x not in self.cubes:
                raise ComplexError(f"face table names unknown cube {x!r}")
            n = self.cubes[x]
            if not (1 <= i <= n and eps in (0, 1)):
                raise ComplexError(f"face key ({i},{eps}) invalid for cube {x!r} of dim {n}")
            if ref.base not in self.cubes:
                raise ComplexError(f"face of {x!r} points at unknown cube {ref.base!r}")
            if ref.epi.target_dim != self.cubes[ref.base]:
                raise ComplexError(f"face ref epi of {x!r} does not land on its base")
            if ref.dim != n - 1:
                raise ComplexError(f"face ({i},{eps}) of {x!r} has dim {ref.dim}, want {n - 1}")
            if not ref.epi.in_flavor(self.flavor):
                raise ComplexError(f"face ref of {x!r} uses connections outside the flavor")
        for x, n in self.cubes.items():
            for i in range(1, n + 1):
                for eps in (0, 1):
                    if (x, i, eps) not in self.face_table:
                        raise ComplexError(f"cube {x!r} is missing face ({i},{eps})")
        # face-face coherence generates all functoriality via normal forms
        for x, n in self.cubes.items():
            for j in range(2, n + 1):
                for i in range(1, j):
                    for eps_j in (0, 1):
                        for eps_i in (0, 1):
                            left = self.apply(
                                self.face(x, j, eps_j),
                                NormalForm(n - 2, ((i, eps_i),)),
                            )
                            right = self.apply(
                                self.face(x, i, eps_i),
                                NormalForm(n - 2, ((j - 1, eps_j),)),
                            )
                            if left != right:
                                raise ComplexError(
                                    f"faces ({j},{eps_j})/({i},{eps_i}) of {x!r} disagree: "
                                    f"{left} vs {right}"
                                )
        for x in self.markings:
            if x not in self.cubes:
                raise ComplexError(f"marking names unknown cube {x!r}")
            if not markable(self.regime, self.cubes[x]):
                raise ComplexError(
                    f"marking on {x!r} of dim {self.cubes[x]} not allowed in {self.regime} regime"
                )

    def summary(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for d in self.cubes.values():
            counts[d] = counts.get(d, 0) + 1
        return counts

    def __str__(self) -> str:
        counts = self.summary()
        shape = ",".join(f"{counts[d]}@{d}" for d in sorted(counts))
        return f"MCSet[{shape or 'empty'}]"


def make_mcset(
    flavor: Flavor,
    regime: str,
    cubes: Mapping[str, int],
    face_table: Mapping[tuple[str, int, int], CubeRef],
    markings: Iterable[str] = (),
    check: bool = True,
) -> MCSet:
    X = MCSet(flavor, regime, dict(cubes), dict(face_table), frozenset(markings))
    if check:
        X.validate()
    return X


def empty_complex(flavor: Flavor, regime: str = "full-marked") -> MCSet:
    return make_mcset(flavor, regime, {}, {})


def with_flavor(X: MCSet, flavor: Flavor) -> MCSet:
    """Same cells in another flavor; every face epi must fit."""
    for ref in X.face_table.values():
        if not ref.epi.in_flavor(flavor):
            raise ComplexError(
                f"face ref {ref} uses connections outside the target flavor"
            )
    return MCSet(flavor, X.regime, X.cubes, X.face_table, X.markings)


def with_markings(X: MCSet, markings: Iterable[str], check: bool = True) -> MCSet:
    return make_mcset(X.flavor, X.regime, X.cubes, X.face_table, markings, check=check)


def with_regime(X: MCSet, regime: str, check: bool = True) -> MCSet:
    return make_mcset(X.flavor, regime, X.cubes, X.face_table, X.markings, check=check)


def subcomplex(X: MCSet, ids: Iterable[str], check: bool = True) -> MCSet:
    """The regular subcomplex on the given nondegenerate cubes; the set must
    be closed under faces."""
    keep = set(ids)
    for x in keep:
        if x not in X.cubes:
            raise ComplexError(f"no cube named {x!r}")
        for i in range(1, X.cubes[x] + 1):
            for eps in (0, 1):
                b = X.face(x, i, eps).base
                if b not in keep:
                    raise ComplexError(
                        f"cube set not face-closed: {x!r} has face base {b!r} outside it"
                    )
    return make_mcset(
        X.flavor,
        X.regime,
        {x: X.cubes[x] for x in keep},
        {k: v for k, v in X.face_table.items() if k[0] in keep},
        {x for x in X.markings if x in keep},
        check=check,
    )


def generated_subcomplex(X: MCSet, seeds: Iterable[str]) -> MCSet:
    """The smallest regular subcomplex containing the seed cubes."""
    keep: set[str] = set()
    stack = list(seeds)
    while stack:
        x = stack.pop()
        if x in keep:
            continue
        keep.add(x)
        for i in range(1, X.cube_dim(x) + 1):
            for eps in (0, 1):
                stack.append(X.face(x, i, eps).base)
    return subcomplex(X, keep, check=False)


def skeleton(X: MCSet, k: int) -> MCSet:
    """Regular subcomplex of cubes of dimension <= k; empty when k < 0."""
    return subcomplex(X, [x for x, d in X.cubes.items() if d <= k], check=False)


# ---------------------------------------------------------------------------
# Maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MCMap:
    """A map of complexes: a CubeRef in the codomain for each nondegenerate
    domain cube; extended to all elements by naturality."""

    domain: MCSet
    codomain: MCSet
    assignment: Mapping[str, CubeRef]

    def on_ref(self, ref: CubeRef) -> CubeRef:
        image = self.assignment[ref.base]
        return image.pushed(ref.epi)

    def on_cube(self, x: str) -> CubeRef:
        return self.assignment[x]

    def validate(self) -> None:
        dom, cod = self.domain, self.codomain
        if dom.regime != cod.regime:
            raise ComplexError(
                f"map crosses regimes: {dom.regime} to {cod.regime}"
            )
        for x in dom.cubes:
            if x not in self.assignment:
                raise ComplexError(f"map misses cube {x!r}")
        for x, ref in self.assignment.items():
            n = dom.cube_dim(x)
            if ref.base not in cod.cubes:
                raise ComplexError(f"image of {x!r} names unknown cube {ref.base!r}")
            if ref.epi.target_dim != cod.cube_dim(ref.base):
                raise ComplexError(f"image ref of {x!r} does not land on its base")
            if ref.dim != n:
                raise ComplexError(f"image of {x!r} has dim {ref.dim}, want {n}")
            if not ref.epi.in_flavor(cod.flavor):
                raise ComplexError(f"image ref of {x!r} leaves the codomain flavor")
            for i in range(1, n + 1):
                for eps in (0, 1):
                    face_nf = NormalForm(n - 1, ((i, eps),))
                    via_image = cod.apply(ref, face_nf)
                    via_face = self.on_ref(dom.face(x, i, eps))
                    if via_image != via_face:
                        raise ComplexError(
                            f"map not natural at {x!r} face ({i},{eps}): "
                            f"{via_image} vs {via_face}"
                        )
            if x in dom.markings and not cod.is_marked(ref):
                raise ComplexError(f"marked cube {x!r} maps to unmarked {ref}")

    def is_entire(self) -> bool:
        """Identity on cubes, possibly adding markings."""
        if self.domain.cubes != dict(self.codomain.cubes):
            return False
        return all(
            ref.epi.is_identity and ref.base == x for x, ref in self.assignment.items()
        )

    def __str__(self) -> str:
        return f"MCMap[{self.domain} -> {self.codomain}]"


def make_map(
    domain: MCSet,
    codomain: MCSet,
    assignment: Mapping[str, CubeRef],
    check: bool = True,
) -> MCMap:
    f = MCMap(domain, codomain, dict(assignment))
    if check:
        f.validate()
    return f


def identity_map(X: MCSet) -> MCMap:
    return MCMap(X, X, {x: X.identity_ref(x) for x in X.cubes})


def compose_maps(g: MCMap, f: MCMap) -> MCMap:
    if f.codomain is not g.domain and f.codomain.cubes != g.domain.cubes:
        raise ComplexError("maps not composable")
    return MCMap(
        f.domain,
        g.codomain,
        {x: g.on_ref(ref) for x, ref in f.assignment.items()},
    )


def inclusion_map(sub: MCSet, ambient: MCSet) -> MCMap:
    return MCMap(sub, ambient, {x: ambient.identity_ref(x) for x in sub.cubes})


def maps_equal(f: MCMap, g: MCMap) -> bool:
    return f.assignment == dict(g.assignment)


# ---------------------------------------------------------------------------
# Map enumeration and isomorphism search
# ---------------------------------------------------------------------------


def enumerate_maps(
    X: MCSet,
    Y: MCSet,
    pinned: Mapping[str, CubeRef] | None = None,
    limit: int | None = None,
) -> list[MCMap]:
    """All maps X -> Y, by backtracking over nondegenerate cubes of X in
    (dimension, id) order.  ``pinned`` forces part of the assignment.
    Deterministic order; stops early at ``limit`` when given."""
    if X.regime != Y.regime:
        raise ComplexError(
            f"map enumeration crosses regimes: {X.regime} to {Y.regime}"
        )
    order = X.all_nondeg()
    pinned = dict(pinned or {})
    out: list[MCMap] = []
    assign: dict[str, CubeRef] = {}

    elements_cache: dict[int, list[CubeRef]] = {}

    def candidates(x: str) -> list[CubeRef]:
        n = X.cube_dim(x)
        if x in pinned:
            return [pinned[x]]
        if n not in elements_cache:
            elements_cache[n] = Y.elements(n)
        return elements_cache[n]

    def compatible(x: str, cand: CubeRef) -> bool:
        n = X.cube_dim(x)
        if cand.dim != n:
            return False
        if x in X.markings and not Y.is_marked(cand):
            return False
        for i in range(1, n + 1):
            for eps in (0, 1):
                want_ref = X.face(x, i, eps)
                want = assign[want_ref.base].pushed(want_ref.epi)
                got = Y.apply(cand, NormalForm(n - 1, ((i, eps),)))
                if got != want:
                    return False
        return True

    def rec(k: int) -> bool:
        if limit is not None and len(out) >= limit:
            return True
        if k == len(order):
            out.append(MCMap(X, Y, dict(assign)))
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


def _iso_shape(X: MCSet) -> tuple:
    dims = sorted(set(X.cubes.values()))
    return tuple(
        (d, len(X.nondeg(d)), sum(1 for x in X.nondeg(d) if x in X.markings))
        for d in dims
    )


def find_iso(X: MCSet, Y: MCSet) -> MCMap | None:
    """An isomorphism X -> Y (dimension- and marking-exact), or None."""
    if (
        X.flavor != Y.flavor
        or X.regime != Y.regime
        or _iso_shape(X) != _iso_shape(Y)
    ):
        return None
    order = X.all_nondeg()
    assign: dict[str, CubeRef] = {}
    used: set[str] = set()

    def compatible(x: str, y: str) -> bool:
        n = X.cube_dim(x)
        if (x in X.markings) != (y in Y.markings):
            return False
        for i in range(1, n + 1):
            for eps in (0, 1):
                want_ref = X.face(x, i, eps)
                want = assign[want_ref.base].pushed(want_ref.epi)
                if Y.face(y, i, eps) != want:
                    return False
        return True

    def rec(k: int) -> bool:
        if k == len(order):
            return True
        x = order[k]
        for y in Y.nondeg(X.cube_dim(x)):
            if y in used:
                continue
            if compatible(x, y):
                assign[x] = Y.identity_ref(y)
                used.add(y)
                if rec(k + 1):
                    return True
                del assign[x]
                used.discard(y)
        return False

    if rec(0):
        return MCMap(X, Y, dict(assign))
    return None


def isomorphic(X: MCSet, Y: MCSet) -> bool:
    return find_iso(X, Y) is not None


# ---------------------------------------------------------------------------
# Tensor (lax Gray / geometric product)
# ---------------------------------------------------------------------------


def embed_left(nf: NormalForm, extra: int) -> NormalForm:
    """nf tensor id_extra: same blocks at a widened source dimension."""
    return NormalForm(nf.source_dim + extra, nf.faces, nf.conns, nf.degens)


def shift_right(nf: NormalForm, offset: int) -> NormalForm:
    """id_offset tensor nf: all indices move up by offset."""
    return NormalForm(
        nf.source_dim + offset,
        tuple((c + offset, e) for c, e in nf.faces),
        tuple((b + offset, m) for b, m in nf.conns),
        tuple(a + offset for a in nf.degens),
    )


def tensor_nf(phi: NormalForm, psi: NormalForm) -> NormalForm:
    """phi tensor psi on morphisms."""
    return compose(embed_left(phi, psi.target_dim), shift_right(psi, phi.source_dim))


def _pair_ids(X: MCSet, Y: MCSet) -> dict[tuple[str, str], str]:
    names = {
        (x, y): f"{x}*{y}" for x in X.cubes for y in Y.cubes
    }
    if len(set(names.values())) != len(names):
        pairs = sorted(names, key=lambda p: (X.cubes[p[0]] + Y.cubes[p[1]], p))
        names = {p: f"p{k}" for k, p in enumerate(pairs)}
    return names


def tensor(X: MCSet, Y: MCSet) -> MCSet:
    return tensor_indexed(X, Y)[0]


def tensor_indexed(X: MCSet, Y: MCSet) -> tuple[MCSet, dict[tuple[str, str], str]]:
    """The tensor together with its (x, y) -> pair id index.

    Nondegenerate pairs of nondegenerate cubes; a face in the first k
    coordinates acts on the left factor, above k on the right; markings
    when either factor is marked (where the regime allows)."""
    if X.flavor != Y.flavor:
        raise ComplexError("tensor factors must share a flavor")
    if X.regime != Y.regime:
        raise ComplexError("tensor factors must share a regime")
    ids = _pair_ids(X, Y)
    cubes: dict[str, int] = {}
    faces: dict[tuple[str, int, int], CubeRef] = {}
    markings: set[str] = set()
    for (x, y), pid in ids.items():
        k, l = X.cubes[x], Y.cubes[y]
        cubes[pid] = k + l
        for i in range(1, k + 1):
            for eps in (0, 1):
                r = X.face(x, i, eps)
                faces[(pid, i, eps)] = CubeRef(embed_left(r.epi, l), ids[(r.base, y)])
        for i in range(k + 1, k + l + 1):
            for eps in (0, 1):
                r = Y.face(y, i - k, eps)
                faces[(pid, i, eps)] = CubeRef(shift_right(r.epi, k), ids[(x, r.base)])
        if markable(X.regime, k + l) and (x in X.markings or y in Y.markings):
            markings.add(pid)
    XY = make_mcset(X.flavor, X.regime, cubes, faces, markings, check=False)
    return XY, ids


def tensor_map(f: MCMap, g: MCMap) -> MCMap:
    dom, dom_ids = tensor_indexed(f.domain, g.domain)
    cod, cod_ids = tensor_indexed(f.codomain, g.codomain)
    assignment: dict[str, CubeRef] = {}
    for (x, y), pid in dom_ids.items():
        rx, ry = f.assignment[x], g.assignment[y]
        assignment[pid] = CubeRef(
            tensor_nf(rx.epi, ry.epi), cod_ids[(rx.base, ry.base)]
        )
    return MCMap(dom, cod, assignment)


# ---------------------------------------------------------------------------
# Pushouts
# ---------------------------------------------------------------------------


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


@dataclass(frozen=True)
class PushoutResult:
    apex: MCSet
    into_x: MCMap
    into_b: MCMap
    f: MCMap
    g: MCMap

    def induced(self, u: MCMap, v: MCMap) -> MCMap:
        """The universal map out of the apex for u: X -> Q, v: B -> Q with
        u . f == v . g; checked on construction."""
        if not maps_equal(compose_maps(u, self.f), compose_maps(v, self.g)):
            raise ComplexError("induced map needs u.f == v.g")
        P = self.apex
        assignment: dict[str, CubeRef] = {}
        reps: dict[str, tuple[str, str]] = P._pushout_reps  # type: ignore[attr-defined]
        for p in P.cubes:
            side, z = reps[p]
            assignment[p] = u.assignment[z] if side == "X" else v.assignment[z]
        out = MCMap(P, u.codomain, assignment)
        out.validate()
        if not maps_equal(compose_maps(out, self.into_x), u):
            raise ComplexError("induced map does not restrict to u")
        if not maps_equal(compose_maps(out, self.into_b), v):
            raise ComplexError("induced map does not restrict to v")
        return out


def pushout(f: MCMap, g: MCMap, id_prefix: str = "q") -> PushoutResult:
    """The pushout of X <-f- A -g-> B.

    Elements of X and B in each dimension (through the larger of the two
    top dimensions) are identified under the equivalence generated by
    f(a) ~ g(a) over every element a of A; naturality of f and g makes
    the generated relation compatible with the cube-category action, so
    classes carry a well-defined presheaf structure.  Nondegenerate
    classes are those not produced by any one-step epi from below; face
    refs are recovered per class by walking degeneracy witnesses."""
    if f.domain is not g.domain and f.domain.cubes != g.domain.cubes:
        raise ComplexError("pushout needs a shared source complex")
    A, X, B = f.domain, f.codomain, g.codomain
    if X.flavor != B.flavor or X.regime != B.regime:
        raise ComplexError("pushout sides must share flavor and regime")
    D = max(X.dim, B.dim, 0)

    uf = _UnionFind()

    def tag(side: str, ref: CubeRef) -> tuple:
        return (ref.dim, side, ref.key())

    refs_at: dict[int, list[tuple[str, CubeRef]]] = {n: [] for n in range(D + 1)}
    for n in range(D + 1):
        for r in X.elements(n):
            refs_at[n].append(("X", r))
        for r in B.elements(n):
            refs_at[n].append(("B", r))
        for side, r in refs_at[n]:
            uf.find(tag(side, r))
        for a in A.elements(n):
            uf.union(tag("X", f.on_ref(a)), tag("B", g.on_ref(a)))

    hosts = {"X": X, "B": B}

    def class_of(side: str, ref: CubeRef):
        return uf.find(tag(side, ref))

    members: dict = {}
    for n in range(D + 1):
        for side, r in refs_at[n]:
            members.setdefault(class_of(side, r), []).append((side, r))

    # one-step epi reachability marks degenerate classes, lowest dims first
    witness: dict = {}
    for n in range(1, D + 1):
        lower = {c for c in members if c[0] == n - 1}
        steps = [NormalForm(n, (), (), (j,)) for j in range(1, n + 1)]
        steps += [
            NormalForm(n, (), ((j, m),), ())
            for j in range(1, n)
            for m in sorted(X.flavor)
        ]
        for c in sorted(lower):
            side, rep = members[c][0]
            for e in steps:
                above = class_of(side, rep.pushed(e))
                witness.setdefault(above, (c, e))

    nondeg_classes = sorted(c for c in members if c not in witness)
    class_id = {c: f"{id_prefix}{k}" for k, c in enumerate(nondeg_classes)}

    ez_cache: dict = {}

    def ez_class(c) -> CubeRef:
        if c in ez_cache:
            return ez_cache[c]
        if c in class_id:
            out = CubeRef(identity_nf(c[0]), class_id[c])
        else:
            below, e = witness[c]
            out = ez_class(below).pushed(e)
        ez_cache[c] = out
        return out

    cubes: dict[str, int] = {}
    faces: dict[tuple[str, int, int], CubeRef] = {}
    markings: set[str] = set()
    reps: dict[str, tuple[str, str]] = {}
    for c in nondeg_classes:
        pid = class_id[c]
        n = c[0]
        cubes[pid] = n
        id_members = [
            (side, r) for side, r in members[c] if not r.is_degenerate
        ]
        side, rep = id_members[0]
        reps[pid] = (side, rep.base)
        for i in range(1, n + 1):
            for eps in (0, 1):
                host = hosts[side]
                sub = host.apply(rep, NormalForm(n - 1, ((i, eps),)))
                faces[(pid, i, eps)] = ez_class(class_of(side, sub))
        if markable(X.regime, n) and any(
            r.base in hosts[s].markings for s, r in id_members
        ):
            markings.add(pid)

    P = make_mcset(X.flavor, X.regime, cubes, faces, markings, check=False)
    object.__setattr__(P, "_pushout_reps", reps)

    def side_map(side: str, host: MCSet) -> MCMap:
        return MCMap(
            host,
            P,
            {
                z: ez_class(class_of(side, host.identity_ref(z)))
                for z in host.cubes
            },
        )

    return PushoutResult(P, side_map("X", X), side_map("B", B), f, g)


def pushout_product(f: MCMap, g: MCMap, id_prefix: str = "q") -> MCMap:
    """(A >-> X) tensor-pushout (B >-> Y): the induced map from the gluing
    of A tensor Y and X tensor B into X tensor Y.  Both inputs must be
    inclusion-like (injective on nondegenerate cubes with identity refs)."""
    for h in (f, g):
        images = [r for r in h.assignment.values()]
        if any(r.is_degenerate for r in images) or len(
            {r.base for r in images}
        ) != len(images):
            raise ComplexError("pushout_product needs mono (inclusion-like) inputs")
    po = pushout(tensor_map(f, identity_map(g.domain)),
                 tensor_map(identity_map(f.domain), g), id_prefix=id_prefix)
    u = tensor_map(identity_map(f.codomain), g)   # X tensor B -> X tensor Y
    v = tensor_map(f, identity_map(g.codomain))   # A tensor Y -> X tensor Y
    # po glued (A tensor B -> A tensor Y? ordering): f tensor id_B : A@B -> X@B,
    # id_A tensor g : A@B -> A@Y; into_x lands in X@B, into_b in A@Y
    return po.induced(u, v)


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------


def _mono_id(mono: NormalForm) -> str:
    return "int" if mono.is_identity else format_nf(mono)


def standard_monos(n: int) -> dict[str, NormalForm]:
    """Cube id -> defining mono, for the cubes of standard_cube(n)."""
    return {
        _mono_id(m): m for t in range(n + 1) for m in all_monos(t, n)
    }


def standard_cube(n: int, flavor: Flavor, regime: str = "full-marked") -> MCSet:
    """The representable n-cube: one nondegenerate cube per mono into
    [1]^n; faces compose monos, so every face ref is nondegenerate."""
    cubes: dict[str, int] = {}
    faces: dict[tuple[str, int, int], CubeRef] = {}
    for t in range(n + 1):
        for m in all_monos(t, n):
            x = _mono_id(m)
            cubes[x] = t
            for i in range(1, t + 1):
                for eps in (0, 1):
                    sub = compose(m, NormalForm(t - 1, ((i, eps),)))
                    faces[(x, i, eps)] = CubeRef(
                        identity_nf(t - 1), _mono_id(sub)
                    )
    return make_mcset(flavor, regime, cubes, faces, check=False)


def interior_id(n: int) -> str:
    return "int"


def marked_cube(n: int, flavor: Flavor) -> MCSet:
    if n < 1:
        raise ComplexError("marked cube needs dimension >= 1")
    return with_markings(standard_cube(n, flavor), {"int"}, check=False)


def marker(n: int, flavor: Flavor) -> MCMap:
    """The entire map marking the interior of the n-cube."""
    X = standard_cube(n, flavor)
    Y = marked_cube(n, flavor)
    return MCMap(X, Y, {x: Y.identity_ref(x) for x in X.cubes})


def boundary(n: int, flavor: Flavor, regime: str = "full-marked") -> MCSet:
    X = standard_cube(n, flavor, regime)
    return subcomplex(X, [x for x in X.cubes if x != "int"], check=False)


def boundary_inclusion(n: int, flavor: Flavor, regime: str = "full-marked") -> MCMap:
    X = standard_cube(n, flavor, regime)
    return inclusion_map(boundary(n, flavor, regime), X)


def open_box(n: int, i: int, eps: int, flavor: Flavor, regime: str = "full-marked") -> MCSet:
    X = standard_cube(n, flavor, regime)
    missing = _mono_id(mono_from_fixed(n, [(i, eps)]))
    return subcomplex(
        X, [x for x in X.cubes if x not in ("int", missing)], check=False
    )


def comical_cube(n: int, i: int, eps: int, flavor: Flavor) -> MCSet:
    """The n-cube with all critical faces relative to (i, eps) marked."""
    X = standard_cube(n, flavor)
    marks = set()
    for t in range(1, n + 1):
        for m in all_monos(t, n):
            if is_critical_face(m, n, i, eps):
                marks.add(_mono_id(m))
    return with_markings(X, marks, check=False)


def comical_open_box_inclusion(n: int, i: int, eps: int, flavor: Flavor) -> MCMap:
    Y = comical_cube(n, i, eps, flavor)
    missing = _mono_id(mono_from_fixed(n, [(i, eps)]))
    box = subcomplex(Y, [x for x in Y.cubes if x not in ("int", missing)], check=False)
    return inclusion_map(box, Y)


def comical_marking_extension(n: int, i: int, eps: int, flavor: Flavor) -> MCMap:
    """Entire map adding the last unmarked (n-1)-face marking; n >= 2."""
    if n < 2:
        raise ComplexError("comical marking extension needs dimension >= 2")
    base = comical_cube(n, i, eps, flavor)
    all_codim1 = {
        _mono_id(mono_from_fixed(n, [(j, s)]))
        for j in range(1, n + 1)
        for s in (0, 1)
    }
    skip = _mono_id(mono_from_fixed(n, [(i, eps)]))
    dom = with_markings(base, set(base.markings) | (all_codim1 - {skip}), check=False)
    cod = with_markings(base, set(base.markings) | all_codim1, check=False)
    return MCMap(dom, cod, {x: cod.identity_ref(x) for x in dom.cubes})


def _grid_complex(
    flavor: Flavor,
    regime: str,
    vertices: Sequence[str],
    edges: Mapping[str, tuple[str, str]],
    squares: Mapping[str, Mapping[tuple[int, int], str | tuple[str, str]]],
    markings: Iterable[str] = (),
) -> MCSet:
    """Build a low-dimensional complex from explicit gluing data.

    Square faces are given per (i, eps) as either an edge id or a pair
    ("deg", vertex id) for a degenerate edge."""
    cubes: dict[str, int] = {v: 0 for v in vertices}
    faces: dict[tuple[str, int, int], CubeRef] = {}
    for e, (src, dst) in edges.items():
        cubes[e] = 1
        faces[(e, 1, 0)] = CubeRef(identity_nf(0), src)
        faces[(e, 1, 1)] = CubeRef(identity_nf(0), dst)
    sigma = NormalForm(1, (), (), (1,))
    for s, fs in squares.items():
        cubes[s] = 2
        for (i, eps), spec in fs.items():
            if isinstance(spec, tuple):
                faces[(s, i, eps)] = CubeRef(sigma, spec[1])
            else:
                faces[(s, i, eps)] = CubeRef(identity_nf(1), spec)
    return make_mcset(flavor, regime, cubes, faces, markings)


def rezk_complex(flavor: Flavor) -> MCSet:
    """Two marked squares in a row; four outer edges marked, the shared
    middle vertical and the two remaining edges unmarked."""
    return _grid_complex(
        flavor,
        "full-marked",
        vertices=["v00", "v01", "v02", "v10", "v11", "v12"],
        edges={
            "etop0": ("v00", "v01"),
            "etop1": ("v01", "v02"),
            "ebot0": ("v10", "v11"),
            "ebot1": ("v11", "v12"),
            "evl": ("v00", "v10"),
            "evm": ("v01", "v11"),
            "evr": ("v02", "v12"),
        },
        squares={
            "sq0": {(1, 0): "etop0", (1, 1): "ebot0", (2, 0): "evl", (2, 1): "evm"},
            "sq1": {(1, 0): "etop1", (1, 1): "ebot1", (2, 0): "evm", (2, 1): "evr"},
        },
        markings={"sq0", "sq1", "ebot0", "evl", "etop1", "evr"},
    )


def rezk_elementary(flavor: Flavor) -> MCMap:
    """The entire map marking the three unmarked edges."""
    L = rezk_complex(flavor)
    tau = with_markings(L, set(L.markings) | {"etop0", "evm", "ebot1"}, check=False)
    return MCMap(L, tau, {x: tau.identity_ref(x) for x in L.cubes})


def rezk_map(m: int, n: int, flavor: Flavor) -> MCMap:
    """(boundary of the m-cube) hat-tensor (elementary Rezk) hat-tensor
    (boundary of the n-cube)."""
    left = boundary_inclusion(m, flavor)
    right = boundary_inclusion(n, flavor)
    return pushout_product(
        pushout_product(left, rezk_elementary(flavor), id_prefix="rl"),
        right,
        id_prefix="rz",
    )


def inner_cube(n: int, i: int, eps: int, flavor: Flavor) -> tuple[MCSet, MCMap]:
    """The quotient of the unmarked n-cube collapsing the critical edge,
    with the projection map from the cube."""
    if n < 2:
        raise ComplexError("inner cube needs dimension >= 2")
    cube = standard_cube(n, flavor, regime="unmarked")
    edge_id = _mono_id(critical_edge(n, i, eps))
    interval = standard_cube(1, flavor, regime="unmarked")
    point = standard_cube(0, flavor, regime="unmarked")
    edge_map = MCMap(
        interval,
        cube,
        {
            "int": cube.identity_ref(edge_id),
            _mono_id(mono_from_fixed(1, [(1, 0)])): cube.face(edge_id, 1, 0),
            _mono_id(mono_from_fixed(1, [(1, 1)])): cube.face(edge_id, 1, 1),
        },
    )
    collapse = MCMap(
        interval,
        point,
        {
            "int": CubeRef(NormalForm(1, (), (), (1,)), "int"),
            _mono_id(mono_from_fixed(1, [(1, 0)])): point.identity_ref("int"),
            _mono_id(mono_from_fixed(1, [(1, 1)])): point.identity_ref("int"),
        },
    )
    po = pushout(edge_map, collapse, id_prefix="ic")
    return po.apex, po.into_x


def inner_open_box_inclusion(n: int, i: int, eps: int, flavor: Flavor) -> MCMap:
    Q, proj = inner_cube(n, i, eps, flavor)
    missing = _mono_id(mono_from_fixed(n, [(i, eps)]))
    seeds = {
        proj.assignment[x].base
        for x in proj.domain.cubes
        if x not in ("int", missing)
    }
    return inclusion_map(generated_subcomplex(Q, seeds), Q)


def invertible_interval(flavor: Flavor, middle_marked: bool = False) -> MCSet:
    """Two vertices, three nondegenerate edges, two squares exhibiting the
    middle edge as a two-sided inverse; edge-marked regime."""
    return _grid_complex(
        flavor,
        "edge-marked",
        vertices=["a", "b"],
        edges={"f": ("a", "b"), "g": ("b", "a"), "h": ("a", "b")},
        squares={
            "s1": {(1, 0): "f", (1, 1): ("deg", "a"), (2, 0): ("deg", "a"), (2, 1): "g"},
            "s2": {(1, 0): ("deg", "b"), (1, 1): "h", (2, 0): "g", (2, 1): ("deg", "b")},
        },
        markings={"g"} if middle_marked else (),
    )


def saturation_map(flavor: Flavor) -> MCMap:
    """Entire map marking the middle edge of the invertible interval."""
    K = invertible_interval(flavor)
    K2 = invertible_interval(flavor, middle_marked=True)
    return MCMap(K, K2, {x: K2.identity_ref(x) for x in K.cubes})


def three_out_of_four(face_i: int, face_eps: int, flavor: Flavor) -> MCMap:
    """Entire square map marking the last unmarked edge, edge-marked."""
    if not (1 <= face_i <= 2 and face_eps in (0, 1)):
        raise ComplexError("three_out_of_four indexes a face of the square")
    sq = standard_cube(2, flavor, regime="edge-marked")
    all_edges = {x for x, d in sq.cubes.items() if d == 1}
    skip = _mono_id(mono_from_fixed(2, [(face_i, face_eps)]))
    dom = with_markings(sq, all_edges - {skip}, check=False)
    cod = with_markings(sq, all_edges, check=False)
    return MCMap(dom, cod, {x: cod.identity_ref(x) for x in dom.cubes})


def marked_cube_edge(n: int, i: int, eps: int, flavor: Flavor) -> MCSet:
    """The n-cube with its critical edge marked; edge-marked regime."""
    X = standard_cube(n, flavor, regime="edge-marked")
    return with_markings(X, {_mono_id(critical_edge(n, i, eps))}, check=False)


def marked_open_box_inclusion(n: int, i: int, eps: int, flavor: Flavor) -> MCMap:
    Y = marked_cube_edge(n, i, eps, flavor)
    missing = _mono_id(mono_from_fixed(n, [(i, eps)]))
    box = subcomplex(Y, [x for x in Y.cubes if x not in ("int", missing)], check=False)
    return inclusion_map(box, Y)
