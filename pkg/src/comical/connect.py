"""Weak and strong connection structures, built and checked by box filling.

A connection structure on a map f: S -> Y assigns to every cube x of S
and every operator word phi of the larger flavor a value x(phi) in Y,
such that x(id) = f(x), the assignment commutes with the operators the
two flavors share, and x(phi) is marked or degenerate whenever phi is
not the identity.  Packaged up, a structure is exactly a map out of the
forgotten free enlargement of S, so tables here store a genuine complex
map (``gamma``) on an explicitly materialized, capped enlargement.  A
structure is strong when it is closed under composition of words:
x(phi) fed back into the table along psi returns x(phi then psi).
Strong structures on a complex are the same thing as enlargements of
the complex itself to the larger flavor; promote_scs performs that
conversion and hands back the comparison isomorphism.

Synthesis never guesses values.  The value of x on a connection word is
produced as one face of a filler of a comical open box whose remaining
faces are values already known, working word length by word length
against a fibration supplied as a filler oracle.  extend_wcs runs that
cube by cube to push a table from a subcomplex over a whole complex,
synthesize_scs iterates extension and closure into a composition-closed
table, and not_surj_quotient builds the pushout witnessing that values
cannot in general be found inside the image of a non-surjective map.

Dimension caps are honest prefixes: a table with cap c records every
pair through dimension c and nothing above it, while scratch fillers
produced along the way may live one level higher.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .opcalc import (
    FLAVOR_NONE,
    NormalForm,
    all_epis,
    compose,
    format_nf,
    identity_nf,
    is_critical_face,
    mono_fixed_coords,
    mono_from_fixed,
    run_nf,
    tail_form,
)
from .complexes import (
    ComplexError,
    CubeRef,
    MCMap,
    MCSet,
    boundary,
    comical_marking_extension,
    comical_open_box_inclusion,
    compose_maps,
    empty_complex,
    generated_subcomplex,
    identity_map,
    inclusion_map,
    interior_id,
    make_mcset,
    maps_equal,
    marked_cube,
    pushout,
    standard_cube,
    standard_monos,
    subcomplex,
    tensor_indexed,
    tensor_map,
)
from .functors import (
    FlavorInclusion,
    flavor_ez,
    free_connections,
    materialize_forgotten,
)
from .homotopy import FillerOracle, LiftProblem, terminal_map


class SynthesisError(ComplexError):
    """A construction step could not be carried out: an open box has no
    filler, a cap is too small, or a staged construction stalled."""


# ---------------------------------------------------------------------------
# Capped materialization of the free enlargement
# ---------------------------------------------------------------------------


def _capped_pairs(
    S: MCSet, inc: FlavorInclusion, cap: int
) -> tuple[MCSet, MCSet, dict[str, CubeRef], dict[tuple, str]]:
    """The shape a connection table is a map out of: freely enlarge S,
    then forget back down with cubes through exactly the cap.

    Returns (enlargement, materialization, pair table, reverse lookup).
    A pair names a cube of S together with an epi word of the large
    flavor that stays nondegenerate over the small one.
    """
    if S.flavor != inc.small:
        raise ComplexError("complex flavor does not match the inclusion source")
    free = free_connections(S, inc)
    P, ref_of = materialize_forgotten(free, inc, cap)
    back = {u.key(): name for name, u in ref_of.items()}
    return free, P, ref_of, back


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WCSTable:
    """A weak connection structure on the subject map.

    subject is a map f: S -> Y over the small flavor of inc.  gamma is
    the table itself: a map out of the capped materialization of the
    free enlargement of S, sending the pair (x, phi) to the value
    x(phi) in Y.  ref_of and back translate between pair ids and
    elements of the enlargement; cap bounds the dimension of recorded
    pairs.  Construct through make_wcs_table; check with validate_wcs.
    """

    inc: FlavorInclusion
    subject: MCMap
    cap: int
    gamma: MCMap
    free: MCSet
    ref_of: dict[str, CubeRef]
    back: dict[tuple, str]
    _memo: dict = field(default_factory=dict, compare=False, repr=False)

    def value_on(self, ref: CubeRef, phi: NormalForm) -> CubeRef:
        """The value of an element of the subject's domain on an operator
        word of the large flavor (monos and mixed words included)."""
        key = (ref.key(), phi)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if phi.source_dim > self.cap:
            raise ComplexError(
                f"operator word starts above the table cap {self.cap}"
            )
        z = self.free.apply(CubeRef(ref.epi, ref.base), phi)
        acc, cur = flavor_ez(self.free, z, self.inc.small)
        out = self.gamma.on_ref(CubeRef(acc, self.back[cur.key()]))
        self._memo[key] = out
        return out

    def value(self, x: str, phi: NormalForm) -> CubeRef:
        return self.value_on(self.subject.domain.identity_ref(x), phi)

    def pairs(self) -> list[tuple[str, str, NormalForm]]:
        """All recorded (pair id, subject cube, epi word) triples,
        dimension first."""
        return [
            (name, self.ref_of[name].base, self.ref_of[name].epi)
            for name in self.gamma.domain.all_nondeg()
        ]

    def summary(self) -> str:
        S = self.subject.domain
        return (
            f"table on {len(S.cubes)} cube(s), cap {self.cap}, "
            f"{len(self.gamma.domain.cubes)} pair(s)"
        )


def make_wcs_table(
    inc: FlavorInclusion,
    subject: MCMap,
    cap: int,
    values: Callable[[str, NormalForm], CubeRef],
) -> WCSTable:
    """Record a table: values is called once per pair (cube of the
    subject's domain, epi word) and must return an element of the
    subject's codomain.  No validation happens here; run validate_wcs.
    """
    if cap < 0:
        raise ComplexError("table cap must be nonnegative")
    free, P, ref_of, back = _capped_pairs(subject.domain, inc, cap)
    assignment = {}
    for name in P.all_nondeg():
        r = ref_of[name]
        assignment[name] = values(r.base, r.epi)
    gamma = MCMap(P, subject.codomain, assignment)
    return WCSTable(inc, subject, cap, gamma, free, ref_of, back)


def validate_wcs(t: WCSTable) -> list[str]:
    """Every way the table fails to be a weak connection structure.

    The table map is checked as a complex map, which covers operator
    naturality on both sides and the marked-or-degenerate condition on
    values of nonidentity words (those pairs are degenerate over the
    large flavor, hence marked in the materialization).  The identity
    pairs are then compared against the subject.
    """
    problems: list[str] = []
    try:
        t.subject.validate()
    except ComplexError as err:
        problems.append(f"subject is not a complex map: {err}")
    try:
        t.gamma.validate()
    except ComplexError as err:
        problems.append(f"table is not a complex map: {err}")
    S = t.subject.domain
    for x in S.all_nondeg():
        if S.cube_dim(x) > t.cap:
            continue
        pid = t.back.get(t.free.identity_ref(x).key())
        if pid is None:
            problems.append(f"no identity pair recorded for {x!r}")
            continue
        got = t.gamma.assignment[pid]
        want = t.subject.assignment[x]
        if got != want:
            problems.append(
                f"identity pair of {x!r} disagrees with the subject: "
                f"{got} vs {want}"
            )
    return problems


def wcs_from_counit(
    xbar: MCSet, inc: FlavorInclusion, cap: int, f: MCMap | None = None
) -> WCSTable:
    """The tautological table on the forgotten complex: the value of a
    pair is the element of xbar the pair names, re-expressed in the
    capped materialization.  With f omitted the subject is the identity
    and the result is composition closed; otherwise f must be a map out
    of the capped materialization and re-targets the values."""
    if xbar.flavor != inc.large:
        raise ComplexError("complex flavor does not match the inclusion target")
    S, idx = materialize_forgotten(xbar, inc, cap)
    if f is None:
        f = identity_map(S)
    else:
        D = f.domain
        if (
            D.cubes != S.cubes
            or D.face_table != S.face_table
            or D.markings != S.markings
        ):
            raise ComplexError(
                "counit table needs the capped materialization as its domain"
            )
    back_x = {u.key(): name for name, u in idx.items()}

    def values(b: str, e: NormalForm) -> CubeRef:
        z = xbar.apply(idx[b], e)
        acc, cur = flavor_ez(xbar, z, inc.small)
        return f.on_ref(CubeRef(acc, back_x[cur.key()]))

    return make_wcs_table(inc, f, cap, values)


def point_wcs(inc: FlavorInclusion, cap: int, regime: str = "full-marked") -> WCSTable:
    """The unique table on the point."""
    return wcs_from_counit(standard_cube(0, inc.large, regime), inc, cap)


def empty_wcs(inc: FlavorInclusion, Y: MCSet, cap: int) -> WCSTable:
    """The table on the empty subcomplex of Y."""
    E = empty_complex(inc.small, Y.regime)

    def values(b: str, e: NormalForm) -> CubeRef:
        raise ComplexError("the empty table has no pairs")

    return make_wcs_table(inc, MCMap(E, Y, {}), cap, values)


def precompose_wcs(t: WCSTable, h: MCMap) -> WCSTable:
    """Restrict a table along a map into its subject's domain: the new
    subject is subject∘h and the value of (w, phi) is (h w)(phi)."""
    if h.codomain.cubes != t.subject.domain.cubes:
        raise ComplexError("map does not land in the table's subject domain")
    subject = compose_maps(t.subject, h)

    def values(b: str, e: NormalForm) -> CubeRef:
        return t.value_on(h.on_cube(b), e)

    return make_wcs_table(t.inc, subject, t.cap, values)


def postcompose_wcs(t: WCSTable, g: MCMap) -> WCSTable:
    """Push a table forward along a map out of its values' codomain."""
    if g.domain.cubes != t.subject.codomain.cubes:
        raise ComplexError("map does not start at the table's value codomain")
    subject = compose_maps(g, t.subject)
    S = t.subject.domain

    def values(b: str, e: NormalForm) -> CubeRef:
        return g.on_ref(t.value_on(S.identity_ref(b), e))

    return make_wcs_table(t.inc, subject, t.cap, values)


def element_map(X: MCSet, ref: CubeRef) -> MCMap:
    """The characteristic map of an element: the standard cube of its
    dimension onto its faces."""
    n = ref.dim
    S = standard_cube(n, X.flavor, X.regime)
    return MCMap(
        S, X, {b: X.apply(ref, mono) for b, mono in standard_monos(n).items()}
    )


def cube_table(t: WCSTable, x: str) -> WCSTable:
    """The table induced on one cube of the subject's domain."""
    X = t.subject.domain
    return precompose_wcs(t, element_map(X, X.identity_ref(x)))


def boundary_table(t: WCSTable, x: str) -> WCSTable:
    """The table induced on the boundary of one cube of the subject's
    domain."""
    X = t.subject.domain
    n = X.cube_dim(x)
    ch = element_map(X, X.identity_ref(x))
    B = boundary(n, t.inc.small, X.regime)
    h = MCMap(B, X, {b: ch.assignment[b] for b in B.cubes})
    return precompose_wcs(t, h)


def restrict_wcs(t: WCSTable, phi: NormalForm) -> WCSTable:
    """The table induced on a single operator word: the new subject is
    the standard cube carried to the faces of x(phi), and the value on
    psi is x(phi∘psi).  Needs a table on a standard cube."""
    S = t.subject.domain
    n = S.dim
    if S.cubes != standard_cube(n, t.inc.small, S.regime).cubes:
        raise ComplexError("restriction needs a table on a standard cube")
    if phi.target_dim != n:
        raise ComplexError("operator word does not end at the subject cube")
    m = phi.source_dim
    if m > t.cap:
        raise ComplexError(f"operator word starts above the table cap {t.cap}")
    monos = standard_monos(m)
    Y = t.subject.codomain
    y = t.value(interior_id(n), phi)
    Sm = standard_cube(m, t.inc.small, S.regime)
    subject = MCMap(Sm, Y, {b: Y.apply(y, mono) for b, mono in monos.items()})

    def values(b: str, e: NormalForm) -> CubeRef:
        return t.value(interior_id(n), compose(phi, compose(monos[b], e)))

    return make_wcs_table(t.inc, subject, t.cap, values)


# ---------------------------------------------------------------------------
# Degeneracy with respect to a table
# ---------------------------------------------------------------------------


def gamma_degenerate_witness(
    t: WCSTable, ref: CubeRef
) -> tuple[str, NormalForm] | None:
    """A pair (cube of the subject's domain, nonidentity epi word) whose
    value is ref, if one exists.  Witnesses on degenerate elements
    reduce to witnesses on cubes, so only cubes are searched."""
    if ref.dim > t.cap:
        raise ComplexError(f"element dimension exceeds the table cap {t.cap}")
    X = t.subject.domain
    m = ref.dim
    for tdim in range(m):
        for z in X.nondeg(tdim):
            for psi in all_epis(m, tdim, t.inc.large):
                if t.value(z, psi) == ref:
                    return (z, psi)
    return None


def _table_nondeg(t: WCSTable, x: str) -> bool:
    key = ("nondeg", x)
    hit = t._memo.get(key)
    if hit is None:
        hit = gamma_degenerate_witness(t, t.subject.on_cube(x)) is None
        t._memo[key] = hit
    return hit


def ez_decompose_wrt(
    t: WCSTable, ref: CubeRef, verify: bool = False
) -> tuple[str, NormalForm]:
    """Express an element of the subject's codomain as a value x(phi)
    with x a cube the table is nondegenerate on.

    The subject must be an embedding (identity assignment refs with
    distinct bases) so that codomain elements can be recognized as
    subject cubes.  With verify=True all factorizations are enumerated
    and the uniqueness of the answer is asserted."""
    X = t.subject.domain
    for x in X.cubes:
        if not t.subject.assignment[x].epi.is_identity:
            raise ComplexError("decomposition needs an embedded subject")
    if len({t.subject.assignment[x].base for x in X.cubes}) != len(X.cubes):
        raise ComplexError("decomposition needs an embedded subject")
    if ref.dim > t.cap:
        raise ComplexError(f"element dimension exceeds the table cap {t.cap}")
    m = ref.dim
    found: list[tuple[str, NormalForm]] = []
    for tdim in range(m + 1):
        for z in X.nondeg(tdim):
            if not _table_nondeg(t, z):
                continue
            for psi in all_epis(m, tdim, t.inc.large):
                if t.value(z, psi) == ref:
                    found.append((z, psi))
                    if not verify:
                        return found[0]
    if not found:
        raise ComplexError(f"element {ref} is not a value of the table")
    if len(found) > 1:
        (z1, p1), (z2, p2) = found[0], found[1]
        raise ComplexError(
            "factorization is not unique: "
            f"{z1}({format_nf(p1)}) and {z2}({format_nf(p2)}) both give {ref}"
        )
    return found[0]


# ---------------------------------------------------------------------------
# Strong structures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SCSViolation:
    """A witness that a table is not composition closed: feeding the
    value of (x, phi) back in along psi disagrees with the direct value
    on the composite word."""

    x: str
    phi: NormalForm
    psi: NormalForm
    value: CubeRef
    via_value: CubeRef
    direct: CubeRef

    def __str__(self) -> str:
        return (
            f"{self.x}({format_nf(self.phi)}) then {format_nf(self.psi)} "
            f"gives {self.via_value}, direct value is {self.direct}"
        )


def check_scs(t: WCSTable) -> SCSViolation | None:
    """The first failure of composition closure, if any.

    Needs an identity subject, so values are elements of the subject's
    own domain and can be fed back into the table.  Closure for words
    with face or degeneracy parts follows from the table map's
    naturality, so only pairs of epi words are checked."""
    X = t.subject.domain
    if not maps_equal(t.subject, identity_map(X)):
        raise ComplexError("composition check needs a table on a complex")
    for x in X.all_nondeg():
        nx = X.cube_dim(x)
        for m in range(nx, t.cap + 1):
            for phi in all_epis(m, nx, t.inc.large):
                y = t.value(x, phi)
                for k in range(m, t.cap + 1):
                    for psi in all_epis(k, m, t.inc.large):
                        lhs = t.value_on(y, psi)
                        rhs = t.value(x, compose(phi, psi))
                        if lhs != rhs:
                            return SCSViolation(x, phi, psi, y, lhs, rhs)
    return None


def promote_scs(t: WCSTable) -> tuple[MCSet, MCMap]:
    """Convert a composition-closed table on a complex into a complex
    over the large flavor, returning it with the comparison isomorphism
    from the original onto its capped materialization.

    The promoted complex keeps the cubes the table is nondegenerate on;
    every other cube becomes the degeneracy named by its unique
    factorization.  The isomorphism is verified in both directions,
    markings included."""
    X = t.subject.domain
    if not maps_equal(t.subject, identity_map(X)):
        raise ComplexError("promotion needs a table on a complex")
    if t.cap < X.dim:
        raise ComplexError("promotion needs the cap to reach the complex dimension")
    problems = validate_wcs(t)
    if problems:
        raise ComplexError(f"table is not a connection structure: {problems[0]}")
    bad = check_scs(t)
    if bad is not None:
        raise ComplexError(f"table is not composition closed: {bad}")

    dec = {
        x: ez_decompose_wrt(t, X.identity_ref(x), verify=True)
        for x in X.all_nondeg()
    }
    keep = [x for x in X.all_nondeg() if dec[x][1].is_identity]
    kept = set(keep)

    cubes = {x: X.cube_dim(x) for x in keep}
    faces: dict[tuple[str, int, int], CubeRef] = {}
    for x in keep:
        n = X.cube_dim(x)
        for i in range(1, n + 1):
            for eps in (0, 1):
                fr = X.face(x, i, eps)
                b2, phi_b = dec[fr.base]
                faces[(x, i, eps)] = CubeRef(compose(phi_b, fr.epi), b2)
    markings = frozenset(x for x in keep if X.is_marked(X.identity_ref(x)))
    try:
        xbar = make_mcset(t.inc.large, X.regime, cubes, faces, markings)
    except ComplexError as err:
        raise ComplexError(f"promoted faces are incoherent: {err}") from err

    F, idx = materialize_forgotten(xbar, t.inc, X.dim)
    back = {u.key(): name for name, u in idx.items()}
    assignment: dict[str, CubeRef] = {}
    for x in X.all_nondeg():
        b2, phi_b = dec[x]
        pid = back.get(CubeRef(phi_b, b2).key())
        if pid is None:
            raise ComplexError(
                f"factorization of {x!r} is degenerate in the promotion"
            )
        assignment[x] = F.identity_ref(pid)
    iso = MCMap(X, F, assignment)
    iso.validate()

    if len(F.cubes) != len(X.cubes):
        raise ComplexError(
            "promotion is not a bijection: "
            f"{len(X.cubes)} cube(s) against {len(F.cubes)} pair(s)"
        )
    inv_assignment: dict[str, CubeRef] = {}
    for pid in F.all_nondeg():
        u = idx[pid]
        v = t.value(u.base, u.epi) if u.base in kept else None
        if v is None or not v.epi.is_identity:
            raise ComplexError(f"pair {pid!r} is not the image of a cube")
        inv_assignment[pid] = X.identity_ref(v.base)
    inv = MCMap(F, X, inv_assignment)
    inv.validate()
    if not maps_equal(compose_maps(inv, iso), identity_map(X)):
        raise ComplexError("promotion comparison is not a left inverse")
    if not maps_equal(compose_maps(iso, inv), identity_map(F)):
        raise ComplexError("promotion comparison is not a right inverse")
    for x in X.all_nondeg():
        mx = X.is_marked(X.identity_ref(x))
        mf = F.is_marked(assignment[x])
        if mx != mf:
            raise ComplexError(f"promotion changes the marking of {x!r}")
    return xbar, iso


def promote_scs_map(
    f: MCMap, tx: WCSTable, ty: WCSTable
) -> tuple[MCMap, tuple[MCSet, MCMap], tuple[MCSet, MCMap]]:
    """Promote a map between complexes carrying composition-closed
    tables.  f must intertwine the tables entrywise; the result is the
    induced map between the promotions, returned with both promotions.
    """
    if f.domain.cubes != tx.subject.domain.cubes:
        raise ComplexError("map does not start at the first table's complex")
    if f.codomain.cubes != ty.subject.domain.cubes:
        raise ComplexError("map does not land in the second table's complex")
    for name, b, e in tx.pairs():
        lhs = f.on_ref(tx.gamma.assignment[name])
        rhs = ty.value_on(f.on_cube(b), e)
        if lhs != rhs:
            raise ComplexError(
                f"map does not intertwine the tables at {b}({format_nf(e)}): "
                f"{lhs} vs {rhs}"
            )
    xbar, iso_x = promote_scs(tx)
    ybar, iso_y = promote_scs(ty)
    Y = ty.subject.domain
    assignment: dict[str, CubeRef] = {}
    for x in xbar.cubes:
        v = f.on_cube(x)
        c2, phi_c = ez_decompose_wrt(ty, Y.identity_ref(v.base), verify=True)
        assignment[x] = CubeRef(compose(phi_c, v.epi), c2)
    fbar = MCMap(xbar, ybar, assignment)
    fbar.validate()
    return fbar, (xbar, iso_x), (ybar, iso_y)


# ---------------------------------------------------------------------------
# Approximation tables
# ---------------------------------------------------------------------------


def _approx_sort_key(key: tuple[NormalForm, int, int, int]) -> tuple:
    psi, j, q, mu = key
    return (psi.source_dim + q, tuple(psi.conns), j, q, mu)


@dataclass(frozen=True)
class ApproximationTable:
    """Scratch cubes recorded while synthesizing values on connection
    words.  The entry at (psi, j, q, mu) approximates the value of the
    subject cube on psi followed by the run of q connections of sign mu
    in slots j..j+q-1: inside the run's inner band its faces repeat the
    previous entry of the run, every other face is the true value on
    the composed word, and entries with q >= 1 are marked."""

    table: WCSTable
    cubes: dict[tuple[NormalForm, int, int, int], CubeRef]

    def lookup(self, psi: NormalForm, j: int, q: int, mu: int) -> CubeRef:
        return self.cubes[(psi, j, q, mu)]


def validate_approx(a: ApproximationTable, strict: bool = False) -> list[str]:
    """Every way the scratch table fails its face and marking contract.
    strict also demands markings on the q = 0 entries, which are merely
    face-level approximations of true values and need not be marked."""
    t = a.table
    n = t.subject.domain.dim
    E = t.subject.codomain
    problems: list[str] = []
    for key in sorted(a.cubes, key=_approx_sort_key):
        psi, j, q, mu = key
        cube = a.cubes[key]
        D = psi.source_dim + q
        label = f"({format_nf(psi)}, j={j}, q={q}, mu={mu})"
        if cube.dim != D:
            problems.append(f"entry {label} has dimension {cube.dim}, wanted {D}")
            continue
        word = compose(psi, run_nf(D, j, q, mu))
        for r in range(1, D + 1):
            for eps in (0, 1):
                got = E.apply(cube, mono_from_fixed(D, [(r, eps)]))
                if q >= 1 and j + 1 <= r <= j + q and eps == mu:
                    prev = a.cubes.get((psi, j, q - 1, mu))
                    if prev is None:
                        problems.append(f"entry {label} lacks its run predecessor")
                        continue
                    want = prev
                else:
                    want = t.value(
                        interior_id(n),
                        compose(word, mono_from_fixed(D, [(r, eps)])),
                    )
                if got != want:
                    problems.append(
                        f"entry {label} face ({r},{eps}) is {got}, wanted {want}"
                    )
        if (q >= 1 or strict) and not E.is_marked(cube):
            problems.append(f"entry {label} is not marked")
    return problems


# ---------------------------------------------------------------------------
# Synthesis on one cube
# ---------------------------------------------------------------------------


def _map_key(m: MCMap) -> tuple:
    return tuple(sorted((x, r.key()) for x, r in m.assignment.items()))


def _mono_split(
    delta: NormalForm, avoid: tuple[int, int]
) -> tuple[tuple[int, int], NormalForm]:
    """Factor a mono as one codimension-1 face (not the avoided one)
    followed by the rest: delta = face∘rest."""
    D = delta.target_dim
    fixed = mono_fixed_coords(delta)
    for c, e in fixed:
        if (c, e) == avoid:
            continue
        rest_pairs = [
            (p - 1 if p > c else p, v) for p, v in fixed if (p, v) != (c, e)
        ]
        return (c, e), mono_from_fixed(D - 1, rest_pairs)
    raise ComplexError("mono fixes nothing but the avoided coordinate")


def synthesize_on_cube(
    xmap: MCMap,
    gamma_bd: WCSTable,
    gamma_fx: WCSTable,
    oracle: FillerOracle,
    cap: int,
) -> tuple[WCSTable, ApproximationTable]:
    """Values of one cube on every connection word through the cap,
    produced by comical box filling against the oracle's fibration.

    xmap is the characteristic map of the cube into the fibration's
    total complex, gamma_bd a table on its boundary, gamma_fx a table
    under the fibration on the whole cube; the three must agree where
    they overlap.  Values are harvested word length by word length: the
    value on a word with terminal run gamma_{j:q,mu} is the (j,mu)-face
    of a filler one dimension up whose inner band repeats the run's
    recorded approximation, so gamma_fx must extend one level above the
    cap whenever correction boxes occur.  Each new value is checked to
    project to gamma_fx and to be marked, marking it through the
    marking-extension family when the complex supports it.  Returns the
    table on the cube and the approximations used to build it.
    """
    inc = gamma_bd.inc
    if gamma_fx.inc != inc:
        raise ComplexError("boundary and base tables use different inclusions")
    if inc.small != FLAVOR_NONE:
        raise ComplexError("synthesis runs over the connection-free source flavor")
    large = inc.large
    small = inc.small

    p_map = oracle.p
    E = p_map.domain
    B = p_map.codomain
    if E.regime != "full-marked":
        raise ComplexError("box filling needs the full marking regime")

    S = xmap.domain
    n = S.dim
    regime = E.regime
    Sn = standard_cube(n, small, regime)
    if S.cubes != Sn.cubes or S.face_table != Sn.face_table:
        raise ComplexError("synthesis needs the characteristic map of a cube")
    for b, r in xmap.assignment.items():
        if r.base not in E.cubes:
            raise ComplexError(f"cube image {r} is not in the fibration's total complex")

    if cap < n:
        raise SynthesisError(f"cap {cap} is below the cube dimension {n}")
    if gamma_bd.cap < cap:
        raise SynthesisError(
            f"boundary table cap {gamma_bd.cap} is below the requested cap {cap}"
        )
    need_fx = cap + 1 if (n >= 1 and cap > n) else cap
    if gamma_fx.cap < need_fx:
        raise SynthesisError(
            f"base table cap {gamma_fx.cap} is below {need_fx}: correction "
            "boxes one level above the cap take their projected values from it"
        )

    monos_n = standard_monos(n)
    for b in Sn.cubes:
        if b == interior_id(n):
            continue
        if gamma_bd.subject.assignment.get(b) != xmap.assignment[b]:
            raise ComplexError(f"boundary table disagrees with the cube at {b!r}")
    for b in Sn.cubes:
        want = p_map.on_ref(xmap.assignment[b])
        if gamma_fx.subject.assignment.get(b) != want:
            raise ComplexError(f"base table disagrees with the projected cube at {b!r}")
    for name, b, e in gamma_bd.pairs():
        lhs = p_map.on_ref(gamma_bd.gamma.assignment[name])
        rhs = gamma_fx.value(b, e)
        if lhs != rhs:
            raise ComplexError(
                f"boundary table does not project to the base table at "
                f"{b}({format_nf(e)}): {lhs} vs {rhs}"
            )

    Zn = standard_cube(n, large, regime)
    val: dict[NormalForm, CubeRef] = {identity_nf(n): xmap.assignment[interior_id(n)]}
    app: dict[tuple[NormalForm, int, int, int], CubeRef] = {}
    memo: dict[tuple, MCMap] = {}

    def value_of(phi: NormalForm) -> CubeRef:
        z = Zn.apply(Zn.identity_ref(interior_id(n)), phi)
        acc, cur = flavor_ez(Zn, z, small)
        if cur.base == interior_id(n):
            base_val = val.get(cur.epi)
            if base_val is None:
                raise SynthesisError(
                    f"internal scheduling error: value on {format_nf(cur.epi)} "
                    "is not yet available"
                )
        else:
            base_val = gamma_bd.value(cur.base, cur.epi)
        return oracle.p.domain.apply(base_val, acc)

    def base_values(D: int, word: NormalForm) -> dict[str, CubeRef]:
        return {
            zid: gamma_fx.value(interior_id(n), compose(word, mono))
            for zid, mono in standard_monos(D).items()
        }

    def check_premise(u: MCMap, D: int, i: int, eps: int, label: str) -> None:
        live = oracle.p.domain
        for bid, mono in standard_monos(D).items():
            if bid not in u.assignment:
                continue
            if not is_critical_face(mono, D, i, eps):
                continue
            if not live.is_marked(u.assignment[bid]):
                raise SynthesisError(
                    f"open box toward {label} has an unmarked critical face {bid!r}"
                )

    def fill_box(
        D: int,
        i: int,
        eps: int,
        face_of: Callable[[int, int], CubeRef],
        word: NormalForm,
        label: str,
    ) -> CubeRef:
        g = comical_open_box_inclusion(D, i, eps, small)
        live = oracle.p.domain
        assignment: dict[str, CubeRef] = {}
        for bid in g.domain.cubes:
            (c, e), rest = _mono_split(standard_monos(D)[bid], (i, eps))
            assignment[bid] = live.apply(face_of(c, e), rest)
        u = MCMap(g.domain, live, assignment)
        v = MCMap(g.codomain, oracle.p.codomain, base_values(D, word))
        key = ("box", D, i, eps, _map_key(u), _map_key(v))
        hit = memo.get(key)
        if hit is not None:
            return hit.on_cube(interior_id(D))
        problem = LiftProblem(g, u, v, oracle.p)
        try:
            u.validate()
            v.validate()
            problem.validate()
        except ComplexError as err:
            raise SynthesisError(f"open box toward {label} is incoherent: {err}") from err
        check_premise(u, D, i, eps, label)
        h = oracle.lift(problem)
        if h is None:
            raise SynthesisError(
                f"no filler for the ({i},{eps}) box at dimension {D} toward {label}"
            )
        memo[key] = h
        return h.on_cube(interior_id(D))

    def justify_marking(
        D: int, i: int, eps: int, filler: CubeRef, word: NormalForm, label: str
    ) -> None:
        g = comical_marking_extension(D, i, eps, small)
        live = oracle.p.domain
        u = MCMap(
            g.domain,
            live,
            {bid: live.apply(filler, mono) for bid, mono in standard_monos(D).items()},
        )
        v = MCMap(g.codomain, oracle.p.codomain, base_values(D, word))
        problem = LiftProblem(g, u, v, oracle.p)
        try:
            u.validate()
            v.validate()
            problem.validate()
        except ComplexError as err:
            raise SynthesisError(
                f"marking justification for {label} is incoherent: {err}"
            ) from err
        h = oracle.lift(problem)
        if h is None:
            raise SynthesisError(f"marking justification failed for {label}")

    for k in range(1, cap - n + 1):
        words = [w for w in all_epis(n + k, n, large) if not w.degens]
        tails = {}
        for w in words:
            tf = tail_form(w)
            tails[(tf.psi, tf.j, tf.q, tf.mu)] = tf

        first = [tf for tf in tails.values() if tf.q == 1]
        first.sort(key=lambda tf: (tuple(tf.psi.conns), tf.j, tf.mu))
        for tf in first:
            D = n + k
            whole = tf.whole()
            label = f"x({format_nf(whole)})"
            miss = (tf.j + 1, tf.mu)

            def face_of(c: int, e: int, _w=whole, _D=D) -> CubeRef:
                return value_of(compose(_w, mono_from_fixed(_D, [(c, e)])))

            filler = fill_box(D, miss[0], miss[1], face_of, whole, label)
            app[(tf.psi, tf.j, 1, tf.mu)] = filler
            app[(tf.psi, tf.j, 0, tf.mu)] = oracle.p.domain.apply(
                filler, mono_from_fixed(D, [miss])
            )

        second = sorted(
            tails.values(),
            key=lambda tf: (
                -tf.maximal_index,
                -tf.q,
                tuple(tf.psi.conns),
                tf.j,
                tf.mu,
            ),
        )
        for tf in second:
            D = n + k + 1
            word_plus = compose(
                tf.psi, run_nf(tf.psi.source_dim + tf.q + 1, tf.j, tf.q + 1, tf.mu)
            )
            whole = tf.whole()
            label = f"x({format_nf(whole)})"
            inner = app[(tf.psi, tf.j, tf.q, tf.mu)]
            lo, hi = tf.j + 1, tf.j + tf.q + 1

            def face_of(
                c: int, e: int, _w=word_plus, _D=D, _in=inner, _lo=lo, _hi=hi, _mu=tf.mu
            ) -> CubeRef:
                if _lo <= c <= _hi and e == _mu:
                    return _in
                return value_of(compose(_w, mono_from_fixed(_D, [(c, e)])))

            filler = fill_box(D, tf.j, tf.mu, face_of, word_plus, label)
            app[(tf.psi, tf.j, tf.q + 1, tf.mu)] = filler
            live = oracle.p.domain
            value = live.apply(filler, mono_from_fixed(D, [(tf.j, tf.mu)]))
            val[whole] = value

            want = gamma_fx.value(interior_id(n), whole)
            got = oracle.p.on_ref(value)
            if got != want:
                raise SynthesisError(
                    f"{label} projects to {got}, the base table wants {want}"
                )
            if not live.is_marked(value):
                justify_marking(D, tf.j, tf.mu, filler, word_plus, label)
                if not oracle.p.domain.is_marked(value):
                    raise SynthesisError(f"{label} is still unmarked after extension")

    E_final = oracle.p.domain
    subject = MCMap(S, E_final, dict(xmap.assignment))

    def table_values(b: str, e: NormalForm) -> CubeRef:
        if b == interior_id(n):
            return val[e]
        return gamma_bd.value(b, e)

    table = make_wcs_table(inc, subject, cap, table_values)
    problems = validate_wcs(table)
    if problems:
        raise SynthesisError(f"synthesized table is invalid: {problems[0]}")
    approx = ApproximationTable(table, dict(app))
    problems = validate_approx(approx)
    if problems:
        raise SynthesisError(f"synthesized approximations are invalid: {problems[0]}")
    for name, b, e in table.pairs():
        lhs = oracle.p.on_ref(table.gamma.assignment[name])
        rhs = gamma_fx.value(b, e)
        if lhs != rhs:
            raise SynthesisError(
                f"synthesized table does not project to the base table at "
                f"{b}({format_nf(e)}): {lhs} vs {rhs}"
            )
    return table, approx


# ---------------------------------------------------------------------------
# Extension over a complex
# ---------------------------------------------------------------------------


def _require_embedding(j: MCMap, what: str) -> dict[str, str]:
    image: dict[str, str] = {}
    for w in j.domain.cubes:
        r = j.assignment[w]
        if not r.epi.is_identity:
            raise ComplexError(f"{what} needs a regular inclusion")
        image[w] = r.base
    if len(set(image.values())) != len(image):
        raise ComplexError(f"{what} needs a regular inclusion")
    return image


def extend_wcs(
    j_map: MCMap,
    f_map: MCMap,
    oracle: FillerOracle,
    gamma_fj: WCSTable,
    gamma_z: WCSTable,
    cap: int,
) -> WCSTable:
    """Extend a table along an inclusion of complexes.

    j_map: W -> X is the inclusion, f_map: X -> Y lands in the oracle's
    total complex, gamma_fj is the given table on f∘j, and gamma_z is a
    composition-closed identity table on the oracle's base (one level
    above the cap, to feed correction boxes).  Values on cubes outside
    W are synthesized in dimension order; cubes above the cap carry no
    pairs and are skipped.  The result projects to gamma_z entrywise.
    """
    inc = gamma_fj.inc
    if gamma_z.inc != inc:
        raise ComplexError("given and base tables use different inclusions")
    if inc.small != FLAVOR_NONE:
        raise ComplexError("synthesis runs over the connection-free source flavor")

    X = f_map.domain
    if j_map.codomain.cubes != X.cubes:
        raise ComplexError("inclusion does not land in the extension's complex")
    image = _require_embedding(j_map, "extension")
    Z = oracle.p.codomain
    if not maps_equal(gamma_z.subject, identity_map(gamma_z.subject.domain)):
        raise ComplexError("base table must be an identity table")
    if gamma_z.subject.domain.cubes != Z.cubes:
        raise ComplexError("base table does not live on the oracle's base")
    for b, r in f_map.assignment.items():
        if r.base not in oracle.p.domain.cubes:
            raise ComplexError(
                f"extension image {r} is not in the fibration's total complex"
            )
    for w in j_map.domain.cubes:
        want = f_map.on_ref(j_map.assignment[w])
        if gamma_fj.subject.assignment.get(w) != want:
            raise ComplexError(f"given table disagrees with the inclusion at {w!r}")
    if gamma_fj.cap < cap:
        raise SynthesisError(
            f"given table cap {gamma_fj.cap} is below the requested cap {cap}"
        )
    if gamma_z.cap < cap + 1:
        raise SynthesisError(
            f"base table cap {gamma_z.cap} is below {cap + 1}: correction "
            "boxes one level above the cap take their projected values from it"
        )
    for name, w, e in gamma_fj.pairs():
        lhs = oracle.p.on_ref(gamma_fj.gamma.assignment[name])
        rhs = gamma_z.value_on(oracle.p.on_ref(gamma_fj.subject.assignment[w]), e)
        if lhs != rhs:
            raise ComplexError(
                f"given table does not project to the base table at "
                f"{w}({format_nf(e)}): {lhs} vs {rhs}"
            )

    vals: dict[tuple[str, NormalForm], CubeRef] = {}
    for name, w, e in gamma_fj.pairs():
        vals[(image[w], e)] = gamma_fj.gamma.assignment[name]

    if set(image.values()) == set(X.cubes):
        def carried(b: str, e: NormalForm) -> CubeRef:
            return vals[(b, e)]

        return make_wcs_table(
            inc, MCMap(X, f_map.codomain, dict(f_map.assignment)), cap, carried
        )

    ZX = free_connections(X, inc)

    def value_on_X(r: CubeRef, word: NormalForm) -> CubeRef:
        z = ZX.apply(CubeRef(r.epi, r.base), word)
        acc, cur = flavor_ez(ZX, z, inc.small)
        base_val = vals.get((cur.base, cur.epi))
        if base_val is None:
            raise SynthesisError(
                f"internal scheduling error: value on {cur} is not yet available"
            )
        return oracle.p.domain.apply(base_val, acc)

    covered = set(image.values())
    for x in X.all_nondeg():
        if x in covered:
            continue
        nx = X.cube_dim(x)
        if nx > cap:
            continue
        Y_live = oracle.p.domain
        monos = standard_monos(nx)
        fx = f_map.on_cube(x)
        xmap = MCMap(
            standard_cube(nx, inc.small, Y_live.regime),
            Y_live,
            {mid: Y_live.apply(fx, mono) for mid, mono in monos.items()},
        )
        Bn = boundary(nx, inc.small, Y_live.regime)
        bd_subject = MCMap(Bn, Y_live, {mid: xmap.assignment[mid] for mid in Bn.cubes})

        def bd_values(b: str, e: NormalForm, _x=x, _monos=monos) -> CubeRef:
            return value_on_X(X.evaluate_mono(_x, _monos[b]), e)

        gamma_bd = make_wcs_table(inc, bd_subject, cap, bd_values)
        gfx = oracle.p.on_ref(fx)
        gamma_fx = precompose_wcs(gamma_z, element_map(gamma_z.subject.domain, gfx))
        tbl, _ = synthesize_on_cube(xmap, gamma_bd, gamma_fx, oracle, cap)
        for name, b, e in tbl.pairs():
            if b == interior_id(nx):
                vals[(x, e)] = tbl.gamma.assignment[name]

    Y_final = oracle.p.domain
    subject = MCMap(X, Y_final, dict(f_map.assignment))

    def final_values(b: str, e: NormalForm) -> CubeRef:
        return vals[(b, e)]

    out = make_wcs_table(inc, subject, cap, final_values)
    problems = validate_wcs(out)
    if problems:
        raise SynthesisError(f"extended table is invalid: {problems[0]}")
    for name, b, e in out.pairs():
        lhs = oracle.p.on_ref(out.gamma.assignment[name])
        rhs = gamma_z.value_on(oracle.p.on_ref(subject.assignment[b]), e)
        if lhs != rhs:
            raise SynthesisError(
                f"extended table does not project to the base table at "
                f"{b}({format_nf(e)}): {lhs} vs {rhs}"
            )
    return out


# ---------------------------------------------------------------------------
# Strong structure synthesis
# ---------------------------------------------------------------------------


def synthesize_scs(
    incl: MCMap,
    oracle: FillerOracle,
    gamma_x: WCSTable,
    gamma_z: WCSTable,
    cap: int,
) -> WCSTable:
    """A composition-closed table on the oracle's total complex
    extending a given one on a subcomplex.

    Works in rounds: extend the current table over the skeleton of the
    next level, then close the covered region under the values' own
    operator words, factoring each newly covered cube through the table
    it came from.  The oracle's total complex may grow while filling;
    rounds continue until the region through the cap is stable.  Fails
    loudly if a round adds no coverage while cubes remain."""
    inc = gamma_x.inc
    if gamma_z.inc != inc:
        raise ComplexError("given and base tables use different inclusions")
    if inc.small != FLAVOR_NONE:
        raise ComplexError("synthesis runs over the connection-free source flavor")
    large = inc.large

    if incl.domain.cubes != gamma_x.subject.domain.cubes:
        raise ComplexError("given table does not live on the inclusion's domain")
    if not maps_equal(gamma_x.subject, identity_map(gamma_x.subject.domain)):
        raise ComplexError("given table must be an identity table")
    image = _require_embedding(incl, "strong synthesis")
    for w in incl.domain.cubes:
        if incl.assignment[w].base not in oracle.p.domain.cubes:
            raise ComplexError("inclusion does not land in the oracle's total complex")
    if gamma_x.cap < cap:
        raise SynthesisError(
            f"given table cap {gamma_x.cap} is below the requested cap {cap}"
        )
    if gamma_z.cap < cap + 1:
        raise SynthesisError(f"base table cap {gamma_z.cap} is below {cap + 1}")
    bad = check_scs(gamma_x)
    if bad is not None:
        raise ComplexError(f"given table is not composition closed: {bad}")
    bad = check_scs(gamma_z)
    if bad is not None:
        raise ComplexError(f"base table is not composition closed: {bad}")

    vals: dict[tuple[str, NormalForm], CubeRef] = {}
    for name, b, e in gamma_x.pairs():
        vals[(image[b], e)] = incl.on_ref(gamma_x.gamma.assignment[name])
    covered = set(image.values())

    def conn_epis(d: int, td: int) -> list[NormalForm]:
        return [e for e in all_epis(d, td, large) if not e.degens]

    for stage in range(cap + 17):
        Y_live = oracle.p.domain
        n_level = min(stage, cap)
        target = covered | {
            y for y in Y_live.cubes if Y_live.cube_dim(y) <= n_level
        }
        if target == covered and n_level == cap:
            break
        W = subcomplex(Y_live, sorted(target))
        prev = subcomplex(Y_live, sorted(covered), check=False)
        given = make_wcs_table(
            inc,
            inclusion_map(prev, Y_live),
            cap,
            lambda b, e: vals[(b, e)],
        )
        t_W = extend_wcs(
            inclusion_map(prev, W),
            inclusion_map(W, Y_live),
            oracle,
            given,
            gamma_z,
            cap,
        )
        for name, b, e in t_W.pairs():
            vals[(b, e)] = t_W.gamma.assignment[name]
        Y_grown = t_W.subject.codomain
        bases = {r.base for r in t_W.gamma.assignment.values()} | set(W.cubes)
        region = generated_subcomplex(Y_grown, sorted(bases))
        for y in region.all_nondeg():
            dy = region.cube_dim(y)
            if (y, identity_nf(dy)) in vals:
                continue
            wbase, phi = ez_decompose_wrt(t_W, Y_grown.identity_ref(y), verify=True)
            for d in range(dy, cap + 1):
                for e in conn_epis(d, dy):
                    vals[(y, e)] = t_W.value(wbase, compose(phi, e))
        # filling may graft scratch cubes below the current level; they
        # enter the target of the next round rather than failing this one
        covered = set(region.cubes)
    else:
        raise SynthesisError("strong synthesis stalled before covering the complex")

    Y_final = oracle.p.domain
    for y in Y_final.cubes:
        if Y_final.cube_dim(y) <= cap and y not in covered:
            raise SynthesisError(f"strong synthesis left {y!r} uncovered")

    out = make_wcs_table(
        inc, identity_map(Y_final), cap, lambda b, e: vals[(b, e)]
    )
    problems = validate_wcs(out)
    if problems:
        raise SynthesisError(f"synthesized table is invalid: {problems[0]}")
    bad = check_scs(out)
    if bad is not None:
        raise SynthesisError(f"synthesized table is not composition closed: {bad}")
    return out


# ---------------------------------------------------------------------------
# The quotient witness against images of non-surjective maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientResult:
    """The pushout collapsing the marked direction of an embedded
    cylinder on a marked edge: quotient is the host's comparison map
    and identified is the pair of host elements it merges."""

    apex: MCSet
    quotient: MCMap
    from_interval: MCMap
    identified: tuple[CubeRef, CubeRef]


def not_surj_quotient(X: MCSet, xmap: MCMap) -> QuotientResult:
    """Collapse the marked direction of an embedded cylinder: the
    pushout of the host along the projection of the cylinder onto its
    unmarked direction.

    The cylinder is the tensor of the interval with the marked interval;
    xmap must embed it in X.  In the quotient the cylinder's two long
    edges become equal while every cube outside its image survives
    unidentified with its marking intact, which is the standard witness
    that values for new connection words cannot always be chosen inside
    the image of a non-surjective map."""
    if X.regime != "full-marked":
        raise ComplexError("the quotient witness needs the full marking regime")
    fl = X.flavor
    S1 = standard_cube(1, fl, "full-marked")
    M1 = marked_cube(1, fl)
    T, pair_ids = tensor_indexed(S1, M1)

    D = xmap.domain
    if D.cubes != T.cubes or D.face_table != T.face_table or D.markings != T.markings:
        raise ComplexError("expected the cylinder on a marked edge as the domain")
    if xmap.codomain.cubes != X.cubes:
        raise ComplexError("cylinder map does not land in the host")
    xmap = MCMap(T, X, dict(xmap.assignment))
    xmap.validate()
    _require_embedding(xmap, "the quotient witness")

    pt = standard_cube(0, fl, "full-marked")
    Tp, flat_ids = tensor_indexed(S1, pt)
    unitor = MCMap(
        Tp, S1, {pid: S1.identity_ref(a) for (a, _), pid in flat_ids.items()}
    )
    proj = compose_maps(unitor, tensor_map(identity_map(S1), terminal_map(M1)))
    proj = MCMap(T, S1, dict(proj.assignment))
    proj.validate()

    po = pushout(xmap, proj, id_prefix="q")
    q = po.into_x

    sq = pair_ids[(interior_id(1), interior_id(1))]
    e0 = T.face(sq, 2, 0)
    e1 = T.face(sq, 2, 1)
    a0 = q.on_ref(xmap.on_ref(e0))
    a1 = q.on_ref(xmap.on_ref(e1))
    if a0 != a1:
        raise ComplexError("pushout failed to identify the cylinder's long edges")

    image = {r.base for r in xmap.assignment.values()}
    outside = [y for y in X.all_nondeg() if y not in image]
    seen: dict[CubeRef, str] = {}
    for y in outside:
        r = q.on_cube(y)
        if not r.epi.is_identity:
            raise ComplexError(f"quotient degenerates {y!r} outside the cylinder")
        if r in seen:
            raise ComplexError(
                f"quotient identifies {y!r} with {seen[r]!r} outside the cylinder"
            )
        seen[r] = y
        if po.apex.is_marked(r) != X.is_marked(X.identity_ref(y)):
            raise ComplexError(f"quotient changes the marking of {y!r}")

    return QuotientResult(po.apex, q, po.into_b, (xmap.on_ref(e0), xmap.on_ref(e1)))
