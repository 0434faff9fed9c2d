"""Lifting-property machinery against the comical generating families.

A lift problem is a commuting square asking for a diagonal; right lifting
properties are decided by exhaustive search over the finite hom-sets, in
canonical order, so verdicts and witnesses are deterministic.  The
generating families (open-box inclusions, marking extensions, optionally
Rezk maps and markers) are scheduled by (dimension, family, parameters).

Because no interesting finite complex satisfies all box conditions on the
nose, the module also provides a free-filling harness: a complex grown
step by step by grafting the codomain of a generator along an open-box
image (or adding one marking, for a marking extension).  Each step is a
pushout along one generator, computed directly since the generator is an
inclusion; the projection to the base is maintained and re-validated
after every step, and the grown complex serves as a fibration oracle.

Verdicts are always dimension-capped: passing a check up to dim_cap says
nothing about higher boxes, and the verdict records its cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .opcalc import (
    Flavor,
    NormalForm,
    compose,
    identity_nf,
    mono_from_fixed,
)
from .complexes import (
    ComplexError,
    CubeRef,
    MCMap,
    MCSet,
    _mono_id,
    comical_marking_extension,
    comical_open_box_inclusion,
    compose_maps,
    enumerate_maps,
    make_mcset,
    maps_equal,
    marker,
    markable,
    rezk_map,
    standard_cube,
)


# ---------------------------------------------------------------------------
# Terminal maps
# ---------------------------------------------------------------------------


def collapse_epi(n: int) -> NormalForm:
    """The unique epi [1]^n -> [1]^0."""
    nf = identity_nf(0)
    for k in range(1, n + 1):
        nf = compose(nf, NormalForm(k, (), (), (1,)))
    return nf


def terminal_complex(flavor: Flavor, regime: str = "full-marked") -> MCSet:
    return standard_cube(0, flavor, regime)


def terminal_map(X: MCSet) -> MCMap:
    """The unique map from X to the point."""
    pt = terminal_complex(X.flavor, X.regime)
    return MCMap(
        X, pt, {x: CubeRef(collapse_epi(X.cube_dim(x)), "int") for x in X.cubes}
    )


# ---------------------------------------------------------------------------
# Lift problems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LiftProblem:
    """A commuting square asking for a diagonal.

        S --u--> E
        g|       |p
        T --v--> B

    A solution is h: T -> E with h.g = u and p.h = v.
    """

    g: MCMap
    u: MCMap
    v: MCMap
    p: MCMap

    def validate(self) -> None:
        if self.u.domain.cubes != self.g.domain.cubes:
            raise ComplexError("square sides disagree on the top-left corner")
        if self.v.domain.cubes != self.g.codomain.cubes:
            raise ComplexError("square sides disagree on the bottom-left corner")
        if self.p.domain.cubes != self.u.codomain.cubes:
            raise ComplexError("square sides disagree on the top-right corner")
        if self.p.codomain.cubes != self.v.codomain.cubes:
            raise ComplexError("square sides disagree on the bottom-right corner")
        if not maps_equal(compose_maps(self.p, self.u), compose_maps(self.v, self.g)):
            raise ComplexError("lift problem square does not commute")

    def accepts(self, h: MCMap) -> bool:
        """Whether h solves the problem (both triangles commute)."""
        return maps_equal(compose_maps(h, self.g), self.u) and maps_equal(
            compose_maps(self.p, h), self.v
        )


def make_lift_problem(g: MCMap, u: MCMap, v: MCMap, p: MCMap) -> LiftProblem:
    problem = LiftProblem(g, u, v, p)
    problem.validate()
    return problem


def _forced_assignment(
    g: MCMap, through: MCMap
) -> dict[str, CubeRef] | None:
    """What any h with h.g = through must do on cubes g hits by an
    identity ref; None when two such cubes force a clash (no h exists)."""
    pins: dict[str, CubeRef] = {}
    for x in g.domain.cubes:
        ref = g.on_cube(x)
        if not ref.epi.is_identity:
            continue
        want = through.on_cube(x)
        if pins.setdefault(ref.base, want) != want:
            return None
    return pins


def find_lift(problem: LiftProblem) -> MCMap | None:
    """The first diagonal for the square in canonical order, or None.

    Candidates h: T -> E are pinned to the u-image wherever g lands on a
    nondegenerate cube by an identity ref; both triangles are then
    verified on each candidate, so non-inclusion g is handled too."""
    pins = _forced_assignment(problem.g, problem.u)
    if pins is None:
        return None
    T, E = problem.g.codomain, problem.u.codomain
    for h in enumerate_maps(T, E, pinned=pins):
        if problem.accepts(h):
            return h
    return None


# ---------------------------------------------------------------------------
# Right lifting property
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RLPVerdict:
    """Outcome of an RLP decision; on failure, the unliftable square."""

    holds: bool
    counterexample: LiftProblem | None = None

    def __bool__(self) -> bool:
        return self.holds


def has_rlp(p: MCMap, g: MCMap) -> RLPVerdict:
    """Whether p lifts on the right against g.

    Exhaustive over commuting squares (u, v) in canonical order: for
    each u: dom(g) -> dom(p), the maps v with v.g = p.u are enumerated
    with the forced part pinned, and each square is searched for a
    diagonal.  The first square without one is the counterexample."""
    S, T = g.domain, g.codomain
    E, B = p.domain, p.codomain
    for u in enumerate_maps(S, E):
        through = compose_maps(p, u)
        pins = _forced_assignment(g, through)
        if pins is None:
            continue
        for v in enumerate_maps(T, B, pinned=pins):
            if not maps_equal(compose_maps(v, g), through):
                continue
            problem = LiftProblem(g, u, v, p)
            if find_lift(problem) is None:
                return RLPVerdict(False, problem)
    return RLPVerdict(True)


# ---------------------------------------------------------------------------
# Generating families
# ---------------------------------------------------------------------------

_FAMILY_ORDER = {"box": 0, "extension": 1, "rezk": 2, "marker": 3}


@dataclass(frozen=True, eq=False)
class GeneratorSpec:
    """One catalog generator with its place in the canonical schedule."""

    family: str
    dim: int
    params: tuple[int, ...]
    map: MCMap

    def __str__(self) -> str:
        args = ",".join(str(a) for a in self.params)
        return f"{self.family}({args})"


def generating_family(
    flavor: Flavor,
    dim_cap: int,
    saturated: bool = False,
    n_trivial: int | None = None,
) -> list[GeneratorSpec]:
    """The generators with codomain dimension <= dim_cap, scheduled by
    (dimension, family, parameters): open-box inclusions for every
    (n, i, eps), marking extensions for n >= 2, Rezk maps for
    m + n + 2 <= dim_cap when saturated, and markers of each dimension
    above n_trivial when that is given."""
    if dim_cap < 1:
        raise ComplexError("generating family needs dim_cap >= 1")
    out: list[GeneratorSpec] = []
    for n in range(1, dim_cap + 1):
        for i in range(1, n + 1):
            for eps in (0, 1):
                out.append(
                    GeneratorSpec(
                        "box",
                        n,
                        (n, i, eps),
                        comical_open_box_inclusion(n, i, eps, flavor),
                    )
                )
                if n >= 2:
                    out.append(
                        GeneratorSpec(
                            "extension",
                            n,
                            (n, i, eps),
                            comical_marking_extension(n, i, eps, flavor),
                        )
                    )
    if saturated:
        for m in range(0, dim_cap - 1):
            for n in range(0, dim_cap - 1 - m):
                out.append(
                    GeneratorSpec("rezk", m + n + 2, (m, n), rezk_map(m, n, flavor))
                )
    if n_trivial is not None:
        if n_trivial < 0:
            raise ComplexError("n_trivial must be >= 0")
        for k in range(n_trivial + 1, dim_cap + 1):
            out.append(GeneratorSpec("marker", k, (k,), marker(k, flavor)))
    out.sort(key=lambda s: (s.dim, _FAMILY_ORDER[s.family], s.params))
    return out


@dataclass(frozen=True)
class ComicalVerdict:
    """Dimension-capped comical verdict with the first failing problem."""

    holds: bool
    dim_cap: int
    saturated: bool
    n_trivial: int | None
    counterexample: LiftProblem | None = None
    generator: GeneratorSpec | None = None

    def __bool__(self) -> bool:
        return self.holds

    def __str__(self) -> str:
        state = "passes" if self.holds else f"fails {self.generator}"
        return f"ComicalVerdict[{state} at cap {self.dim_cap}]"


def is_comical_set(
    X: MCSet,
    dim_cap: int,
    saturated: bool = False,
    n_trivial: int | None = None,
) -> ComicalVerdict:
    """Whether X extends every generator-domain map along the generator,
    for all scheduled generators with codomain dimension <= dim_cap.

    Equivalent to RLP of the terminal map against each generator, but
    enumerating extension problems directly.  Reports the first failing
    problem; a pass certifies nothing above the cap."""
    if X.regime != "full-marked":
        raise ComplexError("comical verdicts need the full-marked regime")
    pX = terminal_map(X)
    for spec in generating_family(X.flavor, dim_cap, saturated, n_trivial):
        g = spec.map
        vT = terminal_map(g.codomain)
        for u in enumerate_maps(g.domain, X):
            problem = LiftProblem(g, u, vT, pX)
            if find_lift(problem) is None:
                return ComicalVerdict(
                    False, dim_cap, saturated, n_trivial, problem, spec
                )
    return ComicalVerdict(True, dim_cap, saturated, n_trivial)


# ---------------------------------------------------------------------------
# Filler oracles
# ---------------------------------------------------------------------------


class FillerOracle:
    """Answers lift problems; None means no filler is offered."""

    def lift(self, problem: LiftProblem) -> MCMap | None:
        raise NotImplementedError


class BruteLiftOracle(FillerOracle):
    """Exhaustive-search oracle for a fixed map p."""

    def __init__(self, p: MCMap) -> None:
        self.p = p

    def lift(self, problem: LiftProblem) -> MCMap | None:
        if (
            problem.p.domain.cubes != self.p.domain.cubes
            or not maps_equal(problem.p, self.p)
        ):
            raise ComplexError("oracle answers problems over its own map only")
        return find_lift(problem)


def brute_lift_oracle(p: MCMap) -> FillerOracle:
    return BruteLiftOracle(p)


class FillingOracle(FillerOracle):
    """Oracle over a free-filling harness: search first, fill on a miss.

    Problems must be posed over the harness's projection as of the call
    (read it back through the .p property).  When no diagonal exists the
    problem is handed to the harness, which grafts or marks a filler, and
    the search is repeated against the grown complex; the repeat cannot
    miss because the graft realizes the requested boundary on the nose.
    """

    def __init__(self, harness: FreeFillingComplex) -> None:
        self.harness = harness

    @property
    def p(self) -> MCMap:
        return self.harness.projection

    def lift(self, problem: LiftProblem) -> MCMap | None:
        sol = find_lift(problem)
        if sol is not None:
            return sol
        self.harness.fill(problem)
        live = LiftProblem(
            problem.g,
            MCMap(
                problem.u.domain,
                self.harness.complex,
                dict(problem.u.assignment),
            ),
            problem.v,
            self.harness.projection,
        )
        return find_lift(live)


# ---------------------------------------------------------------------------
# Free filling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FillEvent:
    """One adjoin step: which generator, what it added, the new filler."""

    family: str
    params: tuple[int, int, int]
    new_cubes: tuple[str, ...]
    new_markings: tuple[str, ...]
    interior: CubeRef


def _recognize_generator(g: MCMap) -> tuple[str, int, int, int]:
    """Match g against the catalog fill generators, ids included."""
    cod = g.codomain
    n = cod.dim
    builders = [("box", comical_open_box_inclusion)]
    if n >= 2:
        builders.append(("extension", comical_marking_extension))
    for i in range(1, n + 1):
        for eps in (0, 1):
            for family, build in builders:
                cand = build(n, i, eps, cod.flavor)
                if (
                    g.domain.cubes == cand.domain.cubes
                    and g.codomain.cubes == cand.codomain.cubes
                    and g.domain.face_table == cand.domain.face_table
                    and g.codomain.face_table == cand.codomain.face_table
                    and g.domain.markings == cand.domain.markings
                    and g.codomain.markings == cand.codomain.markings
                    and maps_equal(g, cand)
                ):
                    return family, n, i, eps
    raise ComplexError(
        "free fill needs a comical open-box inclusion or marking extension"
    )


class FreeFillingComplex:
    """A complex grown over a fixed base by adjoining catalog fillers.

    Single-writer: fill() replaces the current complex and projection
    with extended ones (the MCSets themselves are immutable snapshots,
    safe to share).  Growth only ever adds cubes and markings under
    fresh ids, so refs into earlier snapshots stay valid, and both the
    complex and the projection are re-validated after every step.
    """

    def __init__(self, projection: MCMap) -> None:
        projection.validate()
        if projection.domain.regime != "full-marked":
            raise ComplexError("free filling needs the full-marked regime")
        self.seed = projection.domain
        self.base = projection.codomain
        self.complex = projection.domain
        self.projection = projection
        self.events: list[FillEvent] = []
        self._next = 0

    # -- views ---------------------------------------------------------------

    def oracle(self) -> FillerOracle:
        """Brute-force oracle over the projection as of this call."""
        return BruteLiftOracle(self.projection)

    def seed_inclusion(self) -> MCMap:
        """The inclusion of the starting complex into the current one."""
        incl = MCMap(
            self.seed,
            self.complex,
            {x: self.complex.identity_ref(x) for x in self.seed.cubes},
        )
        incl.validate()
        return incl

    # -- growth ----------------------------------------------------------------

    def fill(self, problem: LiftProblem) -> CubeRef:
        """Adjoin a filler for one generator instance, no caching.

        The problem's g must be a catalog open-box inclusion or marking
        extension and its p this complex's projection.  A box fill
        grafts copies of the missing face and interior; a marking
        extension fill marks the image of its critical face.  Returns
        the image of the generator codomain's interior."""
        problem.validate()
        if (
            problem.p.domain.cubes != self.complex.cubes
            or not maps_equal(problem.p, self.projection)
        ):
            raise ComplexError("fill problem is not over this complex's projection")
        family, n, i, eps = _recognize_generator(problem.g)
        u, v = problem.u, problem.v
        missing = _mono_id(mono_from_fixed(n, [(i, eps)]))

        if family == "extension":
            img = u.on_cube(missing)
            new_marks: tuple[str, ...] = ()
            if not img.is_degenerate and img.base not in self.complex.markings:
                new_marks = (img.base,)
            interior = u.on_cube("int")
            if new_marks:
                grown = make_mcset(
                    self.complex.flavor,
                    self.complex.regime,
                    self.complex.cubes,
                    self.complex.face_table,
                    set(self.complex.markings) | set(new_marks),
                )
                proj = MCMap(grown, self.base, dict(self.projection.assignment))
                proj.validate()
                self.complex, self.projection = grown, proj
            self.events.append(
                FillEvent(family, (n, i, eps), (), new_marks, interior)
            )
            return interior

        # box: graft the codomain's two cells not in the box
        k = self._next
        self._next += 1
        T = problem.g.codomain
        new_id = {"int": f"fill{k}!int", missing: f"fill{k}!{missing}"}
        box_cubes = set(problem.g.domain.cubes)
        cubes = dict(self.complex.cubes)
        faces = dict(self.complex.face_table)
        markings = set(self.complex.markings)
        assignment = dict(self.projection.assignment)
        for z, zid in new_id.items():
            d = T.cube_dim(z)
            cubes[zid] = d
            for j in range(1, d + 1):
                for e in (0, 1):
                    ref = T.face(z, j, e)
                    if ref.base in box_cubes:
                        faces[(zid, j, e)] = u.on_ref(ref)
                    else:
                        faces[(zid, j, e)] = CubeRef(ref.epi, new_id[ref.base])
            if z in T.markings and markable(self.complex.regime, d):
                markings.add(zid)
            assignment[zid] = v.on_cube(z)
        grown = make_mcset(
            self.complex.flavor, self.complex.regime, cubes, faces, markings
        )
        proj = MCMap(grown, self.base, assignment)
        proj.validate()
        added_marks = tuple(sorted(markings - self.complex.markings))
        self.complex, self.projection = grown, proj
        interior = CubeRef(identity_nf(n), new_id["int"])
        self.events.append(
            FillEvent(
                family,
                (n, i, eps),
                tuple(new_id[z] for z in sorted(new_id)),
                added_marks,
                interior,
            )
        )
        return interior


def free_fill(h: FreeFillingComplex, problem: LiftProblem) -> CubeRef:
    return h.fill(problem)


def bounded_fibrant_approx(
    X: MCSet, dim_cap: int, rounds: int
) -> tuple[FreeFillingComplex, MCMap]:
    """Grow X toward a comical set by rounds of free filling.

    Each round enumerates, generator by generator in schedule order,
    every open-box and marking-extension instance of dimension <=
    dim_cap against the complex as of that generator's turn, searches
    the live complex for an existing filler first, and adjoins one only
    when the search fails.  Instances created by fills are picked up in
    the next round; rounds stop early once a full round adds nothing.
    Returns the harness and the inclusion of X into the grown complex."""
    if rounds < 0:
        raise ComplexError("rounds must be >= 0")
    harness = FreeFillingComplex(terminal_map(X))
    specs = generating_family(X.flavor, dim_cap)
    for _ in range(rounds):
        grew = False
        for spec in specs:
            g = spec.map
            vT = terminal_map(g.codomain)
            snapshot = harness.complex
            for u0 in enumerate_maps(g.domain, snapshot):
                u = MCMap(g.domain, harness.complex, dict(u0.assignment))
                problem = LiftProblem(g, u, vT, harness.projection)
                if find_lift(problem) is None:
                    harness.fill(problem)
                    grew = True
        if not grew:
            break
    incl = MCMap(
        X, harness.complex, {x: harness.complex.identity_ref(x) for x in X.cubes}
    )
    incl.validate()
    return harness, incl
