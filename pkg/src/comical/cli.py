"""Command-line front end for scripting the library.

One canonical JSON document format carries complexes, maps, connection
tables, and verdict reports between invocations, so subcommands compose
in pipelines (catalog | ifree | triangulate).  Output is deterministic
and byte-stable: cubes are listed in (dimension, id) order, dictionary
keys are sorted, and operator words are canonical.

Operator words on the command line and in documents are written as
applied to a cube, first-applied-first: "s(1),d(1,0)" acting on an edge
first degenerates it to a square, then takes that square's (1,0) face,
so the composite is the identity.  --dim names the dimension of the
cube the word acts on.  Exit codes: 0 success, 1 verdict-false, 2 input
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Callable

from .opcalc import (
    FLAVOR_BOTH,
    FLAVOR_NEG,
    FLAVOR_NONE,
    FLAVOR_POS,
    Flavor,
    NormalForm,
    format_nf,
    identity_nf,
    parse_nf,
    tail_form,
)
from .complexes import (
    ComplexError,
    CubeRef,
    MCMap,
    MCSet,
    boundary,
    boundary_inclusion,
    comical_cube,
    comical_marking_extension,
    comical_open_box_inclusion,
    empty_complex,
    identity_map,
    inclusion_map,
    make_mcset,
    marked_cube,
    marker,
    pushout,
    standard_cube,
    tensor_indexed,
)
from .functors import (
    FlavorInclusion,
    MSSet,
    cofree,
    core,
    flat,
    forget_connections_indexed,
    forget_markings,
    free_connections,
    sharp,
    triangulate,
    trivialize,
)
from .homotopy import (
    BruteLiftOracle,
    FillingOracle,
    FreeFillingComplex,
    LiftProblem,
    bounded_fibrant_approx,
    has_rlp,
    is_comical_set,
    terminal_map,
)
from .connect import (
    SynthesisError,
    check_scs,
    empty_wcs,
    extend_wcs,
    make_wcs_table,
    not_surj_quotient,
    point_wcs,
    promote_scs,
    synthesize_scs,
    validate_wcs,
    WCSTable,
)

FORMAT = "comical/1"

_FLAVORS = {
    "none": FLAVOR_NONE,
    "neg": FLAVOR_NEG,
    "pos": FLAVOR_POS,
    "both": FLAVOR_BOTH,
}
_FLAVOR_NAMES = {v: k for k, v in _FLAVORS.items()}


class InputError(Exception):
    """A malformed document, flag, or word: exit code 2."""


# ---------------------------------------------------------------------------
# Document codec
# ---------------------------------------------------------------------------


def _flavor(name: str) -> Flavor:
    try:
        return _FLAVORS[name]
    except KeyError:
        raise InputError(
            f"unknown flavor {name!r}; expected one of {sorted(_FLAVORS)}"
        ) from None


def _chunks(text: str) -> list[str]:
    """Split a word into generator chunks, commas inside parentheses
    kept with their generator."""
    out: list[str] = []
    buf = ""
    for piece in (c.strip() for c in text.split(",")):
        buf = f"{buf},{piece}" if buf else piece
        if buf.count("(") == buf.count(")") and buf.endswith(")"):
            out.append(buf)
            buf = ""
    if buf:
        raise InputError(f"unbalanced parentheses in word {text!r}")
    return out


def word_in(text: str, acts_on: int) -> NormalForm:
    """Parse a word written as applied to a cube of dimension acts_on.

    The library composes words as poset maps, first-applied-last from
    the cube's point of view; translating is a reversal plus tracking
    the running dimension."""
    text = text.strip()
    if text in ("", "id"):
        return identity_nf(acts_on)
    chunks = _chunks(text)
    net = sum(-1 if c.startswith("d") else 1 for c in chunks)
    start = acts_on + net
    if start < 0:
        raise InputError(f"word {text!r} takes more faces than dimensions")
    try:
        nf = parse_nf(",".join(reversed(chunks)), start)
    except ValueError as err:
        raise InputError(f"bad word {text!r}: {err}") from None
    if nf.target_dim != acts_on:
        raise InputError(
            f"word {text!r} acts on dimension {nf.target_dim}, not {acts_on}"
        )
    return nf


def word_out(nf: NormalForm) -> str:
    """Print a word in the as-applied-to-a-cube order of word_in."""
    text = format_nf(nf)
    if text == "id":
        return text
    return ",".join(reversed(_chunks(text)))


def _ref_json(r: CubeRef) -> list[Any]:
    return [word_out(r.epi), r.base]


def _ref_parse(
    obj: Any, expect_dim: int, base_dims: Callable[[str], int | None], where: str
) -> CubeRef:
    if (
        not isinstance(obj, list)
        or len(obj) != 2
        or not all(isinstance(p, str) for p in obj)
    ):
        raise InputError(f"{where}: expected [word, base-id], got {obj!r}")
    base_dim = base_dims(obj[1])
    if base_dim is None:
        raise InputError(f"{where}: unknown base cube {obj[1]!r}")
    nf = word_in(obj[0], base_dim)
    if nf.source_dim != expect_dim:
        raise InputError(
            f"{where}: the element has dimension {nf.source_dim}, "
            f"expected {expect_dim}"
        )
    if not nf.is_epi:
        raise InputError(f"{where}: the word {obj[0]!r} is not a degeneracy")
    return CubeRef(nf, obj[1])


def complex_body(X: MCSet) -> dict[str, Any]:
    cubes = []
    for x in X.all_nondeg():
        n = X.cube_dim(x)
        faces = {}
        for i in range(1, n + 1):
            for eps in (0, 1):
                r = X.face(x, i, eps)
                faces[f"({i},{eps})"] = _ref_json(r)
        cubes.append(
            {
                "id": x,
                "dim": n,
                "faces": faces,
                "marked": x in X.markings,
            }
        )
    return {
        "flavor": _FLAVOR_NAMES[X.flavor],
        "regime": X.regime,
        "cubes": cubes,
    }


def complex_doc(X: MCSet, maps: list[dict[str, Any]] | None = None) -> dict[str, Any]:
    doc: dict[str, Any] = {"format": FORMAT, "kind": "complex"}
    doc.update(complex_body(X))
    if maps:
        doc["maps"] = maps
    return doc


def _want(obj: Any, key: str, kind: type | tuple[type, ...], where: str) -> Any:
    if not isinstance(obj, dict) or key not in obj:
        raise InputError(f"{where}: missing field {key!r}")
    val = obj[key]
    if not isinstance(val, kind):
        names = (
            kind.__name__
            if isinstance(kind, type)
            else " or ".join(k.__name__ for k in kind)
        )
        raise InputError(f"{where}: field {key!r} is not {names}")
    return val


def complex_parse(obj: Any, where: str) -> MCSet:
    flavor = _flavor(_want(obj, "flavor", str, where))
    regime = _want(obj, "regime", str, where)
    entries = _want(obj, "cubes", list, where)
    cubes: dict[str, int] = {}
    markings: set[str] = set()
    for entry in entries:
        x = _want(entry, "id", str, f"{where}: cube entry")
        n = _want(entry, "dim", int, f"{where}: cube {x!r}")
        if x in cubes:
            raise InputError(f"{where}: duplicate cube id {x!r}")
        cubes[x] = n
        if entry.get("marked", False):
            markings.add(x)
    faces: dict[tuple[str, int, int], CubeRef] = {}
    for entry in entries:
        x = entry["id"]
        n = cubes[x]
        face_obj = _want(entry, "faces", dict, f"{where}: cube {x!r}")
        for i in range(1, n + 1):
            for eps in (0, 1):
                key = f"({i},{eps})"
                if key not in face_obj:
                    raise InputError(
                        f"{where}: cube {x!r} lacks the face {key}"
                    )
                faces[(x, i, eps)] = _ref_parse(
                    face_obj[key], n - 1, cubes.get, f"{where}: face {key} of {x!r}"
                )
    try:
        return make_mcset(flavor, regime, cubes, faces, markings)
    except ComplexError as err:
        raise InputError(f"{where}: {err}") from None


def map_entry(
    name: str,
    f: MCMap,
    domain: str | MCSet = "main",
    codomain: str | MCSet = "main",
) -> dict[str, Any]:
    return {
        "name": name,
        "domain": domain if isinstance(domain, str) else complex_body(domain),
        "codomain": (
            codomain if isinstance(codomain, str) else complex_body(codomain)
        ),
        "assignment": {
            x: _ref_json(r) for x, r in sorted(f.assignment.items())
        },
    }


def _side_parse(obj: Any, main: MCSet | None, where: str) -> MCSet:
    if obj == "main":
        if main is None:
            raise InputError(f"{where}: no main complex to refer to")
        return main
    return complex_parse(obj, where)


def map_parse(entry: Any, main: MCSet | None, where: str) -> MCMap:
    dom = _side_parse(_want(entry, "domain", (str, dict), where), main, f"{where}: domain")
    cod = _side_parse(_want(entry, "codomain", (str, dict), where), main, f"{where}: codomain")
    raw = _want(entry, "assignment", dict, where)

    def cod_dims(b: str) -> int | None:
        return cod.cubes.get(b)

    assignment: dict[str, CubeRef] = {}
    for x in dom.all_nondeg():
        if x not in raw:
            raise InputError(f"{where}: assignment lacks the cube {x!r}")
        assignment[x] = _ref_parse(
            raw[x], dom.cube_dim(x), cod_dims, f"{where}: image of {x!r}"
        )
    f = MCMap(dom, cod, assignment)
    try:
        f.validate()
    except ComplexError as err:
        raise InputError(f"{where}: {err}") from None
    return f


def doc_map(doc: Any, main: MCSet | None, name: str | None, where: str) -> MCMap:
    entries = _want(doc, "maps", list, where)
    if name is None:
        if len(entries) != 1:
            names = [e.get("name") for e in entries]
            raise InputError(
                f"{where}: pick one of the maps {names} with --name"
            )
        entry = entries[0]
    else:
        matches = [e for e in entries if e.get("name") == name]
        if not matches:
            raise InputError(f"{where}: no map named {name!r}")
        entry = matches[0]
    label = entry.get("name", "?")
    return map_parse(entry, main, f"{where}: map {label!r}")


def table_doc(t: WCSTable) -> dict[str, Any]:
    values = []
    for _, b, e in t.pairs():
        values.append(
            {
                "base": b,
                "word": word_out(e),
                "value": _ref_json(t.value(b, e)),
            }
        )
    return {
        "format": FORMAT,
        "kind": "wcs-table",
        "small": _FLAVOR_NAMES[t.inc.small],
        "large": _FLAVOR_NAMES[t.inc.large],
        "cap": t.cap,
        "domain": complex_body(t.subject.domain),
        "codomain": complex_body(t.subject.codomain),
        "assignment": {
            x: _ref_json(r) for x, r in sorted(t.subject.assignment.items())
        },
        "values": values,
    }


def table_parse(doc: Any, where: str) -> WCSTable:
    inc = FlavorInclusion(
        _flavor(_want(doc, "small", str, where)),
        _flavor(_want(doc, "large", str, where)),
    )
    cap = _want(doc, "cap", int, where)
    X = complex_parse(_want(doc, "domain", dict, where), f"{where}: domain")
    Y = complex_parse(_want(doc, "codomain", dict, where), f"{where}: codomain")
    raw = _want(doc, "assignment", dict, where)

    def y_dims(b: str) -> int | None:
        return Y.cubes.get(b)

    assignment = {
        x: _ref_parse(raw[x], X.cube_dim(x), y_dims, f"{where}: image of {x!r}")
        for x in X.all_nondeg()
        if x in raw
    }
    if set(assignment) != set(X.cubes):
        raise InputError(f"{where}: subject assignment does not cover the domain")
    subject = MCMap(X, Y, assignment)
    try:
        subject.validate()
    except ComplexError as err:
        raise InputError(f"{where}: subject: {err}") from None
    entries: dict[tuple[str, str], Any] = {}
    for item in _want(doc, "values", list, where):
        b = _want(item, "base", str, f"{where}: value entry")
        w = _want(item, "word", str, f"{where}: value entry for {b!r}")
        entries[(b, w)] = _want(item, "value", list, f"{where}: value of ({b!r}, {w!r})")

    def values(b: str, e: NormalForm) -> CubeRef:
        key = (b, word_out(e))
        if key not in entries:
            raise InputError(
                f"{where}: no value recorded for cube {b!r} and word {key[1]!r}"
            )
        return _ref_parse(
            entries[key], e.source_dim, y_dims, f"{where}: value of {key}"
        )

    try:
        return make_wcs_table(inc, subject, cap, values)
    except ComplexError as err:
        raise InputError(f"{where}: {err}") from None


def simplicial_doc(S: MSSet) -> dict[str, Any]:
    simplices = []
    for x in S.all_nondeg():
        n = S.simp_dim(x)
        faces = {}
        for i in range(n + 1) if n >= 1 else ():
            r = S.face(x, i)
            faces[str(i)] = [list(r.surj), r.base]
        simplices.append(
            {
                "id": x,
                "dim": n,
                "faces": faces,
                "marked": x in S.markings,
            }
        )
    return {
        "format": FORMAT,
        "kind": "simplicial",
        "regime": S.regime,
        "simplices": simplices,
    }


def load_doc(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as err:
        raise InputError(f"{path}: {err}") from None


def load_complex(path: str) -> MCSet:
    return complex_parse(load_doc(path), path)


def emit(doc: dict[str, Any], out: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def report(command: str, **fields: Any) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "format": FORMAT,
        "kind": "report",
        "command": command,
    }
    doc.update(fields)
    return doc


def _problem_json(problem: LiftProblem) -> dict[str, Any]:
    return {
        "u": {x: _ref_json(r) for x, r in sorted(problem.u.assignment.items())},
        "v": {x: _ref_json(r) for x, r in sorted(problem.v.assignment.items())},
    }


# ---------------------------------------------------------------------------
# Word subcommands
# ---------------------------------------------------------------------------


def _word_report(command: str, nf: NormalForm) -> dict[str, Any]:
    return report(
        command,
        word=word_out(nf),
        acts_on=nf.target_dim,
        result_dim=nf.source_dim,
        is_identity=nf.is_identity,
        is_epi=nf.is_epi,
        is_mono=nf.is_mono,
    )


def cmd_normalize(args: argparse.Namespace) -> int:
    nf = word_in(args.word, args.dim)
    if args.flavor is not None and not nf.in_flavor(_flavor(args.flavor)):
        raise InputError(
            f"word uses connections outside the flavor {args.flavor!r}"
        )
    emit(_word_report("normalize", nf), args.out)
    return 0


def _concat_words(w1: str, w2: str) -> str:
    parts = [w for w in (w1.strip(), w2.strip()) if w not in ("", "id")]
    return ",".join(parts) if parts else "id"


def cmd_compose(args: argparse.Namespace) -> int:
    nf = word_in(_concat_words(args.first, args.second), args.dim)
    emit(_word_report("compose", nf), args.out)
    return 0


def cmd_tailform(args: argparse.Namespace) -> int:
    nf = word_in(args.word, args.dim)
    t = tail_form(nf)
    doc = report(
        "tailform",
        word=word_out(nf),
        psi=word_out(t.psi),
        j=t.j,
        q=t.q,
        mu=t.mu,
        trivial=t.is_trivial,
        maximal_index=None if t.is_trivial else t.maximal_index,
    )
    emit(doc, args.out)
    return 0


# ---------------------------------------------------------------------------
# Catalog and constructions
# ---------------------------------------------------------------------------


def _face_arg(text: str) -> tuple[int, int]:
    parts = text.split(",")
    try:
        i, eps = (int(p) for p in parts)
    except ValueError:
        raise InputError(f"bad --face {text!r}; expected i,eps") from None
    if eps not in (0, 1):
        raise InputError(f"bad --face {text!r}; eps must be 0 or 1")
    return i, eps


def cmd_catalog(args: argparse.Namespace) -> int:
    fl = _flavor(args.flavor)
    n = args.n
    family = args.family
    if family == "standard":
        emit(complex_doc(standard_cube(n, fl, args.regime)), args.out)
    elif family == "marked":
        emit(complex_doc(marked_cube(n, fl)), args.out)
    elif family == "boundary":
        emit(complex_doc(boundary(n, fl, args.regime)), args.out)
    elif family == "cylinder":
        T, _ = tensor_indexed(standard_cube(1, fl), marked_cube(1, fl))
        emit(complex_doc(T), args.out)
    elif family == "comical-cube":
        i, eps = _face_arg(args.face)
        emit(complex_doc(comical_cube(n, i, eps, fl)), args.out)
    elif family == "comical-open-box":
        i, eps = _face_arg(args.face)
        g = comical_open_box_inclusion(n, i, eps, fl)
        emit(
            complex_doc(
                g.domain, [map_entry("inclusion", g, "main", g.codomain)]
            ),
            args.out,
        )
    elif family == "marking-extension":
        i, eps = _face_arg(args.face)
        g = comical_marking_extension(n, i, eps, fl)
        emit(
            complex_doc(
                g.domain, [map_entry("extension", g, "main", g.codomain)]
            ),
            args.out,
        )
    elif family == "marker":
        g = marker(n, fl)
        emit(
            complex_doc(g.domain, [map_entry("marker", g, "main", g.codomain)]),
            args.out,
        )
    else:
        raise InputError(f"unknown catalog family {family!r}")
    return 0


def cmd_tensor(args: argparse.Namespace) -> int:
    X = load_complex(args.left)
    Y = load_complex(args.right)
    T, _ = tensor_indexed(X, Y)
    emit(complex_doc(T), args.out)
    return 0


def cmd_pushout(args: argparse.Namespace) -> int:
    doc = load_doc(args.doc)
    S = complex_parse(doc, args.doc)
    f = doc_map(doc, S, "left", args.doc)
    g = doc_map(doc, S, "right", args.doc)
    if f.domain.cubes != S.cubes or g.domain.cubes != S.cubes:
        raise InputError(
            f"{args.doc}: the maps left and right must start at the main complex"
        )
    po = pushout(f, g)
    emit(
        complex_doc(
            po.apex,
            [
                map_entry("into-left", po.into_x, f.codomain, "main"),
                map_entry("into-right", po.into_b, g.codomain, "main"),
            ],
        ),
        args.out,
    )
    return 0


def cmd_triangulate(args: argparse.Namespace) -> int:
    X = load_complex(args.complex)
    emit(simplicial_doc(triangulate(X)), args.out)
    return 0


# ---------------------------------------------------------------------------
# Flavor and marking functors
# ---------------------------------------------------------------------------


def cmd_ifree(args: argparse.Namespace) -> int:
    X = load_complex(args.complex)
    inc = FlavorInclusion(X.flavor, _flavor(args.flavor))
    emit(complex_doc(free_connections(X, inc)), args.out)
    return 0


def cmd_iforget(args: argparse.Namespace) -> int:
    X = load_complex(args.complex)
    inc = FlavorInclusion(_flavor(args.flavor), X.flavor)
    F, _ = forget_connections_indexed(X, inc, args.cap)
    emit(complex_doc(F), args.out)
    return 0


def cmd_icofree(args: argparse.Namespace) -> int:
    X = load_complex(args.complex)
    inc = FlavorInclusion(X.flavor, _flavor(args.flavor))
    emit(complex_doc(cofree(X, inc, args.cap)), args.out)
    return 0


def cmd_trivialize(args: argparse.Namespace) -> int:
    X = load_complex(args.complex)
    emit(complex_doc(trivialize(X, args.n_trivial)), args.out)
    return 0


def cmd_mark(args: argparse.Namespace) -> int:
    X = load_complex(args.complex)
    if args.mode == "flat":
        Y = flat(X)
    elif args.mode == "sharp":
        Y = sharp(X)
    elif args.mode == "core":
        Y = core(X)
    elif args.mode == "underlying":
        Y = forget_markings(X, "unmarked")
    else:
        raise InputError(f"unknown marking mode {args.mode!r}")
    emit(complex_doc(Y), args.out)
    return 0


# ---------------------------------------------------------------------------
# Lifting and fibrancy
# ---------------------------------------------------------------------------


def _generator(args: argparse.Namespace, flavor: Flavor) -> MCMap:
    family = args.gen
    n = args.n
    if family == "comical-open-box":
        i, eps = _face_arg(args.face)
        return comical_open_box_inclusion(n, i, eps, flavor)
    if family == "marking-extension":
        i, eps = _face_arg(args.face)
        return comical_marking_extension(n, i, eps, flavor)
    if family == "marker":
        return marker(n, flavor)
    if family == "boundary":
        return boundary_inclusion(n, flavor)
    raise InputError(f"unknown generator family {family!r}")


def cmd_rlp(args: argparse.Namespace) -> int:
    doc = load_doc(args.map)
    main: MCSet | None
    try:
        main = complex_parse(doc, args.map)
    except InputError:
        main = None
    p = doc_map(doc, main, args.name, args.map)
    flavor = _flavor(args.flavor) if args.flavor else p.domain.flavor
    g = _generator(args, flavor)
    verdict = has_rlp(p, g)
    fields: dict[str, Any] = {"holds": verdict.holds, "generator": args.gen}
    if verdict.counterexample is not None:
        fields["counterexample"] = _problem_json(verdict.counterexample)
    emit(report("rlp", **fields), args.out)
    return 0 if verdict.holds else 1


def cmd_comical_check(args: argparse.Namespace) -> int:
    X = load_complex(args.complex)
    verdict = is_comical_set(
        X, args.cap, saturated=args.saturated, n_trivial=args.n_trivial
    )
    fields: dict[str, Any] = {
        "holds": verdict.holds,
        "dim_cap": verdict.dim_cap,
        "saturated": verdict.saturated,
        "n_trivial": verdict.n_trivial,
    }
    if verdict.generator is not None:
        fields["generator"] = str(verdict.generator)
    if verdict.counterexample is not None:
        fields["counterexample"] = _problem_json(verdict.counterexample)
    emit(report("comical-check", **fields), args.out)
    return 0 if verdict.holds else 1


def cmd_fibrant_approx(args: argparse.Namespace) -> int:
    X = load_complex(args.complex)
    harness, incl = bounded_fibrant_approx(X, args.cap, args.rounds)
    emit(
        complex_doc(
            harness.complex, [map_entry("inclusion", incl, X, "main")]
        ),
        args.out,
    )
    return 0


# ---------------------------------------------------------------------------
# Connection structures
# ---------------------------------------------------------------------------


def cmd_wcs_validate(args: argparse.Namespace) -> int:
    t = table_parse(load_doc(args.table), args.table)
    problems = validate_wcs(t)
    fields: dict[str, Any] = {"holds": not problems, "problems": problems}
    if args.scs and not problems:
        bad = check_scs(t)
        fields["composition_closed"] = bad is None
        if bad is not None:
            fields["holds"] = False
            fields["violation"] = {
                "cube": bad.x,
                "first_word": word_out(bad.phi),
                "second_word": word_out(bad.psi),
            }
    emit(report("wcs-validate", **fields), args.out)
    return 0 if fields["holds"] else 1


def _synth_inc(X: MCSet, flavor_name: str) -> FlavorInclusion:
    if X.flavor != FLAVOR_NONE:
        raise InputError("synthesis starts from the connection-free flavor")
    return FlavorInclusion(FLAVOR_NONE, _flavor(flavor_name))


def cmd_wcs_synthesize(args: argparse.Namespace) -> int:
    X = load_complex(args.complex)
    inc = _synth_inc(X, args.flavor)
    harness = FreeFillingComplex(terminal_map(X))
    oracle = FillingOracle(harness)
    try:
        t = extend_wcs(
            inclusion_map(empty_complex(X.flavor, X.regime), X),
            inclusion_map(X, X),
            oracle,
            empty_wcs(inc, X, args.cap),
            point_wcs(inc, args.cap + 1),
            args.cap,
        )
    except SynthesisError as err:
        emit(report("wcs-synthesize", holds=False, error=str(err)), args.out)
        return 1
    emit(table_doc(t), args.out)
    return 0


def cmd_scs_extend(args: argparse.Namespace) -> int:
    doc = load_doc(args.doc)
    Y = complex_parse(doc, args.doc)
    if args.table is None:
        inc = _synth_inc(Y, args.flavor)
        W = empty_complex(Y.flavor, Y.regime)
        incl = inclusion_map(W, Y)
        gamma_x = make_wcs_table(
            inc, identity_map(W), args.cap, lambda b, e: None
        )
    else:
        gamma_x = table_parse(load_doc(args.table), args.table)
        inc = gamma_x.inc
        W = gamma_x.subject.domain
        incl = doc_map(doc, Y, "incl", args.doc)
        if incl.domain.cubes != W.cubes:
            raise InputError(
                f"{args.doc}: the map incl must start at the table's complex"
            )
        incl = MCMap(W, Y, dict(incl.assignment))
        incl.validate()
    oracle = BruteLiftOracle(terminal_map(Y))
    try:
        t = synthesize_scs(
            incl, oracle, gamma_x, point_wcs(inc, args.cap + 1), args.cap
        )
    except SynthesisError as err:
        emit(report("scs-extend", holds=False, error=str(err)), args.out)
        return 1
    emit(table_doc(t), args.out)
    return 0


def cmd_promote(args: argparse.Namespace) -> int:
    t = table_parse(load_doc(args.table), args.table)
    problems = validate_wcs(t)
    if problems:
        emit(report("promote", holds=False, problems=problems), args.out)
        return 1
    bad = check_scs(t)
    if bad is not None:
        doc = report(
            "promote",
            holds=False,
            violation={
                "cube": bad.x,
                "first_word": word_out(bad.phi),
                "second_word": word_out(bad.psi),
            },
        )
        emit(doc, args.out)
        return 1
    xbar, iso = promote_scs(t)
    emit(
        complex_doc(
            xbar,
            [map_entry("comparison", iso, iso.domain, iso.codomain)],
        ),
        args.out,
    )
    return 0


def cmd_quotient_collapse(args: argparse.Namespace) -> int:
    doc = load_doc(args.doc)
    X = complex_parse(doc, args.doc)
    xmap = doc_map(doc, X, args.name, args.doc)
    res = not_surj_quotient(X, xmap)
    out = complex_doc(
        res.apex,
        [
            map_entry("quotient", res.quotient, X, "main"),
            map_entry(
                "from-interval", res.from_interval, res.from_interval.domain, "main"
            ),
        ],
    )
    out["identified"] = [_ref_json(res.identified[0]), _ref_json(res.identified[1])]
    emit(out, args.out)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_out(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the output document here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="comical",
        description="Finite marked cubical complexes: build, transform, check, synthesize.",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=0,
        help="reserved for randomized sweeps; accepted for script compatibility",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", help="normalize an operator word")
    p.add_argument("word")
    p.add_argument("--dim", type=int, required=True, help="dimension of the cube the word acts on")
    p.add_argument("--flavor", choices=sorted(_FLAVORS), help="require the word to lie in this flavor")
    _add_out(p)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("compose", help="compose two operator words, first applied first")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--dim", type=int, required=True, help="dimension of the cube the composite acts on")
    _add_out(p)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("tailform", help="split a word at its maximal connection run")
    p.add_argument("word")
    p.add_argument("--dim", type=int, required=True)
    _add_out(p)
    p.set_defaults(func=cmd_tailform)

    p = sub.add_parser("catalog", help="emit a catalog complex or generator")
    p.add_argument(
        "family",
        choices=[
            "standard",
            "marked",
            "boundary",
            "cylinder",
            "comical-cube",
            "comical-open-box",
            "marking-extension",
            "marker",
        ],
    )
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--face", default="1,0", help="i,eps for the comical families")
    p.add_argument("--flavor", choices=sorted(_FLAVORS), default="none")
    p.add_argument("--regime", default="full-marked")
    _add_out(p)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("tensor", help="geometric product of two complexes")
    p.add_argument("left")
    p.add_argument("right")
    _add_out(p)
    p.set_defaults(func=cmd_tensor)

    p = sub.add_parser(
        "pushout",
        help="pushout of the maps named left and right out of the main complex",
    )
    p.add_argument("doc")
    _add_out(p)
    p.set_defaults(func=cmd_pushout)

    p = sub.add_parser("triangulate", help="triangulate a complex")
    p.add_argument("complex")
    _add_out(p)
    p.set_defaults(func=cmd_triangulate)

    p = sub.add_parser("ifree", help="freely add connections toward a larger flavor")
    p.add_argument("complex")
    p.add_argument("--flavor", required=True, choices=sorted(_FLAVORS))
    _add_out(p)
    p.set_defaults(func=cmd_ifree)

    p = sub.add_parser("iforget", help="forget connections down to a smaller flavor")
    p.add_argument("complex")
    p.add_argument("--flavor", required=True, choices=sorted(_FLAVORS))
    p.add_argument("--cap", type=int, required=True, help="materialization dimension bound")
    _add_out(p)
    p.set_defaults(func=cmd_iforget)

    p = sub.add_parser("icofree", help="cofreely add connections toward a larger flavor")
    p.add_argument("complex")
    p.add_argument("--flavor", required=True, choices=sorted(_FLAVORS))
    p.add_argument("--cap", type=int, required=True)
    _add_out(p)
    p.set_defaults(func=cmd_icofree)

    p = sub.add_parser("trivialize", help="mark everything above a dimension")
    p.add_argument("complex")
    p.add_argument("--n-trivial", type=int, required=True)
    _add_out(p)
    p.set_defaults(func=cmd_trivialize)

    p = sub.add_parser("mark", help="marking functors: flat, sharp, core, underlying")
    p.add_argument("complex")
    p.add_argument(
        "--mode", required=True, choices=["flat", "sharp", "core", "underlying"]
    )
    _add_out(p)
    p.set_defaults(func=cmd_mark)

    p = sub.add_parser("rlp", help="decide a right lifting property")
    p.add_argument("--map", required=True, help="document containing the map to test")
    p.add_argument("--name", help="which map of the document (default: the only one)")
    p.add_argument(
        "--gen",
        required=True,
        choices=["comical-open-box", "marking-extension", "marker", "boundary"],
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--face", default="1,0")
    p.add_argument("--flavor", choices=sorted(_FLAVORS))
    _add_out(p)
    p.set_defaults(func=cmd_rlp)

    p = sub.add_parser("comical-check", help="check lifting against all generators up to a cap")
    p.add_argument("complex")
    p.add_argument("--cap", type=int, required=True)
    p.add_argument("--saturated", action="store_true")
    p.add_argument("--n-trivial", type=int)
    _add_out(p)
    p.set_defaults(func=cmd_comical_check)

    p = sub.add_parser("fibrant-approx", help="grow a complex by rounds of free filling")
    p.add_argument("complex")
    p.add_argument("--cap", type=int, required=True)
    p.add_argument("--rounds", type=int, default=1)
    _add_out(p)
    p.set_defaults(func=cmd_fibrant_approx)

    p = sub.add_parser("wcs-validate", help="validate a weak connection structure table")
    p.add_argument("table")
    p.add_argument(
        "--scs", action="store_true", help="also check composition closure"
    )
    _add_out(p)
    p.set_defaults(func=cmd_wcs_validate)

    p = sub.add_parser(
        "wcs-synthesize",
        help="synthesize a weak connection structure over the point by free filling",
    )
    p.add_argument("complex")
    p.add_argument("--cap", type=int, required=True)
    p.add_argument("--flavor", choices=sorted(_FLAVORS), default="both")
    _add_out(p)
    p.set_defaults(func=cmd_wcs_synthesize)

    p = sub.add_parser(
        "scs-extend",
        help="extend a strong connection structure over a complex assumed fibrant",
    )
    p.add_argument("doc")
    p.add_argument("--cap", type=int, required=True)
    p.add_argument("--flavor", choices=sorted(_FLAVORS), default="both")
    p.add_argument("--table", help="table on a subcomplex; the document needs a map named incl")
    _add_out(p)
    p.set_defaults(func=cmd_scs_extend)

    p = sub.add_parser("promote", help="promote a composition-closed table to a complex")
    p.add_argument("table")
    _add_out(p)
    p.set_defaults(func=cmd_promote)

    p = sub.add_parser(
        "quotient-collapse",
        help="collapse the marked direction of an embedded cylinder",
    )
    p.add_argument("doc")
    p.add_argument("--name", help="which map embeds the cylinder (default: the only one)")
    _add_out(p)
    p.set_defaults(func=cmd_quotient_collapse)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    func: Callable[[argparse.Namespace], int] = args.func
    try:
        return func(args)
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (ComplexError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
