"""Operator calculus for the four cube categories.

Morphisms between the posets [1]^n generated by faces, degeneracies, and
(per flavor) negative/positive connections.  A flavor is a subset of {0, 1}
saying which connection signs exist: 0 is the max-connection, 1 is the min.

Everything here is grounded in poset semantics: a morphism IS a monotone
map [1]^m -> [1]^n, and ``eval_poset`` computes it.  Normal forms are the
unique faces-then-connections-then-degeneracies factorization; two words
are equal iff their normal forms are equal iff their poset maps are equal.

Words are stored first-applied-first.  Normal forms store each block in
"math order" (the order you would write them left to right on paper), so
application order within a block is the reverse of storage order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Literal, Sequence

Flavor = frozenset[int]

FLAVOR_NONE: Flavor = frozenset()
FLAVOR_NEG: Flavor = frozenset({0})
FLAVOR_POS: Flavor = frozenset({1})
FLAVOR_BOTH: Flavor = frozenset({0, 1})

ALL_FLAVORS: tuple[Flavor, ...] = (FLAVOR_NONE, FLAVOR_NEG, FLAVOR_POS, FLAVOR_BOTH)


def flavor_name(flavor: Flavor) -> str:
    return {FLAVOR_NONE: "none", FLAVOR_NEG: "neg", FLAVOR_POS: "pos", FLAVOR_BOTH: "both"}[
        frozenset(flavor)
    ]


def flavor_from_name(name: str) -> Flavor:
    table = {
        "none": FLAVOR_NONE,
        "neg": FLAVOR_NEG,
        "pos": FLAVOR_POS,
        "both": FLAVOR_BOTH,
    }
    if name not in table:
        raise ValueError(f"unknown flavor {name!r}; expected one of {sorted(table)}")
    return table[name]


# ---------------------------------------------------------------------------
# Generators and words
# ---------------------------------------------------------------------------

Kind = Literal["d", "s", "g"]


@dataclass(frozen=True)
class Generator:
    """One generator applied at a specific source dimension.

    kind "d": face delta_{i,eps}, inserts eps at slot i.  dim -> dim+1,
        valid for 1 <= i <= dim+1.
    kind "s": degeneracy sigma_i, deletes coordinate i.  dim -> dim-1,
        valid for 1 <= i <= dim.
    kind "g": connection gamma_{i,eps}, merges coords i, i+1 by max (eps=0)
        or min (eps=1).  dim -> dim-1, valid for 1 <= i <= dim-1.
    """

    kind: Kind
    index: int
    sign: int = 0  # unused for "s"

    def __post_init__(self) -> None:
        if self.kind not in ("d", "s", "g"):
            raise ValueError(f"bad generator kind {self.kind!r}")
        if self.kind == "s" and self.sign != 0:
            raise ValueError("degeneracies carry no sign")
        if self.kind in ("d", "g") and self.sign not in (0, 1):
            raise ValueError(f"sign must be 0 or 1, got {self.sign}")
        if self.index < 1:
            raise ValueError(f"generator index must be >= 1, got {self.index}")

    def valid_at(self, dim: int) -> bool:
        if self.kind == "d":
            return 1 <= self.index <= dim + 1
        if self.kind == "s":
            return 1 <= self.index <= dim
        return 1 <= self.index <= dim - 1

    def target_of(self, dim: int) -> int:
        return dim + 1 if self.kind == "d" else dim - 1

    def apply_point(self, point: tuple[int, ...]) -> tuple[int, ...]:
        i = self.index
        if self.kind == "d":
            return point[: i - 1] + (self.sign,) + point[i - 1 :]
        if self.kind == "s":
            return point[: i - 1] + point[i:]
        a, b = point[i - 1], point[i]
        merged = max(a, b) if self.sign == 0 else min(a, b)
        return point[: i - 1] + (merged,) + point[i + 1 :]

    def __str__(self) -> str:
        if self.kind == "s":
            return f"s({self.index})"
        return f"{self.kind}({self.index},{self.sign})"


def face(index: int, sign: int) -> Generator:
    return Generator("d", index, sign)


def degen(index: int) -> Generator:
    return Generator("s", index)


def conn(index: int, sign: int) -> Generator:
    return Generator("g", index, sign)


@dataclass(frozen=True)
class OperatorWord:
    """A composable sequence of generators, first-applied-first."""

    source_dim: int
    gens: tuple[Generator, ...]

    def __post_init__(self) -> None:
        if self.source_dim < 0:
            raise ValueError("source dimension must be >= 0")
        dim = self.source_dim
        for g in self.gens:
            if not g.valid_at(dim):
                raise ValueError(f"generator {g} invalid at dimension {dim}")
            dim = g.target_of(dim)

    @property
    def target_dim(self) -> int:
        dim = self.source_dim
        for g in self.gens:
            dim = g.target_of(dim)
        return dim

    def uses_signs(self) -> frozenset[int]:
        return frozenset(g.sign for g in self.gens if g.kind == "g")

    def in_flavor(self, flavor: Flavor) -> bool:
        return self.uses_signs() <= flavor


def eval_poset(word: OperatorWord, point: tuple[int, ...]) -> tuple[int, ...]:
    """Apply the word to a vertex of [1]^source_dim.  Ground-truth semantics."""
    if len(point) != word.source_dim or any(c not in (0, 1) for c in point):
        raise ValueError(f"point {point} is not a vertex of [1]^{word.source_dim}")
    for g in word.gens:
        point = g.apply_point(point)
    return point


def poset_graph(word: OperatorWord) -> tuple[tuple[int, ...], ...]:
    """The full function table of the word, in lexicographic input order."""
    return tuple(
        eval_poset(word, p) for p in itertools.product((0, 1), repeat=word.source_dim)
    )


# ---------------------------------------------------------------------------
# Normal forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalForm:
    """Faces-then-connections-then-degeneracies standard form.

    Blocks are stored in math order (leftmost written first):
      faces:  ((c_1,e_1),...,(c_r,e_r)) with c_1 > c_2 > ... > c_r >= 1
      conns:  ((b_1,m_1),...,(b_q,m_q)) with b_1 <= ... <= b_q, strict
              when consecutive signs agree
      degens: (a_1,...,a_p) with 1 <= a_1 < ... < a_p
    Application order is degens reversed, then conns reversed, then faces
    reversed (rightmost in math order acts first).
    """

    source_dim: int
    faces: tuple[tuple[int, int], ...] = ()
    conns: tuple[tuple[int, int], ...] = ()
    degens: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for (c1, _), (c2, _) in zip(self.faces, self.faces[1:]):
            if not c1 > c2:
                raise ValueError(f"face block not strictly decreasing: {self.faces}")
        for (b1, m1), (b2, m2) in zip(self.conns, self.conns[1:]):
            if b1 > b2 or (b1 == b2 and m1 == m2):
                raise ValueError(f"connection block out of order: {self.conns}")
        for a1, a2 in zip(self.degens, self.degens[1:]):
            if not a1 < a2:
                raise ValueError(f"degeneracy block not strictly increasing: {self.degens}")
        # replay the word to force index bounds at every step
        dim = self.source_dim
        for a in reversed(self.degens):
            if not 1 <= a <= dim:
                raise ValueError(f"degeneracy index {a} invalid at dim {dim}")
            dim -= 1
        for b, _ in reversed(self.conns):
            if not 1 <= b <= dim - 1:
                raise ValueError(f"connection index {b} invalid at dim {dim}")
            dim -= 1
        for c, _ in reversed(self.faces):
            if not 1 <= c <= dim + 1:
                raise ValueError(f"face index {c} invalid at dim {dim}")
            dim += 1

    @property
    def target_dim(self) -> int:
        return (
            self.source_dim - len(self.degens) - len(self.conns) + len(self.faces)
        )

    @property
    def is_identity(self) -> bool:
        return not (self.faces or self.conns or self.degens)

    @property
    def is_epi(self) -> bool:
        return not self.faces

    @property
    def is_mono(self) -> bool:
        return not (self.conns or self.degens)

    def uses_signs(self) -> frozenset[int]:
        return frozenset(m for _, m in self.conns)

    def in_flavor(self, flavor: Flavor) -> bool:
        return self.uses_signs() <= flavor

    def to_word(self) -> OperatorWord:
        gens: list[Generator] = []
        gens.extend(degen(a) for a in reversed(self.degens))
        gens.extend(conn(b, m) for b, m in reversed(self.conns))
        gens.extend(face(c, e) for c, e in reversed(self.faces))
        return OperatorWord(self.source_dim, tuple(gens))

    def __str__(self) -> str:
        return format_word(self.to_word())


def identity_nf(dim: int) -> NormalForm:
    return NormalForm(dim)


# -- absorb one generator into an existing normal form ----------------------
#
# normalize folds the word left to right (application order), keeping the
# partial composite in standard form.  Each absorb_* helper pushes one new
# generator (applied AFTER everything in nf) through nf's blocks using the
# cubical identities, in poset semantics:
#
#   d(j,e) . d(i,x)  = d(i+1,x) . d(j,e)           j <= i
#   s(j)   . s(i)    = s(i)     . s(j+1)           j <= i      (math order)
#   s(j)   . d(i,e)  = d(i-1,e) . s(j)             j < i
#                    = id                          j = i
#                    = d(i,e)   . s(j-1)           j > i
#   g(j,m) . d(i,e)  = d(i-1,e) . g(j,m)           j < i-1
#                    = id                          j in {i-1,i}, e = m
#                    = d(j,e)   . s(j)             j in {i-1,i}, e = 1-m
#                    = d(i,e)   . g(j-1,m)         j > i
#   s(j)   . g(i,e)  = g(i-1,e) . s(j)             j < i
#                    = s(i)     . s(i)             j = i       (math order)
#                    = g(i,e)   . s(j+1)           j > i
#   g(j,x) . g(i,e)  = g(i,e)   . g(j+1,x)         j > i
#                    = g(i,e)   . g(i+1,e)         j = i, x = e
#   (j = i with x != e, and j < i: already standard, no rewrite)


def _insert_face(faces: tuple[tuple[int, int], ...], j: int, e: int) -> tuple[tuple[int, int], ...]:
    # prepend d(j,e) in math order: walk left block entries with index >= j,
    # bumping them, until the strict-decrease slot for (j,e) appears
    out: list[tuple[int, int]] = []
    rest = list(faces)
    while rest and j <= rest[0][0]:
        c, ec = rest.pop(0)
        out.append((c + 1, ec))
    return tuple(out) + ((j, e),) + tuple(rest)


def _insert_degen(degens: tuple[int, ...], j: int) -> tuple[int, ...]:
    # append s(j) after the math-order block: entries a <= j shift j up by one
    out: list[int] = []
    rest = list(degens)
    while rest and rest[0] <= j:
        out.append(rest.pop(0))
        j += 1
    return tuple(out) + (j,) + tuple(rest)


def _sigma_into(
    conns: tuple[tuple[int, int], ...], degens: tuple[int, ...], j: int
) -> tuple[tuple[tuple[int, int], ...], tuple[int, ...]]:
    """Push sigma_j (applied after the tail) through conns into degens."""
    if not conns:
        return (), _insert_degen(degens, j)
    (b, e), rest = conns[0], conns[1:]
    if j < b:
        new_conns, new_degens = _sigma_into(rest, degens, j)
        return ((b - 1, e),) + new_conns, new_degens
    if j == b:
        # s(b) . g(b,e) = s(b) . s(b): two degeneracies at the same slot
        c1, s1 = _sigma_into(rest, degens, b)
        return _sigma_into(c1, s1, b)
    new_conns, new_degens = _sigma_into(rest, degens, j + 1)
    return ((b, e),) + new_conns, new_degens


def _absorb_degen(nf: NormalForm, j: int) -> NormalForm:
    faces = nf.faces
    out_faces: list[tuple[int, int]] = []
    idx = 0
    while idx < len(faces):
        c, e = faces[idx]
        if j < c:
            out_faces.append((c - 1, e))
            idx += 1
        elif j == c:
            # s(c) . d(c,e) = id: the face dies, the rest is untouched
            return NormalForm(
                nf.source_dim,
                tuple(out_faces) + faces[idx + 1 :],
                nf.conns,
                nf.degens,
            )
        else:
            out_faces.append((c, e))
            j -= 1
            idx += 1
    new_conns, new_degens = _sigma_into(nf.conns, nf.degens, j)
    return NormalForm(nf.source_dim, tuple(out_faces), new_conns, new_degens)


def _insert_conn(
    conns: tuple[tuple[int, int], ...], j: int, m: int
) -> tuple[tuple[int, int], ...]:
    # place g(j,m) after the math-order block; pass entries it commutes past
    out: list[tuple[int, int]] = []
    rest = list(conns)
    while rest:
        b, e = rest[0]
        if j > b or (j == b and m == e):
            out.append(rest.pop(0))
            j += 1
        else:
            break
    return tuple(out) + ((j, m),) + tuple(rest)


def _absorb_conn(nf: NormalForm, j: int, m: int) -> NormalForm:
    faces = nf.faces
    out_faces: list[tuple[int, int]] = []
    idx = 0
    while idx < len(faces):
        c, e = faces[idx]
        if j < c - 1:
            out_faces.append((c - 1, e))
            idx += 1
        elif j in (c - 1, c):
            if m == e:
                # g . d = id, connection dies
                return NormalForm(
                    nf.source_dim,
                    tuple(out_faces) + faces[idx + 1 :],
                    nf.conns,
                    nf.degens,
                )
            # g(j,m) . d(c,e) = d(j,e) . s(j): rebuild from the tail out
            tail = NormalForm(
                nf.source_dim, faces[idx + 1 :], nf.conns, nf.degens
            )
            tail = _absorb_degen(tail, j)
            tail = _absorb_face(tail, j, e)
            for c2, e2 in reversed(out_faces):
                tail = _absorb_face(tail, c2, e2)
            return tail
        else:
            out_faces.append((c, e))
            j -= 1
            idx += 1
    return NormalForm(
        nf.source_dim, tuple(out_faces), _insert_conn(nf.conns, j, m), nf.degens
    )


def _absorb_face(nf: NormalForm, j: int, e: int) -> NormalForm:
    return NormalForm(
        nf.source_dim, _insert_face(nf.faces, j, e), nf.conns, nf.degens
    )


def _absorb(nf: NormalForm, g: Generator) -> NormalForm:
    if g.kind == "d":
        return _absorb_face(nf, g.index, g.sign)
    if g.kind == "s":
        return _absorb_degen(nf, g.index)
    return _absorb_conn(nf, g.index, g.sign)


@lru_cache(maxsize=200_000)
def _normalize_cached(source_dim: int, gens: tuple[Generator, ...]) -> NormalForm:
    nf = identity_nf(source_dim)
    for g in gens:
        if not g.valid_at(nf.target_dim):
            raise ValueError(f"generator {g} invalid at dimension {nf.target_dim}")
        nf = _absorb(nf, g)
    return nf


def normalize(word: OperatorWord) -> NormalForm:
    """Rewrite to the unique standard form.  Exact: preserves eval_poset."""
    return _normalize_cached(word.source_dim, word.gens)


def compose(g: NormalForm, f: NormalForm) -> NormalForm:
    """g after f.  Requires f.target_dim == g.source_dim."""
    if f.target_dim != g.source_dim:
        raise ValueError(
            f"cannot compose: first map lands in dim {f.target_dim}, "
            f"second starts at dim {g.source_dim}"
        )
    return _compose_cached(g, f)


@lru_cache(maxsize=200_000)
def _compose_cached(g: NormalForm, f: NormalForm) -> NormalForm:
    nf = f
    for gen in g.to_word().gens:
        nf = _absorb(nf, gen)
    return nf


def epi_mono_factor(nf: NormalForm) -> tuple[NormalForm, NormalForm]:
    """Split into (epi, mono) with nf == compose(mono, epi)."""
    epi = NormalForm(nf.source_dim, (), nf.conns, nf.degens)
    mono = NormalForm(epi.target_dim, nf.faces, (), ())
    return epi, mono


# ---------------------------------------------------------------------------
# Monos, sections, enumeration
# ---------------------------------------------------------------------------


def mono_from_fixed(
    target_dim: int, fixed: Sequence[tuple[int, int]]
) -> NormalForm:
    """The mono into [1]^target_dim fixing coordinate p to value v per (p, v).

    Positions are 1-based and must be distinct; the source dimension is
    target_dim minus the number of fixed coordinates.
    """
    pairs = sorted(fixed, key=lambda pv: -pv[0])
    positions = [p for p, _ in pairs]
    if len(set(positions)) != len(positions):
        raise ValueError(f"duplicate fixed positions in {fixed}")
    for p, v in pairs:
        if not 1 <= p <= target_dim or v not in (0, 1):
            raise ValueError(f"bad fixed coordinate ({p},{v}) for target dim {target_dim}")
    return NormalForm(target_dim - len(pairs), tuple(pairs))


def mono_fixed_coords(nf: NormalForm) -> tuple[tuple[int, int], ...]:
    """Inverse of mono_from_fixed: the (position, value) pairs a mono fixes."""
    if not nf.is_mono:
        raise ValueError("not a mono")
    return nf.faces


def all_monos(source_dim: int, target_dim: int) -> list[NormalForm]:
    """Every mono [1]^source_dim -> [1]^target_dim, in canonical order."""
    if source_dim > target_dim:
        return []
    k = target_dim - source_dim
    out: list[NormalForm] = []
    for positions in itertools.combinations(range(1, target_dim + 1), k):
        for values in itertools.product((0, 1), repeat=k):
            out.append(mono_from_fixed(target_dim, list(zip(positions, values))))
    out.sort(key=lambda m: m.faces)
    return out


def all_epis(source_dim: int, target_dim: int, flavor: Flavor) -> list[NormalForm]:
    """Every flavor-epi [1]^source_dim -> [1]^target_dim, canonical order."""
    if target_dim > source_dim:
        return []
    out: list[NormalForm] = []
    seen: set[tuple] = set()

    def rec(nf: NormalForm) -> None:
        d = nf.source_dim - len(nf.degens) - len(nf.conns)
        if d == target_dim:
            key = (nf.conns, nf.degens)
            if key not in seen:
                seen.add(key)
                out.append(nf)
            return
        for j in range(1, d + 1):
            rec(_absorb_degen(nf, j))
        for j in range(1, d):
            for m in sorted(flavor):
                rec(_absorb_conn(nf, j, m))

    rec(identity_nf(source_dim))
    out.sort(key=lambda e: (e.conns, e.degens))
    return out


def all_morphisms(
    source_dim: int, target_dim: int, flavor: Flavor
) -> list[NormalForm]:
    """Every flavor-morphism [1]^source_dim -> [1]^target_dim."""
    out: list[NormalForm] = []
    for mid in range(0, min(source_dim, target_dim) + 1):
        for epi in all_epis(source_dim, mid, flavor):
            for mono in all_monos(mid, target_dim):
                out.append(compose(mono, epi))
    out.sort(key=lambda n: (n.faces, n.conns, n.degens))
    return out


def one_step_epis(source_dim: int, flavor: Flavor) -> list[NormalForm]:
    """Every single-generator epi [1]^source_dim -> [1]^(source_dim - 1)."""
    out = [
        NormalForm(source_dim, (), (), (j,))
        for j in range(1, source_dim + 1)
    ]
    for j in range(1, source_dim):
        for m in sorted(flavor):
            out.append(NormalForm(source_dim, (), ((j, m),), ()))
    return out


def sections(e: NormalForm) -> list[NormalForm]:
    """All monos m with compose(e, m) == id.  Requires e epi.

    Epis are split here, and a section is a mono, so candidates are the
    monos from the target back into the source; filtering by the identity
    equation is exact.
    """
    if not e.is_epi:
        raise ValueError("sections are only defined for epis")
    ident = identity_nf(e.target_dim)
    return [
        m
        for m in all_monos(e.target_dim, e.source_dim)
        if compose(e, m) == ident
    ]


# ---------------------------------------------------------------------------
# Word syntax
# ---------------------------------------------------------------------------


def parse_word(text: str, source_dim: int) -> OperatorWord:
    """Parse "d(2,1),g(1,0),s(3)" (first-applied-first) at a source dim."""
    text = text.strip()
    if text in ("", "id"):
        return OperatorWord(source_dim, ())
    # commas separate generators AND the arguments inside "d(2,1)"; group
    # split chunks until parentheses balance
    joined: list[str] = []
    buf = ""
    for chunk in (c.strip() for c in text.split(",")):
        buf = f"{buf},{chunk}" if buf else chunk
        if buf.count("(") == buf.count(")") and buf.endswith(")"):
            joined.append(buf)
            buf = ""
    if buf:
        raise ValueError(f"unbalanced parentheses in word {text!r}")
    return OperatorWord(source_dim, tuple(_parse_one(c) for c in joined))


def _parse_one(chunk: str) -> Generator:
    if len(chunk) < 4 or chunk[1] != "(" or not chunk.endswith(")"):
        raise ValueError(f"bad generator syntax {chunk!r}")
    kind, args = chunk[0], chunk[2:-1].split(",")
    try:
        nums = [int(a) for a in args]
    except ValueError as exc:
        raise ValueError(f"bad generator syntax {chunk!r}") from exc
    if kind == "s":
        if len(nums) != 1:
            raise ValueError(f"s takes one argument: {chunk!r}")
        return degen(nums[0])
    if kind in ("d", "g"):
        if len(nums) != 2:
            raise ValueError(f"{kind} takes two arguments: {chunk!r}")
        return Generator(kind, nums[0], nums[1])  # type: ignore[arg-type]
    raise ValueError(f"unknown generator kind in {chunk!r}")


def format_word(word: OperatorWord) -> str:
    if not word.gens:
        return "id"
    return ",".join(str(g) for g in word.gens)


def format_nf(nf: NormalForm) -> str:
    return format_word(nf.to_word())


def parse_nf(text: str, source_dim: int) -> NormalForm:
    return normalize(parse_word(text, source_dim))


# ---------------------------------------------------------------------------
# Tail forms and extended-connection faces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TailForm:
    """phi = psi . gamma_{j:q,mu}: a maximal terminal run of connections.

    gamma_{j:q,mu} means gamma_{j,mu} gamma_{j+1,mu} ... gamma_{j+q-1,mu}
    in math order (consecutive increasing indices, one sign).  psi is the
    rest of the standard form.  q = 0 encodes the trivial tail (psi = phi,
    j is then 0 by convention).
    """

    psi: NormalForm
    j: int
    q: int
    mu: int

    @property
    def is_trivial(self) -> bool:
        return self.q == 0

    @property
    def tail_length(self) -> int:
        if self.q == 0:
            raise ValueError("trivial tail form has no tail length")
        return self.q - 1

    @property
    def maximal_index(self) -> int:
        if self.q == 0:
            raise ValueError("trivial tail form has no maximal index")
        return self.j + self.q - 1

    def whole(self) -> NormalForm:
        if self.q == 0:
            return self.psi
        run = run_nf(self.psi.source_dim + self.q, self.j, self.q, self.mu)
        return compose(self.psi, run)

    def __str__(self) -> str:
        if self.q == 0:
            return f"{format_nf(self.psi)} (trivial tail)"
        return f"{format_nf(self.psi)} . g[{self.j}:{self.q},{self.mu}]"


def run_nf(source_dim: int, j: int, q: int, mu: int) -> NormalForm:
    """gamma_{j:q,mu} as a normal form [1]^source_dim -> [1]^(source_dim-q)."""
    if q == 0:
        return identity_nf(source_dim)
    return NormalForm(
        source_dim, (), tuple((j + t, mu) for t in range(q)), ()
    )


def tail_form(nf: NormalForm) -> TailForm:
    """The unique non-trivial tail form when one exists, else the trivial one.

    The tail is the longest terminal run b_i, b_i + 1, ..., b_q of
    consecutive indices with one sign inside the standard form's connection
    block; maximality makes the junction condition (j >= previous index,
    +2 on equal signs) automatic.  Degeneracies to the right of the
    connection block break any tail.
    """
    if nf.degens or not nf.conns:
        return TailForm(nf, 0, 0, 0)
    conns = nf.conns
    end = len(conns)
    start = end - 1
    while start > 0:
        b_prev, m_prev = conns[start - 1]
        b_cur, m_cur = conns[start]
        if m_prev == m_cur and b_cur == b_prev + 1:
            start -= 1
        else:
            break
    j, mu = conns[start]
    q = end - start
    psi = NormalForm(
        nf.source_dim - q, nf.faces, conns[:start], ()
    )
    return TailForm(psi, j, q, mu)


def maximal_index(nf: NormalForm) -> int:
    """Maximal connection index of the standard form's tail; requires one."""
    t = tail_form(nf)
    if t.is_trivial:
        raise ValueError("word has no connection tail")
    return t.maximal_index


def ext_conn_face(
    j: int, q: int, mu: int, face_idx: int, face_sign: int, source_dim: int
) -> NormalForm:
    """Standard form of gamma_{j:q,mu} . delta_{k,nu} at the given source dim.

    Case split on where the face lands relative to the run:
      k < j:            delta_{k,nu} . gamma_{j-1:q,mu}
      j <= k <= j+q, nu == mu:    gamma_{j:q-1,mu}
      j <= k <= j+q, nu != mu:    delta_{j,nu} . sigma_j ... sigma_{j+q-1}
      k > j+q:          delta_{k-q,nu} . gamma_{j:q,mu}
    Returned by direct construction; verified against normalize in tests.
    """
    k, nu = face_idx, face_sign
    if q < 1:
        raise ValueError("extended connection needs q >= 1")
    if not 1 <= k <= source_dim + 1:
        raise ValueError(f"face index {k} invalid at dim {source_dim}")
    if k < j:
        return NormalForm(
            source_dim,
            ((k, nu),),
            tuple((j - 1 + t, mu) for t in range(q)),
            (),
        )
    if j <= k <= j + q:
        if nu == mu:
            return run_nf(source_dim, j, q - 1, mu)
        return NormalForm(
            source_dim,
            ((j, nu),),
            (),
            tuple(range(j, j + q)),
        )
    return NormalForm(
        source_dim,
        ((k - q, nu),),
        tuple((j + t, mu) for t in range(q)),
        (),
    )


TailFaceTag = Literal[
    "shrinks-tail",
    "higher-max-index",
    "longer-tail-same-max",
    "has-face",
    "has-degeneracy",
]


def classify_tail_face(
    t: TailForm, face_idx: int, face_sign: int
) -> tuple[TailFaceTag, NormalForm]:
    """Compose a non-trivial tail form with a face and say what came out.

    Exactly one tag applies:
      shrinks-tail:          the face absorbed into the run, length drops
      higher-max-index:      connections only, max index > old max
      longer-tail-same-max:  connections only, max index = old max - 1 but
                             the run got strictly longer
      has-face:              a face survives in the standard form
      has-degeneracy:        no face, but a degeneracy survives
    """
    if t.is_trivial:
        raise ValueError("classification needs a non-trivial tail form")
    k, nu = face_idx, face_sign
    whole = t.whole()
    composite = compose(whole, NormalForm(whole.source_dim - 1, ((k, nu),)))
    if t.j <= k <= t.j + t.q and nu == t.mu:
        return "shrinks-tail", composite
    if composite.faces:
        return "has-face", composite
    if composite.degens:
        return "has-degeneracy", composite
    new_tail = tail_form(composite)
    old_max = t.maximal_index
    if not new_tail.is_trivial and new_tail.maximal_index >= old_max:
        return "higher-max-index", composite
    return "longer-tail-same-max", composite


# ---------------------------------------------------------------------------
# Critical faces and edges
# ---------------------------------------------------------------------------


def is_critical_face(delta: NormalForm, n: int, i: int, eps: int) -> bool:
    """Criticality of a mono delta into [1]^n relative to the face (i, eps).

    delta is critical when its fixed coordinates avoid all three patterns:
      (a) any fixed coordinate at position i;
      (b) some j > i with (j, eps) fixed and (k, 1-eps) fixed for all
          i < k < j;
      (c) some j < i with (j, eps) fixed and (k, 1-eps) fixed for all
          j < k < i.
    """
    if not delta.is_mono or delta.target_dim != n:
        raise ValueError("expected a mono into the given dimension")
    if not 1 <= i <= n or eps not in (0, 1):
        raise ValueError(f"bad face ({i},{eps}) for dimension {n}")
    fixed = dict(mono_fixed_coords(delta))
    if i in fixed:
        return False
    for j in range(i + 1, n + 1):
        if fixed.get(j) == eps and all(
            fixed.get(k) == 1 - eps for k in range(i + 1, j)
        ):
            return False
    for j in range(1, i):
        if fixed.get(j) == eps and all(
            fixed.get(k) == 1 - eps for k in range(j + 1, i)
        ):
            return False
    return True


def critical_faces(n: int, i: int, eps: int) -> list[NormalForm]:
    """All critical monos into [1]^n relative to (i, eps), canonical order."""
    out = []
    for t in range(0, n + 1):
        out.extend(
            m for m in all_monos(t, n) if is_critical_face(m, n, i, eps)
        )
    return out


def critical_edge(n: int, i: int, eps: int) -> NormalForm:
    """The unique 1-dimensional critical face: fix every position except i
    to 1 - eps."""
    if not 1 <= i <= n or eps not in (0, 1):
        raise ValueError(f"bad face ({i},{eps}) for dimension {n}")
    return mono_from_fixed(
        n, [(p, 1 - eps) for p in range(1, n + 1) if p != i]
    )


# ---------------------------------------------------------------------------
# Enumeration helpers used across modules
# ---------------------------------------------------------------------------


def words_of_length(
    max_len: int, max_dim: int, flavor: Flavor
) -> Iterator[OperatorWord]:
    """Generator words of length <= max_len with all dims along the way
    <= max_dim, every valid source dimension.  Exhaustive, deterministic."""

    def gens_at(dim: int) -> Iterable[Generator]:
        if dim + 1 <= max_dim:
            for idx in range(1, dim + 2):
                for sg in (0, 1):
                    yield face(idx, sg)
        for idx in range(1, dim + 1):
            yield degen(idx)
        for idx in range(1, dim):
            for sg in sorted(flavor):
                yield conn(idx, sg)

    def rec(word: OperatorWord) -> Iterator[OperatorWord]:
        yield word
        if len(word.gens) == max_len:
            return
        for g in gens_at(word.target_dim):
            yield from rec(OperatorWord(word.source_dim, word.gens + (g,)))

    for d0 in range(0, max_dim + 1):
        yield from rec(OperatorWord(d0, ()))
