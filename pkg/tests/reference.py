"""Reference semantics computed straight from the poset-map reading.

Operator words act on {0,1}-tuples: a face inserts a constant
coordinate, a degeneracy deletes one, a connection folds two adjacent
coordinates with max or min.  Everything below works on raw function
tables, never on the library's normal forms or rewriting, so the
library can be checked against these values without circularity.
"""

import itertools
from math import comb, factorial


def vertices(n):
    return list(itertools.product((0, 1), repeat=n))


def step(kind, index, sign, v):
    i = index
    if kind == "d":
        return v[: i - 1] + (sign,) + v[i - 1 :]
    if kind == "s":
        return v[: i - 1] + v[i:]
    fold = max(v[i - 1], v[i]) if sign == 0 else min(v[i - 1], v[i])
    return v[: i - 1] + (fold,) + v[i + 1 :]


def run_triples(triples, v):
    for kind, index, sign in triples:
        v = step(kind, index, sign, v)
    return v


def graph_of(triples, source_dim):
    """Full function table on the vertices of [1]^source_dim."""
    return tuple(run_triples(triples, v) for v in vertices(source_dim))


def triples_of(word):
    """Plain (kind, index, sign) triples of a library word."""
    return [(g.kind, g.index, g.sign) for g in word.gens]


def semantics(word):
    """Dimensions plus function table; the meaning of a library word."""
    return (
        word.source_dim,
        word.target_dim,
        graph_of(triples_of(word), word.source_dim),
    )


# ---------------------------------------------------------------------------
# Epimorphisms as function tables
# ---------------------------------------------------------------------------


def epi_graphs(m, k, flavor):
    """Tables of every epi [1]^m -> [1]^k in the flavor, by exhausting
    degeneracy/connection words and deduplicating semantically."""
    level = {graph_of([], m)}
    for d in range(m, k, -1):
        nxt = set()
        for g in level:
            for idx in range(1, d + 1):
                nxt.add(tuple(step("s", idx, 0, v) for v in g))
            for idx in range(1, d):
                for sg in sorted(flavor):
                    nxt.add(tuple(step("g", idx, sg, v) for v in g))
        level = nxt
    return level


# ---------------------------------------------------------------------------
# Monomorphisms as fixed-coordinate patterns
# ---------------------------------------------------------------------------


def mono_patterns(n, m):
    """Monos [1]^m -> [1]^n as frozensets of fixed (position, value)."""
    out = []
    for fixed in itertools.combinations(range(1, n + 1), n - m):
        for vals in itertools.product((0, 1), repeat=n - m):
            out.append(frozenset(zip(fixed, vals)))
    return out


def pattern_of(triples, m, n):
    """Fixed-coordinate pattern of a face-only word, read off its table."""
    g = graph_of(triples, m)
    if m == 0:
        return frozenset((j + 1, g[0][j]) for j in range(n))
    cols = list(zip(*g))
    return frozenset(
        (j + 1, cols[j][0]) for j in range(n) if len(set(cols[j])) == 1
    )


def is_critical_pattern(pat, n, i, eps):
    """Criticality with respect to (i, eps), one clause at a time: the
    pattern must avoid index i entirely, and must not complete an
    eps-face at some j past i together with opposite faces strictly
    between."""
    have = dict(pat)
    if i in have:
        return False
    for j in range(i + 1, n + 1):
        if have.get(j) == eps and all(
            have.get(k) == 1 - eps for k in range(i + 1, j)
        ):
            return False
    for j in range(1, i):
        if have.get(j) == eps and all(
            have.get(k) == 1 - eps for k in range(j + 1, i)
        ):
            return False
    return True


def critical_patterns(n, i, eps):
    return {
        pat
        for m in range(n + 1)
        for pat in mono_patterns(n, m)
        if is_critical_pattern(pat, n, i, eps)
    }


def critical_edge_pattern(n, i, eps):
    """The unique dimension-1 critical face: every other coordinate is
    fixed at the opposite sign."""
    return frozenset((k, 1 - eps) for k in range(1, n + 1) if k != i)


# ---------------------------------------------------------------------------
# Counting rules
# ---------------------------------------------------------------------------


def cube_count(n, k):
    """Nondegenerate k-cubes of the n-cube: free coordinates and values."""
    return comb(n, k) * 2 ** (n - k)


def counts_of(X):
    out = {}
    for x in X.all_nondeg():
        out[X.cube_dim(x)] = out.get(X.cube_dim(x), 0) + 1
    return out


def convolve(a, b):
    out = {}
    for i, ci in a.items():
        for j, cj in b.items():
            out[i + j] = out.get(i + j, 0) + ci * cj
    return out


def simplex_count(n):
    """Maximal simplices of the triangulated n-cube."""
    return factorial(n)
