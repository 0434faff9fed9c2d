"""Seeded complex builders and fixed corpora shared across test modules."""

import random

from comical.opcalc import NormalForm, identity_nf
from comical.complexes import CubeRef, make_mcset


def random_complex(seed, flavor, regime="full-marked"):
    """A seeded complex of dimension <= 2.

    Loops, shared faces and degenerate square sides all occur; squares
    pick their coordinate-2 faces among existing edges and then close
    the corners, minting a fresh edge only when no existing one fits.
    """
    rng = random.Random(seed)
    cubes = {}
    marks = set()
    edge_faces = {}
    verts = [f"v{i}" for i in range(rng.randint(1, 3))]
    for v in verts:
        cubes[v] = 0
    edges = []

    def add_edge(name, a, b):
        cubes[name] = 1
        edge_faces[name] = (a, b)
        edges.append((name, a, b))
        if rng.random() < 0.4:
            marks.add(name)

    ne = rng.randint(1, 3)
    for j in range(ne):
        add_edge(f"e{j}", rng.choice(verts), rng.choice(verts))
    fresh = [0]

    def edge_with(a, b):
        cands = [e for e, x, y in edges if (x, y) == (a, b)]
        if cands and rng.random() < 0.8:
            return rng.choice(cands), False
        if a == b and rng.random() < 0.5:
            return a, True
        name = f"e{ne + fresh[0]}"
        fresh[0] += 1
        add_edge(name, a, b)
        return name, False

    squares = []
    for j in range(rng.randint(1, 2)):
        n20, a0, b0 = rng.choice(edges)
        n21, a1, b1 = rng.choice(edges)
        n10, t10 = edge_with(a0, a1)
        n11, t11 = edge_with(b0, b1)
        name = f"q{j}"
        cubes[name] = 2
        squares.append((name, (n10, t10), (n11, t11), (n20, False), (n21, False)))
        if rng.random() < 0.6:
            marks.add(name)

    face_table = {}
    for name, (a, b) in edge_faces.items():
        face_table[(name, 1, 0)] = CubeRef(identity_nf(0), a)
        face_table[(name, 1, 1)] = CubeRef(identity_nf(0), b)
    collapse = NormalForm(1, (), (), (1,))
    for name, f10, f11, f20, f21 in squares:
        for (i, eps), (en, degenerate) in zip(
            [(1, 0), (1, 1), (2, 0), (2, 1)], [f10, f11, f20, f21]
        ):
            epi = collapse if degenerate else identity_nf(1)
            face_table[(name, i, eps)] = CubeRef(epi, en)
    return make_mcset(flavor, regime, cubes, face_table, marks)
