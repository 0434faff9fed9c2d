"""Scratch timing for acceptance sweep sizes (not part of the package)."""

import time

from comical.opcalc import (
    FLAVOR_BOTH,
    FLAVOR_NEG,
    FLAVOR_NONE,
    FLAVOR_POS,
    all_epis,
    all_morphisms,
    all_monos,
    compose,
    mono_from_fixed,
    normalize,
    words_of_length,
)

FLAVORS = [FLAVOR_NONE, FLAVOR_NEG, FLAVOR_POS, FLAVOR_BOTH]

t0 = time.time()
total = 0
for fl in FLAVORS:
    n = sum(1 for _ in words_of_length(4, 4, fl))
    total += n
    print("words len<=4 dim<=4 flavor", sorted(fl), ":", n, round(time.time() - t0, 2))
print("total words:", total)

t0 = time.time()
for fl in FLAVORS:
    for w in words_of_length(4, 4, fl):
        normalize(w)
print("normalize all:", round(time.time() - t0, 2))

# degen-shift pair count with all dims <= 5
t0 = time.time()
cnt = 0
for fl in [FLAVOR_BOTH]:
    for m in range(6):
        for n in range(m + 1):
            ne = len(all_epis(m, n, fl))
            for k in range(6):
                nm = len(all_morphisms(n, k, fl))
                cnt += ne * nm
print("degen-shift pairs (both):", cnt, round(time.time() - t0, 2))

# face-shift: maps m->n with n+1 <= 5, times faces
t0 = time.time()
cnt = 0
for m in range(6):
    for n in range(5):
        cnt += len(all_morphisms(m, n, FLAVOR_BOTH)) * 2 * (n + 1)
print("face-shift pairs (both):", cnt, round(time.time() - t0, 2))

# time a slice of composes
t0 = time.time()
done = 0
for e in all_epis(5, 2, FLAVOR_BOTH):
    for f in all_morphisms(2, 4, FLAVOR_BOTH):
        compose(f, e)
        done += 1
print("sample composes:", done, round(time.time() - t0, 2))
