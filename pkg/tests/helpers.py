"""Shared generators for the randomized suites (seeded, deterministic)."""

import random

from mpmath import mpc


def random_admissible(rng: random.Random, count: int, spread=3.0, gap=0.1):
    """Draw complex parameters away from 0 and 1 and from each other."""
    values = []
    while len(values) < count:
        z = mpc(rng.uniform(-spread, spread), rng.uniform(-spread, spread))
        if abs(z) < gap or abs(z - 1) < gap:
            continue
        if any(abs(z - v) < gap for v in values):
            continue
        values.append(z)
    return values


def random_mobius(rng: random.Random):
    from jacdecomp.numerics import MobiusMap

    while True:
        a, b, c, d = (mpc(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(4))
        if abs(a * d - b * c) > 0.1:
            return MobiusMap(a, b, c, d)


def random_cover_model(rng: random.Random, rank=None, connected=True):
    """A valid cover: distinct points, nonzero vectors, zero total monodromy."""
    from jacdecomp.cover import CoverModel, gf2_rank
    from jacdecomp.numerics import INFINITY

    n = rank or rng.randint(2, 8)
    while True:
        count = rng.randint(max(4, n + 1), n + 6)
        vectors = [rng.randint(1, (1 << n) - 1) for _ in range(count - 1)]
        closing = 0
        for v in vectors:
            closing ^= v
        if closing == 0:
            continue
        vectors.append(closing)
        if connected and gf2_rank(vectors) != n:
            continue
        points = [INFINITY] + random_admissible(rng, count - 1)
        return CoverModel(n, list(zip(points, vectors)))
