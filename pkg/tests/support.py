"""Random families and other shared helpers for the test suite."""

from __future__ import annotations

import random
from itertools import product

from gauss_grass.algebra import FieldSpec, RatFunc, Ring
from gauss_grass.algebra.poly import MultiPoly
from gauss_grass.charts import ChartFamily, ProjParam, rechart, transform_family
from gauss_grass.errors import ChartError

QQ = FieldSpec.rationals()

#: One "criterion N: PASS|FAIL ..." line per acceptance criterion, printed in the summary.
ACCEPTANCE_LINES: list[str] = []

EXAMPLE_LINES = [["z1", "z2", "2*z1*z2"], ["0", "z1", "z1^2"]]


def example_family(field: FieldSpec = QQ) -> ChartFamily:
    return ChartFamily.from_strings(field, 4, 1, ["z1", "z2"], EXAMPLE_LINES)


def param_names(n: int) -> list[str]:
    return ["z"] if n == 1 else [f"z{k}" for k in range(1, n + 1)]


def random_poly(rng: random.Random, ring: Ring, max_deg: int, nterms: int = 3, coeff: int = 3) -> RatFunc:
    monos = [e for e in product(range(max_deg + 1), repeat=ring.n) if sum(e) <= max_deg]
    terms = {}
    for _ in range(nterms):
        terms[rng.choice(monos)] = rng.randint(-coeff, coeff)
    return MultiPoly.from_terms(ring, terms).to_ratfunc()


def random_family(
    rng: random.Random,
    N: int,
    m: int,
    n: int,
    max_deg: int = 3,
    field: FieldSpec = QQ,
    nterms: int = 3,
) -> ChartFamily:
    """Random polynomial chart family whose plane actually moves."""
    ring = Ring(tuple(param_names(n)), field)
    while True:
        f = [[random_poly(rng, ring, max_deg, nterms) for _ in range(N - m)] for _ in range(m + 1)]
        if any(not e.is_constant() for row in f for e in row):
            return ChartFamily(field, N, m, ring.params, f)


def random_unimodular(rng: random.Random, size: int, steps: int = 6) -> list[list[int]]:
    """Product of random elementary integer matrices (determinant +-1)."""
    T = [[int(i == j) for j in range(size)] for i in range(size)]
    for _ in range(steps):
        i, j = rng.sample(range(size), 2)
        c = rng.choice([-2, -1, 1, 2])
        for row in T:
            row[j] += c * row[i]
    order = list(range(size))
    rng.shuffle(order)
    return [T[k] for k in order]


def random_developable(rng: random.Random) -> ChartFamily:
    """The worked example's line family after a random change of coordinates."""
    return transform_family(example_family(), random_unimodular(rng, 5))


def random_variety(rng: random.Random, N: int, n: int, max_deg: int = 2) -> ProjParam:
    """(1 : z1 : ... : zn : random polynomials): smooth at a generic point."""
    ring = Ring(tuple(param_names(n)), QQ)
    coords = [ring.rat(1)] + [ring.rat_gen(p) for p in ring.params]
    coords += [random_poly(rng, ring, max_deg, 3) for _ in range(N - n)]
    return ProjParam(QQ, N, ring.params, tuple(coords))


def random_point(rng: random.Random, n: int, bound: int = 9) -> list[int]:
    return [rng.randint(-bound, bound) for _ in range(n)]


def random_rechart(rng: random.Random, fam: ChartFamily) -> ChartFamily:
    """Same family on a randomly chosen chart that contains its generic plane."""
    while True:
        perm = list(range(fam.N + 1))
        rng.shuffle(perm)
        try:
            return rechart(fam, perm)
        except ChartError:
            continue
