"""Independent reference implementations used only by the tests.

Nothing here imports the package's builders: loops over Python sets and dicts
stand in for the vectorised production code.
"""

from __future__ import annotations

import itertools
from collections import Counter

import numpy as np


def edges_of(triangles) -> set[frozenset]:
    return {frozenset(p) for t in triangles for p in itertools.combinations(t, 2)}


def walk_adjacency(triangles) -> tuple[list[frozenset], np.ndarray]:
    """Walk graph by brute force: edges as vertices, one edge per shared triangle."""
    edges = sorted(edges_of(triangles), key=lambda e: tuple(sorted(e)))
    index = {e: i for i, e in enumerate(edges)}
    a = np.zeros((len(edges), len(edges)), dtype=np.int64)
    for t in triangles:
        es = [index[frozenset(p)] for p in itertools.combinations(t, 2)]
        for x, y in itertools.combinations(es, 2):
            a[x, y] += 1
            a[y, x] += 1
    return edges, a


def triangles_per_edge(triangles) -> Counter:
    c: Counter = Counter()
    for t in triangles:
        for p in itertools.combinations(t, 2):
            c[frozenset(p)] += 1
    return c


def cayley_adjacency(order: int, mul, gens) -> np.ndarray:
    """``a[g, s g] += 1`` for every listed generator."""
    a = np.zeros((order, order), dtype=np.int64)
    for g in range(order):
        for s in gens:
            a[g, mul(s, g)] += 1
    return a


def normalized_eigs(a: np.ndarray) -> np.ndarray:
    """Eigenvalues of the random-walk matrix ``D^-1 A`` via the general (non-symmetric) solver."""
    a = np.asarray(a, dtype=float)
    w = np.linalg.eigvals(a / a.sum(axis=1)[:, None])
    return np.sort(w.real)


def second_eigs(a: np.ndarray) -> tuple[float, float]:
    """``(lambda_signed, lambda_abs)`` from :func:`normalized_eigs` (connected graphs)."""
    ev = normalized_eigs(a)
    return float(ev[-2]), float(max(abs(ev[-2]), abs(ev[0])))


def is_sidon(elements) -> bool:
    """XOR sums of distinct pairs are pairwise distinct."""
    sums = [a ^ b for a, b in itertools.combinations(elements, 2)]
    return len(sums) == len(set(sums)) and len(set(elements)) == len(elements) and 0 not in elements


def hpower_triangles(vertices, triangles) -> list[tuple]:
    """``{0,1} x V`` with every sign pattern of every triangle."""
    out = set()
    for t in triangles:
        for signs in itertools.product((0, 1), repeat=3):
            out.add(frozenset((s, v) for s, v in zip(signs, t)))
    return [tuple(sorted(x)) for x in out]


def condition_d_pairs(mul, inv, types) -> list:
    """All ordered-type pairs with equal ``t1 t2^-1`` other than the allowed partner."""
    ordered = list(types) + [(b, a) for a, b in types]
    bad = []
    for (a, b), (c, d) in itertools.product(ordered, repeat=2):
        if (a, b) == (c, d) or (c, d) == (inv(b), inv(a)):
            continue
        if mul(a, inv(b)) == mul(c, inv(d)):
            bad.append(((a, b), (c, d)))
    return bad


def edge_names(order: int, mul, types, edge) -> list:
    """Every ``(g, {t1, t2})`` with ``{t1 g, t2 g} == edge`` by exhaustive search."""
    target = frozenset(edge)
    return [(g, t) for g in range(order) for t in types if frozenset((mul(t[0], g), mul(t[1], g))) == target]


def round_robin_ok(chi: int, classes) -> bool:
    pairs = Counter()
    for cl in classes:
        used = [x for p in cl for x in p]
        if len(used) != len(set(used)) or len(cl) != chi // 2:
            return False
        pairs.update(frozenset(p) for p in cl)
    return len(classes) == chi - 1 and set(pairs.values()) == {1} and len(pairs) == chi * (chi - 1) // 2
