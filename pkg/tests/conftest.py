"""Shared generators for randomized tests.

Everything is driven by explicit random.Random instances with fixed seeds
so the suite is deterministic.
"""

from __future__ import annotations

import random

from treealg.graphs import DirectedGraph, OutForest


def random_out_tree(rng: random.Random, n: int) -> OutForest:
    """A uniform-ish random rooted tree on n vertices named "1".."n".

    Vertex 1 is the root; every other vertex picks a parent among the
    earlier vertices (a random parent array).
    """
    vs = [str(i) for i in range(1, n + 1)]
    edges = []
    for i in range(1, n):
        p = rng.randrange(i)
        edges.append((vs[p], vs[i]))
    return OutForest(DirectedGraph(vs, edges))


def random_out_forest(rng: random.Random, n: int) -> OutForest:
    """Like random_out_tree but each non-first vertex may start a new tree."""
    vs = [str(i) for i in range(1, n + 1)]
    edges = []
    for i in range(1, n):
        if rng.random() < 0.75:
            p = rng.randrange(i)
            edges.append((vs[p], vs[i]))
    return OutForest(DirectedGraph(vs, edges))


def random_weights(rng: random.Random, g: DirectedGraph, high: int = 3) -> dict[str, int]:
    return {v: rng.randrange(high + 1) for v in g.vertices}


def random_dag(rng: random.Random, n: int, p: float = 0.4) -> DirectedGraph:
    """A random DAG: edges only from earlier to later vertices."""
    vs = [str(i) for i in range(1, n + 1)]
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.append((vs[i], vs[j]))
    return DirectedGraph(vs, edges)


def all_parent_arrays(n: int):
    """Yield every parent array (p_1 .. p_{n-1}) with p_i < i.

    Enumerates all labeled rooted trees on vertices 0..n-1 with root 0.
    """
    if n == 1:
        yield ()
        return
    def rec(i: int, acc: list[int]):
        if i == n:
            yield tuple(acc)
            return
        for p in range(i):
            acc.append(p)
            yield from rec(i + 1, acc)
            acc.pop()
    yield from rec(1, [])


def tree_from_parents(parents: tuple[int, ...]) -> OutForest:
    n = len(parents) + 1
    vs = [str(i + 1) for i in range(n)]
    edges = [(vs[p], vs[i + 1]) for i, p in enumerate(parents)]
    return OutForest(DirectedGraph(vs, edges))
