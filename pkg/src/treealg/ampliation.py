"""Ampliation of out-trees and the towers it generates.

Ampliating a tree by a multiplicity l replaces every vertex i by a chain
(i,1) -> (i,2) -> ... -> (i,l) and reroutes every tree edge j -> i to the
single edge (j,l) -> (i,1).  Row (i-1)l + s of the next matrix level
corresponds to the vertex (i,s), so the refinement embedding carries the
order algebra of a tree into the order algebra of its ampliation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import DigraphAlgebra, Pair, Unit
from .embeddings import RegularEmbedding
from .errors import NotATree
from .graphs import DirectedGraph, OutForest
from .tower import Tower, TreeRefinementRule


def pair_name(base: str, s: int) -> str:
    return f"({base},{s})"


def ampliate(tree: OutForest, l: int) -> OutForest:
    """The multiplicity-l ampliation of a single out-tree.

    Vertices are named "(v,s)" with v the base vertex and 1 <= s <= l, in
    base declaration order; weights are not carried over.
    """
    if not tree.is_tree():
        raise NotATree("ampliation is defined for single-rooted trees")
    if l < 1:
        raise ValueError("multiplicity must be at least 1")
    vertices = [pair_name(v, s) for v in tree.vertices for s in range(1, l + 1)]
    edges = []
    for v in tree.vertices:
        for s in range(1, l):
            edges.append((pair_name(v, s), pair_name(v, s + 1)))
    for j, i in tree.edges:
        edges.append((pair_name(j, l), pair_name(i, 1)))
    return OutForest(DirectedGraph(vertices, edges))


@dataclass(frozen=True)
class TreeRefinementSpec:
    """An out-tree plus the multiplicity schedule of its tower.

    multiplicities lists the first steps explicitly; stationary, if given,
    repeats forever after they run out.
    """

    base: OutForest
    multiplicities: tuple[int, ...] = ()
    stationary: int | None = None

    def __post_init__(self) -> None:
        if not self.base.is_tree():
            raise NotATree("the base of a tree-refinement tower must be a tree")
        if any(m < 1 for m in self.multiplicities):
            raise ValueError("multiplicities must be positive")
        if self.stationary is not None and self.stationary < 1:
            raise ValueError("the stationary multiplicity must be positive")

    def multiplicity(self, step: int) -> int:
        """Multiplicity applied at step (0-based), or raise when exhausted."""
        if step < len(self.multiplicities):
            return self.multiplicities[step]
        if self.stationary is not None:
            return self.stationary
        raise ValueError(
            f"the multiplicity schedule ends after {len(self.multiplicities)} steps"
        )


def refinement_factor_chain(source_pair: Pair, s: int, l: int) -> list[Pair]:
    """The factor sequence showing a refinement image pair lies in the
    ampliated order.

    For the source pair with range row i and source row j, copy s, the
    image unit e_{(i,s),(j,s)} equals the product of the climb along the
    copy chain of i, the unit e_{(i,1),(j,l)}, and the climb along the
    copy chain of j.  Rows refer to the ampliated level.
    """
    (_, i), (_, j) = source_pair
    def row(base_row: int, t: int) -> int:
        return (base_row - 1) * l + t
    factors: list[Pair] = []
    for z in range(s - 1, 0, -1):
        factors.append(((0, row(i, z + 1)), (0, row(i, z))))
    factors.append(((0, row(i, 1)), (0, row(j, l))))
    for w in range(l - 1, s - 1, -1):
        factors.append(((0, row(j, w + 1)), (0, row(j, w))))
    return factors


def _check_refinement_inclusion(
    src: DigraphAlgebra, tgt: DigraphAlgebra, tree: OutForest, l: int
) -> None:
    # Each image unit must factor through the ampliated order exactly as
    # the chain construction predicts.
    for pair in src.irreflexive_pairs():
        (_, i), (_, j) = pair
        for s in range(1, l + 1):
            factors = refinement_factor_chain(pair, s, l)
            for f in factors:
                if f not in tgt.relation:
                    raise AssertionError(
                        f"factor {f} of the image of {pair} is missing upstairs"
                    )
            for a, b in zip(factors, factors[1:]):
                if a[1] != b[0]:
                    raise AssertionError("factor chain fails to compose")
            product = (factors[0][0], factors[-1][1])
            want = ((0, (i - 1) * l + s), (0, (j - 1) * l + s))
            if product != want:
                raise AssertionError(
                    f"factor chain of {pair} composes to {product}, expected {want}"
                )


def level_algebra(tree: OutForest) -> DigraphAlgebra:
    """The order algebra of a tree, rows following declaration order."""
    return DigraphAlgebra.from_graph(tree.graph)[0]


def refinement_between(tree: OutForest, nxt: OutForest, l: int) -> RegularEmbedding:
    """The refinement embedding from a tree level onto its ampliation.

    nxt must be the ampliation of tree by l, name for name.
    """
    if nxt.graph != ampliate(tree, l).graph:
        raise ValueError("the target is not the multiplicity-l ampliation of the source")
    src = level_algebra(tree)
    tgt = level_algebra(nxt)
    _check_refinement_inclusion(src, tgt, tree, l)
    n = src.blocks[0]
    image = {
        ((0, i), (0, j)): frozenset(
            ((0, (i - 1) * l + s), (0, (j - 1) * l + s)) for s in range(1, l + 1)
        )
        for (_, i), (__, j) in src.relation
    }
    return RegularEmbedding(src, tgt, image)


def build_tree_refinement_tower(spec: TreeRefinementSpec, depth: int) -> Tower:
    """Materialize the first depth levels of the tower of a spec.

    Levels are order algebras of the iterated ampliations; maps are the
    refinement embeddings.  A stationary schedule is recorded as a rule so
    deeper levels can be generated on demand.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    trees = [spec.base]
    for step in range(depth - 1):
        trees.append(ampliate(trees[-1], spec.multiplicity(step)))
    levels = [level_algebra(t) for t in trees]
    maps = [
        refinement_between(trees[k], trees[k + 1], spec.multiplicity(k))
        for k in range(depth - 1)
    ]
    rule = None
    if spec.stationary is not None and len(spec.multiplicities) <= depth - 1:
        rule = TreeRefinementRule(trees[-1], spec.stationary)
    return Tower(levels, maps, rule)
