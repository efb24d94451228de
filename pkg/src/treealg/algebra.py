"""Digraph algebras and integer gradings of their matrix-unit relations.

A digraph algebra is determined by block sizes and a set of matrix-unit
pairs (i, j), each meaning the unit with range i and source j inside one
full matrix block.  The stored relation is reflexive, transitive and
antisymmetric; pairs compose by (i, j) * (j, k) = (i, k).

A grading assigns a nonnegative integer to every pair so that diagonal
pairs get 0, grades add under composition, and a grade-k pair factors into
k grade-1 steps.  Such a grading exists exactly when the relation is the
order generated by an out-forest, and then it is the covering-chain
length; both facts are decided here at the finite level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import CyclicGraph
from .graphs import DirectedGraph, OutForest, recognize_out_forest, transitive_completion

Unit = tuple[int, int]
Pair = tuple[Unit, Unit]


def unit_name(u: Unit) -> str:
    return f"{u[0]}:{u[1]}"


class DigraphAlgebra:
    """Block sizes plus a reflexive transitive antisymmetric unit relation."""

    __slots__ = ("_blocks", "_relation")

    def __init__(self, blocks: Iterable[int], units: Iterable[Pair] = ()) -> None:
        bl = tuple(blocks)
        if not bl or any(not isinstance(n, int) or n < 1 for n in bl):
            raise ValueError("blocks must be a nonempty list of positive sizes")
        rel: set[Pair] = set()
        for b, n in enumerate(bl):
            for r in range(1, n + 1):
                rel.add(((b, r), (b, r)))
        for i, j in units:
            self._check_unit(bl, i)
            self._check_unit(bl, j)
            if i[0] != j[0]:
                raise ValueError(f"pair {i} / {j} crosses blocks")
            rel.add((i, j))
        for i, j in rel:
            if i != j and (j, i) in rel:
                raise ValueError(f"pairs ({i},{j}) and ({j},{i}) break antisymmetry")
        for i, j in rel:
            for k, l in rel:
                if j == k and (i, l) not in rel:
                    raise ValueError(
                        f"missing composite ({i},{l}) of ({i},{j}) and ({k},{l})"
                    )
        self._blocks = bl
        self._relation = frozenset(rel)

    @staticmethod
    def _check_unit(blocks: tuple[int, ...], u: Unit) -> None:
        b, r = u
        if not (0 <= b < len(blocks)) or not (1 <= r <= blocks[b]):
            raise ValueError(f"unit {u} is out of range for blocks {list(blocks)}")

    @classmethod
    def from_generators(cls, blocks: Iterable[int], units: Iterable[Pair]) -> "DigraphAlgebra":
        """Close the given pairs transitively, then build the algebra."""
        rel = set(units)
        changed = True
        while changed:
            changed = False
            for i, j in list(rel):
                for k, l in list(rel):
                    if j == k and (i, l) not in rel:
                        rel.add((i, l))
                        changed = True
        return cls(blocks, rel)

    @classmethod
    def upper_triangular(cls, n: int) -> "DigraphAlgebra":
        return cls([n], [((0, i), (0, j)) for i in range(1, n + 1) for j in range(i, n + 1)])

    @classmethod
    def diagonal(cls, blocks: Iterable[int]) -> "DigraphAlgebra":
        return cls(blocks)

    @classmethod
    def from_graph(cls, g: DirectedGraph | OutForest) -> tuple["DigraphAlgebra", dict[str, Unit]]:
        """The algebra of the strict order generated by an acyclic graph.

        Vertex k in declaration order becomes diagonal unit (0, k+1); an
        edge u -> v of the closure contributes the pair (unit(v), unit(u)).
        Returns the algebra together with the vertex-to-unit map.
        """
        graph = g.graph if isinstance(g, OutForest) else g
        comp = transitive_completion(graph)
        to_unit = {v: (0, k + 1) for k, v in enumerate(comp.vertices)}
        pairs = [(to_unit[t], to_unit[s]) for s, t in comp.edges]
        return cls([len(comp.vertices)], pairs), to_unit

    @property
    def blocks(self) -> tuple[int, ...]:
        return self._blocks

    @property
    def relation(self) -> frozenset[Pair]:
        return self._relation

    def units(self) -> list[Unit]:
        return [(b, r) for b, n in enumerate(self._blocks) for r in range(1, n + 1)]

    def irreflexive_pairs(self) -> list[Pair]:
        out = [(i, j) for i, j in self._relation if i != j]
        out.sort()
        return out

    def has_pair(self, i: Unit, j: Unit) -> bool:
        return (i, j) in self._relation

    def is_full_upper_triangular(self) -> bool:
        if len(self._blocks) != 1:
            return False
        n = self._blocks[0]
        return len(self._relation) == n * (n + 1) // 2

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DigraphAlgebra):
            return NotImplemented
        return self._blocks == other._blocks and self._relation == other._relation

    def __hash__(self) -> int:
        return hash((self._blocks, self._relation))

    def __repr__(self) -> str:
        off = sum(1 for i, j in self._relation if i != j)
        return f"DigraphAlgebra(blocks={list(self._blocks)}, {off} off-diagonal units)"


def semigroupoid_graph(a: DigraphAlgebra) -> DirectedGraph:
    """Diagonal units as vertices; a pair (i, j) becomes the edge j -> i."""
    vs = [unit_name(u) for u in a.units()]
    edges = [(unit_name(j), unit_name(i)) for i, j in a.irreflexive_pairs()]
    return DirectedGraph(vs, edges)


@dataclass(frozen=True)
class NonTreeTriple:
    """Units x, y, z with pairs (x, y) and (x, z) but y, z incomparable."""

    x: Unit
    y: Unit
    z: Unit

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class DoubleReceiver:
    """A unit receiving two covering pairs, with the two sources."""

    x: Unit
    sources: tuple[Unit, Unit]

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class AdditivityConflict:
    """Composable pairs whose candidate grades fail to add up."""

    left: Pair
    right: Pair
    expected: int
    got: int

    def __bool__(self) -> bool:
        return False


InfeasibilityWitness = NonTreeTriple | DoubleReceiver | AdditivityConflict


def is_tree_semigroupoid(a: DigraphAlgebra) -> "bool | NonTreeTriple":
    """True, or a falsy counterexample triple.

    The condition: whenever pairs (x, y) and (x, z) are present with
    y != z, then y and z are comparable.
    """
    by_range: dict[Unit, list[Unit]] = {}
    for i, j in a.irreflexive_pairs():
        by_range.setdefault(i, []).append(j)
    for x, sources in by_range.items():
        for p in range(len(sources)):
            for q in range(p + 1, len(sources)):
                y, z = sources[p], sources[q]
                if not (a.has_pair(y, z) or a.has_pair(z, y)):
                    return NonTreeTriple(x, y, z)
    return True


def covering_pairs(a: DigraphAlgebra) -> frozenset[Pair]:
    """Pairs (i, j) with no unit strictly between j and i."""
    out = set()
    units = a.units()
    for i, j in a.irreflexive_pairs():
        if not any(
            m not in (i, j) and a.has_pair(i, m) and a.has_pair(m, j)
            for m in units
        ):
            out.add((i, j))
    return frozenset(out)


@dataclass(frozen=True)
class Grading:
    """A coherent additive integer grading of an algebra's relation."""

    algebra: DigraphAlgebra
    grade: dict[Pair, int]

    def __post_init__(self) -> None:
        rel = self.algebra.relation
        if set(self.grade) != set(rel):
            raise ValueError("grading must cover the relation exactly")
        for (i, j), g in self.grade.items():
            if (g == 0) != (i == j):
                raise ValueError(f"grade of {(i, j)} must be 0 iff diagonal, got {g}")
            if g < 0:
                raise ValueError("grades must be nonnegative")
        for i, j in rel:
            for k, l in rel:
                if j == k:
                    if self.grade[(i, l)] != self.grade[(i, j)] + self.grade[(k, l)]:
                        raise ValueError(
                            f"grades fail to add on ({i},{j}) * ({k},{l})"
                        )
        # Coherence: a grade-k pair splits off a grade-1 step at the top.
        for (i, j), g in self.grade.items():
            if g >= 2:
                if not any(
                    self.grade.get((i, m)) == 1 and self.grade.get((m, j)) == g - 1
                    for m in self.algebra.units()
                ):
                    raise ValueError(f"pair {(i, j)} of grade {g} has no factorization")

    def of(self, pair: Pair) -> int:
        return self.grade[pair]

    def __bool__(self) -> bool:
        return True


def solve_grading(a: DigraphAlgebra) -> Grading | InfeasibilityWitness:
    """Find the unique coherent grading, or say why none exists.

    Strategy: the relation must satisfy the tree condition; then its
    covering pairs form an out-forest on the diagonal units and the grade
    of a pair is the length of the covering chain joining its source to
    its range.  Additivity is re-checked explicitly, so any internal
    inconsistency surfaces as a witness rather than a wrong grading.
    """
    tree = is_tree_semigroupoid(a)
    if not tree:
        return tree

    covers = covering_pairs(a)
    received: dict[Unit, Unit] = {}
    for i, j in covers:
        if i in received:
            return DoubleReceiver(i, (received[i], j))
        received[i] = j

    # Walk up the (unique) covering chain from each unit.
    def chain_length(i: Unit, j: Unit) -> int | None:
        steps = 0
        cur = i
        while cur != j:
            nxt = received.get(cur)
            if nxt is None:
                return None
            cur = nxt
            steps += 1
        return steps

    grade: dict[Pair, int] = {}
    for i, j in a.relation:
        if i == j:
            grade[(i, j)] = 0
            continue
        k = chain_length(i, j)
        if k is None:
            # Cannot happen for a valid finite order, kept as a guard.
            return AdditivityConflict((i, j), (j, j), expected=-1, got=-1)
        grade[(i, j)] = k

    for i, j in a.relation:
        for k, l in a.relation:
            if j == k:
                want = grade[(i, j)] + grade[(k, l)]
                if grade[(i, l)] != want:
                    return AdditivityConflict((i, j), (k, l), want, grade[(i, l)])
    return Grading(a, grade)


def one_elementary_units(a: DigraphAlgebra, g: Grading) -> frozenset[Pair]:
    """The grade-1 pairs of a graded algebra."""
    if g.algebra != a:
        raise ValueError("grading belongs to a different algebra")
    return frozenset(p for p, k in g.grade.items() if k == 1)


def grade_1_forest(a: DigraphAlgebra, g: Grading) -> OutForest:
    """The grade-1 pairs as an out-forest on the diagonal units."""
    vs = [unit_name(u) for u in a.units()]
    edges = [(unit_name(j), unit_name(i)) for i, j in one_elementary_units(a, g)]
    got = recognize_out_forest(DirectedGraph(vs, edges))
    if not got:
        raise CyclicGraph("grade-1 pairs of a graded algebra must form a forest")
    return got
