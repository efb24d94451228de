"""Towers of digraph algebras and the tensor-algebra decision.

A tower stores finitely many levels joined by regular embeddings, plus an
optional rule saying how all further levels continue.  The decision
procedure tracks, for every matrix-unit pair at every level, the grades
of all its summand chains down to the inspected depth:

* Yes requires the tree condition at every level and every chain to be
  settled, meaning its grade freezes right after the chain starts.  A
  fresh pair may jump once when first embedded, never again.  Without a
  rule this is evidence and needs depth at least 3; under a stationary
  rule one clean step repeats forever, which upgrades the evidence to a
  proof.
* No comes from the nest rule directly, from a persistent failure of the
  tree condition, or from a chain grade strictly increasing under a
  stationary rule (the increase then recurs at every later level).
* Everything else is reported honestly as inconclusive, together with
  the chains that refused to stabilize.

On Yes, the certificate is a forest presentation: level by level, the
units whose whole orbit stays at grade 1 form an out-forest, and the
tower's embeddings restrict to maps sending forest edges to sums of
forest edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Sequence

from .algebra import (
    DigraphAlgebra,
    DoubleReceiver,
    Grading,
    NonTreeTriple,
    Pair,
    Unit,
    covering_pairs,
    is_tree_semigroupoid,
    solve_grading,
    unit_name,
)
from .embeddings import RegularEmbedding, refinement_embedding, standard_embedding
from .errors import MismatchedLevels, NotDecidedYes
from .graphs import DirectedGraph, OutForest, recognize_out_forest


@dataclass(frozen=True)
class StandardRule:
    """Repeat standard embeddings of multiplicity m forever."""

    m: int


@dataclass(frozen=True)
class RefinementRule:
    """Repeat refinement embeddings of step l forever."""

    l: int


@dataclass(frozen=True)
class NestRule:
    """All further embeddings are full nest embeddings."""


@dataclass(frozen=True)
class TreeRefinementRule:
    """Keep ampliating the tree of the last stored level by l."""

    tree: OutForest
    l: int


Rule = StandardRule | RefinementRule | NestRule | TreeRefinementRule


class Tower:
    """Immutable list of levels and connecting embeddings, plus a rule."""

    __slots__ = ("_levels", "_maps", "_rule")

    def __init__(
        self,
        levels: Sequence[DigraphAlgebra],
        maps: Sequence[RegularEmbedding],
        rule: Rule | None = None,
    ) -> None:
        lv = tuple(levels)
        mp = tuple(maps)
        if not lv:
            raise MismatchedLevels("a tower needs at least one level")
        if len(mp) != len(lv) - 1:
            raise MismatchedLevels(
                f"{len(lv)} levels need {len(lv) - 1} maps, got {len(mp)}"
            )
        for k, e in enumerate(mp):
            if e.source != lv[k]:
                raise MismatchedLevels(f"map {k} does not start at level {k}")
            if e.target != lv[k + 1]:
                raise MismatchedLevels(f"map {k} does not end at level {k + 1}")
        self._levels = lv
        self._maps = mp
        self._rule = rule

    @property
    def levels(self) -> tuple[DigraphAlgebra, ...]:
        return self._levels

    @property
    def maps(self) -> tuple[RegularEmbedding, ...]:
        return self._maps

    @property
    def rule(self) -> Rule | None:
        return self._rule

    def __repr__(self) -> str:
        r = type(self._rule).__name__ if self._rule is not None else "no rule"
        return f"Tower({len(self._levels)} stored levels, {r})"


def _formula_step(
    level: DigraphAlgebra, positions, size: int
) -> tuple[DigraphAlgebra, RegularEmbedding]:
    """Build the next level as the image algebra of a row-translation formula.

    positions(row) yields the target rows of one diagonal unit, one per
    copy, in copy order.
    """
    if len(level.blocks) != 1:
        raise MismatchedLevels("rule generation needs single-block levels")
    image = {}
    for (b, i), (_, j) in level.relation:
        image[((b, i), (b, j))] = frozenset(
            ((0, pi), (0, pj)) for pi, pj in zip(positions(i), positions(j))
        )
    off = {q for p, v in image.items() for q in v if q[0] != q[1]}
    target = DigraphAlgebra([size], off)
    return target, RegularEmbedding(level, target, image)


def _rule_step(
    level: DigraphAlgebra, rule: Rule
) -> tuple[DigraphAlgebra, RegularEmbedding, Rule]:
    if isinstance(rule, StandardRule):
        n = level.blocks[0] if len(level.blocks) == 1 else None
        if n is None:
            raise MismatchedLevels("standard rule needs single-block levels")
        if level.is_full_upper_triangular():
            e = standard_embedding(n, rule.m)
            return e.target, e, rule
        target, e = _formula_step(
            level, lambda r: [r + k * n for k in range(rule.m)], n * rule.m
        )
        return target, e, rule
    if isinstance(rule, RefinementRule):
        n = level.blocks[0] if len(level.blocks) == 1 else None
        if n is None:
            raise MismatchedLevels("refinement rule needs single-block levels")
        if level.is_full_upper_triangular():
            e = refinement_embedding(n, rule.l)
            return e.target, e, rule
        target, e = _formula_step(
            level,
            lambda r: [(r - 1) * rule.l + s for s in range(1, rule.l + 1)],
            n * rule.l,
        )
        return target, e, rule
    if isinstance(rule, TreeRefinementRule):
        from .ampliation import ampliate, refinement_between

        nxt = ampliate(rule.tree, rule.l)
        e = refinement_between(rule.tree, nxt, rule.l)
        return e.target, e, TreeRefinementRule(nxt, rule.l)
    raise MismatchedLevels(f"cannot generate levels from rule {rule!r}")


def materialize(t: Tower, depth: int) -> tuple[list[DigraphAlgebra], list[RegularEmbedding]]:
    """Levels and maps up to depth, generating from the rule as needed.

    Without a generating rule (none, or the nest rule, which fixes no
    concrete matrices) the result is capped at the stored levels.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    levels = list(t.levels[:depth])
    maps = list(t.maps[: max(0, len(levels) - 1)])
    rule = t.rule
    generable = rule is not None and not isinstance(rule, NestRule)
    while len(levels) < depth and generable:
        nxt, emb, rule = _rule_step(levels[-1], rule)
        levels.append(nxt)
        maps.append(emb)
    return levels, maps


@lru_cache(maxsize=256)
def _local_grades(a: DigraphAlgebra) -> dict[Pair, int]:
    """Grades per pair: the solved grading, or longest factorization length."""
    solved = solve_grading(a)
    if solved:
        assert isinstance(solved, Grading)
        return dict(solved.grade)
    covers = covering_pairs(a)
    up: dict[Unit, list[Unit]] = {u: [] for u in a.units()}
    for i, j in covers:
        up[j].append(i)
    memo: dict[Unit, dict[Unit, int]] = {}

    def longest_from(j: Unit) -> dict[Unit, int]:
        got = memo.get(j)
        if got is None:
            got = {j: 0}
            for i in up[j]:
                for tgt, dist in longest_from(i).items():
                    if dist + 1 > got.get(tgt, -1):
                        got[tgt] = dist + 1
            memo[j] = got
        return got

    grades = {}
    for i, j in a.relation:
        best = longest_from(j).get(i)
        if best is None:
            raise AssertionError(f"pair {(i, j)} admits no covering factorization")
        grades[(i, j)] = best
    return grades


class Verdict(Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SummandChain:
    """One pair followed through consecutive embeddings, one summand each."""

    start_level: int
    pairs: tuple[Pair, ...]


@dataclass(frozen=True)
class ChainGrades:
    chain: SummandChain
    grades: tuple[int, ...]


@dataclass(frozen=True)
class GradeGrowthWitness:
    """A chain whose grade strictly rose across the step at this level."""

    chain: ChainGrades
    level: int


@dataclass(frozen=True)
class NestRuleWitness:
    note: str = "towers continued by full nest embeddings are never tensor algebras"


@dataclass(frozen=True)
class LevelStructureWitness:
    """A tree or covering failure at one level, with its persistence."""

    level: int
    witness: NonTreeTriple | DoubleReceiver
    persisted: bool


@dataclass(eq=False, frozen=True)
class PresentationLevel:
    """One level of a forest presentation.

    forest carries the grade-1 units as edges on the diagonal units;
    algebra is the subalgebra those units generate; embedding restricts
    the tower map and sends forest edges to sums of forest edges.  The
    last level has no embedding.
    """

    level: int
    forest: OutForest
    algebra: DigraphAlgebra
    embedding: RegularEmbedding | None


@dataclass(eq=False, frozen=True)
class ForestPresentation:
    levels: tuple[PresentationLevel, ...]


@dataclass(frozen=True)
class InconclusiveReport:
    reason: str
    unsettled: tuple[ChainGrades, ...] = ()


Certificate = (
    ForestPresentation
    | GradeGrowthWitness
    | NestRuleWitness
    | LevelStructureWitness
    | InconclusiveReport
)


@dataclass(eq=False, frozen=True)
class Decision:
    verdict: Verdict
    inspected_depth: int
    certificate: Certificate


def _structure_witness(a: DigraphAlgebra) -> NonTreeTriple | DoubleReceiver | None:
    tree = is_tree_semigroupoid(a)
    if not tree:
        return tree
    received: dict[Unit, Unit] = {}
    for i, j in covering_pairs(a):
        if i in received:
            return DoubleReceiver(i, (received[i], j))
        received[i] = j
    return None


def _persists(
    w: NonTreeTriple | DoubleReceiver,
    emb: RegularEmbedding,
    nxt: DigraphAlgebra,
) -> bool:
    """Does the failure descend to the next level along the embedding?"""
    if isinstance(w, NonTreeTriple):
        left, right = (w.x, w.y), (w.x, w.z)
    else:
        left, right = (w.x, w.sources[0]), (w.x, w.sources[1])
    for x1, y1 in emb.of(left):
        for x2, z1 in emb.of(right):
            if x1 != x2 or y1 == z1:
                continue
            if not nxt.has_pair(y1, z1) and not nxt.has_pair(z1, y1):
                return True
    return False


def _chains_from(
    maps: Sequence[RegularEmbedding], level: int, pair: Pair, depth: int
) -> Iterable[tuple[Pair, ...]]:
    """All summand chains of a pair from its level down to depth, 1-based."""
    if level == depth:
        yield (pair,)
        return
    for q in sorted(maps[level - 1].of(pair)):
        for rest in _chains_from(maps, level + 1, q, depth):
            yield (pair,) + rest


def _all_chain_grades(
    levels: Sequence[DigraphAlgebra],
    maps: Sequence[RegularEmbedding],
    grades: Sequence[dict[Pair, int]],
) -> list[ChainGrades]:
    out = []
    d = len(levels)
    for k in range(1, d):
        for p in levels[k - 1].irreflexive_pairs():
            for chain in _chains_from(maps, k, p, d):
                seq = tuple(grades[k - 1 + idx][q] for idx, q in enumerate(chain))
                out.append(ChainGrades(SummandChain(k, chain), seq))
    return out


def _is_settled(cg: ChainGrades) -> bool:
    tail = cg.grades[1:]
    return all(g == tail[0] for g in tail) if tail else True


def _forest_presentation(
    levels: Sequence[DigraphAlgebra],
    maps: Sequence[RegularEmbedding],
    grades: Sequence[dict[Pair, int]],
) -> ForestPresentation:
    d = len(levels)
    stab1: list[set[Pair]] = [set() for _ in range(d)]
    stab1[d - 1] = {p for p in levels[d - 1].irreflexive_pairs() if grades[d - 1][p] == 1}
    for k in range(d - 2, -1, -1):
        stab1[k] = {
            p
            for p in levels[k].irreflexive_pairs()
            if grades[k][p] == 1 and maps[k].of(p) <= stab1[k + 1]
        }
    algs = [
        DigraphAlgebra.from_generators(levels[k].blocks, stab1[k]) for k in range(d)
    ]
    entries = []
    for k in range(d):
        vs = [unit_name(u) for u in levels[k].units()]
        edges = [(unit_name(j), unit_name(i)) for i, j in sorted(stab1[k])]
        forest = recognize_out_forest(DirectedGraph(vs, edges))
        if not forest:
            raise AssertionError("grade-1 units of a Yes tower must form a forest")
        emb = None
        if k < d - 1:
            img = {q: maps[k].of(q) for q in algs[k].relation}
            emb = RegularEmbedding(algs[k], algs[k + 1], img)
        entries.append(PresentationLevel(k + 1, forest, algs[k], emb))
    if algs[d - 1].relation != levels[d - 1].relation:
        raise AssertionError("grade-1 units must generate the final level")
    return ForestPresentation(tuple(entries))


def decide_tensor(t: Tower, depth: int = 4) -> Decision:
    """Decide whether the limit of the tower is a tensor algebra.

    See the module docstring for the exact Yes/No/Inconclusive semantics.
    The result is deterministic in the tower and the depth.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if isinstance(t.rule, NestRule):
        return Decision(Verdict.NO, depth, NestRuleWitness())

    levels, maps = materialize(t, depth)
    d = len(levels)
    grades = [_local_grades(a) for a in levels]

    failures: list[tuple[int, NonTreeTriple | DoubleReceiver]] = []
    for k, a in enumerate(levels, start=1):
        w = _structure_witness(a)
        if w is not None:
            failures.append((k, w))
    for k, w in failures:
        if k < d:
            nxt, emb = levels[k], maps[k - 1]
        else:
            ext_levels, ext_maps = materialize(t, d + 1)
            if len(ext_levels) <= d:
                continue
            nxt, emb = ext_levels[d], ext_maps[d - 1]
        if _persists(w, emb, nxt):
            return Decision(Verdict.NO, d, LevelStructureWitness(k, w, True))
    if failures:
        k, w = failures[0]
        return Decision(
            Verdict.INCONCLUSIVE,
            d,
            InconclusiveReport(
                f"level {k} fails the tree condition but the failure was "
                f"not confirmed persistent"
            ),
        )

    chains = _all_chain_grades(levels, maps, grades)
    stationary = isinstance(t.rule, (StandardRule, RefinementRule, TreeRefinementRule))
    for cg in chains:
        for i in range(len(cg.grades) - 1):
            if cg.grades[i + 1] > cg.grades[i]:
                if stationary:
                    return Decision(
                        Verdict.NO, d, GradeGrowthWitness(cg, cg.chain.start_level + i)
                    )
    unsettled = tuple(cg for cg in chains if not _is_settled(cg))

    if stationary:
        if d >= 2:
            return Decision(Verdict.YES, d, _forest_presentation(levels, maps, grades))
        return Decision(
            Verdict.INCONCLUSIVE,
            d,
            InconclusiveReport("depth 1 shows no embedding step"),
        )
    if unsettled:
        return Decision(
            Verdict.INCONCLUSIVE,
            d,
            InconclusiveReport("some chain grades changed after their first step", unsettled),
        )
    if d >= 3:
        return Decision(Verdict.YES, d, _forest_presentation(levels, maps, grades))
    return Decision(
        Verdict.INCONCLUSIVE,
        d,
        InconclusiveReport(
            f"stabilization over {d} levels is too short without a rule; "
            f"need depth at least 3"
        ),
    )


def counting_grade(t: Tower, level: int, pair: Pair, depth: int) -> list[ChainGrades]:
    """Grade sequences of every summand chain of one pair down to depth."""
    levels, maps = materialize(t, depth)
    d = len(levels)
    if not 1 <= level <= d:
        raise ValueError(f"level {level} outside the materialized tower of depth {d}")
    if pair not in levels[level - 1].relation:
        raise ValueError(f"pair {pair} is not a unit of level {level}")
    grades = [_local_grades(a) for a in levels]
    out = []
    for chain in _chains_from(maps, level, pair, d):
        seq = tuple(grades[level - 1 + idx][q] for idx, q in enumerate(chain))
        out.append(ChainGrades(SummandChain(level, chain), seq))
    return out


def reconstruct_forest_presentation(t: Tower, depth: int) -> ForestPresentation:
    """The Yes certificate of the tower, or NotDecidedYes."""
    decision = decide_tensor(t, depth)
    if decision.verdict is not Verdict.YES:
        raise NotDecidedYes(
            f"tower is {decision.verdict.value} at depth {depth}, not yes"
        )
    assert isinstance(decision.certificate, ForestPresentation)
    return decision.certificate


def edge_space_level(t: Tower, depth: int) -> DirectedGraph:
    """The grade-1 pairs at the final inspected level, as a digraph."""
    cert = reconstruct_forest_presentation(t, depth)
    return cert.levels[-1].forest.graph
