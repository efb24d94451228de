"""Regular multiplicity embeddings between digraph algebras.

An embedding maps every relation pair of the source to a nonempty set of
relation pairs of the target.  Validation enforces the shape such a map
must have to come from a star-extendable algebra homomorphism:

* diagonal units go to disjoint sets of diagonal units,
* the images of a pair biject with the diagonal images of its range and
  source units,
* images compose: im(i,j) * im(j,k) = im(i,k) pairwise.

The two classical single-block constructors are provided.  With block
size n and multiplicity m, the standard embedding sends e_ij to the sum
of e_{i+kn, j+kn} over k < m; with step l the refinement embedding sends
e_ij to the sum of e_{(i-1)l+s, (j-1)l+s} over 1 <= s <= l.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .algebra import DigraphAlgebra, Pair, Unit
from .errors import (
    IllFormedAttachment,
    InconsistentMultiplicity,
    MismatchedLevels,
    MultiBlockUnsupported,
)
from .graphs import OutForest


class RegularEmbedding:
    """A validated pair-image map between two digraph algebras."""

    __slots__ = ("_source", "_target", "_image")

    def __init__(
        self,
        source: DigraphAlgebra,
        target: DigraphAlgebra,
        image: Mapping[Pair, Iterable[Pair]],
    ) -> None:
        img: dict[Pair, frozenset[Pair]] = {p: frozenset(v) for p, v in image.items()}
        if set(img) != set(source.relation):
            missing = set(source.relation) - set(img)
            extra = set(img) - set(source.relation)
            raise ValueError(
                f"image must cover the source relation exactly "
                f"(missing {len(missing)}, extra {len(extra)})"
            )
        for p, v in img.items():
            if not v:
                raise ValueError(f"pair {p} has an empty image")
            for q in v:
                if q not in target.relation:
                    raise ValueError(f"image pair {q} of {p} is not in the target relation")
        diag: dict[Unit, frozenset[Unit]] = {}
        for d in source.units():
            im = img[(d, d)]
            if any(i != j for i, j in im):
                raise ValueError(f"diagonal unit {d} maps to off-diagonal pairs")
            diag[d] = frozenset(i for i, _ in im)
        seen: dict[Unit, Unit] = {}
        for d, s in diag.items():
            for t in s:
                if t in seen:
                    raise ValueError(
                        f"diagonal images of {seen[t]} and {d} both contain {t}"
                    )
                seen[t] = d
        for (i, j), v in img.items():
            if i == j:
                continue
            ranges = [a for a, _ in v]
            sources = [b for _, b in v]
            if len(set(ranges)) != len(v) or set(ranges) != set(diag[i]):
                raise ValueError(
                    f"ranges of the image of {(i, j)} must enumerate the "
                    f"diagonal image of {i} exactly once each"
                )
            if len(set(sources)) != len(v) or set(sources) != set(diag[j]):
                raise ValueError(
                    f"sources of the image of {(i, j)} must enumerate the "
                    f"diagonal image of {j} exactly once each"
                )
        rel = source.relation
        for i, j in rel:
            for k, l in rel:
                if j != k:
                    continue
                composed = frozenset(
                    (a, c) for a, b in img[(i, j)] for b2, c in img[(k, l)] if b == b2
                )
                if composed != img[(i, l)]:
                    raise ValueError(
                        f"images of ({i},{j}) and ({k},{l}) compose to "
                        f"{sorted(composed)} but ({i},{l}) maps to {sorted(img[(i, l)])}"
                    )
        self._source = source
        self._target = target
        self._image = img

    @property
    def source(self) -> DigraphAlgebra:
        return self._source

    @property
    def target(self) -> DigraphAlgebra:
        return self._target

    @property
    def image(self) -> dict[Pair, frozenset[Pair]]:
        return dict(self._image)

    def of(self, pair: Pair) -> frozenset[Pair]:
        return self._image[pair]

    def diag_image(self, unit: Unit) -> frozenset[Unit]:
        return frozenset(i for i, _ in self._image[(unit, unit)])

    def multiplicity_of(self, unit: Unit) -> int:
        return len(self._image[(unit, unit)])

    def restrict(
        self,
        source: DigraphAlgebra,
        target: DigraphAlgebra | None = None,
    ) -> "RegularEmbedding":
        """The same map on a subalgebra of the source (and optionally a
        smaller target)."""
        if source.blocks != self._source.blocks or not source.relation <= self._source.relation:
            raise ValueError("restriction source must be a subalgebra of the source")
        img = {p: self._image[p] for p in source.relation}
        return RegularEmbedding(source, target if target is not None else self._target, img)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RegularEmbedding):
            return NotImplemented
        return (
            self._source == other._source
            and self._target == other._target
            and self._image == other._image
        )

    def __repr__(self) -> str:
        return f"RegularEmbedding({self._source!r} -> {self._target!r})"


@dataclass(frozen=True)
class MultiplicityData:
    """Copy counts per (target block, source block), derived on demand.

    counts[c][b] tells how many times source block b is copied into
    target block c.  Never stored on the embedding; recompute as needed.
    """

    counts: tuple[tuple[int, ...], ...]


def multiplicity_data(e: RegularEmbedding) -> MultiplicityData:
    """Copy counts of e, checked for consistency across each source block.

    Raises InconsistentMultiplicity when two units of one source block
    are copied a different number of times into some target block; such a
    map cannot extend to the enveloping sum of full matrix algebras.
    """
    sb = len(e.source.blocks)
    tb = len(e.target.blocks)
    counts = [[0] * sb for _ in range(tb)]
    for b in range(sb):
        per_unit = []
        for r in range(1, e.source.blocks[b] + 1):
            tally = [0] * tb
            for c, _row in e.diag_image((b, r)):
                tally[c] += 1
            per_unit.append(tally)
        first = per_unit[0]
        for r, tally in enumerate(per_unit[1:], start=2):
            if tally != first:
                raise InconsistentMultiplicity(
                    f"units (b{b}, r1) and (b{b}, r{r}) have diagonal images "
                    f"of different shape: {first} vs {tally}"
                )
        for c in range(tb):
            counts[c][b] = first[c]
    for c in range(tb):
        used = sum(counts[c][b] * e.source.blocks[b] for b in range(sb))
        if used > e.target.blocks[c]:
            raise InconsistentMultiplicity(
                f"target block {c} of size {e.target.blocks[c]} cannot hold "
                f"{used} copied rows"
            )
    return MultiplicityData(tuple(tuple(row) for row in counts))


def identity_embedding(a: DigraphAlgebra) -> RegularEmbedding:
    return RegularEmbedding(a, a, {p: {p} for p in a.relation})


def standard_embedding(n: int, m: int) -> RegularEmbedding:
    """The multiplicity-m standard embedding on upper triangular algebras.

    e_ij goes to the sum of its m diagonal translates e_{i+kn, j+kn}.
    """
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    src = DigraphAlgebra.upper_triangular(n)
    tgt = DigraphAlgebra.upper_triangular(n * m)
    image = {
        ((0, i), (0, j)): frozenset(((0, i + k * n), (0, j + k * n)) for k in range(m))
        for (_, i), (__, j) in src.relation
    }
    return RegularEmbedding(src, tgt, image)


def refinement_embedding(n: int, l: int) -> RegularEmbedding:
    """The step-l refinement embedding on upper triangular algebras.

    e_ij goes to the sum of e_{(i-1)l+s, (j-1)l+s} over 1 <= s <= l.
    """
    if n < 1 or l < 1:
        raise ValueError("need n >= 1 and l >= 1")
    src = DigraphAlgebra.upper_triangular(n)
    tgt = DigraphAlgebra.upper_triangular(n * l)
    image = {
        ((0, i), (0, j)): frozenset(
            ((0, (i - 1) * l + s), (0, (j - 1) * l + s)) for s in range(1, l + 1)
        )
        for (_, i), (__, j) in src.relation
    }
    return RegularEmbedding(src, tgt, image)


def compose(f: RegularEmbedding, g: RegularEmbedding) -> RegularEmbedding:
    """Apply f, then g.  Requires f.target == g.source."""
    if f.target != g.source:
        raise MismatchedLevels("target of the first embedding must equal source of the second")
    image = {
        p: frozenset(r for q in f.of(p) for r in g.of(q))
        for p in f.source.relation
    }
    return RegularEmbedding(f.source, g.target, image)


def _descend_copy(
    tree: OutForest,
    target: OutForest,
    root: str,
    anchor: str,
    taken: set[str],
) -> dict[str, str]:
    """Extend root -> anchor to a full edge-preserving injection of tree
    into target, children matched deterministically in declaration order.

    Raises IllFormedAttachment when no extension exists.
    """
    if anchor in taken:
        raise IllFormedAttachment(f"target vertex {anchor!r} is already used")
    phi = {root: anchor}
    used = set(taken) | {anchor}
    def place(v: str, t: str) -> None:
        free = [c for c in target.children(t) if c not in used]
        for child in tree.children(v):
            for c in list(free):
                sub = tree.subtree_vertices(child)
                avail = set(target.subtree_vertices(c)) - used
                if len(avail) < len(sub):
                    continue
                free.remove(c)
                phi[child] = c
                used.add(c)
                place(child, c)
                break
            else:
                raise IllFormedAttachment(
                    f"no free child of {t!r} can host the branch at {child!r}"
                )
    place(root, anchor)
    # Greedy by-order placement can fail where a different assignment
    # works; re-check the result and report honestly if it broke.
    for s, t in tree.edges:
        if (phi[s], phi[t]) not in target.edges:
            raise IllFormedAttachment(
                f"edge {s!r} -> {t!r} does not land on a target edge"
            )
    return phi


def tree_standard_embedding(
    sources: list[OutForest],
    target: OutForest,
    attach: list[Mapping[str, str]],
) -> RegularEmbedding:
    """Embed a disjoint union of out-trees onto branches of a target forest.

    Each entry of attach describes one copy: a map from source vertices to
    target vertices.  A copy may give only the roots (with the special
    value "new-root" meaning the first unused target root); the rest of
    each tree is then placed along the target branches in declaration
    order.  Every copy must send edges to single target edges and the
    copies must not overlap; that is exactly what makes the induced
    embedding send edge generators to sums of edge generators.
    """
    for t in sources:
        if not t.is_tree():
            raise IllFormedAttachment("each source component must be a single out-tree")
    all_src = [v for t in sources for v in t.vertices]
    if len(set(all_src)) != len(all_src):
        raise IllFormedAttachment("source trees must use distinct vertex names")
    if not attach:
        raise IllFormedAttachment("at least one copy is required")

    tvs = set(target.vertices)
    taken: set[str] = set()
    copies: list[dict[str, str]] = []
    for copy_no, spec in enumerate(attach):
        spec = dict(spec)
        phi: dict[str, str] = {}
        for t in sources:
            root = t.single_root()
            if set(t.vertices) <= set(spec):
                # Fully explicit copy: validate as given.
                part = {v: spec[v] for v in t.vertices}
                if any(w not in tvs for w in part.values()):
                    raise IllFormedAttachment("attachment names an unknown target vertex")
                if len(set(part.values())) != len(part):
                    raise IllFormedAttachment("copy map is not injective")
                if set(part.values()) & taken:
                    raise IllFormedAttachment("copies overlap on the target")
                for s, u in t.edges:
                    if (part[s], part[u]) not in target.edges:
                        raise IllFormedAttachment(
                            f"edge {s!r} -> {u!r} does not land on a target edge"
                        )
                phi.update(part)
                taken.update(part.values())
            else:
                anchor = spec.get(root)
                if anchor is None:
                    raise IllFormedAttachment(
                        f"copy {copy_no} gives no image for root {root!r}"
                    )
                if anchor == "new-root":
                    free_roots = [r for r in target.roots if r not in taken]
                    if not free_roots:
                        raise IllFormedAttachment("no unused target root available")
                    anchor = free_roots[0]
                elif anchor not in tvs:
                    raise IllFormedAttachment(f"unknown target vertex {anchor!r}")
                part = _descend_copy(t, target, root, anchor, taken)
                phi.update(part)
                taken.update(part.values())
        copies.append(phi)

    blocks = [len(t.vertices) for t in sources]
    unit_of: dict[str, Unit] = {}
    for b, t in enumerate(sources):
        for k, v in enumerate(t.vertices):
            unit_of[v] = (b, k + 1)
    src_pairs: list[Pair] = []
    for b, t in enumerate(sources):
        comp = DigraphAlgebra.from_graph(t.graph)[0]
        for (i, j) in comp.irreflexive_pairs():
            src_pairs.append(((b, i[1]), (b, j[1])))
    src_alg = DigraphAlgebra(blocks, src_pairs)
    tgt_alg, t_unit = DigraphAlgebra.from_graph(target.graph)

    vertex_of = {u: v for v, u in unit_of.items()}
    image: dict[Pair, set[Pair]] = {}
    for i, j in src_alg.relation:
        vi, vj = vertex_of[i], vertex_of[j]
        image[(i, j)] = {(t_unit[phi[vi]], t_unit[phi[vj]]) for phi in copies}
    try:
        return RegularEmbedding(src_alg, tgt_alg, image)
    except ValueError as exc:
        raise IllFormedAttachment(str(exc)) from exc


def normalized_trace(units: Iterable[Unit], a: DigraphAlgebra) -> Fraction:
    """Size of a diagonal projection over the block dimension, exactly."""
    if len(a.blocks) != 1:
        raise MultiBlockUnsupported(
            "the normalized trace is defined for single-block algebras"
        )
    us = set(units)
    for unit in us:
        DigraphAlgebra._check_unit(a.blocks, unit)
    return Fraction(len(us), a.blocks[0])
