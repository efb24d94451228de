"""Numerics for finite graph correspondences.

Vectors live on the edge set of a fixed graph; the module inner product
collects conjugated products of amplitudes at each source vertex and the
norm takes the largest per-vertex square root.  For an edge written
(u, v), u is the range and v the source, matching the matrix-unit
convention where the unit of a pair acts from its source column to its
range row.

The partial-isometry family realizes the five vertex/edge relations on
the space of directed paths up to a length cutoff.  Path matrices have
integer entries, so relation checks are exact; the only truncation
artifact is the isometry identity on paths of maximal length, which the
verification report tracks separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import GraphMismatch, PreconditionViolated
from .graphs import DirectedGraph

Edge = tuple[str, str]


def edge_range(e: Edge) -> str:
    return e[0]


def edge_source(e: Edge) -> str:
    return e[1]


class GraphCorrespondenceVector:
    """Complex amplitudes supported on the edges of one graph."""

    __slots__ = ("_graph", "_amp")

    def __init__(
        self, graph: DirectedGraph, amplitudes: Mapping[Edge, complex] | None = None
    ) -> None:
        amp = {}
        for e, a in (amplitudes or {}).items():
            if not graph.has_edge(*e):
                raise ValueError(f"amplitude on undeclared edge {e}")
            amp[e] = complex(a)
        self._graph = graph
        self._amp = amp

    @property
    def graph(self) -> DirectedGraph:
        return self._graph

    def amplitude(self, e: Edge) -> complex:
        return self._amp.get(e, 0j)

    @property
    def support(self) -> frozenset[Edge]:
        return frozenset(e for e, a in self._amp.items() if a != 0)

    def __add__(self, other: "GraphCorrespondenceVector") -> "GraphCorrespondenceVector":
        if not isinstance(other, GraphCorrespondenceVector):
            return NotImplemented
        if self._graph != other._graph:
            raise GraphMismatch("vectors live on different graphs")
        amp = dict(self._amp)
        for e, a in other._amp.items():
            amp[e] = amp.get(e, 0j) + a
        return GraphCorrespondenceVector(self._graph, amp)

    def __repr__(self) -> str:
        return f"GraphCorrespondenceVector({len(self.support)} supported edges)"


def module_inner_product(
    x: GraphCorrespondenceVector, y: GraphCorrespondenceVector
) -> dict[str, complex]:
    """Per-vertex sums of conjugate(x)·y over edges with that source."""
    if x.graph != y.graph:
        raise GraphMismatch("inner product needs a common graph")
    out = {v: 0j for v in x.graph.vertices}
    for e in x.graph.edges:
        out[edge_source(e)] += x.amplitude(e).conjugate() * y.amplitude(e)
    return out


def module_norm(x: GraphCorrespondenceVector) -> float:
    """Largest per-vertex square root of the self inner product."""
    ip = module_inner_product(x, x)
    if not ip:
        return 0.0
    return max(math.sqrt(max(v.real, 0.0)) for v in ip.values())


Path = tuple[str, tuple[Edge, ...]]
# A path is (range vertex, composable edge tuple); the empty tuple is the
# length-0 path sitting at its vertex.


def _enumerate_paths(g: DirectedGraph, cutoff: int) -> list[Path]:
    edges = sorted(g.edges)
    paths: list[Path] = [(v, ()) for v in g.vertices]
    frontier = list(paths)
    for _ in range(cutoff):
        nxt: list[Path] = []
        for r, es in frontier:
            tail = edge_source(es[-1]) if es else r
            for e in edges:
                if edge_range(e) == tail:
                    nxt.append((r, es + (e,)))
        paths.extend(nxt)
        frontier = nxt
    return paths


@dataclass(eq=False)
class PartialIsometryFamily:
    """Vertex projections and edge maps on a truncated path space."""

    graph: DirectedGraph
    cutoff: int
    paths: tuple[Path, ...]
    vertex_projections: dict[str, np.ndarray]
    edge_isometries: dict[Edge, np.ndarray]

    @property
    def dimension(self) -> int:
        return len(self.paths)


def build_ckt_family(g: DirectedGraph, cutoff: int = 4) -> PartialIsometryFamily:
    """Concrete integer matrices for the vertex/edge relation family.

    The space is spanned by the directed paths of length at most cutoff.
    A vertex projection keeps the paths ranging at its vertex; an edge
    map prepends its edge where composable and the result still fits.
    """
    if cutoff < 0:
        raise ValueError("the cutoff must be nonnegative")
    paths = _enumerate_paths(g, cutoff)
    index = {p: i for i, p in enumerate(paths)}
    dim = len(paths)
    projections = {}
    for v in g.vertices:
        m = np.zeros((dim, dim), dtype=np.int64)
        for p, i in index.items():
            if p[0] == v:
                m[i, i] = 1
        projections[v] = m
    isometries = {}
    for e in sorted(g.edges):
        m = np.zeros((dim, dim), dtype=np.int64)
        for (r, es), i in index.items():
            if r == edge_source(e) and len(es) < cutoff:
                target = (edge_range(e), (e,) + es)
                m[index[target], i] = 1
        isometries[e] = m
    return PartialIsometryFamily(g, cutoff, tuple(paths), projections, isometries)


@dataclass(frozen=True)
class RelationCheck:
    residual: int
    exact: bool
    note: str = ""


@dataclass(frozen=True)
class CKTReport:
    """Per-relation residuals of a family, all entrywise integers.

    ok means the relations hold in the truncated sense: everything exact
    except possibly the isometry identity on maximal-length paths.
    exact means no truncation artifact at all.
    """

    checks: dict[str, RelationCheck]

    @property
    def ok(self) -> bool:
        return all(c.exact for name, c in self.checks.items() if name != "isometry")

    @property
    def exact(self) -> bool:
        return all(c.exact for c in self.checks.values())


def verify_ckt(fam: PartialIsometryFamily) -> CKTReport:
    """Entrywise verification of the five relations of the family."""
    L = fam.vertex_projections
    T = fam.edge_isometries
    checks: dict[str, RelationCheck] = {}

    r = 0
    for p in fam.graph.vertices:
        for q in fam.graph.vertices:
            if p != q:
                r = max(r, int(np.abs(L[p] @ L[q]).max(initial=0)))
    checks["orthogonal-vertices"] = RelationCheck(r, r == 0)

    r = 0
    for e in T:
        for f in T:
            if e != f:
                r = max(r, int(np.abs(T[e].T @ T[f]).max(initial=0)))
    checks["orthogonal-edges"] = RelationCheck(r, r == 0)

    # The isometry identity can only fail on paths of maximal length,
    # where prepending the edge would overflow the cutoff.
    full = 0
    interior = 0
    for e, m in T.items():
        diff = m.T @ m - L[edge_source(e)]
        full = max(full, int(np.abs(diff).max(initial=0)))
        for (rv, es), i in zip(fam.paths, range(fam.dimension)):
            if len(es) < fam.cutoff:
                interior = max(interior, int(abs(diff[i, i])))
    note = "" if full == 0 else "restricted to paths shorter than the cutoff"
    checks["isometry"] = RelationCheck(full, full == 0, note)
    checks["isometry-interior"] = RelationCheck(interior, interior == 0)

    r = 0
    for e, m in T.items():
        excess = m @ m.T - L[edge_range(e)]
        r = max(r, int(excess.max(initial=0)))
    checks["range-domination"] = RelationCheck(r, r <= 0)

    r = 0
    for p in fam.graph.vertices:
        total = np.zeros((fam.dimension, fam.dimension), dtype=np.int64)
        for e, m in T.items():
            if edge_range(e) == p:
                total = total + m @ m.T
        excess = total - L[p]
        r = max(r, int(excess.max(initial=0)))
    checks["summed-domination"] = RelationCheck(r, r <= 0)

    return CKTReport(checks)


def vector_operator(
    fam: PartialIsometryFamily, x: GraphCorrespondenceVector
) -> np.ndarray:
    """The matrix representing a vector: its amplitude-weighted edge maps."""
    if x.graph != fam.graph:
        raise GraphMismatch("the vector lives on a different graph")
    out = np.zeros((fam.dimension, fam.dimension), dtype=np.complex128)
    for e, m in fam.edge_isometries.items():
        a = x.amplitude(e)
        if a != 0:
            out = out + a * m
    return out


@dataclass(frozen=True)
class NeatCheck:
    holds: bool
    norm_x: float
    norm_y: float
    norm_sum: float

    def __bool__(self) -> bool:
        return self.holds


def check_neat_inequality(
    x: GraphCorrespondenceVector,
    y: GraphCorrespondenceVector,
    d: Mapping[str, float],
    tol: float = 1e-12,
) -> NeatCheck:
    """Ultrametric norm bound for vectors separated by a contraction.

    d must be a [0,1]-valued vertex function acting on the right by
    (f·d)(e) = f(e)·d(source(e)), with x·d = x and y·d = 0.  Under that
    separation the sum's norm never exceeds the larger summand norm.
    """
    if x.graph != y.graph:
        raise GraphMismatch("the vectors live on different graphs")
    g = x.graph
    for v in g.vertices:
        val = d.get(v, 0.0)
        if val < -tol or val > 1 + tol:
            raise PreconditionViolated(f"d({v!r}) = {val} is not in [0, 1]")
    for e in g.edges:
        dv = d.get(edge_source(e), 0.0)
        if abs(x.amplitude(e)) * abs(1 - dv) > tol:
            raise PreconditionViolated(f"x is not fixed by d at edge {e}")
        if abs(y.amplitude(e)) * abs(dv) > tol:
            raise PreconditionViolated(f"y is not annihilated by d at edge {e}")
    nx = module_norm(x)
    ny = module_norm(y)
    ns = module_norm(x + y)
    return NeatCheck(ns <= max(nx, ny) + tol, nx, ny, ns)
