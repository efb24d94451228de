"""Module norms, CKT families, and the ultrametric norm bound."""

import math
import random

import numpy as np
import pytest

from treealg.catalog import chain_graph, lambda_graph
from treealg.correspondence import (
    GraphCorrespondenceVector,
    build_ckt_family,
    check_neat_inequality,
    module_inner_product,
    module_norm,
    vector_operator,
    verify_ckt,
)
from treealg.errors import GraphMismatch, PreconditionViolated
from treealg.graphs import DirectedGraph

from conftest import random_dag, random_out_tree


def longest_path(g: DirectedGraph) -> int:
    memo = {}

    def down(v):
        if v not in memo:
            memo[v] = 1 + max(
                (down(s) for s in g.successors(v)), default=-1
            )
        return memo[v]

    return max((down(v) for v in g.vertices), default=0)


def test_vector_rejects_undeclared_edges():
    g = lambda_graph()
    with pytest.raises(ValueError):
        GraphCorrespondenceVector(g, {("a", "b"): 1})


def test_indicator_inner_product_and_norm():
    g = lambda_graph()
    x = GraphCorrespondenceVector(g, {("r", "a"): 1})
    ip = module_inner_product(x, x)
    assert ip["a"] == 1 and ip["r"] == 0 and ip["b"] == 0
    assert module_norm(x) == 1.0


def test_orthogonal_indicators():
    g = lambda_graph()
    x = GraphCorrespondenceVector(g, {("r", "a"): 1})
    y = GraphCorrespondenceVector(g, {("r", "b"): 1})
    assert all(v == 0 for v in module_inner_product(x, y).values())


def test_shared_source_accumulates():
    h = DirectedGraph(["p", "q", "s"], [("p", "s"), ("q", "s")])
    x = GraphCorrespondenceVector(h, {("p", "s"): 2})
    y = GraphCorrespondenceVector(h, {("p", "s"): 3})
    assert module_inner_product(x, y)["s"] == 6
    z = GraphCorrespondenceVector(h, {("q", "s"): 3})
    assert module_norm(x + z) == math.sqrt(4 + 9)


def test_zero_vector_norm():
    assert module_norm(GraphCorrespondenceVector(lambda_graph())) == 0.0
    assert module_norm(GraphCorrespondenceVector(DirectedGraph([], []))) == 0.0


def test_norm_squares_to_max_inner_product():
    rng = random.Random(2)
    for _ in range(30):
        g = random_dag(rng, rng.randrange(1, 7))
        amps = {
            e: complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            for e in g.edges
            if rng.random() < 0.8
        }
        x = GraphCorrespondenceVector(g, amps)
        ip = module_inner_product(x, x)
        best = max((v.real for v in ip.values()), default=0.0)
        assert abs(module_norm(x) ** 2 - best) < 1e-9


def test_mismatched_graphs_raise():
    x = GraphCorrespondenceVector(lambda_graph())
    y = GraphCorrespondenceVector(chain_graph(3))
    with pytest.raises(GraphMismatch):
        module_inner_product(x, y)
    with pytest.raises(GraphMismatch):
        x + y


def test_single_vertex_family_is_identity():
    fam = build_ckt_family(DirectedGraph(["p"], []))
    assert fam.dimension == 1
    assert fam.vertex_projections["p"].tolist() == [[1]]
    assert verify_ckt(fam).exact


def test_single_edge_family_relations():
    g = DirectedGraph(["p", "q"], [("p", "q")])
    fam = build_ckt_family(g, cutoff=2)
    e = ("p", "q")
    L = fam.vertex_projections
    T = fam.edge_isometries
    assert (T[e].T @ T[e] == L["q"]).all()
    assert ((L["p"] - T[e] @ T[e].T) >= 0).all()
    assert verify_ckt(fam).exact


def test_lambda_family_all_relations_exact():
    rep = verify_ckt(build_ckt_family(lambda_graph(), cutoff=4))
    assert rep.exact
    assert all(c.residual == 0 for c in rep.checks.values())


def test_out_trees_exact_at_sufficient_cutoff():
    rng = random.Random(17)
    for _ in range(12):
        g = random_out_tree(rng, rng.randrange(1, 9)).graph
        rep = verify_ckt(build_ckt_family(g, cutoff=longest_path(g) + 1))
        assert rep.exact


def test_truncation_confined_to_maximal_paths():
    rep = verify_ckt(build_ckt_family(chain_graph(6), cutoff=2))
    assert not rep.checks["isometry"].exact
    assert rep.checks["isometry"].note
    assert rep.checks["isometry-interior"].exact
    assert rep.ok and not rep.exact


def test_empty_graph_family():
    rep = verify_ckt(build_ckt_family(DirectedGraph([], [])))
    assert rep.exact


def test_operator_norm_equals_module_norm():
    rng = random.Random(29)
    for _ in range(20):
        g = random_dag(rng, rng.randrange(1, 6), p=0.5)
        fam = build_ckt_family(g, cutoff=3)
        amps = {
            e: complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for e in g.edges
        }
        x = GraphCorrespondenceVector(g, amps)
        if fam.dimension == 0:
            continue
        op = np.linalg.norm(vector_operator(fam, x), 2)
        assert abs(op - module_norm(x)) < 1e-12


def random_neat_instance(rng: random.Random, g: DirectedGraph):
    d = {}
    for v in g.vertices:
        d[v] = rng.choice([0.0, 1.0, round(rng.uniform(0.1, 0.9), 3)])
    xa, ya = {}, {}
    for e in g.edges:
        dv = d[e[1]]
        if dv == 1.0 and rng.random() < 0.8:
            xa[e] = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        if dv == 0.0 and rng.random() < 0.8:
            ya[e] = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
    return (
        GraphCorrespondenceVector(g, xa),
        GraphCorrespondenceVector(g, ya),
        d,
    )


def test_neat_inequality_trivial_cases():
    g = lambda_graph()
    x = GraphCorrespondenceVector(g, {("r", "a"): 2})
    zero = GraphCorrespondenceVector(g)
    res = check_neat_inequality(x, zero, {"a": 1.0})
    assert res and res.norm_sum == res.norm_x == 2.0


def test_neat_inequality_disjoint_sources_attains_max():
    g = lambda_graph()
    x = GraphCorrespondenceVector(g, {("r", "a"): 3})
    y = GraphCorrespondenceVector(g, {("r", "b"): 4})
    res = check_neat_inequality(x, y, {"a": 1.0, "b": 0.0})
    assert res.holds and res.norm_sum == 4.0


def test_neat_preconditions_enforced():
    g = lambda_graph()
    x = GraphCorrespondenceVector(g, {("r", "a"): 1})
    y = GraphCorrespondenceVector(g, {("r", "a"): 1})
    with pytest.raises(PreconditionViolated):
        check_neat_inequality(x, y, {"a": 1.0})  # y not annihilated
    with pytest.raises(PreconditionViolated):
        check_neat_inequality(x, y, {"a": 0.5})
    with pytest.raises(PreconditionViolated):
        check_neat_inequality(x, GraphCorrespondenceVector(g), {"a": 2.0})


def test_neat_inequality_randomized():
    rng = random.Random(41)
    done = 0
    while done < 150:
        g = random_dag(rng, rng.randrange(2, 7), p=0.5)
        if not g.edges:
            continue
        x, y, d = random_neat_instance(rng, g)
        assert check_neat_inequality(x, y, d).holds
        done += 1
