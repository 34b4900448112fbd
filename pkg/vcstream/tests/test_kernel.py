"""Tests for Buss kernelization and the bounded search"""

import numpy as np
import pytest

from vcstream.core import AnswerKind, Edge
from vcstream.services.kernel import kernelize, solve_kernel, vc_decide
from vcstream.utils.generators import gen_random_graph
from vcstream.utils.oracles import oracle_vc


def star(center, leaves):
    return [Edge(center, leaf) for leaf in leaves]


def test_empty_graph_is_yes_with_empty_cover():
    answer = vc_decide([], 0)
    assert answer.is_yes
    assert answer.cover == frozenset()


def test_rule1_forces_star_center():
    kern = kernelize(star(1, range(2, 7)), 1)
    assert kern is not None
    assert kern.forced == [1]
    assert kern.budget == 0
    assert kern.edges == set()
    assert vc_decide(star(1, range(2, 7)), 1).cover == frozenset({1})


def test_rule1_runs_out_of_budget():
    edges = star(1, (2, 3, 4)) + star(5, (6, 7, 8))
    assert kernelize(edges, 1) is None
    assert vc_decide(edges, 1).is_no
    assert vc_decide(edges, 2).cover == frozenset({1, 5})


def test_rule2_drops_isolated_vertices():
    edges = star(1, (2, 3, 4)) + [Edge(5, 6)]
    kern = kernelize(edges, 2)
    assert kern.forced == [1]
    assert kern.vertices == {5, 6}
    assert kern.edges == {Edge(5, 6)}


def test_kernel_edge_bound_rejects():
    # three disjoint edges with k = 1: no forced vertex, 3 > 1^2 edges
    edges = [Edge(1, 2), Edge(3, 4), Edge(5, 6)]
    assert kernelize(edges, 1) is None


def test_disjoint_edges_need_one_vertex_each():
    edges = [Edge(1, 2), Edge(3, 4), Edge(5, 6)]
    assert vc_decide(edges, 2).is_no
    assert vc_decide(edges, 3).is_yes


def test_triangle(triangle):
    assert vc_decide(triangle, 1).is_no
    answer = vc_decide(triangle, 2)
    assert answer.is_yes and len(answer.cover) == 2
    assert answer.verify(triangle, 2)


def test_five_cycle(cycle5):
    assert vc_decide(cycle5, 2).is_no
    assert vc_decide(cycle5, 3).verify(cycle5, 3)


def test_solve_kernel_combines_forced_and_residual():
    edges = star(1, (2, 3, 4, 5)) + [Edge(6, 7), Edge(7, 8)]
    kern = kernelize(edges, 2)
    answer = solve_kernel(kern)
    assert answer.cover == frozenset({1, 7})


@pytest.mark.parametrize("seed", range(8))
def test_kernels_satisfy_size_bounds(seed):
    rng = np.random.default_rng(seed)
    g = gen_random_graph(14, 0.25, rng)
    for k in range(6):
        kern = kernelize(g, k)
        if kern is not None:
            kern.check()
            assert set(kern.forced).isdisjoint(kern.vertices)


def test_decision_matches_oracle(rng):
    for _ in range(200):
        n = int(rng.integers(2, 13))
        g = gen_random_graph(n, float(rng.uniform(0.05, 0.6)), rng)
        k = int(rng.integers(0, 5))
        answer = vc_decide(g, k)
        expected = oracle_vc(g, k)
        assert answer.kind is expected.kind
        if answer.kind is AnswerKind.YES:
            assert answer.verify(g, k)


@pytest.mark.slow
def test_decision_matches_oracle_acceptance(rng):
    """500 instances, G(n <= 20, p), k <= 6"""
    for _ in range(500):
        n = int(rng.integers(2, 21))
        g = gen_random_graph(n, float(rng.uniform(0.02, 0.5)), rng)
        k = int(rng.integers(0, 7))
        answer = vc_decide(g, k)
        assert answer.kind is oracle_vc(g, k).kind
        if answer.is_yes:
            assert answer.verify(g, k)


@pytest.mark.parametrize("seed", range(10))
def test_yes_stays_yes_with_larger_budget(seed):
    rng = np.random.default_rng(seed)
    g = gen_random_graph(int(rng.integers(4, 16)), float(rng.uniform(0.1, 0.5)), rng)
    answers = [vc_decide(g, k).is_yes for k in range(9)]
    first_yes = answers.index(True) if True in answers else len(answers)
    assert answers == [False] * first_yes + [True] * (len(answers) - first_yes)
