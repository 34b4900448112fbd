"""Tests for core domain types"""

import numpy as np
import pytest

from vcstream.core import (
    Config,
    Edge,
    FvsAnswer,
    Op,
    ShadowGraph,
    StreamUpdate,
    VcAnswer,
    apply_update,
    canonical,
    is_acyclic,
)
from vcstream.errors import ConfigError, InvalidStream, SelfLoop
from vcstream.utils.generators import gen_random_stream


# ==================== Edge ====================

def test_edge_is_stored_canonically():
    e = Edge(5, 2)
    assert (e.u, e.v) == (2, 5)
    assert e == canonical(2, 5) == canonical(5, 2)
    assert e.other(2) == 5 and e.other(5) == 2


def test_edge_rejects_self_loop():
    with pytest.raises(SelfLoop):
        Edge(3, 3)
    with pytest.raises(SelfLoop):
        canonical(4, 4)


@pytest.mark.parametrize("n", range(2, 21))
def test_edge_index_is_a_bijection(n):
    edges = [Edge(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    size = n * (n - 1) // 2
    indices = [e.index(n) for e in edges]
    assert len(edges) == size
    assert indices == list(range(1, size + 1))
    assert all(Edge.from_index(e.index(n), n) == e for e in edges)


def test_edge_check_range():
    assert Edge(1, 5).check_range(5) == Edge(1, 5)
    with pytest.raises(InvalidStream):
        Edge(1, 6).check_range(5)
    with pytest.raises(InvalidStream):
        Edge(0, 3).check_range(5)


def test_edge_from_index_rejects_out_of_range():
    with pytest.raises(ValueError):
        Edge.from_index(11, 5)


def test_stream_update_text():
    assert str(StreamUpdate.insert(3, 1)) == "+ 1 3"
    assert str(StreamUpdate.delete(1, 2)) == "- 1 2"
    assert Op.INSERT.sign == 1 and Op.DELETE.sign == -1


# ==================== Config ====================

def test_config_derived_sizes():
    cfg = Config(n=40, k=4, delta=0.01)
    assert cfg.x == 383
    assert cfg.y == 96
    assert Config(n=40, k=0).x == 1


def test_config_scales_with_alpha():
    full = Config(n=40, k=4)
    small = Config(n=40, k=4, alpha=0.1)
    assert small.x < full.x and small.y < full.y


@pytest.mark.parametrize("kwargs", [
    {"delta": 0.0}, {"delta": 1.0}, {"c": 0.5}, {"alpha": 0.0}, {"k": -1},
])
def test_config_rejects_bad_values(kwargs):
    values = {"n": 10, "k": 2, **kwargs}
    with pytest.raises(ConfigError):
        Config(**values)


def test_derive_seed_is_deterministic_per_label():
    cfg = Config(n=10, k=2, seed=7)
    assert cfg.derive_seed(1, 2) == cfg.derive_seed(1, 2)
    assert cfg.derive_seed(1, 2) != cfg.derive_seed(1, 3)
    assert cfg.derive_seed(1) != Config(n=10, k=2, seed=8).derive_seed(1)


# ==================== ShadowGraph ====================

def test_apply_update_single_edge():
    g = ShadowGraph(4)
    apply_update(g, StreamUpdate.insert(1, 2))
    assert g.m == 1
    assert g.degree(1) == g.degree(2) == 1
    apply_update(g, StreamUpdate.delete(1, 2))
    assert g.m == 0
    assert list(g.edges()) == []


def test_shadow_graph_rejects_invalid_steps():
    g = ShadowGraph(4)
    with pytest.raises(InvalidStream):
        g.apply(StreamUpdate.delete(1, 2))
    g.apply(StreamUpdate.insert(1, 2))
    with pytest.raises(InvalidStream):
        g.apply(StreamUpdate.insert(2, 1))
    with pytest.raises(InvalidStream):
        g.apply(StreamUpdate.insert(1, 5))


def test_shadow_graph_counts_match_replay(rng):
    stream = gen_random_stream(15, 1000, rng, delete_rate=0.4)
    g = ShadowGraph(15)
    inserts = deletes = 0
    for update in stream.updates():
        g.apply(update)
        inserts += update.op is Op.INSERT
        deletes += update.op is Op.DELETE
    assert g.m == inserts - deletes
    assert sum(g.degree(w) for w in range(1, 16)) == 2 * g.m


# ==================== Answers ====================

def test_vc_answer_verify(triangle):
    assert VcAnswer.yes([1, 2]).verify(triangle, 2)
    assert not VcAnswer.yes([1]).verify(triangle, 2)
    assert not VcAnswer.yes([1, 2, 3]).verify(triangle, 2)
    assert VcAnswer.no().verify(triangle, 0)
    assert str(VcAnswer.promise_violation()) == "PROMISE_VIOLATION"


def test_fvs_answer_verify(triangle):
    assert FvsAnswer.yes([3]).verify(triangle, 1)
    assert not FvsAnswer.yes([]).verify(triangle, 1)


def test_is_acyclic():
    assert is_acyclic([])
    assert is_acyclic([Edge(1, 2), Edge(2, 3)])
    assert not is_acyclic([Edge(1, 2), Edge(2, 3), Edge(1, 3)])
    assert is_acyclic([Edge(1, 2), Edge(2, 3), Edge(1, 3)], removed=[2])
