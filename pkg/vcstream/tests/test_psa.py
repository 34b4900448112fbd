"""Tests for the insertion-only streaming algorithm"""

import pytest

from vcstream.core import Edge, ShadowGraph
from vcstream.services.psa import PsaState, psa_insert, psa_query
from vcstream.utils.generators import gen_random_stream
from vcstream.utils.oracles import oracle_vc


def test_three_disjoint_edges_with_k2():
    st = PsaState(k=2)
    for e in (Edge(1, 2), Edge(3, 4), Edge(5, 6)):
        psa_insert(st, e)
    assert st.dead
    assert st.stored == {}
    assert psa_query(st, 2).is_no
    st.check_space()


def test_dead_state_ignores_further_edges():
    st = PsaState(k=0)
    st.insert(Edge(1, 2))
    assert st.dead
    st.insert(Edge(3, 4))
    assert len(st.matching) == 1


def test_witnesses_are_capped_at_k():
    st = PsaState(k=2)
    for leaf in range(2, 12):
        st.insert(Edge(1, leaf))
    assert st.matching == {Edge(1, 2)}
    assert st.stored[1] == [Edge(1, 3), Edge(1, 4)]
    assert st.stored[2] == []
    answer = st.query()
    assert answer.is_yes and answer.cover == frozenset({1})


def test_edge_between_matched_vertices_stored_at_both():
    st = PsaState(k=2)
    st.insert(Edge(1, 2))
    st.insert(Edge(3, 4))
    st.insert(Edge(2, 3))
    assert Edge(2, 3) in st.stored[2] and Edge(2, 3) in st.stored[3]
    assert st.stored_edges() == {Edge(1, 2), Edge(3, 4), Edge(2, 3)}


def test_query_above_state_k_is_rejected():
    st = PsaState(k=2)
    with pytest.raises(ValueError):
        st.query(3)


def test_query_below_state_k():
    st = PsaState(k=2)
    st.insert(Edge(1, 2))
    st.insert(Edge(3, 4))
    assert st.query(1).is_no
    assert st.query(2).is_yes


def test_words_stored_counts_edges_and_vertices():
    st = PsaState(k=1)
    assert st.words_stored() == 0
    st.insert(Edge(1, 2))
    st.insert(Edge(1, 3))
    assert st.words_stored() == 2 * 2 + 2


def _replay_against_oracle(rng, streams, max_n, max_k, max_length):
    for _ in range(streams):
        n = int(rng.integers(4, max_n + 1))
        k = int(rng.integers(1, max_k + 1))
        length = int(rng.integers(1, max_length + 1))
        stream = gen_random_stream(n, length, rng, delete_rate=0.0, k=k, mode="psa")
        st = PsaState(k=k)
        g = ShadowGraph(n)
        for update in stream.updates():
            g.apply(update)
            st.insert(update.edge)
            st.check_space()
            answer = st.query(k)
            assert answer.kind is oracle_vc(g, k).kind
            if answer.is_yes:
                assert answer.verify(g, k)


def test_matches_oracle_on_every_prefix(rng):
    _replay_against_oracle(rng, streams=30, max_n=12, max_k=3, max_length=20)


@pytest.mark.slow
def test_matches_oracle_on_every_prefix_full(rng):
    _replay_against_oracle(rng, streams=300, max_n=18, max_k=5, max_length=30)
