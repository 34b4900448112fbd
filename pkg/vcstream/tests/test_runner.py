"""Tests for the mode drivers, run reports and Monte-Carlo sweeps"""

import numpy as np
import pytest

from vcstream.core import Config, Edge, StreamUpdate
from vcstream.services.runner import (
    DRIVERS,
    LiveGraph,
    RunOptions,
    make_driver,
    oracle_answer,
    run_stream,
    run_sweep,
)
from vcstream.errors import InvalidStream, VcStreamError
from vcstream.tests.helpers import complete_graph
from vcstream.utils.generators import gen_promised_stream
from vcstream.utils.stream_io import QUERY, StreamFile, parse_stream


def graph_stream(n, k, mode, edges, queries=1):
    items = [StreamUpdate.insert(e.u, e.v) for e in edges] + [QUERY] * queries
    return StreamFile.build(n, k, mode, items)


# ==================== Single runs ====================

def test_psa_run_answers_no_for_large_matching():
    stream = graph_stream(6, 2, "psa", [Edge(1, 2), Edge(3, 4), Edge(5, 6)])
    report = run_stream(stream, stream.config())
    assert report.exit_code == 0
    assert report.final_answer.is_no
    assert report.queries[0].verified is None
    assert report.queries[0].position == 3


def test_pdpsa_run_verifies_certificate():
    cfg = Config(n=14, k=2, seed=3)
    stream = gen_promised_stream(cfg, 80, 0.3, rng=np.random.default_rng(3))
    report = run_stream(stream, cfg, options=RunOptions(audit=True))
    assert report.exit_code == 0, report.error
    assert report.final_answer.is_yes
    assert report.queries[-1].verified is True
    assert report.events["sketch_fails"] == 0
    assert report.peak_words >= report.words_stored > 0


def test_dpsa_gate_skips_recovery():
    stream = graph_stream(6, 2, "dpsa", complete_graph(6))
    report = run_stream(stream, stream.config())
    assert report.final_answer.is_no
    assert report.queries[0].recovery_skipped
    assert "recovery_skipped=true" in report.render()


def test_dpsa_approx_run_tolerates_duplicates():
    edges = [Edge(1, j) for j in range(2, 7)]
    stream = graph_stream(6, 1, "dpsa", edges + edges)
    report = run_stream(stream, stream.config(), options=RunOptions(approx=True))
    assert report.exit_code == 0, report.error
    assert report.final_answer.cover == frozenset({1})
    assert report.queries[0].verified is True


def test_fvs_run():
    stream = graph_stream(5, 1, "fvs", [Edge(1, 2), Edge(2, 3), Edge(1, 3), Edge(3, 4)])
    report = run_stream(stream, stream.config())
    assert report.final_answer.is_yes and report.queries[0].verified


def test_mode_override():
    stream = graph_stream(6, 2, "psa", [Edge(1, 2), Edge(3, 4)])
    report = run_stream(stream, stream.config(), mode="dpsa")
    assert report.mode == "dpsa"
    assert report.final_answer.is_yes


def test_every_query_marker_is_answered():
    text = "4 1 psa\n?\n+ 1 2\n?\n+ 3 4\n?\n"
    stream = parse_stream(text)
    report = run_stream(stream, stream.config())
    assert [str(q.answer) for q in report.queries] == ["YES", "YES", "NO"]


def test_delete_in_insertion_only_mode_exits_3():
    stream = parse_stream("4 1 psa\n+ 1 2\n- 1 2\n?\n")
    report = run_stream(stream, stream.config())
    assert report.exit_code == 3
    assert "insertion-only" in report.error
    assert report.queries == []


def test_invalid_dynamic_stream_exits_3():
    stream = parse_stream("4 1 dpsa\n- 1 2\n?\n")
    report = run_stream(stream, stream.config())
    assert report.exit_code == 3


@pytest.mark.parametrize("edge", ["3 7", "1 7"])
def test_approx_dpsa_rejects_vertex_outside_header(edge):
    stream = parse_stream(f"5 1 dpsa\n+ {edge}\n?\n")
    report = run_stream(stream, Config(n=5, k=1), options=RunOptions(approx=True))
    assert report.exit_code == 3
    assert "outside [1, 5]" in report.error
    assert report.queries == []


def test_promise_violation_exits_4():
    stream = parse_stream("4 1 pdpsa\n+ 1 2\n+ 3 4\n?\n")
    report = run_stream(stream, stream.config())
    assert report.exit_code == 4
    assert report.events["promise_violations"] == 1


def test_unknown_mode_is_an_error():
    with pytest.raises(VcStreamError):
        make_driver("matching", Config(n=4, k=1))
    assert set(DRIVERS) == {"psa", "pdpsa", "dpsa", "fvs"}


def test_report_lines():
    stream = graph_stream(4, 1, "psa", [Edge(1, 2), Edge(1, 3)])
    lines = run_stream(stream, stream.config(seed=5)).to_lines()
    assert lines[:4] == ["mode=psa", "n=4", "k=1", "seed=5"]
    assert "answer=YES" in lines and "cover=1" in lines and "verified=true" in lines
    assert "sketch_fails=0" in lines and "rematch_misses=0" in lines
    assert any(line.startswith("phase_update_ms=") for line in lines)
    assert any(line.startswith("rss_mb=") for line in lines)
    assert lines[-1] == "exit_code=0"


# ==================== Live graph ====================

def test_tolerant_live_graph_keeps_multiplicities():
    live = LiveGraph(4, tolerant=True)
    live.apply(StreamUpdate.insert(1, 2))
    live.apply(StreamUpdate.insert(1, 2))
    live.apply(StreamUpdate.delete(1, 2))
    assert live.graph().edge_set() == {Edge(1, 2)}
    live.apply(StreamUpdate.delete(1, 2))
    assert live.graph().m == 0
    with pytest.raises(InvalidStream):
        live.apply(StreamUpdate.delete(1, 2))


def test_oracle_answer_dispatches_by_mode(triangle):
    assert oracle_answer("fvs", triangle, 1).is_yes
    assert oracle_answer("psa", triangle, 1).is_no


# ==================== Sweeps ====================

@pytest.mark.parametrize("mode, n, k", [("psa", 10, 2), ("dpsa", 10, 2), ("fvs", 9, 2), ("pdpsa", 12, 2)])
def test_sweep_agrees_with_oracle(tracker, mode, n, k):
    summary = run_sweep(mode, Config(n=n, k=k, seed=11), trials=4, length=40,
                        churn=0.3, workers=2)
    assert summary["runs"] == 4
    assert summary["failed_runs"] == 0
    assert summary["agreement_rate"] == 1.0
    assert summary["judged"] == 4
    assert "runs=4" in tracker.summary_lines()


def test_sweep_beyond_oracle_limits_reports_no_agreement(tracker):
    summary = run_sweep("fvs", Config(n=20, k=3, seed=2), trials=4, length=60,
                        churn=0.3, workers=2)
    assert summary["runs"] == 4
    assert summary["judged"] == 0
    assert summary["unjudged"] == 4
    assert summary["agreement_rate"] is None
    lines = tracker.summary_lines()
    assert "agreement_rate=n/a" in lines
    assert "unjudged=4" in lines
