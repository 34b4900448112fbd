"""Replay helpers shared by several test modules"""

from typing import List, Tuple

from vcstream.core import Config, Edge, ShadowGraph
from vcstream.services.pdpsa import MatchingState
from vcstream.utils.invariant_checker import check_invariants
from vcstream.utils.stream_io import StreamFile


def complete_graph(n: int) -> List[Edge]:
    return [Edge(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]


def replay_audited(stream: StreamFile, config: Config,
                   strict_degrees: bool = False) -> Tuple[MatchingState, ShadowGraph]:
    """
    Drive a MatchingState through `stream` with a shadow graph in lockstep,
    checking the invariants and the space census after every update.
    """
    st = MatchingState(config, strict_degrees=strict_degrees, audit=True)
    g = ShadowGraph(config.n)
    for update in stream.updates():
        g.apply(update)
        if update.op.sign > 0:
            st.insertion(update.edge)
        else:
            st.deletion(update.edge)
        violations = check_invariants(st, g)
        assert not violations, f"t={st.clock}: {[str(v) for v in violations[:5]]}"
        st.check_space()
    return st, g
