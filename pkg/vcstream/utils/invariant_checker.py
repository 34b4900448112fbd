"""
Shadow-graph audit of a MatchingState.

Reads N'_u from the state's audit mirror (or by recovery) and the live edge
set from a ShadowGraph, then reports every edge that breaks one of the three
bookkeeping invariants or the maximality of the matching.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Set

from vcstream.core import Edge, ShadowGraph, VertexId, canonical
from vcstream.services.pdpsa import MatchingState

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Violation:
    rule: str
    edge: Optional[Edge]
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.rule} {self.edge or ''} {self.detail}".strip()


def check_invariants(st: MatchingState, g: ShadowGraph, deep: bool = False) -> List[Violation]:
    """
    Audit `st` against the live graph `g`.

    Args:
        st: state under test; should be built with audit=True
        g: live edge set maintained in lockstep with the state
        deep: also recover each low-support sketch and compare with the mirror

    Returns:
        Every violation found; an empty list means the state is consistent.
    """
    found: List[Violation] = []
    sketched: Dict[VertexId, Set[VertexId]] = {w: st.sketched_neighbors(w) for w in st.sketches}
    matched = st.matched

    def nbrs(w: VertexId) -> Set[VertexId]:
        return sketched.get(w, set())

    for e in g.edges():
        u, v = e.u, e.v
        in_u, in_v = v in nbrs(u), u in nbrs(v)
        if not (in_u or in_v):
            found.append(Violation("invariant-1", e, "edge in neither sketch"))
        if u not in matched and v not in matched:
            found.append(Violation("maximality", e, "both endpoints exposed"))
        if u in matched and v in matched:
            in_table = e in st.table
            if (in_u and in_v) != in_table:
                found.append(Violation("invariant-3", e, f"in both sketches={in_u and in_v} in T={in_table}"))
            for a, b, a_in_b in ((u, v, in_v), (v, u, in_u)):
                expected_missing = st.ts[a] < st.ts[b] and not in_table
                if (not a_in_b) != expected_missing:
                    found.append(Violation(
                        "invariant-2", e,
                        f"{a} missing from S_{b}={not a_in_b} t_{a}={st.ts[a]} t_{b}={st.ts[b]}",
                    ))

    for w, partners in sketched.items():
        for z in partners:
            if not g.has_edge(canonical(w, z)):
                found.append(Violation("stale-sketch", canonical(w, z), f"dead edge in S_{w}"))

    for e in st.table:
        if not g.has_edge(e) or e.u not in matched or e.v not in matched:
            found.append(Violation("table", e, "T entry not a live matched-matched edge"))

    for e in st.matching:
        if not g.has_edge(e):
            found.append(Violation("matching", e, "matching edge not live"))

    if deep and st.mirror is not None:
        for w in sorted(st.sketches):
            if st.sup[w] <= st.x and st.sketches[w].recover() != st.mirror[w]:
                found.append(Violation("recovery", None, f"S_{w} recovers a different support"))

    if found:
        logger.debug(f"invariant check at t={st.clock}: {len(found)} violations")
    return found
