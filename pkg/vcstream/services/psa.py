"""
Insertion-only parameterized streaming algorithm for VC(k).

Keeps a greedy maximal matching M and, for every matched vertex, up to k
further incident edges. Together with the matching edge that is k + 1
incident edges, enough to force the vertex into any cover of size <= k
whenever some of its edges had to be dropped. Queries kernelize the
stored graph (V_M, M + E_M).
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set

from vcstream.core import Edge, VcAnswer, VertexId
from vcstream.services.kernel import vc_decide

logger = logging.getLogger(__name__)


@dataclass
class PsaState:
    """
    Matching M, matched vertices V_M, stored witnesses E_M, dead flag.

    E_M[v] holds non-matching edges only, at most k per matched vertex, so
    the stored witness count never exceeds 2k * k.
    """

    k: int
    matching: Set[Edge] = field(default_factory=set)
    matched: Set[VertexId] = field(default_factory=set)
    stored: Dict[VertexId, List[Edge]] = field(default_factory=dict)
    dead: bool = False

    # ==================== Updates ====================

    def insert(self, e: Edge) -> "PsaState":
        """Process one inserted edge"""
        if self.dead:
            return self

        if e.u not in self.matched and e.v not in self.matched:
            self.matching.add(e)
            for w in (e.u, e.v):
                self.matched.add(w)
                self.stored[w] = []
            if len(self.matching) > self.k:
                self._die()
            return self

        for w in (e.u, e.v):
            if w in self.matched and len(self.stored[w]) < self.k:
                self.stored[w].append(e)
        return self

    def _die(self):
        logger.debug(f"psa: matching reached {len(self.matching)} > k={self.k}, stopping")
        self.dead = True
        self.stored = {}

    # ==================== Query ====================

    def stored_edges(self) -> Set[Edge]:
        edges = set(self.matching)
        for witnesses in self.stored.values():
            edges.update(witnesses)
        return edges

    def query(self, k: Optional[int] = None) -> VcAnswer:
        """No once dead; otherwise the kernel decision on (V_M, M + E_M)"""
        budget = self.k if k is None else k
        if budget > self.k:
            raise ValueError(f"state was built for k={self.k}, cannot answer k={budget}")
        if self.dead:
            return VcAnswer.no()
        return vc_decide(self.stored_edges(), budget)

    # ==================== Space census ====================

    def witness_count(self) -> int:
        return sum(len(witnesses) for witnesses in self.stored.values())

    def words_stored(self) -> int:
        # two words per edge, one per matched vertex
        return 2 * (len(self.matching) + self.witness_count()) + len(self.matched)

    def check_space(self):
        if self.dead:
            assert len(self.matching) == self.k + 1
            assert not self.stored
            return
        assert self.witness_count() <= 2 * self.k * self.k
        assert len(self.matched) <= 2 * self.k


def psa_insert(st: PsaState, e: Edge) -> PsaState:
    return st.insert(e)


def psa_query(st: PsaState, k: int) -> VcAnswer:
    return st.query(k)
