"""
Promised dynamic parameterized streaming algorithm for VC(k).

Maintains a maximal matching under insertions and deletions, assuming every
prefix of the stream has a vertex cover of size <= k. Space stays at
O~(k^2): one x-sample recovery sketch per matched vertex, the timestamps of
matched vertices, and a dictionary T of edges known to sit in both
endpoints' sketches.

Three invariants hold after every update (N'_u = neighbors currently in S_u):
    1. every live edge (u,v) has v in N'_u or u in N'_v;
    2. for live (u,v) with both ends matched, u not in N'_v iff t_u < t_v and (u,v) not in T;
    3. for live (u,v) with both ends matched, v in N'_u and u in N'_v iff (u,v) in T.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional, Set

from sortedcontainers import SortedDict

from vcstream.core import Config, Edge, VcAnswer, VertexId, canonical
from vcstream.errors import PromiseViolation, RecoveryFail, RematchMiss, SketchFail
from vcstream.services.kernel import vc_decide
from vcstream.services.sketch import SampleRecovery

logger = logging.getLogger(__name__)

# Label mixed into every per-vertex sketch seed
SKETCH_SEED_TAG = 0x5D


@dataclass(frozen=True)
class PromiseReport:
    """Ok | Violated(at)"""

    at: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.at is None

    def __str__(self) -> str:
        return "ok" if self.ok else f"violated@{self.at}"


class MatchingState:
    """
    Dynamic maximal matching with per-matched-vertex sketches.

    Args:
        config: run configuration (n, k, delta, c, alpha, seed)
        strict_degrees: also keep exact degrees d_u of every vertex and use
            them for the low/high-degree test (differential testing only;
            costs Theta(n) words and is left out of the space census)
        audit: mirror the exact contents of every sketch so invariant
            checks can read N'_u without querying the sketches
    """

    def __init__(self, config: Config, strict_degrees: bool = False, audit: bool = False):
        self.config = config
        self.k = config.k
        self.x = config.x
        self.y = config.y
        self.clock = 0
        self.matching: Set[Edge] = set()
        self.mate: Dict[VertexId, VertexId] = {}
        self.matched: Set[VertexId] = set()
        self.ts: Dict[VertexId, int] = {}
        self.sketches: Dict[VertexId, SampleRecovery] = {}
        self.table: SortedDict = SortedDict()
        self.sup: Dict[VertexId, int] = {}
        self.promise = PromiseReport()
        self.events: Counter = Counter()
        self.degrees: Optional[Dict[VertexId, int]] = {} if strict_degrees else None
        self.mirror: Optional[Dict[VertexId, Set[VertexId]]] = {} if audit else None
        self._serial = 0

    # ==================== Sketch plumbing ====================

    def _new_sketch(self, w: VertexId):
        self._serial += 1
        self.sketches[w] = SampleRecovery(
            universe=self.config.n,
            capacity=self.x,
            samplers=self.y,
            rows=self.config.recovery_rows,
            seed=self.config.derive_seed(SKETCH_SEED_TAG, self._serial),
            delta=self.config.delta,
        )
        self.sup[w] = 0
        if self.mirror is not None:
            self.mirror[w] = set()
        self.events["sketches_created"] += 1

    def _drop_sketch(self, w: VertexId):
        self.sketches.pop(w).destroy()
        self.sup.pop(w, None)
        self.ts.pop(w, None)
        if self.mirror is not None:
            self.mirror.pop(w, None)

    def _sketch_update(self, w: VertexId, e: Edge, delta: int):
        """Update(S_w, +-(w, z)); the sketch is indexed by the partner id"""
        partner = e.other(w)
        self.sketches[w].update(partner, delta)
        self.sup[w] += delta
        if self.mirror is not None:
            if delta > 0:
                self.mirror[w].add(partner)
            else:
                self.mirror[w].discard(partner)

    def _recover(self, w: VertexId) -> Set[VertexId]:
        try:
            return self.sketches[w].recover()
        except RecoveryFail as exc:
            self.events["sketch_fails"] += 1
            logger.warning(f"⚠️ recovery failed for S_{w} at t={self.clock}: {exc.technical_details}")
            raise

    def _is_low_degree(self, w: VertexId) -> bool:
        if self.degrees is not None:
            return self.degrees.get(w, 0) <= self.x
        return self.sup[w] <= self.x

    # ==================== Stream entry points ====================

    def insertion(self, e: Edge) -> "MatchingState":
        """Insertion((u,v), t)"""
        self.clock += 1
        self._bump_degree(e, 1)
        if e.u not in self.matched and e.v not in self.matched:
            self.add_edge_to_matching(e, self.clock)
        else:
            self.insert_to_ds(e)
        self._check_promise()
        return self

    def deletion(self, e: Edge) -> "MatchingState":
        """Deletion((u,v), t)"""
        self.clock += 1
        self._bump_degree(e, -1)
        if e in self.matching:
            self.rematch(e, self.clock)
        else:
            self.delete_from_ds(e)
        self.announce_neighborhood(e.u)
        self.announce_neighborhood(e.v)
        self._check_promise()
        return self

    def _bump_degree(self, e: Edge, delta: int):
        if self.degrees is None:
            return
        for w in (e.u, e.v):
            self.degrees[w] = self.degrees.get(w, 0) + delta

    def _check_promise(self):
        if len(self.matching) > self.k and self.promise.ok:
            self.promise = PromiseReport(at=self.clock)
            self.events["promise_violations"] += 1
            logger.warning(f"⚠️ matching size {len(self.matching)} exceeds k={self.k} at t={self.clock}")
            raise PromiseViolation(self.clock, f"|M|={len(self.matching)} k={self.k}")

    # ==================== Procedures ====================

    def add_edge_to_matching(self, e: Edge, t: int):
        """
        AddEdgeToMatching((u,v), t).

        An endpoint re-matched inside Rematch still owns its sketch, which
        already holds (u,v), and keeps its timestamp; it was never exposed
        between two updates.
        """
        self.matching.add(e)
        self.mate[e.u] = e.v
        self.mate[e.v] = e.u
        self.table[e] = None
        for z in (e.u, e.v):
            self.matched.add(z)
            if z in self.sketches:
                continue
            self.ts[z] = t
            self._new_sketch(z)
            self._sketch_update(z, e, 1)

    def insert_to_ds(self, e: Edge):
        """InsertToDS((u,v))"""
        if e.u in self.matched and e.v in self.matched:
            self.table[e] = None
        for w in (e.u, e.v):
            if w in self.matched:
                self._sketch_update(w, e, 1)

    def delete_from_ds(self, e: Edge):
        """DeleteFromDS((u,v)): remove e from exactly the sketches holding it"""
        u, v = e.u, e.v
        both = u in self.matched and v in self.matched
        if e in self.table:
            self._sketch_update(u, e, -1)
            self._sketch_update(v, e, -1)
            del self.table[e]
        elif both and self.ts[u] < self.ts[v]:
            self._sketch_update(u, e, -1)
        elif both and self.ts[v] < self.ts[u]:
            self._sketch_update(v, e, -1)
        elif u in self.matched and v not in self.matched:
            self._sketch_update(u, e, -1)
        elif v in self.matched and u not in self.matched:
            self._sketch_update(v, e, -1)
        else:
            raise SketchFail(
                f"no sketch holds deleted edge {e}",
                f"t={self.clock} u_matched={u in self.matched} v_matched={v in self.matched}",
            )

    def announce_neighborhood(self, u: VertexId):
        """AnnounceNeighborhood(u): push u's sketched matched neighbors into T"""
        if u not in self.matched or not self._is_low_degree(u):
            return
        for v in sorted(self._recover(u)):
            if v not in self.matched:
                continue
            e = canonical(u, v)
            if e not in self.table:
                self.table[e] = None
                self._sketch_update(v, e, 1)
                self.events["announced_edges"] += 1

    def delete_neighborhood(self, u: VertexId, neighbors: Optional[Set[VertexId]] = None):
        """
        DeleteNeighborhood(u): hand every sketched edge of u to its other
        endpoint (all of which are matched), then drop S_u and u.
        """
        if neighbors is None:
            neighbors = self._recover(u)
        for v in sorted(neighbors):
            e = canonical(u, v)
            if e in self.table:
                del self.table[e]
            elif v in self.sketches:
                self._sketch_update(v, e, 1)
            else:
                raise SketchFail(
                    f"neighbor {v} of {u} has no sketch",
                    "delete_neighborhood requires every neighbor to be matched",
                )
        self._drop_sketch(u)
        self.matched.discard(u)

    def rematch(self, e: Edge, t: int):
        """
        Rematch((u,v), t).

        u and v leave the matching logically first; their sketches and
        timestamps stay until each endpoint's branch has run.
        """
        self.events["rematches"] += 1
        self.delete_from_ds(e)
        self.matching.discard(e)
        self.mate.pop(e.u, None)
        self.mate.pop(e.v, None)
        self.matched.discard(e.u)
        self.matched.discard(e.v)

        for w in (e.u, e.v):
            if self._is_low_degree(w):
                self._rematch_low(w, t)
            else:
                self._rematch_high(w, t)

    def _rematch_low(self, w: VertexId, t: int):
        neighbors = self._recover(w)
        exposed = sorted(z for z in neighbors if z not in self.matched)
        if exposed:
            logger.debug(f"rematch: low-degree {w} -> {exposed[0]} at t={t}")
            self.add_edge_to_matching(canonical(w, exposed[0]), t)
        else:
            logger.debug(f"rematch: low-degree {w} has no exposed neighbor, releasing")
            self.delete_neighborhood(w, neighbors)

    def _rematch_high(self, w: VertexId, t: int):
        sketch = self.sketches[w]
        for which in range(self.y):
            outcome = sketch.sample(which)
            if outcome.ok and outcome.index not in self.matched:
                logger.debug(f"rematch: high-degree {w} -> {outcome.index} after {which + 1} draws")
                self.add_edge_to_matching(canonical(w, outcome.index), t)
                return
        self.events["rematch_misses"] += 1
        logger.warning(f"⚠️ high-degree rematch of {w} drew no exposed neighbor at t={t}")
        raise RematchMiss(w, self.y, f"sup={self.sup[w]} x={self.x}")

    # ==================== Query ====================

    def _witnesses(self, u: VertexId, k: int) -> List[VertexId]:
        """Up to k + 1 sketched neighbors of u: all of them, or enough to force u"""
        need = k + 1
        if self.sup[u] <= self.x:
            return sorted(self._recover(u))[:need]
        drawn: List[VertexId] = []
        for which in range(self.y):
            outcome = self.sketches[u].sample(which)
            if outcome.ok and outcome.index not in drawn:
                drawn.append(outcome.index)
                if len(drawn) == need:
                    return drawn
        self.events["sketch_fails"] += 1
        raise SketchFail(
            f"drew only {len(drawn)} distinct neighbors of {u}",
            f"needed {need} from {self.y} samplers",
        )

    def query(self, k: Optional[int] = None) -> VcAnswer:
        """Build (V_M, E_M) from the sketches and kernelize it"""
        budget = self.k if k is None else k
        if budget > self.k:
            raise ValueError(f"state was built for k={self.k}, cannot answer k={budget}")
        if not self.promise.ok:
            return VcAnswer.promise_violation()
        edges: Set[Edge] = set(self.matching)
        for u in sorted(self.matched):
            edges.update(canonical(u, v) for v in self._witnesses(u, budget))
        return vc_decide(edges, budget)

    # ==================== Space census ====================

    def sketched_neighbors(self, u: VertexId) -> Set[VertexId]:
        """N'_u, from the audit mirror when enabled, else by recovery"""
        if self.mirror is not None:
            return set(self.mirror.get(u, ()))
        if u not in self.sketches:
            return set()
        return self._recover(u)

    def words_stored(self) -> int:
        sketch_words = sum(s.words_stored() for s in self.sketches.values())
        return sketch_words + 2 * len(self.table) + 2 * len(self.matching) + 3 * len(self.matched)

    def check_space(self):
        """Exact census bounds that hold while the promise holds"""
        if not self.promise.ok:
            return
        assert len(self.sketches) <= 2 * self.k
        assert len(self.table) <= 2 * self.k * self.k
        assert len(self.matched) == 2 * len(self.matching)
        assert set(self.sketches) == self.matched
        assert all(self.ts[w] <= self.clock for w in self.matched)


# Functional entry points

def insertion(st: MatchingState, e: Edge) -> MatchingState:
    return st.insertion(e)


def deletion(st: MatchingState, e: Edge) -> MatchingState:
    return st.deletion(e)


def pdpsa_query(st: MatchingState, k: int) -> VcAnswer:
    return st.query(k)
