"""
Insertion-only parameterized streaming algorithm for Feedback Vertex Set.

A graph with a feedback vertex set of size k has at most n(k+1) edges: the
forest left after removing the k vertices has < n edges, and each removed
vertex contributes < n more. The state stores every edge until that bound
is crossed and then answers No for the rest of the stream.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, List, Optional, Set

import networkx as nx

from vcstream.core import Edge, FvsAnswer, GraphLike, VertexId, edge_set
from vcstream.errors import VcStreamError

logger = logging.getLogger(__name__)


# ==================== Exact solver ====================

def _multigraph(edges: Iterable[Edge]) -> nx.MultiGraph:
    graph = nx.MultiGraph()
    graph.add_edges_from((e.u, e.v) for e in edges)
    return graph


def _reduce(graph: nx.MultiGraph, budget: int) -> Optional[List[VertexId]]:
    """
    Shrink `graph` in place with the standard FVS reductions.

    - a vertex with a self-loop joins the solution,
    - vertices of degree <= 1 lie on no cycle and are dropped,
    - an edge of multiplicity > 2 is trimmed to 2,
    - a vertex of degree 2 is bypassed by joining its two neighbors; a
      double edge to a single neighbor becomes a self-loop on that neighbor.

    Returns the forced vertices, or None once more than `budget` are forced.
    """
    forced: List[VertexId] = []
    changed = True
    while changed:
        changed = False

        looped = sorted(w for w in graph.nodes if graph.has_edge(w, w))
        for w in looped:
            if len(forced) == budget:
                return None
            forced.append(w)
            graph.remove_node(w)
            changed = True

        for w in sorted(graph.nodes):
            if graph.degree(w) <= 1:
                graph.remove_node(w)
                changed = True

        for a, b in sorted(set(graph.edges())):
            extra = graph.number_of_edges(a, b) - 2
            for _ in range(extra):
                graph.remove_edge(a, b)
                changed = True

        for w in sorted(graph.nodes):
            if w in graph and graph.degree(w) == 2 and not graph.has_edge(w, w):
                ends = [b for _, b in graph.edges(w)]
                graph.remove_node(w)
                graph.add_edge(ends[0], ends[1])
                changed = True
                # one bypass per sweep keeps the later degree tests current
                break
    return forced


def _is_forest(graph: nx.MultiGraph, removed: Iterable[VertexId]) -> bool:
    rest = graph.copy()
    rest.remove_nodes_from(removed)
    if rest.number_of_nodes() == 0:
        return True
    return nx.is_forest(rest)


def fvs_decide(g: GraphLike, k: int) -> FvsAnswer:
    """
    Exact FVS(k) decision with certificate.

    Args:
        g: simple graph as a shadow graph or edge iterable
        k: budget

    Returns:
        FvsAnswer.yes(cover) with removal leaving a forest, or FvsAnswer.no()
    """
    edges = edge_set(g)
    graph = _multigraph(edges)
    forced = _reduce(graph, k)
    if forced is None:
        return FvsAnswer.no()

    residual = k - len(forced)
    candidates = sorted(graph.nodes)
    for size in range(residual + 1):
        for subset in combinations(candidates, size):
            if _is_forest(graph, subset):
                answer = FvsAnswer.yes(forced + list(subset))
                if not answer.verify(edges, k):
                    raise VcStreamError(
                        "feedback vertex set certificate leaves a cycle",
                        f"cover={answer.sorted_cover()} k={k}",
                    )
                return answer
    return FvsAnswer.no()


# ==================== Streaming state ====================

@dataclass
class FvsState:
    """Stored edges and the absorbing dead flag"""

    n: int
    k: int
    stored: Set[Edge] = field(default_factory=set)
    dead: bool = False

    @property
    def bound(self) -> int:
        return self.n * (self.k + 1)

    def insert(self, e: Edge) -> "FvsState":
        if self.dead:
            return self
        self.stored.add(e)
        if len(self.stored) > self.bound:
            logger.debug(f"fvs: {len(self.stored)} edges exceed n(k+1)={self.bound}, stopping")
            self.dead = True
            self.stored = set()
        return self

    def query(self, k: Optional[int] = None) -> FvsAnswer:
        budget = self.k if k is None else k
        if budget > self.k:
            raise ValueError(f"state was built for k={self.k}, cannot answer k={budget}")
        if self.dead:
            return FvsAnswer.no()
        return fvs_decide(self.stored, budget)

    def words_stored(self) -> int:
        return 2 * len(self.stored) + 1


def fvs_insert(st: FvsState, e: Edge, n: int, k: int) -> FvsState:
    if (st.n, st.k) != (n, k):
        raise ValueError(f"state holds n={st.n} k={st.k}, update passed n={n} k={k}")
    return st.insert(e)


def fvs_query(st: FvsState, k: int) -> FvsAnswer:
    return st.query(k)
