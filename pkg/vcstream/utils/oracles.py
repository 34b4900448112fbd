"""
Brute-force ground truth for VC and FVS.

These oracles work on the raw graph with plain branching or subset
enumeration; they share no code with the kernel or the sketches so they
can judge both.
"""

import logging
from itertools import combinations
from typing import FrozenSet, List, Optional, Set, Tuple

from vcstream.core import Edge, FvsAnswer, GraphLike, VcAnswer, VertexId, edge_set, is_acyclic
from vcstream.errors import BudgetExceeded

logger = logging.getLogger(__name__)

# Branching depth beyond which the VC oracle refuses to search
VC_BUDGET_LIMIT = 24
# Non-isolated vertex count beyond which the FVS oracle refuses to enumerate
FVS_VERTEX_LIMIT = 14


def _cover_within(edges: List[Edge], budget: int) -> Optional[List[VertexId]]:
    if not edges:
        return []
    if budget == 0:
        return None
    first = edges[0]
    for w in (first.u, first.v):
        sub = _cover_within([e for e in edges if w not in (e.u, e.v)], budget - 1)
        if sub is not None:
            return [w] + sub
    return None


def min_vertex_cover(g: GraphLike, limit: int = VC_BUDGET_LIMIT) -> Tuple[int, FrozenSet[VertexId]]:
    """Minimum vertex cover by iterative deepening over the branching depth"""
    edges = sorted(edge_set(g))
    for size in range(limit + 1):
        cover = _cover_within(edges, size)
        if cover is not None:
            return size, frozenset(cover)
    raise BudgetExceeded(f"minimum vertex cover exceeds {limit}", limit)


def oracle_vc(g: GraphLike, k: int, limit: int = VC_BUDGET_LIMIT) -> VcAnswer:
    """Exact VC(k) decision; a Yes carries a minimum cover"""
    if k > limit:
        raise BudgetExceeded(f"vc oracle budget {k} exceeds {limit}", limit)
    edges = sorted(edge_set(g))
    for size in range(k + 1):
        cover = _cover_within(edges, size)
        if cover is not None:
            return VcAnswer.yes(cover)
    return VcAnswer.no()


def _fvs_candidates(edges: Set[Edge], limit: int) -> List[VertexId]:
    vertices = sorted({w for e in edges for w in (e.u, e.v)})
    if len(vertices) > limit:
        raise BudgetExceeded(f"fvs oracle cannot enumerate {len(vertices)} vertices", limit)
    return vertices


def oracle_fvs(g: GraphLike, k: int, limit: int = FVS_VERTEX_LIMIT) -> FvsAnswer:
    """Exact FVS(k) decision by subset enumeration; a Yes carries a minimum set"""
    edges = edge_set(g)
    vertices = _fvs_candidates(edges, limit)
    for size in range(min(k, len(vertices)) + 1):
        for subset in combinations(vertices, size):
            if is_acyclic(edges, subset):
                return FvsAnswer.yes(subset)
    return FvsAnswer.no()


def min_fvs(g: GraphLike, limit: int = FVS_VERTEX_LIMIT) -> Tuple[int, FrozenSet[VertexId]]:
    edges = edge_set(g)
    vertices = _fvs_candidates(edges, limit)
    answer = oracle_fvs(edges, len(vertices), limit)
    return len(answer.cover), answer.cover
