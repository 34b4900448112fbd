"""
Buss kernelization for VC(k) and exact extraction from the kernel.

Rule 1: a vertex with degree above the residual budget joins every small
cover, so it is forced into the solution and removed.
Rule 2: isolated vertices are dropped.
The surviving kernel has at most k'^2 edges and is solved with a depth-k'
bounded search tree.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set

from vcstream.core import Edge, GraphLike, VcAnswer, VertexId, edge_set
from vcstream.errors import VcStreamError

logger = logging.getLogger(__name__)


@dataclass
class KernelInstance:
    """Reduced graph, residual budget k' = k - |forced|, and the forced vertices in pick order"""

    vertices: Set[VertexId]
    edges: Set[Edge]
    budget: int
    forced: List[VertexId] = field(default_factory=list)
    k: int = 0

    def check(self):
        """Size bounds every surviving kernel satisfies"""
        assert self.budget == self.k - len(self.forced)
        assert len(self.edges) <= self.budget * self.budget
        assert len(self.vertices) <= 2 * len(self.edges)
        assert len(self.vertices) <= 2 * self.budget * self.budget


def _adjacency(edges: Set[Edge]) -> Dict[VertexId, Set[VertexId]]:
    adj: Dict[VertexId, Set[VertexId]] = {}
    for e in edges:
        adj.setdefault(e.u, set()).add(e.v)
        adj.setdefault(e.v, set()).add(e.u)
    return adj


def _remove_vertex(adj: Dict[VertexId, Set[VertexId]], w: VertexId):
    for nbr in adj.pop(w, set()):
        adj[nbr].discard(w)


def kernelize(g: GraphLike, k: int) -> Optional[KernelInstance]:
    """
    Apply Rule 1 exhaustively, then sweep Rule 2, until neither applies.

    Args:
        g: shadow graph or iterable of canonical edges
        k: cover budget

    Returns:
        The kernel, or None when the instance is a No (too many forced
        vertices or more than k'^2 surviving edges).
    """
    adj = _adjacency(edge_set(g))
    budget = k
    forced: List[VertexId] = []

    changed = True
    while changed:
        changed = False
        # Rule 1, smallest id first
        while True:
            heavy = [w for w in sorted(adj) if len(adj[w]) > budget]
            if not heavy:
                break
            if budget == 0:
                logger.debug(f"kernelize: vertex {heavy[0]} needs a slot but budget is spent")
                return None
            forced.append(heavy[0])
            _remove_vertex(adj, heavy[0])
            budget -= 1
            changed = True
        # Rule 2
        isolated = [w for w, nbrs in adj.items() if not nbrs]
        for w in isolated:
            del adj[w]
            changed = True

    edges = {Edge(a, b) for a, nbrs in adj.items() for b in nbrs if a < b}
    if len(edges) > budget * budget:
        logger.debug(f"kernelize: {len(edges)} edges exceed k'^2 = {budget * budget}")
        return None

    kern = KernelInstance(vertices=set(adj), edges=edges, budget=budget, forced=forced, k=k)
    kern.check()
    return kern


def _branch(edges: List[Edge], budget: int) -> Optional[List[VertexId]]:
    """Cover `edges` (sorted) with at most `budget` vertices; smaller endpoint first"""
    if not edges:
        return []
    if budget == 0:
        return None
    first = edges[0]
    for w in (first.u, first.v):
        rest = [e for e in edges if e.u != w and e.v != w]
        sub = _branch(rest, budget - 1)
        if sub is not None:
            return [w] + sub
    return None


def solve_kernel(kern: KernelInstance) -> VcAnswer:
    """Exhaustive search over the residual budget; cover = forced + residual cover"""
    residual = _branch(sorted(kern.edges), kern.budget)
    if residual is None:
        return VcAnswer.no()
    return VcAnswer.yes(list(kern.forced) + residual)


def vc_decide(g: GraphLike, k: int) -> VcAnswer:
    """Kernelize then solve; a Yes certificate is re-verified against g before returning"""
    edges = edge_set(g)
    kern = kernelize(edges, k)
    if kern is None:
        return VcAnswer.no()
    answer = solve_kernel(kern)
    if answer.is_yes and not answer.verify(edges, k):
        raise VcStreamError(
            "kernel certificate does not cover the input",
            f"cover={answer.sorted_cover()} k={k} edges={len(edges)}",
        )
    return answer
