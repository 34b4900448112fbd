"""
Instance generators: random dynamic streams, promised streams with a
planted cover, planted-FVS graphs, and the two lower-bound gadgets.

Every generator takes a numpy Generator so replays are seed-exact.
"""

import logging
from typing import List, Optional, Sequence, Set

import numpy as np

from vcstream.core import Config, Edge, ShadowGraph, StreamUpdate, canonical, is_acyclic
from vcstream.errors import VcStreamError
from vcstream.utils.oracles import min_vertex_cover, oracle_vc
from vcstream.utils.stream_io import QUERY, StreamFile, StreamItem

logger = logging.getLogger(__name__)


def _random_absent_edge(g: ShadowGraph, rng: np.random.Generator,
                        anchors: Optional[Sequence[int]] = None, attempts: int = 64) -> Optional[Edge]:
    """Uniform-ish absent edge, optionally touching one of `anchors`"""
    for _ in range(attempts):
        if anchors:
            u = int(anchors[rng.integers(len(anchors))])
        else:
            u = int(rng.integers(1, g.n + 1))
        v = int(rng.integers(1, g.n + 1))
        if u != v and not g.has_edge(canonical(u, v)):
            return canonical(u, v)
    # dense fallback: scan in order
    pool = anchors if anchors else range(1, g.n + 1)
    for u in pool:
        for v in range(1, g.n + 1):
            if u != v and not g.has_edge(canonical(u, v)):
                return canonical(u, v)
    return None


# ==================== Streams ====================

def gen_random_stream(n: int, length: int, rng: np.random.Generator,
                      delete_rate: float = 0.3, k: int = 0, mode: str = "dpsa",
                      queries: bool = True) -> StreamFile:
    """Valid dynamic stream over n vertices with no promise"""
    g = ShadowGraph(n)
    live: List[Edge] = []
    items: List[StreamItem] = []
    for _ in range(length):
        if live and rng.random() < delete_rate:
            e = live.pop(int(rng.integers(len(live))))
            update = StreamUpdate.delete(e.u, e.v)
        else:
            e = _random_absent_edge(g, rng)
            if e is None:
                continue
            live.append(e)
            update = StreamUpdate.insert(e.u, e.v)
        g.apply(update)
        items.append(update)
    if queries:
        items.append(QUERY)
    return StreamFile.build(n, k, mode, items)


def gen_promised_stream(cfg: Config, length: int, churn: float,
                        rng: Optional[np.random.Generator] = None,
                        mode: str = "pdpsa", verify: bool = True) -> StreamFile:
    """
    Dynamic stream whose every prefix has a vertex cover of size <= k.

    A planted set C of k vertices is chosen and every inserted edge touches
    C, so C covers each prefix. A `churn` fraction of steps delete a live
    edge; half of those take the oldest live edge, which is usually a
    matching edge, so Rematch runs often.

    Args:
        cfg: supplies n, k and (when rng is None) the seed
        length: number of updates
        churn: deletion fraction in [0, 1)
        rng: randomness source
        mode: header mode written to the stream
        verify: confirm with the VC oracle that the final graph fits in k
    """
    if cfg.k < 1:
        raise ValueError("promised streams need k >= 1")
    if not 0.0 <= churn < 1.0:
        raise ValueError(f"churn must lie in [0, 1), got {churn}")
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    planted = sorted(int(w) for w in rng.choice(np.arange(1, cfg.n + 1),
                                                size=min(cfg.k, cfg.n - 1), replace=False))
    g = ShadowGraph(cfg.n)
    live: List[Edge] = []
    items: List[StreamItem] = []
    for _ in range(length):
        if live and rng.random() < churn:
            pick = 0 if rng.random() < 0.5 else int(rng.integers(len(live)))
            e = live.pop(pick)
            update = StreamUpdate.delete(e.u, e.v)
        else:
            e = _random_absent_edge(g, rng, anchors=planted)
            if e is None:
                continue
            live.append(e)
            update = StreamUpdate.insert(e.u, e.v)
        g.apply(update)
        items.append(update)
        if not all(e.u in planted or e.v in planted for e in live):
            raise VcStreamError("planted cover lost an edge", f"after {len(items)} updates")
    items.append(QUERY)

    if verify and not oracle_vc(g, cfg.k).is_yes:
        raise VcStreamError("generated stream breaks the promise", f"planted={planted}")
    logger.debug(f"promised stream: n={cfg.n} k={cfg.k} updates={len(items) - 1} planted={planted}")
    return StreamFile.build(cfg.n, cfg.k, mode, items)


# ==================== Graphs ====================

def gen_random_graph(n: int, p: float, rng: np.random.Generator) -> ShadowGraph:
    """Erdos-Renyi G(n, p)"""
    edges = [Edge(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if rng.random() < p]
    return ShadowGraph.from_edges(n, edges)


def gen_planted_fvs_graph(n: int, k: int, rng: np.random.Generator, p: float = 0.5) -> ShadowGraph:
    """
    Graph with a feedback vertex set of size <= k: a random forest on the
    other n - k vertices plus random edges out of the k planted vertices.
    """
    planted = set(range(1, min(k, n) + 1))
    rest = [w for w in range(1, n + 1) if w not in planted]
    edges: Set[Edge] = set()
    for position, w in enumerate(rest[1:], start=1):
        if rng.random() < p:
            edges.add(Edge(w, rest[int(rng.integers(position))]))
    for u in sorted(planted):
        for v in range(1, n + 1):
            if u != v and rng.random() < p:
                edges.add(canonical(u, v))
    return ShadowGraph.from_edges(n, edges)


# ==================== Lower-bound gadgets ====================

def _index_vertex(k: int, block: int, i: int) -> int:
    """v_i, v'_i, v''_i, w_j, w'_j, w''_j numbered in six consecutive blocks of k"""
    return block * k + i


def index_gadget_stream(X: Sequence[Sequence[int]], I: int, J: int) -> StreamFile:
    """
    Index gadget as an insertion-only stream: Alice's matrix edges first,
    then Bob's pendant edges, then one query at budget 2k - 2.
    """
    k = len(X)
    if any(len(row) != k for row in X):
        raise ValueError("X must be a k x k matrix")
    if not (1 <= I <= k and 1 <= J <= k):
        raise ValueError(f"(I, J) = ({I}, {J}) outside [1, {k}]")
    items: List[StreamItem] = []
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            if X[i - 1][j - 1]:
                items.append(StreamUpdate.insert(_index_vertex(k, 0, i), _index_vertex(k, 3, j)))
    for i in range(1, k + 1):
        if i != I:
            items.append(StreamUpdate.insert(_index_vertex(k, 0, i), _index_vertex(k, 1, i)))
            items.append(StreamUpdate.insert(_index_vertex(k, 0, i), _index_vertex(k, 2, i)))
    for j in range(1, k + 1):
        if j != J:
            items.append(StreamUpdate.insert(_index_vertex(k, 3, j), _index_vertex(k, 4, j)))
            items.append(StreamUpdate.insert(_index_vertex(k, 3, j), _index_vertex(k, 5, j)))
    items.append(QUERY)
    return StreamFile.build(6 * k, max(0, 2 * k - 2), "psa", items)


def gen_index_gadget(X: Sequence[Sequence[int]], I: int, J: int) -> ShadowGraph:
    """G_X on 6k vertices; its minimum vertex cover is 2k - 2 + X[I][J]"""
    stream = index_gadget_stream(X, I, J)
    return ShadowGraph.from_edges(stream.n, (u.edge for u in stream.updates()))


def gen_disjointness_gadget(x: Sequence[int], y: Sequence[int], k: int = 0) -> ShadowGraph:
    """
    Graph on 8n vertices a_i..h_i (plus 3k for k padding triangles) that is
    acyclic iff no position has x_i = y_i = 1.
    """
    n = len(x)
    if len(y) != n:
        raise ValueError(f"strings differ in length: {n} vs {len(y)}")
    a, b, c, d, e, f, g, h = range(8)

    def node(letter: int, i: int) -> int:
        return 8 * (i - 1) + letter + 1

    edges = []
    for i in range(1, n + 1):
        letters = [(b, g), (c, e), (d, f)]
        letters += [(a, b), (c, d)] if x[i - 1] else [(a, c), (b, d)]
        letters += [(f, e), (g, h)] if y[i - 1] else [(f, h), (e, g)]
        edges += [canonical(node(p, i), node(q, i)) for p, q in letters]
    edges += [canonical(node(h, i), node(a, i + 1)) for i in range(1, n)]

    base = 8 * n
    for t in range(k):
        first = base + 3 * t + 1
        edges += [canonical(first, first + 1), canonical(first + 1, first + 2),
                  canonical(first, first + 2)]
    return ShadowGraph.from_edges(base + 3 * k, edges)


# ==================== Re-validation ====================

def validate_index_gadget(X: Sequence[Sequence[int]], I: int, J: int, g: ShadowGraph) -> bool:
    k = len(X)
    size, _ = min_vertex_cover(g)
    return size == 2 * k - 2 + int(bool(X[I - 1][J - 1]))


def validate_disjointness_gadget(x: Sequence[int], y: Sequence[int], g: ShadowGraph) -> bool:
    disjoint = not any(p and q for p, q in zip(x, y))
    base_edges = [e for e in g.edges() if e.v <= 8 * len(x)]
    return is_acyclic(base_edges) == disjoint
