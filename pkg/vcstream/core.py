"""
Core domain types for vcstream.

Vertices are dense integers 1..n fixed for the lifetime of a stream.
Edges are stored canonically (u < v) and admit a bijection to
[1, n(n-1)/2], which the dynamic sketches use as their index space.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Union

import networkx as nx
import numpy as np

from vcstream.errors import ConfigError, InvalidStream, SelfLoop

logger = logging.getLogger(__name__)

VertexId = int


@dataclass(frozen=True, order=True)
class Edge:
    """Unordered vertex pair, always held with u < v"""

    u: VertexId
    v: VertexId

    def __post_init__(self):
        if self.u == self.v:
            raise SelfLoop(f"self-loop on vertex {self.u}")
        if self.u > self.v:
            lo, hi = self.v, self.u
            object.__setattr__(self, "u", lo)
            object.__setattr__(self, "v", hi)

    def other(self, w: VertexId) -> VertexId:
        """Endpoint opposite to w"""
        if w == self.u:
            return self.v
        if w == self.v:
            return self.u
        raise ValueError(f"vertex {w} is not an endpoint of {self}")

    def check_range(self, n: int) -> "Edge":
        """Reject endpoints outside [1, n]"""
        for w in (self.u, self.v):
            if not 1 <= w <= n:
                raise InvalidStream(f"vertex {w} outside [1, {n}]", f"edge {self}")
        return self

    def index(self, n: int) -> int:
        """
        Position of this edge in [1, n(n-1)/2].

        Edges are enumerated row by row: (1,2), (1,3), ..., (1,n), (2,3), ...
        """
        a = self.u - 1
        return a * n - a * (a + 1) // 2 + (self.v - self.u)

    @classmethod
    def from_index(cls, index: int, n: int) -> "Edge":
        """Inverse of Edge.index"""
        if not 1 <= index <= n * (n - 1) // 2:
            raise ValueError(f"edge index {index} outside [1, {n * (n - 1) // 2}]")
        remaining = index
        u = 1
        while remaining > n - u:
            remaining -= n - u
            u += 1
        return cls(u, u + remaining)

    def __str__(self) -> str:
        return f"({self.u},{self.v})"


def canonical(u: VertexId, v: VertexId) -> Edge:
    """Canonical edge for the unordered pair {u, v}"""
    if u == v:
        raise SelfLoop(f"self-loop on vertex {u}", f"canonical({u}, {v})")
    return Edge(min(u, v), max(u, v))


class Op(Enum):
    INSERT = "+"
    DELETE = "-"

    @property
    def sign(self) -> int:
        return 1 if self is Op.INSERT else -1


@dataclass(frozen=True)
class StreamUpdate:
    """
    Tagged insert/delete of one edge.

    timestamp is the update's 1-based position in its stream (0 when the
    update has not been placed in a stream yet).
    """

    op: Op
    edge: Edge
    timestamp: int = 0

    @classmethod
    def insert(cls, u: VertexId, v: VertexId, timestamp: int = 0) -> "StreamUpdate":
        return cls(Op.INSERT, canonical(u, v), timestamp)

    @classmethod
    def delete(cls, u: VertexId, v: VertexId, timestamp: int = 0) -> "StreamUpdate":
        return cls(Op.DELETE, canonical(u, v), timestamp)

    def __str__(self) -> str:
        return f"{self.op.value} {self.edge.u} {self.edge.v}"


# ==================== Configuration ====================

@dataclass(frozen=True)
class Config:
    """
    Parameters of one streaming run.

    Derived sizes (x, y, recovery rows) are properties so they can never
    drift from the fields they depend on.
    """

    n: int
    k: int
    delta: float = 0.01
    c: float = 1.0
    alpha: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"n must be positive, got {self.n}")
        if self.k < 0:
            raise ConfigError(f"k must be non-negative, got {self.k}")
        if not 0.0 < self.delta < 1.0:
            raise ConfigError(f"delta must lie in (0, 1), got {self.delta}")
        if self.c < 1.0:
            raise ConfigError(f"c must be at least 1, got {self.c}")
        if self.alpha <= 0.0:
            raise ConfigError(f"alpha must be positive, got {self.alpha}")

    @classmethod
    def from_manager(cls, manager, n: int, k: int, **overrides) -> "Config":
        """Build a Config from the YAML stream defaults plus explicit overrides"""
        defaults = manager.get_stream_defaults()
        values = {
            "delta": defaults.get("delta", 0.01),
            "c": defaults.get("c", 1.0),
            "alpha": defaults.get("alpha", 1.0),
            "seed": defaults.get("seed", 0),
        }
        values.update({key: val for key, val in overrides.items() if val is not None})
        return cls(n=n, k=k, **values)

    @property
    def log_term(self) -> float:
        """log2(n / delta), floored at 1 so tiny graphs still get one row"""
        return max(1.0, math.log2(self.n / self.delta))

    @property
    def x(self) -> int:
        """Sketch capacity / low-degree threshold: alpha * 8ck log(n/delta)"""
        return max(1, math.ceil(self.alpha * 8 * self.c * self.k * self.log_term))

    @property
    def y(self) -> int:
        """Samples drawn by a high-degree rematch: alpha * 8c log(n/delta)"""
        return max(1, math.ceil(self.alpha * 8 * self.c * self.log_term))

    @property
    def recovery_rows(self) -> int:
        return max(1, math.ceil(self.log_term))

    @property
    def edge_universe(self) -> int:
        return self.n * (self.n - 1) // 2

    def derive_seed(self, *labels: int) -> int:
        """Deterministic 63-bit seed for a sub-structure named by integer labels"""
        seq = np.random.SeedSequence([self.seed & 0xFFFFFFFFFFFFFFFF, *labels])
        return int(seq.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


# ==================== Shadow graph ====================

class ShadowGraph:
    """
    Exact adjacency of the live edge set E_t.

    Used by oracles, validating replays and invariant checks only; it is not
    part of any streaming algorithm's space.
    """

    def __init__(self, n: int):
        self.n = n
        self._adj: Dict[VertexId, Set[VertexId]] = {}
        self.m = 0

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "ShadowGraph":
        graph = cls(n)
        for e in edges:
            graph.apply(StreamUpdate(Op.INSERT, e))
        return graph

    def apply(self, update: StreamUpdate) -> "ShadowGraph":
        """Apply one update in place, rejecting invalid stream steps"""
        e = update.edge
        e.check_range(self.n)
        present = self.has_edge(e)
        if update.op is Op.INSERT:
            if present:
                raise InvalidStream(
                    f"insert of present edge {e}",
                    f"timestamp={update.timestamp}",
                )
            self._adj.setdefault(e.u, set()).add(e.v)
            self._adj.setdefault(e.v, set()).add(e.u)
            self.m += 1
        else:
            if not present:
                raise InvalidStream(
                    f"delete of absent edge {e}",
                    f"timestamp={update.timestamp}",
                )
            for a, b in ((e.u, e.v), (e.v, e.u)):
                self._adj[a].discard(b)
                if not self._adj[a]:
                    del self._adj[a]
            self.m -= 1
        return self

    def has_edge(self, e: Edge) -> bool:
        return e.v in self._adj.get(e.u, ())

    def degree(self, w: VertexId) -> int:
        return len(self._adj.get(w, ()))

    def neighbors(self, w: VertexId) -> FrozenSet[VertexId]:
        return frozenset(self._adj.get(w, ()))

    def vertices(self) -> List[VertexId]:
        """Non-isolated vertices in ascending order"""
        return sorted(self._adj)

    def edges(self) -> Iterator[Edge]:
        for a in sorted(self._adj):
            for b in sorted(self._adj[a]):
                if a < b:
                    yield Edge(a, b)

    def edge_set(self) -> Set[Edge]:
        return set(self.edges())

    def copy(self) -> "ShadowGraph":
        clone = ShadowGraph(self.n)
        clone._adj = {w: set(nbrs) for w, nbrs in self._adj.items()}
        clone.m = self.m
        return clone

    def __len__(self) -> int:
        return self.m


def apply_update(g: ShadowGraph, update: StreamUpdate) -> ShadowGraph:
    """Functional spelling of ShadowGraph.apply"""
    return g.apply(update)


GraphLike = Union[ShadowGraph, Iterable[Edge]]


def edge_set(g: GraphLike) -> Set[Edge]:
    """Normalize a shadow graph or an edge iterable to a set of edges"""
    if isinstance(g, ShadowGraph):
        return g.edge_set()
    return set(g)


def to_networkx(edges: Iterable[Edge], vertices: Iterable[VertexId] = ()) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(vertices)
    graph.add_edges_from((e.u, e.v) for e in edges)
    return graph


def is_acyclic(edges: Iterable[Edge], removed: Iterable[VertexId] = ()) -> bool:
    """True when the graph minus `removed` has no cycle"""
    drop = set(removed)
    graph = to_networkx(e for e in edges if e.u not in drop and e.v not in drop)
    if graph.number_of_nodes() == 0:
        return True
    return nx.is_forest(graph)


# ==================== Answers ====================

class AnswerKind(Enum):
    YES = "YES"
    NO = "NO"
    PROMISE_VIOLATION = "PROMISE_VIOLATION"


@dataclass(frozen=True)
class VcAnswer:
    """Yes(cover) | No | PromiseViolation"""

    kind: AnswerKind
    cover: FrozenSet[VertexId] = field(default_factory=frozenset)

    @classmethod
    def yes(cls, cover: Iterable[VertexId]):
        return cls(AnswerKind.YES, frozenset(cover))

    @classmethod
    def no(cls):
        return cls(AnswerKind.NO)

    @classmethod
    def promise_violation(cls):
        return cls(AnswerKind.PROMISE_VIOLATION)

    @property
    def is_yes(self) -> bool:
        return self.kind is AnswerKind.YES

    @property
    def is_no(self) -> bool:
        return self.kind is AnswerKind.NO

    def verify(self, g: GraphLike, k: Optional[int] = None) -> bool:
        """Certificate check: the cover touches every edge and respects the budget"""
        if not self.is_yes:
            return True
        if k is not None and len(self.cover) > k:
            return False
        return all(e.u in self.cover or e.v in self.cover for e in edge_set(g))

    def sorted_cover(self) -> List[VertexId]:
        return sorted(self.cover)

    def __str__(self) -> str:
        return self.kind.value


class FvsAnswer(VcAnswer):
    """Same shape as VcAnswer; the certificate is a feedback vertex set"""

    def verify(self, g: GraphLike, k: Optional[int] = None) -> bool:
        if not self.is_yes:
            return True
        if k is not None and len(self.cover) > k:
            return False
        return is_acyclic(edge_set(g), self.cover)
