"""
Unrestricted dynamic parameterized streaming algorithm for VC(k).

A graph with a vertex cover of size k has at most nk edges. The state keeps
one sample-recovery sketch over edge indices, sized for ~nk entries, and a
live-edge counter. A query rejects outright above nk edges and otherwise
recovers the whole graph and kernelizes it.

With duplicate-tolerant streams the exact counter over-counts re-inserted
edges, so approx mode gates on a distinct-edge estimate instead.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from typing import Dict, Optional, Set

import numpy as np

from vcstream.core import Config, Edge, StreamUpdate, VcAnswer
from vcstream.errors import EstimateFail, RecoveryFail
from vcstream.services.kernel import vc_decide
from vcstream.services.sketch import PolyHashBank, SampleRecovery

logger = logging.getLogger(__name__)

GLOBAL_SEED_TAG = 0xD1
ESTIMATOR_SEED_TAG = 0xD2
# h(i) lies below 2**31, so no index can sit above this level
MAX_LEVEL = 31


def _trailing_zeros(value: int) -> int:
    if value == 0:
        return MAX_LEVEL
    return (value & -value).bit_length() - 1


class DistinctEstimator:
    """
    Level-hash distinct counter supporting deletions.

    Indices whose hash has at least `level` trailing zeros are tracked with
    their net multiplicity. When more than `capacity` tracked indices are
    live, the level rises and the lower half is discarded. The estimate is
    |tracked| * 2**level, exact while the level is still 0.

    Args:
        capacity: tracked-index budget, ceil(constant / epsilon**2)
        seed: hash seed
    """

    def __init__(self, capacity: int, seed: int):
        self.capacity = max(1, capacity)
        self.hash = PolyHashBank(np.random.default_rng(seed), ())
        self.level = 0
        self.tracked: Dict[int, int] = {}

    def _level_of(self, index: int) -> int:
        return _trailing_zeros(int(self.hash(index)))

    def update(self, index: int, delta: int) -> "DistinctEstimator":
        if self._level_of(index) < self.level:
            return self
        mult = self.tracked.get(index, 0) + delta
        if mult < 0:
            raise EstimateFail(f"negative multiplicity for index {index}",
                               "delete of an index that was never inserted")
        if mult == 0:
            self.tracked.pop(index, None)
        else:
            self.tracked[index] = mult
        while len(self.tracked) > self.capacity:
            if self.level >= MAX_LEVEL:
                raise EstimateFail("distinct estimator ran out of levels",
                                   f"{len(self.tracked)} indices at level {self.level}")
            self.level += 1
            self.tracked = {i: m for i, m in self.tracked.items()
                            if self._level_of(i) >= self.level}
            logger.debug(f"distinct estimator raised to level {self.level}")
        return self

    def estimate(self) -> int:
        return len(self.tracked) << self.level

    @property
    def words(self) -> int:
        return 2 * len(self.tracked) + self.hash.words + 1


class DpsaState:
    """
    Global edge sketch, live counter, and (approx mode) distinct estimator.

    Args:
        config: run configuration
        approx: gate on a distinct-edge estimate (duplicate-tolerant streams)
        slack: capacity multiplier in [1, 1.01]
        epsilon: estimator relative error target
        estimator_constant: numerator of the estimator capacity
    """

    def __init__(self, config: Config, approx: bool = False, slack: float = 1.0,
                 epsilon: float = 0.01, estimator_constant: float = 1.0):
        if not 1.0 <= slack <= 1.01:
            raise ValueError(f"slack must lie in [1, 1.01], got {slack}")
        self.config = config
        self.approx = approx
        self.slack = 1.01 if approx and slack == 1.0 else slack
        self.bound = config.n * config.k
        self.capacity = max(1, math.ceil(self.slack * self.bound))
        self.sketch = SampleRecovery(
            universe=max(1, config.edge_universe),
            capacity=self.capacity,
            samplers=0,
            rows=config.recovery_rows,
            seed=config.derive_seed(GLOBAL_SEED_TAG),
            delta=config.delta,
        )
        self.live = 0
        self.estimator: Optional[DistinctEstimator] = None
        if approx:
            self.estimator = DistinctEstimator(
                capacity=math.ceil(estimator_constant / (epsilon * epsilon)),
                seed=config.derive_seed(ESTIMATOR_SEED_TAG),
            )
        self.events: Counter = Counter()

    def update(self, update: StreamUpdate) -> "DpsaState":
        """Add +-1 at the edge's index"""
        sign = update.op.sign
        index = update.edge.check_range(self.config.n).index(self.config.n)
        self.sketch.update(index, sign)
        self.live += sign
        if self.estimator is not None:
            self.estimator.update(index, sign)
        return self

    def distinct_edge_estimate(self) -> int:
        if self.estimator is None:
            raise ValueError("distinct-edge estimate needs approx mode")
        return self.estimator.estimate()

    def edge_count(self) -> int:
        """Quantity compared against the nk gate"""
        if self.estimator is not None:
            return self.distinct_edge_estimate()
        return self.live

    def gate_rejects(self, k: Optional[int] = None) -> bool:
        bound = self.bound if k is None else self.config.n * k
        limit = self.slack * bound if self.approx else bound
        return self.edge_count() > limit

    def recovered_edges(self) -> Set[Edge]:
        try:
            counts = self.sketch.recover_counts()
        except RecoveryFail:
            self.events["recovery_fails"] += 1
            logger.warning(f"⚠️ global recovery failed with {self.live} live updates")
            raise
        return {Edge.from_index(index, self.config.n)
                for index, value in counts.items() if value > 0}

    def query(self, k: Optional[int] = None) -> VcAnswer:
        budget = self.config.k if k is None else k
        if budget > self.config.k:
            raise ValueError(f"state was built for k={self.config.k}, cannot answer k={budget}")
        if self.gate_rejects(budget):
            self.events["gate_rejects"] += 1
            logger.debug(f"dpsa: {self.edge_count()} edges exceed nk={self.config.n * budget}, rejecting")
            return VcAnswer.no()
        self.events["recoveries"] += 1
        return vc_decide(self.recovered_edges(), budget)

    def words_stored(self) -> int:
        words = self.sketch.words_stored() + 1
        if self.estimator is not None:
            words += self.estimator.words
        return words


def dpsa_update(st: DpsaState, u: StreamUpdate) -> DpsaState:
    return st.update(u)


def dpsa_query(st: DpsaState, k: int) -> VcAnswer:
    return st.query(k)


def distinct_edge_estimate(st: DpsaState) -> int:
    return st.distinct_edge_estimate()
