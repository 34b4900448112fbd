"""
Linear sketches over sparse integer vectors indexed by [1, N].

Three layers, all linear in their updates:
- one-sparse detectors (count, index sum, polynomial fingerprint),
- l0-samplers built from level sampling over one-sparse detectors,
- SampleRecovery: a bank of l0-samplers for per-query sampling plus a
  peelable R x 2s bucket grid for exact support recovery, plus an exact
  support counter.

All detector banks are numpy int64 arrays updated with vectorized hashing.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Set, Tuple

import numpy as np

from vcstream.errors import RecoveryFail

logger = logging.getLogger(__name__)

# Products of two residues stay below 2**62, inside int64.
HASH_PRIME = (1 << 31) - 1
# Mersenne prime; exceeds N**2 for every index space up to 2**30.
FINGERPRINT_PRIME = (1 << 61) - 1
# Upper bound on the chance that one repetition of a sampler finds no
# one-sparse level; repetitions are sized so the total stays below delta.
L0_REPETITION_FAIL = 0.3


def repetitions_for(delta: float) -> int:
    """Independent repetitions needed for an l0-sampler to fail with probability <= delta"""
    return max(1, math.ceil(math.log(delta) / math.log(L0_REPETITION_FAIL)))


def levels_for(universe: int) -> int:
    """Level count 0..ceil(log2 N)"""
    return max(1, math.ceil(math.log2(max(universe, 2)))) + 1


class PolyHashBank:
    """Independent degree-3 polynomial hashes over GF(2^31 - 1), evaluated as one array"""

    def __init__(self, rng: np.random.Generator, shape: Tuple[int, ...]):
        self.coeffs = rng.integers(0, HASH_PRIME, size=(4,) + shape, dtype=np.int64)

    def __call__(self, index: int) -> np.ndarray:
        i = np.int64(index % HASH_PRIME)
        h = self.coeffs[3]
        for coeff in (self.coeffs[2], self.coeffs[1], self.coeffs[0]):
            h = (h * i + coeff) % HASH_PRIME
        return h

    @property
    def words(self) -> int:
        return int(self.coeffs.size)


def decode_cell(count: int, index_sum: int, fingerprint: int,
                base: int, universe: int) -> Optional[Tuple[int, int]]:
    """
    Decode one detector cell.

    Returns (index, value) when the cell holds exactly one non-zero entry,
    None otherwise (zero vector included).
    """
    if count == 0 or index_sum % count != 0:
        return None
    index = index_sum // count
    if not 1 <= index <= universe:
        return None
    expected = (count % FINGERPRINT_PRIME) * pow(base, index, FINGERPRINT_PRIME) % FINGERPRINT_PRIME
    if expected != fingerprint:
        return None
    return index, count


class OneSparseDetector:
    """
    Scalar one-sparse detector over [1, N].

    Zero vector -> (0, 0, 0); value w at index i -> (w, w*i, w*r^i mod p).
    False one-sparse verdicts happen with probability <= N/p per query.
    """

    def __init__(self, universe: int, seed: int):
        self.universe = universe
        rng = np.random.default_rng(seed)
        self.base = int(rng.integers(2, FINGERPRINT_PRIME - 1))
        self.count_sum = 0
        self.index_sum = 0
        self.fingerprint = 0

    def update(self, index: int, delta: int) -> "OneSparseDetector":
        self.count_sum += delta
        self.index_sum += delta * index
        term = delta * pow(self.base, index, FINGERPRINT_PRIME)
        self.fingerprint = (self.fingerprint + term) % FINGERPRINT_PRIME
        return self

    def is_zero(self) -> bool:
        return self.count_sum == 0 and self.index_sum == 0 and self.fingerprint == 0

    def decode(self) -> Optional[Tuple[int, int]]:
        return decode_cell(self.count_sum, self.index_sum, self.fingerprint,
                           self.base, self.universe)


class OutcomeKind(Enum):
    INDEX = "index"
    FAIL = "fail"
    EMPTY = "empty"


@dataclass(frozen=True)
class SampleOutcome:
    """Index(i) | Fail | Empty"""

    kind: OutcomeKind
    index: Optional[int] = None

    @classmethod
    def of(cls, index: int) -> "SampleOutcome":
        return cls(OutcomeKind.INDEX, index)

    @classmethod
    def fail(cls) -> "SampleOutcome":
        return cls(OutcomeKind.FAIL)

    @classmethod
    def empty(cls) -> "SampleOutcome":
        return cls(OutcomeKind.EMPTY)

    @property
    def ok(self) -> bool:
        return self.kind is OutcomeKind.INDEX


class DetectorArray:
    """A block of one-sparse detectors sharing a fingerprint base, stored as three int64 arrays"""

    def __init__(self, shape: Tuple[int, ...], base: int):
        self.base = base
        self.count = np.zeros(shape, dtype=np.int64)
        self.index_sum = np.zeros(shape, dtype=np.int64)
        self.fingerprint = np.zeros(shape, dtype=np.int64)

    def add(self, where, index: int, delta: int, term: int):
        """Add delta at `index` into the cells selected by `where`"""
        self.count[where] += delta
        self.index_sum[where] += delta * index
        self.fingerprint[where] = (self.fingerprint[where] + term) % FINGERPRINT_PRIME

    def arrays(self):
        return self.count, self.index_sum, self.fingerprint

    def equals(self, other: "DetectorArray") -> bool:
        return all(np.array_equal(a, b) for a, b in zip(self.arrays(), other.arrays()))

    @property
    def words(self) -> int:
        return 3 * int(self.count.size)


class L0SamplerBank:
    """
    `size` independent l0-samplers over [1, N].

    Sampler s, repetition j, level l keeps index i iff h_{s,j,l}(i) < p / 2^l,
    so each index survives level l with probability 2^-l. A query returns the
    lowest one-sparse level of the first repetition that has one.
    """

    def __init__(self, size: int, universe: int, rng: np.random.Generator,
                 base: int, delta: float):
        self.size = size
        self.universe = universe
        self.levels = levels_for(universe)
        self.reps = repetitions_for(delta)
        shape = (size, self.reps, self.levels)
        self.hashes = PolyHashBank(rng, shape)
        self.thresholds = np.array(
            [HASH_PRIME >> level for level in range(self.levels)], dtype=np.int64
        )
        self.cells = DetectorArray(shape, base)

    def update(self, index: int, delta: int, term: int):
        if self.size == 0:
            return
        mask = self.hashes(index) < self.thresholds
        self.cells.add(mask, index, delta, term)

    def sample(self, which: int) -> SampleOutcome:
        count, index_sum, fingerprint = (a[which] for a in self.cells.arrays())
        for rep in range(self.reps):
            for level in range(self.levels):
                decoded = decode_cell(int(count[rep, level]), int(index_sum[rep, level]),
                                      int(fingerprint[rep, level]), self.cells.base,
                                      self.universe)
                if decoded is not None and decoded[1] > 0:
                    return SampleOutcome.of(decoded[0])
        return SampleOutcome.fail()

    @property
    def words(self) -> int:
        return self.cells.words + self.hashes.words


class L0Sampler:
    """Single l0-sampler: returns a uniform support element, or FAIL with probability <= delta"""

    def __init__(self, universe: int, seed: int, delta: float = 0.01):
        rng = np.random.default_rng(seed)
        self.base = int(rng.integers(2, FINGERPRINT_PRIME - 1))
        self.bank = L0SamplerBank(1, universe, rng, self.base, delta)
        self.support = 0

    def update(self, index: int, delta: int) -> "L0Sampler":
        term = delta * pow(self.base, index, FINGERPRINT_PRIME) % FINGERPRINT_PRIME
        self.bank.update(index, delta, term)
        self.support += delta
        return self

    def sample(self) -> SampleOutcome:
        if self.support == 0:
            return SampleOutcome.empty()
        return self.bank.sample(0)


class SampleRecovery:
    """
    Linear sketch of one sparse vector supporting uniform sampling and
    exact support recovery up to `capacity` non-zero entries.

    Fields:
        sampler_bank: `samplers` independent L0Samplers (per-query sampling)
        recovery_grid: rows x (2 * capacity) one-sparse detectors, one hash per row
        support: exact signed count of net insertions
    """

    def __init__(self, universe: int, capacity: int, samplers: int, rows: int,
                 seed: int, delta: float = 0.01):
        self.universe = universe
        self.capacity = max(1, capacity)
        self.rows = max(1, rows)
        self.buckets = 2 * self.capacity
        self.seed = seed
        rng = np.random.default_rng(seed)
        self.base = int(rng.integers(2, FINGERPRINT_PRIME - 1))
        self.sampler_bank = L0SamplerBank(samplers, universe, rng, self.base, delta)
        self.row_hashes = PolyHashBank(rng, (self.rows,))
        self.recovery_grid = DetectorArray((self.rows, self.buckets), self.base)
        self._row_ids = np.arange(self.rows)
        self.support = 0
        self.destroyed = False

    # ==================== Updates ====================

    def update(self, index: int, delta: int) -> "SampleRecovery":
        """Add delta (normally +1 or -1) at `index`"""
        if not 1 <= index <= self.universe:
            raise ValueError(f"index {index} outside [1, {self.universe}]")
        term = delta * pow(self.base, index, FINGERPRINT_PRIME) % FINGERPRINT_PRIME
        self.sampler_bank.update(index, delta, term)
        buckets = self.row_hashes(index) % self.buckets
        self.recovery_grid.add((self._row_ids, buckets), index, delta, term)
        self.support += delta
        return self

    # ==================== Queries ====================

    def sample(self, which: int) -> SampleOutcome:
        """Draw from sampler `which`; Empty iff the support counter is zero"""
        if not 0 <= which < self.sampler_bank.size:
            raise IndexError(f"sampler {which} outside bank of {self.sampler_bank.size}")
        if self.support == 0:
            return SampleOutcome.empty()
        return self.sampler_bank.sample(which)

    def recover_counts(self) -> Dict[int, int]:
        """
        Peel the recovery grid into {index: value}.

        Raises RecoveryFail when no pure cell remains but the grid is non-zero.
        """
        count, index_sum, fingerprint = (a.copy() for a in self.recovery_grid.arrays())
        recovered: Dict[int, int] = {}
        peel_budget = self.rows * self.buckets
        while True:
            cells = np.argwhere(count != 0)
            if len(cells) == 0:
                break
            if peel_budget <= 0:
                raise RecoveryFail("sparse recovery did not converge",
                                   f"{len(recovered)} indices peeled")
            peel_budget -= 1
            progress = False
            for row, bucket in cells:
                decoded = decode_cell(int(count[row, bucket]), int(index_sum[row, bucket]),
                                      int(fingerprint[row, bucket]), self.base, self.universe)
                if decoded is None:
                    continue
                index, value = decoded
                targets = (self._row_ids, self.row_hashes(index) % self.buckets)
                term = value * pow(self.base, index, FINGERPRINT_PRIME) % FINGERPRINT_PRIME
                count[targets] -= value
                index_sum[targets] -= value * index
                fingerprint[targets] = (fingerprint[targets] - term) % FINGERPRINT_PRIME
                recovered[index] = recovered.get(index, 0) + value
                progress = True
            if not progress:
                raise RecoveryFail(
                    "sparse recovery stalled",
                    f"{len(cells)} impure cells left, {len(recovered)} indices peeled",
                )
        if np.any(index_sum) or np.any(fingerprint):
            raise RecoveryFail("sparse recovery left residue in zero-count cells")
        return {index: value for index, value in recovered.items() if value != 0}

    def recover(self) -> Set[int]:
        """Support set of the sketched vector (exact when support <= capacity, w.h.p.)"""
        if self.support == 0 and not np.any(self.recovery_grid.count):
            return set()
        return set(self.recover_counts())

    # ==================== Bookkeeping ====================

    def destroy(self):
        """Release every array held by the sketch"""
        self.sampler_bank = None
        self.recovery_grid = None
        self.row_hashes = None
        self.destroyed = True

    @property
    def samplers(self) -> int:
        return self.sampler_bank.size

    def words_stored(self) -> int:
        if self.destroyed:
            return 0
        return (self.sampler_bank.words + self.recovery_grid.words
                + self.row_hashes.words + 2)

    def same_state(self, other: "SampleRecovery") -> bool:
        """Exact field-by-field equality of every linear component"""
        return (self.support == other.support
                and self.sampler_bank.cells.equals(other.sampler_bank.cells)
                and self.recovery_grid.equals(other.recovery_grid))


# Functional entry points

def sk_update(s: SampleRecovery, index: int, delta: int) -> SampleRecovery:
    return s.update(index, delta)


def sk_sample(s: SampleRecovery, which: int) -> SampleOutcome:
    return s.sample(which)


def sk_recover(s: SampleRecovery) -> Set[int]:
    return s.recover()
