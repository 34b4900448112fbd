"""Tests for the linear sketches: detectors, l0-samplers, SampleRecovery"""

from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chisquare

from vcstream.errors import RecoveryFail
from vcstream.services.sketch import (
    L0Sampler,
    OneSparseDetector,
    OutcomeKind,
    SampleRecovery,
    levels_for,
    repetitions_for,
    sk_recover,
    sk_sample,
    sk_update,
)

UNIVERSE = 1000


def make_recovery(seed=11, capacity=20, samplers=4, rows=17, universe=UNIVERSE):
    return SampleRecovery(universe, capacity, samplers, rows, seed)


# ==================== Sizing ====================

def test_repetitions_and_levels():
    assert repetitions_for(0.01) == 4
    assert repetitions_for(0.3) == 1
    assert levels_for(16) == 5
    assert levels_for(1) == 2


# ==================== One-sparse detector ====================

def test_detector_zero_vector():
    det = OneSparseDetector(UNIVERSE, seed=3)
    assert det.is_zero()
    assert det.decode() is None


def test_detector_single_entry():
    det = OneSparseDetector(UNIVERSE, seed=3).update(417, 2)
    assert det.decode() == (417, 2)


def test_detector_rejects_two_entries():
    det = OneSparseDetector(UNIVERSE, seed=3).update(10, 1).update(20, 1)
    assert det.decode() is None
    det.update(20, -1)
    assert det.decode() == (10, 1)


def test_detector_cancellation_returns_to_zero():
    det = OneSparseDetector(UNIVERSE, seed=5).update(7, 1).update(9, 1)
    det.update(9, -1).update(7, -1)
    assert det.is_zero()


@pytest.mark.slow
def test_detector_rarely_accepts_dense_vectors(rng):
    """10^5 vectors with two to six non-zero entries over [1, 1000]"""
    trials = 100_000
    false_verdicts = 0
    for seed in range(trials):
        det = OneSparseDetector(UNIVERSE, seed=seed)
        size = int(rng.integers(2, 7))
        for i in rng.choice(np.arange(1, UNIVERSE + 1), size=size, replace=False):
            value = int(rng.choice([-3, -2, -1, 1, 2, 3]))
            det.update(int(i), value)
        if det.decode() is not None:
            false_verdicts += 1
    assert false_verdicts / trials < 1e-2


# ==================== l0-sampler ====================

def test_sampler_empty_vector():
    sampler = L0Sampler(16, seed=1)
    assert sampler.sample().kind is OutcomeKind.EMPTY
    sampler.update(4, 1).update(4, -1)
    assert sampler.sample().kind is OutcomeKind.EMPTY


def test_sampler_single_entry():
    sampler = L0Sampler(16, seed=1).update(9, 1)
    outcome = sampler.sample()
    assert outcome.ok and outcome.index == 9


@pytest.mark.slow
@pytest.mark.parametrize("cancelled", [(), (1, 2, 3, 4)])
def test_sampler_is_uniform_over_support(cancelled):
    """10^4 independent samplers; support {5, 6, 7, 8} after any cancelled entries"""
    trials = 10_000
    support = (5, 6, 7, 8)
    hits = Counter()
    fails = 0
    for seed in range(trials):
        sampler = L0Sampler(16, seed=seed, delta=0.01)
        for i in cancelled + support:
            sampler.update(i, 1)
        for i in cancelled:
            sampler.update(i, -1)
        outcome = sampler.sample()
        if outcome.kind is OutcomeKind.FAIL:
            fails += 1
            continue
        assert outcome.index in support
        hits[outcome.index] += 1

    assert fails / trials <= 0.01
    answered = trials - fails
    for i in support:
        assert abs(hits[i] / answered - 0.25) <= 0.03
    _, p_value = chisquare([hits[i] for i in support])
    assert p_value > 0.001


# ==================== SampleRecovery ====================

def test_recovery_of_empty_sketch():
    sk = make_recovery()
    assert sk.recover() == set()
    assert sk.sample(0).kind is OutcomeKind.EMPTY


def test_recovery_under_capacity(rng):
    for trial in range(30):
        size = int(rng.integers(1, 21))
        support = {int(i) for i in rng.choice(np.arange(1, UNIVERSE + 1), size=size, replace=False)}
        sk = make_recovery(seed=trial)
        for i in support:
            sk.update(i, 1)
        assert sk.recover() == support
        assert sk.support == size


@pytest.mark.slow
def test_recovery_under_capacity_acceptance(rng):
    """10^3 random vectors with support <= capacity, exact in >= 1 - delta of trials"""
    trials = 1000
    exact = 0
    for trial in range(trials):
        size = int(rng.integers(1, 21))
        support = {int(i) for i in rng.choice(np.arange(1, UNIVERSE + 1), size=size, replace=False)}
        sk = make_recovery(seed=5000 + trial)
        for i in support:
            sk.update(i, 1)
        try:
            exact += sk.recover() == support
        except RecoveryFail:
            pass
    assert exact / trials >= 0.99


def test_recovery_after_deletions(rng):
    sk = make_recovery(seed=2)
    inserted = [int(i) for i in rng.choice(np.arange(1, UNIVERSE + 1), size=60, replace=False)]
    for i in inserted:
        sk.update(i, 1)
    for i in inserted[:45]:
        sk.update(i, -1)
    assert sk.recover() == set(inserted[45:])


def test_recover_counts_reports_values():
    sk = make_recovery(seed=4)
    sk.update(12, 1).update(12, 1).update(30, 1)
    assert sk.recover_counts() == {12: 2, 30: 1}


def test_recovery_over_capacity_fails_or_is_exact(rng):
    support = {int(i) for i in rng.choice(np.arange(1, UNIVERSE + 1), size=200, replace=False)}
    sk = make_recovery(seed=8, capacity=4, rows=3)
    for i in support:
        sk.update(i, 1)
    try:
        assert sk.recover() == support
    except RecoveryFail:
        pass


def test_samples_come_from_support():
    sk = make_recovery(seed=6, samplers=8)
    for i in (3, 99, 512):
        sk.update(i, 1)
    for which in range(8):
        outcome = sk.sample(which)
        assert outcome.kind is not OutcomeKind.EMPTY
        if outcome.ok:
            assert outcome.index in (3, 99, 512)


def test_sample_index_out_of_bank():
    sk = make_recovery(samplers=2)
    with pytest.raises(IndexError):
        sk.sample(2)


def test_update_rejects_index_outside_universe():
    sk = make_recovery()
    with pytest.raises(ValueError):
        sk.update(0, 1)
    with pytest.raises(ValueError):
        sk.update(UNIVERSE + 1, 1)


def test_insert_then_delete_restores_fresh_state():
    sk = make_recovery(seed=21)
    fresh = make_recovery(seed=21)
    for i in (5, 17, 400):
        sk.update(i, 1)
    for i in (400, 5, 17):
        sk.update(i, -1)
    assert sk.same_state(fresh)


def test_destroy_releases_space():
    sk = make_recovery()
    assert sk.words_stored() > 0
    sk.destroy()
    assert sk.destroyed
    assert sk.words_stored() == 0


def test_operation_aliases():
    sk = make_recovery(seed=9)
    sk_update(sk, 44, 1)
    assert sk_recover(sk) == {44}
    assert sk_sample(sk, 0).index in (44, None)


@settings(max_examples=40, deadline=None)
@given(
    entries=st.lists(
        st.tuples(st.integers(1, UNIVERSE), st.sampled_from([1, -1])),
        min_size=1, max_size=30,
    ),
    order=st.randoms(use_true_random=False),
)
def test_sketch_state_ignores_update_order(entries, order):
    first = make_recovery(seed=31, capacity=8, rows=4)
    second = make_recovery(seed=31, capacity=8, rows=4)
    for index, delta in entries:
        first.update(index, delta)
    shuffled = list(entries)
    order.shuffle(shuffled)
    for index, delta in shuffled:
        second.update(index, delta)
    assert first.same_state(second)
