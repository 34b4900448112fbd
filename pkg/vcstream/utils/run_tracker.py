#!/usr/bin/env python3
"""
Run Tracker for vcstream
Per-phase wall clock, failure-event counters and query results of a run,
plus a thread-safe aggregate across Monte-Carlo replays
"""

import logging
import threading
import time
from collections import Counter
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional

import psutil

from vcstream.core import VcAnswer

logger = logging.getLogger(__name__)

# Event counters always printed, even when zero
REPORTED_EVENTS = ("sketch_fails", "rematch_misses", "recovery_fails", "promise_violations")


@dataclass
class QueryResult:
    """One answered '?' marker"""

    position: int
    answer: VcAnswer
    verified: Optional[bool] = None
    recovery_skipped: bool = False

    def lines(self) -> List[str]:
        out = [
            f"query={self.position}",
            f"answer={self.answer}",
            "cover=" + ",".join(str(w) for w in self.answer.sorted_cover()),
        ]
        if self.verified is not None:
            out.append(f"verified={str(self.verified).lower()}")
        if self.recovery_skipped:
            out.append("recovery_skipped=true")
        return out


@dataclass
class RunReport:
    """
    Everything one run prints: answers with certificates, space census,
    failure events and phase timings, as key=value lines.
    """

    mode: str
    n: int
    k: int
    seed: int
    queries: List[QueryResult] = field(default_factory=list)
    words_stored: int = 0
    peak_words: int = 0
    events: Counter = field(default_factory=Counter)
    phases_ms: Dict[str, float] = field(default_factory=dict)
    rss_mb: float = 0.0
    error: Optional[str] = None
    exit_code: int = 0

    def record_space(self, words: int):
        self.words_stored = words
        self.peak_words = max(self.peak_words, words)

    def record_memory(self):
        """Resident set size of the whole process; includes interpreter and oracles"""
        self.rss_mb = psutil.Process().memory_info().rss / (1024 * 1024)

    @contextmanager
    def phase(self, name: str) -> Iterator[None]:
        """Accumulate wall clock of the enclosed block under `name`"""
        start = time.perf_counter()
        try:
            yield
        finally:
            elapsed = (time.perf_counter() - start) * 1000.0
            self.phases_ms[name] = self.phases_ms.get(name, 0.0) + elapsed

    @property
    def final_answer(self) -> Optional[VcAnswer]:
        return self.queries[-1].answer if self.queries else None

    def to_lines(self) -> List[str]:
        lines = [f"mode={self.mode}", f"n={self.n}", f"k={self.k}", f"seed={self.seed}"]
        for query in self.queries:
            lines.extend(query.lines())
        lines.append(f"words_stored={self.words_stored}")
        lines.append(f"peak_words={self.peak_words}")
        lines.append(f"rss_mb={self.rss_mb:.1f}")
        for name in REPORTED_EVENTS:
            lines.append(f"{name}={self.events.get(name, 0)}")
        for name in sorted(self.events):
            if name not in REPORTED_EVENTS:
                lines.append(f"{name}={self.events[name]}")
        for name, ms in self.phases_ms.items():
            lines.append(f"phase_{name}_ms={ms:.1f}")
        if self.error:
            lines.append(f"error={self.error}")
        lines.append(f"exit_code={self.exit_code}")
        return lines

    def render(self) -> str:
        return "\n".join(self.to_lines()) + "\n"


class RunTracker:
    """Aggregate RunReports across worker threads"""

    _instance = None
    _lock = threading.Lock()

    def __new__(cls):
        """Singleton pattern to ensure single instance"""
        if cls._instance is None:
            with cls._lock:
                if cls._instance is None:
                    cls._instance = super().__new__(cls)
                    cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return
        self._reports: List[RunReport] = []
        self._events: Counter = Counter()
        self._phases: Dict[str, float] = {}
        self._agreements = 0
        self._judged = 0
        self._lock = threading.Lock()
        self._initialized = True

    def record(self, report: RunReport, agrees: Optional[bool] = None):
        """
        Fold one finished run into the totals

        Args:
            report: the run's report
            agrees: whether the final answer matched the oracle (None when not judged)
        """
        with self._lock:
            self._reports.append(report)
            self._events.update(report.events)
            for name, ms in report.phases_ms.items():
                self._phases[name] = self._phases.get(name, 0.0) + ms
            if agrees is not None:
                self._judged += 1
                self._agreements += int(agrees)
        logger.debug(f"recorded run seed={report.seed} exit={report.exit_code}")

    def summary(self) -> Dict[str, Any]:
        with self._lock:
            runs = len(self._reports)
            return {
                "runs": runs,
                "failed_runs": sum(1 for r in self._reports if r.exit_code != 0),
                "judged": self._judged,
                "agreements": self._agreements,
                "unjudged": runs - self._judged,
                "agreement_rate": self._agreements / self._judged if self._judged else None,
                "peak_words": max((r.peak_words for r in self._reports), default=0),
                "events": dict(self._events),
                "phases_ms": dict(self._phases),
            }

    def summary_lines(self) -> List[str]:
        summary = self.summary()
        lines = [f"{key}={summary[key]}" for key in
                 ("runs", "failed_runs", "judged", "unjudged", "agreements", "peak_words")]
        rate = summary["agreement_rate"]
        # no judged run means nothing was compared against an oracle
        lines.append(f"agreement_rate={rate:.4f}" if rate is not None else "agreement_rate=n/a")
        for name in REPORTED_EVENTS:
            lines.append(f"{name}={summary['events'].get(name, 0)}")
        for name, ms in summary["phases_ms"].items():
            lines.append(f"phase_{name}_ms={ms:.1f}")
        return lines

    def reset(self):
        with self._lock:
            self._reports.clear()
            self._events.clear()
            self._phases.clear()
            self._agreements = 0
            self._judged = 0


def get_run_tracker() -> RunTracker:
    """
    Get global run tracker instance

    Returns:
        RunTracker instance
    """
    return RunTracker()
