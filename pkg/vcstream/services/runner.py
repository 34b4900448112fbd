"""
Mode drivers: replay a StreamFile through psa | pdpsa | dpsa | fvs, answer
every query marker, re-verify certificates against the replayed live graph,
and fold the run into a RunReport. `run_sweep` fans generated streams out
over a thread pool and measures agreement with the brute-force oracles.
"""

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from vcstream.core import Config, Op, ShadowGraph, StreamUpdate, VcAnswer
from vcstream.errors import BudgetExceeded, InvalidStream, VcStreamError
from vcstream.services.dpsa import DpsaState
from vcstream.services.fvs import FvsState
from vcstream.services.pdpsa import MatchingState
from vcstream.services.psa import PsaState
from vcstream.utils.generators import gen_promised_stream, gen_random_stream
from vcstream.utils.invariant_checker import check_invariants
from vcstream.utils.oracles import FVS_VERTEX_LIMIT, VC_BUDGET_LIMIT, oracle_fvs, oracle_vc
from vcstream.utils.run_tracker import QueryResult, RunReport, get_run_tracker
from vcstream.utils.stream_io import QUERY, StreamFile

logger = logging.getLogger(__name__)


@dataclass
class RunOptions:
    """Per-run switches that are not part of Config"""

    approx: bool = False
    strict_degrees: bool = False
    audit: bool = False
    dpsa: Dict[str, Any] = field(default_factory=dict)
    oracle_limits: Dict[str, int] = field(default_factory=dict)


class LiveGraph:
    """
    Replayed live edge set used to verify certificates.

    Strict replay rejects invalid steps; tolerant replay (duplicate-tolerant
    dpsa streams) keeps multiplicities and exposes the distinct live edges.
    """

    def __init__(self, n: int, tolerant: bool = False):
        self.n = n
        self.tolerant = tolerant
        self.strict = ShadowGraph(n)
        self.counts: Counter = Counter()

    def apply(self, update: StreamUpdate):
        if not self.tolerant:
            self.strict.apply(update)
            return
        update.edge.check_range(self.n)
        self.counts[update.edge] += update.op.sign
        if self.counts[update.edge] < 0:
            raise InvalidStream(f"delete of absent edge {update.edge}", f"timestamp={update.timestamp}")
        if self.counts[update.edge] == 0:
            del self.counts[update.edge]

    def graph(self) -> ShadowGraph:
        if not self.tolerant:
            return self.strict
        return ShadowGraph.from_edges(self.n, self.counts)


# ==================== Mode drivers ====================

class ModeDriver:
    """Uniform update/query/census surface over one streaming state"""

    mode = ""
    insertion_only = False

    def __init__(self, config: Config, options: RunOptions):
        self.config = config
        self.options = options

    def update(self, update: StreamUpdate):
        raise NotImplementedError

    def query(self) -> VcAnswer:
        return self.state.query(self.config.k)

    def words_stored(self) -> int:
        return self.state.words_stored()

    @property
    def events(self) -> Counter:
        return getattr(self.state, "events", Counter())

    def after_update(self, live: LiveGraph):
        pass

    def answer_note(self) -> bool:
        """True when the last query skipped recovery"""
        return False


class PsaDriver(ModeDriver):
    mode = "psa"
    insertion_only = True

    def __init__(self, config: Config, options: RunOptions):
        super().__init__(config, options)
        self.state = PsaState(k=config.k)

    def update(self, update: StreamUpdate):
        self.state.insert(update.edge)

    def after_update(self, live: LiveGraph):
        self.state.check_space()


class PdpsaDriver(ModeDriver):
    mode = "pdpsa"

    def __init__(self, config: Config, options: RunOptions):
        super().__init__(config, options)
        self.state = MatchingState(config, strict_degrees=options.strict_degrees, audit=options.audit)

    def update(self, update: StreamUpdate):
        if update.op is Op.INSERT:
            self.state.insertion(update.edge)
        else:
            self.state.deletion(update.edge)

    def after_update(self, live: LiveGraph):
        self.state.check_space()
        if self.options.audit:
            violations = check_invariants(self.state, live.graph())
            if violations:
                raise VcStreamError(
                    f"{len(violations)} invariant violations at t={self.state.clock}",
                    "; ".join(str(v) for v in violations[:5]),
                )


class DpsaDriver(ModeDriver):
    mode = "dpsa"

    def __init__(self, config: Config, options: RunOptions):
        super().__init__(config, options)
        settings = options.dpsa
        self.state = DpsaState(
            config,
            approx=options.approx,
            slack=settings.get("approx_slack", 1.01) if options.approx else settings.get("slack", 1.0),
            epsilon=settings.get("approx_epsilon", 0.01),
            estimator_constant=settings.get("estimator_constant", 1.0),
        )
        self._skipped = False

    def update(self, update: StreamUpdate):
        self.state.update(update)

    def query(self) -> VcAnswer:
        self._skipped = self.state.gate_rejects(self.config.k)
        return self.state.query(self.config.k)

    def answer_note(self) -> bool:
        return self._skipped


class FvsDriver(ModeDriver):
    mode = "fvs"
    insertion_only = True

    def __init__(self, config: Config, options: RunOptions):
        super().__init__(config, options)
        self.state = FvsState(n=config.n, k=config.k)

    def update(self, update: StreamUpdate):
        self.state.insert(update.edge)


DRIVERS = {driver.mode: driver for driver in (PsaDriver, PdpsaDriver, DpsaDriver, FvsDriver)}


def make_driver(mode: str, config: Config, options: Optional[RunOptions] = None) -> ModeDriver:
    if mode not in DRIVERS:
        raise VcStreamError(f"unknown mode '{mode}'", f"expected one of {', '.join(DRIVERS)}")
    return DRIVERS[mode](config, options or RunOptions())


# ==================== Single run ====================

def run_stream(stream: StreamFile, config: Config, mode: Optional[str] = None,
               options: Optional[RunOptions] = None) -> RunReport:
    """
    Replay `stream` and answer each query marker.

    Args:
        stream: parsed stream file
        config: run configuration (n and k normally taken from the header)
        mode: overrides the header mode
        options: approx / strict-degree / audit switches

    Returns:
        RunReport; failures are recorded in it with their exit code rather
        than raised.
    """
    options = options or RunOptions()
    mode = mode or stream.mode
    report = RunReport(mode=mode, n=config.n, k=config.k, seed=config.seed)
    live = LiveGraph(config.n, tolerant=(mode == "dpsa" and options.approx))
    driver: Optional[ModeDriver] = None

    try:
        driver = make_driver(mode, config, options)
        logger.info(f"Starting {mode} run: n={config.n} k={config.k} seed={config.seed}")
        for position, item in enumerate(stream.items):
            if item == QUERY:
                with report.phase("query"):
                    answer = driver.query()
                verified = answer.verify(live.graph(), config.k) if answer.is_yes else None
                if verified is False:
                    raise VcStreamError("certificate failed re-verification", f"query {position}")
                report.queries.append(QueryResult(position, answer, verified, driver.answer_note()))
                logger.info(f"✅ query {position}: {answer} cover={answer.sorted_cover()}")
                continue
            if driver.insertion_only and item.op is Op.DELETE:
                raise InvalidStream(f"{mode} streams are insertion-only", f"timestamp={item.timestamp}")
            with report.phase("update"):
                live.apply(item)
                driver.update(item)
                driver.after_update(live)
            report.record_space(driver.words_stored())
    except VcStreamError as exc:
        report.error = exc.user_message
        report.exit_code = exc.exit_code
        logger.error(f"❌ {mode} run aborted: {exc.user_message} {exc.technical_details}".rstrip())
    finally:
        if driver is not None:
            report.events.update(driver.events)
        report.record_memory()
    return report


def oracle_answer(mode: str, graph: ShadowGraph, k: int,
                  limits: Optional[Dict[str, int]] = None) -> VcAnswer:
    limits = limits or {}
    if mode == "fvs":
        return oracle_fvs(graph, k, limit=limits.get("fvs_vertices", FVS_VERTEX_LIMIT))
    return oracle_vc(graph, k, limit=limits.get("vc_budget", VC_BUDGET_LIMIT))


# ==================== Monte-Carlo sweep ====================

def _sweep_stream(mode: str, config: Config, length: int, churn: float) -> StreamFile:
    rng = np.random.default_rng(config.seed)
    if mode == "pdpsa":
        return gen_promised_stream(config, length, churn, rng=rng, mode=mode)
    delete_rate = 0.0 if DRIVERS[mode].insertion_only else churn
    return gen_random_stream(config.n, length, rng, delete_rate=delete_rate, k=config.k, mode=mode)


def _sweep_trial(mode: str, config: Config, length: int, churn: float,
                 options: RunOptions) -> Dict[str, Any]:
    stream = _sweep_stream(mode, config, length, churn)
    report = run_stream(stream, config, mode, options)
    agrees = None
    if report.exit_code == 0 and report.final_answer is not None:
        live = LiveGraph(config.n)
        for update in stream.updates():
            live.apply(update)
        try:
            expected = oracle_answer(mode, live.graph(), config.k, options.oracle_limits)
            agrees = expected.kind is report.final_answer.kind
        except BudgetExceeded:
            logger.warning(f"⚠️ oracle budget exceeded for seed={config.seed}, run not judged")
    return {"report": report, "agrees": agrees}


def run_sweep(mode: str, base: Config, trials: int, length: int, churn: float,
              workers: int = 4, options: Optional[RunOptions] = None) -> Dict[str, Any]:
    """
    Replay `trials` generated streams with seeds base.seed, base.seed + 1, ...

    Each replay owns its state; results are merged in the global RunTracker.
    """
    options = options or RunOptions()
    tracker = get_run_tracker()
    tracker.reset()
    logger.info(f"Starting sweep: mode={mode} trials={trials} workers={workers}")

    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {
            pool.submit(_sweep_trial, mode,
                        Config(n=base.n, k=base.k, delta=base.delta, c=base.c,
                               alpha=base.alpha, seed=base.seed + trial),
                        length, churn, options): trial
            for trial in range(trials)
        }
        for future in as_completed(futures):
            result = future.result()
            tracker.record(result["report"], result["agrees"])

    summary = tracker.summary()
    logger.info(f"✅ Sweep finished: {summary['agreements']}/{summary['judged']} runs agree with the oracle")
    return summary
