"""Discrete-event simulation of BSF iterations on a virtual cluster

Paper-faithful mode serializes the four phases exactly as the cost model
charges them:

  * the master sends the K orders one after another; each send keeps the
    master busy for t_s and the next send starts once the previous order
    has been delivered L later, so the send phase lasts K(L + t_s);
  * workers start computing only after the last order has arrived;
  * all results depart together at the end of the compute phase and
    cross the network in parallel (each arrives L after departing); the
    master's receive phase is charged K*L for the K messages followed by
    one serialized block of t_r receive work;
  * the barrier passes when receiving ends, then the master evaluates
    for t_p. The barrier itself costs nothing.

Pipelined mode lets each worker start on its own order. The master reads
results on a receive channel separate from its send channel: reading
starts at the first result arrival and takes t_r / K per message, first
come first served.

The event loop runs one event per phase; each phase handler records the
events of all K workers as one batch.
"""

import heapq
import itertools
import logging
from typing import Any, Callable, List, Sequence, Tuple

from costmodel import speedup_from_times
from .cluster import ClusterConfig, ScheduleMode, InvalidClusterConfig
from .timeline import IterationTimeline, RunTrace, EventKind, MASTER

log = logging.getLogger(__name__)

_SEND_KINDS = (EventKind.SEND_START, EventKind.SEND_END, EventKind.ORDER_ARRIVE)


class EventLoop:
    """Time-ordered event queue; equal timestamps run in scheduling order"""

    def __init__(self):
        self.now = 0.0
        self._queue = []
        self._seq = itertools.count()

    def schedule(self, t: float, handler: Callable[[float, Any], None], payload: Any = None) -> None:
        if t < self.now:
            raise RuntimeError(f"Event scheduled in the past: {t} < {self.now}")
        heapq.heappush(self._queue, (t, next(self._seq), handler, payload))

    def run(self) -> None:
        while self._queue:
            t, _, handler, payload = heapq.heappop(self._queue)
            self.now = t
            handler(t, payload)


class _FarmIteration:
    """Phase handlers for one iteration of the master-worker farm"""

    def __init__(self, cfg: ClusterConfig):
        self.cfg = cfg
        self.K = cfg.K
        self.workers = range(cfg.K)
        self.compute = cfg.compute_times()
        self.loop = EventLoop()
        self.timeline = IterationTimeline()

    def run(self) -> IterationTimeline:
        self.loop.schedule(0.0, self._send_phase)
        self.loop.run()
        return self.timeline

    def _send_phase(self, t: float, _) -> None:
        t_s, L = self.cfg.t_s, self.cfg.L
        stamps, nodes, arrivals = [], [], []
        for worker in self.workers:
            end = t + t_s
            arrive = end + L
            stamps += (t, end, arrive)
            nodes += (MASTER, MASTER, worker)
            arrivals.append(arrive)
            t = arrive
        self.timeline.record_batch(stamps, nodes, _SEND_KINDS * self.K)

        if self.cfg.mode == ScheduleMode.PIPELINED:
            self.loop.schedule(arrivals[0], self._pipelined_compute, arrivals)
        else:
            self.loop.schedule(t, self._compute_phase)

    def _compute_phase(self, t: float, _) -> None:
        if self.cfg.uniform:
            ends = [t + self.compute[0]] * self.K
        else:
            ends = [t + c for c in self.compute]
        self.timeline.record_batch([t] * self.K, self.workers, EventKind.COMPUTE_START)
        self.timeline.record_batch(ends, self.workers, EventKind.COMPUTE_END)
        # results leave together once the slowest worker is done
        self.loop.schedule(max(ends), self._return_phase)

    def _return_phase(self, t: float, _) -> None:
        self.timeline.record_batch([t] * self.K, self.workers, EventKind.RESULT_DEPART)
        self.timeline.record_batch([t + self.cfg.L] * self.K, self.workers, EventKind.RESULT_ARRIVE)
        self.loop.schedule(t + self.K * self.cfg.L + self.cfg.t_r, self._receive_end)

    def _pipelined_compute(self, t: float, arrivals: List[float]) -> None:
        L = self.cfg.L
        ends = [start + c for start, c in zip(arrivals, self.compute)]
        results = [end + L for end in ends]
        self.timeline.record_batch(arrivals, self.workers, EventKind.COMPUTE_START)
        self.timeline.record_batch(ends, self.workers, EventKind.COMPUTE_END)
        self.timeline.record_batch(ends, self.workers, EventKind.RESULT_DEPART)
        self.timeline.record_batch(results, self.workers, EventKind.RESULT_ARRIVE)
        self.loop.schedule(min(results), self._pipelined_receive, results)

    def _pipelined_receive(self, t: float, results: List[float]) -> None:
        per_message = self.cfg.t_r / self.K
        free = t
        for arrived_at in sorted(results):
            free = max(arrived_at, free) + per_message
        self.loop.schedule(free, self._receive_end)

    def _receive_end(self, t: float, _) -> None:
        # the master has read every result: that is the barrier
        self.timeline.record_batch((t, t, t), (MASTER, MASTER, MASTER),
                                   (EventKind.RECEIVE_END, EventKind.BARRIER_PASS,
                                    EventKind.EVALUATE_START))
        self.loop.schedule(t + self.cfg.t_p, self._evaluate_end)

    def _evaluate_end(self, t: float, _) -> None:
        self.timeline.record(t, MASTER, EventKind.EVALUATE_END)
        self.timeline.T_measured = t


def simulate_iteration(cfg: ClusterConfig) -> IterationTimeline:
    """Simulate a single iteration and return its event timeline"""
    if not isinstance(cfg, ClusterConfig):
        raise InvalidClusterConfig(f"Expected a ClusterConfig, got {type(cfg).__name__}")
    timeline = _FarmIteration(cfg).run()
    log.debug("Simulated K=%d (%s): T=%r, %d events",
              cfg.K, cfg.mode.value, timeline.T_measured, len(timeline))
    return timeline


def simulate_run(cfg: ClusterConfig, iterations: int) -> RunTrace:
    """Simulate a whole iterative run; every iteration costs the same"""
    if isinstance(iterations, bool) or not isinstance(iterations, int) or iterations < 1:
        raise InvalidClusterConfig(f"iterations must be a positive integer, got {iterations!r}")
    return RunTrace.from_iterations([simulate_iteration(cfg) for _ in range(iterations)])


def measured_speedup(cfg_template: ClusterConfig,
                     K_list: Sequence[int]) -> List[Tuple[int, float, float]]:
    """Simulated (K, T_measured, speedup) for each K, with t_w split evenly

    The K of the template is ignored; speedup is relative to a simulated
    single-worker run.
    """
    K_list = list(K_list)
    if not K_list:
        raise InvalidClusterConfig("K_list must not be empty")
    for K in K_list:
        if isinstance(K, bool) or not isinstance(K, int) or K < 1:
            raise InvalidClusterConfig(f"Invalid worker count in K_list: {K!r}")

    T1 = simulate_iteration(cfg_template.with_workers(1)).T_measured
    curve = []
    for K in K_list:
        TK = simulate_iteration(cfg_template.with_workers(K)).T_measured
        curve.append((K, TK, speedup_from_times(T1, TK)))
    return curve
