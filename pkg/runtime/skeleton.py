import asyncio
import csv
import io
import logging
import time
from dataclasses import dataclass, field
from typing import Any, List, Optional, TextIO

from .partition import partition
from .program import BsfProgram, PayloadError, WorkerSlice, call_payload
from .transport import LocalTransport

log = logging.getLogger(__name__)

DEFAULT_MAX_ITERATIONS = 10 ** 6

PHASES = ('order', 'compute', 'reduce', 'exit')
TIMING_COLUMNS = ['iteration', 'phase', 'duration']


@dataclass(frozen=True)
class PhaseTiming:
    iteration: int
    phase: str
    duration: float


@dataclass
class RunOutcome:
    output: Any
    iterations: int
    converged: bool
    timings: List[PhaseTiming] = field(default_factory=list)
    walls: List[float] = field(default_factory=list)

    def iteration_times(self) -> List[float]:
        """Wall time of each iteration (sum of its phases)"""
        totals = [0.0] * self.iterations
        for t in self.timings:
            totals[t.iteration - 1] += t.duration
        return totals


async def _dispatch(program: BsfProgram, orders: List[Any], slices: List[WorkerSlice],
                    parallel: bool) -> List[Any]:
    """Run worker_step on every slice; results come back in rank order"""
    if parallel and len(slices) > 1:
        tasks = [asyncio.to_thread(program.worker_step, orders[s.rank], s, s.rank) for s in slices]
        return list(await asyncio.gather(*tasks))
    return [program.worker_step(orders[s.rank], s, s.rank) for s in slices]


async def _run(program: BsfProgram, K: int, max_iterations: int, parallel: bool,
               transport: LocalTransport) -> RunOutcome:
    state, data = call_payload('init', None, program.init)
    n_items = call_payload('init', None, program.n_items, data)
    slices = [
        WorkerSlice(rank=rank, workers=K, offset=offset, length=length,
                    data=call_payload('init', None, program.slice_data, data, offset, length))
        for rank, (offset, length) in enumerate(partition(n_items, K).slices)
    ]

    timings: List[PhaseTiming] = []
    walls: List[float] = []
    iteration = 0
    converged = bool(call_payload('exit', 0, program.exit_condition, state))
    while not converged and iteration < max_iterations:
        iteration += 1
        t0 = time.perf_counter()
        order = call_payload('order', iteration, program.make_order, state)
        orders = transport.broadcast(order, K)
        t1 = time.perf_counter()
        try:
            results = await _dispatch(program, orders, slices, parallel)
        except Exception as e:
            log.warning("Worker failure at iteration %d: %r", iteration, e)
            raise PayloadError('worker_step', iteration, e) from e
        results = transport.gather(results)
        t2 = time.perf_counter()
        state = call_payload('reduce', iteration, program.reduce, results, state)
        t3 = time.perf_counter()
        converged = bool(call_payload('exit', iteration, program.exit_condition, state))
        t4 = time.perf_counter()

        for phase, duration in zip(PHASES, (t1 - t0, t2 - t1, t3 - t2, t4 - t3)):
            timings.append(PhaseTiming(iteration, phase, duration))
        walls.append(t4 - t0)

    output = call_payload('finalize', iteration, program.finalize, state)
    if not converged:
        log.info("%s did not converge within %d iterations", program.name, max_iterations)
    return RunOutcome(output=output, iterations=iteration, converged=converged,
                      timings=timings, walls=walls)


def run_bsf(program: BsfProgram, K: int, max_iterations: int = DEFAULT_MAX_ITERATIONS,
            parallel: bool = True, transport: Optional[LocalTransport] = None) -> RunOutcome:
    """Run a BSF program on K in-process workers

    With parallel=True the worker steps of one iteration run on threads;
    otherwise they are emulated one after another. Either way reduce sees
    the results in rank order.
    """
    if isinstance(K, bool) or not isinstance(K, int) or K < 1:
        raise ValueError(f"K must be a positive integer, got {K!r}")
    if isinstance(max_iterations, bool) or not isinstance(max_iterations, int) or max_iterations < 1:
        raise ValueError(f"max_iterations must be a positive integer, got {max_iterations!r}")

    log.debug("Running %s on %d workers (parallel=%s)", program.name, K, parallel)
    return asyncio.run(_run(program, K, max_iterations, parallel, transport or LocalTransport()))


def timings_to_csv(timings: List[PhaseTiming], stream: Optional[TextIO] = None) -> str:
    out = stream if stream is not None else io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(TIMING_COLUMNS)
    for t in timings:
        writer.writerow([t.iteration, t.phase, repr(t.duration)])
    return '' if stream is not None else out.getvalue()
