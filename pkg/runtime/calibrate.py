import logging
import statistics
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from costmodel import BsfParams, TIME_FIELDS
from .program import BsfProgram, WorkerSlice, call_payload
from .transport import CommCostSpec, LocalTransport

log = logging.getLogger(__name__)

DEFAULT_REPETITIONS = 5

# Timings below this are dominated by timer and interpreter overhead
MIN_MEASURABLE = 1e-4


@dataclass
class CalibrationResult:
    params: BsfParams
    repetitions: int
    raw_samples: Dict[str, List[float]]
    flagged: List[str] = field(default_factory=list)
    order_nbytes: int = 0
    result_nbytes: int = 0

    def to_dict(self) -> Dict:
        return {
            'params': self.params.to_dict(),
            'repetitions': self.repetitions,
            'raw_samples': self.raw_samples,
            'flagged': self.flagged,
            'order_nbytes': self.order_nbytes,
            'result_nbytes': self.result_nbytes,
        }


def calibrate(program: BsfProgram, repetitions: int = DEFAULT_REPETITIONS,
              comm_cost: Optional[CommCostSpec] = None,
              min_measurable: float = MIN_MEASURABLE) -> CalibrationResult:
    """Measure the model parameters of a program on a single worker

    t_w and t_p are medians of timed worker_step and reduce calls over the
    whole data set; t_s and t_r come from the measured message sizes through
    the byte-cost model, and L is taken from it as configured.
    """
    if isinstance(repetitions, bool) or not isinstance(repetitions, int) or repetitions < 1:
        raise ValueError(f"repetitions must be a positive integer, got {repetitions!r}")
    comm_cost = comm_cost or CommCostSpec()
    transport = LocalTransport()

    state, data = call_payload('init', None, program.init)
    n_items = call_payload('init', None, program.n_items, data)
    whole = WorkerSlice(rank=0, workers=1, offset=0, length=n_items,
                        data=call_payload('init', None, program.slice_data, data, 0, n_items))

    samples: Dict[str, List[float]] = {name: [] for name in TIME_FIELDS}
    for rep in range(1, repetitions + 1):
        order = call_payload('order', rep, program.make_order, state)
        [order] = transport.broadcast(order, 1)

        start = time.perf_counter()
        result = call_payload('worker_step', rep, program.worker_step, order, whole, 0)
        samples['t_w'].append(time.perf_counter() - start)

        results = transport.gather([result])
        start = time.perf_counter()
        call_payload('reduce', rep, program.reduce, results, state)
        samples['t_p'].append(time.perf_counter() - start)

        samples['t_s'].append(comm_cost.message_time(transport.last_order_nbytes))
        samples['t_r'].append(comm_cost.message_time(transport.last_result_nbytes))
        samples['L'].append(comm_cost.latency)

    params = BsfParams(**{name: statistics.median(values) for name, values in samples.items()})
    flagged = [name for name in ('t_w', 't_p') if getattr(params, name) < min_measurable]
    for name in flagged:
        log.warning("%s of %s is below the measurable floor (%.3g s < %.3g s)",
                    name, program.name, getattr(params, name), min_measurable)

    log.debug("Calibrated %s: %s", program.name, params)
    return CalibrationResult(params=params, repetitions=repetitions, raw_samples=samples,
                             flagged=flagged, order_nbytes=transport.last_order_nbytes,
                             result_nbytes=transport.last_result_nbytes)
