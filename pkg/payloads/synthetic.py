import time
from dataclasses import dataclass

from runtime import BsfProgram, WorkerSlice
from .problems import ProblemError


@dataclass(frozen=True)
class SyntheticState:
    iteration: int = 0
    received_bytes: int = 0


def spin(seconds: float) -> None:
    """Busy-wait until a wall-clock deadline"""
    deadline = time.perf_counter() + seconds
    while time.perf_counter() < deadline:
        pass


class SyntheticProgram(BsfProgram):
    """Calibration subject with known compute time and message sizes

    Each worker spins for compute_ms / K and returns its block of a
    result_bytes buffer, so the results together always total result_bytes.
    """

    def __init__(self, compute_ms: float = 50.0, order_bytes: int = 1024,
                 result_bytes: int = 1024, iterations: int = 3):
        for name, value in (('compute_ms', compute_ms), ('order_bytes', order_bytes),
                            ('result_bytes', result_bytes), ('iterations', iterations)):
            if value is None or value < 0:
                raise ProblemError(f"{name} must be nonnegative, got {value}")
        super().__init__(compute_ms=compute_ms, order_bytes=order_bytes,
                         result_bytes=result_bytes, iterations=iterations)
        self.compute_ms = float(compute_ms)
        self.order_bytes = int(order_bytes)
        self.result_bytes = int(result_bytes)
        self.iterations = int(iterations)

    def init(self):
        return SyntheticState(), bytes(self.result_bytes)

    def make_order(self, state: SyntheticState) -> bytes:
        return bytes(self.order_bytes)

    def worker_step(self, order: bytes, data_slice: WorkerSlice, worker: int) -> bytes:
        if self.compute_ms > 0:
            spin(self.compute_ms / 1000.0 / data_slice.workers)
        return bytes(data_slice.data)

    def reduce(self, results, state: SyntheticState) -> SyntheticState:
        return SyntheticState(iteration=state.iteration + 1,
                              received_bytes=sum(len(r) for r in results))

    def exit_condition(self, state: SyntheticState) -> bool:
        return state.iteration >= self.iterations

    @classmethod
    def from_options(cls, compute_ms: float = 50.0, order_bytes: int = 1024,
                     result_bytes: int = 1024, iterations: int = 3, **_) -> 'SyntheticProgram':
        return cls(compute_ms, order_bytes, result_bytes, iterations)


def synthetic_program(compute_ms: float, order_bytes: int, result_bytes: int,
                      iterations: int) -> SyntheticProgram:
    return SyntheticProgram(compute_ms, order_bytes, result_bytes, iterations)
