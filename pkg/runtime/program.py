import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Tuple

log = logging.getLogger(__name__)


class PayloadError(RuntimeError):
    """User payload code failed; carries where in the run it happened"""

    def __init__(self, phase: str, iteration: Optional[int], cause: BaseException):
        self.phase = phase
        self.iteration = iteration
        self.cause = cause
        where = f"iteration {iteration}" if iteration is not None else "setup"
        super().__init__(f"Payload failed in {phase} ({where}): {cause!r}")


@dataclass(frozen=True)
class WorkerSlice:
    """The part of the problem data owned by one worker"""
    rank: int
    workers: int
    offset: int
    length: int
    data: Any


class BsfProgram(ABC):
    """Base class for iterative programs run by the BSF skeleton

    worker_step must depend only on its arguments; reduce receives the
    partial results in worker-rank order and returns a new state without
    mutating the one it was given.
    """

    def __init__(self, **kwargs):
        self.name = self.__class__.__name__.replace('Program', '')
        self.params = kwargs

    @abstractmethod
    def init(self) -> Tuple[Any, Any]:
        """Produce the initial global state and the problem data"""
        pass

    def n_items(self, data: Any) -> int:
        """Number of items the data is block-distributed over"""
        return len(data)

    def slice_data(self, data: Any, offset: int, length: int) -> Any:
        return data[offset:offset + length]

    @abstractmethod
    def make_order(self, state: Any) -> Any:
        """Build the order broadcast to every worker"""
        pass

    @abstractmethod
    def worker_step(self, order: Any, data_slice: WorkerSlice, worker: int) -> Any:
        """Process one order on one worker's slice"""
        pass

    @abstractmethod
    def reduce(self, results: List[Any], state: Any) -> Any:
        """Combine partial results into the next global state"""
        pass

    @abstractmethod
    def exit_condition(self, state: Any) -> bool:
        pass

    def finalize(self, state: Any) -> Any:
        return state


def call_payload(phase: str, iteration: Optional[int], fn: Callable, *args) -> Any:
    """Call user payload code, wrapping its failures in PayloadError"""
    try:
        return fn(*args)
    except PayloadError:
        raise
    except Exception as e:
        log.warning("Payload error in %s at iteration %s: %r", phase, iteration, e)
        raise PayloadError(phase, iteration, e) from e
