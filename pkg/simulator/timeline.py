import math
from dataclasses import dataclass
from enum import Enum
from itertools import repeat
from operator import itemgetter
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Union

MASTER = 'master'

Node = Union[str, int]


class EventKind(str, Enum):
    SEND_START = 'send_start'
    SEND_END = 'send_end'
    ORDER_ARRIVE = 'order_arrive'
    COMPUTE_START = 'compute_start'
    COMPUTE_END = 'compute_end'
    RESULT_DEPART = 'result_depart'
    RESULT_ARRIVE = 'result_arrive'
    RECEIVE_END = 'receive_end'
    EVALUATE_START = 'evaluate_start'
    EVALUATE_END = 'evaluate_end'
    BARRIER_PASS = 'barrier_pass'


class TimelineEvent(NamedTuple):
    timestamp: float
    node: Node  # MASTER or a worker rank 0..K-1
    kind: EventKind

    def to_dict(self) -> Dict[str, Any]:
        return {'timestamp': self.timestamp, 'node': self.node, 'kind': self.kind.value}


class IterationTimeline:
    """Events of one iteration, kept in batches until they are read

    Batches are recorded in causal order. Reading `events` merges them by
    timestamp with a stable sort, so simultaneous events keep the order
    they were recorded in.
    """

    def __init__(self):
        self.T_measured = 0.0
        self._batches = []
        self._count = 0
        self._events: Optional[List[TimelineEvent]] = None

    def record(self, timestamp: float, node: Node, kind: EventKind) -> None:
        self.record_batch((timestamp,), (node,), kind)

    def record_batch(self, timestamps: Sequence[float], nodes: Sequence[Node],
                     kinds: Union[EventKind, Sequence[EventKind]]) -> None:
        if isinstance(kinds, EventKind):
            kinds = repeat(kinds)
        self._batches.append((timestamps, nodes, kinds))
        self._count += len(timestamps)
        self._events = None

    def __len__(self) -> int:
        return self._count

    @property
    def events(self) -> List[TimelineEvent]:
        if self._events is None:
            merged = []
            for timestamps, nodes, kinds in self._batches:
                merged.extend(zip(timestamps, nodes, kinds))
            merged.sort(key=itemgetter(0))
            self._events = list(map(TimelineEvent._make, merged))
        return self._events

    def of_kind(self, kind: EventKind) -> List[TimelineEvent]:
        return [e for e in self.events if e.kind == kind]

    def first(self, kind: EventKind) -> float:
        return min(e.timestamp for e in self.of_kind(kind))

    def last(self, kind: EventKind) -> float:
        return max(e.timestamp for e in self.of_kind(kind))

    def phase_durations(self) -> Dict[str, float]:
        """Wall spans of the send, compute, receive and evaluate phases"""
        return {
            'send': self.last(EventKind.ORDER_ARRIVE) - self.first(EventKind.SEND_START),
            'compute': self.last(EventKind.COMPUTE_END) - self.first(EventKind.COMPUTE_START),
            'receive': self.last(EventKind.RECEIVE_END) - self.first(EventKind.RESULT_DEPART),
            'evaluate': self.last(EventKind.EVALUATE_END) - self.first(EventKind.EVALUATE_START),
        }

    def to_dict(self) -> Dict[str, Any]:
        return {'T_measured': self.T_measured, 'events': [e.to_dict() for e in self.events]}


@dataclass
class RunTrace:
    iterations: List[IterationTimeline]
    iteration_count: int
    total_time: float

    @classmethod
    def from_iterations(cls, iterations: List[IterationTimeline]) -> 'RunTrace':
        # initialization and finalization are charged nothing
        return cls(iterations=iterations, iteration_count=len(iterations),
                   total_time=math.fsum(t.T_measured for t in iterations))
