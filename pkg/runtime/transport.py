import copy
import math
import pickle
from dataclasses import dataclass
from typing import Any, List

import numpy as np


def message_nbytes(obj: Any) -> int:
    """Payload size of a message in bytes"""
    if obj is None:
        return 0
    if isinstance(obj, (bytes, bytearray, memoryview)):
        return len(obj)
    if isinstance(obj, np.ndarray):
        return int(obj.nbytes)
    if isinstance(obj, (bool, int, float, np.generic)):
        return 8
    if isinstance(obj, str):
        return len(obj.encode('utf-8'))
    if isinstance(obj, (tuple, list)):
        return sum(message_nbytes(item) for item in obj)
    if isinstance(obj, dict):
        return sum(message_nbytes(v) for v in obj.values())
    return len(pickle.dumps(obj))


@dataclass(frozen=True)
class CommCostSpec:
    """Affine byte-cost model for messages, in seconds

    message_time(n) = per_message + per_byte * n; latency is charged
    separately by the cost model as L.
    """
    latency: float = 0.0
    per_byte: float = 0.0
    per_message: float = 0.0

    def __post_init__(self):
        for name in ('latency', 'per_byte', 'per_message'):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and nonnegative, got {value}")

    def message_time(self, nbytes: int) -> float:
        if nbytes == 0 and self.per_message == 0:
            return 0.0
        return self.per_message + self.per_byte * nbytes


class LocalTransport:
    """In-process channel between the master and its workers

    Messages are copied so workers and master never share mutable
    objects; sizes of the last broadcast and gather are kept for
    calibration.
    """

    def __init__(self):
        self.last_order_nbytes = 0
        self.last_result_nbytes = 0
        self.messages_sent = 0
        self.messages_received = 0

    def broadcast(self, order: Any, K: int) -> List[Any]:
        self.last_order_nbytes = message_nbytes(order)
        self.messages_sent += K
        return [copy.deepcopy(order) for _ in range(K)]

    def gather(self, results: List[Any]) -> List[Any]:
        self.last_result_nbytes = sum(message_nbytes(r) for r in results)
        self.messages_received += len(results)
        return [copy.deepcopy(r) for r in results]
