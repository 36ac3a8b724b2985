import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

from costmodel import BsfParams


class InvalidClusterConfig(ValueError):
    """Raised for cluster configurations the simulator cannot run"""


class ScheduleMode(str, Enum):
    PAPER_FAITHFUL = 'paper_faithful'
    PIPELINED = 'pipelined'


def _check_time(name: str, value: float) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError) as e:
        raise InvalidClusterConfig(f"{name} must be a number, got {value!r}") from e
    if not math.isfinite(value) or value < 0:
        raise InvalidClusterConfig(f"{name} must be finite and nonnegative, got {value}")
    return value


@dataclass(frozen=True)
class ClusterConfig:
    """Virtual BSF-computer: one master and K homogeneous workers

    Work is split evenly as t_w / K unless per_worker_compute lists an
    explicit compute time for each worker.
    """
    K: int
    L: float = 0.0
    t_s: float = 0.0
    t_w: float = 0.0
    t_r: float = 0.0
    t_p: float = 0.0
    per_worker_compute: Optional[Tuple[float, ...]] = None
    mode: ScheduleMode = ScheduleMode.PAPER_FAITHFUL

    def __post_init__(self):
        if isinstance(self.K, bool) or not isinstance(self.K, int) or self.K < 1:
            raise InvalidClusterConfig(f"K must be a positive integer, got {self.K!r}")
        for name in ('L', 't_s', 't_w', 't_r', 't_p'):
            object.__setattr__(self, name, _check_time(name, getattr(self, name)))

        if self.per_worker_compute is not None:
            times = tuple(_check_time(f"per_worker_compute[{i}]", t)
                          for i, t in enumerate(self.per_worker_compute))
            if len(times) != self.K:
                raise InvalidClusterConfig(
                    f"per_worker_compute has {len(times)} entries for K={self.K}")
            object.__setattr__(self, 'per_worker_compute', times)

        try:
            object.__setattr__(self, 'mode', ScheduleMode(self.mode))
        except ValueError as e:
            raise InvalidClusterConfig(f"Unknown schedule mode: {self.mode!r}") from e

    @property
    def uniform(self) -> bool:
        return self.per_worker_compute is None

    def compute_times(self) -> List[float]:
        if self.per_worker_compute is not None:
            return list(self.per_worker_compute)
        return [self.t_w / self.K] * self.K

    def with_workers(self, K: int) -> 'ClusterConfig':
        """Same machine and job with the total work re-split over K workers"""
        if not self.uniform:
            raise InvalidClusterConfig("Cannot re-split an explicit per-worker compute list")
        return ClusterConfig(K=K, L=self.L, t_s=self.t_s, t_w=self.t_w,
                             t_r=self.t_r, t_p=self.t_p, mode=self.mode)

    @classmethod
    def from_params(cls, p: BsfParams, K: Optional[int] = None,
                    mode: ScheduleMode = ScheduleMode.PAPER_FAITHFUL) -> 'ClusterConfig':
        return cls(K=p.K if K is None else K, L=p.L, t_s=p.t_s, t_w=p.t_w,
                   t_r=p.t_r, t_p=p.t_p, mode=mode)
