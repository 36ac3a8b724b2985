import math
import dataclasses
from dataclasses import dataclass, asdict
from typing import Any, Dict, Optional


class InvalidParameterError(ValueError):
    """Raised when model inputs violate the BSF parameter constraints"""


TIME_FIELDS = ('L', 't_s', 't_w', 't_r', 't_p')


def check_time(name: str, value: float) -> float:
    """Validate a single time value: finite and nonnegative"""
    try:
        value = float(value)
    except (TypeError, ValueError) as e:
        raise InvalidParameterError(f"{name} must be a number, got {value!r}") from e
    if not math.isfinite(value):
        raise InvalidParameterError(f"{name} must be finite, got {value}")
    if value < 0:
        raise InvalidParameterError(f"{name} must be nonnegative, got {value}")
    return value


def check_workers(K: float) -> float:
    """Validate a worker count used in analysis (real K >= 1 is allowed)"""
    try:
        K = float(K)
    except (TypeError, ValueError) as e:
        raise InvalidParameterError(f"K must be a number, got {K!r}") from e
    if not math.isfinite(K) or K < 1:
        raise InvalidParameterError(f"K must be a finite value >= 1, got {K}")
    return K


@dataclass(frozen=True)
class BsfParams:
    """The BSF model parameters

    Times are abstract units, seconds by convention. L is charged once
    per message regardless of its size.
    """
    L: float = 0.0
    t_s: float = 0.0
    t_w: float = 0.0
    t_r: float = 0.0
    t_p: float = 0.0
    K: int = 1

    def __post_init__(self):
        for name in TIME_FIELDS:
            object.__setattr__(self, name, check_time(name, getattr(self, name)))
        if isinstance(self.K, bool) or int(self.K) != self.K or self.K < 1:
            raise InvalidParameterError(f"K must be a positive integer, got {self.K!r}")
        object.__setattr__(self, 'K', int(self.K))

    @property
    def comm_cost(self) -> float:
        """Per-worker communication charge 2L + t_s"""
        return 2 * self.L + self.t_s

    @property
    def master_cost(self) -> float:
        """Master receive plus evaluate charge t_r + t_p"""
        return self.t_r + self.t_p

    def scaled(self, c: float) -> 'BsfParams':
        """Multiply all five time parameters by c > 0"""
        if not math.isfinite(c) or c <= 0:
            raise InvalidParameterError(f"Scale factor must be positive and finite, got {c}")
        return dataclasses.replace(self, **{name: getattr(self, name) * c for name in TIME_FIELDS})

    def replace(self, **changes) -> 'BsfParams':
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'BsfParams':
        known = {k: data[k] for k in TIME_FIELDS + ('K',) if k in data and data[k] is not None}
        return cls(**known)


@dataclass(frozen=True)
class CostBreakdown:
    """Per-phase components of one iteration's predicted time"""
    send_total: float
    compute: float
    receive_total: float
    evaluate: float
    latency_total: float
    T: float

    def component_sum(self) -> float:
        return (self.send_total + self.compute + self.receive_total
                + self.evaluate + self.latency_total)

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class ScalabilityReport:
    """Location and height of the speedup maximum

    K_opt is None when scalability is unbounded (zero communication cost).
    a_max and e_at_opt are then the limits as K grows: a_max tends to
    T1 / (t_r + t_p) and e_at_opt to 0, or to infinity and 1 when the
    master costs nothing either.
    """
    K_star: float
    K_opt: Optional[int]
    a_max: float
    e_at_opt: float
    unbounded: bool = False
    note: str = ''

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
