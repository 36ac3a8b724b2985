from dataclasses import dataclass, asdict
from typing import Any, Dict, List, Optional

from .params import BsfParams, InvalidParameterError
from .equations import predict_TK, predict_speedup, efficiency_exact, efficiency_approx

SWEEP_COLUMNS = ['K', 'T_K', 'speedup', 'efficiency_exact', 'efficiency_approx']


@dataclass(frozen=True)
class SweepRow:
    K: int
    T_K: float
    speedup: float
    efficiency_exact: float
    efficiency_approx: Optional[float]  # None when t_w == 0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def sweep(p: BsfParams, K_min: int, K_max: int, step: int = 1) -> List[SweepRow]:
    """Evaluate the model over K_min, K_min + step, ... <= K_max"""
    for name, value in (('K_min', K_min), ('K_max', K_max), ('step', step)):
        if isinstance(value, bool) or int(value) != value:
            raise InvalidParameterError(f"{name} must be an integer, got {value!r}")
    if K_min < 1 or step < 1 or K_min > K_max:
        raise InvalidParameterError(
            f"Empty sweep range: K_min={K_min}, K_max={K_max}, step={step}")

    return sweep_values(p, range(int(K_min), int(K_max) + 1, int(step)))


def sweep_values(p: BsfParams, K_values) -> List[SweepRow]:
    """Evaluate the model at an explicit sorted list of worker counts"""
    K_values = sorted(set(int(K) for K in K_values))
    if not K_values:
        raise InvalidParameterError("Sweep needs at least one K value")

    rows = []
    for K in K_values:
        rows.append(SweepRow(
            K=K,
            T_K=predict_TK(p, K).T,
            speedup=predict_speedup(p, K),
            efficiency_exact=efficiency_exact(p, K),
            efficiency_approx=efficiency_approx(p, K) if p.t_w > 0 else None,
        ))
    return rows
