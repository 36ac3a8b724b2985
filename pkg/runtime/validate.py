import logging
import statistics
from dataclasses import dataclass, asdict, field
from typing import Any, Dict, List, Optional, Sequence

from costmodel import BsfParams, predict_TK, scalability_bound
from simulator import ClusterConfig, ScheduleMode, simulate_iteration
from .calibrate import calibrate, CalibrationResult, DEFAULT_REPETITIONS
from .program import BsfProgram
from .skeleton import run_bsf
from .transport import CommCostSpec

log = logging.getLogger(__name__)

DEFAULT_VALIDATION_ITERATIONS = 3


def _ratio(num: float, den: float) -> Optional[float]:
    return num / den if den > 0 else None


def _relative_error(value: float, reference: float) -> Optional[float]:
    if reference == 0:
        return 0.0 if value == 0 else None
    return abs(value - reference) / reference


@dataclass
class ValidationRow:
    K: int
    T_predicted: float
    T_simulated: float
    T_measured: float
    error_simulated: Optional[float]
    error_measured: Optional[float]
    speedup_predicted: Optional[float]
    speedup_simulated: Optional[float]
    speedup_measured: Optional[float]


@dataclass
class ValidationReport:
    payload: str
    mode: str
    params: BsfParams
    rows: List[ValidationRow]
    K_star: float
    K_opt_predicted: Optional[int]
    K_best_measured: Optional[int]
    flagged: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'payload': self.payload,
            'mode': self.mode,
            'params': self.params.to_dict(),
            'rows': [asdict(r) for r in self.rows],
            'K_star': self.K_star,
            'K_opt_predicted': self.K_opt_predicted,
            'K_best_measured': self.K_best_measured,
            'flagged': list(self.flagged),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ValidationReport':
        return cls(
            payload=data['payload'],
            mode=data['mode'],
            params=BsfParams.from_dict(data['params']),
            rows=[ValidationRow(**row) for row in data['rows']],
            K_star=float(data['K_star']),
            K_opt_predicted=data['K_opt_predicted'],
            K_best_measured=data['K_best_measured'],
            flagged=list(data.get('flagged', [])),
        )


def measure_iteration_time(program: BsfProgram, K: int, repetitions: int,
                           iterations: int, parallel: bool = True) -> float:
    """Median per-iteration wall time of real skeleton runs on K workers"""
    samples = []
    for _ in range(repetitions):
        outcome = run_bsf(program, K, max_iterations=iterations, parallel=parallel)
        samples.extend(outcome.walls)
    return statistics.median(samples) if samples else 0.0


def validate(program: BsfProgram, K_list: Sequence[int],
             repetitions: int = DEFAULT_REPETITIONS,
             comm_cost: Optional[CommCostSpec] = None,
             iterations: int = DEFAULT_VALIDATION_ITERATIONS,
             mode: ScheduleMode = ScheduleMode.PAPER_FAITHFUL,
             parallel: bool = True,
             calibration: Optional[CalibrationResult] = None) -> ValidationReport:
    """Calibrate, then compare model, simulator and real runs for each K"""
    K_list = sorted(set(K_list))
    if not K_list:
        raise ValueError("K_list must not be empty")

    if calibration is None:
        calibration = calibrate(program, repetitions=repetitions, comm_cost=comm_cost)
    p = calibration.params
    mode = ScheduleMode(mode)

    T_sim_1 = simulate_iteration(ClusterConfig.from_params(p, 1, mode)).T_measured
    measured = {1: measure_iteration_time(program, 1, repetitions, iterations, parallel)}
    T_pred_1 = predict_TK(p, 1).T

    rows = []
    for K in K_list:
        T_pred = predict_TK(p, K).T
        T_sim = simulate_iteration(ClusterConfig.from_params(p, K, mode)).T_measured
        if K not in measured:
            measured[K] = measure_iteration_time(program, K, repetitions, iterations, parallel)
        T_meas = measured[K]
        rows.append(ValidationRow(
            K=K,
            T_predicted=T_pred,
            T_simulated=T_sim,
            T_measured=T_meas,
            error_simulated=_relative_error(T_sim, T_pred),
            error_measured=_relative_error(T_meas, T_pred),
            speedup_predicted=_ratio(T_pred_1, T_pred),
            speedup_simulated=_ratio(T_sim_1, T_sim),
            speedup_measured=_ratio(measured[1], T_meas),
        ))
        log.debug("K=%d: predicted %.6g, simulated %.6g, measured %.6g", K, T_pred, T_sim, T_meas)

    bound = scalability_bound(p)
    with_speedup = [r for r in rows if r.speedup_measured is not None]
    # smallest K wins ties
    best = max(with_speedup, key=lambda r: (r.speedup_measured, -r.K)) if with_speedup else None
    return ValidationReport(
        payload=program.name,
        mode=mode.value,
        params=p,
        rows=rows,
        K_star=bound.K_star,
        K_opt_predicted=bound.K_opt,
        K_best_measured=best.K if best else None,
        flagged=list(calibration.flagged),
    )
