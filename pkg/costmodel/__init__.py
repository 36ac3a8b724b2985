from .params import (BsfParams, CostBreakdown, ScalabilityReport,
                     InvalidParameterError, TIME_FIELDS)
from .equations import (predict_T1, predict_TK, predict_run_time, speedup_from_times,
                        predict_speedup, speedup_derivative, scalability_bound,
                        efficiency_exact, efficiency_approx, efficiency_terms)
from .sweep import SweepRow, SWEEP_COLUMNS, sweep, sweep_values

__all__ = [
    'BsfParams',
    'CostBreakdown',
    'ScalabilityReport',
    'InvalidParameterError',
    'TIME_FIELDS',
    'predict_T1',
    'predict_TK',
    'predict_run_time',
    'speedup_from_times',
    'predict_speedup',
    'speedup_derivative',
    'scalability_bound',
    'efficiency_exact',
    'efficiency_approx',
    'efficiency_terms',
    'SweepRow',
    'SWEEP_COLUMNS',
    'sweep',
    'sweep_values',
]
