from .program import BsfProgram, WorkerSlice, PayloadError, call_payload
from .partition import DataPartition, partition
from .transport import CommCostSpec, LocalTransport, message_nbytes
from .skeleton import (run_bsf, RunOutcome, PhaseTiming, timings_to_csv,
                       DEFAULT_MAX_ITERATIONS, PHASES, TIMING_COLUMNS)
from .calibrate import calibrate, CalibrationResult, DEFAULT_REPETITIONS, MIN_MEASURABLE
from .validate import validate, ValidationReport, ValidationRow, measure_iteration_time
from .dense_io import (read_dense_blocks, parse_dense_blocks, write_dense, format_dense,
                       DenseFormatError)

__all__ = [
    'BsfProgram',
    'WorkerSlice',
    'PayloadError',
    'call_payload',
    'DataPartition',
    'partition',
    'CommCostSpec',
    'LocalTransport',
    'message_nbytes',
    'run_bsf',
    'RunOutcome',
    'PhaseTiming',
    'timings_to_csv',
    'DEFAULT_MAX_ITERATIONS',
    'PHASES',
    'TIMING_COLUMNS',
    'calibrate',
    'CalibrationResult',
    'DEFAULT_REPETITIONS',
    'MIN_MEASURABLE',
    'validate',
    'ValidationReport',
    'ValidationRow',
    'measure_iteration_time',
    'read_dense_blocks',
    'parse_dense_blocks',
    'write_dense',
    'format_dense',
    'DenseFormatError',
]
