from .cluster import ClusterConfig, ScheduleMode, InvalidClusterConfig
from .timeline import IterationTimeline, RunTrace, TimelineEvent, EventKind, MASTER
from .engine import EventLoop, simulate_iteration, simulate_run, measured_speedup
from .export import (timeline_to_json, timeline_to_csv, run_to_json, curve_to_csv,
                     TIMELINE_COLUMNS, CURVE_COLUMNS)

__all__ = [
    'ClusterConfig',
    'ScheduleMode',
    'InvalidClusterConfig',
    'IterationTimeline',
    'RunTrace',
    'TimelineEvent',
    'EventKind',
    'MASTER',
    'EventLoop',
    'simulate_iteration',
    'simulate_run',
    'measured_speedup',
    'timeline_to_json',
    'timeline_to_csv',
    'run_to_json',
    'curve_to_csv',
    'TIMELINE_COLUMNS',
    'CURVE_COLUMNS',
]
