import csv
import io
import json
from typing import List, Optional, TextIO, Tuple

from .timeline import IterationTimeline, RunTrace

TIMELINE_COLUMNS = ['timestamp', 'node', 'kind']
CURVE_COLUMNS = ['K', 'T_measured', 'speedup']


def timeline_to_json(timeline: IterationTimeline) -> str:
    return json.dumps(timeline.to_dict(), indent=2, sort_keys=True)


def run_to_json(trace: RunTrace) -> str:
    data = {
        'iteration_count': trace.iteration_count,
        'total_time': trace.total_time,
        'iterations': [t.to_dict() for t in trace.iterations],
    }
    return json.dumps(data, indent=2, sort_keys=True)


def timeline_to_csv(timeline: IterationTimeline, stream: Optional[TextIO] = None) -> str:
    """Write one row per event; returns the text when no stream is given"""
    out = stream if stream is not None else io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(TIMELINE_COLUMNS)
    for event in timeline.events:
        writer.writerow([repr(event.timestamp), event.node, event.kind.value])
    return '' if stream is not None else out.getvalue()


def curve_to_csv(curve: List[Tuple[int, float, float]], stream: Optional[TextIO] = None) -> str:
    out = stream if stream is not None else io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(CURVE_COLUMNS)
    for K, T, a in curve:
        writer.writerow([K, repr(T), repr(a)])
    return '' if stream is not None else out.getvalue()
