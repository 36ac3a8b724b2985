import csv
import io
import json
import math
import sys
from dataclasses import is_dataclass, asdict
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, TextIO

import numpy as np
from colorama import Fore, Style
from tabulate import tabulate

FORMATS = ('table', 'csv', 'json')


def json_safe(value: Any) -> Any:
    """Convert results to strict-JSON-compatible structures

    Non-finite floats become the strings "inf", "-inf" and "nan".
    """
    if isinstance(value, dict):
        return {str(k): json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    if isinstance(value, np.ndarray):
        return [json_safe(v) for v in value.tolist()]
    if isinstance(value, Enum):
        return value.value
    if is_dataclass(value) and not isinstance(value, type):
        return json_safe(asdict(value))
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return 'nan' if math.isnan(value) else ('inf' if value > 0 else '-inf')
    return value


def format_cell(value: Any) -> str:
    if value is None:
        return ''
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, Enum):
        return str(value.value)
    return str(value)


class OutputFormatter:
    """Render result rows and records as tables, CSV or JSON"""

    def __init__(self, format_type: str = 'table'):
        self.format = format_type.lower()
        if self.format not in FORMATS:
            raise ValueError(f"Unknown output format {format_type!r}; choose from {', '.join(FORMATS)}")

    @property
    def status_stream(self) -> TextIO:
        # keep stdout clean for machine-readable output
        return sys.stdout if self.format == 'table' else sys.stderr

    def status(self, message: str, color: str = Fore.CYAN, prefix: str = '[*]') -> None:
        print(f"{color}{prefix} {message}{Style.RESET_ALL}", file=self.status_stream)

    def result(self, message: str) -> None:
        self.status(message, Fore.GREEN, '[+]')

    def warning(self, message: str) -> None:
        self.status(message, Fore.YELLOW, '[!]')

    def to_json(self, data: Any) -> str:
        return json.dumps(json_safe(data), indent=2, sort_keys=True) + '\n'

    def to_csv(self, rows: Sequence[Dict[str, Any]], fieldnames: List[str]) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator='\n')
        writer.writerow(fieldnames)
        for row in rows:
            writer.writerow([format_cell(row.get(name)) for name in fieldnames])
        return out.getvalue()

    def to_table(self, rows: Sequence[Dict[str, Any]], fieldnames: List[str]) -> str:
        table_data = [[format_cell(row.get(name)) for name in fieldnames] for row in rows]
        return tabulate(table_data, headers=fieldnames, tablefmt='grid') + '\n'

    def to_text(self, record: Dict[str, Any]) -> str:
        """Key/value view of a single record"""
        table_data = [[key, format_cell(value)] for key, value in record.items()]
        return tabulate(table_data, tablefmt='grid') + '\n'

    def render_rows(self, rows: Sequence[Dict[str, Any]], fieldnames: List[str]) -> str:
        if self.format == 'json':
            return self.to_json([{name: row.get(name) for name in fieldnames} for row in rows])
        if self.format == 'csv':
            return self.to_csv(rows, fieldnames)
        return self.to_table(rows, fieldnames)

    def render_record(self, record: Dict[str, Any]) -> str:
        if self.format == 'json':
            return self.to_json(record)
        if self.format == 'csv':
            return self.to_csv([record], list(record))
        return self.to_text(record)

    def write(self, text: str, path: Optional[str] = None) -> None:
        if path:
            with open(path, 'w', newline='') as f:
                f.write(text)
            self.status(f"Wrote {path}")
        else:
            sys.stdout.write(text)
