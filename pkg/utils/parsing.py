import json
from typing import Any, Dict, List, Union

MAX_WORKERS = 1 << 20


def parse_k_spec(k_spec: Union[str, int, List[int]]) -> List[int]:
    """Parse a worker-count specification into a sorted list of K values

    Supports:
    - Single value: "10"
    - Lists: "1,2,4,8"
    - Inclusive ranges: "1:200"
    - Stepped ranges: "1:200:5"
    - Mixed: "1,2,4:8,16:64:16"
    """
    if isinstance(k_spec, bool):
        raise ValueError(f"Invalid K specification: {k_spec!r}")
    if isinstance(k_spec, int):
        k_spec = str(k_spec)
    elif isinstance(k_spec, (list, tuple)):
        k_spec = ','.join(str(k) for k in k_spec)

    values = set()
    for part in str(k_spec).split(','):
        part = part.strip()
        if not part:
            continue
        if ':' in part:
            pieces = [p.strip() for p in part.split(':')]
            if len(pieces) not in (2, 3):
                raise ValueError(f"Invalid K range: {part}")
            try:
                start, end = int(pieces[0]), int(pieces[1])
                step = int(pieces[2]) if len(pieces) == 3 else 1
            except ValueError as e:
                raise ValueError(f"Invalid K range: {part}") from e
            if start < 1 or end > MAX_WORKERS or start > end or step < 1:
                raise ValueError(f"Invalid K range: {part}")
            values.update(range(start, end + 1, step))
        else:
            try:
                K = int(part)
            except ValueError as e:
                raise ValueError(f"Invalid K value: {part}") from e
            if K < 1 or K > MAX_WORKERS:
                raise ValueError(f"K must be between 1 and {MAX_WORKERS}, got {K}")
            values.add(K)

    if not values:
        raise ValueError(f"Empty K specification: {k_spec!r}")
    return sorted(values)


def parse_config_file(file_path: str) -> Dict[str, Any]:
    """Read a JSON configuration file holding a single object of option values"""
    try:
        with open(file_path, 'r') as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ValueError(f"Config file not found: {file_path}")
    except PermissionError:
        raise ValueError(f"Permission denied reading file: {file_path}")
    except json.JSONDecodeError as e:
        raise ValueError(f"Config file {file_path} is not valid JSON: {e}") from e

    if not isinstance(data, dict):
        raise ValueError(f"Config file {file_path} must contain a JSON object")
    return data
