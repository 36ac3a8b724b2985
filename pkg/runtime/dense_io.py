"""Dense text format for matrices and vectors

Each block starts with a "rows cols" line followed by `rows` lines of
`cols` whitespace-separated numbers. A file may hold several blocks one
after another. Blank lines and '#' comments are ignored.
"""

from typing import List, TextIO, Union

import numpy as np


class DenseFormatError(ValueError):
    """Raised for files that do not follow the dense text format"""


def parse_dense_blocks(text: str, source: str = '<string>') -> List[np.ndarray]:
    lines = []
    for line_num, line in enumerate(text.splitlines(), 1):
        if '#' in line:
            line = line.split('#')[0]
        line = line.strip()
        if line:
            lines.append((line_num, line.split()))

    blocks = []
    idx = 0
    while idx < len(lines):
        line_num, header = lines[idx]
        if len(header) != 2:
            raise DenseFormatError(f"{source}:{line_num}: expected 'rows cols' header")
        try:
            rows, cols = int(header[0]), int(header[1])
        except ValueError as e:
            raise DenseFormatError(f"{source}:{line_num}: invalid header {' '.join(header)!r}") from e
        if rows < 0 or cols < 0:
            raise DenseFormatError(f"{source}:{line_num}: negative dimensions")
        body = lines[idx + 1:idx + 1 + rows]
        if len(body) != rows:
            raise DenseFormatError(f"{source}:{line_num}: block declares {rows} rows, found {len(body)}")

        values = []
        for row_num, tokens in body:
            if len(tokens) != cols:
                raise DenseFormatError(f"{source}:{row_num}: expected {cols} values, found {len(tokens)}")
            try:
                values.append([float(t) for t in tokens])
            except ValueError as e:
                raise DenseFormatError(f"{source}:{row_num}: {e}") from e
        blocks.append(np.array(values, dtype=float).reshape(rows, cols))
        idx += 1 + rows
    return blocks


def read_dense_blocks(path: str) -> List[np.ndarray]:
    try:
        with open(path, 'r') as f:
            text = f.read()
    except FileNotFoundError:
        raise DenseFormatError(f"Problem file not found: {path}")
    except PermissionError:
        raise DenseFormatError(f"Permission denied reading file: {path}")
    return parse_dense_blocks(text, source=path)


def format_dense(*arrays: np.ndarray) -> str:
    """Render arrays as consecutive blocks; 1-D arrays become column vectors"""
    out = []
    for array in arrays:
        matrix = np.asarray(array, dtype=float)
        if matrix.ndim == 1:
            matrix = matrix.reshape(-1, 1)
        rows, cols = matrix.shape
        out.append(f"{rows} {cols}")
        for row in matrix:
            out.append(' '.join(repr(float(v)) for v in row))
    return '\n'.join(out) + '\n'


def write_dense(target: Union[str, TextIO], *arrays: np.ndarray) -> None:
    text = format_dense(*arrays)
    if isinstance(target, str):
        with open(target, 'w') as f:
            f.write(text)
    else:
        target.write(text)
