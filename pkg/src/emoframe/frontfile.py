"""Plain-text front files.

One objective vector per line, whitespace separated.  Lines starting with
``#`` are comments; an optional header comment
``# objectives <n> senses <min|max> ...`` declares the objective space.
"""

from __future__ import annotations

import os
from typing import Optional

import numpy as np

from .dominance import ObjectiveSpace, Sense

__all__ = ["FrontFormatError", "format_value", "write_front", "read_front", "dumps_front"]


class FrontFormatError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


def format_value(v: float) -> str:
    # 17 significant digits round-trip any double
    return format(float(v), ".17g")


def dumps_front(points, space: Optional[ObjectiveSpace] = None) -> str:
    arr = np.asarray(points, dtype=float)
    if arr.size == 0:
        n = space.n_objectives if space is not None else 2
        arr = arr.reshape(0, n)
    lines = []
    if space is not None:
        senses = " ".join(s.value for s in space.senses)
        lines.append(f"# objectives {space.n_objectives} senses {senses}")
    lines.extend(" ".join(format_value(v) for v in row) for row in arr)
    return "\n".join(lines) + "\n"


def write_front(path: str | os.PathLike, points, space: Optional[ObjectiveSpace] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_front(points, space))


def _parse_header(fields: list[str], lineno: int) -> ObjectiveSpace:
    try:
        n = int(fields[1])
        if fields[2] != "senses" or len(fields) != 3 + n:
            raise ValueError
        return ObjectiveSpace(tuple(Sense(s) for s in fields[3:]))
    except (ValueError, IndexError):
        raise FrontFormatError("malformed header, expected '# objectives <n> senses <min|max>...'",
                               lineno) from None


def read_front(path: str | os.PathLike) -> tuple[np.ndarray, Optional[ObjectiveSpace]]:
    """Parse a front file.

    Returns:
        ``(points, space)``; ``space`` is None when the file has no header.

    Raises:
        FrontFormatError: naming the offending line.
    """
    space = None
    rows: list[list[float]] = []
    width = None
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                fields = line[1:].split()
                if fields and fields[0] == "objectives" and not rows and space is None:
                    space = _parse_header(fields, lineno)
                    width = space.n_objectives
                continue
            fields = line.split()
            try:
                values = [float(f) for f in fields]
            except ValueError:
                raise FrontFormatError(f"cannot parse {line!r} as numbers", lineno) from None
            if not all(np.isfinite(values)):
                raise FrontFormatError("non-finite value", lineno)
            if width is None:
                width = len(values)
            if len(values) != width:
                raise FrontFormatError(f"expected {width} values, got {len(values)}", lineno)
            rows.append(values)
    if width is None:
        width = 2
    return np.array(rows, dtype=float).reshape(-1, width), space
