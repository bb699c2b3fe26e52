"""Plain-text signal files.

Two layouts are accepted:

* one sample per line;
* two comma-separated columns ``t,value``, optionally preceded by one header line.

Blank lines and lines starting with ``#`` are ignored.  Writing uses the layout
that was read, keeping the original ``t`` strings and header verbatim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InputFormatError


@dataclass
class SignalFile:
    values: np.ndarray
    t: list[str] | None = None
    header: str | None = None

    @property
    def layout(self) -> str:
        return "single" if self.t is None else "csv"


def _number(text: str, line: int) -> float:
    try:
        x = float(text)
    except ValueError:
        raise InputFormatError(f"cannot parse {text.strip()!r} as a number", line) from None
    if not math.isfinite(x):
        raise InputFormatError(f"non-finite value {text.strip()!r}", line)
    return x


def parse_signal(text: str) -> SignalFile:
    rows = [
        (i, raw.strip())
        for i, raw in enumerate(text.splitlines(), start=1)
        if raw.strip() and not raw.lstrip().startswith("#")
    ]
    if not rows:
        raise InputFormatError("input holds no samples")
    first_line, first = rows[0]
    if "," not in first:
        values = []
        for i, row in rows:
            if "," in row:
                raise InputFormatError("expected one value per line, found a comma", i)
            values.append(_number(row, i))
        return SignalFile(np.array(values))

    header = None
    cells = [c.strip() for c in first.split(",")]
    try:
        [float(c) for c in cells]
    except ValueError:
        if len(cells) != 2:
            raise InputFormatError(f"header must have 2 columns, found {len(cells)}", first_line) from None
        header = first
        rows = rows[1:]
    if not rows:
        raise InputFormatError("input holds a header but no samples", first_line)
    t, values = [], []
    for i, row in rows:
        cells = [c.strip() for c in row.split(",")]
        if len(cells) != 2:
            raise InputFormatError(f"expected 2 columns (t,value), found {len(cells)}", i)
        _number(cells[0], i)
        t.append(cells[0])
        values.append(_number(cells[1], i))
    return SignalFile(np.array(values), t, header)


def read_signal(path) -> SignalFile:
    return parse_signal(Path(path).read_text())


def format_signal(template: SignalFile, values) -> str:
    values = np.asarray(values, dtype=float).tolist()
    if len(values) != len(template.values):
        raise ValueError(f"expected {len(template.values)} values, got {len(values)}")
    if template.t is None:
        return "".join(f"{v!r}\n" for v in values)
    lines = [template.header] if template.header is not None else []
    lines += [f"{t},{v!r}" for t, v in zip(template.t, values)]
    return "\n".join(lines) + "\n"
