"""
CSV tables with '#'-prefixed header comments.

Numbers are written with ``repr`` so a round trip is exact and repeated
runs produce byte-identical files.
"""

import csv
import io
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Tuple, Union


PathLike = Union[str, Path]


def _format(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def format_table(
    columns: Sequence[str], rows: Iterable[Sequence[Any]], header: Sequence[str] = ()
) -> str:
    """Render a table as CSV text with comment header lines."""
    buffer = io.StringIO()
    for line in header:
        for part in str(line).splitlines() or [""]:
            buffer.write(f"# {part}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format(v) for v in row])
    return buffer.getvalue()


def atomic_write_text(path: PathLike, text: str) -> Path:
    """Write to a temp file in the target directory, then rename into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return path


def write_table(
    path: PathLike,
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    header: Sequence[str] = (),
) -> Path:
    """Write a CSV table atomically."""
    return atomic_write_text(path, format_table(columns, rows, header))


def read_table(path: PathLike) -> Tuple[List[str], List[str], List[Dict[str, str]]]:
    """Read a CSV table.

    Returns:
        Tuple of (header comment lines, column names, rows as dicts)
    """
    header: List[str] = []
    body: List[str] = []
    with open(path, "r", newline="") as handle:
        for line in handle:
            if line.startswith("#"):
                header.append(line[1:].strip())
            else:
                body.append(line)
    reader = csv.DictReader(body)
    rows = list(reader)
    return header, list(reader.fieldnames or []), rows
