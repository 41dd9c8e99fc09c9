"""
Point-map files.

A point-map file is a JSON object::

    {
      "dimension": 3,
      "d": 1.5,
      "points": [[0, 0, 0], [1, 0, 0], ...],
      "images": [[0, 0, 0], [0.99, 0.01, 0], ...]
    }

``points`` and ``images`` are index-aligned. Reals are written with 17
significant digits so a file written here re-parses to identical floats.
"""
import json

import numpy as np

from .errors import InvalidInputError
from .stability import PointMap

__all__ = ["PointMapParseError", "format_real", "dumps_point_map", "loads_point_map",
           "write_point_map", "read_point_map"]


class PointMapParseError(ValueError):
    """A point-map document is malformed. ``line`` and ``field`` locate the problem."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


def format_real(x):
    return format(float(x), ".17g")


def _vector(v):
    return "[" + ", ".join(format_real(x) for x in v) + "]"


def dumps_point_map(pm):
    points = ",\n    ".join(_vector(v) for v in pm.domain_points)
    images = ",\n    ".join(_vector(v) for v in pm.image_points)
    return (
        "{\n"
        f'  "dimension": {pm.n},\n'
        f'  "d": {format_real(pm.d)},\n'
        f'  "points": [\n    {points}\n  ],\n'
        f'  "images": [\n    {images}\n  ]\n'
        "}\n"
    )


def _field_line(text, name):
    key = f'"{name}"'
    for lineno, line in enumerate(text.splitlines(), start=1):
        if key in line:
            return lineno
    return None


def _rows(doc, text, name, n):
    if name not in doc:
        raise PointMapParseError("missing required field", field=name)
    rows = doc[name]
    line = _field_line(text, name)
    if not isinstance(rows, list):
        raise PointMapParseError("expected an array of vectors", line=line, field=name)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise PointMapParseError(
                f"expected a vector of {n} numbers", line=line, field=f"{name}[{i}]"
            )
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise PointMapParseError(
                    f"expected a number, got {x!r}", line=line, field=f"{name}[{i}][{j}]"
                )
    return np.array(rows, dtype=float).reshape(len(rows), n)


def loads_point_map(text):
    """Parse a point-map document. Raises :class:`PointMapParseError`."""
    try:
        doc = json.loads(text, parse_constant=lambda c: c)
    except json.JSONDecodeError as exc:
        raise PointMapParseError(exc.msg, line=exc.lineno) from exc
    if not isinstance(doc, dict):
        raise PointMapParseError("top level must be an object", line=1)
    n = doc.get("dimension")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise PointMapParseError(
            "dimension must be a positive integer", line=_field_line(text, "dimension"),
            field="dimension",
        )
    d = doc.get("d")
    if isinstance(d, bool) or not isinstance(d, (int, float)):
        raise PointMapParseError("d must be a number", line=_field_line(text, "d"), field="d")
    points = _rows(doc, text, "points", n)
    images = _rows(doc, text, "images", n)
    if len(points) != len(images):
        raise PointMapParseError(
            f"{len(points)} points but {len(images)} images",
            line=_field_line(text, "images"), field="images",
        )
    try:
        return PointMap(points, images, float(d))
    except InvalidInputError as exc:
        raise PointMapParseError(str(exc)) from exc


def write_point_map(path, pm):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_point_map(pm))


def read_point_map(path):
    with open(path, encoding="utf-8") as fh:
        return loads_point_map(fh.read())
