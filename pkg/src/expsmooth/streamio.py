"""Text formats for timestamped series and analysis reports.

Input: CSV with header ``t,x`` or JSON lines with numeric ``t`` and ``x``.
Output: CSV with header ``t,xhat[,weight]`` or JSON lines with the same keys.
Numbers are written with ``repr``, which round-trips every float exactly.
"""
from __future__ import annotations

import json
import math
import re
from collections.abc import Iterable, Iterator
from dataclasses import dataclass

from .errors import SmoothingError

__all__ = [
    "ParseError",
    "SeriesRecord",
    "OutputRecord",
    "parse_csv_stream",
    "parse_jsonl_stream",
    "parse_stream",
    "format_number",
    "emit_records",
    "write_report",
    "read_report",
]

_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


class ParseError(SmoothingError):
    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True, slots=True)
class SeriesRecord:
    t: float
    x: float
    line: int


@dataclass(frozen=True, slots=True)
class OutputRecord:
    t: float
    x_hat: float
    weight: float | None = None


def _lines(reader):
    """Iterate text lines of a text or binary stream, decoding UTF-8."""
    for raw in reader:
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        yield raw.rstrip("\r\n")


def _number(text, name, line):
    text = text.strip()
    if not _NUMBER.fullmatch(text):
        raise ParseError(f"field {name!r} is not a decimal number: {text!r}", line)
    value = float(text)
    if not math.isfinite(value):
        raise ParseError(f"field {name!r} is not finite: {text!r}", line)
    return value


def parse_csv_stream(reader) -> Iterator[SeriesRecord]:
    lines = _lines(reader)
    header = next(lines, None)
    if header is None:
        raise ParseError("missing header 't,x'", 1)
    if header.lstrip("﻿") != "t,x":
        raise ParseError(f"expected header 't,x', got {header!r}", 1)
    for lineno, text in enumerate(lines, start=2):
        if not text.strip():
            continue
        fields = text.split(",")
        if len(fields) != 2:
            raise ParseError(f"expected 2 fields, got {len(fields)}", lineno)
        yield SeriesRecord(_number(fields[0], "t", lineno), _number(fields[1], "x", lineno), lineno)


def _reject_constant(token):
    raise ValueError(f"non-finite literal {token}")


def _json_number(obj, name, line):
    if name not in obj:
        raise ParseError(f'missing field "{name}"', line)
    value = obj[name]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f'field "{name}" must be a number, got {value!r}', line)
    value = float(value)
    if not math.isfinite(value):
        raise ParseError(f'field "{name}" is not finite', line)
    return value


def parse_jsonl_stream(reader) -> Iterator[SeriesRecord]:
    for lineno, text in enumerate(_lines(reader), start=1):
        if not text.strip():
            continue
        try:
            obj = json.loads(text, parse_constant=_reject_constant)
        except ValueError as exc:
            raise ParseError(f"invalid JSON: {exc}", lineno) from None
        if not isinstance(obj, dict):
            raise ParseError("expected a JSON object", lineno)
        yield SeriesRecord(_json_number(obj, "t", lineno), _json_number(obj, "x", lineno), lineno)


def parse_stream(reader, fmt="csv"):
    if fmt == "csv":
        return parse_csv_stream(reader)
    if fmt == "jsonl":
        return parse_jsonl_stream(reader)
    raise ValueError(f"unknown format {fmt!r}")


def format_number(value):
    value = float(value)
    if value.is_integer() and abs(value) < 2**53:
        return str(int(value))
    return repr(value)


def _csv_lines(records, include_weight):
    yield "t,xhat,weight\n" if include_weight else "t,xhat\n"
    for rec in records:
        row = [format_number(rec.t), format_number(rec.x_hat)]
        if include_weight:
            row.append(format_number(rec.weight))
        yield ",".join(row) + "\n"


def _jsonl_lines(records, include_weight):
    for rec in records:
        row = [f'"t":{format_number(rec.t)}', f'"xhat":{format_number(rec.x_hat)}']
        if include_weight:
            row.append(f'"weight":{format_number(rec.weight)}')
        yield "{" + ",".join(row) + "}\n"


def emit_records(records: Iterable[OutputRecord], out, fmt="csv", include_weight=False):
    """Write records to the text stream ``out``; returns the count written."""
    if fmt == "csv":
        lines = _csv_lines(records, include_weight)
    elif fmt == "jsonl":
        lines = _jsonl_lines(records, include_weight)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    count = -1 if fmt == "csv" else 0
    for line in lines:
        out.write(line)
        count += 1
    return count


def _report_value(value):
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return format_number(value)


def write_report(report, out, fmt="csv"):
    """Write a report dataclass as a CSV header+row or one JSON object."""
    data = report.as_dict() if hasattr(report, "as_dict") else dict(report)
    data = {k: (v.value if hasattr(v, "value") else v) for k, v in data.items()}
    if fmt == "csv":
        out.write(",".join(data) + "\n")
        out.write(",".join(_report_value(v) for v in data.values()) + "\n")
    elif fmt == "jsonl":
        out.write(json.dumps(data, allow_nan=False) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def read_report(text, fmt="csv"):
    """Parse a report written by :func:`write_report` into a dict."""
    if fmt == "jsonl":
        return json.loads(text.strip().splitlines()[0])
    rows = text.strip().splitlines()
    if len(rows) != 2:
        raise ValueError("expected a header row and a value row")
    out = {}
    for key, value in zip(rows[0].split(","), rows[1].split(",")):
        if value == "":
            out[key] = None
        elif _NUMBER.fullmatch(value):
            out[key] = int(value) if re.fullmatch(r"[+-]?\d+", value) else float(value)
        else:
            out[key] = value
    return out
