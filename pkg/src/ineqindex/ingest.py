"""CSV readers for raw and binned data, and report writers.

CSV dialect: comma separated, ``.`` decimal point, header row required, UTF-8.
Readers reject malformed numbers instead of coercing them. Writers replace
the target file atomically.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .decomposition import DecompositionResult
from .errors import (
    EmptyColumn,
    MissingTopMean,
    NegativeCount,
    OpenBinNotLast,
    OverlappingBins,
    ParseError,
)
from .indices import IndexReport, Sample
from .lab import ExperimentResult

SCHEMA = "ineqindex/1"
LONG_HEADER = ("experiment", "family", "alpha", "n", "replication", "estimator", "value")
OPEN = "open"


def _parse_float(text: str, row: int, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"{what}: cannot parse {text!r} as a number", row) from None
    if not math.isfinite(value):
        raise ParseError(f"{what}: non-finite value {text!r}", row)
    return value


def _read_rows(path) -> tuple[list[str], list[tuple[int, list[str]]]]:
    """Header and ``(row_number, cells)`` pairs; row 1 is the header."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ParseError("file is empty; a header row is required", 1) from None
        return header, [(i, row) for i, row in enumerate(reader, start=2)]


def _column_position(header: list[str], column) -> int:
    if isinstance(column, int):
        if not 0 <= column < len(header):
            raise KeyError(f"column index {column} out of range for {len(header)} columns")
        return column
    if column not in header:
        raise KeyError(f"column {column!r} not found; available: {header}")
    return header.index(column)


def read_columns(path, columns: Sequence) -> dict:
    """Raw string cells of several columns; blank rows are a :class:`ParseError`."""
    header, rows = _read_rows(path)
    pos = {c: _column_position(header, c) for c in columns}
    out = {c: [] for c in columns}
    for i, row in rows:
        if not any(cell.strip() for cell in row):
            raise ParseError("blank row", i)
        for c, p in pos.items():
            if p >= len(row):
                raise ParseError(f"missing cell for column {c!r}", i)
            out[c].append(row[p].strip())
    return out


def read_values(path, column) -> np.ndarray:
    header, rows = _read_rows(path)
    p = _column_position(header, column)
    name = header[p]
    values = []
    for i, row in rows:
        if not any(cell.strip() for cell in row):
            raise ParseError("blank row", i)
        if p >= len(row) or not row[p].strip():
            raise ParseError(f"empty cell in column {name!r}", i)
        values.append(_parse_float(row[p].strip(), i, name))
    if not values:
        raise EmptyColumn(f"column {name!r} has no data rows")
    return np.asarray(values, dtype=np.float64)


def read_sample_csv(path, column) -> Sample:
    """Read one numeric column (by header name or 0-based position) as a :class:`Sample`."""
    return Sample(read_values(path, column))


# -- grouped data -------------------------------------------------------------


@dataclass(frozen=True)
class Bin:
    lower: float
    upper: float | None  # None: open-ended top bin
    count: int
    mean: float | None = None

    @property
    def is_open(self) -> bool:
        return self.upper is None


@dataclass
class GroupedDistribution:
    """Binned counts; bins are ``[lower, upper)`` and only the last may be open."""

    bins: list[Bin]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.bins:
            raise EmptyColumn("no bins")
        for k, b in enumerate(self.bins):
            if b.count < 0:
                raise NegativeCount(f"bin {k} has count {b.count}")
            if b.is_open and k != len(self.bins) - 1:
                raise OpenBinNotLast(f"open bin at position {k} is not the last bin")
            if not b.is_open and not b.upper > b.lower:
                raise OverlappingBins(f"bin {k} has upper <= lower")
            if b.mean is not None:
                hi = math.inf if b.is_open else b.upper
                if not b.lower <= b.mean <= hi:
                    raise ParseError(f"bin {k} mean {b.mean} lies outside [{b.lower}, {hi}]")
        for k, (a, b) in enumerate(zip(self.bins, self.bins[1:])):
            if b.lower < a.upper:
                raise OverlappingBins(f"bins {k} and {k + 1} overlap or are out of order")
        if sum(b.count for b in self.bins) <= 0:
            raise NegativeCount("counts sum to zero")

    @property
    def total_count(self) -> int:
        return sum(b.count for b in self.bins)

    def representatives(self, top_mean: float | None = None) -> list[float]:
        reps = []
        for b in self.bins:
            if b.mean is not None:
                reps.append(b.mean)
            elif not b.is_open:
                reps.append(0.5 * (b.lower + b.upper))
            elif top_mean is None:
                raise MissingTopMean("the open top bin has no mean; supply top_mean or a target mean")
            else:
                reps.append(float(top_mean))
        return reps

    def mean(self, top_mean: float | None = None) -> float:
        reps = self.representatives(top_mean)
        return math.fsum(b.count * r for b, r in zip(self.bins, reps)) / self.total_count


def read_grouped_csv(path, *, source: str | None = None, year: int | None = None) -> GroupedDistribution:
    """Read columns ``lower,upper,count[,mean]``; ``upper`` may be ``open`` in the last row."""
    header, rows = _read_rows(path)
    cols = {h.lower(): i for i, h in enumerate(header)}
    for needed in ("lower", "upper", "count"):
        if needed not in cols:
            raise ParseError(f"missing required column {needed!r}", 1)
    bins = []
    for i, row in rows:
        if not any(cell.strip() for cell in row):
            raise ParseError("blank row", i)
        cell = lambda name: row[cols[name]].strip() if cols[name] < len(row) else ""  # noqa: E731
        lower = _parse_float(cell("lower"), i, "lower")
        upper_text = cell("upper")
        upper = None if upper_text.lower() == OPEN else _parse_float(upper_text, i, "upper")
        count_value = _parse_float(cell("count"), i, "count")
        if count_value != int(count_value):
            raise ParseError(f"count {cell('count')!r} is not an integer", i)
        if count_value < 0:
            raise NegativeCount(f"row {i}: negative count {int(count_value)}")
        mean_text = cell("mean") if "mean" in cols else ""
        mean = _parse_float(mean_text, i, "mean") if mean_text else None
        bins.append(Bin(lower, upper, int(count_value), mean))
    meta = {"source": source if source is not None else Path(path).name}
    if year is not None:
        meta["year"] = year
    return GroupedDistribution(bins, meta)


def solve_top_mean(grouped: GroupedDistribution, target_mean: float) -> float:
    """Representative value for the open top bin that makes the overall mean ``target_mean``.

    The overall mean is affine in the top value, so the root is closed-form.
    """
    top = grouped.bins[-1]
    if not top.is_open or top.mean is not None:
        raise MissingTopMean("there is no open top bin without a mean to solve for")
    if top.count == 0:
        raise MissingTopMean("the open top bin is empty; its value cannot move the mean")
    rest = math.fsum(b.count * r for b, r in zip(grouped.bins[:-1], grouped.representatives(0.0)[:-1]))
    t = (target_mean * grouped.total_count - rest) / top.count
    if t < top.lower:
        raise MissingTopMean(f"target mean {target_mean} needs top value {t} below the bin's lower bound")
    return t


def grouped_to_sample(
    grouped: GroupedDistribution, top_mean: float | None = None, *, target_mean: float | None = None
) -> Sample:
    """Expand each bin into ``count`` copies of its representative value.

    Representative: the bin mean if given, else the midpoint of a closed bin,
    else ``top_mean`` for the open top bin (or the value solved from
    ``target_mean``).
    """
    if top_mean is None and target_mean is not None:
        top_mean = solve_top_mean(grouped, target_mean)
    reps = grouped.representatives(top_mean)
    return Sample(np.repeat(np.asarray(reps, dtype=np.float64), [b.count for b in grouped.bins]))


# -- writers ------------------------------------------------------------------


def _atomic_write(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _num(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _clean(obj):
    """JSON has no inf/nan: map them to strings so output stays strict JSON."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    return obj


def report_to_json(report) -> dict:
    if isinstance(report, IndexReport):
        body = {"kind": "index_report", **report.as_dict()}
    elif isinstance(report, DecompositionResult):
        body = {"kind": "decomposition", **report.as_dict()}
    elif isinstance(report, ExperimentResult):
        body = {"kind": "experiment", **report.summary_json()}
    else:
        raise TypeError(f"cannot serialise {type(report).__name__}")
    return _clean({"schema": SCHEMA, **body})


def long_rows(result: ExperimentResult):
    alpha = result.spec.tail_alpha if result.spec is not None else None
    family = result.spec.family if result.spec is not None else ""
    for r in result.rows:
        for est, v in r.values.items():
            yield (result.experiment, family, alpha, r.n, r.replication, est, v)


def report_to_csv(report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if isinstance(report, ExperimentResult):
        w.writerow(LONG_HEADER)
        for row in long_rows(report):
            w.writerow([_num(v) for v in row])
    elif isinstance(report, IndexReport):
        d = report.as_dict()
        d.pop("metadata", None)
        w.writerow(d.keys())
        w.writerow([_num(v) for v in d.values()])
    elif isinstance(report, DecompositionResult):
        w.writerow(("group", "size", "mean", "e2", "weight"))
        for g in report.per_group:
            w.writerow([g.group, g.size, _num(g.mean), _num(g.e2), _num(g.weight)])
    else:
        raise TypeError(f"cannot serialise {type(report).__name__}")
    return buf.getvalue()


def write_report(report, format: str, path) -> None:
    """Write ``report`` as ``json`` or ``csv``.

    JSON floats use Python's shortest round-trip repr; CSV floats use 17
    significant digits. Both read back bit-exactly.
    """
    if format == "json":
        text = json.dumps(report_to_json(report), indent=2) + "\n"
    elif format == "csv":
        text = report_to_csv(report)
    else:
        raise ValueError(f"unknown format {format!r}; use json or csv")
    _atomic_write(path, text)


def write_sample_csv(values, path, column: str = "value") -> None:
    lines = [column] + [format(float(v), ".17g") for v in np.asarray(values).reshape(-1)]
    _atomic_write(path, "\n".join(lines) + "\n")
