"""CSV ingestion and component / report serialization."""
from __future__ import annotations

import csv
import json
import math
import os
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from importlib import resources
from typing import Optional

import numpy as np

from .baseline import ClassicalComponents
from .core import StdComponents, StdrComponents, TimeSeries
from .errors import EmptyFile, MissingValue, ParseError

__all__ = [
    "read_csv",
    "load_airline",
    "airline_path",
    "write_components",
    "read_components",
    "ComponentTable",
    "components_to_dict",
    "diagnostics_to_dict",
    "holdout_to_dict",
    "write_json",
    "format_float",
]


def format_float(v) -> str:
    """17 significant digits (exact double round-trip); blank for missing."""
    if v is None or v is np.ma.masked:
        return ""
    v = float(v)
    if math.isnan(v):
        return ""
    return f"{v:.17g}"


def read_csv(path, value_column: Optional[str] = None, label_column: Optional[str] = None) -> TimeSeries:
    """Read one numeric column (the last one by default) as a :class:`TimeSeries`.

    Row numbers in error messages are file line numbers (the header is line 1).
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or not any(h.strip() for h in header):
            raise EmptyFile(f"{path}: no header row")
        header = [h.strip() for h in header]
        value_column = value_column or header[-1]
        if value_column not in header:
            raise ParseError(f"{path}: no column {value_column!r} (have {header})", column=value_column)
        vi = header.index(value_column)
        li = None
        if label_column is not None:
            if label_column not in header:
                raise ParseError(f"{path}: no column {label_column!r} (have {header})", column=label_column)
            li = header.index(label_column)
        values, labels = [], []
        for line, row in enumerate(reader, start=2):
            if not row or not any(c.strip() for c in row):
                continue
            cell = row[vi].strip() if vi < len(row) else ""
            if cell == "":
                raise MissingValue(f"{path}: line {line}: missing value in column {value_column!r}",
                                   row=line, column=value_column)
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(f"{path}: line {line}, column {value_column!r}: cannot parse {cell!r} as a number",
                                 row=line, column=value_column) from None
            if not math.isfinite(v):
                raise ParseError(f"{path}: line {line}, column {value_column!r}: non-finite value {cell!r}",
                                 row=line, column=value_column)
            values.append(v)
            if li is not None:
                labels.append(row[li].strip() if li < len(row) else "")
    if not values:
        raise EmptyFile(f"{path}: no data rows")
    return TimeSeries(np.array(values), labels=tuple(labels) if li is not None else None,
                      name=value_column)


@contextmanager
def airline_path():
    with resources.as_file(resources.files("stdecomp") / "data" / "airline.csv") as p:
        yield p


def load_airline() -> TimeSeries:
    """Monthly international airline passengers (thousands), 1949-1960."""
    with airline_path() as p:
        return read_csv(p, "passengers", "month")


def _mode(components):
    if isinstance(components, ClassicalComponents):
        return components.mode.value
    return components.mode


def _columns(components):
    if isinstance(components, ClassicalComponents):
        return {
            "y": components.series,
            "trend": components.trend.filled(np.nan),
            "seasonal": components.seasonal,
            "remainder": components.remainder.filled(np.nan),
        }
    cols = {
        "y": components.series,
        "trend": components.trend,
        "dispersion": components.dispersion,
        "seasonal": components.seasonal,
    }
    if isinstance(components, StdrComponents):
        cols["seasonal_avg"] = components.seasonal_avg
        cols["remainder"] = components.remainder
    return cols


def _json_list(a):
    return [None if math.isnan(v) else float(v) for v in np.asarray(a, dtype=float)]


def components_to_dict(components, extra_meta: Optional[dict] = None) -> dict:
    meta = {"period": int(components.period), "mode": _mode(components), "length": len(components.series)}
    if isinstance(components, StdComponents):
        meta["variant"] = components.variant.value
        meta["degenerate_cycles"] = list(components.degenerate_cycles)
        meta["warnings"] = list(components.warnings)
    else:
        meta["method"] = "classical"
        meta["warnings"] = []
    if extra_meta:
        meta.update(extra_meta)
    cols = {"t": list(range(1, len(components.series) + 1))}
    cols.update({k: _json_list(v) for k, v in _columns(components).items()})
    if isinstance(components, StdrComponents):
        cols["avg_pattern"] = _json_list(components.avg_pattern)
    if isinstance(components, ClassicalComponents):
        cols["pattern"] = _json_list(components.pattern)
    return {"meta": meta, "components": cols}


@contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def write_json(obj: dict, path=None) -> None:
    with _open_out(path) as fh:
        json.dump(obj, fh, indent=2, allow_nan=False)
        fh.write("\n")


def write_components(components, format: str = "csv", path=None, extra_meta: Optional[dict] = None) -> None:
    """Write components as CSV (``t,y,trend,...``) or as a JSON document.

    ``path`` of ``None`` or ``"-"`` writes to stdout.  Missing values (masked
    trend edges) are empty CSV cells or JSON nulls.
    """
    if format == "json":
        write_json(components_to_dict(components, extra_meta), path)
        return
    if format != "csv":
        raise ValueError(f"format must be 'csv' or 'json', got {format!r}")
    cols = _columns(components)
    with _open_out(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", *cols])
        arrays = list(cols.values())
        for t in range(len(components.series)):
            w.writerow([t + 1, *(format_float(a[t]) for a in arrays)])


@dataclass(frozen=True)
class ComponentTable:
    columns: dict
    meta: Optional[dict] = None


def read_components(path) -> ComponentTable:
    """Read back a file produced by :func:`write_components`; blanks/nulls become NaN."""
    with open(path, newline="") as fh:
        text = fh.read()
    if not text.strip():
        raise EmptyFile(f"{path}: empty file")
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        cols = {
            k: np.array([np.nan if v is None else v for v in vals], dtype=float)
            for k, vals in doc["components"].items()
        }
        return ComponentTable(cols, doc.get("meta"))
    rows = list(csv.reader(text.splitlines()))
    header = rows[0]
    data = {h: [] for h in header}
    for line, row in enumerate(rows[1:], start=2):
        for h, cell in zip(header, row):
            try:
                data[h].append(float(cell) if cell != "" else np.nan)
            except ValueError:
                raise ParseError(f"{path}: line {line}, column {h!r}: cannot parse {cell!r}",
                                 row=line, column=h) from None
    return ComponentTable({h: np.array(v) for h, v in data.items()})


def _verdict_dict(v):
    return {
        "test": v.test,
        "statistic": v.statistic,
        "critical_values": dict(v.critical_values),
        "conclusion": v.conclusion.value,
        "stationary_at_1pct": bool(v.stationary_at("1%")),
        "regression": v.regression,
        "lags_or_bandwidth": v.lags_or_bandwidth,
        "nobs": v.nobs,
    }


def _correlogram_dict(c):
    if c is None:
        return None
    return {"lags": c.lags.tolist(), "values": _json_list(c.values), "conf_band": c.conf_band}


def diagnostics_to_dict(report) -> dict:
    out = {
        "adf": _verdict_dict(report.adf),
        "kpss": _verdict_dict(report.kpss),
        "pp": _verdict_dict(report.pp),
        "all_stationary_1pct": bool(report.all_stationary("1%")),
        "acf": _correlogram_dict(report.acf),
        "pacf": _correlogram_dict(report.pacf),
        "ratio": None,
    }
    if report.ratio is not None:
        out["ratio"] = {
            "median": report.ratio.median,
            "iqr": report.ratio.iqr,
            "excluded": report.ratio.excluded,
        }
    return out


def holdout_to_dict(result) -> dict:
    return {
        "targets": list(result.targets),
        "mape": result.error.mape,
        "mae": result.error.mae,
        "excluded": result.error.excluded,
        "naive_mape": result.naive_error.mape,
        "naive_mae": result.naive_error.mae,
        "cycles": [
            {
                "target_cycle": int(j),
                "query_cycle": f.query_cycle,
                "neighbors": list(f.neighbor_indices),
                "predicted": _json_list(f.predicted_sequence),
                "actual": _json_list(a),
            }
            for j, f, a in zip(result.targets, result.forecasts, result.actual)
        ],
    }


def default_recurse_path(path, which):
    root, ext = os.path.splitext(path)
    return f"{root}.{which}{ext or '.csv'}"
