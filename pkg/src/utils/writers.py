"""
Output Writers
Trace files, CSV tables, JSON documents and PGM images with stable byte layouts.
"""

import csv
import hashlib
import json
from typing import Any, Dict, Iterable, List, Optional, Sequence
from pathlib import Path

import numpy as np
import structlog

from ..models.ida import IdaResult
from ..models.profiles import AutocorrSeries, MultiresProfile
from ..models.statistics import BurstinessReport, FlatRegions, KolmogorovSeries, SlopeSeries

logger = structlog.get_logger(__name__)

FLOAT_FORMAT = ".17g"


def fmt(value: Any) -> str:
    """Round-trip float text, empty cell for missing values"""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    number = float(value)
    if not np.isfinite(number):
        return ""
    return format(number, FLOAT_FORMAT)


def sha256_file(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _prepare(path: str) -> Path:
    output = Path(path)
    output.parent.mkdir(parents=True, exist_ok=True)
    return output


def write_rows(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """CSV with a header line and "\\n" line endings"""
    output = _prepare(path)
    with open(output, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(cell) for cell in row])
    logger.debug("CSV written", path=str(output))
    return str(output)


def write_json(path: str, data: Dict[str, Any]) -> str:
    """Sorted-key JSON; NaN must already be mapped to null"""
    output = _prepare(path)
    with open(output, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, ensure_ascii=False, sort_keys=True, allow_nan=False)
        f.write("\n")
    return str(output)


def write_trace(path: str, values: np.ndarray) -> str:
    """Format C: one value per line"""
    output = _prepare(path)
    with open(output, "w", encoding="utf-8") as f:
        for value in np.asarray(values, dtype=np.float64):
            f.write(format(float(value), FLOAT_FORMAT))
            f.write("\n")
    logger.debug("Trace written", path=str(output), bins=int(np.asarray(values).shape[0]))
    return str(output)


def write_profile_csv(path: str, profile: MultiresProfile, log_values: Optional[np.ndarray] = None) -> str:
    """j,value,log2_value; log_values replaces the raw log2 column (anchored output)"""
    logs = profile.log2_values() if log_values is None else log_values
    rows = zip(profile.scales.tolist(), profile.scale_values.tolist(), logs.tolist())
    return write_rows(path, ["j", "value", "log2_value"], rows)


def write_autocorr_csv(path: str, series: AutocorrSeries) -> str:
    return write_rows(path, ["lag", "corr"], zip(series.lags.tolist(), series.values.tolist()))


def write_kolmogorov_csv(path: str, series: KolmogorovSeries) -> str:
    rows = (
        (index, distance, traffic)
        for index, (distance, traffic) in enumerate(zip(series.distances.tolist(), series.window_traffic.tolist()))
    )
    return write_rows(path, ["window_index", "d_k", "traffic"], rows)


def write_slope_csv(path: str, series: SlopeSeries) -> str:
    """j,slope,curvature,level; curvature is the relative slope change at j"""
    changes = dict(zip(series.change_scales.tolist(), series.changes.tolist()))
    levels = set(series.levels)
    rows = (
        (j, slope, changes.get(j), j in levels)
        for j, slope in zip(series.slope_scales.tolist(), series.slopes.tolist())
    )
    return write_rows(path, ["j", "slope", "curvature", "level"], rows)


def write_flat_csv(path: str, regions: FlatRegions) -> str:
    rows = zip(regions.slope_scales.tolist(), regions.slopes.tolist(), regions.flags)
    return write_rows(path, ["j", "slope", "flat"], rows)


def write_burstiness_csv(path: str, name: str, report: BurstinessReport) -> str:
    return write_rows(path, ["trace", "D", "O"], [(name, report.D, report.O)])


def write_ida_csv(path: str, result: IdaResult) -> str:
    """class,stage_0,...,stage_{K+1},gaps from the display matrix"""
    im = np.asarray(result.im)
    header = ["class"] + [f"stage_{i}" for i in range(result.stage_count)] + ["gaps"]
    rows = (
        [row] + im[row, : result.stage_count].tolist() + [im[row, -1]]
        for row in range(result.classes)
    )
    return write_rows(path, header, rows)


def write_pgm(path: str, matrix: np.ndarray) -> str:
    """Plain greyscale PGM (P2), maxval 255, darker for larger entries in [0, 1]"""
    image = np.asarray(matrix, dtype=np.float64)
    pixels = np.rint(255.0 * (1.0 - np.clip(image, 0.0, 1.0))).astype(np.int64)
    lines: List[str] = ["P2", f"{image.shape[1]} {image.shape[0]}", "255"]
    lines.extend(" ".join(str(pixel) for pixel in row) for row in pixels.tolist())
    output = _prepare(path)
    output.write_text("\n".join(lines) + "\n", encoding="ascii")
    return str(output)
