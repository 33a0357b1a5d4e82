"""File formats: CSV and binary ensembles, JSON result documents.

CSV ensembles have header ``rep,t,value`` with 1-based rep and t; rows may
appear in any order but the (rep, t) grid must be dense. The binary layout is
magic "ETE1", little-endian u32 R, u32 N, u32 name-length, the channel name
bytes, then R*N float64 values in repetition-major order.
"""

import json
import struct
import time
from pathlib import Path

import numpy as np

from .data import EnsembleSeries, TEResult, validate_ensemble
from .exceptions import GridIncomplete, IoError, MagicMismatch, ParseError

MAGIC = b"ETE1"
TOOL_VERSION = "0.1.0"


def save_ensemble(series: EnsembleSeries, path, format: str = "bin") -> None:
    try:
        if format == "csv":
            _save_csv(series, path)
        elif format == "bin":
            _save_bin(series, path)
        else:
            raise ValueError(f"unknown format {format!r}")
    except OSError as exc:
        raise IoError(f"{path}: {exc}") from exc


def load_ensemble(path, format: str = "bin") -> EnsembleSeries:
    try:
        if format == "csv":
            series = _load_csv(path)
        elif format == "bin":
            series = _load_bin(path)
        else:
            raise ValueError(f"unknown format {format!r}")
    except OSError as exc:
        raise IoError(f"{path}: {exc}") from exc
    validate_ensemble(series)
    return series


def _save_csv(series: EnsembleSeries, path) -> None:
    with open(path, "w") as fh:
        fh.write("rep,t,value\n")
        for r in range(series.n_repetitions):
            for t in range(series.n_samples):
                fh.write(f"{r + 1},{t + 1},{float(series.values[r, t])!r}\n")


def _load_csv(path) -> EnsembleSeries:
    cells = {}
    with open(path) as fh:
        header = fh.readline().strip()
        if header.replace(" ", "") != "rep,t,value":
            raise ParseError(f"{path}: expected header 'rep,t,value', got {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ParseError(f"{path}:{lineno}: expected 3 fields, got {len(parts)}")
            try:
                r, t, v = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
            if r < 1 or t < 1:
                raise ParseError(f"{path}:{lineno}: rep and t are 1-based")
            cells[(r, t)] = v
    if not cells:
        raise ParseError(f"{path}: no data rows")
    n_rep = max(r for r, _ in cells)
    n_samp = max(t for _, t in cells)
    values = np.empty((n_rep, n_samp))
    for r in range(1, n_rep + 1):
        for t in range(1, n_samp + 1):
            if (r, t) not in cells:
                raise GridIncomplete(f"{path}: missing cell (rep={r}, t={t})")
            values[r - 1, t - 1] = cells[(r, t)]
    return EnsembleSeries(Path(path).stem, values)


def _save_bin(series: EnsembleSeries, path) -> None:
    name = series.channel_name.encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<III", series.n_repetitions, series.n_samples, len(name)))
        fh.write(name)
        fh.write(np.ascontiguousarray(series.values, dtype="<f8").tobytes())


def _load_bin(path) -> EnsembleSeries:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise MagicMismatch(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
        header = fh.read(12)
        if len(header) != 12:
            raise ParseError(f"{path}: truncated header")
        n_rep, n_samp, name_len = struct.unpack("<III", header)
        name = fh.read(name_len).decode("utf-8")
        raw = fh.read(8 * n_rep * n_samp)
        if len(raw) != 8 * n_rep * n_samp:
            raise ParseError(f"{path}: truncated payload at offset {16 + name_len + len(raw)}")
        values = np.frombuffer(raw, dtype="<f8").reshape(n_rep, n_samp)
    return EnsembleSeries(name, values)


def result_to_dict(result: TEResult) -> dict:
    return {
        "source": result.source,
        "target": result.target,
        "window": list(result.window),
        "u_selected": int(result.u_selected),
        "te_value": float(result.te_value),
        "p_value": float(result.p_value),
        "significant": bool(result.significant),
        "significant_corrected": bool(result.significant_corrected),
        "te_minus_median_surrogate": float(result.te_minus_median_surrogate),
        "te_curve": [[int(u), float(te)] for u, te in result.te_curve],
        "n_surrogates": int(np.asarray(result.surrogate_values).size),
        "surrogate_median": float(np.median(result.surrogate_values)),
        "volume_conduction": False,
        "te_units": "nats",
    }


def write_results(results, path, config=None, timestamp: bool = True) -> None:
    """Serialize analysis results plus the config echo as one JSON document."""
    if not results:
        raise IoError("results list is empty")
    doc = {
        "tool_version": TOOL_VERSION,
        "te_units": "nats",
        "results": [result_to_dict(r) for r in results],
    }
    if config is not None:
        doc["config"] = {
            "k": config.k,
            "u_candidates": list(config.u_candidates),
            "window": list(config.window),
            "n_surrogates": config.n_surrogates,
            "alpha": config.alpha,
            "correction": config.correction,
            "seed": config.seed,
            "jitter_amplitude": config.jitter_amplitude,
            "strict_permutation": config.strict_permutation,
            "scan_statistic": config.scan_statistic,
            "test_grid": None if config.test_grid is None else list(config.test_grid),
        }
        doc["seed"] = config.seed
    if timestamp:
        doc["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    try:
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise IoError(str(exc)) from exc


def read_results(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def write_te_curve_csv(result: TEResult, path) -> None:
    """Emit the (u, te) scan curve as a two-column CSV for plotting."""
    with open(path, "w") as fh:
        fh.write("u,te_nats\n")
        for u, te in result.te_curve:
            fh.write(f"{u},{te!r}\n")
