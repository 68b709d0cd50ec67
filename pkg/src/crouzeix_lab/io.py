"""JSON / CSV writers with fixed number formatting."""

import csv
import json
import math
from importlib import resources
from pathlib import Path

import numpy as np

SIG_DIGITS = 15


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return float(f"{x:.{SIG_DIGITS}g}")
    if isinstance(obj, complex):
        return [_clean(obj.real), _clean(obj.imag)]
    return obj


def dumps(record) -> str:
    return json.dumps(_clean(record), indent=2, sort_keys=True) + "\n"


def write_json(path, record) -> Path:
    path = Path(path)
    path.write_text(dumps(record))
    return path


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([f"{v:.{SIG_DIGITS}g}" if isinstance(v, (float, np.floating)) else v for v in row])
    return path


def load_schema(name: str) -> dict:
    text = resources.files("crouzeix_lab").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)
