"""Field dumps (JSON) and snapshot tables (CSV)."""

from __future__ import annotations

import csv
import json
import math
import os

from .errors import MuskatLabError
from .spectral import Grid, RealField

SNAPSHOT_COLUMNS = ("t", "h1", "hs", "hs_half", "lipschitz", "linf", "mean", "dissipation")


class SchemaError(MuskatLabError):
    pass


def field_to_dict(f: RealField) -> dict:
    return {"L": f.grid.L, "N": f.grid.N, "samples": f.samples.tolist()}


def dump_field(f: RealField, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(field_to_dict(f), fh)


def field_from_dict(d) -> RealField:
    if not isinstance(d, dict) or set(d) != {"L", "N", "samples"}:
        raise SchemaError('field dump must be an object with exactly the keys "L", "N", "samples"')
    L, N, samples = d["L"], d["N"], d["samples"]
    if not isinstance(L, (int, float)) or isinstance(L, bool) or not math.isfinite(L) or L <= 0:
        raise SchemaError(f"L must be a positive number, got {L!r}")
    if not isinstance(N, int) or isinstance(N, bool):
        raise SchemaError(f"N must be an integer, got {N!r}")
    if not isinstance(samples, list) or len(samples) != N:
        raise SchemaError(f"samples must be a list of length N = {N}")
    if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in samples):
        raise SchemaError("samples must be numbers")
    try:
        return RealField(Grid(float(L), N), samples)
    except MuskatLabError as exc:
        raise SchemaError(str(exc)) from None


def load_field(path) -> RealField:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from None
    return field_from_dict(data)


def write_snapshots(states, out_dir, fields: bool = True) -> str:
    """``snapshots.csv`` plus ``fields/snap_XXXXX.json`` per snapshot; returns the CSV path."""
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "snapshots.csv")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SNAPSHOT_COLUMNS)
        for st in states:
            w.writerow([repr(float(st.t))] + [repr(float(st.diagnostics[c]))
                                              for c in SNAPSHOT_COLUMNS[1:]])
    if fields:
        fdir = os.path.join(out_dir, "fields")
        os.makedirs(fdir, exist_ok=True)
        for i, st in enumerate(states):
            dump_field(st.f, os.path.join(fdir, f"snap_{i:05d}.json"))
    return path


def write_rows(rows: list[dict], path) -> None:
    if not rows:
        open(path, "w").close()
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
