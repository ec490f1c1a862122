"""Deterministic JSON and CSV serialisation.

JSON is written with sorted keys, compact separators and Python's shortest
round-trip float repr, so loading and re-serialising reproduces the bytes.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Iterable, Sequence, Union

from .circle import CircleDiffeo
from .errors import DomainError
from .interval import IntervalDiffeo

Diffeo = Union[IntervalDiffeo, CircleDiffeo]


def dumps(data: dict) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n"


def diffeo_from_dict(data: dict) -> Diffeo:
    manifold = data.get("manifold")
    if manifold == "interval":
        return IntervalDiffeo.from_dict(data)
    if manifold == "circle":
        return CircleDiffeo.from_dict(data)
    raise DomainError(f"unknown manifold {manifold!r}")


def load_diffeo(path: Union[str, Path]) -> Diffeo:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}: not valid JSON ({exc.msg})") from exc
    return diffeo_from_dict(data)


def save_diffeo(f: Diffeo, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps(f.to_dict()))


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    """CSV with ``\\n`` line ends; floats use ``repr``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, float) else v for v in row])
    return buf.getvalue()
