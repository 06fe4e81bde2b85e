"""Versioned JSON files for clouds, complexes, filtrations, matrices and reports."""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any

from .complexes import Filtration, SimplicialComplex
from .metric import PointCloud
from .persistence import Barcode
from .snf import IntegerMatrix

FORMAT_VERSION = 1


class InputError(Exception):
    """Unreadable or malformed input file (exit status 2)."""


def dumps(payload: dict[str, Any]) -> str:
    body = {"format_version": FORMAT_VERSION, **payload}
    return json.dumps(body, indent=2, allow_nan=False) + "\n"


def write(payload: dict[str, Any], path: str | Path | None) -> None:
    text = dumps(payload)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def read(path: str | Path) -> Any:
    try:
        text = sys.stdin.read() if str(path) == "-" else Path(path).read_text()
        obj = json.loads(text)
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if isinstance(obj, dict):
        v = obj.get("format_version", FORMAT_VERSION)
        if v != FORMAT_VERSION:
            raise InputError(f"{path}: unsupported format_version {v!r}")
    return obj


def _parse(kind: str, fn, obj: Any, path: str | Path) -> Any:
    try:
        return fn(obj)
    except (KeyError, TypeError, IndexError, AttributeError) as exc:
        raise InputError(f"{path}: not a valid {kind} file ({exc!r})") from exc


def read_cloud(path: str | Path) -> PointCloud:
    return _parse("point-cloud", PointCloud.from_json, read(path), path)


def read_complex(path: str | Path) -> SimplicialComplex:
    """Complex file, or the final complex of a filtration file."""
    obj = read(path)
    if isinstance(obj, dict) and "births" in obj:
        return _parse("filtration", Filtration.from_json, obj, path).complex
    return _parse("complex", SimplicialComplex.from_json, obj, path)


def read_filtration(path: str | Path) -> Filtration:
    """Filtration file; a plain complex file is read as a one-stage filtration at scale 0."""
    obj = read(path)
    if isinstance(obj, dict) and "births" not in obj and "maximal_simplices" in obj:
        cpx = _parse("complex", SimplicialComplex.from_json, obj, path)
        return Filtration(cpx, {s: 0.0 for s in cpx}, [0.0])
    return _parse("filtration", Filtration.from_json, obj, path)


def read_matrix(path: str | Path) -> IntegerMatrix:
    obj = read(path)
    if isinstance(obj, list):
        return _parse("matrix", IntegerMatrix.from_dense, obj, path)
    return _parse("matrix", IntegerMatrix.from_json, obj, path)


def read_barcode(path: str | Path) -> Barcode:
    return _parse("barcode", Barcode.from_json, read(path), path)
