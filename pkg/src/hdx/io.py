"""File helpers for the command line: atomic writes, content hashes and JSON reports."""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
from pathlib import Path

from .errors import ParameterError, _jsonable

META_SUFFIX = ".meta.json"


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    """Write via a temporary file in the target directory and rename it into place."""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    directory.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_file(path: str | os.PathLike) -> str:
    return sha256_bytes(Path(path).read_bytes())


def meta_path(path: str | os.PathLike) -> Path:
    return Path(str(path) + META_SUFFIX)


def _finite(obj: object) -> object:
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_finite(v) for v in obj]
    return obj


def dumps_json(obj: object) -> str:
    """Deterministic UTF-8 JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(_finite(_jsonable(obj)), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def read_json(path: str | os.PathLike, what: str = "file") -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParameterError(f"cannot read {what} {str(path)!r}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParameterError(f"{what} {str(path)!r} is not valid JSON: {exc}") from None


def read_meta(path: str | os.PathLike) -> dict | None:
    """Sidecar metadata next to a complex file, or ``None`` if there is none."""
    mp = meta_path(path)
    if not mp.exists():
        return None
    return read_json(mp, "metadata file")
