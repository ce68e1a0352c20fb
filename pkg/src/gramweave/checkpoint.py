"""Checkpoint persistence: a JSON manifest plus one binary file per
named matrix.

Array file format (little-endian): two unsigned 64-bit integers (rows,
cols), then rows*cols 32-bit floats, row-major.  1-d arrays are stored
as a single row and restored to 1-d by callers that know their shape.
Round trips are bitwise exact; the manifest pins a format version, the
corpus digest, per-file sha256 digests, and a config echo.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

FORMAT_VERSION = 1
MANIFEST_NAME = "manifest.json"
_HEADER = np.dtype("<u8")
_CELL = np.dtype("<f4")


class CheckpointError(Exception):
    pass


class CorruptCheckpointError(CheckpointError):
    pass


class UnsupportedVersionError(CheckpointError):
    pass


class DigestMismatchError(CheckpointError):
    pass


def corpus_digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _array_bytes(arr: np.ndarray) -> bytes:
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ValueError(f"checkpoint arrays must be 1-d or 2-d, got {arr.ndim}-d")
    header = np.array(arr.shape, dtype=_HEADER).tobytes()
    return header + np.ascontiguousarray(arr, dtype=_CELL).tobytes()


def write_array(path, arr: np.ndarray) -> str:
    data = _array_bytes(arr)
    Path(path).write_bytes(data)
    return hashlib.sha256(data).hexdigest()


def read_array(path) -> np.ndarray:
    data = Path(path).read_bytes()
    if len(data) < 16:
        raise CorruptCheckpointError(f"corrupt checkpoint: {path} shorter than its header")
    rows, cols = (int(x) for x in np.frombuffer(data[:16], dtype=_HEADER))
    expected = 16 + rows * cols * 4
    if len(data) != expected:
        raise CorruptCheckpointError(
            f"corrupt checkpoint: {path} is {len(data)} bytes, expected {expected} for {rows}x{cols}"
        )
    return np.frombuffer(data[16:], dtype=_CELL).reshape(rows, cols).copy()


def _file_name(array_name: str) -> str:
    return array_name.replace("/", "__") + ".mat"


def save_checkpoint(path, arrays: dict, manifest_extra: dict | None = None) -> Path:
    """Write every named array plus the manifest into directory `path`."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    entries = {}
    for name in sorted(arrays):
        arr = np.asarray(arrays[name])
        fname = _file_name(name)
        digest = write_array(root / fname, arr)
        rows, cols = (1, arr.shape[0]) if arr.ndim == 1 else arr.shape
        entries[name] = {"file": fname, "rows": int(rows), "cols": int(cols), "sha256": digest}
    manifest = dict(manifest_extra or {})
    manifest["format_version"] = FORMAT_VERSION
    manifest["arrays"] = entries
    (root / MANIFEST_NAME).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return root


def load_manifest(path) -> dict:
    root = Path(path)
    manifest_path = root / MANIFEST_NAME
    if not manifest_path.exists():
        raise CorruptCheckpointError(f"corrupt checkpoint: missing {MANIFEST_NAME} in {root}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise CorruptCheckpointError(f"corrupt checkpoint: unreadable manifest ({e})") from e
    version = manifest.get("format_version")
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(
            f"unsupported checkpoint version {version!r}, this build reads version {FORMAT_VERSION}"
        )
    return manifest


def load_checkpoint(path):
    """Read (manifest, arrays) back; verifies per-file digests and shapes."""
    root = Path(path)
    manifest = load_manifest(root)
    arrays = {}
    for name, entry in manifest.get("arrays", {}).items():
        fpath = root / entry["file"]
        if not fpath.exists():
            raise CorruptCheckpointError(f"corrupt checkpoint: missing array file {entry['file']}")
        data = fpath.read_bytes()
        if hashlib.sha256(data).hexdigest() != entry["sha256"]:
            raise CorruptCheckpointError(f"corrupt checkpoint: digest mismatch for {entry['file']}")
        arr = read_array(fpath)
        if arr.shape != (entry["rows"], entry["cols"]):
            raise CorruptCheckpointError(
                f"corrupt checkpoint: {entry['file']} is {arr.shape}, manifest says "
                f"({entry['rows']}, {entry['cols']})"
            )
        arrays[name] = arr
    return manifest, arrays


def verify_corpus(manifest: dict, corpus_bytes: bytes) -> None:
    expected = manifest.get("corpus_digest")
    actual = corpus_digest(corpus_bytes)
    if expected != actual:
        raise DigestMismatchError(
            f"corpus digest mismatch: checkpoint was built from {expected}, got {actual}"
        )
