"""On-disk result cache: one JSON record per file, hash-checked on read.

Records are newline-terminated single-line JSON keyed by
``{kind}-{group_spec}-v{schema_version}``; the payload hash is recomputed on
read and any mismatch (or schema bump) invalidates the record with a warning,
never an error.  Writes go through a temp file and an atomic rename.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import warnings
from dataclasses import dataclass
from pathlib import Path

SCHEMA_VERSION = 1
ENV_CACHE_DIR = "ZEROSUM_CACHE_DIR"


class CacheWarning(UserWarning):
    """A cache record was ignored (corrupt, tampered or outdated)."""


@dataclass(frozen=True)
class CacheRecord:
    schema_version: int
    group_spec: str
    kind: str
    payload: dict
    content_hash: str


def payload_hash(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def make_record(kind: str, group_spec: str, payload: dict) -> CacheRecord:
    return CacheRecord(SCHEMA_VERSION, group_spec, kind, payload,
                       payload_hash(payload))


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_CACHE_DIR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "zerosum"


def _sanitize(text: str) -> str:
    out = []
    for ch in text:
        if ch.isalnum():
            out.append(ch)
        elif ch == ":":
            out.append("_")
        else:
            out.append("-")
    return "".join(out)


def record_path(cache_dir: Path, kind: str, group_spec: str,
                schema_version: int = SCHEMA_VERSION) -> Path:
    return Path(cache_dir) / f"{kind}-{_sanitize(group_spec)}-v{schema_version}.json"


def store(cache_dir: Path, record: CacheRecord) -> Path:
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    target = record_path(cache_dir, record.kind, record.group_spec,
                         record.schema_version)
    line = json.dumps({
        "schema_version": record.schema_version,
        "group_spec": record.group_spec,
        "kind": record.kind,
        "content_hash": record.content_hash,
        "payload": record.payload,
    }, sort_keys=True)
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(line + "\n")
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return target


def lookup(cache_dir: Path, kind: str, group_spec: str) -> dict | None:
    """Return the cached payload, or None (with a warning if it was invalid)."""
    path = record_path(Path(cache_dir), kind, group_spec)
    if not path.exists():
        return None
    try:
        with open(path) as fh:
            raw = json.loads(fh.readline())
    except (OSError, json.JSONDecodeError):
        warnings.warn(f"unreadable cache record {path}; recomputing", CacheWarning)
        return None
    if raw.get("schema_version") != SCHEMA_VERSION:
        warnings.warn(f"cache record {path} has schema "
                      f"{raw.get('schema_version')}, expected {SCHEMA_VERSION}",
                      CacheWarning)
        return None
    payload = raw.get("payload")
    if not isinstance(payload, dict) or raw.get("content_hash") != payload_hash(payload):
        warnings.warn(f"cache record {path} failed its hash check; recomputing",
                      CacheWarning)
        return None
    return payload


def load_all(cache_dir: Path) -> list[CacheRecord]:
    """Every valid record in the cache directory (for the report command)."""
    cache_dir = Path(cache_dir)
    if not cache_dir.is_dir():
        return []
    out = []
    for path in sorted(cache_dir.glob("*.json")):
        try:
            with open(path) as fh:
                raw = json.loads(fh.readline())
        except (OSError, json.JSONDecodeError):
            warnings.warn(f"unreadable cache record {path}; skipped", CacheWarning)
            continue
        payload = raw.get("payload")
        if (raw.get("schema_version") != SCHEMA_VERSION
                or not isinstance(payload, dict)
                or raw.get("content_hash") != payload_hash(payload)):
            warnings.warn(f"invalid cache record {path}; skipped", CacheWarning)
            continue
        out.append(CacheRecord(raw["schema_version"], raw["group_spec"],
                               raw["kind"], payload, raw["content_hash"]))
    return out
