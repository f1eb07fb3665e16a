"""On-disk result cache keyed by a content hash of a generator matrix.

One JSON file per (matrix hash, operation). A file whose version tag, hash
or parameters disagree with the request is treated as a miss and rewritten.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path

CACHE_VERSION = 1
ENV_VAR = "QRLAB_CACHE_DIR"

log = logging.getLogger(__name__)


def cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "qrlab"


def matrix_hash(n: int, rows) -> str:
    h = hashlib.sha256()
    h.update(f"{n}:{len(rows)}:".encode())
    for r in rows:
        h.update(format(r, "x").encode() + b",")
    return h.hexdigest()


def _path(digest: str, op: str) -> Path:
    return cache_dir() / f"{digest[:32]}-{op}.json"


def load(digest: str, op: str, params: dict):
    path = _path(digest, op)
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, ValueError):
        return None
    if doc.get("version") != CACHE_VERSION or doc.get("hash") != digest \
            or doc.get("op") != op or doc.get("params") != params:
        log.info("discarding stale cache entry %s", path)
        return None
    return doc["result"]


def store(digest: str, op: str, params: dict, result) -> None:
    path = _path(digest, op)
    doc = {"version": CACHE_VERSION, "hash": digest, "op": op,
           "params": params, "result": result}
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        with open(tmp, "w") as fh:
            json.dump(doc, fh, sort_keys=True)
        os.replace(tmp, path)
    except OSError as exc:  # read-only home etc.; cache is an optimisation
        log.warning("could not write cache file %s: %s", path, exc)
