"""On-disk cache of exponential sums: one JSON file per (polynomial, q, k)."""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

from .cyclotomic import CyclotomicNumber
from .errors import HodgeNewtonError

log = logging.getLogger(__name__)


class CacheError(HodgeNewtonError):
    exit_code = 2


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def checksum(value: dict) -> str:
    return hashlib.sha256(_canonical(value).encode()).hexdigest()


class SumCache:
    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise CacheError(f"cannot create cache directory {self.directory}: {exc}") from exc

    @staticmethod
    def key(f_key: str, q: int, k: int) -> dict:
        return {"f": f_key, "q": q, "k": k}

    def path_for(self, key: dict) -> Path:
        return self.directory / f"{hashlib.sha256(_canonical(key).encode()).hexdigest()}.json"

    def get(self, f_key: str, q: int, k: int) -> CyclotomicNumber | None:
        key = self.key(f_key, q, k)
        path = self.path_for(key)
        if not path.exists():
            return None
        try:
            entry = json.loads(path.read_text())
            if entry.get("key") != key:
                raise ValueError("key echo mismatch")
            if entry.get("checksum") != checksum(entry["value"]):
                raise ValueError("checksum mismatch")
            return CyclotomicNumber.from_json(entry["value"])
        except (ValueError, KeyError, TypeError) as exc:
            log.warning("ignoring corrupted cache entry %s (%s); recomputing", path, exc)
            return None
        except OSError as exc:
            raise CacheError(f"cannot read cache entry {path}: {exc}") from exc

    def put(self, f_key: str, q: int, k: int, value: CyclotomicNumber) -> Path:
        key = self.key(f_key, q, k)
        path = self.path_for(key)
        data = value.to_json()
        entry = {"key": key, "value": data, "checksum": checksum(data)}
        try:
            fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
            with os.fdopen(fd, "w") as fh:
                json.dump(entry, fh, sort_keys=True)
            os.replace(tmp, path)
        except OSError as exc:
            raise CacheError(f"cannot write cache entry {path}: {exc}") from exc
        return path
