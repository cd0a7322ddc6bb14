"""On-disk cache of probability results keyed by a hash of their inputs."""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
import warnings
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .core import Bundle, ProbabilityResult
from .response import QuadratureSettings

ENV_VAR = "QLINE_CACHE_DIR"


class CacheCorruption(UserWarning):
    pass


def cache_key(bundle: Bundle, settings: QuadratureSettings, kernel: str = "analytic") -> str:
    payload = {
        "bundle": bundle.as_dict(),
        "settings": asdict(settings),
        "kernel": kernel,
        "version": __version__,
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


class ResultCache:
    """Content-addressed store; writes are atomic (temp file + rename).

    Unreadable entries are reported with a :class:`CacheCorruption` warning
    and treated as misses.
    """

    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)
        self.hits = 0
        self.misses = 0

    @classmethod
    def from_env(cls, directory: str | os.PathLike | None = None) -> ResultCache | None:
        directory = directory or os.environ.get(ENV_VAR)
        return cls(directory) if directory else None

    def _path(self, key: str) -> Path:
        return self.directory / key[:2] / f"{key}.json"

    def lookup(self, bundle: Bundle, settings: QuadratureSettings) -> ProbabilityResult | None:
        key = cache_key(bundle, settings)
        path = self._path(key)
        if not path.exists():
            self.misses += 1
            return None
        try:
            entry = json.loads(path.read_text())
            if entry["key"] != key:
                raise ValueError("key mismatch")
            result = ProbabilityResult(**entry["result"])
        except (OSError, ValueError, KeyError, TypeError) as exc:
            warnings.warn(f"ignoring corrupt cache entry {path}: {exc}", CacheCorruption, stacklevel=2)
            self.misses += 1
            return None
        self.hits += 1
        return result

    def store(self, bundle: Bundle, settings: QuadratureSettings, result: ProbabilityResult) -> Path:
        key = cache_key(bundle, settings)
        path = self._path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        entry = {
            "key": key,
            "bundle": bundle.as_dict(),
            "settings": asdict(settings),
            "result": {k: float(v) if k != "panels_used" else int(v) for k, v in asdict(result).items()},
        }
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(entry, fh, sort_keys=True)
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise
        return path
