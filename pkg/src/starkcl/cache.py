"""On-disk JSON cache of expensive results, keyed by discriminant (and p, N)."""

import json
import os
import tempfile

CACHE_VERSION = 1


def dumps(obj):
    """Byte-stable JSON used for cache records and reports."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


class CacheStore:
    def __init__(self, directory):
        self.dir = os.path.expanduser(directory)

    def _path(self, kind, key):
        return os.path.join(self.dir, kind, f"{key}.json")

    def get(self, kind, key):
        """The stored payload, or None when missing or written by another version."""
        try:
            with open(self._path(kind, key), encoding="utf-8") as fh:
                rec = json.load(fh)
        except (OSError, ValueError):
            return None
        if rec.get("cache_version") != CACHE_VERSION:
            return None
        return rec.get("payload")

    def put(self, kind, key, payload):
        path = self._path(kind, key)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        data = dumps({"cache_version": CACHE_VERSION, "payload": payload})
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(data)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


class NullCache:
    def get(self, kind, key):
        return None

    def put(self, kind, key, payload):
        pass
