"""Record/replay cache for provider responses.

Each response lives in its own file named by the request's content hash,
holding the canonical request alongside the response. Reads are safe under
concurrency; writes go through an atomic rename.
"""

import hashlib
import json
import os
import tempfile
from pathlib import Path


def _hash(op: str, payload: dict) -> str:
    canonical = json.dumps({"op": op, "request": payload}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class ReplayCache:
    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, op: str, payload: dict) -> Path:
        return self.directory / f"{_hash(op, payload)}.json"

    def get(self, op: str, payload: dict):
        """Stored response for this request, or None when never recorded."""
        path = self._path(op, payload)
        if not path.exists():
            return None
        entry = json.loads(path.read_text(encoding="utf-8"))
        return entry["response"]

    def put(self, op: str, payload: dict, response) -> None:
        path = self._path(op, payload)
        entry = {"op": op, "request": payload, "response": response}
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                json.dump(entry, handle, sort_keys=True, ensure_ascii=False)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def __len__(self) -> int:
        return sum(1 for _ in self.directory.glob("*.json"))
