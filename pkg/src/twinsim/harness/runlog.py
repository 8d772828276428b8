"""Line-delimited run logs: one JSON object per line.

The first line is a header carrying the package version and the config
hash; every following line is a tick record with the applied command
and a state snapshot. Floats serialize via Python's shortest-round-trip
repr, so identical runs produce byte-identical logs and reloaded values
compare bit-exactly.

Writing happens on a dedicated thread behind a bounded queue; when the
queue fills, the producing tick loop blocks rather than dropping
records.
"""

from __future__ import annotations

import json
import queue
import threading
from pathlib import Path

from .. import __version__
from ..errors import LogMismatchError

_SENTINEL = None
QUEUE_DEPTH = 1024


class RunLogWriter:
    def __init__(self, path: str | Path, config_hash: str, meta: dict | None = None):
        self.path = Path(path)
        self.config_hash = config_hash
        self._queue: queue.Queue = queue.Queue(maxsize=QUEUE_DEPTH)
        self._file = open(self.path, "w", encoding="utf-8")
        self._thread = threading.Thread(target=self._drain, daemon=True)
        header = {"type": "header", "version": __version__,
                  "config_hash": config_hash}
        if meta:
            header["meta"] = meta
        self._file.write(json.dumps(header, sort_keys=True) + "\n")
        self._last_tick = 0
        self._thread.start()

    def _drain(self) -> None:
        while True:
            item = self._queue.get()
            if item is _SENTINEL:
                break
            self._file.write(item)

    def write_tick(self, tick: int, command: dict, state: dict,
                   sensors: dict | None = None) -> None:
        if tick <= self._last_tick:
            raise LogMismatchError(
                f"ticks must be strictly increasing ({tick} after {self._last_tick})")
        self._last_tick = tick
        record = {"type": "tick", "tick": tick, "cmd": command, "state": state}
        if sensors:
            record["sensors"] = sensors
        self._queue.put(json.dumps(record, sort_keys=True) + "\n")

    def close(self) -> None:
        self._queue.put(_SENTINEL)
        self._thread.join()
        self._file.close()

    def __enter__(self) -> "RunLogWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


class RunLogReader:
    """Parses a log file; validates the header and tick monotonicity."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        lines = self.path.read_text(encoding="utf-8").splitlines()
        if not lines:
            raise LogMismatchError(f"{path}: empty file, missing header")
        header = json.loads(lines[0])
        if header.get("type") != "header":
            raise LogMismatchError(f"{path}: first line is not a header")
        self.version = header.get("version")
        self.config_hash = header.get("config_hash")
        self.meta = header.get("meta", {})
        self.records = []
        last = 0
        for line in lines[1:]:
            if not line.strip():
                continue
            record = json.loads(line)
            if record.get("type") != "tick":
                continue
            if record["tick"] <= last:
                raise LogMismatchError(
                    f"{path}: non-increasing tick {record['tick']}")
            last = record["tick"]
            self.records.append(record)

    def require_hash(self, expected: str) -> None:
        if self.config_hash != expected:
            raise LogMismatchError(
                f"{self.path}: config hash mismatch "
                f"(log {self.config_hash}, expected {expected})")

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


def read_log(path: str | Path) -> RunLogReader:
    return RunLogReader(path)
