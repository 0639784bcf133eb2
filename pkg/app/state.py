"""Run-wide state management."""

import json
import threading
from typing import Dict, List, Optional

import pandas as pd

from models.results import CheckReport

_MISSING = object()


class RunState:
    """State shared by the suites of one CLI run.

    Options and headline numbers that survive ``json.dumps`` go to ``data``;
    engine components and the config-built objects go to ``_objects``.
    Suites running on the ``all`` thread pool append their reports and
    tables here, so every mutation takes the lock.
    """
    def __init__(self):
        self.data = {}
        self._objects = {}
        # suite name -> reports
        self._reports: Dict[str, List[CheckReport]] = {}
        # table name -> DataFrame for CSV output
        self._tables: Dict[str, pd.DataFrame] = {}
        self._lock = threading.RLock()

    def _lookup(self, key, default):
        with self._lock:
            if key in self.data:
                return self.data[key]
            return self._objects.get(key, default)

    def get(self, key, default=None):
        return self._lookup(key, default)

    def set(self, key, value):
        """Store ``value`` under ``key``, in ``data`` when it is JSON-serializable."""
        with self._lock:
            target, other = (self.data, self._objects) if _json_ready(value) else (self._objects, self.data)
            other.pop(key, None)
            target[key] = value
        return value

    def __setitem__(self, key, value):
        self.set(key, value)

    def __getitem__(self, key):
        value = self._lookup(key, _MISSING)
        if value is _MISSING:
            raise KeyError(key)
        return value

    def __contains__(self, key):
        return self._lookup(key, _MISSING) is not _MISSING

    def add_reports(self, suite: str, reports: List[CheckReport]):
        with self._lock:
            self._reports.setdefault(suite, []).extend(reports)

    def reports(self, order: Optional[List[str]] = None) -> List[CheckReport]:
        """All reports, grouped by suite in the given order (insertion order otherwise)."""
        with self._lock:
            names = order if order is not None else list(self._reports)
            return [r for name in names for r in self._reports.get(name, [])]

    def add_table(self, name: str, table: pd.DataFrame):
        with self._lock:
            self._tables[name] = table

    def tables(self) -> Dict[str, pd.DataFrame]:
        with self._lock:
            return dict(self._tables)


def _json_ready(value) -> bool:
    try:
        json.dumps(value)
        return True
    except (TypeError, ValueError):
        return False
