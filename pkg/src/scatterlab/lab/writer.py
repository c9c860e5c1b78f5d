"""Serialized result writer with resume support."""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

import pandas as pd

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence
    from pathlib import Path

CSV_FLOAT_FORMAT = "%.10e"


class ResultWriter:
    """Append rows to a CSV as they complete and rewrite it sorted at the end.

    Only the orchestration thread calls `add`. Rows already in the file when the writer is
    opened count as completed, so an interrupted run resumes where it stopped.
    """

    def __init__(self, path: Path, columns: Sequence[str], key_columns: Sequence[str]) -> None:
        self.path = path
        self.columns = list(columns)
        self.key_columns = list(key_columns)
        self._frames: list[pd.DataFrame] = []
        self.resumed_rows = 0
        if path.is_file():
            existing = pd.read_csv(path)
            if list(existing.columns) != self.columns:
                msg = f"{path} has columns {list(existing.columns)}, expected {self.columns}"
                raise ValueError(msg)
            self._frames.append(existing)
            self.resumed_rows = len(existing)
        self._completed = {self._key(row) for row in self._records()}

    def _records(self) -> Iterable[dict[str, Any]]:
        for frame in self._frames:
            yield from frame.to_dict("records")

    def _key(self, row: dict[str, Any]) -> tuple[Any, ...]:
        values = (row[column] for column in self.key_columns)
        return tuple(round(value, 9) if isinstance(value, float) else value for value in values)

    def is_done(self, **key: Any) -> bool:
        return self._key(key) in self._completed

    def add(self, rows: list[dict[str, Any]]) -> None:
        if not rows:
            return
        frame = pd.DataFrame(rows, columns=self.columns)
        header = not self.path.is_file()
        frame.to_csv(self.path, mode="a", header=header, index=False, float_format=CSV_FLOAT_FORMAT)
        self._frames.append(frame)
        self._completed.update(self._key(row) for row in rows)

    @property
    def row_count(self) -> int:
        return sum(len(frame) for frame in self._frames)

    def frame(self) -> pd.DataFrame:
        if not self._frames:
            return pd.DataFrame(columns=self.columns)
        return pd.concat(self._frames, ignore_index=True)

    def finalize(self) -> pd.DataFrame:
        """Rewrite the file sorted by the key columns and return the rows."""
        frame = self.frame().sort_values(self.key_columns, kind="mergesort").reset_index(drop=True)
        frame.to_csv(self.path, index=False, float_format=CSV_FLOAT_FORMAT)
        return frame


def write_table(path: Path, frame: pd.DataFrame) -> Path:
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
    return path
