"""Sparse exact linear algebra over the rationals.

Vectors are dicts ``{index: coeff}``.  :class:`Echelon` keeps an
incrementally built row-echelon basis and, optionally, how each basis row
is written in terms of the inserted vectors, which is what the coboundary
solver needs.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping, Sequence

from gmpy2 import mpq


def _axpy(v: dict, c, w: Mapping) -> None:
    """v += c * w, in place, dropping zeros."""
    for k, x in w.items():
        s = v.get(k, 0) + c * x
        if s:
            v[k] = s
        else:
            v.pop(k, None)


class Echelon:
    def __init__(self, track: bool = False):
        self.rows: dict[Hashable, dict] = {}
        self.combos: dict[Hashable, dict] = {}
        self.track = track
        self.count = 0

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: Mapping, combo: dict | None = None) -> tuple[dict, dict | None]:
        v = {k: mpq(c) for k, c in v.items() if c}
        rows = self.rows
        while True:
            hits = [k for k in v if k in rows]
            if not hits:
                return v, combo
            piv = min(hits)
            row = rows[piv]
            c = -v[piv] / row[piv]
            _axpy(v, c, row)
            if combo is not None:
                _axpy(combo, c, self.combos[piv])

    def add(self, v: Mapping, label: Hashable | None = None) -> bool:
        """Insert ``v``; return True if it was independent of the rows so far."""
        combo = None
        if self.track:
            combo = {self.count if label is None else label: mpq(1)}
        self.count += 1
        v, combo = self.reduce(v, combo)
        if not v:
            return False
        piv = min(v)
        self.rows[piv] = v
        if self.track:
            self.combos[piv] = combo
        return True

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(v)[0]

    def solve(self, target: Mapping) -> dict | None:
        """Express ``target`` as a combination of inserted vectors, or None."""
        if not self.track:
            raise ValueError("solve needs a tracking Echelon")
        resid, combo = self.reduce(target, {})
        if resid:
            return None
        return {k: -c for k, c in combo.items() if c}


def rank(vectors: Iterable) -> int:
    ech = Echelon()
    for v in vectors:
        if not isinstance(v, Mapping):
            v = {i: c for i, c in enumerate(v) if c}
        ech.add(v)
    return len(ech)


def solve(columns: Sequence[Mapping], target: Mapping) -> dict | None:
    """Find ``c`` with ``sum c[i] * columns[i] == target``; None if impossible."""
    ech = Echelon(track=True)
    for i, col in enumerate(columns):
        ech.add(col, label=i)
    return ech.solve(target)
