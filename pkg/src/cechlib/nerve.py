"""Finite covers and their nerves.

A cover is a list of labelled opens plus an explicit oracle saying which
index subsets have nonempty intersection.  The nerve records those subsets
as simplices, up to a dimension cap.  Simplices are strictly increasing
index tuples; all unordered conventions are normalized to this orientation
on ingestion, with sign flips handled by the consumers.

Everything below the cap is the truncated complex: cochain computations are
relative to it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

Simplex = tuple[int, ...]

DEFAULT_DIM_CAP = 5


@dataclass(frozen=True)
class Cover:
    """Labelled opens plus declared-nonempty index subsets (sorted tuples)."""

    opens: tuple[str, ...]
    nonempty: tuple[Simplex, ...]

    def label_of(self, s: Simplex) -> str:
        return ",".join(self.opens[i] for i in s)

    def index_of(self, label: str) -> int:
        return self.opens.index(label)


@dataclass(frozen=True)
class Nerve:
    """Simplices of a cover, grouped and sorted by dimension."""

    opens: tuple[str, ...]
    by_dimension: tuple[tuple[Simplex, ...], ...]
    dim_cap: int
    _index: frozenset = field(repr=False, default=frozenset())

    def simplices(self, p: int) -> tuple[Simplex, ...]:
        if p < 0 or p >= len(self.by_dimension):
            return ()
        return self.by_dimension[p]

    def all_simplices(self) -> list[Simplex]:
        return [s for dim in self.by_dimension for s in dim]

    def contains(self, s: Simplex) -> bool:
        return s in self._index

    def max_dim(self) -> int:
        return len(self.by_dimension) - 1

    def label_of(self, s: Simplex) -> str:
        return ",".join(self.opens[i] for i in s)


def faces(s: Simplex) -> list[tuple[Simplex, int]]:
    """Codimension-1 faces with the deleted position, for sign bookkeeping."""
    return [(s[:k] + s[k + 1 :], k) for k in range(len(s))]


def build_nerve(cover: Cover, dim_cap: int = DEFAULT_DIM_CAP) -> Nerve:
    """Nerve of a cover: declared subsets of size <= dim_cap + 1, sorted.

    Raises ValueError when a singleton is missing or the declared family is
    not downward closed.
    """
    n = len(cover.opens)
    declared = set()
    for s in cover.nonempty:
        t = tuple(s)
        if not t:
            raise ValueError("empty index subset declared")
        if list(t) != sorted(set(t)):
            raise ValueError(f"subset {t} is not a strictly increasing tuple")
        if t[0] < 0 or t[-1] >= n:
            raise ValueError(f"subset {t} out of range for {n} opens")
        declared.add(t)
    for i in range(n):
        if (i,) not in declared:
            raise ValueError(f"singleton ({cover.opens[i]},) not declared nonempty")
    for s in declared:
        for face, _ in faces(s):
            if face and face not in declared:
                raise ValueError(
                    f"downward-closure violation: {s} declared but face {face} is not"
                )
    by_dim: list[list[Simplex]] = [[] for _ in range(dim_cap + 1)]
    for s in sorted(declared):
        p = len(s) - 1
        if p <= dim_cap:
            by_dim[p].append(s)
    while by_dim and not by_dim[-1]:
        by_dim.pop()
    tiers = tuple(tuple(d) for d in by_dim)
    return Nerve(cover.opens, tiers, dim_cap, frozenset(declared))
