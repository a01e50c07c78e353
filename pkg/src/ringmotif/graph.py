"""Graphs, vertex orderings and adjacency matrices."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    """Raised for malformed or invalid graph input."""


class ParseError(GraphError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class ValidationError(GraphError):
    pass


@dataclass(frozen=True)
class Graph:
    n: int
    labels: tuple[str, ...]
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if len(self.labels) != self.n:
            raise ValidationError(f"expected {self.n} labels, got {len(self.labels)}")
        for u, v in self.edges:
            if u == v:
                raise ValidationError(f"self-loop on vertex {self.labels[u]!r}")
            if not (0 <= u < v < self.n):
                raise ValidationError(f"edge ({u}, {v}) is not a normalized pair of vertex indices")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels: Sequence[str] | None = None) -> "Graph":
        """Build a graph from arbitrary (u, v) pairs; duplicates and orientation are normalized."""
        normalized = set()
        for u, v in edges:
            if u == v:
                raise ValidationError(f"self-loop on vertex {u}")
            normalized.add((min(u, v), max(u, v)))
        if labels is None:
            labels = [str(i) for i in range(n)]
        return cls(n, tuple(labels), frozenset(normalized))

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def to_edge_list(self) -> str:
        lines = [f"{self.labels[u]} {self.labels[v]}" for u, v in sorted(self.edges)]
        return "\n".join(lines) + ("\n" if lines else "")


@dataclass(frozen=True)
class Ordering:
    """Maps matrix position -> vertex index."""

    perm: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValidationError(f"not a permutation: {self.perm}")

    @classmethod
    def identity(cls, n: int) -> "Ordering":
        return cls(tuple(range(n)))

    def __len__(self):
        return len(self.perm)

    def __getitem__(self, position: int) -> int:
        return self.perm[position]

    def compose(self, inner: "Ordering") -> "Ordering":
        """Ordering that first applies `inner` to positions of this one.

        If this ordering produced matrix M and `inner` reorders M's rows, the
        result maps the new positions directly to original vertices.
        """
        return Ordering(tuple(self.perm[p] for p in inner.perm))


@dataclass(frozen=True, eq=False)
class AdjacencyMatrix:
    cells: np.ndarray
    ordering: Ordering
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        cells = np.array(self.cells, dtype=np.int8)
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(v) for v in self.ordering.perm))
        _validate_cells(cells)
        if len(self.ordering) != cells.shape[0]:
            raise ValidationError("ordering length does not match matrix dimension")

    @property
    def n(self) -> int:
        return self.cells.shape[0]

    @property
    def m(self) -> int:
        """Number of black cells (twice the edge count)."""
        return int(self.cells.sum())

    def __eq__(self, other):
        if not isinstance(other, AdjacencyMatrix):
            return NotImplemented
        return (
            np.array_equal(self.cells, other.cells)
            and self.ordering == other.ordering
            and self.labels == other.labels
        )

    def __hash__(self):
        return hash((self.cells.tobytes(), self.ordering, self.labels))

    def to_text(self) -> str:
        return "".join("".join(str(int(x)) for x in row) + "\n" for row in self.cells)

    def permuted(self, inner: Ordering) -> "AdjacencyMatrix":
        """Reorder rows and columns by `inner` (positions of this matrix)."""
        idx = np.asarray(inner.perm, dtype=np.intp)
        return AdjacencyMatrix(
            self.cells[np.ix_(idx, idx)],
            self.ordering.compose(inner),
            tuple(self.labels[p] for p in inner.perm),
        )

    def to_graph(self) -> Graph:
        """Graph on the original vertex indices."""
        rows, cols = np.nonzero(np.triu(self.cells, 1))
        n = self.n
        labels = [""] * n
        for pos, v in enumerate(self.ordering.perm):
            labels[v] = self.labels[pos]
        return Graph.from_edges(n, ((self.ordering[r], self.ordering[c]) for r, c in zip(rows, cols)), labels)


def _validate_cells(cells: np.ndarray) -> None:
    if cells.ndim != 2 or cells.shape[0] != cells.shape[1]:
        raise ValidationError(f"matrix is not square: shape {cells.shape}")
    if cells.size and (cells.min() < 0 or cells.max() > 1):
        raise ValidationError("matrix cells must be 0 or 1")
    diag = np.flatnonzero(np.diagonal(cells))
    if diag.size:
        i = int(diag[0])
        raise ValidationError(f"nonzero diagonal at cell ({i}, {i})")
    asym = np.argwhere(cells != cells.T)
    if asym.size:
        i, j = (int(x) for x in asym[0])
        raise ValidationError(f"asymmetric at cell ({i}, {j}): {cells[i, j]} vs ({j}, {i}): {cells[j, i]}")


def load_edge_list(text: str) -> Graph:
    """Parse a whitespace-separated edge list.

    Labels are interned to vertex indices in first-seen order. Blank lines and
    lines starting with ``#`` are ignored.
    """
    index: dict[str, int] = {}
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(lineno, f"expected two tokens, got {len(tokens)}: {raw!r}")
        a, b = tokens
        if a == b:
            raise ValidationError(f"line {lineno}: self-loop on vertex {a!r}")
        u = index.setdefault(a, len(index))
        v = index.setdefault(b, len(index))
        edges.add((min(u, v), max(u, v)))
    return Graph(len(index), tuple(index), frozenset(edges))


def load_matrix(text: str) -> AdjacencyMatrix:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = "".join(raw.split())
        if not line:
            continue
        bad = set(line) - {"0", "1"}
        if bad:
            raise ParseError(lineno, f"unexpected characters {sorted(bad)}")
        rows.append([int(c) for c in line])
    n = len(rows)
    for r, row in enumerate(rows):
        if len(row) != n:
            raise ValidationError(f"matrix is not square: row {r} has {len(row)} cells, expected {n}")
    cells = np.array(rows, dtype=np.int8).reshape(n, n)
    return AdjacencyMatrix(cells, Ordering.identity(n))


def materialize(g: Graph, o: Ordering | None = None) -> AdjacencyMatrix:
    if o is None:
        o = Ordering.identity(g.n)
    if len(o) != g.n:
        raise ValidationError(f"ordering has {len(o)} entries for a graph on {g.n} vertices")
    pos = np.empty(g.n, dtype=np.intp)
    pos[list(o.perm)] = np.arange(g.n)
    cells = np.zeros((g.n, g.n), dtype=np.int8)
    if g.edges:
        e = np.array(sorted(g.edges), dtype=np.intp)
        a, b = pos[e[:, 0]], pos[e[:, 1]]
        cells[a, b] = 1
        cells[b, a] = 1
    return AdjacencyMatrix(cells, o, tuple(g.labels[v] for v in o.perm))
