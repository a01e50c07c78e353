"""Selection of a maximal set of pairwise disjoint, heavy patterns."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import AdjacencyMatrix, Ordering
from .palette import pattern_color
from .patterns import (
    CandidateSet,
    NoiseModel,
    Pattern,
    PatternKind,
    PrefixTables,
    enumerate_all,
)


@dataclass(frozen=True)
class FilterRule:
    """Optional pruning of small bicliques/stars during greedy selection."""

    mode: str = "none"  # none | abs | rel
    value: float = 0.0

    def __post_init__(self):
        if self.mode not in ("none", "abs", "rel"):
            raise ValueError(f"unknown filter mode {self.mode!r}")
        if self.mode == "abs" and self.value < 0:
            raise ValueError("absolute filter needs min_weight >= 0")
        if self.mode == "rel" and not 0 < self.value < 1:
            raise ValueError("relative filter needs a fraction in (0, 1)")

    @classmethod
    def parse(cls, text: str | None) -> "FilterRule":
        if not text or text == "none":
            return cls()
        mode, _, value = text.partition(":")
        if mode not in ("abs", "rel") or not value:
            raise ValueError(f"filter must be none, abs:N or rel:F, got {text!r}")
        return cls(mode, float(value))

    def admits(self, weight: int, current_max: int) -> bool:
        if self.mode == "abs":
            return weight >= self.value
        if self.mode == "rel":
            return weight >= self.value * current_max
        return True

    def __str__(self):
        return "none" if self.mode == "none" else f"{self.mode}:{self.value:g}"


@dataclass(frozen=True)
class PrecisionCounts:
    white_out: int
    white_in: int
    black_in: int
    black_out: int

    @property
    def total(self) -> int:
        return self.white_out + self.white_in + self.black_in + self.black_out

    def to_dict(self) -> dict:
        return {
            "white_out": self.white_out,
            "white_in": self.white_in,
            "black_in": self.black_in,
            "black_out": self.black_out,
        }


def select_cliques(cliques: list[Pattern]) -> list[Pattern]:
    """Maximum-weight set of non-overlapping clique intervals.

    Right-to-left DP over interval starts. On equal totals it prefers taking
    an interval that starts earlier, then the shorter one, which yields the
    lexicographically smallest optimal set.
    """
    if not cliques:
        return []
    by_start: dict[int, list[Pattern]] = {}
    for p in cliques:
        by_start.setdefault(p.rows[0], []).append(p)
    for ps in by_start.values():
        ps.sort(key=lambda p: p.rows[1])
    last = max(p.rows[1] for p in cliques)
    score = [0] * (last + 2)
    choice: list[Pattern | None] = [None] * (last + 2)
    for x in range(last, -1, -1):
        skip = score[x + 1]
        take, pick = -1, None
        for p in by_start.get(x, ()):
            w = p.weight + score[p.rows[1] + 1]
            if w > take:
                take, pick = w, p
        if pick is not None and take >= skip:
            score[x], choice[x] = take, pick
        else:
            score[x] = skip
    out = []
    x = 0
    while x <= last:
        p = choice[x]
        if p is None:
            x += 1
        else:
            out.append(p)
            x = p.rows[1] + 1
    return out


def _overlap(a, b) -> bool:
    return a[0] <= b[1] and b[0] <= a[1] and a[2] <= b[3] and b[2] <= a[3]


def disjoint(p: Pattern, q: Pattern) -> bool:
    return not any(_overlap(a, b) for a in p.rects() for b in q.rects())


def rect_order(p: Pattern):
    return (-p.weight, p.rows[0], p.cols[0], p.rows[1], p.cols[1], p.kind.value)


def select_rect(candidates: list[Pattern], selected: list[Pattern], rule: FilterRule = FilterRule()) -> list[Pattern]:
    chosen = list(selected)
    current_max = max((p.weight for p in chosen), default=0)
    n = 1 + max((max(p.rows[1], p.cols[1]) for p in chosen + list(candidates)), default=-1)
    occupied = coverage(n, chosen)
    for p in sorted(candidates, key=rect_order):
        if not rule.admits(p.weight, current_max):
            continue
        rects = p.rects()
        if any(occupied[r0 : r1 + 1, c0 : c1 + 1].any() for r0, r1, c0, c1 in rects):
            continue
        for r0, r1, c0, c1 in rects:
            occupied[r0 : r1 + 1, c0 : c1 + 1] = True
        chosen.append(p)
        current_max = max(current_max, p.weight)
    return chosen


def coverage(n: int, patterns: list[Pattern]) -> np.ndarray:
    mask = np.zeros((n, n), dtype=bool)
    for p in patterns:
        for r0, r1, c0, c1 in p.rects():
            mask[r0 : r1 + 1, c0 : c1 + 1] = True
    return mask


def precision(M, patterns: list[Pattern]) -> PrecisionCounts:
    cells = M.cells if isinstance(M, AdjacencyMatrix) else np.asarray(M)
    n = cells.shape[0]
    black = cells.astype(bool)
    covered = coverage(n, patterns)
    off = ~np.eye(n, dtype=bool)
    return PrecisionCounts(
        white_out=int((~black & ~covered & off).sum()),
        white_in=int((~black & covered & off).sum()),
        black_in=int((black & covered & off).sum()),
        black_out=int((black & ~covered & off).sum()),
    )


@dataclass
class Decomposition:
    n: int
    patterns: list[Pattern]
    precision: PrecisionCounts
    ordering: Ordering | None = None
    labels: tuple[str, ...] = ()
    candidates: CandidateSet | None = field(default=None, repr=False)

    @property
    def total_weight(self) -> int:
        return sum(p.weight for p in self.patterns)

    @property
    def colors(self) -> list[str]:
        return [pattern_color(k) for k in range(len(self.patterns))]

    def to_dict(self) -> dict:
        return {
            "matrix_n": self.n,
            "ordering": list(self.ordering.perm) if self.ordering is not None else list(range(self.n)),
            "labels": list(self.labels),
            "total_weight": self.total_weight,
            "patterns": [dict(p.to_dict(), color=c) for p, c in zip(self.patterns, self.colors)],
            "precision": self.precision.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Decomposition":
        return cls(
            n=int(d["matrix_n"]),
            patterns=[Pattern.from_dict(p) for p in d["patterns"]],
            precision=PrecisionCounts(**d["precision"]),
            ordering=Ordering(tuple(d["ordering"])),
            labels=tuple(d.get("labels", ())),
        )


def check_decomposition(d: Decomposition, M, rule: FilterRule = FilterRule()) -> None:
    """Raise AssertionError unless patterns are disjoint, maximal and the counts add up."""
    ps = d.patterns
    for a in range(len(ps)):
        for b in range(a + 1, len(ps)):
            if not disjoint(ps[a], ps[b]):
                raise AssertionError(f"overlapping patterns {ps[a].key} and {ps[b].key}")
    if d.candidates is not None:
        top = max((p.weight for p in ps), default=0)
        chosen = {p.key for p in ps}
        occupied = coverage(d.n, ps)
        for p in d.candidates.all():
            if p.key in chosen:
                continue
            if p.kind is not PatternKind.CLIQUE and not rule.admits(p.weight, top):
                continue
            if not any(occupied[r0 : r1 + 1, c0 : c1 + 1].any() for r0, r1, c0, c1 in p.rects()):
                raise AssertionError(f"decomposition is not maximal: {p.key} fits")
    n = d.n
    cells = M.cells if isinstance(M, AdjacencyMatrix) else np.asarray(M)
    pc = d.precision
    if pc.total != n * n - n:
        raise AssertionError(f"precision counts sum to {pc.total}, expected {n * n - n}")
    if pc.black_in + pc.black_out != int(cells.sum()):
        raise AssertionError("black cell counts do not match the matrix")


def decompose(
    M: AdjacencyMatrix,
    model: NoiseModel,
    rule: FilterRule = FilterRule(),
    prefer: str = "rows",
    tables: PrefixTables | None = None,
) -> Decomposition:
    cands = enumerate_all(M, model, prefer=prefer, tables=tables)
    chosen = select_cliques(cands.cliques)
    chosen = select_rect(cands.bicliques + cands.stars, chosen, rule)
    labels = M.labels if isinstance(M, AdjacencyMatrix) else ()
    ordering = M.ordering if isinstance(M, AdjacencyMatrix) else None
    n = M.n if isinstance(M, AdjacencyMatrix) else np.asarray(M).shape[0]
    d = Decomposition(n, chosen, precision(M, chosen), ordering, tuple(labels), cands)
    check_decomposition(d, M, rule)
    return d
