"""Noise models and candidate enumeration of cliques, bicliques and stars.

Indices are 0-based and intervals inclusive. Cliques are diagonal blocks
``[i, j] x [i, j]``; bicliques and stars live strictly above the diagonal
(``i <= i2 < j <= j2``), their mirror image being implicit.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .graph import AdjacencyMatrix

# slack for float thresholds such as sigma * width landing on an integer
EPS = 1e-9
STAR_MIN = 5


class PatternKind(str, Enum):
    CLIQUE = "clique"
    BICLIQUE = "biclique"
    STAR = "star"


class ModelKind(str, Enum):
    DENSITY = "density"
    MORANS = "morans"
    GLOBAL = "global"
    LOCAL = "local"


@dataclass(frozen=True)
class NoiseModel:
    """Noisy-pattern predicate.

    ``sigma`` is the single threshold of the density, Moran's I and globally
    reweighted models; the locally reweighted model uses both ``sigma``
    (per-pair structure) and ``tau`` (fraction of qualifying pairs).
    """

    kind: ModelKind = ModelKind.LOCAL
    sigma: float = 0.5
    tau: float = 0.85

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind(self.kind))
        if not 0 <= self.sigma <= 1:
            raise ValueError(f"sigma must lie in [0, 1], got {self.sigma}")
        if not 0 <= self.tau <= 1:
            raise ValueError(f"tau must lie in [0, 1], got {self.tau}")


Local = lambda sigma, tau: NoiseModel(ModelKind.LOCAL, sigma, tau)  # noqa: E731


@dataclass(frozen=True, order=True)
class Pattern:
    kind: PatternKind
    rows: tuple[int, int]
    cols: tuple[int, int]
    weight: int = field(default=0, compare=False)
    cells_total: int = field(default=0, compare=False)
    cells_black: int = field(default=0, compare=False)

    @property
    def key(self):
        return (self.kind.value, self.rows, self.cols)

    @property
    def row_range(self) -> range:
        return range(self.rows[0], self.rows[1] + 1)

    @property
    def col_range(self) -> range:
        return range(self.cols[0], self.cols[1] + 1)

    @property
    def vertices(self) -> list[int]:
        """Matrix positions touched by the pattern, in order."""
        if self.kind is PatternKind.CLIQUE:
            return list(self.row_range)
        return list(self.row_range) + list(self.col_range)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows[1] - self.rows[0] + 1, self.cols[1] - self.cols[0] + 1)

    def rects(self) -> list[tuple[int, int, int, int]]:
        """Covered cell rectangles (r0, r1, c0, c1), mirror included."""
        (i, i2), (j, j2) = self.rows, self.cols
        if self.kind is PatternKind.CLIQUE:
            return [(i, i2, j, j2)]
        return [(i, i2, j, j2), (j, j2, i, i2)]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "rows": list(self.rows),
            "cols": list(self.cols),
            "weight": self.weight,
            "cells_total": self.cells_total,
            "cells_black": self.cells_black,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Pattern":
        return cls(
            PatternKind(d["kind"]),
            tuple(d["rows"]),
            tuple(d["cols"]),
            int(d["weight"]),
            int(d["cells_total"]),
            int(d["cells_black"]),
        )


def check_shape(kind: PatternKind, rows, cols, n: int) -> None:
    (i, i2), (j, j2) = rows, cols
    if not (0 <= i <= i2 < n and 0 <= j <= j2 < n):
        raise ValueError(f"{kind.value} {rows}x{cols} out of bounds for n={n}")
    if kind is PatternKind.CLIQUE:
        if rows != cols or i2 - i + 1 < 3:
            raise ValueError(f"clique must be a diagonal block of size >= 3, got {rows}x{cols}")
        return
    if i2 >= j:
        raise ValueError(f"{kind.value} {rows}x{cols} is not strictly above the diagonal")
    h, w = i2 - i + 1, j2 - j + 1
    if kind is PatternKind.BICLIQUE and (h < 2 or w < 2):
        raise ValueError(f"biclique needs at least 2x2 cells, got {h}x{w}")
    if kind is PatternKind.STAR and not ((h == 1 and w >= STAR_MIN) or (w == 1 and h >= STAR_MIN)):
        raise ValueError(f"star needs a 1x{STAR_MIN}+ shape, got {h}x{w}")


class PrefixTables:
    """Cumulative counts for O(1) rectangle queries.

    ``vbb[a, b]`` counts vertical black-black pairs inside ``M[:a, :b]``,
    ``hbb`` the horizontal ones and ``cum`` the black cells; ``vww``/``hww``
    are the white-white analogues and ``sup[k]`` counts black cells on the
    first k super-diagonal positions ``(d, d+1)``.
    """

    def __init__(self, M):
        cells = M.cells if isinstance(M, AdjacencyMatrix) else np.asarray(M, dtype=np.int8)
        x = cells.astype(bool)
        n = x.shape[0]
        self.n = n
        self.cells = cells
        v = (x[:-1] & x[1:]).astype(np.int64)  # (n-1, n): pair (u, u+1) at column c
        h = (x[:, :-1] & x[:, 1:]).astype(np.int64)  # (n, n-1): pair (c, c+1) at row r
        vw = (~x[:-1] & ~x[1:]).astype(np.int64)
        hw = (~x[:, :-1] & ~x[:, 1:]).astype(np.int64)

        # row-wise prefix of vertical pairs, column-wise prefix of horizontal pairs
        self.rv = _pad_cumsum(v, axis=1)  # (n-1, n+1)
        self.ch = _pad_cumsum(h, axis=0)  # (n+1, n-1)

        self.vbb = _table_v(v, n)
        self.hbb = _table_h(h, n)
        self.vww = _table_v(vw, n)
        self.hww = _table_h(hw, n)
        self.cum = _table2(cells.astype(np.int64))
        sup = np.diagonal(cells, 1).astype(np.int64) if n > 1 else np.zeros(0, np.int64)
        self.sup = np.concatenate([[0], np.cumsum(sup)])

    # -- rectangle queries (inclusive bounds, arrays broadcast) --

    def black(self, r0, r1, c0, c1):
        t = self.cum
        return t[r1 + 1, c1 + 1] - t[r0, c1 + 1] - t[r1 + 1, c0] + t[r0, c0]

    def _vq(self, t, r0, r1, c0, c1):
        # pairs (u, u+1) with r0 <= u < r1
        return t[r1 + 1, c1 + 1] - t[r0 + 1, c1 + 1] - t[r1 + 1, c0] + t[r0 + 1, c0]

    def _hq(self, t, r0, r1, c0, c1):
        return t[r1 + 1, c1 + 1] - t[r0, c1 + 1] - t[r1 + 1, c0 + 1] + t[r0, c0 + 1]

    def vert_bb(self, r0, r1, c0, c1):
        return self._vq(self.vbb, r0, r1, c0, c1)

    def horiz_bb(self, r0, r1, c0, c1):
        return self._hq(self.hbb, r0, r1, c0, c1)

    def vert_ww(self, r0, r1, c0, c1):
        return self._vq(self.vww, r0, r1, c0, c1)

    def horiz_ww(self, r0, r1, c0, c1):
        return self._hq(self.hww, r0, r1, c0, c1)

    def super_black(self, i, j):
        """Black cells (d, d+1) for i <= d < j."""
        return self.sup[j] - self.sup[i]

    # -- pair queries --

    def vertical_bb(self, u: int, j: int, j2: int, exclude_diagonal: bool = False) -> int:
        """Columns c in [j, j2] with M[u, c] = M[u+1, c] = 1."""
        count = int(self.rv[u, j2 + 1] - self.rv[u, j])
        if exclude_diagonal:
            for c in (u, u + 1):
                if j <= c <= j2:
                    count -= int(self.cells[u, c] and self.cells[u + 1, c])
        return count

    def horizontal_bb(self, c: int, i: int, i2: int, exclude_diagonal: bool = False) -> int:
        """Rows r in [i, i2] with M[r, c] = M[r, c+1] = 1."""
        count = int(self.ch[i2 + 1, c] - self.ch[i, c])
        if exclude_diagonal:
            for r in (c, c + 1):
                if i <= r <= i2:
                    count -= int(self.cells[r, c] and self.cells[r, c + 1])
        return count


def _pad_cumsum(a: np.ndarray, axis: int) -> np.ndarray:
    pad = [(0, 0), (0, 0)]
    pad[axis] = (1, 0)
    return np.pad(np.cumsum(a, axis=axis), pad)


def _table2(a: np.ndarray) -> np.ndarray:
    return np.pad(a.cumsum(0).cumsum(1), ((1, 0), (1, 0)))


def _table_v(v: np.ndarray, n: int) -> np.ndarray:
    # vbb[a, b] = v[:a-1, :b].sum(); row a=0 and a=1 are zero
    t = np.zeros((n + 1, n + 1), dtype=np.int64)
    if n > 1:
        t[2:, 1:] = v.cumsum(0).cumsum(1)
    return t


def _table_h(h: np.ndarray, n: int) -> np.ndarray:
    t = np.zeros((n + 1, n + 1), dtype=np.int64)
    if n > 1:
        t[1:, 2:] = h.cumsum(0).cumsum(1)
    return t


def build_prefix(M) -> PrefixTables:
    return PrefixTables(M)


# ---------------------------------------------------------------------------
# pattern statistics and predicates


def _rect_stats(P: PrefixTables, i, i2, j, j2):
    r, c = i2 - i + 1, j2 - j + 1
    total = r * c
    black = P.black(i, i2, j, j2)
    bb = P.vert_bb(i, i2, j, j2) + P.horiz_bb(i, i2, j, j2)
    ww = P.vert_ww(i, i2, j, j2) + P.horiz_ww(i, i2, j, j2)
    pairs = (r - 1) * c + r * (c - 1)
    return total, black, bb, ww, pairs


def _clique_stats(P: PrefixTables, i, j):
    # diagonal cells are dropped together with every pair touching them;
    # each super-diagonal cell touches two diagonal cells, as does its mirror
    k = j - i + 1
    total = k * k - k
    black = P.black(i, j, i, j)
    bb = P.vert_bb(i, j, i, j) + P.horiz_bb(i, j, i, j)
    white_super = (j - i) - P.super_black(i, j)
    ww = P.vert_ww(i, j, i, j) + P.horiz_ww(i, j, i, j) - 4 * white_super
    pairs = 2 * (k - 1) * (k - 2)
    return total, black, bb, ww, pairs


def stats(P: PrefixTables, kind: PatternKind, rows, cols):
    """(cells_total, cells_black, bb_pairs, ww_pairs, all_pairs) of a pattern shape."""
    if kind is PatternKind.CLIQUE:
        return _clique_stats(P, rows[0], rows[1])
    return _rect_stats(P, rows[0], rows[1], cols[0], cols[1])


def _score_test(model: NoiseModel, total, black, bb, ww, pairs):
    """Vectorized verdict for the density / Moran's / global models."""
    total = np.asarray(total, dtype=np.float64)
    black = np.asarray(black, dtype=np.float64)
    bb = np.asarray(bb, dtype=np.float64)
    ww = np.asarray(ww, dtype=np.float64)
    pairs = np.asarray(pairs, dtype=np.float64)
    s = model.sigma
    with np.errstate(divide="ignore", invalid="ignore"):
        if model.kind is ModelKind.DENSITY:
            ok = black / total >= s - EPS
        elif model.kind is ModelKind.GLOBAL:
            ok = (pairs > 0) & (bb / np.where(pairs > 0, pairs, 1) >= s - EPS)
        elif model.kind is ModelKind.MORANS:
            white = total - black
            mi = (
                total * bb / (pairs * np.where(black > 0, black, 1))
                + total * ww / (pairs * np.where(white > 0, white, 1))
                - 1
            )
            # a constant submatrix is perfectly autocorrelated
            mi = np.where((white == 0) | (black == 0), 1.0, mi)
            ok = (pairs > 0) & (mi >= s - EPS)
        else:
            raise ValueError(f"{model.kind} is not a score model")
    return ok & (black >= 1)


def _score_scalar(model: NoiseModel, total, black, bb, ww, pairs) -> bool:
    """Scalar twin of _score_test for single shapes."""
    if black < 1:
        return False
    s = model.sigma
    if model.kind is ModelKind.DENSITY:
        return black / total >= s - EPS
    if pairs <= 0:
        return False
    if model.kind is ModelKind.GLOBAL:
        return bb / pairs >= s - EPS
    if model.kind is ModelKind.MORANS:
        white = total - black
        mi = 1.0 if white == 0 else total * bb / (pairs * black) + total * ww / (pairs * white) - 1
        return mi >= s - EPS
    raise ValueError(f"{model.kind} is not a score model")


def _local_rect(P: PrefixTables, i, i2, j, j2, sigma, tau) -> bool:
    if i2 > i:
        q = P.rv[i:i2, j2 + 1] - P.rv[i:i2, j]
        if np.count_nonzero(q > sigma * (j2 - j + 1) + EPS) < tau * (i2 - i) - EPS:
            return False
    if j2 > j:
        q = P.ch[i2 + 1, j:j2] - P.ch[i, j:j2]
        if np.count_nonzero(q > sigma * (i2 - i + 1) + EPS) < tau * (j2 - j) - EPS:
            return False
    return True


def test_pattern(P: PrefixTables, kind: PatternKind, rows, cols, model: NoiseModel) -> bool:
    """Does the submatrix of the given shape pass the noise model?

    All-white shapes are rejected under every model.
    """
    kind = PatternKind(kind)
    check_shape(kind, rows, cols, P.n)
    return _test(P, kind, rows, cols, model)


test_pattern.__test__ = False  # keep pytest from collecting the name


def _test(P: PrefixTables, kind: PatternKind, rows, cols, model: NoiseModel) -> bool:
    (i, i2), (j, j2) = rows, cols
    if model.kind is ModelKind.LOCAL:
        if P.black(i, i2, j, j2) < 1:
            return False
        if kind is PatternKind.CLIQUE:
            # symmetric block: the row test covers the column test
            return _local_rect(P, i, i2, i, i2, model.sigma, model.tau) if i2 > i else True
        return _local_rect(P, i, i2, j, j2, model.sigma, model.tau)
    return _score_scalar(model, *(int(x) for x in stats(P, kind, rows, cols)))


def make_pattern(P: PrefixTables, kind: PatternKind, rows, cols) -> Pattern:
    kind = PatternKind(kind)
    total, black, bb, _, _ = stats(P, kind, rows, cols)
    return Pattern(kind, tuple(rows), tuple(cols), int(bb), int(total), int(black))


# ---------------------------------------------------------------------------
# enumeration


def _clique_mask(P: PrefixTables, i: int, model: NoiseModel) -> np.ndarray:
    """Verdicts for intervals [i, j], j = i+2 .. n-1."""
    n = P.n
    js = np.arange(i + 2, n)
    if js.size == 0:
        return np.zeros(0, dtype=bool)
    black = P.black(i, js, i, js)
    if model.kind is not ModelKind.LOCAL:
        return _score_test(model, *_clique_stats(P, i, js)) & (black >= 1)
    # q[u - i, j - i] = vertical black-black pairs of rows (u, u+1) over columns i..j
    q = P.rv[i : n - 1, i + 1 : n + 1] - P.rv[i : n - 1, i][:, None]
    widths = np.arange(1, n - i + 1)
    good = q > model.sigma * widths[None, :] + EPS
    # only rows u < j take part in interval [i, j]
    good &= _below(n - 1 - i, n - i)
    counts = good.cumsum(axis=0)  # counts[k, j-i] = pairs u in [i, i+k] passing
    sel = js - i  # column index
    cnt = counts[sel - 1, sel]
    return (cnt >= model.tau * (js - i) - EPS) & (black >= 1)


def _below(rows: int, cols: int) -> np.ndarray:
    # mask[u, c] is True when u < c
    return np.arange(rows)[:, None] < np.arange(cols)[None, :]


def enumerate_cliques(P: PrefixTables, model: NoiseModel) -> list[Pattern]:
    out = []
    for i in range(P.n - 2):
        for off in np.flatnonzero(_clique_mask(P, i, model)):
            j = i + 2 + int(off)
            out.append(make_pattern(P, PatternKind.CLIQUE, (i, j), (i, j)))
    return out


def grow_biclique(P: PrefixTables, i: int, j: int, model: NoiseModel, prefer: str = "rows") -> Pattern | None:
    """Greedy extension of the 2x2 seed at (i, j).

    Each step adds a row and a column together when that stays a noisy
    biclique, otherwise a single row or column (``prefer`` decides which is
    tried first). Rows never reach column j, so the result stays above the
    diagonal.
    """
    n = P.n
    if not (i + 1 < j and j + 1 < n):
        return None
    B = PatternKind.BICLIQUE
    if not _test(P, B, (i, i + 1), (j, j + 1), model):
        return None
    i2, j2 = i + 1, j + 1
    while True:
        can_r = i2 + 1 < j
        can_c = j2 + 1 < n
        if can_r and can_c and _test(P, B, (i, i2 + 1), (j, j2 + 1), model):
            i2, j2 = i2 + 1, j2 + 1
            continue
        steps = [("r", can_r), ("c", can_c)]
        if prefer != "rows":
            steps.reverse()
        for axis, allowed in steps:
            if not allowed:
                continue
            rows = (i, i2 + 1) if axis == "r" else (i, i2)
            cols = (j, j2 + 1) if axis == "c" else (j, j2)
            if _test(P, B, rows, cols, model):
                i2, j2 = rows[1], cols[1]
                break
        else:
            return make_pattern(P, B, (i, i2), (j, j2))


def grow_star(P: PrefixTables, i: int, j: int, orientation: str, model: NoiseModel) -> Pattern | None:
    """Grow a row star ``M[i, j:j2]`` or a column star ``M[i:i2, j]`` from a 5-cell seed."""
    n = P.n
    S = PatternKind.STAR
    L = STAR_MIN - 1
    if orientation == "row":
        if not (i < j and j + L < n):
            return None
        if not _test(P, S, (i, i), (j, j + L), model):
            return None
        j2 = j + L
        while j2 + 1 < n and _test(P, S, (i, i), (j, j2 + 1), model):
            j2 += 1
        return make_pattern(P, S, (i, i), (j, j2))
    if orientation == "col":
        if not (i + L < j):
            return None
        if not _test(P, S, (i, i + L), (j, j), model):
            return None
        i2 = i + L
        while i2 + 1 < j and _test(P, S, (i, i2 + 1), (j, j), model):
            i2 += 1
        return make_pattern(P, S, (i, i2), (j, j))
    raise ValueError(f"orientation must be 'row' or 'col', got {orientation!r}")


@dataclass
class CandidateSet:
    cliques: list[Pattern]
    bicliques: list[Pattern]
    stars: list[Pattern]
    seeds: int = 0

    def all(self) -> list[Pattern]:
        return self.cliques + self.bicliques + self.stars

    def __len__(self):
        return len(self.cliques) + len(self.bicliques) + len(self.stars)

    def to_dict(self) -> dict:
        return {
            "cliques": [p.to_dict() for p in self.cliques],
            "bicliques": [p.to_dict() for p in self.bicliques],
            "stars": [p.to_dict() for p in self.stars],
        }


def _window_sums(cells: np.ndarray, h: int, w: int) -> np.ndarray:
    """s[i, j] = cells[i:i+h, j:j+w].sum() for every full window."""
    t = _table2(cells.astype(np.int64))
    return t[h:, w:] - t[:-h, w:] - t[h:, :-w] + t[:-h, :-w]


def enumerate_all(M, model: NoiseModel, prefer: str = "rows", tables: PrefixTables | None = None) -> CandidateSet:
    P = tables or PrefixTables(M)
    n = P.n
    cliques = enumerate_cliques(P, model)
    bicliques: dict = {}
    stars: dict = {}
    seeds = 0
    if n >= 2:
        # every pattern needs a black cell, so seeds without one are skipped up front
        b2 = _window_sums(P.cells, 2, 2) if n >= 2 else None
        r5 = _window_sums(P.cells, 1, STAR_MIN) if n >= STAR_MIN else None
        c5 = _window_sums(P.cells, STAR_MIN, 1) if n >= STAR_MIN else None
        for i in range(n - 1):
            for j in range(i + 1, n):
                seeds += 1
                if i + 1 < j and j + 1 < n and b2[i, j] > 0:
                    p = grow_biclique(P, i, j, model, prefer)
                    if p is not None:
                        bicliques.setdefault(p.key, p)
                if r5 is not None and j + STAR_MIN - 1 < n and r5[i, j] > 0:
                    p = grow_star(P, i, j, "row", model)
                    if p is not None:
                        stars.setdefault(p.key, p)
                if c5 is not None and i + STAR_MIN - 1 < j and c5[i, j] > 0:
                    p = grow_star(P, i, j, "col", model)
                    if p is not None:
                        stars.setdefault(p.key, p)
    return CandidateSet(sorted(cliques), sorted(bicliques.values()), sorted(stars.values()), seeds)
