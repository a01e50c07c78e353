"""Symmetric TSP tour solvers: Held-Karp (exact) and NN + 2-opt/Or-opt."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_EXACT_CAP = 16
_EPS = 1e-12


class CapacityError(ValueError):
    """Instance too large for the exact solver."""


@dataclass(frozen=True, eq=False)
class TspInstance:
    dist: np.ndarray
    shift: float = 0.0

    def __post_init__(self):
        d = np.array(self.dist, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError("distance matrix must be square")
        if not np.allclose(d, d.T, rtol=0, atol=1e-12):
            raise ValueError("distance matrix must be symmetric")
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)

    @property
    def size(self) -> int:
        return self.dist.shape[0]


@dataclass(frozen=True)
class Tour:
    sequence: tuple[int, ...]
    length: float


def tour_length(dist: np.ndarray, seq) -> float:
    seq = list(seq)
    return float(sum(dist[a, b] for a, b in zip(seq, seq[1:] + seq[:1])))


def solve_exact(t: TspInstance, cap: int = DEFAULT_EXACT_CAP) -> Tour:
    """Optimal tour by the Held-Karp subset DP, anchored at the last vertex."""
    n = t.size
    if n > cap:
        raise CapacityError(f"instance has {n} vertices; exact solver cap is {cap} (use the heuristic)")
    d = t.dist
    if n <= 3:
        seq = tuple([n - 1] + list(range(n - 1)))
        return Tour(seq, tour_length(d, seq))

    start = n - 1
    k = n - 1
    full = (1 << k) - 1
    inner = d[:k, :k]
    dp = np.full((1 << k, k), np.inf)
    parent = np.full((1 << k, k), -1, dtype=np.int64)
    for j in range(k):
        dp[1 << j, j] = d[start, j]
    bits = np.array([1 << j for j in range(k)], dtype=np.int64)
    for mask in range(1, full):
        row = dp[mask]
        inside = (mask & bits) != 0
        cand = np.where(inside[:, None], row[:, None] + inner, np.inf)
        best_from = cand.argmin(axis=0)  # lowest index among ties
        best = cand[best_from, np.arange(k)]
        js = np.flatnonzero(~inside)
        nms = mask | bits[js]
        better = best[js] < dp[nms, js]
        js, nms = js[better], nms[better]
        dp[nms, js] = best[js]
        parent[nms, js] = best_from[js]
    closing = dp[full] + d[:k, start]
    last = int(closing.argmin())
    path = []
    mask, j = full, last
    while j != -1:
        path.append(j)
        pj = int(parent[mask, j])
        mask ^= 1 << j
        j = pj
    seq = tuple([start] + path[::-1])
    return Tour(seq, tour_length(d, seq))


def nearest_neighbor(d: np.ndarray, start: int) -> list[int]:
    n = d.shape[0]
    seen = np.zeros(n, dtype=bool)
    seen[start] = True
    tour = [start]
    cur = start
    for _ in range(n - 1):
        row = np.where(seen, np.inf, d[cur])
        cur = int(row.argmin())
        seen[cur] = True
        tour.append(cur)
    return tour


def two_opt(d: np.ndarray, tour: list[int]) -> tuple[list[int], bool]:
    """Apply improving 2-opt moves until none is left."""
    t = np.array(tour, dtype=np.intp)
    n = len(t)
    changed = False
    improved = True
    while improved:
        improved = False
        for i in range(n - 2):
            a, b = t[i], t[i + 1]
            js = np.arange(i + 2, n if i > 0 else n - 1)
            if js.size == 0:
                continue
            c = t[js]
            e = t[(js + 1) % n]
            delta = d[a, c] + d[b, e] - d[a, b] - d[c, e]
            j = int(delta.argmin())
            if delta[j] < -_EPS:
                jj = js[j]
                t[i + 1 : jj + 1] = t[i + 1 : jj + 1][::-1].copy()
                improved = changed = True
    return t.tolist(), changed


def or_opt(d: np.ndarray, tour: list[int], max_segment: int = 3) -> tuple[list[int], bool]:
    """Relocate segments of 1..max_segment vertices (optionally reversed)."""
    t = list(tour)
    n = len(t)
    changed = False
    improved = True
    while improved:
        improved = False
        for length in range(1, max_segment + 1):
            if n < length + 3:
                break
            s = 1
            while s + length <= n:
                seg = t[s : s + length]
                prev, nxt = t[s - 1], t[(s + length) % n]
                first, last = seg[0], seg[-1]
                removal = d[prev, first] + d[last, nxt] - d[prev, nxt]
                rest = np.array(t[:s] + t[s + length :], dtype=np.intp)
                a = rest
                b = np.roll(rest, -1)
                base = d[a, b]
                fwd = d[a, first] + d[last, b] - base
                rev = d[a, last] + d[first, b] - base
                # forbid reinserting at the original gap
                gap = s - 1
                fwd[gap] = np.inf
                rev[gap] = np.inf
                kf, kr = int(fwd.argmin()), int(rev.argmin())
                if fwd[kf] <= rev[kr]:
                    k, cost, use = kf, fwd[kf], seg
                else:
                    k, cost, use = kr, rev[kr], seg[::-1]
                if cost - removal < -_EPS:
                    r = rest.tolist()
                    t = r[: k + 1] + list(use) + r[k + 1 :]
                    improved = changed = True
                s += 1
    return t, changed


def local_search(d: np.ndarray, tour: list[int], max_passes: int) -> list[int]:
    t = list(tour)
    for _ in range(max_passes):
        t, a = two_opt(d, t)
        t, b = or_opt(d, t)
        if not (a or b):
            break
    return t


def _canonical(seq: list[int], anchor: int) -> tuple[int, ...]:
    k = seq.index(anchor)
    return tuple(seq[k:] + seq[:k])


def solve_heuristic(
    t: TspInstance,
    seed: int = 42,
    initial: list[int] | None = None,
    restarts: int = 2,
) -> Tour:
    """Nearest-neighbour tour from the last vertex, improved by 2-opt and Or-opt.

    ``initial`` (a full tour) and ``restarts`` random tours drawn from
    ``seed`` are improved the same way; the shortest result wins, ties going
    to the earliest candidate. The nearest-neighbour candidate comes first, so
    the result is never longer than that construction.
    """
    n = t.size
    d = t.dist
    anchor = n - 1
    if n <= 3:
        seq = tuple([anchor] + list(range(n - 1)))
        return Tour(seq, tour_length(d, seq))
    budget = 50 * n
    starts = [nearest_neighbor(d, anchor)]
    if initial is not None:
        if sorted(initial) != list(range(n)):
            raise ValueError("initial tour must visit every vertex once")
        starts.append(list(initial))
    rng = np.random.default_rng(seed)
    for _ in range(restarts):
        starts.append([int(x) for x in rng.permutation(n)])
    best: Tour | None = None
    for s in starts:
        seq = _canonical(local_search(d, s, budget), anchor)
        length = tour_length(d, seq)
        if best is None or length < best.length - _EPS:
            best = Tour(seq, length)
    return best
