"""Slow, independent reference implementations used only by the tests.

Nothing here imports from ringmotif beyond plain data types, so each oracle
checks the package against a separate derivation.
"""
from __future__ import annotations

import itertools

import numpy as np


def rook_weights(mask: np.ndarray) -> np.ndarray:
    """Explicit symmetric 0/1 weight matrix over the cells where mask is True."""
    cells = [tuple(c) for c in np.argwhere(mask)]
    index = {c: k for k, c in enumerate(cells)}
    W = np.zeros((len(cells), len(cells)))
    for (r, c), k in index.items():
        for nb in ((r + 1, c), (r - 1, c), (r, c + 1), (r, c - 1)):
            if nb in index:
                W[k, index[nb]] = 1.0
    return W


def general_morans_i(values: np.ndarray, mask: np.ndarray | None = None) -> float:
    """(N / S0) * sum_ij w_ij z_i z_j / sum_i z_i^2 with rook weights."""
    values = np.asarray(values, dtype=float)
    if mask is None:
        mask = np.ones(values.shape, dtype=bool)
    x = values[mask]
    W = rook_weights(mask)
    z = x - x.mean()
    N = x.size
    S0 = W.sum()
    return float((N / S0) * (z @ W @ z) / (z @ z))


def bw_counts(cells: np.ndarray) -> tuple[int, int]:
    """Unordered black-black and white-white rook pairs, by plain loops."""
    n_r, n_c = cells.shape
    B = W = 0
    for r in range(n_r):
        for c in range(n_c):
            for rr, cc in ((r + 1, c), (r, c + 1)):
                if rr < n_r and cc < n_c:
                    a, b = cells[r, c], cells[rr, cc]
                    B += a == 1 and b == 1
                    W += a == 0 and b == 0
    return B, W


def brute_force_best_morans(cells: np.ndarray) -> float:
    """Max over all n! symmetric orderings, vectorised over permutations."""
    n = cells.shape[0]
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
    X = cells[perms[:, :, None], perms[:, None, :]].astype(bool)
    B = (X[:, 1:, :] & X[:, :-1, :]).sum(axis=(1, 2)) + (X[:, :, 1:] & X[:, :, :-1]).sum(axis=(1, 2))
    Wh = (~X[:, 1:, :] & ~X[:, :-1, :]).sum(axis=(1, 2)) + (~X[:, :, 1:] & ~X[:, :, :-1]).sum(axis=(1, 2))
    N = n * n
    m = int(cells.sum())
    A = 2 * n * (n - 1)
    scores = N * B / (A * m) + N * Wh / (A * (N - m)) - 1
    return float(scores.max())


def brute_force_tour(dist: np.ndarray) -> float:
    n = dist.shape[0]
    if n <= 3:
        return float(sum(dist[i, (i + 1) % n] for i in range(n)))
    best = np.inf
    for rest in itertools.permutations(range(1, n)):
        if rest[0] > rest[-1]:
            continue  # each cycle once per direction
        seq = (0,) + rest
        best = min(best, sum(dist[seq[k], seq[(k + 1) % n]] for k in range(n)))
    return float(best)


def naive_vertical_bb(cells, r0, r1, c0, c1) -> int:
    return sum(
        int(cells[u, c] == 1 and cells[u + 1, c] == 1) for u in range(r0, r1) for c in range(c0, c1 + 1)
    )


def naive_horizontal_bb(cells, r0, r1, c0, c1) -> int:
    return sum(
        int(cells[r, c] == 1 and cells[r, c + 1] == 1) for r in range(r0, r1 + 1) for c in range(c0, c1)
    )


def naive_local(cells, rows, cols, sigma, tau, clique=False) -> bool:
    """Locally reweighted test from the definition, by loops."""
    (i, i2), (j, j2) = rows, cols
    sub = cells[i : i2 + 1, j : j2 + 1]
    if sub.sum() == 0:
        return False
    h, w = sub.shape
    if h > 1:
        good = 0
        for u in range(h - 1):
            b = 0
            for c in range(w):
                if clique and c in (u, u + 1):
                    continue
                b += sub[u, c] == 1 and sub[u + 1, c] == 1
            good += b > sigma * w + 1e-9
        if good < tau * (h - 1) - 1e-9:
            return False
    if w > 1 and not clique:
        good = 0
        for c in range(w - 1):
            b = sum(int(sub[r, c] == 1 and sub[r, c + 1] == 1) for r in range(h))
            good += b > sigma * h + 1e-9
        if good < tau * (w - 1) - 1e-9:
            return False
    return True


def naive_clique_weight(cells, i, j) -> int:
    """Black-black rook pairs in the block, skipping any pair that touches the diagonal."""
    count = 0
    for r in range(i, j + 1):
        for c in range(i, j + 1):
            for rr, cc in ((r + 1, c), (r, c + 1)):
                if rr > j or cc > j or r == c or rr == cc:
                    continue
                count += cells[r, c] == 1 and cells[rr, cc] == 1
    return count


def cell_set(p) -> set[tuple[int, int]]:
    (i, i2), (j, j2) = p.rows, p.cols
    cells = {(r, c) for r in range(i, i2 + 1) for c in range(j, j2 + 1)}
    if p.kind.value != "clique":
        cells |= {(c, r) for r, c in cells}
    return cells


def best_interval_set(intervals: list[tuple[int, int, int]]) -> tuple[int, list[tuple[int, int]]]:
    """Exhaustive maximum-weight set of non-overlapping (start, end, weight) intervals.

    Returns the best total and the lexicographically smallest optimal set.
    """
    best_w, best_set = 0, []
    k = len(intervals)
    for mask in range(1 << k):
        chosen = sorted(intervals[b][:2] for b in range(k) if mask >> b & 1)
        if any(chosen[a][1] >= chosen[a + 1][0] for a in range(len(chosen) - 1)):
            continue
        w = sum(intervals[b][2] for b in range(k) if mask >> b & 1)
        if w > best_w or (w == best_w and chosen < best_set):
            best_w, best_set = w, chosen
    return best_w, best_set


def random_symmetric(rng: np.random.Generator, n: int, p: float) -> np.ndarray:
    upper = np.triu(rng.random((n, n)) < p, 1)
    return (upper | upper.T).astype(np.int8)


def exhaustive_interval_total(intervals: list[tuple[int, int, int]]) -> int:
    """Best total over all 2^k subsets, vectorised; fast enough for k = 18."""
    k = len(intervals)
    if k == 0:
        return 0
    masks = np.arange(1 << k, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(k)) & 1
    ok = np.ones(masks.size, dtype=bool)
    for a in range(k):
        for b in range(a + 1, k):
            (s1, e1, _), (s2, e2, _) = intervals[a], intervals[b]
            if s1 <= e2 and s2 <= e1:
                ok &= ~(bits[:, a] & bits[:, b]).astype(bool)
    totals = bits @ np.array([w for _, _, w in intervals], dtype=np.int64)
    return int(totals[ok].max())
