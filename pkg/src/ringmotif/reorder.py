"""Moran's I seriation by reduction to a shortest Hamiltonian path.

For a 0/1 matrix with ``N = n*n`` cells, ``m`` of them black, and rook
adjacency weights, the general Moran's I collapses to::

    I = c_B * B + c_W * W - 1
    c_B = n / (2 (n-1) m)
    c_W = n / (2 (n-1) (n^2 - m))

where B and W count unordered black-black and white-white neighbour pairs.
The ``1/m`` in ``c_B`` is required for agreement with the general definition
(checked against a direct implementation in the test suite).

For a symmetric matrix the horizontal counts equal the vertical ones, so
``I = 2 * sum(s(u, v)) - 1`` over consecutive rows (u, v), and maximizing I
is a shortest path problem under ``delta = 1 - s``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .graph import AdjacencyMatrix, Ordering
from . import tsp
from .tsp import CapacityError, Tour, TspInstance

log = logging.getLogger(__name__)

DEFAULT_EXACT_CAP = tsp.DEFAULT_EXACT_CAP
DEFAULT_SEED = 42


class DegenerateMatrixError(ValueError):
    """Moran's I is undefined when every cell has the same value."""


@dataclass(frozen=True)
class MoransConstants:
    c_B: float
    c_W: float
    n: int
    m: int

    @classmethod
    def of(cls, cells) -> "MoransConstants":
        cells = _cells(cells)
        n = cells.shape[0]
        m = int(cells.sum())
        if n < 2:
            raise DegenerateMatrixError("Moran's I needs at least a 2x2 matrix")
        if m == 0 or m == n * n:
            raise DegenerateMatrixError("all cells have the same value; Moran's I is undefined")
        return cls(n / (2 * (n - 1) * m), n / (2 * (n - 1) * (n * n - m)), n, m)


def _cells(M) -> np.ndarray:
    if isinstance(M, AdjacencyMatrix):
        return M.cells
    return np.asarray(M, dtype=np.int8)


def adjacency_counts(cells) -> tuple[int, int]:
    """(B, W): black-black and white-white rook neighbour pairs."""
    x = _cells(cells).astype(bool)
    b = int((x[:, :-1] & x[:, 1:]).sum() + (x[:-1, :] & x[1:, :]).sum())
    w = int((~x[:, :-1] & ~x[:, 1:]).sum() + (~x[:-1, :] & ~x[1:, :]).sum())
    return b, w


def morans_i_simplified(M) -> float:
    k = MoransConstants.of(M)
    b, w = adjacency_counts(M)
    return k.c_B * b + k.c_W * w - 1


def row_similarity(M, u: int, v: int, constants: MoransConstants | None = None) -> float:
    cells = _cells(M)
    k = constants or MoransConstants.of(cells)
    a, b = cells[u].astype(bool), cells[v].astype(bool)
    return k.c_B * int((a & b).sum()) + k.c_W * int((~a & ~b).sum())


def distance(M, u: int, v: int, constants: MoransConstants | None = None) -> float:
    # Raw 1 - s; build_instance shifts the whole instance when this goes negative.
    return 1.0 - row_similarity(M, u, v, constants)


def similarity_matrix(M, constants: MoransConstants | None = None) -> np.ndarray:
    cells = _cells(M)
    k = constants or MoransConstants.of(cells)
    x = cells.astype(np.float64)
    black = x @ x.T
    white = (1 - x) @ (1 - x).T
    return k.c_B * black + k.c_W * white


def build_instance(M, rows: list[int] | None = None) -> TspInstance:
    """Complete graph on the rows of M (or a subset of them) plus a zero-distance virtual vertex.

    The virtual vertex is the last index. If any row-row distance is negative,
    all row-row distances are raised by the same amount; every Hamiltonian path
    uses exactly len(rows)-1 of them, so the optimum is unchanged.
    """
    sim = similarity_matrix(M)
    if rows is not None:
        idx = np.asarray(rows, dtype=np.intp)
        sim = sim[np.ix_(idx, idx)]
    k = sim.shape[0]
    d = np.zeros((k + 1, k + 1))
    d[:k, :k] = 1.0 - sim
    np.fill_diagonal(d, 0.0)
    shift = 0.0
    if k > 1:
        off = d[:k, :k][~np.eye(k, dtype=bool)]
        if off.min() < 0:
            shift = -float(off.min())
            d[:k, :k] += shift
            np.fill_diagonal(d, 0.0)
    return TspInstance(d, shift)


def tour_to_ordering(tour: Tour | list[int] | tuple[int, ...], omega: int | None = None) -> Ordering:
    seq = list(tour.sequence if isinstance(tour, Tour) else tour)
    if omega is None:
        omega = len(seq) - 1
    k = seq.index(omega)
    rotated = seq[k:] + seq[:k]
    return Ordering(tuple(rotated[1:]))


def path_cost(t: TspInstance, order) -> float:
    order = list(order)
    return float(sum(t.dist[a, b] for a, b in zip(order, order[1:])))


def twin_classes(cells: np.ndarray) -> list[list[int]]:
    """Group rows with identical contents, in order of first appearance."""
    groups: dict[bytes, list[int]] = {}
    for r in range(cells.shape[0]):
        groups.setdefault(cells[r].tobytes(), []).append(r)
    return list(groups.values())


@dataclass
class ReorderResult:
    matrix: AdjacencyMatrix
    ordering: Ordering  # positions of the input matrix, in new order
    method: str
    morans_before: float | None
    morans_after: float | None
    path_cost: float | None = None
    classes: int | None = None
    notes: list[str] = field(default_factory=list)


def _expand(order: list[int], classes: list[list[int]]) -> Ordering:
    return Ordering(tuple(r for c in order for r in classes[c]))


def reorder(
    M: AdjacencyMatrix,
    method: str = "auto",
    seed: int = DEFAULT_SEED,
    exact_cap: int = DEFAULT_EXACT_CAP,
) -> ReorderResult:
    """Permute rows/columns of M to maximize Moran's I.

    Rows with identical contents are merged before solving: some optimal
    ordering always keeps such twins contiguous, so the exact solver stays
    exact on the smaller instance. ``auto`` picks the exact solver when the
    merged instance fits under ``exact_cap``.
    """
    if method not in ("off", "exact", "heuristic", "auto"):
        raise ValueError(f"unknown reorder method {method!r}")
    try:
        before = morans_i_simplified(M)
    except DegenerateMatrixError as exc:
        if method != "off":
            log.warning("skipping reorder: %s", exc)
        ident = Ordering.identity(M.n)
        return ReorderResult(M, ident, "off", None, None, notes=[f"reorder skipped: {exc}"])

    if method == "off":
        return ReorderResult(M, Ordering.identity(M.n), "off", before, before)

    classes = twin_classes(M.cells)
    reps = [c[0] for c in classes]
    t = build_instance(M, reps)
    size = len(reps) + 1
    if method == "auto":
        method = "exact" if size <= exact_cap else "heuristic"

    if method == "exact":
        tour = tsp.solve_exact(t, cap=exact_cap)
    else:
        # seed the search with the input order so the result can only improve on it
        initial = list(range(len(reps))) + [len(reps)]
        tour = tsp.solve_heuristic(t, seed=seed, initial=initial)

    order = list(tour_to_ordering(tour).perm)
    perm = _expand(order, classes)
    out = M.permuted(perm)
    after = morans_i_simplified(out)
    return ReorderResult(out, perm, method, before, after, path_cost(t, order), len(classes))


def to_tsplib(t: TspInstance, name: str = "moran", scale: float = 1e6) -> str:
    """TSPLIB text (EXPLICIT / FULL_MATRIX), distances scaled to integers."""
    n = t.size
    lines = [
        f"NAME: {name}",
        "TYPE: TSP",
        f"COMMENT: Moran's I seriation; last vertex is the virtual endpoint; scale {scale:g}",
        f"DIMENSION: {n}",
        "EDGE_WEIGHT_TYPE: EXPLICIT",
        "EDGE_WEIGHT_FORMAT: FULL_MATRIX",
        "EDGE_WEIGHT_SECTION",
    ]
    w = np.rint(t.dist * scale).astype(np.int64)
    for row in w:
        lines.append(" ".join(str(int(x)) for x in row))
    lines.append("EOF")
    return "\n".join(lines) + "\n"
