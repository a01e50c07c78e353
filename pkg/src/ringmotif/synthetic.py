"""Planted-pattern graphs with known ground truth."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .graph import Graph, ValidationError


@dataclass(frozen=True)
class Plant:
    kind: str  # clique | biclique | star
    left: int
    right: int = 0

    def __post_init__(self):
        if self.kind == "clique":
            if self.left < 3 or self.right:
                raise ValidationError(f"clique needs one size >= 3, got {self.left}")
        elif self.kind == "biclique":
            if self.left < 2 or self.right < 2:
                raise ValidationError(f"biclique sides must be >= 2, got {self.left}x{self.right}")
        elif self.kind == "star":
            if self.left != 1 or self.right < 1:
                raise ValidationError(f"star needs one centre and >= 1 leaves, got {self.left}x{self.right}")
        else:
            raise ValidationError(f"unknown planted kind {self.kind!r}")

    @property
    def size(self) -> int:
        return self.left + self.right

    @classmethod
    def parse(cls, text: str) -> "Plant":
        """``clique:6``, ``biclique:4x6`` or ``star:7`` (seven leaves)."""
        kind, _, dims = text.strip().partition(":")
        try:
            if kind == "clique":
                return cls("clique", int(dims))
            if kind == "biclique":
                a, b = dims.lower().split("x")
                return cls("biclique", int(a), int(b))
            if kind == "star":
                return cls("star", 1, int(dims))
        except ValueError:
            pass
        raise ValidationError(f"cannot parse planted pattern {text!r}")


@dataclass
class Synthetic:
    graph: Graph
    truth: list[dict]
    planted_pairs: frozenset[tuple[int, int]]

    def truth_dict(self) -> dict:
        return {"n": self.graph.n, "patterns": self.truth}


def _pairs(plant: Plant, verts: list[int]):
    if plant.kind == "clique":
        return itertools.combinations(verts, 2)
    a, b = verts[: plant.left], verts[plant.left :]
    return itertools.product(a, b)


def generate_synthetic(
    plants: list[Plant],
    n: int,
    seed: int = 0,
    flip: float = 0.0,
    background: float = 0.0,
    shuffle: bool = True,
) -> Synthetic:
    """Plant vertex-disjoint patterns into a sparse random graph.

    Each planted edge is dropped with probability ``flip``; every other pair
    is an edge with probability ``background``. With ``shuffle`` the planted
    vertex sets are scattered by a random permutation.
    """
    if sum(p.size for p in plants) > n:
        raise ValidationError(f"planted patterns need {sum(p.size for p in plants)} vertices, graph has {n}")
    if not (0 <= flip <= 1 and 0 <= background <= 1):
        raise ValidationError("probabilities must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    order = [int(v) for v in (rng.permutation(n) if shuffle else range(n))]
    edges = set()
    planted = set()
    truth = []
    at = 0
    for plant in plants:
        verts = order[at : at + plant.size]
        at += plant.size
        for u, v in _pairs(plant, verts):
            e = (min(u, v), max(u, v))
            planted.add(e)
        if plant.kind == "clique":
            truth.append({"kind": "clique", "vertices": sorted(verts)})
        else:
            truth.append({"kind": plant.kind, "left": sorted(verts[: plant.left]), "right": sorted(verts[plant.left :])})
    # fixed pair order keeps draws reproducible
    for e in sorted(planted):
        if flip == 0 or rng.random() >= flip:
            edges.add(e)
    if background > 0:
        iu, ju = np.triu_indices(n, 1)
        hit = rng.random(iu.size) < background
        for u, v in zip(iu[hit].tolist(), ju[hit].tolist()):
            if (u, v) not in planted:
                edges.add((u, v))
    g = Graph(n, tuple(str(v) for v in range(n)), frozenset(edges))
    return Synthetic(g, truth, frozenset(planted))
