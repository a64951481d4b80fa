"""Green's relations of an enumerated semigroup, from its Cayley graphs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .cayley import SemigroupTable
from .errors import InconsistencyError


def _scc_labels(m: int, targets: np.ndarray) -> list[int]:
    """Strongly connected components of the graph i -> targets[i, :].

    Labels are renumbered by first appearance so class ids follow element order.
    """
    if targets.size == 0:
        return list(range(m))
    k = targets.shape[1]
    rows = np.repeat(np.arange(m), k)
    graph = csr_matrix((np.ones(m * k, dtype=np.int8), (rows, targets.ravel())), shape=(m, m))
    _, raw = connected_components(graph, directed=True, connection="strong")
    return _renumber(raw.tolist())


def _renumber(labels) -> list[int]:
    ids: dict = {}
    return [ids.setdefault(x, len(ids)) for x in labels]


def _members(labels: list[int]) -> list[list[int]]:
    out: list[list[int]] = [[] for _ in range(max(labels, default=-1) + 1)]
    for i, c in enumerate(labels):
        out[c].append(i)
    return out


@dataclass(frozen=True)
class GreenClasses:
    r_class: list[int]
    l_class: list[int]
    h_class: list[int]
    d_class: list[int]
    j_class: list[int]
    group_h_class: list[bool]

    def members(self, relation: str) -> list[list[int]]:
        return _members(getattr(self, f"{relation.lower()}_class"))

    def count(self, relation: str) -> int:
        return max(getattr(self, f"{relation.lower()}_class"), default=-1) + 1

    def counts(self) -> dict[str, int]:
        return {rel: self.count(rel) for rel in "RLHDJ"}


def compute_green(table: SemigroupTable) -> GreenClasses:
    m = table.size
    # a R b iff each is reachable from the other by right multiplication (S^1 ideals)
    r = _scc_labels(m, table.right)
    l = _scc_labels(m, table.left)
    j = _scc_labels(m, np.hstack([table.right, table.left]))
    h = _renumber(zip(r, l))

    # D = R v L: union-find merging elements sharing an R- or L-class
    parent = list(range(m))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for labels in (r, l):
        first: dict[int, int] = {}
        for i, c in enumerate(labels):
            if c in first:
                ra, rb = find(first[c]), find(i)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
            else:
                first[c] = i
    d = _renumber(find(i) for i in range(m))
    if _renumber(d) != _renumber(j):
        raise InconsistencyError("D and J differ on a finite semigroup")

    group = [False] * (max(h, default=-1) + 1)
    for e in table.idempotents:
        group[h[e]] = True
    return GreenClasses(r, l, h, d, j, group)


def h_equivalent(a: int, b: int, g: GreenClasses) -> bool:
    return g.h_class[a] == g.h_class[b]


def same_partition(x: list[int], y: list[int]) -> bool:
    return _renumber(x) == _renumber(y)
