"""Breadth-first enumeration of finitely generated matrix semigroups."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, FieldMismatch, NotInSubgroup, SizeCapExceeded
from .exactfield import FieldSpec, Mat, rank

DEFAULT_MAX_SIZE = 100_000


@dataclass(eq=False)
class SemigroupTable:
    """Elements of <generators> in shortlex discovery order, with Cayley graphs.

    ``right[i, j]`` is the index of ``elements[i] * gens[j]`` and ``left[i, j]``
    that of ``gens[j] * elements[i]``. ``words[i]`` is the shortlex-least word
    over generator positions evaluating to ``elements[i]``.
    """

    elements: list[Mat]
    gens: list[Mat]
    generators: list[int]
    right: np.ndarray
    left: np.ndarray
    words: list[tuple[int, ...]]
    parent: list[int]
    idempotents: frozenset[int]
    zero: int | None
    index: dict[Mat, int] = dc_field(repr=False)

    @property
    def size(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return self.elements[0].n

    @property
    def field(self) -> FieldSpec:
        return self.elements[0].field

    @property
    def contains_zero(self) -> bool:
        return self.zero is not None

    @cached_property
    def mult(self) -> np.ndarray:
        """Full multiplication table, ``mult[a, b]`` = index of a*b.

        Column b is obtained from the column of b's parent by one step in the
        right Cayley graph, so no matrix products are needed.
        """
        m = self.size
        dtype = np.int32 if m < 2**31 else np.int64
        table = np.empty((m, m), dtype=dtype)
        for b in range(m):
            letter = self.words[b][-1]
            if self.parent[b] < 0:
                table[:, b] = self.right[:, letter]
            else:
                table[:, b] = self.right[table[:, self.parent[b]], letter]
        table.setflags(write=False)
        return table

    @cached_property
    def ranks(self) -> list[int]:
        return [rank(a) for a in self.elements]

    def product(self, a: int, b: int) -> int:
        return int(self.mult[a, b])

    def power(self, a: int, k: int) -> int:
        x = a
        for _ in range(k - 1):
            x = int(self.mult[x, a])
        return x

    def evaluate(self, word: Sequence[int]) -> Mat:
        """Multiply out a generator word with matrix arithmetic."""
        acc = self.gens[word[0]]
        for letter in word[1:]:
            acc = acc * self.gens[letter]
        return acc

    def index_of(self, a: Mat) -> int | None:
        return self.index.get(a)


def enumerate_semigroup(generators: Sequence[Mat], max_size: int = DEFAULT_MAX_SIZE) -> SemigroupTable:
    """Closure of ``generators`` under multiplication, as a SemigroupTable.

    Raises SizeCapExceeded once more than ``max_size`` distinct elements appear.
    """
    gens = list(generators)
    if not gens:
        raise ValueError("need at least one generator")
    n, fld = gens[0].n, gens[0].field
    for g in gens:
        if g.field != fld:
            raise FieldMismatch(f"generators over {fld} and {g.field}")
        if g.n != n:
            raise DimensionMismatch(f"generators of order {n} and {g.n}")

    elements: list[Mat] = []
    index: dict[Mat, int] = {}
    words: list[tuple[int, ...]] = []
    parent: list[int] = []
    gen_idx = []
    for j, g in enumerate(gens):
        if g not in index:
            index[g] = len(elements)
            elements.append(g)
            words.append((j,))
            parent.append(-1)
        gen_idx.append(index[g])
    if len(elements) > max_size:
        raise SizeCapExceeded(max_size)

    k = len(gens)
    right_rows: list[list[int]] = []
    queue = deque(range(len(elements)))
    while queue:
        i = queue.popleft()
        row = []
        a = elements[i]
        for j, g in enumerate(gens):
            prod = a * g
            t = index.get(prod)
            if t is None:
                t = len(elements)
                if t >= max_size:
                    raise SizeCapExceeded(max_size)
                index[prod] = t
                elements.append(prod)
                words.append(words[i] + (j,))
                parent.append(i)
                queue.append(t)
            row.append(t)
        right_rows.append(row)

    m = len(elements)
    right = np.array(right_rows, dtype=np.int64).reshape(m, k)
    # gens[j] * (x * g) = (gens[j] * x) * g along each element's parent edge
    left = np.empty((m, k), dtype=np.int64)
    for i in range(m):
        last = words[i][-1]
        if parent[i] < 0:
            left[i] = right[gen_idx, last]
        else:
            left[i] = right[left[parent[i]], last]
    right.setflags(write=False)
    left.setflags(write=False)

    idempotents = frozenset(i for i, a in enumerate(elements) if a * a == a)
    zero = index.get(Mat.zero(n, fld))
    return SemigroupTable(
        elements=elements,
        gens=gens,
        generators=gen_idx,
        right=right,
        left=left,
        words=words,
        parent=parent,
        idempotents=idempotents,
        zero=zero,
        index=index,
    )


def index_period(a: int, table: SemigroupTable) -> tuple[int, int]:
    """Smallest (m, d) with a^m = a^(m+d)."""
    seen = {a: 1}
    x, k = a, 1
    mult = table.mult
    while True:
        x = int(mult[x, a])
        k += 1
        if x in seen:
            return seen[x], k - seen[x]
        seen[x] = k


def group_inverse(a: int, table: SemigroupTable) -> int:
    """Inverse of ``a`` in the maximal subgroup containing it."""
    m, d = index_period(a, table)
    if m > 1:
        raise NotInSubgroup(a, m)
    # a^d is the local identity, so a^(2d-1) inverts a
    return table.power(a, 2 * d - 1)


def local_identity(a: int, table: SemigroupTable) -> int:
    """The idempotent power of ``a``."""
    m, d = index_period(a, table)
    k = d * -(-m // d)
    return table.power(a, k)
