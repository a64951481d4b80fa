"""Matrices of countably infinite order with a constant diagonal tail.

A LimitMat is diag(core, t, t, ...) with t in {0, 1}. One-tails are the
direct-limit images of finite matrices under a -> diag(a, 1); zero-tails are
finite-rank matrices such as diag(I_r, 0, 0, ...). Finitely generated
subsemigroups are analysed through the faithful finite realization
diag(core at level N, t), a matrix of order N + 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cayley import DEFAULT_MAX_SIZE, SemigroupTable, enumerate_semigroup
from .clifford import CliffordVerdict, is_clifford
from .errors import BlockLeakage, FieldMismatch, NotIdempotent
from .exactfield import FieldSpec, Mat, inverse, rank
from .green import GreenClasses, compute_green
from .structure import Decomposition, _leak, decompose, idempotent_conjugator

TAIL_NAMES = {0: "zero", 1: "one"}


def _strip(rows: tuple, tail) -> tuple:
    while rows:
        i = len(rows) - 1
        last_row = rows[i]
        if last_row[i] != tail or any(x != 0 for x in last_row[:i]) or any(r[i] != 0 for r in rows[:i]):
            break
        rows = tuple(r[:i] for r in rows[:i])
    return rows


@dataclass(frozen=True)
class LimitMat:
    """Canonical (minimal-level) core plus tail value 0 or 1."""

    rows: tuple
    tail: int
    field: FieldSpec

    def __post_init__(self):
        if self.tail not in (0, 1):
            raise ValueError(f"tail must be 0 or 1, got {self.tail!r}")
        object.__setattr__(self, "rows", _strip(tuple(tuple(r) for r in self.rows), self.tail))

    @classmethod
    def from_core(cls, core: Mat | None, tail: int, field: FieldSpec | None = None) -> "LimitMat":
        if core is None:
            if field is None:
                raise ValueError("an empty core needs an explicit field")
            return cls((), tail, field)
        return cls(core.rows, tail, core.field)

    @property
    def level(self) -> int:
        return len(self.rows)

    @property
    def core(self) -> Mat | None:
        return Mat._raw(self.field, self.rows) if self.rows else None

    @property
    def tail_name(self) -> str:
        return TAIL_NAMES[self.tail]

    def at_level(self, level: int) -> Mat:
        """The core padded with tail entries up to ``level`` (level >= self.level, >= 1)."""
        if level < self.level or level < 1:
            raise ValueError(f"cannot realise a level-{self.level} matrix at level {level}")
        tail = self.field.normalize(self.tail)
        if not self.rows:
            return Mat.diag([tail] * level, self.field)
        return self.core.pad(level - self.level, tail)

    def __mul__(self, other: "LimitMat") -> "LimitMat":
        return limit_mul(self, other)

    def to_json(self) -> dict:
        fmt = self.field.fmt
        return {"level": self.level, "tail": self.tail_name,
                "entries": [[fmt(x) for x in r] for r in self.rows]}


def embed(a: Mat) -> LimitMat:
    """Image of a finite matrix in the direct limit (pad with ones)."""
    return LimitMat(a.rows, 1, a.field)


def lift_zero_tail(a: Mat) -> LimitMat:
    """diag(a, 0, 0, ...)."""
    return LimitMat(a.rows, 0, a.field)


def limit_identity(field: FieldSpec) -> LimitMat:
    return LimitMat((), 1, field)


def limit_zero(field: FieldSpec) -> LimitMat:
    return LimitMat((), 0, field)


def limit_mul(a: LimitMat, b: LimitMat) -> LimitMat:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    level = max(a.level, b.level)
    if level == 0:
        return LimitMat((), a.tail * b.tail, a.field)
    prod = a.at_level(level) * b.at_level(level)
    return LimitMat(prod.rows, a.tail * b.tail, a.field)


@dataclass(frozen=True)
class LimitRank:
    """Finite rank for zero-tails; for one-tails rank is infinite and ``defect`` = level - rank(core)."""

    rank: int | None
    defect: int | None

    @property
    def infinite(self) -> bool:
        return self.rank is None

    def to_json(self) -> dict:
        if self.infinite:
            return {"rank": "infinite", "defect": self.defect}
        return {"rank": self.rank}


def limit_rank(a: LimitMat) -> LimitRank:
    r = rank(a.core) if a.level else 0
    if a.tail == 0:
        return LimitRank(r, None)
    return LimitRank(None, a.level - r)


def common_level(mats: Sequence[LimitMat]) -> int:
    return max(m.level for m in mats)


@dataclass
class LimitAnalysis:
    level: int
    table: SemigroupTable
    limit_elements: list[LimitMat]
    tails: list[int]
    green: GreenClasses
    verdict: CliffordVerdict
    decomposition: Decomposition | None

    @property
    def regime(self) -> str:
        present = set(self.tails)
        if present == {1}:
            return "direct_limit"
        if present == {0}:
            return "zero_tail"
        return "mixed"


def realize(a: LimitMat, level: int) -> Mat:
    """diag(core at ``level``, tail): the finite realization of order level + 1."""
    return a.at_level(level + 1)


def limit_analyze(
    generators: Sequence[LimitMat],
    max_size: int = DEFAULT_MAX_SIZE,
    extra_levels: int = 0,
) -> LimitAnalysis:
    """Decide Clifford-ness of a finitely generated subsemigroup of the limit.

    The semigroup is enumerated inside M_{N+1}(F) through :func:`realize`,
    where N is the common level (plus ``extra_levels``); the last coordinate
    carries the tail.
    """
    if not generators:
        raise ValueError("need at least one generator")
    fld = generators[0].field
    for g in generators:
        if g.field != fld:
            raise FieldMismatch(f"{fld} vs {g.field}")
    level = common_level(generators) + extra_levels
    table = enumerate_semigroup([realize(g, level) for g in generators], max_size)
    tails = [int(a[level, level]) for a in table.elements]
    limit_elements = [LimitMat(tuple(r[:level] for r in a.rows[:level]), t, fld)
                      for a, t in zip(table.elements, tails)]
    if len(set(limit_elements)) != table.size:
        raise AssertionError("realization is not faithful at the common level")
    green = compute_green(table)
    verdict = is_clifford(table, green)
    d = decompose(table, verdict, max_size) if verdict.is_clifford else None
    return LimitAnalysis(level, table, limit_elements, tails, green, verdict, d)


@dataclass
class LimitSplit:
    conjugator: LimitMat
    rank: int
    level: int
    upper: list[Mat]
    lower: list[LimitMat]


def limit_block_split(generators: Sequence[LimitMat], e: LimitMat) -> LimitSplit:
    """Conjugate by diag(P_0, I, I, ...) so every generator becomes diag(U, Z), U of order rank(e)."""
    if e.tail != 0:
        raise ValueError("idempotent has a one-tail and therefore infinite rank")
    if e * e != e:
        raise NotIdempotent("limit matrix is not idempotent")
    fld = e.field
    level = max(common_level(generators), e.level)
    r = limit_rank(e).rank
    if r == 0:
        return LimitSplit(limit_identity(fld), 0, level, [], list(generators))
    p0 = idempotent_conjugator(e.at_level(level))
    p0_inv = inverse(p0)
    upper, lower = [], []
    for idx, g in enumerate(generators):
        c = p0_inv * g.at_level(level) * p0
        pos = _leak(c, (r, level - r))
        if pos is not None:
            raise BlockLeakage(idx, pos)
        upper.append(c.principal_block(0, r))
        lower.append(LimitMat(c.block(r, level, r, level), g.tail, fld))
    return LimitSplit(LimitMat(p0.rows, 1, fld), r, level, upper, lower)
