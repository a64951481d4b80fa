"""Regularity, complete regularity, inverse and Clifford checks with witnesses.

Every failed property carries the first counterexample in element order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cayley import DEFAULT_MAX_SIZE, SemigroupTable, enumerate_semigroup, index_period
from .errors import InconsistencyError
from .exactfield import Mat
from .green import GreenClasses, compute_green

NON_REGULAR = "non_regular"
NOT_COMPLETELY_REGULAR = "not_completely_regular"
IDEMPOTENTS_NOT_COMMUTING = "idempotents_not_commuting"
IDEMPOTENT_NOT_CENTRAL = "idempotent_not_central"


@dataclass(frozen=True)
class Witness:
    kind: str
    elements: tuple[int, ...]

    def to_json(self, table: SemigroupTable) -> dict:
        return {
            "kind": self.kind,
            "elements": list(self.elements),
            "words": [list(table.words[i]) for i in self.elements],
            "matrices": [table.elements[i].grid() for i in self.elements],
        }


@dataclass(frozen=True)
class Check:
    ok: bool
    witness: Witness | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class CliffordVerdict:
    is_regular: bool
    is_completely_regular: bool
    is_inverse: bool
    idempotents_commute: bool
    idempotents_central: bool
    is_clifford: bool
    witnesses: dict[str, Witness] = field(default_factory=dict)

    @property
    def witness(self) -> Witness | None:
        """The first failure, in the order regular, completely regular, commuting, central."""
        for kind in (NON_REGULAR, NOT_COMPLETELY_REGULAR, IDEMPOTENTS_NOT_COMMUTING, IDEMPOTENT_NOT_CENTRAL):
            if kind in self.witnesses:
                return self.witnesses[kind]
        return None

    def flags(self) -> dict[str, bool]:
        return {
            "is_regular": self.is_regular,
            "is_completely_regular": self.is_completely_regular,
            "is_inverse": self.is_inverse,
            "idempotents_commute": self.idempotents_commute,
            "idempotents_central": self.idempotents_central,
            "is_clifford": self.is_clifford,
        }


def is_regular(table: SemigroupTable) -> Check:
    mult = table.mult
    for a in range(table.size):
        axa = mult[mult[a], a]
        if not (axa == a).any():
            return Check(False, Witness(NON_REGULAR, (a,)))
    return Check(True)


def is_completely_regular(table: SemigroupTable, g: GreenClasses) -> Check:
    """Every H-class holds an idempotent; cross-checked against index = 1."""
    witness = None
    for a in range(table.size):
        in_group = g.group_h_class[g.h_class[a]]
        if in_group != (index_period(a, table)[0] == 1):
            raise InconsistencyError(f"H-class and index/period disagree on element {a}")
        if not in_group and witness is None:
            witness = Witness(NOT_COMPLETELY_REGULAR, (a,))
    return Check(witness is None, witness)


def idempotents_commute(table: SemigroupTable) -> tuple[Check, Check]:
    """(pairwise commuting idempotents, idempotents central)."""
    mult = table.mult
    es = np.array(sorted(table.idempotents), dtype=np.int64)
    sub = mult[np.ix_(es, es)]
    bad = np.argwhere(sub != sub.T)
    commute = Check(True)
    if len(bad):
        i, j = min((int(x), int(y)) for x, y in bad if x < y)
        commute = Check(False, Witness(IDEMPOTENTS_NOT_COMMUTING, (int(es[i]), int(es[j]))))
    central = Check(True)
    bad = np.argwhere(mult[es, :] != mult[:, es].T)
    if len(bad):
        # argwhere is row-major, so the first hit is the least (idempotent, element) pair
        i, a = bad[0]
        central = Check(False, Witness(IDEMPOTENT_NOT_CENTRAL, (int(es[i]), int(a))))
    return commute, central


def is_clifford(table: SemigroupTable, green: GreenClasses | None = None) -> CliffordVerdict:
    """Decide Clifford-ness by two routes that must agree:
    completely regular + inverse, and completely regular + central idempotents.
    """
    if green is None:
        green = compute_green(table)
    reg = is_regular(table)
    creg = is_completely_regular(table, green)
    commute, central = idempotents_commute(table)
    inverse = reg.ok and commute.ok
    route_inverse = creg.ok and inverse
    route_central = creg.ok and central.ok
    if route_inverse != route_central:
        raise InconsistencyError("inverse route and central-idempotent route disagree")
    witnesses = {c.witness.kind: c.witness for c in (reg, creg, commute, central) if c.witness}
    return CliffordVerdict(
        is_regular=reg.ok,
        is_completely_regular=creg.ok,
        is_inverse=inverse,
        idempotents_commute=commute.ok,
        idempotents_central=central.ok,
        is_clifford=route_inverse,
        witnesses=witnesses,
    )


def analyze(generators: Sequence[Mat], max_size: int = DEFAULT_MAX_SIZE):
    table = enumerate_semigroup(generators, max_size)
    green = compute_green(table)
    return table, green, is_clifford(table, green)


def _powers_index(a: Mat) -> int:
    seen = {a: 1}
    x, k = a, 1
    while True:
        x = x * a
        k += 1
        if x in seen:
            return seen[x]
        seen[x] = k


def replay_witness(
    generators: Sequence[Mat],
    kind: str,
    words: Sequence[Sequence[int]],
    matrices: Sequence[Mat] | None = None,
    max_size: int = DEFAULT_MAX_SIZE,
) -> bool:
    """Re-check a witness with direct matrix arithmetic.

    Words are evaluated over ``generators``; if ``matrices`` are given they must
    agree with the evaluated words. Only the non-regular kind needs the whole
    semigroup, which is re-enumerated.
    """
    mats = []
    for w in words:
        acc = generators[w[0]]
        for letter in w[1:]:
            acc = acc * generators[letter]
        mats.append(acc)
    if matrices is not None and list(matrices) != mats:
        return False
    if kind == NON_REGULAR:
        (a,) = mats
        elements = enumerate_semigroup(generators, max_size).elements
        return all(a * x * a != a for x in elements)
    if kind == NOT_COMPLETELY_REGULAR:
        (a,) = mats
        return _powers_index(a) > 1
    if kind == IDEMPOTENTS_NOT_COMMUTING:
        e, f = mats
        return e * e == e and f * f == f and e * f != f * e
    if kind == IDEMPOTENT_NOT_CENTRAL:
        e, a = mats
        return e * e == e and e * a != a * e
    raise ValueError(f"unknown witness kind {kind!r}")
