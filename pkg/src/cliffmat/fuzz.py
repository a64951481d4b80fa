"""Seeded synthesize -> analyze -> decompose -> verify round trips."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .cayley import SemigroupTable, enumerate_semigroup
from .clifford import analyze
from .errors import CliffmatError, SizeCapExceeded
from .exactfield import FieldSpec, Mat, inverse, random_invertible
from .structure import (
    ComponentSpec,
    decompose,
    synthesis_generators,
    verify_subdirect,
)

FIELDS = (2, 3, 5)
GROUP_CAP = 200
SIZE_BUDGET = 600
MAX_ORDER = 6


@dataclass
class FuzzCase:
    """One drawn instance: component specs, selection mode, and conjugator."""

    field: FieldSpec
    mode: str
    specs: list[ComponentSpec]
    trailing_zero: int
    conjugator: Mat
    generators: list[Mat] = field(default_factory=list)

    @property
    def order(self) -> int:
        return self.conjugator.n

    def describe(self) -> dict:
        return {
            "field": self.field.to_json(),
            "mode": self.mode,
            "block_sizes": [s.order for s in self.specs],
            "adjoin_zero": [s.adjoin_zero for s in self.specs],
            "trailing_zero": self.trailing_zero,
        }


def _random_group(order: int, fld: FieldSpec, rng: random.Random) -> list[Mat] | None:
    gens = [random_invertible(order, fld, rng) for _ in range(rng.choice((1, 1, 2)))]
    try:
        size = enumerate_semigroup(gens, GROUP_CAP).size
    except SizeCapExceeded:
        return None
    return gens if size else None


def _group_size(gens: list[Mat]) -> int:
    return enumerate_semigroup(gens, GROUP_CAP).size


def draw_case(rng: random.Random, max_block: int = 3, small: bool = False) -> FuzzCase:
    """Draw instances until one fits the element budget.

    ``small`` restricts to GF(2)/GF(3) and total order 2..3 (used for mutants,
    whose extra idempotents can fill every rank-one matrix).
    """
    while True:
        fld = FieldSpec.prime(rng.choice((2, 3) if small else FIELDS))
        mode = rng.choice(("full", "diagonal"))
        if mode == "full":
            specs = []
            for _ in range(rng.randint(1, 3)):
                order = rng.randint(1, max_block)
                gens = _random_group(order, fld, rng)
                if gens is None:
                    break
                specs.append(ComponentSpec(gens, rng.random() < 0.5))
            else:
                estimate = 1
                for s in specs:
                    estimate *= _group_size(s.generators) + s.adjoin_zero
                if estimate > SIZE_BUDGET:
                    continue
        else:
            order = rng.randint(1, max_block)
            base = _random_group(order, fld, rng)
            if base is None:
                continue
            specs = []
            for _ in range(rng.randint(2, 3)):
                q = random_invertible(order, fld, rng)
                q_inv = inverse(q)
                specs.append(ComponentSpec([q_inv * g * q for g in base], rng.random() < 0.5))
            if _group_size(base) * 2 ** len(specs) > SIZE_BUDGET:
                continue
        trailing = rng.choice((0, 0, 1))
        n = sum(s.order for s in specs) + trailing
        if len(specs) == 0 or n > MAX_ORDER or (small and not 2 <= n <= 3):
            continue
        q = random_invertible(n, fld, rng)
        q_inv = inverse(q)
        gens = [q_inv * g * q for g in synthesis_generators(specs, mode, trailing)]
        return FuzzCase(fld, mode, specs, trailing, q, gens)


def mutate(case: FuzzCase) -> list[Mat]:
    """Add the conjugated non-commuting idempotents diag([[1,0],[0,0]], 0) and diag([[1,1],[0,0]], 0)."""
    n, fld = case.order, case.field
    if n < 2:
        raise ValueError("mutants need order at least 2")
    e = [[0] * n for _ in range(n)]
    f = [[0] * n for _ in range(n)]
    e[0][0] = f[0][0] = f[0][1] = 1
    q, q_inv = case.conjugator, inverse(case.conjugator)
    return case.generators + [q_inv * Mat(e, fld) * q, q_inv * Mat(f, fld) * q]


def round_trip(generators: list[Mat], max_size: int) -> tuple[bool, dict, SemigroupTable | None]:
    """Analyze and decompose; ok iff Clifford and the subdirect certificate passes."""
    try:
        table, green, verdict = analyze(generators, max_size)
        info = {"elements": table.size, "is_clifford": verdict.is_clifford}
        if not verdict.is_clifford:
            info["witness"] = verdict.witness.kind
            return False, info, table
        d = decompose(table, verdict, max_size)
        cert = verify_subdirect(table, d)
        info["components"] = [c.kind for c in d.components]
        info["block_sizes"] = d.block_sizes
        info["zero_block"] = d.zero_block
        info["certificate"] = cert["passed"]
        return cert["passed"], info, table
    except CliffmatError as exc:
        return False, {"error": type(exc).__name__, "message": str(exc)}, None


def minimize(generators: list[Mat], fails) -> list[Mat]:
    """Greedily drop generators while ``fails(generators)`` stays true."""
    gens = list(generators)
    changed = True
    while changed and len(gens) > 1:
        changed = False
        for i in range(len(gens)):
            trial = gens[:i] + gens[i + 1:]
            if fails(trial):
                gens = trial
                changed = True
                break
    return gens
