"""Block decomposition of Clifford matrix semigroups into linear (0-)groups.

A Clifford semigroup S of n x n matrices is conjugated by an invertible P so
that every P^-1 a P is block diagonal diag(a_1, ..., a_t, 0, ..., 0), each
set of blocks {a_k : a in S} being a linear group or a linear group with zero
adjoined. The map a -> (a_1, ..., a_t) is then a subdirect embedding, which
:func:`verify_subdirect` checks exhaustively.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .cayley import DEFAULT_MAX_SIZE, SemigroupTable, enumerate_semigroup, local_identity
from .clifford import (
    IDEMPOTENT_NOT_CENTRAL,
    NOT_COMPLETELY_REGULAR,
    CliffordVerdict,
    is_clifford,
)
from .errors import (
    BlockLeakage,
    CertificateFailure,
    NotAGroup,
    NotClifford,
    NotIdempotent,
    NotZeroFullranked,
    Singular,
    SingularSeed,
    SweepTooLarge,
)
from .exactfield import (
    FieldSpec,
    Mat,
    char_poly_roots_in_field,
    column_space_basis,
    inverse,
    kernel_basis,
    random_invertible,
    rank,
)
from .green import GreenClasses, compute_green

GROUP = "group"
ZERO_GROUP = "zero_group"
TRIVIAL_ZERO = "trivial_zero"


@dataclass
class ComponentDescriptor:
    order: int
    kind: str
    element_count: int
    identity: Mat | None
    rank_profile: frozenset[int]
    table: SemigroupTable = dc_field(repr=False)

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "kind": self.kind,
            "element_count": self.element_count,
            "identity": self.identity.grid() if self.identity is not None else None,
            "rank_profile": sorted(self.rank_profile),
        }


@dataclass
class Decomposition:
    """S ~ [S_1, ..., S_t] realised by ``conjugator``.

    ``block_sizes`` lists the factor blocks; ``zero_block`` is the order of the
    trailing block on which every element vanishes. ``embedding[a]`` holds the
    factor blocks of element a and ``coords[a, k]`` the index of the k-th block
    inside ``components[k].table``.
    """

    conjugator: Mat
    conjugator_inverse: Mat
    block_sizes: list[int]
    zero_block: int
    components: list[ComponentDescriptor]
    embedding: list[tuple[Mat, ...]]
    coords: np.ndarray

    @property
    def offsets(self) -> list[int]:
        return list(itertools.accumulate([0] + self.block_sizes))[:-1]

    def to_json(self) -> dict:
        return {
            "conjugator": self.conjugator.grid(),
            "conjugator_inverse": self.conjugator_inverse.grid(),
            "block_sizes": list(self.block_sizes),
            "zero_block": self.zero_block,
            "components": [c.to_json() for c in self.components],
        }


@dataclass
class BlockSplit:
    conjugator: Mat
    rank: int
    upper: SemigroupTable
    lower: SemigroupTable


def idempotent_conjugator(e: Mat) -> Mat:
    """P with P^-1 e P = diag(I_r, 0): column-space basis, then kernel basis."""
    if e * e != e:
        raise NotIdempotent("matrix is not idempotent")
    p = Mat.from_columns(column_space_basis(e) + kernel_basis(e), e.field)
    r = rank(e)
    if inverse(p) * e * p != Mat.diag([1] * r + [0] * (e.n - r), e.field):
        raise NotIdempotent("column space and kernel do not split the matrix")
    return p


def _leak(c: Mat, sizes: Sequence[int]) -> tuple[int, int] | None:
    """First nonzero entry of ``c`` outside the diagonal blocks of ``sizes``."""
    owner = [k for k, s in enumerate(sizes) for _ in range(s)]
    for i, row in enumerate(c.rows):
        for j, x in enumerate(row):
            if x != 0 and owner[i] != owner[j]:
                return (i, j)
    return None


def _project(elements: Sequence[Mat], gens: Sequence[Mat], start: int, stop: int, max_size: int) -> SemigroupTable:
    """Enumerate the projection onto one diagonal block and check it equals the projected element set."""
    sub_gens = [g.principal_block(start, stop) for g in gens]
    table = enumerate_semigroup(sub_gens, max_size)
    projected = {a.principal_block(start, stop) for a in elements}
    if set(table.elements) != projected:
        raise CertificateFailure("projection", (start, stop))
    return table


def block_split(
    table: SemigroupTable,
    e: int,
    verdict: CliffordVerdict | None = None,
    max_size: int = DEFAULT_MAX_SIZE,
) -> BlockSplit:
    """Split along the idempotent ``elements[e]`` of rank 0 < r < n.

    Every conjugated element is checked to be diag(U, Z); a nonzero
    off-diagonal entry raises BlockLeakage rather than being discarded.
    """
    if verdict is not None and not verdict.is_clifford:
        raise NotClifford(verdict)
    em = table.elements[e]
    n = table.order
    r = rank(em)
    if not 0 < r < n:
        raise ValueError(f"idempotent of rank {r} does not split order {n}")
    p = idempotent_conjugator(em)
    p_inv = inverse(p)
    conj = [p_inv * a * p for a in table.elements]
    for idx, c in enumerate(conj):
        pos = _leak(c, (r, n - r))
        if pos is not None:
            raise BlockLeakage(idx, pos)
    conj_gens = [p_inv * g * p for g in table.gens]
    upper = _project(conj, conj_gens, 0, r, max_size)
    lower = _project(conj, conj_gens, r, n, max_size)
    return BlockSplit(p, r, upper, lower)


def _is_group(table: SemigroupTable, members: Sequence[int]) -> tuple[bool, int | None]:
    """Group axioms on a subset of the table: closure, identity, two-sided inverses."""
    mult = table.mult
    ms = np.array(members, dtype=np.int64)
    sub = mult[np.ix_(ms, ms)]
    inside = np.isin(sub, ms)
    if not inside.all():
        return False, None
    ident = None
    for k, e in enumerate(ms):
        if (sub[k] == ms).all() and (sub[:, k] == ms).all():
            ident = int(e)
            break
    if ident is None:
        return False, None
    for k in range(len(ms)):
        if not ((sub[k] == ident) & (sub[:, k] == ident)).any():
            return False, ident
    return True, ident


def classify_component(table: SemigroupTable) -> ComponentDescriptor:
    n = table.order
    ranks = table.ranks
    for idx, r in enumerate(ranks):
        if 0 < r < n:
            raise NotZeroFullranked(idx, r, n)
    nonzero = [i for i, r in enumerate(ranks) if r == n]
    profile = frozenset(ranks)
    if not nonzero:
        return ComponentDescriptor(n, TRIVIAL_ZERO, table.size, None, profile, table)
    ok, ident = _is_group(table, nonzero)
    if not ok:
        raise NotAGroup("nonzero elements of a (0-)fullranked component do not form a group")
    identity = table.elements[ident]
    if not identity.is_identity():
        raise NotAGroup("group identity of a fullranked component is not the identity matrix", ident)
    kind = ZERO_GROUP if table.contains_zero else GROUP
    return ComponentDescriptor(n, kind, table.size, identity, profile, table)


def _split_recursive(table: SemigroupTable, max_size: int) -> tuple[Mat, list[SemigroupTable]]:
    n = table.order
    pick = next((i for i, r in enumerate(table.ranks) if 0 < r < n), None)
    if pick is None:
        return Mat.identity(n, table.field), [table]
    e = local_identity(pick, table)
    split = block_split(table, e, max_size=max_size)
    pu, upper = _split_recursive(split.upper, max_size)
    pl, lower = _split_recursive(split.lower, max_size)
    return split.conjugator * Mat.block_diag([pu, pl], table.field), upper + lower


def decompose(
    table: SemigroupTable,
    verdict: CliffordVerdict | None = None,
    max_size: int = DEFAULT_MAX_SIZE,
) -> Decomposition:
    """Recursively split a Clifford table into (0-)fullranked components."""
    if verdict is None:
        verdict = is_clifford(table)
    if not verdict.is_clifford:
        raise NotClifford(verdict)
    fld, n = table.field, table.order
    p, blocks = _split_recursive(table, max_size)
    comps = [classify_component(b) for b in blocks]

    # move all-zero blocks to the end by permuting the columns of p
    sizes = [b.order for b in blocks]
    starts = list(itertools.accumulate([0] + sizes))
    keep = [k for k, c in enumerate(comps) if c.kind != TRIVIAL_ZERO]
    drop = [k for k, c in enumerate(comps) if c.kind == TRIVIAL_ZERO]
    perm = [j for k in keep + drop for j in range(starts[k], starts[k] + sizes[k])]
    p = Mat.from_columns([p.column(j) for j in perm], fld)
    p_inv = inverse(p)
    factors = [comps[k] for k in keep]
    factor_sizes = [sizes[k] for k in keep]
    zero_block = sum(sizes[k] for k in drop)

    offsets = list(itertools.accumulate([0] + factor_sizes))
    embedding = []
    coords = np.empty((table.size, len(factors)), dtype=np.int64)
    for idx, a in enumerate(table.elements):
        c = p_inv * a * p
        pos = _leak(c, factor_sizes + [zero_block])
        tail = c.principal_block(offsets[-1], n) if zero_block else None
        if pos is not None or (tail is not None and not tail.is_zero()):
            raise BlockLeakage(idx, pos or (offsets[-1], offsets[-1]))
        blocks_of_a = tuple(c.principal_block(offsets[k], offsets[k + 1]) for k in range(len(factors)))
        for k, b in enumerate(blocks_of_a):
            j = factors[k].table.index_of(b)
            if j is None:
                raise CertificateFailure("projection", (idx, k))
            coords[idx, k] = j
        embedding.append(blocks_of_a)
    d = Decomposition(p, p_inv, factor_sizes, zero_block, factors, embedding, coords)
    verify_subdirect(table, d)
    return d


def verify_subdirect(table: SemigroupTable, d: Decomposition) -> dict:
    """Exhaustive certificate that a -> (a_1, ..., a_t) is a subdirect embedding.

    Checks, in order: homomorphism on all pairs, injectivity, surjectivity of
    every projection, and exact block-diagonal form of every conjugate.
    Raises CertificateFailure at the first failed check; otherwise returns the
    certificate.
    """
    m = table.size
    mult = table.mult
    checks = []

    hom_witness = None
    for k, comp in enumerate(d.components):
        ck = d.coords[:, k]
        lhs = comp.table.mult[np.ix_(ck, ck)]
        rhs = ck[mult]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            hom_witness = (int(bad[0][0]), int(bad[0][1]))
            break
    checks.append({"id": "homomorphism", "passed": hom_witness is None, "pairs": m * m,
                   "witness": hom_witness})

    seen: dict[tuple, int] = {}
    inj_witness = None
    for a in range(m):
        key = tuple(int(x) for x in d.coords[a])
        if key in seen:
            inj_witness = (seen[key], a)
            break
        seen[key] = a
    checks.append({"id": "injective", "passed": inj_witness is None, "elements": m,
                   "witness": inj_witness})

    surj_witness = None
    for k, comp in enumerate(d.components):
        hit = set(int(x) for x in d.coords[:, k])
        missing = [j for j in range(comp.table.size) if j not in hit]
        if missing:
            surj_witness = (k, missing[0])
            break
    checks.append({"id": "surjective", "passed": surj_witness is None,
                   "components": len(d.components), "witness": surj_witness})

    block_witness = None
    sizes = d.block_sizes + ([d.zero_block] if d.zero_block else [])
    n = table.order
    if sum(sizes) != n:
        block_witness = ("sizes", sum(sizes))
    else:
        offsets = d.offsets + [sum(d.block_sizes)]
        for a, mat in enumerate(table.elements):
            c = d.conjugator_inverse * mat * d.conjugator
            pos = _leak(c, sizes)
            if pos is None and d.zero_block and not c.principal_block(offsets[-1], n).is_zero():
                pos = (offsets[-1], offsets[-1])
            if pos is None:
                if any(c.principal_block(offsets[k], offsets[k + 1]) != d.embedding[a][k]
                       for k in range(len(d.block_sizes))):
                    pos = (-1, -1)
            if pos is not None:
                block_witness = (a, pos)
                break
    checks.append({"id": "block_form", "passed": block_witness is None, "elements": m,
                   "witness": block_witness})

    cert = {"passed": all(c["passed"] for c in checks), "checks": checks}
    for c in checks:
        if not c["passed"]:
            raise CertificateFailure(c["id"], c["witness"], cert)
    return cert


# sufficiency direction: build Clifford semigroups from (0-)groups


@dataclass
class ComponentSpec:
    """A linear group given by generators in one diagonal block."""

    generators: list[Mat]
    adjoin_zero: bool = False

    @property
    def order(self) -> int:
        return self.generators[0].n

    @property
    def field(self) -> FieldSpec:
        return self.generators[0].field


def synthesis_generators(
    specs: Sequence[ComponentSpec],
    mode: str = "full",
    trailing_zero: int = 0,
) -> list[Mat]:
    """Block-diagonal generators realising a subdirect product of the given (0-)groups.

    ``full``: each generator acts in its own block with identities elsewhere,
    giving the full direct product. ``diagonal``: the j-th generators of all
    blocks act together, giving a diagonal subdirect product of isomorphic
    factors.
    """
    if not specs:
        raise ValueError("need at least one component")
    fld = specs[0].field
    eye = [Mat.identity(s.order, fld) for s in specs]
    zero = [Mat.zero(s.order, fld) for s in specs]

    def assemble(blocks):
        if trailing_zero:
            blocks = list(blocks) + [Mat.zero(trailing_zero, fld)]
        return Mat.block_diag(blocks, fld)

    gens = []
    if mode == "full":
        for k, s in enumerate(specs):
            for g in s.generators:
                gens.append(assemble(eye[:k] + [g] + eye[k + 1:]))
            if s.adjoin_zero:
                gens.append(assemble(eye[:k] + [zero[k]] + eye[k + 1:]))
    elif mode == "diagonal":
        counts = {len(s.generators) for s in specs}
        if len(counts) != 1:
            raise ValueError("diagonal mode needs the same number of generators per component")
        for j in range(counts.pop()):
            gens.append(assemble([s.generators[j] for s in specs]))
        if any(s.adjoin_zero for s in specs):
            gens.append(assemble([zero[k] if s.adjoin_zero else eye[k] for k, s in enumerate(specs)]))
    else:
        raise ValueError(f"unknown selection mode {mode!r}")
    return gens


def synthesize_clifford(
    specs: Sequence[ComponentSpec],
    mode: str = "full",
    conjugator: Mat | None = None,
    seed: int | None = None,
    trailing_zero: int = 0,
    max_size: int = DEFAULT_MAX_SIZE,
) -> SemigroupTable:
    """Enumerate a conjugated block-diagonal subdirect product of (0-)groups.

    The conjugator is ``conjugator`` if given, else drawn from ``seed``, else
    the identity. The result is asserted to be Clifford.
    """
    gens = synthesis_generators(specs, mode, trailing_zero)
    fld, n = gens[0].field, gens[0].n
    if conjugator is None:
        conjugator = random_invertible(n, fld, random.Random(seed)) if seed is not None else Mat.identity(n, fld)
    try:
        q_inv = inverse(conjugator)
    except Singular as exc:
        raise SingularSeed(f"conjugator has rank {exc.rank} < {n}") from exc
    table = enumerate_semigroup([q_inv * g * conjugator for g in gens], max_size)
    verdict = is_clifford(table)
    if not verdict.is_clifford:
        raise NotClifford(verdict, "synthesized semigroup is not Clifford")
    return table


# corollary checks


def _commutative(table: SemigroupTable) -> tuple[bool, tuple[int, int] | None]:
    mult = table.mult
    bad = np.argwhere(mult != mult.T)
    if len(bad):
        return False, (int(bad[0][0]), int(bad[0][1]))
    return True, None


def _entry(name, applicable, passed=None, detail=None):
    return {"name": name, "applicable": applicable, "passed": passed, "detail": detail}


def check_corollaries(
    table: SemigroupTable,
    verdict: CliffordVerdict,
    d: Decomposition | None = None,
    green: GreenClasses | None = None,
) -> dict:
    """Evaluate every corollary whose hypothesis the input meets.

    An applicable corollary that fails is listed under ``violations``.
    """
    names = [
        "rank1_2x2_commutative",
        "singular_3x3_eigenvalue_in_field",
        "all_rank1_commutative_group",
        "monoranked_group",
        "zero_monoranked_zero_group",
        "equal_rank_j_implies_h",
        "rank_additivity",
    ]
    if not verdict.is_clifford:
        entries = [_entry(nm, False, detail="input is not Clifford") for nm in names]
        return {"entries": entries, "violations": []}
    if green is None:
        green = compute_green(table)
    n = table.order
    ranks = table.ranks
    entries = []

    if n == 2 and 1 in ranks:
        ok, w = _commutative(table)
        entries.append(_entry(names[0], True, ok, {"witness": w}))
    else:
        entries.append(_entry(names[0], False))

    if n == 3 and any(r < 3 for r in ranks):
        bad = next((i for i, a in enumerate(table.elements) if not char_poly_roots_in_field(a)), None)
        entries.append(_entry(names[1], True, bad is None, {"witness": bad}))
    else:
        entries.append(_entry(names[1], False))

    if all(r == 1 for r in ranks):
        grp, _ = _is_group(table, range(table.size))
        comm, _ = _commutative(table)
        bad = next((i for i, a in enumerate(table.elements) if len(char_poly_roots_in_field(a)) != n), None)
        entries.append(_entry(names[2], True, grp and comm and bad is None,
                              {"group": grp, "commutative": comm, "eigenvalue_witness": bad}))
    else:
        entries.append(_entry(names[2], False))

    if len(set(ranks)) == 1:
        grp, _ = _is_group(table, range(table.size))
        entries.append(_entry(names[3], True, grp))
    else:
        entries.append(_entry(names[3], False))

    nonzero = [i for i, r in enumerate(ranks) if r > 0]
    if table.contains_zero and nonzero and len({ranks[i] for i in nonzero}) == 1:
        grp, _ = _is_group(table, nonzero)
        entries.append(_entry(names[4], True, grp))
    else:
        entries.append(_entry(names[4], False))

    bad = None
    for members in green.members("J"):
        by_rank: dict[int, int] = {}
        for a in members:
            h = by_rank.setdefault(ranks[a], green.h_class[a])
            if h != green.h_class[a]:
                bad = (members[0], a)
                break
        if bad:
            break
    entries.append(_entry(names[5], True, bad is None, {"witness": bad}))

    if d is not None:
        bad = next(
            (a for a in range(table.size) if ranks[a] != sum(rank(b) for b in d.embedding[a])),
            None,
        )
        entries.append(_entry(names[6], True, bad is None, {"witness": bad}))
    else:
        entries.append(_entry(names[6], False))

    violations = [e["name"] for e in entries if e["applicable"] and not e["passed"]]
    return {"entries": entries, "violations": violations}


# maximality sweep

SWEEP_LIMIT = 10**6
ENUMERATE_SWEEP_LIMIT = 1000


def gl_generators(n: int, fld: FieldSpec) -> list[Mat]:
    """Transvections I + E_ij (i != j) and diag(w, 1, ..., 1), w a primitive root."""
    p = fld.p
    w = next(g for g in range(1, p) if len({pow(g, k, p) for k in range(1, p)}) == p - 1)
    gens = []
    if p > 2:
        gens.append(Mat.diag([w] + [1] * (n - 1), fld))
    for i, j in itertools.product(range(n), repeat=2):
        if i != j:
            rows = [[int(r == c) for c in range(n)] for r in range(n)]
            rows[i][j] = 1
            gens.append(Mat(rows, fld))
    if not gens:
        gens.append(Mat.identity(n, fld))
    return gens


def all_matrices(n: int, fld: FieldSpec):
    for entries in itertools.product(range(fld.p), repeat=n * n):
        yield Mat._raw(fld, tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n)))


def _local_witness(m: Mat, gens: Sequence[Mat]) -> tuple[str, list[Mat]] | None:
    """Non-Clifford certificate for <GL, 0, m> using only powers of m and GL generators."""
    seen = {m: 1}
    x, k = m, 1
    while True:
        x = x * m
        k += 1
        if x in seen:
            index, period = seen[x], k - seen[x]
            break
        seen[x] = k
    if index > 1:
        return NOT_COMPLETELY_REGULAR, [m]
    e = m
    for _ in range(period - 1):
        e = e * m
    for g in gens:
        if e * g != g * e:
            return IDEMPOTENT_NOT_CENTRAL, [e, g]
    return None


def check_maximality(
    n: int,
    fld: FieldSpec,
    max_size: int = DEFAULT_MAX_SIZE,
    method: str = "auto",
) -> dict:
    """Sweep M_n(F) \\ (GL_n(F) u {0}); every adjoined matrix must break Clifford-ness.

    ``method`` is ``enumerate`` (full verdict on each extension), ``witness``
    (a replayable local certificate per extension) or ``auto``.
    """
    if not fld.is_finite:
        raise SweepTooLarge("maximality sweep needs a finite field")
    total = fld.p ** (n * n)
    if total > SWEEP_LIMIT:
        raise SweepTooLarge(f"|M_{n}(GF({fld.p}))| = {total} exceeds {SWEEP_LIMIT}")
    if method == "auto":
        method = "enumerate" if total <= ENUMERATE_SWEEP_LIMIT else "witness"

    gl = set()
    excluded = []
    for a in all_matrices(n, fld):
        if rank(a) == n:
            gl.add(a)
        elif not a.is_zero():
            excluded.append(a)
    gens = gl_generators(n, fld) + [Mat.zero(n, fld)]
    base = enumerate_semigroup(gens, max_size)
    if set(base.elements) != gl | {Mat.zero(n, fld)}:
        raise AssertionError("GL generators do not generate GL_n")
    base_verdict = is_clifford(base)

    reasons: Counter = Counter()
    survivors = []
    for a in excluded:
        if method == "enumerate":
            verdict = is_clifford(enumerate_semigroup(gens + [a], max_size))
            reason = None if verdict.is_clifford else verdict.witness.kind
        else:
            found = _local_witness(a, gens)
            reason = found[0] if found else None
        if reason is None:
            survivors.append(a.grid())
        else:
            reasons[reason] += 1
    return {
        "n": n,
        "field": fld.to_json(),
        "method": method,
        "matrices": total,
        "base_size": base.size,
        "base_is_clifford": base_verdict.is_clifford,
        "excluded": len(excluded),
        "broken": len(excluded) - len(survivors),
        "reasons": dict(sorted(reasons.items())),
        "survivors": survivors,
        "passed": base_verdict.is_clifford and not survivors,
    }
