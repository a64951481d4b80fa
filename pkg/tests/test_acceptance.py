"""Acceptance suite. Each test carries a ``criterion`` marker; conftest prints
one PASS/FAIL line per criterion at the end of the run."""

import random
import time
from collections import Counter

import pytest

from cliffmat.cayley import enumerate_semigroup
from cliffmat.cli import build_parser, cmd_decompose, render
from cliffmat.clifford import (
    IDEMPOTENTS_NOT_COMMUTING,
    NON_REGULAR,
    is_clifford,
    replay_witness,
)
from cliffmat.exactfield import FieldSpec, Mat
from cliffmat.fuzz import draw_case
from cliffmat.green import compute_green
from cliffmat.limit import LimitMat, embed, lift_zero_tail, limit_analyze, limit_block_split
from cliffmat.structure import (
    ZERO_GROUP,
    check_corollaries,
    check_maximality,
    decompose,
    synthesize_clifford,
    verify_subdirect,
)
from helpers import GF2, GF3, INPUTS, mats
import oracles

criterion = pytest.mark.criterion

_corpus: dict = {}


def diagonal_gens():
    return [Mat.diag(d, GF3) for d in [(2, 1), (1, 2), (0, 1), (1, 0)]]


def gl2_zero_gens(fld):
    return [Mat(a, fld) for a in oracles.all_matrices(2, fld.p) if oracles.det(a, fld.p)] + [Mat.zero(2, fld)]


def crit1():
    if "crit1" not in _corpus:
        table = enumerate_semigroup(diagonal_gens())
        verdict = is_clifford(table)
        d = decompose(table, verdict)
        _corpus["crit1"] = (table, verdict, d, verify_subdirect(table, d))
    return _corpus["crit1"]


def _build_synthesized():
    rng = random.Random(20240601)
    out = []
    for _ in range(100):
        case = draw_case(rng, max_block=3)
        table = synthesize_clifford(case.specs, case.mode, conjugator=case.conjugator,
                                    trailing_zero=case.trailing_zero)
        verdict = is_clifford(table)
        d = decompose(table, verdict)
        out.append((case, table, verdict, d, verify_subdirect(table, d)))
    return out


def synthesized():
    if "crit2" not in _corpus:
        _corpus["crit2"] = _build_synthesized()
    return _corpus["crit2"]


def negative_tables():
    return [enumerate_semigroup(mats(GF2, [[1, 0], [0, 0]], [[1, 1], [0, 0]])),
            enumerate_semigroup(mats(GF2, [[0, 1], [0, 0]]))]


def maximality_tables():
    """Library tables for GL_2(F_2) u {0} and each of its one-matrix extensions, plus GL_2(F_3) u {0}."""
    base2 = gl2_zero_gens(GF2)
    tables = [enumerate_semigroup(base2), enumerate_semigroup(gl2_zero_gens(GF3))]
    for a in oracles.all_matrices(2, 2):
        if not oracles.det(a, 2) and any(any(r) for r in a):
            tables.append(enumerate_semigroup(base2 + [Mat(a, GF2)]))
    return tables


def oracle_green(table):
    p = table.field.p
    elems = [a.rows for a in table.elements]
    r = oracles.partition_by(elems, lambda a: oracles.right_ideal(a, elems, p))
    l = oracles.partition_by(elems, lambda a: oracles.left_ideal(a, elems, p))
    j = oracles.partition_by(elems, lambda a: oracles.two_sided_ideal(a, elems, p))
    h = {frozenset(x & y) for x in r for y in l if x & y}
    return {"R": r, "L": l, "J": j, "H": h}


def library_partition(table, labels):
    groups = {}
    for i, c in enumerate(labels):
        groups.setdefault(int(c), set()).add(table.elements[i].rows)
    return {frozenset(g) for g in groups.values()}


# 1


@criterion(1, "diagonal GF(3) semigroup certified Clifford, two zero_group components")
def test_criterion_1_diagonal_gf3(record_property):
    # oracle: diag(a, b) with a, b in F_3, all 9 of them
    elems = oracles.closure([g.rows for g in diagonal_gens()], 3)
    assert elems == {((a, 0), (0, b)) for a in range(3) for b in range(3)}
    assert oracles.is_clifford_by_definition(elems, 3)
    for k in range(2):
        proj = {e[k][k] for e in elems}
        units = proj - {0}
        assert proj == {0, 1, 2}
        assert all(x * y % 3 in units for x in units for y in units)

    start = time.perf_counter()
    table = enumerate_semigroup(diagonal_gens())
    verdict = is_clifford(table)
    d = decompose(table, verdict)
    cert = verify_subdirect(table, d)
    elapsed = time.perf_counter() - start
    _corpus["crit1"] = (table, verdict, d, cert)

    assert {a.rows for a in table.elements} == elems
    assert verdict.is_clifford
    assert [(c.kind, c.element_count) for c in d.components] == [(ZERO_GROUP, 3), (ZERO_GROUP, 3)]
    hom = next(c for c in cert["checks"] if c["id"] == "homomorphism")
    assert cert["passed"] and hom["passed"] and hom["pairs"] == 81
    assert elapsed < 1.0
    record_property("note", f"{elapsed:.3f} s")


# 2


@criterion(2, "100 synthesized Clifford semigroups round-trip through decompose and verify")
def test_criterion_2_synthesis_round_trip(record_property):
    start = time.perf_counter()
    instances = _build_synthesized()
    elapsed = time.perf_counter() - start
    _corpus["crit2"] = instances

    assert len(instances) == 100
    for case, table, verdict, d, cert in instances:
        assert verdict.is_clifford and cert["passed"]
    assert sum(not c.conjugator.is_identity() for c, *_ in instances) > 50
    fields = {c.field.p for c, *_ in instances}
    sizes = {s.order for c, *_ in instances for s in c.specs}
    zeros = {s.adjoin_zero for c, *_ in instances for s in c.specs}
    assert fields == {2, 3, 5} and sizes == {1, 2, 3} and zeros == {True, False}
    assert elapsed < 60.0
    record_property("note", f"{elapsed:.2f} s")


# 3


def _assert_block_diagonal(table, d):
    p = table.field.p
    q, q_inv = d.conjugator.rows, d.conjugator_inverse.rows
    n = table.order
    assert oracles.mul(q, q_inv, p) == tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    sizes = d.block_sizes + ([d.zero_block] if d.zero_block else [])
    assert sum(sizes) == n
    owner = [k for k, s in enumerate(sizes) for _ in range(s)]
    zero_owner = len(d.block_sizes) if d.zero_block else None
    for a in table.elements:
        c = oracles.mul(oracles.mul(q_inv, a.rows, p), q, p)
        for i in range(n):
            for j in range(n):
                if owner[i] != owner[j] or owner[i] == zero_owner:
                    assert c[i][j] == 0


@criterion(3, "every conjugate P^-1 a P is exactly block diagonal")
def test_criterion_3_block_form(record_property):
    table, _, d, _ = crit1()
    _assert_block_diagonal(table, d)
    count = table.size
    for _, table, _, d, _ in synthesized():
        _assert_block_diagonal(table, d)
        count += table.size
    record_property("note", f"{count} elements")


# 4


def _oracle_sweep(p):
    gl = [a for a in oracles.all_matrices(2, p) if oracles.det(a, p)]
    zero = ((0, 0), (0, 0))
    base = set(gl) | {zero}
    assert oracles.is_clifford_by_definition(oracles.closure(list(base), p), p)
    outside = [a for a in oracles.all_matrices(2, p) if a not in base]
    broken = sum(1 for a in outside if not oracles.is_clifford_by_definition(oracles.closure(list(base) + [a], p), p))
    return len(base), len(outside), broken


@criterion(4, "GL_2(F) u {0} is Clifford and maximal, over GF(2) and GF(3)")
@pytest.mark.parametrize("p, limit", [(2, 5.0), (3, 60.0)])
def test_criterion_4_maximality(p, limit, record_property):
    base, outside, broken = _oracle_sweep(p)
    assert outside == broken == {2: 9, 3: 32}[p]

    start = time.perf_counter()
    result = check_maximality(2, FieldSpec.prime(p))
    elapsed = time.perf_counter() - start
    assert result["base_size"] == base and result["base_is_clifford"]
    assert result["excluded"] == outside and result["broken"] == broken
    assert result["survivors"] == [] and result["passed"]
    assert elapsed < limit
    record_property("note", f"GF({p}) {broken}/{outside} in {elapsed:.2f} s")


# 5


@criterion(5, "non-Clifford inputs rejected with replayable witnesses")
def test_criterion_5_negative_detection():
    right_zero = mats(GF2, [[1, 0], [0, 0]], [[1, 1], [0, 0]])
    t = enumerate_semigroup(right_zero)
    v = is_clifford(t)
    assert not v.is_clifford and v.witness.kind == IDEMPOTENTS_NOT_COMMUTING
    w = v.witness
    assert replay_witness(right_zero, w.kind, [t.words[i] for i in w.elements],
                          [t.elements[i] for i in w.elements])

    nilpotent = mats(GF2, [[0, 1], [0, 0]])
    t = enumerate_semigroup(nilpotent)
    v = is_clifford(t)
    assert not v.is_clifford and v.witness.kind == NON_REGULAR
    w = v.witness
    assert replay_witness(nilpotent, w.kind, [t.words[i] for i in w.elements],
                          [t.elements[i] for i in w.elements])


# 6


@criterion(6, "Green's relations from SCCs match ideal brute force; H = J on Clifford tables")
def test_criterion_6_green_oracle(record_property):
    tables = [crit1()[0]]
    tables += [t for _, t, *_ in synthesized()]
    tables += maximality_tables()
    tables += negative_tables()
    checked = clifford = 0
    for t in tables:
        if t.size > 50:
            continue
        g = compute_green(t)
        expected = oracle_green(t)
        assert library_partition(t, g.r_class) == expected["R"]
        assert library_partition(t, g.l_class) == expected["L"]
        assert library_partition(t, g.j_class) == expected["J"]
        assert library_partition(t, g.h_class) == expected["H"]
        checked += 1
        if is_clifford(t, g).is_clifford:
            assert expected["H"] == expected["J"]
            assert library_partition(t, g.h_class) == library_partition(t, g.j_class)
            clifford += 1
    assert checked and clifford
    record_property("note", f"{checked} tables, {clifford} Clifford")


# 7


@criterion(7, "corollary checks pass on every certified Clifford instance")
def test_criterion_7_corollaries(record_property):
    instances = []
    table, verdict, d, _ = crit1()
    instances.append((table, verdict, d))
    instances += [(t, v, d) for _, t, v, d, _ in synthesized()]
    for gens in (gl2_zero_gens(GF2), gl2_zero_gens(GF3), mats(GF2, [[0, 1], [1, 0]], [[1, 1], [0, 1]]),
                 [Mat.diag([x, 0], GF3) for x in (1, 2)]):
        t = enumerate_semigroup(gens)
        v = is_clifford(t)
        instances.append((t, v, decompose(t, v)))
    for gens in ([lift_zero_tail(Mat.identity(1, GF3)), embed(Mat([[2]], GF3))],
                 [embed(g) for g in mats(GF2, [[0, 1], [1, 0]], [[1, 1], [0, 1]])]):
        res = limit_analyze(gens)
        instances.append((res.table, res.verdict, res.decomposition))

    applied = Counter()
    violations = []
    for t, v, d in instances:
        assert v.is_clifford
        report = check_corollaries(t, v, d)
        violations += report["violations"]
        for e in report["entries"]:
            if e["applicable"]:
                assert e["passed"], e
                applied[e["name"]] += 1
    assert violations == []
    for name in ("rank1_2x2_commutative", "singular_3x3_eigenvalue_in_field", "all_rank1_commutative_group",
                 "monoranked_group", "zero_monoranked_zero_group"):
        assert applied[name] > 0, name
    record_property("note", f"{len(instances)} instances, 0 violations")


# 8


def _random_limit_gens(rng):
    gens = []
    for _ in range(rng.randint(1, 3)):
        lv = rng.randint(0, 2)
        rows = tuple(tuple(rng.randrange(3) for _ in range(lv)) for _ in range(lv))
        gens.append(LimitMat(rows, rng.randint(0, 1), GF3))
    return gens


@criterion(8, "limit module: embed homomorphism, level-stable verdicts, mixed-tail split")
def test_criterion_8_limit(record_property):
    start = time.perf_counter()
    rng = random.Random(8)
    for _ in range(1000):
        n = rng.randint(1, 4)
        a, b = (tuple(tuple(rng.randrange(3) for _ in range(n)) for _ in range(n)) for _ in range(2))
        assert embed(Mat(a, GF3)) * embed(Mat(b, GF3)) == embed(Mat(oracles.mul(a, b, 3), GF3))

    mixed = [lift_zero_tail(Mat.identity(1, GF3)), embed(Mat([[2]], GF3))]
    sets = [mixed,
            [embed(g) for g in mats(GF2, [[0, 1], [1, 0]], [[1, 1], [0, 1]])],
            [embed(Mat([[0, 1], [0, 0]], GF2))]]
    sets += [_random_limit_gens(rng) for _ in range(20)]
    for gens in sets:
        base = limit_analyze(gens)
        padded = limit_analyze(gens, extra_levels=1)
        assert base.verdict == padded.verdict
        assert base.limit_elements == padded.limit_elements

    split = limit_block_split(mixed, mixed[0])
    assert split.rank == 1
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    record_property("note", f"{elapsed:.2f} s")


# 9


@criterion(9, "decompose reports are byte-identical across runs")
def test_criterion_9_determinism():
    path = str(INPUTS / "diagonal_gf3.json")
    outputs = []
    for _ in range(2):
        args = build_parser().parse_args(["decompose", path])
        report, code = cmd_decompose(args)
        assert code == 0
        outputs.append(render(report, args.format).encode())
    assert outputs[0] == outputs[1]
