"""Exact scalars and square matrices over GF(p) and Q.

Matrices store canonical raw values (``int`` residues for GF(p), ``Fraction``
for Q) so that equality and hashing are structural and stable across runs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, FieldMismatch, Singular


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == "prime":
            if not isinstance(self.p, int) or not _is_prime(self.p) or self.p >= 2**31:
                raise ValueError(f"GF(p) needs a prime p < 2^31, got {self.p!r}")
        elif self.kind == "rational":
            if self.p is not None:
                raise ValueError("the rational field takes no modulus")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls("prime", p)

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls("rational")

    @property
    def is_finite(self) -> bool:
        return self.kind == "prime"

    def __str__(self) -> str:
        return f"GF({self.p})" if self.is_finite else "Q"

    def to_json(self) -> dict:
        return {"kind": "prime", "p": self.p} if self.is_finite else {"kind": "rational"}

    # raw value arithmetic

    def normalize(self, value):
        """Canonical raw value for an int, Fraction, or decimal/fraction string."""
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatch(f"{value.field} scalar used in {self}")
            return value.value
        if self.kind == "prime":
            if isinstance(value, Fraction):
                den = value.denominator % self.p
                if den == 0:
                    raise ZeroDivisionError(f"denominator {value.denominator} vanishes in {self}")
                return value.numerator * pow(den, -1, self.p) % self.p
            return int(value) % self.p
        if isinstance(value, float):
            raise TypeError("floating point values are not accepted")
        return Fraction(value)

    def parse(self, text: str):
        text = text.strip()
        num, sep, den = text.partition("/")
        try:
            frac = Fraction(int(num), int(den)) if sep else Fraction(int(num))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse {text!r} as an exact scalar") from exc
        return self.normalize(frac)

    @property
    def zero(self):
        return 0 if self.is_finite else Fraction(0)

    @property
    def one(self):
        return 1 if self.is_finite else Fraction(1)

    def add(self, a, b):
        return (a + b) % self.p if self.is_finite else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.is_finite else a - b

    def mul(self, a, b):
        return a * b % self.p if self.is_finite else a * b

    def neg(self, a):
        return -a % self.p if self.is_finite else -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p) if self.is_finite else 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def fmt(self, a) -> str:
        return str(a)

    def elements(self) -> list:
        if not self.is_finite:
            raise ValueError("Q has no finite element list")
        return list(range(self.p))


@dataclass(frozen=True)
class Scalar:
    """A field element wrapped with its field, for the public API."""

    value: object
    field: FieldSpec

    @classmethod
    def of(cls, value, field: FieldSpec) -> "Scalar":
        return cls(field.normalize(value), field)

    def _other(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.value
        return self.field.normalize(other)

    def __add__(self, other):
        return Scalar(self.field.add(self.value, self._other(other)), self.field)

    def __sub__(self, other):
        return Scalar(self.field.sub(self.value, self._other(other)), self.field)

    def __mul__(self, other):
        return Scalar(self.field.mul(self.value, self._other(other)), self.field)

    def __truediv__(self, other):
        return Scalar(self.field.div(self.value, self._other(other)), self.field)

    def __neg__(self):
        return Scalar(self.field.neg(self.value), self.field)

    def inverse(self) -> "Scalar":
        return Scalar(self.field.inv(self.value), self.field)

    def __str__(self) -> str:
        return self.field.fmt(self.value)


Vector = tuple


class Mat:
    """Immutable n x n matrix over a FieldSpec."""

    __slots__ = ("field", "n", "rows", "_hash")

    def __init__(self, rows: Iterable[Iterable], field: FieldSpec):
        norm = field.normalize
        rows = tuple(tuple(norm(x) for x in row) for row in rows)
        n = len(rows)
        if n == 0:
            raise DimensionMismatch("a matrix needs order at least 1")
        if any(len(r) != n for r in rows):
            raise DimensionMismatch(f"rows of a {n}x{n} matrix must have length {n}")
        self._set(field, n, rows)

    def _set(self, field, n, rows):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "_hash", hash((field, rows)))

    def __setattr__(self, name, value):
        raise AttributeError("Mat is immutable")

    @classmethod
    def _raw(cls, field: FieldSpec, rows: tuple) -> "Mat":
        m = object.__new__(cls)
        m._set(field, len(rows), rows)
        return m

    @classmethod
    def identity(cls, n: int, field: FieldSpec) -> "Mat":
        z, o = field.zero, field.one
        return cls._raw(field, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, n: int, field: FieldSpec) -> "Mat":
        z = field.zero
        return cls._raw(field, tuple((z,) * n for _ in range(n)))

    @classmethod
    def diag(cls, values: Sequence, field: FieldSpec) -> "Mat":
        vals = [field.normalize(v) for v in values]
        n = len(vals)
        z = field.zero
        return cls._raw(field, tuple(tuple(vals[i] if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[Vector], field: FieldSpec) -> "Mat":
        n = len(columns)
        if any(len(c) != n for c in columns):
            raise DimensionMismatch("need n columns of length n")
        return cls._raw(field, tuple(tuple(columns[j][i] for j in range(n)) for i in range(n)))

    @classmethod
    def block_diag(cls, blocks: Sequence["Mat"], field: FieldSpec) -> "Mat":
        n = sum(b.n for b in blocks)
        z = field.zero
        rows = []
        offset = 0
        for b in blocks:
            if b.field != field:
                raise FieldMismatch(f"{b.field} block in {field} matrix")
            for r in b.rows:
                rows.append((z,) * offset + r + (z,) * (n - offset - b.n))
            offset += b.n
        return cls._raw(field, tuple(rows))

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.field == other.field and self.rows == other.rows

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Mat({self.grid()}, {self.field})"

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entry(self, i: int, j: int) -> Scalar:
        return Scalar(self.rows[i][j], self.field)

    def grid(self) -> list[list[str]]:
        fmt = self.field.fmt
        return [[fmt(x) for x in row] for row in self.rows]

    def __mul__(self, other: "Mat") -> "Mat":
        return mat_mul(self, other)

    def transpose(self) -> "Mat":
        return Mat._raw(self.field, tuple(zip(*self.rows)))

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.rows for x in row)

    def is_identity(self) -> bool:
        return self == Mat.identity(self.n, self.field)

    def trace(self):
        t = self.field.zero
        for i in range(self.n):
            t = self.field.add(t, self.rows[i][i])
        return t

    def block(self, r0: int, r1: int, c0: int, c1: int) -> tuple:
        """Raw rows of the rectangular block [r0:r1, c0:c1]."""
        return tuple(row[c0:c1] for row in self.rows[r0:r1])

    def principal_block(self, start: int, stop: int) -> "Mat":
        return Mat._raw(self.field, self.block(start, stop, start, stop))

    def pad(self, extra: int, value) -> "Mat":
        """diag(self, value, ..., value) with ``extra`` new coordinates."""
        z = self.field.zero
        n = self.n + extra
        rows = [r + (z,) * extra for r in self.rows]
        for k in range(extra):
            i = self.n + k
            rows.append(tuple(value if j == i else z for j in range(n)))
        return Mat._raw(self.field, tuple(rows))

    def rank(self) -> int:
        return rank(self)

    def inverse(self) -> "Mat":
        return inverse(self)

    def mat_vec(self, v: Vector) -> Vector:
        f = self.field
        if f.is_finite:
            return tuple(sum(x * y for x, y in zip(r, v)) % f.p for r in self.rows)
        return tuple(sum((x * y for x, y in zip(r, v)), Fraction(0)) for r in self.rows)


def _check_pair(a: Mat, b: Mat) -> None:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    if a.n != b.n:
        raise DimensionMismatch(f"order {a.n} vs {b.n}")


def mat_mul(a: Mat, b: Mat) -> Mat:
    _check_pair(a, b)
    cols = tuple(zip(*b.rows))
    f = a.field
    if f.is_finite:
        p = f.p
        rows = tuple(tuple(sum(x * y for x, y in zip(r, c)) % p for c in cols) for r in a.rows)
    else:
        zero = Fraction(0)
        rows = tuple(tuple(sum((x * y for x, y in zip(r, c)), zero) for c in cols) for r in a.rows)
    return Mat._raw(f, rows)


def _rref(rows: list[list], ncols: int, field: FieldSpec) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; pivot = first nonzero entry top-down in each column left-right."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                k = rows[i][c]
                rows[i] = [field.sub(x, field.mul(k, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(a: Mat) -> int:
    return len(_rref(a.rows, a.n, a.field)[1])


def inverse(a: Mat) -> Mat:
    n, f = a.n, a.field
    ident = Mat.identity(n, f).rows
    aug = [list(r) + list(e) for r, e in zip(a.rows, ident)]
    red, pivots = _rref(aug, n, f)
    if pivots[:n] != list(range(n)):
        raise Singular(rank(a), n)
    return Mat._raw(f, tuple(tuple(r[n:]) for r in red))


def column_space_basis(a: Mat) -> list[Vector]:
    _, pivots = _rref(a.rows, a.n, a.field)
    return [a.column(c) for c in pivots]


def kernel_basis(a: Mat) -> list[Vector]:
    f, n = a.field, a.n
    red, pivots = _rref(a.rows, n, f)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [f.zero] * n
        v[fc] = f.one
        for i, pc in enumerate(pivots):
            v[pc] = f.neg(red[i][fc])
        basis.append(tuple(v))
    return basis


def conjugate(p: Mat, a: Mat) -> Mat:
    """p^-1 a p."""
    return mat_mul(mat_mul(inverse(p), a), p)


def char_poly(a: Mat) -> list:
    """Coefficients of det(xI - a), lowest degree first, monic.

    Hessenberg reduction by similarity followed by the standard three-term
    recurrence; valid over any field.
    """
    f, n = a.field, a.n
    h = [list(r) for r in a.rows]
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if h[i][m - 1] != 0), None)
        if piv is None:
            continue
        if piv != m:
            h[piv], h[m] = h[m], h[piv]
            for row in h:
                row[piv], row[m] = row[m], row[piv]
        for i in range(m + 1, n):
            u = f.div(h[i][m - 1], h[m][m - 1])
            if u == 0:
                continue
            h[i] = [f.sub(x, f.mul(u, y)) for x, y in zip(h[i], h[m])]
            for row in h:
                row[m] = f.add(row[m], f.mul(u, row[i]))

    def pmul_linear(poly, c):
        # (x - c) * poly
        out = [f.zero] * (len(poly) + 1)
        for k, coef in enumerate(poly):
            out[k + 1] = f.add(out[k + 1], coef)
            out[k] = f.sub(out[k], f.mul(c, coef))
        return out

    polys = [[f.one]]
    for k in range(1, n + 1):
        nxt = pmul_linear(polys[k - 1], h[k - 1][k - 1])
        prod = f.one
        for i in range(k - 1, 0, -1):
            prod = f.mul(prod, h[i][i - 1])
            coef = f.mul(prod, h[i - 1][k - 1])
            if coef == 0:
                continue
            for d, c in enumerate(polys[i - 1]):
                nxt[d] = f.sub(nxt[d], f.mul(coef, c))
        polys.append(nxt)
    return polys[n]


def _poly_eval(poly: Sequence, x, f: FieldSpec):
    acc = f.zero
    for c in reversed(poly):
        acc = f.add(f.mul(acc, x), c)
    return acc


def _divide_linear(poly: Sequence, root, f: FieldSpec) -> list:
    """Quotient of poly by (x - root), assuming root is a root."""
    n = len(poly) - 1
    q = [f.zero] * n
    carry = f.zero
    for k in range(n, 0, -1):
        carry = f.add(poly[k], f.mul(carry, root))
        q[k - 1] = carry
    return q


def _divisors(m: int) -> list[int]:
    m = abs(m)
    out = []
    d = 1
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            if d * d != m:
                out.append(m // d)
        d += 1
    return sorted(out)


def _candidate_roots(poly: Sequence, f: FieldSpec) -> list:
    if f.is_finite:
        return list(range(f.p))
    # rational root test on the integer-scaled polynomial
    from math import lcm

    scale = lcm(*(Fraction(c).denominator for c in poly))
    ints = [int(c * scale) for c in poly]
    while ints and ints[0] == 0:
        ints = ints[1:]
    cands = {Fraction(0)}
    if ints:
        for num in _divisors(ints[0]):
            for den in _divisors(ints[-1]):
                cands.add(Fraction(num, den))
                cands.add(Fraction(-num, den))
    return sorted(cands)


def char_poly_roots_in_field(a: Mat) -> list[Scalar]:
    """Roots of the characteristic polynomial lying in the field, with multiplicity."""
    f = a.field
    poly = char_poly(a)
    roots = []
    for c in _candidate_roots(poly, f):
        while len(poly) > 1 and _poly_eval(poly, c, f) == 0:
            roots.append(Scalar(c, f))
            poly = _divide_linear(poly, c, f)
    return roots


def random_invertible(n: int, field: FieldSpec, rng: random.Random, bound: int = 3) -> Mat:
    """Uniformly drawn invertible matrix (entries in [-bound, bound] over Q)."""
    while True:
        if field.is_finite:
            rows = [[rng.randrange(field.p) for _ in range(n)] for _ in range(n)]
        else:
            rows = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
        m = Mat(rows, field)
        if rank(m) == n:
            return m
