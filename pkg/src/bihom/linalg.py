"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction` values, vectors are tuples of
fractions and subspaces are stored by their reduced row-echelon basis, so two
subspaces are equal exactly when their bases are equal.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)

_SCALAR_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


class DimensionError(ValueError):
    """Operands live in ambient spaces of different dimension."""


class NotInvariantError(ValueError):
    """A subspace is not mapped into itself by the given matrix."""


class SingularMatrixError(ValueError):
    pass


# -- scalars -----------------------------------------------------------------

def parse_scalar(text) -> Fraction:
    """Parse ``"p/q"`` (or ``"p"``, or an int) into a Fraction.

    Floats and decimal notation are rejected on purpose.
    """
    if isinstance(text, bool):
        raise ValueError(f"malformed scalar {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise ValueError(f"malformed scalar {text!r}")
    m = _SCALAR_RE.match(text)
    if m is None:
        raise ValueError(f"malformed scalar {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in scalar {text!r}")
    return Fraction(num, den)


def format_scalar(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# -- vectors -----------------------------------------------------------------

def vector(values: Iterable) -> Vector:
    return tuple(Fraction(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> Vector:
    v = [ZERO] * n
    v[i] = ONE
    return tuple(v)


def is_zero(v: Sequence) -> bool:
    return not any(v)


def add(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v: Sequence) -> Vector:
    c = Fraction(c)
    return tuple(c * a for a in v)


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v) if a and b), ZERO)


def lincomb(coeffs: Sequence, vectors: Sequence[Sequence], n: int) -> Vector:
    out = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if not c:
            continue
        for k, x in enumerate(v):
            if x:
                out[k] += c * x
    return tuple(out)


# -- matrices ----------------------------------------------------------------

@dataclass(frozen=True)
class Matrix:
    """Dense rational matrix acting on column vectors.

    Column ``j`` holds the coordinates of the image of the ``j``-th basis
    vector, so ``m @ v`` applies the map to ``v``.
    """

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise DimensionError("ragged matrix rows")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(tuple(unit_vector(n, i) for i in range(n)))

    @classmethod
    def diagonal(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        return cls(tuple(
            tuple(Fraction(entries[i]) if i == j else ZERO for j in range(n))
            for i in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int | None = None) -> "Matrix":
        if not columns:
            return cls(tuple(() for _ in range(nrows or 0)))
        return cls(tuple(zip(*columns)))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self) -> tuple:
        return (self.nrows, self.ncols)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> "Matrix":
        return Matrix(tuple(zip(*self.rows))) if self.rows else self

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.ncols:
            raise DimensionError(f"vector of length {len(v)} for {self.shape} matrix")
        return tuple(dot(r, v) for r in self.rows)

    def row_apply(self, a: Sequence) -> Vector:
        """Row vector times matrix: the functional ``a`` composed with the map."""
        if len(a) != self.nrows:
            raise DimensionError(f"row vector of length {len(a)} for {self.shape} matrix")
        return tuple(dot(a, c) for c in self.columns())

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            cols = other.columns()
            return Matrix(tuple(tuple(dot(r, c) for c in cols) for r in self.rows))
        return self.apply(other)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch")
        return Matrix(tuple(add(a, b) for a, b in zip(self.rows, other.rows)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch")
        return Matrix(tuple(sub(a, b) for a, b in zip(self.rows, other.rows)))

    def scaled(self, c) -> "Matrix":
        return Matrix(tuple(scale(c, r) for r in self.rows))

    def shifted(self, lam) -> "Matrix":
        """``self - lam * identity``."""
        lam = Fraction(lam)
        return Matrix(tuple(
            tuple(x - lam if i == j else x for j, x in enumerate(r))
            for i, r in enumerate(self.rows)))

    def rank(self) -> int:
        return echelonize(self.rows, self.ncols).dim

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise SingularMatrixError("non-square matrix has no inverse")
        n = self.nrows
        aug = [list(r) + list(unit_vector(n, i)) for i, r in enumerate(self.rows)]
        rref, pivots = _rref(aug, 2 * n)
        if pivots[:n] != list(range(n)) or len(pivots) < n:
            raise SingularMatrixError("matrix is singular")
        return Matrix(tuple(tuple(r[n:]) for r in rref[:n]))

    def is_invertible(self) -> bool:
        return self.is_square() and self.rank() == self.nrows

    def power(self, k: int) -> "Matrix":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = Matrix.identity(self.nrows)
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def to_text(self) -> list:
        return [[format_scalar(x) for x in r] for r in self.rows]


# -- row reduction -----------------------------------------------------------

def _rref(rows: list, ncols: int):
    """In-place reduced row-echelon form of a list of mutable rows."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pr = rows[r]
        inv = 1 / pr[c]
        if inv != 1:
            for k in range(c, len(pr)):
                if pr[k]:
                    pr[k] *= inv
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    ri = rows[i]
                    for k in range(c, len(pr)):
                        if pr[k]:
                            ri[k] -= f * pr[k]
        pivots.append(c)
        r += 1
    return rows, pivots


@dataclass(frozen=True)
class Subspace:
    """A subspace of ``K^ambient_dim`` held in canonical reduced echelon form."""

    ambient_dim: int
    basis: tuple
    pivots: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, (), ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, tuple(unit_vector(n, i) for i in range(n)), tuple(range(n)))

    @classmethod
    def coordinate(cls, n: int, indices: Iterable[int]) -> "Subspace":
        return echelonize([unit_vector(n, i) for i in indices], n)

    def residual(self, v: Sequence) -> Vector:
        """``v`` minus its echelon projection; zero iff ``v`` lies in the span."""
        if len(v) != self.ambient_dim:
            raise DimensionError(f"vector of length {len(v)} in dimension {self.ambient_dim}")
        out = list(v)
        for b, p in zip(self.basis, self.pivots):
            c = out[p]
            if c:
                for k, x in enumerate(b):
                    if x:
                        out[k] -= c * x
        return tuple(out)

    def contains_vector(self, v: Sequence) -> bool:
        return is_zero(self.residual(v))

    def coordinates(self, v: Sequence) -> Vector:
        """Coordinates of ``v`` in the echelon basis (``v`` must lie in the span)."""
        if not self.contains_vector(v):
            raise ValueError("vector not in subspace")
        return tuple(Fraction(v[p]) for p in self.pivots)

    def contains(self, other: "Subspace") -> bool:
        _check_dims(self, other)
        return all(self.contains_vector(b) for b in other.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        _check_dims(self, other)
        return echelonize(self.basis + other.basis, self.ambient_dim)

    def __and__(self, other: "Subspace") -> "Subspace":
        return self.intersect(other)

    def intersect(self, other: "Subspace") -> "Subspace":
        _check_dims(self, other)
        if self.is_zero() or other.is_zero():
            return Subspace.zero(self.ambient_dim)
        if self.contains(other):
            return other
        if other.contains(self):
            return self
        # x = sum c_i a_i = sum d_j b_j  <=>  (c, d) in ker [A^T | -B^T]
        n = self.ambient_dim
        k = self.dim
        cols = list(self.basis) + [scale(-1, b) for b in other.basis]
        eqs = [tuple(c[i] for c in cols) for i in range(n)]
        ker = nullspace(eqs, len(cols))
        return echelonize([lincomb(w[:k], self.basis, n) for w in ker.basis], n)

    def image(self, m: Matrix) -> "Subspace":
        if m.ncols != self.ambient_dim:
            raise DimensionError("matrix does not act on this ambient space")
        return echelonize([m.apply(b) for b in self.basis], m.nrows)

    def is_invariant(self, m: Matrix) -> bool:
        return all(self.contains_vector(m.apply(b)) for b in self.basis)

    def restrict(self, m: Matrix) -> Matrix:
        """Matrix of ``m`` on this (invariant) subspace in the echelon basis."""
        cols = []
        for b in self.basis:
            w = m.apply(b)
            if not self.contains_vector(w):
                raise NotInvariantError("subspace is not invariant under the matrix")
            cols.append(tuple(w[p] for p in self.pivots))
        return Matrix.from_columns(cols, self.dim)

    def complement_in(self, ambient: "Subspace") -> "Subspace":
        """Greedy complement of ``self`` inside ``ambient`` using ambient's basis order."""
        _check_dims(self, ambient)
        acc = self
        chosen = []
        for b in ambient.basis:
            if not acc.contains_vector(b):
                chosen.append(b)
                acc = acc + echelonize([b], self.ambient_dim)
        return echelonize(chosen, self.ambient_dim)

    def to_text(self) -> list:
        return [[format_scalar(x) for x in b] for b in self.basis]


def _check_dims(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError(f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}")


def echelonize(vectors: Iterable[Sequence], dim: int | None = None) -> Subspace:
    """Span of ``vectors`` in canonical reduced row-echelon form.

    ``dim`` is required when ``vectors`` may be empty.
    """
    rows = [list(map(Fraction, v)) for v in vectors]
    if dim is None:
        if not rows:
            raise DimensionError("ambient dimension unknown for an empty list")
        dim = len(rows[0])
    for r in rows:
        if len(r) != dim:
            raise DimensionError(f"vector of length {len(r)} in dimension {dim}")
    rows = [r for r in rows if any(r)]
    rows, pivots = _rref(rows, dim)
    basis = tuple(tuple(r) for r in rows[:len(pivots)])
    return Subspace(dim, basis, tuple(pivots))


def span(vectors: Iterable[Sequence], dim: int) -> Subspace:
    return echelonize(vectors, dim)


def nullspace(equations: Sequence[Sequence], ncols: int) -> Subspace:
    """Solution space ``{x : e . x = 0 for every row e}``."""
    red = echelonize(equations, ncols)
    free = [c for c in range(ncols) if c not in set(red.pivots)]
    vecs = []
    for f in free:
        x = [ZERO] * ncols
        x[f] = ONE
        for row, p in zip(red.basis, red.pivots):
            x[p] = -row[f]
        vecs.append(x)
    return echelonize(vecs, ncols)


def subspace_algebra(a: Subspace, b: Subspace, op: str):
    """``op`` is one of ``"sum"``, ``"intersect"``, ``"contains"``."""
    _check_dims(a, b)
    if op == "sum":
        return a + b
    if op == "intersect":
        return a.intersect(b)
    if op == "contains":
        return a.contains(b)
    raise ValueError(f"unknown subspace operation {op!r}")


def sum_of(spaces: Iterable[Subspace], dim: int) -> Subspace:
    vecs = []
    for s in spaces:
        vecs.extend(s.basis)
    return echelonize(vecs, dim)


# -- polynomials and eigenvalues ---------------------------------------------
# Polynomials are coefficient lists, lowest degree first.

def _trim(p: list) -> list:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def poly_eval(p: Sequence, x) -> Fraction:
    acc = ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _poly_divmod(a: list, b: list):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [ZERO] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    lead = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] / lead
        q[shift] = c
        for i, bc in enumerate(b):
            r[i + shift] -= c * bc
        r = _trim(r)
    return _trim(q), r


def _poly_gcd(a: list, b: list) -> list:
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if not a:
        return a
    lead = a[-1]
    return [c / lead for c in a]


def charpoly(m: Matrix) -> list:
    """Characteristic polynomial ``det(x I - m)`` via Hessenberg reduction."""
    if not m.is_square():
        raise DimensionError("characteristic polynomial of a non-square matrix")
    n = m.nrows
    h = [list(r) for r in m.rows]
    for k in range(1, n - 1):
        i = next((i for i in range(k, n) if h[i][k - 1]), None)
        if i is None:
            continue
        if i != k:
            h[i], h[k] = h[k], h[i]
            for row in h:
                row[i], row[k] = row[k], row[i]
        piv = h[k][k - 1]
        for j in range(k + 1, n):
            if h[j][k - 1]:
                u = h[j][k - 1] / piv
                for c in range(n):
                    h[j][c] -= u * h[k][c]
                for row in h:
                    row[k] += u * row[j]
    polys = [[ONE]]
    for mm in range(1, n + 1):
        prev = polys[mm - 1]
        cur = [ZERO] + list(prev)
        for i, c in enumerate(prev):
            cur[i] -= h[mm - 1][mm - 1] * c
        t = ONE
        for i in range(1, mm):
            t *= h[mm - i][mm - i - 1]
            if not t:
                break
            coef = t * h[mm - i - 1][mm - 1]
            if coef:
                for k, c in enumerate(polys[mm - i - 1]):
                    cur[k] -= coef * c
        polys.append(cur)
    return polys[n]


def _divisors(n: int) -> list:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def rational_roots(p: Sequence) -> list:
    """Distinct rational roots of a polynomial, sorted ascending."""
    p = _trim([Fraction(c) for c in p])
    if len(p) <= 1:
        return []
    roots = set()
    # square-free part keeps the divisor search small
    deriv = [i * c for i, c in enumerate(p)][1:]
    g = _poly_gcd(p, deriv)
    if len(g) > 1:
        p, _ = _poly_divmod(p, g)
    if not p[0]:
        roots.add(ZERO)
        while p and not p[0]:
            p = p[1:]
    if len(p) <= 1:
        return sorted(roots)
    lcm = 1
    for c in p:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in p]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    ints = [c // g for c in ints]
    for num in _divisors(ints[0]):
        for den in _divisors(ints[-1]):
            for sign in (1, -1):
                x = Fraction(sign * num, den)
                if x not in roots and poly_eval(ints, x) == 0:
                    roots.add(x)
    return sorted(roots)


@dataclass(frozen=True)
class EigenResult:
    pairs: tuple  # ((eigenvalue, Subspace), ...), eigenvalues ascending
    uncaptured_dim: int

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)


def rational_eigenpairs(m: Matrix, restrict_to: Subspace | None = None) -> EigenResult:
    """Rational eigenvalues of ``m`` on an invariant subspace with exact eigenspaces.

    ``uncaptured_dim`` counts the part of ``restrict_to`` that is not spanned
    by rational eigenvectors (irrational spectrum or nontrivial Jordan blocks).
    """
    if not m.is_square():
        raise DimensionError("eigenpairs of a non-square matrix")
    n = m.nrows
    if restrict_to is None:
        restrict_to = Subspace.full(n)
    if restrict_to.ambient_dim != n:
        raise DimensionError("subspace and matrix dimensions differ")
    if restrict_to.is_zero():
        return EigenResult((), 0)
    r = restrict_to.restrict(m)
    pairs = []
    captured = 0
    for lam in rational_roots(charpoly(r)):
        ker = nullspace(r.shifted(lam).rows, r.ncols)
        vecs = [lincomb(c, restrict_to.basis, n) for c in ker.basis]
        space = echelonize(vecs, n)
        pairs.append((lam, space))
        captured += space.dim
    return EigenResult(tuple(pairs), restrict_to.dim - captured)


def solve(columns: Sequence[Sequence], target: Sequence):
    """Coordinates ``c`` with ``sum c_i columns[i] = target``, or ``None``."""
    n = len(target)
    k = len(columns)
    eqs = [tuple(col[r] for col in columns) + (-Fraction(target[r]),) for r in range(n)]
    ker = nullspace(eqs, k + 1)
    for w in ker.basis:
        if w[-1]:
            return tuple(x / w[-1] for x in w[:k])
    return None
