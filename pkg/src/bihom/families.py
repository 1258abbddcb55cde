"""Concrete algebras: matrix Lie superalgebras, direct sums, Leibniz doubles and
the five-dimensional example with its two product-table completions.

Everything here produces plain :class:`~bihom.algebra.SuperAlgebra` values;
the shipped JSON fixtures are generated from these builders.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import SuperAlgebra, yau_twist
from .linalg import ZERO, Matrix, is_zero, solve


# -- matrix superalgebras ----------------------------------------------------

def matrix_unit(i: int, j: int, size: int) -> tuple:
    return tuple(tuple(Fraction(int(r == i and c == j)) for c in range(size)) for r in range(size))


def _mat_mul(a, b):
    n = len(a)
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(n)), ZERO) for j in range(n))
                 for i in range(n))


def _flatten(m) -> tuple:
    return tuple(x for row in m for x in row)


def _super_parity(m, even_size: int) -> int:
    ps = {int((i < even_size) != (j < even_size))
          for i, row in enumerate(m) for j, x in enumerate(row) if x}
    if len(ps) != 1:
        raise ValueError("basis matrix is not homogeneous")
    return ps.pop()


@dataclass(frozen=True)
class MatrixSuperalgebra:
    """A Lie superalgebra of ``(m|n)`` supermatrices under the supercommutator."""

    algebra: SuperAlgebra
    matrices: tuple
    even_size: int

    @classmethod
    def build(cls, names: Sequence[str], matrices: Sequence, even_size: int,
              name: str = "", H: Sequence[int] | None = None) -> "MatrixSuperalgebra":
        mats = [tuple(tuple(Fraction(x) for x in r) for r in m) for m in matrices]
        parity = [_super_parity(m, even_size) for m in mats]
        flat = [_flatten(m) for m in mats]
        products = {}
        for i, a in enumerate(mats):
            for j, b in enumerate(mats):
                sign = -1 if parity[i] and parity[j] else 1
                ab, ba = _mat_mul(a, b), _mat_mul(b, a)
                c = tuple(tuple(x - sign * y for x, y in zip(r1, r2)) for r1, r2 in zip(ab, ba))
                fc = _flatten(c)
                if is_zero(fc):
                    continue
                coords = solve(flat, fc)
                if coords is None:
                    raise ValueError(f"matrices are not closed under the bracket ({names[i]}, {names[j]})")
                products[(i, j)] = coords
        alg = SuperAlgebra.from_products(names, parity, products, name=name, H=H)
        return cls(alg, tuple(mats), even_size)

    def conjugation(self, diag: Sequence) -> Matrix:
        """Automorphism ``X -> D X D^{-1}`` for ``D = diag(diag)`` in the algebra basis."""
        d = [Fraction(x) for x in diag]
        flat = [_flatten(m) for m in self.matrices]
        cols = []
        for m in self.matrices:
            img = tuple(tuple(d[i] * x / d[j] for j, x in enumerate(row)) for i, row in enumerate(m))
            coords = solve(flat, _flatten(img))
            if coords is None:
                raise ValueError("conjugation leaves the algebra")
            cols.append(coords)
        return Matrix.from_columns(cols)


def gl(m: int, n: int = 0) -> MatrixSuperalgebra:
    """``gl(m|n)`` with the diagonal units first, then off-diagonal units row by row."""
    size = m + n
    names, mats = [], []
    for i in range(size):
        names.append(f"h{i + 1}")
        mats.append(matrix_unit(i, i, size))
    for i in range(size):
        for j in range(size):
            if i != j:
                names.append(f"E{i + 1}{j + 1}")
                mats.append(matrix_unit(i, j, size))
    return MatrixSuperalgebra.build(names, mats, m, name=f"gl({m}|{n})", H=range(size))


def gl11() -> MatrixSuperalgebra:
    """``gl(1|1)`` with basis ``h1, h2, e, f``; ``[e, f] = [f, e] = h1 + h2``."""
    names = ["h1", "h2", "e", "f"]
    mats = [matrix_unit(0, 0, 2), matrix_unit(1, 1, 2), matrix_unit(0, 1, 2), matrix_unit(1, 0, 2)]
    return MatrixSuperalgebra.build(names, mats, 1, name="gl(1|1)", H=[0, 1])


def sl2() -> MatrixSuperalgebra:
    """``sl2`` with basis ``h, e, f``."""
    h = ((1, 0), (0, -1))
    return MatrixSuperalgebra.build(["h", "e", "f"], [h, matrix_unit(0, 1, 2), matrix_unit(1, 0, 2)],
                                    2, name="sl2", H=[0])


def sl3() -> MatrixSuperalgebra:
    units = [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)]
    h1 = ((1, 0, 0), (0, -1, 0), (0, 0, 0))
    h2 = ((0, 0, 0), (0, 1, 0), (0, 0, -1))
    names = ["h1", "h2"] + [f"E{i + 1}{j + 1}" for i, j in units]
    mats = [h1, h2] + [matrix_unit(i, j, 3) for i, j in units]
    return MatrixSuperalgebra.build(names, mats, 3, name="sl3", H=[0, 1])


def sl21() -> MatrixSuperalgebra:
    """``sl(2|1)``: Cartan ``E11+E33, E22+E33``, two even and four odd root vectors."""
    units = [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)]
    h1 = ((1, 0, 0), (0, 0, 0), (0, 0, 1))
    h2 = ((0, 0, 0), (0, 1, 0), (0, 0, 1))
    names = ["h1", "h2"] + [f"E{i + 1}{j + 1}" for i, j in units]
    mats = [h1, h2] + [matrix_unit(i, j, 3) for i, j in units]
    return MatrixSuperalgebra.build(names, mats, 2, name="sl(2|1)", H=[0, 1])


# -- generic constructions ---------------------------------------------------

def abelian(parity: Sequence[int], name: str = "") -> SuperAlgebra:
    names = [f"a{i + 1}" for i in range(len(parity))]
    return SuperAlgebra.from_products(names, parity, {}, name=name or f"abelian{len(parity)}",
                                      H=range(len(parity)))


def _block_diag(blocks: Sequence[Matrix]) -> Matrix:
    n = sum(b.nrows for b in blocks)
    rows = []
    off = 0
    for b in blocks:
        for r in b.rows:
            rows.append((ZERO,) * off + tuple(r) + (ZERO,) * (n - off - b.ncols))
        off += b.ncols
    return Matrix(tuple(rows))


def direct_sum(*algebras: SuperAlgebra, name: str = "", suffix: bool = True) -> SuperAlgebra:
    """Block direct sum; basis labels get a ``_k`` block suffix when ``suffix``."""
    names, parity, products, H = [], [], {}, []
    off = 0
    has_H = all(a.H is not None for a in algebras)
    for k, a in enumerate(algebras, 1):
        names.extend(f"{x}_{k}" if suffix else x for x in a.basis_names)
        parity.extend(a.parity)
        for (i, j), entry in a.products:
            products[(i + off, j + off)] = {kk + off: c for kk, c in entry}
        if has_H:
            H.extend(h + off for h in a.H)
        off += a.dim
    phi = _block_diag([a.phi for a in algebras])
    psi = _block_diag([a.psi for a in algebras])
    return SuperAlgebra.from_products(names, parity, products, phi, psi,
                                      name or " + ".join(a.name for a in algebras),
                                      H if has_H else None)


def leibniz_double(g: SuperAlgebra, name: str = "") -> SuperAlgebra:
    """``g + g'`` with ``[x, y'] = [x, y]'`` and ``[x', .] = 0``.

    This is the hemisemidirect product of a Lie superalgebra with its adjoint
    module: a left Leibniz superalgebra that is not Lie as soon as ``g`` is
    not abelian.  Its Cartan is the Cartan of ``g`` plus the copy of it.
    """
    n = g.dim
    names = list(g.basis_names) + [f"{x}'" for x in g.basis_names]
    parity = list(g.parity) * 2
    products = {}
    for (i, j), entry in g.products:
        products[(i, j)] = {k: c for k, c in entry}
        products[(i, j + n)] = {k + n: c for k, c in entry}
    phi = _block_diag([g.phi, g.phi])
    psi = _block_diag([g.psi, g.psi])
    H = None if g.H is None else list(g.H) + [h + n for h in g.H]
    return SuperAlgebra.from_products(names, parity, products, phi, psi,
                                      name or f"double({g.name})", H)


# -- the five-dimensional example --------------------------------------------

E5_NAMES = ["u1", "u2", "u3", "e1", "e2"]
E5_PARITY = [0, 0, 0, 1, 1]


def _e5_products(completed: bool) -> dict:
    u1, u2, u3, e1, e2 = range(5)
    p = {
        (u2, u1): {u3: -1}, (u1, u2): {u3: 1}, (u1, u3): {u1: -2},
        (u3, u1): {u1: 2}, (u3, u2): {u2: -2}, (u2, u3): {u2: 2},
        (e1, u2): {e2: 1}, (e1, u3): {e1: -1}, (e2, u1): {e1: 1}, (e2, u3): {e2: 1},
    }
    if completed:
        # the u3 row that reproduces the printed odd root values
        p[(u3, e1)] = {e1: -1}
        p[(u3, e2)] = {e2: 1}
    return p


def e5(completed: bool = True) -> SuperAlgebra:
    """The five-dimensional example.

    ``completed=True`` adds ``[u3, e1] = -e1`` and ``[u3, e2] = e2`` to the
    listed products (fixture ``E5``); ``False`` keeps every unlisted product
    zero (fixture ``E5z``).
    """
    phi = Matrix.diagonal([1, 1, 1, -1, -1])
    psi = Matrix.diagonal([-1, -1, -1, 1, 1])
    return SuperAlgebra.from_products(E5_NAMES, E5_PARITY, _e5_products(completed), phi, psi,
                                      "E5" if completed else "E5z", H=[2])


def sl2_leibniz_twisted() -> SuperAlgebra:
    """``sl2`` twisted by ``phi = diag(1, 2, 1/2)`` on ``(h, e, f)`` and ``psi = id``."""
    base = sl2().algebra
    return yau_twist(base, Matrix.diagonal([1, 2, Fraction(1, 2)]), Matrix.identity(3),
                     name="sl2-leibniz-twisted")


def gl11_twisted() -> SuperAlgebra:
    m = gl11()
    phi = m.conjugation([2, 1])
    psi = m.conjugation([1, -3])
    return yau_twist(m.algebra, phi, psi, name="gl11-twisted")


def two_block() -> SuperAlgebra:
    g = gl11().algebra
    return direct_sum(g, g, name="two-block")


FIXTURE_BUILDERS = {
    "E5": lambda: e5(True),
    "E5z": lambda: e5(False),
    "gl11": lambda: gl11().algebra,
    "gl11-twisted": gl11_twisted,
    "sl2-leibniz-twisted": sl2_leibniz_twisted,
    "two-block": two_block,
    "abelian": lambda: abelian([0, 0], name="abelian"),
}


# -- random Yau twists of split Lie superalgebras ----------------------------

_SCALARS = [Fraction(x) for x in (1, -1, 2, -2, 3, Fraction(1, 2), Fraction(-1, 3), Fraction(2, 3))]

_BLOCKS = [
    ("sl2", 3, sl2),
    ("gl11", 4, gl11),
    ("gl2", 4, lambda: gl(2, 0)),
    ("sl3", 8, sl3),
    ("sl21", 8, sl21),
    ("ab0", 1, None),
    ("ab1", 1, None),
]


def _random_block_map(rng: random.Random, key: str, block) -> Matrix:
    if block is None:
        return Matrix.diagonal([rng.choice(_SCALARS)])
    size = len(block.matrices[0])
    return block.conjugation([rng.choice(_SCALARS) for _ in range(size)])


def random_split_lie_twist(rng: random.Random, max_dim: int = 8) -> SuperAlgebra:
    """A random Yau twist of a direct sum of split Lie superalgebras.

    Blocks are drawn from sl2, gl(1|1), gl2, sl3, sl(2|1) and one-dimensional
    even or odd abelian pieces; the twisting maps are random diagonal
    conjugations (random nonzero scalars on abelian pieces).
    """
    chosen = []
    total = 0
    while True:
        options = [b for b in _BLOCKS if total + b[1] <= max_dim]
        if not options or (chosen and rng.random() < 0.35):
            break
        key, size, builder = rng.choice(options)
        chosen.append((key, builder() if builder else None))
        total += size
    algebras, phis, psis = [], [], []
    for key, block in chosen:
        if block is None:
            algebras.append(abelian([0 if key == "ab0" else 1], name=key))
        else:
            algebras.append(block.algebra)
        phis.append(_random_block_map(rng, key, block))
        psis.append(_random_block_map(rng, key, block))
    base = direct_sum(*algebras)
    return yau_twist(base, _block_diag(phis), _block_diag(psis),
                     name="twist(" + " + ".join(k for k, _ in chosen) + ")")
