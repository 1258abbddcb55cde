"""Root spaces relative to a map-stable abelian subalgebra ``H``.

A vector ``v`` lies in the root space of ``alpha`` when
``[h, phi(v)] = alpha(h) * phi(psi(v))`` for every ``h`` in the even part of
``H``; equivalently ``T_h v = alpha(h) v`` with
``T_h = (phi psi)^{-1} ad_h phi``.  Roots are found by refining the rational
eigenspaces of the ``T_h`` one basis vector at a time, separately on the even
and odd coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import PASS, SuperAlgebra, Verdict, centralizer, classify_subspace, is_graded
from .linalg import (
    ZERO,
    Matrix,
    SingularMatrixError,
    Subspace,
    Vector,
    echelonize,
    format_scalar,
    is_zero,
    nullspace,
    rational_eigenpairs,
)


class RootSystemError(ValueError):
    """``H`` or the structure maps do not allow a root-space computation."""


@dataclass(frozen=True, order=True)
class RootFunctional:
    """A linear functional on ``H_even``, stored by its values on ``h_basis``.

    Equality and ordering use the values only; functionals from different
    ``H`` bases are not meant to be compared.
    """

    values: tuple
    h_basis: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(x) for x in self.values))

    def is_zero(self) -> bool:
        return not any(self.values)

    def __neg__(self) -> "RootFunctional":
        return RootFunctional(tuple(-x for x in self.values), self.h_basis)

    def __add__(self, other: "RootFunctional") -> "RootFunctional":
        return RootFunctional(tuple(x + y for x, y in zip(self.values, other.values)), self.h_basis)

    def __call__(self, h: Sequence) -> Fraction:
        """Evaluate on a vector of ``H_even`` given in ambient coordinates."""
        coords = echelonize(self.h_basis, len(h)).coordinates(h) if self.h_basis else ()
        # h_basis is already echelon, so the pivot read-out matches its order
        return sum((c * x for c, x in zip(coords, self.values)), ZERO)

    def text(self) -> list:
        return [format_scalar(x) for x in self.values]


@dataclass(frozen=True)
class GradedSpace:
    even: Subspace
    odd: Subspace

    @property
    def total(self) -> Subspace:
        return self.even + self.odd

    @property
    def dim(self) -> int:
        return self.even.dim + self.odd.dim

    def is_zero(self) -> bool:
        return self.dim == 0

    def part(self, parity: int) -> Subspace:
        return self.odd if parity else self.even

    def parities(self) -> tuple:
        return tuple(p for p, s in ((0, self.even), (1, self.odd)) if s.dim)

    @classmethod
    def zero(cls, n: int) -> "GradedSpace":
        return cls(Subspace.zero(n), Subspace.zero(n))


# -- H-side data ----------------------------------------------------------------

@dataclass(frozen=True)
class CartanData:
    H: Subspace
    H_even: Subspace
    h_basis: tuple
    phi_H: Matrix  # restriction to H_even in the h_basis
    psi_H: Matrix
    T: tuple  # T_h for h in h_basis


def cartan_data(a: SuperAlgebra, H: Subspace) -> CartanData:
    if H.ambient_dim != a.dim:
        raise RootSystemError("H lives in a different ambient space")
    if not H.is_invariant(a.phi) or not H.is_invariant(a.psi):
        raise RootSystemError("H is not stable under phi and psi")
    pp = a.phi @ a.psi
    try:
        pp_inv = pp.inverse()
    except SingularMatrixError:
        raise RootSystemError("phi psi is singular") from None
    H_even = H.intersect(a.parity_space(0))
    h_basis = H_even.basis
    T = tuple(pp_inv @ a.left_matrix(h) @ a.phi for h in h_basis)
    if h_basis:
        phi_H = H_even.restrict(a.phi)
        psi_H = H_even.restrict(a.psi)
    else:
        phi_H = psi_H = Matrix(())
    return CartanData(H, H_even, h_basis, phi_H, psi_H, T)


def root_equation_defect(a: SuperAlgebra, h_basis: Sequence, values: Sequence, v: Sequence) -> Vector:
    """Stacked ``[h, phi v] - alpha(h) phi psi v`` over the ``h_basis``.

    Evaluated straight from the bracket, independent of the ``T_h`` operators.
    """
    phv = a.phi.apply(v)
    ppv = a.phi.apply(a.psi.apply(v))
    out = []
    for h, lam in zip(h_basis, values):
        w = a.bracket(h, phv)
        out.extend(x - lam * y for x, y in zip(w, ppv))
    return tuple(out)


def root_space(a: SuperAlgebra, H: Subspace, alpha: RootFunctional | Sequence) -> GradedSpace:
    """Exact root space of ``alpha``, split into its even and odd parts."""
    cd = cartan_data(a, H)
    values = alpha.values if isinstance(alpha, RootFunctional) else tuple(Fraction(x) for x in alpha)
    if len(values) != len(cd.h_basis):
        raise RootSystemError(f"functional has {len(values)} values, H_even has dimension {len(cd.h_basis)}")
    rows = []
    for t, lam in zip(cd.T, values):
        rows.extend(t.shifted(lam).rows)
    parts = []
    for p in (0, 1):
        idx = a.indices_of_parity(p)
        # restrict the joint kernel to the coordinates of one parity
        eqs = [tuple(r[i] for i in idx) for r in rows]
        ker = nullspace(eqs, len(idx)) if idx else Subspace.zero(0)
        vecs = []
        for b in ker.basis:
            full = [ZERO] * a.dim
            for i, x in zip(idx, b):
                full[i] = x
            vecs.append(full)
        parts.append(echelonize(vecs, a.dim))
    return GradedSpace(*parts)


# -- the decomposition ------------------------------------------------------

@dataclass(frozen=True)
class SplitDecomposition:
    H: Subspace
    h_basis: tuple
    roots: tuple  # sorted RootFunctionals, nonzero
    spaces: dict  # RootFunctional -> GradedSpace
    L0: GradedSpace
    split_ok: bool
    uncaptured_dim: int
    H_abelian: Verdict
    operators_commute: Verdict
    phi_H: Matrix
    psi_H: Matrix
    reasons: tuple = ()

    @property
    def ambient_dim(self) -> int:
        return self.H.ambient_dim

    def functional(self, values: Iterable) -> RootFunctional:
        return RootFunctional(tuple(values), self.h_basis)

    def zero_functional(self) -> RootFunctional:
        return RootFunctional((ZERO,) * len(self.h_basis), self.h_basis)

    def space(self, alpha: RootFunctional) -> GradedSpace:
        """Root space of any functional: ``L0`` for zero, empty when not a root."""
        if alpha.is_zero():
            return self.L0
        return self.spaces.get(alpha, GradedSpace.zero(self.ambient_dim))

    def roots_of_parity(self, p: int) -> list:
        return [r for r in self.roots if self.spaces[r].part(p).dim]

    def twist(self, alpha: RootFunctional, z1: int, z2: int) -> RootFunctional:
        return root_twist(alpha, self.phi_H, self.psi_H, z1, z2)

    def summary(self) -> list:
        return [(r.values, self.spaces[r].even.dim, self.spaces[r].odd.dim) for r in self.roots]


def _joint_eigenspaces(cd: CartanData, space: Subspace):
    n = space.ambient_dim
    cur = [((), space)]
    for t in cd.T:
        eig = rational_eigenpairs(t, space)
        nxt = []
        for vals, W in cur:
            for lam, E in eig.pairs:
                X = W.intersect(E)
                if X.dim:
                    nxt.append((vals + (lam,), X))
        cur = nxt
    captured = sum(W.dim for _, W in cur)
    return cur, space.dim - captured


def _commute_verdict(cd: CartanData) -> Verdict:
    for i, s in enumerate(cd.T):
        for j in range(i + 1, len(cd.T)):
            t = cd.T[j]
            d = (s @ t) - (t @ s)
            if any(any(r) for r in d.rows):
                col = next(c for c in range(d.ncols) if any(d.column(c)))
                return Verdict(False, "operators_commute", (i, j), d.column(col),
                               detail="T_h operators do not commute")
    return PASS


def h_abelian_verdict(a: SuperAlgebra, H: Subspace) -> Verdict:
    for i, x in enumerate(H.basis):
        for j, y in enumerate(H.basis):
            w = a.bracket(x, y)
            if not is_zero(w):
                return Verdict(False, "bracket", (i, j), w, (x, y), "H is not abelian")
    return PASS


def find_root_system(a: SuperAlgebra, H: Subspace | None = None) -> SplitDecomposition:
    """Simultaneous rational eigenspace decomposition of the ``T_h``."""
    if H is None:
        H = a.H_subspace()
        if H is None:
            raise RootSystemError("no H given and the algebra carries none")
    cd = cartan_data(a, H)
    n = a.dim
    found: dict = {}
    uncaptured = 0
    for p in (0, 1):
        pieces, lost = _joint_eigenspaces(cd, a.parity_space(p))
        uncaptured += lost
        for vals, W in pieces:
            slot = found.setdefault(vals, [Subspace.zero(n), Subspace.zero(n)])
            slot[p] = slot[p] + W
    zero_vals = (ZERO,) * len(cd.h_basis)
    z = found.pop(zero_vals, [Subspace.zero(n), Subspace.zero(n)])
    L0 = GradedSpace(*z)
    roots = sorted(RootFunctional(v, cd.h_basis) for v in found)
    spaces = {r: GradedSpace(*found[r.values]) for r in roots}
    reasons = []
    if uncaptured:
        reasons.append(f"{uncaptured} dimension(s) not spanned by rational root vectors")
    if L0.total != H:
        reasons.append("the zero root space differs from H")
    abelian = h_abelian_verdict(a, H)
    if not is_graded(a, H):
        reasons.append("H is not graded")
    split_ok = not uncaptured and L0.total == H and is_graded(a, H)
    return SplitDecomposition(H, cd.h_basis, tuple(roots), spaces, L0, split_ok, uncaptured,
                              abelian, _commute_verdict(cd), cd.phi_H, cd.psi_H, tuple(reasons))


# -- maximality of H ------------------------------------------------------------

@dataclass(frozen=True)
class MaximalityVerdict:
    status: str  # "confirmed" | "refuted" | "inconclusive"
    centralizer: Subspace
    witness: Vector | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        d = {"status": self.status, "centralizer_dim": self.centralizer.dim}
        if self.witness is not None:
            d["witness"] = [format_scalar(x) for x in self.witness]
        if self.detail:
            d["detail"] = self.detail
        return d


def _map_closure(a: SuperAlgebra, s: Subspace) -> Subspace:
    maps = [a.phi, a.psi]
    for m in (a.phi, a.psi):
        try:
            maps.append(m.inverse())
        except SingularMatrixError:
            pass
    while True:
        t = s + echelonize([m.apply(v) for m in maps for v in s.basis], a.dim)
        if t == s:
            return s
        s = t


def check_maximal_abelian(a: SuperAlgebra, H: Subspace) -> MaximalityVerdict:
    C = centralizer(a, H.basis)
    ab = h_abelian_verdict(a, H)
    if not ab.ok:
        return MaximalityVerdict("refuted", C, None, "H is not abelian")
    if C == H:
        return MaximalityVerdict("confirmed", C)
    even, odd = a.graded_parts(C)
    for v in even.basis + odd.basis:
        if H.contains_vector(v):
            continue
        ext = _map_closure(a, H + echelonize([v], a.dim))
        if not C.contains(ext):
            continue
        flags = classify_subspace(a, ext)
        if flags.abelian and flags.graded:
            return MaximalityVerdict("refuted", C, v, "H extends to a larger abelian subalgebra")
    return MaximalityVerdict("inconclusive", C, None,
                             "the centralizer is larger than H but no homogeneous extension was found")


# -- twisting functionals ------------------------------------------------------

def root_twist(alpha: RootFunctional, phi_H: Matrix, psi_H: Matrix, z1: int, z2: int) -> RootFunctional:
    """The functional ``h -> alpha(phi^z1 psi^z2 h)``."""
    if not alpha.values:
        return alpha
    m = phi_H.power(z1) @ psi_H.power(z2)
    return RootFunctional(m.row_apply(alpha.values), alpha.h_basis)


# -- the root lemma suite ----------------------------------------------------

@dataclass(frozen=True)
class RootLemmaReport:
    phi_shifts_roots: Verdict
    psi_shifts_roots: Verdict
    bracket_adds_roots: Verdict
    roots_closed_under_twists: Verdict
    zero_space_is_H: Verdict
    bracket_failures: tuple = ()

    FIELDS = ("phi_shifts_roots", "psi_shifts_roots", "bracket_adds_roots",
              "roots_closed_under_twists", "zero_space_is_H")

    @property
    def all_ok(self) -> bool:
        return all(getattr(self, f).ok for f in self.FIELDS)

    def to_dict(self) -> dict:
        d = {f: getattr(self, f).to_dict() for f in self.FIELDS}
        d["bracket_failures"] = [
            {"alpha": [format_scalar(x) for x in al], "beta": [format_scalar(x) for x in be]}
            for al, be in self.bracket_failures]
        return d


def _space_mismatch(a: SuperAlgebra, d: SplitDecomposition, got: Subspace,
                    want_alpha: RootFunctional, label: str, src: RootFunctional) -> Verdict:
    want = d.space(want_alpha).total
    if got == want:
        return PASS
    for v in got.basis:
        if not want.contains_vector(v):
            return Verdict(False, "root_space", (label, tuple(src.values)),
                           root_equation_defect(a, d.h_basis, want_alpha.values, v), (v, want_alpha.values),
                           f"{label} image of a root space leaves the predicted root space")
    v = next(v for v in want.basis if not got.contains_vector(v))
    return Verdict(False, "root_space", (label, tuple(src.values)), got.residual(v), (v, want_alpha.values),
                   f"{label} image of a root space misses part of the predicted root space")


def _map_lemma(a: SuperAlgebra, d: SplitDecomposition, m: Matrix, label: str, which: int) -> Verdict:
    try:
        m_inv = m.inverse()
    except SingularMatrixError:
        return Verdict(False, "singular", (label,), detail=f"{label} is singular")
    for alpha in [d.zero_functional()] + list(d.roots):
        L = d.space(alpha).total
        # m(L_alpha) = L_{alpha m^{-1}} and m^{-1}(L_alpha) = L_{alpha m}
        fwd = d.twist(alpha, -1, 0) if which == 0 else d.twist(alpha, 0, -1)
        bwd = d.twist(alpha, 1, 0) if which == 0 else d.twist(alpha, 0, 1)
        v = _space_mismatch(a, d, L.image(m), fwd, label, alpha)
        if not v.ok:
            return v
        v = _space_mismatch(a, d, L.image(m_inv), bwd, label + "^-1", alpha)
        if not v.ok:
            return v
    return PASS


def verify_root_lemmas(a: SuperAlgebra, d: SplitDecomposition) -> RootLemmaReport:
    """Check how the maps and the bracket move root spaces, on this decomposition."""
    phi_v = _map_lemma(a, d, a.phi, "phi", 0)
    psi_v = _map_lemma(a, d, a.psi, "psi", 1)

    funcs = [d.zero_functional()] + list(d.roots)
    first = None
    failures = []
    for al in funcs:
        La = d.space(al).total
        for be in funcs:
            Lb = d.space(be).total
            target = d.twist(al, -1, 0) + d.twist(be, 0, -1)
            T = d.space(target).total
            bad = None
            for x in La.basis:
                for y in Lb.basis:
                    w = a.bracket(x, y)
                    if not T.contains_vector(w):
                        bad = (x, y, w)
                        break
                if bad:
                    break
            if bad:
                failures.append((al.values, be.values))
                if first is None:
                    x, y, w = bad
                    first = Verdict(False, "root_bracket", (tuple(al.values), tuple(be.values)),
                                    root_equation_defect(a, d.h_basis, target.values, w),
                                    (x, y, target.values),
                                    "bracket of root spaces leaves the predicted root space")
    bracket_v = first if first is not None else PASS

    closed = PASS
    rootset = set(d.roots)
    for al in d.roots:
        for z in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            tw = d.twist(al, *z)
            if tw not in rootset:
                closed = Verdict(False, "twist_closure", (tuple(al.values), z), tw.values,
                                 detail="a twisted root is not a root")
                break
        if not closed.ok:
            break

    if d.L0.total == d.H:
        zero_v = PASS
    else:
        extra = [v for v in d.L0.total.basis if not d.H.contains_vector(v)]
        missing = [v for v in d.H.basis if not d.L0.total.contains_vector(v)]
        v = extra[0] if extra else missing[0]
        ref = d.H if extra else d.L0.total
        zero_v = Verdict(False, "zero_space", ("extra" if extra else "missing",), ref.residual(v), (v,),
                         "the zero root space differs from H")
    return RootLemmaReport(phi_v, psi_v, bracket_v, closed, zero_v, tuple(failures))


def replay_root_bracket(a: SuperAlgebra, d: SplitDecomposition, verdict: Verdict) -> Vector:
    """Re-evaluate a bracket-lemma witness straight from the root equation."""
    x, y, target = verdict.operands
    return root_equation_defect(a, d.h_basis, target, a.bracket(x, y))
