"""Class ideals, the ideal decomposition, the J-partition and simplicity diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import (PASS, SuperAlgebra, Verdict, annihilator, brackets_of, centralizer,
                      classify_subspace, compute_J, derived_space, ideal_closure, is_zero)
from .connections import (DEFAULT_ORBIT_BOUND, AsymmetricRootSet, ClassPartition,
                          ConnectionClass, RootContext, connection_classes, find_nJ_connection)
from .linalg import Subspace, echelonize, format_scalar, sum_of
from .roots import RootFunctional, SplitDecomposition


def _fmt(values) -> list:
    return [format_scalar(x) for x in values]


def _vec_text(v) -> list:
    return [format_scalar(x) for x in v]


def _space_dict(s: Subspace) -> dict:
    return {"dim": s.dim, "basis": [_vec_text(v) for v in s.basis]}


# -- class ideals ----------------------------------------------------------------

@dataclass(frozen=True)
class ClassIdeal:
    cls: ConnectionClass
    I_H: Subspace
    V: Subspace
    I: Subspace
    is_ideal: Verdict
    notes: tuple = ()

    @property
    def direct(self) -> bool:
        return self.I.dim == self.I_H.dim + self.V.dim

    def to_dict(self) -> dict:
        return {"class": self.cls.to_dict(), "I_H": _space_dict(self.I_H), "V": _space_dict(self.V),
                "I": _space_dict(self.I), "is_ideal": self.is_ideal.to_dict(),
                "notes": list(self.notes)}


def _cross_spaces(d: SplitDecomposition, beta: RootFunctional):
    """``L_{beta psi^-1}`` and ``L_{-beta phi^-1}`` plus notes for missing functionals."""
    notes = []
    out = []
    for f, label in ((d.twist(beta, 0, -1), "beta psi^-1"), (-d.twist(beta, -1, 0), "-beta phi^-1")):
        if not f.is_zero() and f not in d.spaces:
            notes.append(f"{label} = {_fmt(f.values)} for beta = {_fmt(beta.values)} "
                         "is neither a root nor zero; contributes zero")
        out.append(d.space(f).total)
    return out[0], out[1], notes


def h_part(a: SuperAlgebra, d: SplitDecomposition, beta: RootFunctional) -> tuple:
    """``[L_{beta psi^-1}, L_{-beta phi^-1}]`` with notes."""
    left, right, notes = _cross_spaces(d, beta)
    return brackets_of(a, left, right), notes


def class_ideal(a: SuperAlgebra, d: SplitDecomposition, c: ConnectionClass) -> ClassIdeal:
    n = a.dim
    pieces, notes, roots = [], [], []
    for values in c.members:
        beta = d.functional(values)
        s, nt = h_part(a, d, beta)
        pieces.append(s)
        notes.extend(nt)
        roots.append(d.space(beta).total)
    I_H = sum_of(pieces, n)
    V = sum_of(roots, n)
    I = I_H + V
    flags = classify_subspace(a, I)
    if flags.ideal:
        verdict = PASS
    else:
        missing = [k for k in ("graded", "phi_stable", "psi_stable") if not getattr(flags, k)]
        verdict = Verdict(False, "not_ideal", _fmt(c.representative), detail=_ideal_failure(a, I, missing))
    return ClassIdeal(c, I_H, V, I, verdict, tuple(notes))


def _ideal_failure(a: SuperAlgebra, s: Subspace, missing: list) -> str:
    if missing:
        return "fails: " + ", ".join(missing)
    for x in s.basis:
        for j in range(a.dim):
            b = a.basis_vector(j)
            for w, side in ((a.bracket(x, b), "right"), (a.bracket(b, x), "left")):
                if not s.contains_vector(w):
                    return f"not closed under {side} bracket with {a.basis_names[j]}"
    return "not an ideal"


# -- the decomposition -----------------------------------------------------------

@dataclass(frozen=True)
class PrimaryDecomposition:
    U: Subspace
    S: Subspace  # sum over all roots of the H-parts
    ideals: tuple
    spans: bool
    orthogonality: tuple  # ((i, j, Verdict), ...) for i < j
    classes: ClassPartition

    @property
    def orthogonal(self) -> bool:
        return all(v.ok for _, _, v in self.orthogonality)

    def to_dict(self) -> dict:
        return {"U": _space_dict(self.U), "S": _space_dict(self.S),
                "ideals": [c.to_dict() for c in self.ideals], "spans": self.spans,
                "orthogonality": [{"i": i, "j": j, **v.to_dict()} for i, j, v in self.orthogonality]}


def _orthogonality(a: SuperAlgebra, x: Subspace, y: Subspace) -> Verdict:
    for u in x.basis:
        for v in y.basis:
            for p, q in ((u, v), (v, u)):
                w = a.bracket(p, q)
                if not is_zero(w):
                    return Verdict(False, "bracket", None, w, (p, q), "class ideals do not annihilate")
    return PASS


def primary_decomposition(a: SuperAlgebra, d: SplitDecomposition,
                          classes: ClassPartition | None = None,
                          orbit_bound: int = DEFAULT_ORBIT_BOUND,
                          strict: bool = True) -> PrimaryDecomposition:
    """``L = U + sum of class ideals`` with ``U`` a pivot complement in ``H``."""
    n = a.dim
    if classes is None:
        classes = connection_classes(RootContext.from_decomposition(d, orbit_bound, strict))
    ideals = tuple(class_ideal(a, d, c) for c in classes)
    S = sum_of([h_part(a, d, r)[0] for r in d.roots], n)
    S_in_H = S & d.H
    U = S_in_H.complement_in(d.H)
    total = sum_of([U] + [c.I for c in ideals], n)
    orth = tuple((i, j, _orthogonality(a, ideals[i].I, ideals[j].I))
                 for i in range(len(ideals)) for j in range(i + 1, len(ideals)))
    return PrimaryDecomposition(U, S, ideals, total.is_full(), orth, classes)


@dataclass(frozen=True)
class DirectSumReport:
    center_zero: Verdict
    H_generated: Verdict
    direct: Verdict
    ideals_span: Verdict

    @property
    def hypotheses(self) -> bool:
        return self.center_zero.ok and self.H_generated.ok

    @property
    def conclusion(self) -> bool:
        return self.direct.ok and self.ideals_span.ok

    @property
    def implication_ok(self) -> bool:
        return (not self.hypotheses) or self.conclusion

    def to_dict(self) -> dict:
        return {"center_zero": self.center_zero.to_dict(), "H_generated": self.H_generated.to_dict(),
                "direct": self.direct.to_dict(), "ideals_span": self.ideals_span.to_dict(),
                "hypotheses": self.hypotheses, "conclusion": self.conclusion,
                "implication_ok": self.implication_ok}


def direct_sum_check(a: SuperAlgebra, d: SplitDecomposition, p: PrimaryDecomposition) -> DirectSumReport:
    n = a.dim
    Z = annihilator(a)
    cz = PASS if Z.dim == 0 else Verdict(False, "center", None, Z.basis[0], detail=f"dim Z = {Z.dim}")
    if p.S == d.H:
        hg = PASS
    else:
        extra = [v for v in d.H.basis if not p.S.contains_vector(v)]
        hg = Verdict(False, "H_generated", None, extra[0] if extra else None,
                     detail=f"sum of H-parts has dim {p.S.dim}, H has dim {d.H.dim}")
    total = sum_of([c.I for c in p.ideals], n)
    dims = sum(c.I.dim for c in p.ideals)
    direct = PASS if dims == total.dim else Verdict(
        False, "direct", None, detail=f"dimensions add to {dims}, sum has dim {total.dim}")
    spans = PASS if total.is_full() else Verdict(
        False, "ideals_span", None, detail=f"class ideals span dim {total.dim} of {n}")
    return DirectSumReport(cz, hg, direct, spans)


# -- maximal length and the J-partition -----------------------------------------

@dataclass(frozen=True)
class MaximalLength:
    ok: bool
    literal: bool
    dims: tuple  # (values, even dim, odd dim)

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {"ok": self.ok, "reading": "literal" if self.literal else "one-dimensional",
                "dims": [{"root": _fmt(v), "even": e, "odd": o} for v, e, o in self.dims]}


def maximal_length_check(d: SplitDecomposition, literal: bool = False) -> MaximalLength:
    """Every root space one-dimensional; ``literal`` asks for dimension one in each parity."""
    dims = tuple(d.summary())
    if literal:
        ok = all(e == 1 and o == 1 for _, e, o in dims)
    else:
        ok = all(e + o == 1 for _, e, o in dims)
    return MaximalLength(ok, literal, dims)


@dataclass(frozen=True)
class JPartition:
    J: Subspace
    lambda_J: dict  # parity -> frozenset of value tuples
    lambda_notJ: dict
    mixed: dict

    def to_dict(self) -> dict:
        def side(m):
            return {str(p): [_fmt(v) for v in sorted(m.get(p, ()))] for p in (0, 1)}
        return {"J": _space_dict(self.J), "lambda_J": side(self.lambda_J),
                "lambda_notJ": side(self.lambda_notJ), "mixed": side(self.mixed)}

    def roots(self, which: str) -> set:
        m = self.lambda_J if which == "J" else self.lambda_notJ
        return set(m[0]) | set(m[1])


def lambda_partition_J(a: SuperAlgebra, d: SplitDecomposition, J: Subspace | None = None) -> JPartition:
    if J is None:
        J = compute_J(a).space
    out = {"J": {0: set(), 1: set()}, "notJ": {0: set(), 1: set()}, "mixed": {0: set(), 1: set()}}
    for r in d.roots:
        for p in (0, 1):
            part = d.spaces[r].part(p)
            if part.dim == 0:
                continue
            k = (part & J).dim
            key = "J" if k == part.dim else "notJ" if k == 0 else "mixed"
            out[key][p].add(r.values)
    freeze = lambda m: {p: frozenset(s) for p, s in m.items()}  # noqa: E731
    return JPartition(J, freeze(out["J"]), freeze(out["notJ"]), freeze(out["mixed"]))


@dataclass(frozen=True)
class RootMultiplicativity:
    status: str  # "true", "false", "not-applicable"
    counterexamples: tuple = ()  # (condition, alpha, parity, other, parity)

    @property
    def ok(self) -> bool:
        return self.status == "true"

    def to_dict(self) -> dict:
        return {"status": self.status,
                "counterexamples": [{"condition": c, "alpha": _fmt(x), "alpha_parity": i,
                                     "other": _fmt(y), "other_parity": j}
                                    for c, x, i, y, j in self.counterexamples]}


def root_multiplicativity_check(a: SuperAlgebra, d: SplitDecomposition, p: JPartition,
                                literal: bool = False) -> RootMultiplicativity:
    if not maximal_length_check(d, literal):
        return RootMultiplicativity("not-applicable")
    rootset = {r.values for r in d.roots}
    lam_J_all = p.roots("J")
    bad = []

    def comp(values, parity):
        return d.spaces[d.functional(values)].part(parity)

    def nonzero(x: Subspace, y: Subspace) -> bool:
        return brackets_of(a, x, y).dim > 0

    for i in (0, 1):
        for al in sorted(p.lambda_notJ[i]):
            fa = d.twist(d.functional(al), -1, 0)
            for j in (0, 1):
                for be in sorted(p.lambda_notJ[j]):
                    s = (fa + d.twist(d.functional(be), 0, -1)).values
                    if s in rootset and not nonzero(comp(al, i), comp(be, j)):
                        bad.append((1, al, i, be, j))
                for ga in sorted(p.lambda_J[j]):
                    s = (fa + d.twist(d.functional(ga), 0, -1)).values
                    if s in lam_J_all and not nonzero(comp(ga, j), comp(al, i)):
                        bad.append((2, al, i, ga, j))
    return RootMultiplicativity("false" if bad else "true", tuple(bad))


LIE_ANNIHILATOR_VARIANTS = ("printed", "notj")


def lie_annihilator(a: SuperAlgebra, d: SplitDecomposition, p: JPartition,
                    variant: str = "printed") -> Subspace:
    """Vectors killing the root spaces of the J-side (``printed``) or not-J side (``notj``) from both sides."""
    if variant not in LIE_ANNIHILATOR_VARIANTS:
        raise ValueError(f"unknown Lie-annihilator variant {variant!r}")
    roots = p.roots("J" if variant == "printed" else "notJ")
    vecs = [v for r in sorted(roots) for v in d.spaces[d.functional(r)].total.basis]
    return centralizer(a, vecs)


# -- simplicity ---------------------------------------------------------------

@dataclass(frozen=True)
class Falsifier:
    seed: str
    ideal: Subspace

    def to_dict(self) -> dict:
        return {"seed": self.seed, "ideal": _space_dict(self.ideal)}


@dataclass(frozen=True)
class SimplicityReport:
    verdict: str  # "not-simple", "simple-consistent", "inconclusive"
    conditions: dict  # name -> bool or None (undetermined)
    witness: Falsifier | None
    seeds_tried: int
    reasons: tuple
    notes: tuple = ()
    prime: str = "undefined term; excluded from the verdict"

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "conditions": dict(self.conditions),
                "witness": self.witness.to_dict() if self.witness else None,
                "seeds_tried": self.seeds_tried, "reasons": list(self.reasons),
                "notes": list(self.notes), "prime": self.prime}


def is_falsifier(a: SuperAlgebra, s: Subspace, J: Subspace) -> bool:
    """A proper nonzero ideal different from J."""
    return 0 < s.dim < a.dim and s != J and classify_subspace(a, s).ideal


def _falsifier_seeds(a: SuperAlgebra, d: SplitDecomposition, ideals, J: Subspace):
    for k, c in enumerate(ideals):
        yield f"class ideal {k}", c.I
    for r in d.roots:
        for v in d.spaces[r].total.basis:
            yield f"root vector of {_fmt(r.values)}", echelonize([v], a.dim)
    for p in (0, 1):
        for v in d.L0.part(p).basis:
            yield f"H vector (parity {p})", echelonize([v], a.dim)
    yield "J", J


def nJ_connectivity(ctx: RootContext, p: JPartition) -> tuple:
    """Whether every pair of graded roots is not-J-connected; ``(bool | None, detail)``."""
    entries = sorted((v, i) for m in (p.lambda_J, p.lambda_notJ) for i in (0, 1) for v in m[i])
    for x, i in entries:
        for y, j in entries:
            try:
                c = find_nJ_connection(ctx, p, x, i, y, j)
            except AsymmetricRootSet as e:
                return None, str(e)
            if c is None:
                return False, f"{_fmt(x)} (parity {i}) is not connected to {_fmt(y)} (parity {j})"
    return True, ""


def simplicity_report(a: SuperAlgebra, d: SplitDecomposition, orbit_bound: int = DEFAULT_ORBIT_BOUND,
                      strict: bool = True, literal_maximal_length: bool = False,
                      lie_variant: str = "printed", prim: PrimaryDecomposition | None = None,
                      part: JPartition | None = None) -> SimplicityReport:
    """Necessary conditions plus a search for a proper ideal; never certifies simplicity."""
    ctx = RootContext.from_decomposition(d, orbit_bound, strict)
    if prim is None:
        prim = primary_decomposition(a, d, connection_classes(ctx))
    if part is None:
        part = lambda_partition_J(a, d)
    J = part.J
    notes = []
    if not d.split_ok:
        notes.append("the decomposition is not split; conditions are evaluated on it as computed")

    cond = {}
    cond["derived_nonzero"] = derived_space(a).dim > 0
    cond["H_generated"] = prim.S == d.H
    cond["single_class"] = len(prim.classes) == 1
    ml = maximal_length_check(d, literal_maximal_length)
    cond["maximal_length"] = ml.ok
    rm = root_multiplicativity_check(a, d, part, literal_maximal_length)
    cond["root_multiplicative"] = None if rm.status == "not-applicable" else rm.ok
    cond["lie_annihilator_zero"] = lie_annihilator(a, d, part, lie_variant).dim == 0
    conn, detail = nJ_connectivity(ctx, part)
    cond["nJ_connected"] = conn
    if detail:
        notes.append(detail)

    witness = None
    tried = 0
    if cond["derived_nonzero"]:
        for label, seed in _falsifier_seeds(a, d, prim.ideals, J):
            tried += 1
            s = ideal_closure(a, seed, graded=True)
            if is_falsifier(a, s, J):
                witness = Falsifier(label, s)
                break

    reasons = []
    if not cond["derived_nonzero"]:
        verdict = "not-simple"
        reasons.append("[L, L] = 0")
    elif witness is not None:
        verdict = "not-simple"
        reasons.append(f"proper ideal generated by {witness.seed}")
    elif all(v is True for v in cond.values()):
        verdict = "simple-consistent"
        reasons.append("all necessary conditions hold and no proper ideal was found")
    else:
        verdict = "inconclusive"
        reasons.extend(f"{k} is {v}" for k, v in cond.items() if v is not True)
    return SimplicityReport(verdict, cond, witness, tried, tuple(reasons), tuple(notes))
