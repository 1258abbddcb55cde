"""Connections between roots and the classes they induce.

All searches run on value tuples of root functionals.  ``S phi^-1`` below
means the functional ``h -> S(phi^{-1} h)``, computed as a row vector times the
restricted matrix.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .linalg import Matrix, format_scalar

DEFAULT_ORBIT_BOUND = 64


class OrbitDivergence(RuntimeError):
    """The twist orbit of a functional did not close up within the bound."""

    def __init__(self, root, bound: int):
        self.root = tuple(root)
        self.bound = bound
        super().__init__(f"twist orbit of {[format_scalar(x) for x in self.root]} "
                         f"exceeds {bound} functionals")


class AsymmetricRootSet(ValueError):
    pass


def _neg(v: tuple) -> tuple:
    return tuple(-x for x in v)


def _add(u: tuple, v: tuple) -> tuple:
    return tuple(x + y for x, y in zip(u, v))


def _vals(x) -> tuple:
    return tuple(Fraction(c) for c in getattr(x, "values", x))


@dataclass
class RootContext:
    """Roots plus the restricted maps, with cached twists.

    ``strict`` keeps the source and target twists to nonnegative exponents
    (``alpha phi^-n psi^-r`` with ``n, r >= 0``); the relaxed mode allows all
    integers.  For finite orbits both give the same sets.
    """

    roots: tuple
    phi_H: Matrix
    psi_H: Matrix
    orbit_bound: int = DEFAULT_ORBIT_BOUND
    strict: bool = True
    parities: dict = field(default_factory=dict)  # root -> tuple of parities
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.roots = tuple(sorted(_vals(r) for r in self.roots))
        if self.orbit_bound < 1:
            raise ValueError("orbit_bound must be at least 1")
        self.rootset = frozenset(self.roots)
        self.pm_roots = tuple(sorted(self.rootset | {_neg(r) for r in self.roots}))
        self.pm_set = frozenset(self.pm_roots)
        dim = len(self.roots[0]) if self.roots else self.phi_H.nrows
        if dim:
            self._phi_inv = self.phi_H.inverse()
            self._psi_inv = self.psi_H.inverse()
        else:
            self._phi_inv = self._psi_inv = self.phi_H

    @classmethod
    def from_decomposition(cls, d, orbit_bound: int = DEFAULT_ORBIT_BOUND, strict: bool = True):
        par = {r.values: d.spaces[r].parities() for r in d.roots}
        return cls(tuple(r.values for r in d.roots), d.phi_H, d.psi_H, orbit_bound, strict, par)

    def _tw(self, key: str, m: Matrix, v: tuple) -> tuple:
        k = (key, v)
        out = self._cache.get(k)
        if out is None:
            out = m.row_apply(v) if v else v
            self._cache[k] = out
        return out

    def phi_inv(self, v):  # v phi^-1
        return self._tw("fi", self._phi_inv, v)

    def psi_inv(self, v):  # v psi^-1
        return self._tw("si", self._psi_inv, v)

    def phi(self, v):
        return self._tw("f", self.phi_H, v)

    def psi(self, v):
        return self._tw("s", self.psi_H, v)


# -- orbits ---------------------------------------------------------------------

def _orbit_exponents(ctx: RootContext, alpha: tuple, integer: bool) -> dict:
    """Functionals ``alpha phi^-n psi^-r`` with the first exponents reaching them."""
    start = _vals(alpha)
    seen = {start: (0, 0)}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        n, r = seen[v]
        moves = [(ctx.phi_inv(v), (n + 1, r)), (ctx.psi_inv(v), (n, r + 1))]
        if integer:
            moves += [(ctx.phi(v), (n - 1, r)), (ctx.psi(v), (n, r - 1))]
        for w, ex in moves:
            if w not in seen:
                seen[w] = ex
                if len(seen) > ctx.orbit_bound:
                    raise OrbitDivergence(start, ctx.orbit_bound)
                queue.append(w)
    return seen


def root_orbit(alpha, phi_H: Matrix, psi_H: Matrix, bound: int = DEFAULT_ORBIT_BOUND) -> frozenset:
    """``{alpha phi^-n psi^-r : n, r >= 0}``; raises :class:`OrbitDivergence` past ``bound``."""
    ctx = RootContext((), phi_H, psi_H, bound)
    return frozenset(_orbit_exponents(ctx, _vals(alpha), integer=False))


# -- chains ---------------------------------------------------------------------

@dataclass(frozen=True)
class ConnectionChain:
    """A witness that ``alpha`` is connected to ``beta``.

    ``kind == "direct"``: ``beta = epsilon * alpha phi^z1 psi^z2``.
    ``kind == "chain"``: ``elements[0] = alpha phi^-n psi^-r``, the partial
    sums ``S_1 = a1 phi^-1 + a2 psi^-1``, ``S_{i+1} = S_i phi^-1 + a_{i+2} psi^-1``
    stay in the allowed set, and the last one equals
    ``target_sign * beta phi^-m psi^-s``.
    """

    kind: str
    alpha: tuple
    beta: tuple
    epsilon: int = 1
    z1: int = 0
    z2: int = 0
    elements: tuple = ()
    n: int = 0
    r: int = 0
    m: int = 0
    s: int = 0
    target_sign: int = 1
    partial_sums: tuple = ()
    element_parities: tuple = ()
    parity_trace: tuple = ()

    @property
    def alphas(self) -> tuple:
        return self.elements

    @property
    def length(self) -> int:
        return len(self.elements) if self.kind == "chain" else 1

    def to_dict(self) -> dict:
        fmt = lambda v: [format_scalar(x) for x in v]  # noqa: E731
        d = {"kind": self.kind, "alpha": fmt(self.alpha), "beta": fmt(self.beta)}
        if self.kind == "direct":
            d.update(epsilon=self.epsilon, z1=self.z1, z2=self.z2)
        else:
            d.update(elements=[fmt(e) for e in self.elements], n=self.n, r=self.r,
                     m=self.m, s=self.s, target_sign=self.target_sign,
                     partial_sums=[fmt(p) for p in self.partial_sums])
        if self.parity_trace:
            d["element_parities"] = list(self.element_parities)
            d["parity_trace"] = list(self.parity_trace)
        return d


def _direct(ctx: RootContext, alpha: tuple, beta: tuple) -> ConnectionChain | None:
    orb = _orbit_exponents(ctx, alpha, integer=True)
    hits = []
    for eps in (1, -1):
        w = beta if eps == 1 else _neg(beta)
        if w in orb:
            n, r = orb[w]
            hits.append((abs(n) + abs(r), -eps, n, r, eps))
    if not hits:
        return None
    _, _, n, r, eps = min(hits)
    return ConnectionChain("direct", alpha, beta, epsilon=eps, z1=-n, z2=-r)


def _targets(ctx: RootContext, beta: tuple) -> dict:
    out = {}
    orb = _orbit_exponents(ctx, beta, integer=not ctx.strict)
    for w, (m, s) in sorted(orb.items(), key=lambda kv: (abs(kv[1][0]) + abs(kv[1][1]), kv[1])):
        for sign in (1, -1):
            key = w if sign == 1 else _neg(w)
            out.setdefault(key, (sign, m, s))
    return out


def _bfs(ctx: RootContext, alpha: tuple, beta: tuple, sources, steps, allowed, target_ok):
    """Shortest chain search.

    ``sources``: sorted ``(state, element, n, r)``; ``steps``: sorted list of
    ``(gamma, parity)``; states are ``(functional, parity)``; ``allowed(state)``
    says whether a non-final partial sum may be visited; ``target_ok(state)``
    returns the target exponent record or ``None``.
    """
    parent = {}
    queue = deque()
    for state, elem, n, r in sources:
        if state not in parent:
            parent[state] = (None, (elem, state[1]), (n, r))
            queue.append(state)
    while queue:
        st = queue.popleft()
        base = ctx.phi_inv(st[0])
        for gamma, gp in steps:
            val = _add(base, ctx.psi_inv(gamma))
            nxt = (val, st[1] ^ gp if st[1] is not None else None)
            hit = target_ok(nxt)
            if hit is not None:
                return _unwind(parent, st, (gamma, gp), nxt, hit, alpha, beta)
            if nxt not in parent and allowed(nxt):
                parent[nxt] = (st, (gamma, gp), None)
                queue.append(nxt)
    return None


def _unwind(parent, st, last_step, final, hit, alpha, beta) -> ConnectionChain:
    steps = [last_step]
    sums = [final]
    cur = st
    while True:
        prev, step, ex = parent[cur]
        if prev is None:
            first, (n, r) = step, ex
            break
        steps.append(step)
        sums.append(cur)
        cur = prev
    steps.reverse()
    sums.reverse()
    elems = (first[0],) + tuple(s[0] for s in steps)
    eparity = (first[1],) + tuple(s[1] for s in steps)
    sign, m, s = hit
    has_parity = first[1] is not None
    return ConnectionChain(
        "chain", alpha, beta, elements=elems, n=n, r=r, m=m, s=s, target_sign=sign,
        partial_sums=tuple(x[0] for x in sums),
        element_parities=eparity if has_parity else (),
        parity_trace=tuple(x[1] for x in sums) if has_parity else ())


def find_connection(ctx: RootContext, alpha, beta) -> ConnectionChain | None:
    """Shortest connection from ``alpha`` to ``beta`` or ``None``.

    Ties are broken lexicographically on the value vectors of the chain
    elements, so the answer is deterministic.
    """
    alpha, beta = _vals(alpha), _vals(beta)
    d = _direct(ctx, alpha, beta)
    if d is not None:
        return d
    orb = _orbit_exponents(ctx, alpha, integer=not ctx.strict)
    sources = sorted(((w, None), w, n, r) for w, (n, r) in orb.items() if w in ctx.pm_set)
    targets = _targets(ctx, beta)
    steps = [(g, 0) for g in ctx.pm_roots]
    return _bfs(ctx, alpha, beta, sources, steps,
                allowed=lambda st: st[0] in ctx.pm_set,
                target_ok=lambda st: targets.get(st[0]))


# -- classes ---------------------------------------------------------------------

class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int) -> bool:
        a, b = self.find(i), self.find(j)
        if a == b:
            return False
        if b < a:
            a, b = b, a
        self.parent[b] = a
        return True


@dataclass(frozen=True)
class ConnectionClass:
    members: tuple  # sorted value tuples

    @property
    def representative(self) -> tuple:
        return self.members[0]

    def __contains__(self, root) -> bool:
        return _vals(root) in self.members

    def __len__(self) -> int:
        return len(self.members)

    def to_dict(self) -> dict:
        return {"representative": [format_scalar(x) for x in self.representative],
                "members": [[format_scalar(x) for x in m] for m in self.members]}


@dataclass(frozen=True)
class ClassPartition:
    classes: tuple
    chains: tuple  # witness chains for every merge

    def __iter__(self):
        return iter(self.classes)

    def __len__(self):
        return len(self.classes)

    def class_of(self, root) -> ConnectionClass:
        v = _vals(root)
        return next(c for c in self.classes if v in c.members)


def connection_classes(ctx, orbit_bound: int = DEFAULT_ORBIT_BOUND,
                       strict: bool = True) -> ClassPartition:
    """Partition of the roots by the symmetric-transitive closure of connectivity.

    Accepts a :class:`RootContext` or a split decomposition (then a context is
    built with ``orbit_bound`` and ``strict``).
    """
    if not isinstance(ctx, RootContext):
        ctx = RootContext.from_decomposition(ctx, orbit_bound, strict)
    roots = ctx.roots
    for r in roots:
        _orbit_exponents(ctx, r, integer=True)  # surface divergence up front
    uf = UnionFind(len(roots))
    chains = []
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if uf.find(i) == uf.find(j):
                continue
            c = find_connection(ctx, roots[i], roots[j]) or find_connection(ctx, roots[j], roots[i])
            if c is not None:
                uf.union(i, j)
                chains.append(c)
    groups: dict = {}
    for i, r in enumerate(roots):
        groups.setdefault(uf.find(i), []).append(r)
    classes = sorted((ConnectionClass(tuple(sorted(g))) for g in groups.values()),
                     key=lambda c: c.representative)
    return ClassPartition(tuple(classes), tuple(chains))


# -- connections avoiding J ---------------------------------------------------

def _check_symmetric(label: str, roots) -> None:
    s = set(roots)
    for r in s:
        if _neg(r) not in s:
            raise AsymmetricRootSet(f"{label} is not symmetric: contains "
                                    f"{[format_scalar(x) for x in r]} but not its negative")


def _flatten(part: dict) -> set:
    return {r for p in (0, 1) for r in part.get(p, ())}


def find_nJ_connection(ctx: RootContext, partition, alpha, i_alpha: int, beta, j_beta: int,
                       upsilon: str | None = None) -> ConnectionChain | None:
    """Connection whose later elements avoid J, with parity bookkeeping.

    ``partition`` needs ``lambda_J`` and ``lambda_notJ`` mappings
    ``parity -> set of value tuples``.  ``upsilon`` picks the root set the
    partial sums must stay in (``"J"`` or ``"notJ"``); by default it is the
    set holding ``alpha`` and ``beta``, or all roots of the accumulated parity
    when they sit on different sides.
    """
    if partition is None:
        raise ValueError("a J-partition is required")
    alpha, beta = _vals(alpha), _vals(beta)
    lam_J = {p: set(partition.lambda_J.get(p, ())) for p in (0, 1)}
    lam_N = {p: set(partition.lambda_notJ.get(p, ())) for p in (0, 1)}

    def side(v, p):
        if v in lam_J[p]:
            return "J"
        if v in lam_N[p]:
            return "notJ"
        return None

    sa, sb = side(alpha, i_alpha), side(beta, j_beta)
    if sa is None or sb is None:
        raise ValueError("alpha and beta must lie in the J-partition with the given parities")
    if upsilon is None:
        upsilon = sa if sa == sb else "both"
    if upsilon == "J":
        allowed_sets = lam_J
    elif upsilon == "notJ":
        allowed_sets = lam_N
    else:
        allowed_sets = {p: lam_J[p] | lam_N[p] for p in (0, 1)}
    _check_symmetric("the not-J roots", _flatten(lam_N))
    if upsilon in ("J", "notJ"):
        _check_symmetric(f"the {upsilon} roots", _flatten(allowed_sets))

    if i_alpha == j_beta:
        d = _direct(ctx, alpha, beta)
        if d is not None:
            return d

    orb = _orbit_exponents(ctx, alpha, integer=not ctx.strict)
    sources = sorted(((w, i_alpha), w, n, r) for w, (n, r) in orb.items() if w in ctx.rootset)
    targets = _targets(ctx, beta)
    steps = sorted((g, p) for p in (0, 1) for g in lam_N[p])

    def allowed(st):
        return st[0] in allowed_sets[st[1]]

    def target_ok(st):
        if st[1] != j_beta or not allowed(st):
            return None
        return targets.get(st[0])

    return _bfs(ctx, alpha, beta, sources, steps, allowed, target_ok)


# -- independent replay ------------------------------------------------------

def _twist_pow(v: tuple, phi_H: Matrix, psi_H: Matrix, a: int, b: int) -> tuple:
    if not v:
        return v
    return (phi_H.power(a) @ psi_H.power(b)).row_apply(v)


def replay_chain(chain: ConnectionChain, roots: Sequence, phi_H: Matrix, psi_H: Matrix,
                 strict: bool = True, partition=None, i_alpha: int | None = None,
                 j_beta: int | None = None, upsilon: str | None = None) -> list:
    """Re-validate a chain from scratch; returns a list of problems (empty = valid).

    Every partial sum is recomputed from the closed form
    ``a1 phi^-i + sum_j a_j phi^-(i+1-j) psi^-1`` with matrix powers, not from
    the recurrence the search used.
    """
    problems = []
    roots = {_vals(r) for r in roots}
    pm = roots | {_neg(r) for r in roots}
    alpha, beta = chain.alpha, chain.beta
    tw = lambda v, a, b: _twist_pow(v, phi_H, psi_H, a, b)  # noqa: E731

    if chain.kind == "direct":
        got = tw(alpha, chain.z1, chain.z2)
        if chain.epsilon == -1:
            got = _neg(got)
        if got != beta:
            problems.append("direct clause does not reproduce beta")
        if i_alpha is not None and j_beta is not None and i_alpha != j_beta:
            problems.append("direct clause across parities")
        return problems

    els = chain.elements
    k = len(els)
    if k < 2:
        problems.append("chain shorter than two elements")
        return problems
    if strict and (chain.n < 0 or chain.r < 0 or chain.m < 0 or chain.s < 0):
        problems.append("negative exponent in strict mode")
    if tw(alpha, -chain.n, -chain.r) != els[0]:
        problems.append("first element is not the stated twist of alpha")

    if partition is None:
        for e in els:
            if e not in pm:
                problems.append(f"element {[format_scalar(x) for x in e]} not in +-roots")
    else:
        lam_N = {p: {_vals(x) for x in partition.lambda_notJ.get(p, ())} for p in (0, 1)}
        lam_J = {p: {_vals(x) for x in partition.lambda_J.get(p, ())} for p in (0, 1)}
        if els[0] not in roots:
            problems.append("first element is not a root")
        for e, p in zip(els[1:], chain.element_parities[1:]):
            if e not in lam_N[p]:
                problems.append(f"element {[format_scalar(x) for x in e]} not a not-J root of parity {p}")

    sums = []
    for i in range(1, k):
        s = tw(els[0], -i, 0)
        for j in range(2, i + 2):
            s = _add(s, tw(els[j - 1], -(i + 1 - j), -1))
        sums.append(s)
    if tuple(sums) != tuple(chain.partial_sums):
        problems.append("recorded partial sums disagree with the closed form")

    if partition is None:
        for s in sums[:-1]:
            if s not in pm:
                problems.append("an intermediate partial sum leaves +-roots")
    else:
        acc = [i_alpha]
        for p in chain.element_parities[1:]:
            acc.append(acc[-1] ^ p)
        trace = acc[1:]
        if tuple(trace) != tuple(chain.parity_trace):
            problems.append("recorded parity trace disagrees")
        if upsilon == "J":
            allowed = lam_J
        elif upsilon == "notJ":
            allowed = lam_N
        else:
            allowed = {p: lam_J[p] | lam_N[p] for p in (0, 1)}
        for s, p in zip(sums, trace):
            if s not in allowed[p]:
                problems.append("a partial sum leaves the allowed root set")
        if trace and trace[-1] != j_beta:
            problems.append("final parity differs from beta's parity")

    final = tw(beta, -chain.m, -chain.s)
    if chain.target_sign == -1:
        final = _neg(final)
    if not sums or sums[-1] != final:
        problems.append("final partial sum is not the stated twist of +-beta")
    return problems
