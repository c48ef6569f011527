"""Buchberger's algorithm and the ideal toolbox built on it.

Inside the engine a monomial is stored as its order key (see
``MonomialOrder.key_function``).  Keys are linear in the exponent vector, so
monomial products and quotients are componentwise sums and differences of
keys, and the leading term of a dict-polynomial is simply ``max(poly)``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from operator import add, sub
from typing import Iterable, Sequence

from .polyring import (
    GradedRing,
    MonomialOrder,
    Polynomial,
    RingMismatchError,
    exact_div,
)

DEFAULT_STEP_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    pass


def default_budget() -> int:
    env = os.environ.get("COXFORGE_STEP_BUDGET")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"COXFORGE_STEP_BUDGET must be an integer, got {env!r}") from None
        if value < 1:
            raise ValueError("COXFORGE_STEP_BUDGET must be positive")
        return value
    return DEFAULT_STEP_BUDGET


class Budget:
    """Counter of reduction steps shared by every computation it is passed to."""

    __slots__ = ("limit", "steps")

    def __init__(self, limit: int | None = None):
        self.limit = default_budget() if limit is None else int(limit)
        if self.limit < 1:
            raise ValueError("step budget must be positive")
        self.steps = 0

    def tick(self, n: int = 1) -> None:
        self.steps += n
        if self.steps > self.limit:
            raise BudgetExceeded(f"budget exceeded: more than {self.limit} reduction steps")


def _as_budget(budget) -> Budget:
    if isinstance(budget, Budget):
        return budget
    return Budget(budget)


# --- engine ------------------------------------------------------------------


class _Elem:
    __slots__ = ("lead", "exp", "mask", "tail", "sugar")

    def __init__(self, lead, exp, mask, tail, sugar):
        self.lead = lead
        self.exp = exp
        self.mask = mask
        self.tail = tail
        self.sugar = sugar


class _Engine:
    """Gröbner computations on ``{key: coeff}`` dicts for one variable count and order."""

    def __init__(self, nvars: int, order: MonomialOrder, budget: Budget):
        self.n = nvars
        self.order = order
        self.key = order.key_function()
        self.budget = budget
        self._dec_cache: dict = {}
        kind, s = order.kind, order.split
        if kind == "lex":
            self._decode = tuple
            self.degree = sum
        elif kind == "grevlex":
            self._decode = lambda k: tuple(-x for x in reversed(k[1:]))
            self.degree = lambda k: k[0]
        else:
            def dec(k, s=s):
                first = tuple(-x for x in reversed(k[1:s + 1]))
                return first + tuple(-x for x in reversed(k[s + 2:]))
            self._decode = dec
            self.degree = lambda k, s=s: k[0] + k[s + 1]

    def decode(self, k):
        e = self._dec_cache.get(k)
        if e is None:
            e = self._dec_cache[k] = self._decode(k)
        return e

    @staticmethod
    def mask(exp) -> int:
        m = 0
        for i, e in enumerate(exp):
            if e:
                m |= 1 << (i & 63)
        return m

    def from_terms(self, terms) -> dict:
        key = self.key
        return {key(e): c for e, c in terms}

    def to_terms(self, d: dict) -> list:
        return [(self.decode(k), c) for k, c in sorted(d.items(), reverse=True)]

    def make_elem(self, d: dict, sugar=None) -> _Elem:
        lead = max(d)
        lc = d[lead]
        if lc != 1:
            d = {k: exact_div(c, lc) for k, c in d.items()}
        exp = self.decode(lead)
        tail = [(k, c) for k, c in d.items() if k != lead]
        if sugar is None:
            sugar = max(self.degree(k) for k in d)
        return _Elem(lead, exp, self.mask(exp), tail, sugar)

    def find_reducer(self, k, reducers):
        exp = self.decode(k)
        m = self.mask(exp)
        for g in reducers:
            if g.mask & ~m:
                continue
            gexp = g.exp
            for a, b in zip(exp, gexp):
                if a < b:
                    break
            else:
                return g
        return None

    def reduce(self, p: dict, reducers) -> dict:
        """Full reduction of ``p`` (consumed) modulo monic ``reducers``."""
        r = {}
        budget = self.budget
        find = self.find_reducer
        while p:
            m = max(p)
            c = p.pop(m)
            g = find(m, reducers)
            if g is None:
                r[m] = c
                continue
            budget.tick()
            q = tuple(map(sub, m, g.lead))
            get = p.get
            for t, tc in g.tail:
                mt = tuple(map(add, q, t))
                v = get(mt, 0) - c * tc
                if v:
                    p[mt] = v
                else:
                    del p[mt]
        return r

    def reduce_general(self, p: dict, basis: list) -> dict:
        """Full reduction by non-monic dict polynomials (for public normal_form)."""
        elems = []
        for b in basis:
            if b:
                lead = max(b)
                exp = self.decode(lead)
                elems.append((lead, exp, self.mask(exp), b[lead],
                              [(k, c) for k, c in b.items() if k != lead]))
        r = {}
        while p:
            m = max(p)
            c = p.pop(m)
            exp = self.decode(m)
            mm = self.mask(exp)
            hit = None
            for lead, gexp, gmask, lc, tail in elems:
                if gmask & ~mm:
                    continue
                if all(a >= b for a, b in zip(exp, gexp)):
                    hit = (lead, lc, tail)
                    break
            if hit is None:
                r[m] = c
                continue
            self.budget.tick()
            lead, lc, tail = hit
            f = exact_div(c, lc)
            q = tuple(map(sub, m, lead))
            for t, tc in tail:
                mt = tuple(map(add, q, t))
                v = p.get(mt, 0) - f * tc
                if v:
                    p[mt] = v
                else:
                    del p[mt]
        return r

    def spoly(self, f: _Elem, g: _Elem, lcm_key) -> dict:
        qf = tuple(map(sub, lcm_key, f.lead))
        qg = tuple(map(sub, lcm_key, g.lead))
        p = {}
        for t, c in f.tail:
            p[tuple(map(add, qf, t))] = c
        get = p.get
        for t, c in g.tail:
            mt = tuple(map(add, qg, t))
            v = get(mt, 0) - c
            if v:
                p[mt] = v
            else:
                del p[mt]
        return p

    def groebner(self, polys: Sequence[dict]) -> list:
        """Reduced monic Gröbner basis of the dicts in ``polys``."""
        key = self.key
        elems: list = []
        active: list = []
        pairs: list = []  # [sugar, lcm_key, lcm_exp, i, j]

        def lcm_exp(a, b):
            return tuple(x if x > y else y for x, y in zip(a, b))

        def divides(a, b):
            return all(x <= y for x, y in zip(a, b))

        def coprime(a, b):
            return all(not (x and y) for x, y in zip(a, b))

        def update(ih):
            nonlocal active, pairs
            h = elems[ih]
            mh = h.exp
            cand = [(ig, lcm_exp(mh, elems[ig].exp)) for ig in active]
            kept = []
            while cand:
                ig, lhg = cand.pop()
                if coprime(mh, elems[ig].exp):
                    kept.append((ig, lhg, True))
                    continue
                if any(divides(l2, lhg) for _, l2 in cand) or any(divides(l2, lhg) for _, l2, _c in kept):
                    continue
                kept.append((ig, lhg, False))
            new_pairs = []
            for ig, lhg, cop in kept:
                if not cop:
                    g = elems[ig]
                    dl = sum(lhg)
                    new_pairs.append([max(h.sugar + dl - sum(mh), g.sugar + dl - sum(g.exp)),
                                      key(lhg), lhg, ig, ih])
            old = []
            for pr in pairs:
                l12 = pr[2]
                e1, e2 = elems[pr[3]].exp, elems[pr[4]].exp
                if divides(mh, l12) and lcm_exp(e1, mh) != l12 and lcm_exp(e2, mh) != l12:
                    continue
                old.append(pr)
            pairs = old + new_pairs
            active = [ig for ig in active if not divides(mh, elems[ig].exp)]
            active.append(ih)

        def reducers():
            return [elems[i] for i in active]

        inputs = sorted((dict(p) for p in polys if p), key=lambda d: max(d))
        for p in inputs:
            h = self.reduce(p, reducers())
            if h:
                elems.append(self.make_elem(h))
                update(len(elems) - 1)

        while pairs:
            best = min(range(len(pairs)), key=lambda t: (pairs[t][0], pairs[t][1]))
            sugar, lk, _, i, j = pairs.pop(best)
            s = self.spoly(elems[i], elems[j], lk)
            h = self.reduce(s, reducers())
            if h:
                elems.append(self.make_elem(h, sugar))
                update(len(elems) - 1)

        basis = [elems[i] for i in active]
        # minimalize then interreduce
        basis.sort(key=lambda e: e.lead)
        minimal = []
        for e in basis:
            if not any(divides(m.exp, e.exp) for m in minimal):
                minimal.append(e)
        result = []
        for e in minimal:
            others = [m for m in minimal if m is not e]
            tail = self.reduce(dict(e.tail), others)
            tail[e.lead] = 1
            result.append(tail)
        result.sort(key=lambda d: max(d), reverse=True)
        return result


# --- public API ----------------------------------------------------------------


def _check_ring(ring: GradedRing, polys: Iterable[Polynomial]) -> None:
    for p in polys:
        if p.ring is not ring and p.ring != ring:
            raise RingMismatchError("polynomial does not belong to the ideal's ring")


def _to_polys(ring: GradedRing, engine: _Engine, dicts) -> list:
    key = ring._key
    out = []
    for d in dicts:
        terms = [(engine.decode(k), c) for k, c in d.items()]
        terms.sort(key=lambda t: key(t[0]), reverse=True)
        out.append(Polynomial(ring, tuple(terms)))
    return out


class Ideal:
    """An ideal of a :class:`GradedRing` given by generators.

    Reduced Gröbner bases are cached per monomial order once computed.
    """

    def __init__(self, ring: GradedRing, generators: Iterable[Polynomial] = ()):
        gens = tuple(generators)
        _check_ring(ring, gens)
        self.ring = ring
        self.generators = tuple(g for g in gens if g)
        self._gb: dict = {}

    def __repr__(self):
        return f"Ideal({len(self.generators)} generators in {self.ring.nvars} variables)"

    def __add__(self, other):
        if isinstance(other, Ideal):
            _check_ring(self.ring, [other.ring.zero()])
            return Ideal(self.ring, self.generators + other.generators)
        return Ideal(self.ring, self.generators + tuple(other))

    def groebner_basis(self, order: MonomialOrder | None = None, budget=None) -> tuple:
        return tuple(buchberger(self, order, budget))

    def contains(self, p: Polynomial, budget=None) -> bool:
        return ideal_member(p, self, budget)

    def is_zero(self) -> bool:
        return not self.generators

    def _set_gb(self, order: MonomialOrder, basis: Sequence[Polynomial]) -> None:
        self._gb[order] = tuple(basis)


def buchberger(I: Ideal, order: MonomialOrder | None = None, budget=None) -> list:
    """Reduced monic Gröbner basis of ``I`` under ``order`` (default: ring order).

    The basis polynomials are returned in ``I.ring``; their leading terms refer
    to ``order``, which may differ from the ring's printing order.
    """
    order = order or I.ring.order
    cached = I._gb.get(order)
    if cached is not None:
        return list(cached)
    engine = _Engine(I.ring.nvars, order, _as_budget(budget))
    dicts = engine.groebner([engine.from_terms(g.terms) for g in I.generators])
    basis = _to_polys(I.ring, engine, dicts)
    I._set_gb(order, basis)
    return basis


def leading_exponent(p: Polynomial, order: MonomialOrder | None = None) -> tuple:
    if order is None or order == p.ring.order:
        return p.lm()
    key = order.key_function()
    return max((e for e, _ in p.terms), key=key)


def normal_form(p: Polynomial, basis: Sequence[Polynomial], order: MonomialOrder | None = None,
                budget=None) -> Polynomial:
    ring = p.ring
    _check_ring(ring, basis)
    order = order or ring.order
    engine = _Engine(ring.nvars, order, _as_budget(budget))
    r = engine.reduce_general(engine.from_terms(p.terms),
                              [engine.from_terms(b.terms) for b in basis])
    return _to_polys(ring, engine, [r])[0]


def ideal_member(p: Polynomial, I: Ideal, budget=None) -> bool:
    _check_ring(I.ring, [p])
    if not p:
        return True
    budget = _as_budget(budget)
    gb = buchberger(I, None, budget)
    return not normal_form(p, gb, None, budget)


def ideal_equal(I: Ideal, J: Ideal, budget=None) -> bool:
    if I.ring != J.ring:
        raise RingMismatchError("ideals live in different rings")
    budget = _as_budget(budget)
    return buchberger(I, None, budget) == buchberger(J, None, budget)


def ideal_subset(I: Ideal, J: Ideal, budget=None) -> bool:
    budget = _as_budget(budget)
    gb = buchberger(J, None, budget)
    return all(not normal_form(g, gb, None, budget) for g in I.generators)


def _permuted(p: Polynomial, perm: Sequence[int]) -> list:
    """Terms of ``p`` with exponent position perm[i] moved to position i."""
    return [(tuple(e[j] for j in perm), c) for e, c in p.terms]


def subring(ring: GradedRing, keep: Sequence[int]) -> GradedRing:
    names = [ring.var_names[i] for i in keep]
    grading = [[row[i] for i in keep] for row in ring.grading]
    return GradedRing(tuple(names), tuple(tuple(r) for r in grading), ring.order)


def eliminate(I: Ideal, vars_to_remove: Iterable, budget=None) -> Ideal:
    """``I`` intersected with the subring of the kept variables.

    Computed with ``Block(len(removed))`` after moving the removed variables to
    the front.  The result lives in the smaller ring and carries its reduced
    GrevLex basis in the cache.
    """
    ring = I.ring
    removed = sorted({ring.index(v) if isinstance(v, str) else int(v) for v in vars_to_remove})
    keep = [i for i in range(ring.nvars) if i not in set(removed)]
    small = subring(ring, keep)
    if not removed:
        return Ideal(small, [g.to_ring(small) for g in I.generators])
    perm = removed + keep
    s = len(removed)
    engine = _Engine(ring.nvars, MonomialOrder.block(s), _as_budget(budget))
    basis = engine.groebner([engine.from_terms(_permuted(g, perm)) for g in I.generators])
    gens = []
    key = small._key
    for d in basis:
        terms = [(engine.decode(k), c) for k, c in d.items()]
        if any(any(e[:s]) for e, _ in terms):
            continue
        terms = [(e[s:], c) for e, c in terms]
        terms.sort(key=lambda t: key(t[0]), reverse=True)
        gens.append(Polynomial(small, tuple(terms)))
    result = Ideal(small, gens)
    if small.order.kind == "grevlex":
        result._set_gb(small.order, sorted(gens, key=lambda g: key(g.lm()), reverse=True))
    return result


def _aux_ring(ring: GradedRing, name: str = "u_") -> GradedRing:
    while name in ring:
        name += "_"
    grading = tuple((0,) + row for row in ring.grading)
    return GradedRing((name,) + ring.var_names, grading, ring.order)


def _saturate_aux(I: Ideal, f: Polynomial, budget: Budget) -> Ideal:
    """I : f^inf as (I + <u*f - 1>) eliminated by u."""
    big = _aux_ring(I.ring)
    u = big.var(0)
    gens = [g.to_ring(big) for g in I.generators]
    gens.append(u * f.to_ring(big) - 1)
    out = eliminate(Ideal(big, gens), [0], budget)
    return Ideal(I.ring, [g.to_ring(I.ring) for g in out.generators])


def _saturate_var_homogeneous(I: Ideal, x: int, budget: Budget) -> tuple:
    """Bayer's trick: GrevLex basis with ``x`` last, then strip powers of ``x``.

    Returns (ideal, changed).
    """
    ring = I.ring
    n = ring.nvars
    perm = [i for i in range(n) if i != x] + [x]
    inv = [0] * n
    for pos, i in enumerate(perm):
        inv[i] = pos
    engine = _Engine(n, MonomialOrder.grevlex(), budget)
    basis = engine.groebner([engine.from_terms(_permuted(g, perm)) for g in I.generators])
    changed = False
    gens = []
    key = ring._key
    for d in basis:
        terms = [(engine.decode(k), c) for k, c in d.items()]
        v = min(e[-1] for e, _ in terms)
        if v:
            changed = True
            terms = [(e[:-1] + (e[-1] - v,), c) for e, c in terms]
        terms = [(tuple(e[inv[i]] for i in range(n)), c) for e, c in terms]
        terms.sort(key=lambda t: key(t[0]), reverse=True)
        gens.append(Polynomial(ring, tuple(terms)))
    return Ideal(ring, gens), changed


def is_standard_homogeneous(I: Ideal) -> bool:
    return all(g.is_homogeneous_standard() for g in I.generators)


def saturate(I: Ideal, f: Polynomial, method: str = "auto", budget=None,
             stop_when=None) -> Ideal:
    """The saturation ``I : f^inf``.

    ``method="auxiliary"`` always uses the single auxiliary variable
    construction ``I + <u*f - 1>`` followed by elimination of ``u``.  With
    ``"auto"`` a monomial ``f`` is handled one variable at a time (Bayer's
    GrevLex trick when ``I`` is standard-homogeneous, the auxiliary variable
    construction otherwise); both routes give the same ideal.

    ``stop_when(ideal)`` may end a monomial saturation early once it returns
    true for an intermediate ideal, which then lies between ``I`` and the
    full saturation.
    """
    _check_ring(I.ring, [f])
    if not f:
        raise ValueError("cannot saturate by the zero polynomial")
    budget = _as_budget(budget)
    if f.is_constant():
        return Ideal(I.ring, I.generators)
    if method == "auxiliary":
        return _saturate_aux(I, f, budget)
    if method != "auto":
        raise ValueError(f"unknown saturation method {method!r}")
    if not f.is_monomial():
        return _saturate_aux(I, f, budget)
    xs = [i for i, e in enumerate(f.lm()) if e]
    return saturate_variables(I, xs, budget, stop_when=stop_when)


def saturate_variables(I: Ideal, xs: Sequence, budget=None, stop_when=None) -> Ideal:
    """Saturate by the product of the listed variables, one at a time."""
    budget = _as_budget(budget)
    ring = I.ring
    xs = [ring.index(x) if isinstance(x, str) else int(x) for x in xs]
    J = I
    homogeneous = is_standard_homogeneous(I)
    for x in xs:
        if stop_when is not None and stop_when(J):
            return J
        if homogeneous:
            J, _ = _saturate_var_homogeneous(J, x, budget)
        else:
            J = _saturate_aux(J, ring.var(x), budget)
    return J


@dataclass(frozen=True)
class RingMap:
    """``source`` -> localized ``target``: variable i maps to images[i] / denominators[i].

    Denominators, when given, must be monomials in the target ring.
    """

    source: GradedRing
    target: GradedRing
    images: tuple
    denominators: tuple | None = None

    def __post_init__(self):
        if len(self.images) != self.source.nvars:
            raise ValueError("need exactly one image per source variable")
        _check_ring(self.target, self.images)
        if self.denominators is not None:
            if len(self.denominators) != self.source.nvars:
                raise ValueError("need one denominator per source variable")
            _check_ring(self.target, self.denominators)
            for d in self.denominators:
                if not d.is_monomial():
                    raise ValueError("denominators must be monomials")

    def denominator(self, i: int) -> Polynomial:
        if self.denominators is None:
            return self.target.one()
        return self.denominators[i]

    def apply(self, p: Polynomial) -> tuple:
        """Image of ``p`` as (numerator, denominator) with a common monomial denominator."""
        if self.denominators is None:
            return p.substitute(dict(enumerate(self.images)), self.target), self.target.one()
        n = self.target.nvars
        common = [0] * n
        for d in self.denominators:
            for i, e in enumerate(d.lm()):
                common[i] = max(common[i], e)
        # p is evaluated term by term, each term brought over the common power
        deg = p.total_degree()
        big = [e * max(deg, 0) for e in common]
        denom = self.target.monomial(big)
        num = self.target.zero()
        for exp, c in p.terms:
            term = self.target.const(c)
            rest = list(big)
            for i, e in enumerate(exp):
                if e:
                    term = term * self.images[i] ** e
                    for j, de in enumerate(self.denominators[i].lm()):
                        rest[j] -= de * e
            num = num + term * self.target.monomial(rest)
        return num, denom


def _product_ring(phi: RingMap, keep_targets: Sequence[int], rename: dict) -> GradedRing:
    names = [phi.target.var_names[i] for i in keep_targets]
    taken = set(names)
    src = []
    for name in phi.source.var_names:
        new = name
        while new in taken:
            new += "_"
        taken.add(new)
        src.append(new)
        rename[name] = new
    return GradedRing(tuple(names + src), (), MonomialOrder.grevlex())


def ringmap_kernel(phi: RingMap, invertible: Iterable = (), method: str = "auto",
                   budget=None) -> Ideal:
    """Kernel of ``phi`` into the target localized at ``invertible`` variables.

    Builds the graph ideal ``<den_i * y_i - num_i>`` in target+source
    variables, saturates by the inverted target variables, eliminates the
    target variables and returns the contraction to the source ring.  The
    result is prime: it is the kernel of a map into a domain.

    ``method="literal"`` saturates with a single auxiliary variable by the
    product of every variable in ``invertible``.  ``"auto"`` first identifies
    target variables that are the exact image of some source variable (their
    graph relation is a renaming), and saturates only by the variables
    occurring in denominators: inverting a variable that no image divides by
    cannot change the kernel, since a polynomial ring embeds in its
    localizations.
    """
    budget = _as_budget(budget)
    tgt = phi.target
    inv = {tgt.index(v) if isinstance(v, str) else int(v) for v in invertible}
    den_vars = set()
    for i in range(phi.source.nvars):
        den_vars |= phi.denominator(i).support()
    if not den_vars <= inv:
        raise ValueError("denominator variables must be invertible")

    identified: dict = {}  # target index -> source index
    if method == "auto":
        for i, img in enumerate(phi.images):
            if (phi.denominators is None or phi.denominator(i).is_constant()) and img.is_monomial() \
                    and img.lc() == 1 and sum(img.lm()) == 1:
                t = img.lm().index(1)
                if t not in identified:
                    identified[t] = i
    elif method != "literal":
        raise ValueError(f"unknown kernel method {method!r}")

    keep_targets = [t for t in range(tgt.nvars) if t not in identified]
    rename: dict = {}
    prod = _product_ring(phi, keep_targets, rename)
    to_prod = {tgt.var_names[t]: tgt.var_names[t] for t in keep_targets}
    for t, i in identified.items():
        to_prod[tgt.var_names[t]] = rename[phi.source.var_names[i]]

    def lift(p: Polynomial) -> Polynomial:
        return p.to_ring(prod, to_prod)

    gens = []
    for i, name in enumerate(phi.source.var_names):
        y = prod.var(rename[name])
        rel = lift(phi.denominator(i)) * y - lift(phi.images[i])
        if rel:
            gens.append(rel)
    J = Ideal(prod, gens)

    if method == "literal":
        if inv:
            f = prod.one()
            for t in sorted(inv):
                f = f * lift(tgt.var(t))
            J = _saturate_aux(J, f, budget)
    else:
        sat_vars = [prod.index(to_prod[tgt.var_names[t]]) for t in sorted(den_vars)]
        if sat_vars:
            J = saturate_variables(J, sat_vars, budget)

    elim = list(range(len(keep_targets)))
    K = eliminate(J, elim, budget)
    back = {rename[n]: n for n in phi.source.var_names}
    src = phi.source
    out = Ideal(src, [g.to_ring(src, back) for g in K.generators])
    return out


# --- dimension -----------------------------------------------------------------


def _min_hitting_set(sets: list, n: int) -> int:
    best = [n]

    def search(chosen: frozenset, size: int):
        if size >= best[0]:
            return
        for s in sets:
            if not (s & chosen):
                break
        else:
            best[0] = size
            return
        for v in sorted(s):
            search(chosen | {v}, size + 1)

    search(frozenset(), 0)
    return best[0]


def krull_dimension(I: Ideal, budget=None) -> int:
    """Krull dimension of ring/I via its leading-term ideal.

    Equals the largest number of variables none of whose leading monomials is
    supported inside, i.e. nvars minus a minimum hitting set of the supports.
    Returns -1 for the unit ideal.
    """
    gb = buchberger(I, None, budget)
    n = I.ring.nvars
    supports = set()
    for g in gb:
        lm = g.lm()
        if not any(lm):
            return -1
        supports.add(frozenset(i for i, e in enumerate(lm) if e))
    minimal = [s for s in supports if not any(t < s for t in supports)]
    minimal.sort(key=lambda s: (len(s), sorted(s)))
    return n - _min_hitting_set(minimal, n)
