"""Checks comparing the transfer pipeline against the stated presentations."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

from . import coxconstruct as cc
from .groebner import (
    Budget,
    BudgetExceeded,
    Ideal,
    buchberger,
    ideal_equal,
    krull_dimension,
    normal_form,
    saturate_variables,
)
from .polyring import GradedRing, Polynomial, multidegree, InhomogeneousError
from .presentations import (
    Presentation,
    lemma28_family,
    lemma210_generators,
    pluecker_q,
    pluecker_ring,
    theorem1_presentation,
    theorem2_presentation,
)

SCHEMA = "coxforge/1"
MAX_LEMMA28_N = 7

CORE_CHECKS = (
    "ideal_equal",
    "grading",
    "homogeneity",
    "nondivisor",
    "prime_by_construction",
    "saturation_consistency",
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    elapsed: float = 0.0
    budget_exceeded: bool = False

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self, timings: bool = True) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "detail": self.detail,
            "elapsed_ms": round(self.elapsed * 1000) if timings else 0,
        }


@dataclass
class VerifyReport:
    spec: object
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    @property
    def budget_exceeded(self) -> bool:
        return any(c.budget_exceeded for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self, timings: bool = True) -> dict:
        return {
            "schema": SCHEMA,
            "spec": spec_to_dict(self.spec),
            "checks": [c.to_dict(timings) for c in self.checks],
            "overall": "pass" if self.passed else "fail",
        }


def spec_to_dict(spec) -> dict:
    if isinstance(spec, cc.PowerP1):
        return {"family": "PowerP1", "n": spec.n}
    if isinstance(spec, cc.ProductSquare):
        return {"family": "ProductSquare", "n_list": list(spec.n_list)}
    return {"family": "none"}


def presentation_for(spec) -> Presentation:
    if isinstance(spec, cc.PowerP1):
        return theorem2_presentation(spec.n)
    return theorem1_presentation(spec.n_list)


def _run(name: str, fn: Callable[[], tuple]) -> CheckResult:
    start = time.perf_counter()
    try:
        ok, detail = fn()
        res = CheckResult(name, bool(ok), detail)
    except BudgetExceeded as exc:
        res = CheckResult(name, False, str(exc), budget_exceeded=True)
    res.elapsed = time.perf_counter() - start
    return res


def _into(ring: GradedRing, polys) -> list:
    return [p.to_ring(ring) for p in polys]


# --- individual checks -----------------------------------------------------------


def _rescaling_witness(I2: Ideal, gens: list, budget) -> str:
    """Look for a single variable sign change making the ideals equal (diagnostic only)."""
    ring = I2.ring
    for i, name in enumerate(ring.var_names):
        flipped = [g.substitute({i: -ring.var(i)}) for g in gens]
        if ideal_equal(I2, Ideal(ring, flipped), budget):
            return f"; equal after rescaling {name} -> -{name} (not accepted as a pass)"
    return ""


def compare_ideals(I2: Ideal, P: Presentation, budget=None) -> tuple:
    ring = I2.ring
    if set(ring.var_names) != set(P.ring.var_names):
        return False, "variable sets differ"
    gens = _into(ring, P.generators)
    if ideal_equal(I2, Ideal(ring, gens), budget):
        gb = buchberger(I2, None, budget)
        return True, f"reduced GrevLex bases coincide ({len(gb)} elements, {len(gens)} stated generators)"
    return False, "reduced bases differ" + _rescaling_witness(I2, gens, budget)


def _unimodular_change(g1, g2) -> str:
    import sympy

    A, B = sympy.Matrix(g1), sympy.Matrix(g2)
    if A.shape != B.shape:
        return ""
    try:
        sol, params = A.T.gauss_jordan_solve(B.T)
    except ValueError:
        return ""
    if params.shape[0]:
        sol = sol.subs({p: 0 for p in params})
    U = sol.T
    if all(x.is_integer for x in U) and U.shape[0] == U.shape[1] and abs(U.det()) == 1:
        return "; gradings differ by a unimodular change of basis (not accepted as a pass)"
    return ""


def check_grading(k2_ring: GradedRing, P: Presentation) -> tuple:
    """Literal coordinate-for-coordinate comparison of the two gradings."""
    if k2_ring.var_names != P.ring.var_names:
        if set(k2_ring.var_names) != set(P.ring.var_names):
            return False, "variable sets differ"
        stated = [P.ring.degree_of(n) for n in k2_ring.var_names]
    else:
        stated = P.ring.degrees()
    computed = k2_ring.degrees()
    bad = [(n, c, s) for n, c, s in zip(k2_ring.var_names, computed, stated) if c != s]
    if not bad:
        return True, f"{len(computed)} variables, rank {k2_ring.rank}: degrees agree"
    n, c, s = bad[0]
    cols = list(zip(*stated)) if stated else []
    diag = _unimodular_change(k2_ring.grading, cols)
    return False, f"{len(bad)} mismatches, first {n}: pipeline {c} vs stated {s}{diag}"


def check_homogeneity(P: Presentation) -> tuple:
    for g in P.generators:
        try:
            multidegree(g)
        except InhomogeneousError as exc:
            return False, str(exc)
    return True, f"all {len(P.generators)} generators homogeneous"


def nondivisor_detail(P: Presentation, extra_var: str, budget=None) -> tuple:
    ring = P.ring
    x = ring.var(extra_var)
    if normal_form(x, buchberger(P.ideal, None, budget), None, budget).is_zero():
        return False, f"{extra_var} lies in the ideal"
    gb = buchberger(P.ideal + [x], None, budget)
    for name in ring.var_names:
        if name == extra_var:
            continue
        if normal_form(ring.var(name), gb, None, budget).is_zero():
            return False, f"{name} lies in <{extra_var}> + I"
    return True, f"no variable lies in <{extra_var}> + I; {extra_var} not in I"


def check_nondivisor(P: Presentation, extra_var: str, budget=None) -> bool:
    if extra_var not in P.ring:
        raise ValueError(f"{extra_var!r} is not a variable of the presentation ring")
    return nondivisor_detail(P, extra_var, budget)[0]


def check_prime_certificate(state: cc.PipelineState, budget=None) -> tuple:
    if not state.certificate:
        return False, "no kernel certificate recorded"
    gb = buchberger(state.I2, None, budget)
    if any(g.is_constant() for g in gb):
        return False, "I2 is the unit ideal"
    ring = state.I2.ring
    for name in ring.var_names:
        if normal_form(ring.var(name), gb, None, budget).is_zero():
            return False, f"variable {name} lies in I2"
    return True, state.certificate


def check_saturation_consistency(state: cc.PipelineState, gens=None, budget=None) -> tuple:
    ring = state.k2_ring
    gens = state.I2prime_gens if gens is None else gens
    sat = saturate_variables(Ideal(ring, gens), range(ring.nvars), budget)
    if ideal_equal(sat, state.I2, budget):
        return True, "<I2' generators> saturated by all variables equals the kernel ideal"
    return False, "saturation route and kernel route disagree"


def expected_dimension(spec) -> int:
    if isinstance(spec, cc.PowerP1):
        return 2 * spec.n + 1
    return 2 * sum(spec.n_list) + 2 * len(spec.n_list) + 1


def pipeline_dimension(spec, budget=None, state=None) -> int:
    state = state or cc.pipeline_I2(spec, budget)
    return krull_dimension(state.I2, budget)


def check_dimension(spec, budget=None, state=None) -> bool:
    return pipeline_dimension(spec, budget, state) == expected_dimension(spec)


def _lemma28_order(ring: GradedRing, i0: int, j0: int) -> list:
    def rank(name):
        a, b = (int(x) for x in name.split("_")[1:])
        hits = len({a, b} & {i0, j0})
        return (-hits, a, b)
    return sorted(range(ring.nvars), key=lambda i: rank(ring.var_names[i]))


def check_lemma28(n: int, i0: int, j0: int, budget=None, family=None) -> bool:
    """Every q(a,b,c,d) on {0..n} lies in <family> saturated by all T_ab.

    The saturation is taken one variable at a time and may stop as soon as all
    q already lie in the partial saturation, which is contained in the full one.
    """
    if not 3 <= n <= MAX_LEMMA28_N:
        raise ValueError(f"need 3 <= n <= {MAX_LEMMA28_N}")
    ring = pluecker_ring(n)
    family = lemma28_family(n, i0, j0) if family is None else family
    targets = [pluecker_q(*quad, ring) for quad in combinations(range(n + 1), 4)]

    def all_in(J: Ideal) -> bool:
        gb = buchberger(J, None, budget)
        return all(normal_form(q, gb, None, budget).is_zero() for q in targets)

    J = saturate_variables(Ideal(ring, family), _lemma28_order(ring, i0, j0), budget,
                           stop_when=all_in)
    return all_in(J)


def pluecker_identity_terms(ring: GradedRing, i, j, k, l, m, pivot: str = "i",
                            signs=(1, -1, 1)) -> tuple:
    """Both sides of the five-index relation among Plücker quadrics.

    pivot "i": T_ij q(i,k,l,m) = T_ik q(i,j,l,m) - T_il q(i,j,k,m) + T_im q(i,j,k,l)
    pivot "j": T_ij q(j,k,l,m) = T_jk q(i,j,l,m) - T_jl q(i,j,k,m) + T_jm q(i,j,k,l)
    pivot "mixed": T_ij q(i,k,l,m) against the pivot-"j" right-hand side,
    which is not an identity.
    """
    def T(a, b):
        return ring.var(f"T_{a}_{b}")

    def q(*idx):
        return pluecker_q(*idx, ring)

    c = j if pivot in ("j", "mixed") else i
    lhs = T(i, j) * (q(j, k, l, m) if pivot == "j" else q(i, k, l, m))
    rhs = (signs[0] * T(c, k) * q(i, j, l, m) + signs[1] * T(c, l) * q(i, j, k, m)
           + signs[2] * T(c, m) * q(i, j, k, l))
    return lhs, rhs


def _identity_holds(n: int, pivot: str, signs) -> bool:
    ring = pluecker_ring(n)
    for tup in combinations(range(n + 1), 5):
        lhs, rhs = pluecker_identity_terms(ring, *tup, pivot=pivot, signs=signs)
        if lhs != rhs:
            return False
    return True


def check_pluecker_identity(n: int, signs=(1, -1, 1)) -> bool:
    """The five-index relation holds exactly for every i<j<k<l<m <= n, both pivots."""
    if n < 4:
        raise ValueError("need n >= 4")
    return _identity_holds(n, "i", signs) and _identity_holds(n, "j", signs)


def mixed_pivot_identity_holds(n: int) -> bool:
    if n < 4:
        raise ValueError("need n >= 4")
    return _identity_holds(n, "mixed", (1, -1, 1))


def lemma210_ideal(n_list, ring: GradedRing) -> Ideal:
    """<T_inf> + the binomial-plus-quadric families (c = n = n_r) moved into ``ring`` factor by factor."""
    gens = [ring.var(cc.T_INF)]
    for r, nr in enumerate(n_list, start=1):
        fam = lemma210_generators(nr, nr)
        rename = {}
        for name in fam.ring.var_names:
            a, b = (int(x) for x in name.split("_")[1:])
            rename[name] = cc.T_INF if (a, b) == (nr + 1, nr + 2) else f"T_{r}_{a}_{b}"
        gens += [g.to_ring(ring, rename) for g in fam.generators]
    return Ideal(ring, gens)


def check_lemma210_match(n_list, budget=None, presentation=None) -> bool:
    P = presentation or theorem1_presentation(n_list)
    lhs = P.ideal + [P.ring.var(cc.T_INF)]
    return ideal_equal(lhs, lemma210_ideal(tuple(n_list), P.ring), budget)


# --- reports ---------------------------------------------------------------------


def verify_theorem(spec, budget=None, report: VerifyReport | None = None) -> VerifyReport:
    """Run the six core checks for one spec.

    ``budget`` is a step limit applied afresh to every check.
    """
    report = report or VerifyReport(spec)
    P = presentation_for(spec)
    extra = cc.extra_variable(spec)
    holder: dict = {}

    def fresh():
        return Budget(budget)

    def state():
        if "state" not in holder:
            holder["state"] = cc.pipeline_I2(spec, fresh())
        return holder["state"]

    def needs_state(fn):
        def wrapped():
            try:
                st = state()
            except BudgetExceeded as exc:
                raise BudgetExceeded(f"pipeline unavailable: {exc}") from None
            return fn(st)
        return wrapped

    report.checks.append(_run("ideal_equal", needs_state(lambda st: compare_ideals(st.I2, P, fresh()))))
    report.checks.append(_run("grading", lambda: check_grading(cc.k2_grading(spec), P)))
    report.checks.append(_run("homogeneity", lambda: check_homogeneity(P)))
    report.checks.append(_run("nondivisor", lambda: nondivisor_detail(P, extra, fresh())))
    report.checks.append(_run("prime_by_construction",
                              needs_state(lambda st: check_prime_certificate(st, fresh()))))
    report.checks.append(_run("saturation_consistency",
                              needs_state(lambda st: check_saturation_consistency(st, None, fresh()))))
    report._state = holder
    return report


def _lemma28_params(spec) -> list:
    """(n, i0, j0) of the Laurent-ring membership instances that each family relies on."""
    if isinstance(spec, cc.PowerP1):
        # indices 1..n+2 shifted to 0..n+1; the extra variable is the pair (n, n+1)
        return [(spec.n + 1, spec.n, spec.n + 1)]
    return sorted({(nr + 2, nr + 1, nr + 2) for nr in spec.n_list})


def run_verification(spec, budget=None) -> VerifyReport:
    """Core checks plus every auxiliary check applicable to ``spec``."""
    report = verify_theorem(spec, budget)
    holder = report._state

    def fresh():
        return Budget(budget)

    def diag():
        ok = cc.check_diagonal_kernel(spec, fresh())
        return ok, "minors ideal equals the kernel of the torus parametrization" if ok else "ideals differ"

    report.checks.append(_run("diagonal_kernel", diag))

    def dim():
        st = holder.get("state") or cc.pipeline_I2(spec, fresh())
        d = pipeline_dimension(spec, fresh(), st)
        e = expected_dimension(spec)
        return d == e, f"Krull dimension {d}, expected {e}"

    report.checks.append(_run("dimension", dim))

    def lemma28():
        parts = []
        ok = True
        for n, i0, j0 in _lemma28_params(spec):
            if n > MAX_LEMMA28_N:
                parts.append(f"n={n} skipped (above {MAX_LEMMA28_N})")
                continue
            res = check_lemma28(n, i0, j0, fresh())
            ok = ok and res
            parts.append(f"n={n}, (i0,j0)=({i0},{j0}): {'holds' if res else 'FAILS'}")
            if n >= 4:
                ident = check_pluecker_identity(n)
                ok = ok and ident
                parts.append(f"identity n={n}: {'holds' if ident else 'FAILS'}")
        return ok, "; ".join(parts)

    report.checks.append(_run("laurent_membership", lemma28))

    if isinstance(spec, cc.ProductSquare):
        def l210():
            ok = check_lemma210_match(spec.n_list, fresh())
            return ok, "<T_inf> + I_X matches the binomial-plus-quadric families" if ok else "ideals differ"
        report.checks.append(_run("t_inf_section", l210))
    return report


# --- negative controls -----------------------------------------------------------


def _flip_last_sign(p: Polynomial) -> Polynomial:
    terms = list(p.terms)
    e, c = terms[-1]
    terms[-1] = (e, -c)
    return Polynomial(p.ring, tuple(terms))


def _with_degree(ring: GradedRing, name: str, delta: int) -> GradedRing:
    degs = ring.degrees()
    i = ring.index(name)
    d = list(degs[i])
    d[0] += delta
    degs[i] = d
    return GradedRing.from_degrees(ring.var_names, degs, ring.order)


def divisor_corruptions(P: Presentation) -> list:
    """Presentations in which the extra variable divides some variable, or lies in the ideal."""
    ring = P.ring
    x = ring.var(P.extra_var)
    others = [n for n in ring.var_names if n != P.extra_var]
    out = []
    picks = [(others[0], others[1]), (others[-1], others[0]), (others[len(others) // 2], others[-1])]
    for v, w in picks:
        g = ring.var(v) - x * ring.var(w)
        out.append((f"divisor:{v}-{P.extra_var}*{w}",
                    Presentation(ring, P.ideal + [g], P.label + " (corrupted)", P.extra_var)))
    out.append((f"divisor:{P.extra_var}-in-ideal",
                Presentation(ring, P.ideal + [x], P.label + " (corrupted)", P.extra_var)))
    return out


def negative_controls(spec, budget=None) -> list:
    """Run every check on seeded corruptions; each row records whether it was caught."""
    P = presentation_for(spec)
    st = cc.pipeline_I2(spec, Budget(budget))
    ring = P.ring
    rows = []

    def record(mutation, check, result):
        rows.append({"mutation": mutation, "check": check, "detected": not result})

    gens = list(P.generators)
    wrong_sign = Presentation(ring, Ideal(ring, [_flip_last_sign(gens[0])] + gens[1:]), P.label, P.extra_var)
    dropped = Presentation(ring, Ideal(ring, gens[:-1]), P.label, P.extra_var)
    record("wrong_sign", "ideal_equal", compare_ideals(st.I2, wrong_sign, Budget(budget))[0])
    record("dropped_generator", "ideal_equal", compare_ideals(st.I2, dropped, Budget(budget))[0])

    target = next(n for n in ring.var_names if n != P.extra_var)
    bad_ring = _with_degree(ring, target, 1)
    bad_P = Presentation(bad_ring, Ideal(bad_ring, _into(bad_ring, gens)), P.label, P.extra_var)
    record("wrong_degree", "grading", check_grading(st.k2_ring, bad_P)[0])
    record("wrong_degree", "homogeneity", check_homogeneity(bad_P)[0])

    for name, corrupted in divisor_corruptions(P):
        record(name, "nondivisor", check_nondivisor(corrupted, P.extra_var, Budget(budget)))

    polluted = cc.PipelineState(st.spec, st.base_ring, st.I1, st.I2prime_gens,
                                st.I2 + [st.k2_ring.var(target)], st.k2_ring,
                                st.parametrization, st.certificate)
    record("variable_in_ideal", "prime_by_construction", check_prime_certificate(polluted, Budget(budget))[0])
    uncertified = cc.PipelineState(st.spec, st.base_ring, st.I1, st.I2prime_gens, st.I2,
                                   st.k2_ring, st.parametrization, "")
    record("missing_certificate", "prime_by_construction", check_prime_certificate(uncertified)[0])

    record("dropped_generator", "saturation_consistency",
           check_saturation_consistency(st, st.I2prime_gens[:-1], Budget(budget))[0])
    record("wrong_sign", "saturation_consistency",
           check_saturation_consistency(st, [_flip_last_sign(st.I2prime_gens[0])] + st.I2prime_gens[1:],
                                        Budget(budget))[0])

    d = krull_dimension(polluted.I2, Budget(budget))
    record("variable_in_ideal", "dimension", d == expected_dimension(spec))

    diag = cc.diagonal_ideal(spec)
    g0 = diag.generators[0]
    bad_diag = Ideal(diag.ring, [_flip_last_sign(g0)] + list(diag.generators[1:]))
    kernel = cc.ringmap_kernel(cc.diagonal_parametrization(spec),
                               invertible=cc.diagonal_parametrization(spec).target.var_names,
                               budget=Budget(budget))
    record("wrong_sign", "diagonal_kernel", ideal_equal(kernel, bad_diag, Budget(budget)))

    if isinstance(spec, cc.ProductSquare):
        record("dropped_generator", "t_inf_section",
               check_lemma210_match(spec.n_list, Budget(budget), dropped))
    for n, i0, j0 in _lemma28_params(spec):
        if n > MAX_LEMMA28_N:
            continue
        fam = lemma28_family(n, i0, j0)
        bad = [_flip_last_sign(fam[0])] + fam[1:]
        record("wrong_sign", "laurent_membership", check_lemma28(n, i0, j0, Budget(budget), family=bad))
        record("wrong_sign", "pluecker_identity", check_pluecker_identity(max(n, 4), signs=(1, 1, 1)))
    return rows
