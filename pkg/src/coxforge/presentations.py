"""Cox ring presentations for the two diagonal blow-ups, plus helper families.

The rings and gradings here are written down directly from the closed-form
statements, independently of the pipeline in :mod:`coxforge.coxconstruct`, so
that comparing the two is a genuine check.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Callable

from .groebner import Ideal
from .polyring import GradedRing, Polynomial

T_INF = "T_inf"


class PresentationError(ValueError):
    pass


@dataclass
class Presentation:
    ring: GradedRing
    ideal: Ideal
    label: str
    extra_var: str

    @property
    def generators(self) -> tuple:
        return self.ideal.generators


def _default_var(a: int, b: int) -> str:
    return f"T_{a}_{b}"


def pluecker_q(i: int, j: int, k: int, l: int, ring: GradedRing,
               var: Callable[[int, int], str] = _default_var) -> Polynomial:
    """``T_ij*T_kl - T_ik*T_jl + T_il*T_jk`` with variables named by ``var(a, b)``."""
    if not i < j < k < l:
        raise PresentationError(f"indices must be strictly increasing, got {(i, j, k, l)}")

    def T(a, b):
        return ring.var(var(a, b))

    return T(i, j) * T(k, l) - T(i, k) * T(j, l) + T(i, l) * T(j, k)


def pluecker_ring(m: int, first: int = 0) -> GradedRing:
    """QQ[T_a_b : first <= a < b <= m], ungraded."""
    return GradedRing(tuple(_default_var(a, b) for a, b in combinations(range(first, m + 1), 2)))


def _e(k, i):
    v = [0] * k
    v[i] = 1
    return v


def theorem2_presentation(n: int) -> Presentation:
    """Plücker ideal of Gr(2, n+2) in S_i_j, graded by Z^{n+1}."""
    if n < 2:
        raise PresentationError("n must be >= 2")
    k = n + 1
    names, degs = [], []
    for i, j in combinations(range(1, n + 3), 2):
        names.append(f"S_{i}_{j}")
        if i <= n and j in (n + 1, n + 2):
            degs.append(_e(k, i - 1))
        elif i == n + 1:
            degs.append(_e(k, n))
        else:
            degs.append([a + b - c for a, b, c in zip(_e(k, i - 1), _e(k, j - 1), _e(k, n))])
    ring = GradedRing.from_degrees(names, degs)

    def var(a, b):
        return f"S_{a}_{b}"

    gens = [pluecker_q(*quad, ring, var) for quad in combinations(range(1, n + 3), 4)]
    assert len(gens) == comb(n + 2, 4)
    return Presentation(ring, Ideal(ring, gens), f"Theorem 2, n={n}", f"S_{n + 1}_{n + 2}")


def theorem1_ring(n_list) -> GradedRing:
    n_list = _check_n_list(n_list)
    rk = len(n_list)
    names = [T_INF]
    degs = [[0] * (2 * rk) + [1]]
    for r, nr in enumerate(n_list, start=1):
        e = _e(rk, r - 1)
        zero = [0] * rk
        for i, j in combinations(range(nr + 3), 2):
            if i > nr:
                continue
            names.append(f"T_{r}_{i}_{j}")
            if j == nr + 1:
                degs.append(e + zero + [0])
            elif j == nr + 2:
                degs.append(zero + e + [0])
            else:
                degs.append(e + e + [-1])
    return GradedRing.from_degrees(names, degs)


def _check_n_list(n_list) -> tuple:
    try:
        n_list = tuple(int(n) for n in n_list)
    except TypeError:
        raise PresentationError("n_list must be a sequence of integers") from None
    if not n_list or any(n < 1 for n in n_list):
        raise PresentationError("n_list must be nonempty with entries >= 1")
    return n_list


def _factor_var(r: int, nr: int) -> Callable[[int, int], str]:
    def var(a, b):
        if (a, b) == (nr + 1, nr + 2):
            return T_INF
        return f"T_{r}_{a}_{b}"
    return var


def twisted_relations(n_list, ring: GradedRing | None = None) -> list:
    """``T_ij*T_inf - T_{i,k}*T_{j,l} + T_{i,l}*T_{j,k}``, k = n_r+1, l = n_r+2, per factor."""
    n_list = _check_n_list(n_list)
    ring = ring or theorem1_ring(n_list)
    out = []
    for r, nr in enumerate(n_list, start=1):
        for i, j in combinations(range(nr + 1), 2):
            out.append(pluecker_q(i, j, nr + 1, nr + 2, ring, _factor_var(r, nr)))
    return out


def ordinary_relations(n_list, ring: GradedRing | None = None) -> list:
    """q(i,j,k,l) for 0 <= i<j<k<l <= n_r+2 with k <= n_r, per factor."""
    n_list = _check_n_list(n_list)
    ring = ring or theorem1_ring(n_list)
    out = []
    for r, nr in enumerate(n_list, start=1):
        for quad in combinations(range(nr + 3), 4):
            if quad[2] <= nr:
                out.append(pluecker_q(*quad, ring, _factor_var(r, nr)))
    return out


def theorem1_presentation(n_list) -> Presentation:
    n_list = _check_n_list(n_list)
    ring = theorem1_ring(n_list)
    gens = twisted_relations(n_list, ring) + ordinary_relations(n_list, ring)
    label = "Theorem 1, n_list=(" + ",".join(map(str, n_list)) + ")"
    return Presentation(ring, Ideal(ring, gens), label, T_INF)


def lemma210_generators(c: int, n: int) -> Ideal:
    """Binomials -T_ik*T_jl + T_il*T_jk for i<j<=c<k<l, full q(i,j,k,l) otherwise."""
    if not 1 <= c <= n:
        raise PresentationError(f"need 1 <= c <= n, got c={c}, n={n}")
    ring = pluecker_ring(n + 2)
    gens = []
    for i, j, k, l in combinations(range(n + 3), 4):
        q = pluecker_q(i, j, k, l, ring)
        if j <= c < k:
            q = q - ring.var(_default_var(i, j)) * ring.var(_default_var(k, l))
        gens.append(q)
    return Ideal(ring, gens)


def lemma28_family(n: int, i0: int, j0: int) -> list:
    """q over sorted quadruples containing both i0 and j0, in QQ[T_a_b : 0 <= a<b <= n]."""
    if n < 3:
        raise PresentationError("n must be >= 3")
    if not (0 <= i0 <= n and 0 <= j0 <= n) or i0 == j0:
        raise PresentationError(f"invalid indices ({i0}, {j0}) for n={n}")
    ring = pluecker_ring(n)
    rest = [a for a in range(n + 1) if a not in (i0, j0)]
    return [pluecker_q(*sorted((i0, j0, k, l)), ring) for k, l in combinations(rest, 2)]
