from math import comb

import pytest

from coxforge import coxconstruct as cc
from coxforge.groebner import Ideal, ideal_equal
from coxforge.polyring import multidegree
from coxforge.presentations import (
    T_INF, PresentationError, lemma28_family, lemma210_generators, ordinary_relations, pluecker_q,
    pluecker_ring, theorem1_presentation, theorem2_presentation, twisted_relations,
)

N_LISTS = [(1,), (2,), (1, 1), (2, 1), (3,), (1, 2)]


def test_pluecker_q_shape():
    R = pluecker_ring(3)
    assert pluecker_q(0, 1, 2, 3, R) == R.parse("T_0_1*T_2_3 - T_0_2*T_1_3 + T_0_3*T_1_2")
    with pytest.raises(PresentationError):
        pluecker_q(0, 2, 1, 3, R)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_grassmannian_counts(n):
    P = theorem2_presentation(n)
    assert P.ring.nvars == comb(n + 2, 2)
    assert len(P.generators) == comb(n + 2, 4)
    assert P.ring.rank == n + 1
    assert P.extra_var == f"S_{n + 1}_{n + 2}"


def test_grassmannian_n2():
    P = theorem2_presentation(2)
    assert (P.ring.nvars, len(P.generators)) == (6, 1)
    assert P.ring.degree_of("S_3_4") == (0, 0, 1)
    assert P.ring.degree_of("S_1_2") == (1, 1, -1)


def test_grassmannian_rejects_small_n():
    with pytest.raises(PresentationError):
        theorem2_presentation(1)


@pytest.mark.parametrize("n_list", N_LISTS)
def test_twisted_counts(n_list):
    P = theorem1_presentation(n_list)
    assert len(twisted_relations(n_list)) == sum(comb(n + 1, 2) for n in n_list)
    assert len(P.generators) == sum(comb(n + 3, 4) for n in n_list)
    assert P.ring.nvars == cc.variable_count(cc.ProductSquare(n_list))
    assert P.ring.rank == 2 * len(n_list) + 1


def test_twisted_single_factor():
    P = theorem1_presentation((1,))
    (g,) = P.generators
    assert g == P.ring.parse("T_1_0_1*T_inf - T_1_0_2*T_1_1_3 + T_1_0_3*T_1_1_2")
    assert P.ring.degree_of(T_INF) == (0, 0, 1)
    assert P.ring.degree_of("T_1_0_1") == (1, 1, -1)


def test_twisted_ordinary_index_range():
    # third index bounded by n_r, fourth reaching n_r + 2
    P = theorem1_presentation((2,))
    ords = ordinary_relations((2,))
    assert len(ords) == comb(5, 4) - comb(3, 2)
    assert P.ring.parse("T_1_0_1*T_1_2_4 - T_1_0_2*T_1_1_4 + T_1_0_4*T_1_1_2") in ords


@pytest.mark.parametrize("n_list", N_LISTS)
def test_generators_homogeneous(n_list):
    for g in theorem1_presentation(n_list).generators:
        multidegree(g)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_grassmannian_generators_homogeneous(n):
    for g in theorem2_presentation(n).generators:
        multidegree(g)


@pytest.mark.parametrize("spec, make", [
    (cc.PowerP1(2), lambda: theorem2_presentation(2)),
    (cc.PowerP1(3), lambda: theorem2_presentation(3)),
    (cc.PowerP1(4), lambda: theorem2_presentation(4)),
    (cc.ProductSquare((1,)), lambda: theorem1_presentation((1,))),
    (cc.ProductSquare((2, 1)), lambda: theorem1_presentation((2, 1))),
    (cc.ProductSquare((1, 2)), lambda: theorem1_presentation((1, 2))),
])
def test_relations_vanish_on_parametrization(spec, make):
    phi = cc.pipeline_parametrization(spec)
    P = make()
    assert phi.source.var_names == P.ring.var_names
    for g in P.generators:
        num, _ = phi.apply(g.to_ring(phi.source))
        assert num.is_zero()


def test_sign_pattern_is_q_consistent():
    # the alternative "- T_ik T_jk" pattern does not vanish on the parametrization
    spec = cc.ProductSquare((1,))
    phi = cc.pipeline_parametrization(spec)
    R = phi.source
    bad = R.parse("T_1_0_1*T_inf - T_1_0_2*T_1_1_2 + T_1_0_3*T_1_1_2")
    assert not phi.apply(bad)[0].is_zero()


def test_t_inf_section_shape():
    I = lemma210_generators(1, 1)
    assert I.ring.nvars == comb(4, 2)
    (g,) = I.generators
    assert g == I.ring.parse("-T_0_2*T_1_3 + T_0_3*T_1_2")
    with pytest.raises(PresentationError):
        lemma210_generators(3, 2)


def test_t_inf_section_generator_count():
    I = lemma210_generators(2, 2)
    assert len(I.generators) == comb(5, 4)
    binomials = [g for g in I.generators if len(g) == 2]
    # quadruples with j <= c < k: i<j in {0,1,2}, k<l in {3,4}
    assert len(binomials) == comb(3, 2)


def test_t_inf_section_matches_twisted_presentation():
    P = theorem1_presentation((1,))
    R = P.ring
    I_plus = Ideal(R, list(P.generators) + [R.var(T_INF)])
    L = lemma210_generators(1, 1)
    rename = {f"T_{a}_{b}": f"T_1_{a}_{b}" for a in range(4) for b in range(a + 1, 4)}
    rename["T_2_3"] = T_INF
    J = Ideal(R, [g.to_ring(R, rename) for g in L.generators] + [R.var(T_INF)])
    assert ideal_equal(I_plus, J)


def test_laurent_membership_family():
    fam = lemma28_family(3, 0, 1)
    assert len(fam) == 1
    fam = lemma28_family(5, 2, 4)
    assert len(fam) == comb(4, 2)
    R = fam[0].ring
    assert pluecker_q(0, 2, 3, 4, R) in fam
    with pytest.raises(PresentationError):
        lemma28_family(2, 0, 1)
    with pytest.raises(PresentationError):
        lemma28_family(4, 1, 1)
