import json

import pytest

from coxforge import coxconstruct as cc
from coxforge.groebner import Ideal
from coxforge.presentations import Presentation, theorem1_presentation, theorem2_presentation
from coxforge.verify import (
    CORE_CHECKS, check_dimension, check_lemma28, check_lemma210_match, check_nondivisor,
    check_pluecker_identity, expected_dimension, negative_controls, pipeline_dimension,
    mixed_pivot_identity_holds, run_verification, verify_theorem,
)

QUICK = [cc.PowerP1(2), cc.PowerP1(3), cc.ProductSquare((1,)), cc.ProductSquare((1, 1))]


@pytest.mark.parametrize("spec", [cc.PowerP1(2), cc.ProductSquare((1,)), cc.PowerP1(4)])
def test_verify_theorem_passes(spec):
    report = verify_theorem(spec)
    assert [c.name for c in report.checks] == list(CORE_CHECKS)
    assert report.passed, [(c.name, c.detail) for c in report.checks if not c.passed]


def test_report_schema():
    d = run_verification(cc.PowerP1(2)).to_dict()
    assert set(d) == {"schema", "spec", "checks", "overall"}
    assert d["schema"] == "coxforge/1" and d["overall"] == "pass"
    assert d["spec"] == {"family": "PowerP1", "n": 2}
    for c in d["checks"]:
        assert set(c) == {"name", "status", "detail", "elapsed_ms"}
        assert c["status"] in ("pass", "fail")
    names = [c["name"] for c in d["checks"]]
    assert len(names) == len(set(names))


def test_report_deterministic_without_timings():
    a = json.dumps(run_verification(cc.ProductSquare((1,))).to_dict(timings=False), sort_keys=True)
    b = json.dumps(run_verification(cc.ProductSquare((1,))).to_dict(timings=False), sort_keys=True)
    assert a == b


def test_prime_certificate_recorded():
    report = verify_theorem(cc.PowerP1(2))
    assert "prime by construction" in report.check("prime_by_construction").detail


def test_budget_is_reported_per_check():
    report = run_verification(cc.PowerP1(4), budget=10)
    assert report.budget_exceeded and not report.passed
    eq = report.check("ideal_equal")
    assert not eq.passed and "budget exceeded" in eq.detail
    # checks that need no Gröbner work still run
    assert report.check("grading").passed and report.check("homogeneity").passed


# --- nondivisor ----------------------------------------------------------------


def test_nondivisor_power_p1_2():
    P = theorem2_presentation(2)
    assert check_nondivisor(P, "S_3_4")


def test_nondivisor_product_square_1():
    assert check_nondivisor(theorem1_presentation((1,)), "T_inf")


def test_nondivisor_detects_collapsed_variable():
    P = theorem2_presentation(2)
    R = P.ring
    bad = Presentation(R, P.ideal + [R.parse("S_1_3 - S_3_4*S_1_4")], "corrupted", P.extra_var)
    assert not check_nondivisor(bad, "S_3_4")


def test_nondivisor_detects_extra_variable_in_ideal():
    P = theorem2_presentation(2)
    bad = Presentation(P.ring, P.ideal + [P.ring.var("S_3_4")], "corrupted", P.extra_var)
    assert not check_nondivisor(bad, "S_3_4")


def test_nondivisor_missing_variable():
    with pytest.raises(ValueError):
        check_nondivisor(theorem2_presentation(2), "T_inf")


# --- five-index relation and the Laurent-ring lemma -----------------------------


def test_laurent_membership_trivial_case():
    assert check_lemma28(3, 0, 1)


@pytest.mark.parametrize("n, i0, j0", [(5, 0, 1), (6, 2, 5), (4, 1, 3)])
def test_laurent_membership_examples(n, i0, j0):
    assert check_lemma28(n, i0, j0)


def test_laurent_membership_range_guard():
    with pytest.raises(ValueError):
        check_lemma28(2, 0, 1)
    with pytest.raises(ValueError):
        check_lemma28(8, 0, 1)


def test_laurent_membership_fails_on_corrupted_family():
    from coxforge.presentations import lemma28_family
    fam = lemma28_family(4, 0, 1)
    R = fam[0].ring
    bad = [fam[0] + 2 * R.var("T_0_1") * R.var("T_2_3")] + fam[1:]
    assert not check_lemma28(4, 0, 1, family=bad)


def test_pluecker_identity_exhaustive():
    assert check_pluecker_identity(4)
    assert check_pluecker_identity(6)


def test_pluecker_identity_sign_flip_detected():
    assert not check_pluecker_identity(4, signs=(1, 1, 1))
    assert not check_pluecker_identity(4, signs=(-1, -1, 1))


def test_mixed_pivot_relation_is_not_an_identity():
    # the variant with q(i,k,l,m) on the left and the j-pivot right side differs by
    # T_ij * (q(i,k,l,m) - q(j,k,l,m)); the check must report that honestly
    assert mixed_pivot_identity_holds(4) is False


@pytest.mark.parametrize("n_list", [(1,), (2,), (1, 1)])
def test_t_inf_section_match(n_list):
    assert check_lemma210_match(n_list)


def test_t_inf_section_match_detects_dropped_generator():
    P = theorem1_presentation((2,))
    dropped = Presentation(P.ring, Ideal(P.ring, P.generators[:-1]), P.label, P.extra_var)
    assert not check_lemma210_match((2,), presentation=dropped)


# --- dimension -----------------------------------------------------------------


@pytest.mark.parametrize("spec, d", [(cc.PowerP1(2), 5), (cc.PowerP1(3), 7), (cc.ProductSquare((1, 1)), 9),
                                     (cc.ProductSquare((1,)), 5), (cc.ProductSquare((2, 1)), 11)])
def test_dimension(spec, d):
    assert expected_dimension(spec) == d
    assert pipeline_dimension(spec) == d
    assert check_dimension(spec)


# --- full runs and negative controls --------------------------------------------


@pytest.mark.parametrize("spec", QUICK)
def test_run_verification_passes(spec):
    report = run_verification(spec)
    assert report.passed, [(c.name, c.detail) for c in report.checks if not c.passed]
    assert len(report.checks) >= 6


@pytest.mark.parametrize("spec", QUICK)
def test_negative_controls_all_detected(spec):
    rows = negative_controls(spec)
    missed = [r for r in rows if not r["detected"]]
    assert not missed
    checks = {r["check"] for r in rows}
    assert set(CORE_CHECKS) <= checks
    assert {"dimension", "diagonal_kernel", "laurent_membership", "pluecker_identity"} <= checks
    mutations = {r["mutation"] for r in rows}
    assert {"wrong_sign", "dropped_generator", "wrong_degree"} <= mutations


def test_ideal_equal_pass_implies_homogeneity_and_saturation():
    for spec in QUICK:
        report = verify_theorem(spec)
        if report.check("ideal_equal").passed:
            assert report.check("homogeneity").passed
            assert report.check("saturation_consistency").passed
