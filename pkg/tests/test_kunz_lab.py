import pytest

from starlab.errors import GateError, InputError
from starlab.kunz_lab import (
    family_semigroup,
    formula_check,
    hypothesis_gate,
    lower_bound_certificate,
    residue_star_family,
    ring_model_for,
    small_case_report,
    star_count,
    structure_report,
    subspace_lab,
    verify_counterexample,
)
from starlab.ring_model import (
    RingIdeal,
    convert_to_overring,
    frobenius_overring_model,
)
from starlab.star_engine import divisorial_star, enumerate_stars


def test_family_semigroup_members():
    assert family_semigroup(3).generators == (3, 5, 7)
    assert family_semigroup(4).generators == (4, 5, 7)
    assert family_semigroup(5).generators == (5, 6, 7, 9)
    S = family_semigroup(6)
    assert S.frobenius == 10 and S.multiplicity == 6


def test_gate_pass_and_fail():
    assert hypothesis_gate([4, 5, 7], 2).results["gate"] == "pass"
    r = hypothesis_gate([3, 4, 5], 2)
    assert r.results["gate"] == "fail" and r.results["gap_count"] == 2
    r2 = hypothesis_gate([2, 3], 2)
    assert r2.results["gate"] == "fail" and not r2.results["pseudo_symmetric"]


def test_counterexample_q2():
    report = verify_counterexample([4, 5, 7], 2)
    assert report.results["star_count"] == 19
    assert report.results["overring_star_count"] == 42
    assert report.all_verified()


def test_counterexample_gate_error():
    with pytest.raises(GateError):
        verify_counterexample([3, 4, 5], 2)


def test_residue_family_q2():
    r_model = ring_model_for((4, 5, 7), 2)
    ops = residue_star_family(r_model)
    assert len(ops) == 3
    assert len({op.key() for op in ops}) == 3
    assert ops[-1] == divisorial_star(frobenius_overring_model(r_model))


def test_residue_family_q3():
    ops = residue_star_family(ring_model_for((4, 5, 7), 3))
    assert len(ops) == 4


def test_residue_family_members_are_enumerated_stars():
    r_model = ring_model_for((4, 5, 7), 2)
    t_model = frobenius_overring_model(r_model)
    all_keys = {s.key() for s in enumerate_stars(t_model)}
    for op in residue_star_family(r_model, t_model):
        assert op.key() in all_keys


def test_residue_family_avoids_dual_of_maximal_ideal():
    r_model = ring_model_for((4, 5, 7), 2)
    t_model = frobenius_overring_model(r_model)
    R = r_model.ring_ideal()
    M = RingIdeal(r_model, r_model.maximal_ideal_subspace())
    L = convert_to_overring(R.colon(M), t_model)
    for op in residue_star_family(r_model, t_model):
        assert not op.is_closed(L)


def test_subspace_lab_42():
    lab = subspace_lab(4, 2)
    assert lab.results["x_size"] == 6
    assert lab.class_count == 4
    assert set(lab.verdicts.values()) == {"verified"}
    assert lab.results["three_dim_classes"] == 1


def test_subspace_lab_43():
    lab = subspace_lab(4, 3)
    assert lab.results["x_size"] == 12
    assert lab.class_count == 6
    assert set(lab.verdicts.values()) == {"verified"}


def test_subspace_lab_52():
    lab = subspace_lab(5, 2)
    assert lab.results["x_size"] == 14
    assert lab.class_count >= 7
    assert set(lab.verdicts.values()) == {"verified"}


def test_subspace_lab_prime_power():
    lab = subspace_lab(4, 4)
    assert lab.results["x_size"] == (4**3 - 4) // 3 == 20
    assert lab.class_count == 8
    assert set(lab.verdicts.values()) == {"verified"}


def test_lab_partition_matches_ring_orbits_n4():
    # same partition through the ideal-lattice lift, for q = 2 and 3
    for q in (2, 3):
        cert = lower_bound_certificate(4, q)
        assert cert.verdicts["lab_partition_matches_ring_partition"] == "verified"


def test_lower_bound_certificate_52():
    cert = lower_bound_certificate(5, 2)
    assert cert.results["certified_lower_bound"] == 256
    assert cert.results["formula_floor"] == 128
    assert cert.results["certified_lower_bound"] >= 128
    assert cert.all_verified()
    assert cert.results["overring_stable_ideals"] == 67


def test_lower_bound_certificate_42_consistent_with_exact():
    cert = lower_bound_certificate(4, 2)
    assert cert.all_verified()
    bound = cert.results["certified_lower_bound"]
    assert bound == 16 and bound >= cert.results["formula_floor"] == 8
    assert bound <= star_count((4, 5, 7), 2) == 19


def test_structure_report_457_q2():
    report = structure_report([4, 5, 7], 2)
    assert report.results["family_member"]
    assert report.all_verified()


def test_structure_report_5679_q2():
    report = structure_report([5, 6, 7, 9], 2)
    assert report.results["family_member"]
    assert report.all_verified()


def test_formula_check_q2():
    report = formula_check(2)
    assert report.all_verified()
    assert report.results["star_count"] == 19
    assert report.results["overring_star_count"] == 42


def test_formula_check_rejects_other_n():
    with pytest.raises(InputError):
        formula_check(2, n=5)


def test_small_case_reports_value():
    report = small_case_report(2)
    assert report.results["star_count"] == 3
    # the cited count 4 belongs to the n = 3 family member
    assert small_case_report(2, gens=(3, 5, 7)).results["star_count"] == 4


def test_counterexample_budget_skip_path():
    report = verify_counterexample([4, 5, 7], 2, max_ideals=3)
    assert report.verdicts["counterexample"] == "skipped(budget)"
    assert report.results["certified_lower_bound"] == 16


def test_restriction_image_misses_residue_family():
    from starlab.star_engine import (
        divisorial_star as v_star,
        identity_star as d_star,
        restrict_star,
    )

    r_model = ring_model_for((4, 5, 7), 2)
    t_model = frobenius_overring_model(r_model)
    image_keys = {
        restrict_star(s, t_model).key()
        for s in enumerate_stars(r_model)
        if s not in (d_star(r_model), v_star(r_model))
    }
    family_keys = {op.key() for op in residue_star_family(r_model, t_model)}
    assert not (image_keys & family_keys)
    assert len(image_keys) + len(family_keys) <= len(enumerate_stars(t_model))
