import itertools

import pytest

from starlab.errors import InputError
from starlab.fq_linear import field, field_from_order
from starlab.numsgp import semigroup
from starlab.ring_model import (
    RingIdeal,
    canonical_ideals,
    frobenius_overring_ideal,
    frobenius_overring_model,
    is_overring_stable,
    semigroup_ring_model,
)
from starlab.star_engine import (
    classify_family,
    divisorial_star,
    enumerate_stars,
    generated_star,
    identity_star,
    induced_star,
    restrict_star,
    verify_star_axioms,
    workspace,
)

F2 = field(2)


@pytest.fixture(scope="module")
def m457():
    return semigroup_ring_model(semigroup([4, 5, 7]), F2)


@pytest.fixture(scope="module")
def ws457(m457):
    return workspace(m457)


@pytest.fixture(scope="module")
def stars457(m457):
    return enumerate_stars(m457)


def test_identity_closes_everything(m457, ws457):
    d = identity_star(m457)
    for J in ws457.ideals:
        assert d.apply(J) == J


def test_divisorial_star_examples(m457, ws457):
    v = divisorial_star(m457)
    R = m457.ring_ideal()
    M = RingIdeal(m457, m457.maximal_ideal_subspace())
    L = R.colon(M)
    for I in canonical_ideals(m457, ws457.ideals):
        assert v.apply(I) == L
    # no nondivisorial ideal is v-closed
    for J in ws457.ideals:
        assert v.is_closed(J) == J.is_divisorial()


def test_generated_star_of_ring_is_v(m457):
    assert generated_star(m457.ring_ideal()) == divisorial_star(m457)


def test_generated_star_of_canonical_is_identity(m457, ws457):
    for I in canonical_ideals(m457, ws457.ideals):
        assert generated_star(I) == identity_star(m457)


def test_generated_star_closure_criterion(m457, ws457):
    # for overring-stable nondivisorial I, J: J is closed under the star
    # generated by I iff some valuation-0 unit sends J inside I (the image
    # set of J coincides with the image set of its orbit representative)
    part = ws457.partition
    t_ideal = frobenius_overring_ideal(m457)
    pool = [
        J
        for J in ws457.ideals
        if not J.is_divisorial() and is_overring_stable(J, t_ideal)
    ]
    for I in pool:
        star_i = generated_star(I)
        for J in pool:
            oid = ws457.orbit_id(J)
            unit_containment = any(
                I.sub.contains_subspace(img) for img in part.image_maps[oid]
            )
            assert star_i.is_closed(J) == unit_containment, (I, J)


def test_induced_star_of_full_ideal_is_v(m457):
    V = m457.full_ideal()
    assert induced_star(m457, [V]) == divisorial_star(m457)
    assert induced_star(m457, []) == divisorial_star(m457)


def test_induced_star_distinct_on_unit_classes(m457, ws457):
    # distinct unions of unit classes of 1-dim-over-T nondivisorial ideals
    # give distinct operations
    t_ideal = frobenius_overring_ideal(m457)
    part = ws457.partition
    dim2_reps = [
        rep
        for rep in part.reps
        if rep.dim == t_ideal.dim + 1
        and is_overring_stable(rep, t_ideal)
        and not rep.is_divisorial()
    ]
    assert len(dim2_reps) == 4
    seen = set()
    for r in range(len(dim2_reps) + 1):
        for combo in itertools.combinations(dim2_reps, r):
            star = induced_star(m457, list(combo))
            seen.add(star.key())
    assert len(seen) == 2 ** len(dim2_reps)


def test_induced_star_closed_family_shape(m457, ws457):
    t_ideal = frobenius_overring_ideal(m457)
    part = ws457.partition
    dim2_reps = [
        rep
        for rep in part.reps
        if rep.dim == t_ideal.dim + 1
        and is_overring_stable(rep, t_ideal)
        and not rep.is_divisorial()
    ]
    star = induced_star(m457, [dim2_reps[0]])
    extra = star.closed - ws457.divisorial_ids
    expected = {ws457.orbit_id(dim2_reps[0]), ws457.orbit_id(t_ideal)}
    assert extra == expected


def test_enumerate_stars_345_is_3():
    # the engine gives 3 for the ring over <3,4,5>: v, d, and the operation
    # closing exactly the overring T; the canonical class cannot be closed
    # alone since biduality recovers every ideal from it
    m = semigroup_ring_model(semigroup([3, 4, 5]), F2)
    stars = enumerate_stars(m)
    assert len(stars) == 3
    ws = workspace(m)
    t_oid = ws.orbit_id(frobenius_overring_ideal(m))
    keys = {s.closed for s in stars}
    assert ws.divisorial_ids in keys
    assert frozenset(range(ws.partition.orbit_count)) in keys
    assert (ws.divisorial_ids | {t_oid}) in keys


def test_enumerate_stars_357_is_4():
    m = semigroup_ring_model(semigroup([3, 5, 7]), F2)
    assert len(enumerate_stars(m)) == 4


def test_enumerate_stars_457_q2(stars457):
    assert len(stars457) == 19


def test_enumerate_stars_overring_q2():
    m = semigroup_ring_model(semigroup([4, 5, 6, 7]), F2)
    assert len(enumerate_stars(m)) == 42


def brute_force_family_count(ws):
    """Independent oracle: filter all divisorial-containing orbit-id subsets
    through the closure table instead of expanding closures."""
    pair = ws.table().pair_classes
    nondiv = [o for o in range(ws.partition.orbit_count) if o not in ws.divisorial_ids]
    count = 0
    for r in range(len(nondiv) + 1):
        for combo in itertools.combinations(nondiv, r):
            fam = ws.divisorial_ids | frozenset(combo)
            if all(pair[(i, j)] <= fam for i in fam for j in fam):
                count += 1
    return count


def test_star_count_against_subset_oracle(ws457, stars457):
    assert brute_force_family_count(ws457) == len(stars457)


def test_star_count_subset_oracle_overring():
    m = semigroup_ring_model(semigroup([4, 5, 6, 7]), F2)
    stars = enumerate_stars(m)
    assert brute_force_family_count(workspace(m)) == len(stars)


def test_axiom_suite_full_sweep_q2(m457, stars457):
    for star in stars457:
        verify_star_axioms(star, full_unit_sweep=True)


def test_trichotomy_q2(ws457, stars457):
    tags = {}
    for star in stars457:
        tag = classify_family(ws457, star.closed)
        tags[tag] = tags.get(tag, 0) + 1
    assert tags == {
        "identity": 1,
        "divisorial": 1,
        "all_but_canonical_class": 1,
        "unit_class_union_with_overring": 16,
    }


def test_every_star_regenerates_from_its_family(ws457, stars457):
    for star in stars457:
        regenerated = induced_star(ws457.model, star.closed_ideals())
        assert regenerated == star


def test_star_below_v(ws457, stars457):
    for star in stars457:
        for J in ws457.ideals:
            assert J.v_closure().contains(star.apply(J))


def test_overring_closed_or_v(ws457, stars457):
    T = frobenius_overring_ideal(ws457.model)
    v = divisorial_star(ws457.model)
    for star in stars457:
        assert star.is_closed(T) or star == v


def test_restriction_injective_and_bounded(m457, stars457):
    t_model = frobenius_overring_model(m457)
    t_stars = enumerate_stars(t_model)
    d = identity_star(m457)
    v = divisorial_star(m457)
    images = set()
    for star in stars457:
        if star in (d, v):
            continue
        restricted = restrict_star(star, t_model)
        images.add(restricted.key())
    assert len(images) == len(stars457) - 2
    t_keys = {s.key() for s in t_stars}
    assert images <= t_keys
    assert len(stars457) <= len(t_stars) + 2


def test_restriction_rejects_d_and_v(m457):
    with pytest.raises(InputError):
        restrict_star(identity_star(m457))
    with pytest.raises(InputError):
        restrict_star(divisorial_star(m457))


@pytest.mark.parametrize("q,expected", [(2, 19), (3, 67)])
def test_formula_counts_small(q, expected):
    m = semigroup_ring_model(semigroup([4, 5, 7]), field_from_order(q))
    assert len(enumerate_stars(m)) == expected == 2 ** (2 * q) + 3
