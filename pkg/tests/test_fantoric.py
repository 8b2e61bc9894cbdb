import random

import pytest

from wonderk.errors import (
    ConeNotInFan,
    MissingCone,
    NotFaceClosed,
    NotSmooth,
    SupportMismatch,
)
from wonderk.fantoric import (
    Cone,
    SRElement,
    c_tau_decompose,
    chamber_fan,
    cone_stabilizer,
    fan_from_json,
    fan_to_json,
    localization_check,
    restrict_to_maximal_cone,
    sr_normal_form,
    subdivided_positive_fan,
)
from wonderk.laurent import LaurentPoly, dict_mul, weyl_act
from wonderk.rootweyl import build_root_system, weyl_group, word_str


def b2_split_fan():
    rs = build_root_system("B2")
    return rs, subdivided_positive_fan(
        rs, [[1, 0], [1, 1], [0, 1]], [[0], [1], [2], [0, 1], [1, 2]]
    )


def random_sr(rng, fan, steps=4):
    e = SRElement.zero(fan)
    for _ in range(steps):
        j = rng.randrange(len(fan.rays))
        e = e + SRElement.variable(fan, j, rng.randint(-2, 2)) * rng.randint(-3, 3)
    return e


def test_chamber_fan_a1():
    rs = build_root_system("A1")
    fan, fan_plus, act = chamber_fan(rs)
    assert set(fan.rays) == {(1,), (-1,)}
    assert len(fan.maximal) == 2
    assert len(fan_plus.maximal) == 1
    grp = weyl_group(rs)
    s = grp.simple[0]
    img = act(s, fan.cone_obj(fan.maximal[0]))
    assert isinstance(img, Cone)


def test_chamber_fan_a2():
    rs = build_root_system("A2")
    fan, fan_plus, _ = chamber_fan(rs)
    assert len(fan.rays) == 6
    assert len(fan.maximal) == 6
    assert len(fan_plus.maximal) == 1
    assert sorted(fan_plus.maximal[0]) == [0, 1]


@pytest.mark.parametrize("label", ["A2", "B2", "G2"])
def test_chamber_fan_counts(label):
    rs = build_root_system(label)
    grp = weyl_group(rs)
    fan, _, _ = chamber_fan(rs)
    assert len(fan.maximal) == grp.order


def test_identity_subdivision_accepted():
    rs = build_root_system("B2")
    fan = subdivided_positive_fan(rs, [[1, 0], [0, 1]], [[0], [1], [0, 1]])
    assert len(fan.maximal) == 1


def test_b2_split_accepted():
    _, fan = b2_split_fan()
    assert len(fan.maximal) == 2


def test_missing_face_rejected():
    rs = build_root_system("B2")
    with pytest.raises(NotFaceClosed):
        subdivided_positive_fan(rs, [[1, 0], [0, 1]], [[0, 1]])


def test_non_smooth_rejected():
    rs = build_root_system("B2")
    with pytest.raises(NotSmooth):
        subdivided_positive_fan(rs, [[1, 0], [1, 2]], [[0], [1], [0, 1]])


def test_support_gap_rejected():
    rs = build_root_system("B2")
    # single half cone leaves a gap in the chamber
    with pytest.raises(SupportMismatch):
        subdivided_positive_fan(rs, [[1, 0], [1, 1]], [[0], [1], [0, 1]])


def test_ray_outside_chamber_rejected():
    rs = build_root_system("B2")
    with pytest.raises(SupportMismatch):
        subdivided_positive_fan(rs, [[1, 0], [-1, 2]], [[0], [1], [0, 1]])


def test_fan_json_round_trip():
    rs, fan = b2_split_fan()
    obj = fan_to_json(fan)
    again = fan_from_json(rs, obj)
    assert again.rays == fan.rays
    assert again.cones == fan.cones


def test_sr_ideal_relation():
    rs = build_root_system("A1")
    fan, _, _ = chamber_fan(rs)
    one = SRElement.one(fan)
    x0 = SRElement.variable(fan, 0)
    x1 = SRElement.variable(fan, 1)
    assert ((one - x0) * (one - x1)).is_zero
    # a product of the two opposite variables collapses accordingly
    assert (x0 * x1).to_laurent() == {(1, 0): 1, (0, 1): 1, (0, 0): -1}


def test_sr_monomial_on_cone_unchanged():
    _, fan = b2_split_fan()
    x = SRElement.variable(fan, 1, 2)
    assert sr_normal_form(x) == x


def test_sr_normal_form_idempotent_and_multiplicative():
    rng = random.Random(2)
    rs = build_root_system("A2")
    fan, _, _ = chamber_fan(rs)
    for _ in range(10):
        a = random_sr(rng, fan)
        b = random_sr(rng, fan)
        assert sr_normal_form(a) == a
        raw = dict_mul(a.to_laurent(), b.to_laurent())
        assert SRElement.from_laurent(fan, raw) == a * b


def test_c_tau_decompose_examples():
    rs = build_root_system("A1")
    _, fan_plus, _ = chamber_fan(rs)
    one = SRElement.one(fan_plus)
    parts = c_tau_decompose(one)
    assert list(parts) == [Cone(frozenset())]

    x = SRElement.variable(fan_plus, 0)
    parts = {tuple(sorted(c.rays)): comp.comps for c, comp in c_tau_decompose(x).items()}
    assert parts == {
        (): {frozenset(): {(): 1}},
        ((1,),): {frozenset({0}): {(0,): -1}},
    }


@pytest.mark.parametrize("label", ["A2", "B2"])
def test_c_tau_recombination(label):
    rng = random.Random(6)
    rs = build_root_system(label)
    fan, _, _ = chamber_fan(rs)
    for _ in range(8):
        e = random_sr(rng, fan)
        parts = c_tau_decompose(e)
        total = SRElement.zero(fan)
        for comp in parts.values():
            total = total + comp
        assert total == e


def test_sr_action_equivariance():
    rng = random.Random(8)
    rs = build_root_system("A2")
    fan, _, _ = chamber_fan(rs)
    grp = weyl_group(rs)
    for _ in range(5):
        e = random_sr(rng, fan)
        for w in grp.elements:
            moved = e.act(w)
            parts = c_tau_decompose(e)
            moved_parts = c_tau_decompose(moved)
            for cone, comp in parts.items():
                img = fan.act_cone(w, cone)
                assert moved_parts[fan.cone_obj(img)] == comp.act(w)


def test_cone_stabilizer_examples():
    rs = build_root_system("A2")
    fan, fan_plus, _ = chamber_fan(rs)
    grp = weyl_group(rs)
    for c in fan.maximal:
        stab, pw = cone_stabilizer(fan, c)
        assert stab == (grp.identity,) and pw
    stab, _ = cone_stabilizer(fan, [])
    assert set(stab) == set(grp.elements)
    stab, pw = cone_stabilizer(fan_plus, [0])
    assert {word_str(w) for w in stab} == {"1", "s2"}
    assert pw


@pytest.mark.parametrize("label", ["A2", "B2", "G2"])
def test_chamber_face_stabilizers_are_parabolic(label):
    rs = build_root_system(label)
    _, fan_plus, _ = chamber_fan(rs)
    grp = weyl_group(rs)
    r = rs.rank
    for cone in fan_plus.cones:
        stab, pw = cone_stabilizer(fan_plus, cone)
        assert pw
        comp = [i + 1 for i in range(r) if i not in cone]
        expected = grp.parabolic(sum(1 << (i - 1) for i in comp))
        assert set(stab) == set(expected)


def test_cone_not_in_fan():
    _, fan = b2_split_fan()
    with pytest.raises(ConeNotInFan):
        fan.resolve([0, 2])


def test_localization_trivial_cases():
    rs = build_root_system("B2")
    fan = subdivided_positive_fan(rs, [[1, 0], [0, 1]], [[0], [1], [0, 1]])
    assert localization_check(fan, {0: LaurentPoly.monomial((1, -2), 5)})
    _, split = b2_split_fan()
    c = LaurentPoly.monomial((2, 1), 3)
    assert localization_check(split, {0: c, 1: c})


def test_localization_accepts_and_rejects():
    _, fan = b2_split_fan()
    (_, _, _, chi) = fan.adjacency()[0]
    one = LaurentPoly.one(2)
    assert localization_check(fan, {0: one, 1: LaurentPoly.monomial(chi)})
    mu = build_root_system("B2").simple_roots[0]
    assert not localization_check(fan, {0: one, 1: LaurentPoly.monomial(mu)})
    with pytest.raises(MissingCone):
        localization_check(fan, {0: one})


def test_localization_accepts_restrictions():
    rng = random.Random(14)
    rs, fan = b2_split_fan()
    for _ in range(10):
        e = random_sr(rng, fan)
        e = e * e
        fam = {
            i: restrict_to_maximal_cone(e, c) for i, c in enumerate(fan.maximal)
        }
        assert localization_check(fan, fam)


def test_restriction_is_ring_homomorphism():
    rng = random.Random(15)
    rs, fan = b2_split_fan()
    for _ in range(6):
        a = random_sr(rng, fan)
        b = random_sr(rng, fan)
        for c in fan.maximal:
            ra = restrict_to_maximal_cone(a, c)
            rb = restrict_to_maximal_cone(b, c)
            assert restrict_to_maximal_cone(a * b, c) == ra * rb
            assert restrict_to_maximal_cone(a + b, c) == ra + rb
