import random
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uctkit.abgroups import (
    FgAbGroup,
    FiniteGroupTable,
    GroupMorphism,
    PresentedGroup,
    RankOneIndGroup,
    Subgroup,
    Z,
    ZERO_GROUP,
    cyclic,
    exact_at,
    ext_group,
    finite_structure_from_counts,
    format_group,
    group_from_presentation,
    hom_group,
    invariant_factors,
    parse_group,
    rank_one_classify,
    tensor_group,
    tor_group,
)
from uctkit.intlat import IntMatrix


small_groups = st.builds(
    lambda r, qs: FgAbGroup(r, invariant_factors(qs)),
    st.integers(0, 2),
    st.lists(st.integers(2, 9), max_size=2),
)


def test_invariant_factors_merge():
    assert invariant_factors([2, 3]) == (6,)
    assert invariant_factors([2, 4]) == (2, 4)
    assert invariant_factors([2, 3, 4, 9]) == (6, 36)
    assert invariant_factors([]) == ()


def test_presentation_examples():
    assert group_from_presentation(IntMatrix.from_rows([[2]])) == cyclic(2)
    g = group_from_presentation(IntMatrix.from_rows([[2, 4], [6, 8]]))
    assert g == FgAbGroup(0, (2, 4))
    assert group_from_presentation(IntMatrix.zero(2, 0)) == FgAbGroup(2, ())


def test_presentation_idempotent_on_canonical_relations():
    rng = random.Random(2)
    for _ in range(25):
        rows, cols = rng.randint(1, 3), rng.randint(0, 3)
        g = group_from_presentation(
            IntMatrix.from_rows([[rng.randint(-4, 4) for _ in range(cols)]
                                 for _ in range(rows)], cols=cols))
        diag = list(g.torsion) + [0] * g.free_rank
        rel = IntMatrix.diagonal(len(diag), len(diag), [q if q else 0 for q in diag])
        again = group_from_presentation(rel)
        assert again == g


def test_hom_examples():
    assert hom_group(cyclic(6), Z) == ZERO_GROUP
    assert hom_group(cyclic(6), cyclic(4)) == cyclic(2)
    assert hom_group(FgAbGroup(2), cyclic(2)) == FgAbGroup(0, (2, 2))


def test_ext_examples():
    assert ext_group(Z, FgAbGroup(3, (2, 4))) == ZERO_GROUP
    assert ext_group(cyclic(2), cyclic(4)) == cyclic(2)
    assert ext_group(cyclic(6), Z) == cyclic(6)


def test_tensor_examples():
    assert tensor_group(FgAbGroup(2), cyclic(2)) == FgAbGroup(0, (2, 2))
    assert tensor_group(cyclic(2), cyclic(3)) == ZERO_GROUP
    assert tensor_group(Z, FgAbGroup(1, (7,))) == FgAbGroup(1, (7,))


def test_tor_examples():
    assert tor_group(Z, cyclic(9)) == ZERO_GROUP
    assert tor_group(cyclic(6), cyclic(4)) == cyclic(2)


def enumerate_homs(m, n):
    """All homomorphisms Z/m -> Z/n, counted exhaustively."""
    return [x for x in range(n) if (m * x) % n == 0]


def test_cyclic_hom_ext_match_enumeration():
    for m in range(2, 13):
        for n in range(2, 13):
            expected = len(enumerate_homs(m, n))
            assert expected == gcd(m, n)
            h = hom_group(cyclic(m), cyclic(n))
            e = ext_group(cyclic(m), cyclic(n))
            want = cyclic(gcd(m, n)) if gcd(m, n) > 1 else ZERO_GROUP
            assert h == want and e == want


@settings(max_examples=40, deadline=None)
@given(small_groups, small_groups, small_groups)
def test_hom_ext_biadditive(a, a2, g):
    for f in (hom_group, ext_group, tensor_group, tor_group):
        assert f(a.direct_sum(a2), g) == f(a, g).direct_sum(f(a2, g))
        assert f(g, a.direct_sum(a2)) == f(g, a).direct_sum(f(g, a2))


def test_parse_and_format():
    assert parse_group("Z") == Z
    assert parse_group("Z/4") == cyclic(4)
    assert parse_group("Z^2+Z/2+Z/9") == FgAbGroup(2, (18,))
    assert parse_group("Z/2+Z/4") == parse_group("Z/4+Z/2")
    assert parse_group("0") == ZERO_GROUP
    assert parse_group(format_group(FgAbGroup(3, (2, 6)))) == FgAbGroup(3, (2, 6))
    with pytest.raises(ValueError):
        parse_group("Q")


def test_rank_one_classify():
    r = rank_one_classify(RankOneIndGroup((), 1), Z)
    assert r.hom == Z and r.ext_class == "zero"

    r = rank_one_classify(RankOneIndGroup((), 2), Z)
    assert r.hom == ZERO_GROUP and r.ext_class == "uncountable"

    r = rank_one_classify(RankOneIndGroup((2, 3), 1), cyclic(5))
    assert r.hom == cyclic(5) and r.ext_class == "zero"

    # torsion with the stationary prime removed survives; no free part, no lim^1
    r = rank_one_classify(RankOneIndGroup((), 2), FgAbGroup(0, (12,)))
    assert r.hom == cyclic(3) and r.ext_class == "zero"


def test_presented_group_canonicalization():
    p = PresentedGroup((0, 2, 3))
    assert p.fg() == FgAbGroup(1, (6,))
    assert p.reduce((5, 5, 5)) == (5, 1, 2)


def test_morphism_validation():
    src = PresentedGroup((2,))
    tgt = PresentedGroup((0,))
    with pytest.raises(ValueError):
        GroupMorphism(src, tgt, IntMatrix.from_rows([[1]]))
    ok = GroupMorphism(src, PresentedGroup((4,)), IntMatrix.from_rows([[2]]))
    assert ok.apply((1,)) == (2,)


def test_subgroup_membership_and_equality():
    g = PresentedGroup((0, 4))
    s1 = Subgroup(g, [(2, 0), (0, 2)])
    assert s1.contains((2, 2))
    assert not s1.contains((1, 0))
    assert not s1.contains((0, 1))
    s2 = Subgroup(g, [(2, 2), (0, 2)])
    assert s1.equals(s2)
    assert s1.group() == FgAbGroup(1, (2,))


def test_kernel_image_exactness():
    # Z --x2--> Z --proj--> Z/2 is exact at the middle
    zz = PresentedGroup((0,))
    z2 = PresentedGroup((2,))
    f = GroupMorphism(zz, zz, IntMatrix.from_rows([[2]]))
    g = GroupMorphism(zz, z2, IntMatrix.from_rows([[1]]))
    assert exact_at(f, g)
    bad = GroupMorphism(zz, zz, IntMatrix.from_rows([[4]]))
    assert not exact_at(bad, g)


def test_morphism_iso_detection():
    p = PresentedGroup((0, 2))
    iso = GroupMorphism(p, p, IntMatrix.from_rows([[1, 0], [1, 1]]))
    assert iso.is_isomorphism()
    not_iso = GroupMorphism(p, p, IntMatrix.from_rows([[2, 0], [0, 1]]))
    assert not not_iso.is_isomorphism()


def test_finite_table_and_subgroups():
    t = FiniteGroupTable(FgAbGroup(0, (2, 2)))
    assert len(t) == 4
    subs = t.subgroups()
    assert len(subs) == 5  # trivial, three Z/2's, everything


def test_structure_from_counts():
    t = FiniteGroupTable(FgAbGroup(0, (2, 4)))
    def count(d):
        return sum(1 for e in t.elements if all((d * a) % q == 0 for a, q in zip(e, t.orders)))
    assert finite_structure_from_counts(count, len(t)) == FgAbGroup(0, (2, 4))

    t2 = FiniteGroupTable(FgAbGroup(0, (6,)))
    def count2(d):
        return sum(1 for e in t2.elements if all((d * a) % q == 0 for a, q in zip(e, t2.orders)))
    assert finite_structure_from_counts(count2, 6) == cyclic(6)
