import numpy as np
import pytest

from mackey_fusion.constructions import build_2group, build_b3r, build_example43, cyclic, extraspecial, B3rSpec
from mackey_fusion.group import (CapExceeded, Group, center, centralizer, conjugacy_classes_of_subgroups,
                                 double_cosets, enumerate_subgroups, exhaustive_subgroups, exponent,
                                 left_cosets, n_g_q_h, normalizer, orbit_counting_double_cosets,
                                 prime_of)

D8_PERMS = [[1, 2, 3, 0], [2, 1, 0, 3]]  # (0 1 2 3) and (0 2)


def d8_perm():
    return Group.from_permutations(4, D8_PERMS, name="D8")


def test_from_permutations_small():
    assert Group.from_permutations(2, [[1, 0]]).order == 2
    G = d8_perm()
    assert G.order == 8
    assert int((G.elt_orders == 4).sum()) == 2


def test_example43_group_order():
    assert build_example43(2).G.order == 32


def test_bad_permutation_rejected():
    with pytest.raises(ValueError):
        Group.from_permutations(3, [[0, 0, 1]])


def test_enumerate_subgroups_counts():
    assert len(enumerate_subgroups(cyclic(2))) == 2
    G = d8_perm()
    subs = enumerate_subgroups(G)
    assert len(subs) == 10
    assert len(conjugacy_classes_of_subgroups(G, subs)) == 8


@pytest.mark.parametrize("G", [d8_perm(), build_2group("Q", 8), build_2group("SD", 16), cyclic(12),
                               Group.from_permutations(4, [[1, 2, 3, 0], [1, 0, 2, 3]])])
def test_enumeration_matches_exhaustive_oracle(G):
    fast = [H.key for H in enumerate_subgroups(G)]
    assert fast == [H.key for H in exhaustive_subgroups(G)]
    for H in enumerate_subgroups(G):
        assert G.order % H.order == 0


def test_extraspecial_classes():
    G = extraspecial(3)
    subs = enumerate_subgroups(G)
    assert [H.key for H in subs] == [H.key for H in exhaustive_subgroups(G)]
    classes = conjugacy_classes_of_subgroups(G, subs)
    by_order = {}
    for cls in classes:
        by_order.setdefault(cls[0].order, []).append(len(cls))
    # 1, Z(S), four classes of noncentral C3 (three each), four maximal, S
    assert by_order == {1: [1], 3: sorted(by_order[3]), 9: [1] * 4, 27: [1]}
    assert sorted(by_order[3]) == [1, 3, 3, 3, 3]
    assert exponent(G.whole) == 3 and center(G).order == 3


def test_center_and_centralizers():
    G = d8_perm()
    assert center(G).order == 2
    assert normalizer(G, G.whole) == G.whole
    B = build_b3r(B3rSpec(4, 0))
    assert centralizer(B.G, B.gamma1) == B.gamma1


def test_double_cosets_examples():
    G = d8_perm()
    assert len(double_cosets(G, G.whole, G.whole, G.whole)) == 1
    C6 = cyclic(6)
    assert len(double_cosets(C6, C6.trivial, C6.trivial, C6.whole)) == 6
    refl = [H for H in enumerate_subgroups(G) if H.order == 2 and H != center(G)]
    for Q in refl:
        for P in refl:
            reps = double_cosets(G, Q, P, G.whole)
            assert len(reps) == orbit_counting_double_cosets(G, Q, P, G.whole)
            sizes = sum(len({int(G.mul[G.mul[q, x], y]) for q in Q.elements for y in P.elements}) for x in reps)
            assert sizes == G.order


def test_left_cosets_partition():
    G = extraspecial(3)
    for H in enumerate_subgroups(G):
        reps = left_cosets(G, H, G.whole)
        cover = np.concatenate([G.mul[t, H.elements] for t in reps])
        assert sorted(cover.tolist()) == list(range(G.order))


def test_n_g_q_h_examples():
    G = d8_perm()
    subs = enumerate_subgroups(G)
    C4 = [H for H in subs if H.order == 4 and int(G.elt_orders[H.elements].max()) == 4][0]
    _, idx = n_g_q_h(G, G.trivial, C4)
    assert idx == 2
    elts, idx = n_g_q_h(G, center(G), C4)
    assert len(elts) == 8 and idx % 2 == (G.order // C4.order) % 2


def test_cap_exceeded():
    with pytest.raises(CapExceeded):
        enumerate_subgroups(extraspecial(3), cap=8)
    assert prime_of(27) == 3
