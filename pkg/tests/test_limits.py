import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import system
from mackey_fusion import fp
from mackey_fusion.constructions import random_functor
from mackey_fusion.group import CapExceeded
from mackey_fusion.limits import (FullOrbitCategory, TransportedFunctor, build_complex, chain_bound,
                                  check_d_squared, enumerate_chains, higher_limits, lim0_direct,
                                  sharpness_report)
from mackey_fusion.mackey import h0_functor, h1_functor, restrict_to_centrics


class MonoidCategory:
    """One object whose endomorphisms form the cyclic group of order ``m``."""

    n = 1

    def __init__(self, m):
        self.m = m

    def hom_count(self, a, b):
        return self.m

    def identity(self, a):
        return 0

    def compose(self, g, f):
        return (0, 0, (g[2] + f[2]) % self.m)


class ArrowCategory:
    """Two objects and one non-identity morphism ``0 -> 1``."""

    n = 2

    def hom_count(self, a, b):
        return 1 if a <= b else 0

    def identity(self, a):
        return 0

    def compose(self, g, f):
        return (f[0], g[1], 0)


class Values:
    def __init__(self, p, dims, contra):
        self.p, self.dims, self.contra = p, dims, contra


def _trivial_on_cyclic(m, p):
    return Values(p, [1], {(0, 0, i): fp.eye(1) for i in range(m)})


@pytest.mark.parametrize("m,p,expected", [(2, 2, [1] * 5), (3, 3, [1] * 5), (2, 3, [1, 0, 0, 0, 0]),
                                          (1, 2, [1, 0, 0, 0, 0])])
def test_group_cohomology_of_cyclic_groups(m, p, expected):
    rep = higher_limits(MonoidCategory(m), _trivial_on_cyclic(m, p), 4, check=True)
    assert rep.dims == expected


def test_sign_representation_of_c2_in_odd_characteristic():
    N = Values(3, [1], {(0, 0, 0): fp.eye(1), (0, 0, 1): np.array([[2]])})
    assert higher_limits(MonoidCategory(2), N, 3).dims == [0, 0, 0, 0]


def test_arrow_category_has_no_higher_limits():
    N = Values(2, [2, 3], {(0, 0, 0): fp.eye(2), (1, 1, 0): fp.eye(3),
                           (0, 1, 0): np.array([[1, 0, 1], [0, 1, 1]])})
    rep = higher_limits(ArrowCategory(), N, 3, check=True)
    assert rep.dims == [3, 0, 0, 0]
    assert lim0_direct(ArrowCategory(), N) == 3


def test_chain_enumeration_counts():
    assert [len(l) for l in enumerate_chains(MonoidCategory(3), 3)] == [1, 2, 4, 8]
    assert [len(l) for l in enumerate_chains(ArrowCategory(), 2)] == [2, 1, 0]
    with pytest.raises(CapExceeded):
        enumerate_chains(MonoidCategory(3), 10, cap=100)


@pytest.mark.parametrize("name,n", [("d8", 1), ("27", 1), ("c3xc3", 0), ("q8", 1), ("s4", 1)])
def test_chain_bound_values(name, n):
    fs, O, Oc = system(name)
    assert chain_bound(Oc) == n


@pytest.mark.parametrize("name", ["d8", "27", "s4"])
def test_d_squared_and_lim0(name):
    fs, O, Oc = system(name)
    rng = np.random.default_rng(3)
    for _ in range(6):
        N = random_functor(Oc, rng)
        cx = build_complex(Oc, N, 3)
        assert check_d_squared(cx)
        assert higher_limits(Oc, N, 2).dims[0] == lim0_direct(Oc, N)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["d8", "27", "q8"]), st.integers(0, 2 ** 32 - 1))
def test_inner_systems_have_no_higher_limits(name, seed):
    """For an inner system ``S`` is terminal: ``lim = N(S)`` in degree 0 and nothing above."""
    fs, O, Oc = system(name)
    N = random_functor(Oc, np.random.default_rng(seed))
    top = Oc.obj_of(fs.index_of(fs.G.whole))
    rep = higher_limits(Oc, N, chain_bound(Oc) + 2)
    assert rep.dims[0] == N.dims[top]
    assert all(d == 0 for d in rep.dims[1:])


def test_skeleton_and_full_category_agree_on_d8(d8):
    fs, O, Oc = d8
    # every centric subgroup of D8 is normal, so use all subgroups
    full = FullOrbitCategory(fs)
    assert full.n > O.n
    rng = np.random.default_rng(8)
    functors = [random_functor(O, rng) for _ in range(4)]
    functors += [h0_functor(O).contravariant(), h1_functor(O).contravariant()]
    for N in functors:
        a = higher_limits(O, N, 3).dims
        b = higher_limits(full, TransportedFunctor(full, O, N), 3).dims
        assert a == b


def test_skeleton_and_full_category_agree_on_s4(s4):
    fs, O, Oc = s4
    full = FullOrbitCategory(fs)
    assert full.n > O.n
    rng = np.random.default_rng(9)
    for _ in range(3):
        N = random_functor(O, rng)
        assert higher_limits(O, N, 2).dims == higher_limits(full, TransportedFunctor(full, O, N), 2).dims


@pytest.mark.parametrize("name", ["d8", "s4", "27"])
def test_sharpness_report_for_h0(name):
    fs, O, Oc = system(name)
    rep = sharpness_report(Oc, restrict_to_centrics(h0_functor(O), Oc).contravariant())
    assert rep["pass"] and rep["n"] == chain_bound(Oc)
    assert rep["dims"]["lim0"] == 1
    assert len(rep["dims"]) == chain_bound(Oc) + 4


def test_cap_is_enforced(d8):
    fs, O, Oc = d8
    N = restrict_to_centrics(h0_functor(O), Oc).contravariant()
    with pytest.raises(CapExceeded):
        higher_limits(Oc, N, 4, cap=5)
