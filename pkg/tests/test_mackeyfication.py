import numpy as np
import pytest

from conftest import system
from mackey_fusion import fp
from mackey_fusion.constructions import random_functor, representable
from mackey_fusion.limits import chain_bound, higher_limits
from mackey_fusion.mackey import (coset_action, fixed_point_functor, h0_functor, h1_functor,
                                  restrict_to_centrics, verify_axioms)
from mackey_fusion.mackeyfication import (coinvariant_dims_by_orbits, counit_and_triangles, is_natural,
                                          iterate_cokernel, mackeyfy, zero_functor)
from mackey_fusion.simple import build_S_formula, simple_functor_pairs

SYSTEMS = ["d8", "s4", "27"]


def _mackey_functors(name):
    fs, O, Oc = system(name)
    # H^1 restricted to centrics can fail the truncated decomposition, so it is not used here
    out = [restrict_to_centrics(h0_functor(O), Oc), mackeyfy(representable(Oc, 0)).I_N]
    out += [build_S_formula(Oc, V) for q, V in simple_functor_pairs(Oc)[:3]]
    return out


@pytest.mark.parametrize("name", SYSTEMS)
def test_triangle_identities(name):
    Ms = _mackey_functors(name)
    assert len(Ms) >= 4
    for M in Ms:
        assert verify_axioms(M)["ok"]
        rep = counit_and_triangles(M)
        assert all(rep.values()), (M.name, rep)


@pytest.mark.parametrize("name", SYSTEMS)
def test_mackeyfication_of_random_functors(name):
    fs, O, Oc = system(name)
    rng = np.random.default_rng(11)
    for _ in range(10):
        N = random_functor(Oc, rng)
        res = mackeyfy(N)
        assert verify_axioms(res.I_N)["ok"]
        assert is_natural(N, res.I_N, res.eta)
        # eta is split injective and the cokernel has the complementary dimension
        for a in range(Oc.n):
            assert fp.rank(res.eta[a], N.p) == N.dims[a]
        assert [i - n for i, n in zip(res.I_N.dims, N.dims)] == list(res.C_N.dims)
        # dimensions from the quotient space agree with the orbit decomposition
        assert res.dims() == coinvariant_dims_by_orbits(N)
        assert list(res.C_N.dims) == coinvariant_dims_by_orbits(N, proper=True)
        assert res.C_N.check_functor() == []


@pytest.mark.parametrize("name", SYSTEMS)
def test_representables_and_mackeyfied_fixed_points(name):
    fs, O, Oc = system(name)
    for b in range(Oc.n):
        assert verify_axioms(mackeyfy(representable(Oc, b)).I_N)["ok"]
    F = fixed_point_functor(Oc, coset_action(fs.G, fs.G.trivial))
    assert verify_axioms(mackeyfy(F.contravariant()).I_N)["ok"]


def test_h1_on_centrics_of_d8_fails_truncated_decomposition(d8):
    fs, O, Oc = d8
    M = restrict_to_centrics(h1_functor(O), Oc)
    rep = verify_axioms(M)
    assert not rep["functor"] and rep["mackey"]
    assert verify_axioms(mackeyfy(M.contravariant()).I_N)["ok"]


def test_zero_functor_mackeyfies_to_zero(d8):
    fs, O, Oc = d8
    res = mackeyfy(zero_functor(Oc))
    assert res.dims() == [0] * Oc.n


@pytest.mark.parametrize("name", SYSTEMS)
def test_iterated_cokernel_terminates(name):
    fs, O, Oc = system(name)
    n = chain_bound(Oc)
    rng = np.random.default_rng(5)
    for _ in range(5):
        N = random_functor(Oc, rng)
        assert sum(iterate_cokernel(N, n + 1).dims) == 0


@pytest.mark.parametrize("name", SYSTEMS)
def test_cokernel_shifts_higher_limits(name):
    """``lim^i C(N) = lim^{i+1} N`` for ``i >= 1`` and the low-degree exact sequence."""
    fs, O, Oc = system(name)
    n = chain_bound(Oc)
    D = n + 3
    rng = np.random.default_rng(23)
    for _ in range(10):
        N = random_functor(Oc, rng)
        res = mackeyfy(N)
        lN = higher_limits(Oc, N, D).dims
        lI = higher_limits(Oc, res.I_N.contravariant(), D).dims
        lC = higher_limits(Oc, res.C_N, D - 1).dims
        assert all(d == 0 for d in lI[1:])
        for i in (1, 2):
            assert lC[i] == lN[i + 1]
        assert lN[1] == lC[0] - (lI[0] - lN[0])
