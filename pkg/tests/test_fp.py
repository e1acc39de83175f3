import numpy as np
from hypothesis import given, settings, strategies as st

from mackey_fusion import fp


def test_rref_identity_and_zero():
    R, piv, r = fp.rref(np.eye(3, dtype=int), 3)
    assert np.array_equal(R, np.eye(3)) and r == 3 and piv == [0, 1, 2]
    R, piv, r = fp.rref(np.zeros((2, 4), dtype=int), 2)
    assert not R.any() and r == 0


def test_rref_hand_example():
    R, _, r = fp.rref(np.array([[1, 2], [2, 4]]), 5)
    assert R.tolist() == [[1, 2], [0, 0]] and r == 1


def test_kernel_examples():
    assert fp.kernel(np.eye(4, dtype=int), 3).dim == 0
    assert fp.kernel(np.zeros((2, 5), dtype=int), 3).dim == 5
    K = fp.kernel(np.array([[1, 1]]), 2)
    # brute force over all four vectors of F_2^2
    sols = [v for v in ([0, 0], [0, 1], [1, 0], [1, 1]) if (v[0] + v[1]) % 2 == 0]
    assert K.dim == 1 and all(K.contains(np.array(v)) for v in sols)


def test_intersect_examples():
    b = fp.Subspace.span([[1, 2, 0], [0, 0, 1]], 3, 3)
    assert fp.intersect(fp.Subspace.full(3, 3), b) == b
    assert fp.intersect(b, b) == b
    l1 = fp.Subspace.span([[1, 0]], 2, 3)
    l2 = fp.Subspace.span([[1, 1]], 2, 3)
    assert fp.intersect(l1, l2).dim == 0


def test_quotient_map_examples():
    q = fp.quotient_map(3, fp.Subspace.zero(3, 2))
    assert q.dim == 3 and np.array_equal(q.proj, np.eye(3))
    assert fp.quotient_map(3, fp.Subspace.full(3, 2)).dim == 0
    rel = fp.Subspace.span([[1, 1, 0]], 3, 2)
    q = fp.quotient_map(3, rel)
    assert q.dim == 2
    assert not fp.matmul(q.proj, rel.basis.T, 2).any()
    assert np.array_equal(fp.matmul(q.proj, q.section, 2), np.eye(2))


def test_sparse_rank_examples():
    assert fp.sparse_rank([], 5, 5, 3) == 0
    assert fp.sparse_rank([(i, i, 1) for i in range(100)], 100, 100, 2) == 100


def test_sparse_rank_random_matches_dense():
    rng = np.random.default_rng(7)
    m = (rng.random((50, 50)) < 0.05) * rng.integers(1, 3, size=(50, 50))
    r, c = np.nonzero(m)
    trip = list(zip(r.tolist(), c.tolist(), m[r, c].tolist()))
    assert fp.sparse_rank(trip, 50, 50, 3) == fp.rank(m, 3)


def test_sparse_rank_200_per_configuration():
    rng = np.random.default_rng(11)
    for p in (2, 3, 5, 7):
        for rows, cols in ((6, 9), (20, 13)):
            for _ in range(200):
                m = (rng.random((rows, cols)) < 0.2) * rng.integers(1, p, size=(rows, cols))
                r, c = np.nonzero(m)
                trip = zip(r.tolist(), c.tolist(), m[r, c].tolist())
                assert fp.sparse_rank(trip, rows, cols, p) == fp.rank(m, p)


matrices = st.sampled_from([2, 3, 5, 7]).flatmap(
    lambda p: st.tuples(st.just(p), st.integers(1, 7), st.integers(1, 7)).flatmap(
        lambda t: st.tuples(st.just(t[0]), st.lists(st.lists(st.integers(0, t[0] - 1), min_size=t[2],
                                                             max_size=t[2]), min_size=t[1], max_size=t[1]))))


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_rank_nullity(pm):
    p, rows = pm
    m = np.array(rows)
    assert fp.rank(m, p) + fp.kernel(m, p).dim == m.shape[1]


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_rref_idempotent(pm):
    p, rows = pm
    R, _, _ = fp.rref(np.array(rows), p)
    R2, _, _ = fp.rref(R, p)
    assert np.array_equal(R, R2)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_sparse_rank_property(pm):
    p, rows = pm
    m = np.array(rows)
    r, c = np.nonzero(m)
    trip = zip(r.tolist(), c.tolist(), m[r, c].tolist())
    assert fp.sparse_rank(trip, *m.shape, p) == fp.rank(m, p)


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_quotient_dimension(pm):
    p, rows = pm
    m = np.array(rows)
    rel = fp.image(m.T, p)
    q = fp.quotient_map(m.shape[1], rel)
    assert q.dim == m.shape[1] - rel.dim
    if rel.dim:
        assert not fp.matmul(q.proj, rel.basis.T, p).any()
