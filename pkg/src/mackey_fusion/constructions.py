"""Named groups, the maximal class groups ``B(3, r; 0, gamma, 0)``, the order
``p^(p+3)`` counterexample to Mackey-ness of cohomology, and random functors.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fp
from .fusion import FusionSystem, build_generated, build_inner
from .group import (Group, Subgroup, center, derived_subgroup, enumerate_subgroups, exponent,
                    is_abelian, left_cosets, minimal_generators)
from .mackey import ContravariantFunctor
from .simple import FunctorModule


def _table_from_codes(n: int, mult) -> Group:
    """Cayley table for elements ``0 .. n-1`` with a vectorized product ``mult(a, b)``."""
    a = np.repeat(np.arange(n), n)
    b = np.tile(np.arange(n), n)
    return np.asarray(mult(a, b), dtype=np.int32).reshape(n, n)


# ---------------------------------------------------------------------------
# small groups
# ---------------------------------------------------------------------------

def cyclic(n: int) -> Group:
    return Group(_table_from_codes(n, lambda a, b: (a + b) % n), name=f"C{n}")


def direct_product(G: Group, H: Group, name: str = "") -> Group:
    n, m = G.order, H.order

    def mult(a, b):
        return G.mul[a // m, b // m].astype(np.int64) * m + H.mul[a % m, b % m]
    return Group(_table_from_codes(n * m, mult), name=name or f"{G.name}x{H.name}")


def _metacyclic_2group(kind: str, order: int) -> Group:
    """``<a, b>`` with ``|a| = order/2``; elements ``a^i b^j`` coded as ``2 i + j``."""
    if order < 8 or order & (order - 1):
        raise ValueError("order must be a power of 2, at least 8")
    m = order // 2
    if kind == "D":
        t, sq = m - 1, 0
    elif kind == "SD":
        if order < 16:
            raise ValueError("semidihedral groups need order at least 16")
        t, sq = m // 2 - 1, 0
    elif kind == "Q":
        t, sq = m - 1, m // 2
    else:
        raise ValueError(f"unknown kind {kind!r}")

    def mult(x, y):
        i, j = x // 2, x % 2
        k, l = y // 2, y % 2
        # b^j a^k = a^(t^j k) b^j and b^2 = a^sq
        ii = (i + np.where(j == 1, t * k, k) + np.where((j == 1) & (l == 1), sq, 0)) % m
        return 2 * ii + (j + l) % 2
    return Group(_table_from_codes(order, mult), name=f"{kind}{order}")


def dihedral(order: int) -> Group:
    return _metacyclic_2group("D", order)


def semidihedral(order: int) -> Group:
    return _metacyclic_2group("SD", order)


def quaternion(order: int) -> Group:
    return _metacyclic_2group("Q", order)


def build_2group(kind: str, order: int) -> Group:
    return _metacyclic_2group(kind, order)


def symmetric4() -> Group:
    return Group.from_permutations(4, [[1, 2, 3, 0], [1, 0, 2, 3]], name="S4")


def symmetric3() -> Group:
    return Group.from_permutations(3, [[1, 2, 0], [1, 0, 2]], name="S3")


def extraspecial(p: int) -> Group:
    """``p^{1+2}_+``: triples ``(a, b, c)`` with ``(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')``."""
    if p == 2 or p > 7 or any(p % q == 0 for q in range(2, p)):
        raise ValueError("extraspecial group needs an odd prime p <= 7")
    n = p ** 3

    def mult(x, y):
        a, b, c = x // (p * p), (x // p) % p, x % p
        a2, b2, c2 = y // (p * p), (y // p) % p, y % p
        return (((a + a2) % p) * p + (b + b2) % p) * p + (c + c2 + a * b2) % p
    return Group(_table_from_codes(n, mult), name=f"{p}^(1+2)")


# ---------------------------------------------------------------------------
# B(3, r; 0, gamma, 0)
# ---------------------------------------------------------------------------

LEGAL_B3R = {4: (0, 2), 5: (0, 1), 6: (0, 1, 2), 7: (0, 1), 8: (0, 1, 2)}


@dataclass(frozen=True)
class B3rSpec:
    r: int
    gamma: int

    def __post_init__(self):
        if self.r < 4:
            raise ValueError("r must be at least 4")
        allowed = (0, 1, 2) if self.r % 2 == 0 else (0, 1)
        if self.gamma not in allowed:
            raise ValueError(f"gamma must be in {allowed} for r = {self.r}")
        if self.r == 4 and self.gamma == 1:
            raise ValueError("B(3,4;0,1,0) is the wreath product of rank three and is excluded")

    @property
    def k(self) -> int:
        return self.r // 2

    @property
    def orders(self) -> tuple:
        """Orders of ``s_1`` and ``s_2``."""
        k = self.k
        return (3 ** k, 3 ** k) if self.r % 2 else (3 ** k, 3 ** (k - 1))

    def matrix(self) -> np.ndarray:
        r, g, k = self.r, self.gamma, self.k
        if r == 4:
            return np.array([[1, -3], [1, 1]] if g == 0 else [[1, 3], [1, 1]])
        if g == 0:
            return np.array([[1, -3], [1, -2]])
        if r % 2:
            return np.array([[1, -3], [1, (-3) ** (k - 1) - 2]])
        if g == 1:
            return np.array([[1, -3 * ((-3) ** (k - 2) + 1)], [1, -2]])
        return np.array([[1, 3 * ((-3) ** (k - 2) - 1)], [1, -2]])


@dataclass
class B3r:
    spec: B3rSpec
    G: Group
    gamma1: Subgroup
    s1: int
    s2: int
    s: int
    M: np.ndarray

    def code(self, x: int, y: int, i: int) -> int:
        n1, n2 = self.spec.orders
        return (i * n1 + x % n1) * n2 + y % n2


def _act(M, x, y, n1, n2):
    return (M[0, 0] * x + M[0, 1] * y) % n1, (M[1, 0] * x + M[1, 1] * y) % n2


def matrix_action_ok(spec: B3rSpec) -> dict:
    """``M`` defines an automorphism of ``Z_{n1} x Z_{n2}`` of order dividing 3."""
    n1, n2 = spec.orders
    M = spec.matrix()
    # the image of s_2 must have order dividing n2
    hom = (M[0, 1] * n2) % n1 == 0 and (M[1, 1] * n2) % n2 == 0 and (M[1, 0] * n1) % n2 == 0
    x, y = np.meshgrid(np.arange(n1), np.arange(n2), indexing="ij")
    x, y = x.ravel(), y.ravel()
    a, b = x, y
    for _ in range(3):
        a, b = _act(M, a, b, n1, n2)
    order3 = bool(np.array_equal(a, x) and np.array_equal(b, y))
    a1, b1 = _act(M, x, y, n1, n2)
    bij = np.unique(a1 * n2 + b1).size == n1 * n2
    return {"homomorphism": bool(hom), "bijective": bool(bij), "cube_is_identity": order3}


def build_b3r(spec: B3rSpec, cap: int = 3 ** 7) -> B3r:
    """``(Z_{n1} x Z_{n2}) x| Z_3`` with ``s`` acting by ``M^{r, gamma}`` on column vectors.

    An element ``(v, i)`` is coded as ``(i * n1 + x) * n2 + y`` for ``v = (x, y)``
    and ``(v, i)(w, j) = (v + M^i w, i + j)``.
    """
    if 3 ** spec.r > cap:
        raise ValueError(f"3^{spec.r} exceeds cap {cap}")
    chk = matrix_action_ok(spec)
    if not all(chk.values()):
        raise ValueError(f"matrix does not define an order-3 action: {chk}")
    n1, n2 = spec.orders
    M = spec.matrix()
    powers = [np.eye(2, dtype=np.int64), M, M @ M]

    def mult(a, b):
        i, x, y = a // (n1 * n2), (a // n2) % n1, a % n2
        j, x2, y2 = b // (n1 * n2), (b // n2) % n1, b % n2
        wx, wy = np.empty_like(x2), np.empty_like(y2)
        for e in range(3):
            sel = i == e
            wx[sel], wy[sel] = _act(powers[e], x2[sel], y2[sel], n1, n2)
        return (((i + j) % 3) * n1 + (x + wx) % n1) * n2 + (y + wy) % n2

    G = Group(_table_from_codes(3 ** spec.r, mult), name=f"B(3,{spec.r};0,{spec.gamma},0)")
    gamma1 = G.subgroup(np.arange(n1 * n2))
    s1, s2, s = n2, 1, n1 * n2
    return B3r(spec, G, gamma1, s1, s2, s, M)


def _is_cyclic(H: Subgroup) -> bool:
    return H.order == 1 or int(H.parent.elt_orders[H.elements].max()) == H.order


def _rank(H: Subgroup) -> int:
    """Number of generators of a p-group (dimension of ``H / Phi(H)``)."""
    if H.order == 1:
        return 0
    return len(minimal_generators(H))


def check_b3r(B: B3r, subgroups=None, extra_systems=()) -> dict:
    """Exhaustive check of the structural clauses and the centric classification.

    Returns ``{clause: bool}`` plus counters; ``extra_systems`` are further
    fusion systems on ``B`` for the classification of F-centric subgroups.
    """
    G, spec = B.G, B.spec
    k, r = spec.k, spec.r
    n1, n2 = spec.orders
    g1 = B.gamma1
    subs = subgroups if subgroups is not None else enumerate_subgroups(G, cap=3 ** 8)
    out = {}
    # (a)
    maximal = [H for H in subs if H.order * 3 == G.order]
    abelian_max = [H for H in maximal if is_abelian(H)]
    out["a_gamma1_abelian"] = is_abelian(g1)
    out["a_gamma1_rank_two"] = _rank(g1) == 2
    out["a_contains_derived"] = derived_subgroup(G.whole) <= g1
    out["a_characteristic"] = len(abelian_max) == 1 and abelian_max[0] == g1
    out["a_generator_orders"] = (int(G.elt_orders[B.s1]), int(G.elt_orders[B.s2])) == (n1, n2)
    # (b)
    M = B.M
    cs = G.conj_row(B.s)
    ok_b = True
    for col, gen in ((0, B.s1), (1, B.s2)):
        target = B.code(int(M[0, col]), int(M[1, col]), 0)
        ok_b &= int(cs[gen]) == target
    out["b_action_matrix"] = bool(ok_b)
    out["b_semidirect"] = (int(G.elt_orders[B.s]) == 3 and not g1.members[B.s]
                           and g1.is_normal_in(G.whole))
    # (c)
    Z = center(G)
    zgen = G.power(B.s2, 3 ** (k - 1)) if r % 2 else G.power(B.s1, 3 ** (k - 1))
    out["c_center"] = Z.order == 3 and bool(Z.members[zgen]) and zgen != 0
    # (d) and the centric classification
    inner = build_inner(G, name=G.name)
    d1 = d2_contains = d2_rank_one = d2_centric = True
    counters = {"subgroups": len(subs), "inside_gamma1": 0, "outside_gamma1": 0}
    for H in subs:
        i = inner.index_of(H)
        centric = inner.is_centric(i)
        if H <= g1:
            counters["inside_gamma1"] += 1
            d1 &= centric == (H == g1)
            continue
        counters["outside_gamma1"] += 1
        K = H.intersect(g1)
        if K.order > 1:
            d2_contains &= Z <= K
            if _rank(K) == 1:
                d2_rank_one &= K == Z
        d2_centric &= centric == (K.order > 1)
    out["d1_inside_gamma1"] = bool(d1)
    out["d2_contains_center"] = bool(d2_contains)
    out["d2_rank_one_is_center"] = bool(d2_rank_one)
    out["d2_centric_iff_K_nontrivial"] = bool(d2_centric)
    for j, fs in enumerate((inner,) + tuple(extra_systems)):
        out[f"centric_classification_system{j}"] = bool(_check_centric_classification(B, fs, Z))
    out["counts"] = counters
    return out


def _check_centric_classification(B: B3r, fs: FusionSystem, Z: Subgroup) -> bool:
    """F-centric classification of subgroups in terms of ``K = P cap gamma_1``."""
    g1 = B.gamma1
    ok = True
    for i, H in enumerate(fs.subs):
        centric = fs.is_centric(i)
        if H <= g1:
            ok &= centric == (H == g1)
            continue
        K = H.intersect(g1)
        small = H.order == 9 and (exponent(H) == 3 or _is_cyclic(H))
        conj_into = any(fs.subs[t] <= g1 for t in fs.class_members[fs.class_of(i)])
        excluded = K.order == 1 or (K == Z and small and conj_into)
        ok &= centric == (not excluded)
    return ok


def b3r_exotic_type_system(B: B3r) -> FusionSystem:
    """A generated system fusing an elementary abelian ``P`` outside ``gamma_1`` into ``gamma_1``.

    ``P = <s, z>`` with ``z`` central of order 3 is sent onto ``<x, z>`` by
    ``s -> x``, ``z -> z``, where ``x`` has order 3 in ``gamma_1`` outside
    ``Z(B)``.  The result need not be saturated; it exercises the clause of
    the classification where F-conjugacy into ``gamma_1`` matters.
    """
    from .fusion import extend_hom
    G = B.G
    Z = center(G)
    z = int(Z.elements[1])
    x = next(int(e) for e in B.gamma1.elements.tolist()
             if G.elt_orders[e] == 3 and not Z.members[e])
    P = G.generate([B.s, z])
    res = extend_hom(G, [B.s, z], [x, z], P)
    if res is None:
        raise ValueError("s -> x, z -> z does not define a homomorphism")
    return build_generated(G, G.whole, [(P, res[1])], name=f"{G.name}+fuse")


# ---------------------------------------------------------------------------
# the order p^(p+3) example
# ---------------------------------------------------------------------------

def jordan_block(n: int, upper: bool = True) -> np.ndarray:
    A = np.eye(n, dtype=np.int64)
    for i in range(n - 1):
        if upper:
            A[i, i + 1] = 1
        else:
            A[i + 1, i] = 1
    return A


def example43_matrices(p: int, upper: bool = True) -> dict:
    """``A_p``, ``B_p`` and ``C = I + A_p + ... + A_p^{p-1}`` (integral) with its rightmost column."""
    A = jordan_block(p, upper)
    Bm = np.zeros((p + 2, p + 2), dtype=np.int64)
    Bm[:p, :p] = A
    Bm[p:, p:] = jordan_block(2, upper)
    C = np.zeros((p, p), dtype=np.int64)
    Ai = np.eye(p, dtype=np.int64)
    for _ in range(p):
        C += Ai
        Ai = Ai @ A
    col = C[:, -1]
    return {"A": A, "B": Bm, "C": C, "column": col.tolist(),
            "c1": int(col[0]), "c1_mod_p": int(col[0] % p),
            "rest_zero_mod_p": bool(np.all(col[1:] % p == 0)),
            "c1_equals_p_minus_1": int(col[0]) == p - 1}


@dataclass
class Example43:
    p: int
    G: Group
    Bmat: np.ndarray
    Q: Subgroup
    U: Subgroup
    P: Subgroup
    b: int  # the element B_p of S
    u: int  # the element (0,...,0,1,0,0) of U
    info: dict = field(default_factory=dict)

    def vec(self, g: int) -> np.ndarray:
        p, n = self.p, self.p + 2
        return np.array([(g // p ** (n - 1 - j)) % p for j in range(n)], dtype=np.int64)


def build_example43(p: int, upper: bool = True) -> Example43:
    """``S = F_p^{p+2} x| <B_p>``; an element ``(v, i)`` is coded as ``i * p^(p+2) + code(v)``."""
    n = p + 2
    mats = example43_matrices(p, upper)
    Bm = mats["B"] % p
    V = p ** n
    weights = p ** np.arange(n - 1, -1, -1)
    vecs = (np.arange(V)[:, None] // weights[None, :]) % p
    powers = [np.eye(n, dtype=np.int64)]
    for _ in range(p - 1):
        powers.append(powers[-1] @ Bm % p)
    # act[i][c] = code of B^i v(c)
    act = [((vecs @ Pm.T) % p) @ weights for Pm in powers]

    def mult(a, b):
        i, x = a // V, a % V
        j, y = b // V, b % V
        wy = np.empty_like(y)
        for e in range(p):
            sel = i == e
            wy[sel] = act[e][y[sel]]
        return ((i + j) % p) * V + ((vecs[x] + vecs[wy]) % p) @ weights

    G = Group(_table_from_codes(p * V, mult), name=f"S_{p}")
    Q = G.subgroup(np.arange(V))
    U = G.subgroup(np.arange(V)[vecs[:, -1] == 0])
    b = V
    P = G.generate(list(minimal_generators(U)) + [b])
    u = int(weights[p - 1])
    return Example43(p, G, mats["B"], Q, U, P, b, u, info=mats)


def h1_transfer_value(G: Group, H: Subgroup, f, x: int) -> int:
    """``t(f)(x) = sum_i f(t_{sigma(i)}^-1 x t_i)`` over a left transversal of ``H`` in ``G``."""
    reps = left_cosets(G, H, G.whole)
    coset_of = {}
    for k, t in enumerate(reps):
        for h in H.elements.tolist():
            coset_of[int(G.mul[t, h])] = k
    total = 0
    for t in reps:
        y = int(G.mul[x, t])
        ts = reps[coset_of[y]]
        total += f(int(G.mul[G.inv[ts], y]))
    return total


def example43_witness(ex: Example43) -> dict:
    """``r(t(f))(u)`` for ``f`` = first coordinate, evaluated through the transfer formula."""
    p = ex.p
    f = lambda g: int(ex.vec(g)[0])  # noqa: E731
    val = h1_transfer_value(ex.G, ex.Q, f, ex.u) % p
    return {"f": "first coordinate", "u": ex.vec(ex.u).tolist(), "value": val, "nonzero": val != 0}


def example43_structure(ex: Example43, fs: FusionSystem | None = None) -> dict:
    """Clauses ``PQ = S``, ``P cap Q = U`` noncentric, ``P`` and ``Q`` centric."""
    G = ex.G
    from .group import centralizer
    prod = np.unique(G.mul[ex.P.elements[:, None], ex.Q.elements[None, :]])
    out = {
        "PQ_equals_S": prod.size == G.order,
        "P_cap_Q_equals_U": ex.P.intersect(ex.Q) == ex.U,
        "U_noncentric": not (centralizer(G, ex.U) <= ex.U),
        "Q_centric": centralizer(G, ex.Q) <= ex.Q,
        "P_centric": centralizer(G, ex.P) <= ex.P,
        "Q_normal": ex.Q.is_normal_in(G.whole),
        "B_preserves_U": ex.U.conjugate(ex.b) == ex.U,
        "order": G.order == ex.p ** (ex.p + 3),
    }
    if fs is not None:
        # in F_S(S) centric means S-centric for every conjugate; conjugates stay centric
        out["P_F_centric"] = fs.is_centric(fs.index_of(ex.P))
        out["Q_F_centric"] = fs.is_centric(fs.index_of(ex.Q))
        out["U_F_noncentric"] = not fs.is_centric(fs.index_of(ex.U))
    return out


# ---------------------------------------------------------------------------
# random contravariant functors
# ---------------------------------------------------------------------------

def representable(orbit, b: int) -> ContravariantFunctor:
    """``k Hom(-, b)``: ``f: a -> a'`` sends ``e_g`` to ``e_{g f}``."""
    dims = [orbit.hom_count(a, b) for a in range(orbit.n)]
    contra = {}
    for f in orbit.morphisms():
        a, a2 = f.src, f.tgt
        m = fp.zeros(dims[a], dims[a2])
        for g in range(dims[a2]):
            gf = orbit.compose((a2, b, g), (a, a2, f.index))
            m[gf[2], g] = 1
        contra[(a, a2, f.index)] = m
    return ContravariantFunctor(orbit, dims, contra, name=f"k[-,{b}]")


def direct_sum(functors, name: str = "") -> ContravariantFunctor:
    orbit = functors[0].orbit
    dims = [sum(F.dims[a] for F in functors) for a in range(orbit.n)]
    contra = {}
    for key in functors[0].contra:
        a, b, _ = key
        m = fp.zeros(dims[a], dims[b])
        ra = rb = 0
        for F in functors:
            da, db = F.dims[a], F.dims[b]
            m[ra:ra + da, rb:rb + db] = F.contra[key]
            ra, rb = ra + da, rb + db
        contra[key] = m
    return ContravariantFunctor(orbit, dims, contra, name=name or "+".join(F.name for F in functors))


def quotient_contravariant(N: ContravariantFunctor, sub, name: str = "") -> ContravariantFunctor:
    p = N.p
    qs = [fp.quotient_map(d, s) for d, s in zip(N.dims, sub)]
    contra = {(a, b, i): fp.matmul(qs[a].proj, fp.matmul(m, qs[b].section, p), p)
              for (a, b, i), m in N.contra.items()}
    return ContravariantFunctor(N.orbit, [q.dim for q in qs], contra, name=name or N.name + "/sub")


def subfunctor_contravariant(N: ContravariantFunctor, sub, name: str = "") -> ContravariantFunctor:
    p = N.p
    contra = {}
    for (a, b, i), m in N.contra.items():
        if sub[a].dim == 0 or sub[b].dim == 0:
            contra[(a, b, i)] = fp.zeros(sub[a].dim, sub[b].dim)
            continue
        img = fp.matmul(m, sub[b].basis.T, p).T
        contra[(a, b, i)] = sub[a].coords(img).T
    return ContravariantFunctor(N.orbit, [s.dim for s in sub], contra, name=name or N.name + "|sub")


def _random_vectors(rng, N, count):
    seeds: dict = {}
    live = [a for a in range(N.orbit.n) if N.dims[a]]
    for _ in range(count):
        if not live:
            break
        a = live[int(rng.integers(0, len(live)))]
        seeds.setdefault(a, []).append(rng.integers(0, N.p, size=N.dims[a]))
    return seeds


def random_functor(orbit, rng: np.random.Generator, max_dim: int = 4,
                   max_summands: int = 2, name: str = "") -> ContravariantFunctor:
    """A random functor with every value of dimension ``<= max_dim``.

    Free generation: a sum of representables ``k Hom(-, b)`` for random ``b``,
    sometimes with a functor concentrated at one object added.  Projection:
    the quotient by the subfunctor generated by random vectors, with more
    generators added at oversized objects until the bound holds.  With
    probability one half the result is replaced by the subfunctor generated
    by a few random vectors, so non-projective shapes occur on both sides.
    """
    p = orbit.fs.p
    k = int(rng.integers(1, max_summands + 1))
    bs = sorted(int(b) for b in rng.integers(0, orbit.n, size=k))
    parts = [representable(orbit, b) for b in bs]
    if rng.random() < 0.5:
        a = int(rng.integers(0, orbit.n))
        mats = {i: fp.eye(1) for i in range(orbit.hom_count(a, a))}
        parts.append(concentrated_functor(orbit, a, mats, 1))
        bs.append(-1 - a)
    F = direct_sum(parts)
    mod = FunctorModule(F)
    seeds = _random_vectors(rng, F, int(rng.integers(0, 3)))
    sub = mod.spin(seeds)
    while True:
        over = [a for a in range(orbit.n) if F.dims[a] - sub[a].dim > max_dim]
        if not over:
            break
        a = over[int(rng.integers(0, len(over)))]
        seeds.setdefault(a, []).append(rng.integers(0, p, size=F.dims[a]))
        sub = mod.spin(seeds)
    tag = name or f"rand({','.join(map(str, bs))})"
    N = quotient_contravariant(F, sub, name=tag)
    if rng.random() < 0.5 and sum(N.dims):
        sub = FunctorModule(N).spin(_random_vectors(rng, N, int(rng.integers(1, 3))))
        N = subfunctor_contravariant(N, sub, name=tag + "'")
    return N


def concentrated_functor(orbit, a: int, mats: dict, dim: int, name: str = "") -> ContravariantFunctor:
    """Value ``V`` at ``a`` (``mats[i]`` is ``N`` of automorphism class ``i``) and zero elsewhere."""
    dims = [dim if b == a else 0 for b in range(orbit.n)]
    contra = {}
    for f in orbit.morphisms():
        key = (f.src, f.tgt, f.index)
        if f.src == a and f.tgt == a:
            contra[key] = np.asarray(mats[f.index], dtype=np.int64)
        else:
            contra[key] = fp.zeros(dims[f.src], dims[f.tgt])
    return ContravariantFunctor(orbit, dims, contra, name=name or f"k@{a}")


# ---------------------------------------------------------------------------
# a catalogue of the named systems
# ---------------------------------------------------------------------------

def named_group(name: str) -> Group:
    """``d8``, ``q8``, ``sd16``, ``d16``, ``q16``, ``s3``, ``s4``, ``27``, ``b3r5``, ``c3xc3``, ``s3xs3``, ``example43``."""
    key = name.lower()
    if key in ("d8", "q8", "sd16", "d16", "q16"):
        kind = {"d": "D", "q": "Q", "s": "SD"}[key[0]]
        return build_2group(kind, int(key.lstrip("dqs")))
    if key in ("c1", "trivial"):
        return cyclic(1)
    if key == "s3":
        return symmetric3()
    if key == "s4":
        return symmetric4()
    if key in ("27", "3^1+2", "extraspecial3"):
        return extraspecial(3)
    if key.startswith("b3r"):
        return build_b3r(B3rSpec(int(key[3:]), 0)).G
    if key == "c3xc3":
        return direct_product(cyclic(3), cyclic(3))
    if key == "s3xs3":
        return direct_product(symmetric3(), symmetric3(), name="S3xS3")
    if key in ("example43", "ex43"):
        return build_example43(2).G
    raise ValueError(f"unknown group {name!r}")


def named_system(name: str) -> FusionSystem:
    """Inner systems ``F_S(S)`` of the named 2- and 3-groups, plus ``s4`` (``F_{D8}(S4)``)
    and ``s3xs3`` (``F_{C3xC3}(S3 x S3)``)."""
    from .fusion import build_ambient
    from .group import sylow_subgroup
    key = name.lower()
    if key in ("s4", "s3xs3"):
        G = named_group(key)
        p = 2 if key == "s4" else 3
        label = "F_D8(S4)" if key == "s4" else "F_C3xC3(S3xS3)"
        return build_ambient(G, sylow_subgroup(G, p), name=label)
    G = named_group(key)
    if key in ("example43", "ex43"):
        return build_inner(G, name="F(S_2)")
    return build_inner(G, name=f"F({G.name or key})")


def non_saturated_example() -> FusionSystem:
    """``C3 x C3`` with inversion on the first factor only: the extension axiom fails."""
    G = direct_product(cyclic(3), cyclic(3))
    A = G.generate([3])  # first factor
    img = G.inv[A.elements].astype(np.int64)
    return build_generated(G, G.whole, [(A, img)], name="C3xC3+inv")
