"""Simple Mackey functors ``S_{Q,V}`` and composition series.

Two independent constructions are provided:

* :func:`build_S_quotient` evaluates ``L-bar_{Q,V}(P) = k-bar-B(P,Q) (x) V``,
  lets bisets act through the Burnside-category composition and divides by
  the intersection of kernels of all maps back to ``Q``;
* :func:`build_S_formula` uses the direct sum of relative traces over the
  ``P``-classes of subgroups ``L`` F-isomorphic to ``Q`` together with the
  explicit restriction and transfer formulas.

The two agree up to an intertwiner (:func:`find_intertwiner`).
"""
from __future__ import annotations

import itertools

import numpy as np

from . import fp
from .burnside import BurnsideCategory
from .fusion import OrbitCategory, extend_hom
from .group import (CapExceeded, centralizer, conjugacy_classes_of_subgroups, conjugator, frattini,
                    left_cosets, minimal_generators, normalizer)
from .mackey import MackeyFunctor, check_criterion_45

SIMPLE_CAP = 3 ** 12


# ---------------------------------------------------------------------------
# modules over a finite set of matrices
# ---------------------------------------------------------------------------

def spin_vectors(gens, seeds, dim: int, p: int) -> fp.Subspace:
    """Smallest subspace containing ``seeds`` and stable under every matrix in ``gens``."""
    W = fp.Subspace.span(np.asarray(seeds, dtype=np.int64).reshape(-1, dim), dim, p)
    queue = list(W.basis)
    while queue:
        v = queue.pop()
        for g in gens:
            w = fp.matmul(g, v.reshape(-1, 1), p).ravel()
            r = W.reduce(w)
            if r.any():
                W = W + fp.Subspace.span(r, dim, p)
                queue.append(r)
    return W


def _projective_points(dim: int, p: int):
    """One nonzero vector per line of ``F_p^dim`` (leading coordinate 1)."""
    for lead in range(dim):
        for tail in itertools.product(range(p), repeat=dim - lead - 1):
            v = np.zeros(dim, dtype=np.int64)
            v[lead] = 1
            v[lead + 1:] = tail
            yield v


def find_submodule(gens, dim: int, p: int, cap: int = SIMPLE_CAP, rng=None):
    """A proper nonzero invariant subspace, ``None`` if simple, or raise when undecidable.

    Tries fixed points, spins of basis vectors and kernels of a few algebra
    elements; if those all fail, spins every projective point (needs
    ``p^dim <= cap``).
    """
    if dim <= 1:
        return None
    full = dim
    # common fixed points form a submodule
    if gens:
        stack = np.vstack([(g - fp.eye(dim)) % p for g in gens])
        fix = fp.kernel(stack, p)
        if 0 < fix.dim < full:
            return fix
    for i in range(dim):
        e = np.zeros(dim, dtype=np.int64)
        e[i] = 1
        W = spin_vectors(gens, e, dim, p)
        if W.dim < full:
            return W
    rng = rng if rng is not None else np.random.default_rng(12345)
    for _ in range(20):
        if not gens:
            break
        a = fp.zeros(dim, dim)
        for g in gens:
            a = (a + int(rng.integers(p)) * g) % p
        word = gens[int(rng.integers(len(gens)))]
        a = (a + fp.matmul(word, a, p)) % p
        ker = fp.kernel(a, p)
        for v in ker.basis[:3]:
            W = spin_vectors(gens, v, dim, p)
            if W.dim < full:
                return W
    if p ** dim > cap:
        raise CapExceeded(f"exhaustive simplicity test needs p^dim = {p}^{dim} > cap")
    for v in _projective_points(dim, p):
        W = spin_vectors(gens, v, dim, p)
        if W.dim < full:
            return W
    return None


def is_simple(gens, dim: int, p: int, cap: int = SIMPLE_CAP) -> bool:
    if dim == 0:
        return False
    return find_submodule(gens, dim, p, cap) is None


def sub_action(gens, W: fp.Subspace):
    """Matrices of ``gens`` on the invariant subspace ``W`` (its RREF basis)."""
    p = W.p
    B = W.basis
    out = []
    for g in gens:
        imgs = fp.matmul(g, B.T, p).T
        out.append(W.coords(imgs).T % p if W.dim else fp.zeros(0, 0))
    return out


def quotient_action(gens, W: fp.Subspace):
    q = fp.quotient_map(W.ambient_dim, W)
    return [fp.matmul(q.proj, fp.matmul(g, q.section, W.p), W.p) for g in gens], q


def composition_factors(gens, dim: int, p: int, cap: int = SIMPLE_CAP) -> list:
    """Composition factors as lists of matrices (sub before quotient)."""
    if dim == 0:
        return []
    W = find_submodule(gens, dim, p, cap)
    if W is None:
        return [list(gens)]
    qg, _ = quotient_action(gens, W)
    return (composition_factors(sub_action(gens, W), W.dim, p, cap)
            + composition_factors(qg, dim - W.dim, p, cap))


def intertwiners(gens_a, gens_b, da: int, db: int, p: int) -> fp.Subspace:
    """Space of ``X`` (``db x da``) with ``X A_i = B_i X``, flattened row-major."""
    rows = []
    for A, B in zip(gens_a, gens_b):
        # (X A - B X)_{jk} = sum_l X_{jl} A_{lk} - sum_l B_{jl} X_{lk}
        M = np.zeros((db * da, db * da), dtype=np.int64)
        for j in range(db):
            for k in range(da):
                r = j * da + k
                for l in range(da):
                    M[r, j * da + l] += A[l, k]
                for l in range(db):
                    M[r, l * da + k] -= B[j, l]
        rows.append(M % p)
    if not rows:
        return fp.Subspace.full(db * da, p)
    return fp.kernel(np.vstack(rows), p)


def modules_isomorphic(gens_a, gens_b, da: int, db: int, p: int) -> bool:
    """Isomorphism test for simple modules: a nonzero intertwiner exists."""
    if da != db:
        return False
    return intertwiners(gens_a, gens_b, da, db, p).dim > 0


# ---------------------------------------------------------------------------
# Out_F(Q)-modules
# ---------------------------------------------------------------------------

class OutModule:
    """A module for ``Out_F(Q)``: one matrix per class in ``Hom_O(Q, Q)``."""

    def __init__(self, orbit: OrbitCategory, q: int, mats, name: str = ""):
        self.orbit = orbit
        self.q = q
        self.p = orbit.fs.p
        self.mats = [np.mod(np.asarray(m, dtype=np.int64), self.p) for m in mats]
        self.dim = self.mats[0].shape[0] if self.mats else 0
        self.name = name

    def __repr__(self):
        return f"OutModule(q={self.q}, dim={self.dim}, {self.name})"

    def act(self, i: int) -> np.ndarray:
        return self.mats[i]

    def check_homomorphism(self) -> bool:
        O, q, p = self.orbit, self.q, self.p
        n = O.hom_count(q, q)
        if not np.array_equal(self.mats[O.identity(q)], fp.eye(self.dim)):
            return False
        for i in range(n):
            for j in range(n):
                k = O.compose((q, q, i), (q, q, j))[2]
                if not np.array_equal(self.mats[k], fp.matmul(self.mats[i], self.mats[j], p)):
                    return False
        return True

    def is_simple(self, cap: int = SIMPLE_CAP) -> bool:
        return is_simple(self.mats, self.dim, self.p, cap)

    def is_trivial(self) -> bool:
        return self.dim == 1 and all(np.array_equal(m, fp.eye(1)) for m in self.mats)

    def isomorphic(self, other: "OutModule") -> bool:
        return modules_isomorphic(self.mats, other.mats, self.dim, other.dim, self.p)


def trivial_out_module(orbit: OrbitCategory, q: int) -> OutModule:
    return OutModule(orbit, q, [fp.eye(1)] * orbit.hom_count(q, q), name="trivial")


def regular_out_module(orbit: OrbitCategory, q: int) -> OutModule:
    n = orbit.hom_count(q, q)
    mats = []
    for i in range(n):
        m = fp.zeros(n, n)
        for j in range(n):
            m[orbit.compose((q, q, i), (q, q, j))[2], j] = 1
        mats.append(m)
    return OutModule(orbit, q, mats, name="regular")


def simple_out_modules(orbit: OrbitCategory, q: int, cap: int = SIMPLE_CAP) -> list:
    """All simple ``F_p Out_F(Q)``-modules up to isomorphism (trivial first)."""
    reg = regular_out_module(orbit, q)
    out = [trivial_out_module(orbit, q)]
    for fac in composition_factors(reg.mats, reg.dim, reg.p, cap):
        cand = OutModule(orbit, q, fac, name="simple")
        if not any(cand.isomorphic(v) for v in out):
            cand.name = f"simple{len(out)}"
            out.append(cand)
    return out


def out_module_of(M: MackeyFunctor, q: int) -> OutModule:
    """``M(Q)`` as an ``Out_F(Q)``-module through ``iso = M_*``."""
    O = M.orbit
    return OutModule(O, q, [M.cov[(q, q, i)] for i in range(O.hom_count(q, q))])


# ---------------------------------------------------------------------------
# functor modules (graded by objects)
# ---------------------------------------------------------------------------

class FunctorModule:
    """A Mackey functor as a module over its category algebra.

    The total space is the direct sum of the values; the object idempotents
    make every submodule graded, so submodules are per-object subspaces.
    """

    def __init__(self, M: MackeyFunctor):
        self.M = M
        self.O = M.orbit
        self.p = M.p
        self.dims = M.dims
        # (src, tgt, matrix) with matrix: block src -> block tgt
        self.arrows = []
        for (a, b, i), m in getattr(M, "cov", {}).items():
            self.arrows.append((a, b, m))
        for (a, b, i), m in M.contra.items():
            self.arrows.append((b, a, m))
        self._out = {}
        for s, t, m in self.arrows:
            self._out.setdefault(s, []).append((t, m))

    def spin(self, seeds: dict) -> list:
        """Smallest submodule containing ``seeds`` (``{object: vectors}``)."""
        p = self.p
        sub = [fp.Subspace.zero(d, p) for d in self.dims]
        queue = []
        for a, vecs in seeds.items():
            for v in np.asarray(vecs, dtype=np.int64).reshape(-1, self.dims[a]):
                r = sub[a].reduce(v)
                if r.any():
                    sub[a] = sub[a] + fp.Subspace.span(r, self.dims[a], p)
                    queue.append((a, r))
        while queue:
            a, v = queue.pop()
            for t, m in self._out.get(a, []):
                w = fp.matmul(m, v.reshape(-1, 1), p).ravel()
                r = sub[t].reduce(w)
                if r.any():
                    sub[t] = sub[t] + fp.Subspace.span(r, self.dims[t], p)
                    queue.append((t, r))
        return sub

    def is_submodule(self, sub) -> bool:
        p = self.p
        for s, t, m in self.arrows:
            if sub[s].dim == 0:
                continue
            img = fp.matmul(m, sub[s].basis.T, p).T
            if not all(sub[t].contains(v) for v in img):
                return False
        return True


def subfunctor(M: MackeyFunctor, sub) -> MackeyFunctor:
    p = M.p
    contra, cov = {}, {}
    for (a, b, i), m in M.contra.items():
        img = fp.matmul(m, sub[b].basis.T, p).T
        contra[(a, b, i)] = sub[a].coords(img).T if sub[b].dim else fp.zeros(sub[a].dim, 0)
        if sub[a].dim == 0:
            contra[(a, b, i)] = fp.zeros(0, sub[b].dim)
    for (a, b, i), m in M.cov.items():
        img = fp.matmul(m, sub[a].basis.T, p).T
        cov[(a, b, i)] = sub[b].coords(img).T if sub[a].dim else fp.zeros(sub[b].dim, 0)
        if sub[b].dim == 0:
            cov[(a, b, i)] = fp.zeros(0, sub[a].dim)
    return MackeyFunctor(M.orbit, [s.dim for s in sub], contra, cov, name=M.name + "|sub")


def quotient_functor(M: MackeyFunctor, sub) -> MackeyFunctor:
    p = M.p
    qs = [fp.quotient_map(d, s) for d, s in zip(M.dims, sub)]
    contra = {(a, b, i): fp.matmul(qs[a].proj, fp.matmul(m, qs[b].section, p), p)
              for (a, b, i), m in M.contra.items()}
    cov = {(a, b, i): fp.matmul(qs[b].proj, fp.matmul(m, qs[a].section, p), p)
           for (a, b, i), m in M.cov.items()}
    return MackeyFunctor(M.orbit, [q.dim for q in qs], contra, cov, name=M.name + "/sub")


class CompositionSeries:
    """Composition factors of a Mackey functor, listed bottom to top.

    Each factor is a dict with the simple functor, its minimal object ``q``
    (skeleton index) and the ``Out_F(Q)``-module ``V = S(Q)``.
    """

    def __init__(self, factors):
        self.factors = factors

    def __len__(self):
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)


def _find_proper_subfunctor(M: MackeyFunctor, cap: int):
    """A proper nonzero subfunctor (per-object subspaces) or ``None`` if simple."""
    O, p = M.orbit, M.p
    fm = FunctorModule(M)
    nz = [a for a in range(O.n) if M.dims[a]]
    q = min(nz, key=lambda a: (O.obj_sub(a).order, a))
    V = out_module_of(M, q)
    W = find_submodule(V.mats, V.dim, p, cap)
    if W is not None:
        return fm.spin({q: W.basis})
    gen = fm.spin({q: fp.eye(M.dims[q])})
    if any(g.dim < d for g, d in zip(gen, M.dims)):
        return gen
    J = []
    for a in range(O.n):
        stack = [M.contra[(q, a, i)] for i in range(O.hom_count(q, a))]
        if not stack:
            J.append(fp.Subspace.full(M.dims[a], p))
            continue
        J.append(fp.kernel(np.vstack(stack), p))
    if any(j.dim for j in J):
        return J
    return None


def identify_factor(S: MackeyFunctor) -> tuple:
    """``(q, V)`` for a simple functor: minimal nonzero object and its value."""
    O = S.orbit
    nz = [a for a in range(O.n) if S.dims[a]]
    q = min(nz, key=lambda a: (O.obj_sub(a).order, a))
    return q, out_module_of(S, q)


def composition_series(M: MackeyFunctor, cap: int = SIMPLE_CAP) -> CompositionSeries:
    if sum(M.dims) == 0:
        return CompositionSeries([])
    sub = _find_proper_subfunctor(M, cap)
    if sub is None:
        q, V = identify_factor(M)
        return CompositionSeries([{"functor": M, "q": q, "V": V}])
    lower = composition_series(subfunctor(M, sub), cap)
    upper = composition_series(quotient_functor(M, sub), cap)
    return CompositionSeries(lower.factors + upper.factors)


def is_simple_functor(M: MackeyFunctor, cap: int = SIMPLE_CAP) -> bool:
    return sum(M.dims) > 0 and _find_proper_subfunctor(M, cap) is None


# ---------------------------------------------------------------------------
# S_{Q,V} through the barred Burnside quotient
# ---------------------------------------------------------------------------

def build_L_bar(orbit: OrbitCategory, V: OutModule, burnside: BurnsideCategory | None = None):
    """``L-bar_{Q,V}`` as a Mackey functor together with its tensor presentations."""
    fs, p, q = orbit.fs, orbit.fs.p, V.q
    B = burnside if burnside is not None else BurnsideCategory(fs)
    dv = V.dim
    nout = orbit.hom_count(q, q)
    quots = []
    for a in range(orbit.n):
        n = orbit.hom_count(q, a)
        rel = []
        for al in range(n):
            for be in range(nout):
                ab = orbit.compose((q, a, al), (q, q, be))[2]
                for i in range(dv):
                    v = np.zeros(n * dv, dtype=np.int64)
                    v[ab * dv + i] += 1
                    v[al * dv:(al + 1) * dv] -= V.mats[be][:, i]
                    rel.append(v % p)
        R = fp.Subspace.span(np.array(rel, dtype=np.int64).reshape(len(rel), n * dv), n * dv, p)
        quots.append(fp.quotient_map(n * dv, R))
    Q = orbit.objects[q]

    def biset_action(b_elt, a_src, a_tgt):
        """Matrix of ``[b]`` from the tensor space at ``a_src`` to ``a_tgt``."""
        n_s, n_t = orbit.hom_count(q, a_src), orbit.hom_count(q, a_tgt)
        m = fp.zeros(n_t * dv, n_s * dv)
        for al, mor in enumerate(orbit.hom(q, a_src)):
            src_b = B.canonical(orbit.objects[a_src], Q, Q, mor.img)
            for t, c in B.compose_basis(b_elt, src_b).items():
                if t.U != t.src:
                    continue
                gam = orbit.classify(q, a_tgt, t.image_array())
                m[gam * dv:(gam + 1) * dv, al * dv:(al + 1) * dv] += c * fp.eye(dv)
        return m % p

    contra, cov = {}, {}
    for f in orbit.morphisms():
        a, b = f.src, f.tgt
        key = (a, b, f.index)
        A, Bo = orbit.objects[a], orbit.objects[b]
        As = fs.subs[A]
        # M_*([phi]) = F([B x_phi A])
        bc = B.canonical(Bo, A, A, f.img)
        mc = biset_action(bc, a, b)
        cov[key] = fp.matmul(quots[b].proj, fp.matmul(mc, quots[a].section, p), p)
        # M^*([phi]) = F([A x_{phi^-1} B])
        L = fs.idx_of_elements(f.img)
        inv = np.empty(fs.G.order, dtype=np.int64)
        inv[f.img] = As.elements
        br = B.canonical(A, Bo, L, inv[fs.subs[L].elements])
        mr = biset_action(br, b, a)
        contra[key] = fp.matmul(quots[a].proj, fp.matmul(mr, quots[b].section, p), p)
    Lb = MackeyFunctor(orbit, [qq.dim for qq in quots], contra, cov, name="L-bar")
    return Lb


def build_S_quotient(orbit: OrbitCategory, V: OutModule, burnside: BurnsideCategory | None = None,
                     check_simple: bool = True) -> MackeyFunctor:
    """``S_{Q,V} = L-bar_{Q,V} / J-bar_{Q,V}``."""
    if check_simple and not V.is_simple():
        raise ValueError("V is not a simple Out-module")
    Lb = build_L_bar(orbit, V, burnside)
    p, q = Lb.p, V.q
    J = []
    for a in range(orbit.n):
        stack = [Lb.contra[(q, a, i)] for i in range(orbit.hom_count(q, a))]
        if not stack or Lb.dims[a] == 0:
            J.append(fp.Subspace.full(Lb.dims[a], p))
        else:
            J.append(fp.kernel(np.vstack(stack), p))
    S = quotient_functor(Lb, J)
    S.name = f"S(q={q},dimV={V.dim})"
    return S


# ---------------------------------------------------------------------------
# S_{Q,V} through relative traces
# ---------------------------------------------------------------------------

def relative_trace(mats, dim: int, p: int) -> fp.Subspace:
    """Image of the sum of the given matrices (one per coset representative)."""
    tot = fp.zeros(dim, dim)
    for m in mats:
        tot = (tot + m) % p
    return fp.image(tot, p)


class _FormulaS:
    def __init__(self, orbit: OrbitCategory, V: OutModule):
        self.O = orbit
        self.fs = orbit.fs
        self.G = orbit.fs.G
        self.V = V
        self.p = V.p
        self.q = V.q
        self.Q = orbit.objects[V.q]
        self.c = self.fs.class_of(self.Q)
        self._comps = {}

    def vmat(self, gamma_img) -> np.ndarray:
        """Action on ``V`` of the automorphism ``gamma`` of ``Q`` (image array)."""
        return self.V.mats[self.O.classify(self.q, self.q, gamma_img)]

    def alpha(self, L) -> np.ndarray:
        return self.fs.beta[L]

    def alpha_inv(self, L, img) -> np.ndarray:
        """``alpha_L^-1`` applied to elements of ``L``."""
        Qs = self.fs.subs[self.Q]
        return Qs.elements[self.fs.alpha_pos[L][self.fs.subs[L].pos[img]]]

    def twisted(self, L, x) -> np.ndarray:
        """``[alpha^-1 c_x alpha]`` on ``V`` for ``x`` normalizing ``L``."""
        m = self.G.conj_row(x)[self.alpha(L)]
        return self.vmat(self.alpha_inv(L, m))

    def comps(self, P) -> list:
        """Components ``(L, T_L)`` of ``S(P)`` (``T_L`` a subspace of ``V``)."""
        fs, G = self.fs, self.G
        P = fs.index_of(P)
        if P in self._comps:
            return self._comps[P]
        Ps = fs.subs[P]
        inside = [fs.subs[t] for t in fs.class_members[self.c] if fs.subs[t] <= Ps]
        out = []
        for cls in conjugacy_classes_of_subgroups(G, inside, Ps):
            Ls = cls[0]
            L = fs.index_of(Ls)
            N = normalizer(G, Ls, Ps)
            mats = [self.twisted(L, n) for n in left_cosets(G, Ls, N)]
            out.append((L, relative_trace(mats, self.V.dim, self.p)))
        self._comps[P] = out
        return out

    def dim(self, P) -> int:
        return sum(T.dim for _, T in self.comps(P))

    def _offsets(self, P):
        off, res = 0, []
        for L, T in self.comps(P):
            res.append(off)
            off += T.dim
        return res

    def res(self, P, R) -> np.ndarray:
        fs, G, p = self.fs, self.G, self.p
        Ps = fs.sub(P)
        cp, cr = self.comps(P), self.comps(R)
        op, orr = self._offsets(P), self._offsets(R)
        m = fp.zeros(self.dim(R), self.dim(P))
        for (L, T), o1 in zip(cp, op):
            for (L2, T2), o2 in zip(cr, orr):
                x = conjugator(G, fs.subs[L], fs.subs[L2], Ps)
                if x is None:
                    continue
                # [beta^-1 c_x alpha]
                g = G.conj_row(x)[self.alpha(L)]
                A = self.vmat(self.alpha_inv(L2, g))
                imgs = fp.matmul(A, T.basis.T, p).T
                m[o2:o2 + T2.dim, o1:o1 + T.dim] = T2.coords(imgs).T
        return m % p

    def tr(self, P, R) -> np.ndarray:
        fs, G, p = self.fs, self.G, self.p
        Ps, Rs = fs.sub(P), fs.sub(R)
        cp, cr = self.comps(P), self.comps(R)
        op, orr = self._offsets(P), self._offsets(R)
        m = fp.zeros(self.dim(P), self.dim(R))
        for (L2, T2), o2 in zip(cr, orr):
            for (L, T), o1 in zip(cp, op):
                x = conjugator(G, fs.subs[L2], fs.subs[L], Ps)
                if x is None:
                    continue
                Ls = fs.subs[L]
                g = G.conj_row(x)[self.alpha(L2)]
                A = self.vmat(self.alpha_inv(L, g))
                NP = normalizer(G, Ls, Ps)
                NxR = normalizer(G, Ls, Rs.conjugate(x))
                tot = fp.zeros(self.V.dim, self.V.dim)
                for n in left_cosets(G, NxR, NP):
                    tot = (tot + fp.matmul(self.twisted(L, n), A, p)) % p
                imgs = fp.matmul(tot, T2.basis.T, p).T
                m[o1:o1 + T.dim, o2:o2 + T2.dim] = T.coords(imgs).T
        return m % p

    def iso(self, P, P2, img) -> np.ndarray:
        """``iso(phi)`` for an F-isomorphism ``phi: P -> P2`` (image array)."""
        fs, G, p = self.fs, self.G, self.p
        Ps, P2s = fs.sub(P), fs.sub(P2)
        img = np.asarray(img, dtype=np.int64)
        cp, c2 = self.comps(P), self.comps(P2)
        op, o2s = self._offsets(P), self._offsets(P2)
        m = fp.zeros(self.dim(P2), self.dim(P))
        for (L, T), o1 in zip(cp, op):
            phiL = img[Ps.pos[self.alpha(L)]]  # phi o alpha : Q -> phi(L)
            M_ = fs.subs[fs.idx_of_elements(phiL)]
            for (L2, T2), o2 in zip(c2, o2s):
                y = conjugator(G, M_, fs.subs[L2], P2s)
                if y is None:
                    continue
                g = G.conj_row(y)[phiL]
                A = self.vmat(self.alpha_inv(L2, g))
                imgs = fp.matmul(A, T.basis.T, p).T
                m[o2:o2 + T2.dim, o1:o1 + T.dim] = T2.coords(imgs).T
                break
        return m % p


def build_S_formula(orbit: OrbitCategory, V: OutModule, check_simple: bool = True) -> MackeyFunctor:
    """``S_{Q,V}`` from the direct sum of relative traces."""
    if check_simple and not V.is_simple():
        raise ValueError("V is not a simple Out-module")
    F = _FormulaS(orbit, V)
    fs, p = orbit.fs, orbit.fs.p
    dims = [F.dim(orbit.objects[a]) for a in range(orbit.n)]
    contra, cov = {}, {}
    for f in orbit.morphisms():
        a, b = f.src, f.tgt
        key = (a, b, f.index)
        A, B = orbit.objects[a], orbit.objects[b]
        As = fs.subs[A]
        L = fs.idx_of_elements(f.img)
        Ls = fs.subs[L]
        cov[key] = fp.matmul(F.tr(B, L), F.iso(A, L, f.img), p)
        inv = np.empty(fs.G.order, dtype=np.int64)
        inv[f.img] = As.elements
        contra[key] = fp.matmul(F.iso(L, A, inv[Ls.elements]), F.res(B, L), p)
    S = MackeyFunctor(orbit, dims, contra, cov, name=f"S_formula(q={V.q},dimV={V.dim})")
    S.formula = F
    return S


def find_intertwiner(M1: MackeyFunctor, M2: MackeyFunctor):
    """Invertible blocks ``X_a: M1(a) -> M2(a)`` commuting with all maps, or ``None``.

    Solves the homogeneous linear system and returns the first basis solution;
    for simple functors every nonzero solution is invertible (checked).
    """
    if M1.dims != M2.dims:
        return None
    p = M1.p
    dims = M1.dims
    offs = np.concatenate([[0], np.cumsum([d * d for d in dims])]).astype(int)
    nvar = int(offs[-1])
    if nvar == 0:
        return []
    rows = []

    def var(a, j, k):
        return offs[a] + j * dims[a] + k

    def add_eqs(m1, m2, s, t):
        # X_t m1 - m2 X_s = 0 where m1, m2: s -> t
        ds, dt = dims[s], dims[t]
        for j in range(dt):
            for k in range(ds):
                row = np.zeros(nvar, dtype=np.int64)
                for l in range(dt):
                    if m1[l, k]:
                        row[var(t, j, l)] += m1[l, k]
                for l in range(ds):
                    if m2[j, l]:
                        row[var(s, l, k)] -= m2[j, l]
                if row.any():
                    rows.append(row % p)

    for (a, b, i), m in M1.cov.items():
        add_eqs(m, M2.cov[(a, b, i)], a, b)
    for (a, b, i), m in M1.contra.items():
        add_eqs(m, M2.contra[(a, b, i)], b, a)
    K = fp.kernel(np.array(rows).reshape(-1, nvar), p) if rows else fp.Subspace.full(nvar, p)
    if K.dim == 0:
        return None
    x = K.basis[0]
    blocks = [x[offs[a]:offs[a + 1]].reshape(dims[a], dims[a]) for a in range(len(dims))]
    for blk in blocks:
        if blk.shape[0] and fp.rank(blk, p) < blk.shape[0]:
            return None
    return blocks


# ---------------------------------------------------------------------------
# vanishing tests
# ---------------------------------------------------------------------------

def automorphism_group(G, H, cap: int = 1 << 16) -> list:
    """All automorphisms of the subgroup ``H`` (image arrays), by generator images."""
    gens = minimal_generators(H)
    orders = G.elt_orders
    phi = frattini(H)
    cands = []
    for g in gens:
        cands.append([int(x) for x in H.elements.tolist()
                      if orders[x] == orders[g] and not phi.members[x]])
    total = 1
    for c in cands:
        total *= len(c)
    if total > cap:
        raise CapExceeded(f"automorphism search space {total} exceeds cap {cap}")
    out = []
    for imgs in itertools.product(*cands):
        r = extend_hom(G, gens, imgs, H)
        if r is None:
            continue
        img = r[1]
        if np.unique(img).size == H.order:
            out.append(img)
    return out


def _p_part(n: int, p: int) -> int:
    m = 1
    while n % p == 0:
        n //= p
        m *= p
    return m


def op_is_sylow_in_out(G, H, p: int) -> bool:
    """Does ``Out(H)`` have a normal Sylow ``p``-subgroup?

    Equivalent to ``Aut(H)`` having one (``Inn(H)`` is a ``p``-group), which
    holds iff its ``p``-elements number exactly ``|Aut(H)|_p``.
    """
    auts = automorphism_group(G, H)
    n = len(auts)
    ident = H.elements
    count = 0
    for a in auts:
        cur, k = a, 1
        while not np.array_equal(cur, ident):
            cur = a[H.pos[cur]]
            k += 1
        if _p_part(k, p) == k:
            count += 1
    return count == _p_part(n, p)


def vanishing_tests(S: MackeyFunctor, V: OutModule) -> dict:
    """Check the non-vanishing and cohomological statements for ``S = S_{Q,V}``.

    Returns a dict with one boolean per statement plus witnesses.
    """
    O, fs, p, G = S.orbit, S.fs, S.p, S.fs.G
    q = V.q
    Q = O.objects[q]
    Qs = fs.subs[Q]
    cq = fs.class_of(Q)
    F = _FormulaS(O, V)
    report = {}
    # (1) nonzero value forces a stabilizer equal to the image
    bad1 = []
    for a in range(O.n):
        if S.dims[a] == 0:
            continue
        P = O.objects[a]
        Ps = fs.subs[P]
        ok = False
        for t in fs.class_members[cq]:
            Ls = fs.subs[t]
            if not Ls <= Ps:
                continue
            N = normalizer(G, Ls, Ps)
            stab = [n for n in N.elements.tolist()
                    if np.array_equal(F.twisted(t, n), fp.eye(V.dim))]
            if len(stab) == Ls.order and centralizer(G, Ls, Ps) <= Ls:
                ok = True
                break
        if not ok:
            bad1.append(a)
    report["stabilizer"] = not bad1
    report["stabilizer_witnesses"] = bad1
    conj = [fs.class_of(O.objects[a]) == cq for a in range(O.n)]
    nonzero = [S.dims[a] > 0 for a in range(O.n)]
    # (2) trivial V: nonzero exactly on the class of Q
    if V.is_trivial():
        report["trivial_iff"] = nonzero == conj
    else:
        report["trivial_iff"] = None
    # (3) normal Sylow in Out(Q): same conclusion
    try:
        hyp = op_is_sylow_in_out(G, Qs, p)
    except CapExceeded:
        hyp = None
    report["op_hypothesis"] = hyp
    report["op_iff"] = (nonzero == conj) if hyp else None
    # (4) t^P_R r^P_R = 0 for R < P
    bad4 = []
    for a in range(O.n):
        P = O.objects[a]
        Ps = fs.subs[P]
        if S.dims[a] == 0:
            continue
        inside = [H for i, H in enumerate(fs.subs) if H.order < Ps.order and H <= Ps and O.contains(i)]
        for cls in conjugacy_classes_of_subgroups(G, inside, Ps):
            R = fs.index_of(cls[0])
            if fp.matmul(S.tr(P, R), S.res(P, R), p).any():
                bad4.append((P, R))
    report["cohomological"] = not bad4
    report["cohomological_witnesses"] = bad4
    report["ok"] = (report["stabilizer"] and report["trivial_iff"] is not False
                    and report["op_iff"] is not False and report["cohomological"])
    return report


def simple_functor_pairs(orbit: OrbitCategory, cap: int = SIMPLE_CAP) -> list:
    """All ``(q, V)`` with ``V`` simple, one per isomorphism class."""
    out = []
    for q in range(orbit.n):
        for V in simple_out_modules(orbit, q, cap):
            out.append((q, V))
    return out


def criterion_45_on(S: MackeyFunctor) -> bool:
    return check_criterion_45(S)[0]
