"""Mackey functors on orbit categories of fusion systems.

A functor lives on the skeleton of an :class:`OrbitCategory`.  Each object
``a`` carries a space ``F_p^dims[a]`` and each morphism class ``f = (a, b, i)``
carries two matrices acting on column vectors:

* ``contra[f]``: ``M(B) -> M(A)`` (the contravariant part ``M^*``),
* ``cov[f]``: ``M(A) -> M(B)`` (the covariant part ``M_*``).

The value at an arbitrary subgroup ``P`` is identified with the value at the
skeleton representative of its class through the fixed transporter, so
restriction, transfer and conjugation maps between arbitrary subgroups are
read off from the class of the corresponding group map.
"""
from __future__ import annotations

from collections import deque

import numpy as np

from . import fp
from .fusion import FusionSystem, OrbitCategory
from .group import conjugacy_classes_of_subgroups, double_cosets, frattini, left_cosets


class ContravariantFunctor:
    """A functor ``O(X)^op -> mod F_p`` (only the ``contra`` matrices)."""

    def __init__(self, orbit: OrbitCategory, dims, contra: dict, name: str = ""):
        self.orbit = orbit
        self.p = orbit.fs.p
        self.dims = [int(d) for d in dims]
        self.contra = {k: np.mod(np.asarray(v, dtype=np.int64), self.p) for k, v in contra.items()}
        self.name = name

    def matrix(self, f) -> np.ndarray:
        return self.contra[f]

    def check_functor(self) -> list:
        """Failures of identity and composition laws (empty when functorial)."""
        O, p = self.orbit, self.p
        bad = []
        for a in range(O.n):
            ida = (a, a, O.identity(a))
            if not np.array_equal(self.contra[ida], fp.eye(self.dims[a])):
                bad.append(("identity", a))
        for a in range(O.n):
            for b in range(O.n):
                for i in range(O.hom_count(a, b)):
                    f = (a, b, i)
                    for c in range(O.n):
                        for j in range(O.hom_count(b, c)):
                            g = (b, c, j)
                            gf = O.compose(g, f)
                            lhs = self.contra[gf]
                            rhs = fp.matmul(self.contra[f], self.contra[g], p)
                            if not np.array_equal(lhs, rhs):
                                bad.append(("compose", f, g))
        return bad

    def total_dim(self) -> int:
        return sum(self.dims)


class MackeyFunctor:
    """Bivariant data ``(M^*, M_*)`` on a skeletal orbit category."""

    def __init__(self, orbit: OrbitCategory, dims, contra: dict, cov: dict, name: str = ""):
        self.orbit = orbit
        self.fs = orbit.fs
        self.p = orbit.fs.p
        self.dims = [int(d) for d in dims]
        p = self.p
        self.contra = {k: np.mod(np.asarray(v, dtype=np.int64), p) for k, v in contra.items()}
        self.cov = {k: np.mod(np.asarray(v, dtype=np.int64), p) for k, v in cov.items()}
        self.name = name
        self.verified = False

    def __repr__(self):
        return f"MackeyFunctor({self.name}, dims={self.dims})"

    # -- maps between arbitrary subgroups ------------------------------------

    def dim_at(self, P) -> int:
        return self.dims[self.orbit.obj_of(P)]

    def res(self, P, Q) -> np.ndarray:
        """``r^P_Q: M(P) -> M(Q)`` for ``Q <= P``."""
        return self.contra[self.orbit.inclusion(Q, P)]

    def tr(self, P, Q) -> np.ndarray:
        """``t^P_Q: M(Q) -> M(P)`` for ``Q <= P``."""
        return self.cov[self.orbit.inclusion(Q, P)]

    def iso(self, P, Q, img) -> np.ndarray:
        """``iso(phi): M(P) -> M(Q)`` for an isomorphism ``phi: P -> Q``."""
        return self.cov[self.orbit.class_of_map(P, Q, img)]

    def conj(self, x: int, P) -> tuple:
        """``(target, iso(c_x|_P))`` with target ``xPx^-1``."""
        fs = self.fs
        Ps = fs.sub(P)
        img = fs.G.conj_row(x)[Ps.elements].astype(np.int64)
        Q = fs.idx_of_elements(img)
        return Q, self.iso(P, Q, img)

    def contravariant(self) -> ContravariantFunctor:
        return ContravariantFunctor(self.orbit, self.dims, self.contra, name=self.name + "*")

    def total_dim(self) -> int:
        return sum(self.dims)


# ---------------------------------------------------------------------------
# axiom checks
# ---------------------------------------------------------------------------

def _inverse_class(O: OrbitCategory, a: int, i: int) -> int:
    ida = O.identity(a)
    for j in range(O.hom_count(a, a)):
        if O.compose((a, a, j), (a, a, i))[2] == ida:
            return j
    raise ValueError("class is not invertible")


def mackey_decomposition_failures(M: MackeyFunctor, keep=None, first_only: bool = False) -> list:
    """Instances ``(P, Q, R)`` where the Mackey decomposition fails.

    ``P`` runs over skeleton objects, ``Q`` and ``R`` over ``P``-conjugacy
    class representatives of subgroups of ``P`` in the category; ``keep``
    truncates the double coset sum (default: membership in the category).
    """
    O, fs, p = M.orbit, M.fs, M.p
    G = fs.G
    keep = keep if keep is not None else O.contains
    out = []
    for a in range(O.n):
        P = O.objects[a]
        Ps = fs.subs[P]
        inside = [H for i, H in enumerate(fs.subs) if H <= Ps and O.contains(i)]
        reps = [cls[0] for cls in conjugacy_classes_of_subgroups(G, inside, Ps)]
        for Qs in reps:
            Q = fs.index_of(Qs)
            rq = M.res(P, Q)
            for Rs in reps:
                R = fs.index_of(Rs)
                lhs = fp.matmul(rq, M.tr(P, R), p)
                rhs = fp.zeros(*lhs.shape)
                for x in double_cosets(G, Qs, Rs, Ps):
                    xR, cx = M.conj(x, R)
                    inter = fs.idx_of_elements(Qs.intersect(fs.subs[xR]).elements)
                    if not keep(inter):
                        continue
                    term = fp.matmul(M.tr(Q, inter), fp.matmul(M.res(xR, inter), cx, p), p)
                    rhs = (rhs + term) % p
                if not np.array_equal(lhs, rhs):
                    out.append({"P": P, "Q": Q, "R": R, "lhs": lhs, "rhs": rhs})
                    if first_only:
                        return out
    return out


def verify_axioms(M: MackeyFunctor, keep=None) -> dict:
    """Check bivariance, the isomorphism condition and the Mackey decomposition.

    Returns ``{"ok": bool, "structural": [...], "functor": [...],
    "isomorphism": [...], "mackey": [...]}``.
    """
    O, p = M.orbit, M.p
    report = {"structural": [], "functor": [], "isomorphism": [], "mackey": []}
    for f in O.morphisms():
        key = (f.src, f.tgt, f.index)
        shape = (M.dims[f.src], M.dims[f.tgt])
        if key not in M.contra or key not in M.cov:
            report["structural"].append(("missing", key))
            continue
        if M.contra[key].shape != shape or M.cov[key].shape != shape[::-1]:
            report["structural"].append(("shape", key))
    if report["structural"]:
        report["ok"] = False
        return report
    for a in range(O.n):
        ida = (a, a, O.identity(a))
        for part in (M.contra, M.cov):
            if not np.array_equal(part[ida], fp.eye(M.dims[a])):
                report["functor"].append(("identity", a))
    for f in O.morphisms():
        fk = (f.src, f.tgt, f.index)
        for c in range(O.n):
            for j in range(O.hom_count(f.tgt, c)):
                gk = (f.tgt, c, j)
                gf = O.compose(gk, fk)
                if not np.array_equal(M.contra[gf], fp.matmul(M.contra[fk], M.contra[gk], p)):
                    report["functor"].append(("contra", fk, gk))
                if not np.array_equal(M.cov[gf], fp.matmul(M.cov[gk], M.cov[fk], p)):
                    report["functor"].append(("cov", fk, gk))
    for a in range(O.n):
        for i in range(O.hom_count(a, a)):
            j = _inverse_class(O, a, i)
            if not np.array_equal(M.contra[(a, a, i)], M.cov[(a, a, j)]):
                report["isomorphism"].append((a, i))
    report["mackey"] = mackey_decomposition_failures(M, keep)
    report["ok"] = not any(report[k] for k in ("functor", "isomorphism", "mackey"))
    return report


# ---------------------------------------------------------------------------
# concrete functors
# ---------------------------------------------------------------------------

def h0_functor(orbit: OrbitCategory) -> MackeyFunctor:
    """Degree-zero cohomology: ``F_p`` everywhere, transfer is the index."""
    p = orbit.fs.p
    contra, cov = {}, {}
    for f in orbit.morphisms():
        key = (f.src, f.tgt, f.index)
        contra[key] = np.ones((1, 1), dtype=np.int64)
        idx = orbit.obj_sub(f.tgt).order // orbit.obj_sub(f.src).order
        cov[key] = np.full((1, 1), idx % p, dtype=np.int64)
    M = MackeyFunctor(orbit, [1] * orbit.n, contra, cov, name="H^0")
    return M


class FrattiniCoords:
    """Coordinates of ``P -> P/Phi(P) = F_p^d`` w.r.t. a fixed generating list."""

    def __init__(self, G, P):
        phi = frattini(P)
        gens = []
        cur = phi
        for g in P.generators + P.elements.tolist():
            if cur.order == P.order:
                break
            if not cur.members[g]:
                gens.append(int(g))
                cur = G.generate(phi.generators + gens)
        self.gens = gens
        self.d = len(gens)
        coords = np.full((G.order, self.d), -1, dtype=np.int64)
        coords[0] = 0
        seen = np.zeros(G.order, dtype=bool)
        seen[0] = True
        queue = deque([0])
        p = _prime(P.order)
        while queue:
            x = queue.popleft()
            for j, g in enumerate(gens):
                y = int(G.mul[x, g])
                if not seen[y]:
                    seen[y] = True
                    c = coords[x].copy()
                    c[j] = (c[j] + 1) % p
                    coords[y] = c
                    queue.append(y)
        self.coords = coords
        self.P = P

    def __call__(self, elts) -> np.ndarray:
        return self.coords[np.asarray(elts, dtype=np.int64)]


def _prime(n: int) -> int:
    for d in range(2, n + 1):
        if n % d == 0:
            return d
    return 2


def h1_functor(orbit: OrbitCategory) -> MackeyFunctor:
    """Degree-one cohomology ``H^1(P; F_p) = Hom(P, F_p)``.

    Basis of ``M(P)`` is dual to the chosen generators of ``P/Phi(P)``;
    restriction and conjugation are precomposition and transfer is
    ``t(h)(x) = sum_i h(t_{s(i)}^-1 x t_i)`` over the least-id left transversal.
    """
    fs, p, G = orbit.fs, orbit.fs.p, orbit.fs.G
    fc = [FrattiniCoords(G, orbit.obj_sub(a)) for a in range(orbit.n)]
    dims = [c.d for c in fc]
    contra, cov = {}, {}
    for f in orbit.morphisms():
        a, b = f.src, f.tgt
        key = (a, b, f.index)
        A, B = orbit.obj_sub(a), orbit.obj_sub(b)
        img = f.img
        gA = fc[a].gens
        contra[key] = fc[b](img[A.pos[gA]]).reshape(len(gA), fc[b].d)
        # covariant: iso A -> L then transfer L -> B
        L = fs.subs[fs.idx_of_elements(img)]
        inv = np.empty(G.order, dtype=np.int64)
        inv[img] = A.elements
        reps = left_cosets(G, L, B)
        cid = np.full(G.order, -1, dtype=np.int64)
        for k, t in enumerate(reps):
            cid[G.mul[t, L.elements]] = k
        m = fp.zeros(fc[b].d, fc[a].d)
        for j, g in enumerate(fc[b].gens):
            for t in reps:
                xt = int(G.mul[g, t])
                s = reps[cid[xt]]
                l = int(G.mul[G.inv[s], xt])
                m[j] += fc[a].coords[inv[l]]
        cov[key] = m % p
    return MackeyFunctor(orbit, dims, contra, cov, name="H^1")


def _inducing_element(fs: FusionSystem, dom, img) -> int:
    """Some ``g`` in the ambient group with ``c_g|_dom = img``."""
    G = fs.G
    gens = dom.generators
    tgt = img[dom.pos[gens]]
    cands = G.whole.elements if fs.kind == "ambient" else fs.S.elements
    for g in cands.tolist():
        row = G.conj_row(g)
        if all(row[x] == y for x, y in zip(gens, tgt.tolist())):
            return g
    raise ValueError("map is not induced by conjugation in the ambient group")


def fixed_point_functor(orbit: OrbitCategory, action: np.ndarray, name: str = "") -> MackeyFunctor:
    """Fixed points of the permutation module ``F_p[X]``.

    ``action[g, x]`` is the image of point ``x`` under ``g`` for every element
    ``g`` of the ambient group (of ``S`` for inner systems).  ``M(P)`` has
    the ``P``-orbit sums as basis; restriction is inclusion of fixed points,
    transfer the relative trace and conjugation the action.
    """
    fs, p, G = orbit.fs, orbit.fs.p, orbit.fs.G
    action = np.asarray(action, dtype=np.int64)
    npts = action.shape[1]

    def orbits(P):
        lab = np.full(npts, -1, dtype=np.int64)
        reps = []
        for x in range(npts):
            if lab[x] < 0:
                lab[action[P.elements, x]] = len(reps)
                reps.append(x)
        return lab, reps

    orb = [orbits(orbit.obj_sub(a)) for a in range(orbit.n)]
    dims = [len(r) for _, r in orb]

    def basis_vecs(a):
        lab, reps = orb[a]
        m = fp.zeros(npts, len(reps))
        m[np.arange(npts), lab] = 1
        return m

    def coords(a, v):
        _, reps = orb[a]
        return v[reps]

    contra, cov = {}, {}
    for f in orbit.morphisms():
        a, b = f.src, f.tgt
        key = (a, b, f.index)
        A, B = orbit.obj_sub(a), orbit.obj_sub(b)
        g = _inducing_element(fs, A, f.img)
        gi = int(G.inv[g])
        L = fs.subs[fs.idx_of_elements(f.img)]
        # M^*: v in V^B  ->  g^-1 v in V^A
        vb = basis_vecs(b)
        moved = np.zeros_like(vb)
        moved[action[gi]] = vb
        contra[key] = coords(a, moved) % p
        # M_*: w in V^A -> tr_L^B (g w)
        va = basis_vecs(a)
        gw = np.zeros_like(va)
        gw[action[g]] = va
        tot = np.zeros_like(gw)
        for t in left_cosets(G, L, B):
            tmp = np.zeros_like(gw)
            tmp[action[t]] = gw
            tot += tmp
        cov[key] = coords(b, tot) % p
    return MackeyFunctor(orbit, dims, contra, cov, name=name or "fixed points")


def coset_action(G, H, ambient=None) -> np.ndarray:
    """Left multiplication action of ``G`` on the cosets ``ambient/H``."""
    amb = ambient if ambient is not None else G.whole
    reps = left_cosets(G, H, amb)
    cid = np.full(G.order, -1, dtype=np.int64)
    for k, t in enumerate(reps):
        cid[G.mul[t, H.elements]] = k
    act = np.zeros((G.order, len(reps)), dtype=np.int64)
    for g in amb.elements.tolist():
        act[g] = cid[G.mul[g, reps]]
    return act


# ---------------------------------------------------------------------------
# restriction to a smaller orbit category
# ---------------------------------------------------------------------------

def restrict_functor(M, target: OrbitCategory):
    """Restrict ``M`` (Mackey or contravariant) to the objects of ``target``.

    ``target`` must be a full subcategory (same fusion system) of ``M.orbit``.
    """
    src = M.orbit
    amap = [src.obj_of_class[c] for c in target.classes]
    dims = [M.dims[k] for k in amap]
    contra, cov = {}, {}
    for f in target.morphisms():
        key = (f.src, f.tgt, f.index)
        skey = (amap[f.src], amap[f.tgt], f.index)
        contra[key] = M.contra[skey]
        if isinstance(M, MackeyFunctor):
            cov[key] = M.cov[skey]
    if isinstance(M, MackeyFunctor):
        out = MackeyFunctor(target, dims, contra, cov, name=M.name)
    else:
        out = ContravariantFunctor(target, dims, contra, name=M.name)
    return out


def restrict_to_centrics(M: MackeyFunctor, centric_orbit: OrbitCategory | None = None):
    target = centric_orbit if centric_orbit is not None else OrbitCategory(M.fs, centric_only=True)
    return restrict_functor(M, target)


def check_criterion_45(M: MackeyFunctor) -> tuple:
    """Is ``t^R_{P cap R} r^P_{P cap R}`` zero for centric ``P, R`` with noncentric ``P cap R``?

    ``M`` lives on the full orbit category.  ``P`` runs over ``S``-class
    representatives of centric subgroups and ``R`` over all centric subgroups.
    Returns ``(ok, witnesses)``.
    """
    fs, p = M.fs, M.p
    G = fs.G
    cent = [H for i, H in enumerate(fs.subs) if fs.is_centric(i)]
    reps = [c[0] for c in conjugacy_classes_of_subgroups(G, cent, fs.S)]
    wit = []
    for Ps in reps:
        P = fs.index_of(Ps)
        for Rs in cent:
            R = fs.index_of(Rs)
            I = fs.idx_of_elements(Ps.intersect(Rs).elements)
            if fs.is_centric(I):
                continue
            m = fp.matmul(M.tr(R, I), M.res(P, I), p)
            if m.any():
                wit.append({"P": P, "R": R, "PcapR": I})
    return not wit, wit


# ---------------------------------------------------------------------------
# the linear-category presentation
# ---------------------------------------------------------------------------

class CategoryModule:
    """A Mackey functor seen as a module over the Burnside-type category.

    ``act(b)`` is the matrix of the basis element ``b = [Q x_phi P]``:
    ``M_*([phi]) M^*([iota^P_U])``.
    """

    def __init__(self, M: MackeyFunctor, burnside):
        self.M = M
        self.B = burnside
        self.fs = M.fs
        self.dims = M.dims

    def act(self, b) -> np.ndarray:
        M, p = self.M, self.M.p
        img = b.image_array()
        if not M.orbit.contains(b.U):
            return fp.zeros(M.dim_at(b.tgt), M.dim_at(b.src))
        phi = M.cov[M.orbit.class_of_map(b.U, b.tgt, img)]
        return fp.matmul(phi, M.res(b.src, b.U), p)

    def act_vector(self, v: dict, Q, P) -> np.ndarray:
        out = fp.zeros(self.M.dim_at(Q), self.M.dim_at(P))
        for b, c in v.items():
            out = (out + c * self.act(b)) % self.M.p
        return out

    def total_dim(self) -> int:
        return sum(self.dims)

    def check_multiplicative(self, pairs) -> list:
        """Pairs ``(f, g)`` of basis elements where ``act(fg) != act(f) act(g)``."""
        p = self.M.p
        bad = []
        for f, g in pairs:
            lhs = self.act_vector(self.B.compose_basis(f, g), f.tgt, g.src)
            rhs = fp.matmul(self.act(f), self.act(g), p)
            if not np.array_equal(lhs, rhs):
                bad.append((f, g))
        return bad

    def to_bivariant(self) -> MackeyFunctor:
        """Recover ``(M^*, M_*)`` from the module structure."""
        M, fs = self.M, self.fs
        O = M.orbit
        contra, cov = {}, {}
        for f in O.morphisms():
            a, b = f.src, f.tgt
            A, B = O.objects[a], O.objects[b]
            As = fs.subs[A]
            key = (a, b, f.index)
            cov[key] = self.act(self.B.canonical(B, A, A, f.img))
            L = fs.idx_of_elements(f.img)
            inv = np.empty(fs.G.order, dtype=np.int64)
            inv[f.img] = As.elements
            Ls = fs.subs[L]
            contra[key] = self.act(self.B.canonical(A, B, L, inv[Ls.elements]))
        return MackeyFunctor(O, M.dims, contra, cov, name=M.name)


def as_category_module(M: MackeyFunctor, burnside) -> CategoryModule:
    return CategoryModule(M, burnside)


def functors_equal(M, N) -> bool:
    if M.dims != N.dims:
        return False
    for k in M.contra:
        if not np.array_equal(M.contra[k], N.contra[k]):
            return False
    if isinstance(M, MackeyFunctor):
        for k in M.cov:
            if not np.array_equal(M.cov[k], N.cov[k]):
                return False
    return True
