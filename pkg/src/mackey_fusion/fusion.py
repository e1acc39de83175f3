"""Fusion systems on a finite p-group, centricity and orbit categories.

A fusion system is stored as the groupoid of its isomorphisms.  Every
subgroup ``P`` of ``S`` belongs to an F-isomorphism class whose
representative ``R`` is the least subgroup of the class (by order, then
element list).  For each member ``P`` we keep a fixed isomorphism
``beta[P]: R -> P`` and the automorphism group ``Aut_F(R)``; every
F-morphism ``P -> Q`` is then ``iota o beta[P'] o a o beta[P]^-1`` for a
unique ``P' <= Q`` and ``a`` in ``Aut_F(R)``.

Maps are numpy arrays of element ids aligned with the sorted element list
of their domain.  Automorphisms of a representative are stored as position
permutations: ``a[k] = m`` means ``a(R[k]) = R[m]``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .group import (CapExceeded, Group, Subgroup, centralizer, double_cosets, enumerate_subgroups,
                    is_sylow, normalizer, prime_of)

MAP_CAP = 1 << 16


def compose_maps(psi_img: np.ndarray, psi_dom: Subgroup, phi_img: np.ndarray) -> np.ndarray:
    """``psi o phi`` where ``phi`` lands inside the domain of ``psi``."""
    return psi_img[psi_dom.pos[phi_img]]


def restrict_map(img: np.ndarray, dom: Subgroup, sub: Subgroup) -> np.ndarray:
    return img[dom.pos[sub.elements]]


def invert_map(img: np.ndarray, dom: Subgroup, cod: Subgroup) -> np.ndarray:
    """Inverse of an isomorphism ``dom -> cod`` (aligned with ``cod``)."""
    out = np.empty(cod.order, dtype=np.int64)
    out[cod.pos[img]] = dom.elements
    return out


def is_homomorphism(G: Group, dom: Subgroup, img: np.ndarray) -> bool:
    e = dom.elements
    prod = G.mul[e[:, None], e[None, :]]
    lhs = img[dom.pos[prod]]
    rhs = G.mul[img[:, None], img[None, :]]
    return bool(np.array_equal(lhs, rhs))


def extend_hom(G: Group, gens, images, dom: Subgroup | None = None):
    """The homomorphism ``<gens> -> G`` sending ``gens[i] -> images[i]``.

    Returns ``(dom, img)`` or ``None`` if the assignment does not extend.
    """
    gens = [int(g) for g in gens]
    images = [int(h) for h in images]
    if dom is None:
        dom = G.generate(gens)
    val = np.full(G.order, -1, dtype=np.int64)
    val[0] = 0
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for g, h in zip(gens, images):
            y = int(G.mul[x, g])
            v = int(G.mul[val[x], h])
            if val[y] < 0:
                val[y] = v
                queue.append(y)
            elif val[y] != v:
                return None
    img = val[dom.elements]
    if (img < 0).any() or not is_homomorphism(G, dom, img):
        return None
    return dom, img


def subgroup_key(G: Group, elts: np.ndarray) -> bytes:
    m = np.zeros(G.order, dtype=bool)
    m[elts] = True
    return np.packbits(m).tobytes()


class FusionSystem:
    """A fusion system on ``S`` (a subgroup of the group ``G``).

    ``conjugators`` are elements of ``G`` whose conjugation maps generate the
    group-induced part; ``extra`` is a list of ``(E, img)`` injective maps
    from subgroups ``E`` of ``S`` into ``S`` (inverses are added).
    """

    def __init__(self, G: Group, S: Subgroup, kind: str, conjugators, extra=(),
                 p: int | None = None, name: str = "", map_cap: int = MAP_CAP):
        self.G = G
        self.S = S
        self.kind = kind
        self.name = name
        self.p = p if p is not None else (prime_of(S.order) if S.order > 1 else 2)
        self.map_cap = map_cap
        self.subs = enumerate_subgroups(G, S)
        self.key2idx = {H.key: i for i, H in enumerate(self.subs)}
        self.extra = []
        for E, img in extra:
            img = np.asarray(img, dtype=np.int64)
            e = self.index_of(E)
            self.extra.append((e, img))
            f = self.idx_of_elements(img)
            if f != e:
                self.extra.append((f, invert_map(img, self.subs[e], self.subs[f])))
        self._conjugators = [int(g) for g in conjugators]
        self._build()

    # -- lookups ------------------------------------------------------------

    def index_of(self, H) -> int:
        if isinstance(H, (int, np.integer)):
            return int(H)
        return self.key2idx[H.key]

    def sub(self, i) -> Subgroup:
        return self.subs[self.index_of(i)]

    def idx_of_elements(self, elts) -> int:
        return self.key2idx[subgroup_key(self.G, np.asarray(elts, dtype=np.int64))]

    # -- closure ------------------------------------------------------------

    def _edges(self, i: int):
        G, P = self.G, self.subs[i]
        out = []
        for g in self._conjugators:
            img = G.conj_row(g)[P.elements].astype(np.int64)
            if not self.S.members[img].all():
                continue
            out.append((self.idx_of_elements(img), img))
        for e_idx, eimg in self.extra:
            E = self.subs[e_idx]
            if P <= E:
                img = eimg[E.pos[P.elements]]
                out.append((self.idx_of_elements(img), img))
        return out

    def _build(self):
        n = len(self.subs)
        self.cls = np.full(n, -1, dtype=np.int64)
        self.beta = [None] * n
        self.alpha_pos = [None] * n
        self.reps: list[int] = []
        self.class_members: list[list[int]] = []
        self.aut: list[list[np.ndarray]] = []
        self.aut_index: list[dict] = []
        edges = [self._edges(i) for i in range(n)]
        for i in range(n):
            if self.cls[i] >= 0:
                continue
            c = len(self.reps)
            R = self.subs[i]
            self.reps.append(i)
            self.cls[i] = c
            self.beta[i] = R.elements.copy()
            self.alpha_pos[i] = np.arange(R.order)
            members = [i]
            loops = []
            queue = deque([i])
            while queue:
                j = queue.popleft()
                Pj = self.subs[j]
                for t, img in edges[j]:
                    m = img[Pj.pos[self.beta[j]]]  # R -> t
                    if self.cls[t] < 0:
                        self.cls[t] = c
                        self.beta[t] = m
                        T = self.subs[t]
                        ap = np.empty(R.order, dtype=np.int64)
                        ap[T.pos[m]] = np.arange(R.order)
                        self.alpha_pos[t] = ap
                        members.append(t)
                        queue.append(t)
                    else:
                        T = self.subs[t]
                        loops.append(self.alpha_pos[t][T.pos[m]])
            self.class_members.append(sorted(members, key=lambda k: self.subs[k].sort_key()))
            auts = self._close_group(R.order, loops)
            self.aut.append(auts)
            self.aut_index.append({a.tobytes(): k for k, a in enumerate(auts)})

    def _close_group(self, deg: int, gens) -> list:
        ident = np.arange(deg, dtype=np.int64)
        elems = [ident]
        seen = {ident.tobytes()}
        gens_u = []
        for g in gens:
            g = np.asarray(g, dtype=np.int64)
            if g.tobytes() not in seen and all(not np.array_equal(g, h) for h in gens_u):
                gens_u.append(g)
        queue = deque([ident])
        while queue:
            x = queue.popleft()
            for g in gens_u:
                y = x[g]  # x o g
                k = y.tobytes()
                if k not in seen:
                    if len(elems) >= self.map_cap:
                        raise CapExceeded(f"automorphism group exceeds cap {self.map_cap}")
                    seen.add(k)
                    elems.append(y)
                    queue.append(y)
        # canonical order: identity first, then lexicographic
        rest = sorted(elems[1:], key=lambda a: tuple(a.tolist()))
        return [ident] + rest

    # -- basic queries ------------------------------------------------------

    def class_of(self, P) -> int:
        return int(self.cls[self.index_of(P)])

    def rep_of(self, P) -> int:
        return self.reps[self.class_of(P)]

    def are_conjugate(self, P, Q) -> bool:
        return self.class_of(P) == self.class_of(Q)

    def aut_group(self, P) -> list:
        """``Aut_F(P)`` as image arrays aligned with ``P``."""
        i = self.index_of(P)
        c = int(self.cls[i])
        b = self.beta[i]
        P_ = self.subs[i]
        out = []
        for a in self.aut[c]:
            # beta o a o beta^-1
            pre = self.alpha_pos[i][P_.pos[P_.elements]]
            out.append(b[a[pre]])
        return out

    def aut_order(self, P) -> int:
        return len(self.aut[self.class_of(P)])

    def iso_between(self, P, Q):
        """One F-isomorphism ``P -> Q`` (``None`` if not F-conjugate)."""
        i, j = self.index_of(P), self.index_of(Q)
        if self.cls[i] != self.cls[j]:
            return None
        Pi = self.subs[i]
        return self.beta[j][self.alpha_pos[i][Pi.pos[Pi.elements]]]

    def homs(self, P, Q) -> list:
        """All of ``Hom_F(P, Q)`` as image arrays aligned with ``P``."""
        i, j = self.index_of(P), self.index_of(Q)
        Pi, Qj = self.subs[i], self.subs[j]
        c = int(self.cls[i])
        pre = self.alpha_pos[i][Pi.pos[Pi.elements]]
        out = []
        for t in self.class_members[c]:
            if not self.subs[t] <= Qj:
                continue
            for a in self.aut[c]:
                out.append(self.beta[t][a[pre]])
        return out

    def is_fully_centralized(self, P) -> bool:
        c = self.class_of(P)
        cs = [centralizer(self.G, self.subs[t], self.S).order for t in self.class_members[c]]
        return centralizer(self.G, self.sub(P), self.S).order == max(cs)

    def is_fully_normalized(self, P) -> bool:
        c = self.class_of(P)
        ns = [normalizer(self.G, self.subs[t], self.S).order for t in self.class_members[c]]
        return normalizer(self.G, self.sub(P), self.S).order == max(ns)

    # -- centricity ----------------------------------------------------------

    def is_centric(self, P) -> bool:
        c = self.class_of(P)
        return self._centric_class(c)

    def _centric_class(self, c: int) -> bool:
        if not hasattr(self, "_centric_cache"):
            self._centric_cache = {}
        if c not in self._centric_cache:
            ok = True
            for t in self.class_members[c]:
                T = self.subs[t]
                if not centralizer(self.G, T, self.S) <= T:
                    ok = False
                    break
            self._centric_cache[c] = ok
        return self._centric_cache[c]

    def centric_flags(self) -> np.ndarray:
        return np.array([self._centric_class(int(c)) for c in self.cls], dtype=bool)

    def centric_classes(self) -> list:
        return [c for c in range(len(self.reps)) if self._centric_class(c)]

    # -- verification -------------------------------------------------------

    def check_closure(self, sample: int | None = None) -> list:
        """Return violations of the fusion-system axioms (empty when fine)."""
        bad = []
        G = self.G
        for i, P in enumerate(self.subs):
            if sample is not None and i >= sample:
                break
            auts = self.aut_group(P)
            keys = {a.tobytes() for a in auts}
            for x in P.elements.tolist():
                inner = G.conj_row(x)[P.elements].astype(np.int64)
                if inner.tobytes() not in keys:
                    bad.append(("inner", i, x))
            for a in auts:
                if not is_homomorphism(G, P, a):
                    bad.append(("hom", i))
                inv = invert_map(a, P, P)
                if inv.tobytes() not in keys:
                    bad.append(("inverse", i))
        return bad

    def __repr__(self):
        return f"FusionSystem({self.name or self.kind}, |S|={self.S.order}, classes={len(self.reps)})"


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def build_inner(G: Group, S: Subgroup | None = None, name: str = "") -> FusionSystem:
    """``F_S(S)``: all maps ``c_g|_P`` with ``g`` in ``S``."""
    S = S if S is not None else G.whole
    return FusionSystem(G, S, "inner", S.generators, name=name or f"F_S({G.name})")


def build_ambient(G: Group, S: Subgroup, name: str = "") -> FusionSystem:
    """``F_S(G)`` for a Sylow p-subgroup ``S`` of ``G``."""
    p = prime_of(S.order)
    if not is_sylow(G, S, p):
        raise ValueError("S is not a Sylow p-subgroup of G")
    return FusionSystem(G, S, "ambient", range(G.order), name=name or f"F_S({G.name})")


def build_generated(G: Group, S: Subgroup | None, extra, name: str = "",
                    map_cap: int = MAP_CAP) -> FusionSystem:
    """Smallest fusion system containing ``F_S(S)`` and the given maps.

    ``extra`` is a list of ``(E, img)`` with ``img`` an injective homomorphism
    ``E -> S`` (image array aligned with ``E.elements``).
    """
    S = S if S is not None else G.whole
    for E, img in extra:
        img = np.asarray(img, dtype=np.int64)
        if (not E <= S or not S.members[img].all() or not is_homomorphism(G, E, img)
                or np.unique(img).size != E.order):
            raise ValueError("extra map is not an injective homomorphism from a subgroup into S")
    return FusionSystem(G, S, "generated", S.generators, extra=extra, map_cap=map_cap,
                        name=name or f"generated({G.name})")


# ---------------------------------------------------------------------------
# orbit category
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MorClass:
    """One morphism of the orbit category ``A -> B`` between skeleton objects.

    ``img`` is a representative map ``A -> B``; it equals
    ``beta[L] o a`` with ``L <= B`` and ``a`` in ``Aut_F(A)``.
    """

    src: int
    tgt: int
    index: int
    L: int
    aut: int
    img: np.ndarray


class OrbitCategory:
    """Skeleton of ``O(F)`` (or of ``O(F^c)`` when ``centric_only``)."""

    def __init__(self, fs: FusionSystem, centric_only: bool = False):
        self.fs = fs
        self.centric_only = centric_only
        classes = fs.centric_classes() if centric_only else list(range(len(fs.reps)))
        self.objects = [fs.reps[c] for c in classes]  # subgroup indices
        self.obj_of_class = {c: k for k, c in enumerate(classes)}
        self.classes = classes
        self.n = len(self.objects)
        self._homs: dict = {}
        self._sub2L: dict = {}
        self._coset: dict = {}
        self._class_id: dict = {}
        self._compose_cache: dict = {}
        for a in range(self.n):
            for b in range(self.n):
                self._build_hom(a, b)

    # -- construction -------------------------------------------------------

    def obj_sub(self, a: int) -> Subgroup:
        return self.fs.subs[self.objects[a]]

    def obj_of(self, P) -> int:
        """Skeleton object of the F-class of ``P`` (KeyError if filtered out)."""
        return self.obj_of_class[self.fs.class_of(P)]

    def contains(self, P) -> bool:
        return self.fs.class_of(P) in self.obj_of_class

    def _b_classes(self, a: int, b: int):
        """``B``-conjugacy classes of members of ``class(A)`` inside ``B``."""
        fs = self.fs
        G = fs.G
        B = self.obj_sub(b)
        c = self.classes[a]
        inside = [t for t in fs.class_members[c] if fs.subs[t] <= B]
        assign = {}
        Ls = []
        for t in inside:
            if t in assign:
                continue
            Ls.append(t)
            assign[t] = (t, 0)
            queue = deque([(t, 0)])
            while queue:
                u, tt = queue.popleft()  # tt L tt^-1 = u
                for g in B.generators:
                    v = fs.idx_of_elements(G.conj_row(g)[fs.subs[u].elements])
                    if v not in assign:
                        gt = int(G.mul[g, tt])
                        assign[v] = (t, int(G.inv[gt]))
                        queue.append((v, gt))
        return Ls, assign

    def _build_hom(self, a: int, b: int):
        fs = self.fs
        G = fs.G
        A, B = self.obj_sub(a), self.obj_sub(b)
        homs = []
        if A.order > B.order:
            self._homs[(a, b)] = homs
            return
        c = self.classes[a]
        auts = fs.aut[c]
        aidx = fs.aut_index[c]
        Ls, assign = self._b_classes(a, b)
        self._sub2L[(a, b)] = assign
        for L in Ls:
            Lsub = fs.subs[L]
            NL = normalizer(G, Lsub, B)
            H = set()
            for x in NL.elements.tolist():
                m = G.conj_row(x)[fs.beta[L]]
                H.add(aidx[fs.alpha_pos[L][Lsub.pos[m]].tobytes()])
            H = sorted(H)
            coset = np.full(len(auts), -1, dtype=np.int64)
            for k in range(len(auts)):
                if coset[k] >= 0:
                    continue
                cid = len(homs)
                for h in H:
                    coset[aidx[auts[h][auts[k]].tobytes()]] = cid
                img = fs.beta[L][auts[k]]
                homs.append(MorClass(a, b, cid, L, k, img))
            self._coset[(a, b, L)] = coset
        self._homs[(a, b)] = homs

    # -- queries -------------------------------------------------------------

    def hom(self, a: int, b: int) -> list:
        return self._homs[(a, b)]

    def hom_count(self, a: int, b: int) -> int:
        return len(self._homs[(a, b)])

    def identity(self, a: int) -> int:
        return self.classify(a, a, self.obj_sub(a).elements)

    def is_iso(self, a: int, b: int) -> bool:
        return a == b

    def classify(self, a: int, b: int, img) -> int:
        """Index in ``hom(a, b)`` of the class of the map ``img: A -> B``."""
        fs = self.fs
        img = np.asarray(img, dtype=np.int64)
        j = fs.idx_of_elements(img)
        L, binv = self._sub2L[(a, b)][j]
        img2 = fs.G.conj_row(binv)[img] if binv else img
        perm = fs.alpha_pos[L][fs.subs[L].pos[img2]]
        k = fs.aut_index[self.classes[a]][perm.tobytes()]
        return int(self._coset[(a, b, L)][k])

    def class_of_map(self, P, Q, img) -> tuple:
        """``(a, b, index)`` for a map ``img: P -> Q`` between arbitrary subgroups."""
        fs = self.fs
        i, j = fs.index_of(P), fs.index_of(Q)
        Pi, Qj = fs.subs[i], fs.subs[j]
        a, b = self.obj_of(i), self.obj_of(j)
        img = np.asarray(img, dtype=np.int64)
        m1 = img[Pi.pos[fs.beta[i]]]
        Bsub = self.obj_sub(b)
        m2 = Bsub.elements[fs.alpha_pos[j][Qj.pos[m1]]]
        return a, b, self.classify(a, b, m2)

    def inclusion(self, P, Q) -> tuple:
        return self.class_of_map(P, Q, self.fs.sub(P).elements)

    def compose(self, g: tuple, f: tuple) -> tuple:
        """``g o f`` for classes ``f = (a, b, i)``, ``g = (b, c, j)``."""
        key = (f, g)
        hit = self._compose_cache.get(key)
        if hit is not None:
            return hit
        a, b, i = f
        b2, c, j = g
        if b != b2:
            raise ValueError("morphisms not composable")
        fi = self._homs[(a, b)][i].img
        gj = self._homs[(b, c)][j].img
        img = gj[self.obj_sub(b).pos[fi]]
        out = (a, c, self.classify(a, c, img))
        self._compose_cache[key] = out
        return out

    def morphisms(self):
        for (a, b), hs in sorted(self._homs.items()):
            for m in hs:
                yield m

    def num_morphisms(self) -> int:
        return sum(len(h) for h in self._homs.values())

    def out_group(self, a: int) -> list:
        """Elements of ``Out_F(A)`` as class indices of ``hom(a, a)``."""
        return list(range(self.hom_count(a, a)))

    def check_associativity(self) -> bool:
        objs = range(self.n)
        for a in objs:
            for b in objs:
                for i in range(self.hom_count(a, b)):
                    for c in objs:
                        for j in range(self.hom_count(b, c)):
                            gf = self.compose((b, c, j), (a, b, i))
                            for d in objs:
                                for k in range(self.hom_count(c, d)):
                                    lhs = self.compose((c, d, k), gf)
                                    rhs = self.compose(self.compose((c, d, k), (b, c, j)), (a, b, i))
                                    if lhs != rhs:
                                        return False
        return True

    def chain_bound(self) -> int:
        """Longest strict chain ``P_0 < ... < P_m`` of objects (explicit search)."""
        fs = self.fs
        members = [t for c in self.classes for t in fs.class_members[c]]
        members.sort(key=lambda t: fs.subs[t].order)
        best = {}
        for t in members:
            T = fs.subs[t]
            best[t] = max([best[u] + 1 for u in best if fs.subs[u].order < T.order and fs.subs[u] <= T],
                          default=0)
        return max(best.values(), default=0)


def truncated_double_cosets(fs: FusionSystem, Q, P, R, keep=None) -> list:
    """Representatives ``x`` of ``Q\\P/R`` with ``Q cap xRx^-1`` kept by ``keep``.

    ``keep`` is a predicate on subgroup indices (default: keep everything).
    """
    G = fs.G
    Qs, Ps, Rs = fs.sub(Q), fs.sub(P), fs.sub(R)
    reps = double_cosets(G, Qs, Rs, Ps)
    if keep is None:
        return reps
    out = []
    for x in reps:
        inter = Qs.intersect(Rs.conjugate(x))
        if keep(fs.index_of(inter)):
            out.append(x)
    return out


def orbit_count_hom(fs: FusionSystem, P, Q) -> int:
    """Oracle: ``|Inn(Q) \\ Hom_F(P,Q)|`` by explicit orbit computation."""
    G = fs.G
    Qs = fs.sub(Q)
    maps = {m.tobytes(): m for m in fs.homs(P, Q)}
    seen = set()
    orbits = 0
    for k, m in maps.items():
        if k in seen:
            continue
        orbits += 1
        for q in Qs.elements.tolist():
            seen.add(G.conj_row(q)[m].astype(np.int64).tobytes())
    return orbits


# ---------------------------------------------------------------------------
# saturation (best effort)
# ---------------------------------------------------------------------------

def saturation_check(fs: FusionSystem, cap: int = 3 ** 5) -> dict:
    """Check the Sylow and extension axioms by exhaustive search.

    Returns ``{"sylow": [...failing subgroup ids], "extension": [...], "saturated": bool}``.
    """
    if fs.S.order > cap:
        raise CapExceeded(f"|S| = {fs.S.order} exceeds saturation cap {cap}")
    G, S, p = fs.G, fs.S, fs.p
    sylow_fail, ext_fail = [], []

    def p_part(n):
        m = 1
        while n % p == 0:
            n //= p
            m *= p
        return m

    for c in range(len(fs.reps)):
        members = fs.class_members[c]
        norms = {t: normalizer(G, fs.subs[t], S).order for t in members}
        cents = {t: centralizer(G, fs.subs[t], S).order for t in members}
        best_n, best_c = max(norms.values()), max(cents.values())
        aut_p = p_part(len(fs.aut[c]))
        for t in members:
            if norms[t] == best_n:
                # fully normalized => fully centralized and Aut_S(P) Sylow in Aut_F(P)
                aut_s = norms[t] // cents[t]
                if cents[t] != best_c or aut_s != aut_p:
                    sylow_fail.append(t)
        # extension axiom for maps onto fully centralized members
        for t in members:
            if cents[t] != best_c:
                continue
            T = fs.subs[t]
            auts_T = {G.conj_row(g)[T.elements].astype(np.int64).tobytes()
                      for g in normalizer(G, T, S).elements.tolist()}
            for src in members:
                P = fs.subs[src]
                isos = [m for m in fs.homs(src, src)]  # Aut_F(P)
                base = fs.iso_between(src, t)
                NP = normalizer(G, P, S)
                for a in isos:
                    phi = base[P.pos[a]]  # P -> T
                    inv = invert_map(phi, P, T)
                    n_phi = []
                    for g in NP.elements.tolist():
                        cg = G.conj_row(g)[P.elements].astype(np.int64)
                        # phi c_g phi^-1 on T
                        m = phi[P.pos[cg[P.pos[inv]]]]
                        if m.tobytes() in auts_T:
                            n_phi.append(g)
                    N = Subgroup(G, n_phi)
                    if N.order == P.order:
                        continue
                    ok = False
                    for psi in fs.homs(N, fs.S):
                        if np.array_equal(psi[N.pos[P.elements]], phi):
                            ok = True
                            break
                    if not ok:
                        ext_fail.append(src)
                        break
    return {"sylow": sorted(set(sylow_fail)), "extension": sorted(set(ext_fail)),
            "saturated": not sylow_fail and not ext_fail}
