"""The Mackey functor freely generated by a contravariant functor.

For ``N`` on ``O(X)`` the value ``I(N)(P)`` is the ``P``-coinvariant space of
``W_P = sum_{L <= P, L in X} N(L)``, where ``x in P`` sends ``u in N(L)`` to
``N(c_{x^-1}: xLx^-1 -> L)(u) in N(xLx^-1)``.  Write ``pi^P_L`` for the
projection of the ``L`` block.  Then

* ``t^P_Q(pi^Q_L u) = pi^P_L u``
* ``r^P_Q(pi^P_L u) = sum_x pi^Q_{Q cap xLx^-1} N(Q cap xLx^-1 -> L, v -> x^-1 v x)(u)``,
  with ``x`` over ``Q\\P/L`` truncated to intersections in ``X``
* ``iso(phi)(pi^P_L u) = pi^{phi P}_{phi L} N(phi|_L^-1)(u)``.

The unit ``eta(P) = pi^P_P`` is split injective with cokernel
``C(N)(P) = (sum_{L < P} N(L))_P``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fp
from .fusion import invert_map, truncated_double_cosets
from .group import conjugacy_classes_of_subgroups, normalizer
from .mackey import ContravariantFunctor, MackeyFunctor


@dataclass
class _Coinvariants:
    P: int
    blocks: list  # subgroup indices L <= P in X
    offset: dict  # L -> start in W_P
    width: dict  # L -> dim N(L)
    dim_w: int
    quotient: fp.Quotient

    @property
    def dim(self) -> int:
        return self.quotient.dim


class _Builder:
    """Coinvariant spaces and structure maps at arbitrary subgroups in ``X``."""

    def __init__(self, N: ContravariantFunctor):
        self.N = N
        self.orbit = N.orbit
        self.fs = N.orbit.fs
        self.p = N.p
        self._spaces: dict = {}
        self._nmap: dict = {}

    def ndim(self, L: int) -> int:
        return self.N.dims[self.orbit.obj_of(L)]

    def nmap(self, A: int, B: int, img) -> np.ndarray:
        """``N(f): N(B) -> N(A)`` for a map ``f: A -> B`` given by images."""
        img = np.asarray(img, dtype=np.int64)
        key = (A, B, img.tobytes())
        hit = self._nmap.get(key)
        if hit is None:
            hit = self.N.contra[self.orbit.class_of_map(A, B, img)]
            self._nmap[key] = hit
        return hit

    def conj_in(self, x: int, L: int) -> tuple:
        """``(xLx^-1, N(L) -> N(xLx^-1))``: the action of ``x`` on blocks."""
        G, fs = self.fs.G, self.fs
        Ls = fs.subs[L]
        xL = fs.idx_of_elements(G.conj_row(x)[Ls.elements])
        back = G.conj_row(int(G.inv[x]))[fs.subs[xL].elements]
        return xL, self.nmap(xL, L, back)

    def space(self, P: int, proper: bool = False) -> _Coinvariants:
        key = (P, proper)
        hit = self._spaces.get(key)
        if hit is not None:
            return hit
        fs, p = self.fs, self.p
        Ps = fs.subs[P]
        blocks = [i for i, H in enumerate(fs.subs)
                  if H <= Ps and self.orbit.contains(i) and not (proper and i == P)]
        offset, width, o = {}, {}, 0
        for L in blocks:
            offset[L] = o
            width[L] = self.ndim(L)
            o += width[L]
        rels = []
        for x in Ps.generators:
            for L in blocks:
                d = width[L]
                if not d:
                    continue
                xL, A = self.conj_in(int(x), L)
                r = fp.zeros(d, o)
                r[:, offset[xL]:offset[xL] + d] += A.T
                r[:, offset[L]:offset[L] + d] -= fp.eye(d)
                rels.append(r % p)
        relsp = fp.Subspace.span(np.vstack(rels) if rels else fp.zeros(0, o), o, p)
        out = _Coinvariants(P, blocks, offset, width, o, fp.quotient_map(o, relsp))
        self._spaces[key] = out
        return out

    # -- maps on W --------------------------------------------------------------

    def w_transfer(self, Q: int, P: int) -> np.ndarray:
        """``W_Q -> W_P`` for ``Q <= P``: blocks carried over unchanged."""
        sq, sp = self.space(Q), self.space(P)
        m = fp.zeros(sp.dim_w, sq.dim_w)
        for L in sq.blocks:
            d = sq.width[L]
            m[sp.offset[L]:sp.offset[L] + d, sq.offset[L]:sq.offset[L] + d] = fp.eye(d)
        return m

    def w_restrict(self, P: int, Q: int) -> np.ndarray:
        """``W_P -> W_Q`` for ``Q <= P`` following the truncated double coset formula."""
        fs, G = self.fs, self.fs.G
        sp, sq = self.space(P), self.space(Q)
        m = fp.zeros(sq.dim_w, sp.dim_w)
        for L in sp.blocks:
            d = sp.width[L]
            if not d:
                continue
            for x in truncated_double_cosets(fs, Q, P, L, keep=self.orbit.contains):
                xL = fs.subs[fs.idx_of_elements(G.conj_row(int(x))[fs.subs[L].elements])]
                K = fs.idx_of_elements(fs.subs[Q].intersect(xL).elements)
                back = G.conj_row(int(G.inv[x]))[fs.subs[K].elements]
                A = self.nmap(K, L, back)
                rk = sq.offset[K]
                m[rk:rk + A.shape[0], sp.offset[L]:sp.offset[L] + d] += A
        return m % self.p

    def w_iso(self, P: int, img) -> tuple:
        """``(phi P, W_P -> W_{phi P})`` for an injective map ``img`` on ``P``."""
        fs = self.fs
        Ps = fs.subs[P]
        img = np.asarray(img, dtype=np.int64)
        T = fs.idx_of_elements(img)
        sp, st = self.space(P), self.space(T)
        m = fp.zeros(st.dim_w, sp.dim_w)
        for L in sp.blocks:
            d = sp.width[L]
            if not d:
                continue
            Ls = fs.subs[L]
            limg = img[Ps.pos[Ls.elements]]
            phiL = fs.idx_of_elements(limg)
            inv = invert_map(limg, Ls, fs.subs[phiL])
            A = self.nmap(phiL, L, inv)
            m[st.offset[phiL]:st.offset[phiL] + d, sp.offset[L]:sp.offset[L] + d] = A
        return T, m

    # -- maps on coinvariants -----------------------------------------------------

    def _descend(self, src: int, tgt: int, wmap: np.ndarray) -> np.ndarray:
        a, b = self.space(src), self.space(tgt)
        return fp.matmul(b.quotient.proj, fp.matmul(wmap, a.quotient.section, self.p), self.p)

    def transfer(self, Q: int, P: int) -> np.ndarray:
        return self._descend(Q, P, self.w_transfer(Q, P))

    def restrict(self, P: int, Q: int) -> np.ndarray:
        return self._descend(P, Q, self.w_restrict(P, Q))

    def iso(self, P: int, img) -> tuple:
        T, m = self.w_iso(P, img)
        return T, self._descend(P, T, m)

    def eta(self, P: int) -> np.ndarray:
        s = self.space(P)
        d = s.width[P]
        e = fp.zeros(s.dim_w, d)
        e[s.offset[P]:s.offset[P] + d] = fp.eye(d)
        return fp.matmul(s.quotient.proj, e, self.p)

    def well_defined(self, P: int, Q: int) -> bool:
        """The restriction formula kills the coinvariant relations."""
        sp, sq = self.space(P), self.space(Q)
        rel = sp.quotient.relations.basis
        if not rel.shape[0]:
            return True
        img = fp.matmul(self.w_restrict(P, Q), rel.T, self.p)
        return not fp.matmul(sq.quotient.proj, img, self.p).any()


@dataclass
class MackeyficationResult:
    N: ContravariantFunctor
    I_N: MackeyFunctor
    eta: list  # eta[a]: N(a) -> I(N)(a)
    C_N: ContravariantFunctor
    builder: _Builder

    def dims(self) -> list:
        return list(self.I_N.dims)


def _skeleton_maps(B: _Builder, orbit):
    """``contra`` and ``cov`` of ``I(N)`` on every morphism class of the skeleton."""
    fs = orbit.fs
    contra, cov = {}, {}
    for f in orbit.morphisms():
        P, Pb = orbit.objects[f.src], orbit.objects[f.tgt]
        T, iso_fwd = B.iso(P, f.img)
        inv = invert_map(f.img, fs.subs[P], fs.subs[T])
        _, iso_back = B.iso(T, inv)
        key = (f.src, f.tgt, f.index)
        cov[key] = fp.matmul(B.transfer(T, Pb), iso_fwd, B.p)
        contra[key] = fp.matmul(iso_back, B.restrict(Pb, T), B.p)
    return contra, cov


def _cokernel_functor(N, I_N, eta, name):
    """The quotient functor ``U*I(N) / eta(N)``."""
    orbit, p = N.orbit, N.p
    quots = []
    for a in range(orbit.n):
        quots.append(fp.quotient_map(I_N.dims[a], fp.image(eta[a], p)))
    contra = {}
    for key, m in I_N.contra.items():
        a, b, _ = key
        contra[key] = fp.matmul(quots[a].proj, fp.matmul(m, quots[b].section, p), p)
    return ContravariantFunctor(orbit, [q.dim for q in quots], contra, name=name)


def mackeyfy(N: ContravariantFunctor) -> MackeyficationResult:
    """``I(N)`` with its unit and the cokernel ``C(N)``."""
    orbit = N.orbit
    B = _Builder(N)
    for a in range(orbit.n):
        B.space(orbit.objects[a])
    dims = [B.space(P).dim for P in orbit.objects]
    contra, cov = _skeleton_maps(B, orbit)
    I_N = MackeyFunctor(orbit, dims, contra, cov, name=f"I({N.name})")
    eta = [B.eta(P) for P in orbit.objects]
    C_N = _cokernel_functor(N, I_N, eta, name=f"C({N.name})")
    return MackeyficationResult(N, I_N, eta, C_N, B)


def coinvariant_dims_by_orbits(N: ContravariantFunctor, proper: bool = False) -> list:
    """``dim I(N)(P)`` (or ``dim C(N)(P)``) from a ``P``-orbit decomposition.

    ``(sum_L N(L))_P`` splits as the sum over ``P``-classes of ``L`` of the
    ``N_P(L)``-coinvariants of ``N(L)``; this avoids the big quotient.
    """
    orbit, p = N.orbit, N.p
    fs = orbit.fs
    G = fs.G
    B = _Builder(N)
    out = []
    for P in orbit.objects:
        Ps = fs.subs[P]
        inside = [H for i, H in enumerate(fs.subs)
                  if H <= Ps and orbit.contains(i) and not (proper and i == P)]
        total = 0
        for cls in conjugacy_classes_of_subgroups(G, inside, Ps):
            L = fs.index_of(cls[0])
            d = B.ndim(L)
            if not d:
                continue
            stab = normalizer(G, cls[0], Ps)
            rels = []
            for x in stab.generators:
                xL, A = B.conj_in(int(x), L)
                assert xL == L
                rels.append((A - fp.eye(d)) % p)
            r = fp.rank(np.hstack(rels), p) if rels else 0
            total += d - r
        out.append(total)
    return out


def is_natural(N, M, maps) -> bool:
    """``maps[a]: N(a) -> M(a)`` commutes with every contravariant structure map."""
    orbit, p = N.orbit, N.p
    for f in orbit.morphisms():
        key = (f.src, f.tgt, f.index)
        lhs = fp.matmul(maps[f.src], N.contra[key], p)
        rhs = fp.matmul(M.contra[key], maps[f.tgt], p)
        if not np.array_equal(lhs, rhs):
            return False
    return True


def is_mackey_morphism(M1: MackeyFunctor, M2: MackeyFunctor, maps) -> bool:
    """``maps`` commutes with both restriction-type and transfer-type maps."""
    orbit, p = M1.orbit, M1.p
    if not is_natural(M1, M2, maps):
        return False
    for f in orbit.morphisms():
        key = (f.src, f.tgt, f.index)
        lhs = fp.matmul(maps[f.tgt], M1.cov[key], p)
        rhs = fp.matmul(M2.cov[key], maps[f.src], p)
        if not np.array_equal(lhs, rhs):
            return False
    return True


def counit(M: MackeyFunctor, res: MackeyficationResult | None = None) -> list:
    """``eps_M(P)(pi^P_L u) = t^P_L u`` at each skeleton object."""
    res = res if res is not None else mackeyfy(M.contravariant())
    B, orbit, p = res.builder, M.orbit, M.p
    out = []
    for a, P in enumerate(orbit.objects):
        s = B.space(P)
        w = fp.zeros(M.dims[a], s.dim_w)
        for L in s.blocks:
            d = s.width[L]
            if d:
                w[:, s.offset[L]:s.offset[L] + d] = M.tr(P, L)
        if s.quotient.relations.dim and fp.matmul(w, s.quotient.relations.basis.T, p).any():
            raise AssertionError(f"counit not well defined at object {a}")
        out.append(fp.matmul(w, s.quotient.section, p))
    return out


def apply_I(nat: list, src: MackeyficationResult, tgt: MackeyficationResult) -> list:
    """``I(f)`` for a natural transformation ``f: N -> N'`` given per skeleton object.

    On blocks, ``I(f)(pi^P_L u) = pi^P_L f_L(u)``.  Values at a subgroup ``L``
    are identified with those at its skeleton object, so ``f_L`` is the
    skeleton component.
    """
    B1, B2 = src.builder, tgt.builder
    orbit, p = B1.orbit, B1.p
    out = []
    for P in orbit.objects:
        s1, s2 = B1.space(P), B2.space(P)
        w = fp.zeros(s2.dim_w, s1.dim_w)
        for L in s1.blocks:
            w[s2.offset[L]:s2.offset[L] + s2.width[L],
              s1.offset[L]:s1.offset[L] + s1.width[L]] = nat[orbit.obj_of(L)]
        out.append(fp.matmul(s2.quotient.proj, fp.matmul(w, s1.quotient.section, p), p))
    return out


def counit_and_triangles(M: MackeyFunctor) -> dict:
    """Check both triangle identities of the adjunction at every object.

    * ``eps_M o eta_{U*M} = id`` on ``M``;
    * ``eps_{I(N)} o I(eta_N) = id`` on ``I(N)`` for ``N = U*M``.
    Also reports naturality of ``eta`` and ``eps``.
    """
    p = M.p
    N = M.contravariant()
    res = mackeyfy(N)
    eps = counit(M, res)
    tri2 = all(np.array_equal(fp.matmul(eps[a], res.eta[a], p), fp.eye(M.dims[a]))
               for a in range(M.orbit.n))
    I_N = res.I_N
    res2 = mackeyfy(I_N.contravariant())
    eps_I = counit(I_N, res2)
    I_eta = apply_I(res.eta, res, res2)
    tri1 = all(np.array_equal(fp.matmul(eps_I[a], I_eta[a], p), fp.eye(I_N.dims[a]))
               for a in range(M.orbit.n))
    return {
        "eta_natural": is_natural(N, I_N, res.eta),
        "eps_morphism": is_mackey_morphism(I_N, M, eps),
        "I_eta_morphism": is_mackey_morphism(I_N, res2.I_N, I_eta),
        "triangle_unit": tri2,
        "triangle_counit": tri1,
        "ok": tri1 and tri2,
    }


def iterate_cokernel(N: ContravariantFunctor, i: int) -> ContravariantFunctor:
    """``C^i(N)``; ``C^0(N) = N``."""
    out = N
    for _ in range(i):
        out = mackeyfy(out).C_N
    return out


def zero_functor(orbit, name: str = "0") -> ContravariantFunctor:
    contra = {(f.src, f.tgt, f.index): fp.zeros(0, 0) for f in orbit.morphisms()}
    return ContravariantFunctor(orbit, [0] * orbit.n, contra, name=name)
