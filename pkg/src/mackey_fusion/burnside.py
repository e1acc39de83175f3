"""Burnside-type categories of a fusion system over F_p.

A basis element ``[Q x_phi P]`` is stored as :class:`Biset` with target
``Q``, source ``P``, a subgroup ``U <= P`` and an injective map
``phi: U -> Q`` in the fusion system.  Two pairs ``(U, phi)`` give the same
transitive biset iff they are related by ``(U, phi) ~ (p^-1 U p, c_q o phi o c_p)``
for ``p`` in ``P`` and ``q`` in ``Q``; every element is kept in the
canonical form that minimizes ``(U, image tuple)``.

Linear combinations are dicts ``{Biset: coefficient mod p}``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fp
from .fusion import FusionSystem, OrbitCategory
from .group import double_cosets


@dataclass(frozen=True)
class Biset:
    tgt: int
    src: int
    U: int
    img: tuple

    def image_array(self) -> np.ndarray:
        return np.asarray(self.img, dtype=np.int64)


def _lex_min_row(rows: np.ndarray) -> np.ndarray:
    order = np.lexsort(rows.T[::-1])
    return rows[order[0]]


class BurnsideCategory:
    """The category with ``Hom(P, Q) = kB_F(Q, P)``.

    ``keep`` restricts to the quotient ``D^X``: it is a predicate on subgroup
    indices (closed under F-overconjugacy); basis elements whose domain ``U``
    fails it are treated as zero.
    """

    def __init__(self, fs: FusionSystem, keep=None):
        self.fs = fs
        self.G = fs.G
        self.p = fs.p
        self.keep = keep
        self._canon: dict = {}
        self._basis: dict = {}
        self._compose: dict = {}

    # -- canonical forms ------------------------------------------------------

    def canonical(self, Q, P, U, img) -> Biset:
        fs, G = self.fs, self.G
        q_i, p_i, u_i = fs.index_of(Q), fs.index_of(P), fs.index_of(U)
        img = np.asarray(img, dtype=np.int64)
        key = (q_i, p_i, u_i, img.tobytes())
        hit = self._canon.get(key)
        if hit is not None:
            return hit
        Qs, Ps, Us = fs.subs[q_i], fs.subs[p_i], fs.subs[u_i]
        # all conjugates p^-1 U p and the p achieving the least one
        best, cands = None, []
        for x in Ps.elements.tolist():
            xi = int(G.inv[x])
            dom = np.sort(G.conj_row(xi)[Us.elements])
            k = tuple(dom.tolist())
            if best is None or k < best:
                best, cands = k, [x]
            elif k == best:
                cands.append(x)
        dom = np.asarray(best, dtype=np.int64)
        rows = []
        qrows = np.stack([G.conj_row(q) for q in Qs.elements.tolist()])
        for x in cands:
            # phi o c_x on p^-1 U p: v -> phi(x v x^-1)
            pre = G.conj_row(x)[dom]
            phix = img[Us.pos[pre]]
            rows.append(qrows[:, phix])
        m = _lex_min_row(np.vstack(rows))
        out = Biset(q_i, p_i, fs.idx_of_elements(dom), tuple(int(v) for v in m))
        self._canon[key] = out
        return out

    # -- bases ----------------------------------------------------------------

    def basis(self, Q, P) -> list:
        """Basis of ``kB_F(Q, P)`` (or of ``Hom_{D^X}(P, Q)`` when filtered)."""
        fs = self.fs
        q_i, p_i = fs.index_of(Q), fs.index_of(P)
        key = (q_i, p_i)
        if key in self._basis:
            return self._basis[key]
        Ps = fs.subs[p_i]
        seen = set()
        out = []
        for u_i, Us in enumerate(fs.subs):
            if not Us <= Ps or (self.keep is not None and not self.keep(u_i)):
                continue
            for m in fs.homs(u_i, q_i):
                b = self.canonical(q_i, p_i, u_i, m)
                if b not in seen:
                    seen.add(b)
                    out.append(b)
        out.sort(key=lambda b: (fs.subs[b.U].sort_key(), b.img))
        self._basis[key] = out
        return out

    def identity(self, P) -> Biset:
        i = self.fs.index_of(P)
        Ps = self.fs.subs[i]
        return self.canonical(i, i, i, Ps.elements)

    def from_map(self, Q, P, U, img) -> Biset:
        return self.canonical(Q, P, U, img)

    # -- composition ----------------------------------------------------------

    def compose_multiset(self, f: Biset, g: Biset) -> dict:
        """``f g`` for ``f = [R x_psi Q]`` and ``g = [Q x_phi P]`` as integer multiplicities."""
        if f.src != g.tgt:
            raise ValueError("bisets are not composable")
        key = (f, g)
        hit = self._compose.get(key)
        if hit is not None:
            return hit
        fs, G = self.fs, self.G
        Qs = fs.subs[f.src]
        V, U = fs.subs[f.U], fs.subs[g.U]
        psi, phi = f.image_array(), g.image_array()
        phiU = fs.subs[fs.idx_of_elements(phi)]
        out: dict = {}
        for x in double_cosets(G, V, phiU, Qs):
            y = G.conj_row(x)[phi]  # x phi(u) x^-1
            ok = V.members[y]
            W = U.elements[ok]
            w_i = fs.idx_of_elements(W)
            if self.keep is not None and not self.keep(w_i):
                continue
            chi = psi[V.pos[y[ok]]]
            b = self.canonical(f.tgt, g.src, w_i, chi)
            out[b] = out.get(b, 0) + 1
        self._compose[key] = out
        return out

    def compose_basis(self, f: Biset, g: Biset) -> dict:
        """``f g`` with coefficients in ``F_p`` (zero terms dropped)."""
        out = {b: c % self.p for b, c in self.compose_multiset(f, g).items()}
        return {b: c for b, c in out.items() if c}

    def compose(self, f: dict, g: dict) -> dict:
        out: dict = {}
        for fb, fc in f.items():
            for gb, gc in g.items():
                for b, c in self.compose_basis(fb, gb).items():
                    out[b] = (out.get(b, 0) + fc * gc * c) % self.p
        return {b: c for b, c in out.items() if c}

    # -- barred quotient ------------------------------------------------------

    def is_full(self, b: Biset) -> bool:
        return b.U == b.src

    def reduce_bar(self, v: dict) -> dict:
        """Image in ``k-bar-B``: drop basis elements with proper domain."""
        return {b: c for b, c in v.items() if b.U == b.src}


class BarredModule:
    """``k-bar-B_F(P, Q)``: basis indexed by ``Hom_O(Q, P)`` with right ``Out_F(Q)``-action.

    ``P`` and ``Q`` are skeleton objects of ``orbit``.
    """

    def __init__(self, burnside: BurnsideCategory, orbit: OrbitCategory, P_obj: int, Q_obj: int):
        self.B = burnside
        self.orbit = orbit
        self.P_obj, self.Q_obj = P_obj, Q_obj
        fs = burnside.fs
        self.P = orbit.objects[P_obj]
        self.Q = orbit.objects[Q_obj]
        self.classes = orbit.hom(Q_obj, P_obj)
        self.basis = [burnside.canonical(self.P, self.Q, self.Q, m.img) for m in self.classes]
        self.index = {b: k for k, b in enumerate(self.basis)}
        self.dim = len(self.basis)
        self._fs = fs

    def out_action(self, beta: int) -> np.ndarray:
        """Matrix of right multiplication by ``[Q x_beta Q]``, ``beta`` a class in ``hom(Q, Q)``.

        Column ``k`` holds the coordinates of ``basis[k] * beta``.
        """
        Bc = self.B
        fs = self._fs
        bmor = self.orbit.hom(self.Q_obj, self.Q_obj)[beta]
        bb = Bc.canonical(self.Q, self.Q, self.Q, bmor.img)
        m = fp.zeros(self.dim, self.dim)
        for k, b in enumerate(self.basis):
            prod = Bc.reduce_bar(Bc.compose_basis(b, bb))
            for t, c in prod.items():
                m[self.index[t], k] = (m[self.index[t], k] + c) % fs.p
        return m


# ---------------------------------------------------------------------------
# set-level oracle for composition
# ---------------------------------------------------------------------------

def oracle_compose(burnside: BurnsideCategory, f: Biset, g: Biset) -> dict:
    """Compose by building the amalgamated biset and splitting it into orbits.

    The product ``(R x_psi Q) x_Q (Q x_phi P)`` is realised as ``R x Q x P``
    modulo ``(r psi(v), q, x) ~ (r, v q, x)`` and ``(r, q phi(u), x) ~ (r, q, u x)``.
    Each ``(R, P)``-orbit is recognised as ``[R x_chi P]`` from the stabilizer
    of a point.  Returns a multiset ``{Biset: count}`` (integer counts).
    """
    fs, G = burnside.fs, burnside.G
    if f.src != g.tgt:
        raise ValueError("bisets are not composable")
    R, Q, P = fs.subs[f.tgt], fs.subs[f.src], fs.subs[g.src]
    V, U = fs.subs[f.U], fs.subs[g.U]
    psi, phi = f.image_array(), g.image_array()
    nr, nq, npp = R.order, Q.order, P.order
    re, qe, pe = R.elements, Q.elements, P.elements
    r_, q_, x_ = np.meshgrid(np.arange(nr), np.arange(nq), np.arange(npp), indexing="ij")
    r_, q_, x_ = r_.ravel(), q_.ravel(), x_.ravel()
    code = np.full(r_.size, np.iinfo(np.int64).max, dtype=np.int64)
    inv = G.inv
    for vi, v in enumerate(V.elements.tolist()):
        rv = R.pos[G.mul[re[r_], inv[psi[vi]]]]
        vq = G.mul[v, qe[q_]]
        for ui, u in enumerate(U.elements.tolist()):
            qq = Q.pos[G.mul[vq, inv[phi[ui]]]]
            xx = P.pos[G.mul[u, pe[x_]]]
            c = (rv * nq + qq) * npp + xx
            np.minimum(code, c, out=code)
    classes = np.unique(code)
    # (R, P) acts on classes; compute orbits
    point_class = np.empty(r_.size, dtype=np.int64)
    point_class[:] = np.searchsorted(classes, code)
    flat = (r_ * nq + q_) * npp + x_
    by_code = np.empty(r_.size, dtype=np.int64)
    by_code[flat] = point_class

    def act(a, b, c):
        rr, qq, xx = c // (nq * npp), (c // npp) % nq, c % npp
        r2 = R.pos[G.mul[re[a], re[rr]]]
        x2 = P.pos[G.mul[pe[xx], inv[pe[b]]]]
        return by_code[(r2 * nq + qq) * npp + x2]

    seen = np.zeros(classes.size, dtype=bool)
    out: dict = {}
    for k, c in enumerate(classes.tolist()):
        if seen[k]:
            continue
        stab_pairs = []
        for a in range(nr):
            for b in range(npp):
                j = act(a, b, c)
                seen[j] = True
                if j == k:
                    stab_pairs.append((a, b))
        W, chi = {}, {}
        for a, b in stab_pairs:
            if b in W and chi[b] != a:
                raise AssertionError("transitive component is not of the form [R x_chi P]")
            W[b] = True
            chi[b] = a
        if not all(re[a] == 0 for a, b in stab_pairs if pe[b] == 0):
            raise AssertionError("stabilizer meets R x 1 nontrivially")
        dom = np.array(sorted(int(pe[b]) for b in W), dtype=np.int64)
        img = np.array([int(re[chi[int(P.pos[x])]]) for x in dom], dtype=np.int64)
        w_i = fs.idx_of_elements(dom)
        bset = burnside.canonical(f.tgt, g.src, w_i, img)
        out[bset] = out.get(bset, 0) + 1
    return out
