"""Higher limits of contravariant functors over finite categories.

``lim^i N`` is computed as the cohomology of the normalized cochain complex:
``C^n`` is the direct sum of ``N(c_0)`` over chains ``c_0 -> c_1 -> ... -> c_n``
of non-identity morphisms, and

    (d x)(f_1, ..., f_{n+1}) = N(f_1) x(f_2, ...) + sum_{i=1}^{n} (-1)^i x(..., f_{i+1} f_i, ...)
                               + (-1)^{n+1} x(f_1, ..., f_n),

where inner faces whose composite is an identity are dropped.

A category is anything with ``n``, ``hom_count(a, b)``, ``identity(a)`` and
``compose(g, f)`` on ``(src, tgt, index)`` triples (see :class:`OrbitCategory`).
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import fp
from .fusion import FusionSystem, OrbitCategory
from .group import CapExceeded

CHAIN_CAP = 2_000_000


@dataclass
class CochainComplex:
    category: object
    functor: object
    max_degree: int
    chains: list  # chains[n] = list of (c0, morphism tuple)
    offsets: list  # offsets[n][k] = start of chain k's block in C^n
    dims: list  # dim C^n
    diffs: list  # diffs[n] = (rows, cols, triplets) for d^n: C^n -> C^{n+1}
    p: int

    def chain_counts(self) -> list:
        return [len(c) for c in self.chains]


@dataclass
class CohomologyReport:
    dims: list
    chain_counts: list
    cochain_dims: list
    ranks: list
    n: int | None = None
    seconds: float = 0.0
    extra: dict = field(default_factory=dict)

    def lim(self, i: int) -> int:
        return self.dims[i]

    def vanishes_from(self, start: int) -> bool:
        return all(d == 0 for d in self.dims[start:])

    def as_dict(self) -> dict:
        return {"n": self.n, "dims": {f"lim{i}": d for i, d in enumerate(self.dims)},
                "chain_counts": self.chain_counts}


def _non_identity(cat) -> dict:
    """``{a: [(b, i), ...]}`` for every non-identity morphism class out of ``a``."""
    out = {}
    for a in range(cat.n):
        ida = cat.identity(a)
        lst = []
        for b in range(cat.n):
            for i in range(cat.hom_count(a, b)):
                if a == b and i == ida:
                    continue
                lst.append((b, i))
        out[a] = lst
    return out


def enumerate_chains(cat, max_len: int, cap: int = CHAIN_CAP, dims=None) -> list:
    """Chains of non-identity morphisms, grouped by length ``0 .. max_len``.

    A chain is ``(c0, ((c0, c1, i1), (c1, c2, i2), ...))``.  Chains starting at
    objects with ``dims[c0] == 0`` are still enumerated since they feed longer
    chains, but callers may skip them when building cochains.
    """
    nonid = _non_identity(cat)
    levels = [[(a, ()) for a in range(cat.n)]]
    total = cat.n
    # chains are extended on the right; keep the last object for speed
    last = [a for a in range(cat.n)]
    for _ in range(max_len):
        nxt, nlast = [], []
        for (c0, ms), e in zip(levels[-1], last):
            for b, i in nonid[e]:
                nxt.append((c0, ms + ((e, b, i),)))
                nlast.append(b)
        total += len(nxt)
        if total > cap:
            raise CapExceeded(f"chain count exceeds cap {cap}: per degree "
                              f"{[len(l) for l in levels] + [len(nxt)]}")
        levels.append(nxt)
        last = nlast
    return levels


def build_complex(cat, N, max_degree: int, cap: int = CHAIN_CAP) -> CochainComplex:
    """Normalized cochain complex up to ``d^{max_degree}``."""
    p = N.p
    dims_obj = N.dims
    chains = enumerate_chains(cat, max_degree + 1, cap)
    offsets, dims = [], []
    index = []
    for lvl in chains:
        off, o = [], 0
        for c0, _ in lvl:
            off.append(o)
            o += dims_obj[c0]
        offsets.append(off)
        dims.append(o)
        index.append({c: k for k, c in enumerate(lvl)})
    total_dim = sum(dims)
    if total_dim > cap:
        raise CapExceeded(f"cochain dimension {total_dim} exceeds cap {cap}")
    ident = [cat.identity(a) for a in range(cat.n)]
    diffs = []
    for n in range(max_degree + 1):
        trip_r, trip_c, trip_v = [], [], []
        idx_n = index[n]
        off_n = offsets[n]

        def add_block(r0, c0_, mat, sign):
            mat = np.asarray(mat)
            rr, cc = np.nonzero(mat)
            if rr.size:
                trip_r.append(rr + r0)
                trip_c.append(cc + c0_)
                trip_v.append((sign * mat[rr, cc]) % p)

        def add_eye(r0, c0_, d, sign):
            if d:
                ar = np.arange(d)
                trip_r.append(ar + r0)
                trip_c.append(ar + c0_)
                trip_v.append(np.full(d, sign % p, dtype=np.int64))

        for k, (c0, ms) in enumerate(chains[n + 1]):
            d0 = dims_obj[c0]
            if d0 == 0:
                continue
            r0 = offsets[n + 1][k]
            # face 0
            f1 = ms[0]
            c1 = f1[1]
            tail = (c1, ms[1:])
            if dims_obj[c1]:
                add_block(r0, off_n[idx_n[tail]], N.contra[f1], 1)
            # inner faces
            for i in range(1, n + 1):
                f, g = ms[i - 1], ms[i]
                comp = cat.compose(g, f)
                if comp[0] == comp[1] and comp[2] == ident[comp[0]]:
                    continue
                ch = (c0, ms[:i - 1] + (comp,) + ms[i + 1:])
                add_eye(r0, off_n[idx_n[ch]], d0, (-1) ** i)
            # last face
            ch = (c0, ms[:-1])
            add_eye(r0, off_n[idx_n[ch]], d0, (-1) ** (n + 1))
        if trip_r:
            trips = (np.concatenate(trip_r), np.concatenate(trip_c), np.concatenate(trip_v))
        else:
            z = np.zeros(0, dtype=np.int64)
            trips = (z, z, z)
        diffs.append((dims[n + 1], dims[n], trips))
    return CochainComplex(cat, N, max_degree, chains, offsets, dims, diffs, p)


def _to_dense(rows, cols, trips, p):
    m = fp.zeros(rows, cols)
    r, c, v = trips
    np.add.at(m, (r, c), v)
    return m % p


def _rank(rows, cols, trips, p) -> int:
    r, c, v = trips
    if rows == 0 or cols == 0 or r.size == 0:
        return 0
    if min(rows, cols) <= fp.DENSE_CUTOFF and rows * cols <= fp.DENSE_MAX_ENTRIES:
        return fp.rank(_to_dense(rows, cols, trips, p), p)
    return fp.sparse_rank(zip(r.tolist(), c.tolist(), v.tolist()), rows, cols, p)


def check_d_squared(cx: CochainComplex) -> bool:
    """``d^{n+1} d^n = 0`` for every consecutive pair (dense or dict products)."""
    p = cx.p
    for n in range(len(cx.diffs) - 1):
        r1, c1, t1 = cx.diffs[n]
        r2, c2, t2 = cx.diffs[n + 1]
        if r1 * c1 <= fp.DENSE_MAX_ENTRIES and r2 * c2 <= fp.DENSE_MAX_ENTRIES:
            prod = fp.matmul(_to_dense(r2, c2, t2, p), _to_dense(r1, c1, t1, p), p)
            if prod.any():
                return False
            continue
        # sparse product
        cols_of = {}
        for r, c, v in zip(*map(lambda a: a.tolist(), t1)):
            cols_of.setdefault(r, []).append((c, v))
        acc = {}
        for r, c, v in zip(*map(lambda a: a.tolist(), t2)):
            for cc, vv in cols_of.get(c, ()):
                key = (r, cc)
                acc[key] = (acc.get(key, 0) + v * vv) % p
        if any(acc.values()):
            return False
    return True


def cohomology(cx: CochainComplex) -> CohomologyReport:
    """Dimensions of ``H^i`` for ``0 <= i <= max_degree``."""
    p = cx.p
    ranks = [_rank(rows, cols, trips, p) for rows, cols, trips in cx.diffs]
    dims = []
    for i in range(cx.max_degree + 1):
        prev = ranks[i - 1] if i > 0 else 0
        dims.append(cx.dims[i] - ranks[i] - prev)
    return CohomologyReport(dims, cx.chain_counts(), cx.dims, ranks)


def higher_limits(cat, N, max_degree: int, cap: int = CHAIN_CAP, check: bool = False) -> CohomologyReport:
    t0 = time.perf_counter()
    cx = build_complex(cat, N, max_degree, cap)
    if check and not check_d_squared(cx):
        raise AssertionError("d o d != 0")
    rep = cohomology(cx)
    rep.seconds = time.perf_counter() - t0
    return rep


def lim0_direct(cat, N) -> int:
    """Dimension of the inverse limit as compatible families (equalizer kernel)."""
    p = N.p
    offs = np.concatenate([[0], np.cumsum(N.dims)]).astype(int)
    tot = int(offs[-1])
    rows = []
    for a in range(cat.n):
        for b in range(cat.n):
            for i in range(cat.hom_count(a, b)):
                m = N.contra[(a, b, i)]
                blk = fp.zeros(N.dims[a], tot)
                blk[:, offs[b]:offs[b + 1]] += m
                blk[:, offs[a]:offs[a + 1]] -= fp.eye(N.dims[a])
                rows.append(blk % p)
    if tot == 0:
        return 0
    if not rows:
        return tot
    return fp.kernel(np.vstack(rows), p).dim


def chain_bound(orbit: OrbitCategory) -> int:
    """Longest strict chain of subgroups in the category, checked against ``log_p(|S|/|Q|)``.

    For the centric orbit category both values must agree; the formula uses a
    centric subgroup ``Q`` of minimal order.
    """
    n = orbit.chain_bound()
    if orbit.centric_only:
        fs = orbit.fs
        qmin = min(orbit.obj_sub(a).order for a in range(orbit.n))
        formula = round(math.log(fs.S.order // qmin, fs.p))
        if formula != n:
            raise AssertionError(f"chain bound mismatch: search {n}, formula {formula}")
    return n


def sharpness_report(orbit: OrbitCategory, N, max_degree: int | None = None,
                     cap: int = CHAIN_CAP) -> dict:
    """``lim^i`` over the category for ``i <= max_degree`` (default ``n + 3``); pass iff ``i >= 1`` vanish."""
    n = chain_bound(orbit)
    D = max_degree if max_degree is not None else n + 3
    rep = higher_limits(orbit, N, D, cap)
    rep.n = n
    out = rep.as_dict()
    out["pass"] = all(d == 0 for d in rep.dims[1:])
    out["seconds"] = round(rep.seconds, 3)
    return out


# ---------------------------------------------------------------------------
# non-skeletal orbit category (validation of the skeleton reduction)
# ---------------------------------------------------------------------------

class FullOrbitCategory:
    """All subgroups of the filter as objects; morphisms are ``Inn(Q)``-orbits.

    Built directly from ``Hom_F`` by orbit enumeration, independent of the
    skeleton's coset bookkeeping.
    """

    def __init__(self, fs: FusionSystem, centric_only: bool = False):
        self.fs = fs
        G = fs.G
        self.objects = [i for i in range(len(fs.subs)) if not centric_only or fs.is_centric(i)]
        self.n = len(self.objects)
        self._homs = {}
        self._key = {}
        for a, P in enumerate(self.objects):
            for b, Q in enumerate(self.objects):
                Qs = fs.subs[Q]
                qrows = np.stack([G.conj_row(x) for x in Qs.elements.tolist()])
                reps, keys = [], {}
                for m in fs.homs(P, Q):
                    orb = qrows[:, m]
                    canon = orb[np.lexsort(orb.T[::-1])[0]]
                    k = canon.tobytes()
                    if k not in keys:
                        keys[k] = len(reps)
                        reps.append(canon.astype(np.int64))
                self._homs[(a, b)] = reps
                self._key[(a, b)] = (keys, qrows)
        self._compose = {}

    def hom_count(self, a, b) -> int:
        return len(self._homs[(a, b)])

    def classify(self, a, b, img) -> int:
        keys, qrows = self._key[(a, b)]
        orb = qrows[:, np.asarray(img, dtype=np.int64)]
        canon = orb[np.lexsort(orb.T[::-1])[0]]
        return keys[canon.tobytes()]

    def identity(self, a) -> int:
        return self.classify(a, a, self.fs.subs[self.objects[a]].elements)

    def compose(self, g, f):
        key = (f, g)
        if key in self._compose:
            return self._compose[key]
        a, b, i = f
        _, c, j = g
        fi = self._homs[(a, b)][i]
        gj = self._homs[(b, c)][j]
        img = gj[self.fs.subs[self.objects[b]].pos[fi]]
        out = (a, c, self.classify(a, c, img))
        self._compose[key] = out
        return out


class TransportedFunctor:
    """A functor on the skeleton pulled back to a :class:`FullOrbitCategory`."""

    def __init__(self, full: FullOrbitCategory, skeleton: OrbitCategory, N):
        self.p = N.p
        self.dims = [N.dims[skeleton.obj_of(P)] for P in full.objects]
        self.contra = {}
        for (a, b), reps in full._homs.items():
            P, Q = full.objects[a], full.objects[b]
            for i, m in enumerate(reps):
                self.contra[(a, b, i)] = N.contra[skeleton.class_of_map(P, Q, m)]
