"""Finite groups given by a multiplication table over dense element ids.

Element ``0`` is always the identity.  Subgroups are stored as boolean
membership vectors plus the sorted array of member ids; the bytes of the
packed membership vector serve as a hashable key.
"""
from __future__ import annotations

from collections import deque
from functools import cached_property

import numpy as np

DEFAULT_CAP = 1 << 13


class CapExceeded(RuntimeError):
    """A size cap (group order, closure size, chain count) was exceeded."""


class Group:
    """A finite group as a complete Cayley table."""

    def __init__(self, table, name: str = "", check: bool = True, labels=None):
        mul = np.asarray(table, dtype=np.int32)
        n = mul.shape[0]
        if mul.shape != (n, n):
            raise ValueError("Cayley table must be square")
        self.mul = mul
        self.order = n
        self.name = name
        self.labels = labels
        if check:
            self._check()
        self.id_elt = 0
        inv = np.empty(n, dtype=np.int32)
        rows, cols = np.nonzero(mul == 0)
        inv[rows] = cols
        self.inv = inv

    def _check(self):
        n = self.order
        ar = np.arange(n)
        if not (np.array_equal(self.mul[0], ar) and np.array_equal(self.mul[:, 0], ar)):
            raise ValueError("element 0 must be the identity")
        srt = np.sort(self.mul, axis=1)
        if not (srt == ar).all() or not (np.sort(self.mul, axis=0) == ar[:, None]).all():
            raise ValueError("table is not a Latin square")
        if n <= 128:
            m = self.mul.astype(np.int64)
            # (ab)c == a(bc) for all triples at once
            if not np.array_equal(m[m], m[:, m]):
                raise ValueError("table is not associative")
        else:
            rng = np.random.default_rng(0)
            a, b, c = rng.integers(0, n, size=(3, 20000))
            if not np.array_equal(self.mul[self.mul[a, b], c], self.mul[a, self.mul[b, c]]):
                raise ValueError("table is not associative")

    # -- construction --------------------------------------------------------

    @classmethod
    def from_permutations(cls, degree: int, generators, cap: int = DEFAULT_CAP, name: str = ""):
        """Group generated by permutations of ``range(degree)`` (image lists)."""
        gens = [tuple(int(x) for x in g) for g in generators]
        for g in gens:
            if sorted(g) != list(range(degree)):
                raise ValueError(f"not a permutation of range({degree}): {g}")
        ident = tuple(range(degree))
        elems = [ident]
        index = {ident: 0}
        queue = deque([ident])
        # BFS from the identity, right-multiplying by generators in order
        while queue:
            x = queue.popleft()
            for g in gens:
                y = tuple(x[g[i]] for i in range(degree))
                if y not in index:
                    if len(elems) >= cap:
                        raise CapExceeded(f"group order exceeds cap {cap}")
                    index[y] = len(elems)
                    elems.append(y)
                    queue.append(y)
        n = len(elems)
        arr = np.array(elems, dtype=np.int64).reshape(n, degree)
        keys = np.ascontiguousarray(arr).view(np.dtype((np.void, 8 * degree))).ravel()
        order = np.argsort(keys)
        skeys = keys[order]
        table = np.empty((n, n), dtype=np.int32)
        # composition convention: (x*y)(i) = x(y(i))
        for a in range(n):
            prod = np.ascontiguousarray(arr[a][arr])
            pk = prod.view(np.dtype((np.void, 8 * degree))).ravel()
            table[a] = order[np.searchsorted(skeys, pk)]
        g = cls(table, name=name, check=False, labels=elems)
        g.generator_ids = [index[gg] for gg in gens]
        return g

    @classmethod
    def from_elements(cls, elements, multiply, name: str = "", identity=None):
        """Cayley table from an explicit element list and a product function."""
        elems = list(elements)
        if identity is not None:
            i = elems.index(identity)
            elems[0], elems[i] = elems[i], elems[0]
        index = {e: i for i, e in enumerate(elems)}
        n = len(elems)
        table = np.empty((n, n), dtype=np.int32)
        for a, x in enumerate(elems):
            for b, y in enumerate(elems):
                table[a, b] = index[multiply(x, y)]
        return cls(table, name=name, check=n <= 256, labels=elems)

    @classmethod
    def from_cayley(cls, table, name: str = ""):
        return cls(table, name=name, check=True)

    # -- elementwise ---------------------------------------------------------

    def mult(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def power(self, a: int, k: int) -> int:
        r = 0
        base = a
        k = int(k)
        if k < 0:
            base = int(self.inv[a])
            k = -k
        while k:
            if k & 1:
                r = int(self.mul[r, base])
            base = int(self.mul[base, base])
            k >>= 1
        return r

    @cached_property
    def elt_orders(self) -> np.ndarray:
        n = self.order
        orders = np.ones(n, dtype=np.int64)
        cur = np.arange(n)
        alive = cur != 0
        k = 1
        while alive.any():
            k += 1
            cur = self.mul[cur, np.arange(n)]
            done = alive & (cur == 0)
            orders[done] = k
            alive &= ~done
        orders[0] = 1
        return orders

    @cached_property
    def conj(self) -> np.ndarray:
        """``conj[g, x] = g x g^-1``."""
        n = self.order
        if n > 4096:
            raise CapExceeded("conjugation table too large; use conj_row")
        gx = self.mul  # gx[g, x] = g x
        return self.mul[gx, self.inv[:, None]]

    def conj_row(self, g: int) -> np.ndarray:
        if self.order <= 4096:
            return self.conj[g]
        return self.mul[self.mul[g], self.inv[g]]

    def commutator(self, a: int, b: int) -> int:
        return int(self.mul[self.mul[a, b], self.mul[self.inv[a], self.inv[b]]])

    @cached_property
    def prime_factors(self) -> list:
        n, out, d = self.order, [], 2
        while d * d <= n:
            while n % d == 0:
                if d not in out:
                    out.append(d)
                n //= d
            d += 1
        if n > 1 and n not in out:
            out.append(n)
        return out

    def is_p_group(self) -> bool:
        return len(self.prime_factors) <= 1

    # -- subgroups -----------------------------------------------------------

    def subgroup(self, elements, generators=None) -> "Subgroup":
        return Subgroup(self, elements, generators)

    def generate(self, gens) -> "Subgroup":
        gens = [int(g) for g in gens]
        members = np.zeros(self.order, dtype=bool)
        members[0] = True
        frontier = [0]
        gens_nt = [g for g in gens if g != 0]
        elems = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens_nt:
                    y = int(self.mul[x, g])
                    if not members[y]:
                        members[y] = True
                        elems.append(y)
                        nxt.append(y)
            frontier = nxt
        return Subgroup(self, np.nonzero(members)[0], gens_nt)

    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup(self, np.arange(self.order), getattr(self, "generator_ids", None))

    @cached_property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, [0], [])

    def __repr__(self):
        return f"Group({self.name or '?'}, order={self.order})"


class Subgroup:
    """A subgroup of a :class:`Group` (membership vector + sorted ids)."""

    __slots__ = ("parent", "members", "elements", "key", "order", "_gens", "_index",
                 "_pos", "__weakref__", "idx")

    def __init__(self, parent: Group, elements, generators=None):
        self.parent = parent
        el = np.unique(np.asarray(elements, dtype=np.int64))
        self.elements = el
        m = np.zeros(parent.order, dtype=bool)
        m[el] = True
        self.members = m
        self.key = np.packbits(m).tobytes()
        self.order = int(el.size)
        self._gens = None if generators is None else [int(g) for g in generators]
        self._index = None
        self._pos = None
        self.idx = None

    @classmethod
    def from_mask(cls, parent, members, generators=None):
        return cls(parent, np.nonzero(members)[0], generators)

    def __hash__(self):
        return hash(self.key)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.key == other.key

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return (self.order, tuple(self.elements.tolist()))

    def __len__(self):
        return self.order

    def __contains__(self, x) -> bool:
        return bool(self.members[int(x)])

    def __le__(self, other: "Subgroup") -> bool:
        return self.order <= other.order and bool(other.members[self.elements].all())

    def __repr__(self):
        g = self.generators
        return f"<Subgroup order={self.order} gens={g}>"

    @property
    def index(self) -> dict:
        if self._index is None:
            self._index = {int(x): i for i, x in enumerate(self.elements)}
        return self._index

    @property
    def pos(self) -> np.ndarray:
        """``pos[x]`` is the position of ``x`` in ``elements`` (``-1`` outside)."""
        if self._pos is None:
            pos = np.full(self.parent.order, -1, dtype=np.int64)
            pos[self.elements] = np.arange(self.order)
            self._pos = pos
        return self._pos

    @property
    def generators(self) -> list:
        if self._gens is None:
            self._gens = minimal_generators(self)
        return self._gens

    def intersect(self, other: "Subgroup") -> "Subgroup":
        return Subgroup.from_mask(self.parent, self.members & other.members)

    def conjugate(self, g: int) -> "Subgroup":
        """``g H g^-1``."""
        row = self.parent.conj_row(int(g))
        gens = None if self._gens is None else [int(row[x]) for x in self._gens]
        return Subgroup(self.parent, row[self.elements], gens)

    def is_normal_in(self, other: "Subgroup") -> bool:
        return all(self.conjugate(g) == self for g in other.generators)

    def contains_all(self, elts) -> bool:
        return bool(self.members[np.asarray(elts, dtype=np.int64)].all())


def _greedy_generators(h: Subgroup) -> list:
    g = h.parent
    gens = []
    cur = np.zeros(g.order, dtype=bool)
    cur[0] = True
    for x in h.elements.tolist():
        if not cur[x]:
            gens.append(x)
            cur = g.generate(gens).members
    return gens


def minimal_generators(h: Subgroup) -> list:
    """A short generating list, greedy by descending element order then id.

    For a p-group each new generator is taken outside the subgroup generated
    by the Frattini subgroup and the earlier choices, so the list has the
    minimal length ``d(h)`` (Burnside basis theorem).
    """
    g = h.parent
    if h.order == 1:
        return []
    orders = g.elt_orders[h.elements]
    cand = sorted(zip((-orders).tolist(), h.elements.tolist()))
    base = []
    if len(_prime_factors(h.order)) == 1:
        base = frattini(h).elements.tolist()
    gens = []
    cur = g.generate(base).members if base else np.eye(1, g.order, 0, dtype=bool)[0]
    for _, x in cand:
        if cur[x]:
            continue
        gens.append(x)
        cur = g.generate(base + gens).members
        if cur.sum() == h.order:
            break
    return gens


# ---------------------------------------------------------------------------
# centralizers, normalizers
# ---------------------------------------------------------------------------

def centralizer(G: Group, H: Subgroup, ambient: Subgroup | None = None) -> Subgroup:
    amb = ambient if ambient is not None else G.whole
    gens = H.generators
    if not gens:
        return amb
    cand = amb.elements
    ok = np.ones(cand.size, dtype=bool)
    for h in gens:
        ok &= G.mul[cand, h] == G.mul[h, cand]
    return Subgroup(G, cand[ok])


def normalizer(G: Group, H: Subgroup, ambient: Subgroup | None = None) -> Subgroup:
    amb = ambient if ambient is not None else G.whole
    gens = H.generators
    if not gens:
        return amb
    cand = amb.elements
    ok = np.ones(cand.size, dtype=bool)
    for h in gens:
        # g h g^-1 in H
        ghg = G.mul[G.mul[cand, h], G.inv[cand]]
        ok &= H.members[ghg]
    return Subgroup(G, cand[ok])


def center(G: Group, ambient: Subgroup | None = None) -> Subgroup:
    amb = ambient if ambient is not None else G.whole
    return centralizer(G, amb, amb)


def frattini(H: Subgroup) -> Subgroup:
    """``[H,H] H^p`` for a p-group ``H`` (generated by commutators and p-th powers)."""
    G = H.parent
    if H.order == 1:
        return H
    ps = G.prime_factors if not H.order else _prime_factors(H.order)
    if len(ps) != 1:
        raise ValueError("Frattini subgroup only implemented for p-groups")
    p = ps[0]
    gens = set()
    el = H.elements.tolist()
    for x in el:
        gens.add(G.power(x, p))
    hg = H._gens if H._gens is not None else _greedy_generators(H)
    for a in hg:
        for b in hg:
            gens.add(G.commutator(a, b))
    sub = G.generate(sorted(gens))
    # normal closure in H
    while True:
        conj = set(sub.elements.tolist())
        grow = False
        for h in hg:
            c = sub.conjugate(h)
            if not c <= sub:
                grow = True
                conj.update(c.elements.tolist())
        if not grow:
            return Subgroup(G, sub.elements)
        sub = G.generate(sorted(conj))


def _prime_factors(n: int) -> list:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_of(n: int) -> int:
    ps = _prime_factors(n)
    if len(ps) != 1:
        raise ValueError(f"{n} is not a prime power")
    return ps[0]


def derived_subgroup(H: Subgroup) -> Subgroup:
    G = H.parent
    comms = {G.commutator(a, b) for a in H.elements.tolist() for b in H.generators}
    sub = G.generate(sorted(comms))
    while True:
        ext = set(sub.elements.tolist())
        for h in H.generators:
            ext.update(sub.conjugate(h).elements.tolist())
        if len(ext) == sub.order:
            return sub
        sub = G.generate(sorted(ext))


def is_abelian(H: Subgroup) -> bool:
    G = H.parent
    gens = H.generators
    return all(G.mul[a, b] == G.mul[b, a] for a in gens for b in gens)


def exponent(H: Subgroup) -> int:
    from math import lcm
    out = 1
    for o in H.parent.elt_orders[H.elements].tolist():
        out = lcm(out, o)
    return out


# ---------------------------------------------------------------------------
# subgroup enumeration
# ---------------------------------------------------------------------------

def enumerate_subgroups(G: Group, ambient: Subgroup | None = None, cap: int = DEFAULT_CAP,
                        max_count: int = 200000) -> list:
    """All subgroups of ``ambient`` (default ``G``), sorted by (order, elements).

    For p-groups every subgroup is reached from the trivial group by
    repeatedly adjoining an element that normalizes the current subgroup and
    whose p-th power lies in it.  Other groups use closure of
    ``<H, g>`` over all cyclic extensions.
    """
    amb = ambient if ambient is not None else G.whole
    if amb.order > cap:
        raise CapExceeded(f"order {amb.order} exceeds cap {cap}")
    ps = _prime_factors(amb.order)
    found: dict[bytes, Subgroup] = {}
    triv = Subgroup(G, [0], [])
    found[triv.key] = triv
    layer = [triv]
    if len(ps) <= 1:
        p = ps[0] if ps else 1
        while layer:
            nxt = []
            for H in layer:
                N = normalizer(G, H, amb)
                seen = H.members.copy()
                for g in N.elements.tolist():
                    if seen[g]:
                        continue
                    if not H.members[G.power(g, p)]:
                        continue
                    cosets = [H.elements]
                    gi = g
                    for _ in range(p - 1):
                        cosets.append(G.mul[H.elements, gi])
                        gi = int(G.mul[gi, g])
                    new = Subgroup(G, np.concatenate(cosets))
                    seen |= new.members
                    if new.key not in found:
                        hg = H._gens if H._gens is not None else None
                        new._gens = None if hg is None else hg + [g]
                        found[new.key] = new
                        nxt.append(new)
                        if len(found) > max_count:
                            raise CapExceeded("too many subgroups")
            layer = nxt
    else:
        els = amb.elements.tolist()
        while layer:
            nxt = []
            for H in layer:
                seen = H.members.copy()
                for g in els:
                    if seen[g]:
                        continue
                    new = G.generate(H.generators + [g])
                    seen[g] = True
                    if new.key not in found:
                        found[new.key] = new
                        nxt.append(new)
            layer = nxt
    subs = sorted(found.values(), key=Subgroup.sort_key)
    for i, s in enumerate(subs):
        s.idx = i
    return subs


def exhaustive_subgroups(G: Group) -> list:
    """Oracle: closure of every subset generated by at most three elements (small groups)."""
    found = {}
    els = list(range(G.order))
    for a in els:
        for b in els:
            H = G.generate([a, b])
            found[H.key] = H
    more = dict(found)
    for H in list(found.values()):
        for c in els:
            if not H.members[c]:
                K = G.generate(H.generators + [c])
                more[K.key] = K
    return sorted(more.values(), key=Subgroup.sort_key)


def conjugacy_classes_of_subgroups(G: Group, subgroups, acting: Subgroup | None = None) -> list:
    """Partition ``subgroups`` into ``acting``-conjugacy classes.

    Returns a list of classes (lists of subgroups), each sorted with its
    canonical (least) representative first; classes ordered by representative.
    """
    act = acting if acting is not None else G.whole
    by_key = {H.key: H for H in subgroups}
    seen = set()
    classes = []
    for H in sorted(subgroups, key=Subgroup.sort_key):
        if H.key in seen:
            continue
        orbit = {H.key: H}
        frontier = [H]
        while frontier:
            nxt = []
            for K in frontier:
                for g in act.generators:
                    C = K.conjugate(g)
                    if C.key not in orbit:
                        orbit[C.key] = by_key.get(C.key, C)
                        nxt.append(orbit[C.key])
            frontier = nxt
        members = sorted(orbit.values(), key=Subgroup.sort_key)
        seen.update(orbit)
        classes.append(members)
    return classes


def conjugator(G: Group, A: Subgroup, B: Subgroup, acting: Subgroup) -> int | None:
    """Least ``g`` in ``acting`` with ``g A g^-1 = B``."""
    if A.order != B.order:
        return None
    gens = A.generators
    for g in acting.elements.tolist():
        row = G.conj_row(g)
        if all(B.members[row[x]] for x in gens):
            return g
    return None


# ---------------------------------------------------------------------------
# cosets
# ---------------------------------------------------------------------------

def left_cosets(G: Group, H: Subgroup, ambient: Subgroup) -> list:
    """Representatives ``t`` of ``ambient / H`` (cosets ``tH``), least id per coset."""
    seen = np.zeros(G.order, dtype=bool)
    reps = []
    for t in ambient.elements.tolist():
        if seen[t]:
            continue
        reps.append(t)
        seen[G.mul[t, H.elements]] = True
    return reps


def right_cosets(G: Group, H: Subgroup, ambient: Subgroup) -> list:
    """Representatives ``t`` of ``H \\ ambient`` (cosets ``Ht``)."""
    seen = np.zeros(G.order, dtype=bool)
    reps = []
    for t in ambient.elements.tolist():
        if seen[t]:
            continue
        reps.append(t)
        seen[G.mul[H.elements, t]] = True
    return reps


def double_cosets(G: Group, Q: Subgroup, P: Subgroup, ambient: Subgroup) -> list:
    """One representative (least id) of each double coset ``Q x P`` in ``ambient``."""
    seen = np.zeros(G.order, dtype=bool)
    reps = []
    qe, pe = Q.elements, P.elements
    for x in ambient.elements.tolist():
        if seen[x]:
            continue
        reps.append(x)
        qx = G.mul[qe, x]
        seen[G.mul[qx[:, None], pe[None, :]].ravel()] = True
    return reps


def double_coset(G: Group, Q: Subgroup, x: int, P: Subgroup) -> np.ndarray:
    qx = G.mul[Q.elements, x]
    return np.unique(G.mul[qx[:, None], P.elements[None, :]].ravel())


def n_g_q_h(G: Group, Q: Subgroup, H: Subgroup, ambient: Subgroup | None = None):
    """``N(Q,H) = {x : x Q x^-1 <= H}`` as a sorted id array, and ``|N(Q,H) : H|``."""
    amb = ambient if ambient is not None else G.whole
    cand = amb.elements
    ok = np.ones(cand.size, dtype=bool)
    for q in Q.generators:
        ok &= H.members[G.mul[G.mul[cand, q], G.inv[cand]]]
    elts = cand[ok]
    if elts.size % H.order:
        raise AssertionError("N(Q,H) is not a union of H-cosets")
    return elts, elts.size // H.order


def orbit_counting_double_cosets(G: Group, Q: Subgroup, P: Subgroup, ambient: Subgroup) -> int:
    """Oracle: number of ``Q x P`` classes by partitioning all elements (union-find)."""
    parent = {x: x for x in ambient.elements.tolist()}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x in list(parent):
        for q in Q.generators:
            a, b = find(x), find(int(G.mul[q, x]))
            if a != b:
                parent[a] = b
        for y in P.generators:
            a, b = find(x), find(int(G.mul[x, y]))
            if a != b:
                parent[a] = b
    return len({find(x) for x in parent})


def sylow_subgroup(G: Group, p: int) -> Subgroup:
    """A Sylow p-subgroup, grown greedily inside normalizers."""
    n = G.order
    target = 1
    while n % p == 0:
        n //= p
        target *= p
    P = G.trivial
    while P.order < target:
        N = normalizer(G, P)
        grew = False
        for g in N.elements.tolist():
            if P.members[g]:
                continue
            o = int(G.elt_orders[g])
            if o & (o - 1) if p == 2 else _prime_factors(o) != [p]:
                continue
            K = G.generate(P.generators + [g])
            if K.order <= target and _prime_factors(K.order) == [p]:
                P = K
                grew = True
                break
        if not grew:
            raise AssertionError("failed to grow Sylow subgroup")
    return P


def is_sylow(G: Group, S: Subgroup, p: int) -> bool:
    n = G.order
    while n % p == 0:
        n //= p
    return S.order * n == G.order and (S.order == 1 or _prime_factors(S.order) == [p])
