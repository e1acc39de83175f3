"""JSON file formats for groups, fusion systems and contravariant functors.

Every document carries ``"schema": 1``.  A group is given by one of

    {"named": "d8"}
    {"permutations": {"degree": 4, "generators": [[1, 2, 3, 0], [3, 2, 1, 0]]}}
    {"cayley": [[0, 1, ...], ...]}

Elements are referred to by permutation image lists (permutation groups) or
by row index (Cayley tables).  A fusion system is

    {"named": "s4"}
    {"group": {...}, "kind": "inner" | "ambient" | "generated",
     "sylow": [elements...], "maps": [{"generators": [...], "images": [...]}]}

``sylow`` is optional (a Sylow subgroup is chosen when absent).  A functor file
holds ``{"fusion_system": {...}, "functor": {"dims": [...], "morphisms":
[{"src": a, "tgt": b, "index": i, "matrix": [[...]]}]}}`` over the centric
orbit category, objects and morphism indices in the order of
:class:`OrbitCategory` (``dump_functor`` writes a template).
"""
from __future__ import annotations

import json

import numpy as np

from .fusion import FusionSystem, OrbitCategory, build_ambient, build_generated, build_inner, extend_hom
from .group import Group, prime_of, sylow_subgroup
from .mackey import ContravariantFunctor

SCHEMA = 1


class InputError(ValueError):
    """Malformed or mathematically invalid input file."""


def read_json(path) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError(f"{path}: top level must be an object")
    if doc.get("schema", SCHEMA) != SCHEMA:
        raise InputError(f"{path}: unsupported schema {doc.get('schema')!r}")
    return doc


def load_group(obj: dict) -> Group:
    from .constructions import named_group
    try:
        if "named" in obj:
            return named_group(obj["named"])
        if "permutations" in obj:
            spec = obj["permutations"]
            return Group.from_permutations(int(spec["degree"]), spec["generators"],
                                           name=obj.get("name", ""))
        if "cayley" in obj:
            return Group.from_cayley(obj["cayley"], name=obj.get("name", ""))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad group description: {exc}") from exc
    raise InputError("group needs one of 'named', 'permutations', 'cayley'")


def element_id(G: Group, e) -> int:
    if isinstance(e, int):
        if not 0 <= e < G.order:
            raise InputError(f"element id {e} out of range")
        return e
    if G.labels is None:
        raise InputError("elements of a Cayley-table group are given by row index")
    lookup = getattr(G, "_label_index", None)
    if lookup is None:
        lookup = {tuple(lab): i for i, lab in enumerate(G.labels)}
        G._label_index = lookup
    try:
        return lookup[tuple(int(x) for x in e)]
    except (KeyError, TypeError, ValueError):
        raise InputError(f"{e!r} is not an element of the group") from None


def load_fusion_system(obj: dict) -> FusionSystem:
    from .constructions import named_system
    if "named" in obj:
        try:
            return named_system(obj["named"])
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    if "group" not in obj:
        raise InputError("fusion system needs 'named' or 'group'")
    G = load_group(obj["group"])
    kind = obj.get("kind", "inner")
    if "sylow" in obj:
        S = G.generate([element_id(G, e) for e in obj["sylow"]])
    elif kind == "ambient":
        S = sylow_subgroup(G, int(obj.get("p") or _smallest_prime(G.order)))
    else:
        S = G.whole
    name = obj.get("name", "")
    try:
        if kind == "inner":
            prime_of(S.order)
            return build_inner(G, S, name=name)
        if kind == "ambient":
            return build_ambient(G, S, name=name)
        if kind == "generated":
            extra = []
            for m in obj.get("maps", []):
                gens = [element_id(G, e) for e in m["generators"]]
                imgs = [element_id(G, e) for e in m["images"]]
                hom = extend_hom(G, gens, imgs)
                if hom is None:
                    raise InputError(f"map {m} does not extend to a homomorphism")
                extra.append(hom)
            return build_generated(G, S, extra, name=name)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad fusion system: {exc}") from exc
    raise InputError(f"unknown fusion system kind {kind!r}")


def _smallest_prime(n: int) -> int:
    for q in range(2, n + 1):
        if n % q == 0:
            return q
    raise InputError("trivial group has no Sylow subgroup")


def functor_to_json(N) -> dict:
    orbit = N.orbit
    mors = []
    for f in orbit.morphisms():
        key = (f.src, f.tgt, f.index)
        mors.append({"src": f.src, "tgt": f.tgt, "index": f.index,
                     "matrix": np.asarray(N.contra[key]).tolist()})
    return {"dims": list(N.dims), "morphisms": mors}


def load_functor(obj: dict, orbit: OrbitCategory) -> ContravariantFunctor:
    """Parse and validate; raises :class:`InputError` unless the data is a functor."""
    p = orbit.fs.p
    try:
        dims = [int(d) for d in obj["dims"]]
        if len(dims) != orbit.n or min(dims, default=0) < 0:
            raise InputError(f"expected {orbit.n} nonnegative dims")
        contra = {}
        for m in obj["morphisms"]:
            key = (int(m["src"]), int(m["tgt"]), int(m["index"]))
            a, b, i = key
            if not (0 <= a < orbit.n and 0 <= b < orbit.n and 0 <= i < orbit.hom_count(a, b)):
                raise InputError(f"no morphism {key}")
            mat = np.array(m["matrix"], dtype=np.int64).reshape(dims[a], dims[b]) % p
            contra[key] = mat
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad functor: {exc}") from exc
    missing = [f for f in orbit.morphisms() if (f.src, f.tgt, f.index) not in contra]
    if missing:
        f = missing[0]
        raise InputError(f"missing matrix for morphism {(f.src, f.tgt, f.index)}")
    N = ContravariantFunctor(orbit, dims, contra, name=obj.get("name", "file"))
    bad = N.check_functor()
    if bad:
        raise InputError(f"not a functor: {len(bad)} violations, first {bad[0]}")
    return N
