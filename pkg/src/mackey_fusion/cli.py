"""Command-line entry point ``mackey-fusion``.

Exit codes: 0 pass, 1 mathematical failure, 2 input error, 3 cap exceeded.
Reports are JSON documents with ``"schema": 1``; ``--text`` renders the same
document as indented ``key: value`` lines.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__, repro
from .formats import InputError, functor_to_json, load_fusion_system, load_functor, load_group, read_json
from .fusion import OrbitCategory
from .group import DEFAULT_CAP, CapExceeded, center, conjugacy_classes_of_subgroups, enumerate_subgroups
from .limits import CHAIN_CAP, chain_bound, higher_limits
from .mackey import h0_functor, h1_functor, restrict_to_centrics

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


def _jsonable(o):
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serializable: {type(o).__name__}")


def dumps(doc: dict) -> str:
    return json.dumps(doc, default=_jsonable, sort_keys=True, indent=2)


def render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            nested = isinstance(v, dict) or (isinstance(v, list) and not all(
                isinstance(x, (int, float, str, bool)) for x in v))
            if v and nested:
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            elif isinstance(v, bool) and k == "pass":
                lines.append(f"{pad}{k}: {'PASS' if v else 'FAIL'}")
            else:
                lines.append(f"{pad}{k}: {json.dumps(v, default=_jsonable)}")
    elif isinstance(obj, list):
        for item in obj:
            lines.append(f"{pad}-")
            lines.append(render_text(item, indent + 1))
    else:
        lines.append(f"{pad}{obj}")
    return "\n".join(x for x in lines if x)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_group_inspect(args) -> dict:
    doc = read_json(args.path)
    G = load_group(doc.get("group", doc))
    if G.order > args.cap:
        raise CapExceeded(f"group order {G.order} exceeds cap {args.cap}")
    Z = center(G)
    subs = enumerate_subgroups(G, cap=args.cap)
    classes = conjugacy_classes_of_subgroups(G, subs)
    table = []
    for k, cls in enumerate(classes):
        H = cls[0]
        table.append({"class": k, "order": H.order, "size": len(cls),
                      "normal": len(cls) == 1, "elements": H.elements.tolist()})
    return {"order": G.order, "center": {"order": Z.order, "elements": Z.elements.tolist()},
            "subgroups": len(subs), "classes": len(classes), "class_table": table, "pass": True}


def _functor_for(args, fs, Oc):
    if args.functor in ("h0", "h1"):
        O = OrbitCategory(fs)
        M = h0_functor(O) if args.functor == "h0" else h1_functor(O)
        return restrict_to_centrics(M, Oc).contravariant()
    doc = read_json(args.functor)
    return load_functor(doc.get("functor", doc), Oc)


def cmd_limits(args) -> dict:
    fs = load_fusion_system(read_json(args.path))
    Oc = OrbitCategory(fs, centric_only=True)
    N = _functor_for(args, fs, Oc)
    if args.dump_functor:
        with open(args.dump_functor, "w") as fh:
            fh.write(dumps({"schema": 1, "functor": functor_to_json(N)}) + "\n")
    n = chain_bound(Oc)
    D = args.max_degree if args.max_degree is not None else n + 3
    rep = higher_limits(Oc, N, D, cap=args.cap)
    rep.n = n
    out = rep.as_dict()
    out.update({"system": fs.name, "functor": args.functor if args.functor in ("h0", "h1") else "file",
                "functor_dims": list(N.dims), "max_degree": D,
                "pass": all(d == 0 for d in rep.dims[1:])})
    return out


def cmd_repro(args) -> dict:
    name = args.name
    if name == "example43":
        if args.p not in (2, 3):
            raise InputError("--p must be 2 or 3")
        if args.p == 2:
            return repro.example43_certificate(2, full=True)
        # degree 4 at p = 3 needs tens of millions of chains; stop at degree 3
        return repro.example43_certificate(3, max_degree=3, full=args.deep, cap=repro.DEEP_CHAIN_CAP)
    if name == "b3r":
        return repro.b3r_certificate()
    if name == "acyclicity":
        return repro.acyclicity_certificate()
    if name == "boundB":
        return repro.boundB_certificate(args.group, count=args.count, seed=args.seed)
    if name == "thm63":
        if args.case not in repro.THM63_CASES:
            raise InputError(f"--case must be one of {sorted(repro.THM63_CASES)}")
        return repro.thm63_certificate(args.case)
    raise InputError(f"unknown repro target {name!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mackey-fusion",
                                 description="Fusion systems, Mackey functors and higher limits over F_p.")
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="text", action="store_false", help="JSON report (default)")
    fmt.add_argument("--text", dest="text", action="store_true", help="indented text report")
    common.set_defaults(text=False)
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("group-inspect", parents=[common], help="order, center and subgroup classes")
    g.add_argument("path")
    g.add_argument("--cap", type=int, default=DEFAULT_CAP, help="maximal group order")
    g.set_defaults(func=cmd_group_inspect)

    lm = sub.add_parser("limits", parents=[common], help="lim^i over the centric orbit category")
    lm.add_argument("path", help="fusion system JSON")
    lm.add_argument("--functor", default="h1", help="h0, h1 or a functor JSON file")
    lm.add_argument("--max-degree", type=int, default=None, help="default n + 3")
    lm.add_argument("--cap", type=int, default=CHAIN_CAP, help="maximal number of chains")
    lm.add_argument("--dump-functor", default=None, help="write the functor as JSON")
    lm.set_defaults(func=cmd_limits)

    rp = sub.add_parser("repro", parents=[common], help="certificates for the named results")
    rp.add_argument("name", choices=["example43", "b3r", "acyclicity", "boundB", "thm63"])
    rp.add_argument("--p", type=int, default=2)
    rp.add_argument("--deep", action="store_true", help="run the long variants")
    rp.add_argument("--group", default="d8", help="system for boundB")
    rp.add_argument("--count", type=int, default=25, help="random functors for boundB")
    rp.add_argument("--case", type=int, default=1)
    rp.set_defaults(func=cmd_repro)
    return ap


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "text")}
    return dict(sorted(cfg.items()))


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    doc = {"schema": 1, "command": args.command, "config": _config(args)}
    try:
        result = args.func(args)
        doc["result"] = result
        doc["pass"] = bool(result.get("pass", False))
        code = EXIT_PASS if doc["pass"] else EXIT_FAIL
    except InputError as exc:
        doc.update(error="input", message=str(exc), **{"pass": False})
        code = EXIT_INPUT
    except CapExceeded as exc:
        doc.update(error="cap", message=str(exc), **{"pass": False})
        code = EXIT_CAP
    out = render_text(doc) if args.text else dumps(doc)
    print(out)
    if code in (EXIT_INPUT, EXIT_CAP):
        print(f"error: {doc['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
