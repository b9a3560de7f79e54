"""Command-line front end.

Verbs: parse, cmp, validate, enum, collapse, closure, check <suite>, ladder.
All verbs accept --sys, --maxlen, --fuel, --seed, --format.  Exit codes:
0 success, 1 domain error (machine-readable message on stdout), 2 usage or
syntax error.  Budget precedence: flags > ORDWB_BUDGET > defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys as _sys

from . import terms
from . import order
from . import hull
from . import systems
from . import collapse as collapse_mod
from . import harness
from .errors import OrdError, ParseError
from .util import call_deep

_DEFAULTS = {"maxlen": 5, "fuel": 10**6, "seed": 0}


def _env_budget():
    out = {}
    raw = os.environ.get("ORDWB_BUDGET", "")
    for piece in raw.split(","):
        piece = piece.strip()
        if not piece or "=" not in piece:
            continue
        k, v = piece.split("=", 1)
        if k.strip() in _DEFAULTS:
            try:
                out[k.strip()] = int(v)
            except ValueError:
                pass
    return out


def _budget(args):
    env = _env_budget()

    def pick(name):
        v = getattr(args, name, None)
        if v is not None:
            return v
        return env.get(name, _DEFAULTS[name])

    return systems.Budget(maxlen=pick("maxlen"), fuel=pick("fuel"), seed=pick("seed"))


def _emit(args, payload, text):
    if args.format == "jsonl":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _build_parser():
    p = argparse.ArgumentParser(prog="ordwb", description=__doc__)
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp):
        sp.add_argument("--sys", default="bh", help="bh|pi3|piN:<n>|pi11|stab")
        sp.add_argument("--maxlen", type=int, default=None)
        sp.add_argument("--fuel", type=int, default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--format", choices=("text", "jsonl"), default="text")

    sp = sub.add_parser("parse", help="parse and reprint a term")
    common(sp)
    sp.add_argument("term")

    sp = sub.add_parser("cmp", help="compare two terms")
    common(sp)
    sp.add_argument("left")
    sp.add_argument("right")

    sp = sub.add_parser("validate", help="validity verdict for a term")
    common(sp)
    sp.add_argument("term")

    sp = sub.add_parser("enum", help="enumerate the valid universe")
    common(sp)

    sp = sub.add_parser("collapse", help="Mostowski-collapse a term")
    common(sp)
    sp.add_argument("--rho", required=True)
    sp.add_argument("term")

    sp = sub.add_parser("closure", help="bounded syntactic closure C^alpha(X)")
    common(sp)
    sp.add_argument("--alpha", required=True)
    sp.add_argument("gens", nargs="*")

    sp = sub.add_parser("check", help="run a verification suite")
    common(sp)
    sp.add_argument("suite", choices=harness.SUITES)

    sp = sub.add_parser("ladder", help="milestone ladder")
    common(sp)
    sp.add_argument("--n", type=int, default=8)

    return p


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        sysid = systems.parse_system(args.sys)
    except OrdError as e:
        print(f"error: {e}")
        return 2
    try:
        return call_deep(_dispatch, args, sysid)
    except ParseError as e:
        print(f"syntax error: {e}")
        return 2
    except OrdError as e:
        print(f"error: {type(e).__name__}: {e}")
        return 1


def _dispatch(args, sysid):
    budget = _budget(args)
    verb = args.verb

    if verb == "parse":
        t = terms.parse(args.term)
        _emit(args, {"term": terms.render(t), "length": terms.length(t)}, terms.render(t))
        return 0

    if verb == "cmp":
        a, b = terms.parse(args.left), terms.parse(args.right)
        for t in (a, b):
            v = systems.validate(sysid, t)
            if not v.ok:
                print(f"invalid: {terms.render(t)} {v}")
                return 1
        r = order.compare(sysid, a, b)
        _emit(args, {"rel": order.rel_name(r)}, order.rel_sign(r))
        return 0

    if verb == "validate":
        t = terms.parse(args.term)
        v = systems.validate(sysid, t)
        payload = {
            "term": terms.render(t),
            "ok": v.ok,
            "reasons": [{"rule": r, "path": p} for r, p in v.reasons],
        }
        _emit(args, payload, str(v))
        return 0 if v.ok else 1

    if verb == "enum":
        universe = systems.enumerate_terms(sysid, budget)
        for t in universe:
            _emit(args, {"sys": str(sysid), "term": terms.render(t)}, terms.render(t))
        _emit(args, {"count": len(universe)}, f"count {len(universe)}")
        return 0

    if verb == "collapse":
        rho = terms.parse(args.rho)
        t = terms.parse(args.term)
        img = collapse_mod.collapse(t, rho, sysid)
        _emit(args, {"term": terms.render(img)}, terms.render(img))
        return 0

    if verb == "closure":
        alpha = terms.parse(args.alpha)
        gens = [terms.parse(g) for g in args.gens]
        cl = harness.closure_c(alpha, gens, sysid, budget)
        ordered = sorted(cl, key=lambda t: (terms.length(t), terms.render(t)))
        for t in ordered:
            _emit(args, {"sys": str(sysid), "term": terms.render(t)}, terms.render(t))
        _emit(args, {"count": len(ordered)}, f"count {len(ordered)}")
        return 0

    if verb == "check":
        rep = harness.run_suite(args.suite, sysid, budget)
        if args.format == "jsonl":
            print(json.dumps(rep.to_dict(), sort_keys=True))
        else:
            for line in rep.lines():
                print(line)
        return 0 if rep.ok else 1

    if verb == "ladder":
        ladder = harness.milestone_ladder(sysid, args.n)
        for t in ladder:
            _emit(args, {"sys": str(sysid), "term": terms.render(t)}, terms.render(t))
        return 0

    print(f"error: unknown verb {verb}")
    return 2


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
