"""System registry: per-system validity, the attribute maps m/s/p0, the
collapse-ancestry relation, and bounded enumeration of valid terms.

Validity is purely syntactic.  A Verdict carries every violated rule with the
path of the offending subterm, so callers can render machine-readable
failures; ok is True exactly when no rule fired.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import terms
from . import order
from . import hull
from . import finitefn
from .errors import BudgetExceeded, InvalidTerm, NoAttribute
from .terms import (
    Const,
    Dagger,
    IOf,
    IdxFn,
    IdxOrd,
    IdxVec,
    I_CONST,
    K_CONST,
    NextReg,
    OMEGA,
    ONE,
    Psi,
    S_CONST,
    Sum,
    ThetaTilde,
    Veblen,
    ZERO,
)

cmp = order.cmp


@dataclass(frozen=True)
class SystemId:
    kind: str  # bh | pi3 | piN | pi11 | stab
    n: int = 0

    def __str__(self):
        return f"piN:{self.n}" if self.kind == "piN" else self.kind


BH = SystemId("bh")
PI3 = SystemId("pi3")
PI11 = SystemId("pi11")
STAB = SystemId("stab")


def pi_n(n):
    if n < 3:
        raise InvalidTerm("piN needs n >= 3")
    return SystemId("piN", n)


def parse_system(text):
    t = text.strip().lower()
    if t == "bh":
        return BH
    if t == "pi3":
        return PI3
    if t == "pi11":
        return PI11
    if t == "stab":
        return STAB
    if t.startswith("pin:"):
        return pi_n(int(t.split(":", 1)[1]))
    raise InvalidTerm(f"unknown system {text!r}")


ALL_SYSTEMS = (BH, PI3, PI11, STAB)


def lam_of_system(sys):
    if sys.kind == "pi11":
        return K_CONST
    if sys.kind == "stab":
        return I_CONST
    raise InvalidTerm(f"{sys} has no finite-function hierarchy")


def hull_constants(sys):
    if sys.kind == "bh":
        return (OMEGA,)
    if sys.kind in ("pi3", "piN"):
        return (OMEGA, K_CONST)
    if sys.kind == "pi11":
        return (OMEGA, S_CONST, K_CONST)
    if sys.kind == "stab":
        return (OMEGA, I_CONST)
    raise InvalidTerm(f"unknown system {sys}")


@dataclass(frozen=True)
class Budget:
    maxlen: int = 5
    max_items: int = 200000
    fuel: int = 10**6
    seed: int = 0


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reasons: tuple = ()

    def __str__(self):
        if self.ok:
            return "Valid"
        inner = "; ".join(f"{rule}@{path or '.'}" for rule, path in self.reasons)
        return f"Invalid[{inner}]"


class _EpsTop:
    """Reserved attribute value above every term (the m-value of K)."""

    __slots__ = ()

    def __repr__(self):
        return "<eps-top>"


EPS_TOP = _EpsTop()


# ---------------------------------------------------------------------------
# attributes


def psi_root(t):
    while isinstance(t, Psi):
        t = t.sub
    return t


def m_of(t):
    """The index of a psi term (None for a plain collapse)."""
    if not isinstance(t, Psi):
        raise NoAttribute("m is defined on psi terms")
    return t.index


def s_of(t):
    """max(supp(f)) for a psi term with a nonempty finite-function index."""
    if isinstance(t, Psi) and isinstance(t.index, IdxFn) and t.index.fn.entries:
        return t.index.fn.entries[-1][0]
    raise NoAttribute("s needs a nonempty finite-function index")


def p0(t, sys=None):
    """The argument of the topmost stable-subscript collapse on t's chain;
    0 for chains rooted elsewhere."""
    if not isinstance(t, Psi):
        raise NoAttribute("p0 is defined on psi terms")
    cur = t
    while isinstance(cur.sub, Psi):
        cur = cur.sub
    root = cur.sub
    if root is S_CONST or isinstance(root, Dagger):
        return cur.arg
    return ZERO


def prec(r, s, sys=None):
    """r is a collapse-descendant of s (transitive subscript chain)."""
    cur = r
    while isinstance(cur, Psi):
        cur = cur.sub
        if cur is s:
            return True
    return False


def _m2(sub):
    """Pi3 index attribute of a subscript; EPS_TOP for K."""
    if sub is K_CONST:
        return EPS_TOP
    if sub is OMEGA:
        return ONE
    if isinstance(sub, Psi):
        if sub.index is None:
            return ZERO
        if isinstance(sub.index, IdxOrd):
            return sub.index.value
    return None


def _m_vec(sub, n):
    """PiN attribute vector (entries 2..N-1) of a subscript."""
    width = n - 2
    if sub is K_CONST:
        return (ZERO,) * (width - 1) + (EPS_TOP,)
    if sub is OMEGA:
        return (ONE,) + (ZERO,) * (width - 1)
    if isinstance(sub, Psi):
        if sub.index is None:
            return (ZERO,) * width
        if isinstance(sub.index, IdxVec) and len(sub.index.entries) == width:
            return tuple(sub.index.entries)
    return None


# ---------------------------------------------------------------------------
# validation


_valid_memo: dict = {}


def validate(sys, t):
    key = (sys, id(t))
    v = _valid_memo.get(key)
    if v is None:
        reasons = []
        try:
            _chk(sys, t, "", reasons)
        except InvalidTerm as e:
            reasons.append(("incomparable", str(e)))
        v = Verdict(not reasons, tuple(reasons))
        _valid_memo[key] = v
    return v


def _sub_verdict(sys, t, path, reasons):
    v = validate(sys, t)
    if not v.ok:
        for rule, p in v.reasons:
            reasons.append((rule, f"{path}.{p}".strip(".")))
    return v.ok


def _chk(sys, t, path, reasons):
    if t is ZERO:
        return
    if isinstance(t, Const):
        if t not in hull_constants(sys):
            reasons.append(("bad-constructor", path))
        return
    if isinstance(t, Sum):
        prev = None
        for i, (p, c) in enumerate(t.units):
            here = f"{path}.{i}".strip(".")
            if not terms.is_principal(p):
                reasons.append(("sum-order", here))
            _sub_verdict(sys, p, here, reasons)
            if prev is not None and cmp(prev, p) <= 0:
                reasons.append(("sum-order", here))
            prev = p
            if isinstance(c, int):
                if c < 1:
                    reasons.append(("sum-count", here))
            else:
                reasons.append(("count-form", here))
        return
    if isinstance(t, Veblen):
        _sub_verdict(sys, t.sub, f"{path}.sub".strip("."), reasons)
        _sub_verdict(sys, t.arg, f"{path}.arg".strip("."), reasons)
        if terms.veblen(t.sub, t.arg) is not t:
            reasons.append(("veblen-nf", path))
        return
    if isinstance(t, ThetaTilde):
        reasons.append(("theta-tilde-context", path))
        return
    if isinstance(t, NextReg):
        if sys.kind != "pi11":
            reasons.append(("bad-constructor", path))
            return
        base = t.base
        ok_base = base is OMEGA or isinstance(base, NextReg) or (
            isinstance(base, Psi) and psi_root(base) is S_CONST
        )
        if not ok_base:
            reasons.append(("nextreg-arg", path))
        _sub_verdict(sys, base, f"{path}.base".strip("."), reasons)
        return
    if isinstance(t, Dagger):
        if sys.kind != "stab":
            reasons.append(("bad-constructor", path))
            return
        base = t.base
        ok_base = (
            base is OMEGA
            or isinstance(base, (Dagger, IOf))
            or (isinstance(base, Psi) and psi_root(base) is not OMEGA)
        )
        if not ok_base:
            reasons.append(("dagger-arg", path))
        _sub_verdict(sys, base, f"{path}.base".strip("."), reasons)
        return
    if isinstance(t, IOf):
        if sys.kind != "stab":
            reasons.append(("bad-constructor", path))
            return
        base = t.base
        if not (isinstance(base, Psi) and isinstance(psi_root(base), Dagger)):
            reasons.append(("iof-arg", path))
        _sub_verdict(sys, base, f"{path}.base".strip("."), reasons)
        return
    if isinstance(t, Psi):
        _chk_psi(sys, t, path, reasons)
        return
    reasons.append(("bad-constructor", path))


def _hull_cond(t, xs, reasons, path, rule="psi-arg-hull"):
    # {components} subset of H_arg(.): the argument uses the 0-cutoff form
    # (every collapse argument reachable inside it stays below t's argument;
    # this is what rejects redundant notations), while the subscript and
    # index material use the t-cutoff form (collapse images put whole
    # smaller collapses inside subscripts, where they act as generators).
    for x in xs:
        delta = ZERO if x is t.arg else t
        if not hull.in_hull(x, t.arg, delta):
            reasons.append((rule, path))
            return False
    return True


def _chk_psi(sys, t, path, reasons):
    sub, index, arg = t.sub, t.index, t.arg
    spath = f"{path}.sub".strip(".")
    apath = f"{path}.arg".strip(".")
    _sub_verdict(sys, sub, spath, reasons)
    _sub_verdict(sys, arg, apath, reasons)
    k = sys.kind

    if k == "bh":
        if sub is not OMEGA:
            reasons.append(("psi-sub", path))
            return
        if index is not None:
            reasons.append(("psi-index-arity", path))
            return
        _hull_cond(t, [arg], reasons, path)
        return

    if k == "pi3":
        if isinstance(index, (IdxVec, IdxFn)):
            reasons.append(("psi-index-arity", path))
            return
        nu = index.value if isinstance(index, IdxOrd) else ZERO
        if isinstance(index, IdxOrd):
            _sub_verdict(sys, nu, f"{path}.idx".strip("."), reasons)
        m2 = _m2(sub)
        if m2 is None:
            reasons.append(("psi-sub", path))
            return
        if m2 is not EPS_TOP and cmp(nu, m2) >= 0:
            reasons.append(("psi-index-order", path))
        if any(cmp(x, t) >= 0 for x in hull.sc(nu)):
            reasons.append(("psi-index-parts", path))
        if cmp(nu, arg) > 0:
            reasons.append(("psi-index-bound", path))
        _hull_cond(t, [sub, arg, nu], reasons, path)
        return

    if k == "piN":
        _chk_psi_pin(sys, t, path, reasons)
        return

    if k == "pi11":
        _chk_psi_fn(sys, t, path, reasons, lam=K_CONST)
        return

    if k == "stab":
        _chk_psi_fn(sys, t, path, reasons, lam=I_CONST)
        return

    reasons.append(("bad-constructor", path))


def _chk_psi_pin(sys, t, path, reasons):
    sub, index, arg = t.sub, t.index, t.arg
    n = sys.n
    width = n - 2
    if isinstance(index, (IdxOrd, IdxFn)):
        reasons.append(("psi-index-arity", path))
        return
    mv = _m_vec(sub, n)
    if mv is None:
        reasons.append(("psi-sub", path))
        return
    if index is None:
        _hull_cond(t, [sub, arg], reasons, path)
        return
    entries = index.entries
    if len(entries) != width:
        reasons.append(("psi-index-arity", path))
        return
    for i, e in enumerate(entries):
        _sub_verdict(sys, e, f"{path}.idx{i}".strip("."), reasons)
        if any(cmp(x, t) >= 0 for x in hull.sc(e)):
            reasons.append(("psi-index-parts", path))
        if cmp(e, arg) > 0:
            reasons.append(("psi-index-bound", path))
    _hull_cond(t, [sub, arg] + list(entries), reasons, path)
    if not (_pin_lower(t, mv, entries, n) or _pin_step(t, mv, entries)):
        reasons.append(("psi-index-recipe", path))


def _pin_lower(t, mv, entries, n):
    # prefix agrees with the subscript's vector; the suffix drops below m_k
    width = len(entries)
    for k in range(width):
        if mv[k] is EPS_TOP:
            return True
        if entries[k] is not mv[k]:
            suffix = entries[k:]
            if mv[k] is ZERO:
                return False
            return order.less_vec(suffix, mv[k], n=len(suffix) + 2)
    return False  # identical vector is not a fresh collapse index


def _pin_step(t, mv, entries):
    # nu_k = xi_k +. Lambda^{xi_{k+1}} c with zeros after k
    width = len(entries)
    for k in range(width - 1):
        if mv[k + 1] is EPS_TOP or mv[k + 1] is ZERO:
            continue
        if any(e is not ZERO for e in entries[k + 1 :]):
            continue
        if any(entries[i] is not mv[i] for i in range(k)):
            continue
        xi_k = mv[k]
        if xi_k is not ZERO and not _prefix_units(xi_k, entries[k]):
            continue
        try:
            extra = _nat_diff(entries[k], xi_k)
        except InvalidTerm:
            continue
        if extra is ZERO:
            continue
        groups = terms.lam_groups(extra, K_CONST)
        if len(groups) != 1:
            continue
        beta, coeff = groups[0]
        if beta is not mv[k + 1]:
            continue
        if cmp(coeff, K_CONST) >= 0 or coeff is ZERO:
            continue
        if not hull.in_hull(coeff, t.arg, t.sub):
            continue
        return True
    return False


def _prefix_units(prefix, whole):
    up, uw = terms.units_of(prefix), terms.units_of(whole)
    if len(up) > len(uw):
        return False
    for (p, c), (q, d) in zip(up, uw):
        if p is not q:
            return False
        if terms._count_cmp(c, d) > 0:
            return False
    return True


def _nat_diff(whole, part):
    """Multiset difference of CNF units: the X with part # X = whole."""
    uw = {id(p): [p, c] for p, c in terms.units_of(whole)}
    for p, c in terms.units_of(part):
        ent = uw.get(id(p))
        if ent is None:
            raise InvalidTerm("not a unit superset")
        r = terms._count_cmp(ent[1], c)
        if r < 0:
            raise InvalidTerm("not a unit superset")
        ent[1] = terms._count_sub(ent[1], c)
    units = [(p, c) for p, c in uw.values() if not (c == 0 or c is ZERO)]
    units.sort(key=lambda u: terms._CmpKey(u), reverse=True)
    return terms.from_units(units)


def _chk_psi_fn(sys, t, path, reasons, lam):
    sub, index, arg = t.sub, t.index, t.arg
    k = sys.kind
    if isinstance(index, (IdxOrd, IdxVec)):
        reasons.append(("psi-index-arity", path))
        return
    fn = index.fn if isinstance(index, IdxFn) else None
    root = psi_root(sub)

    def plain_ok():
        if fn is not None:
            reasons.append(("psi-index-arity", path))
            return
        _hull_cond(t, [sub, arg], reasons, path)

    if sub is OMEGA:
        plain_ok()
        return
    if k == "pi11" and sub is K_CONST:
        plain_ok()
        return
    if k == "pi11" and isinstance(sub, NextReg):
        # collapse image of psi_K(.): the next regular above a collapse
        if not (isinstance(sub.base, Psi) and psi_root(sub.base) is S_CONST):
            reasons.append(("psi-sub", path))
            return
        plain_ok()
        return
    if k == "stab" and (sub is I_CONST or isinstance(sub, IOf)):
        plain_ok()
        return

    stable_sub = (k == "pi11" and sub is S_CONST) or (
        k == "stab" and isinstance(sub, Dagger)
    )
    chain_sub = isinstance(sub, Psi) and (
        (k == "pi11" and root is S_CONST)
        or (k == "stab" and isinstance(root, Dagger))
    )
    if not (stable_sub or chain_sub):
        if k == "stab" and isinstance(sub, Psi) and (
            root is I_CONST or isinstance(root, IOf)
        ):
            reasons.append(("ls-subscript", path))
        else:
            reasons.append(("psi-sub", path))
        return

    if stable_sub:
        if fn is None or len(fn.entries) != 1:
            reasons.append(("fn-support", path))
            return
        if not _chk_fn(sys, fn, path, reasons, lam):
            return
        if k == "pi11":
            bound = terms._theta_tilde(terms.omega(), ONE, lam)
            if cmp(fn.entries[0][1], bound) >= 0:
                reasons.append(("fn-value-bound", path))
        p0a = arg
        for x in hull.sc_fn(fn):
            if not hull.in_hull(x, p0a, t):
                reasons.append(("psi-index-domain", path))
                break
        if k == "stab":
            gens = hull.sc(arg)
            for x in hull.sc_fn(fn):
                if not hull.in_hull_gens(x, arg, gens):
                    reasons.append(("psi-index-support", path))
                    break
        _hull_cond(t, [sub, arg], reasons, path)
        return

    # chain subscript: index obtained from m(sub) by stepping down
    if fn is None:
        _hull_cond(t, [sub, arg], reasons, path)
        return
    if not _chk_fn(sys, fn, path, reasons, lam):
        return
    if not finitefn.is_irreducible(fn):
        reasons.append(("fn-irreducible", path))
        return
    parent = sub.index.fn if isinstance(sub.index, IdxFn) else None
    if parent is None or not _recipe_ok(parent, fn, lam):
        reasons.append(("psi-index-recipe", path))
    p0a = p0(t)
    for x in hull.sc_fn(fn):
        if not hull.in_hull(x, p0a, t):
            reasons.append(("psi-index-domain", path))
            break
    _hull_cond(t, [sub, arg], reasons, path)


def _recipe_ok(f, g, lam):
    """g arises from f via the (d, c) stepping-down schema."""
    fkeys = finitefn.supp(f)
    if not fkeys:
        return False
    cands = {ZERO}
    for k in fkeys + finitefn.supp(g):
        cands.add(k)
        cands.add(terms.add(k, ONE))
    for d in sorted(cands, key=finitefn._KeyOrd):
        above = [k for k in fkeys if cmp(k, d) > 0]
        if not above:
            continue
        c = above[0]
        if any(cmp(k, d) > 0 and cmp(k, c) < 0 for k in finitefn.supp(g)):
            continue
        if finitefn.restrict_below(f, d) is not finitefn.restrict_below(g, d):
            continue
        room = terms.from_units(
            [(terms._theta_tilde(terms.ord_sub(c, d), finitefn.fn_get(f, c), lam), terms.omega())]
        )
        bound = terms.add(finitefn.fn_get(f, d), room)
        if cmp(finitefn.fn_get(g, d), bound) >= 0:
            continue
        if not finitefn.less_at(g, c, finitefn.fn_get(f, c)):
            continue
        return True
    return False


def _chk_fn(sys, fn, path, reasons, lam):
    """Well-formedness of a finite function per the value normal form."""
    ok = True
    if fn.lam is not lam:
        reasons.append(("fn-key-range", path))
        return False
    for i, (k, v) in enumerate(fn.entries):
        here = f"{path}.fn{i}".strip(".")
        if not _sub_verdict(sys, k, here, reasons):
            ok = False
        if cmp(k, lam) >= 0:
            reasons.append(("fn-key-range", here))
            ok = False
        if not _chk_value(sys, v, here, reasons, lam):
            ok = False
    return ok


def _chk_value(sys, v, path, reasons, lam):
    """theta~ normal form: decreasing units, coefficient discipline, and
    sub-Lambda remainders that are ordinary valid terms."""
    ok = True
    groups = terms.value_units(v)
    for i, (p, c) in enumerate(groups):
        last = i == len(groups) - 1
        if c is None:
            # sub-Lambda remainder
            if not _sub_verdict(sys, p, f"{path}.rem".strip("."), reasons):
                ok = False
            if cmp(p, lam) >= 0:
                reasons.append(("fn-value-nf", path))
                ok = False
            continue
        if isinstance(p, ThetaTilde):
            if not _chk_tt(sys, p, path, reasons, lam):
                ok = False
            free_count = last and p.sub is ONE
        else:  # bare Lambda part
            if p is not lam:
                reasons.append(("fn-value-nf", path))
                ok = False
            free_count = True
        if not free_count:
            if c != 1:
                reasons.append(("fn-value-nf", path))
                ok = False
        elif not isinstance(c, int):
            if cmp(c, lam) >= 0 or not _sub_verdict(
                sys, c, f"{path}.count".strip("."), reasons
            ):
                reasons.append(("fn-value-nf", path))
                ok = False
    return ok


def _chk_tt(sys, p, path, reasons, lam):
    ok = True
    if not terms.is_principal(p.sub) or not _sub_verdict(
        sys, p.sub, f"{path}.itr".strip("."), reasons
    ):
        reasons.append(("theta-nf", path))
        ok = False
    if cmp(p.sub, lam) >= 0:
        reasons.append(("theta-nf", path))
        ok = False
    if terms._theta_tilde(p.sub, p.arg, lam) is not p:
        reasons.append(("theta-nf", path))
        ok = False
    if not _chk_value(sys, p.arg, f"{path}.targ".strip("."), reasons, lam):
        ok = False
    return ok


# ---------------------------------------------------------------------------
# enumeration


_pool_cache: dict = {}
_universe_cache: dict = {}


def raw_pool(sys, maxlen, max_items=200000):
    """All normal-form terms of the system's grammar with length <= maxlen,
    valid or not (theta~ excluded: it is never standalone)."""
    key = (sys, maxlen)
    got = _pool_cache.get(key)
    if got is not None:
        return got
    out = {ZERO}
    out.update(hull_constants(sys))
    frontier = set(out)
    while frontier:
        if len(out) > max_items:
            raise BudgetExceeded(f"raw pool exceeded {max_items} items")
        new = set()

        def emit(t):
            if t not in out and t not in new and terms.length(t) <= maxlen:
                new.add(t)

        pool = sorted(out, key=terms.length)
        for x in frontier:
            lx = terms.length(x)
            for y in pool:
                ly = terms.length(y)
                if min(lx, ly) + 1 <= maxlen:
                    emit(terms.add(x, y))
                    emit(terms.add(y, x))
                    emit(terms.natural_sum(x, y))
                if lx + ly + 1 <= maxlen:
                    emit(terms.veblen(x, y))
                    emit(terms.veblen(y, x))
                # repetition counts
                if terms.is_principal(x) and ly == 0:
                    pass
            if terms.is_principal(x):
                for cnt in range(2, maxlen - lx + 2):
                    if lx + cnt <= maxlen + 1:
                        emit(terms.from_units([(x, cnt)]))
        for sub in pool:
            if not _sub_eligible(sys, sub):
                continue
            for arg in pool:
                base = 1 + terms.length(sub) + terms.length(arg)
                if base > maxlen:
                    continue
                touch = sub in frontier or arg in frontier
                if touch:
                    emit(terms.psi(sub, None, arg))
                for idx in index_candidates(sys, pool, maxlen - base):
                    if touch or any(
                        p in frontier for p in hull.idx_hull_parts(idx)
                    ):
                        emit(terms.psi(sub, idx, arg))
        if sys.kind == "pi11":
            for x in frontier:
                if terms.length(x) + 1 <= maxlen:
                    emit(terms.next_reg(x))
        if sys.kind == "stab":
            for x in frontier:
                if terms.length(x) + 1 <= maxlen:
                    emit(terms.dagger(x))
                    if isinstance(x, Psi):
                        emit(terms.i_of(x))
        out |= new
        frontier = new
    result = sorted(out, key=lambda t: (terms.length(t), terms.render(t)))
    _pool_cache[key] = result
    return result


def _sub_eligible(sys, sub):
    k = sys.kind
    if k == "bh":
        return sub is OMEGA
    if k in ("pi3", "piN"):
        return sub is OMEGA or sub is K_CONST or isinstance(sub, Psi)
    if k == "pi11":
        return sub in (OMEGA, S_CONST, K_CONST) or isinstance(sub, (Psi, NextReg))
    if k == "stab":
        return sub is OMEGA or sub is I_CONST or isinstance(sub, (Psi, Dagger, IOf))
    return False


def index_candidates(sys, pool, len_budget):
    """Index material for psi generation, bounded by remaining length."""
    if len_budget <= 0:
        return
    k = sys.kind
    if k == "pi3":
        for v in pool:
            if v is not ZERO and terms.length(v) <= len_budget:
                yield terms.idx_ord(v)
    elif k == "piN":
        width = sys.n - 2
        if len_budget < width:
            return
        small = [v for v in pool if terms.length(v) <= len_budget]

        def build(prefix, remaining):
            if not remaining:
                if any(e is not ZERO for e in prefix):
                    yield terms.idx_vec(prefix)
                return
            for v in small:
                used = sum(terms.length(e) for e in prefix)
                if used + terms.length(v) + (remaining - 1) <= len_budget:
                    yield from build(prefix + [v], remaining - 1)

        yield from build([], width)
    elif k in ("pi11", "stab"):
        lam = K_CONST if k == "pi11" else I_CONST
        values = _value_pool(sys, pool, len_budget, lam)
        for key in pool:
            lk = terms.length(key)
            if lk >= len_budget or cmp(key, lam) >= 0:
                continue
            for v in values:
                if lk + terms.length(v) <= len_budget:
                    yield terms.idx_fn(terms.finite_fn([(key, v)], lam))


def _value_pool(sys, pool, len_budget, lam):
    vals = set()
    for v in pool:
        if v is not ZERO and terms.length(v) <= len_budget and cmp(v, lam) < 0:
            vals.add(v)
    vals.add(lam)
    for b in pool:
        if not terms.is_principal(b) or cmp(b, lam) >= 0:
            continue
        for x in list(vals):
            if 1 + terms.length(b) + terms.length(x) <= len_budget:
                t = terms._theta_tilde(b, x, lam)
                if terms.length(t) <= len_budget:
                    vals.add(t)
    for x in list(vals):
        if terms.length(x) + 1 <= len_budget:
            vals.add(terms.add(x, lam))
    return sorted(vals, key=terms.length)


def enumerate_terms(sys, budget):
    """Every valid term of length <= budget.maxlen, once, in compare order."""
    import functools

    key = (sys, budget.maxlen)
    got = _universe_cache.get(key)
    if got is not None:
        return got
    pool = raw_pool(sys, budget.maxlen, budget.max_items)
    valid = [t for t in pool if validate(sys, t).ok]
    valid.sort(key=functools.cmp_to_key(order.cmp))
    _universe_cache[key] = valid
    return valid
