"""Support-set calculus and Skolem-hull membership.

K-sets drive the production path: a term lies in the hull H_a(delta) exactly
when every element of its K_delta set is below a.  hull_closure is the
independent forward-iteration oracle used by the harness to audit that
characterization; it must never share the K recursion.

Everything here is defined for OT(Pi3)-style terms in the source material and
extended structurally to the other systems: finite-function indexes contribute
their support-calculus components, and alpha-dagger / I[rho] / alpha-plus
nodes are hull members exactly when their base is (they are generator images
with no argument side condition).
"""

from __future__ import annotations

from . import terms
from . import order
from .errors import BudgetExceeded, InvalidTerm
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
    Psi,
    S_CONST,
    Sum,
    ThetaTilde,
    Veblen,
    ZERO,
)

_sc_memo: dict = {}
_e_memo: dict = {}
_k_memo: dict = {}
_ks_memo: dict = {}
_g_memo: dict = {}


def _count_terms(t):
    out = []
    if isinstance(t, Sum):
        for _, c in t.units:
            if not isinstance(c, int):
                out.append(c)
    return out


def sc(t, sys=None):
    """Strongly critical parts: the psi/dagger-like atoms t is built from
    by + and phi.  Constants and 0 have none."""
    r = _sc_memo.get(id(t))
    if r is not None:
        return r
    if t is ZERO or isinstance(t, Const):
        r = frozenset()
    elif isinstance(t, Sum):
        acc = set()
        for p, c in t.units:
            acc |= sc(p)
            if not isinstance(c, int):
                acc |= sc(c)
        r = frozenset(acc)
    elif isinstance(t, (Veblen, ThetaTilde)):
        r = sc(t.sub) | sc(t.arg)
    elif isinstance(t, (Psi, NextReg, Dagger, IOf)):
        r = frozenset((t,))
    else:
        raise InvalidTerm(f"not a term: {t!r}")
    _sc_memo[id(t)] = r
    return r


def sc_fn(fn):
    """Support-calculus components of a finite function: keys, coefficients,
    iterate levels, and the sub-Lambda leaves of every value."""
    out = set()
    for k, v in fn.entries:
        out.add(k)
        out |= _sc_value(v)
    return frozenset(out)


def _sc_value(v):
    out = set()
    for p, c in terms.value_units(v):
        if c is None:
            out.add(p)  # sub-Lambda remainder, one Lambda^0 coefficient
            continue
        out.add(terms.count_term(c))
        if isinstance(p, ThetaTilde):
            out.add(p.sub)
            out |= _sc_value(p.arg)
        # a bare Lambda part contributes only its coefficient
    out.discard(ZERO)
    return out


def _idx_support(index):
    if index is None:
        return ()
    if isinstance(index, IdxOrd):
        return tuple(sc(index.value)) or (index.value,)
    if isinstance(index, IdxVec):
        out = []
        for e in index.entries:
            out.extend(sc(e))
        return tuple(out)
    if isinstance(index, IdxFn):
        return tuple(sc_fn(index.fn))
    raise InvalidTerm(f"bad psi index {index!r}")


def idx_hull_parts(index):
    """Terms whose hull membership carries the index's membership."""
    if index is None:
        return ()
    if isinstance(index, IdxOrd):
        return (index.value,)
    if isinstance(index, IdxVec):
        return tuple(index.entries)
    if isinstance(index, IdxFn):
        return tuple(sc_fn(index.fn))
    raise InvalidTerm(f"bad psi index {index!r}")


def e_set(t):
    """The critical atoms of t (subterm-level support, no cutoff)."""
    r = _e_memo.get(id(t))
    if r is not None:
        return r
    if t is ZERO or isinstance(t, Const):
        r = frozenset()
    elif isinstance(t, Sum):
        acc = set()
        for p, c in t.units:
            acc |= e_set(p)
            if not isinstance(c, int):
                acc |= e_set(c)
        r = frozenset(acc)
    elif isinstance(t, (Veblen, ThetaTilde)):
        r = e_set(t.sub) | e_set(t.arg)
    elif isinstance(t, (Psi, NextReg, Dagger, IOf)):
        r = frozenset((t,))
    else:
        raise InvalidTerm(f"not a term: {t!r}")
    _e_memo[id(t)] = r
    return r


def _atom_components(atom):
    if isinstance(atom, Psi):
        return (atom.sub, atom.arg) + idx_hull_parts(atom.index)
    return (atom.base,)


def k_set(delta, t, sys=None):
    """K_delta(t): arguments of the psi atoms at or above the cutoff,
    collected recursively."""
    key = (id(delta), id(t))
    r = _k_memo.get(key)
    if r is not None:
        return r
    acc = set()
    for atom in e_set(t):
        if order.cmp(atom, delta) < 0:
            continue
        if isinstance(atom, Psi):
            acc.add(atom.arg)
        for comp in _atom_components(atom):
            acc |= k_set(delta, comp)
    r = frozenset(acc)
    _k_memo[key] = r
    return r


def k_small(delta, t, sys=None):
    """k_delta(t): the psi atoms themselves, mirroring K_delta."""
    key = (id(delta), id(t))
    r = _ks_memo.get(key)
    if r is not None:
        return r
    acc = set()
    for atom in e_set(t):
        if order.cmp(atom, delta) < 0:
            continue
        if isinstance(atom, Psi):
            acc.add(atom)
        for comp in _atom_components(atom):
            acc |= k_small(delta, comp)
    r = frozenset(acc)
    _ks_memo[key] = r
    return r


def g_set(delta, t, sys=None):
    """G_delta(t): the collapses with subscript at or below delta."""
    key = (id(delta), id(t))
    r = _g_memo.get(key)
    if r is not None:
        return r
    if t is ZERO or isinstance(t, Const):
        r = frozenset()
    elif isinstance(t, Sum):
        acc = set()
        for p, c in t.units:
            acc |= g_set(delta, p)
            if not isinstance(c, int):
                acc |= g_set(delta, c)
        r = frozenset(acc)
    elif isinstance(t, (Veblen, ThetaTilde)):
        r = g_set(delta, t.sub) | g_set(delta, t.arg)
    elif isinstance(t, Psi):
        if order.cmp(t.sub, delta) <= 0:
            r = frozenset((t,))
        else:
            acc = g_set(delta, t.sub) | g_set(delta, t.arg)
            for part in idx_hull_parts(t.index):
                acc |= g_set(delta, part)
            r = frozenset(acc)
    elif isinstance(t, (NextReg, Dagger, IOf)):
        if order.cmp(t, delta) < 0:
            r = frozenset((t,))
        else:
            r = g_set(delta, t.base)
    else:
        raise InvalidTerm(f"not a term: {t!r}")
    _g_memo[key] = r
    return r


def in_hull(t, a, delta, sys=None):
    """t in H_a(delta): every K_delta element sits below a."""
    return all(order.cmp(x, a) < 0 for x in k_set(delta, t))


def in_hull_gens(t, a, gens, sys=None):
    """t in H_a(X) for a finite generator set X (exact membership escape)."""
    gens = frozenset(gens)
    return _ihg(t, a, gens)


def _ihg(t, a, gens):
    if t in gens:
        return True
    if t is ZERO or isinstance(t, Const):
        return True
    if isinstance(t, Sum):
        for p, c in t.units:
            if not _ihg(p, a, gens):
                return False
            if not isinstance(c, int) and not _ihg(c, a, gens):
                return False
        return True
    if isinstance(t, (Veblen, ThetaTilde)):
        return _ihg(t.sub, a, gens) and _ihg(t.arg, a, gens)
    if isinstance(t, Psi):
        if order.cmp(t.arg, a) >= 0:
            return False
        if not (_ihg(t.sub, a, gens) and _ihg(t.arg, a, gens)):
            return False
        return all(_ihg(p, a, gens) for p in idx_hull_parts(t.index))
    if isinstance(t, (NextReg, Dagger, IOf)):
        return _ihg(t.base, a, gens)
    raise InvalidTerm(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# forward-iteration closure oracle


def hull_closure(gens, a, sys, budget):
    """Least fixed point of the hull generators within the length budget.

    Test oracle only: iterates constructor application forward until stable,
    never consulting the K recursion.
    """
    from .systems import hull_constants

    seeds = set(hull_constants(sys))
    seeds.add(ZERO)
    seeds.update(g for g in gens if terms.length(g) <= budget.maxlen)

    def psi_ok(sub, arg):
        return order.cmp(arg, a) < 0

    return _closure(seeds, sys, budget, psi_ok)


def closure_engine(seeds, sys, budget, psi_ok):
    return _closure(set(seeds), sys, budget, psi_ok)


def _closure(current, sys, budget, psi_ok):
    from . import systems as systems_mod

    maxlen = budget.maxlen
    sysk = sys.kind
    out = {t for t in current if terms.length(t) <= maxlen}
    frontier = set(out)
    while frontier:
        if len(out) > budget.max_items:
            raise BudgetExceeded(f"closure exceeded {budget.max_items} items")
        new = set()

        def emit(t):
            if t not in out and terms.length(t) <= maxlen:
                new.add(t)

        for x in frontier:
            lx = terms.length(x)
            for y in out:
                if lx + terms.length(y) + 1 > maxlen + 2:
                    continue
                emit(terms.add(x, y))
                emit(terms.add(y, x))
                emit(terms.veblen(x, y))
                emit(terms.veblen(y, x))
        # psi generation: subscripts, index material, and arguments from the set
        pool = sorted(out, key=terms.length)
        for sub in pool:
            for arg in pool:
                if not psi_ok(sub, arg):
                    continue
                base = 1 + terms.length(sub) + terms.length(arg)
                if base > maxlen:
                    continue
                touch = sub in frontier or arg in frontier
                if touch:
                    emit(terms.psi(sub, None, arg))
                for idx in systems_mod.index_candidates(sys, pool, maxlen - base):
                    if touch or any(
                        p in frontier for p in idx_hull_parts(idx)
                    ):
                        emit(terms.psi(sub, idx, arg))
        if sysk == "pi11":
            for x in frontier:
                if order.cmp(x, S_CONST) < 0:
                    emit(terms.next_reg(x))
        if sysk == "stab":
            for x in frontier:
                if order.cmp(x, I_CONST) < 0:
                    emit(terms.dagger(x))
        out |= new
        frontier = new
    return frozenset(out)
