"""Finite-function calculus: restrictions, the domination relation f <^c xi,
special functions and their stepping-down, irreducibility, and the
lexicographic order on irreducible functions.

Functions are finite-support maps from index ordinals (below Lambda) to
theta~-normal values; see terms.FiniteFn.  Keys absent from the support read
as 0.  All operations are pure.
"""

from __future__ import annotations

from . import terms
from . import order
from .errors import BadCut, NotIrreducible, NotSpecial
from .terms import ZERO

cmp = order.cmp


def supp(f):
    return [k for k, _ in f.entries]


def fn_get(f, c):
    for k, v in f.entries:
        if k is c:
            return v
    return ZERO


def restrict_below(f, c):
    """f_c: the part of f strictly below c."""
    return terms._mk_fn(
        tuple((k, v) for k, v in f.entries if cmp(k, c) < 0), f.lam
    )


def restrict_from(f, c):
    """f^c: the part of f at or above c."""
    return terms._mk_fn(
        tuple((k, v) for k, v in f.entries if cmp(k, c) >= 0), f.lam
    )


def concat(g, f, c):
    """g_c * f^c: g below the cut, f from the cut on."""
    lo = tuple((k, v) for k, v in g.entries if cmp(k, c) < 0)
    hi = tuple((k, v) for k, v in f.entries if cmp(k, c) >= 0)
    return terms._mk_fn(lo + hi, g.lam)


def fn_le(f, g):
    """Pointwise f(i) <= g(i) over the union of supports."""
    keys = {id(k): k for k in supp(f) + supp(g)}
    return all(cmp(fn_get(f, k), fn_get(g, k)) <= 0 for k in keys.values())


def less_at(f, c, x):
    """f <^c x: some segment of x strictly exceeds f(c) and dominates the
    rest of f through inverse theta~ iterates."""
    if all(cmp(k, c) < 0 for k in supp(f)):
        return True
    if x is ZERO:
        return False
    fc = fn_get(f, c)
    above = [k for k in supp(f) if cmp(k, c) > 0]
    for mu in terms.segments(x):
        if mu is ZERO:
            continue
        if cmp(fc, mu) >= 0:
            continue
        if not above:
            return True
        e = above[0]
        d = terms.ord_sub(e, c)
        if less_at(f, e, terms.theta_tilde_inv(d, terms.tail(mu))):
            return True
    return False


def is_special(f):
    """True iff the top value carries an additive Lambda tail (the 'room')."""
    if not f.entries:
        return False
    v = f.entries[-1][1]
    last_p, _ = terms.units_of(v)[-1]
    return last_p is f.lam


def prime(f):
    """f': strip one Lambda from the top value."""
    if not is_special(f):
        raise NotSpecial("no additive Lambda room in the top value")
    entries = list(f.entries)
    cmax, v = entries[-1]
    units = terms.units_of(v)
    p, c = units[-1]
    stripped = terms._count_sub(c, 1)
    new_units = units[:-1] + ([(p, stripped)] if not _czero(stripped) else [])
    v2 = terms.from_units(new_units)
    if v2 is ZERO:
        entries = entries[:-1]
    else:
        entries[-1] = (cmax, v2)
    return terms._mk_fn(tuple(entries), f.lam)


def _czero(c):
    return c == 0 if isinstance(c, int) else c is ZERO


def step_down(g, b, a):
    """h^b(g; a): move a special function's room down to index b.

    The chain b = b_0 < ... < b_n = max(supp(g)) threads the old values into
    nested theta~ iterates; the result is special with support
    supp(g_b) + {b} and agrees with g below b.
    """
    if not is_special(g):
        raise NotSpecial("step_down needs a special function")
    keys = supp(g)
    cmax = keys[-1]
    if cmp(b, cmax) >= 0:
        raise BadCut("cut must lie below max(supp)")
    chain = [b] + [k for k in keys if cmp(k, b) > 0 and cmp(k, cmax) < 0] + [cmax]
    top = fn_get(g, cmax)
    units = terms.units_of(top)
    p, c = units[-1]
    stripped = terms._count_sub(c, 1)
    alpha = terms.from_units(
        units[:-1] + ([(p, stripped)] if not _czero(stripped) else [])
    )
    acc = terms.add(alpha, a)
    for i in range(len(chain) - 2, -1, -1):
        ci = terms.ord_sub(chain[i + 1], chain[i])
        acc = terms.add(
            fn_get(g, chain[i]), terms._theta_tilde(ci, acc, g.lam)
        )
    hb = terms.add(acc, g.lam)
    lo = tuple((k, v) for k, v in g.entries if cmp(k, b) < 0)
    return terms._mk_fn(lo + ((b, hb),), g.lam)


def is_irreducible(f):
    """Tail of the second-highest value must dominate the folded-in top."""
    if len(f.entries) <= 1:
        return True
    entries = list(f.entries)
    (kc, vc), (kd, vd) = entries[-2], entries[-1]
    d = terms.ord_sub(kd, kc)
    t = terms._theta_tilde(d, vd, f.lam)
    if cmp(terms.tail(vc), t) <= 0:
        return False
    merged = entries[:-2] + [(kc, terms.add(vc, t))]
    return is_irreducible(terms._mk_fn(tuple(merged), f.lam))


def lex_less(f, g, b):
    """f <^b_lx g for irreducible f, g."""
    if not (is_irreducible(f) and is_irreducible(g)):
        raise NotIrreducible("lex order is defined on irreducible functions")
    return _lex(f, g, b)


def _lex(f, g, b):
    fb, gb = restrict_from(f, b), restrict_from(g, b)
    if fb is gb:
        return False
    keys = sorted(
        {id(k): k for k in supp(fb) + supp(gb)}.values(),
        key=_KeyOrd,
    )
    c = next(k for k in keys if fn_get(f, k) is not fn_get(g, k))
    fc, gc = fn_get(f, c), fn_get(g, c)
    if cmp(fc, gc) < 0:
        mu = _shortest_segment_above(gc, fc)
        for k in supp(f):
            if cmp(k, c) <= 0:
                continue
            d = terms.ord_sub(k, c)
            if cmp(terms.tail(mu), terms._theta_tilde(d, fn_get(f, k), f.lam)) <= 0:
                if not _lex(f, g, k):
                    return False
        return True
    nu = _shortest_segment_above(fc, gc)
    for k in supp(g):
        if cmp(k, c) <= 0:
            continue
        d = terms.ord_sub(k, c)
        if cmp(terms.tail(nu), terms._theta_tilde(d, fn_get(g, k), g.lam)) <= 0:
            if _lex(f, g, k):
                return True
    return False


class _KeyOrd:
    __slots__ = ("t",)

    def __init__(self, t):
        self.t = t

    def __lt__(self, other):
        return cmp(self.t, other.t) < 0


def _shortest_segment_above(x, bound):
    for mu in reversed(terms.segments(x)):
        if mu is ZERO:
            continue
        if cmp(bound, mu) < 0:
            return mu
    raise AssertionError("no segment above bound; caller guarantees one")
