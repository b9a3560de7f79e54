"""Total comparison on notation terms, plus the pair/vector index relations.

The order is system-uniform: the five systems share constructors, the
constants are globally ranked Omega < S < K < I, and the psi-versus-psi split
is the same four-case scheme everywhere, instantiated with K-set hull
membership and the per-index-kind order (plain compare for ordinal indexes,
reverse-lexicographic for vectors, the irreducible-function lexicographic
order for finite functions).

cmp(a, b) returns -1, 0, or 1.  0 means structural identity of normal forms;
the order never consults ordinal semantics.  When neither direction of the
psi split holds the pair is genuinely incomparable and InvalidTerm is raised
rather than guessed away; valid universes never trigger this.
"""

from __future__ import annotations

from . import terms
from . import hull
from .errors import ArityMismatch, InvalidTerm
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

LESS, EQUAL, GREATER = -1, 0, 1

_REL_NAME = {LESS: "Less", EQUAL: "Equal", GREATER: "Greater"}
_REL_SIGN = {LESS: "<", EQUAL: "=", GREATER: ">"}

_memo: dict = {}


def rel_name(r):
    return _REL_NAME[r]


def rel_sign(r):
    return _REL_SIGN[r]


def compare(sys, a, b):
    """Spec-facing comparison; the order itself is system-uniform."""
    return cmp(a, b)


def cmp(a, b):
    if a is b:
        return EQUAL
    key = (id(a), id(b))
    r = _memo.get(key)
    if r is None:
        r = _cmp_impl(a, b)
        _memo[key] = r
        _memo[(id(b), id(a))] = -r
    return r


def _cmp_impl(a, b):
    if a is ZERO:
        return LESS
    if b is ZERO:
        return GREATER
    if isinstance(a, Sum) or isinstance(b, Sum):
        return _cmp_units(terms.units_of(a), terms.units_of(b))
    return _cmp_principal(a, b)


def _cmp_units(ua, ub):
    for (p, c), (q, d) in zip(ua, ub):
        r = cmp(p, q)
        if r:
            return r
        r = terms._count_cmp(c, d)
        if r:
            return r
    if len(ua) < len(ub):
        return LESS
    if len(ua) > len(ub):
        return GREATER
    return EQUAL


def _cmp_principal(a, b):
    if a is b:
        return EQUAL
    pa, pb = isinstance(a, Psi), isinstance(b, Psi)
    if pa and pb:
        if _psi_less(a, b):
            return LESS
        if _psi_less(b, a):
            return GREATER
        raise InvalidTerm(
            f"incomparable psi terms: {terms.render(a)} vs {terms.render(b)}"
        )
    if pa:
        if isinstance(b, Veblen):
            return -_veblen_vs_atom(b, a)
        if isinstance(b, ThetaTilde):
            return LESS
        return _psi_vs_atom(a, b)
    if pb:
        return -_cmp_principal(b, a)
    if isinstance(a, Veblen):
        if isinstance(b, Veblen):
            return _cmp_veblen(a, b)
        return _veblen_vs_atom(a, b)
    if isinstance(b, Veblen):
        return -_veblen_vs_atom(b, a)
    if isinstance(a, ThetaTilde):
        if isinstance(b, ThetaTilde):
            return _cmp_tt(a, b)
        return GREATER
    if isinstance(b, ThetaTilde):
        return LESS
    return _cmp_atoms(a, b)


def _cmp_veblen(a, b):
    r = cmp(a.sub, b.sub)
    if r == EQUAL:
        return cmp(a.arg, b.arg)
    if r == LESS:
        return LESS if cmp(a.arg, b) < 0 else GREATER
    return LESS if cmp(a, b.arg) <= 0 else GREATER


def _cmp_tt(a, b):
    # same fixed-point scheme as Veblen, over the Lambda-exponential hierarchy
    r = cmp(a.sub, b.sub)
    if r == EQUAL:
        return cmp(a.arg, b.arg)
    if r == LESS:
        return LESS if cmp(a.arg, b) < 0 else GREATER
    return LESS if cmp(a, b.arg) <= 0 else GREATER


def _veblen_vs_atom(v, q):
    # q is closed under phi; phi_b(x) < q iff both b and x are below q
    if cmp(v.sub, q) < 0 and cmp(v.arg, q) < 0:
        return LESS
    return GREATER


def _psi_vs_atom(u, q):
    r = cmp(u.sub, q)
    if r <= 0:
        return LESS
    if isinstance(q, Const):
        return GREATER
    # q is alpha+/alpha-dagger/I[rho]: q sits below the collapse iff its base
    # material is hull-available below u's argument (the case-4 pattern)
    return GREATER if hull.in_hull(q.base, u.arg, u) else LESS


_CONST_RANK = {"Omega": 0, "BigS": 1, "BigK": 2, "BigI": 3}


def _cmp_atoms(a, b):
    ca, cb = isinstance(a, Const), isinstance(b, Const)
    if ca and cb:
        ra, rb = _CONST_RANK[a.name], _CONST_RANK[b.name]
        return (ra > rb) - (ra < rb)
    if ca:
        return -_atom_vs_const(b, a)
    if cb:
        return _atom_vs_const(a, b)
    if type(a) is type(b):
        return cmp(a.base, b.base)
    if isinstance(a, Dagger) and isinstance(b, IOf):
        return _dagger_vs_iof(a, b)
    if isinstance(a, IOf) and isinstance(b, Dagger):
        return -_dagger_vs_iof(b, a)
    raise InvalidTerm(
        f"incomparable atoms: {terms.render(a)} vs {terms.render(b)}"
    )


def _atom_vs_const(a, c):
    # a is NextReg / Dagger / IOf
    if c is OMEGA:
        return GREATER
    if c is I_CONST:
        if isinstance(a, NextReg):
            raise InvalidTerm("next-regular term compared against I")
        return LESS
    if isinstance(a, NextReg):
        # alpha+ stays below S (hence below K) exactly when alpha < S
        return LESS if cmp(a.base, S_CONST) < 0 else GREATER
    raise InvalidTerm(
        f"incomparable atoms: {terms.render(a)} vs {terms.render(c)}"
    )


def _dagger_vs_iof(d, i):
    # alpha-dagger against I[rho]
    rho = i.base
    if cmp(d, rho) < 0:
        return LESS
    if cmp(d.base, rho) < 0:
        # rho sits inside the window (alpha, alpha-dagger): the whole
        # rho-world, I[rho] included, is swallowed by it
        return GREATER
    return LESS if cmp(d.base, i) < 0 else GREATER


# ---------------------------------------------------------------------------
# the four-case psi split


def _idx_terms(index):
    if index is None:
        return []
    if isinstance(index, IdxOrd):
        return [index.value]
    if isinstance(index, IdxVec):
        return list(index.entries)
    if isinstance(index, IdxFn):
        return sorted(hull.sc_fn(index.fn), key=terms.length)
    raise InvalidTerm(f"bad psi index {index!r}")


def _all_in_hull(xs, a, t):
    return all(hull.in_hull(x, a, t) for x in xs)


def _psi_less(u, v):
    """u = psi_pi^xi(b) < psi_kappa^nu(a) = v, per the four-case split."""
    pi, xi, b = u.sub, u.index, u.arg
    kappa, nu, a = v.sub, v.index, v.arg
    if cmp(pi, v) <= 0:
        return True
    ab = cmp(b, a)
    if ab < 0 and cmp(u, kappa) < 0 and _all_in_hull([pi, b] + _idx_terms(xi), a, v):
        return True
    if (
        ab == 0
        and pi is kappa
        and _all_in_hull(_idx_terms(xi), a, v)
        and _idx_less(xi, nu)
    ):
        return True
    if ab >= 0 and not _all_in_hull([kappa, a] + _idx_terms(nu), b, u):
        return True
    return False


def _idx_kind(index):
    if index is None:
        return "none"
    if isinstance(index, IdxOrd):
        return "ord"
    if isinstance(index, IdxVec):
        return "vec"
    if isinstance(index, IdxFn):
        return "fn"
    raise InvalidTerm(f"bad psi index {index!r}")


def _idx_less(x, y):
    kx, ky = _idx_kind(x), _idx_kind(y)
    kinds = {kx, ky} - {"none"}
    if not kinds:
        return False
    if kinds == {"ord"}:
        xv = ZERO if x is None else x.value
        yv = ZERO if y is None else y.value
        return cmp(xv, yv) < 0
    if kinds == {"vec"}:
        n = len(x.entries) if kx == "vec" else len(y.entries)
        xs = tuple(x.entries) if kx == "vec" else (ZERO,) * n
        ys = tuple(y.entries) if ky == "vec" else (ZERO,) * n
        if len(xs) != len(ys):
            raise ArityMismatch("vector indexes of different arity")
        # reverse-lexicographic: the highest reflection degree dominates
        for xe, ye in zip(reversed(xs), reversed(ys)):
            r = cmp(xe, ye)
            if r:
                return r < 0
        return False
    if kinds == {"fn"}:
        from . import finitefn

        lam = x.fn.lam if kx == "fn" else y.fn.lam
        xf = x.fn if kx == "fn" else terms.finite_fn([], lam)
        yf = y.fn if ky == "fn" else terms.finite_fn([], lam)
        if xf is yf:
            return False
        return finitefn.lex_less(xf, yf, ZERO)
    raise InvalidTerm(f"mixed psi index kinds: {kx} vs {ky}")


# ---------------------------------------------------------------------------
# pair and vector relations against Lambda-exponent normal forms


def less_pair(pair, alpha, sys=None, lam=K_CONST):
    """(beta, nu) < alpha: some segment of alpha bounds beta with exponent room.

    Direct implementation of the pair clause; less_vec at arity 2 must agree.
    """
    beta, nu = pair
    prefix = ZERO
    for b_exp, coeff in terms.lam_groups(alpha, lam):
        prefix = terms.add(prefix, terms.lam_scaled(b_exp, coeff, lam))
        if cmp(beta, prefix) < 0 and cmp(nu, b_exp) < 0:
            return True
    return False


def less_vec(vec, alpha, n=None, sys=None, lam=K_CONST):
    """(nu_k,...,nu_{N-1}) < alpha, the recursive segment-witness relation."""
    vec = tuple(vec)
    if n is not None and len(vec) != n - 2:
        raise ArityMismatch(f"expected arity {n - 2}, got {len(vec)}")
    return _less_vec(vec, alpha, lam)


def _less_vec(vec, alpha, lam):
    if not vec:
        return True
    prefix = ZERO
    for b_exp, coeff in terms.lam_groups(alpha, lam):
        prefix = terms.add(prefix, terms.lam_scaled(b_exp, coeff, lam))
        if cmp(vec[0], prefix) < 0 and _less_vec(vec[1:], b_exp, lam):
            return True
    return False
