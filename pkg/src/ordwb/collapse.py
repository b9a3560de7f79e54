"""Mostowski collapsing t[rho/S], its domain M_rho, and the inverse.

The map relabels hull members order-isomorphically: identity below the stable
constant, S itself to rho, the next regular (resp. I and daggers) to their
rho-images, and recursion through +, phi, and psi everywhere else.
"""

from __future__ import annotations

from . import terms
from . import order
from . import hull
from . import systems
from .errors import BadRho, OutOfDomain, NotInImage
from .terms import (
    Const,
    Dagger,
    IOf,
    IdxFn,
    I_CONST,
    K_CONST,
    NextReg,
    Psi,
    S_CONST,
    Sum,
    ThetaTilde,
    Veblen,
    ZERO,
)

cmp = order.cmp


def _stable_of(rho, sys):
    """The stable constant rho collapses (S for pi11, rho's SSt root for stab)."""
    if not isinstance(rho, Psi):
        raise BadRho("rho must be a collapse term")
    root = systems.psi_root(rho)
    if sys.kind == "pi11":
        if root is not S_CONST:
            raise BadRho("rho must sit below S")
        return S_CONST
    if sys.kind == "stab":
        if not isinstance(root, Dagger):
            raise BadRho("rho must sit below a successor stable")
        return root
    raise BadRho(f"{sys} has no collapsing map")


def in_domain(t, rho, sys):
    """t in M_rho = H_{p0(rho)}(rho)."""
    _stable_of(rho, sys)
    return hull.in_hull(t, systems.p0(rho), rho)


def collapse(t, rho, sys):
    """t[rho/S]; raises OutOfDomain when t is not an M_rho member."""
    stable = _stable_of(rho, sys)
    if not in_domain(t, rho, sys):
        raise OutOfDomain(f"{terms.render(t)} is not in M_rho for rho={terms.render(rho)}")
    memo = {}
    return _col(t, rho, stable, sys, memo)


def _col(t, rho, stable, sys, memo):
    got = memo.get(id(t))
    if got is not None:
        return got
    out = _col_raw(t, rho, stable, sys, memo)
    memo[id(t)] = out
    return out


def _col_raw(t, rho, stable, sys, memo):
    if t is stable:
        return rho
    if cmp(t, stable) < 0:
        return t
    if isinstance(t, Sum):
        units = [
            (
                _col(p, rho, stable, sys, memo),
                c if isinstance(c, int) else _col(c, rho, stable, sys, memo),
            )
            for p, c in t.units
        ]
        return terms.from_units(units)
    if isinstance(t, Veblen):
        return terms.veblen(
            _col(t.sub, rho, stable, sys, memo), _col(t.arg, rho, stable, sys, memo)
        )
    if isinstance(t, ThetaTilde):
        raise OutOfDomain("theta~ values above the stable are not collapsible")
    if t is K_CONST and sys.kind == "pi11":
        return terms.next_reg(rho)
    if t is I_CONST and sys.kind == "stab":
        return terms.i_of(rho)
    if isinstance(t, NextReg):
        return terms.next_reg(_col(t.base, rho, stable, sys, memo))
    if isinstance(t, Dagger):
        return terms.dagger(_col(t.base, rho, stable, sys, memo))
    if isinstance(t, IOf):
        return terms.i_of(_col(t.base, rho, stable, sys, memo))
    if isinstance(t, Psi):
        index = t.index
        if isinstance(index, IdxFn):
            fn = index.fn
            entries = [
                (
                    _col(k, rho, stable, sys, memo),
                    _col(v, rho, stable, sys, memo),
                )
                for k, v in fn.entries
            ]
            index = terms.idx_fn(terms.finite_fn(entries, fn.lam))
        return terms.psi(
            _col(t.sub, rho, stable, sys, memo),
            index,
            _col(t.arg, rho, stable, sys, memo),
        )
    raise OutOfDomain(f"no collapse clause reaches {terms.render(t)}")


def uncollapse(t, rho, sys):
    """Inverse of collapse on its image; NotInImage off the image."""
    stable = _stable_of(rho, sys)
    cand = _unc(t, rho, stable, sys)
    try:
        ok = in_domain(cand, rho, sys) and collapse(cand, rho, sys) is t
    except OutOfDomain:
        ok = False
    if not ok:
        raise NotInImage(f"{terms.render(t)} is not a [rho/S]-image")
    return cand


def _unc(t, rho, stable, sys):
    if t is rho:
        return stable
    if cmp(t, rho) < 0:
        return t
    if isinstance(t, Sum):
        units = [
            (_unc(p, rho, stable, sys), c if isinstance(c, int) else _unc(c, rho, stable, sys))
            for p, c in t.units
        ]
        return terms.from_units(units)
    if isinstance(t, Veblen):
        return terms.veblen(_unc(t.sub, rho, stable, sys), _unc(t.arg, rho, stable, sys))
    if isinstance(t, NextReg):
        if t.base is rho and sys.kind == "pi11":
            return K_CONST
        return terms.next_reg(_unc(t.base, rho, stable, sys))
    if isinstance(t, IOf):
        if t.base is rho and sys.kind == "stab":
            return I_CONST
        return terms.i_of(_unc(t.base, rho, stable, sys))
    if isinstance(t, Dagger):
        return terms.dagger(_unc(t.base, rho, stable, sys))
    if isinstance(t, Psi):
        index = t.index
        if isinstance(index, IdxFn):
            fn = index.fn
            entries = [
                (_unc(k, rho, stable, sys), _unc(v, rho, stable, sys))
                for k, v in fn.entries
            ]
            index = terms.idx_fn(terms.finite_fn(entries, fn.lam))
        return terms.psi(
            _unc(t.sub, rho, stable, sys), index, _unc(t.arg, rho, stable, sys)
        )
    raise NotInImage(f"{terms.render(t)} is not a [rho/S]-image")
