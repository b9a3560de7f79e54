"""Term grammar, structural measures, normal forms, and ordinal arithmetic.

Terms are immutable and hash-consed: every node is built through the factory
functions below, structurally identical terms are the same Python object, and
equality is identity.  All operations are pure; nothing here mutates a term.

A term in Cantor/Lambda normal form is either Zero, a single additive-principal
node, or a Sum of (principal, count) units with strictly decreasing principals.
Counts are plain ints for finite repetition and OrdTerm for transfinite
coefficients (which are only legal inside finite-function values).
"""

from __future__ import annotations

from .errors import (
    InvalidTerm,
    NotPrincipal,
    ParseError,
    SubtractionUnderflow,
    TooDeep,
    ZeroArg,
)

_INTERN: dict = {}


def _intern(key, build):
    node = _INTERN.get(key)
    if node is None:
        node = build()
        _INTERN[key] = node
    return node


class OrdTerm:
    __slots__ = ("_len",)

    def __repr__(self):
        return render(self)


class _Zero(OrdTerm):
    __slots__ = ()


class Const(OrdTerm):
    __slots__ = ("name",)


class Sum(OrdTerm):
    # units: tuple of (principal OrdTerm, count) with strictly decreasing
    # principals; count is int >= 1 or a nonzero OrdTerm.
    __slots__ = ("units",)


class Veblen(OrdTerm):
    __slots__ = ("sub", "arg")


class ThetaTilde(OrdTerm):
    # Iterated Lambda-exponential; sub is an additive-principal iteration count.
    __slots__ = ("sub", "arg")


class Psi(OrdTerm):
    __slots__ = ("sub", "index", "arg")


class NextReg(OrdTerm):
    __slots__ = ("base",)


class Dagger(OrdTerm):
    __slots__ = ("base",)


class IOf(OrdTerm):
    __slots__ = ("base",)


class IdxOrd:
    __slots__ = ("value",)

    def __repr__(self):
        return f"IdxOrd({self.value!r})"


class IdxVec:
    __slots__ = ("entries",)

    def __repr__(self):
        return f"IdxVec{tuple(self.entries)!r}"


class IdxFn:
    __slots__ = ("fn",)

    def __repr__(self):
        return f"IdxFn({self.fn!r})"


class FiniteFn:
    """Finite-support map from index ordinals to theta-tilde normal values.

    entries are (key, value) pairs sorted strictly increasing by key, with no
    zero values; lam is the big constant the value hierarchy is built over
    (K for the stable-segment system, I for the stability system).
    """

    __slots__ = ("entries", "lam")

    def __repr__(self):
        inner = ", ".join(f"{render(k)}: {render(v)}" for k, v in self.entries)
        return "{" + inner + "}"


def _count_key(c):
    return c if isinstance(c, int) else ("t", id(c))


def _mk_zero():
    def build():
        n = _Zero()
        return n

    return _intern(("0",), build)


ZERO = _mk_zero()


def const(name):
    if name not in ("Omega", "BigK", "BigS", "BigI"):
        raise InvalidTerm(f"unknown constant {name}")

    def build():
        n = Const()
        n.name = name
        return n

    return _intern(("C", name), build)


OMEGA = const("Omega")
K_CONST = const("BigK")
S_CONST = const("BigS")
I_CONST = const("BigI")


def _mk_sum(units):
    units = tuple(units)

    def build():
        n = Sum()
        n.units = units
        return n

    key = ("+",) + tuple((id(p), _count_key(c)) for p, c in units)
    return _intern(key, build)


def _mk_veblen(sub, arg):
    def build():
        n = Veblen()
        n.sub = sub
        n.arg = arg
        return n

    return _intern(("V", id(sub), id(arg)), build)


ONE = _mk_veblen(ZERO, ZERO)


def _mk_theta_tilde(sub, arg):
    def build():
        n = ThetaTilde()
        n.sub = sub
        n.arg = arg
        return n

    return _intern(("T", id(sub), id(arg)), build)


def _idx_key(index):
    if index is None:
        return None
    if isinstance(index, IdxOrd):
        return ("o", id(index.value))
    if isinstance(index, IdxVec):
        return ("v",) + tuple(id(e) for e in index.entries)
    if isinstance(index, IdxFn):
        return ("f", id(index.fn))
    raise InvalidTerm(f"bad psi index {index!r}")


def _mk_psi(sub, index, arg):
    def build():
        n = Psi()
        n.sub = sub
        n.index = index
        n.arg = arg
        return n

    return _intern(("P", id(sub), _idx_key(index), id(arg)), build)


def _mk_unary(cls, tag, base):
    def build():
        n = cls()
        n.base = base
        return n

    return _intern((tag, id(base)), build)


def idx_ord(value):
    def build():
        n = IdxOrd()
        n.value = value
        return n

    return _intern(("io", id(value)), build)


def idx_vec(entries):
    entries = tuple(entries)

    def build():
        n = IdxVec()
        n.entries = entries
        return n

    return _intern(("iv",) + tuple(id(e) for e in entries), build)


def idx_fn(fn):
    def build():
        n = IdxFn()
        n.fn = fn
        return n

    return _intern(("if", id(fn)), build)


def _mk_fn(entries, lam):
    entries = tuple(entries)

    def build():
        n = FiniteFn()
        n.entries = entries
        n.lam = lam
        return n

    key = ("F", id(lam)) + tuple((id(k), id(v)) for k, v in entries)
    return _intern(key, build)


EMPTY_FN_K = _mk_fn((), K_CONST)
EMPTY_FN_I = _mk_fn((), I_CONST)


# ---------------------------------------------------------------------------
# basic views


def is_principal(t):
    return not (t is ZERO or isinstance(t, Sum))


def units_of(t):
    """CNF view: list of (principal, count) units, leading first."""
    if t is ZERO:
        return []
    if isinstance(t, Sum):
        return list(t.units)
    return [(t, 1)]


def from_units(units):
    units = [(p, c) for p, c in units if not _count_is_zero(c)]
    if not units:
        return ZERO
    if len(units) == 1 and units[0][1] == 1:
        return units[0][0]
    return _mk_sum(units)


def _count_is_zero(c):
    return c == 0 if isinstance(c, int) else c is ZERO


def count_term(c):
    return nat(c) if isinstance(c, int) else c


def _canon_count(c):
    """Fold finite OrdTerm counts back to ints."""
    if isinstance(c, int):
        return c
    n = as_nat(c)
    return n if n is not None else c


def nat(n):
    if n < 0:
        raise InvalidTerm("negative natural")
    if n == 0:
        return ZERO
    if n == 1:
        return ONE
    return _mk_sum([(ONE, n)])


def as_nat(t):
    """Return int value when t is a finite natural term, else None."""
    if t is ZERO:
        return 0
    if t is ONE:
        return 1
    if isinstance(t, Sum) and len(t.units) == 1:
        p, c = t.units[0]
        if p is ONE and isinstance(c, int):
            return c
    return None


def omega():
    return _mk_veblen(ZERO, ONE)


def length(t):
    try:
        return t._len
    except AttributeError:
        pass
    if t is ZERO or isinstance(t, Const):
        n = 1
    elif isinstance(t, Sum):
        n = 1
        for p, c in t.units:
            n += length(p)
            n += (c - 1) if isinstance(c, int) else length(c)
    elif isinstance(t, (Veblen, ThetaTilde)):
        n = 1 + length(t.sub) + length(t.arg)
    elif isinstance(t, Psi):
        n = 1 + length(t.sub) + length(t.arg) + _idx_len(t.index)
    elif isinstance(t, (NextReg, Dagger, IOf)):
        n = 1 + length(t.base)
    else:
        raise InvalidTerm(f"not a term: {t!r}")
    t._len = n
    return n


def _idx_len(index):
    if index is None:
        return 0
    if isinstance(index, IdxOrd):
        return length(index.value)
    if isinstance(index, IdxVec):
        return sum(length(e) for e in index.entries)
    if isinstance(index, IdxFn):
        return sum(length(k) + length(v) for k, v in index.fn.entries)
    raise InvalidTerm(f"bad psi index {index!r}")


def index_parts(index):
    """Component terms of a psi index, for hulls and support sets."""
    if index is None:
        return []
    if isinstance(index, IdxOrd):
        return [index.value]
    if isinstance(index, IdxVec):
        return list(index.entries)
    if isinstance(index, IdxFn):
        out = []
        for k, v in index.fn.entries:
            out.append(k)
            out.append(v)
        return out
    raise InvalidTerm(f"bad psi index {index!r}")


def iter_subterms(t):
    """Every node of the subterm tree, t first; count terms included."""
    yield t
    if t is ZERO or isinstance(t, Const):
        return
    if isinstance(t, Sum):
        for p, c in t.units:
            yield from iter_subterms(p)
            if not isinstance(c, int):
                yield from iter_subterms(c)
    elif isinstance(t, (Veblen, ThetaTilde)):
        yield from iter_subterms(t.sub)
        yield from iter_subterms(t.arg)
    elif isinstance(t, Psi):
        yield from iter_subterms(t.sub)
        for part in index_parts(t.index):
            yield from iter_subterms(part)
        yield from iter_subterms(t.arg)
    elif isinstance(t, (NextReg, Dagger, IOf)):
        yield from iter_subterms(t.base)


def subterms_below(t, bound, sys=None):
    """All subterms strictly below `bound` (the E_S-style subterm filter)."""
    from . import order

    out = set()
    for s in iter_subterms(t):
        if order.cmp(s, bound) < 0:
            out.add(s)
    return frozenset(out)


def is_critical_atom(t):
    """Additive principal and closed under + and phi (strongly critical)."""
    return isinstance(t, (Psi, Const, NextReg, Dagger, IOf))


# ---------------------------------------------------------------------------
# arithmetic


def _cmp(a, b):
    from . import order

    return order.cmp(a, b)


def _count_cmp(c, d):
    if isinstance(c, int) and isinstance(d, int):
        return (c > d) - (c < d)
    return _cmp(count_term(c), count_term(d))


def _count_add(c, d):
    if isinstance(c, int) and isinstance(d, int):
        return c + d
    return _canon_count(add(count_term(c), count_term(d)))


def _count_nadd(c, d):
    if isinstance(c, int) and isinstance(d, int):
        return c + d
    return _canon_count(natural_sum(count_term(c), count_term(d)))


def _count_sub(c, d):
    if isinstance(c, int) and isinstance(d, int):
        if c < d:
            raise SubtractionUnderflow("count underflow")
        return c - d
    return _canon_count(ord_sub(count_term(c), count_term(d)))


def add(a, b, sys=None):
    """Ordinal addition in normal form: smaller leading parts of a are absorbed."""
    if a is ZERO:
        return b
    if b is ZERO:
        return a
    ua, ub = units_of(a), units_of(b)
    q = ub[0][0]
    keep = []
    for i, (p, c) in enumerate(ua):
        r = _cmp(p, q)
        if r > 0:
            keep.append((p, c))
        elif r == 0:
            merged = (p, _count_add(c, ub[0][1]))
            return from_units(keep + [merged] + ub[1:])
        else:
            break
    return from_units(keep + ub)


def natural_sum(a, b, sys=None):
    """Hessenberg sum: merge all units, sorting principals."""
    units = units_of(a) + units_of(b)
    units.sort(key=_CmpKey, reverse=True)
    out = []
    for p, c in units:
        if out and out[-1][0] is p:
            out[-1] = (p, _count_nadd(out[-1][1], c))
        else:
            out.append((p, c))
    return from_units(out)


class _CmpKey:
    __slots__ = ("unit",)

    def __init__(self, unit):
        self.unit = unit

    def __lt__(self, other):
        return _cmp(self.unit[0], other.unit[0]) < 0


def is_dotted(a, b, sys=None):
    """True iff a + b equals the natural sum (no absorption)."""
    return add(a, b) is natural_sum(a, b)


def ord_sub(a, b):
    """Left subtraction: the d with b + d = a; requires b <= a."""
    if b is ZERO:
        return a
    ua, ub = units_of(a), units_of(b)
    i = 0
    while i < len(ua) and i < len(ub):
        (p, c), (q, d) = ua[i], ub[i]
        if p is not q:
            if _cmp(p, q) < 0:
                raise SubtractionUnderflow("minuend diverges upward")
            return from_units(ua[i:])
        r = _count_cmp(c, d)
        if r < 0:
            raise SubtractionUnderflow("count underflow")
        if r > 0:
            return from_units([(p, _count_sub(c, d))] + ua[i + 1 :])
        i += 1
    if i < len(ub):
        raise SubtractionUnderflow("subtrahend longer")
    return from_units(ua[i:])


def veblen(b, x, sys=None):
    """phi_b(x) in fixed-point-free normal form."""
    if isinstance(x, Veblen) and _cmp(x.sub, b) > 0:
        return x
    if is_critical_atom(x) and _cmp(b, x) < 0:
        return x
    if isinstance(x, ThetaTilde) and _cmp(b, x) < 0 and _tt_is_eps(x):
        return x
    if x is ZERO and is_critical_atom(b):
        return b
    return _mk_veblen(b, x)


def _tt_is_eps(t):
    # theta-tilde terms at iterate level >= omega are epsilon-closed, hence
    # fixed under every phi_b with b below them.
    return _cmp(t.sub, omega()) >= 0


_THETA_BUDGET = 64


def _omega_log(p):
    """e with omega^e = p, for additive principal p."""
    if p is ONE:
        return ZERO
    if isinstance(p, Veblen) and p.sub is ZERO:
        return p.arg
    # epsilon-closed principals are their own logarithm
    return p


def theta(c, a):
    """theta_c(a): the c-th iterate of a |-> omega^a.

    Identities applied: theta_0(a) = a, theta_{omega^e}(a) = phi_e(a),
    theta_{c+d}(a) = theta_c(theta_d(a)).  Composite iteration counts unfold
    right-to-left; more than a small number of unfold steps is refused.
    """
    steps = 0
    for p, cnt in units_of(c):
        if not isinstance(cnt, int):
            raise TooDeep("transfinite unfolding count")
        steps += cnt
        if steps > _THETA_BUDGET:
            raise TooDeep(f"theta unfolding exceeds {_THETA_BUDGET} steps")
    out = a
    for p, cnt in reversed(units_of(c)):
        e = _omega_log(p)
        for _ in range(cnt):
            out = veblen(e, out)
    return out


def theta_tilde(b, x, sys=None):
    """theta~_b(x), kept as an explicit constructor over the system's Lambda."""
    lam = None
    if sys is not None:
        from .systems import lam_of_system

        lam = lam_of_system(sys)
    return _theta_tilde(b, x, lam)


def _theta_tilde(b, x, lam):
    steps = 0
    for p, cnt in units_of(b):
        if not isinstance(cnt, int):
            raise TooDeep("transfinite unfolding count")
        steps += cnt
        if steps > _THETA_BUDGET:
            raise TooDeep(f"theta~ unfolding exceeds {_THETA_BUDGET} steps")
    out = x
    for p, cnt in reversed(units_of(b)):
        for _ in range(cnt):
            out = _tt1(p, out, lam)
    return out


def _tt1(p, x, lam):
    """One application of theta~ at additive-principal iterate level p."""
    if p is ONE:
        if x is ZERO:
            return ONE
        if x is ONE and lam is not None:
            return lam
    if isinstance(x, ThetaTilde) and _cmp(x.sub, p) > 0:
        return x
    return _mk_theta_tilde(p, x)


def _tt_view(z):
    """(b, xi) view of a theta~-shaped principal; None when not shaped."""
    if isinstance(z, ThetaTilde):
        return (z.sub, z.arg)
    if z is ONE:
        return (ONE, ZERO)
    if z is K_CONST or z is I_CONST:
        return (ONE, ONE)
    return None


def theta_tilde_inv(c, z):
    """theta~_{-c}(z): inverse iterate, descending into heads as needed."""
    if c is ZERO:
        return z
    view = _tt_view(z)
    if view is None:
        raise NotPrincipal(f"not a theta~-normal principal: {render(z)}")
    b, xi = view
    if _cmp(b, c) >= 0:
        return _theta_tilde(ord_sub(b, c), xi, _lam_hint(z))
    if xi is ZERO:
        return ZERO
    return theta_tilde_inv(ord_sub(c, b), head(xi))


def _lam_hint(z):
    if z is K_CONST:
        return K_CONST
    if z is I_CONST:
        return I_CONST
    return None


# ---------------------------------------------------------------------------
# theta~-normal-form segments


def _is_lam_unit(p):
    return isinstance(p, ThetaTilde) or p is K_CONST or p is I_CONST


def value_units(x):
    """Units of x grouped for the Lambda-CNF reading: leading theta~-shaped
    units individually, the whole sub-Lambda remainder as one trailing unit."""
    units = units_of(x)
    lead = []
    i = 0
    while i < len(units) and _is_lam_unit(units[i][0]):
        lead.append(units[i])
        i += 1
    rest = from_units(units[i:])
    if rest is not ZERO:
        lead.append((rest, None))  # remainder unit, Lambda^0 coefficient
    return lead


def segments(x):
    """Initial cuts of the theta~ normal form, longest first, down to 0."""
    if x is ZERO:
        raise ZeroArg("segments of 0")
    groups = value_units(x)
    out = []
    for n in range(len(groups), -1, -1):
        units = []
        for p, c in groups[:n]:
            if c is None:
                units.extend(units_of(p))
            else:
                units.append((p, c))
        out.append(from_units(units))
    return out


def head(x):
    """Leading theta~-part (coefficient stripped)."""
    if x is ZERO:
        raise ZeroArg("head of 0")
    p, c = value_units(x)[0]
    return ONE if c is None else p


def tail(x):
    """Trailing theta~-part (coefficient stripped)."""
    if x is ZERO:
        raise ZeroArg("tail of 0")
    p, c = value_units(x)[-1]
    return ONE if c is None else p


# ---------------------------------------------------------------------------
# psi terms and finite functions


def finite_fn(entries, lam):
    """Build a finite function: prune zeros, retag Lambda aliases, sort keys."""
    if lam is not K_CONST and lam is not I_CONST:
        raise InvalidTerm("finite-function Lambda must be K or I")
    cleaned = []
    for k, v in entries:
        v = _retag(v, lam)
        k = _retag(k, lam)
        if v is ZERO:
            continue
        cleaned.append((k, v))
    cleaned.sort(key=lambda kv: _CmpKey((kv[0], 1)))
    for i in range(1, len(cleaned)):
        if cleaned[i - 1][0] is cleaned[i][0]:
            raise InvalidTerm("duplicate finite-function key")
    return _mk_fn(cleaned, lam)


def _retag(t, lam):
    """Rewrite raw theta~_1(1) nodes to the ambient Lambda constant."""
    if t is ZERO or isinstance(t, Const):
        return t
    if isinstance(t, Sum):
        units = [
            (_retag(p, lam), c if isinstance(c, int) else _retag(c, lam))
            for p, c in t.units
        ]
        units.sort(key=_CmpKey, reverse=True)
        out = []
        for p, c in units:
            if out and out[-1][0] is p:
                out[-1] = (p, _count_nadd(out[-1][1], c))
            else:
                out.append((p, c))
        return from_units(out)
    if isinstance(t, ThetaTilde):
        sub, arg = _retag(t.sub, lam), _retag(t.arg, lam)
        if sub is ONE and arg is ONE:
            return lam
        if sub is ONE and arg is ZERO:
            return ONE
        return _mk_theta_tilde(sub, arg)
    if isinstance(t, Veblen):
        return _mk_veblen(_retag(t.sub, lam), _retag(t.arg, lam))
    if isinstance(t, Psi):
        return t
    if isinstance(t, (NextReg, Dagger, IOf)):
        return t
    raise InvalidTerm(f"not a term: {t!r}")


def psi(sub, index, arg):
    """psi_sub^index(arg); canonicalizes empty-ish indexes to None."""
    index = _canon_index(sub, index)
    return _mk_psi(sub, index, arg)


def _canon_index(sub, index):
    if index is None:
        return None
    if isinstance(index, IdxOrd):
        return None if index.value is ZERO else index
    if isinstance(index, IdxVec):
        if all(e is ZERO for e in index.entries):
            return None
        return index
    if isinstance(index, IdxFn):
        fn = index.fn
        if not fn.entries:
            return None
        return idx_fn(fn)
    raise InvalidTerm(f"bad psi index {index!r}")


def infer_lam(sub):
    """Which big constant a psi subscript's finite functions live under."""
    t = sub
    while isinstance(t, Psi):
        t = t.sub
    if t is I_CONST or isinstance(t, (Dagger, IOf)):
        return I_CONST
    return K_CONST


def next_reg(base):
    """alpha^+; reg+(S) is the K constant itself."""
    if base is S_CONST:
        return K_CONST
    return _mk_unary(NextReg, "R", base)


def dagger(base):
    """alpha^dagger; arguments at or below Omega share the least stable."""
    if _cmp(base, OMEGA) <= 0:
        base = OMEGA
    return _mk_unary(Dagger, "D", base)


def i_of(base):
    return _mk_unary(IOf, "I", base)


# ---------------------------------------------------------------------------
# Lambda-power encoding over phi (used by the vector relations)


def lam_scaled(beta, coeff, lam):
    """Lambda^beta * coeff as a phi-encoded term (Lambda = omega^lam)."""
    if _count_is_zero(coeff):
        return ZERO
    if beta is ZERO:
        return count_term(coeff)
    e = _lam_mul_exp(beta, lam)
    out_units = []
    for p, c in units_of(count_term(coeff)):
        d = _omega_log(p)
        out_units.append((veblen(ZERO, add(e, d)), c))
    return from_units(out_units)


def _lam_mul_exp(beta, lam):
    """lam * beta for the exponent arithmetic (lam = omega^lam, a cardinal)."""
    units = []
    for p, c in units_of(beta):
        units.append((veblen(ZERO, add(lam, _omega_log(p))), c))
    # beta's finite tail n contributes lam * n = lam repeated n times
    out = ZERO
    for p, c in units:
        out = add(out, from_units([(p, c)]))
    return out


def lam_groups(alpha, lam):
    """Lambda-CNF view of alpha: list of (beta_i, coeff_i) with beta_i the
    Lambda-exponent, decreasing; coefficients are ordinary terms < Lambda."""
    groups = []
    for p, c in units_of(alpha):
        e = _omega_log(p)
        beta_units, rest_units = [], []
        for q, d in units_of(e):
            f = _omega_log(q)
            if _cmp(f, lam) >= 0:
                beta_units.append((veblen(ZERO, ord_sub(f, lam)), d))
            else:
                rest_units.append((q, d))
        beta = from_units(beta_units)
        coeff = from_units([(veblen(ZERO, from_units(rest_units)), c)]) \
            if rest_units else from_units([(ONE, c)])
        if groups and groups[-1][0] is beta:
            prev_beta, prev_coeff = groups[-1]
            groups[-1] = (prev_beta, add(prev_coeff, coeff))
        else:
            groups.append((beta, coeff))
    return groups


# ---------------------------------------------------------------------------
# parsing


_CONST_NAMES = {"Om": OMEGA, "K": K_CONST, "S": S_CONST, "I": I_CONST}


class _Lexer:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self._skip_ws()
        if self.pos >= len(self.text):
            return ("eof", None, self.pos)
        ch = self.text[self.pos]
        if ch.isdigit():
            j = self.pos
            while j < len(self.text) and self.text[j].isdigit():
                j += 1
            return ("num", int(self.text[self.pos : j]), self.pos)
        if ch.isalpha():
            j = self.pos
            while j < len(self.text) and self.text[j].isalnum():
                j += 1
            word = self.text[self.pos : j]
            if word == "t" and j < len(self.text) and self.text[j] == "~":
                return ("t~", "t~", self.pos)
            if word == "reg" and j < len(self.text) and self.text[j] == "+":
                return ("reg+", "reg+", self.pos)
            return ("name", word, self.pos)
        return (ch, ch, self.pos)

    def take(self, kind=None):
        tok = self.peek()
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[0]!r}", tok[2] + 1)
        if tok[0] == "eof":
            return tok
        if tok[0] == "num":
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
        elif tok[0] == "name":
            self.pos += len(tok[1])
        elif tok[0] in ("t~", "reg+"):
            self.pos += len(tok[1])
        else:
            self.pos += 1
        return tok


def parse(text):
    """Parse the ASCII term grammar; raises ParseError with a column."""
    lx = _Lexer(text)
    t = _parse_expr(lx)
    tok = lx.peek()
    if tok[0] != "eof":
        raise ParseError(f"trailing input {tok[1]!r}", tok[2] + 1)
    return t


def _parse_expr(lx):
    t = _parse_product(lx)
    while lx.peek()[0] == "+":
        lx.take()
        t = add(t, _parse_product(lx))
    return t


def _parse_product(lx):
    t = _parse_atom(lx)
    if lx.peek()[0] == "*":
        lx.take()
        tok = lx.peek()
        if tok[0] == "num":
            lx.take()
            cnt = tok[1]
        else:
            cnt = _canon_count(_parse_atom(lx))
        if _count_is_zero(cnt) or t is ZERO:
            return ZERO
        if not is_principal(t):
            raise ParseError("count on a non-principal term", tok[2] + 1)
        if cnt == 1:
            return t
        return from_units([(t, cnt)])
    return t


def _parse_args(lx, n):
    lx.take("(")
    out = [_parse_expr(lx)]
    for _ in range(n - 1):
        lx.take(",")
        out.append(_parse_expr(lx))
    lx.take(")")
    return out


def _parse_atom(lx):
    tok = lx.peek()
    kind, val, pos = tok
    if kind == "num":
        lx.take()
        return nat(val)
    if kind == "(":
        lx.take()
        t = _parse_expr(lx)
        lx.take(")")
        return t
    if kind == "t~":
        lx.take()
        b, x = _parse_args(lx, 2)
        return _theta_tilde(b, x, None)
    if kind == "reg+":
        lx.take()
        (a,) = _parse_args(lx, 1)
        return next_reg(a)
    if kind == "name":
        lx.take()
        if val == "phi":
            b, x = _parse_args(lx, 2)
            return veblen(b, x)
        if val == "th":
            c, a = _parse_args(lx, 2)
            return theta(c, a)
        if val == "psi":
            return _parse_psi(lx)
        if val == "dag":
            (a,) = _parse_args(lx, 1)
            return dagger(a)
        if val == "I":
            if lx.peek()[0] == "[":
                lx.take()
                r = _parse_expr(lx)
                lx.take("]")
                return i_of(r)
            return I_CONST
        if val in _CONST_NAMES:
            return _CONST_NAMES[val]
        raise ParseError(f"unknown name {val!r}", pos + 1)
    raise ParseError(f"unexpected {val!r}", pos + 1)


def _parse_psi(lx):
    lx.take("(")
    sub = _parse_expr(lx)
    index = None
    if lx.peek()[0] == ",":
        lx.take()
        tok = lx.peek()
        if tok[0] == "[":
            lx.take()
            entries = [_parse_expr(lx)]
            while lx.peek()[0] == ",":
                lx.take()
                entries.append(_parse_expr(lx))
            lx.take("]")
            index = idx_vec(entries)
        elif tok[0] == "{":
            lx.take()
            pairs = []
            if lx.peek()[0] != "}":
                pairs.append(_parse_fn_pair(lx))
                while lx.peek()[0] == ",":
                    lx.take()
                    pairs.append(_parse_fn_pair(lx))
            lx.take("}")
            index = ("fn-pairs", pairs)
        else:
            index = idx_ord(_parse_expr(lx))
    lx.take(";")
    arg = _parse_expr(lx)
    lx.take(")")
    if isinstance(index, tuple):
        fn = finite_fn(index[1], infer_lam(sub))
        index = idx_fn(fn)
    return psi(sub, index, arg)


def _parse_fn_pair(lx):
    k = _parse_expr(lx)
    lx.take(":")
    v = _parse_expr(lx)
    return (k, v)


# ---------------------------------------------------------------------------
# rendering


_UNI = {"Omega": "Ω", "BigK": "𝕂", "BigS": "𝕊", "BigI": "𝕀"}
_ASC = {"Omega": "Om", "BigK": "K", "BigS": "S", "BigI": "I"}


def render(t, style="ascii"):
    if style == "ascii":
        return _render_ascii(t)
    if style == "unicode":
        return _render_uni(t)
    raise InvalidTerm(f"unknown render style {style!r}")


def _render_count(c):
    if isinstance(c, int):
        return str(c)
    n = as_nat(c)
    if n is not None:
        return str(n)
    if is_principal(c):
        return _render_ascii(c)
    return "(" + _render_ascii(c) + ")"


def _render_ascii(t):
    if t is ZERO:
        return "0"
    if isinstance(t, Const):
        return _ASC[t.name]
    if isinstance(t, Sum):
        n = as_nat(t)
        if n is not None:
            return str(n)
        parts = []
        for p, c in t.units:
            if p is ONE and isinstance(c, int):
                parts.append(str(c))
            elif c == 1:
                parts.append(_render_ascii(p))
            else:
                parts.append(f"{_render_ascii(p)} * {_render_count(c)}")
        return " + ".join(parts)
    if t is ONE:
        return "1"
    if isinstance(t, Veblen):
        return f"phi({_render_ascii(t.sub)}, {_render_ascii(t.arg)})"
    if isinstance(t, ThetaTilde):
        return f"t~({_render_ascii(t.sub)}, {_render_ascii(t.arg)})"
    if isinstance(t, Psi):
        sub = _render_ascii(t.sub)
        arg = _render_ascii(t.arg)
        if t.index is None:
            return f"psi({sub}; {arg})"
        if isinstance(t.index, IdxOrd):
            return f"psi({sub}, {_render_ascii(t.index.value)}; {arg})"
        if isinstance(t.index, IdxVec):
            inner = ", ".join(_render_ascii(e) for e in t.index.entries)
            return f"psi({sub}, [{inner}]; {arg})"
        inner = ", ".join(
            f"{_render_ascii(k)}: {_render_ascii(v)}" for k, v in t.index.fn.entries
        )
        return f"psi({sub}, {{{inner}}}; {arg})"
    if isinstance(t, NextReg):
        return f"reg+({_render_ascii(t.base)})"
    if isinstance(t, Dagger):
        return f"dag({_render_ascii(t.base)})"
    if isinstance(t, IOf):
        return f"I[{_render_ascii(t.base)}]"
    raise InvalidTerm(f"not a term: {t!r}")


def _render_uni(t):
    if t is ZERO:
        return "0"
    if isinstance(t, Const):
        return _UNI[t.name]
    if isinstance(t, Sum):
        n = as_nat(t)
        if n is not None:
            return str(n)
        parts = []
        for p, c in t.units:
            if p is ONE and isinstance(c, int):
                parts.append(str(c))
            elif c == 1:
                parts.append(_render_uni(p))
            else:
                cs = str(c) if isinstance(c, int) else _render_uni(c)
                parts.append(f"{_render_uni(p)}·{cs}")
        return " + ".join(parts)
    if t is ONE:
        return "1"
    if isinstance(t, Veblen):
        return f"φ_{{{_render_uni(t.sub)}}}({_render_uni(t.arg)})"
    if isinstance(t, ThetaTilde):
        return f"θ~_{{{_render_uni(t.sub)}}}({_render_uni(t.arg)})"
    if isinstance(t, Psi):
        sub = _render_uni(t.sub)
        arg = _render_uni(t.arg)
        if t.index is None:
            return f"ψ_{{{sub}}}({arg})"
        if isinstance(t.index, IdxOrd):
            return f"ψ_{{{sub}}}^{{{_render_uni(t.index.value)}}}({arg})"
        if isinstance(t.index, IdxVec):
            inner = ",".join(_render_uni(e) for e in t.index.entries)
            return f"ψ_{{{sub}}}^{{({inner})}}({arg})"
        inner = ", ".join(
            f"{_render_uni(k)}↦{_render_uni(v)}" for k, v in t.index.fn.entries
        )
        return f"ψ_{{{sub}}}^{{{{{inner}}}}}({arg})"
    if isinstance(t, NextReg):
        return f"({_render_uni(t.base)})⁺"
    if isinstance(t, Dagger):
        return f"({_render_uni(t.base)})†"
    if isinstance(t, IOf):
        return f"𝕀[{_render_uni(t.base)}]"
    raise InvalidTerm(f"not a term: {t!r}")
