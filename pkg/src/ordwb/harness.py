"""Empirical verification suites: bounded-universe order laws, descent with
fuel, syntactic closures, dual-route cross-checks, and the milestone ladders.

Every suite is deterministic given (seed, budget), mutates nothing shared,
and reports counterexamples instead of crashing.  A Report with an empty
failure list is a pass.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

from . import terms
from . import order
from . import hull
from . import finitefn
from . import systems
from . import collapse as collapse_mod
from .errors import OrdError
from .terms import OMEGA, ONE, ZERO, K_CONST, S_CONST
from .systems import BH, PI3, PI11, STAB, Budget

cmp = order.cmp


@dataclass(frozen=True)
class Report:
    suite: str
    universe_size: int
    failures: tuple
    elapsed_ms: int
    extra: str = ""

    @property
    def ok(self):
        return not self.failures

    def lines(self):
        head = f"{self.suite}, {self.universe_size}, {len(self.failures)}, {self.elapsed_ms}ms"
        if self.extra:
            head += f", {self.extra}"
        out = [head]
        for f in self.failures:
            out.append("  counterexample: " + " | ".join(str(x) for x in f))
        return out

    def to_dict(self):
        return {
            "suite": self.suite,
            "size": self.universe_size,
            "failures": [list(map(str, f)) for f in self.failures],
            "elapsed_ms": self.elapsed_ms,
            "extra": self.extra,
        }


def _report(suite, size, failures, t0, extra=""):
    return Report(
        suite, size, tuple(failures), int((time.time() - t0) * 1000), extra
    )


# ---------------------------------------------------------------------------
# syntactic closures


def closure_c(alpha, gens, sys, budget):
    """C^alpha(X): constants and X-cut closed under +, phi, and collapses
    with subscripts above alpha, within the length budget."""
    seeds = set(systems.hull_constants(sys))
    seeds.add(ZERO)
    seeds.update(g for g in gens if cmp(g, alpha) < 0)

    def psi_ok(sub, arg):
        return cmp(sub, alpha) > 0

    return hull.closure_engine(seeds, sys, budget, psi_ok)


# ---------------------------------------------------------------------------
# order laws


def check_linear_order(sys, budget, rng=None):
    t0 = time.time()
    rng = rng or random.Random(budget.seed)
    U = systems.enumerate_terms(sys, budget)
    n = len(U)
    failures = []
    R = {}
    for i in range(n):
        for j in range(n):
            try:
                R[(i, j)] = cmp(U[i], U[j])
            except OrdError as e:
                failures.append((terms.render(U[i]), terms.render(U[j]), str(e)))
    for i in range(n):
        if R.get((i, i)) != 0:
            failures.append((terms.render(U[i]), "irreflexivity"))
        for j in range(i + 1, n):
            rij, rji = R.get((i, j)), R.get((j, i))
            if rij is None or rji is None:
                continue
            if rij != -rji:
                failures.append((terms.render(U[i]), terms.render(U[j]), "asymmetry"))
            if rij == 0:
                failures.append((terms.render(U[i]), terms.render(U[j]), "distinct-equal"))
            if rij != -1:
                failures.append((terms.render(U[i]), terms.render(U[j]), "stream-order"))
    if n <= 2000 and n**3 <= 20_000_000:
        triples = itertools.combinations(range(n), 3)
    else:
        triples = (
            tuple(sorted(rng.sample(range(n), 3))) for _ in range(100_000)
        )
    for i, j, k in triples:
        if R.get((i, j)) == -1 and R.get((j, k)) == -1 and R.get((i, k)) != -1:
            failures.append(
                (terms.render(U[i]), terms.render(U[j]), terms.render(U[k]), "transitivity")
            )
    return _report(f"linear-order[{sys}]", n, failures, t0)


def check_psi_monotone(budget):
    """psi_Omega order-preservation on valid arguments over the BH universe."""
    t0 = time.time()
    U = systems.enumerate_terms(BH, budget)
    failures = []
    pairs = 0
    psis = [t for t in U if isinstance(t, terms.Psi) and t.sub is OMEGA]
    for u in psis:
        for v in psis:
            pairs += 1
            if (cmp(u.arg, v.arg) < 0) != (cmp(u, v) < 0):
                failures.append((terms.render(u), terms.render(v), "monotonicity"))
    return _report("psi-monotone[bh]", len(psis), failures, t0, f"pairs={pairs}")


# ---------------------------------------------------------------------------
# descent


def _max_subterm_below(t):
    best = None
    for s in terms.iter_subterms(t):
        if s is t:
            continue
        if cmp(s, t) < 0 and (best is None or cmp(s, best) > 0):
            best = s
    return best


def check_descent(sys, start, stepper, fuel, budget=None, rng=None):
    """One descent experiment: every chain must strictly decrease and die
    within fuel.  Fuel exhaustion is a reported finding, not a crash."""
    t0 = time.time()
    budget = budget or Budget()
    rng = rng or random.Random(budget.seed)
    failures = []
    if stepper == "max-subterm":
        nxt = lambda cur: _max_subterm_below(cur)
    elif stepper == "random-universe":
        keyed = systems.enumerate_terms(sys, budget)  # compare-sorted

        def nxt(cur):
            lo = 0
            hi = len(keyed)
            # position of cur in the sorted universe by comparison
            while lo < hi:
                mid = (lo + hi) // 2
                if cmp(keyed[mid], cur) < 0:
                    lo = mid + 1
                else:
                    hi = mid
            if lo == 0:
                return None
            return keyed[rng.randrange(lo)]

    else:
        raise OrdError(f"unknown stepper {stepper!r}")
    steps = 0
    cur = start
    while cur is not ZERO:
        if steps >= fuel:
            failures.append((terms.render(start), f"fuel-exhausted@{steps}"))
            break
        n = nxt(cur)
        if n is None:
            break
        if cmp(n, cur) >= 0:
            failures.append((terms.render(cur), terms.render(n), "non-decreasing"))
            break
        cur = n
        steps += 1
    return _report(f"descent[{sys}:{stepper}]", 1, failures, t0, f"chain={steps}")


def check_descent_all(sys, budget, trials=1000, stepper="random-universe"):
    """Descent from every universe start, `trials` random chains each."""
    t0 = time.time()
    U = systems.enumerate_terms(sys, budget)
    rng = random.Random(budget.seed)
    failures = []
    longest = 0
    for start in U:
        for _ in range(trials):
            rep = check_descent(sys, start, stepper, budget.fuel, budget, rng)
            failures.extend(rep.failures)
            longest = max(longest, int(rep.extra.split("=")[1]))
    return _report(
        f"descent-all[{sys}]", len(U), failures, t0, f"max-chain={longest}"
    )


# ---------------------------------------------------------------------------
# dual-route cross-checks


def check_hull_equiv(budget):
    """in_hull versus the forward closure oracle over every (t, a, delta)
    triple of the BH and Pi3 universes."""
    t0 = time.time()
    failures = []
    total = 0
    for sys in (BH, PI3):
        U = systems.enumerate_terms(sys, budget)
        for a in U:
            for d in U:
                gens = [x for x in U if cmp(x, d) < 0]
                cl = hull.hull_closure(gens, a, sys, budget)
                for t in U:
                    total += 1
                    if hull.in_hull(t, a, d) != (t in cl):
                        failures.append(
                            (str(sys), terms.render(t), terms.render(a), terms.render(d))
                        )
    return _report("hull-equiv[bh,pi3]", total, failures, t0)


def sample_rhos(count=20):
    """Valid collapses of S with positive hull room, smallest first."""
    lam = K_CONST
    keys = [ZERO, ONE, terms.nat(2), OMEGA, terms.veblen(ZERO, ONE)]
    vals = [
        K_CONST,
        terms.from_units([(K_CONST, 2)]),
        terms.from_units([(K_CONST, 3)]),
        terms._theta_tilde(ONE, OMEGA, lam),
        terms._theta_tilde(ONE, terms.nat(2), lam),
        terms.add(terms._theta_tilde(ONE, OMEGA, lam), K_CONST),
    ]
    args = [ONE, terms.nat(2), OMEGA, terms.add(OMEGA, ONE)]
    out = []
    for a in args:
        for k in keys:
            for v in vals:
                try:
                    rho = terms.psi(S_CONST, terms.idx_fn(terms.finite_fn([(k, v)], lam)), a)
                except OrdError:
                    continue
                if systems.validate(PI11, rho).ok:
                    out.append(rho)
    out.sort(key=lambda t: (terms.length(t), terms.render(t)))
    return out[:count]


def domain_pool(rho, budget):
    """In-domain terms for collapse experiments: universe members plus
    K-headed composites."""
    U = systems.enumerate_terms(PI11, Budget(maxlen=max(4, budget.maxlen)))
    pool = list(U)
    extras = []
    for x in U[: len(U) // 2]:
        extras.append(terms.add(K_CONST, x))
        extras.append(terms.psi(K_CONST, None, x))
        extras.append(terms.add(terms.psi(K_CONST, None, x), x))
    for x in extras:
        if systems.validate(PI11, x).ok:
            pool.append(x)
    seen = set()
    out = []
    for t in pool:
        if t not in seen and collapse_mod.in_domain(t, rho, PI11):
            seen.add(t)
            out.append(t)
    return out


def check_collapse_iso(budget, rho_count=20, pairs=200):
    """Order isomorphism, image validity, and inverse round trip of the
    Mostowski collapse for sampled rho and in-domain pairs."""
    t0 = time.time()
    rng = random.Random(budget.seed)
    failures = []
    rhos = sample_rhos(rho_count)
    total = 0
    for rho in rhos:
        dom = domain_pool(rho, budget)
        if len(dom) < 2:
            failures.append((terms.render(rho), "empty-domain"))
            continue
        images = {}
        for t in dom:
            try:
                img = collapse_mod.collapse(t, rho, PI11)
            except OrdError as e:
                failures.append((terms.render(rho), terms.render(t), str(e)))
                continue
            images[t] = img
            if not systems.validate(PI11, img).ok:
                failures.append(
                    (terms.render(rho), terms.render(t), terms.render(img), "invalid-image")
                )
            back = collapse_mod.uncollapse(img, rho, PI11)
            if back is not t:
                failures.append(
                    (terms.render(rho), terms.render(t), "roundtrip")
                )
        for _ in range(pairs):
            a, b = rng.choice(dom), rng.choice(dom)
            if a not in images or b not in images:
                continue
            total += 1
            if cmp(a, b) != cmp(images[a], images[b]):
                failures.append(
                    (terms.render(rho), terms.render(a), terms.render(b), "order")
                )
    return _report("collapse-iso[pi11]", len(rhos), failures, t0, f"pairs={total}")


def _stepdown_pools():
    lam = K_CONST
    omega_t = terms.veblen(ZERO, ONE)
    keys = [ZERO, ONE, terms.nat(2), terms.nat(3), omega_t, OMEGA]
    alphas = [
        ZERO,
        K_CONST,
        terms.from_units([(K_CONST, 2)]),
        terms._theta_tilde(ONE, terms.nat(2), lam),
        terms._theta_tilde(ONE, omega_t, lam),
        terms._theta_tilde(omega_t, ONE, lam),
    ]
    vals = [terms.add(a, K_CONST) for a in alphas]
    return keys, vals


def special_family():
    """Exhaustive special finite functions with support size <= 2 over the
    6-element key/value pools."""
    lam = K_CONST
    keys, vals = _stepdown_pools()
    fams = []
    for k, v in itertools.product(keys, vals):
        fams.append(terms.finite_fn([(k, v)], lam))
    for (k1, k2) in itertools.combinations(keys, 2):
        for v1, v2 in itertools.product(vals, vals):
            fams.append(terms.finite_fn([(k1, v1), (k2, v2)], lam))
    out = []
    for f in fams:
        if f.entries and finitefn.is_special(f) and finitefn.is_irreducible(f):
            out.append(f)
    return out


def check_stepdown_props(budget):
    """Both stepping-down laws, brute-forced over the special family."""
    t0 = time.time()
    keys, _ = _stepdown_pools()
    a_pool = [terms.nat(2), terms.veblen(ZERO, ONE), OMEGA]
    small = [ZERO, ONE, terms.nat(2)]
    fams = special_family()
    failures = []
    instances = 0
    for g in fams:
        cmax = finitefn.supp(g)[-1]
        cuts = [b for b in keys if cmp(b, cmax) < 0]
        for a in a_pool:
            for b in cuts:
                h = finitefn.step_down(g, b, a)
                if not finitefn.is_special(h):
                    failures.append((str(g), terms.render(b), "not-special"))
                if finitefn.restrict_below(h, b) is not finitefn.restrict_below(g, b):
                    failures.append((str(g), terms.render(b), "prefix"))
                # law 1: nested stepping stays pointwise under the primed one
                for e in cuts:
                    if not (cmp(b, e) < 0 and cmp(e, cmax) < 0):
                        continue
                    for a0 in small:
                        for a1 in small:
                            if cmp(a0, a) >= 0 or cmp(a1, a) >= 0:
                                continue
                            instances += 1
                            lhs = finitefn.step_down(
                                finitefn.step_down(g, e, a0), b, a1
                            )
                            rhs = finitefn.prime(finitefn.step_down(g, b, a))
                            if not finitefn.fn_le(lhs, rhs):
                                failures.append(
                                    (str(g), terms.render(b), terms.render(e), "nested-law")
                                )
    # law 2: a function dominated at d transfers below the cut
    lam = K_CONST
    probe_fns = [terms.finite_fn([], lam)] + [
        terms.finite_fn([(k, v)], lam)
        for k in keys[:4]
        for v in [ONE, terms.nat(2), K_CONST]
    ]
    for g in fams:
        for d in finitefn.supp(g):
            gp = finitefn.prime(g)
            for f in probe_fns:
                # agreement below the cut, as in the resolvent-class setting
                if finitefn.restrict_below(f, d) is not finitefn.restrict_below(g, d):
                    continue
                if not finitefn.less_at(f, d, finitefn.fn_get(gp, d)):
                    continue
                for b in keys:
                    if cmp(b, d) >= 0:
                        continue
                    for a in a_pool:
                        instances += 1
                        h = finitefn.step_down(g, b, a)
                        hp = finitefn.prime(h)
                        if finitefn.restrict_below(f, b) is not finitefn.restrict_below(h, b):
                            failures.append((str(f), str(g), terms.render(b), "law2-prefix"))
                        if not finitefn.less_at(f, b, finitefn.fn_get(hp, b)):
                            failures.append((str(f), str(g), terms.render(b), "law2-bound"))
    return _report(
        "stepdown[pi11]", len(fams), failures, t0, f"instances={instances}"
    )


# ---------------------------------------------------------------------------
# milestone ladders


def milestone_ladder(sys, n_max=8):
    """psi_Omega(omega_n(base+1)) for the system's top constant, n <= n_max."""
    if sys.kind == "bh":
        base = OMEGA
    elif sys.kind in ("pi3", "piN"):
        base = K_CONST
    else:
        raise OrdError(f"no milestone ladder for {sys}")
    out = []
    for n in range(n_max + 1):
        x = terms.add(base, ONE)
        for _ in range(n):
            x = terms.veblen(ZERO, x)
        out.append(terms.psi(OMEGA, None, x))
    return out


def check_milestones(sys, n_max=8):
    t0 = time.time()
    ladder = milestone_ladder(sys, n_max)
    failures = []
    for i, t in enumerate(ladder):
        v = systems.validate(sys, t)
        if not v.ok:
            failures.append((terms.render(t), str(v)))
        if cmp(t, OMEGA) >= 0:
            failures.append((terms.render(t), "not-below-Omega"))
        if i and cmp(ladder[i - 1], t) >= 0:
            failures.append((terms.render(ladder[i - 1]), terms.render(t), "not-increasing"))
    return _report(f"milestones[{sys}]", len(ladder), failures, t0)


# ---------------------------------------------------------------------------
# stab gap property


def stab_chain_family():
    """Constructed rho, psi_{rho+}^g(b), rho-dagger, I[rho] chains."""
    lam = terms.I_CONST
    s0 = terms.dagger(OMEGA)
    rhos = []
    for a in (ONE, terms.nat(2), OMEGA):
        for v in (terms.I_CONST, terms.from_units([(terms.I_CONST, 2)])):
            rho = terms.psi(s0, terms.idx_fn(terms.finite_fn([(ZERO, v)], lam)), a)
            if systems.validate(STAB, rho).ok:
                rhos.append(rho)
    return rhos


def check_jumpover(budget):
    """No valid collapse lands in a window (rho, rho-dagger] below its own
    subscript; checked over the enumerated universe and a constructed family."""
    t0 = time.time()
    failures = []
    U = systems.enumerate_terms(STAB, budget)
    psis = [t for t in U if isinstance(t, terms.Psi)]
    daggers = [t for t in U if isinstance(t, terms.Dagger)]
    checked = 0
    pool = list(psis)
    rhos = stab_chain_family()
    for rho in rhos:
        dag = terms.dagger(rho)
        fam = terms.psi(
            dag,
            terms.idx_fn(terms.finite_fn([(ZERO, terms.I_CONST)], terms.I_CONST)),
            ONE,
        )
        if systems.validate(STAB, fam).ok:
            pool.append(fam)
            daggers.append(dag)
        # chain sanity: rho < psi_{rho+}^g(b) < rho-dagger < I[rho]
        iof = terms.i_of(rho)
        chain = [rho, fam, dag, iof]
        for x, y in zip(chain, chain[1:]):
            checked += 1
            if cmp(x, y) >= 0:
                failures.append((terms.render(x), terms.render(y), "chain-order"))
    for u in pool:
        for dag in daggers:
            rho = dag.base
            checked += 1
            if cmp(u.sub, dag) > 0 and cmp(rho, u) < 0 and cmp(u, dag) <= 0:
                failures.append((terms.render(u), terms.render(dag), "jumpover-gap"))
    return _report("jumpover[stab]", checked, failures, t0)


# ---------------------------------------------------------------------------
# suite registry


def run_suite(name, sys, budget):
    if name == "linear":
        return check_linear_order(sys, budget)
    if name == "hull":
        return check_hull_equiv(budget)
    if name == "collapse":
        return check_collapse_iso(budget)
    if name == "stepdown":
        return check_stepdown_props(budget)
    if name == "psi-mono":
        return check_psi_monotone(budget)
    if name == "descent":
        return check_descent_all(sys, budget)
    if name == "jumpover":
        return check_jumpover(budget)
    if name == "milestones":
        return check_milestones(sys if sys.kind != "pi11" else PI3)
    raise OrdError(f"unknown suite {name!r}")


SUITES = (
    "linear",
    "hull",
    "collapse",
    "stepdown",
    "psi-mono",
    "descent",
    "jumpover",
    "milestones",
)
