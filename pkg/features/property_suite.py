"""
Structural checks on the core map of one ring, each reported separately.

Probe ideals: every monomial prime for a Stanley–Reisner ring, otherwise the
homogeneous maximal ideal and I + <x_i> for each variable. Properties that
only hold for F-pure rings are skipped on other rings; comparisons that need
an exact core skip pairs whose core is only heuristic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Optional

from config import DEFAULT_E_MAX, DEFAULT_WINDOW
from models.cartier import (
    Certification,
    CoreReport,
    MultiplierMap,
    cartier_contraction,
    cartier_core,
    clear_caches,
    is_compatible,
    is_F_pure,
    is_F_pure_at_prime,
    multiplier_compose,
)
from models.errors import EngineInvariantError
from models.frobenius import FrobeniusLevel, fedder_multiplier
from models.ideal_engine import (
    Ideal,
    MonomialPrime,
    PresentedRing,
    contains,
    ideal_equal,
    ideal_leq,
    ideal_sum,
    intersect,
    intersect_all,
    minimal_primes_squarefree,
)
from models.polyring import Polynomial
from models.stanley_reisner import (
    contraction_closed_form,
    enumerate_monomial_primes,
    sums_of_minimal_primes,
)
from utils.app_logging import get_logger

LOG = get_logger("property_suite")

PROPERTY_NAMES = (
    "monotonicity",
    "intersection",
    "sum_of_fixed",
    "containment",
    "idempotence",
    "radicality",
    "primality",
    "minimal_primes_fixed",
    "finiteness",
    "compatibility_characterization",
    "contraction_decomposition",
    "f_pure_at_prime",
    "multiplier_closure",
)


@dataclass
class PropertyResult:
    name: str
    checked: int = 0
    skipped: int = 0
    failures: list[str] = field(default_factory=list)
    note: str = ""

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def status(self) -> str:
        if self.failures:
            return "fail"
        return "pass" if self.checked else "skipped"

    def fail(self, message: str) -> None:
        self.checked += 1
        self.failures.append(message)

    def ok(self) -> None:
        self.checked += 1

    def to_payload(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "checked": self.checked,
            "skipped": self.skipped,
            "failures": self.failures[:10],
            "note": self.note,
        }


# -------------------- radicality --------------------

def _radical_witnesses(K: Ideal) -> list[Polynomial]:
    """Elements with a power in K: the squarefree monomial content and the p-th root of each basis element."""
    ambient = K.ambient
    q = ambient.p
    out = []
    for g in K.basis():
        monos = list(g.keys())
        content = tuple(min(m[i] for m in monos) for i in range(ambient.ngens))
        if any(k > 1 for k in content):
            trimmed = {tuple(k - c + min(c, 1) for k, c in zip(m, content)): v for m, v in g.items()}
            out.append(g.ring.from_dict(trimmed))
        if all(k % q == 0 for m in monos for k in m):
            out.append(g.ring.from_dict({tuple(k // q for k in m): v for m, v in g.items()}))
    return out


def check_radical(K: Ideal) -> bool:
    """
    Exact for monomial ideals (squarefree minimal generators). For other
    ideals False is definitive (a witness h with h^N in K, h not in K) and
    True means no witness was found.
    """
    if K.is_unit():
        return True
    if K.is_monomial():
        return all(max(m, default=0) <= 1 for m in K.basis().exponents())
    return all(contains(K, h) for h in _radical_witnesses(K))


# -------------------- suite --------------------

class CoreTable:
    """Memoized cores for one ring."""

    def __init__(self, ring: PresentedRing, e_max: int, window: int):
        self.ring = ring
        self.e_max = e_max
        self.window = window
        self._reports: dict[tuple, CoreReport] = {}

    def report(self, J: Ideal) -> CoreReport:
        J = self.ring.normalize(J)
        key = J.key()
        if key not in self._reports:
            self._reports[key] = cartier_core(self.ring, J, self.e_max, self.window)
        return self._reports[key]

    def core(self, J: Ideal) -> Ideal:
        return self.report(J).core

    def exact(self, J: Ideal) -> bool:
        return self.report(J).certification is not Certification.HEURISTIC


def sample_ideals(ring: PresentedRing) -> list[Ideal]:
    if ring.is_stanley_reisner:
        return [Q.to_ideal(ring.ambient) for Q in enumerate_monomial_primes(ring)]
    amb = ring.ambient
    out = [ring.maximal_ideal()]
    for v in amb.variables:
        J = ring.normalize(Ideal.of_variables(amb, [v]))
        if not J.is_unit():
            out.append(J)
    return out


class PropertySuite:
    def __init__(self, ring: PresentedRing, e_max: int = DEFAULT_E_MAX, window: int = DEFAULT_WINDOW,
                 *, max_pairs: int = 12, compat_levels: int = 2, compositions: int = 20, seed: int = 0):
        self.ring = ring
        self.table = CoreTable(ring, e_max, window)
        self.ideals = [ring.normalize(J) for J in sample_ideals(ring)]
        self.f_pure = is_F_pure(ring)
        self.max_pairs = max_pairs
        self.compat_levels = compat_levels
        self.compositions = compositions
        self.rng = random.Random(seed)

    def _pairs(self):
        return list(combinations(self.ideals, 2))[: self.max_pairs]

    def _needs_f_pure(self, res: PropertyResult) -> bool:
        if not self.f_pure:
            res.skipped += len(self.ideals)
            res.note = "ring is not F-pure"
            return False
        return True

    # ---- properties ----
    def monotonicity(self, res: PropertyResult) -> None:
        t = self.table
        for J1, J2 in self._pairs():
            for A, B in ((J1, J2), (J2, J1)):
                if not ideal_leq(A, B):
                    continue
                if not (t.exact(A) and t.exact(B)):
                    res.skipped += 1
                    continue
                if ideal_leq(t.core(A), t.core(B)):
                    res.ok()
                else:
                    res.fail(f"core({A.format()}) not in core({B.format()})")

    def intersection(self, res: PropertyResult) -> None:
        t = self.table
        for J1, J2 in self._pairs():
            meet = intersect(J1, J2)
            if not (t.exact(J1) and t.exact(J2) and t.exact(meet)):
                res.skipped += 1
                continue
            if ideal_equal(t.core(meet), intersect(t.core(J1), t.core(J2))):
                res.ok()
            else:
                res.fail(f"core of {J1.format()} ∩ {J2.format()} is not the intersection of cores")

    def sum_of_fixed(self, res: PropertyResult) -> None:
        t = self.table
        fixed = [J for J in self.ideals if t.exact(J) and ideal_equal(t.core(J), J)]
        for J1, J2 in list(combinations(fixed, 2))[: self.max_pairs]:
            total = ideal_sum(J1, J2)
            if total.is_unit() or not t.exact(total):
                res.skipped += 1
                continue
            if ideal_equal(t.core(total), total):
                res.ok()
            else:
                res.fail(f"{total.format()} is a sum of fixed ideals but not fixed")

    def containment(self, res: PropertyResult) -> None:
        if not self._needs_f_pure(res):
            return
        for J in self.ideals:
            if ideal_leq(self.table.core(J), J):
                res.ok()
            else:
                res.fail(f"core({J.format()}) is not contained in the ideal")

    def idempotence(self, res: PropertyResult) -> None:
        if not self._needs_f_pure(res):
            return
        t = self.table
        for J in self.ideals:
            C = t.core(J)
            if not t.exact(J) or C.is_unit():
                res.skipped += 1
                continue
            if ideal_equal(t.core(C), C):
                res.ok()
            else:
                res.fail(f"core is not idempotent at {J.format()}")

    def radicality(self, res: PropertyResult) -> None:
        if not self._needs_f_pure(res):
            return
        for J in self.ideals:
            if check_radical(self.table.core(J)):
                res.ok()
            else:
                res.fail(f"core({J.format()}) is not radical")

    def primality(self, res: PropertyResult) -> None:
        if not self._needs_f_pure(res):
            return
        for J in self.ideals:
            if MonomialPrime.from_ideal(J) is None:
                res.skipped += 1
                continue
            C = self.table.core(J)
            if C.is_unit() or MonomialPrime.from_ideal(C) is not None:
                res.ok()
            elif C.is_monomial():
                res.fail(f"core({J.format()}) is a monomial ideal but not a prime")
            else:
                res.skipped += 1

    def minimal_primes_fixed(self, res: PropertyResult) -> None:
        if not self.ring.is_stanley_reisner:
            res.note = "not a Stanley–Reisner ring"
            return
        for P in sorted(minimal_primes_squarefree(self.ring.defining)):
            Pi = P.to_ideal(self.ring.ambient)
            if ideal_equal(self.table.core(Pi), Pi):
                res.ok()
            else:
                res.fail(f"minimal prime {P.label()} is not fixed")

    def finiteness(self, res: PropertyResult) -> None:
        if not self.ring.is_stanley_reisner:
            res.note = "not a Stanley–Reisner ring"
            return
        allowed = sums_of_minimal_primes(self.ring)
        for J in self.ideals:
            target = MonomialPrime.from_ideal(self.table.core(J))
            if target is not None and target in allowed:
                res.ok()
            else:
                res.fail(f"core({J.format()}) is not a sum of minimal primes")
        res.note = f"{len(allowed)} possible images"

    def compatibility_characterization(self, res: PropertyResult) -> None:
        E = self.compat_levels
        for K in self.ideals:
            B = intersect_all([cartier_contraction(self.ring, K, e) for e in range(1, E + 1)])
            compatible = all(is_compatible(self.ring, K, e) for e in range(1, E + 1))
            if compatible == ideal_leq(K, B):
                res.ok()
            else:
                res.fail(f"compatibility of {K.format()} disagrees with containment in B_{E}")

    def contraction_decomposition(self, res: PropertyResult) -> None:
        if not self.ring.is_stanley_reisner:
            res.note = "not a Stanley–Reisner ring"
            return
        for J in self.ideals:
            Q = MonomialPrime.from_ideal(J)
            for e in range(1, self.compat_levels + 1):
                if ideal_equal(cartier_contraction(self.ring, J, e), contraction_closed_form(self.ring, Q, e)):
                    res.ok()
                else:
                    res.fail(f"A_{e}({Q.label()}) differs from P^[q] + C(P)")

    def f_pure_at_prime(self, res: PropertyResult) -> None:
        for J in self.ideals:
            if MonomialPrime.from_ideal(J) is None and not ideal_equal(J, self.ring.maximal_ideal()):
                res.skipped += 1
                continue
            report = self.table.report(J)
            if report.certification is Certification.HEURISTIC:
                res.skipped += 1
                continue
            if is_F_pure_at_prime(self.ring, J) == (not report.core.is_unit()):
                res.ok()
            else:
                res.fail(f"F-purity at {J.format()} disagrees with properness of its core")

    def multiplier_closure(self, res: PropertyResult) -> None:
        ring = self.ring
        amb = ring.ambient
        pools = {e: list(fedder_multiplier(ring, FrobeniusLevel(ring.p, e)).basis()) for e in (1, 2)}
        for _ in range(self.compositions):
            e, d = self.rng.choice([(1, 1), (1, 2), (2, 1)])
            f = MultiplierMap.of(ring, self.rng.choice(pools[e]), e)
            g = MultiplierMap.of(ring, self.rng.choice(pools[d]), d)
            try:
                h = multiplier_compose(f, g)
            except EngineInvariantError as ex:
                res.fail(str(ex))
                continue
            exps = tuple(self.rng.randrange(0, 2 * ring.p ** (e + d)) for _ in range(amb.ngens))
            r = amb.monomial(exps)
            if f.evaluate(g.evaluate(r)) == h.evaluate(r):
                res.ok()
            else:
                res.fail(f"composite of degrees {e},{d} does not evaluate as the composition")

    # ---- driver ----
    def run(self, names: Optional[list[str]] = None) -> list[PropertyResult]:
        out = []
        for name in names or PROPERTY_NAMES:
            check: Callable[[PropertyResult], None] = getattr(self, name)
            res = PropertyResult(name)
            check(res)
            LOG.info("property %s: %s (%d checked, %d skipped)", name, res.status, res.checked, res.skipped)
            out.append(res)
        return out


def run_property_suite(ring: PresentedRing, e_max: int = DEFAULT_E_MAX, window: int = DEFAULT_WINDOW,
                       *, names: Optional[list[str]] = None, seed: int = 0) -> list[PropertyResult]:
    try:
        return PropertySuite(ring, e_max, window, seed=seed).run(names)
    finally:
        clear_caches(ring)
