"""Frobenius operators on ideals of S: bracket powers, p^e-th roots, trace, Fedder multipliers."""

from __future__ import annotations

import threading
from dataclasses import dataclass

from models.errors import ValidationError
from models.ideal_engine import Ideal, PresentedRing, colon
from models.polyring import Polynomial, PolynomialRing, frobenius_power_element
from utils.app_logging import get_logger

LOG = get_logger("frobenius")


@dataclass(frozen=True)
class FrobeniusLevel:
    p: int
    e: int

    def __post_init__(self):
        if not isinstance(self.e, int) or self.e < 0:
            raise ValidationError(f"Frobenius level must be a non-negative integer, got {self.e!r}")

    @property
    def q(self) -> int:
        return self.p ** self.e

    @classmethod
    def of(cls, ring, e: "int | FrobeniusLevel") -> "FrobeniusLevel":
        """Coerce an int (or a level) against the characteristic of ``ring``."""
        p = ring.p if hasattr(ring, "p") else ring.ambient.p
        if isinstance(e, FrobeniusLevel):
            if e.p != p:
                raise ValidationError(f"level built for p={e.p} used in characteristic {p}")
            return e
        return cls(p, e)


def _level(J_or_ring, e) -> FrobeniusLevel:
    ambient: PolynomialRing = J_or_ring.ambient
    return FrobeniusLevel.of(ambient, e)


def bracket_power(J: Ideal, e: "int | FrobeniusLevel") -> Ideal:
    """J^[q]: the ideal generated by q-th powers of the generators."""
    level = _level(J, e)
    if level.e == 0:
        return J
    return Ideal(J.ambient, [frobenius_power_element(g, level.e, J.ambient) for g in J.generators])


def _root_parts(f: Polynomial, q: int) -> dict[tuple[int, ...], dict[tuple[int, ...], object]]:
    parts: dict[tuple[int, ...], dict[tuple[int, ...], object]] = {}
    for m, c in f.items():
        rem = tuple(k % q for k in m)
        parts.setdefault(rem, {})[tuple(k // q for k in m)] = c
    return parts


def frobenius_root(K: Ideal, e: "int | FrobeniusLevel") -> Ideal:
    """
    The smallest L with K ⊆ L^[q].

    Each generator is written as sum over a in [0,q)^n of h_a^q * x^a; the root
    is generated by all the h_a. Scalars are their own q-th roots in F_p.
    """
    level = _level(K, e)
    if level.e == 0:
        return K
    ring = K.ambient.sympy_ring
    gens = []
    for g in K.generators:
        for quo in _root_parts(g, level.q).values():
            gens.append(ring.from_dict(quo))
    return Ideal(K.ambient, gens)


def trace_map(f: Polynomial, e: "int | FrobeniusLevel", ambient: PolynomialRing) -> Polynomial:
    """
    Phi_e(F^e_* f), the generator of Hom_S(F^e_* S, S): keeps the terms whose
    exponents are all q-1 mod q and takes their q-th root.
    """
    level = FrobeniusLevel.of(ambient, e)
    q = level.q
    top = q - 1
    return f.ring.from_dict({
        tuple(k // q for k in m): c
        for m, c in f.items()
        if all(k % q == top for k in m)
    })


_FEDDER_CACHE: dict[tuple, Ideal] = {}
_FEDDER_LOCK = threading.Lock()


def fedder_multiplier(ring: PresentedRing, e: "int | FrobeniusLevel") -> Ideal:
    """I^[q] : I, or the unit ideal when I = 0 or e = 0."""
    level = FrobeniusLevel.of(ring.ambient, e)
    I = ring.defining
    if level.e == 0 or I.is_zero():
        return Ideal.unit(ring.ambient)
    key = (ring.key(), level.e)
    with _FEDDER_LOCK:
        hit = _FEDDER_CACHE.get(key)
    if hit is not None:
        return hit
    U = colon(bracket_power(I, level), I)
    U.basis()
    LOG.debug("fedder multiplier at q=%d has %d basis elements", level.q, len(U.basis()))
    with _FEDDER_LOCK:
        return _FEDDER_CACHE.setdefault(key, U)


def clear_caches(ring: PresentedRing | None = None) -> None:
    """Drop memoized multipliers, all of them or only those of ``ring``."""
    with _FEDDER_LOCK:
        if ring is None:
            _FEDDER_CACHE.clear()
            return
        for key in [k for k in _FEDDER_CACHE if k[0] == ring.key()]:
            del _FEDDER_CACHE[key]
