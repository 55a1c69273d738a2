"""Canonical bases of weight-0 modular functions and the Hecke action on
their coefficients.

Level 1: the family j_m = q^-m + O(q), generated from j_1 = j - 744 by
multiplying with j_1 and cancelling every exponent in [-(m-1), 0] against
lower elements.  Genus-zero prime levels p in {2, 3, 5, 7}: the analogous
family built from the hauptmodul t_p = (eta(tau)/eta(p tau))^(24/(p-1)),
normalized to zero constant term.  Tables are immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import forms
from . import series as qs
from .errors import NotCoprimeError, PrecisionExceededError
from .series import LaurentSeries

LEVEL1 = "level1"
GENUS0 = "genus0"
GENUS1 = "genus1"

GENUS0_PRIMES = (2, 3, 5, 7)


@dataclass(frozen=True)
class BasisTable:
    """Indexed family of basis elements at one level, at a common precision.

    ``coefficient(m, n)`` reads the q^n coefficient of element m; a few
    conventional values that are not carried by any stored series (such as
    the q^-1 coefficient of the vanishing index-1 element at genus-one
    levels) live in ``overrides``.
    """

    level: int
    kind: str
    max_index: int
    precision: int
    elements: dict
    overrides: dict = field(default_factory=dict)

    def element(self, m):
        if m not in self.elements:
            raise ValueError(f"index {m} not in table (max index {self.max_index})")
        return self.elements[m]

    def coefficient(self, m, n):
        if (m, n) in self.overrides:
            return self.overrides[(m, n)]
        return self.element(m).coeff(n)

    def rows(self, n_lo=None, n_hi=None):
        """Yield (level, kind, m, n, coefficient) over the known windows."""
        for m in sorted(self.elements):
            s = self.elements[m]
            lo = s.val if n_lo is None else max(n_lo, s.val)
            hi = s.prec if n_hi is None else min(n_hi + 1, s.prec)
            for n in range(lo, hi):
                yield (self.level, self.kind, m, n, s.coeff(n))


def _reduce_principal(t, elements, lowest, highest, kill_constant=True):
    """Cancel exponents lowest..highest (and optionally the constant term)
    of t against basis elements with matching pole orders.

    Elements must have leading coefficient 1 at exponent -k, so the
    elimination is triangular when run from the most negative exponent up.
    """
    for e in range(lowest, highest + 1):
        c = t.coeff(e)
        if c:
            t = t - elements[-e] * c
    if kill_constant:
        c = t.coeff(0)
        if c:
            t = t - c
    return t


_table_cache = {}


def build_j_basis(M, P):
    """Level-1 table: j_0 = 1, j_1 = j - 744, j_m = q^-m + O(q) for m <= M."""
    if M < 1 or P < 1:
        raise ValueError("need M >= 1 and P >= 1")
    cached = _table_cache.get((1, M, P))
    if cached is not None:
        return cached
    # each product step costs one unit of window: build j to P + M - 1
    need = P + M - 1
    j1 = forms.j_series(need) - 744
    work = {0: qs.one(need), 1: j1}
    for m in range(2, M + 1):
        t = j1 * work[m - 1]
        t = _reduce_principal(t, work, -(m - 1), -1)
        if t.prec <= 0:
            raise PrecisionExceededError(f"precision {P} too small to reduce index {m}")
        for e in range(-m + 1, 1):
            assert t.coeff(e) == 0
        assert not t.rational
        work[m] = t
    elements = {m: s.truncate(P) for m, s in work.items()}
    for m, s in elements.items():
        assert s.prec >= P, f"window underflow at index {m}"
    table = BasisTable(1, LEVEL1, M, P, elements)
    _table_cache[(1, M, P)] = table
    return table


def hauptmodul(p, P):
    """(eta(tau)/eta(p tau))^(24/(p-1)): leading term q^-1, vanishes at the
    other cusp, integer coefficients."""
    if p not in GENUS0_PRIMES:
        raise ValueError(f"no genus-zero prime level {p}")
    e = 24 // (p - 1)
    return forms.eta_quotient([(1, e), (p, -e)], P)


def build_genus0_basis(p, M, P):
    """Level-p table (p in {2,3,5,7}): elements q^-m + O(q), zero constant."""
    if M < 1 or P < 1:
        raise ValueError("need M >= 1 and P >= 1")
    cached = _table_cache.get((p, M, P))
    if cached is not None:
        return cached
    need = P + M - 1
    t_p = hauptmodul(p, need)
    f1 = t_p - t_p.coeff(0)
    work = {0: qs.one(need), 1: f1}
    for m in range(2, M + 1):
        t = t_p * work[m - 1]
        t = _reduce_principal(t, work, -(m - 1), -1)
        if t.prec <= 0:
            raise PrecisionExceededError(f"precision {P} too small to reduce index {m}")
        for e in range(-m + 1, 1):
            assert t.coeff(e) == 0
        assert not t.rational
        work[m] = t
    elements = {m: s.truncate(P) for m, s in work.items()}
    for m, s in elements.items():
        assert s.prec >= P, f"window underflow at index {m}"
    table = BasisTable(p, GENUS0, M, P, elements)
    _table_cache[(p, M, P)] = table
    return table


def hecke_t(table, m, k):
    """Weight-0 Hecke action on coefficients of the index-m element.

    Returns the functional n -> coefficient of q^n in the index m*k element,
    evaluated as sum_{d | gcd(k, n)} (k/d) * b(m, k*n/d^2).  Requires
    gcd(k, m) = 1.
    """
    if table.kind != LEVEL1:
        raise ValueError("Hecke coefficient action is implemented for the level-1 table")
    if gcd(m, k) != 1:
        raise NotCoprimeError(f"hecke_t needs gcd(k, m) = 1, got k={k}, m={m}")

    def act(n):
        total = 0
        g = gcd(k, n)
        for d in range(1, g + 1):
            if g % d == 0:
                total += (k // d) * table.coefficient(m, k * n // (d * d))
        return total

    return act


def j_coefficient(j, K, n):
    """b(K, n) for any index K >= 1 straight from the level-1 j series,
    via the index-raising coefficient identity b(K,n) = sum_{d|(K,n)} (K/d) b(Kn/d^2).
    """
    if K == 1:
        return j.coeff(n) if n != 0 else 0
    total = 0
    g = gcd(K, n)
    for d in range(1, g + 1):
        if g % d == 0:
            t = K * n // (d * d)
            total += (K // d) * (j.coeff(t) if t != 0 else 0)
    return total


class Level1Harmonic:
    """Coefficient view c1(m, n) of the level-1 harmonic family.

    c1(m, n) = b(m, n) for n >= 1, c1(m, 0) = 24 sigma_1(m), and 0 whenever
    an index or argument is not a positive integer (the vanishing convention
    for fractional indices).  Backed by one or more level-1 tables; lookups
    pick any table covering the requested index and argument.
    """

    def __init__(self, *tables):
        for t in tables:
            if t.kind != LEVEL1:
                raise ValueError("Level1Harmonic requires level-1 tables")
        self.tables = tables

    def c1(self, m, n):
        if isinstance(m, Fraction):
            if m.denominator != 1:
                return 0
            m = int(m)
        if isinstance(n, Fraction):
            if n.denominator != 1:
                return 0
            n = int(n)
        if not isinstance(m, int) or m < 1:
            return 0
        if not isinstance(n, int) or n < 0:
            return 0
        if n == 0:
            return 24 * forms.sigma(1, m)
        for t in self.tables:
            if t.max_index >= m and t.precision > n:
                return t.coefficient(m, n)
        raise PrecisionExceededError(
            f"no table covers harmonic coefficient index {m}, argument {n}")


def harmonic_series(table, m):
    """The index-m element with its harmonic constant term 24 sigma_1(m)."""
    return table.element(m) + 24 * forms.sigma(1, m)


def pplication_residual(p, m, P, genus0_table=None, level1_table=None):
    """Difference of the two sides of the prime-index splitting identity.

    L = p * U_p(f_{p,m}) - f_{p,pm} and R = p * h_{m/p} - h_m(q^p), where
    h_k is the level-1 element j_k + 24 sigma_1(k) and h_{m/p} = 0 when p
    does not divide m.  The level-p elements agree with their harmonic
    counterparts up to additive constants, so L - R must be constant; the
    returned series is L - R through q^P for the caller to inspect.
    """
    if p not in GENUS0_PRIMES:
        raise ValueError(f"level {p} is not a supported genus-zero prime")
    if genus0_table is None:
        genus0_table = build_genus0_basis(p, p * m, p * (P + 1))
    if genus0_table.max_index < p * m or genus0_table.precision < p * (P + 1):
        raise PrecisionExceededError("genus-0 table too small for the requested residual")
    if level1_table is None:
        level1_table = build_j_basis(m, P + 1)
    L = genus0_table.element(m).u_p(p) * p - genus0_table.element(p * m)
    if m % p == 0:
        R = harmonic_series(level1_table, m // p) * p
    else:
        R = qs.zero(P + 1)
    R = R - harmonic_series(level1_table, m).upscale(p)
    return (L - R).truncate(P + 1)


def nonconstant_part(s):
    """The series with its constant term removed (window unchanged)."""
    if s.val <= 0 < s.prec:
        return s - s.coeff(0)
    return s
