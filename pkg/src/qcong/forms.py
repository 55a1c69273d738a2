"""Classical q-expansions: Euler product, eta quotients, Eisenstein series,
the discriminant and j series, partitions and divisor sums.

Everything is exact integer arithmetic.  Expensive series (Euler product,
partition numbers, discriminant, j) are cached module-wide and grow
monotonically; rebuilding at a higher precision always reproduces the
shorter prefix bit for bit, so slicing the cache is safe.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import series as qs
from .errors import FractionalValuationError
from .series import LaurentSeries

_cache = {}


def _cached(key, P, builder, grow=2):
    s = _cache.get(key)
    if s is None or s.prec < P:
        built = builder(max(P, grow * (s.prec if s is not None else 0)))
        _cache[key] = built
        s = built
    return s.truncate(P)


def clear_caches():
    _cache.clear()
    _partition_cache.clear()
    _partition_cache.append(1)


# ---------------------------------------------------------------------------
# Euler product and partitions
# ---------------------------------------------------------------------------

def _build_euler(P):
    """prod_{n>=1} (1 - q^n) through q^P via the pentagonal sparse expansion."""
    coeffs = [0] * P
    coeffs[0] = 1
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 >= P and g2 >= P:
            break
        s = -1 if k & 1 else 1
        if g1 < P:
            coeffs[g1] = s
        if g2 < P:
            coeffs[g2] = s
        k += 1
    return LaurentSeries(coeffs, 0)


def euler_series(P):
    """prod (1 - q^n), known through q^P (exclusive)."""
    if P < 1:
        raise ValueError("precision must be >= 1")
    return _cached("euler", P, _build_euler)


_partition_cache = [1]  # p(0)


def _grow_partitions(n):
    """Extend the p(m) cache through m = n with the pentagonal recurrence."""
    p = _partition_cache
    for m in range(len(p), n + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            s = 1 if k & 1 else -1
            total += s * p[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                total += s * p[m - g2]
            k += 1
        p.append(total)


def partition(n):
    """Number of partitions of n (p(0) = 1)."""
    if n < 0:
        return 0
    if n >= len(_partition_cache):
        _grow_partitions(n)
    return _partition_cache[n]


def partition_series(P):
    """sum_{n>=0} p(n) q^n, the inverse of the Euler product, through q^P."""
    if P < 1:
        raise ValueError("precision must be >= 1")
    if P - 1 >= len(_partition_cache):
        _grow_partitions(P - 1)
    return LaurentSeries(_partition_cache[:P], 0)


# ---------------------------------------------------------------------------
# divisor sums
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DivisorSumTable:
    """Sieved sigma_k(n) for 1 <= n <= bound."""

    k: int
    bound: int
    values: tuple

    @classmethod
    def build(cls, k, bound):
        vals = [0] * (bound + 1)
        for d in range(1, bound + 1):
            dk = d ** k
            for m in range(d, bound + 1, d):
                vals[m] += dk
        return cls(k, bound, tuple(vals))

    def __call__(self, n):
        if not 1 <= n <= self.bound:
            raise ValueError(f"sigma_{self.k}({n}) outside sieved bound {self.bound}")
        return self.values[n]


_sigma_tables = {}


def sigma_table(k, bound):
    t = _sigma_tables.get(k)
    if t is None or t.bound < bound:
        t = DivisorSumTable.build(k, max(bound, 2 * (t.bound if t else 0)))
        _sigma_tables[k] = t
    return t


def sigma(k, n):
    """Sum of k-th powers of the divisors of n."""
    if n < 1:
        raise ValueError("sigma is defined for n >= 1")
    t = _sigma_tables.get(k)
    if t is not None and n <= t.bound:
        return t.values[n]
    total = 1
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            if k == 0:
                total *= e + 1
            else:
                total *= (d ** (k * (e + 1)) - 1) // (d ** k - 1)
        d += 1 if d == 2 else 2
    if m > 1:
        total *= 2 if k == 0 else m ** k + 1
    return total


# ---------------------------------------------------------------------------
# eta quotients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EtaQuotientSpec:
    """Formal product prod_d eta(d*tau)^{r_d}, given as ((d, r_d), ...)."""

    factors: tuple

    @classmethod
    def from_pairs(cls, pairs):
        merged = {}
        for d, r in pairs:
            d = int(d)
            r = int(r)
            if d < 1:
                raise ValueError(f"eta argument multiplier must be >= 1, got {d}")
            merged[d] = merged.get(d, 0) + r
        factors = tuple(sorted((d, r) for d, r in merged.items() if r))
        return cls(factors)

    @classmethod
    def parse(cls, text):
        """Parse 'd:r,d:r,...' e.g. '1:2,11:2'."""
        pairs = []
        for chunk in text.split(","):
            d, _, r = chunk.partition(":")
            pairs.append((int(d), int(r)))
        return cls.from_pairs(pairs)

    @property
    def exponent_numerator(self):
        """24 times the leading q-exponent of the compiled series."""
        return sum(d * r for d, r in self.factors)

    def leading_exponent(self):
        num = self.exponent_numerator
        if num % 24:
            raise FractionalValuationError(
                f"leading exponent {num}/24 of eta quotient {self.factors} is not an integer")
        return num // 24


def eta_quotient(spec, P):
    """Compile an eta quotient to its exact q-expansion through q^P.

    The fractional eta prefactors combine to q^(sum d*r_d / 24); compilation
    requires that exponent to be an integer.
    """
    if not isinstance(spec, EtaQuotientSpec):
        spec = EtaQuotientSpec.from_pairs(spec)
    s = spec.leading_exponent()
    unit_prec = P - s
    if unit_prec < 1:
        raise ValueError(f"precision {P} does not reach past the leading exponent {s}")
    acc = qs.one(unit_prec)
    for d, r in spec.factors:
        E = euler_series(-(-unit_prec // d)).upscale(d).truncate(unit_prec)
        acc = acc * (E ** r)
    out = acc.shift(s)
    assert out.prec >= P and not out.rational
    return out.truncate(P)


# ---------------------------------------------------------------------------
# Eisenstein series, discriminant, j
# ---------------------------------------------------------------------------

def eisenstein(k, P):
    """Normalized E4 or E6 through q^P."""
    if k == 4:
        mult, power = 240, 3
    elif k == 6:
        mult, power = -504, 5
    else:
        raise ValueError(f"only weights 4 and 6 are supported, got {k}")
    t = sigma_table(power, max(P - 1, 1))
    coeffs = [1] + [mult * t.values[n] for n in range(1, P)]
    return LaurentSeries(coeffs, 0)


def _build_delta(P):
    return (euler_series(P - 1) ** 24).shift(1)


def delta_series(P):
    """q prod (1-q^n)^24 = sum tau(n) q^n through q^P."""
    if P < 2:
        raise ValueError("precision must be >= 2")
    return _cached("delta", P, _build_delta)


def tau(n):
    """Ramanujan tau(n), from the cached discriminant expansion."""
    if n < 1:
        raise ValueError("tau is defined for n >= 1")
    return delta_series(n + 1).coeff(n)


def _build_j(P):
    inv_delta = delta_series(P + 2).inverse()
    e4_cubed = eisenstein(4, P + 1) ** 3
    out = e4_cubed * inv_delta
    assert out.val == -1 and out.coeff(0) == 744
    return out


def j_series(P):
    """The modular j series q^-1 + 744 + 196884 q + ... through q^P."""
    if P < 1:
        raise ValueError("precision must be >= 1")
    return _cached("j", P, _build_j)
