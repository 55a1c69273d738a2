"""Divisibility checkers: one parametrized suite per congruence family,
each producing a structured report over its full parameter grid.

Checkers compute exact integers first and reduce last; side-condition
misses inside a grid are counted as skipped, never silently dropped.
An identity that must hold exactly (not merely modulo M) is recorded with
modulus "0" and the difference as residue.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import bases, forms, genus1
from .bases import Level1Harmonic, j_coefficient, nonconstant_part
from .series import _is_prime

GENUS0_PRIMES = (2, 3, 5, 7)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    params: tuple  # ((name, value), ...) in grid order
    modulus: int
    residue: int

    def to_dict(self):
        return {
            "params": {k: v for k, v in self.params},
            "modulus": str(self.modulus),
            "residue": str(self.residue),
        }


@dataclass
class CongruenceReport:
    suite: str
    params: dict
    checked: int
    skipped: int
    violations: list
    millis: int
    precision: int = 0  # effective series precision; reported in headers only

    @property
    def status(self):
        return "pass" if not self.violations else "fail"

    def to_dict(self, include_timing=True):
        d = {
            "suite": self.suite,
            "params": dict(sorted(self.params.items())),
            "checked": self.checked,
            "skipped": self.skipped,
            "violations": [v.to_dict() for v in self.violations],
            "status": self.status,
        }
        if include_timing:
            d["millis"] = self.millis
        return d

    def to_json(self, include_timing=True):
        return json.dumps(self.to_dict(include_timing), sort_keys=True,
                          separators=(",", ":")) + "\n"

    def to_text(self):
        lines = [f"suite {self.suite}: {self.status.upper()} "
                 f"(checked {self.checked}, skipped {self.skipped}, "
                 f"series precision q^{self.precision}, {self.millis} ms)"]
        for k, v in sorted(self.params.items()):
            lines.append(f"  param {k} = {v}")
        for v in self.violations:
            p = ", ".join(f"{k}={val}" for k, val in v.params)
            lines.append(f"  VIOLATION at {p}: residue {v.residue} (mod {v.modulus})")
        return "\n".join(lines) + "\n"

    def to_csv(self):
        rows = ["suite,checked,skipped,status,point,modulus,residue"]
        if not self.violations:
            rows.append(f"{self.suite},{self.checked},{self.skipped},{self.status},,,")
        for v in self.violations:
            point = ";".join(f"{k}={val}" for k, val in v.params)
            rows.append(f"{self.suite},{self.checked},{self.skipped},{self.status},"
                        f"{point},{v.modulus},{v.residue}")
        return "\n".join(rows) + "\n"


class _Recorder:
    def __init__(self, suite, params):
        self.suite = suite
        self.params = params
        self.checked = 0
        self.skipped = 0
        self.violations = []
        self.precision = 0
        self.t0 = time.perf_counter()

    def skip(self, k=1):
        self.skipped += k

    def check(self, point, modulus, residue):
        """Record a congruence check: residue must vanish modulo modulus.

        modulus 0 encodes an identity that must hold exactly.
        """
        self.checked += 1
        bad = residue != 0 if modulus == 0 else residue % modulus != 0
        if bad:
            r = residue if modulus == 0 else residue % modulus
            self.violations.append(Violation(tuple(point), modulus, r))

    def check_nonzero(self, point, modulus, residue):
        """Record a sharpness check: residue must NOT vanish modulo modulus."""
        self.checked += 1
        if residue % modulus == 0:
            self.violations.append(Violation(tuple(point), modulus, 0))

    def report(self):
        millis = int((time.perf_counter() - self.t0) * 1000)
        return CongruenceReport(self.suite, self.params, self.checked,
                                self.skipped, list(self.violations), millis,
                                self.precision)


# ---------------------------------------------------------------------------
# checkers
# ---------------------------------------------------------------------------

def check_partition_ramanujan(nMax=2000, prec=0):
    """p(5n+4), p(7n+5), p(11n+6) divisible by 5, 7, 11 for 0 <= n <= nMax."""
    rec = _Recorder("partition", {"nMax": nMax})
    P = max(11 * nMax + 7, prec)
    rec.precision = P
    ps = forms.partition_series(P)
    for mult, off, mod in ((5, 4, 5), (7, 5, 7), (11, 6, 11)):
        for n in range(nMax + 1):
            rec.check((("progression", f"{mult}n+{off}"), ("n", n)),
                      mod, ps.coeff(mult * n + off))
    return rec.report()


def check_tau(nMax=2000, pMax=13, aMax=2, prec=0):
    """tau(n) = sigma_11(n) mod 691, and the exact prime-power recursion
    tau(p^(a+2)) = tau(p) tau(p^(a+1)) - p^11 tau(p^a)."""
    rec = _Recorder("tau", {"nMax": nMax, "pMax": pMax, "aMax": aMax})
    primes = [p for p in range(2, pMax + 1) if _is_prime(p)]
    need = max([nMax + 1] + [p ** (aMax + 2) + 1 for p in primes] + [prec])
    rec.precision = need
    delta = forms.delta_series(need)
    sig = forms.sigma_table(11, nMax)
    for n in range(1, nMax + 1):
        rec.check((("n", n),), 691, delta.coeff(n) - sig.values[n])
    for p in primes:
        for a in range(aMax + 1):
            lhs = delta.coeff(p ** (a + 2))
            rhs = delta.coeff(p) * delta.coeff(p ** (a + 1)) - p ** 11 * delta.coeff(p ** a)
            rec.check((("p", p), ("alpha", a), ("kind", "recursion")), 0, lhs - rhs)
    return rec.report()


def _prime_valuation(n, p):
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def check_lehner_small(bound=5000, prec=0):
    """Joint small-prime divisibility of the j coefficients: for
    A = 2^a 3^b 5^c 7^d n the coefficient b(A) vanishes modulo
    2^(3a+8) 3^(2b+3) 5^(c+1) 7^d over every present prime."""
    rec = _Recorder("lehner", {"bound": bound})
    rec.precision = max(bound + 1, prec)
    j = forms.j_series(rec.precision)
    for A in range(2, bound + 1):
        M = 1
        e = _prime_valuation(A, 2)
        if e:
            M *= 2 ** (3 * e + 8)
        e = _prime_valuation(A, 3)
        if e:
            M *= 3 ** (2 * e + 3)
        e = _prime_valuation(A, 5)
        if e:
            M *= 5 ** (e + 1)
        e = _prime_valuation(A, 7)
        if e:
            M *= 7 ** e
        if M == 1:
            rec.skip()
            continue
        rec.check((("argument", A),), M, j.coeff(A))
    return rec.report()


def check_atkin_11(aMax=2, bound=5000, prec=0):
    """b(11^a n) = 0 mod 11^a, with sharpness: b(11^a) != 0 mod 11^(a+1)."""
    rec = _Recorder("atkin11", {"aMax": aMax, "bound": bound})
    rec.precision = max(bound + 1, prec)
    j = forms.j_series(rec.precision)
    for a in range(1, aMax + 1):
        pa = 11 ** a
        for n in range(1, bound // pa + 1):
            rec.check((("alpha", a), ("n", n)), pa, j.coeff(pa * n))
        if pa <= bound:
            rec.check_nonzero((("alpha", a), ("kind", "sharpness")), pa * 11, j.coeff(pa))
        else:
            rec.skip()
    return rec.report()


def check_thm_b11(alphaMax=1, betaMax=2, mMax=5, nMax=20, prec=0):
    """Level-1 basis family: b(11^a m', 11^b n) = 0 mod 11^(b-a) for b > a,
    m' coprime to 11."""
    rec = _Recorder("thm-b11", {"alphaMax": alphaMax, "betaMax": betaMax,
                                "mMax": mMax, "nMax": nMax})
    M = 11 ** alphaMax * mMax
    P = max(11 ** betaMax * nMax + 1, prec)
    rec.precision = P
    tb = bases.build_j_basis(M, P)
    for a in range(alphaMax + 1):
        for b in range(betaMax + 1):
            for mp in range(1, mMax + 1):
                for n in range(1, nMax + 1):
                    if b <= a or mp % 11 == 0:
                        rec.skip()
                        continue
                    residue = tb.coefficient(11 ** a * mp, 11 ** b * n)
                    rec.check((("alpha", a), ("beta", b), ("m", mp), ("n", n)),
                              11 ** (b - a), residue)
    return rec.report()


_AJ_MODULUS = {
    2: lambda d: 2 ** (3 * d + 8),
    3: lambda d: 3 ** (2 * d + 3),
    5: lambda d: 5 ** (d + 1),
    7: lambda d: 7 ** d,
}


def check_aj(p=None, alphaMax=0, betaMax=2, mMax=5, nMax=20, prec=0):
    """Genus-zero level-p basis families: b_p(p^a m', p^b n) = 0 modulo
    2^(3(b-a)+8), 3^(2(b-a)+3), 5^((b-a)+1), 7^(b-a) respectively."""
    ps = GENUS0_PRIMES if p is None else (p,)
    if any(q not in GENUS0_PRIMES for q in ps):
        raise ValueError(f"unsupported level {p}; levels are {GENUS0_PRIMES}")
    rec = _Recorder("aj", {"p": p or "all", "alphaMax": alphaMax,
                           "betaMax": betaMax, "mMax": mMax, "nMax": nMax})
    for q in ps:
        M = q ** alphaMax * mMax
        P = max(q ** betaMax * nMax + 1, prec)
        rec.precision = max(rec.precision, P)
        tb = bases.build_genus0_basis(q, M, P)
        mod = _AJ_MODULUS[q]
        for a in range(alphaMax + 1):
            for b in range(betaMax + 1):
                for mp in range(1, mMax + 1):
                    for n in range(1, nMax + 1):
                        if b <= a or mp % q == 0:
                            rec.skip()
                            continue
                        residue = tb.coefficient(q ** a * mp, q ** b * n)
                        rec.check((("p", q), ("alpha", a), ("beta", b),
                                   ("m", mp), ("n", n)), mod(b - a), residue)
    return rec.report()


# Per-prime default grids for the two-index congruences with closed-form
# right sides; (2,2) is dropped to cap the largest basis index.
_GRIFFIN_PAIRS = ((0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1))
_GRIFFIN_RANGE = {
    2: ((1, 3, 5, 7, 9, 11, 13, 15), (1, 3, 5, 7, 9, 11, 13, 15)),
    3: ((1, 2, 4, 5, 7, 8), (1, 2, 4, 5, 7, 8)),
    5: ((1, 2, 3, 4, 6), (1, 2, 3, 4, 6)),
    7: ((1, 2, 3), (1, 2, 3, 4, 5)),
}


def _legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _griffin_point(j, p, a, b, m, n):
    """Evaluate one grid point; returns (branch, residue, modulus) or None
    when no branch covers the point.  Branches with rational multipliers are
    checked in cleared-denominator form: division by n is cleared at the
    same modulus (n is prime to p), the single half-integer branch doubles
    both sides and raises the modulus accordingly."""
    g = abs(a - b)
    K = p ** a * m
    lhs = j_coefficient(j, K, p ** b * n)
    if p == 2:
        s7 = forms.sigma(7, m) * forms.sigma(7, n)
        if b > a:
            return ("beta>alpha", lhs + 2 ** (3 * g + 8) * 3 ** (g - 1) * m * s7,
                    2 ** (3 * g + 13))
        if a > b:
            return ("alpha>beta", lhs + 2 ** (4 * g + 8) * 3 ** (g - 1) * m * s7,
                    2 ** (4 * g + 13))
        r8 = (m * n) % 8
        s1 = forms.sigma(1, m) * forms.sigma(1, n)
        if r8 == 1:
            return ("gamma=0, mn=1(8)", lhs - 20 * m * s7, 2 ** 7)
        if r8 == 3:
            return ("gamma=0, mn=3(8)", 2 * lhs - m * s1, 2 ** 4)
        if r8 == 5:
            return ("gamma=0, mn=5(8)", lhs + 12 * m * s7, 2 ** 8)
        return None
    if p == 3:
        s1 = forms.sigma(1, m) * forms.sigma(1, n)
        sign = -1 if (m * n) % 3 == 1 else 1
        if b > a:
            return ("beta>alpha", n * lhs - sign * 3 ** (2 * g + 3) * 10 ** (g - 1) * s1,
                    3 ** (2 * g + 6))
        if a > b:
            return ("alpha>beta", n * lhs - sign * 3 ** (3 * g + 3) * 10 ** (g - 1) * s1,
                    3 ** (3 * g + 6))
        # numerically the zero-gap branch only holds on the mn = +1 class
        if (m * n) % 3 == 1:
            return ("gamma=0, mn=1(3)", n * lhs - 2 * 27 * s1, 3 ** 7)
        return None
    if p == 5:
        s1 = forms.sigma(1, m) * forms.sigma(1, n)
        if b > a:
            return ("beta>alpha", lhs + 5 ** (g + 1) * 3 ** (g - 1) * m * m * n * s1,
                    5 ** (g + 2))
        if a > b:
            return ("alpha>beta", lhs + 5 ** (2 * g + 1) * 3 ** (g - 1) * m * m * n * s1,
                    5 ** (2 * g + 2))
        if _legendre(m * n, 5) == -1:
            return ("gamma=0, (mn|5)=-1", lhs - 10 * m * m * n * s1, 5 ** 2)
        return None
    if p == 7:
        # verified sign: both gapped branches are negative, like the p=2
        # and p=5 families (b(7) = -7 mod 49)
        s3 = forms.sigma(3, m) * forms.sigma(3, n)
        if b > a:
            return ("beta>alpha", lhs + 7 ** g * 5 ** (g - 1) * m * m * n * s3,
                    7 ** (g + 1))
        if a > b:
            return ("alpha>beta", lhs + 7 ** (2 * g) * 5 ** (g - 1) * m * m * n * s3,
                    7 ** (2 * g + 1))
        if _legendre(m * n, 7) == 1:
            return ("gamma=0, (mn|7)=1", lhs - 2 * m * m * n * s3, 7)
        return None
    raise ValueError(f"unsupported prime {p}; supported: {GENUS0_PRIMES}")


def check_griffin(p=None, prec=0):
    """Two-index congruences with closed-form right sides for the level-1
    family, every branch including the gamma=0 side-condition ones."""
    ps = GENUS0_PRIMES if p is None else (p,)
    if any(q not in GENUS0_PRIMES for q in ps):
        raise ValueError(f"unsupported prime {p}; supported: {GENUS0_PRIMES}")
    rec = _Recorder("griffin", {"p": p or "all"})
    need = max(prec, 1)
    for q in ps:
        ms, ns = _GRIFFIN_RANGE[q]
        for a, b in _GRIFFIN_PAIRS:
            for m in ms:
                for n in ns:
                    need = max(need, q ** a * m * q ** b * n + 1)
    rec.precision = need
    j = forms.j_series(need)
    branches = {}
    for q in ps:
        ms, ns = _GRIFFIN_RANGE[q]
        for a, b in _GRIFFIN_PAIRS:
            for m in ms:
                for n in ns:
                    if m % q == 0 or n % q == 0:
                        rec.skip()
                        continue
                    point = _griffin_point(j, q, a, b, m, n)
                    if point is None:
                        rec.skip()
                        continue
                    branch, residue, modulus = point
                    key = f"p={q}: {branch}"
                    branches[key] = branches.get(key, 0) + 1
                    rec.check((("p", q), ("alpha", a), ("beta", b),
                               ("m", m), ("n", n), ("branch", branch)),
                              modulus, residue)
    rec.params["branches"] = dict(sorted(branches.items()))
    return rec.report()


def check_thm_f11(alphaMax=0, betaMax=2, mMax=12, nMax=30, prec=0):
    """Genus-one level 11: a_11(11^a m', 11^b n) = 0 mod 11^(b-a) for
    indices >= 2 with b > a, m' coprime to 11."""
    rec = _Recorder("thm-f11", {"alphaMax": alphaMax, "betaMax": betaMax,
                                "mMax": mMax, "nMax": nMax})
    M = max(2, 11 ** alphaMax * mMax)
    P = max(11 ** betaMax * nMax + 1, prec)
    rec.precision = P
    tb = genus1.build_genus1_basis(11, M, P)
    for a in range(alphaMax + 1):
        for b in range(betaMax + 1):
            for mp in range(1, mMax + 1):
                for n in range(1, nMax + 1):
                    if b <= a or mp % 11 == 0 or 11 ** a * mp < 2:
                        rec.skip()
                        continue
                    residue = tb.coefficient(11 ** a * mp, 11 ** b * n)
                    rec.check((("alpha", a), ("beta", b), ("m", mp), ("n", n)),
                              11 ** (b - a), residue)
    return rec.report()


def check_thm_genus1(N=None, p=None, alphaMax=2, mMax=10, nMax=10, prec=0):
    """All genus-one levels: a_N(p^a m, n) + a_N(m,-1) a_N(p^a, n) = 0
    mod p^a for m, n prime to p (a_N(1,-1) = -1 by convention)."""
    levels = genus1.GENUS1_LEVELS if N is None else (N,)
    if any(q not in genus1.GENUS1_LEVELS for q in levels):
        raise ValueError(f"level {N} is not genus one")
    ps = (2, 3) if p is None else (p,)
    if any(not _is_prime(q) for q in ps):
        raise ValueError(f"p must be prime, got {p}")
    rec = _Recorder("thm-genus1", {"N": N or "all", "p": p or "2,3",
                                   "alphaMax": alphaMax, "mMax": mMax, "nMax": nMax})
    for level in levels:
        M = max(q ** alphaMax * mMax for q in ps)
        P = max(nMax + 1, prec)
        rec.precision = max(rec.precision, P)
        tb = genus1.build_genus1_basis(level, M, P)
        for q in ps:
            for a in range(1, alphaMax + 1):
                for m in range(1, mMax + 1):
                    for n in range(1, nMax + 1):
                        if m % q == 0 or n % q == 0:
                            rec.skip()
                            continue
                        value = (tb.coefficient(q ** a * m, n)
                                 + tb.coefficient(m, -1) * tb.coefficient(q ** a, n))
                        rec.check((("N", level), ("p", q), ("alpha", a),
                                   ("m", m), ("n", n)), q ** a, value)
    return rec.report()


def check_pplication(p=None, mMax=10, window=100, prec=0):
    """The prime-index splitting identity: the nonconstant part of L - R
    must vanish identically through the window (the two sides differ from
    their harmonic normalizations by constants only)."""
    ps = GENUS0_PRIMES if p is None else (p,)
    if any(q not in GENUS0_PRIMES for q in ps):
        raise ValueError(f"unsupported prime {p}; supported: {GENUS0_PRIMES}")
    window = max(window, prec)
    rec = _Recorder("pplication", {"p": p or "all", "mMax": mMax, "window": window})
    for q in ps:
        rec.precision = max(rec.precision, q * (window + 1))
        g0 = bases.build_genus0_basis(q, q * mMax, q * (window + 1))
        l1 = bases.build_j_basis(mMax, window + 1)
        for m in range(1, mMax + 1):
            res = bases.pplication_residual(q, m, window, g0, l1)
            nc = nonconstant_part(res)
            bad = next(iter(nc.items()), None)
            rec.check((("p", q), ("m", m)), 0, bad[1] if bad else 0)
    return rec.report()


def mock_combination(harmonic, p, m, n):
    """p c1(m/p, n) - c1(m, n/p) under the vanishing conventions for
    fractional indices; equals the corresponding integer combination of
    the level-p mock coefficients."""
    t_index = harmonic.c1(Fraction(m, p), n)
    t_arg = harmonic.c1(m, Fraction(n, p))
    return p * t_index - t_arg


def check_cor_c11(alphaMax=1, betaMax=3, mMax=5, nMax=5, prec=0):
    """Mock level-11 combinations: 11 c1(11^(a-1) m, 11^b n) - c1(11^a m,
    11^(b-1) n) = 0 mod 11^(b-a-1) for b > a+1 and m, n prime to 11."""
    rec = _Recorder("cor-c11", {"alphaMax": alphaMax, "betaMax": betaMax,
                                "mMax": mMax, "nMax": nMax})
    rec.precision = max(11 ** betaMax * nMax + 1, prec)
    tA = bases.build_j_basis(mMax, rec.precision)
    tB = bases.build_j_basis(11 ** alphaMax * mMax,
                             max(11 ** (betaMax - 1) * nMax + 1, prec))
    h = Level1Harmonic(tA, tB)
    for a in range(alphaMax + 1):
        for b in range(betaMax + 1):
            for m in range(1, mMax + 1):
                for n in range(1, nMax + 1):
                    if b <= a + 1 or m % 11 == 0 or n % 11 == 0:
                        rec.skip()
                        continue
                    value = mock_combination(h, 11, 11 ** a * m, 11 ** b * n)
                    rec.check((("alpha", a), ("beta", b), ("m", m), ("n", n)),
                              11 ** (b - a - 1), value)
    return rec.report()


# ---------------------------------------------------------------------------
# suite registry
# ---------------------------------------------------------------------------

SUITES = {
    "partition": (check_partition_ramanujan, {"nMax": 2000}),
    "tau": (check_tau, {"nMax": 2000, "pMax": 13, "aMax": 2}),
    "lehner": (check_lehner_small, {"bound": 5000}),
    "atkin11": (check_atkin_11, {"aMax": 2, "bound": 5000}),
    "thm-b11": (check_thm_b11, {"alphaMax": 1, "betaMax": 2, "mMax": 5, "nMax": 20}),
    "aj": (check_aj, {"p": None, "alphaMax": 0, "betaMax": 2, "mMax": 5, "nMax": 20}),
    "griffin": (check_griffin, {"p": None}),
    "thm-f11": (check_thm_f11, {"alphaMax": 0, "betaMax": 2, "mMax": 12, "nMax": 30}),
    "thm-genus1": (check_thm_genus1, {"N": None, "p": None, "alphaMax": 2,
                                      "mMax": 10, "nMax": 10}),
    "pplication": (check_pplication, {"p": None, "mMax": 10, "window": 100}),
    "cor-c11": (check_cor_c11, {"alphaMax": 1, "betaMax": 3, "mMax": 5, "nMax": 5}),
}

SUITE_ORDER = tuple(SUITES)


def run_suite(name, overrides=None):
    """Run one suite with defaults merged with overrides (unknown keys and
    non-positive numeric values are rejected)."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; suites: {', '.join(SUITE_ORDER)}")
    func, defaults = SUITES[name]
    params = dict(defaults)
    for k, v in (overrides or {}).items():
        if k == "prec":
            params["prec"] = v
            continue
        if k not in defaults:
            raise ValueError(f"suite {name!r} does not take parameter {k!r}")
        params[k] = v
    may_be_zero = {"alphaMax", "aMax", "nMax", "prec"}
    for k, v in params.items():
        if v is None or not isinstance(v, int):
            continue
        if v < 0 or (v == 0 and k not in may_be_zero):
            raise ValueError(f"parameter {k} must be positive, got {v}")
    return func(**params)
