"""Brute-force oracles, independent of the package's fast paths.

These recompute expected values the slow, obvious way (dense polynomial
products, explicit partition enumeration, trial-division divisor sums) so
the tests never assert anything that was not derived twice.
"""

import random

from qcong.series import LaurentSeries


def poly_mul(A, B, P):
    """Dense product of int coefficient lists, truncated below exponent P."""
    out = [0] * min(P, len(A) + len(B) - 1)
    for i, a in enumerate(A):
        if a:
            for j, b in enumerate(B):
                if i + j >= P:
                    break
                out[i + j] += a * b
    return out


def poly_pow(A, k, P):
    out = [1]
    for _ in range(k):
        out = poly_mul(out, A, P)
    return out


def poly_inv(A, P):
    """Inverse of a list with A[0] = +-1, by back substitution."""
    inv = [A[0]] + [0] * (P - 1)
    for n in range(1, P):
        s = sum(A[j] * inv[n - j] for j in range(1, min(n, len(A) - 1) + 1))
        inv[n] = -A[0] * s
    return inv


def brute_euler(P):
    """prod_{n=1}^{P-1} (1 - q^n) as a dense list, truncated at P."""
    out = [1]
    for n in range(1, P):
        factor = [0] * (n + 1)
        factor[0] = 1
        factor[n] = -1
        out = poly_mul(out, factor, P)
    return out + [0] * (P - len(out))


def enumerate_partitions(n, largest=None):
    """Yield every partition of n as a non-increasing tuple."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in enumerate_partitions(n - first, first):
            yield (first,) + rest


def brute_partition(n):
    return sum(1 for _ in enumerate_partitions(n)) if n else 1


def brute_sigma(k, n):
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def brute_eta_quotient(factors, P):
    """Dense expansion of prod_d Euler(q^d)^{r_d} shifted by sum(d r)/24.

    Returns {exponent: coefficient}.  Exponents with negative r go through
    list inversion (leading coefficient 1).
    """
    shift_num = sum(d * r for d, r in factors)
    assert shift_num % 24 == 0
    shift = shift_num // 24
    width = P - shift
    assert width > 0
    acc = [1] + [0] * (width - 1)
    for d, r in factors:
        base = brute_euler((width + d - 1) // d + 1)
        dil = [0] * width
        for i, c in enumerate(base):
            if d * i < width:
                dil[d * i] = c
        if r < 0:
            dil = poly_inv(dil, width)
            r = -r
        for _ in range(r):
            acc = poly_mul(acc, dil, width)
            acc += [0] * (width - len(acc))
    return {i + shift: c for i, c in enumerate(acc) if c}


def brute_j_prefix(P):
    """j coefficients for exponents -1 .. P-1 by integer polynomial division.

    E4^3 / Delta with Delta = q * Euler^24; the unit part of Delta has
    leading coefficient 1 so the division is exact over the integers.
    """
    width = P + 2
    sig3 = [0] + [brute_sigma(3, n) for n in range(1, width)]
    e4 = [1] + [240 * sig3[n] for n in range(1, width)]
    e4cubed = poly_pow(e4, 3, width)
    delta_unit = poly_pow(brute_euler(width), 24, width)
    inv = poly_inv(delta_unit, width)
    quot = poly_mul(e4cubed, inv, width)
    return {n - 1: c for n, c in enumerate(quot) if n - 1 < P}


def random_series(rng, max_terms=12, coeff_bound=1000, val_range=(-6, 6),
                  min_len=1, max_len=14):
    """Random small integer-mode series for property tests."""
    val = rng.randint(*val_range)
    length = rng.randint(min_len, max_len)
    coeffs = [0] * length
    for _ in range(rng.randint(0, max_terms)):
        coeffs[rng.randrange(length)] = rng.randint(-coeff_bound, coeff_bound)
    return LaurentSeries(coeffs, val)
