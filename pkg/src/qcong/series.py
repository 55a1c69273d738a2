"""Exact truncated Laurent series in q.

A :class:`LaurentSeries` knows its coefficients exactly for every exponent
n with ``val <= n < prec``; coefficients below ``val`` are exactly zero and
queries at or beyond ``prec`` raise :class:`PrecisionExceededError` instead
of silently returning 0.  Two arithmetic modes are supported: integer mode
(plain Python ints, the default) and rational mode (``fractions.Fraction``).
Integer mode never promotes silently; an inversion that would need a
non-unit leading coefficient fails loudly.

All values are immutable after construction and every operation is a pure
function, so series can be shared freely between threads.
"""

from __future__ import annotations

from fractions import Fraction
from operator import mul as _op_mul

from .errors import NonUnitLeadingError, PrecisionExceededError

try:
    from gmpy2 import mpz as _mpz

    _HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _mpz = None
    _HAVE_GMPY2 = False

# Convolutions with len(a)*len(b) above this are routed through the packed
# big-integer path; below it plain schoolbook wins.  Tunable for experiments.
PACK_THRESHOLD = 4096


def set_pack_threshold(n):
    """Set the schoolbook/packed crossover (product of operand lengths)."""
    global PACK_THRESHOLD
    PACK_THRESHOLD = int(n)


def _is_prime(p):
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# convolution kernels (plain int lists)
# ---------------------------------------------------------------------------

def _conv_schoolbook(A, B, L):
    """First L coefficients of the convolution of int/Fraction lists."""
    out = [0] * L
    for i, a in enumerate(A):
        if i >= L:
            break
        if not a:
            continue
        top = min(len(B), L - i)
        for j in range(top):
            b = B[j]
            if b:
                out[i + j] += a * b
    return out


def _pack_signed(A, width):
    """Pack signed ints into one integer with `width`-byte digit blocks."""
    n = len(A)
    pos = bytearray(n * width)
    neg = bytearray(n * width)
    for i, c in enumerate(A):
        if c > 0:
            pos[i * width:i * width + (c.bit_length() + 7) // 8] = \
                c.to_bytes((c.bit_length() + 7) // 8, "little")
        elif c < 0:
            c = -c
            neg[i * width:i * width + (c.bit_length() + 7) // 8] = \
                c.to_bytes((c.bit_length() + 7) // 8, "little")
    return int.from_bytes(bytes(pos), "little") - int.from_bytes(bytes(neg), "little")


def _conv_packed(A, B, L):
    """Exact signed convolution via Kronecker packing into big integers.

    Digit width is chosen so every convolution coefficient fits strictly
    inside half a block; adding 2^(W-1) to each block then makes all digits
    non-negative without carries, so they unpack by byte slicing.
    """
    maxa = max(abs(c) for c in A)
    maxb = max(abs(c) for c in B)
    if maxa == 0 or maxb == 0:
        return [0] * L
    nbits = maxa.bit_length() + maxb.bit_length() + min(len(A), len(B)).bit_length() + 2
    width = (nbits + 7) // 8
    pa = _pack_signed(A, width)
    pb = _pack_signed(B, width)
    if _HAVE_GMPY2:
        prod = int(_mpz(pa) * _mpz(pb))
    else:
        prod = pa * pb
    nblocks = max(len(A) + len(B) + 1, L + 1)
    half = 1 << (8 * width - 1)
    offset_block = half.to_bytes(width, "little")
    offset = int.from_bytes(offset_block * nblocks, "little")
    raw = (prod + offset).to_bytes(nblocks * width + 16, "little")
    out = [0] * L
    for k in range(L):
        blk = int.from_bytes(raw[k * width:(k + 1) * width], "little")
        out[k] = blk - half
    return out


def _conv(A, B, L, rational):
    """Convolution prefix dispatcher."""
    if L <= 0:
        return []
    if rational or len(A) * len(B) <= PACK_THRESHOLD:
        return _conv_schoolbook(A, B, L)
    return _conv_packed(A, B, L)


def _invert_unit(U, L, rational):
    """Invert a unit power series given as a list (U[0] invertible).

    Newton doubling on top of the convolution kernels; exact in both modes.
    """
    u0 = U[0]
    if rational:
        r0 = Fraction(1) / u0
    else:
        r0 = u0  # u0 is +-1 here
    if L <= 32:
        R = [r0]
        for k in range(1, L):
            top = min(k, len(U) - 1)
            s = sum(U[j] * R[k - j] for j in range(1, top + 1))
            R.append(-r0 * s)
        return R
    R = [r0]
    while len(R) < L:
        m = min(2 * len(R), L)
        T = _conv(U[:m], R, m, rational)
        E = [-t for t in T]
        E[0] += 2
        R = _conv(R, E, m, rational)
    return R


# ---------------------------------------------------------------------------
# the series type
# ---------------------------------------------------------------------------

class LaurentSeries:
    """Truncated Laurent series with an explicit known-coefficient window.

    Parameters
    ----------
    coeffs : iterable
        Coefficients for exponents ``val, val+1, ..., val+len(coeffs)-1``.
    val : int
        Exponent of the first entry of ``coeffs``.
    rational : bool
        Store coefficients as exact ``Fraction`` instead of ``int``.

    The precision ``prec = val + len(coeffs)`` is exclusive: the coefficient
    of ``q**prec`` is unknown.  Leading zero coefficients are stripped on
    construction (tightening ``val``) without changing semantics.
    """

    __slots__ = ("val", "prec", "coeffs", "rational")

    def __init__(self, coeffs, val=0, rational=False):
        coeffs = list(coeffs)
        if rational:
            coeffs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        else:
            for c in coeffs:
                if not isinstance(c, int):
                    raise TypeError(f"integer mode requires int coefficients, got {type(c).__name__}")
        self._init(coeffs, val, rational)

    def _init(self, coeffs, val, rational):
        prec = val + len(coeffs)
        i = 0
        n = len(coeffs)
        while i < n and not coeffs[i]:
            i += 1
        if i:
            coeffs = coeffs[i:]
            val += i
        self.val = val
        self.prec = prec
        self.coeffs = coeffs
        self.rational = rational

    @classmethod
    def _make(cls, coeffs, val, rational):
        s = object.__new__(cls)
        s._init(coeffs, val, rational)
        return s

    # -- accessors ----------------------------------------------------------

    def coeff(self, n):
        """Exact coefficient of q^n; 0 below the valuation, error at >= prec."""
        if n >= self.prec:
            raise PrecisionExceededError(
                f"coefficient of q^{n} requested but series is only known below q^{self.prec}")
        if n < self.val:
            return Fraction(0) if self.rational else 0
        return self.coeffs[n - self.val]

    def constant_term(self):
        return self.coeff(0)

    def is_zero(self):
        """True when every known coefficient vanishes."""
        return not self.coeffs

    def items(self):
        """Yield (exponent, coefficient) for the nonzero known terms."""
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.val + i, c

    @property
    def window(self):
        return (self.val, self.prec)

    # -- mode ---------------------------------------------------------------

    def to_rational(self):
        if self.rational:
            return self
        s = LaurentSeries._make([Fraction(c) for c in self.coeffs], self.val, True)
        s.prec = self.prec
        return s

    def to_integer(self):
        """Convert back to integer mode; every coefficient must be integral."""
        if not self.rational:
            return self
        out = []
        for c in self.coeffs:
            if c.denominator != 1:
                raise ValueError(f"coefficient {c} is not an integer")
            out.append(int(c))
        s = LaurentSeries._make(out, self.val, False)
        s.prec = self.prec
        return s

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self):
        s = LaurentSeries._make([-c for c in self.coeffs], self.val, self.rational)
        s.prec = self.prec
        return s

    def _coerce_const(self, c):
        if isinstance(c, int):
            return Fraction(c) if self.rational else c
        if isinstance(c, Fraction):
            return c
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, LaurentSeries):
            rational = self.rational or other.rational
            v = min(self.val, other.val)
            P = min(self.prec, other.prec)
            out = [Fraction(0) if rational else 0] * max(P - v, 0)
            for src in (self, other):
                base = src.val - v
                top = min(len(src.coeffs), P - src.val)
                for i in range(top):
                    out[base + i] += src.coeffs[i]
            s = LaurentSeries._make(out, v, rational)
            s.prec = max(P, v)
            return s
        c = self._coerce_const(other)
        if c is NotImplemented:
            return NotImplemented
        if not c or self.prec <= 0:
            # a constant at exponent 0 is invisible when the window stops
            # at or below 0
            return self
        v = min(self.val, 0)
        out = [Fraction(0) if self.rational else 0] * (self.prec - v)
        for i, x in enumerate(self.coeffs):
            out[self.val - v + i] = x
        out[-v] += c
        s = LaurentSeries._make(out, v, self.rational)
        s.prec = self.prec
        return s

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, LaurentSeries):
            return self + (-other)
        c = self._coerce_const(other)
        if c is NotImplemented:
            return NotImplemented
        return self + (-c)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            rational = self.rational or other.rational
            v = self.val + other.val
            P = min(self.prec + other.val, other.prec + self.val)
            L = P - v
            if not self.coeffs or not other.coeffs:
                s = LaurentSeries._make([], P, rational)
                s.prec = P
                return s
            A, B = self.coeffs, other.coeffs
            if rational:
                A = [Fraction(c) for c in A] if not self.rational else A
                B = [Fraction(c) for c in B] if not other.rational else B
            out = _conv(A, B, L, rational)
            s = LaurentSeries._make(out, v, rational)
            s.prec = P
            return s
        c = self._coerce_const(other)
        if c is NotImplemented:
            return NotImplemented
        rational = self.rational or isinstance(c, Fraction)
        if not c:
            s = LaurentSeries._make([], self.prec, rational)
            s.prec = self.prec
            return s
        s = LaurentSeries._make([c * x for x in self.coeffs], self.val, rational)
        s.prec = self.prec
        return s

    __rmul__ = __mul__

    def inverse(self):
        """Multiplicative inverse through the provable window.

        Integer mode requires the leading coefficient to be +-1; rational
        mode only needs it nonzero.  ``a * a.inverse() == 1`` through the
        resulting precision.
        """
        if not self.coeffs:
            raise NonUnitLeadingError("cannot invert a series with no known nonzero coefficient")
        lead = self.coeffs[0]
        if not self.rational and lead not in (1, -1):
            raise NonUnitLeadingError(
                f"leading coefficient {lead} is not a unit in integer mode; "
                "rescale or switch to rational mode")
        L = len(self.coeffs)
        R = _invert_unit(self.coeffs, L, self.rational)
        s = LaurentSeries._make(R, -self.val, self.rational)
        s.prec = -self.val + L
        return s

    def __truediv__(self, other):
        if isinstance(other, LaurentSeries):
            return self * other.inverse()
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("exponent must be an integer")
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            L = max(self.prec - self.val, 1)
            one = [Fraction(1) if self.rational else 1] + \
                  [Fraction(0) if self.rational else 0] * (L - 1)
            s = LaurentSeries._make(one, 0, self.rational)
            s.prec = L
            return s
        result = None
        base = self
        while True:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if not k:
                return result
            base = base * base

    def qderiv(self):
        """The operator q * d/dq: coefficient at q^n is multiplied by n."""
        out = [(self.val + i) * c for i, c in enumerate(self.coeffs)]
        s = LaurentSeries._make(out, self.val, self.rational)
        s.prec = self.prec
        return s

    # -- reindexing ---------------------------------------------------------

    def shift(self, k):
        """Multiply by q^k (exact; window moves by k)."""
        s = LaurentSeries._make(self.coeffs, self.val + k, self.rational)
        s.prec = self.prec + k
        return s

    def upscale(self, k):
        """Substitute q -> q^k for k >= 1."""
        if k < 1:
            raise ValueError("upscale factor must be >= 1")
        if k == 1:
            return self
        zero = Fraction(0) if self.rational else 0
        out = [zero] * (k * self.prec - k * self.val)
        for i, c in enumerate(self.coeffs):
            out[k * i] = c
        s = LaurentSeries._make(out, k * self.val, self.rational)
        s.prec = k * self.prec
        return s

    def u_p(self, p):
        """Coefficient decimation n -> coefficient at p*n (p prime)."""
        if not _is_prime(p):
            raise ValueError(f"u_p requires a prime, got {p}")
        v = -(-self.val // p)
        P = -(-self.prec // p)
        zero = Fraction(0) if self.rational else 0
        out = [zero] * (P - v)
        for n in range(v, P):
            pn = p * n
            if self.val <= pn < self.prec:
                out[n - v] = self.coeffs[pn - self.val]
        s = LaurentSeries._make(out, v, self.rational)
        s.prec = P
        return s

    def truncate(self, P):
        """Restrict the known window to exponents below P."""
        if P >= self.prec:
            return self
        if P <= self.val:
            s = LaurentSeries._make([], P, self.rational)
            s.prec = P
            return s
        s = LaurentSeries._make(self.coeffs[:P - self.val], self.val, self.rational)
        s.prec = P
        return s

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        """Coefficientwise equality on the overlap of the known windows."""
        if isinstance(other, LaurentSeries):
            P = min(self.prec, other.prec)
            v = min(self.val, other.val)
            for n in range(v, P):
                a = self.coeffs[n - self.val] if n >= self.val else 0
                b = other.coeffs[n - other.val] if n >= other.val else 0
                if a != b:
                    return False
            return True
        if isinstance(other, (int, Fraction)):
            for n in range(min(self.val, 0), self.prec):
                a = self.coeffs[n - self.val] if n >= self.val else 0
                if a != (other if n == 0 else 0):
                    return False
            return True
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        terms = []
        for n, c in self.items():
            if len(terms) == 8:
                terms.append("...")
                break
            if n == 0:
                terms.append(f"{c}")
            elif n == 1:
                terms.append(f"{c}*q")
            else:
                terms.append(f"{c}*q^{n}")
        body = " + ".join(terms) if terms else "0"
        mode = "rational" if self.rational else "int"
        return f"LaurentSeries({body}; window=[{self.val},{self.prec}), {mode})"


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def zero(prec, rational=False):
    """The zero series known through q^prec (exclusive)."""
    s = LaurentSeries._make([], prec, rational)
    s.prec = prec
    return s


def one(prec, rational=False):
    return monomial(0, 1, prec, rational)


def monomial(exponent, coefficient, prec, rational=False):
    """coefficient * q^exponent, known through q^prec."""
    if prec <= exponent:
        raise ValueError("precision must exceed the monomial exponent")
    zero_c = Fraction(0) if rational else 0
    c = Fraction(coefficient) if rational else coefficient
    coeffs = [c] + [zero_c] * (prec - exponent - 1)
    return LaurentSeries(coeffs, exponent, rational)


def from_terms(terms, prec, rational=False):
    """Series from an {exponent: coefficient} mapping, known through q^prec."""
    if not terms:
        return zero(prec, rational)
    v = min(terms)
    if prec <= max(terms):
        raise ValueError("precision must exceed every given exponent")
    zero_c = Fraction(0) if rational else 0
    coeffs = [zero_c] * (prec - v)
    for n, c in terms.items():
        coeffs[n - v] = Fraction(c) if rational else c
    return LaurentSeries(coeffs, v, rational)
