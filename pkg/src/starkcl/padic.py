"""Truncated p-adic numbers with explicit precision tracking.

A nonzero element is stored as ``p**val * unit`` where ``unit`` is known
modulo ``p**N`` (``N`` digits of relative precision), so the value itself is
known modulo ``p**(val + N)``.  Zero carries no valuation (``val = inf``)
and stores its *absolute* precision in ``N``: it is known to be ``0 mod p**N``.

Precision is tracked pessimistically.  Constructors take an absolute
precision; every operation returns a result whose stated precision is
certified given the precision of its inputs.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import ppow, vp
from .errors import (
    DivisibleByP,
    DomainError,
    IndistinguishableFromZero,
    OutsideConvergenceDomain,
    ZeroInput,
)

INF = math.inf
DEFAULT_PRECISION = 32


def _normalize(x, v, absprec, p):
    """Value ``x * p**v`` known modulo ``p**absprec``."""
    if v >= absprec:
        return PadicNumber(p, INF, 0, absprec)
    x %= ppow(p, absprec - v)
    if x == 0:
        return PadicNumber(p, INF, 0, absprec)
    w = vp(x, p)
    v += w
    n = absprec - v
    return PadicNumber(p, v, (x // ppow(p, w)) % ppow(p, n), n)


def _split_rational(q, p):
    """Write a nonzero rational as ``p**v * num / den`` with num, den prime to p."""
    q = Fraction(q)
    num, den = q.numerator, q.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v, num, den


@dataclass(frozen=True)
class PadicNumber:
    p: int
    val: float  # int, or inf for zero
    unit: int
    N: int

    # -- construction -------------------------------------------------
    @classmethod
    def zero(cls, p, absprec=DEFAULT_PRECISION):
        return cls(p, INF, 0, absprec)

    @classmethod
    def from_rational(cls, q, p, absprec=DEFAULT_PRECISION):
        """Embed a rational (or int) known exactly, truncated mod ``p**absprec``."""
        if q == 0:
            return cls.zero(p, absprec)
        v, num, den = _split_rational(q, p)
        if v >= absprec:
            return cls.zero(p, absprec)
        n = absprec - v
        m = ppow(p, n)
        return cls(p, v, num * pow(den, -1, m) % m, n)

    from_int = from_rational

    @classmethod
    def from_residue(cls, x, p, absprec):
        """Element represented by the integer ``x`` modulo ``p**absprec``."""
        return _normalize(x, 0, absprec, p)

    # -- basic properties ---------------------------------------------
    @property
    def is_zero(self):
        return self.val == INF

    @property
    def absprec(self):
        return self.N if self.is_zero else self.val + self.N

    def residue(self, absprec=None):
        """Integer representative in ``[0, p**absprec)``; requires val >= 0."""
        a = self.absprec if absprec is None else absprec
        if a > self.absprec:
            raise IndistinguishableFromZero(
                f"requested {a} digits, only {self.absprec} known")
        if self.is_zero:
            return 0
        if self.val < 0:
            raise DomainError("element is not integral")
        return self.unit * ppow(self.p, self.val) % ppow(self.p, a)

    def to_fraction(self):
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.val

    def reduce(self, absprec):
        """Forget digits beyond ``absprec`` (never adds precision)."""
        a = min(absprec, self.absprec)
        if self.is_zero:
            return PadicNumber(self.p, INF, 0, a)
        return _normalize(self.unit, self.val, a, self.p)

    def agrees(self, other, absprec=None):
        """Equality modulo ``p**absprec`` (default: the common precision)."""
        other = self._coerce(other, self.absprec)
        a = min(self.absprec, other.absprec)
        if absprec is not None:
            if absprec > a:
                return False
            a = absprec
        return (self - other).reduce(a).is_zero

    def digits(self):
        """Little-endian base-p digits of the unit part."""
        out, u = [], self.unit
        for _ in range(0 if self.is_zero else self.N):
            u, d = divmod(u, self.p)
            out.append(d)
        return out

    def to_json(self):
        return {
            "p": self.p,
            "val": None if self.is_zero else self.val,
            "unit": self.unit,
            "N": self.N,
            "absprec": self.absprec,
            "digits": self.digits(),
        }

    @classmethod
    def from_json(cls, d):
        if d["val"] is None:
            return cls.zero(d["p"], d["N"])
        return cls(d["p"], d["val"], d["unit"], d["N"])

    def __repr__(self):
        if self.is_zero:
            return f"O({self.p}^{self.N})"
        return f"{self.p}^{self.val}*{self.unit} + O({self.p}^{self.absprec})"

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other, absprec):
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise DomainError("mixed primes")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicNumber.from_rational(other, self.p, absprec)
        return NotImplemented

    def _mul_prec(self, q):
        # absolute precision needed to represent an exact rational factor
        # without lowering the relative precision of self
        if q == 0:
            return self.absprec
        v = _split_rational(q, self.p)[0]
        return v + (self.absprec if self.is_zero else self.N)

    def __add__(self, other):
        other = self._coerce(other, self.absprec)
        if other is NotImplemented:
            return other
        a = min(self.absprec, other.absprec)
        if self.is_zero and other.is_zero:
            return PadicNumber(self.p, INF, 0, a)
        if self.is_zero:
            return other.reduce(a)
        if other.is_zero:
            return self.reduce(a)
        v = min(self.val, other.val)
        x = (self.unit * ppow(self.p, self.val - v)
             + other.unit * ppow(self.p, other.val - v))
        return _normalize(x, v, a, self.p)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero:
            return self
        return PadicNumber(self.p, self.val, (-self.unit) % ppow(self.p, self.N), self.N)

    def __sub__(self, other):
        other = self._coerce(other, self.absprec)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other, self._mul_prec(other))
        elif not isinstance(other, PadicNumber):
            return NotImplemented
        elif other.p != self.p:
            raise DomainError("mixed primes")
        if self.is_zero and other.is_zero:
            return PadicNumber(self.p, INF, 0, self.N + other.N)
        if self.is_zero:
            return PadicNumber(self.p, INF, 0, self.N + other.val)
        if other.is_zero:
            return PadicNumber(self.p, INF, 0, other.N + self.val)
        n = min(self.N, other.N)
        return PadicNumber(self.p, self.val + other.val,
                           self.unit * other.unit % ppow(self.p, n), n)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero:
            raise ZeroInput("inverse of an element indistinguishable from zero")
        return PadicNumber(self.p, -self.val,
                           pow(self.unit, -1, ppow(self.p, self.N)), self.N)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroInput("division by zero")
            return self * (1 / Fraction(other))
        if not isinstance(other, PadicNumber):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return PadicNumber.from_rational(1, self.p, self.N if not self.is_zero else 1)
        if self.is_zero:
            return PadicNumber(self.p, INF, 0, self.N * n)
        return PadicNumber(self.p, self.val * n,
                           pow(self.unit, n, ppow(self.p, self.N)), self.N)


# -- transcendental functions --------------------------------------------

def _require_odd(p):
    if p == 2:
        raise DomainError("only odd primes are supported")


def _log1p_residue(z, p, absprec):
    """log(1 + z) mod p**absprec for an integer z divisible by p."""
    if z % ppow(p, absprec) == 0:
        return 0
    vz = vp(z, p)
    n_max = 0
    n = 1
    # n*vz - v_p(n) is eventually increasing; keep every term below absprec
    while n * vz - math.floor(math.log(n, p) + 1e-9) < absprec:
        n_max = n
        n += 1
    extra = 0
    while ppow(p, extra + 1) <= n_max:
        extra += 1
    work = ppow(p, absprec + extra)
    mod = ppow(p, absprec)
    total, t = 0, 1
    for n in range(1, n_max + 1):
        t = t * z % work
        k = vp(n, p) if n % p == 0 else 0
        term = (t // ppow(p, k)) * pow(n // ppow(p, k), -1, mod)
        total += term if n % 2 else -term
    return total % mod


def plog(x):
    """Iwasawa p-adic logarithm (branch with log_p(p) = 0).

    Units are handled via ``log(u) = log(u**(p-1)) / (p-1)`` which agrees with
    the Teichmuller factorization ``u = omega(u) <u>``.
    """
    if x.is_zero:
        raise ZeroInput("log of an element indistinguishable from zero")
    p = x.p
    _require_odd(p)
    a = x.N
    mod = ppow(p, a)
    y = pow(x.unit, p - 1, mod)
    res = _log1p_residue(y - 1, p, a)
    res = res * pow(p - 1, -1, mod) % mod
    return PadicNumber.from_residue(res, p, a)


def pexp(x):
    """p-adic exponential; defined for v_p(x) > 1/(p-1), i.e. v_p(x) >= 1."""
    p = x.p
    _require_odd(p)
    if x.is_zero:
        if x.N < 1:
            raise OutsideConvergenceDomain(
                "input carries no digits; cannot certify v_p(x) > 1/(p-1)")
        return PadicNumber.from_rational(1, p, x.N)
    if x.val < 1:
        raise OutsideConvergenceDomain(
            f"exp_p needs v_p(x) > 1/(p-1); got v_p(x) = {x.val} (p = {p})")
    a = x.absprec
    z = x.residue()
    # term n has valuation >= n*v - (n-1)/(p-1)
    n_max = 0
    n = 1
    while n * x.val - Fraction(n - 1, p - 1) < a:
        n_max = n
        n += 1
    extra = 0
    q = p
    while q <= n_max:
        extra += n_max // q
        q *= p
    work = ppow(p, a + extra)
    mod = ppow(p, a)
    total, t, fact_unit, fact_v = 1, 1, 1, 0
    for n in range(1, n_max + 1):
        t = t * z % work
        m = n
        while m % p == 0:
            m //= p
            fact_v += 1
        fact_unit = fact_unit * m % mod
        total += (t // ppow(p, fact_v)) * pow(fact_unit, -1, mod)
    return PadicNumber.from_residue(total % mod, p, a)


def teichmuller(a, p, N=DEFAULT_PRECISION):
    """The (p-1)-th root of unity congruent to ``a`` mod p, to ``N`` digits."""
    _require_odd(p)
    if a % p == 0:
        raise DivisibleByP(f"{p} divides {a}")
    mod = ppow(p, N)
    x = a % mod
    for _ in range(N + 1):
        y = pow(x, p, mod)
        if y == x:
            break
        x = y
    return PadicNumber.from_residue(x, p, N)


def ord_p(x):
    """Valuation of ``x``; fails if ``x`` is zero to its known precision."""
    if x.is_zero:
        raise IndistinguishableFromZero(
            f"value is 0 mod {x.p}^{x.N}; raise the working precision")
    return x.val
