"""Real quadratic fields Q(sqrt D): discriminant, character, unit, embeddings."""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import isqrt

from .arith import hensel_sqrt, is_prime, is_squarefree, kronecker
from .errors import DomainError, DTooSmall, EvenPrime, NotSplit, NotSquareFree, UnitTooLarge
from .padic import DEFAULT_PRECISION, PadicNumber

UNIT_BIT_BOUND = 2**20


@dataclass(frozen=True)
class Discriminant:
    D: int
    delta: int

    @classmethod
    def from_radicand(cls, D):
        if D <= 1:
            raise DTooSmall(f"D must exceed 1, got {D}")
        if not is_squarefree(D):
            raise NotSquareFree(f"D = {D} is not square-free")
        return cls(D, D if D % 4 == 1 else 4 * D)


@dataclass(frozen=True)
class QuadElement:
    """``x + y*sqrt(D)`` with rational coordinates."""

    x: Fraction
    y: Fraction
    D: int

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))

    def _lift(self, other):
        if isinstance(other, QuadElement):
            if other.D != self.D:
                raise DomainError("elements of different fields")
            return other
        return QuadElement(Fraction(other), Fraction(0), self.D)

    def __add__(self, other):
        o = self._lift(other)
        return QuadElement(self.x + o.x, self.y + o.y, self.D)

    __radd__ = __add__

    def __neg__(self):
        return QuadElement(-self.x, -self.y, self.D)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return QuadElement(self.x * o.x + self.D * self.y * o.y,
                           self.x * o.y + self.y * o.x, self.D)

    __rmul__ = __mul__

    def conj(self):
        return QuadElement(self.x, -self.y, self.D)

    def norm(self):
        return self.x * self.x - self.D * self.y * self.y

    def trace(self):
        return 2 * self.x

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero element")
        return QuadElement(self.x / n, -self.y / n, self.D)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = QuadElement(1, 0, self.D), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def sign(self):
        """Sign of the real number x + y*sqrt(D), decided exactly."""
        sx = (self.x > 0) - (self.x < 0)
        sy = (self.y > 0) - (self.y < 0)
        if sx == sy or sy == 0:
            return sx if sx else sy
        if sx == 0:
            return sy
        # opposite signs: compare x^2 with D y^2
        n = self.norm()
        return sx if n > 0 else (sy if n < 0 else 0)

    def is_integral(self):
        t, n = self.trace(), self.norm()
        return t.denominator == 1 and n.denominator == 1

    def __float__(self):
        return float(self.x) + float(self.y) * self.D**0.5


def _cf_unit(D):
    """Fundamental unit by walking convergents of the ring generator."""
    if D % 4 == 1:
        P, Q = 1, 2  # (1 + sqrt D) / 2
        alpha_bar = QuadElement(Fraction(1, 2), Fraction(-1, 2), D)
    else:
        P, Q = 0, 1
        alpha_bar = QuadElement(0, -1, D)
    s = isqrt(D)
    p_prev, p_cur = 1, None
    q_prev, q_cur = 0, None
    while True:
        a = (P + s) // Q
        if p_cur is None:
            p_cur, q_cur = a, 1
        else:
            p_prev, p_cur = p_cur, a * p_cur + p_prev
            q_prev, q_cur = q_cur, a * q_cur + q_prev
        eps = alpha_bar * (-q_cur) + p_cur
        n = eps.norm()
        if n in (1, -1):
            return eps, int(n)
        if p_cur.bit_length() > UNIT_BIT_BOUND:
            raise UnitTooLarge(f"fundamental unit of Q(sqrt {D}) exceeds {UNIT_BIT_BOUND} bits")
        P = a * Q - P
        Q = (D - P * P) // Q


@dataclass(frozen=True)
class QuadField:
    disc: Discriminant

    @property
    def D(self):
        return self.disc.D

    @property
    def delta(self):
        return self.disc.delta

    @cached_property
    def _unit(self):
        return _cf_unit(self.D)

    @property
    def fund_unit(self):
        return self._unit[0]

    @property
    def unit_norm(self):
        return self._unit[1]

    def element(self, x, y=0):
        return QuadElement(x, y, self.D)

    @property
    def sqrt_delta(self):
        return QuadElement(0, 1 if self.delta == self.D else 2, self.D)


def make_field(D, compute_unit=True):
    """Validated field Q(sqrt D); the unit is computed eagerly unless asked not to."""
    K = QuadField(Discriminant.from_radicand(D))
    if compute_unit:
        K.fund_unit
    return K


def chi(disc, n):
    """Kronecker character (delta / n) of the field discriminant."""
    delta = disc.delta if isinstance(disc, Discriminant) else int(disc)
    return kronecker(delta, n)


@dataclass(frozen=True)
class Embedding:
    """Ring map K -> Q_p sending sqrt(D) to ``root`` (known mod p**N)."""

    p: int
    N: int
    root: int
    D: int

    def __call__(self, e):
        if not isinstance(e, QuadElement):
            return PadicNumber.from_rational(Fraction(e), self.p, self.N)
        x = PadicNumber.from_rational(e.x, self.p, self.N)
        if e.y == 0:
            return x
        r = PadicNumber.from_residue(self.root, self.p, self.N)
        return x + PadicNumber.from_rational(e.y, self.p, self.N) * r


def padic_embeddings(K, p, N=DEFAULT_PRECISION):
    """The two embeddings of K into Q_p for an odd split prime p."""
    if p == 2:
        raise EvenPrime("only odd primes are supported")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if chi(K.disc, p) != 1:
        raise NotSplit(f"{p} does not split in Q(sqrt {K.D}) (chi = {chi(K.disc, p)})")
    r = hensel_sqrt(K.D, p, N)
    mod = p**N
    return Embedding(p, N, r, K.D), Embedding(p, N, (-r) % mod, K.D)
