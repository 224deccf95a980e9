"""Class groups of real quadratic fields via indefinite binary quadratic forms.

Forms compute the *narrow* class group.  The wide group Cl(K) identifies a
form ``(a, b, c)`` with its negative ``(-a, b, -c)`` (multiplication by an
element of negative norm), so a wide class is canonicalized over the union
of both reduction cycles.  Unless stated otherwise, ``IdealClass`` values and
``ClassGroup`` refer to the wide group.
"""

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import isqrt

from .arith import egcd, is_prime, primes_up_to, sqrt_mod_prime
from .errors import (
    BSGSWindowError,
    DiscriminantMismatch,
    DiscriminantTooLarge,
    DomainError,
    GeneratorSetInsufficient,
    InertPrime,
    ZeroLeadingCoefficient,
)
from .quadfield import QuadField, chi
from .snf import smith_normal_form

ENUMERATE_CEILING = 10**7
BSGS_CEILING = 10**12
RECORD_VERSION = 1


@dataclass(frozen=True, order=True)
class Form:
    a: int
    b: int
    c: int

    @property
    def disc(self):
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self):
        r = isqrt(self.disc)
        A = abs(self.a)
        return 0 < self.b <= r and 2 * A + self.b > r and 2 * A - self.b <= r

    def neg(self):
        return Form(-self.a, self.b, -self.c)

    def inverse(self):
        return Form(self.a, -self.b, self.c)

    def astuple(self):
        return (self.a, self.b, self.c)


def _normalize(a, b, delta, r):
    A = abs(a)
    if A > r:
        b2 = b % (2 * A)
        if b2 > A:
            b2 -= 2 * A
    else:
        b2 = r - (r - b) % (2 * A)
    return a, b2, (b2 * b2 - delta) // (4 * a)


def rho(f):
    """One step of the reduction operator ``(a, b, c) -> normalize(c, -b, a)``."""
    delta = f.disc
    return Form(*_normalize(f.c, -f.b, delta, isqrt(delta)))


def reduce(f):
    """A reduced form properly equivalent to ``f``."""
    if f.a == 0:
        raise ZeroLeadingCoefficient(f"leading coefficient of {f} is zero")
    delta = f.disc
    if delta <= 0 or isqrt(delta) ** 2 == delta:
        raise DomainError(f"discriminant {delta} is not a positive non-square")
    r = isqrt(delta)
    a, b, c = _normalize(f.a, f.b, delta, r)
    g = Form(a, b, c)
    while not g.is_reduced():
        g = Form(*_normalize(g.c, -g.b, delta, r))
    return g


def cycle(f):
    """The full reduction cycle through ``reduce(f)``."""
    g = reduce(f)
    out = [g]
    h = rho(g)
    while h != g:
        out.append(h)
        h = rho(h)
    return out


def equivalent(f, g):
    """Proper (narrow) equivalence of two forms of the same discriminant."""
    if f.disc != g.disc:
        raise DiscriminantMismatch(f"{f.disc} != {g.disc}")
    return reduce(g) in set(cycle(f))


def compose_forms(f1, f2):
    """Dirichlet composition of two primitive forms (result is not reduced)."""
    delta = f1.disc
    if f2.disc != delta:
        raise DiscriminantMismatch(f"{delta} != {f2.disc}")
    a1, b1, _ = f1.astuple()
    a2, b2, _ = f2.astuple()
    s = (b1 + b2) // 2
    g1, x1, y1 = egcd(a1, a2)
    g, x2, w = egcd(g1, s)
    u, v = x2 * x1, x2 * y1
    a3 = a1 * a2 // (g * g)
    B = (u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + delta) // 2) // g
    B %= 2 * abs(a3)
    return Form(a3, B, (B * B - delta) // (4 * a3))


@lru_cache(maxsize=1 << 18)
def _canonical(form, narrow):
    cyc = cycle(form)
    if not narrow:
        cyc = cyc + cycle(form.neg())
    return min(cyc), min(abs(f.a) for f in cyc)


@dataclass(frozen=True)
class IdealClass:
    """A class of Cl(K) (or of the narrow group when ``narrow``).

    ``canon`` is the lexicographically least (a, b, c) over the reduction
    cycle(s); ``min_norm`` is the least |a| on them, i.e. the smallest norm of
    a reduced ideal in the class.
    """

    canon: Form
    narrow: bool = False

    @classmethod
    def of(cls, f, narrow=False):
        if not isinstance(f, Form):
            f = Form(*f)
        return cls(_canonical(f, narrow)[0], narrow)

    @property
    def delta(self):
        return self.canon.disc

    @property
    def min_norm(self):
        return _canonical(self.canon, self.narrow)[1]

    def __mul__(self, other):
        return compose(self, other)

    def __pow__(self, n):
        return power(self, n)

    def inverse(self):
        return IdealClass.of(self.canon.inverse(), self.narrow)

    def is_identity(self):
        return self == identity(self.delta, self.narrow)

    def __repr__(self):
        a, b, c = self.canon.astuple()
        return f"[{a},{b},{c}]{'+' if self.narrow else ''}"


def principal_form(delta):
    """The reduced principal form (1, b, c) with b as large as the window allows."""
    r = isqrt(delta)
    b = r if (r - delta) % 2 == 0 else r - 1
    return Form(1, b, (b * b - delta) // 4)


def identity(delta, narrow=False):
    return IdealClass.of(principal_form(delta), narrow)


def compose(x, y):
    if x.delta != y.delta:
        raise DiscriminantMismatch(f"{x.delta} != {y.delta}")
    if x.narrow != y.narrow:
        raise DomainError("cannot mix narrow and wide classes")
    return IdealClass.of(compose_forms(_positive_rep(x.canon), _positive_rep(y.canon)), x.narrow)


@lru_cache(maxsize=1 << 18)
def _positive_rep(f):
    # signs of a alternate along a cycle, so one step suffices
    return f if f.a > 0 else rho(f)


def inverse(x):
    return x.inverse()


def power(x, n):
    if n < 0:
        x, n = x.inverse(), -n
    out = identity(x.delta, x.narrow)
    while n:
        if n & 1:
            out = compose(out, x)
        n >>= 1
        if n:
            x = compose(x, x)
    return out


def enumerate_reduced(delta):
    """Every reduced form of discriminant ``delta``."""
    r = isqrt(delta)
    out = []
    for b in range(1 + (delta + 1) % 2, r + 1, 2):
        ac = (b * b - delta) // 4
        for A in range(max(1, (r - b) // 2 + 1), (r + b) // 2 + 1):
            if ac % A == 0:
                out.append(Form(A, b, ac // A))
                out.append(Form(-A, b, -ac // A))
    return out


def _delta_of(K):
    if isinstance(K, QuadField):
        return K.delta
    if hasattr(K, "delta"):
        return K.delta
    return int(K)


def prime_form(K, p):
    """Class of the prime ideal (p, (-b + sqrt delta)/2) with least b >= 0."""
    delta = _delta_of(K)
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if chi(delta, p) == -1:
        raise InertPrime(f"{p} is inert in the field of discriminant {delta}")
    return IdealClass.of(_prime_form(delta, p))


def _prime_form(delta, p):
    if p == 2:
        cands = [b for b in range(4) if (b * b - delta) % 8 == 0]
    else:
        r = sqrt_mod_prime(delta, p)
        cands = [b for b in range(2 * p)
                 if (b - r) % p == 0 or (b + r) % p == 0]
        cands = [b for b in cands if (b - delta) % 2 == 0]
    b = min(cands)
    return Form(p, b, (b * b - delta) // (4 * p))


# -- structure ----------------------------------------------------------------

@dataclass(frozen=True)
class ClassGroup:
    delta: int
    h: int
    h_narrow: int
    divisors: tuple
    gens: tuple
    orders: tuple
    unit_norm: int
    mode: str = "enumerate"

    def identity(self):
        return identity(self.delta)

    @cached_property
    def coordinates(self):
        """Every class mapped to its exponent vector over ``gens``."""
        table = {self.identity(): ()}
        for g, d in zip(self.gens, self.orders):
            new = {}
            for x, vec in table.items():
                y = x
                for j in range(d):
                    new[y] = vec + (j,)
                    y = compose(y, g)
            table = new
        return table

    def elements(self):
        return sorted(self.coordinates, key=lambda c: c.canon)

    def is_cyclic(self):
        return len(self.divisors) <= 1

    def to_record(self):
        return {
            "version": RECORD_VERSION,
            "delta": self.delta,
            "h": self.h,
            "h_narrow": self.h_narrow,
            "divisors": list(self.divisors),
            "gens": [list(g.canon.astuple()) for g in self.gens],
            "orders": list(self.orders),
            "unit_norm": self.unit_norm,
        }

    @classmethod
    def from_record(cls, rec, mode="cache"):
        if rec.get("version") != RECORD_VERSION:
            raise ValueError("stale class group record")
        gens = tuple(IdealClass(Form(*g)) for g in rec["gens"])
        return cls(rec["delta"], rec["h"], rec["h_narrow"], tuple(rec["divisors"]),
                   gens, tuple(rec["orders"]), rec["unit_norm"], mode)


def p_rank(G, p):
    """Number of elementary divisors divisible by p (= dim Hom(Cl[p], mu_p))."""
    return sum(1 for d in G.divisors if d % p == 0)


def _mul_vec(elems, vec, one):
    out = one
    for g, e in zip(elems, vec):
        if e:
            out = compose(out, power(g, e))
    return out


def _structure(delta, gen_elems, relations):
    """Elementary divisors and a matching generator set from a full-rank relation matrix."""
    diag, V, Vinv = smith_normal_form(relations)
    one = identity(delta)
    gens, orders = [], []
    for j, d in enumerate(diag):
        if d > 1:
            gens.append(_mul_vec(gen_elems, Vinv[j], one))
            orders.append(d)
    return tuple(orders), tuple(gens)


def _grow(S, g, e):
    """Extend the subgroup table S by a new generator of relative order e."""
    new = {}
    y = identity(g.delta)
    steps = []
    for j in range(e):
        steps.append(y)
        y = compose(y, g)
    for x, vec in S.items():
        for j, gj in enumerate(steps):
            new[compose(x, gj)] = vec + (j,)
    return new


def _relation_row(vec, k, e, i):
    row = [0] * k
    for t, x in enumerate(vec):
        row[t] = -x
    row[i] = e
    return row


def _narrow_cycles(delta):
    forms = enumerate_reduced(delta)
    seen, cycles = set(), []
    for f in sorted(forms):
        if f in seen:
            continue
        cyc = cycle(f)
        seen.update(cyc)
        cycles.append(cyc)
    return cycles


def _unit_norm_from_cycle(delta):
    # -1 lies in the principal narrow cycle iff some unit has norm -1
    cyc = cycle(principal_form(delta))
    return -1 if any(f.a == -1 for f in cyc) else 1


def _class_group_enumerate(delta):
    if delta > ENUMERATE_CEILING:
        raise DiscriminantTooLarge(f"delta = {delta} exceeds enumerate ceiling {ENUMERATE_CEILING}")
    cycles = _narrow_cycles(delta)
    h_narrow = len(cycles)
    classes = sorted({IdealClass.of(c[0]) for c in cycles}, key=lambda x: x.canon)
    h = len(classes)
    index = {c: i for i, c in enumerate(classes)}
    table = [[index[compose(x, y)] for y in classes] for x in classes]
    e0 = index[identity(delta)]

    # relation lattice over a greedy generating set, using the table only
    S = {e0: ()}
    gen_idx, rels = [], []
    for i in range(h):
        if i in S:
            continue
        e, y = 1, i
        while y not in S:
            y = table[y][i]
            e += 1
        # y = g^e lies in S; now enlarge S
        vec = S[y]
        k = len(gen_idx)
        new = {}
        for x, v in S.items():
            z = x
            for j in range(e):
                new[z] = v + (j,)
                z = table[z][i]
        S = new
        gen_idx.append(i)
        rels.append((vec, e))
    k = len(gen_idx)
    R = [_relation_row(vec, k, e, i) for i, (vec, e) in enumerate(rels)]
    gen_elems = [classes[i] for i in gen_idx]
    divisors, gens = _structure(delta, gen_elems, R) if k else ((), ())
    return ClassGroup(delta, h, h_narrow, divisors, gens, divisors,
                      _unit_norm_from_cycle(delta), "enumerate")


def regulator_plus(delta):
    """log of the least totally positive unit > 1, from the principal cycle."""
    s = math.sqrt(delta)
    cyc = cycle(principal_form(delta))
    return sum(math.log((f.b + s) / (2 * abs(f.a))) for f in cyc)


def euler_estimate(delta, bound):
    """Truncated Euler product for L(1, chi_delta)."""
    logL = 0.0
    for p in primes_up_to(bound):
        c = chi(delta, p)
        if c:
            logL -= math.log1p(-c / p)
    return math.exp(logL)


def _bsgs_relative_order(S, g, e_max):
    """Least e >= 1 with g^e in S (baby steps over S*g^j, giant steps g^m)."""
    if g in S:
        return 1, S[g]
    m = max(1, math.isqrt(e_max) + 1)
    baby = {}
    y = identity(g.delta)
    for j in range(m):
        if j and y in S:
            return j, S[y]
        for x, vec in S.items():
            baby.setdefault(compose(x, y), (vec, j))
        y = compose(y, g)
    giant = y  # g^m
    z = giant
    for k in range(1, e_max // m + 2):
        hit = baby.get(z)
        if hit is not None:
            vec, j = hit
            e = k * m - j
            # g^e = x * (g^j)^-1 * g^j ... = x with x the stored base
            return e, vec
        z = compose(z, giant)
    return None, None


def _class_group_bsgs(delta, euler_bound=None, gen_bound=None, window=math.sqrt(2)):
    if delta > BSGS_CEILING:
        raise DiscriminantTooLarge(f"delta = {delta} exceeds bsgs ceiling {BSGS_CEILING}")
    unit_norm = _unit_norm_from_cycle(delta)
    Rplus = regulator_plus(delta)
    if euler_bound is None:
        euler_bound = max(1 << 15, int(40 * math.log(delta) ** 2))
    L = euler_estimate(delta, euler_bound)
    h_narrow_est = math.sqrt(delta) * L / Rplus
    h_est = h_narrow_est / (2 if unit_norm == 1 else 1)
    lo, hi = h_est / window, h_est * window
    e_cap = max(1, math.floor(hi))

    if gen_bound is None:
        gen_bound = max(30, int(6 * math.log(delta) ** 2))
    one = identity(delta)
    S = {one: ()}
    gen_elems, rels = [], []
    for p in primes_up_to(gen_bound):
        if chi(delta, p) == -1:
            continue
        g = IdealClass.of(_prime_form(delta, p))
        if g in S:
            continue
        e, vec = _bsgs_relative_order(S, g, max(1, e_cap // len(S)))
        if e is None:
            raise BSGSWindowError(
                f"order of prime form over {p} exceeds the analytic window [{lo:.2f}, {hi:.2f}]")
        S = _grow(S, g, e)
        gen_elems.append(g)
        rels.append((vec, e))
    size = len(S)
    multiples = [k * size for k in range(max(1, math.ceil(lo / size)), math.floor(hi / size) + 1)
                 if lo < k * size < hi]
    if len(multiples) != 1:
        raise BSGSWindowError(
            f"window ({lo:.3f}, {hi:.3f}) holds {len(multiples)} multiples of subgroup order {size}")
    if multiples[0] != size:
        raise GeneratorSetInsufficient(
            f"prime forms up to {gen_bound} generate a subgroup of order {size}; "
            f"analytic estimate points to {multiples[0]}")
    k = len(gen_elems)
    R = [_relation_row(vec, k, e, i) for i, (vec, e) in enumerate(rels)]
    divisors, gens = _structure(delta, gen_elems, R) if k else ((), ())
    h = size
    return ClassGroup(delta, h, h * (2 if unit_norm == 1 else 1), divisors, gens, divisors,
                      unit_norm, "bsgs")


def class_group(K, mode="enumerate", **kw):
    """Structure of the (wide) class group Cl(K)."""
    delta = _delta_of(K)
    if mode == "enumerate":
        return _class_group_enumerate(delta)
    if mode == "bsgs":
        return _class_group_bsgs(delta, **kw)
    raise DomainError(f"unknown mode {mode!r}")


def cl_p_infinity(G, p):
    """Elements of the p-power torsion subgroup Cl[p^inf]."""
    out = []
    for x, vec in G.coordinates.items():
        ok = True
        for e, d in zip(vec, G.orders):
            # order of g^e in Z/d divides a power of p
            o = d // math.gcd(e, d)
            while o % p == 0:
                o //= p
            if o != 1:
                ok = False
                break
        if ok:
            out.append(x)
    return sorted(out, key=lambda c: c.canon)


def element_order(x):
    n, y = 1, x
    one = identity(x.delta, x.narrow)
    while y != one:
        y = compose(y, x)
        n += 1
    return n
