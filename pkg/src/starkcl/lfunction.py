"""Kubota-Leopoldt p-adic L-functions of real quadratic characters.

Special values at s = 1 - n with n = j(p-1) are computed from generalized
Bernoulli numbers.  As a function of j = (1 - s)/(p - 1) the L-function is
an Iwasawa function whose Mahler coefficients have valuation >= k, so the
Newton forward-difference interpolant through j = 1..M+1 is correct to about
M + 1 digits anywhere on Z_p (in particular at s = 1 and s = 0).
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .arith import is_prime, ppow, vp
from .errors import (
    DomainError,
    EvenPrime,
    IllConditioned,
    OrderExceedsDegree,
    ResidualTooLarge,
)
from .padic import DEFAULT_PRECISION, PadicNumber, plog, teichmuller
from .quadfield import QuadField, chi as kchi, padic_embeddings

GUARD_DIGITS = 2


@dataclass(frozen=True)
class CharacterTable:
    """Values chi(a) for a = 0..F-1 (index a mod F).

    Values are integers for rational characters; twisted characters such as
    chi * omega^-1 carry PadicNumber values.
    """

    F: int
    values: tuple
    label: str = ""

    def __call__(self, n):
        return self.values[n % self.F]

    @property
    def is_rational(self):
        return all(isinstance(v, int) for v in self.values)

    def is_even(self):
        v = self(-1)
        return v == 1 if isinstance(v, int) else v.agrees(1)


def quadratic_character(K):
    """chi_D as a table mod the field discriminant."""
    delta = K.delta if isinstance(K, QuadField) else int(K)
    return CharacterTable(delta, tuple(kchi(delta, a) for a in range(delta)), f"chi_{delta}")


def trivial_character():
    return CharacterTable(1, (1,), "1")


def twist_by_omega_inverse(chi, p, N=DEFAULT_PRECISION):
    """chi * omega^-1 as a table mod F*p (omega = Teichmuller character)."""
    if chi.F % p == 0:
        raise DomainError("twist assumes p does not divide the conductor")
    F = chi.F * p
    omega_inv = {}
    vals = []
    for a in range(F):
        c = chi(a)
        if a % p == 0 or c == 0:
            vals.append(0)
            continue
        r = a % p
        if r not in omega_inv:
            omega_inv[r] = teichmuller(r, p, N).inverse()
        vals.append(omega_inv[r] * c)
    return CharacterTable(F, tuple(vals), f"{chi.label}*omega^-1")


# -- Bernoulli numbers --------------------------------------------------------

@lru_cache(maxsize=8)
def _bernoulli_upto(n):
    # tangent numbers (Brent-Harvey), then B_2k from T_k
    m = n // 2 + 1
    T = [0] * (m + 1)
    if m >= 1:
        T[1] = 1
    for k in range(2, m + 1):
        T[k] = (k - 1) * T[k - 1]
    for k in range(2, m + 1):
        for j in range(k, m + 1):
            T[j] = (j - k) * T[j - 1] + (j - k + 2) * T[j]
    B = [Fraction(0)] * (n + 1)
    B[0] = Fraction(1)
    if n >= 1:
        B[1] = Fraction(-1, 2)
    for k in range(1, m + 1):
        if 2 * k > n:
            break
        four = 4**k
        B[2 * k] = Fraction((-1) ** (k - 1) * 2 * k * T[k], four * (four - 1))
    return tuple(B)


def bernoulli(n):
    """Bernoulli number B_n (B_1 = -1/2)."""
    size = 64
    while size < n:
        size *= 2
    return _bernoulli_upto(size)[n]


def bernoulli_poly(n, x):
    x = Fraction(x)
    return sum(comb(n, k) * bernoulli(k) * x ** (n - k) for k in range(n + 1))


def gen_bernoulli(chi, n):
    """B_{n,chi} = F^(n-1) * sum_a chi(a) B_n(a/F), computed exactly.

    Rational characters give a Fraction; p-adic valued characters give a
    PadicNumber (the sum is still exact termwise).
    """
    if n < 1:
        raise DomainError("n must be positive")
    F = chi.F
    total = Fraction(0)
    padic = None
    for a in range(1, F + 1):
        c = chi(a)
        if isinstance(c, int):
            if c:
                total += c * bernoulli_poly(n, Fraction(a, F))
        elif not c.is_zero:
            term = c * bernoulli_poly(n, Fraction(a, F))
            padic = term if padic is None else padic + term
    scale = Fraction(F) ** (n - 1)
    if padic is None:
        return total * scale
    return (padic + total) * scale


# -- special values -----------------------------------------------------------

def _power_sums(chi, e_max, mod):
    """S_e = sum_{a=1}^{F} chi(a) a^e mod ``mod`` for e = 0..e_max."""
    F = chi.F
    pos = [a for a in range(1, F + 1) if chi(a) == 1]
    neg = [a for a in range(1, F + 1) if chi(a) == -1]
    out = []
    P, Q = [1] * len(pos), [1] * len(neg)
    for e in range(e_max + 1):
        out.append((sum(P) - sum(Q)) % mod)
        P = [x * a % mod for x, a in zip(P, pos)]
        Q = [x * a % mod for x, a in zip(Q, neg)]
    return out


def _check_prime(chi, p):
    if p == 2:
        raise EvenPrime("only odd primes are supported")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if chi.F % p == 0:
        raise DomainError(f"p = {p} divides the conductor {chi.F}")
    if not chi.is_rational:
        raise DomainError("special values need a rational character table")


def _special_values(chi, p, ns, W):
    """L_p(1-n, chi) for each n in ``ns`` (all n = 0 mod p-1), to W digits."""
    n_max = max(ns)
    extra = 1 + max(vp(n, p) for n in ns)
    mod = ppow(p, W + extra)
    S = _power_sums(chi, n_max, mod)
    B = _bernoulli_upto(max(64, n_max))
    pB = []
    for k in range(n_max + 1):
        q = p * B[k]
        pB.append(q.numerator * pow(q.denominator, -1, mod) % mod)
    F = chi.F
    Finv = pow(F, -1, mod)
    Fpow = [Finv]
    for _ in range(n_max):
        Fpow.append(Fpow[-1] * F % mod)
    cp = chi(p)
    out = []
    for n in ns:
        # p * B_{n,chi} = sum_k C(n,k) (p B_k) F^(k-1) S_{n-k}
        t = 0
        for k in range(n + 1):
            if pB[k]:
                t += comb(n, k) * pB[k] * Fpow[k] * S[n - k]
        t %= mod
        euler = 1 - cp * p ** (n - 1)
        if euler == 0:  # pragma: no cover - impossible for n >= 2
            raise AssertionError("vanishing Euler factor")
        x = PadicNumber.from_residue(t, p, W + extra)
        out.append((x * Fraction(-euler, p * n)).reduce(W))
    return out


def lp_special(chi, p, n, N=DEFAULT_PRECISION):
    """L_p(1 - n, chi) = -(1 - chi(p) p^(n-1)) B_{n,chi} / n for n = 0 mod p-1."""
    _check_prime(chi, p)
    if n < p - 1 or n % (p - 1):
        raise DomainError(f"n = {n} must be a positive multiple of p - 1 = {p - 1}")
    return _special_values(chi, p, [n], N)[0]


def lp_special_exact(chi, p, n):
    """Same value as an exact rational (oracle; slow for large n)."""
    return -(1 - chi(p) * Fraction(p) ** (n - 1)) * gen_bernoulli(chi, n) / n


# -- interpolation --------------------------------------------------------------

def _binom_frac(x, k):
    out = Fraction(1)
    for i in range(k):
        out = out * (x - i) / (i + 1)
    return out


@lru_cache(maxsize=64)
def _s_basis(p, M):
    """Coefficients in s of C(x(s), k), x(s) = (1 - s)/(p - 1) - 1, k = 0..M."""
    alpha = Fraction(2 - p, p - 1)
    beta = Fraction(-1, p - 1)
    polys = [(Fraction(1),)]
    cur = [Fraction(1)]
    for k in range(1, M + 1):
        c0 = alpha - (k - 1)
        nxt = [Fraction(0)] * (len(cur) + 1)
        for i, a in enumerate(cur):
            nxt[i] += a * c0 / k
            nxt[i + 1] += a * beta / k
        cur = nxt
        polys.append(tuple(cur))
    return tuple(polys)


def _j_of(s, p):
    j = (1 - Fraction(s)) / (p - 1)
    if j.denominator % p == 0:
        raise DomainError(f"s = {s} is outside the interpolation disc")
    return j


@dataclass(frozen=True)
class PadicLSeries:
    chi: CharacterTable
    p: int
    M: int
    N: int
    W: int
    nodes: tuple  # n values used for the fit
    held_out: tuple
    node_values: tuple
    mahler: tuple  # c_k with L = sum c_k C(j - 1, k)
    coeffs: tuple  # coefficients in s about s = 0
    residual: PadicNumber
    loss: int = 0

    def evaluate(self, s):
        """Interpolant at s, for (1 - s)/(p - 1) in Z_p."""
        x = _j_of(s, self.p) - 1
        total = None
        for k, c in enumerate(self.mahler):
            b = _binom_frac(x, k)
            if b == 0:
                continue
            term = c * b
            total = term if total is None else total + term
        return total.reduce(self.N)

    def to_json(self):
        return {
            "chi": self.chi.label,
            "p": self.p,
            "M": self.M,
            "N": self.N,
            "working_precision": self.W,
            "nodes": [1 - n for n in self.nodes],
            "held_out": [1 - n for n in self.held_out],
            "coeffs": [c.to_json() for c in self.coeffs],
            "residual": self.residual.to_json(),
        }


def _forward_differences(vals):
    out = []
    row = list(vals)
    while row:
        out.append(row[0])
        row = [b - a for a, b in zip(row, row[1:])]
    return out


def fit_series(chi, p, M=None, N=DEFAULT_PRECISION):
    """Degree-M interpolant of L_p(s, chi) through s = 1 - j(p-1), j = 1..M+1.

    Two further nodes are held out; their worst defect is the residual.
    ``M`` defaults to ``N`` (fewer nodes cannot certify N digits).
    """
    _check_prime(chi, p)
    if M is None:
        M = N
    if M < 2:
        raise DomainError("degree must be at least 2")
    loss = max(vp(math.factorial(k), p) if k else 0 for k in range(M + 1))
    if loss > N // 2:
        raise IllConditioned(
            f"change of basis to s loses {loss} digits (> N/2 = {N // 2}); lower M or raise N")
    W = N + loss + GUARD_DIGITS
    js = list(range(1, M + 4))
    ns = [j * (p - 1) for j in js]
    vals = _special_values(chi, p, ns, W)
    fit_vals, held = vals[: M + 1], vals[M + 1:]
    mahler = _forward_differences(fit_vals)

    def at_j(j):
        total = mahler[0]
        for k in range(1, M + 1):
            total = total + mahler[k] * comb(j - 1, k)
        return total

    defects = [at_j(j) - v for j, v in zip(js[M + 1:], held)]
    residual = min(defects, key=lambda d: d.absprec if d.is_zero else d.val)
    threshold = N - N // 4
    if not residual.is_zero and residual.val < threshold:
        raise ResidualTooLarge(
            f"held-out defect has valuation {residual.val} < {threshold}; raise the degree M")

    basis = _s_basis(p, M)
    coeffs = []
    for i in range(M + 1):
        acc = PadicNumber.zero(p, W)
        for k in range(i, M + 1):
            b = basis[k][i]
            if b:
                acc = acc + mahler[k] * b
        coeffs.append(acc.reduce(N + GUARD_DIGITS))
    return PadicLSeries(chi, p, M, N, W, tuple(ns[: M + 1]), tuple(ns[M + 1:]),
                        tuple(vals), tuple(mahler), tuple(coeffs), residual, loss)


def lp_deriv0(series, k):
    """k-th derivative of the fitted L_p at s = 0."""
    if k < 0 or k > series.M - 1:
        raise OrderExceedsDegree(f"order {k} exceeds degree - 1 = {series.M - 1}")
    return (series.coeffs[k] * math.factorial(k)).reduce(series.N)


def lp_at_one(chi, p, N=DEFAULT_PRECISION, M=None):
    """L_p(1, chi) from the interpolant (s = 1 is j = 0)."""
    series = fit_series(chi, p, M, N)
    return series.evaluate(1)


def lp_zero_closed_form(chi, p, N=DEFAULT_PRECISION):
    """L_p(0, chi) = -B_{1, chi omega^-1} (the Euler factor is 1 since omega(p) = 0)."""
    psi = twist_by_omega_inverse(chi, p, N + 4)
    F = psi.F
    total = None
    for a in range(1, F):
        c = psi(a)
        if isinstance(c, int):
            continue
        term = c * a
        total = term if total is None else total + term
    return (-(total / F)).reduce(N)


# -- the analytic class number formula side -----------------------------------

def _qmul(x, y, D, mod):
    return ((x[0] * y[0] + D * x[1] * y[1]) % mod, (x[0] * y[1] + x[1] * y[0]) % mod)


def _qpow(x, n, D, mod):
    out = (1, 0)
    while n:
        if n & 1:
            out = _qmul(out, x, D, mod)
        x = _qmul(x, x, D, mod)
        n >>= 1
    return out


def _unramified_log(x, D, p, W):
    """log_p of a unit x = (A, B) of Z_p[sqrt D] (D a non-residue), mod p^W."""
    extra = 2
    while ppow(p, extra) <= 4 * W:
        extra += 1
    mod = ppow(p, W + extra)
    q = p * p - 1
    y = _qpow(x, q, D, mod)
    z = ((y[0] - 1) % mod, y[1] % mod)
    total = [0, 0]
    t = (1, 0)
    n = 1
    while n - math.log(n, p) <= W + 1:
        t = _qmul(t, z, D, mod)
        k = vp(n, p)
        u = n // ppow(p, k)
        inv = pow(u, -1, mod)
        sgn = 1 if n % 2 else -1
        for i in range(2):
            assert t[i] % ppow(p, k) == 0
            total[i] += sgn * (t[i] // ppow(p, k)) * inv
        n += 1
    qinv = pow(q, -1, ppow(p, W))
    return tuple(v * qinv % ppow(p, W) for v in total)


def leopoldt_rhs(K, p, h, N=DEFAULT_PRECISION):
    """(1 - chi(p)/p) * 2h * log_p(eps) / sqrt(delta), independent of any L-value.

    Split p uses the first embedding; inert p computes log_p(eps) in the
    unramified quadratic extension, where it is a multiple of sqrt(D).
    """
    delta = K.delta
    c = kchi(delta, p)
    if c == 0:
        raise DomainError(f"p = {p} ramifies")
    eps = K.fund_unit
    W = N + 4
    if c == 1:
        i1, _ = padic_embeddings(K, p, W)
        ratio = plog(i1(eps)) / i1(K.sqrt_delta)
    else:
        mod = ppow(p, W)
        A = eps.x.numerator * pow(eps.x.denominator, -1, mod) % mod
        B = eps.y.numerator * pow(eps.y.denominator, -1, mod) % mod
        la, lb = _unramified_log((A, B), K.D, p, W)
        if la % ppow(p, W - 1):
            raise AssertionError("log of a unit of norm +-1 must be a pure sqrt(D) multiple")
        scale = 1 if delta == K.D else 2
        ratio = PadicNumber.from_residue(lb, p, W) / scale
    return (ratio * (2 * h) * (1 - Fraction(c, p))).reduce(N)


def series_to_record(series):
    return {
        "F": series.chi.F,
        "p": series.p,
        "M": series.M,
        "N": series.N,
        "W": series.W,
        "nodes": list(series.nodes),
        "held_out": list(series.held_out),
        "node_values": [v.to_json() for v in series.node_values],
        "mahler": [c.to_json() for c in series.mahler],
        "coeffs": [c.to_json() for c in series.coeffs],
        "residual": series.residual.to_json(),
        "loss": series.loss,
    }


def series_from_record(rec):
    P = PadicNumber.from_json
    return PadicLSeries(
        quadratic_character(rec["F"]), rec["p"], rec["M"], rec["N"], rec["W"],
        tuple(rec["nodes"]), tuple(rec["held_out"]),
        tuple(P(v) for v in rec["node_values"]), tuple(P(v) for v in rec["mahler"]),
        tuple(P(v) for v in rec["coeffs"]), P(rec["residual"]), rec["loss"])
