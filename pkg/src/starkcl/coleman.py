"""A finite model of Coleman integration along the Stark path.

This is a stand-in, not rigid-analytic integration.  A differential is a
truncated power series in a local parameter, integrated termwise.  The path
from 1 to eps_St is t -> exp_p(t log eps_St).  A class [a] acts on paths by
scaling the logarithm by n = N(a), the least norm of a reduced ideal in the
class.  The averaged integral reads the factor art^-1(sigma)(a) in

    (1/h) sum_sigma art^-1(sigma)(a) * Int(sigma)

as that same norm residue, since the literal text multiplies a p-adic
number by an ideal class.
"""

from dataclasses import dataclass
from fractions import Fraction

from .classgroup import class_group, cl_p_infinity, identity
from .errors import (
    ConvergenceHypothesisFailed,
    DomainError,
    PDividesClassNumber,
    PrecisionExhausted,
    TOutsideDomain,
)
from .lfunction import fit_series, lp_deriv0, quadratic_character
from .padic import DEFAULT_PRECISION, PadicNumber, pexp


@dataclass(frozen=True)
class Differential:
    """omega = (sum a_n t^n) dt."""

    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) < 2:
            raise ValueError("need n_max >= 1")

    @property
    def p(self):
        return self.coeffs[0].p

    @property
    def n_max(self):
        return len(self.coeffs) - 1

    @classmethod
    def from_rationals(cls, values, p, N=DEFAULT_PRECISION):
        return cls(tuple(PadicNumber.from_rational(Fraction(v), p, N) for v in values))


def default_differential(p, N=DEFAULT_PRECISION):
    """dt/(1+t) truncated at n_max = 2p^2."""
    return Differential.from_rationals([(-1) ** n for n in range(2 * p * p + 1)], p, N)


@dataclass(frozen=True)
class Antiderivative:
    """F(t) = sum_k b_k t^k with b_{n+1} = a_n/(n+1) and b_0 = 0."""

    coeffs: tuple  # b_0 .. b_{n_max+1}

    @property
    def p(self):
        return self.coeffs[1].p

    def certified_digits(self):
        return [c.absprec for c in self.coeffs[1:]]

    def __call__(self, t):
        p = self.p
        if not isinstance(t, PadicNumber):
            t = PadicNumber.from_rational(Fraction(t), p, max(c.absprec for c in self.coeffs) + 8)
        if not t.is_zero and t.val < 0:
            raise TOutsideDomain(f"t has valuation {t.val}; F is evaluated on Z_p only")
        total = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            total = total * t + c
        return total


def antiderivative(w):
    out = [PadicNumber.zero(w.p, max(a.absprec for a in w.coeffs))]
    for n, a in enumerate(w.coeffs):
        b = a / (n + 1)
        if b.absprec <= 0:
            raise PrecisionExhausted(
                f"coefficient of t^{n + 1} keeps no digits after dividing by {n + 1}")
        out.append(b)
    return Antiderivative(tuple(out))


@dataclass(frozen=True)
class StarkPath:
    log_endpoint: PadicNumber

    def endpoint(self, t):
        """exp_p(t * log eps) for t in Z_p."""
        if isinstance(t, PadicNumber):
            if not t.is_zero and t.val < 0:
                raise TOutsideDomain("path parameter must lie in Z_p")
            x = t * self.log_endpoint
        else:
            t = Fraction(t)
            if t.denominator % self.log_endpoint.p == 0:
                raise TOutsideDomain("path parameter must lie in Z_p")
            x = self.log_endpoint * t
        return pexp(x)

    def check_hypothesis(self):
        """Convergence conditions: eps = 1 mod p^2, or v_p(log eps) > 1/(p-1)."""
        lg = self.log_endpoint
        v = lg.absprec if lg.is_zero else lg.val
        if v < 1:
            raise ConvergenceHypothesisFailed(
                f"eps_St = 1 mod p^2 fails (needs v_p(log eps) >= 2) and "
                f"v_p(log eps) = {v} > 1/(p-1) fails")
        return {"congruent_mod_p2": v >= 2, "boundary_criterion": True}


def class_norm(cls):
    """Least norm of a reduced ideal in the class (1 for the principal class)."""
    return cls.min_norm


def coleman_int(w, path, cls, F=None):
    """F(endpoint_cls) - F(1) with endpoint_cls = exp_p(n_cls * log eps)."""
    path.check_hypothesis()
    if F is None:
        F = antiderivative(w)
    n = class_norm(cls)
    end = path.endpoint(n)
    return F(end) - F(1)


def stark_path(K, p, N=DEFAULT_PRECISION, M=None):
    """The path toward eps_St,p (built from L_p'(0, chi_D))."""
    series = fit_series(quadratic_character(K), p, M, N)
    return StarkPath(lp_deriv0(series, 1))


def class_average(w, K, p, N=DEFAULT_PRECISION, M=None, group=None, order=None):
    """(1/h) * sum over Cl(K) of n_cls * Int(cls)."""
    if w.p != p:
        raise DomainError(f"differential is over Q_{w.p}, integration over Q_{p}")
    G = group if group is not None else class_group(K.delta)
    if G.h % p == 0:
        raise PDividesClassNumber(f"p = {p} divides h = {G.h}")
    path = stark_path(K, p, N, M)
    F = antiderivative(w)
    classes = order if order is not None else G.elements()
    total = None
    for cls in classes:
        term = coleman_int(w, path, cls, F) * class_norm(cls)
        total = term if total is None else total + term
    return total / G.h


@dataclass(frozen=True)
class ExtClassModel:
    class_of: object
    norm_residue: int
    integral: PadicNumber

    def to_json(self):
        return {
            "class": list(self.class_of.canon.astuple()),
            "norm_residue": self.norm_residue,
            "integral": self.integral.to_json(),
        }


@dataclass(frozen=True)
class KernelReport:
    h: int
    p: int
    kernel: tuple
    cl_p_infinity: tuple

    @property
    def kernel_size(self):
        return len(self.kernel)

    @property
    def cl_p_infinity_size(self):
        return len(self.cl_p_infinity)

    @property
    def symmetric_difference(self):
        return sorted(set(self.kernel) ^ set(self.cl_p_infinity), key=lambda c: c.canon)

    @property
    def match(self):
        return set(self.kernel) == set(self.cl_p_infinity)

    def to_json(self):
        return {
            "h": self.h,
            "p": self.p,
            "kernel_size": self.kernel_size,
            "cl_p_infinity_size": self.cl_p_infinity_size,
            "match": self.match,
            "symmetric_difference": [list(c.canon.astuple()) for c in self.symmetric_difference],
        }


def psi_embed(K, p, w=None, N=DEFAULT_PRECISION, M=None, group=None):
    """Tabulate Psi over Cl(K) and compare its kernel with Cl(K)[p^inf]."""
    G = group if group is not None else class_group(K.delta)
    if w is None:
        w = default_differential(p, N)
    path = stark_path(K, p, N, M)
    F = antiderivative(w)
    mod = p**N
    table = {}
    for cls in G.elements():
        val = coleman_int(w, path, cls, F)
        table[cls] = ExtClassModel(cls, class_norm(cls) % mod, val)
    base = table[identity(K.delta)].integral
    kernel = tuple(c for c, m in table.items() if m.integral.agrees(base))
    rep = KernelReport(G.h, p, kernel, tuple(cl_p_infinity(G, p)))
    return table, rep
