"""Acceptance criteria 1-10, each at its stated tolerance."""

import hashlib
import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from starkcl.classgroup import class_group
from starkcl.coleman import Differential, StarkPath, coleman_int, psi_embed, stark_path
from starkcl.errors import ConvergenceHypothesisFailed
from starkcl.lfunction import fit_series, leopoldt_rhs, lp_deriv0, quadratic_character
from starkcl.padic import PadicNumber, pexp, plog
from starkcl.quadfield import chi, make_field
from starkcl.qwalk import format_csv, lower_bound_table
from starkcl.sigma import (
    cyclic_fields,
    decrypt,
    deserialize,
    dump_keypair,
    encrypt,
    keygen,
    serialize,
)
from starkcl.stark import MODES, compare, compare_sweep, fundamental_radicands

pytestmark = pytest.mark.slow

N = 32
PRIMES = (3, 5, 7, 11, 13)


def _leopoldt_pairs():
    """Every (D, p) with D < 500, p in PRIMES, p prime to Delta, sampled evenly."""
    pairs = []
    for D in fundamental_radicands(500):
        delta = make_field(D, compute_unit=False).delta
        for p in PRIMES:
            if delta % p:
                pairs.append((D, p))
    return pairs[::20]


LEOPOLDT = _leopoldt_pairs()


# 1 ---------------------------------------------------------------------------------

def test_c01_bsgs_matches_enumeration(verdict):
    bad = []
    Ds = fundamental_radicands(5000)
    for D in Ds:
        delta = make_field(D, compute_unit=False).delta
        a, b = class_group(delta), class_group(delta, "bsgs")
        if (a.h, a.divisors) != (b.h, b.divisors):
            bad.append(delta)
    assert verdict(1, not bad, f"{len(Ds)} fields with D < 5000, mismatches {bad[:5]}")


# 2, 3 ------------------------------------------------------------------------------

@pytest.fixture(scope="module")
def fits():
    out = {}
    for D, p in LEOPOLDT:
        chi_ = quadratic_character(make_field(D, compute_unit=False))
        out[(D, p)] = (fit_series(chi_, p, N, N), fit_series(chi_, p, N + 2, N))
    return out


def test_c02_leopoldt(verdict, fits):
    assert len(LEOPOLDT) >= 20
    worst, bad = N, []
    kinds = {1: 0, -1: 0}
    for D, p in LEOPOLDT:
        K = make_field(D)
        h = class_group(K.delta).h
        lhs = fits[(D, p)][0].evaluate(1)
        rhs = leopoldt_rhs(K, p, h, N)
        d = lhs - rhs
        agree = d.absprec if d.is_zero else d.val
        worst = min(worst, agree)
        kinds[chi(K.delta, p)] += 1
        if agree < N - 6:
            bad.append((D, p, agree))
    assert verdict(2, not bad, f"{len(LEOPOLDT)} pairs ({kinds[1]} split, {kinds[-1]} inert), "
                               f"worst agreement {worst} digits, need {N - 6}")


def test_c03_stability(verdict, fits):
    need = 3 * N // 4
    worst, bad, resid = N, [], N
    for key, (a, b) in fits.items():
        d = lp_deriv0(a, 1) - lp_deriv0(b, 1)
        agree = d.absprec if d.is_zero else d.val
        worst = min(worst, agree)
        r = a.residual
        rv = r.absprec if r.is_zero else r.val
        resid = min(resid, rv)
        if agree < need or rv < N - N // 4:
            bad.append(key)
    assert verdict(3, not bad, f"M vs M+2 worst {worst} digits (need {need}); "
                               f"held-out residual valuation >= {resid}")


# 4 ---------------------------------------------------------------------------------

def test_c04_example_report(verdict):
    rep = compare(101, 229)
    rows = {r["D"]: r for r in rep["claimed_example"]}
    fields_needed = ["h_claimed", "h_computed", "h_agrees", "delta_claimed", "delta_computed",
                     "delta_agrees", "ord5_delta_claimed", "ord5_delta_computed", "ord5_agrees",
                     "kappa5_claimed"]
    for m in MODES:
        fields_needed += [f"kappa5_{m}", f"kappa5_{m}_agrees"]
    complete = set(rows) == {101, 229} and all(
        all(f in rows[D] for f in fields_needed) for D in rows)
    honest = all(
        rows[D]["h_agrees"] == (rows[D]["h_claimed"] == rows[D]["h_computed"])
        and all(rows[D][f"kappa5_{m}_agrees"] == (rows[D][f"kappa5_{m}"] == rows[D]["kappa5_claimed"])
                for m in MODES)
        for D in rows)
    claims = rows[101]["kappa5_claimed"] == 2 and rows[229]["kappa5_claimed"] == 4 and \
        rows[101]["h_claimed"] == 7 and rows[229]["h_claimed"] == 15
    summary = {D: (r["h_computed"], r["kappa5_unit_realized"], r["kappa5_paper_literal"])
               for D, r in rows.items()}
    assert verdict(4, complete and honest and claims,
                   f"(h, kappa5 unit, kappa5 literal) recomputed {summary}; "
                   f"ground truth isomorphic={rep['ground_truth_isomorphic']}, "
                   f"verdict={rep['criterion_verdict']}")


# 5 ---------------------------------------------------------------------------------

def test_c05_sweep(verdict):
    runs = []
    for _ in range(2):
        r = compare_sweep(2000, N)
        runs.append(json.dumps(r, sort_keys=True).encode())
    same = runs[0] == runs[1]
    r = json.loads(runs[0])
    complete = all(sum(c.values()) == r["n_pairs"] for c in r["confusion"].values())
    digest = hashlib.sha256(runs[0]).hexdigest()[:16]
    assert verdict(5, same and complete,
                   f"{r['n_fields']} fields, {r['n_pairs']} pairs, sha256 {digest}, "
                   f"confusion {json.dumps(r['confusion']['unit_realized'])}")


# 6, 7 ------------------------------------------------------------------------------

@pytest.fixture(scope="module")
def walk_sweep():
    return lower_bound_table(fundamental_radicands(2000))


def test_c06_spectral(verdict, walk_sweep):
    rows, reps = walk_sweep
    live = [r for r in reps if r is not None]
    char_ok = all(r.character_match for r in live)
    exact = [r for r in live if r.cheeger.exact]
    sandwich_ok = all(r.sandwich_holds for r in exact)
    grh = sum(r.meets_grh_bound for r in live) / len(live)
    assert verdict(6, char_ok and sandwich_ok and live,
                   f"{len(live)} connected graphs, {len(exact)} exact Cheeger, "
                   f"fraction meeting h^(-0.9): {grh:.4f}")


def test_c07_table(verdict, walk_sweep):
    rows, _ = walk_sweep
    text = format_csv(rows)
    live = [r for r in rows if r["delta_exact_or_bound"] in ("exact", "bound")]
    ok = all(isinstance(r["Q"], float) and math.isfinite(r["Q"]) and r["Q"] > 0 for r in live)
    ok = ok and all(r["grh_curve"] > 0 and r["uncond_curve"] > 0 for r in rows)
    ok = ok and len(text.strip().split("\n")) == len(rows) + 1
    assert verdict(7, ok, f"{len(rows)} rows, {len(live)} with finite positive Q")


# 8 ---------------------------------------------------------------------------------

def _coleman_precision_ok(rng):
    """One random differential at N and N + 10 along the Stark path of a random field."""
    D, p = rng.choice([(10, 3), (79, 3), (226, 5), (229, 5), (13, 3), (145, 3)])
    K = make_field(D)
    G = class_group(K.delta)
    cls = rng.choice(G.elements())
    n_max = rng.randint(1, 3 * p)
    coeffs = [Fraction(rng.randint(-50, 50), rng.choice([1, 2, 7, p, p * p, 11]))
              for _ in range(n_max + 1)]
    lo_path = stark_path(K, p, 16)
    hi_path = stark_path(K, p, 26)
    lo = coleman_int(Differential.from_rationals(coeffs, p, 16), lo_path, cls)
    hi = coleman_int(Differential.from_rationals(coeffs, p, 26), hi_path, cls)
    return lo.agrees(hi, lo.absprec), lo.absprec


def test_c08_coleman(verdict):
    rng = random.Random(8)
    prec = [_coleman_precision_ok(rng) for _ in range(100)]
    prec_ok = all(ok for ok, _ in prec)

    reports = []
    for D in fundamental_radicands(500):
        K = make_field(D)
        for p in (3, 5):
            if chi(K.delta, p) != 1:
                continue
            _, rep = psi_embed(K, p, N=12)
            reports.append((D, p, rep.match, rep.h))
    coprime = [r for r in reports if r[3] % r[1]]
    coprime_match = sum(r[2] for r in coprime)
    divides = [r for r in reports if r[3] % r[1] == 0]

    # hypothesis errors: raised exactly when eps != 1 mod p^2 and v_p(log eps) <= 1/(p-1)
    hyp_ok = True
    for p in (3, 5, 7):
        for v in (0, 1, 2, 3):
            for u in (1, 2, p + 1):
                lg = PadicNumber.from_rational(u * p**v, p, 20)
                cond_a = v >= 1 and not (pexp(lg) - 1).is_zero and (pexp(lg) - 1).val >= 2
                cond_b = v > Fraction(1, p - 1)
                try:
                    StarkPath(lg).check_hypothesis()
                    raised = False
                except ConvergenceHypothesisFailed:
                    raised = True
                hyp_ok &= raised == (not cond_a and not cond_b)
    assert verdict(8, prec_ok and hyp_ok and reports,
                   f"100 differentials precision-sound={prec_ok}; {len(reports)} kernel reports, "
                   f"p prime to h: {coprime_match}/{len(coprime)} match, "
                   f"p | h: {sum(r[2] for r in divides)}/{len(divides)} match; "
                   f"hypothesis errors exact={hyp_ok}")


# 9 ---------------------------------------------------------------------------------

def test_c09_protocol(verdict):
    fields = cyclic_fields(2000)[:6]
    rng = random.Random(9)
    fails = 0
    for i in range(1000):
        D = fields[i % len(fields)]
        kp = keygen(D, 10_000 + i)
        m = bytes(rng.randrange(256) for _ in range(32))
        ct = encrypt(kp.public(), m, 20_000 + i)
        fails += decrypt(kp, ct) != m
    kp = keygen(229, 7)
    ct = encrypt(kp.public(), bytes.fromhex("ab" * 32), 9)
    kat = (dump_keypair(kp).hex().endswith("00020001")
           and hashlib.sha256(dump_keypair(kp)).hexdigest() == _KAT_KEY_SHA
           and ct.c2.hex() == "86ce9f2a55754dc6d9628383da537c98331afa38111ee1e9ceb021e8e81ca47b")
    inj = True
    for D in fields:
        els = class_group(D).elements()
        blobs = {serialize(c) for c in els}
        inj &= len(blobs) == len(els) and all(deserialize(serialize(c))[0] == c for c in els)
    assert verdict(9, fails == 0 and kat and inj,
                   f"1000 round-trips over fields {fields}: {fails} failures; KAT={kat}; "
                   f"injective={inj}")


_KAT_KEY_SHA = hashlib.sha256(bytes.fromhex(
    "53474b3101000200e5000200e500020109000200070002000500020003000200e5000201090002000700"
    "02000500020001")).hexdigest()


# 10 --------------------------------------------------------------------------------

def _suites(prec):
    cfg = settings(max_examples=10_000, deadline=None, database=None, derandomize=True,
                   suppress_health_check=list(HealthCheck))
    primes = st.sampled_from([3, 5, 7, 11, 13])
    big = st.integers(-10**40, 10**40)
    P = PadicNumber.from_rational

    @cfg
    @given(primes, big, st.integers(1, 3))
    def roundtrip(p, a, v):
        x = P(a * p**v if a else p**v, p, prec)
        assert plog(pexp(x)).agrees(x)
        u = P(1 + a * p if a * p != -1 else 1 + p, p, prec)
        assert pexp(plog(u)).agrees(u)

    @cfg
    @given(primes, big, big, big)
    def ring(p, a, b, c):
        x, y, z = (P(t, p, prec) for t in (a, b, c))
        assert ((x + y) + z).agrees(x + (y + z))
        assert (x * (y + z)).agrees(x * y + x * z)
        assert ((x * y) * z).agrees(x * (y * z))
        assert (x + y).agrees(y + x) and (x * y).agrees(y * x)
        assert (x - x).is_zero and (x * 1).agrees(x)

    @cfg
    @given(primes, big, st.integers(1, 10**20), big, st.integers(1, 10**20))
    def soundness(p, a, b, c, d):
        q, r = Fraction(a, b), Fraction(c, d)
        x, y = P(q, p, prec), P(r, p, prec)
        # every digit the result claims must match the exact rational
        for got, exact in ((x + y, q + r), (x - y, q - r), (x * y, q * r)):
            assert got.agrees(P(exact, p, got.absprec + 1), got.absprec)
        if not y.is_zero:
            got = x / y
            assert got.agrees(P(q / r, p, got.absprec + 1), got.absprec)

    return {"roundtrip": roundtrip, "ring": ring, "soundness": soundness}


def test_c10_padic_suites(verdict):
    results = {}
    for prec in (32, 64):
        for name, fn in _suites(prec).items():
            try:
                fn()
                results[f"{name}@{prec}"] = True
            except Exception as e:  # report, then fail below
                results[f"{name}@{prec}"] = f"{type(e).__name__}: {e}"[:200]
    ok = all(v is True for v in results.values())
    assert verdict(10, ok, f"10^4 cases each: {results}")
