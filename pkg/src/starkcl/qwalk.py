"""Cayley graphs of Cl(K), their normalized-Laplacian gap, and the query bound.

The walk Hamiltonian is symmetrized (x -> xg and x -> xg^-1 both present),
so the spectrum is real.  Generators are the classes of prime ideals of norm
below B = ceil(log^3 Delta), one per non-inert rational prime, counted with
multiplicity; a principal prime contributes self-loops.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .arith import primes_up_to
from .classgroup import _prime_form, IdealClass, class_group, compose
from .errors import Disconnected, GroupTooLarge, Trivial
from .quadfield import chi

MAX_VERTICES = 10**4
EXACT_CHEEGER_MAX = 20
DEFAULT_EPSILON = 0.1


def default_bound(delta):
    return math.ceil(math.log(delta) ** 3)


@dataclass
class CayleyGraph:
    delta: int
    vertices: list
    gens: list  # IdealClass, with multiplicity
    gen_primes: list
    adjacency: np.ndarray
    B: int
    group: object = None
    components: int = 1

    @property
    def h(self):
        return len(self.vertices)

    @property
    def degree(self):
        return 2 * len(self.gens)

    @property
    def connected(self):
        return self.components == 1

    @property
    def trivial(self):
        return self.h == 1

    @property
    def index(self):
        """Index of the subgroup generated by gens (h / component size)."""
        return self.components


def build_cayley(K, B=None, group=None):
    delta = K.delta if hasattr(K, "delta") else int(K)
    G = group if group is not None else class_group(delta)
    if G.h > MAX_VERTICES:
        raise GroupTooLarge(f"h = {G.h} exceeds the dense eigensolve ceiling {MAX_VERTICES}")
    if B is None:
        B = default_bound(delta)
    verts = G.elements()
    index = {v: i for i, v in enumerate(verts)}
    gens, gps = [], []
    for p in primes_up_to(B - 1):
        if chi(delta, p) == -1:
            continue
        gens.append(IdealClass.of(_prime_form(delta, p)))
        gps.append(p)
    n = len(verts)
    A = np.zeros((n, n))
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for g in gens:
        ginv = g.inverse()
        for v in verts:
            i = index[v]
            for t in (compose(v, g), compose(v, ginv)):
                j = index[t]
                A[i, j] += 1
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    comps = len({find(i) for i in range(n)})
    return CayleyGraph(delta, verts, gens, gps, A, B, G, comps)


def laplacian(Gr):
    n = Gr.h
    if not Gr.gens:
        return np.zeros((n, n))
    return np.eye(n) - Gr.adjacency / Gr.degree


def character_spectrum(Gr):
    """1 - (1/|gens|) sum_g Re chi(g) over all characters of the abelian group."""
    G = Gr.group
    coords = G.coordinates
    orders = list(G.orders)
    if not orders:
        return np.array([0.0])
    gvecs = np.array([coords[g] for g in Gr.gens], dtype=float).reshape(len(Gr.gens), len(orders))
    grids = np.meshgrid(*[np.arange(d) for d in orders], indexing="ij")
    T = np.stack([g.ravel() for g in grids], axis=1) / np.array(orders, dtype=float)
    phase = 2 * np.pi * T @ gvecs.T
    return np.sort(1 - np.cos(phase).sum(axis=1) / len(Gr.gens))


def _cut_values(A, masks):
    deg = A.sum(axis=1)
    S = masks.astype(float)
    return S @ deg - np.einsum("ij,ij->i", S @ A, S)


def _exact_cheeger(A):
    n = A.shape[0]
    m = n - 1  # the last vertex is always outside S (complements give the same ratio)
    ids = np.arange(1, 1 << m, dtype=np.int64)
    masks = ((ids[:, None] >> np.arange(m)) & 1).astype(np.uint8)
    masks = np.concatenate([masks, np.zeros((len(ids), 1), dtype=np.uint8)], axis=1)
    cut = _cut_values(A, masks)
    size = masks.sum(axis=1)
    ratio = cut / np.minimum(size, n - size)
    k = int(np.argmin(ratio))
    return float(ratio[k]), masks[k].astype(bool)


def _sweep_cheeger(A, fiedler):
    n = A.shape[0]
    order = np.argsort(fiedler, kind="stable")
    best = math.inf
    S = np.zeros(n, dtype=np.uint8)
    masks = []
    for k in range(n - 1):
        S[order[k]] = 1
        masks.append(S.copy())
    masks = np.array(masks)
    cut = _cut_values(A, masks)
    size = masks.sum(axis=1)
    ratio = cut / np.minimum(size, n - size)
    best = float(ratio.min())
    return best


@dataclass
class CheegerResult:
    exact: bool
    lo: float  # normalized (conductance) bounds
    hi: float
    raw_lo: float  # in edge-boundary units |dS|/min(|S|, |S^c|)
    raw_hi: float


def cheeger(Gr, delta=None, fiedler=None):
    """Cheeger constant, exact for h <= 20, else [delta/2, sweep cut]."""
    if Gr.h < 2:
        raise Trivial("Cheeger constant needs at least two vertices")
    d = Gr.degree
    if Gr.h <= EXACT_CHEEGER_MAX:
        raw, _ = _exact_cheeger(Gr.adjacency)
        return CheegerResult(True, raw / d, raw / d, raw, raw)
    if delta is None or fiedler is None:
        w, V = np.linalg.eigh(laplacian(Gr))
        delta, fiedler = float(w[1]), V[:, 1]
    raw_hi = _sweep_cheeger(Gr.adjacency, fiedler)
    lo = delta / 2
    return CheegerResult(False, lo, raw_hi / d, lo * d, raw_hi)


@dataclass
class SpectrumReport:
    D: int
    delta_K: int
    h: int
    h_narrow: int
    delta: float
    adjacency_gap: float
    eigenvalues: list
    cheeger: CheegerResult
    epsilon: float
    gap_bound_grh: float  # h^(-1+eps)
    gap_bound_grh_explicit: float  # c(eps) h^(-1+eps), c = eps^2 / log^2 D
    gap_bound_uncond: float  # exp(-c sqrt(log h))
    Q: float
    lower_curves: dict
    B: int
    n_gens: int
    character_match: bool = None
    notes: list = field(default_factory=list)

    @property
    def meets_grh_bound(self):
        return self.delta >= self.gap_bound_grh

    @property
    def sandwich_holds(self):
        c = self.cheeger
        tol = 1e-9
        return c.lo ** 2 / 2 <= self.delta + tol and self.delta <= 2 * c.hi + tol

    def to_json(self):
        return {
            "D": self.D,
            "delta_K": self.delta_K,
            "h": self.h,
            "h_narrow": self.h_narrow,
            "delta": self.delta,
            "adjacency_gap": self.adjacency_gap,
            "cheeger": vars(self.cheeger),
            "epsilon": self.epsilon,
            "gap_bound_grh": self.gap_bound_grh,
            "gap_bound_grh_explicit": self.gap_bound_grh_explicit,
            "gap_bound_uncond": self.gap_bound_uncond,
            "meets_grh_bound": self.meets_grh_bound,
            "Q": self.Q,
            "lower_curves": self.lower_curves,
            "B": self.B,
            "n_gens": self.n_gens,
            "character_match": self.character_match,
            "notes": self.notes,
        }


def lower_curves(delta):
    L = math.log(delta)
    LL = math.log(L)
    return {
        "grh_curve": math.exp(math.log(2) * L / LL**2),
        "uncond_curve": math.exp(L ** (1 / 3)),
    }


def query_bound(delta_gap, h):
    return math.pi / (2 * delta_gap) * math.sqrt(h)


def spectral_gap(Gr, epsilon=DEFAULT_EPSILON, c_uncond=1.0, D=None, check_characters=True):
    if Gr.h < 2:
        raise Trivial("trivial class group: no spectral gap")
    if not Gr.connected:
        raise Disconnected(
            f"generators below B = {Gr.B} span a subgroup of index {Gr.index}; raise B")
    Lap = laplacian(Gr)
    w, V = np.linalg.eigh(Lap)
    delta = float(w[1])
    aw = np.linalg.eigvalsh(Gr.adjacency)
    adj_gap = float(aw[-1] - aw[-2])
    ch = cheeger(Gr, delta, V[:, 1])
    h = Gr.h
    L = math.log(Gr.delta)
    match = None
    if check_characters:
        cs = character_spectrum(Gr)
        match = bool(np.allclose(np.sort(w), cs, rtol=1e-10, atol=1e-10))
    return SpectrumReport(
        D=D if D is not None else Gr.delta,
        delta_K=Gr.delta,
        h=h,
        h_narrow=Gr.group.h_narrow,
        delta=delta,
        adjacency_gap=adj_gap,
        eigenvalues=[float(x) for x in w],
        cheeger=ch,
        epsilon=epsilon,
        gap_bound_grh=h ** (-1 + epsilon),
        gap_bound_grh_explicit=epsilon**2 / L**2 * h ** (-1 + epsilon),
        gap_bound_uncond=math.exp(-c_uncond * math.sqrt(math.log(h))),
        Q=query_bound(delta, h),
        lower_curves=lower_curves(Gr.delta),
        B=Gr.B,
        n_gens=len(Gr.gens),
        character_match=match,
    )


CSV_COLUMNS = ["D", "delta_exact_or_bound", "h", "h_narrow", "delta", "cheeger_lo",
               "cheeger_hi", "Q", "grh_curve", "uncond_curve", "connected", "B_used"]


def table_row(D, B=None, epsilon=DEFAULT_EPSILON):
    """One lower-bound table row; problems are annotated in delta_exact_or_bound."""
    from .quadfield import make_field

    K = make_field(D, compute_unit=False)
    G = class_group(K.delta)
    curves = lower_curves(K.delta)
    row = dict.fromkeys(CSV_COLUMNS, "")
    row.update(D=D, h=G.h, h_narrow=G.h_narrow, **curves)
    try:
        Gr = build_cayley(K, B, G)
    except GroupTooLarge as e:
        row["delta_exact_or_bound"] = f"error:{type(e).__name__}"
        return row, None
    row["B_used"] = Gr.B
    row["connected"] = Gr.connected
    if Gr.trivial:
        row["delta_exact_or_bound"] = "trivial"
        return row, None
    if not Gr.connected:
        row["delta_exact_or_bound"] = "disconnected"
        return row, None
    rep = spectral_gap(Gr, epsilon, D=D)
    row.update(
        delta_exact_or_bound="exact" if rep.cheeger.exact else "bound",
        delta=rep.delta,
        cheeger_lo=rep.cheeger.lo,
        cheeger_hi=rep.cheeger.hi,
        Q=rep.Q,
    )
    return row, rep


def lower_bound_table(D_list, B=None, epsilon=DEFAULT_EPSILON):
    rows, reports = [], []
    for D in D_list:
        row, rep = table_row(D, B, epsilon)
        rows.append(row)
        reports.append(rep)
    return rows, reports


def format_csv(rows):
    import csv
    import io

    buf = io.StringIO()
    w = csv.DictWriter(buf, CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()
