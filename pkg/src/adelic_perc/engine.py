"""Random-graph engine: vertex sets, coupled pair uniforms, union-find and
estimators (cluster statistics, two-point function, beta_c brackets).

Every supported vertex set is a finite subset of an abelian group whose
difference map has a compact integer encoding ("difference code").  A
kernel therefore only has to be evaluated once per distinct difference;
the pair sweep is a table lookup followed by a comparison with the pair's
uniform.
"""

from __future__ import annotations

import hashlib
import io
import itertools
import json
import math
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .arith_ff import FqField, Poly
from .arith_nf import NFElement, NumberField, transversality_check
from .hierlattice import HierParams, HierPoint
from .kernels import (
    ADELIC_VARIANTS,
    BASEQ,
    KernelSpec,
    kernel_of_difference,
    prob_of_difference,
)

DEFAULT_VERTEX_BUDGET = 200_000
MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_U53 = 2.0**-53


def vertex_budget() -> int:
    env = os.environ.get("ADELIC_PERC_BUDGET")
    return int(env) if env else DEFAULT_VERTEX_BUDGET


class VertexBudgetError(ValueError):
    pass


# --- hashing / pair uniforms ----------------------------------------------


def _fmix(z: int) -> int:
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def mix64(*values: int) -> int:
    """SplitMix64-style hash of a sequence of 64-bit integers."""
    h = 0
    for v in values:
        h = _fmix(((h ^ (v & MASK64)) + GOLDEN) & MASK64)
    return h


def _fmix_np(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def mix64_np(seed: int, a: int, b: np.ndarray) -> np.ndarray:
    """Vectorised mix64(seed, a, b) over an array of b (uint64 wraparound)."""
    g = np.uint64(GOLDEN)
    h = _fmix(((seed & MASK64) + GOLDEN) & MASK64)
    h = _fmix(((h ^ (a & MASK64)) + GOLDEN) & MASK64)
    with np.errstate(over="ignore"):
        return _fmix_np((np.uint64(h) ^ b.astype(np.uint64)) + g)


def pair_uniform(master_seed: int, i: int, j: int) -> float:
    """u in [0, 1) shared by the unordered pair {i, j}: top 53 bits of mix64."""
    lo, hi = (i, j) if i < j else (j, i)
    return (mix64(master_seed, lo, hi) >> 11) * _U53


def row_uniforms(master_seed: int, i: int, js: np.ndarray) -> np.ndarray:
    """pair_uniform(master_seed, i, j) for all j > i in ``js``."""
    h = mix64_np(master_seed, i, js)
    return (h >> np.uint64(11)).astype(np.float64) * _U53


def trial_seed(master_seed: int, trial_index: int) -> int:
    return mix64(master_seed, trial_index)


# --- vertex sets -----------------------------------------------------------


@dataclass
class VertexSet:
    """Finite vertex set with dense ids and a vectorised difference code.

    ``model`` is one of "lattice", "nf", "hier", "poly".
    """

    model: str
    vertices: list
    bounds: dict
    codes: np.ndarray
    table_size: int
    digits: np.ndarray | None = None
    base: int = 0
    offset: int = 0
    context: object = None  # dimension, NumberField, HierParams or FqField
    _sub: np.ndarray | None = field(default=None, repr=False)
    _place: np.ndarray | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.vertices)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def diff_codes(self, i: int, js: np.ndarray) -> np.ndarray:
        """Difference codes of (vertex i) - (vertex j) for every j in js."""
        if self.model in ("lattice", "nf"):
            return self.codes[i] - self.codes[js] + self.offset
        if self._sub is None and self.base == 2:
            return self.codes[i] ^ self.codes[js]
        di = self.digits[i]
        dj = self.digits[js]
        if self._sub is not None:
            dd = self._sub[di, dj]
        else:
            dd = (di - dj) % self.base
        return dd @ self._place

    def diff_payload(self, code: int):
        """The group element encoded by a difference code."""
        if self.model in ("lattice", "nf"):
            B = self.base
            R2 = self.offset_radius
            d = []
            for _ in range(self.dim):
                code, r = divmod(code, B)
                d.append(r - R2)
            if self.model == "nf":
                K: NumberField = self.context
                return NFElement(K, d[0], d[1] if len(d) > 1 else 0)
            return tuple(d)
        if self.model == "hier":
            return HierPoint.from_code(self.context, code)
        return Poly.from_int(self.context, code)

    @property
    def dim(self) -> int:
        if self.model == "lattice":
            return self.context
        return 1 if self.context.kind == "Q" else 2

    @property
    def offset_radius(self) -> int:
        return 2 * self.bounds["radius"]

    def describe(self) -> dict:
        return {"model": self.model, "size": self.n, **self.bounds}


def _digit_arrays(codes: np.ndarray, base: int, ndig: int) -> tuple[np.ndarray, np.ndarray]:
    place = base ** np.arange(ndig, dtype=np.int64)
    digits = (codes[:, None] // place[None, :]) % base
    return digits, place


def build_vertex_set(model: str, budget: int | None = None, **bounds) -> VertexSet:
    """Enumerate a finite box / ball.

    * ``lattice``: ``dim``, ``radius`` (Z^dim box)
    * ``nf``: ``field`` ("Q", "Qi", "Qsqrt2"), ``radius`` (|a|, |b| <= radius);
      ``toric=True`` asserts the field is transverse
    * ``hier``: ``L``, ``N``, ``max_index``
    * ``poly``: ``field`` (FqField or dict), ``max_degree`` (all polys of degree < max_degree)
    """
    budget = vertex_budget() if budget is None else budget
    if model in ("lattice", "nf"):
        R = int(bounds["radius"])
        if R < 0:
            raise ValueError("radius must be >= 0")
        if model == "lattice":
            dim = int(bounds.get("dim", 1))
            context: object = dim
            desc = {"dim": dim, "radius": R}
        else:
            K = bounds["field"]
            K = K if isinstance(K, NumberField) else NumberField(K)
            if bounds.get("toric") and R >= 1 and not transversality_check(K, R):
                raise ValueError(f"{K} is not transverse on the radius-{R} box")
            dim = 1 if K.kind == "Q" else 2
            context = K
            desc = {"field": K.kind, "radius": R}
        count = (2 * R + 1) ** dim
        if count > budget:
            raise VertexBudgetError(f"{count} vertices exceed budget {budget}")
        pts = list(itertools.product(range(-R, R + 1), repeat=dim))
        # coordinate order: first coordinate is least significant in codes
        B = 4 * R + 1
        arr = np.array(pts, dtype=np.int64).reshape(len(pts), dim)
        codes = ((arr + R) * (B ** np.arange(dim, dtype=np.int64))).sum(axis=1)
        offset = int(sum(2 * R * B**k for k in range(dim)))
        if model == "nf":
            verts = [NFElement(K, p[0], p[1] if dim > 1 else 0) for p in pts]
        else:
            verts = [tuple(p) for p in pts]
        return VertexSet(model, verts, desc, codes, B**dim, base=B, offset=offset, context=context)
    if model == "hier":
        params = HierParams(int(bounds["L"]), int(bounds.get("N", 1)))
        m = int(bounds["max_index"])
        count = params.block_count**m
        if count > budget:
            raise VertexBudgetError(f"{count} vertices exceed budget {budget}")
        codes = np.arange(count, dtype=np.int64)
        digits, place = _digit_arrays(codes, params.L, m * params.N)
        verts = [HierPoint.from_code(params, c) for c in range(count)]
        vs = VertexSet(
            "hier", verts, {"L": params.L, "N": params.N, "max_index": m}, codes, count,
            digits=digits, base=params.L, context=params,
        )
        vs._place = place
        return vs
    if model == "poly":
        F = bounds["field"]
        if isinstance(F, dict):
            F = FqField(F["p"], F.get("r", 1), tuple(F["modulus"]) if F.get("modulus") else None)
        D = int(bounds["max_degree"])
        q = F.q
        count = q**D
        if count > budget:
            raise VertexBudgetError(f"{count} vertices exceed budget {budget}")
        codes = np.arange(count, dtype=np.int64)
        digits, place = _digit_arrays(codes, q, D)
        verts = [Poly.from_int(F, c) for c in range(count)]
        vs = VertexSet(
            "poly", verts, {"q": q, "max_degree": D}, codes, count, digits=digits, base=q, context=F
        )
        vs._place = place
        if F.r > 1:
            vs._sub = np.array(F.sub_table(), dtype=np.int64)
        return vs
    raise ValueError(f"unknown vertex model {model!r}")


# --- kernel / probability tables ------------------------------------------


class KernelEvalError(ValueError):
    pass


_J_CACHE: dict = {}


def _zero_code(vs: VertexSet) -> int:
    return vs.offset if vs.model in ("lattice", "nf") else 0


def _reachable_codes(vs: VertexSet) -> np.ndarray:
    if vs.model in ("lattice", "nf"):
        # only differences inside [-2R, 2R]^dim occur; those are all table entries
        return np.arange(vs.table_size, dtype=np.int64)
    return np.arange(vs.table_size, dtype=np.int64)


def kernel_table(vs: VertexSet, spec: KernelSpec) -> np.ndarray:
    """J at every difference code (nan at the zero difference)."""
    key = (id(vs), vs.table_size, spec)
    hit = _J_CACHE.get(key)
    if hit is not None:
        return hit
    table = np.full(vs.table_size, np.nan)
    zero = _zero_code(vs)
    for c in _reachable_codes(vs).tolist():
        if c == zero:
            continue
        d = vs.diff_payload(c)
        try:
            table[c] = float(kernel_of_difference(spec, d))
        except ValueError as exc:
            raise KernelEvalError(f"kernel {spec.variant} failed at difference {d}: {exc}") from exc
    _J_CACHE[key] = table
    if len(_J_CACHE) > 64:
        _J_CACHE.pop(next(iter(_J_CACHE)))
    return table


def _rate_scale(spec: KernelSpec) -> float:
    return math.log(spec.q) if spec.base_mode == BASEQ else 1.0


def prob_table(vs: VertexSet, spec: KernelSpec, beta: float) -> np.ndarray:
    """Edge probability at every difference code."""
    if beta < 0:
        raise ValueError("beta must be >= 0")
    if spec.variant in ADELIC_VARIANTS:
        table = np.zeros(vs.table_size)
        zero = _zero_code(vs)
        for c in _reachable_codes(vs).tolist():
            if c != zero:
                d = vs.diff_payload(c)
                try:
                    table[c] = prob_of_difference(spec, beta, d)
                except ValueError as exc:
                    raise KernelEvalError(f"{spec.variant} failed at difference {d}: {exc}") from exc
        return table
    J = kernel_table(vs, spec)
    with np.errstate(invalid="ignore"):
        p = -np.expm1(-beta * J * _rate_scale(spec))
    p[np.isnan(p)] = 0.0
    return p


# --- union-find ------------------------------------------------------------


class UnionFind:
    """Disjoint sets with path compression and union by size."""

    def __init__(self, n: int):
        self.parent = np.arange(n, dtype=np.int64)
        self.size = np.ones(n, dtype=np.int64)
        self.n = n
        self.components = n

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return int(root)

    def find_many(self, xs: np.ndarray) -> np.ndarray:
        """Roots of many elements (pointer jumping, then full compression)."""
        parent = self.parent
        r = parent[xs]
        while True:
            nxt = parent[r]
            if np.array_equal(nxt, r):
                break
            r = nxt
        parent[xs] = r
        return r

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.components -= 1
        return True

    def union_row(self, i: int, js: np.ndarray):
        """Union i with every j in js, touching each distinct root once."""
        if len(js) == 0:
            return
        roots = np.unique(self.find_many(js))
        for r in roots.tolist():
            self.union(i, r)

    def largest(self) -> int:
        roots = self.parent == np.arange(self.n)
        return int(self.size[roots].max()) if self.n else 0

    def labels(self) -> np.ndarray:
        return self.find_many(np.arange(self.n, dtype=np.int64))


@dataclass(frozen=True)
class ClusterStats:
    components: int
    largest: int
    largest_fraction: float
    histogram: dict  # cluster size -> number of clusters

    def to_json(self) -> dict:
        return {
            "components": self.components,
            "largest": self.largest,
            "largest_fraction": self.largest_fraction,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
        }


def cluster_stats(dsu: UnionFind) -> ClusterStats:
    labels = dsu.labels()
    sizes = np.bincount(labels, minlength=dsu.n)
    sizes = sizes[sizes > 0]
    hist = Counter(sizes.tolist())
    largest = int(sizes.max()) if len(sizes) else 0
    return ClusterStats(len(sizes), largest, largest / dsu.n if dsu.n else 0.0, dict(hist))


# --- sampling --------------------------------------------------------------


@dataclass(frozen=True)
class SampleConfig:
    """``coupling``: "crn" reuses pair uniforms of ``master_seed`` for every
    beta and kernel; "independent" mixes beta and the kernel into the seed."""

    master_seed: int
    beta: float
    coupling: str = "crn"
    threads: int = 1
    emit_edges: bool = False
    chunk_rows: int = 256

    def effective_seed(self, spec: KernelSpec) -> int:
        if self.coupling == "crn":
            return self.master_seed
        if self.coupling == "independent":
            tag = int.from_bytes(hashlib.sha256(repr((self.beta, spec)).encode()).digest()[:8], "little")
            return mix64(self.master_seed, tag)
        raise ValueError(f"unknown coupling {self.coupling!r}")


@dataclass
class SampledGraph:
    dsu: UnionFind
    edges: list | None
    edge_count: int
    pairs: int


def _row_edges(vs: VertexSet, P: np.ndarray, seed: int, i: int) -> np.ndarray:
    js = np.arange(i + 1, vs.n, dtype=np.int64)
    if len(js) == 0:
        return js
    p = P[vs.diff_codes(i, js)]
    u = row_uniforms(seed, i, js)
    return js[u < p]


def _chunk_edges(vs, P, seed, rows) -> list[np.ndarray]:
    return [_row_edges(vs, P, seed, i) for i in rows]


def sweep_edges(vs: VertexSet, P: np.ndarray, seed: int, threads: int = 1, chunk_rows: int = 256):
    """Yield (i, neighbours j > i) in row order.  Chunks may be computed by
    worker threads; results are consumed in deterministic order."""
    n = vs.n
    chunks = [range(s, min(s + chunk_rows, n)) for s in range(0, n, chunk_rows)]
    if threads <= 1:
        for rows in chunks:
            for i in rows:
                yield i, _row_edges(vs, P, seed, i)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_chunk_edges, vs, P, seed, rows) for rows in chunks]
        for rows, fut in zip(chunks, futures):
            for i, js in zip(rows, fut.result()):
                yield i, js


def sample_graph(vs: VertexSet, spec: KernelSpec, cfg: SampleConfig, P: np.ndarray | None = None) -> SampledGraph:
    """One realisation: edge {i, j} iff pair_uniform(seed, i, j) < P(v_i - v_j)."""
    if P is None:
        P = prob_table(vs, spec, cfg.beta)
    seed = cfg.effective_seed(spec)
    dsu = UnionFind(vs.n)
    edges = [] if cfg.emit_edges else None
    count = 0
    for i, js in sweep_edges(vs, P, seed, cfg.threads, cfg.chunk_rows):
        count += len(js)
        if edges is not None:
            edges.extend((i, int(j)) for j in js)
        dsu.union_row(i, js)
    return SampledGraph(dsu, edges, count, vs.n * (vs.n - 1) // 2)


def edge_set(vs: VertexSet, P: np.ndarray, seed: int) -> set:
    return {(i, int(j)) for i, js in sweep_edges(vs, P, seed) for j in js}


# --- estimators ------------------------------------------------------------


@dataclass
class TwoPoint:
    pair: tuple
    trials: int
    freq: float
    stderr: float


def two_point_estimate(
    vs: VertexSet,
    spec: KernelSpec,
    beta: float,
    pairs: Sequence[tuple[int, int]],
    trials: int,
    master_seed: int,
    threads: int = 1,
) -> list[TwoPoint]:
    """Frequency with which each pair (by vertex id) shares a cluster."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    P = prob_table(vs, spec, beta)
    hits = np.zeros(len(pairs), dtype=np.int64)
    for t in range(trials):
        cfg = SampleConfig(trial_seed(master_seed, t), beta, threads=threads)
        dsu = sample_graph(vs, spec, cfg, P).dsu
        for k, (x, y) in enumerate(pairs):
            if x == y or dsu.find(x) == dsu.find(y):
                hits[k] += 1
    out = []
    for k, pr in enumerate(pairs):
        f = hits[k] / trials
        out.append(TwoPoint(tuple(pr), trials, float(f), math.sqrt(f * (1 - f) / trials)))
    return out


@dataclass
class BetaCEstimate:
    lower: float
    upper: float
    theta: float
    sizes: list
    trials: int
    frequencies: list  # dicts: beta, size, survival frequency
    trial_thresholds: dict = field(default_factory=dict)  # size -> per-trial beta*

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def to_json(self) -> dict:
        return {
            "bracket": [self.lower, self.upper],
            "theta": self.theta,
            "sizes": self.sizes,
            "trials": self.trials,
            "frequencies": self.frequencies,
            "trial_thresholds": {str(k): v for k, v in self.trial_thresholds.items()},
        }


def trial_threshold(vs: VertexSet, spec: KernelSpec, seed: int, theta: float, beta_max: float) -> float:
    """Smallest beta at which the largest cluster reaches theta |V| in the
    CRN realisation with this seed (inf if not reached by beta_max).

    Edge {i, j} is present at beta iff beta > -log(1 - u_ij) / (s J_ij), so
    adding pairs in increasing activation order (Kruskal) traces the whole
    coupled family of graphs at once.
    """
    J = kernel_table(vs, spec) * _rate_scale(spec)
    n = vs.n
    target = math.ceil(theta * n)
    if target <= 1:
        return 0.0
    acts, rows, cols = [], [], []
    for i in range(n - 1):
        js = np.arange(i + 1, n, dtype=np.int64)
        u = row_uniforms(seed, i, js)
        a = -np.log1p(-u) / J[vs.diff_codes(i, js)]
        keep = a <= beta_max
        if keep.any():
            acts.append(a[keep])
            rows.append(np.full(int(keep.sum()), i, dtype=np.int64))
            cols.append(js[keep])
    if not acts:
        return math.inf
    act = np.concatenate(acts)
    ri = np.concatenate(rows)
    ci = np.concatenate(cols)
    order = np.argsort(act, kind="stable")
    dsu = UnionFind(n)
    for k in order.tolist():
        a, b = int(ri[k]), int(ci[k])
        ra, rb = dsu.find(a), dsu.find(b)
        if ra != rb:
            dsu.union(ra, rb)
            if dsu.size[dsu.find(ra)] >= target:
                return float(act[k])
    return math.inf


def _survives(stats_largest_fraction: float, theta: float) -> bool:
    return stats_largest_fraction >= theta


def estimate_beta_c(
    builder: Callable[[int], VertexSet],
    spec: KernelSpec,
    sizes: Sequence[int],
    theta: float = 0.25,
    trials: int = 30,
    tol: float = 1e-3,
    master_seed: int = 0,
    beta_max: float = 64.0,
    threads: int = 1,
) -> BetaCEstimate:
    """Bisection on beta for the event "largest-cluster fraction >= theta in
    a strict majority of trials, at every size in the ladder".

    Trials share pair uniforms across beta (CRN), so each trial's survival is
    monotone in beta.  For kernels given as J the per-trial thresholds are
    computed exactly once; adelic kernels are re-sampled at every bisection
    point.
    """
    if not 0 < theta < 1:
        raise ValueError("theta must lie in (0, 1)")
    if len(sizes) < 2:
        raise ValueError("at least two sizes are needed")
    sets = {s: builder(s) for s in sizes}
    seeds = [trial_seed(master_seed, t) for t in range(trials)]
    frequencies: list[dict] = []
    thresholds: dict = {}

    if spec.variant not in ADELIC_VARIANTS:
        for s, vs in sets.items():
            thresholds[s] = [trial_threshold(vs, spec, sd, theta, beta_max) for sd in seeds]

        def freq(beta: float, s) -> float:
            return sum(1 for b in thresholds[s] if b < beta) / trials

    else:

        def freq(beta: float, s) -> float:
            vs = sets[s]
            P = prob_table(vs, spec, beta)
            ok = 0
            for sd in seeds:
                g = sample_graph(vs, spec, SampleConfig(sd, beta, threads=threads), P)
                ok += _survives(g.dsu.largest() / vs.n, theta)
            return ok / trials

    def event(beta: float) -> bool:
        good = True
        for s in sizes:
            f = freq(beta, s)
            frequencies.append({"beta": beta, "size": s, "freq": f})
            good = good and f > 0.5
        return good

    lo, hi = 0.0, beta_max
    if not event(hi):
        raise ValueError(f"no survival at beta_max={beta_max}; raise beta_max")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if event(mid):
            hi = mid
        else:
            lo = mid
    _check_monotone(frequencies)
    return BetaCEstimate(lo, hi, theta, list(sizes), trials, frequencies, thresholds)


class MonotonicityError(RuntimeError):
    pass


def _check_monotone(frequencies: list[dict], slack: float = 0.2):
    by_size: dict = {}
    for row in frequencies:
        by_size.setdefault(row["size"], []).append((row["beta"], row["freq"]))
    for s, rows in by_size.items():
        rows.sort()
        for (b1, f1), (b2, f2) in zip(rows, rows[1:]):
            if f2 + slack < f1:
                raise MonotonicityError(
                    f"survival frequency drops from {f1} at beta={b1} to {f2} at beta={b2} (size {s})"
                )


# --- coupled comparison ----------------------------------------------------


class KernelOrderError(AssertionError):
    pass


@dataclass
class CoupledReport:
    seeds: int
    inclusion_holds: int
    largest_dominated: int
    edges_a: list
    edges_b: list

    @property
    def all_hold(self) -> bool:
        return self.inclusion_holds == self.seeds


def compare_coupled(
    vs: VertexSet, spec_a: KernelSpec, spec_b: KernelSpec, beta: float, seeds: Iterable[int]
) -> CoupledReport:
    """With common pair uniforms, check edges(A) is a subset of edges(B) per seed."""
    PA = prob_table(vs, spec_a, beta)
    PB = prob_table(vs, spec_b, beta)
    bad = np.nonzero(PA > PB)[0]
    if len(bad):
        c = int(bad[0])
        raise KernelOrderError(
            f"P_A > P_B at difference {vs.diff_payload(c)}: {PA[c]} > {PB[c]} ({len(bad)} offending differences)"
        )
    seeds = list(seeds)
    holds = dominated = 0
    ea_all, eb_all = [], []
    for sd in seeds:
        dsu_a, dsu_b = UnionFind(vs.n), UnionFind(vs.n)
        ok = True
        na = nb = 0
        for i in range(vs.n - 1):
            js = np.arange(i + 1, vs.n, dtype=np.int64)
            codes = vs.diff_codes(i, js)
            u = row_uniforms(sd, i, js)
            ea = u < PA[codes]
            eb = u < PB[codes]
            if np.any(ea & ~eb):
                ok = False
            na += int(ea.sum())
            nb += int(eb.sum())
            dsu_a.union_row(i, js[ea])
            dsu_b.union_row(i, js[eb])
        holds += ok
        dominated += dsu_a.largest() <= dsu_b.largest()
        ea_all.append(na)
        eb_all.append(nb)
    return CoupledReport(len(seeds), holds, dominated, ea_all, eb_all)


# --- output ----------------------------------------------------------------


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence], config: dict) -> str:
    """CSV with a leading ``# config-hash`` comment line and a header row."""
    buf = io.StringIO()
    buf.write(f"# config-hash: {config_hash(config)}\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    text = buf.getvalue()
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return text


def write_json(path: str, payload: dict, config: dict) -> str:
    doc = {"config_hash": config_hash(config), "config": config, **payload}
    text = json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n"
    with open(path, "w") as fh:
        fh.write(text)
    return text


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if o == math.inf:
        return "inf"
    raise TypeError(f"not serialisable: {o!r}")
