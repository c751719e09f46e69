import math
import subprocess
import sys
from collections import deque

import numpy as np
import pytest

from adelic_perc import engine
from adelic_perc.arith_ff import prime_field
from adelic_perc.engine import (
    SampleConfig,
    UnionFind,
    VertexBudgetError,
    build_vertex_set,
    cluster_stats,
    compare_coupled,
    edge_set,
    estimate_beta_c,
    pair_uniform,
    prob_table,
    row_uniforms,
    sample_graph,
    two_point_estimate,
)
from adelic_perc.kernels import KernelSpec, prob_of_difference

F2 = prime_field(2)
FFLOCAL = KernelSpec.from_json({"variant": "FFLocal", "alpha": 1, "field": {"p": 2}, "place": {"kind": "finite", "pi": "0,1"}})
LATTICE = KernelSpec("Lattice", 1.0)


def test_vertex_counts():
    assert build_vertex_set("lattice", dim=1, radius=100).n == 201
    assert build_vertex_set("hier", L=2, N=1, max_index=10).n == 1024
    assert build_vertex_set("poly", field=F2, max_degree=10).n == 1024
    assert build_vertex_set("nf", field="Qi", radius=3).n == 49


def test_vertex_budget():
    with pytest.raises(VertexBudgetError):
        build_vertex_set("lattice", dim=3, radius=100, budget=1000)


@pytest.mark.parametrize(
    "model,bounds,spec",
    [
        ("lattice", {"dim": 2, "radius": 3}, LATTICE),
        ("nf", {"field": "Qsqrt2", "radius": 3}, KernelSpec.from_json({"variant": "Toric", "alpha": 1})),
        ("hier", {"L": 3, "N": 2, "max_index": 2}, KernelSpec("Hier", 1.0, L=3, N=2)),
        ("poly", {"field": F2, "max_degree": 5}, FFLOCAL),
        ("poly", {"field": {"p": 2, "r": 2, "modulus": [1, 1, 1]}, "max_degree": 3},
         KernelSpec.from_json({"variant": "FFInfty", "alpha": 1, "field": {"p": 2, "r": 2, "modulus": [1, 1, 1]}})),
    ],
)
def test_prob_table_matches_direct_evaluation(model, bounds, spec):
    vs = build_vertex_set(model, **bounds)
    P = prob_table(vs, spec, 0.7)
    rng = np.random.default_rng(1)
    for _ in range(200):
        i, j = rng.choice(vs.n, 2, replace=False)
        u, v = vs.vertices[i], vs.vertices[j]
        d = tuple(a - b for a, b in zip(u, v)) if isinstance(u, tuple) else u - v
        c = int(vs.diff_codes(int(i), np.array([j]))[0])
        assert P[c] == pytest.approx(prob_of_difference(spec, 0.7, d), rel=1e-12)


def test_pair_uniform_symmetric_and_vectorised():
    assert pair_uniform(5, 3, 7) == pair_uniform(5, 7, 3)
    js = np.arange(21, 70)
    assert list(row_uniforms(5, 20, js)) == [pair_uniform(5, 20, int(j)) for j in js]


def test_pair_uniform_cross_process():
    code = "from adelic_perc.engine import pair_uniform; print(repr(pair_uniform(123, 4, 99)))"
    outs = {subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True).stdout for _ in range(2)}
    assert outs == {repr(pair_uniform(123, 4, 99)) + "\n"}


def test_pair_uniform_mean():
    u = np.concatenate([row_uniforms(9, i, np.arange(i + 1, i + 1001)) for i in range(1000)])
    assert len(u) == 10**6
    assert abs(u.mean() - 0.5) < 0.002
    assert u.min() >= 0 and u.max() < 1


def test_beta_zero_and_huge():
    vs = build_vertex_set("lattice", dim=1, radius=20)
    g = sample_graph(vs, LATTICE, SampleConfig(1, 0.0))
    assert g.edge_count == 0 and cluster_stats(g.dsu).components == vs.n
    g = sample_graph(vs, LATTICE, SampleConfig(1, 1e9))
    assert cluster_stats(g.dsu).largest == vs.n
    assert g.pairs == vs.n * (vs.n - 1) // 2


def test_crn_monotone_in_beta():
    vs = build_vertex_set("nf", field="Qsqrt2", radius=5)
    spec = KernelSpec("Toric", 1.0)
    prev = set()
    for beta in (0.05, 0.1, 0.3, 0.8, 2.0):
        cur = edge_set(vs, prob_table(vs, spec, beta), 77)
        assert prev <= cur
        prev = cur


def test_threads_do_not_change_results():
    vs = build_vertex_set("poly", field=F2, max_degree=9)
    out = []
    for threads in (1, 3):
        g = sample_graph(vs, FFLOCAL, SampleConfig(4, 0.05, threads=threads, emit_edges=True, chunk_rows=37))
        out.append((g.edges, cluster_stats(g.dsu).histogram))
    assert out[0] == out[1]


def test_nested_balls_share_edges():
    # ids of a smaller ball are a prefix of the larger one, and uniforms depend only on the pair
    spec = KernelSpec("Hier", 1.0, L=2)
    small, big = (build_vertex_set("hier", L=2, max_index=m) for m in (6, 8))
    es = edge_set(small, prob_table(small, spec, 1.0), 3)
    eb = edge_set(big, prob_table(big, spec, 1.0), 3)
    assert es == {(i, j) for i, j in eb if j < small.n}


def test_independent_coupling_differs_from_crn():
    vs = build_vertex_set("lattice", dim=1, radius=30)
    a = sample_graph(vs, LATTICE, SampleConfig(2, 1.0, emit_edges=True)).edges
    b = sample_graph(vs, LATTICE, SampleConfig(2, 1.0, coupling="independent", emit_edges=True)).edges
    assert a != b


# --- union-find ----------------------------------------------------------------------


def test_union_find_examples():
    uf = UnionFind(4)
    uf.union(0, 1)
    uf.union(1, 2)
    st = cluster_stats(uf)
    assert st.largest == 3 and st.components == 2
    assert cluster_stats(UnionFind(5)).components == 5
    uf = UnionFind(6)
    for i in range(6):
        uf.union_row(i, np.arange(i + 1, 6))
    assert cluster_stats(uf).components == 1


def _bfs_components(n, edges):
    adj = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = [False] * n
    sizes = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        q, size = deque([s]), 0
        while q:
            v = q.popleft()
            size += 1
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    q.append(w)
        sizes.append(size)
    return sorted(sizes)


def test_union_find_against_bfs():
    rng = np.random.default_rng(0)
    for _ in range(100):
        n = int(rng.integers(1, 501))
        m = int(rng.integers(0, 2 * n))
        edges = [tuple(int(v) for v in rng.integers(0, n, 2)) for _ in range(m)]
        uf = UnionFind(n)
        for a, b in edges:
            uf.union(a, b)
        labels = uf.labels()
        sizes = sorted(np.bincount(np.unique(labels, return_inverse=True)[1]).tolist())
        assert sizes == _bfs_components(n, edges)


# --- estimators ---------------------------------------------------------------------


def test_two_point_isolated_pair():
    vs = build_vertex_set("hier", L=2, max_index=1)  # two vertices at h = 0, J = 1
    spec = KernelSpec("Hier", 1.0, L=2)
    (r,) = two_point_estimate(vs, spec, math.log(2), [(0, 1)], 10_000, 5)
    assert abs(r.freq - 0.5) < 0.02


def test_two_point_trivial_cases():
    vs = build_vertex_set("lattice", dim=1, radius=5)
    same, distinct = two_point_estimate(vs, LATTICE, 0.0, [(3, 3), (1, 4)], 20, 0)
    assert same.freq == 1 and distinct.freq == 0


def test_beta_c_ff_local_shrinks_with_size():
    # finite-size brackets scale like 2^-D, i.e. towards beta_c = 0
    build = lambda D: build_vertex_set("poly", field=F2, max_degree=D)
    est = estimate_beta_c(build, FFLOCAL, [8, 10, 12], trials=9, tol=1e-4, beta_max=1.0)
    med = {D: sorted(v)[len(v) // 2] for D, v in est.trial_thresholds.items()}
    assert med[10] < 0.6 * med[8] and med[12] < 0.6 * med[10]
    assert med[12] < 1e-3


def test_beta_c_bracket_contract():
    build = lambda R: build_vertex_set("lattice", dim=1, radius=R)
    est = estimate_beta_c(build, LATTICE, [20, 40], trials=15, tol=1e-2, beta_max=16)
    assert est.width <= 1e-2
    below = [r for r in est.frequencies if r["beta"] <= est.lower and r["size"] == 40]
    assert all(r["freq"] <= 0.5 for r in below if r["beta"] == est.lower) or est.lower == 0


def test_compare_coupled_orders():
    vs = build_vertex_set("nf", field="Qsqrt2", radius=6)
    rep = compare_coupled(vs, KernelSpec("Lattice", 1.0), KernelSpec("Toric", 1.0), 0.5, range(10))
    assert rep.all_hold
    same = compare_coupled(vs, LATTICE, LATTICE, 0.5, range(3))
    assert same.edges_a == same.edges_b and same.all_hold
    with pytest.raises(engine.KernelOrderError):
        compare_coupled(vs, KernelSpec("Toric", 1.0), KernelSpec("Lattice", 1.0), 0.5, range(1))
