"""Named invariant suites.  Each suite returns a SuiteReport made of
individual checks; the CLI prints one line per check."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .arith_ff import (
    MissingPlaceError,
    PlaceFF,
    Poly,
    enumerate_irreducibles,
    nu_at_place,
    prime_field,
    product_formula_exponents,
    zeta_curve,
)
from .arith_nf import (
    QI,
    QQ,
    QSQRT2,
    NFElement,
    dedekind_zeta,
    dperp,
    dperp_array,
    euler_tail_bound,
    padic_expansion,
    primes_upto,
    product_formula_nf,
    split_prime,
    v_nu,
    vp_int,
)
from .hierlattice import (
    HierParams,
    HierPoint,
    h_index,
    level_count,
    poly_iso,
    poly_iso_inverse,
    random_point,
    reduce_dimension,
    ultrametric,
)
from .kernels import (
    BASEQ,
    ProbabilityVector,
    Schedule,
    adelic_prob_ff_diff,
    adelic_prob_nf_diff,
    beta_threshold,
    ff_infty_J,
    ff_local_J,
    hier_J,
    inclusion_prob,
    _real_complex,
    lattice_J,
    nf_arch_J,
    power_mean,
    powermean_J,
    toric_J,
)
from .magnitude import ExactMagnitude


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}" + (f"  ({self.detail})" if self.detail else "")


@dataclass
class SuiteReport:
    suite: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> Check:
        c = Check(name, bool(passed), detail)
        self.checks.append(c)
        return c

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks]


# --- function-field product formula ----------------------------------------


def random_factored_poly(field, rng: random.Random, max_degree: int, places: list[PlaceFF]):
    """A random nonzero polynomial of degree <= max_degree built as a
    constant times a product of known places; returns (f, support)."""
    c = rng.randrange(1, field.q)
    f = Poly.const(field, c)
    support = []
    target = rng.randint(0, max_degree)
    while f.degree < target:
        room = target - int(f.degree)
        cands = [x for x in places if x.degree <= room]
        if not cands:
            break
        x = rng.choice(cands)
        f = f * x.pi
        support.append(x)
    return f, list(dict.fromkeys(support))


def suite_product_formula_ff(samples: int = 1000, seed: int = 1, max_degree: int = 32) -> SuiteReport:
    rep = SuiteReport("product-formula-ff")
    rng = random.Random(seed)
    for p in (2, 3):
        F = prime_field(p)
        places = enumerate_irreducibles(F, 6)
        inf = PlaceFF.infinity()
        ok = 0
        for _ in range(samples):
            f, support = random_factored_poly(F, rng, max_degree, places)
            if product_formula_exponents(f, support + [inf]) == 0:
                ok += 1
        rep.add(f"F_{p}[t]: exponent sum 0", ok == samples, f"{ok}/{samples} exact, deg <= {max_degree}")
    # a dropped place must be detected, not silently summed
    F = prime_field(2)
    t = Poly.t(F)
    f = t * (t + Poly.const(F, 1))
    try:
        product_formula_exponents(f, [PlaceFF.finite(t), PlaceFF.infinity()])
        rep.add("missing place detected", False, "no error raised")
    except MissingPlaceError:
        rep.add("missing place detected", True)
    return rep


# --- number-field product formula ------------------------------------------


def suite_product_formula_nf(radius: int = 30) -> SuiteReport:
    rep = SuiteReport("product-formula-nf")
    for K in (QQ, QI, QSQRT2):
        total = ok = 0
        brange = [0] if K.kind == "Q" else range(-radius, radius + 1)
        for a in range(-radius, radius + 1):
            for b in brange:
                if a == 0 and b == 0:
                    continue
                total += 1
                ok += product_formula_nf(NFElement(K, a, b)).holds
        rep.add(f"{K.kind}: empty difference", ok == total, f"{ok}/{total}, |a|,|b| <= {radius}")
    return rep


# --- power means and kernels -----------------------------------------------

T_GRID = (-8, -4, -1, 0, 1, 2, 4, 8)


def random_weights(rng: random.Random, N: int) -> ProbabilityVector:
    w = [rng.randint(1, 1000) for _ in range(N)]
    total = sum(w)
    return ProbabilityVector(tuple(Fraction(v, total) for v in w))


def suite_monotonicity(samples: int = 1000, seed: int = 2) -> SuiteReport:
    rep = SuiteReport("monotonicity")
    rng = random.Random(seed)
    mono = ends = 0
    worst = 0.0
    for _ in range(samples):
        N = rng.randint(1, 8)
        lam = random_weights(rng, N)
        x = [rng.choice([-1, 1]) * math.exp(rng.uniform(-3, 3)) for _ in range(N)]
        vals = [power_mean(t, lam, x) for t in T_GRID]
        if all(b >= a - 1e-12 * max(1.0, abs(a)) for a, b in zip(vals, vals[1:])):
            mono += 1
        top, bot = max(abs(v) for v in x), min(abs(v) for v in x)
        hi, lo = power_mean(100, lam, x), power_mean(-100, lam, x)
        # chain min <= M_-100 <= M_-8 ... M_8 <= M_100 <= max, with slack 1e-6
        tol = 1e-6
        good = bot - tol <= lo <= vals[0] + tol and vals[-1] - tol <= hi <= top + tol
        ends += good
        worst = max(worst, hi - top, bot - lo)
    rep.add("nondecreasing in t on the grid", mono == samples, f"{mono}/{samples}, slack 1e-12")
    rep.add("t = +-100 bracketed by max/min", ends == samples, f"{ends}/{samples}, slack 1e-6")
    # the limits themselves: M_t -> max / min as t grows
    lam = ProbabilityVector.uniform(3)
    x = [1.0, 2.0, 5.0]
    rep.add(
        "limits t -> +-inf",
        abs(power_mean(1e6, lam, x) - 5.0) < 1e-5 and abs(power_mean(-1e6, lam, x) - 1.0) < 1e-5,
    )
    return rep


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b))


def suite_kernel_identities(samples: int = 1000, seed: int = 3, alpha: float = 1.0) -> SuiteReport:
    rep = SuiteReport("kernel-identities")
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(samples):
        N = rng.choice((2, 3, 4))
        d = [rng.choice([-1, 1]) * rng.randint(1, 50) for _ in range(N)]
        lhs = powermean_J(alpha, 2, ProbabilityVector.uniform(N), d)
        rhs = N ** ((N + alpha) / 2) * lattice_J(alpha, d)
        worst = max(worst, _rel(lhs, rhs))
    rep.add("power mean t=2 = N^((N+a)/2) lattice", worst < 1e-12, f"max rel err {worst:.2e}")

    worst = 0.0
    for k in range(samples):
        if k % 3 == 0:
            N = rng.choice((2, 3, 4))
            x = [rng.choice([-1, 1]) * rng.randint(1, 50) for _ in range(N)]
            z: list = []
        else:
            K = QI if k % 3 == 1 else QSQRT2
            e = NFElement(K, rng.randint(1, 40) * rng.choice([-1, 1]), rng.randint(1, 40) * rng.choice([-1, 1]))
            x, z = _real_complex(e)
        N = len(x) + 2 * len(z)
        lhs = powermean_J(alpha, 0, ProbabilityVector.uniform(N), x, z)
        rhs = toric_J(alpha, x, z)
        worst = max(worst, _rel(lhs, rhs))
    rep.add("power mean t=0 = toric (Z^N, Q(i), Q(sqrt2))", worst < 1e-12, f"max rel err {worst:.2e}")

    # FF local/infinity duality, exact
    F = prime_field(2)
    places = enumerate_irreducibles(F, 5)
    ok = total = 0
    while total < 200:
        f, support = random_factored_poly(F, rng, 24, places)
        if f.degree < 1:
            continue
        total += 1
        prod = ExactMagnitude(2, 0)
        for x in support:
            prod = prod * ff_local_J(alpha, f, x)
        ok += prod == ff_infty_J(alpha, f)
    rep.add("prod_x J_x = J_inf (exact)", ok == total, f"{ok}/{total}")

    # Q(i): NFArch(alpha) is the lattice kernel with exponent 2 alpha on Z^2
    place = QI.arch_places()[0]
    worst = 0.0
    for _ in range(200):
        a, b = rng.randint(-30, 30), rng.randint(1, 30)
        worst = max(worst, _rel(nf_arch_J(alpha, NFElement(QI, a, b), place), lattice_J(2 * alpha, (a, b))))
    rep.add("Q(i): NFArch = Lattice on the Minkowski image", worst == 0.0, f"max rel err {worst:.1e}")
    return rep


def suite_am_gm(samples: int = 1000, seed: int = 4, alpha: float = 1.0, beta: float = 0.7) -> SuiteReport:
    """J_toric >= N^((N+a)/2) J_lattice >= J_lattice, and the probability order."""
    rep = SuiteReport("am-gm")
    rng = random.Random(seed)
    ok = prob_ok = mono_ok = 0
    for _ in range(samples):
        N = rng.choice((2, 3, 4))
        d = [rng.choice([-1, 1]) * rng.randint(1, 40) for _ in range(N)]
        jt, jl = toric_J(alpha, d), lattice_J(alpha, d)
        mid = N ** ((N + alpha) / 2) * jl
        ok += jt >= mid * (1 - 1e-12) and mid >= jl
        prob_ok += inclusion_prob(beta, jt).prob >= inclusion_prob(beta, jl).prob
        lam = ProbabilityVector.uniform(N)
        ts = sorted(rng.uniform(-4, 4) for _ in range(2))
        p_lo = inclusion_prob(beta, powermean_J(alpha, ts[0], lam, d)).prob
        p_hi = inclusion_prob(beta, powermean_J(alpha, ts[1], lam, d)).prob
        mono_ok += p_lo >= p_hi * (1 - 1e-12)
    rep.add("J_toric >= N^((N+a)/2) J_lat >= J_lat", ok == samples, f"{ok}/{samples}")
    rep.add("P_toric >= P_lattice", prob_ok == samples, f"{prob_ok}/{samples}")
    rep.add("t <= t' => P_t >= P_t'", mono_ok == samples, f"{mono_ok}/{samples}")
    return rep


# --- hierarchical lattice ----------------------------------------------------


def suite_iso(max_degree: int = 10, q: int = 2) -> SuiteReport:
    """F_q[t] -> H^1_q: exhaustive over all pairs with deg < max_degree."""
    rep = SuiteReport("iso")
    F = prime_field(q)
    polys = [Poly.from_int(F, c) for c in range(q**max_degree)]
    pts = [poly_iso(f) for f in polys]
    rep.add(
        "poly_iso round trip",
        all(poly_iso_inverse(x, F) == f for x, f in zip(pts, polys)),
        f"{len(polys)} polynomials",
    )
    dist_ok = add_ok = total = 0
    for i, f in enumerate(polys):
        x = pts[i]
        for j in range(i + 1, len(polys)):
            g, y = polys[j], pts[j]
            d = f - g
            total += 1
            # d_H(x, y) = L^h and |f - g|_inf = q^deg(f - g)
            dist_ok += h_index(x, y) == d.degree
            if j - i < 8:
                add_ok += (x + y) == poly_iso(f + g) and (x - y) == poly_iso(d)
    rep.add("ultrametric = |f - g|_inf", dist_ok == total, f"{dist_ok}/{total} pairs exact")
    rep.add("group operations intertwined", add_ok == sum(min(7, len(polys) - 1 - i) for i in range(len(polys))))
    # J_hier = J_inf exactly
    ok = all(
        hier_J(1.0, HierParams(q, 1), int(f.degree)) == ff_infty_J(1.0, f) for f in polys[1:]
    )
    rep.add("J_hier(a) = J_inf(a)", ok)
    return rep


def suite_dimension(samples: int = 2000, seed: int = 5) -> SuiteReport:
    """H^N_L and H^1_{L^N}: same h-index, and J at alpha equals J at alpha/N."""
    rep = SuiteReport("dimension")
    rng = random.Random(seed)
    ok = jok = 0
    for _ in range(samples):
        L, N = rng.choice([(2, 2), (2, 3), (3, 2), (5, 1)])
        P = HierParams(L, N)
        x, y = random_point(P, 6, rng), random_point(P, 6, rng)
        if x == y:
            ok += 1
            jok += 1
            continue
        h = h_index(x, y)
        ok += h_index(reduce_dimension(x), reduce_dimension(y)) == h
        a = Fraction(rng.randint(1, 8), rng.randint(1, 4))
        jok += hier_J(a, P, h) == hier_J(a / N, HierParams(L**N, 1), h)
    rep.add("h-index preserved by H^N_L -> H^1_(L^N)", ok == samples, f"{ok}/{samples}")
    rep.add("J_(a,L,N) = J_(a/N, L^N, 1) exact", jok == samples, f"{jok}/{samples}")
    try:
        reduce_dimension(HierPoint(HierParams(2**33, 2), ((1, 1),)))
        rep.add("L^N > 2^64 rejected", False)
    except OverflowError:
        rep.add("L^N > 2^64 rejected", True)
    return rep


def suite_ultrametric(samples: int = 10_000, seed: int = 6) -> SuiteReport:
    rep = SuiteReport("ultrametric")
    rng = random.Random(seed)
    P = HierParams(3, 2)
    tri = inv = 0
    for _ in range(samples):
        x, y, z, a = (random_point(P, 5, rng) for _ in range(4))
        dxz, dxy, dyz = (float(ultrametric(u, v)) for u, v in ((x, z), (x, y), (y, z)))
        tri += dxz <= max(dxy, dyz)
        inv += ultrametric(x + a, y + a) == ultrametric(x, y)
    rep.add("strong triangle inequality", tri == samples, f"{tri}/{samples}")
    rep.add("translation invariance", inv == samples, f"{inv}/{samples}")
    return rep


# --- p-adic digits -------------------------------------------------------------


def suite_dperp(p: int = 3, digits: int = 8, samples: int = 500, seed: int = 7) -> SuiteReport:
    rep = SuiteReport("dperp")
    n = p**digits
    vals = np.arange(n, dtype=np.int64)
    bad = 0
    pairs = 0
    for x in range(n - 1):
        ys = vals[x + 1 :]
        got = dperp_array(np.full(len(ys), x), ys, p, digits + 1)
        # reference valuation of y - x by repeated division
        d = ys - x
        ref = np.zeros(len(d), dtype=np.int64)
        live = np.ones(len(d), dtype=bool)
        while live.any():
            live &= d % p == 0
            ref[live] += 1
            d = np.where(live, d // p, d)
        bad += int((got != ref).sum())
        pairs += len(ys)
    rep.add(f"dperp = v_{p}(x - y), all pairs below {p}^{digits}", bad == 0, f"{pairs - bad}/{pairs} exact")
    rng = random.Random(seed)
    for q in (2, 5):
        ok = 0
        for _ in range(samples):
            x, y = rng.getrandbits(64), rng.getrandbits(64)
            while y == x:
                y = rng.getrandbits(64)
            ok += dperp(x, y, q) == vp_int(x - y, q)
        rep.add(f"dperp = v_{q} on random 64-bit pairs", ok == samples, f"{ok}/{samples}")
    ok = 0
    for _ in range(samples):
        m = rng.randint(-(10**12), 10**12)
        e = padic_expansion(m, 3)
        ok += e.residue(40) == m % 3**40
    rep.add("p-adic expansion round trip mod 3^40", ok == samples, f"{ok}/{samples}")
    return rep


# --- zeta functions ------------------------------------------------------------


def suite_zeta() -> SuiteReport:
    rep = SuiteReport("zeta")
    F = prime_field(2)
    z16 = zeta_curve(F, 2.0, trunc_degree=16, mode="product")
    rep.add("Z(P1/F2, 2) truncated at D=16", abs(z16 - 8 / 3) < 1e-3, f"|diff| = {abs(z16 - 8 / 3):.2e}")
    prev_gap = None
    ok = True
    for D in range(1, 17):
        gap = 8 / 3 - zeta_curve(F, 2.0, trunc_degree=D, mode="product")
        ok &= gap > 0 and (prev_gap is None or gap <= prev_gap / 2 + 1e-15)
        prev_gap = gap
    rep.add("truncations increase, gap at least halves per degree", ok)
    zq = dedekind_zeta(QQ, 2.0, pmax=10**5)
    rep.add("zeta_Q(2), pmax=1e5", abs(zq - math.pi**2 / 6) < 1e-4, f"|diff| = {abs(zq - math.pi ** 2 / 6):.2e}")
    pmax = 10**5
    prod = dedekind_zeta(QI, 2.0, pmax=pmax)
    closed = dedekind_zeta(QI, 2.0, mode="closed")
    bound = euler_tail_bound(QI, 2.0, pmax)
    rep.add(
        "zeta_Q(i)(2) = zeta(2) L(2, chi_-4)",
        abs(prod / closed - 1) <= bound,
        f"rel diff {abs(prod / closed - 1):.2e} <= bound {bound:.2e}",
    )
    # split-prime data is consistent: sum e f = n
    ok = all(sum(x.e * x.f for x in split_prime(K, p)) == K.degree for K in (QQ, QI, QSQRT2) for p in primes_upto(200).tolist())
    rep.add("sum of e f over places above p equals n (p < 200)", ok)
    return rep


# --- integrability dichotomy -----------------------------------------------------


def hier_partial_sums(alpha: float, L: int, N: int, D: int) -> list[Fraction]:
    """S_h = sum_{k <= h} (#level-k points) J(L^k), exactly, for h = 0..D."""
    P = HierParams(L, N)
    out, s = [], Fraction(0)
    for h in range(D + 1):
        s += level_count(P, h) * hier_J(alpha, P, h).as_fraction()
        out.append(s)
    return out


def hier_tail_bound(alpha: float, L: int, N: int, D: int) -> float:
    """Sum over levels h > D, in closed form (geometric series)."""
    r = L ** (-alpha)
    B = L**N
    return (B - 1) * r ** (D + 1) / (1 - r)


def ff_local_partial_sums(q: int = 2, alpha: float = 1.0, Ds=range(4, 14)) -> dict[int, Fraction]:
    """S(D) = sum of J_x(f) over nonzero f with deg f < D, x = (t), by enumeration."""
    F = prime_field(q)
    x = PlaceFF.finite(Poly.t(F))
    out = {}
    for D in Ds:
        s = Fraction(0)
        for c in range(1, q**D):
            s += ff_local_J(alpha, Poly.from_int(F, c), x).as_fraction()
        out[D] = s
    return out


def suite_integrability() -> SuiteReport:
    rep = SuiteReport("integrability")
    sums = hier_partial_sums(1.0, 2, 1, 40)
    tail = hier_tail_bound(1.0, 2, 1, 40)
    rep.add("hierarchical tail bound at D=40 < 1e-6", tail < 1e-6, f"tail = {tail:.3e}")
    rep.add("hierarchical partial sums monotone", all(b >= a for a, b in zip(sums, sums[1:])))
    rep.add(
        "hierarchical partial sums Cauchy",
        all(float(sums[-1] - sums[h]) <= hier_tail_bound(1.0, 2, 1, h) for h in range(40)),
    )
    q = 2
    S = ff_local_partial_sums(q)
    ratios = {D: S[D + 1] / S[D] for D in range(4, 13)}
    rep.add(
        "FF local S(D+1)/S(D) >= q/2 for D=4..12",
        all(r >= Fraction(q, 2) for r in ratios.values()),
        "min ratio " + f"{float(min(ratios.values())):.3f}",
    )
    return rep


# --- sandwich checks ---------------------------------------------------------------


def ff_sandwich_places(field, max_degree: int = 4) -> list[PlaceFF]:
    return enumerate_irreducibles(field, max_degree)


def _random_supported_diff(rng: random.Random, S, min_exp: Callable, make_one, gen, unit):
    """A difference whose support is a uniformly random nonempty subset of S,
    each valuation at least min_exp(place) plus a geometric(1/2) excess."""
    while True:
        chosen = [x for x in S if rng.random() < 0.5]
        if chosen:
            break
    d = make_one()
    for x in chosen:
        k = min_exp(x)
        while rng.random() < 0.5:
            k += 1
        for _ in range(k):
            d = d * gen(x)
    return unit(d), chosen


@dataclass
class SandwichResult:
    samples: int
    lower_ok: int
    upper_ok: int
    both_ok: int
    worst_lower: float
    worst_upper: float
    failures: list

    @property
    def rate(self) -> float:
        return self.both_ok / self.samples


def ff_sandwich(
    q: int = 2, beta: float = 2.0, alpha: float = 1.0, max_deg: int = 4, samples: int = 200, slack: float = 0.05, seed: int = 11
) -> SandwichResult:
    """Hierarchical probability at beta_A,S <= adelic (constant alpha) and
    adelic (alpha_x = alpha + log_q deg x) <= hierarchical at beta'_A,S."""
    F = prime_field(q)
    S = ff_sandwich_places(F, max_deg)
    bA = beta_threshold(beta, S, "FF_A", F)
    bP = beta_threshold(beta, S, "FF_Aprime", F)
    rng = random.Random(seed)
    lo_ok = up_ok = both = 0
    wl = wu = math.inf
    fails = []
    for _ in range(samples):
        d, chosen = _random_supported_diff(
            rng,
            S,
            lambda x: -(-max_deg // x.degree),
            lambda: Poly.const(F, 1),
            lambda x: x.pi,
            lambda d: d.scale(rng.randrange(1, q)),
        )
        f = Poly.from_int(F, rng.randrange(q ** (int(d.degree) + 2)))
        g = f - d
        dd = f - g
        J = ff_infty_J(alpha, dd)
        low = inclusion_prob(bA, J, BASEQ, q).prob
        high = inclusion_prob(bP, J, BASEQ, q).prob
        a_const = adelic_prob_ff_diff(beta, Schedule("Constant", alpha), dd, S=None).prob
        a_shift = adelic_prob_ff_diff(beta, Schedule("DegLogShifted", alpha), dd, S=None).prob
        lo = a_const >= (1 - slack) * low
        up = a_shift <= (1 + slack) * high
        wl, wu = min(wl, a_const / low), min(wu, high / a_shift)
        lo_ok += lo
        up_ok += up
        both += lo and up
        if not (lo and up):
            fails.append([str(x) for x in chosen])
    return SandwichResult(samples, lo_ok, up_ok, both, wl, wu, fails)


def nf_sandwich_places(K, max_norm: int = 16):
    return [x for p in primes_upto(max_norm).tolist() for x in split_prime(K, p) if x.norm <= max_norm]


def nf_sandwich(
    K=QI, beta: float = 2.0, alpha: float = 1.0, max_norm: int = 16, samples: int = 200, slack: float = 0.05, seed: int = 12
) -> SandwichResult:
    """Toric probability at (beta_A,S)^n <= finite-adelic probability at alpha/n
    (constant) and finite-adelic (alpha_nu = alpha/n + log_p f) <= toric at
    (beta'_A,S)^n."""
    n = K.degree
    S = nf_sandwich_places(K, max_norm)
    bA = beta_threshold(beta, S, "NF_A", K)
    bP = beta_threshold(beta, S, "NF_Aprime", K)
    rng = random.Random(seed)
    units = [NFElement(K, 1, 0), NFElement(K, -1, 0)]
    if K.kind == "Qi":
        units += [NFElement(K, 0, 1), NFElement(K, 0, -1)]
    lo_ok = up_ok = both = 0
    wl = wu = math.inf
    fails = []
    for _ in range(samples):
        d, chosen = _random_supported_diff(
            rng,
            S,
            lambda x: max(1, math.ceil(math.log(16) / math.log(x.norm) - 1e-12)),
            lambda: NFElement(K, 1, 0),
            lambda x: x.generator,
            lambda d: d * rng.choice(units),
        )
        x = NFElement(K, rng.randint(-50, 50), rng.randint(-50, 50) if K.kind != "Q" else 0)
        y = x - d
        dd = x - y
        re, cx = _real_complex(dd)
        JT = toric_J(alpha, re, cx)
        low = inclusion_prob(bA**n, JT).prob
        high = inclusion_prob(bP**n, JT).prob
        a_const = adelic_prob_nf_diff(beta, Schedule("Constant", alpha / n), dd).prob
        a_shift = adelic_prob_nf_diff(beta, Schedule("InertiaLogShifted", alpha / n), dd).prob
        lo = a_const >= (1 - slack) * low
        up = a_shift <= (1 + slack) * high
        wl, wu = min(wl, a_const / low), min(wu, high / a_shift)
        lo_ok += lo
        up_ok += up
        both += lo and up
        if not (lo and up):
            fails.append([str(p.generator) for p in chosen])
    return SandwichResult(samples, lo_ok, up_ok, both, wl, wu, fails)


def _sandwich_report(name: str, res: SandwichResult, need: float = 0.95) -> SuiteReport:
    rep = SuiteReport(name)
    rep.add(
        f"both inequalities (5% slack) in >= {need:.0%} of cases",
        res.rate >= need,
        f"{res.both_ok}/{res.samples}; lower {res.lower_ok}, upper {res.upper_ok}; "
        f"worst ratios {res.worst_lower:.4f}, {res.worst_upper:.4f}",
    )
    return rep


def suite_sandwich_ff() -> SuiteReport:
    return _sandwich_report("sandwich-ff", ff_sandwich())


def suite_sandwich_nf() -> SuiteReport:
    return _sandwich_report("sandwich-nf", nf_sandwich())


def suite_valuations(samples: int = 500, seed: int = 8) -> SuiteReport:
    """Additivity of valuations under multiplication, both global field families."""
    rep = SuiteReport("valuations")
    rng = random.Random(seed)
    F = prime_field(3)
    places = enumerate_irreducibles(F, 3)
    ok = 0
    for _ in range(samples):
        f = Poly.from_int(F, rng.randrange(1, 3**10))
        g = Poly.from_int(F, rng.randrange(1, 3**10))
        ok += all(nu_at_place(f * g, x) == nu_at_place(f, x) + nu_at_place(g, x) for x in places)
    rep.add("F_3[t]: nu(fg) = nu(f) + nu(g)", ok == samples, f"{ok}/{samples}")
    for K in (QQ, QI, QSQRT2):
        ps = [x for p in (2, 3, 5, 7, 13, 17) for x in split_prime(K, p)]
        ok = 0
        for _ in range(samples):
            a = NFElement(K, rng.randint(1, 60), rng.randint(-60, 60) if K.kind != "Q" else 0)
            b = NFElement(K, rng.randint(1, 60), rng.randint(-60, 60) if K.kind != "Q" else 0)
            ok += all(v_nu(a * b, x) == v_nu(a, x) + v_nu(b, x) for x in ps)
        rep.add(f"{K.kind}: v(xy) = v(x) + v(y)", ok == samples, f"{ok}/{samples}")
    return rep


SUITES: dict[str, Callable[[], SuiteReport]] = {
    "product-formula-ff": suite_product_formula_ff,
    "product-formula-nf": suite_product_formula_nf,
    "monotonicity": suite_monotonicity,
    "am-gm": suite_am_gm,
    "kernel-identities": suite_kernel_identities,
    "iso": suite_iso,
    "dimension": suite_dimension,
    "ultrametric": suite_ultrametric,
    "dperp": suite_dperp,
    "zeta": suite_zeta,
    "integrability": suite_integrability,
    "valuations": suite_valuations,
    "sandwich-ff": suite_sandwich_ff,
    "sandwich-nf": suite_sandwich_nf,
}


def run_suite(name: str) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return SUITES[name]()
