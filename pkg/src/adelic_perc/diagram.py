"""Integration checks, one per arrow of the model diagram:

1. F_q[t] with |.|_inf  <->  hierarchical lattice H^1_q
2. finite-adelic FF model  <->  hierarchical model (sandwich)
3. FF local kernels  <->  NF local kernels at matching (p, f)
4. finite-adelic NF model  <->  toric model (sandwich)
5. Archimedean adelic model  <->  toric model at large separations
6. power-mean kernels  <->  toric (t = 0) and lattice (t = 2) kernels
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .arith_ff import PlaceFF, Poly, abs_at_place, enumerate_irreducibles, prime_field
from .arith_nf import QI, QQ, QSQRT2, NFElement, arch_coordinates, split_prime
from .hierlattice import poly_iso, ultrametric
from .kernels import (
    BASEQ,
    ProbabilityVector,
    _real_complex,
    arch_adelic_prob_diff,
    ff_local_J,
    inclusion_prob,
    lattice_J,
    nf_local_J,
    powermean_J,
    toric_J,
)
from .magnitude import ExactMagnitude
from .verify import ff_sandwich, nf_sandwich


@dataclass
class ArrowResult:
    index: int
    name: str
    passed: bool
    tolerance: str
    detail: str

    def line(self) -> str:
        return f"arrow {self.index}  {'PASS' if self.passed else 'FAIL'}  {self.name}  [{self.tolerance}]  {self.detail}"


def arrow_iso() -> ArrowResult:
    ok = total = 0
    for q, D in ((2, 8), (3, 5)):
        F = prime_field(q)
        inf = PlaceFF.infinity()
        polys = [Poly.from_int(F, c) for c in range(q**D)]
        pts = [poly_iso(f) for f in polys]
        for i in range(len(polys)):
            for j in range(i + 1, len(polys)):
                d = polys[i] - polys[j]
                total += 1
                # |d|_inf = q^deg d, exact on both sides
                ok += ultrametric(pts[i], pts[j]) == abs_at_place(d, inf) == ExactMagnitude(q, int(d.degree))
    return ArrowResult(1, "ultrametric of H^1_q = |f - g|_inf", ok == total, "exact", f"{ok}/{total} pairs (q=2 deg<8, q=3 deg<5)")


def arrow_ff_sandwich() -> ArrowResult:
    r = ff_sandwich(q=2, beta=2.0, alpha=1.0, max_deg=4)
    return ArrowResult(
        2, "FF sandwich, q=2, beta=2, S = places of deg <= 4", r.rate >= 0.95,
        "5% slack, >= 95% of cases", f"{r.both_ok}/{r.samples} (lower {r.lower_ok}, upper {r.upper_ok})",
    )


def arrow_local_match(alpha: float = 1.0, beta: float = 0.8) -> ArrowResult:
    """At a place above p with residue degree f and an F_p[t] place of degree f,
    elements of equal valuation have identical kernels and probabilities."""
    ok = total = 0
    for K in (QQ, QI, QSQRT2):
        for p in (2, 3, 5, 7, 11, 13):
            F = prime_field(p)
            for place in split_prime(K, p):
                x = next(y for y in enumerate_irreducibles(F, place.f) if y.degree == place.f)
                for v in range(6):
                    d_ff = x.pi**v
                    d_nf = _nf_power(place.generator, v)
                    j_ff = ff_local_J(alpha, d_ff, x)
                    j_nf = nf_local_J(alpha, d_nf, place)
                    p_ff = inclusion_prob(beta * place.f, j_ff, BASEQ, p).prob
                    p_nf = inclusion_prob(beta * place.f, j_nf, BASEQ, p).prob
                    total += 1
                    ok += j_ff == j_nf and p_ff == p_nf
    return ArrowResult(3, "FF local = NF local at matched (p, f, v)", ok == total, "exact", f"{ok}/{total} cases")


def _nf_power(g: NFElement, v: int) -> NFElement:
    out = NFElement(g.field, 1, 0)
    for _ in range(v):
        out = out * g
    return out


def arrow_nf_sandwich() -> ArrowResult:
    r = nf_sandwich(K=QI, beta=2.0, alpha=1.0)
    return ArrowResult(
        4, "NF sandwich, Q(i), beta=2, S = places of norm <= 16", r.rate >= 0.95,
        "5% slack, >= 95% of cases", f"{r.both_ok}/{r.samples} (lower {r.lower_ok}, upper {r.upper_ok})",
    )


def arrow_arch_toric(alpha: float = 1.0, beta: float = 1.0, radius: int = 60, min_sep: float = 20.0) -> ArrowResult:
    worst = 0.0
    count = 0
    for K in (QI, QSQRT2):
        for a in range(-radius, radius + 1):
            for b in range(-radius, radius + 1):
                d = NFElement(K, a, b)
                if d.is_zero() or min(abs(c) for c in arch_coordinates(d)) < min_sep:
                    continue
                r = arch_adelic_prob_diff(beta, alpha, d)
                worst = max(worst, abs(r.prob / r.companion - 1))
                count += 1
    return ArrowResult(
        5, "arch-adelic ~ toric, all |sigma(x - y)| >= 20", worst <= 0.10, "10% relative", f"max rel dev {worst:.2e} over {count} differences"
    )


def arrow_power_mean(alpha: float = 1.0, samples: int = 500, seed: int = 21) -> ArrowResult:
    rng = random.Random(seed)
    worst = 0.0
    for k in range(samples):
        if k % 3 == 0:
            x = [rng.choice([-1, 1]) * rng.randint(1, 60) for _ in range(rng.choice((2, 3, 4)))]
            z: list = []
        else:
            K = QI if k % 3 == 1 else QSQRT2
            x, z = _real_complex(NFElement(K, rng.choice([-1, 1]) * rng.randint(1, 60), rng.choice([-1, 1]) * rng.randint(1, 60)))
        N = len(x) + 2 * len(z)
        lam = ProbabilityVector.uniform(N)
        t0 = powermean_J(alpha, 0, lam, x, z)
        worst = max(worst, abs(t0 / toric_J(alpha, x, z) - 1))
        if not z:
            # the t = 2 identity is stated for real coordinates
            t2 = powermean_J(alpha, 2, lam, x)
            worst = max(worst, abs(t2 / (N ** ((N + alpha) / 2) * lattice_J(alpha, x)) - 1))
    return ArrowResult(6, "power mean t=0 -> toric, t=2 -> lattice", worst <= 1e-12, "1e-12 relative", f"max rel err {worst:.1e}")


ARROWS = (arrow_iso, arrow_ff_sandwich, arrow_local_match, arrow_nf_sandwich, arrow_arch_toric, arrow_power_mean)


def run_diagram() -> list[ArrowResult]:
    return [arrow() for arrow in ARROWS]
