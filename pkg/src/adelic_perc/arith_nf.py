"""Arithmetic in Q, Q(i) and Q(sqrt 2): embeddings, primes, valuations,
p-adic expansions and Dedekind zeta functions.

All three rings of integers are principal, so every non-Archimedean
valuation is computed by exact division by a generator of the prime.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .arith_ff import ZetaPoleError, is_prime
from .magnitude import ExactMagnitude

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class NumberField:
    """One of the three supported fields, keyed by ``kind``: "Q", "Qi" or "Qsqrt2"."""

    kind: str

    def __post_init__(self):
        if self.kind not in _FIELD_DATA:
            raise ValueError(f"unsupported field {self.kind!r}; choose from {sorted(_FIELD_DATA)}")

    @property
    def degree(self) -> int:
        return _FIELD_DATA[self.kind][0]

    @property
    def signature(self) -> tuple[int, int]:
        return _FIELD_DATA[self.kind][1]

    @property
    def discriminant(self) -> int:
        return _FIELD_DATA[self.kind][2]

    @property
    def d(self) -> int:
        """The square of the generator: x = a + b*w with w*w = d."""
        return _FIELD_DATA[self.kind][3]

    def element(self, a: int, b: int = 0) -> "NFElement":
        return NFElement(self, a, b)

    def arch_places(self) -> list["PlaceNF"]:
        r, s = self.signature
        return [PlaceNF.arch(i, 1) for i in range(r)] + [PlaceNF.arch(r + j, 2) for j in range(s)]

    def __str__(self):
        return {"Q": "Q", "Qi": "Q(i)", "Qsqrt2": "Q(sqrt2)"}[self.kind]


# kind -> (degree, (r, s), discriminant, w^2)
_FIELD_DATA = {
    "Q": (1, (1, 0), 1, 0),
    "Qi": (2, (0, 1), -4, -1),
    "Qsqrt2": (2, (2, 0), 8, 2),
}

QQ = NumberField("Q")
QI = NumberField("Qi")
QSQRT2 = NumberField("Qsqrt2")


@dataclass(frozen=True)
class NFElement:
    """An algebraic integer a + b*w (w = i or sqrt 2; b = 0 over Q)."""

    field: NumberField
    a: int
    b: int = 0

    def __post_init__(self):
        if self.field.kind == "Q" and self.b != 0:
            raise ValueError("rational integers have b = 0")
        object.__setattr__(self, "a", int(self.a))
        object.__setattr__(self, "b", int(self.b))

    def _check(self, other: "NFElement"):
        if other.field != self.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def __add__(self, other: "NFElement") -> "NFElement":
        self._check(other)
        return NFElement(self.field, self.a + other.a, self.b + other.b)

    def __sub__(self, other: "NFElement") -> "NFElement":
        self._check(other)
        return NFElement(self.field, self.a - other.a, self.b - other.b)

    def __neg__(self) -> "NFElement":
        return NFElement(self.field, -self.a, -self.b)

    def __mul__(self, other: "NFElement") -> "NFElement":
        self._check(other)
        d = self.field.d
        return NFElement(
            self.field,
            self.a * other.a + d * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def conj(self) -> "NFElement":
        return NFElement(self.field, self.a, -self.b)

    def norm(self) -> int:
        """Field norm N(x); equals x itself over Q."""
        if self.field.kind == "Q":
            return self.a
        return self.a * self.a - self.field.d * self.b * self.b

    def div_exact(self, g: "NFElement") -> "NFElement | None":
        """x / g if g divides x in O_K, else None."""
        self._check(g)
        if g.is_zero():
            raise ZeroDivisionError("division by zero element")
        if self.field.kind == "Q":
            q, r = divmod(self.a, g.a)
            return None if r else NFElement(self.field, q)
        num = self * g.conj()
        n = g.norm()
        if num.a % n or num.b % n:
            return None
        return NFElement(self.field, num.a // n, num.b // n)

    def to_json(self) -> dict:
        return {"field": self.field.kind, "a": self.a, "b": self.b}

    @classmethod
    def from_json(cls, d: dict) -> "NFElement":
        return cls(NumberField(d["field"]), int(d["a"]), int(d.get("b", 0)))

    def __str__(self):
        if self.field.kind == "Q":
            return str(self.a)
        w = "i" if self.field.kind == "Qi" else "sqrt2"
        return f"{self.a}{self.b:+d}{w}"


def minkowski_embed(x: NFElement) -> tuple[float, ...]:
    kind = x.field.kind
    if kind == "Q":
        return (float(x.a),)
    if kind == "Qi":
        return (float(x.a), float(x.b))
    return (x.a + x.b * SQRT2, x.a - x.b * SQRT2)


def arch_coordinates(x: NFElement) -> list[complex | float]:
    """One coordinate per Archimedean place (complex for complex places)."""
    kind = x.field.kind
    if kind == "Qi":
        return [complex(x.a, x.b)]
    return list(minkowski_embed(x))


def is_transverse(x: NFElement) -> bool:
    """No Minkowski coordinate of x vanishes (decided exactly)."""
    if x.field.kind == "Q":
        return x.a != 0
    # a +- b sqrt2 = 0 forces a = b = 0 since sqrt2 is irrational
    return not x.is_zero()


# --- places ----------------------------------------------------------------


@dataclass(frozen=True)
class PlaceNF:
    """Archimedean place (index, n_sigma) or prime ideal (p, e, f, generator).

    ``hensel_root`` is, for split primes of Q(sqrt 2), the residue c mod p with
    c^2 = 2 and generator = 0 under sqrt 2 -> c.
    """

    kind: str
    index: int = 0
    n_sigma: int = 1
    p: int = 0
    e: int = 1
    f: int = 1
    generator: NFElement | None = None
    hensel_root: int | None = None

    @classmethod
    def arch(cls, index: int, n_sigma: int) -> "PlaceNF":
        if n_sigma not in (1, 2):
            raise ValueError("n_sigma is 1 (real) or 2 (complex)")
        return cls("arch", index=index, n_sigma=n_sigma)

    @property
    def is_arch(self) -> bool:
        return self.kind == "arch"

    @property
    def norm(self) -> int:
        return self.p**self.f

    def to_json(self) -> dict:
        if self.is_arch:
            return {"kind": "arch", "index": self.index, "n_sigma": self.n_sigma}
        return {
            "kind": "nonarch",
            "p": self.p,
            "e": self.e,
            "f": self.f,
            "generator": self.generator.to_json(),
        }

    @classmethod
    def from_json(cls, d: dict) -> "PlaceNF":
        if d["kind"] == "arch":
            return cls.arch(int(d["index"]), int(d["n_sigma"]))
        gen = NFElement.from_json(d["generator"])
        for place in split_prime(gen.field, int(d["p"])):
            if place.generator == gen:
                return place
        raise ValueError(f"{gen} does not generate a prime above {d['p']}")

    def __str__(self):
        if self.is_arch:
            return f"sigma{self.index}"
        return f"({self.generator})"


def _isqrt_exact(n: int) -> int | None:
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


@lru_cache(maxsize=4096)
def split_prime(field: NumberField, p: int) -> tuple[PlaceNF, ...]:
    """Places above the rational prime p with their (e, f) and generators."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    K = field
    nonarch = lambda **kw: PlaceNF("nonarch", p=p, **kw)
    if K.kind == "Q":
        return (nonarch(e=1, f=1, generator=K.element(p)),)
    if K.kind == "Qi":
        if p == 2:
            return (nonarch(e=2, f=1, generator=K.element(1, 1)),)
        if p % 4 == 3:
            return (nonarch(e=1, f=2, generator=K.element(p)),)
        # a > b > 0 with a^2 + b^2 = p; the two conjugates a +- bi
        for b in range(1, math.isqrt(p) + 1):
            a = _isqrt_exact(p - b * b)
            if a is not None and a > b:
                return (
                    nonarch(e=1, f=1, generator=K.element(a, b)),
                    nonarch(e=1, f=1, generator=K.element(a, -b)),
                )
        raise AssertionError(f"no sum of two squares found for {p}")
    # Q(sqrt2)
    if p == 2:
        return (nonarch(e=2, f=1, generator=K.element(0, 1)),)
    if p % 8 in (3, 5):
        return (nonarch(e=1, f=2, generator=K.element(p)),)
    b = 1
    while True:
        for a in (_isqrt_exact(p + 2 * b * b), _isqrt_exact(2 * b * b - p)):
            if a:
                places = []
                for gen in (K.element(a, b), K.element(a, -b)):
                    # a + b c = 0 mod p
                    c = (-gen.a * pow(gen.b, -1, p)) % p
                    places.append(nonarch(e=1, f=1, generator=gen, hensel_root=c))
                return tuple(places)
        b += 1


def hensel_sqrt2(c: int, p: int, k: int) -> int:
    """Lift a root of c^2 = 2 mod p to a root mod p^k (Newton iteration)."""
    mod = p
    while mod < p**k:
        mod = min(mod * mod, p**k)
        c = (c - (c * c - 2) * pow(2 * c, -1, mod)) % mod
    return c % p**k


def vp_int(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("v_p(0) is undefined")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def v_nu(x: NFElement, place: PlaceNF) -> int:
    """Valuation of x at a non-Archimedean place, by repeated exact division."""
    if place.is_arch:
        raise ValueError("valuation needs a non-Archimedean place")
    if x.is_zero():
        raise ValueError("valuation of 0 is undefined")
    if x.field.kind == "Q":
        return vp_int(x.a, place.p)
    k = 0
    while True:
        q = x.div_exact(place.generator)
        if q is None:
            return k
        x, k = q, k + 1


def v_nu_hensel(x: NFElement, place: PlaceNF) -> int:
    """Same valuation through the p-adic embedding sqrt2 -> c (split Q(sqrt2) primes)."""
    if place.hensel_root is None:
        raise ValueError("place carries no Hensel data")
    if x.is_zero():
        raise ValueError("valuation of 0 is undefined")
    # v_nu(x) <= v_p(N x), so precision k = v_p(N x) + 1 exposes the answer
    k = vp_int(x.norm(), place.p) + 1
    c = hensel_sqrt2(place.hensel_root, place.p, k)
    r = (x.a + x.b * c) % place.p**k
    return k if r == 0 else vp_int(r, place.p)


def abs_nu(x: NFElement, place: PlaceNF) -> ExactMagnitude | float:
    if x.is_zero():
        raise ValueError("absolute value of 0 is excluded")
    if place.is_arch:
        return abs(arch_coordinates(x)[place.index])
    return ExactMagnitude(place.p, -place.f * v_nu(x, place))


def arch_sq_abs(x: NFElement, place: PlaceNF) -> float:
    """|sigma(x)|^2 computed from integers where possible (exact for Q, Q(i))."""
    if x.field.kind == "Qi":
        return float(x.a * x.a + x.b * x.b)
    v = minkowski_embed(x)[place.index]
    return v * v


def factor_int(n: int, pmax: int | None = None) -> tuple[Counter, int]:
    """Trial-division factorisation of |n| by primes <= pmax; returns (exponents, cofactor)."""
    n = abs(n)
    out: Counter = Counter()
    d = 2
    limit = pmax if pmax is not None else n
    while d * d <= n and d <= limit:
        while n % d == 0:
            out[d] += 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        if n <= limit:
            out[n] += 1
            n = 1
    return out, n


@dataclass(frozen=True)
class ProductFormulaReport:
    nonarch: dict
    norm: dict

    @property
    def difference(self) -> dict:
        keys = set(self.nonarch) | set(self.norm)
        diff = {p: self.nonarch.get(p, 0) - self.norm.get(p, 0) for p in sorted(keys)}
        return {p: v for p, v in diff.items() if v}

    @property
    def holds(self) -> bool:
        return not self.difference


def product_formula_nf(x: NFElement, pmax: int | None = None) -> ProductFormulaReport:
    """Compare sum_nu f v_nu(x) [p] against the factorisation of |N(x)|.

    Only primes dividing N(x) can carry a nonzero valuation, so those are the
    ones visited; each of their places is valued by generator division.  An
    empty ``difference`` is the product formula in exponent form.
    """
    if x.is_zero():
        raise ValueError("product formula needs x != 0")
    N = x.norm()
    norm_side, cofactor = factor_int(N, pmax)
    if cofactor != 1:
        raise ValueError(f"pmax={pmax} too small: cofactor {cofactor} of N(x)={N} left over")
    nonarch: Counter = Counter()
    for p in norm_side:
        for place in split_prime(x.field, p):
            v = v_nu(x, place)
            if v:
                nonarch[p] += place.f * v
    return ProductFormulaReport(dict(nonarch), dict(norm_side))


# --- p-adic expansions -----------------------------------------------------


@dataclass(frozen=True)
class PadicExpansion:
    """Digits a_0..a_l followed by an (optionally empty) repeating block."""

    prefix: tuple[int, ...]
    period: tuple[int, ...]
    p: int

    def to_fraction(self) -> Fraction:
        p = self.p
        val = Fraction(sum(a * p**i for i, a in enumerate(self.prefix)))
        if self.period:
            block = sum(b * p**i for i, b in enumerate(self.period))
            val += Fraction(p ** len(self.prefix) * block, 1 - p ** len(self.period))
        return val

    def residue(self, K: int) -> int:
        """The expansion truncated to K digits, as an integer mod p^K."""
        digits = list(self.prefix)
        while self.period and len(digits) < K:
            digits.extend(self.period)
        return sum(a * self.p**i for i, a in enumerate(digits[:K]))

    def __str__(self):
        sep = "" if self.p <= 10 else ","
        head = sep.join(str(a) for a in self.prefix)
        if not self.period:
            return head or "0"
        return head + "(" + sep.join(str(b) for b in self.period) + ")̄"


def padic_expansion(n: int, p: int, max_digits: int = 64) -> PadicExpansion:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n >= 0:
        digits = []
        while n:
            n, r = divmod(n, p)
            digits.append(r)
        if len(digits) > max_digits:
            raise ValueError(f"{len(digits)} digits needed, max_digits={max_digits}")
        return PadicExpansion(tuple(digits), (), p)
    K = max_digits + 1
    if p**K <= -n:
        raise ValueError(f"max_digits={max_digits} too small to expose the period of {n}")
    m = n + p**K
    digits = [(m // p**i) % p for i in range(K)]
    j = K
    while j > 0 and digits[j - 1] == p - 1:
        j -= 1
    return PadicExpansion(tuple(digits[:j]), (p - 1,), p)


def dperp(x: int, y: int, p: int, depth: int = 256) -> int:
    """Index of the first p-adic digit where x and y differ."""
    if x == y:
        raise ValueError("dperp needs x != y")
    for k in range(depth):
        if x % p != y % p:
            return k
        x //= p
        y //= p
    raise ValueError(f"x and y agree on the first {depth} digits; increase depth")


def dperp_array(x: np.ndarray, y: np.ndarray, p: int, depth: int) -> np.ndarray:
    """Vectorised dperp for int64 arrays (entries must differ pairwise)."""
    x = np.asarray(x, dtype=np.int64).copy()
    y = np.asarray(y, dtype=np.int64).copy()
    out = np.full(x.shape, -1, dtype=np.int64)
    for k in range(depth):
        undecided = out < 0
        diff = undecided & (np.mod(x, p) != np.mod(y, p))
        out[diff] = k
        x //= p
        y //= p
    if (out < 0).any():
        raise ValueError(f"some pairs agree on the first {depth} digits")
    return out


# --- zeta functions --------------------------------------------------------


@lru_cache(maxsize=32)
def primes_upto(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def _place_norms(field: NumberField, primes: np.ndarray) -> np.ndarray:
    """Norms of all places above the given primes (by splitting type)."""
    if field.kind == "Q":
        return primes.astype(float)
    if field.kind == "Qi":
        split = primes % 4 == 1
        inert = primes % 4 == 3
    else:
        split = (primes % 8 == 1) | (primes % 8 == 7)
        inert = (primes % 8 == 3) | (primes % 8 == 5)
    ramified = ~(split | inert)
    pf = primes.astype(float)
    return np.concatenate([pf[split], pf[split], pf[ramified], pf[inert] ** 2])


def euler_tail_bound(field: NumberField, s: float, pmax: int) -> float:
    """Relative error bound of the Euler product truncated at pmax (s > 1).

    At most n places lie above each p > pmax, each contributing
    -log(1 - N^-s) <= 2 p^-s, so |log ratio| <= 2n pmax^(1-s)/(s-1).
    """
    t = 2 * field.degree * pmax ** (1 - s) / (s - 1)
    return math.expm1(t)


def dedekind_zeta(
    field: NumberField,
    s: float,
    pmax: int = 10**5,
    removed: Iterable[PlaceNF] = (),
    mode: str = "product",
) -> float:
    """Dedekind zeta with the Euler factors at ``removed`` taken out.

    ``mode="product"``: Euler product over all places above primes <= pmax.
    ``mode="closed"``: zeta(s) times the quadratic Dirichlet L-function
    (characters mod 4 and mod 8) evaluated with mpmath; valid for s != 1.
    """
    removed = [x for x in dict.fromkeys(removed) if not x.is_arch]
    if mode == "product":
        if s <= 1:
            raise ValueError("truncated Euler product needs s > 1")
        norms = _place_norms(field, primes_upto(pmax))
        log_z = -np.sum(np.log1p(-(norms ** (-s))))
        for x in removed:
            if x.p <= pmax:
                log_z += math.log1p(-(x.norm ** (-s)))
        return float(math.exp(log_z))
    if mode == "closed":
        if s == 1:
            raise ZetaPoleError("Dedekind zeta has a pole at s=1")
        val = mpmath.zeta(s)
        if field.kind == "Qi":
            val *= mpmath.dirichlet(s, [0, 1, 0, -1])
        elif field.kind == "Qsqrt2":
            val *= mpmath.dirichlet(s, [0, 1, 0, -1, 0, -1, 0, 1])
        value = float(val)
        for x in removed:
            value *= 1.0 - x.norm ** (-s)
        if value == 0.0:
            raise ZetaPoleError(f"zeta vanishes at s={s}")
        return value
    raise ValueError(f"unknown zeta mode {mode!r}")


def zero_free_beta0(field: NumberField) -> float | None:
    """1 - 1/(12.74 ln|disc|), or None when |disc| = 1."""
    D = abs(field.discriminant)
    if D == 1:
        return None
    return 1.0 - 1.0 / (12.74 * math.log(D))


def lattice_is_transverse(
    coords, box_radius: int, rank: int = 2, complex_blocks: Sequence[tuple[int, int]] = ()
) -> bool:
    """True iff no nonzero integer vector with entries in [-R, R] maps under
    ``coords`` to a vector with a vanishing coordinate.  A pair of indices in
    ``complex_blocks`` is treated as one complex coordinate."""
    paired = {i for blk in complex_blocks for i in blk}
    for point in itertools.product(range(-box_radius, box_radius + 1), repeat=rank):
        if not any(point):
            continue
        v = coords(*point)
        if any(v[i] == 0 and v[j] == 0 for i, j in complex_blocks):
            return False
        if any(v[i] == 0 for i in range(len(v)) if i not in paired):
            return False
    return True


def transversality_check(field: NumberField, box_radius: int) -> bool:
    if box_radius < 1:
        raise ValueError("box_radius must be >= 1")
    if field.kind == "Q":
        return lattice_is_transverse(lambda a: (a,), box_radius, rank=1)
    if field.kind == "Qi":
        return lattice_is_transverse(lambda a, b: (a, b), box_radius, complex_blocks=[(0, 1)])

    # exact test: a + b sqrt2 = 0 iff a = b = 0, i.e. iff a^2 = 2 b^2 with matching sign
    def coords(a, b):
        def vanishes(sign):
            return a * a == 2 * b * b and (a == 0 or (a > 0) != (sign * b > 0))

        return (0 if vanishes(1) else 1, 0 if vanishes(-1) else 1)

    return lattice_is_transverse(coords, box_radius)
