"""Finite fields, the polynomial ring F_q[t], places of P^1 and curve zeta functions.

Field elements are plain ints in ``range(q)``.  For a prime field the int is
the residue itself; for ``q = p**r`` it encodes the coefficients (base ``p``,
lowest first) of a polynomial in a root of the defining modulus, and all
arithmetic goes through precomputed tables.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .magnitude import ExactMagnitude

DEFAULT_ENUM_BUDGET = 1 << 20
MAX_TABLE_Q = 256


class ZetaPoleError(ValueError):
    """Zeta function evaluated at a pole (or zero denominator)."""


class MissingPlaceError(ValueError):
    """A place dividing the polynomial was not supplied."""


class BudgetError(ValueError):
    """An enumeration would exceed the configured budget."""


def enumeration_budget() -> int:
    env = os.environ.get("ADELIC_PERC_BUDGET")
    return int(env) if env else DEFAULT_ENUM_BUDGET


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def mobius(n: int) -> int:
    ps = prime_factors(n)
    for p in ps:
        if (n // p) % p == 0:
            return 0
    return -1 if len(ps) % 2 else 1


def necklace_count(q: int, d: int) -> int:
    """Number of monic irreducible polynomials of degree d over F_q."""
    total = sum(mobius(e) * q ** (d // e) for e in range(1, d + 1) if d % e == 0)
    return total // d


# --- prime-field polynomial helpers (coefficient tuples, lowest first) -----


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _fp_divides(a: Sequence[int], b: Sequence[int], p: int) -> bool:
    """Whether monic b divides a over F_p (used only to validate moduli)."""
    rem = list(a)
    db = len(b) - 1
    while len(_trim(rem)) - 1 >= db:
        shift = len(rem) - 1 - db
        c = rem[-1]
        for i, bc in enumerate(b):
            rem[shift + i] = (rem[shift + i] - c * bc) % p
    return not rem


def _fp_irreducible(mod: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    r = len(mod) - 1
    for d in range(1, r // 2 + 1):
        for code in range(p**d):
            cand = [(code // p**i) % p for i in range(d)] + [1]
            if _fp_divides(mod, cand, p):
                return False
    return True


@dataclass(frozen=True)
class FqField:
    """The finite field with ``q = p**r`` elements.

    ``modulus`` holds the coefficients (lowest first, monic) of the irreducible
    polynomial defining the extension and is ``None`` for prime fields.
    """

    p: int
    r: int = 1
    modulus: tuple[int, ...] | None = None
    _mul: tuple | None = field(default=None, compare=False, repr=False)
    _add: tuple | None = field(default=None, compare=False, repr=False)
    _inv: tuple | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")
        if self.r < 1:
            raise ValueError("extension degree must be >= 1")
        if self.r == 1:
            if self.modulus is not None:
                raise ValueError("prime fields take no modulus")
            return
        if self.modulus is None:
            raise ValueError("extension fields need a modulus")
        mod = tuple(int(c) % self.p for c in self.modulus)
        if len(mod) != self.r + 1 or mod[-1] != 1:
            raise ValueError("modulus must be monic of degree r")
        if self.p**self.r > MAX_TABLE_Q:
            raise ValueError(f"extension fields limited to q <= {MAX_TABLE_Q}")
        if not _fp_irreducible(mod, self.p):
            raise ValueError(f"modulus {mod} is reducible over F_{self.p}")
        object.__setattr__(self, "modulus", mod)
        self._build_tables()

    @property
    def q(self) -> int:
        return self.p**self.r

    def _digits(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.r)]

    def _code(self, d: Sequence[int]) -> int:
        return sum(c * self.p**i for i, c in enumerate(d))

    def _build_tables(self):
        p, r, q = self.p, self.r, self.q
        digits = [self._digits(a) for a in range(q)]
        add = tuple(
            tuple(self._code([(x + y) % p for x, y in zip(digits[a], digits[b])]) for b in range(q))
            for a in range(q)
        )
        mul = []
        for a in range(q):
            row = []
            for b in range(q):
                prod = [0] * (2 * r - 1)
                for i, x in enumerate(digits[a]):
                    if x:
                        for j, y in enumerate(digits[b]):
                            prod[i + j] = (prod[i + j] + x * y) % p
                # reduce by the monic modulus
                for k in range(len(prod) - 1, r - 1, -1):
                    c = prod[k]
                    if c:
                        for i in range(r + 1):
                            prod[k - r + i] = (prod[k - r + i] - c * self.modulus[i]) % p
                row.append(self._code(prod[:r]))
            mul.append(tuple(row))
        mul = tuple(mul)
        inv = [0] * q
        for a in range(1, q):
            inv[a] = next(b for b in range(1, q) if mul[a][b] == 1)
        object.__setattr__(self, "_add", add)
        object.__setattr__(self, "_mul", mul)
        object.__setattr__(self, "_inv", tuple(inv))

    @property
    def mul_table(self) -> tuple | None:
        return self._mul

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p if self.r == 1 else self._add[a][b]

    def neg(self, a: int) -> int:
        if self.r == 1:
            return (-a) % self.p
        return self._code([(-d) % self.p for d in self._digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p if self.r == 1 else self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_q")
        return pow(a, -1, self.p) if self.r == 1 else self._inv[a]

    def sub_table(self) -> list[list[int]]:
        """``table[a][b] = a - b``; used for vectorised differences."""
        return [[self.sub(a, b) for b in range(self.q)] for a in range(self.q)]

    def __str__(self):
        return f"F_{self.q}"


@lru_cache(maxsize=None)
def prime_field(p: int) -> FqField:
    return FqField(p)


# --- polynomials ---------------------------------------------------------


@dataclass(frozen=True)
class Poly:
    """Polynomial over F_q, coefficients lowest degree first, normalised."""

    field: FqField
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = list(self.coeffs)
        q = self.field.q
        for a in c:
            if not 0 <= a < q:
                raise ValueError(f"coefficient {a} not an element of {self.field}")
        object.__setattr__(self, "coeffs", tuple(_trim(c)))

    # constructors
    @classmethod
    def zero(cls, field: FqField) -> "Poly":
        return cls(field, ())

    @classmethod
    def const(cls, field: FqField, c: int) -> "Poly":
        return cls(field, (c % field.q,))

    @classmethod
    def t(cls, field: FqField, power: int = 1) -> "Poly":
        return cls(field, (0,) * power + (1,))

    @classmethod
    def from_text(cls, field: FqField, text: str) -> "Poly":
        text = text.strip()
        if not text:
            return cls.zero(field)
        return cls(field, tuple(int(x) for x in text.split(",")))

    @classmethod
    def from_int(cls, field: FqField, code: int) -> "Poly":
        q = field.q
        c = []
        while code:
            code, d = divmod(code, q)
            c.append(d)
        return cls(field, tuple(c))

    def to_int(self) -> int:
        q = self.field.q
        return sum(c * q**i for i, c in enumerate(self.coeffs))

    def to_text(self) -> str:
        return ",".join(str(c) for c in self.coeffs)

    # basic queries
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> float | int:
        """Degree; the zero polynomial has degree ``-inf``."""
        return len(self.coeffs) - 1 if self.coeffs else -math.inf

    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        inv = self.field.inv(self.leading())
        return self.scale(inv)

    def scale(self, c: int) -> "Poly":
        F = self.field
        return Poly(F, tuple(F.mul(a, c) for a in self.coeffs))

    def _check(self, other: "Poly"):
        if not isinstance(other, Poly):
            raise TypeError(f"expected Poly, got {type(other).__name__}")
        if other.field != self.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    # ring operations
    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        a = a + (0,) * (n - len(a))
        b = b + (0,) * (n - len(b))
        if F.r == 1:
            p = F.p
            return Poly(F, tuple((x + y) % p for x, y in zip(a, b)))
        return Poly(F, tuple(F.add(x, y) for x, y in zip(a, b)))

    def __neg__(self) -> "Poly":
        F = self.field
        return Poly(F, tuple(F.neg(a) for a in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        self._check(other)
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(F)
        out = [0] * (len(a) + len(b) - 1)
        if F.r == 1:
            p = F.p
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return Poly(F, tuple(c % p for c in out))
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Poly(F, tuple(out))

    def __pow__(self, e: int) -> "Poly":
        result = Poly.const(self.field, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        rem = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        if len(rem) - 1 < db:
            return Poly.zero(F), self
        inv_lead = F.inv(b[-1])
        quot = [0] * (len(rem) - db)
        if F.r == 1:
            p = F.p
            for k in range(len(rem) - 1, db - 1, -1):
                c = rem[k] * inv_lead % p
                if c:
                    quot[k - db] = c
                    base = k - db
                    for i in range(db + 1):
                        rem[base + i] = (rem[base + i] - c * b[i]) % p
        else:
            for k in range(len(rem) - 1, db - 1, -1):
                c = F.mul(rem[k], inv_lead)
                if c:
                    quot[k - db] = c
                    base = k - db
                    for i in range(db + 1):
                        rem[base + i] = F.sub(rem[base + i], F.mul(c, b[i]))
        return Poly(F, tuple(quot)), Poly(F, tuple(rem[:db]))

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def divides(self, other: "Poly") -> bool:
        return (other % self).is_zero()

    def __call__(self, x: int) -> int:
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero if both inputs are zero)."""
    a._check(b)
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def powmod(base: Poly, e: int, mod: Poly) -> Poly:
    result = Poly.const(base.field, 1) % mod
    base = base % mod
    while e:
        if e & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        e >>= 1
    return result


def is_irreducible(f: Poly) -> bool:
    """Rabin's test: monic f of degree n is irreducible iff t^(q^n) = t mod f
    and gcd(t^(q^(n/l)) - t, f) = 1 for every prime l | n."""
    n = f.degree
    if n == -math.inf or n < 1:
        return False
    if n == 1:
        return True
    F = f.field
    q = F.q
    f = f.monic()
    t = Poly.t(F)
    # frob[k] = t^(q^k) mod f
    frob = [t % f]
    for _ in range(n):
        frob.append(powmod(frob[-1], q, f))
    if not (frob[n] - t).is_zero():
        return False
    for ell in prime_factors(n):
        g = poly_gcd(frob[n // ell] - t, f)
        if g.degree != 0:
            return False
    return True


# --- places ----------------------------------------------------------------


@dataclass(frozen=True)
class PlaceFF:
    """A closed point of P^1 over F_q: a monic irreducible or the point at infinity."""

    kind: str
    pi: Poly | None = None
    degree: int = 1

    def __post_init__(self):
        if self.kind == "finite":
            if self.pi is None or not self.pi.is_monic():
                raise ValueError("finite places need a monic generator")
            if self.degree != self.pi.degree:
                raise ValueError("degree of a finite place is deg(pi)")
        elif self.kind == "infinity":
            if self.pi is not None or self.degree < 1:
                raise ValueError("infinite place takes only a positive degree")
        else:
            raise ValueError(f"unknown place kind {self.kind!r}")

    @classmethod
    def finite(cls, pi: Poly, check: bool = True) -> "PlaceFF":
        if check and not is_irreducible(pi):
            raise ValueError(f"{pi} is not irreducible")
        return cls("finite", pi, int(pi.degree))

    @classmethod
    def infinity(cls, degree: int = 1) -> "PlaceFF":
        return cls("infinity", None, degree)

    @property
    def is_infinite(self) -> bool:
        return self.kind == "infinity"

    def to_json(self) -> dict:
        if self.is_infinite:
            return {"kind": "infinity", "degree": self.degree}
        return {"kind": "finite", "pi": self.pi.to_text()}

    @classmethod
    def from_json(cls, d: dict, field: FqField) -> "PlaceFF":
        if d["kind"] == "infinity":
            return cls.infinity(int(d.get("degree", 1)))
        if d["kind"] == "finite":
            return cls.finite(Poly.from_text(field, d["pi"]))
        raise ValueError(f"unknown place kind {d['kind']!r}")

    def __str__(self):
        return "inf" if self.is_infinite else f"({self.pi})"


def enumerate_irreducibles(
    field: FqField, max_degree: int, budget: int | None = None
) -> list[PlaceFF]:
    """All monic irreducibles of degree <= max_degree, ordered by (degree, code).

    Reducible monics of each degree are sieved out as products of a smaller
    irreducible with an arbitrary monic cofactor.
    """
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    budget = enumeration_budget() if budget is None else budget
    q = field.q
    if q**max_degree > budget:
        raise BudgetError(f"q^max_degree = {q}^{max_degree} exceeds budget {budget}")
    irreducible: dict[int, list[Poly]] = {}
    for d in range(1, max_degree + 1):
        lead = q**d
        reducible = set()
        for k in range(1, d // 2 + 1):
            for a in irreducible[k]:
                for low in range(q ** (d - k)):
                    b = Poly.from_int(field, q ** (d - k) + low)
                    reducible.add((a * b).to_int())
        irreducible[d] = [
            Poly.from_int(field, lead + low) for low in range(lead) if lead + low not in reducible
        ]
    return [PlaceFF.finite(pi, check=False) for d in range(1, max_degree + 1) for pi in irreducible[d]]


def nu_at_place(f: Poly, x: PlaceFF) -> int:
    """Valuation of f at x: -deg f at infinity, multiplicity of pi otherwise."""
    if f.is_zero():
        raise ValueError("valuation of the zero polynomial is undefined")
    if x.is_infinite:
        return -int(f.degree)
    k = 0
    while True:
        quo, rem = divmod(f, x.pi)
        if not rem.is_zero():
            return k
        f = quo
        k += 1


def abs_at_place(f: Poly, x: PlaceFF) -> ExactMagnitude:
    return ExactMagnitude(f.field.q, -x.degree * nu_at_place(f, x))


def product_formula_exponents(f: Poly, places: Iterable[PlaceFF]) -> Fraction:
    """Sum of degree-weighted valuations over the given places (base-q exponent
    of the product of all absolute values, negated).  Zero for every f != 0
    when the places cover the divisor of f."""
    if f.is_zero():
        raise ValueError("product formula needs f != 0")
    seen = list(dict.fromkeys(places))
    infinite = [x for x in seen if x.is_infinite]
    if len(infinite) != 1:
        raise ValueError("exactly one place at infinity is required")
    finite_sum = sum(x.degree * nu_at_place(f, x) for x in seen if not x.is_infinite)
    if finite_sum != f.degree:
        raise MissingPlaceError(
            f"finite valuations account for degree {finite_sum} of {f.degree}; a divisor place is missing"
        )
    inf = infinite[0]
    return Fraction(finite_sum + inf.degree * nu_at_place(f, inf))


def divisor_support(
    f: Poly, max_trial_degree: int = 12, budget: int | None = None
) -> list[tuple[PlaceFF, int]]:
    """Finite places dividing f with their valuations.

    Trial division by enumerated irreducibles in increasing degree; a leftover
    cofactor is accepted as a single place once it passes the irreducibility
    test (no full factorisation is attempted).
    """
    if f.is_zero():
        raise ValueError("zero polynomial has infinite support")
    F = f.field
    rest = f.monic()
    out: list[tuple[PlaceFF, int]] = []
    d = 1
    while rest.degree >= 2 * d:
        if d > max_trial_degree:
            break
        for x in _irreducibles_of_degree(F, d, budget):
            k = 0
            while True:
                quo, rem = divmod(rest, x.pi)
                if not rem.is_zero():
                    break
                rest, k = quo, k + 1
            if k:
                out.append((x, k))
        d += 1
    if rest.degree >= 1:
        if not is_irreducible(rest):
            raise BudgetError(f"cofactor {rest} not resolved within trial degree {max_trial_degree}")
        x = PlaceFF.finite(rest, check=False)
        # rest may repeat a place already found only if deg(rest) < 2d, impossible here
        out.append((x, 1))
    out.sort(key=lambda xv: (xv[0].degree, xv[0].pi.to_int()))
    return out


@lru_cache(maxsize=None)
def _irreducibles_by_degree(field: FqField, max_degree: int) -> dict[int, tuple[PlaceFF, ...]]:
    places = enumerate_irreducibles(field, max_degree, budget=1 << 62)
    out: dict[int, list[PlaceFF]] = {}
    for x in places:
        out.setdefault(x.degree, []).append(x)
    return {d: tuple(v) for d, v in out.items()}


def _irreducibles_of_degree(field: FqField, d: int, budget: int | None = None) -> tuple[PlaceFF, ...]:
    budget = enumeration_budget() if budget is None else budget
    if field.q**d > budget:
        raise BudgetError(f"enumerating degree {d} over {field} exceeds budget {budget}")
    return _irreducibles_by_degree(field, d)[d]


# --- zeta functions --------------------------------------------------------


def _eval_int_poly(coeffs: Sequence[int], T: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * T + c
    return acc


def zeta_curve(
    field: FqField | int,
    s: float,
    trunc_degree: int | None = None,
    numerator: Sequence[int] | None = None,
    removed: Iterable[PlaceFF] = (),
    mode: str = "closed",
) -> float:
    """Zeta function Z(C, s) of a curve over F_q, with Euler factors at
    ``removed`` taken out.

    ``mode="closed"`` evaluates P(q^-s) / ((1 - q^-s)(1 - q^(1-s))) times the
    removed factors, valid wherever the denominator is nonzero.
    ``mode="product"`` multiplies (1 - q^(-s deg x))^-1 over all closed points
    of P^1 (finite places and the point at infinity) of degree <= trunc_degree;
    it needs s > 1 and genus 0.
    """
    q = field.q if isinstance(field, FqField) else int(field)
    removed = list(dict.fromkeys(removed))
    if mode == "closed":
        T = q ** (-s)
        denom = (1.0 - T) * (1.0 - q * T)
        if denom == 0.0 or s == 0 or s == 1:
            raise ZetaPoleError(f"Z(C, s) has a pole at s={s}")
        num = _eval_int_poly(numerator if numerator is not None else (1,), T)
        value = num / denom
        for x in removed:
            value *= 1.0 - T**x.degree
        return value
    if mode == "product":
        if s <= 1:
            raise ValueError("truncated Euler product needs s > 1")
        if numerator is not None and list(numerator) != [1]:
            raise ValueError("product mode only knows the places of P^1 (genus 0)")
        if trunc_degree is None or trunc_degree < 1:
            raise ValueError("product mode needs trunc_degree >= 1")
        removed_by_deg: dict[int, int] = {}
        inf_removed = False
        for x in removed:
            if x.is_infinite:
                inf_removed = True
            else:
                removed_by_deg[x.degree] = removed_by_deg.get(x.degree, 0) + 1
        log_value = 0.0
        for d in range(1, trunc_degree + 1):
            count = necklace_count(q, d) - removed_by_deg.get(d, 0)
            log_value -= count * math.log1p(-(q ** (-s * d)))
        if not inf_removed:
            log_value -= math.log1p(-(q ** (-s)))
        return math.exp(log_value)
    raise ValueError(f"unknown zeta mode {mode!r}")
