"""Kernel functions J, power means, inclusion probabilities, parameter
schedules and the adelic (zeta-tailed) probabilities.

Two conventions for turning J into a probability are supported:

* ``natural``: ``1 - exp(-beta J)``
* ``baseq``:   ``1 - q**(-beta J)`` (q the residue field size)

Only the base-q form makes the zeta-function tail identities exact, so it
is the default for every adelic variant; everything else defaults to the
natural form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Any, NamedTuple, Sequence

import jsonschema

from .arith_ff import (
    FqField,
    PlaceFF,
    Poly,
    ZetaPoleError,
    divisor_support,
    necklace_count,
    nu_at_place,
    zeta_curve,
)
from .arith_nf import (
    NFElement,
    NumberField,
    PlaceNF,
    arch_coordinates,
    arch_sq_abs,
    dedekind_zeta,
    factor_int,
    is_transverse,
    primes_upto,
    split_prime,
    v_nu,
    zero_free_beta0,
)
from .hierlattice import HierParams, HierPoint
from .magnitude import ExactMagnitude, as_fraction

NATURAL = "natural"
BASEQ = "baseq"

VARIANTS = (
    "Lattice",
    "PowerMean",
    "Toric",
    "ToricMixed",
    "Hier",
    "FFLocal",
    "FFInfty",
    "NFLocal",
    "NFArch",
    "AdelicFF",
    "AdelicNF",
    "ArchAdelic",
)
ADELIC_VARIANTS = ("AdelicFF", "AdelicNF", "ArchAdelic")


class TransversalityError(ValueError):
    """A toric kernel was evaluated at a difference with a vanishing coordinate."""


# --- probability vectors and power means ---------------------------------


@dataclass(frozen=True)
class ProbabilityVector:
    weights: tuple

    def __post_init__(self):
        w = tuple(self.weights)
        if not w:
            raise ValueError("empty probability vector")
        if any(x < 0 for x in w):
            raise ValueError("weights must be nonnegative")
        total = sum(w)
        exact = all(isinstance(x, (int, Fraction)) for x in w)
        if (exact and total != 1) or (not exact and abs(total - 1) > 1e-12):
            raise ValueError(f"weights sum to {total}, not 1")
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, n: int) -> "ProbabilityVector":
        return cls(tuple(Fraction(1, n) for _ in range(n)))

    def __len__(self):
        return len(self.weights)


@dataclass(frozen=True)
class PowerParam:
    """The exponent t; ``math.inf``, ``-math.inf`` and 0 are the limiting means."""

    t: float

    @classmethod
    def parse(cls, value) -> "PowerParam":
        if isinstance(value, PowerParam):
            return value
        if isinstance(value, str):
            value = {"inf": math.inf, "+inf": math.inf, "-inf": -math.inf}[value]
        return cls(float(value))

    def to_json(self):
        if math.isinf(self.t):
            return "inf" if self.t > 0 else "-inf"
        return self.t


def _moduli(x: Sequence[float], z: Sequence[complex]) -> list[float]:
    # each complex coordinate enters twice: once for z, once for its conjugate
    zs = [abs(c) for c in z]
    return [abs(v) for v in x] + zs + zs


def power_mean(t, lam, x: Sequence[float], z: Sequence[complex] = ()) -> float:
    """Weighted power mean M_t(lambda, (x, z)).

    ``lam`` has length r + 2s; its last 2s entries weight z and conj(z).
    """
    t = PowerParam.parse(t).t
    weights = lam.weights if isinstance(lam, ProbabilityVector) else tuple(lam)
    m = _moduli(x, z)
    if len(weights) != len(m):
        raise ValueError(f"lambda has {len(weights)} entries, need {len(m)} (r + 2s)")
    if any(v == 0 for v in m):
        raise ValueError("power mean needs nonzero coordinates")
    if math.isinf(t):
        return max(m) if t > 0 else min(m)
    terms = [(float(w), math.log(v)) for w, v in zip(weights, m) if w > 0]
    if t == 0:
        return math.exp(math.fsum(w * lv for w, lv in terms))
    if abs(t) * max(abs(lv) for _, lv in terms) < 1:
        # near t = 0 the sum is 1 + O(t); expm1/log1p keep its first-order term
        return math.exp(math.log1p(math.fsum(w * math.expm1(t * lv) for w, lv in terms)) / t)
    # log-sum-exp keeps |t| large finite values in range
    logs = [math.log(w) + t * lv for w, lv in terms]
    top = max(logs)
    return math.exp((top + math.log(math.fsum(math.exp(v - top) for v in logs))) / t)


# --- schedules -------------------------------------------------------------

SCHEDULE_KINDS = ("Constant", "DegProportional", "DegLogShifted", "InertiaProportional", "InertiaLogShifted")


@dataclass(frozen=True)
class Schedule:
    kind: str
    base: float

    def __post_init__(self):
        if self.kind not in SCHEDULE_KINDS:
            raise ValueError(f"unknown schedule {self.kind!r}")
        if not self.base > 0:
            raise ValueError("schedule base must be > 0")


def schedule_eval(sched: Schedule, place: PlaceFF | PlaceNF | None = None, q: int | None = None) -> float:
    """beta_x = beta deg x, alpha_x = alpha + log_q deg x, and the inertia analogues."""
    if sched.kind == "Constant":
        return sched.base
    if place is None:
        raise ValueError(f"{sched.kind} needs a place")
    if sched.kind.startswith("Deg"):
        if not isinstance(place, PlaceFF) or place.is_infinite:
            raise ValueError(f"{sched.kind} needs a finite function-field place")
        deg = place.degree
        if sched.kind == "DegProportional":
            return sched.base * deg
        q = place.pi.field.q if q is None else q
        return sched.base + math.log(deg, q)
    if not isinstance(place, PlaceNF) or place.is_arch:
        raise ValueError(f"{sched.kind} needs a non-Archimedean number-field place")
    if sched.kind == "InertiaProportional":
        return sched.base * place.f
    return sched.base + math.log(place.f, place.p)


# --- inclusion probabilities ----------------------------------------------


class Inclusion(NamedTuple):
    prob: float
    linear: float  # the small-J approximation of prob


def inclusion_prob(beta: float, J, base_mode: str = NATURAL, q: int | None = None) -> Inclusion:
    if beta < 0:
        raise ValueError("beta must be >= 0")
    j = float(J)
    if base_mode == NATURAL:
        lin = beta * j
    elif base_mode == BASEQ:
        if q is None:
            raise ValueError("base-q mode needs q")
        lin = beta * j * math.log(q)
    else:
        raise ValueError(f"unknown base mode {base_mode!r}")
    return Inclusion(-math.expm1(-lin), lin)


# --- scalar kernels --------------------------------------------------------


def lattice_J(alpha: float, d: Sequence[float]) -> float:
    N = len(d)
    sq = math.fsum(float(v) * v for v in d)
    if sq == 0:
        raise ValueError("kernel undefined at zero difference")
    return sq ** (-(N + alpha) / 2)


def powermean_J(alpha: float, t, lam, x: Sequence[float], z: Sequence[complex] = ()) -> float:
    N = len(x) + 2 * len(z)
    return power_mean(t, lam, x, z) ** (-(N + alpha))


def toric_J(alpha: float, x: Sequence[float], z: Sequence[complex] = ()) -> float:
    N = len(x) + 2 * len(z)
    vol = 1.0
    for v in x:
        vol *= abs(v)
    for c in z:
        vol *= abs(c) ** 2
    if vol == 0:
        raise TransversalityError("difference lies on a coordinate hyperplane")
    return (1.0 / vol) ** (1 + alpha / N)


def hier_J(alpha: float, params: HierParams, h: int) -> ExactMagnitude:
    return ExactMagnitude(params.L, -h * (params.N + as_fraction(alpha)))


def ff_local_J(alpha: float, d: Poly, x: PlaceFF) -> ExactMagnitude:
    """q^(-(1+alpha) d_x nu_x(d)) = |d|_x^(1+alpha)."""
    return ExactMagnitude(d.field.q, -(1 + as_fraction(alpha)) * x.degree * nu_at_place(d, x))


def ff_infty_J(alpha: float, d: Poly) -> ExactMagnitude:
    """|d|_inf^-(1+alpha) = q^(-(1+alpha) deg d)."""
    if d.is_zero():
        raise ValueError("kernel undefined at zero difference")
    return ExactMagnitude(d.field.q, -(1 + as_fraction(alpha)) * int(d.degree))


def nf_local_J(alpha: float, d: NFElement, place: PlaceNF) -> ExactMagnitude:
    return ExactMagnitude(place.p, -(1 + as_fraction(alpha)) * place.f * v_nu(d, place))


def nf_arch_J(alpha: float, d: NFElement, place: PlaceNF) -> float:
    """|sigma(d)|^(-(1+alpha) n_sigma), through |sigma(d)|^2."""
    if d.is_zero():
        raise ValueError("kernel undefined at zero difference")
    return arch_sq_abs(d, place) ** (-(1 + alpha) * place.n_sigma / 2)


# --- kernel specs ----------------------------------------------------------

_FIELD_SCHEMA = {
    "type": "object",
    "properties": {
        "p": {"type": "integer", "minimum": 2},
        "r": {"type": "integer", "minimum": 1},
        "modulus": {"type": "array", "items": {"type": "integer"}},
    },
    "required": ["p"],
    "additionalProperties": False,
}

KERNEL_SCHEMA = {
    "type": "object",
    "properties": {
        "variant": {"enum": list(VARIANTS)},
        "alpha": {"type": "number", "exclusiveMinimum": 0},
        "N": {"type": "integer", "minimum": 1},
        "t": {"anyOf": [{"type": "number"}, {"enum": ["inf", "+inf", "-inf"]}]},
        "lam": {"type": "array", "items": {"type": "number", "minimum": 0}},
        "L": {"type": "integer", "minimum": 2},
        "field": _FIELD_SCHEMA,
        "place": {"type": "object"},
        "number_field": {"enum": ["Q", "Qi", "Qsqrt2"]},
        "base_mode": {"enum": [NATURAL, BASEQ]},
        "alpha_schedule": {"enum": ["Constant", "DegLogShifted", "InertiaLogShifted"]},
        "trunc_degree": {"type": "integer", "minimum": 1},
        "pmax": {"type": "integer", "minimum": 2},
    },
    "required": ["variant", "alpha"],
    "additionalProperties": False,
    "allOf": [
        {"if": {"properties": {"variant": {"const": "PowerMean"}}}, "then": {"required": ["t"]}},
        {"if": {"properties": {"variant": {"const": "Hier"}}}, "then": {"required": ["L"]}},
        {
            "if": {"properties": {"variant": {"enum": ["FFLocal", "FFInfty", "AdelicFF"]}}},
            "then": {"required": ["field"]},
        },
        {
            "if": {"properties": {"variant": {"enum": ["NFLocal", "NFArch", "AdelicNF", "ArchAdelic"]}}},
            "then": {"required": ["number_field"]},
        },
        {"if": {"properties": {"variant": {"enum": ["FFLocal", "NFLocal"]}}}, "then": {"required": ["place"]}},
    ],
}


@dataclass(frozen=True)
class KernelSpec:
    """One kernel J (or adelic probability) with its parameters.

    ``place`` is a PlaceFF for FFLocal, a PlaceNF for NFLocal and NFArch.
    """

    variant: str
    alpha: float
    N: int | None = None
    t: PowerParam | None = None
    lam: ProbabilityVector | None = None
    L: int | None = None
    field: FqField | None = None
    place: Any = None
    number_field: NumberField | None = None
    base_mode: str | None = None
    alpha_schedule: str = "Constant"
    trunc_degree: int = 24
    pmax: int | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown kernel variant {self.variant!r}")
        if not self.alpha > 0:
            raise ValueError("alpha must be > 0")
        if self.base_mode is None:
            default = BASEQ if self.variant in ("AdelicFF", "AdelicNF") else NATURAL
            object.__setattr__(self, "base_mode", default)
        if self.t is not None and not isinstance(self.t, PowerParam):
            object.__setattr__(self, "t", PowerParam.parse(self.t))
        if self.lam is not None and not isinstance(self.lam, ProbabilityVector):
            object.__setattr__(self, "lam", ProbabilityVector(tuple(self.lam)))
        need = {
            "PowerMean": ("t",),
            "Hier": ("L",),
            "FFLocal": ("field", "place"),
            "FFInfty": ("field",),
            "AdelicFF": ("field",),
            "NFLocal": ("number_field", "place"),
            "NFArch": ("number_field",),
            "AdelicNF": ("number_field",),
            "ArchAdelic": ("number_field",),
        }.get(self.variant, ())
        for name in need:
            if getattr(self, name) is None:
                raise ValueError(f"{self.variant} kernel needs {name!r}")
        if self.variant == "Hier" and self.N is None:
            object.__setattr__(self, "N", 1)
        if self.variant == "NFArch" and self.place is None:
            object.__setattr__(self, "place", self.number_field.arch_places()[0])

    @property
    def hier_params(self) -> HierParams:
        return HierParams(self.L, self.N or 1)

    def with_alpha(self, alpha: float) -> "KernelSpec":
        return replace(self, alpha=alpha)

    # JSON
    @classmethod
    def from_json(cls, d: dict) -> "KernelSpec":
        jsonschema.validate(d, KERNEL_SCHEMA)
        kw: dict = {"variant": d["variant"], "alpha": d["alpha"]}
        for key in ("N", "L", "base_mode", "alpha_schedule", "trunc_degree", "pmax"):
            if key in d:
                kw[key] = d[key]
        if "t" in d:
            kw["t"] = PowerParam.parse(d["t"])
        if "lam" in d:
            kw["lam"] = ProbabilityVector(tuple(Fraction(str(w)) for w in d["lam"]))
        if "field" in d:
            fd = d["field"]
            kw["field"] = FqField(fd["p"], fd.get("r", 1), tuple(fd["modulus"]) if "modulus" in fd else None)
        if "number_field" in d:
            kw["number_field"] = NumberField(d["number_field"])
        if "place" in d:
            pd = d["place"]
            if d["variant"] == "FFLocal":
                kw["place"] = PlaceFF.from_json(pd, kw["field"])
            elif pd.get("kind") == "arch":
                kw["place"] = PlaceNF.from_json(pd)
            else:
                gen = dict(pd["generator"])
                gen.setdefault("field", d["number_field"])
                kw["place"] = PlaceNF.from_json({**pd, "kind": "nonarch", "generator": gen})
        return cls(**kw)

    def to_json(self) -> dict:
        d: dict = {"variant": self.variant, "alpha": self.alpha}
        for key in ("N", "L"):
            if getattr(self, key) is not None:
                d[key] = getattr(self, key)
        if self.t is not None:
            d["t"] = self.t.to_json()
        if self.lam is not None:
            d["lam"] = [float(w) for w in self.lam.weights]
        if self.field is not None:
            d["field"] = {"p": self.field.p, "r": self.field.r}
            if self.field.modulus:
                d["field"]["modulus"] = list(self.field.modulus)
        if self.number_field is not None:
            d["number_field"] = self.number_field.kind
        if self.place is not None:
            d["place"] = self.place.to_json()
        d["base_mode"] = self.base_mode
        if self.variant in ("AdelicFF", "AdelicNF"):
            d["alpha_schedule"] = self.alpha_schedule
        if self.variant == "AdelicFF" and self.base_mode == NATURAL:
            d["trunc_degree"] = self.trunc_degree
        if self.pmax is not None:
            d["pmax"] = self.pmax
        return d

    @property
    def q(self) -> int | None:
        """Base used by base-q inclusion probabilities."""
        if self.field is not None:
            return self.field.q
        if self.variant == "Hier":
            return self.L
        if self.variant == "NFLocal":
            return self.place.p
        return None


def _real_complex(d) -> tuple[list[float], list[complex]]:
    """Split a difference into real and complex Minkowski coordinates."""
    if isinstance(d, NFElement):
        coords = arch_coordinates(d)
        return [c for c in coords if not isinstance(c, complex)], [c for c in coords if isinstance(c, complex)]
    return [float(v) for v in d], []


def kernel_of_difference(spec: KernelSpec, d) -> ExactMagnitude | float:
    """J evaluated at a nonzero difference d = u - v."""
    v = spec.variant
    a = spec.alpha
    if v == "Lattice":
        if isinstance(d, NFElement):
            if d.field.kind == "Qi":
                return lattice_J(a, (d.a, d.b))
            return lattice_J(a, _real_complex(d)[0])
        return lattice_J(a, d)
    if v == "PowerMean":
        x, z = _real_complex(d)
        lam = spec.lam or ProbabilityVector.uniform(len(x) + 2 * len(z))
        return powermean_J(a, spec.t, lam, x, z)
    if v in ("Toric", "ToricMixed"):
        if isinstance(d, NFElement) and not is_transverse(d):
            raise TransversalityError(f"{d} has a vanishing Minkowski coordinate")
        x, z = _real_complex(d)
        return toric_J(a, x, z)
    if v == "Hier":
        if isinstance(d, HierPoint):
            if d.is_zero():
                raise ValueError("kernel undefined at zero difference")
            return hier_J(a, d.params, len(d.blocks) - 1)
        return hier_J(a, spec.hier_params, int(d))
    if v == "FFLocal":
        return ff_local_J(a, d, spec.place)
    if v == "FFInfty":
        return ff_infty_J(a, d)
    if v == "NFLocal":
        return nf_local_J(a, d, spec.place)
    if v == "NFArch":
        return nf_arch_J(a, d, spec.place)
    raise ValueError(f"{v} defines a probability, not a single kernel; use prob_of_difference")


def _difference(u, v):
    if isinstance(u, (tuple, list)):
        if len(u) != len(v):
            raise ValueError("payload dimensions differ")
        return tuple(x - y for x, y in zip(u, v))
    return u - v


def kernel_eval(spec: KernelSpec, u, v) -> ExactMagnitude | float:
    if u == v:
        raise ValueError("kernel needs u != v")
    return kernel_of_difference(spec, _difference(u, v))


def prob_of_difference(spec: KernelSpec, beta: float, d) -> float:
    """Edge probability between two vertices whose difference is d."""
    if spec.variant == "AdelicFF":
        return adelic_prob_ff_diff(
            beta, Schedule(spec.alpha_schedule, spec.alpha), d, base_mode=spec.base_mode, trunc_degree=spec.trunc_degree
        ).prob
    if spec.variant == "AdelicNF":
        return adelic_prob_nf_diff(
            beta, Schedule(spec.alpha_schedule, spec.alpha), d, pmax=spec.pmax, base_mode=spec.base_mode
        ).prob
    if spec.variant == "ArchAdelic":
        return arch_adelic_prob_diff(beta, spec.alpha, d).prob
    return inclusion_prob(beta, kernel_of_difference(spec, d), spec.base_mode, spec.q).prob


# --- adelic probabilities --------------------------------------------------


@dataclass
class AdelicProb:
    prob: float
    tail: float
    factors: list  # (place, factor) for the places in S
    truncation: int | None = None  # degree or pmax of a truncated tail
    companion: float | None = None  # toric comparison value (Archimedean model)

    def breakdown(self) -> list[dict]:
        rows = [{"place": str(x), "factor": f} for x, f in self.factors]
        rows.append({"place": "tail", "factor": self.tail})
        return rows


@lru_cache(maxsize=4096)
def _ff_tail(field: FqField, beta: float, removed: tuple) -> float:
    return 1.0 / zeta_curve(field, beta, removed=removed)


def _ff_natural_tail(q: int, beta: float, removed: tuple, D: int) -> float:
    by_deg: dict[int, int] = {}
    for x in removed:
        by_deg[x.degree] = by_deg.get(x.degree, 0) + 1
    log_t = math.log1p(-math.exp(-beta))  # point at infinity
    for d in range(1, D + 1):
        log_t += (necklace_count(q, d) - by_deg.get(d, 0)) * math.log1p(-math.exp(-beta * d))
    return math.exp(log_t)


def adelic_prob_ff_diff(
    beta: float,
    alpha_sched: Schedule,
    d: Poly,
    S: Sequence[PlaceFF] | None = None,
    base_mode: str = BASEQ,
    trunc_degree: int = 24,
) -> AdelicProb:
    """Adelic function-field probability for the difference d = f - g.

    ``S`` defaults to the divisor support of d.  Places outside S contribute
    the zeta tail Z^(S)(beta)^-1 (base q, closed form including the point at
    infinity) or, in natural mode, a product truncated at ``trunc_degree``.
    """
    if d.is_zero():
        raise ValueError("adelic probability needs f != g")
    if beta <= 0:
        raise ValueError("beta must be > 0")
    field_ = d.field
    q = field_.q
    places = [x for x, _ in divisor_support(d)] if S is None else list(dict.fromkeys(S))
    factors = []
    prob = 1.0
    for x in places:
        bx = beta * x.degree
        ax = schedule_eval(alpha_sched, x, q)
        J = ff_local_J(ax, d, x)
        f = inclusion_prob(bx, J, base_mode, q).prob
        factors.append((x, f))
        prob *= f
    removed = tuple(sorted(places, key=lambda x: (x.degree, x.pi.to_int())))
    if base_mode == BASEQ:
        tail = _ff_tail(field_, float(beta), removed)
        trunc = None
    else:
        tail = _ff_natural_tail(q, beta, removed, trunc_degree)
        trunc = trunc_degree
    if tail < 0:
        raise ZetaPoleError(f"zeta tail is negative at beta={beta}")
    return AdelicProb(prob * tail, tail, factors, trunc)


def adelic_prob_ff(beta, alpha_sched, f: Poly, g: Poly, S=None, base_mode=BASEQ, trunc_degree=24) -> AdelicProb:
    return adelic_prob_ff_diff(beta, alpha_sched, f - g, S, base_mode, trunc_degree)


def nf_support(d: NFElement, pmax: int | None = None) -> list[tuple[PlaceNF, int]]:
    """Non-Archimedean places with v(d) != 0, and the valuations."""
    norm_factors, cofactor = factor_int(d.norm(), pmax)
    if cofactor != 1:
        raise ValueError(f"pmax={pmax} too small: N(d) has the factor {cofactor}")
    out = []
    for p in sorted(norm_factors):
        for place in split_prime(d.field, p):
            v = v_nu(d, place)
            if v:
                out.append((place, v))
    return out


@lru_cache(maxsize=4096)
def _nf_tail(K: NumberField, beta: float, removed: tuple) -> float:
    return 1.0 / dedekind_zeta(K, beta, removed=removed, mode="closed")


def _check_nf_beta(K: NumberField, beta: float):
    b0 = zero_free_beta0(K)
    if b0 is not None and b0 < beta < 1:
        raise ValueError(f"beta={beta} lies in the excluded interval ({b0:.5f}, 1)")


def adelic_prob_nf_diff(
    beta: float,
    alpha_sched: Schedule,
    d: NFElement,
    pmax: int | None = None,
    base_mode: str = BASEQ,
    S: Sequence[PlaceNF] | None = None,
    tail_pmax: int = 10**5,
) -> AdelicProb:
    if d.is_zero():
        raise ValueError("adelic probability needs x != y")
    if beta <= 0:
        raise ValueError("beta must be > 0")
    K = d.field
    places = [x for x, _ in nf_support(d, pmax)] if S is None else list(dict.fromkeys(S))
    factors = []
    prob = 1.0
    for x in places:
        bx = beta * x.f
        ax = schedule_eval(alpha_sched, x)
        J = nf_local_J(ax, d, x)
        f = inclusion_prob(bx, J, base_mode, x.p).prob
        factors.append((x, f))
        prob *= f
    removed = tuple(places)
    if base_mode == BASEQ:
        _check_nf_beta(K, beta)
        tail = _nf_tail(K, float(beta), removed)
        trunc = None
    else:
        # natural-base tail over places above primes <= tail_pmax
        log_t = 0.0
        skip = set(removed)
        for p in primes_upto(tail_pmax).tolist():
            for x in split_prime(K, p):
                if x not in skip:
                    log_t += math.log1p(-math.exp(-beta * x.f))
        tail = math.exp(log_t)
        trunc = tail_pmax
    if tail < 0:
        raise ZetaPoleError(f"zeta tail is negative at beta={beta}")
    return AdelicProb(prob * tail, tail, factors, trunc)


def adelic_prob_nf(beta, alpha_sched, x: NFElement, y: NFElement, pmax=None, base_mode=BASEQ, S=None) -> AdelicProb:
    return adelic_prob_nf_diff(beta, alpha_sched, x - y, pmax, base_mode, S)


def arch_adelic_prob_diff(beta: float, alpha: float, d: NFElement) -> AdelicProb:
    """Product over Archimedean places (one per conjugate pair) of 1 - exp(-beta J_sigma).

    ``companion`` is the toric probability 1 - exp(-beta^n J_toric) at
    exponent alpha * n, the model this one approaches for large separations.
    """
    if d.is_zero():
        raise ValueError("arch-adelic probability needs x != y")
    K = d.field
    factors = []
    prob = 1.0
    for place in K.arch_places():
        f = inclusion_prob(beta, nf_arch_J(alpha, d, place)).prob
        factors.append((place, f))
        prob *= f
    n = K.degree
    x, z = _real_complex(d)
    companion = inclusion_prob(beta**n, toric_J(alpha * n, x, z)).prob
    return AdelicProb(prob, 1.0, factors, None, companion)


def arch_adelic_prob(beta: float, alpha: float, x: NFElement, y: NFElement) -> AdelicProb:
    return arch_adelic_prob_diff(beta, alpha, x - y)


# --- beta thresholds --------------------------------------------------------

THRESHOLDS = ("FF_A", "FF_Aprime", "NF_A", "NF_Aprime")


def beta_threshold(beta: float, S: Sequence, which: str, context, numerator=None) -> float:
    """beta_{A,S} (``*_A``) and beta'_{A,S} (``*_Aprime``).

    ``context`` is the FqField (function-field variants) or NumberField.  At a
    pole of the zeta function the threshold is 0.  Number-field variants
    return the n-th root of the defining expression.
    """
    if which not in THRESHOLDS:
        raise ValueError(f"unknown threshold {which!r}")
    if beta <= 0:
        raise ValueError("beta must be > 0")
    S = list(dict.fromkeys(S))
    prime = which.endswith("Aprime")
    if which.startswith("FF"):
        if not isinstance(context, FqField):
            raise TypeError("function-field thresholds need an FqField")
        try:
            Z = zeta_curve(context, beta, numerator=numerator, removed=S if prime else ())
        except ZetaPoleError:
            return 0.0
    else:
        if not isinstance(context, NumberField):
            raise TypeError("number-field thresholds need a NumberField")
        _check_nf_beta(context, beta)
        if beta == 1:
            return 0.0
        Z = dedekind_zeta(context, beta, removed=S if prime else (), mode="closed")
    if not Z > 0:
        raise ValueError(f"zeta value {Z} at beta={beta} is not positive; threshold undefined")
    small = beta <= 1
    if prime:
        value = (beta if small else beta ** len(S)) / Z
    else:
        value = (beta ** len(S) if small else beta) / Z
    if which.startswith("NF"):
        value = value ** (1.0 / context.degree)
    return value
