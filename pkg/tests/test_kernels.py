import json
import math
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from adelic_perc.arith_ff import PlaceFF, Poly, prime_field
from adelic_perc.arith_nf import QI, QQ, QSQRT2, NFElement, NumberField, PlaceNF, dedekind_zeta, split_prime
from adelic_perc.hierlattice import HierPoint
from adelic_perc.kernels import (
    BASEQ,
    NATURAL,
    KernelSpec,
    ProbabilityVector,
    Schedule,
    TransversalityError,
    adelic_prob_ff_diff,
    adelic_prob_nf_diff,
    arch_adelic_prob_diff,
    beta_threshold,
    ff_infty_J,
    ff_local_J,
    hier_J,
    inclusion_prob,
    kernel_eval,
    kernel_of_difference,
    lattice_J,
    nf_arch_J,
    power_mean,
    prob_of_difference,
    schedule_eval,
    toric_J,
)
from adelic_perc.hierlattice import HierParams
from adelic_perc.magnitude import ExactMagnitude

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures" / "kernels"
F2 = prime_field(2)
HALF = ProbabilityVector((0.5, 0.5))


def p2(text):
    return Poly.from_text(F2, text)


# --- power means ------------------------------------------------------------


def test_power_mean_examples():
    assert power_mean(2, HALF, (3, 4)) == pytest.approx(3.5355339, abs=1e-7)
    assert power_mean(0, HALF, (3, 4)) == pytest.approx(3.4641016, abs=1e-7)
    assert power_mean("inf", HALF, (3, 4)) == 4
    assert power_mean(0, HALF, (), (complex(3, 4),)) == pytest.approx(5.0, rel=1e-12)


def test_power_mean_rejects_bad_weights():
    with pytest.raises(ValueError):
        ProbabilityVector((0.5, 0.6))
    with pytest.raises(ValueError):
        power_mean(1, HALF, (1, 2, 3))


@settings(max_examples=300, deadline=None)
@given(
    st.lists(st.floats(0.01, 1e3), min_size=1, max_size=6),
    st.floats(-20, 20),
    st.floats(0.01, 20),
)
def test_power_mean_monotone_in_t(xs, t, dt):
    lam = ProbabilityVector.uniform(len(xs))
    lo, hi = power_mean(t, lam, xs), power_mean(t + dt, lam, xs)
    assert lo <= hi * (1 + 1e-12)
    assert min(xs) * (1 - 1e-12) <= lo and hi <= max(xs) * (1 + 1e-12)


# --- scalar kernels ------------------------------------------------------------


def test_kernel_examples():
    assert lattice_J(1, (3, 4)) == pytest.approx(0.008, rel=1e-12)
    assert toric_J(2, (3, 4)) == pytest.approx(1 / 144, rel=1e-12)
    assert hier_J(1, HierParams(3, 1), 2) == ExactMagnitude(3, -4)
    t = PlaceFF.finite(p2("0,1"))
    assert ff_local_J(1, p2("0,0,0,1"), t) == ExactMagnitude(2, -6)
    assert ff_infty_J(1, p2("1,1,0,1")) == ExactMagnitude(2, -6)
    assert nf_arch_J(1, NFElement(QI, 3, 4), QI.arch_places()[0]) == pytest.approx(0.0016, rel=1e-12)


def test_ff_infty_equals_hier():
    spec_h = KernelSpec("Hier", 1, L=2)
    for code in range(1, 256):
        f = Poly.from_int(F2, code)
        assert ff_infty_J(1, f) == kernel_of_difference(spec_h, int(f.degree))


def test_toric_rejects_axis_points():
    spec = KernelSpec("Toric", 1)
    with pytest.raises((TransversalityError, ValueError)):
        kernel_of_difference(spec, (3, 0))


def test_kernel_eval_needs_distinct_points():
    spec = KernelSpec("Lattice", 1)
    with pytest.raises(ValueError):
        kernel_eval(spec, (1, 2), (1, 2))
    assert kernel_eval(spec, (4, 6), (1, 2)) == pytest.approx(0.008)


# --- schedules and inclusion probabilities -----------------------------------------


def test_schedules():
    x = PlaceFF.finite(p2("1,1,1"))
    assert schedule_eval(Schedule("DegProportional", 1.5), x) == 3.0
    assert schedule_eval(Schedule("DegLogShifted", 1.0), x) == pytest.approx(2.0)
    (P3,) = split_prime(QQ, 3)
    assert schedule_eval(Schedule("InertiaLogShifted", 1.0), P3) == 1.0
    assert schedule_eval(Schedule("Constant", 0.7)) == 0.7


def test_inclusion_examples():
    assert inclusion_prob(0, 5.0).prob == 0
    assert inclusion_prob(1, math.log(2), NATURAL).prob == pytest.approx(0.5, rel=1e-12)
    assert inclusion_prob(1, 1, BASEQ, 2).prob == pytest.approx(0.5, rel=1e-12)


# --- adelic probabilities ------------------------------------------------------


def test_adelic_ff_examples():
    const = Schedule("Constant", 1.0)
    r = adelic_prob_ff_diff(2, const, p2("0,1"))
    assert r.tail == pytest.approx(0.5, rel=1e-12)
    assert r.prob == pytest.approx(0.5 * (1 - 2**-0.5), rel=1e-12)
    assert r.prob == pytest.approx(0.146447, abs=1e-6)
    assert adelic_prob_ff_diff(2, const, p2("1")).prob == pytest.approx(3 / 8, rel=1e-12)
    assert adelic_prob_ff_diff(200, const, p2("0,1")).prob == pytest.approx(1.0, abs=1e-12)


def test_adelic_nf_examples():
    const = Schedule("Constant", 1.0)
    r = adelic_prob_nf_diff(2, const, NFElement(QQ, 2))
    assert r.tail == pytest.approx(6 / math.pi**2 / 0.75, rel=1e-9)
    assert r.prob == pytest.approx(0.23742, abs=1e-5)
    assert adelic_prob_nf_diff(2, const, NFElement(QQ, 1)).prob == pytest.approx(6 / math.pi**2, rel=1e-9)
    (P2,) = split_prime(QI, 2)
    r = adelic_prob_nf_diff(2, const, NFElement(QI, 1, 1))
    tail = 1 / dedekind_zeta(QI, 2, removed=[P2], mode="closed")
    assert r.prob == pytest.approx(tail * (1 - 2**-0.5), rel=1e-9)


def test_arch_adelic_examples():
    r = arch_adelic_prob_diff(1, 1, NFElement(QSQRT2, 1))
    assert r.prob == pytest.approx((1 - math.exp(-1)) ** 2, rel=1e-12)
    assert r.prob == pytest.approx(0.39958, abs=1e-5)
    assert arch_adelic_prob_diff(1, 1, NFElement(QI, 10**6, 10**6)).prob < 1e-20


def test_thresholds():
    S3 = [PlaceFF.finite(p2(s)) for s in ("0,1", "1,1", "1,1,1")]
    assert beta_threshold(2, S3, "FF_A", F2) == pytest.approx(0.75, rel=1e-12)
    # beta^|S| / Z^(S) = 4 / (3/2)
    assert beta_threshold(2, S3[:2], "FF_Aprime", F2) == pytest.approx(8 / 3, rel=1e-12)
    assert beta_threshold(1, S3[:1], "FF_A", F2) == 0.0


# --- JSON and fixtures ----------------------------------------------------------


def parse_difference(spec: KernelSpec, payload):
    if spec.variant == "Hier":
        return HierPoint.from_text(spec.hier_params, payload)
    if spec.field is not None:
        return Poly.from_text(spec.field, payload)
    if isinstance(payload, dict):
        return NFElement(spec.number_field, payload["a"], payload.get("b", 0))
    return tuple(payload)


FIXTURE_FILES = sorted(FIXTURES.glob("*.json"))


def test_fixture_corpus_present():
    assert len(FIXTURE_FILES) >= 10


@pytest.mark.parametrize("path", FIXTURE_FILES, ids=lambda p: p.stem)
def test_fixture(path):
    fx = json.loads(path.read_text())
    spec = KernelSpec.from_json(fx["kernel"])
    d = parse_difference(spec, fx["difference"])
    if "beta" in fx:
        got = prob_of_difference(spec, fx["beta"], d)
    else:
        got = float(kernel_of_difference(spec, d))
    assert got == pytest.approx(fx["expected"], rel=fx["rel_tol"])


@pytest.mark.parametrize("path", FIXTURE_FILES, ids=lambda p: p.stem)
def test_spec_json_roundtrip(path):
    spec = KernelSpec.from_json(json.loads(path.read_text())["kernel"])
    assert KernelSpec.from_json(spec.to_json()) == spec


def test_bad_spec_rejected():
    with pytest.raises(Exception):
        KernelSpec.from_json({"variant": "Nope", "alpha": 1})
    with pytest.raises(ValueError):
        KernelSpec("Lattice", -1)
    with pytest.raises(ValueError):
        KernelSpec("Hier", 1)
