"""Acceptance suite, one test per numbered criterion (1-14).

Each test stores a short measurement on ``request.node.acceptance_detail``;
conftest prints one PASS/FAIL line per criterion at the end of the run.
Criteria 9-13 write their results to disk so that criterion 14 can rerun
them and compare the bytes.
"""

import json
import math
import shutil
import statistics
import time
from pathlib import Path

import pytest

from adelic_perc import engine
from adelic_perc.cli import main as cli_main
from adelic_perc.diagram import run_diagram
from adelic_perc.kernels import KernelSpec
from adelic_perc.verify import ff_sandwich, nf_sandwich, run_suite

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def _suite(request, name: str, limit: float | None = None):
    t0 = time.perf_counter()
    rep = run_suite(name)
    dt = time.perf_counter() - t0
    failed = [c.line() for c in rep.checks if not c.passed]
    request.node.acceptance_detail = f"{sum(c.passed for c in rep.checks)}/{len(rep.checks)} checks, {dt:.2f}s"
    assert not failed, "\n".join(failed)
    if limit is not None:
        assert dt < limit, f"{dt:.2f}s exceeds {limit}s"


def test_criterion_01_product_formula_ff(request):
    _suite(request, "product-formula-ff", 2.0)


def test_criterion_02_product_formula_nf(request):
    _suite(request, "product-formula-nf", 5.0)


def test_criterion_03_power_mean_monotonicity(request):
    _suite(request, "monotonicity")


def test_criterion_04_kernel_identities(request):
    _suite(request, "kernel-identities")


def test_criterion_05_hierarchical_iso(request):
    _suite(request, "iso")


def test_criterion_06_dperp(request):
    _suite(request, "dperp")


def test_criterion_07_integrability(request):
    _suite(request, "integrability")


def test_criterion_08_zeta_convergence(request):
    _suite(request, "zeta")


# --- criteria 9-13 produce files --------------------------------------------------------


def run_coupled(out: Path) -> dict:
    vs = engine.build_vertex_set("nf", field="Qsqrt2", radius=10)
    pairs = {
        "standard<=toric": (KernelSpec("Lattice", 1.0), KernelSpec("Toric", 1.0)),
        "pm_t2<=pm_t0": (KernelSpec("PowerMean", 1.0, t=2), KernelSpec("PowerMean", 1.0, t=0)),
    }
    rows, summary = [], {}
    for name, (a, b) in pairs.items():
        for beta in (0.1, 0.5, 1.0):
            rep = engine.compare_coupled(vs, a, b, beta, range(100))
            summary[(name, beta)] = rep.inclusion_holds
            rows.append((name, beta, rep.seeds, rep.inclusion_holds, rep.largest_dominated, sum(rep.edges_a), sum(rep.edges_b)))
    engine.write_csv(
        out / "coupled.csv",
        ("comparison", "beta", "seeds", "inclusion_holds", "largest_dominated", "edges_a", "edges_b"),
        rows,
        {"vertices": vs.describe(), "seeds": 100},
    )
    return summary


def run_always_percolating(out: Path) -> dict[int, float]:
    assert cli_main(["simulate", str(CONFIGS / "simulate_fflocal.json"), "--out", str(out), "--threads", "1"]) == 0
    by_size: dict[int, list[float]] = {}
    lines = (out / "survival.csv").read_text().splitlines()[2:]
    for line in lines:
        _, size, _, frac = line.split(",")
        by_size.setdefault(int(size), []).append(float(frac))
    return {s: statistics.median(v) for s, v in sorted(by_size.items())}


def run_sandwich(out: Path) -> dict:
    res = {"ff": ff_sandwich(q=2, beta=2.0, alpha=1.0, max_deg=4), "nf": nf_sandwich()}
    payload = {
        k: {"samples": r.samples, "lower_ok": r.lower_ok, "upper_ok": r.upper_ok, "both_ok": r.both_ok, "rate": r.rate}
        for k, r in res.items()
    }
    engine.write_json(out / "sandwich.json", payload, {"slack": 0.05, "beta": 2.0, "alpha": 1.0})
    return payload


BETAC_SEEDS = (12, 13, 14)


def run_beta_c(out: Path) -> list[dict]:
    reps = []
    for seed in BETAC_SEEDS:
        rep = {}
        for kind in ("toric", "lattice"):
            cfg = json.loads((CONFIGS / f"betac_{kind}.json").read_text())
            cfg["seed"] = seed
            cfg_path = out / f"betac_{kind}_{seed}.cfg.json"
            cfg_path.write_text(json.dumps(cfg))
            d = out / f"{kind}_{seed}"
            assert cli_main(["beta-c", str(cfg_path), "--out", str(d)]) == 0
            rep[kind] = json.loads((d / "betac.json").read_text())["bracket"]
        reps.append(rep)
    return reps


def run_diagram_to(out: Path) -> list:
    results = run_diagram()
    engine.write_json(
        out / "diagram.json",
        {"arrows": [{"index": r.index, "passed": r.passed, "detail": r.detail} for r in results]},
        {"suite": "diagram"},
    )
    return results


@pytest.fixture(scope="session")
def run_dir(tmp_path_factory) -> Path:
    return tmp_path_factory.mktemp("acceptance_run1")


def test_criterion_09_coupled_ordering(request, run_dir):
    t0 = time.perf_counter()
    summary = run_coupled(run_dir)
    bad = {k: v for k, v in summary.items() if v != 100}
    request.node.acceptance_detail = (
        f"{sum(summary.values())}/{100 * len(summary)} seed-checks hold, {time.perf_counter() - t0:.1f}s"
    )
    assert not bad, bad


def test_criterion_10_always_percolating(request, run_dir):
    t0 = time.perf_counter()
    med = run_always_percolating(run_dir)
    dt = time.perf_counter() - t0
    request.node.acceptance_detail = (
        "median largest fraction " + ", ".join(f"2^{int(math.log2(s))}:{m:.3f}" for s, m in med.items()) + f", {dt:.1f}s"
    )
    values = list(med.values())
    assert all(a <= b for a, b in zip(values, values[1:])), values
    assert values[0] < values[-1]
    assert med[2**12] > 0.5
    assert dt < 120


def test_criterion_11_sandwich(request, run_dir):
    payload = run_sandwich(run_dir)
    request.node.acceptance_detail = "; ".join(
        f"{k}: {v['both_ok']}/{v['samples']} (lower {v['lower_ok']}, upper {v['upper_ok']})" for k, v in payload.items()
    )
    for k, v in payload.items():
        assert v["rate"] >= 0.95, f"{k} sandwich holds in {v['rate']:.1%} of cases"


def test_criterion_12_beta_c_ordering(request, run_dir):
    t0 = time.perf_counter()
    reps = run_beta_c(run_dir)
    dt = time.perf_counter() - t0
    verdicts = []
    for rep in reps:
        (tl, tu), (sl, su) = rep["toric"], rep["lattice"]
        verdicts.append(tu <= su + max(tu - tl, su - sl))
    request.node.acceptance_detail = (
        " | ".join(f"toric [{r['toric'][0]:.3f},{r['toric'][1]:.3f}] std [{r['lattice'][0]:.3f},{r['lattice'][1]:.3f}]" for r in reps)
        + f"; {sum(verdicts)}/3 ordered, {dt:.0f}s"
    )
    assert sum(verdicts) >= 2
    assert dt < 600


def test_criterion_13_diagram(request, run_dir):
    t0 = time.perf_counter()
    results = run_diagram_to(run_dir)
    dt = time.perf_counter() - t0
    request.node.acceptance_detail = " ".join(f"{r.index}:{'ok' if r.passed else 'FAIL'}" for r in results) + f", {dt:.1f}s"
    failed = [r.line() for r in results if not r.passed]
    assert not failed, "\n".join(failed)
    assert dt < 300


def test_criterion_14_determinism(request, run_dir, tmp_path):
    # reruns every producer of criteria 9-13 and compares the files byte for byte
    produced = {
        "coupled.csv": run_coupled,
        "survival.csv": run_always_percolating,
        "sandwich.json": run_sandwich,
        "diagram.json": run_diagram_to,
    }
    for name, fn in produced.items():
        if not (run_dir / name).exists():
            fn(run_dir)
        fn(tmp_path)
    if not (run_dir / f"toric_{BETAC_SEEDS[0]}").exists():
        run_beta_c(run_dir)
    run_beta_c(tmp_path)
    files = sorted(p.relative_to(run_dir) for p in run_dir.rglob("*") if p.is_file() and not p.name.endswith(".cfg.json"))
    differ = [str(f) for f in files if (run_dir / f).read_bytes() != (tmp_path / f).read_bytes()]
    request.node.acceptance_detail = f"{len(files) - len(differ)}/{len(files)} files byte-identical"
    assert len(files) >= 10
    assert not differ, differ
