"""Command-line front end.

Exit codes: 0 all checks passed, 1 a check failed, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import jsonschema

from . import engine
from .arith_ff import FqField, PlaceFF, Poly
from .arith_nf import NFElement, NumberField, PlaceNF
from .diagram import run_diagram
from .kernels import KERNEL_SCHEMA, KernelSpec, Schedule, SCHEDULE_KINDS, adelic_prob_ff, adelic_prob_nf, arch_adelic_prob
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_SIZE = {"oneOf": [{"type": "integer", "minimum": 0}, {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1}]}
_FIELD = {
    "type": "object",
    "properties": {"p": {"type": "integer"}, "r": {"type": "integer"}, "modulus": {"type": "array", "items": {"type": "integer"}}},
    "required": ["p"],
    "additionalProperties": False,
}

VERTICES_SCHEMA = {
    "type": "object",
    "properties": {
        "model": {"enum": ["lattice", "nf", "hier", "poly"]},
        "dim": {"type": "integer", "minimum": 1},
        "radius": _SIZE,
        "field": {},
        "toric": {"type": "boolean"},
        "L": {"type": "integer", "minimum": 2},
        "N": {"type": "integer", "minimum": 1},
        "max_index": _SIZE,
        "max_degree": _SIZE,
    },
    "required": ["model"],
    "additionalProperties": False,
}

_COMMON = {
    "kernel": KERNEL_SCHEMA,
    "vertices": VERTICES_SCHEMA,
    "seed": {"type": "integer", "minimum": 0},
    "output": {"type": "string"},
    "threads": {"type": "integer", "minimum": 1},
}

SIMULATE_SCHEMA = {
    "type": "object",
    "properties": {
        **_COMMON,
        "betas": {"type": "array", "items": {"type": "number", "minimum": 0}, "minItems": 1},
        "trials": {"type": "integer", "minimum": 1},
        "coupling": {"enum": ["crn", "independent"]},
        "emit_edges": {"type": "boolean"},
    },
    "required": ["kernel", "vertices", "betas", "trials", "seed"],
    "additionalProperties": False,
}

BETAC_SCHEMA = {
    "type": "object",
    "properties": {
        **_COMMON,
        "theta": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "trials": {"type": "integer", "minimum": 1},
        "tol": {"type": "number", "exclusiveMinimum": 0},
        "beta_max": {"type": "number", "exclusiveMinimum": 0},
    },
    "required": ["kernel", "vertices", "trials", "seed"],
    "additionalProperties": False,
}

TWOPOINT_SCHEMA = {
    "type": "object",
    "properties": {
        **_COMMON,
        "beta": {"type": "number", "minimum": 0},
        "trials": {"type": "integer", "minimum": 1},
        "pairs": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 2, "maxItems": 2}},
    },
    "required": ["kernel", "vertices", "beta", "trials", "pairs", "seed"],
    "additionalProperties": False,
}

_NF_ELT = {
    "type": "object",
    "properties": {"a": {"type": "integer"}, "b": {"type": "integer"}, "field": {"type": "string"}},
    "required": ["a"],
    "additionalProperties": False,
}

ADELIC_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["ff", "nf", "arch"]},
        "beta": {"type": "number", "exclusiveMinimum": 0},
        "alpha": {"type": "number", "exclusiveMinimum": 0},
        "schedule": {"enum": list(SCHEDULE_KINDS)},
        "base_mode": {"enum": ["natural", "baseq"]},
        "field": _FIELD,
        "f": {"type": "string"},
        "g": {"type": "string"},
        "S": {"type": "array", "items": {"type": "object"}},
        "trunc_degree": {"type": "integer", "minimum": 1},
        "number_field": {"enum": ["Q", "Qi", "Qsqrt2"]},
        "x": _NF_ELT,
        "y": _NF_ELT,
        "pmax": {"type": "integer", "minimum": 2},
        "output": {"type": "string"},
    },
    "required": ["kind", "beta", "alpha"],
    "additionalProperties": False,
}


class ConfigError(ValueError):
    pass


def load_config(path: str, schema: dict) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        jsonschema.validate(cfg, schema)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"{path}: {exc.message}") from exc
    return cfg


def hashed_config(cfg: dict) -> dict:
    """The part of a config that determines results (output path and thread count excluded)."""
    return {k: v for k, v in cfg.items() if k not in ("output", "threads")}


_SIZE_KEY = {"lattice": "radius", "nf": "radius", "hier": "max_index", "poly": "max_degree"}


def vertex_ladder(vcfg: dict) -> tuple[str, list[int]]:
    key = _SIZE_KEY[vcfg["model"]]
    if key not in vcfg:
        raise ConfigError(f"vertices of model {vcfg['model']!r} need {key!r}")
    sizes = vcfg[key]
    return key, sizes if isinstance(sizes, list) else [sizes]


def vertex_builder(vcfg: dict):
    key, _ = vertex_ladder(vcfg)
    fixed = {k: v for k, v in vcfg.items() if k not in ("model", key)}

    def build(size: int) -> engine.VertexSet:
        return engine.build_vertex_set(vcfg["model"], **fixed, **{key: size})

    return build


def _out_dir(cfg: dict, override: str | None) -> Path:
    out = Path(override or cfg.get("output", "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


# --- commands ----------------------------------------------------------------


def cmd_verify(args) -> int:
    if args.suite == "list":
        print("\n".join(SUITES))
        return EXIT_OK
    if args.suite not in SUITES:
        print(f"unknown suite {args.suite!r}; available: {', '.join(SUITES)}", file=sys.stderr)
        return EXIT_USAGE
    rep = run_suite(args.suite)
    for line in rep.lines():
        print(line)
    print(f"{args.suite}: {'PASS' if rep.passed else 'FAIL'}")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_simulate(args) -> int:
    cfg = load_config(args.config, SIMULATE_SCHEMA)
    spec = KernelSpec.from_json(cfg["kernel"])
    build = vertex_builder(cfg["vertices"])
    _, sizes = vertex_ladder(cfg["vertices"])
    threads = args.threads or cfg.get("threads", 1)
    emit = cfg.get("emit_edges", False) or args.emit_edges
    out = _out_dir(cfg, args.out)
    hcfg = hashed_config(cfg)
    survival, clusters, edges = [], [], []
    for size in sizes:
        vs = build(size)
        for beta in cfg["betas"]:
            P = engine.prob_table(vs, spec, beta)
            for trial in range(cfg["trials"]):
                sc = engine.SampleConfig(
                    engine.trial_seed(cfg["seed"], trial), beta, cfg.get("coupling", "crn"), threads, emit
                )
                g = engine.sample_graph(vs, spec, sc, P)
                st = engine.cluster_stats(g.dsu)
                survival.append((beta, vs.n, trial, st.largest_fraction))
                hist = ";".join(f"{k}:{v}" for k, v in sorted(st.histogram.items()))
                clusters.append((beta, vs.n, trial, st.components, st.largest, g.edge_count, hist))
                if emit:
                    edges.extend((beta, vs.n, trial, i, j) for i, j in g.edges)
    engine.write_csv(out / "survival.csv", ("beta", "size", "trial", "largest_fraction"), survival, hcfg)
    engine.write_csv(
        out / "clusters.csv", ("beta", "size", "trial", "components", "largest", "edges", "histogram"), clusters, hcfg
    )
    if emit:
        engine.write_csv(out / "edges.csv", ("beta", "size", "trial", "i", "j"), edges, hcfg)
    print(f"wrote {len(survival)} rows to {out / 'survival.csv'} (config-hash {engine.config_hash(hcfg)[:12]})")
    return EXIT_OK


def cmd_beta_c(args) -> int:
    cfg = load_config(args.config, BETAC_SCHEMA)
    spec = KernelSpec.from_json(cfg["kernel"])
    _, sizes = vertex_ladder(cfg["vertices"])
    est = engine.estimate_beta_c(
        vertex_builder(cfg["vertices"]),
        spec,
        sizes,
        theta=cfg.get("theta", 0.25),
        trials=cfg["trials"],
        tol=cfg.get("tol", 1e-3),
        master_seed=cfg["seed"],
        beta_max=cfg.get("beta_max", 64.0),
        threads=args.threads or cfg.get("threads", 1),
    )
    out = _out_dir(cfg, args.out)
    hcfg = hashed_config(cfg)
    seeds = [engine.trial_seed(cfg["seed"], t) for t in range(cfg["trials"])]
    engine.write_json(out / "betac.json", {**est.to_json(), "seeds": seeds}, hcfg)
    print(f"beta_c in [{est.lower:.6g}, {est.upper:.6g}] (theta={est.theta}, sizes={sizes})")
    return EXIT_OK


def cmd_two_point(args) -> int:
    cfg = load_config(args.config, TWOPOINT_SCHEMA)
    spec = KernelSpec.from_json(cfg["kernel"])
    _, sizes = vertex_ladder(cfg["vertices"])
    if len(sizes) != 1:
        raise ConfigError("two-point needs a single vertex-set size")
    vs = vertex_builder(cfg["vertices"])(sizes[0])
    pairs = [tuple(p) for p in cfg["pairs"]]
    if any(max(p) >= vs.n for p in pairs):
        raise ConfigError(f"pair ids must be < |V| = {vs.n}")
    res = engine.two_point_estimate(
        vs, spec, cfg["beta"], pairs, cfg["trials"], cfg["seed"], threads=args.threads or cfg.get("threads", 1)
    )
    out = _out_dir(cfg, args.out)
    rows = [(f"{r.pair[0]}-{r.pair[1]}", r.trials, r.freq, r.stderr) for r in res]
    engine.write_csv(out / "twopoint.csv", ("pair", "trials", "freq", "stderr"), rows, hashed_config(cfg))
    for r in rows:
        print(f"{r[0]}: {r[2]:.4f} +- {r[3]:.4f}")
    return EXIT_OK


def cmd_adelic_prob(args) -> int:
    cfg = load_config(args.config, ADELIC_SCHEMA)
    beta, alpha = cfg["beta"], cfg["alpha"]
    sched = Schedule(cfg.get("schedule", "Constant"), alpha)
    kind = cfg["kind"]
    if kind == "ff":
        for key in ("field", "f", "g"):
            if key not in cfg:
                raise ConfigError(f"ff adelic-prob needs {key!r}")
        fd = cfg["field"]
        F = FqField(fd["p"], fd.get("r", 1), tuple(fd["modulus"]) if "modulus" in fd else None)
        f, g = Poly.from_text(F, cfg["f"]), Poly.from_text(F, cfg["g"])
        S = [PlaceFF.from_json(x, F) for x in cfg["S"]] if "S" in cfg else None
        res = adelic_prob_ff(beta, sched, f, g, S, cfg.get("base_mode", "baseq"), cfg.get("trunc_degree", 24))
    else:
        if "number_field" not in cfg or "x" not in cfg or "y" not in cfg:
            raise ConfigError(f"{kind} adelic-prob needs 'number_field', 'x' and 'y'")
        K = NumberField(cfg["number_field"])
        x = NFElement(K, cfg["x"]["a"], cfg["x"].get("b", 0))
        y = NFElement(K, cfg["y"]["a"], cfg["y"].get("b", 0))
        if kind == "nf":
            S = [PlaceNF.from_json(p) for p in cfg["S"]] if "S" in cfg else None
            res = adelic_prob_nf(beta, sched, x, y, cfg.get("pmax"), cfg.get("base_mode", "baseq"), S)
        else:
            res = arch_adelic_prob(beta, alpha, x, y)
    rows = res.breakdown()
    for row in rows:
        print(f"{row['place']:>16}  {row['factor']:.12g}")
    print(f"{'probability':>16}  {res.prob:.12g}")
    if res.companion is not None:
        print(f"{'toric companion':>16}  {res.companion:.12g}")
    if "output" in cfg or args.out:
        out = _out_dir(cfg, args.out)
        payload = {"probability": res.prob, "tail": res.tail, "factors": rows, "truncation": res.truncation}
        if res.companion is not None:
            payload["companion"] = res.companion
        engine.write_json(out / "adelic_prob.json", payload, hashed_config(cfg))
    return EXIT_OK


def cmd_diagram(args) -> int:
    results = run_diagram()
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print(f"diagram: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


# --- entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="adelic-perc",
        description="Long-range percolation on lattices, hierarchical lattices and global fields.",
        epilog="ADELIC_PERC_BUDGET overrides the vertex and enumeration budgets.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run an invariant suite")
    p.add_argument("suite", help="suite name, or 'list': " + ", ".join(SUITES))
    p.set_defaults(func=cmd_verify)

    for name, func, what in (
        ("simulate", cmd_simulate, "sample graphs over a beta grid; writes survival.csv and clusters.csv"),
        ("beta-c", cmd_beta_c, "bracket the critical inverse temperature; writes betac.json"),
        ("two-point", cmd_two_point, "estimate connection probabilities; writes twopoint.csv"),
        ("adelic-prob", cmd_adelic_prob, "print an adelic inclusion probability with its factors"),
    ):
        p = sub.add_parser(name, help=what, description=what)
        p.add_argument("config", help="JSON config file")
        p.add_argument("--out", help="output directory (overrides the config's 'output')")
        p.add_argument("--threads", type=int, default=None, help="worker threads for the pair sweep (default 1)")
        if name == "simulate":
            p.add_argument("--emit-edges", action="store_true", help="also write edges.csv")
        p.set_defaults(func=func)

    p = sub.add_parser("diagram", help="run the six-arrow integration suite")
    p.set_defaults(func=cmd_diagram)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", None) is not None and args.threads < 1:
        print("--threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (ConfigError, engine.VertexBudgetError, jsonschema.ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
