"""Command-line benchmark harness.

Subcommands: ``gen-quadratic`` (persist a seeded problem), ``spectrum``
(eigenvalue diagnostics), ``run`` (execute configured methods and emit
per-run CSVs plus a JSON summary), ``trace-check`` (trace-estimator
concentration report), and ``compare`` (run plus a cross-method table).
Every command writes byte-stable CSV/JSON artifacts and, unless
``--no-plot`` is given, matplotlib figures next to them.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 numeric
failure.
"""

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import report
from .core import RngStream, power_iteration_sym, random_orthogonal
from .errors import (CapabilityError, ConfigError, ConstructionError,
                     NumericError, ParseError, StateError)
from .estimator import Preconditioner, trace_estimate
from .oracles import (CountingOracle, Decay, LogisticObjective, NoiseSpec,
                      QuadraticObjective, load_libsvm, make_quadratic,
                      reference_optimum)
from .optimizer import (AdaptiveTraceStep, FixedStep, InverseLmaxStep,
                        KnownTraceStep, RunConfig, run_zo_gd,
                        run_zo_hessian_aware, run_zo_sketch, theorem1_step,
                        theorem2_step)
from .sketch import KINDS, SketchSpec, sample_sketch

DENSE_EIG_CAP = 512
_GD_GRID_DIVISORS = (1.0, 2.0, 4.0)


# ----------------------------------------------------------------------
# config resolution


def _load_config(path) -> dict:
    text = Path(path).read_text()
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path} is not valid JSON: {e}") from None
    if not isinstance(cfg, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return cfg


def _quadratic_from_lambdas(lambdas, ridge, rng: RngStream) -> QuadraticObjective:
    lambdas = np.asarray(lambdas, dtype=np.float64)
    d = lambdas.size
    U = random_orthogonal(d, rng.derive(0))
    a = rng.derive(1).generator().standard_normal(d)
    return QuadraticObjective(U, lambdas, ridge, a)


def _build_quadratic(p: dict) -> QuadraticObjective:
    ridge = float(p.get("ridge", 1e-4))
    rng = RngStream(int(p.get("seed", 0)))
    if "lambdas" in p:
        return _quadratic_from_lambdas(p["lambdas"], ridge, rng)
    if "d" not in p or "decay" not in p:
        raise ConfigError("quadratic problem needs 'd' and 'decay' (or explicit 'lambdas')")
    decay = Decay(p["decay"], p.get("rate"))
    return make_quadratic(int(p["d"]), decay, ridge, rng)


def resolve_problem(p: dict):
    """Build the objective named by a problem config; returns (objective, info)."""
    if not isinstance(p, dict) or "type" not in p:
        raise ConfigError("problem config must be an object with a 'type' key")
    kind = p["type"]
    if kind == "quadratic":
        obj = _build_quadratic(p)
        info = {k: p[k] for k in ("d", "decay", "rate", "ridge", "seed", "lambdas") if k in p}
        info["type"] = "quadratic"
        return obj, info
    if kind == "quadratic_file":
        try:
            blob = json.loads(Path(p["path"]).read_text())
        except json.JSONDecodeError as e:
            raise ConfigError(f"problem file {p['path']} is not valid JSON: {e}") from None
        obj = _build_quadratic(blob)
        info = dict(blob)
        info["type"] = "quadratic"
        info.pop("derived", None)
        return obj, info
    if kind == "logistic":
        if "path" not in p:
            raise ConfigError("logistic problem needs a dataset 'path'")
        ds = load_libsvm(p["path"], d_hint=p.get("d_hint"),
                         ridge=float(p.get("ridge", 1e-4)))
        obj = LogisticObjective(ds)
        info = {"type": "logistic", "path": str(p["path"]), "ridge": obj.ridge,
                "n": ds.n, "d": ds.d}
        return obj, info
    raise ConfigError(f"unknown problem type {kind!r}")


def _resolve_x0(spec, objective) -> np.ndarray:
    d = objective.dim
    if spec is None or spec == "zeros":
        return np.zeros(d)
    if isinstance(spec, dict) and "gaussian" in spec:
        opts = spec["gaussian"] or {}
        g = RngStream(int(opts.get("seed", 0)), 9_001).generator().standard_normal(d)
        return float(opts.get("scale", 1.0)) * g
    if isinstance(spec, (list, tuple)):
        x0 = np.asarray(spec, dtype=np.float64)
        if x0.shape != (d,):
            raise ConfigError(f"x0 has dimension {x0.shape}, problem needs ({d},)")
        return x0
    raise ConfigError(f"unsupported x0 spec {spec!r}")


def _resolve_policy(pol, objective, sketch, precond, x0):
    if pol is None:
        pol = "known_trace"
    if isinstance(pol, str):
        if pol == "known_trace":
            return KnownTraceStep()
        if pol == "inverse_lmax":
            return InverseLmaxStep()
        if pol == "adaptive_trace":
            return AdaptiveTraceStep()
        if pol == "theorem1":
            k = sketch.k if sketch is not None else 1
            return FixedStep(theorem1_step(objective, k, x=x0))
        if pol == "theorem2":
            if precond is None:
                raise ConfigError("theorem2 policy needs a preconditioner")
            k = sketch.k if sketch is not None else 1
            return FixedStep(theorem2_step(objective, precond, k, x=x0))
        raise ConfigError(f"unknown policy {pol!r}")
    if isinstance(pol, dict):
        if "fixed" in pol:
            return FixedStep(float(pol["fixed"]))
        if "adaptive_trace" in pol:
            return AdaptiveTraceStep(**(pol["adaptive_trace"] or {}))
        if "inverse_lmax" in pol:
            opts = pol["inverse_lmax"] or {}
            return InverseLmaxStep(lmax=opts.get("lmax"))
        raise ConfigError(f"unknown policy object {sorted(pol)!r}")
    raise ConfigError(f"unsupported policy spec {pol!r}")


def _resolve_precond(mspec, objective) -> Preconditioner:
    name = mspec.get("preconditioner", "exact")
    if name == "identity":
        return Preconditioner.identity()
    if name == "exact":
        if not isinstance(objective, QuadraticObjective):
            raise ConfigError("exact preconditioner is only available for quadratics")
        return Preconditioner.from_quadratic(objective)
    raise ConfigError(f"unknown preconditioner {name!r}")


_METHOD_DEFAULT_POLICY = {"zo_sketch": "known_trace", "zo_gd": "inverse_lmax",
                          "zo_hessian_aware": "theorem2"}


def _run_one(objective, noise, x0, mspec, method_index, seed, common):
    """Execute one (method, seed) cell; returns a result dict."""
    method = mspec.get("method", "zo_sketch")
    if method not in _METHOD_DEFAULT_POLICY:
        raise ConfigError(f"unknown method {method!r} in method spec")
    sketch = None
    if method != "zo_gd":
        if "ell" not in mspec:
            raise ConfigError(f"method {mspec.get('name', method)!r} needs 'ell'")
        sketch = SketchSpec(kind=mspec.get("sketch", "gaussian"), d=objective.dim,
                            ell=int(mspec["ell"]),
                            seed=RngStream(seed, method_index),
                            sparsity=int(mspec.get("sparsity", 1)))
    precond = _resolve_precond(mspec, objective) if method == "zo_hessian_aware" else None
    alpha = float(mspec.get("alpha", common.get("alpha", 0.1)))
    pol_spec = mspec.get("policy", _METHOD_DEFAULT_POLICY[method])

    def execute(policy):
        cfg = RunConfig(method=method, sketch=sketch, alpha=alpha, policy=policy,
                        max_queries=common.get("budget"),
                        max_iters=common.get("max_iters"),
                        gap_target=common.get("gap_target"),
                        record_every=int(mspec.get("record_every",
                                                   common.get("record_every", 1))))
        oracle = CountingOracle(objective, noise)
        if method == "zo_sketch":
            return run_zo_sketch(oracle, x0, cfg)
        if method == "zo_hessian_aware":
            return run_zo_hessian_aware(oracle, x0, precond, cfg)
        return run_zo_gd(oracle, x0, cfg)

    grid_info = None
    if (method == "zo_gd" and pol_spec == "inverse_lmax"
            and not isinstance(objective, QuadraticObjective)):
        # classical step needs lmax; sweep a small grid from power iteration
        lhat = power_iteration_sym(lambda v: objective.hessian_matvec(x0, v),
                                   objective.dim, iters=200, tol=1e-12,
                                   rng=RngStream(31))
        candidates = [1.0 / (div * lhat) for div in _GD_GRID_DIVISORS]
        outcomes = [execute(FixedStep(eta)) for eta in candidates]
        finals = [r.records[-1].gap if r.records[-1].gap is not None
                  else r.records[-1].f_value for r in outcomes]
        best = int(np.argmin([np.inf if not np.isfinite(v) else v for v in finals]))
        grid_info = {"lmax_estimate": lhat, "candidate_etas": candidates,
                     "final_gaps": finals, "chosen_eta": candidates[best]}
        result = outcomes[best]
    else:
        policy = _resolve_policy(pol_spec, objective, sketch, precond, x0)
        result = execute(policy)
    return {"method_index": method_index, "seed": seed,
            "name": mspec.get("name", method), "result": result,
            "grid": grid_info}


def run_experiment(config: dict):
    """Execute every (method, seed) cell of a run config; write CSVs, the
    resolved config, and a summary JSON into the output directory."""
    methods = config.get("methods")
    if not methods:
        raise ConfigError("config needs a non-empty 'methods' list")
    names = [m.get("name", m.get("method", "zo_sketch")) for m in methods]
    if len(set(names)) != len(names):
        raise ConfigError(f"method names must be unique, got {names}")
    out = Path(config.get("out", "results"))
    out.mkdir(parents=True, exist_ok=True)

    objective, problem_info = resolve_problem(config["problem"])
    noise = NoiseSpec(**config.get("noise", {"sigma": 0.0}))
    if isinstance(objective, LogisticObjective):
        reference_optimum(objective)  # computes and caches when missing
    x0 = _resolve_x0(config.get("x0"), objective)
    gap0 = objective.gap(x0)  # also primes cached spectral data pre-threading
    seeds = config.get("seeds")
    if seeds is None:
        seeds = [int(config.get("seed", 0))]
    seeds = [int(s) for s in seeds]
    common = {"budget": config.get("budget"), "max_iters": config.get("max_iters"),
              "gap_target": config.get("gap_target"),
              "record_every": config.get("record_every", 1),
              "alpha": config.get("alpha", 0.1)}

    resolved = dict(config)
    resolved.setdefault("schema_version", report.SCHEMA_VERSION)
    resolved["problem"] = problem_info
    resolved["seeds"] = seeds
    report.write_json(out / "config.resolved.json", resolved)

    tasks = [(mi, mspec, s) for mi, mspec in enumerate(methods) for s in seeds]
    threads = int(config.get("threads", 1))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(
                lambda args: _run_one(objective, noise, x0, args[1], args[0], args[2], common),
                tasks))
    else:
        results = [_run_one(objective, noise, x0, mspec, mi, s, common)
                   for mi, mspec, s in tasks]

    thresholds = [float(t) for t in config.get("gap_thresholds", [1e-3, 1e-6])]
    summary = {"schema_version": report.SCHEMA_VERSION, "problem": problem_info,
               "initial_gap": gap0, "gap_thresholds": thresholds, "methods": {}}
    curves = {}
    for cell in sorted(results, key=lambda c: (c["method_index"], c["seed"])):
        res = cell["result"]
        name, seed = cell["name"], cell["seed"]
        report.write_records_csv(out / f"{name}_seed{seed}.csv", res.records)
        entry = summary["methods"].setdefault(
            name, {"seeds": {}, "queries_to_target_median": {}})
        per_seed = {"total_queries": res.total_queries,
                    "termination_reason": res.termination_reason,
                    "final_gap": res.records[-1].gap,
                    "final_f": res.records[-1].f_value,
                    "queries_to_target": {
                        repr(t): report.queries_to_target(res.records, t, gap0)
                        for t in thresholds}}
        if cell["grid"] is not None:
            per_seed["zo_gd_grid"] = cell["grid"]
        entry["seeds"][str(seed)] = per_seed
        curves[f"{name}/seed{seed}"] = (
            [r.queries for r in res.records],
            [r.gap if r.gap is not None else float("nan") for r in res.records])
    for name, entry in summary["methods"].items():
        for t in thresholds:
            vals = [s["queries_to_target"][repr(t)] for s in entry["seeds"].values()]
            reached = [v for v in vals if v is not None]
            entry["queries_to_target_median"][repr(t)] = (
                float(np.median(reached)) if reached else None)
            entry.setdefault("reached_count", {})[repr(t)] = len(reached)
    report.write_json(out / "summary.json", summary)
    if config.get("plot", True):
        report.plot_gap_curves(curves, out / "gap_vs_queries.png",
                               title="query complexity")
    return out, summary


# ----------------------------------------------------------------------
# subcommands


def cmd_gen_quadratic(args) -> int:
    decay = Decay(args.decay, args.rate if args.decay == "exp" else None)
    obj = make_quadratic(args.d, decay, args.ridge, RngStream(args.seed))
    blob = {"schema_version": report.SCHEMA_VERSION, "type": "quadratic",
            "d": args.d, "decay": args.decay, "ridge": args.ridge, "seed": args.seed,
            "derived": {"trace": obj.hessian_trace(None),
                        "lmax": float(obj.hess_eigs[0]),
                        "mu": float(obj.hess_eigs[-1])}}
    if args.decay == "exp":
        blob["rate"] = args.rate
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    report.write_json(out, blob)
    print(f"wrote {out} (trace={blob['derived']['trace']:.6g}, "
          f"lmax={blob['derived']['lmax']:.6g})")
    return 0


def _problem_from_args(args) -> dict:
    if getattr(args, "problem_file", None):
        return {"type": "quadratic_file", "path": args.problem_file}
    if args.config is None:
        raise ConfigError("provide --config or --problem-file")
    cfg = _load_config(args.config)
    if "problem" not in cfg:
        raise ConfigError("config has no 'problem' section")
    return cfg["problem"]


def cmd_spectrum(args) -> int:
    problem = _problem_from_args(args)
    objective, info = resolve_problem(problem)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    d = objective.dim
    if isinstance(objective, QuadraticObjective):
        eigs = np.asarray(objective.hess_eigs, dtype=float)
    else:
        reference_optimum(objective)
        x_star = objective.x_star
        if d > DENSE_EIG_CAP and args.dense:
            raise CapabilityError(
                f"dense eigensolve capped at d={DENSE_EIG_CAP}, problem has d={d}")
        if d > DENSE_EIG_CAP:
            trace = objective.hessian_trace(x_star)
            lmax = power_iteration_sym(
                lambda v: objective.hessian_matvec(x_star, v), d,
                iters=200, tol=1e-12, rng=RngStream(37))
            summary = {"schema_version": report.SCHEMA_VERSION, "problem": info,
                       "trace": trace, "lmax": lmax, "ratio": trace / lmax,
                       "eigenvalues": "omitted (matvec-only summary above desk scale)"}
            report.write_json(out / "spectrum_summary.json", summary)
            print(json.dumps(summary, indent=2, sort_keys=True))
            return 0
        from scipy.special import expit
        m = objective._margins(x_star)
        w = expit(m) * expit(-m)
        Xw = objective.data.X.multiply((w / objective.n)[:, None])
        H = (objective.data.X.T @ Xw).toarray() + objective.ridge * np.eye(d)
        eigs = np.linalg.eigvalsh(H)[::-1]
    trace = float(eigs.sum())
    lmax = float(eigs[0])
    lines = ["index,eigenvalue"]
    lines += [f"{i + 1},{report.fmt_float(float(v))}" for i, v in enumerate(eigs)]
    (out / "spectrum.csv").write_text("\n".join(lines) + "\n")
    summary = {"schema_version": report.SCHEMA_VERSION, "problem": info,
               "trace": trace, "lmax": lmax, "ratio": trace / lmax}
    report.write_json(out / "spectrum_summary.json", summary)
    if args.plot:
        report.plot_spectrum(eigs, out / "spectrum.png", title="Hessian spectrum")
    print(f"spectrum written to {out} (trace={trace:.6g}, lmax={lmax:.6g}, "
          f"ratio={trace / lmax:.4g})")
    return 0


def cmd_trace_check(args) -> int:
    cfg = _load_config(args.config)
    if getattr(args, "problem_file", None):
        cfg["problem"] = {"type": "quadratic_file", "path": args.problem_file}
    objective, info = resolve_problem(cfg["problem"])
    tc = cfg.get("trace_check", {})
    kinds = tc.get("kinds", list(KINDS))
    ells = [int(e) for e in tc.get("ells", [8, 32])]
    n_seeds = int(tc.get("n_seeds", 200))
    eps = float(tc.get("epsilon", 0.5))
    alpha = float(tc.get("alpha", cfg.get("alpha", 0.1)))
    sparsity = int(tc.get("sparsity", 1))
    noise = NoiseSpec(**cfg.get("noise", {"sigma": 0.0}))
    x0 = _resolve_x0(cfg.get("x0"), objective)
    tr_true = objective.hessian_trace(x0)
    base_seed = int(cfg.get("seed", 0))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    results = {}
    for ki, kind in enumerate(kinds):
        results[kind] = {}
        for ell in ells:
            errs = np.empty(n_seeds)
            for i in range(n_seeds):
                spec = SketchSpec(kind, objective.dim, ell,
                                  seed=RngStream(base_seed, 0).derive(ki).derive(ell).derive(i),
                                  sparsity=min(sparsity, ell))
                oracle = CountingOracle(objective, noise)
                tau = trace_estimate(oracle, x0, sample_sketch(spec), alpha)
                errs[i] = abs(tau - tr_true)
            results[kind][str(ell)] = {
                "success_frac": float(np.mean(errs <= eps * abs(tr_true))),
                "mean_rel_err": float(errs.mean() / abs(tr_true))}
    blob = {"schema_version": report.SCHEMA_VERSION, "problem": info,
            "true_trace": tr_true, "epsilon": eps, "alpha": alpha,
            "n_seeds": n_seeds, "results": results}
    report.write_json(out / "trace_check.json", blob)
    if args.plot:
        report.plot_trace_check(results, out / "trace_check.png",
                                title=f"trace concentration (eps={eps})")
    print(json.dumps(blob, indent=2, sort_keys=True))
    return 0


def _apply_overrides(cfg: dict, args) -> dict:
    cfg = dict(cfg)
    if args.out is not None:
        cfg["out"] = args.out
    if args.seed is not None:
        cfg["seeds"] = [args.seed]
    if args.seeds is not None:
        lo, _, hi = args.seeds.partition("..")
        try:
            cfg["seeds"] = list(range(int(lo), int(hi) + 1))
        except ValueError:
            raise ConfigError(f"--seeds expects N..M, got {args.seeds!r}") from None
    if args.budget is not None:
        cfg["budget"] = args.budget
    if args.threads is not None:
        cfg["threads"] = args.threads
    if args.method:
        wanted = set(args.method)
        methods = [m for m in cfg.get("methods", [])
                   if m.get("name", m.get("method")) in wanted]
        missing = wanted - {m.get("name", m.get("method")) for m in methods}
        if missing:
            raise ConfigError(f"--method names not in config: {sorted(missing)}")
        cfg["methods"] = methods
    for m in cfg.get("methods", []):
        if args.sketch is not None and m.get("method", "zo_sketch") != "zo_gd":
            m["sketch"] = args.sketch
        if args.ell is not None and m.get("method", "zo_sketch") != "zo_gd":
            m["ell"] = args.ell
        if args.alpha is not None:
            m["alpha"] = args.alpha
    if not args.plot:
        cfg["plot"] = False
    return cfg


def _print_method_table(summary: dict) -> None:
    thresholds = summary["gap_thresholds"]
    header = ["method"] + [f"queries@{t:g}" for t in thresholds] + ["final gap (median)"]
    rows = []
    for name, entry in summary["methods"].items():
        finals = [s["final_gap"] for s in entry["seeds"].values()
                  if s["final_gap"] is not None]
        med_final = f"{np.median(finals):.3e}" if finals else "-"
        cells = [name]
        for t in thresholds:
            v = entry["queries_to_target_median"][repr(t)]
            cells.append("-" if v is None else f"{v:.0f}")
        cells.append(med_final)
        rows.append(cells)
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
              for i, h in enumerate(header)]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)))


def cmd_run(args) -> int:
    cfg = _apply_overrides(_load_config(args.config), args)
    out, summary = run_experiment(cfg)
    print(f"run artifacts written to {out}")
    _print_method_table(summary)
    return 0


def cmd_compare(args) -> int:
    cfg = _apply_overrides(_load_config(args.config), args)
    out, summary = run_experiment(cfg)
    print(f"comparison artifacts written to {out}")
    _print_method_table(summary)
    return 0


# ----------------------------------------------------------------------
# entry point


def _add_common_run_flags(p):
    p.add_argument("--config", required=True, help="JSON experiment config")
    p.add_argument("--out", default=None, help="output directory (overrides config)")
    p.add_argument("--seed", type=int, default=None, help="single replicate seed")
    p.add_argument("--seeds", default=None, help="replicate seed range N..M")
    p.add_argument("--budget", type=int, default=None, help="query budget override")
    p.add_argument("--method", action="append", default=None,
                   help="restrict to this method name (repeatable)")
    p.add_argument("--sketch", choices=KINDS, default=None,
                   help="sketch kind override for sketched methods")
    p.add_argument("--ell", type=int, default=None, help="sketch size override")
    p.add_argument("--alpha", type=float, default=None, help="smoothing radius override")
    p.add_argument("--threads", type=int, default=None, help="worker threads")
    p.add_argument("--no-plot", dest="plot", action="store_false",
                   help="skip figure rendering")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zosketch",
                                 description="sketched zeroth-order optimization harness")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-quadratic", help="persist a seeded quadratic problem")
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--decay", choices=("exp", "poly_inv", "poly_inv_sqrt"), required=True)
    g.add_argument("--rate", type=float, default=0.95, help="exp decay rate")
    g.add_argument("--ridge", type=float, default=1e-4)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True, help="problem JSON path")
    g.set_defaults(func=cmd_gen_quadratic)

    s = sub.add_parser("spectrum", help="eigenvalue CSV and summary")
    s.add_argument("--config", default=None, help="JSON config with a 'problem' section")
    s.add_argument("--problem-file", default=None, help="gen-quadratic output JSON")
    s.add_argument("--out", default="results/spectrum")
    s.add_argument("--dense", action="store_true",
                   help="force a dense eigensolve (capability error above cap)")
    s.add_argument("--no-plot", dest="plot", action="store_false")
    s.set_defaults(func=cmd_spectrum)

    r = sub.add_parser("run", help="execute configured methods")
    _add_common_run_flags(r)
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("compare", help="run plus cross-method summary table")
    _add_common_run_flags(c)
    c.set_defaults(func=cmd_compare)

    t = sub.add_parser("trace-check", help="trace estimator concentration report")
    t.add_argument("--config", required=True)
    t.add_argument("--problem-file", default=None)
    t.add_argument("--out", default="results/trace_check")
    t.add_argument("--no-plot", dest="plot", action="store_false")
    t.set_defaults(func=cmd_trace_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ConstructionError, CapabilityError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (OSError, ParseError, StateError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except NumericError as e:
        print(f"error: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
