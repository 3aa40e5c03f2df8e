"""Command-line harness: gap sweeps, computational-time scans, scaling
fits, oracle verification, and spectrum traces.

Commands
--------
gap       min-gap sweep over (n, epsilon, q); CSV columns
          model,n,epsilon,q,s_star,g_min
tcomp     computational time per (n, epsilon); CSV columns
          model,driver,schedule,n,epsilon,log2_Tcomp,q_star
scaling   per-epsilon exponent fits of log2 T_comp vs n; JSON
verify    reduction-vs-brute-force check over the whole model zoo (n <= 10)
spectrum  excitation energies E_l - E_0 along s; CSV columns s,de1..de_m

Model names: grover-plain-grv, grover-plain-std, grover-noise-std,
grover-noise-grv, tunneling, multi-solution, m-level.

Configs are flat ``key = value`` files (# comments allowed) holding the
same keys as the flags plus the model keys: model, n, epsilon, q,
target_scale, barriers (comma reals), targets (comma bit strings, or
``random:P`` for P seeded random targets), energies, degeneracies.
Command-line flags override config values.  All numeric output is written
with 17 significant digits; output files are written atomically.

Exit codes: 0 success, 1 verification/fit failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from multiprocessing import Pool

import numpy as np

from . import annealing, models, oracle

WORKERS_ENV = "AQOGAP_WORKERS"

_NOISE_MODELS = ("grover-noise-std", "grover-noise-grv")


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _driver_of(model_name: str) -> str:
    return "grover" if model_name.endswith("grv") or model_name == "m-level" else "standard"


# ---------------------------------------------------------------------------
# config handling


def read_config(path: str) -> dict:
    cfg = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, value = line.split("=", 1)
            cfg[key.strip()] = value.strip()
    return cfg


def _merged_config(args) -> dict:
    cfg = read_config(args.config) if args.config else {}
    for key in ("model", "epsilon", "q", "target_scale", "barriers", "targets",
                "energies", "degeneracies", "n_min", "n_max", "n_step",
                "schedule", "s_points", "levels", "seed", "workers", "out"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return cfg


def _build_spec(cfg: dict, n: int, epsilon: float, q: int, seed: int):
    """Model instance for one sweep point; fills in seeded randomness for
    tunneling barriers and multi-solution targets when not configured."""
    name = cfg["model"]
    local = dict(cfg)
    local["n"] = str(n)
    if name in _NOISE_MODELS:
        local["epsilon"] = repr(epsilon)
        local["q"] = str(q)
    if name == "tunneling" and "barriers" not in local:
        rng = np.random.default_rng([seed, n])
        local["barriers"] = ",".join(repr(float(v)) for v in rng.uniform(0.5, 2.5, n))
    if name == "multi-solution":
        raw = str(local.get("targets", "random:2"))
        if raw.startswith("random:"):
            p = int(raw.split(":", 1)[1])
            rng = np.random.default_rng([seed, n])
            targets = rng.choice(2**n, size=p, replace=False)
            local["targets"] = ",".join(format(int(t), f"0{n}b") for t in targets)
    return models.spec_from_config(local)


def _n_values(cfg: dict) -> list:
    n_min = int(cfg.get("n_min", 4))
    n_max = int(cfg.get("n_max", n_min))
    n_step = int(cfg.get("n_step", 1))
    if n_step < 1:
        raise ValueError("n_step must be >= 1")
    # an empty range is allowed: sweep commands emit a header-only file
    return list(range(n_min, n_max + 1, n_step))


def _epsilon_values(cfg: dict) -> list:
    raw = str(cfg.get("epsilon", "0"))
    vals = [float(x) for x in raw.split(",") if x.strip()]
    if not vals:
        raise ValueError("empty epsilon list")
    return vals


def _q_values(cfg: dict, n: int) -> list:
    raw = str(cfg.get("q", "0")).strip()
    if raw == "scan":
        return list(range(0, n + 1))
    return [int(raw)]


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(prefix=".aqogap-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(path, text: str) -> None:
    if path:
        _atomic_write(path, text)
    else:
        sys.stdout.write(text)


def _pool_map(fn, tasks, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with Pool(processes=workers) as pool:
        return pool.map(fn, tasks)


def _workers(cfg: dict) -> int:
    if "workers" in cfg:
        return max(1, int(cfg["workers"]))
    return max(1, int(os.environ.get(WORKERS_ENV, "1")))


# ---------------------------------------------------------------------------
# gap command


def _gap_task(task):
    spec, s_points = task
    prof = annealing.gap_profile(spec, coarse_points=s_points)
    return prof.s_star, prof.g_min


def cmd_gap(args) -> int:
    cfg = _merged_config(args)
    if "model" not in cfg:
        raise ValueError("gap requires a model (flag --model or config)")
    name = cfg["model"]
    seed = int(cfg.get("seed", 0))
    s_points = max(16, int(cfg.get("s_points", 257)))
    feasible_only = bool(getattr(args, "feasible_only", False))
    rows = []
    tasks = []
    for n in _n_values(cfg):
        eps_list = _epsilon_values(cfg) if name in _NOISE_MODELS else [None]
        for eps in eps_list:
            q_list = _q_values(cfg, n) if name in _NOISE_MODELS else [None]
            for q in q_list:
                if feasible_only and eps is not None:
                    if eps > 0 and not (q < annealing.q_epsilon(n, eps)):
                        continue
                spec = _build_spec(cfg, n, eps or 0.0, q or 0, seed)
                rows.append((name, n, eps, q))
                tasks.append((spec, s_points))
    results = _pool_map(_gap_task, tasks, _workers(cfg))
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["model", "n", "epsilon", "q", "s_star", "g_min"])
    for (name_, n, eps, q), (s_star, g_min) in zip(rows, results):
        writer.writerow([name_, n, "" if eps is None else _fmt(eps),
                         "" if q is None else q, _fmt(s_star), _fmt(g_min)])
    _emit(cfg.get("out"), buf.getvalue())
    return 0


# ---------------------------------------------------------------------------
# tcomp command


def _log2_t_ann(spec, schedule: str, s_points: int) -> float:
    if schedule == "grover-override":
        return annealing.log2_t_ann_grover_override(spec.n)
    profile = annealing.gap_profile(spec, coarse_points=s_points)
    if schedule == "linear":
        t = annealing.t_ann_linear(profile)
        return math.inf if t == math.inf else math.log2(t)
    try:
        return math.log2(annealing.t_ann_optimal(spec, profile=profile))
    except ValueError:
        # non-integrable gap (e.g. boundary-degenerate q = n/(2 eps)):
        # this q never finishes a run, so it drops out of the minimization
        return math.inf


def _tcomp_task(task):
    cfg, n, eps, schedule, s_points, seed = task
    name = cfg["model"]
    if name in _NOISE_MODELS:
        if schedule == "grover-override":
            log2_by_q = lambda q: annealing.log2_t_ann_grover_override(n)
        else:
            cache = {}

            def log2_by_q(q):
                if q not in cache:
                    cache[q] = _log2_t_ann(_build_spec(cfg, n, eps, q, seed),
                                           schedule, s_points)
                return cache[q]

        res = annealing.t_comp(n, eps, log2_by_q, schedule=schedule)
    else:
        spec = _build_spec(cfg, n, 0.0, 0, seed)
        res = annealing.t_comp(n, 0.0, lambda q: _log2_t_ann(spec, schedule, s_points),
                               schedule=schedule)
    return res.log2_t_comp, res.q_star


def cmd_tcomp(args) -> int:
    cfg = _merged_config(args)
    if "model" not in cfg:
        raise ValueError("tcomp requires a model (flag --model or config)")
    name = cfg["model"]
    schedule = cfg.get("schedule", "optimal")
    if schedule not in ("linear", "optimal", "grover-override"):
        raise ValueError(f"unknown schedule {schedule!r}")
    seed = int(cfg.get("seed", 0))
    s_points = max(16, int(cfg.get("s_points", 257)))
    keys = []
    tasks = []
    for n in _n_values(cfg):
        eps_list = _epsilon_values(cfg) if name in _NOISE_MODELS else [0.0]
        for eps in eps_list:
            keys.append((name, n, eps))
            tasks.append((cfg, n, eps, schedule, s_points, seed))
    results = _pool_map(_tcomp_task, tasks, _workers(cfg))
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["model", "driver", "schedule", "n", "epsilon",
                     "log2_Tcomp", "q_star"])
    for (name_, n, eps), (log2t, q_star) in zip(keys, results):
        writer.writerow([name_, _driver_of(name_), schedule, n, _fmt(eps),
                         _fmt(log2t), q_star])
    _emit(cfg.get("out"), buf.getvalue())
    return 0


# ---------------------------------------------------------------------------
# scaling command


def cmd_scaling(args) -> int:
    cfg = _merged_config(args)
    if "model" not in cfg:
        raise ValueError("scaling requires a model (flag --model or config)")
    name = cfg["model"]
    schedule = cfg.get("schedule", "grover-override")
    seed = int(cfg.get("seed", 0))
    s_points = max(16, int(cfg.get("s_points", 257)))
    n_values = _n_values(cfg)
    entries = []
    for eps in _epsilon_values(cfg):
        tasks = [(cfg, n, eps if name in _NOISE_MODELS else 0.0, schedule,
                  s_points, seed) for n in n_values]
        results = _pool_map(_tcomp_task, tasks, _workers(cfg))
        points = [(n, log2t) for n, (log2t, _) in zip(n_values, results)]
        try:
            fit = annealing.fit_exponent(points)
        except ValueError as exc:
            print(f"scaling fit failed for epsilon={eps}: {exc}", file=sys.stderr)
            return 1
        entries.append({
            "epsilon": eps,
            "slope": fit.slope,
            "intercept": fit.intercept,
            "max_residual": fit.max_residual,
            "n_range": list(fit.n_range),
            "analytic": annealing.analytic_scaling(eps) if eps > 0 else 0.5,
            "points": [[int(n), y] for n, y in points],
        })
    doc = {"model": name, "driver": _driver_of(name), "schedule": schedule,
           "seed": seed, "fits": entries}
    _emit(cfg.get("out"), json.dumps(doc, indent=2) + "\n")
    return 0


# ---------------------------------------------------------------------------
# verify command


def cmd_verify(args) -> int:
    cfg = _merged_config(args)
    n_min = int(cfg.get("n_min", 3))
    n_max = int(cfg.get("n_max", 10))
    if n_max > oracle.MAX_ORACLE_QUBITS:
        raise ValueError(f"verify is capped at n <= {oracle.MAX_ORACLE_QUBITS}")
    draws = int(cfg.get("draws", getattr(args, "draws", None) or 20))
    s_count = int(cfg.get("s_points", 11))
    seed = int(cfg.get("seed", 0))
    tol = float(cfg.get("tolerance", getattr(args, "tolerance", None) or 1e-9))
    report = oracle.run_verification(
        n_values=range(n_min, n_max + 1), draws=draws,
        s_values=np.linspace(0.0, 1.0, s_count), seed=seed, tol=tol,
        workers=_workers(cfg))
    print(f"oracle verification: seed={report.seed} cases={report.cases} "
          f"tolerance={report.tolerance:g}")
    for kind, dev in sorted(report.max_deviation.items()):
        print(f"  {kind:18s} max deviation {dev:.3e}")
    if report.failures:
        print(f"FAILED: {len(report.failures)} case(s) above tolerance")
        for kind, n, s, spec, dev in report.failures[:20]:
            print(f"  {kind} n={n} s={s:g} dev={dev:.3e} spec={spec}")
        return 1
    print("PASS: all reconstructed spectra match the brute-force oracle")
    return 0


# ---------------------------------------------------------------------------
# spectrum command


def _spectrum_task(task):
    spec, s, count = task
    from . import reduction

    decomp, weights = models.build(spec, s)
    eff = reduction.assemble_effective(decomp, weights)
    recon = reduction.reconstruct_full_spectrum(decomp, eff)
    vals = recon.lowest(count)
    return [float(v) for v in vals]


def cmd_spectrum(args) -> int:
    cfg = _merged_config(args)
    if "model" not in cfg:
        raise ValueError("spectrum requires a model (flag --model or config)")
    seed = int(cfg.get("seed", 0))
    n_values = _n_values(cfg)
    if not n_values:
        raise ValueError("spectrum needs a non-empty n range")
    n = n_values[0]
    eps = _epsilon_values(cfg)[0]
    q = _q_values(cfg, n)[0]
    levels = max(1, int(cfg.get("levels", 5)))
    spec = _build_spec(cfg, n, eps, q, seed)
    dim = models.reduced_dimension(spec)
    if levels > dim - 1:
        print(f"warning: clipping levels from {levels} to {dim - 1}", file=sys.stderr)
        levels = max(1, dim - 1)
    s_count = max(2, int(cfg.get("s_points", 101)))
    s_grid = np.linspace(0.0, 1.0, s_count)
    tasks = [(spec, float(s), levels + 1) for s in s_grid]
    results = _pool_map(_spectrum_task, tasks, _workers(cfg))
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["s"] + [f"de{l}" for l in range(1, levels + 1)])
    for s, vals in zip(s_grid, results):
        row = [_fmt(s)] + [_fmt(v - vals[0]) for v in vals[1:levels + 1]]
        writer.writerow(row)
    _emit(cfg.get("out"), buf.getvalue())
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--model", help="model name (see command help)")
    p.add_argument("--n-min", dest="n_min", type=int, help="smallest n")
    p.add_argument("--n-max", dest="n_max", type=int, help="largest n")
    p.add_argument("--n-step", dest="n_step", type=int, help="n stride")
    p.add_argument("--epsilon", help="comma-separated disorder strengths")
    p.add_argument("--q", help="rotated-target weight: integer or 'scan'")
    p.add_argument("--target-scale", dest="target_scale",
                   help="target energy scale (default: n for noisy, 1 for plain)")
    p.add_argument("--barriers", help="comma-separated tunneling barriers")
    p.add_argument("--targets",
                   help="comma-separated bit strings, or random:P for P seeded targets")
    p.add_argument("--energies", help="comma-separated m-level energies")
    p.add_argument("--degeneracies", help="comma-separated m-level degeneracies")
    p.add_argument("--schedule", choices=["linear", "optimal", "grover-override"],
                   help="annealing schedule for timing commands")
    p.add_argument("--s-points", dest="s_points", type=int,
                   help="coarse s-grid size (gap) / trace points (spectrum)")
    p.add_argument("--levels", type=int, help="excited levels for spectrum")
    p.add_argument("--seed", type=int, help="seed for randomized parameters")
    p.add_argument("--workers", type=int,
                   help=f"worker processes (default ${WORKERS_ENV} or 1)")
    p.add_argument("--out", help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aqogap",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gap = sub.add_parser("gap", help="minimum-gap sweep (CSV)")
    _add_common(p_gap)
    p_gap.add_argument("--feasible-only", action="store_true",
                       help="emit only rows with q < q_epsilon")
    p_gap.set_defaults(func=cmd_gap)

    p_tcomp = sub.add_parser("tcomp", help="computational time scan (CSV)")
    _add_common(p_tcomp)
    p_tcomp.set_defaults(func=cmd_tcomp)

    p_scaling = sub.add_parser("scaling", help="exponent fits per epsilon (JSON)")
    _add_common(p_scaling)
    p_scaling.set_defaults(func=cmd_scaling)

    p_verify = sub.add_parser("verify", help="brute-force oracle check (n <= 10)")
    _add_common(p_verify)
    p_verify.add_argument("--draws", type=int, help="random draws per (model, n)")
    p_verify.add_argument("--tolerance", type=float, help="multiset tolerance")
    p_verify.set_defaults(func=cmd_verify)

    p_spec = sub.add_parser("spectrum", help="excitation energies along s (CSV)")
    _add_common(p_spec)
    p_spec.set_defaults(func=cmd_spectrum)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
