"""Experiment harness: one binary, a subcommand per experiment, flat
``key = value`` config files, per-trial CSV output, and static SVG rendering.

Universal flags ``--seed``, ``--trials``, ``--jobs`` (and ``--out``,
``--set key=value``) override config-file keys.  Exit codes: 0 success,
1 numerical degradation (> 1% failed trials; partial results are kept),
2 usage or configuration error.

Trials are distributed over a process pool and each trial reseeds from
(master seed, trial index) only, so results are independent of worker
count and rows are reproducible run to run; rows are sorted by trial
index before writing.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path

import numpy as np

from . import dbm, tails
from .config import (cfg_bool, cfg_complex, cfg_float, cfg_floats, cfg_int,
                     cfg_str, load_config)
from .ensembles import EntryDistribution, sample_iid
from .errors import ConfigurationError, InvalidParameterError, NumericalFailureError
from .ginibre import (gumbel_limit_cdf, kernel_diag, linstat_mean, linstat_var,
                      radius_law)
from .girko import QuadratureSpec, girko_lhs, girko_rhs, make_test_function
from .hermitization import singular_spectrum
from .mde import (boundary_m, density_profile, gap_edge, solve_mde,
                  stability_sigma, total_mass)
from .records import TrialRecord, read_records, write_records
from .scales import edge_center, gamma_n
from .seeding import trial_seed
from .stats import ks_statistic, pearson_corr, wilson_interval

_CONFIG_ERRORS = (ConfigurationError, InvalidParameterError)
_TRIAL_ERRORS = (NumericalFailureError, FloatingPointError, np.linalg.LinAlgError)


# --------------------------------------------------------------------------
# Config resolution
# --------------------------------------------------------------------------

DEFAULTS: dict[str, dict] = {
    "radius-mc": dict(n=256, trials=4000, ensemble="complex-gaussian", seed=0),
    "kostlan": dict(n=100000, tmin=-2.0, tmax=3.0, points=51),
    "girko-check": dict(n=50, seed=48, ensemble="complex-gaussian",
                        kind="annulus-f1", L=1.05, l=0.02,
                        radial_nodes=16, angular_nodes=384,
                        refine_tol=5e-3, max_refine=1),
    "kernel": dict(ns="10000,1000000", x=0.0),
    "mde-scan": dict(z="1.05", eta=1e-3, emax=2.0, points=101),
    "tail": dict(n=200, delta=0.0, thresholds="0.5,1.0", trials=20000,
                 ensemble="complex-gaussian", seed=0, scaled=True,
                 allow_large_y=False),
    "dbm-decorrelation": dict(n=256, sep=1.0, delta=0.0, threshold=0.0,
                              eta_tilde=0.0, trials=400, t1=0.0,
                              ensemble="complex-gaussian", seed=0),
    "coupling": dict(n=128, sep=1.0, omega1=0.1, k=2, trials=200,
                     particle_steps=1024, seed=0),
    "linstat": dict(n=256, trials=2000, kind="annulus-f1", L=0.0, l=0.0,
                    cn=0.0, ensemble="complex-gaussian", seed=0),
}


def _resolve(args) -> dict:
    name = args.command
    cfg = dict(DEFAULTS[name])
    allowed = set(cfg) | {"out", "experiment"}
    if args.config:
        file_cfg = load_config(args.config)
        exp = file_cfg.get("experiment")
        if exp is not None and exp != name:
            raise ConfigurationError(
                f"config file is for experiment {exp!r}, not {name!r}")
        cfg.update(file_cfg)
    for item in args.set or []:
        if "=" not in item:
            raise ConfigurationError(f"--set expects key=value, got {item!r}")
        key, _, value = item.partition("=")
        cfg[key.strip()] = value.strip()
    unknown = set(cfg) - allowed
    if unknown:
        raise ConfigurationError(
            f"unknown config keys for {name}: {', '.join(sorted(unknown))}")
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.trials is not None:
        cfg["trials"] = args.trials
    if args.out is not None:
        cfg["out"] = args.out
    return cfg


def _out_path(cfg: dict, name: str) -> Path:
    if "out" in cfg and str(cfg["out"]):
        return Path(str(cfg["out"]))
    base = os.environ.get("SPECRAD_OUTDIR", ".")
    return Path(base) / f"{name}.csv"


# --------------------------------------------------------------------------
# Per-trial work (top level, picklable)
# --------------------------------------------------------------------------

def _trial_radius(cfg: dict, i: int) -> dict:
    n = cfg_int(cfg, "n")
    dist = EntryDistribution(cfg_str(cfg, "ensemble"))
    X = sample_iid(n, dist, seed=trial_seed(cfg_int(cfg, "seed"), i))
    return {"rho": float(np.abs(np.linalg.eigvals(X.entries)).max())}


def _trial_tail(cfg: dict, i: int) -> dict:
    lib = dict(n=cfg_int(cfg, "n"), delta=cfg_float(cfg, "delta"),
               seed=cfg_int(cfg, "seed"), ensemble=cfg_str(cfg, "ensemble"))
    return {"lam1": tails.tail_trial(lib, i)}


def _decor_libcfg(cfg: dict) -> dict:
    n = cfg_int(cfg, "n")
    sep = cfg_float(cfg, "sep")
    delta = cfg_float(cfg, "delta") or 2.0 / math.sqrt(n)
    radius = math.sqrt(1.0 + delta)
    if sep > 2.0 * radius:
        raise ConfigurationError(f"sep={sep} exceeds the diameter at delta={delta:.4g}")
    half = math.asin(sep / (2.0 * radius))
    return dict(n=n,
                z1=radius * complex(math.cos(half), math.sin(half)),
                z2=radius * complex(math.cos(half), -math.sin(half)),
                threshold=cfg_float(cfg, "threshold") or n ** -0.75,
                eta_tilde=cfg_float(cfg, "eta_tilde") or n ** -0.8,
                trials=cfg_int(cfg, "trials"), seed=cfg_int(cfg, "seed"),
                t1=cfg_float(cfg, "t1"), ensemble=cfg_str(cfg, "ensemble"))


def _trial_decor(cfg: dict, i: int) -> dict:
    lam_a, lam_b, img_a, img_b = dbm.decorrelation_trial(_decor_libcfg(cfg), i)
    return {"lam1_a": lam_a, "lam1_b": lam_b, "img_a": img_a, "img_b": img_b}


def _coupling_geometry(cfg: dict) -> tuple:
    sep = cfg_float(cfg, "sep")
    if not 0.0 < sep <= 2.0:
        raise ConfigurationError(f"sep={sep} must be in (0, 2] on the unit circle")
    half = math.asin(sep / 2.0)
    return (complex(math.cos(half), math.sin(half)),
            complex(math.cos(half), -math.sin(half)))


def _trial_coupling(cfg: dict, i: int) -> dict:
    n = cfg_int(cfg, "n")
    z1, z2 = _coupling_geometry(cfg)
    t1 = n ** (-0.5 + cfg_float(cfg, "omega1"))
    res = dbm.coupling_run(n, z1, z2, t1, seed=trial_seed(cfg_int(cfg, "seed"), i),
                           k=cfg_int(cfg, "k"),
                           particle_steps=cfg_int(cfg, "particle_steps"))
    out = {"max_distance": res.max_distance,
           "reflections": res.reflections, "rejections": res.rejections}
    for li in range(res.distances.shape[0]):
        for ki in range(res.distances.shape[1]):
            out[f"dist_{li + 1}_{ki + 1}"] = float(res.distances[li, ki])
    return out


def _linstat_f(cfg: dict):
    kwargs = {}
    for key in ("L", "l", "cn"):
        val = cfg_float(cfg, key)
        if val:
            kwargs[key] = val
    return make_test_function(cfg_str(cfg, "kind"), cfg_int(cfg, "n"), **kwargs)


def _trial_linstat(cfg: dict, i: int) -> dict:
    f = _linstat_f(cfg)
    dist = EntryDistribution(cfg_str(cfg, "ensemble"))
    X = sample_iid(cfg_int(cfg, "n"), dist, seed=trial_seed(cfg_int(cfg, "seed"), i))
    return {"value": girko_lhs(X, f)}


_TRIAL_FNS = {
    "radius-mc": _trial_radius,
    "tail": _trial_tail,
    "dbm-decorrelation": _trial_decor,
    "coupling": _trial_coupling,
    "linstat": _trial_linstat,
}


def _pool_trial(payload: tuple) -> TrialRecord:
    name, cfg, i = payload
    seed = trial_seed(cfg_int(cfg, "seed", 0), i)
    try:
        values = _TRIAL_FNS[name](cfg, i)
        return TrialRecord(name, i, seed, values)
    except _TRIAL_ERRORS as exc:
        return TrialRecord(name, i, seed, {}, failed=True,
                           failure_reason=f"{type(exc).__name__}: {exc}")


def _run_trials(name: str, cfg: dict, trials: int, jobs: int) -> list:
    payloads = [(name, cfg, i) for i in range(trials)]
    if jobs <= 1:
        return [_pool_trial(p) for p in payloads]
    records: list = [None] * trials
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = {pool.submit(_pool_trial, p): p[2] for p in payloads}
        for fut in as_completed(futures):
            records[futures[fut]] = fut.result()
    return records


def _finish(name: str, cfg: dict, records: list, lines: list) -> int:
    path = _out_path(cfg, name)
    write_records(path, records)
    for line in lines:
        print(line)
    failed = sum(r.failed for r in records)
    print(f"wrote {len(records)} rows to {path}" +
          (f" ({failed} failed trials)" if failed else ""))
    if records and failed > 0.01 * len(records):
        print(f"warning: {failed}/{len(records)} trials failed numerically",
              file=sys.stderr)
        return 1
    return 0


def _col(records: list, key: str) -> np.ndarray:
    return np.array([r.values[key] for r in records if not r.failed], dtype=float)


# --------------------------------------------------------------------------
# Experiment handlers
# --------------------------------------------------------------------------

def _run_radius_mc(cfg: dict, jobs: int) -> int:
    n = cfg_int(cfg, "n")
    records = _run_trials("radius-mc", cfg, cfg_int(cfg, "trials"), jobs)
    rhos = _col(records, "rho")
    law = radius_law(n)
    ks = ks_statistic(rhos, law.cdf)
    center = (f"predicted center 1+sqrt(gamma/4n) = {edge_center(n):.6f}"
              if math.isfinite(law.gamma) and law.gamma > 0 else
              "(edge scales undefined at this n)")
    lines = [
        f"radius-mc: n={n}, trials={rhos.size}",
        f"  empirical mean rho = {rhos.mean():.6f}   " + center,
        f"  KS distance vs exact radius law = {ks:.4f}",
    ]
    return _finish("radius-mc", cfg, records, lines)


def _run_kostlan(cfg: dict, jobs: int) -> int:
    n = cfg_int(cfg, "n")
    ts = np.linspace(cfg_float(cfg, "tmin"), cfg_float(cfg, "tmax"),
                     cfg_int(cfg, "points"))
    law = radius_law(n)
    records, rows = [], []
    for i, t in enumerate(ts):
        exact = float(law.gumbel_cdf(float(t)))
        limit = float(gumbel_limit_cdf(float(t)))
        rows.append((t, exact, limit))
        records.append(TrialRecord("kostlan", i, 0, {
            "t": float(t), "exact_cdf": exact, "gumbel_cdf": limit,
            "diff": exact - limit}))
    sup = max(abs(e - g) for _, e, g in rows)
    lines = [f"kostlan: n={n} ({'windowed' if law.windowed else 'exact'} product)",
             f"  {'t':>8} {'P(G_n<=t)':>12} {'exp(-e^-t)':>12}"]
    step = max(1, len(rows) // 10)
    for t, e, g in rows[::step]:
        lines.append(f"  {t:8.3f} {e:12.6f} {g:12.6f}")
    lines.append(f"  sup |exact - limit| over grid = {sup:.4f}")
    return _finish("kostlan", cfg, records, lines)


def _run_girko_check(cfg: dict, jobs: int) -> int:
    n = cfg_int(cfg, "n")
    dist = EntryDistribution(cfg_str(cfg, "ensemble"))
    X = sample_iid(n, dist, seed=cfg_int(cfg, "seed"))
    f = make_test_function(cfg_str(cfg, "kind"), n,
                           L=cfg_float(cfg, "L"), l=cfg_float(cfg, "l"))
    quad = QuadratureSpec(radial_nodes=cfg_int(cfg, "radial_nodes"),
                          angular_nodes=cfg_int(cfg, "angular_nodes"),
                          refine_tol=cfg_float(cfg, "refine_tol"),
                          max_refine=cfg_int(cfg, "max_refine"))
    est = girko_rhs(X, f, form="logdet", quad=quad)
    diff = abs(est.lhs - est.rhs_logdet)
    tol = 1e-2 * max(1.0, abs(est.lhs))
    records = [TrialRecord("girko-check", 0, cfg_int(cfg, "seed"), {
        "lhs": est.lhs, "rhs_logdet": est.rhs_logdet, "abs_diff": diff,
        "quad_error": est.quad_error, "quad_nodes": est.nodes,
        "clamped": est.clamped})]
    lines = [
        f"girko-check: n={n}, seed={cfg_int(cfg, 'seed')}",
        f"  lhs (spectral sum)      = {est.lhs:.10f}",
        f"  rhs (log-det average)   = {est.rhs_logdet:.10f}",
        f"  |lhs - rhs| = {diff:.3e}   tolerance {tol:.3e}   "
        f"{'OK' if diff <= tol else 'EXCEEDED'}",
        f"  quadrature nodes = {est.nodes}, clamped eigenvalues = {est.clamped}",
    ]
    return _finish("girko-check", cfg, records, lines)


def _run_kernel(cfg: dict, jobs: int) -> int:
    ns = [int(v) for v in cfg_floats(cfg, "ns")]
    x = cfg_float(cfg, "x")
    records = []
    lines = ["kernel: edge-rescaled one-point function vs sqrt(n gamma)/pi "
             f"at offset x={x:g}"]
    prev = None
    for i, n in enumerate(ns):
        g = gamma_n(n)
        r = edge_center(n) + x / math.sqrt(4.0 * n * g)
        val = kernel_diag(n, complex(r)).value.real
        target = math.sqrt(n * g) / math.pi
        ratio = val / target
        bound = 3.0 * math.log(math.log(n)) / math.log(n)
        records.append(TrialRecord("kernel", i, 0, {
            "n": n, "radius": r, "kernel": val, "target": target,
            "ratio": ratio, "rel_err": abs(ratio - 1.0), "bound": bound}))
        lines.append(f"  n={n:>9}  pi*K/sqrt(n gamma) = {ratio:.4f}   "
                     f"rel err {abs(ratio - 1.0):.4f}  (bound {bound:.4f})"
                     + ("  decreasing" if prev is not None and
                        abs(ratio - 1.0) < prev else ""))
        prev = abs(ratio - 1.0)
    return _finish("kernel", cfg, records, lines)


def _run_mde_scan(cfg: dict, jobs: int) -> int:
    z = cfg_complex(cfg, "z")
    eta = cfg_float(cfg, "eta")
    emax = cfg_float(cfg, "emax")
    points = cfg_int(cfg, "points")
    prof = density_profile(z, emax, points)
    records = []
    for i, E in enumerate(prof.grid):
        sol = solve_mde(z, complex(float(E), eta))
        records.append(TrialRecord("mde-scan", i, 0, {
            "E": float(E), "rho_boundary": float(prof.rho[i]),
            "rho_eta": sol.rho, "sigma": stability_sigma(sol),
            "residual": sol.residual}))
    lines = [f"mde-scan: z={z}, eta={eta:g}, grid |E| <= {emax}",
             f"  density mass = {total_mass(z):.8f}",
             f"  rho(0) = {float(boundary_m(z, 0.0).rho):.6f}"]
    if abs(z) > 1.0:
        lines.append(f"  spectral gap edge = {gap_edge(z):.6f}")
    return _finish("mde-scan", cfg, records, lines)


def _run_tail(cfg: dict, jobs: int) -> int:
    lib = dict(n=cfg_int(cfg, "n"),
               delta=cfg_float(cfg, "delta") or 2.0 / math.sqrt(cfg_int(cfg, "n")),
               thresholds=cfg_floats(cfg, "thresholds"),
               trials=cfg_int(cfg, "trials"), seed=cfg_int(cfg, "seed"),
               ensemble=cfg_str(cfg, "ensemble"),
               scaled=cfg_bool(cfg, "scaled"),
               allow_large_y=cfg_bool(cfg, "allow_large_y"))
    tails.tail_validate(lib)
    cfg = dict(cfg, delta=lib["delta"])
    records = _run_trials("tail", cfg, lib["trials"], jobs)
    exp = tails.tail_from_samples(lib, _col(records, "lam1"))
    lines = [f"tail: n={exp.n}, delta={exp.delta:.5f} "
             f"(n delta^2 = {exp.n * exp.delta ** 2:.2f}), {exp.trials} trials",
             f"  {'threshold':>10} {'count':>7} {'p_hat':>9} {'wilson 95%':>22}"]
    for j, y in enumerate(exp.thresholds):
        lo, hi = exp.intervals[j]
        lines.append(f"  {y:10.4f} {int(exp.counts[j]):7d} {exp.estimates[j]:9.5f}"
                     f"   [{lo:.5f}, {hi:.5f}]")
    if exp.thresholds.size >= 2 and exp.estimates[0] > 0:
        lines.append(f"  ratio p({exp.thresholds[-1]:g})/p({exp.thresholds[0]:g})"
                     f" = {exp.estimates[-1] / exp.estimates[0]:.3f}")
    return _finish("tail", cfg, records, lines)


def _run_decorrelation(cfg: dict, jobs: int) -> int:
    lib = _decor_libcfg(cfg)
    records = _run_trials("dbm-decorrelation", cfg, lib["trials"], jobs)
    samples = [(r.values["lam1_a"], r.values["lam1_b"],
                r.values["img_a"], r.values["img_b"])
               for r in records if not r.failed]
    st = dbm.decorrelation_stats(lib, samples)
    m1, m2 = st.marginal_tails
    corr = pearson_corr(_col(records, "lam1_a"), _col(records, "lam1_b"))
    denom = math.sqrt(st.trace_vars[0] * st.trace_vars[1])
    lines = [
        f"dbm-decorrelation: n={lib['n']}, |z1-z2|={abs(st.z1 - st.z2):.4f}, "
        f"threshold={lib['threshold']:.5f}, eta_tilde={lib['eta_tilde']:.5f}, "
        f"{st.trials} trials",
        f"  marginal tails = {m1:.5f}, {m2:.5f}   "
        f"joint = {st.joint_tail:.5f} in [{st.joint_interval[0]:.5f}, "
        f"{st.joint_interval[1]:.5f}]",
        f"  factorized bound 3*m1*m2 = {3.0 * m1 * m2:.5f}",
        f"  corr(lambda_1) = {corr:+.4f}",
        f"  trace cov = {st.trace_cov:+.3e} +- {st.trace_cov_se:.1e}   "
        f"normalized = {st.trace_cov / denom if denom > 0 else float('nan'):+.4f}",
    ]
    return _finish("dbm-decorrelation", cfg, records, lines)


def _run_coupling(cfg: dict, jobs: int) -> int:
    n = cfg_int(cfg, "n")
    _coupling_geometry(cfg)
    records = _run_trials("coupling", cfg, cfg_int(cfg, "trials"), jobs)
    dists = _col(records, "max_distance")
    med = float(np.median(dists))
    target = n ** -0.75
    lines = [
        f"coupling: n={n}, sep={cfg_float(cfg, 'sep')}, "
        f"t1=n^(-1/2+{cfg_float(cfg, 'omega1')}), {dists.size} trials",
        f"  median max coupling distance = {med:.5f}   "
        f"reference n^(-3/4) = {target:.5f}   "
        f"{'OK' if med <= target else 'ABOVE'}",
        f"  reflections = {int(_col(records, 'reflections').sum())}, "
        f"rejected steps = {int(_col(records, 'rejections').sum())}",
    ]
    return _finish("coupling", cfg, records, lines)


def _run_linstat(cfg: dict, jobs: int) -> int:
    n = cfg_int(cfg, "n")
    f = _linstat_f(cfg)
    mean0 = linstat_mean(n, f)
    lv = linstat_var(n, f)
    lines = [f"linstat: n={n}, kind={cfg_str(cfg, 'kind')}",
             f"  oracle mean = {mean0:.6f}   oracle var = {lv.var:.6f}   "
             f"Var/Mean^2 = {lv.var / mean0 ** 2 if mean0 else float('nan'):.5e}"]
    trials = cfg_int(cfg, "trials")
    records = _run_trials("linstat", cfg, trials, jobs) if trials > 0 else []
    if records:
        vals = _col(records, "value")
        se = vals.std(ddof=1) / math.sqrt(vals.size)
        lines += [f"  MC mean = {vals.mean():.6f} +- {se:.6f}  "
                  f"({abs(vals.mean() - mean0) / se:.2f} SE from oracle)",
                  f"  MC var  = {vals.var(ddof=1):.6f}"]
    return _finish("linstat", cfg, records, lines)


_HANDLERS = {
    "radius-mc": _run_radius_mc,
    "kostlan": _run_kostlan,
    "girko-check": _run_girko_check,
    "kernel": _run_kernel,
    "mde-scan": _run_mde_scan,
    "tail": _run_tail,
    "dbm-decorrelation": _run_decorrelation,
    "coupling": _run_coupling,
    "linstat": _run_linstat,
}


# --------------------------------------------------------------------------
# render
# --------------------------------------------------------------------------

def _run_render(args) -> int:
    from . import plots

    header, rows = read_records(args.csv)
    if not rows:
        raise ConfigurationError(f"CSV has no data rows: {args.csv}")
    need = [args.x] + ([args.y] if args.plot == "loglog" else [])
    missing = [c for c in need if c not in header]
    if missing:
        raise ConfigurationError(
            f"CSV is missing columns: {', '.join(missing)} (has {', '.join(header)})")
    keep = [r for r in rows if r.get("failed", "0") not in ("1", "True", "true")]
    xs = np.array([float(r[args.x]) for r in keep])
    xs = xs[np.isfinite(xs)]
    out = Path(args.out) if args.out else Path(args.csv).with_suffix(f".{args.plot}.svg")
    if args.plot == "histogram":
        plots.histogram(xs, out, xlabel=args.x, title=args.title)
    elif args.plot == "cdf-overlay":
        ref, label = None, ""
        if args.ref == "kostlan":
            if args.n is None:
                raise ConfigurationError("--ref kostlan needs --n")
            law = radius_law(args.n)
            ref, label = law.cdf, f"radius law n={args.n}"
        elif args.ref == "gumbel":
            ref, label = gumbel_limit_cdf, "Gumbel limit"
        plots.cdf_overlay(xs, out, ref=ref, ref_label=label, xlabel=args.x,
                          title=args.title)
    else:
        ys = np.array([float(r[args.y]) for r in keep])
        slope = plots.loglog_fit(xs, ys, out, xlabel=args.x, ylabel=args.y,
                                 title=args.title)
        print(f"fitted slope = {slope:.4f}")
    print(f"wrote {out}")
    return 0


# --------------------------------------------------------------------------
# Entry point
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specrad",
        description="Spectral-radius laboratory: Monte Carlo experiments, "
                    "exact oracles, and CSV/SVG reporting.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _HANDLERS:
        sp = sub.add_parser(name, help=f"run the {name} experiment")
        sp.add_argument("--config", help="flat key = value config file")
        sp.add_argument("--seed", type=int, help="master seed (overrides config)")
        sp.add_argument("--trials", type=int, help="trial count (overrides config)")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes")
        sp.add_argument("--out", help="CSV output path")
        sp.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override any config key (repeatable)")
    rp = sub.add_parser("render", help="render a CSV to a standalone SVG plot")
    rp.add_argument("csv", help="input CSV path")
    rp.add_argument("--plot", choices=("histogram", "cdf-overlay", "loglog"),
                    default="histogram")
    rp.add_argument("--x", default="rho", help="x column name")
    rp.add_argument("--y", help="y column name (loglog)")
    rp.add_argument("--ref", choices=("none", "kostlan", "gumbel"), default="none",
                    help="reference curve for cdf-overlay")
    rp.add_argument("--n", type=int, help="matrix size for --ref kostlan")
    rp.add_argument("--out", help="SVG output path")
    rp.add_argument("--title", default="", help="plot title")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "render":
            if args.plot == "loglog" and not args.y:
                raise ConfigurationError("loglog plot needs --y")
            return _run_render(args)
        cfg = _resolve(args)
        return _HANDLERS[args.command](cfg, max(1, args.jobs))
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
