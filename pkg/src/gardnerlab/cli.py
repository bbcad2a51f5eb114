"""Command-line front end: verification suites, spectrum reports, simulations,
stability experiments and parameter sweeps with reproducible outputs.

Configuration comes from an INI-style file (``--config``) and/or flags; flags
override the file.  Every report embeds a hash of the resolved configuration
and the artifact version, and all reductions are deterministic, so identical
config + seed reproduces byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import configparser
import csv
import hashlib
import itertools
import json
import math
import os
import sys

import numpy as np

from . import __version__, dynamics, exact, functionals, identities, spectral
from .fields import Field, Grid
from .params import BreatherParams, ParameterDomainError

IDENTITY_TOL = 1e-7

_DEFAULTS = {
    "alpha": 1.0,
    "beta": 1.0,
    "mu": 0.5,
    "x1": 0.0,
    "x2": 0.0,
    "t": 0.0,
    "grid_l": 40.0,
    "grid_n": 1024,
    "dt": 1e-4,
    "periods": 1.0,
    "eta": 1e-3,
    "seed": 0,
    "kind": "random-band-limited",
    "trials": 50,
    "output_dir": ".",
    "sweep_alpha": "0.5,1,2",
    "sweep_beta": "0.5,1,2",
    "sweep_mu": "0.1,0.5,0.9",
}

_FLOAT_KEYS = ("alpha", "beta", "mu", "x1", "x2", "t", "grid_l", "dt",
               "periods", "eta")
_INT_KEYS = ("grid_n", "seed", "trials")


class UsageError(Exception):
    pass


def _load_config_file(path: str) -> dict:
    cp = configparser.ConfigParser()
    if not cp.read(path):
        raise UsageError(f"cannot read config file {path!r}")
    out = {}
    for section in cp.sections():
        for key, value in cp.items(section):
            out[key.replace("-", "_")] = value
    return out


def _resolve(args: argparse.Namespace) -> dict:
    """Defaults < config file < explicit flags."""
    cfg = dict(_DEFAULTS)
    if args.config:
        cfg.update(_load_config_file(args.config))
    for key in cfg:
        flag = getattr(args, key, None)
        if flag is not None:
            cfg[key] = flag
    for key in _FLOAT_KEYS:
        cfg[key] = float(cfg[key])
    for key in _INT_KEYS:
        cfg[key] = int(cfg[key])
    cfg["command"] = args.command
    return cfg


def _config_hash(cfg: dict) -> str:
    blob = "\n".join(f"{k}={cfg[k]!r}" for k in sorted(cfg))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _params(cfg: dict) -> BreatherParams:
    try:
        return BreatherParams(cfg["alpha"], cfg["beta"], cfg["mu"],
                              cfg["x1"], cfg["x2"])
    except ParameterDomainError as exc:
        raise UsageError(str(exc)) from exc


def _grid(cfg: dict) -> Grid:
    return Grid(cfg["grid_l"], cfg["grid_n"])


def _out_path(cfg: dict, override: str | None, suffix: str) -> str:
    if override:
        return override
    os.makedirs(cfg["output_dir"], exist_ok=True)
    name = f"{cfg['command']}_{cfg['hash']}{suffix}"
    return os.path.join(cfg["output_dir"], name)


def _write_json(path: str, records: list[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_xy(path: str, x, y) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for xi, yi in zip(x, y):
            fh.write(f"{xi!r} {yi!r}\n")


def _stamp(cfg: dict, rec: dict) -> dict:
    rec["config_hash"] = cfg["hash"]
    rec["artifact_version"] = __version__
    return rec


def _parse_sweep(spec: str) -> list[float]:
    """Either comma-separated values or lo:hi:n."""
    spec = str(spec)
    if ":" in spec:
        lo, hi, n = spec.split(":")
        return [float(v) for v in np.linspace(float(lo), float(hi), int(n))]
    return [float(v) for v in spec.split(",")]


# ---------------------------------------------------------------------------
# commands


def _cmd_verify(cfg: dict, args) -> int:
    p = _params(cfg)
    reports = identities.run_all(p, cfg["t"])
    records, failed = [], []
    for rep in reports:
        ok = rep.relative <= IDENTITY_TOL
        if not ok:
            failed.append(rep.identity)
        records.append(_stamp(cfg, {
            "identity": rep.identity,
            "alpha": p.alpha, "beta": p.beta, "mu": p.mu, "t": rep.t,
            "sup_residual": rep.sup_residual,
            "rel_scale": rep.rel_scale,
            "pass": ok,
        }))
        print(f"{'PASS' if ok else 'FAIL'} {rep.identity}: "
              f"rel residual {rep.relative:.3e} (tol {IDENTITY_TOL:.0e})")
    _write_json(_out_path(cfg, args.json, ".json"), records)
    if failed:
        print("failing identities: " + ", ".join(failed))
        return 1
    return 0


def _spectrum_point(p: BreatherParams, t: float, g: Grid, trials: int,
                    seed: int) -> dict:
    op = spectral.assemble(p, t, g)
    rep = spectral.spectrum(op)
    nu, _sigma = spectral.coercivity_estimate(p, t, g, trials=trials, seed=seed)
    roots = spectral.f_mu_root_count(p, t, p.x1)
    wc = spectral.wronskian_closed(p, t, g.nodes)
    wn = spectral.wronskian_numeric(p, t, g.nodes)
    werr = float(np.max(np.abs(wc - wn)) / np.max(np.abs(wn)))
    return {
        "alpha": p.alpha, "beta": p.beta, "mu": p.mu, "t": t,
        "eigenvalues": [float(v) for v in rep.eigenvalues],
        "negative_count": rep.negative_count,
        "kernel_dim": rep.kernel_dim_numeric,
        "lambda0_sq": rep.lambda0_sq,
        "subspace_angle": rep.subspace_angle_kernel,
        "nu_measured": nu,
        "f_mu_root_count": roots,
        "wronskian_max_rel_err": werr,
    }


def _cmd_spectrum(cfg: dict, args) -> int:
    g = _grid(cfg)
    if args.sweep_mu_fracs:
        fracs = _parse_sweep(args.sweep_mu_fracs)
    else:
        base = _params(cfg)
        fracs = [cfg["mu"] / base.mu_max if cfg["mu"] != 0.0 else 0.0]
    records, ok = [], True
    for frac in fracs:
        mu = frac * math.sqrt(0.5 * (cfg["alpha"]**2 + cfg["beta"]**2))
        p = BreatherParams(cfg["alpha"], cfg["beta"], mu, cfg["x1"], cfg["x2"])
        rec = _spectrum_point(p, cfg["t"], g, cfg["trials"], cfg["seed"])
        good = (rec["negative_count"] == 1 and rec["kernel_dim"] == 2
                and rec["nu_measured"] > 0.0 and rec["f_mu_root_count"] == 1)
        rec["pass"] = good
        ok &= good
        records.append(_stamp(cfg, rec))
        print(f"{'PASS' if good else 'FAIL'} spectrum mu={mu:.6g}: "
              f"neg={rec['negative_count']} ker={rec['kernel_dim']} "
              f"nu={rec['nu_measured']:.3f} roots={rec['f_mu_root_count']}")
    _write_json(_out_path(cfg, args.json, ".json"), records)
    return 0 if ok else 1


def _run_experiment(cfg: dict, eta: float) -> dynamics.StabilityReport:
    p = _params(cfg)
    g = _grid(cfg)
    T, _ = p.period()
    stride = max(1, int(round(T / 8.0 / cfg["dt"])))
    solver = dynamics.SolverConfig(g, cfg["dt"], T, snapshot_stride=stride)
    return dynamics.stability_experiment(p, cfg["kind"], eta, cfg["seed"],
                                         cfg["periods"], solver)


def _emit_experiment(cfg: dict, args, rep: dynamics.StabilityReport,
                     check_amplification: bool) -> int:
    p = _params(cfg)
    g = _grid(cfg)
    header = ["t", "distance_H2", "x1", "x2", "M", "E", "F", "H"]
    rows = [[t, d, s1, s2, m, e, f, h]
            for t, d, s1, s2, m, e, f, h in zip(
                rep.times, rep.distances, rep.shifts1, rep.shifts2,
                rep.invariants["M"], rep.invariants["E"],
                rep.invariants["F"], rep.invariants["H"])]
    _write_csv(_out_path(cfg, args.csv, ".csv"), header, rows)
    _write_xy(_out_path(cfg, None, "_distance.dat"), rep.times, rep.distances)
    wv = exact.gardner_breather_values(p, float(rep.times[-1]), g.nodes) \
        if rep.times.size else exact.gardner_breather_values(p, 0.0, g.nodes)
    _write_xy(_out_path(cfg, None, "_profile.dat"), g.nodes, wv)

    captured = rep.escape_time is None
    ok = captured
    if check_amplification and rep.eta > 0.0:
        ok = ok and rep.amplification <= 50.0
    record = _stamp(cfg, {
        "eta": rep.eta,
        "sup_distance": rep.sup_distance,
        "amplification": None if math.isnan(rep.amplification)
        else rep.amplification,
        "invariant_drift": rep.invariant_drift,
        "modulation_speed": rep.modulation_speed,
        "horizon_periods": rep.horizon,
        "escape_time": rep.escape_time,
        "pass": ok,
    })
    _write_json(_out_path(cfg, args.json, ".json"), [record])
    print(f"{'PASS' if ok else 'FAIL'} {cfg['command']}: "
          f"sup distance {rep.sup_distance:.3e}, "
          f"drift {rep.invariant_drift:.3e}, "
          f"captured {captured}")
    return 0 if ok else 1


def _cmd_simulate(cfg: dict, args) -> int:
    rep = _run_experiment(cfg, 0.0)
    return _emit_experiment(cfg, args, rep, check_amplification=False)


def _cmd_stability(cfg: dict, args) -> int:
    rep = _run_experiment(cfg, cfg["eta"])
    return _emit_experiment(cfg, args, rep, check_amplification=True)


_SWEEP_QUANTITIES = ("breather-mass", "breather-energy", "breather-F",
                     "breather-H")


def _sweep_point(task):
    """Closed form vs quadrature for one lattice point; returns rows."""
    alpha, beta, frac, grid_l, grid_n, t = task
    mu = frac * math.sqrt(0.5 * (alpha**2 + beta**2))
    try:
        p = BreatherParams(alpha, beta, mu)
    except ParameterDomainError as exc:
        return [[alpha, beta, mu, "", "", "", "", f"skipped: {exc}"]]
    g = Grid(grid_l, grid_n)
    w = Field(g, exact.gardner_breather_values(p, t, g.nodes), periodic=True)
    quads = {
        "breather-mass": functionals.mass(w),
        "breather-energy": functionals.energy(w, p.mu),
        "breather-F": functionals.f_functional(w, p.mu),
        "breather-H": functionals.lyapunov(w, p),
    }
    rows = []
    for q in _SWEEP_QUANTITIES:
        closed = functionals.closed_form(q, p)
        quad = quads[q]
        rel = abs(quad - closed) / max(abs(closed), 1e-300)
        rows.append([alpha, beta, mu, q, repr(quad), repr(closed),
                     repr(rel), "ok"])
    return rows


def _cmd_sweep(cfg: dict, args) -> int:
    alphas = _parse_sweep(cfg["sweep_alpha"])
    betas = _parse_sweep(cfg["sweep_beta"])
    fracs = _parse_sweep(cfg["sweep_mu"])
    tasks = [(a, b, f, cfg["grid_l"], cfg["grid_n"], cfg["t"])
             for a, b, f in itertools.product(alphas, betas, fracs)]
    rows = []
    with concurrent.futures.ProcessPoolExecutor() as pool:
        for point_rows in pool.map(_sweep_point, tasks):
            rows.extend(point_rows)
    header = ["alpha", "beta", "mu", "quantity", "quadrature",
              "closed_form", "rel_err", "status"]
    _write_csv(_out_path(cfg, args.csv, ".csv"), header, rows)
    bad = [r for r in rows
           if r[-1] == "ok" and float(r[-2]) > 1e-7]
    skipped = sum(1 for r in rows if r[-1] != "ok")
    print(f"{'PASS' if not bad else 'FAIL'} sweep: {len(rows)} rows, "
          f"{skipped} skipped, {len(bad)} above tolerance")
    return 0 if not bad else 1


def _cmd_closed_forms(cfg: dict, args) -> int:
    p = _params(cfg)
    records = []
    for which, fn in functionals._BREATHER_FORMS.items():
        value = fn(p)
        records.append(_stamp(cfg, {
            "quantity": which, "value": value,
            "alpha": p.alpha, "beta": p.beta, "mu": p.mu,
        }))
        print(f"{which:18s} {value: .15g}")
    _write_json(_out_path(cfg, args.json, ".json"), records)
    return 0


_COMMANDS = {
    "verify": _cmd_verify,
    "spectrum": _cmd_spectrum,
    "simulate": _cmd_simulate,
    "stability": _cmd_stability,
    "sweep": _cmd_sweep,
    "closed-forms": _cmd_closed_forms,
}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    for flag, kind in (("--alpha", float), ("--beta", float), ("--mu", float),
                       ("--x1", float), ("--x2", float), ("--t", float),
                       ("--grid-L", float), ("--grid-N", int),
                       ("--dt", float), ("--periods", float),
                       ("--eta", float), ("--seed", int), ("--trials", int)):
        dest = flag[2:].replace("-", "_").lower()
        common.add_argument(flag, dest=dest, type=kind, default=None)
    common.add_argument("--config", default=None)
    common.add_argument("--output-dir", dest="output_dir", default=None)
    common.add_argument("--json", default=None,
                        help="path for the JSON report")
    common.add_argument("--csv", default=None,
                        help="path for the CSV report")

    parser = argparse.ArgumentParser(
        prog="gardnerlab",
        description="Breather laboratory: verification, spectra, dynamics.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common])
    sp = sub.add_parser("spectrum", parents=[common])
    sp.add_argument("--sweep-mu", dest="sweep_mu_fracs", default=None,
                    help="mu/mu_max values, comma list or lo:hi:n")
    sub.add_parser("simulate", parents=[common])
    st = sub.add_parser("stability", parents=[common])
    st.add_argument("--kind", choices=dynamics.PERTURBATION_KINDS,
                    default=None)
    sw = sub.add_parser("sweep", parents=[common])
    sw.add_argument("--sweep-alpha", dest="sweep_alpha", default=None)
    sw.add_argument("--sweep-beta", dest="sweep_beta", default=None)
    sw.add_argument("--sweep-mu", dest="sweep_mu", default=None)
    sub.add_parser("closed-forms", parents=[common])
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args)
        cfg["hash"] = _config_hash(cfg)
        return _COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParameterDomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
