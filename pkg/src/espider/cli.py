"""Command-line interface.

Every subcommand writes a table (CSV by default, JSON with ``--format json``)
whose header embeds the package version and the fully resolved run
configuration. Exit codes: 0 success, 1 tolerance miss (``check`` and
``compare --check``), 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from . import compare as cmp
from . import reference_values as ref
from .chain import SWITCH_KINDS, ModelParams, example_switch_matrix
from .diffusion import (DiffusionParams, fokker_planck_evolve, moments_X, rates_to_diffusion,
                        simulate_spider_ou, stationary_density_w)
from .io import render, write_output
from .montecarlo import estimate_pk
from .special import SignedLogValue
from .stationary import entropy, entropy_argmax, g_approx, moments, rho_k
from .transient import (laplace_H, level_probs_closed, pgf_F, transient_oracle)

__all__ = ["RunConfig", "build_parser", "run", "main"]


@dataclass(frozen=True)
class RunConfig:
    """Subcommand plus its resolved options; serializes to sorted JSON."""

    command: str
    options: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"command": self.command, "options": self.options}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        doc = json.loads(text)
        return cls(doc["command"], doc.get("options", {}))

    def to_argv(self) -> list[str]:
        """Command line reproducing this configuration."""
        argv = [self.command]
        opts = dict(self.options)
        pos = opts.pop("table", None)
        if pos is not None:
            argv.append(pos)
        for k in sorted(opts):
            v = opts[k]
            flag = "--" + k.replace("_", "-")
            if isinstance(v, bool):
                if v:
                    argv.append(flag)
            elif v is None:
                continue
            elif isinstance(v, list):
                argv += [flag, ",".join(repr(x) if isinstance(x, float) else str(x) for x in v)]
            else:
                argv += [flag, repr(v) if isinstance(v, float) else str(v)]
        return argv


class _UsageError(Exception):
    pass


def _list(conv):
    """Parse ``a,b,c`` or ``start:stop:num`` (inclusive linspace)."""
    def parse(text):
        try:
            if ":" in text:
                a, b, n = text.split(":")
                return [conv(x) for x in np.linspace(float(a), float(b), int(n))]
            return [conv(x) for x in text.split(",") if x.strip()]
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad list {text!r}: {exc}") from None
    return parse


_floats = _list(float)
_ints = _list(lambda x: int(float(x)))


def _model_flags(p, N_list=False):
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="up rate (default 1)")
    p.add_argument("--mu", type=float, default=None, help="down rate (default 1)")
    if N_list:
        p.add_argument("--N", type=_ints, default=None, help="capacity (list allowed)")
    else:
        p.add_argument("--N", type=int, default=None, help="capacity")
    p.add_argument("--d", type=int, default=None, help="number of rays (default 1)")
    p.add_argument("--switch", choices=SWITCH_KINDS, default=None, help="switching matrix kind")
    p.add_argument("--p", type=float, default=None, help="random-walk probability (default 0.5)")
    p.add_argument("--config", default=None, help="JSON model config file")


def _output_flags(p):
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="espider",
                                 description="Multi-type Ehrenfest chain on a star graph and its spider diffusion.")
    ap.add_argument("--version", action="version", version=f"espider {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transient", help="p(k,t) grids, PGF and Laplace transform")
    _model_flags(p)
    p.add_argument("--t", type=_floats, default=None, help="times, e.g. 0,1,2 or 0:5:51")
    p.add_argument("--method", choices=("auto", "closed", "oracle", "rk"), default="auto")
    p.add_argument("--z", type=_floats, default=None, help="PGF arguments (emits t,z,F)")
    p.add_argument("--eta", type=_floats, default=None, help="Laplace arguments (emits eta,H)")
    _output_flags(p)

    p = sub.add_parser("stationary", help="stationary law, approximation and moments")
    _model_flags(p, N_list=True)
    p.add_argument("--rho", type=_floats, default=None, help="lambda/mu ratio(s)")
    p.add_argument("--k", type=_ints, default=None, help="levels (default 0..N)")
    p.add_argument("--moments", action="store_true", help="emit N,rho,mean,var,cv")
    _output_flags(p)

    p = sub.add_parser("entropy", help="entropy curves and maximizers")
    p.add_argument("--N", type=_ints, required=True)
    p.add_argument("--rho", type=_floats, default=None, help="grid (default 200 log-spaced in [0.1, 20])")
    p.add_argument("--argmax", action="store_true", help="emit N,m")
    _output_flags(p)

    p = sub.add_parser("simulate", help="Monte Carlo estimates of p(k,t)")
    _model_flags(p)
    p.add_argument("--t", type=_floats, required=True)
    p.add_argument("--runs", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    _output_flags(p)

    p = sub.add_parser("diffusion", help="OU on the spider: density, moments, SDE, Fokker-Planck")
    p.add_argument("mode", choices=("density", "moments", "sde", "fp"))
    _model_flags(p)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--nu", type=float, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--t", type=_floats, default=None, help="SDE horizon or FP snapshot times")
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--runs", type=int, default=1000, help="SDE lanes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bins", type=int, default=40)
    p.add_argument("--cells", type=int, default=400, help="FP grid cells")
    _output_flags(p)

    p = sub.add_parser("compare", help="reference tables: approximation, entropy maxima, diffusion, moments")
    p.add_argument("table", choices=("table1", "table2", "table3", "moments"))
    p.add_argument("--preset", choices=cmp.PRESETS, default=None)
    p.add_argument("--check", action="store_true", help="exit 1 if a preset cell misses")
    p.add_argument("--N", type=_ints, default=None)
    p.add_argument("--rho", type=_floats, default=None)
    p.add_argument("--k", type=_ints, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    _output_flags(p)

    p = sub.add_parser("check", help="run the acceptance criteria")
    p.add_argument("--only", type=_ints, default=None, help="criterion numbers")
    return ap


# ---------------------------------------------------------------------------
# option resolution

def _model(args, require_N=True) -> tuple[ModelParams, dict]:
    base = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            base = json.load(fh)
    lam = args.lam if args.lam is not None else base.get("lambda", 1.0)
    mu = args.mu if args.mu is not None else base.get("mu", 1.0)
    N = args.N if args.N is not None else base.get("N")
    if N is None:
        if require_N:
            raise _UsageError("--N is required")
        N = 1
    d = args.d if args.d is not None else base.get("d", 1)
    sw = dict(base.get("switch", {"kind": "uniform"}))
    if args.switch is not None:
        sw = {"kind": args.switch}
    if args.p is not None:
        sw["p"] = args.p
    if "kind" in sw:
        sw.setdefault("p", 0.5)
    cfg = {"lambda": float(lam), "mu": float(mu), "N": int(N), "d": int(d), "switch": sw}
    try:
        return ModelParams.from_dict(cfg), cfg
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _emit(args, rc: RunConfig, columns, rows, sig=None) -> None:
    text = render(columns, rows, rc.to_dict(), args.format, __version__, sig)
    write_output(text, args.out)


# ---------------------------------------------------------------------------
# subcommands

def _cmd_transient(args):
    params, cfg = _model(args)
    if args.eta:
        rows = [[e, laplace_H(e, params)] for e in args.eta]
        rc = RunConfig("transient", {"model": cfg, "eta": args.eta})
        _emit(args, rc, ["eta", "H"], rows)
        return 0
    if not args.t:
        raise _UsageError("--t is required unless --eta is given")
    if any(t < 0 for t in args.t):
        raise _UsageError("times must be non-negative")
    if args.z:
        rows = [[t, z, pgf_F(z, t, params)] for t in args.t for z in args.z]
        rc = RunConfig("transient", {"model": cfg, "t": args.t, "z": args.z})
        _emit(args, rc, ["t", "z", "F"], rows)
        return 0
    method = args.method
    if method == "auto":
        method = "closed" if params.lam == params.mu else "oracle"
    if method == "closed":
        if params.lam != params.mu:
            raise _UsageError("the closed form needs lambda == mu; use --method oracle")
        probs = [level_probs_closed(t, params.N, params.mu) for t in args.t]
    else:
        kind = "uniformization" if method == "oracle" else "rk"
        sols = transient_oracle(params, list(args.t), method=kind)
        probs = [s.level_probs for s in sols]
    cols = ["t"] + [f"p{k}" for k in range(params.N + 1)]
    rows = [[t] + list(map(float, p)) for t, p in zip(args.t, probs)]
    rc = RunConfig("transient", {"model": cfg, "t": args.t, "method": method})
    _emit(args, rc, cols, rows, sig={c: 12 for c in cols})
    return 0


def _rho_list(args):
    if args.rho:
        return args.rho
    lam = 1.0 if args.lam is None else args.lam
    mu = 1.0 if args.mu is None else args.mu
    return [lam / mu]


def _cmd_stationary(args):
    if not args.N:
        raise _UsageError("--N is required")
    rhos = _rho_list(args)
    if any(not r > 0 for r in rhos) or any(n < 1 for n in args.N):
        raise _UsageError("need rho > 0 and N >= 1")
    opts = {"N": args.N, "rho": rhos, "k": args.k, "moments": args.moments}
    rc = RunConfig("stationary", opts)
    if args.moments:
        rows = [[N, r, *moments(r, N)] for r in rhos for N in args.N]
        _emit(args, rc, ["N", "rho", "mean", "var", "cv"], rows)
        return 0
    rows = []
    for N in args.N:
        ks = args.k if args.k is not None else range(N + 1)
        for r in rhos:
            ga = g_approx(r, N) if r < 1 else None
            for k in ks:
                if not 0 <= k <= N:
                    raise _UsageError(f"k={k} outside 0..{N}")
                ex = rho_k(k, r, N)
                if ga is not None:
                    shift = ex.log_mag - rho_k(0, r, N).log_mag
                    ap = ga * SignedLogValue(1, shift)
                    rows.append([N, r, k, ex, ap, ex.log10(), ap.sign, ap.log10()])
                else:
                    rows.append([N, r, k, ex, "", ex.log10(), "", ""])
    _emit(args, rc, ["N", "rho", "k", "rho_k", "rho_k_approx", "log10_rho_k",
                     "sign_approx", "log10_rho_k_approx"], rows)
    return 0


def _cmd_entropy(args):
    if args.argmax:
        res = [entropy_argmax(N) for N in args.N]
        rows = [[r.N, r.argmax, r.max_entropy, r.unimodal] for r in res]
        rc = RunConfig("entropy", {"N": args.N, "argmax": True})
        _emit(args, rc, ["N", "m", "max_entropy", "unimodal"], rows)
        return 0
    grid = args.rho if args.rho else [float(x) for x in np.geomspace(0.1, 20.0, 200)]
    if any(not r > 0 for r in grid):
        raise _UsageError("rho must be positive")
    rows = [[N, r, entropy(r, N)] for N in args.N for r in grid]
    rc = RunConfig("entropy", {"N": args.N, "rho": grid})
    _emit(args, rc, ["N", "rho", "entropy"], rows)
    return 0


def _cmd_simulate(args):
    params, cfg = _model(args)
    if args.runs < 1 or any(t < 0 for t in args.t):
        raise _UsageError("need --runs >= 1 and non-negative times")
    tabs = estimate_pk(params, args.t, args.runs, seed=args.seed)
    rows = []
    for tab in tabs:
        for k in range(params.N + 1):
            rows.append([tab.t, k, tab.point[k], tab.ci_low[k], tab.ci_high[k], tab.n_runs, tab.seed])
    opts = {"model": cfg, "t": args.t, "runs": args.runs, "seed": args.seed,
            "ci_method": tabs[0].ci_method, "init": "Origin(1)"}
    rc = RunConfig("simulate", opts)
    _emit(args, rc, ["t", "level", "point", "ci_low", "ci_high", "n_runs", "seed"], rows)
    if args.out and args.out != "-":
        write_output(json.dumps({"version": __version__, **rc.to_dict()}, sort_keys=True, indent=1)
                     + "\n", args.out + ".manifest.json")
    return 0


def _diffusion_params(args) -> tuple[DiffusionParams, dict]:
    try:
        if args.alpha is not None:
            p = DiffusionParams(args.alpha, args.gamma or 0.0, args.epsilon or 1.0,
                                args.nu if args.nu is not None else 1.0)
        else:
            if args.N is None:
                raise _UsageError("give --alpha (with --gamma --nu --epsilon) or --lambda --mu --N --epsilon")
            lam = 1.0 if args.lam is None else args.lam
            mu = 1.0 if args.mu is None else args.mu
            p = rates_to_diffusion(lam, mu, args.epsilon or 0.1, args.N)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    cfg = {"alpha": p.alpha, "gamma": p.gamma, "nu": p.nu, "epsilon": p.epsilon,
           "sigma2": p.sigma2, "beta": p.beta}
    return p, cfg


def _cmd_diffusion(args):
    p, cfg = _diffusion_params(args)
    sd = p.sigma / math.sqrt(2 * p.alpha)
    x_max = max(p.beta, 0.0) + 10 * sd
    if args.mode == "density":
        xs = np.linspace(0.0, x_max, 201)
        rows = [[float(x), float(stationary_density_w(x, p))] for x in xs]
        _emit(args, RunConfig("diffusion", {"mode": "density", "params": cfg}), ["x", "w"], rows)
        return 0
    if args.mode == "moments":
        m, v = moments_X(p)
        rows = [[p.alpha, p.sigma2, p.beta, m, v]]
        _emit(args, RunConfig("diffusion", {"mode": "moments", "params": cfg}),
              ["alpha", "sigma2", "beta", "mean", "var"], rows)
        return 0
    d = args.d or 1
    C = example_switch_matrix(args.switch or "uniform", d, 0.5 if args.p is None else args.p)
    if args.mode == "sde":
        horizon = args.t[-1] if args.t else 10.0
        try:
            path = simulate_spider_ou(p, C, horizon, args.dt, seed=args.seed, n_paths=args.runs,
                                      record_every=10)
        except ValueError as exc:
            raise _UsageError(str(exc)) from None
        keep = path.times >= 0.1 * horizon
        xs, rs = path.x[:, keep].ravel(), path.ray[:, keep].ravel()
        edges = np.linspace(0.0, x_max, args.bins + 1)
        rows = []
        for j in range(1, d + 1):
            counts, _ = np.histogram(xs[rs == j], bins=edges)
            rows += [[float(e), int(c), j] for e, c in zip(edges[:-1], counts)]
        opts = {"mode": "sde", "params": cfg, "d": d, "switch_matrix": C.tolist(), "horizon": horizon,
                "dt": args.dt, "runs": args.runs, "seed": args.seed, "bins": args.bins,
                "burn_in": 0.1 * horizon, "record_every": 10}
        _emit(args, RunConfig("diffusion", opts), ["x_bin", "count", "ray"], rows)
        return 0
    # fp: start from a narrow bump one standard deviation beyond the mean
    times = sorted(args.t) if args.t else [0.0, 0.1, 0.5, 1.0, 5.0]
    x0, width = max(p.beta, 0.0) + sd, 0.1 * sd

    def h0(x):
        return np.exp(-0.5 * ((x - x0) / width) ** 2) / (width * math.sqrt(2 * math.pi))
    res = fokker_planck_evolve(h0, p, times[-1], x_max=x_max, n_cells=args.cells,
                               snapshot_times=times)
    rows = [[t, float(x), float(v)] for t, h in res.snapshots for x, v in zip(res.x, h)]
    opts = {"mode": "fp", "params": cfg, "t": times, "cells": args.cells,
            "init": {"bump_center": x0, "bump_width": width}, "x_max": x_max}
    _emit(args, RunConfig("diffusion", opts), ["t", "x", "h"], rows)
    return 0


def _cmd_compare(args):
    preset = args.preset
    custom = args.N is not None
    if preset is None and not custom:
        preset = "published"
    if args.check and preset is None:
        raise _UsageError("--check needs a preset")
    opts = {"table": args.table, "preset": preset, "check": args.check}
    missed = 0
    if args.table == "table1":
        if custom:
            rhos = args.rho or [0.25, 0.5, 0.75]
            if any(not 0 < r < 1 for r in rhos):
                raise _UsageError("table1 needs 0 < rho < 1")
            cells = [(N, r, k) for N in args.N for r in rhos for k in (args.k or [0])]
            opts.update(N=args.N, rho=rhos, k=args.k or [0])
        else:
            cells = [(N, r, k) for N, r, k, _, _ in ref.TABLE1]
        rows = []
        for N, r, k in cells:
            row = cmp.table1([N], [r], [k])[0]
            rows.append([N, r, k, row.exact, row.approx, row.exact.log10(), row.approx.log10()])
        cols = ["N", "rho", "k", "rho_k", "rho_k_approx", "log10_rho_k", "log10_rho_k_approx"]
        checks = cmp.check_table1() if args.check else []
    elif args.table == "table2":
        Ns = args.N or list(ref.TABLE2)
        opts.update(N=Ns)
        rows = [[N, entropy_argmax(N).argmax] for N in Ns]
        cols = ["N", "m"]
        checks = cmp.check_table2() if args.check else []
    elif args.table == "table3":
        pre = ref.TABLE3_PRESET
        Ns = args.N or list(pre["N"])
        ks = args.k or list(pre["k"])
        eps = args.epsilon or pre["epsilon"]
        opts.update(N=Ns, k=ks, epsilon=eps, lambda_mu=pre["lam_mu"])
        rows = [[r.N, r.k, r.approx, r.exact, r.delta]
                for r in cmp.table3(Ns, eps, pre["lam_mu"], ks)]
        cols = ["N", "k", "w_eps", "rho_k", "delta"]
        checks = cmp.check_table3() if args.check else []
    else:
        Ns = args.N or [1000, 10_000, 100_000]
        eps = args.epsilon or 0.1
        opts.update(N=Ns, epsilon=eps)
        reps = [cmp.moment_agreement(N, eps) for N in Ns]
        rows = [[r.N, r.epsilon, r.mean, r.var, r.mean_stirling, r.var_stirling,
                 r.mean_diffusion, r.var_diffusion] for r in reps]
        cols = ["N", "epsilon", "mean", "var", "mean_stirling", "var_stirling",
                "mean_diffusion", "var_diffusion"]
        checks = []
    _emit(args, RunConfig("compare", opts), cols, rows)
    for c in checks:
        if not c.ok:
            missed += 1
            print(f"MISS {c.label}: computed {c.computed}, printed {c.printed}", file=sys.stderr)
    if args.check:
        print(f"{len(checks) - missed}/{len(checks)} cells within tolerance", file=sys.stderr)
    return 1 if missed else 0


def _cmd_check(args):
    from .checks import run_all
    results = run_all(only=set(args.only) if args.only else None)
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed"
          + (f"; failed: {failed}" if failed else ""))
    return 1 if failed else 0


_COMMANDS = {"transient": _cmd_transient, "stationary": _cmd_stationary, "entropy": _cmd_entropy,
             "simulate": _cmd_simulate, "diffusion": _cmd_diffusion, "compare": _cmd_compare,
             "check": _cmd_check}


def run(argv=None) -> int:
    """Run the CLI and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"espider {args.command}: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
