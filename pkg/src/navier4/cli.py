"""Command-line front end.

Subcommands: check-params, resonance-map, greens, constants, solve-linear,
solve, verify.  Exit codes: 0 success, 1 domain verdict failure (bad
parameters, resonance, degenerate constants), 2 configuration/usage
error, 3 solver did not converge (report still written).

All outputs are deterministic for a fixed config and seed: JSON is
sort_keys, CSV floats are repr round-trips, and files are written
atomically (temp file + rename).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys as _sys
from typing import Optional

import numpy as np

from . import __version__
from .checks import run_suite, suite_passed
from .config import ExperimentConfig, build_nonlinearity, load_config
from .domain import (
    GridField,
    SubBox,
    enumerate_modes,
    node_points,
    sample_function,
)
from .errors import ConfigError, Navier4Error
from .factorization import check_admissible, factor_params, resonance_curve
from .fd import fd_min_pivot
from .greens import build_kernel, estimate_constants, verify_kernel_bounds
from .linear import LinearProblem, solve_spectral
from .nonlinear import (
    GrowthClass,
    StatePair,
    SystemParams,
    classify_growth,
    cone_sigma,
    newton_solve,
    picard_solve,
    radius_report,
)

log = logging.getLogger("navier4")

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_CONFIG = 2
EXIT_NOT_CONVERGED = 3


def _write_text(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _write_json(path: str, obj) -> None:
    _write_text(path, json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _write_field(path: str, field: GridField) -> None:
    tmp = path + ".tmp"
    field.to_csv(tmp)
    os.replace(tmp, path)


def _out_dir(cfg: ExperimentConfig, args) -> str:
    out = args.out or cfg.out
    os.makedirs(out, exist_ok=True)
    return out


def _load(args) -> ExperimentConfig:
    cfg = load_config(args.config)
    # flags override the config values of the same name
    for attr, key in (
        ("seed", "seed"),
        ("truncation", "truncation"),
        ("grid", "grid"),
        ("omega0_frac", "omega0_frac"),
        ("strategy", "strategy"),
        ("tol", "tol"),
        ("max_iter", "max_iter"),
    ):
        v = getattr(args, attr, None)
        if v is not None:
            setattr(cfg, key, v)
    cfg.validate()
    return cfg


def cmd_check_params(args) -> int:
    cfg = _load(args)
    out = _out_dir(cfg, args)
    reports = {}
    ok = True
    for name, p in (("eq1", cfg.p1), ("eq2", cfg.p2)):
        rep = check_admissible(p, cfg.domain, cfg.truncation_for())
        reports[name] = {"alpha": p.alpha, "beta": p.beta, **rep.as_dict()}
        ok &= rep.admissible
        verdict = "admissible" if rep.admissible else "NOT admissible"
        print(f"{name}: (alpha={p.alpha}, beta={p.beta}) {verdict}")
        for key, val in rep.as_dict().items():
            print(f"  {key}: {val}")
    _write_json(os.path.join(out, "admissibility.json"), reports)
    return EXIT_OK if ok else EXIT_VERDICT


def cmd_resonance_map(args) -> int:
    cfg = _load(args)
    out = _out_dir(cfg, args)
    k_max = args.k_max
    beta_hi = args.beta_max if args.beta_max is not None else 2.0 * cfg.domain.lambda1()
    betas = np.linspace(args.beta_min, beta_hi, args.samples) if args.samples > 0 else []
    modes = enumerate_modes(cfg.domain, max(k_max, 1))[:k_max]
    lines = ["k,beta,alpha"]
    for mode in modes:
        for b, a in resonance_curve(mode, cfg.domain, betas):
            kstr = "x".join(str(i) for i in mode.index)
            lines.append(f"{kstr},{b!r},{a!r}")
    path = os.path.join(out, "resonance.csv")
    _write_text(path, "\n".join(lines) + "\n")
    print(f"wrote {len(lines) - 1} resonance rows for {len(modes)} modes to {path}")
    return EXIT_OK


def cmd_greens(args) -> int:
    cfg = _load(args)
    out = _out_dir(cfg, args)
    K = cfg.truncation_for()
    n = cfg.grid_for()
    report = {}
    for eq, p in (("eq1", cfg.p1), ("eq2", cfg.p2)):
        fac = factor_params(p)
        for tag, mu in (("mu1", fac.mu1), ("mu2", fac.mu2)):
            label = f"{eq}_{tag}"
            kern = build_kernel(cfg.domain, mu, K)
            _write_field(os.path.join(out, f"diagonal_{label}.csv"), kern.diagonal(n))
            rep = verify_kernel_bounds(kern, n)
            report[label] = {"mu": mu, "K": K, **rep.as_dict()}
            print(
                f"{label}: mu={mu:.6g} min={rep.min_value:.3e} "
                f"defect={rep.symmetry_defect:.2e} recheck_ok={rep.recheck_ok}"
            )
    _write_json(os.path.join(out, "kernel_report.json"), report)
    return EXIT_OK


def cmd_constants(args) -> int:
    cfg = _load(args)
    out = _out_dir(cfg, args)
    K = cfg.truncation_for()
    n = cfg.grid_for()
    omega0 = SubBox.centered(cfg.domain, cfg.omega0_frac)
    sigmas = []
    for eq, p in (("eq1", cfg.p1), ("eq2", cfg.p2)):
        fac = factor_params(p)
        k1 = build_kernel(cfg.domain, fac.mu1, K)
        k2 = build_kernel(cfg.domain, fac.mu2, K)
        rep = estimate_constants(k1, k2, omega0, n)
        _write_json(os.path.join(out, f"constants_{eq}.json"), rep.as_dict())
        sigmas.append(rep.sigma)
        print(f"{eq}: sigma_j={rep.sigma!r} C0={rep.C0!r} m1={rep.m1!r} M1={rep.M1!r}")
    print(f"sigma = min(sigma_1, sigma_2) = {min(sigmas)!r}")
    return EXIT_OK


def _forcing_field(cfg: ExperimentConfig) -> GridField:
    spec = cfg.forcing
    kind = spec.get("kind")
    n = cfg.grid_for()
    if kind == "constant":
        value = float(spec.get("value", 1.0))
        return sample_function(cfg.domain, n, lambda pts: np.full(pts.shape[0], value))
    if kind == "mode":
        k = spec.get("k", [1])
        k = [int(v) for v in (k if isinstance(k, (list, tuple)) else [k])]
        if len(k) != cfg.domain.dim:
            raise ConfigError(f"forcing mode index {k} does not match dim {cfg.domain.dim}")
        amp = float(spec.get("amplitude", 1.0))

        def fn(pts):
            out = np.full(pts.shape[0], amp)
            for i, a in enumerate(cfg.domain.lengths):
                out = out * np.sin(k[i] * np.pi * pts[:, i] / a)
            return out

        return sample_function(cfg.domain, n, fn)
    if kind == "csv":
        path = spec.get("path")
        if not path:
            raise ConfigError("csv forcing needs a 'path'")
        return GridField.from_csv(cfg.resolve_path(path))
    raise ConfigError(f"unknown forcing kind {kind!r}")


def _gate_admissibility(cfg: ExperimentConfig) -> Optional[int]:
    for name, p in (("eq1", cfg.p1), ("eq2", cfg.p2)):
        rep = check_admissible(p, cfg.domain, cfg.truncation_for())
        if not rep.admissible:
            viol = tuple(rep.first_violation.index) if rep.first_violation else None
            print(f"{name}: parameters not admissible (first violation at mode {viol})")
            return EXIT_VERDICT
    return None


def cmd_solve_linear(args) -> int:
    cfg = _load(args)
    out = _out_dir(cfg, args)
    gate = _gate_admissibility(cfg)
    if gate is not None:
        return gate
    h = _forcing_field(cfg)
    u = solve_spectral(LinearProblem(cfg.domain, cfg.p1, h), min(cfg.truncation_for(), cfg.grid_for()))
    _write_field(os.path.join(out, "forcing.csv"), h)
    _write_field(os.path.join(out, "solution.csv"), u)
    _write_json(
        os.path.join(out, "linear_report.json"),
        {
            "norm_inf": u.norm_inf(),
            "min": float(u.values.min()),
            "truncation": cfg.truncation_for(),
            "grid": cfg.grid_for(),
            "alpha": cfg.p1.alpha,
            "beta": cfg.p1.beta,
        },
    )
    print(f"solution norm_inf={u.norm_inf()!r}, min={float(u.values.min())!r}")
    return EXIT_OK


def cmd_solve(args) -> int:
    cfg = _load(args)
    out = _out_dir(cfg, args)
    gate = _gate_admissibility(cfg)
    if gate is not None:
        return gate
    K = cfg.truncation_for()
    n = cfg.grid_for()
    sysp = SystemParams.from_domain(cfg.domain, cfg.p1, cfg.p2, K)
    f1 = cfg.nonlinearity(1)
    f2 = cfg.nonlinearity(2)
    cls = classify_growth(f1, f2, sysp)
    strategy = cfg.strategy
    if strategy == "auto":
        strategy = "picard" if cls.classification is GrowthClass.SUBLINEAR else "newton"
    omega0 = SubBox.centered(cfg.domain, cfg.omega0_frac)
    amp = cfg.init_amplitude if cfg.init_amplitude is not None else 10.0 / min(sysp.L1, sysp.L2)
    init = StatePair.eigen(cfg.domain, n, amp)
    log.info("solving with strategy=%s init_amplitude=%g", strategy, amp)
    if strategy == "picard":
        rep = picard_solve(
            init, sysp, f1, f2,
            damping=cfg.damping, tol=cfg.tol, max_iter=cfg.max_iter,
            K=min(K, n), omega0=omega0,
        )
    else:
        rep = newton_solve(
            init, sysp, f1, f2, tol=cfg.tol, max_iter=cfg.max_iter, omega0=omega0,
        )
    _write_field(os.path.join(out, "solution_u1.csv"), rep.solution.u1)
    _write_field(os.path.join(out, "solution_u2.csv"), rep.solution.u2)
    payload = {
        "config": cfg.as_dict(),
        "classification": cls.as_dict(),
        "solve": rep.as_dict(),
        "solution_files": ["solution_u1.csv", "solution_u2.csv"],
        "omega0": omega0.describe(),
    }
    if rep.sigma:
        payload["localization"] = radius_report(sysp, rep.sigma)
    _write_json(os.path.join(out, "report.json"), payload)
    print(
        f"strategy={rep.strategy} converged={rep.converged} iterations={rep.iterations} "
        f"residual={rep.residual_inf:.3e} positive={rep.positive} cone_ok={rep.cone_ok}"
    )
    print(f"classification: {cls.classification.value}")
    return EXIT_OK if rep.converged else EXIT_NOT_CONVERGED


def cmd_verify(args) -> int:
    cfg = _load(args)
    out = _out_dir(cfg, args)
    results = run_suite(cfg)
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.detail}")
    _write_json(os.path.join(out, "verify.json"), {"checks": [r.as_dict() for r in results]})
    passed = suite_passed(results)
    print(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return EXIT_OK if passed else EXIT_VERDICT


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="navier4",
        description=(
            "Spectral solver and verification toolkit for coupled fourth-order "
            "elliptic systems with Navier boundary conditions on boxes."
        ),
    )
    parser.add_argument("--version", action="version", version=f"navier4 {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="YAML experiment config")
    common.add_argument("--out", metavar="DIR", help="output directory (default: config 'out' or ./out)")
    common.add_argument("--seed", type=int, help="seed for randomized checks (default 42)")
    common.add_argument("--truncation", type=int, metavar="K", help="spectral truncation order")
    common.add_argument("--grid", type=int, metavar="N", help="collocation nodes per axis")
    common.add_argument("--omega0-frac", dest="omega0_frac", type=float, metavar="THETA",
                        help="centered sub-box fraction in (0,1), default 0.5")
    common.add_argument("--strategy", choices=("picard", "newton"), help="nonlinear strategy")
    common.add_argument("--tol", type=float, help="solver tolerance")
    common.add_argument("--max-iter", dest="max_iter", type=int, help="iteration budget")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("check-params", parents=[common],
                   help="admissibility verdicts for both equations").set_defaults(fn=cmd_check_params)
    rm = sub.add_parser("resonance-map", parents=[common],
                        help="CSV atlas of resonance curves alpha(beta) per mode")
    rm.add_argument("--k-max", dest="k_max", type=int, default=4,
                    help="number of lowest modes to trace (default 4)")
    rm.add_argument("--beta-min", dest="beta_min", type=float, default=0.0)
    rm.add_argument("--beta-max", dest="beta_max", type=float, default=None,
                    help="default 2*lambda_1")
    rm.add_argument("--samples", type=int, default=33, help="points per curve (default 33)")
    rm.set_defaults(fn=cmd_resonance_map)
    sub.add_parser("greens", parents=[common],
                   help="kernel diagonals and positivity/symmetry reports").set_defaults(fn=cmd_greens)
    sub.add_parser("constants", parents=[common],
                   help="comparison constants and the cone constant sigma").set_defaults(fn=cmd_constants)
    sub.add_parser("solve-linear", parents=[common],
                   help="linear solve with the configured forcing").set_defaults(fn=cmd_solve_linear)
    sub.add_parser("solve", parents=[common],
                   help="nonlinear solve with growth classification").set_defaults(fn=cmd_solve)
    sub.add_parser("verify", parents=[common],
                   help="run the named invariant suite").set_defaults(fn=cmd_verify)
    return parser


def main(argv=None) -> int:
    level = os.environ.get("NAVIER4_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; preserve its code
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=_sys.stderr)
        return EXIT_CONFIG
    except Navier4Error as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=_sys.stderr)
        return EXIT_VERDICT


if __name__ == "__main__":
    raise SystemExit(main())
