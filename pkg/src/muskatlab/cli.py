"""``muskatlab`` command line: simulate, verify, campaign, norms, convergence.

Exit codes: 0 success, 1 configuration or input error, 2 blowup during a
simulation, 3 identity or assertion failure, 4 refinement flag raised.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import replace

from . import io
from .config import ConfigError, RunConfig, load_config
from .errors import BlowupDetected, MuskatLabError
from .estimator import campaign, refinement_table
from .evolution import cauchy_study, evolve, initial_field
from .finite_diff import default_rule
from .norms import BesovSpec, besov_norm, holder_norm, lipschitz_sup, lp_norm, sobolev_norm
from .verify import run_identity_suite

EXIT_OK, EXIT_CONFIG, EXIT_BLOWUP, EXIT_IDENTITY, EXIT_REFINEMENT = 0, 1, 2, 3, 4
CAUCHY_SLACK = 0.10

log = logging.getLogger("muskatlab")


def _out_dir(args, cfg: RunConfig | None, name: str) -> str:
    base = args.out or (cfg.output_dir if cfg else None) or os.environ.get("MUSKATLAB_OUT")
    return os.path.join(base or "muskatlab_out", name)


def _load(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    if args.threads is not None:
        cfg = replace(cfg, campaign=replace(cfg.campaign, threads=args.threads))
    return cfg


def _threads(args) -> int:
    return args.threads or os.cpu_count() or 1


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)


def cmd_simulate(args) -> int:
    cfg = _load(args)
    out = _out_dir(args, cfg, "simulate")
    os.makedirs(out, exist_ok=True)
    summary = {"config": cfg.sim.to_dict(), "status": "ok", "failure_time": None}
    try:
        states = evolve(cfg.sim)
    except BlowupDetected as exc:
        io.write_snapshots(exc.states, out)
        summary.update(status="blowup", failure_time=exc.time, message=str(exc))
        _write_json(os.path.join(out, "summary.json"), summary)
        print(f"blowup at t = {exc.time}: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    io.write_snapshots(states, out)
    first, last = states[0].diagnostics, states[-1].diagnostics
    summary.update(t_final=states[-1].t, snapshots=len(states),
                   hs_initial=first["hs"], hs_final=last["hs"])
    _write_json(os.path.join(out, "summary.json"), summary)
    print(json.dumps({k: summary[k] for k in ("t_final", "hs_initial", "hs_final")}))
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _load(args)
    grid = cfg.sim.grid
    rule = default_rule(grid)
    if cfg.rule_perturbation > 0:
        rule = rule.perturbed(cfg.rule_perturbation, seed=cfg.sim.seed)
    outcomes = run_identity_suite(grid, rule, seed=cfg.campaign.ensemble.seed)
    for o in outcomes:
        print(o.line())
    return EXIT_OK if all(o.passed for o in outcomes if o.asserted) else EXIT_IDENTITY


def cmd_campaign(args) -> int:
    cfg = _load(args)
    out = _out_dir(args, cfg, "campaign")
    camp = cfg.campaign if cfg.campaign.threads else replace(cfg.campaign, threads=_threads(args))
    reports = campaign(camp, out)
    rows = refinement_table(reports)
    io.write_rows(rows, os.path.join(out, "refinement.csv"))
    for r in rows:
        tag = "FLAG" if r["flag"] else "ok"
        print(f"{tag:4s} {r['id']:15s} median {r['median_coarse']:.4g} -> {r['median_fine']:.4g}"
              f"  max {r['max_coarse']:.4g} -> {r['max_fine']:.4g}")
    return EXIT_REFINEMENT if any(r["flag"] for r in rows) else EXIT_OK


def cmd_convergence(args) -> int:
    cfg = _load(args)
    out = _out_dir(args, cfg, "convergence")
    os.makedirs(out, exist_ok=True)
    rows = cauchy_study(initial_field(cfg.sim), cfg.cutoffs, cfg.s_prime, cfg.sim,
                        threads=_threads(args))
    io.write_rows(rows, os.path.join(out, "cauchy.csv"))
    col = [r["distance"] for r in rows]
    for r in rows:
        print(f"n={r['n']:g} -> {r['n_next']:g}: {r['distance']:.6e}")
    monotone = all(b <= a * (1 + CAUCHY_SLACK) for a, b in zip(col, col[1:]))
    return EXIT_OK if monotone else EXIT_IDENTITY


def _parse_besov(text: str) -> BesovSpec:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("besov spec must be s:p:q, e.g. 0.5:2:2")
    s, p, q = float(parts[0]), float(parts[1]), float(parts[2])
    return BesovSpec(s, p, int(q))


def cmd_norms(args) -> int:
    f = io.load_field(args.field)
    result = {}
    for sigma in args.sobolev or []:
        result[f"sobolev:{sigma:g}"] = sobolev_norm(f, sigma)
    for spec in args.besov or []:
        result[f"besov:{spec.s:g}:{spec.p:g}:{spec.q:g}"] = besov_norm(f, spec)
    for nu in args.holder or []:
        result[f"holder:{nu:g}"] = holder_norm(f, nu)
    for p in args.lp or []:
        result[f"lp:{p:g}"] = lp_norm(f, p)
    if args.lipschitz:
        result["lipschitz"] = lipschitz_sup(f)
    print(json.dumps(result, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI run configuration")
    common.add_argument("--threads", type=int, help="worker threads (default: logical cores)")
    common.add_argument("--out", help="output directory (fallback: $MUSKATLAB_OUT)")
    common.add_argument("--seed", type=int, help="override every seed in the config")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="muskatlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", parents=[common], help="evolve the truncated flow").set_defaults(func=cmd_simulate)
    sub.add_parser("verify", parents=[common], help="operator identity suite").set_defaults(func=cmd_verify)
    sub.add_parser("campaign", parents=[common], help="estimate campaign at N and 2N").set_defaults(func=cmd_campaign)
    sub.add_parser("convergence", parents=[common], help="Galerkin Cauchy study").set_defaults(func=cmd_convergence)
    norms = sub.add_parser("norms", parents=[common], help="norms of a dumped field")
    norms.add_argument("field", help='JSON dump {"L", "N", "samples"}')
    norms.add_argument("--sobolev", type=float, action="append", metavar="SIGMA")
    norms.add_argument("--besov", type=_parse_besov, action="append", metavar="S:P:Q")
    norms.add_argument("--holder", type=float, action="append", metavar="NU")
    norms.add_argument("--lp", type=float, action="append", metavar="P")
    norms.add_argument("--lipschitz", action="store_true")
    norms.set_defaults(func=cmd_norms)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, io.SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MuskatLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
