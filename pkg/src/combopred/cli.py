"""Command-line interface: run games, verify bounds and lemmas, sweep parameters.

Flags may be preloaded from a JSON config file (``--config``); explicit
command-line flags override file values.  Exit status is 0 iff every
requested check passed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .action_sets import parse_action_set
from .forecasters import parse_forecaster
from .harness import (
    GameConfig,
    known_bounds,
    run_game,
    verify_bound,
    verify_lemma,
    write_rounds_csv,
    write_summary_csv,
)

_ALL_PARSERS: list[argparse.ArgumentParser] = []


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    # required-ness is checked after config-file defaults are merged in
    p.add_argument("--set", dest="set_spec", default=None, help="action set, e.g. ksubsets:d=6,k=2")
    p.add_argument("--forecaster", default=None, help="e.g. linexp:eta=auto:thm4")
    p.add_argument("--adversary", default=None, help="e.g. bernoulli:means=0.4,0.6")
    p.add_argument("--feedback", choices=["full", "semibandit", "bandit"], default="full")
    p.add_argument("--constraint", choices=["linf", "l2"], default="linf")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exact", action="store_true", help="exact expectation (full info, deterministic)")
    p.add_argument("--out", default=None, help="CSV output: a directory or a rounds .csv path")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="combopred", description=__doc__)
    parser.add_argument("--config", default=None, help="JSON file of default flag values")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="play one game configuration")
    _add_run_flags(run_p)

    verify_p = sub.add_parser("verify", help="check a proven bound or lemma")
    vsub = verify_p.add_subparsers(dest="what", required=True)
    vb = vsub.add_parser("bound")
    vb.add_argument("--id", required=True, help=f"one of {', '.join(known_bounds())}")
    vb.add_argument("--d", type=int, default=None)
    vb.add_argument("--n", type=int, default=None)
    vb.add_argument("--k", type=int, default=None)
    vb.add_argument("--q", type=float, default=None)
    vb.add_argument("--reps", type=int, default=None)
    vb.add_argument("--seed", type=int, default=None)
    vb.add_argument("--forecaster", default=None)
    vl = vsub.add_parser("lemma")
    vl.add_argument("--id", required=True, choices=["tech1", "klbinomials", "log4"])
    vl.add_argument("--k-max", dest="k_max", type=int, default=None)
    vl.add_argument("--n-max", dest="n_max", type=int, default=None)
    vl.add_argument("--grid", type=int, default=None)

    sweep_p = sub.add_parser("sweep", help="repeat a run over a grid of one parameter")
    _add_run_flags(sweep_p)
    sweep_p.add_argument("--param", required=True,
                         choices=["n", "seed", "reps", "eta", "q", "gamma", "eps"])
    sweep_p.add_argument("--values", required=True, help="comma-separated values")

    _ALL_PARSERS.clear()
    _ALL_PARSERS.extend([parser, run_p, vb, vl, sweep_p])
    return parser


def _apply_config(argv: list[str], parser: argparse.ArgumentParser) -> None:
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config", default=None)
    known, _ = probe.parse_known_args(argv)
    if not known.config:
        return
    cfg = json.loads(Path(known.config).read_text())
    cfg = {key.replace("-", "_"): val for key, val in cfg.items()}
    if "set" in cfg:
        cfg["set_spec"] = cfg.pop("set")
    for p in _ALL_PARSERS:
        p.set_defaults(**cfg)


def _respec(spec: str, key: str, value: str) -> str:
    """Rewrite one key of a kind:key=value,... spec string (adding it if absent)."""
    kind, _, body = spec.partition(":")
    items = [item for item in body.split(",") if item]
    out, replaced = [], False
    for item in items:
        if item.partition("=")[0].strip() == key:
            out.append(f"{key}={value}")
            replaced = True
        else:
            out.append(item)
    if not replaced:
        out.append(f"{key}={value}")
    return f"{kind}:{','.join(out)}"


def _run_once(args) -> tuple[int, float, float]:
    aset = parse_action_set(args.set_spec)
    config = GameConfig(n=args.n, feedback=args.feedback, constraint=args.constraint,
                        reps=args.reps, seed=args.seed)
    trace = run_game(config, args.forecaster, args.adversary, aset, exact=args.exact)
    if trace.aborted_round is not None:
        print(f"run aborted at round {trace.aborted_round}: dual step left the mirror map's range")
    print(
        f"regret mean={trace.regret_mean:.6g} stderr={trace.regret_stderr:.4g} "
        f"reps={trace.regret.size} rounds={trace.t.size} best_vertex={trace.best_vertex}"
    )
    if trace.bound_margin is not None:
        print(f"descent certificate worst margin: {trace.bound_margin:.3e}")
    if args.out:
        out = Path(args.out)
        if out.suffix == ".csv":
            rounds_path, summary_path = out, out.parent / "summary.csv"
            out.parent.mkdir(parents=True, exist_ok=True)
        else:
            out.mkdir(parents=True, exist_ok=True)
            rounds_path, summary_path = out / "rounds.csv", out / "summary.csv"
        write_rounds_csv(rounds_path, trace)
        write_summary_csv(summary_path, trace)
        print(f"wrote {rounds_path} and {summary_path}")
    return 0, trace.regret_mean, trace.regret_stderr


def _cmd_run(args) -> int:
    code, _, _ = _run_once(args)
    return code


def _cmd_sweep(args) -> int:
    values = [v for v in args.values.split(",") if v]
    rows = []
    for val in values:
        sub = argparse.Namespace(**vars(args))
        if args.param in ("n", "seed", "reps"):
            setattr(sub, args.param, int(val))
        elif args.param == "eps":
            sub.adversary = _respec(args.adversary, "eps", val)
        else:
            sub.forecaster = _respec(args.forecaster, args.param, val)
        print(f"--- {args.param}={val}")
        _, mean, stderr = _run_once(sub)
        rows.append((val, mean, stderr))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "sweep.csv", "w") as fh:
            fh.write(f"{args.param},regret_mean,regret_stderr\n")
            for val, mean, stderr in rows:
                fh.write(f"{val},{mean!r},{stderr!r}\n")
        print(f"wrote {out / 'sweep.csv'}")
    return 0


def _cmd_verify(args) -> int:
    if args.what == "bound":
        params = {
            key: val
            for key, val in (
                ("d", args.d), ("n", args.n), ("k", args.k), ("q", args.q),
                ("reps", args.reps), ("seed", args.seed), ("forecaster", args.forecaster),
            )
            if val is not None
        }
        report = verify_bound(args.id, **params)
    else:
        params = {}
        if args.k_max is not None:
            params["k_max"] = args.k_max
        if args.n_max is not None:
            params["n_max"] = args.n_max
        if args.grid is not None:
            params["grid"] = args.grid
        report = verify_lemma(args.id, **params)
    print(report.line())
    return 0 if report.passed else 1


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    _apply_config(argv, parser)
    args = parser.parse_args(argv)
    if args.command in ("run", "sweep"):
        missing = [name for name, val in
                   (("--set", args.set_spec), ("--forecaster", args.forecaster),
                    ("--adversary", args.adversary)) if val is None]
        if missing:
            parser.error(f"missing required flags (cli or config file): {', '.join(missing)}")
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "sweep":
        return _cmd_sweep(args)
    return _cmd_verify(args)


if __name__ == "__main__":
    raise SystemExit(main())
