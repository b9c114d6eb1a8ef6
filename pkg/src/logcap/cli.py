"""Command-line front end.

Subcommands map one-to-one onto the experiment runners; every run prints (or
writes) a single result table.  Exit status: 0 when every pass flag and claim
holds, 3 when the run completed but a check failed, 1 on domain errors
(bad geometry, diverged schedules, policy refusals), 2 on bad usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bounds import CoverDescription
from .errors import LogCapError
from .experiments import (
    ExperimentConfig,
    emit,
    run_averaged_convergence,
    run_bound_report,
    run_counterexample_check,
    run_phase_scan,
    run_redistribute_once,
    run_redistribution_convergence,
)


def _int_list(text: str):
    try:
        return tuple(int(x) for x in text.split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str):
    try:
        return tuple(float(x) for x in text.split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", dest="fmt", choices=("csv", "json", "plot"), default=None,
                   help="output format (default csv)")
    p.add_argument("--seed", type=int, default=None, help="RNG seed for sampled checks")
    p.add_argument("--out", type=str, default=None, help="directory for output files "
                   "(omit to print to stdout)")
    p.add_argument("--config", type=str, default=None,
                   help="JSON file with defaults; explicit flags win")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="logcap",
        description="logarithmic-capacity experiments on uniform interval levels",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("redistribute", help="condition Lebesgue measure on one level")
    p.add_argument("--n", type=int, default=None, help="number of pieces")
    p.add_argument("--log-r", dest="log_r", type=float, default=None,
                   help="log piece length (negative)")
    _add_common(p)

    p = sub.add_parser("converge", help="energy of conditioned levels along an n-grid")
    p.add_argument("--schedule", type=str, default=None,
                   help="radius schedule, e.g. subexp:0.5, powexp:3, dyadic")
    p.add_argument("--n-grid", dest="n_grid", type=_int_list, default=None,
                   help="comma-separated level sizes")
    _add_common(p)

    p = sub.add_parser("averaged", help="prime-window averaged level energies")
    p.add_argument("--alpha", type=float, default=None, help="powexp schedule exponent")
    p.add_argument("--m-grid", dest="m_grid", type=_int_list, default=None,
                   help="comma-separated window starts")
    p.add_argument("--pairs", type=int, default=None,
                   help="sampled level pairs per window")
    _add_common(p)

    p = sub.add_parser("phase", help="capacity bounds across the alpha transition")
    p.add_argument("--alpha-grid", dest="alpha_grid", type=_float_list, default=None,
                   help="comma-separated schedule exponents")
    p.add_argument("--m-grid", dest="m_grid", type=_int_list, default=None,
                   help="comma-separated tail starts for the bound rows")
    p.add_argument("--evidence-m-grid", dest="evidence_m_grid", type=_int_list,
                   default=None, help="window starts for the subcritical evidence rows")
    p.add_argument("--terms", type=int, default=None, help="partial-sum length")
    _add_common(p)

    p = sub.add_parser("counterexample", help="nested dyadic tower accounting")
    p.add_argument("--n1", type=int, default=None, help="first tower level")
    p.add_argument("--depth", type=int, default=None, help="tower depth")
    _add_common(p)

    p = sub.add_parser("bound", help="capacity bound for an explicit cover")
    p.add_argument("--cover", type=str, default=None,
                   help="JSON file: {log_lengths: [...], multiplicities: [...]}")
    _add_common(p)

    return ap


def _build_config(args: argparse.Namespace) -> ExperimentConfig:
    data = {}
    if args.config:
        path = Path(args.config)
        if not path.exists():
            raise LogCapError(f"config file not found: {path}")
        loaded = json.loads(path.read_text())
        if not isinstance(loaded, dict):
            raise LogCapError("config file must hold a JSON object")
        data.update(loaded)
    for key, value in vars(args).items():
        if key in ("command", "config"):
            continue
        if value is not None:
            data[key] = value
    data.pop("config", None)
    return ExperimentConfig.from_mapping(args.command, data)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _build_config(args)
        if cfg.command == "redistribute":
            _, _, table = run_redistribute_once(cfg)
        elif cfg.command == "converge":
            table = run_redistribution_convergence(cfg)
        elif cfg.command == "averaged":
            table = run_averaged_convergence(cfg)
        elif cfg.command == "phase":
            table = run_phase_scan(cfg)
        elif cfg.command == "counterexample":
            table = run_counterexample_check(cfg)
        elif cfg.command == "bound":
            if cfg.cover is None:
                raise LogCapError("bound needs --cover pointing at a cover JSON file")
            cover_path = Path(cfg.cover)
            if not cover_path.exists():
                raise LogCapError(f"cover file not found: {cover_path}")
            cover = CoverDescription.from_dict(json.loads(cover_path.read_text()))
            table = run_bound_report(cfg, cover)
        else:  # pragma: no cover - argparse guards this
            raise LogCapError(f"unknown command {cfg.command!r}")
    except LogCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    result = emit(table, cfg.fmt, cfg.out, cfg.command)
    if cfg.out is None:
        sys.stdout.write(result)
    else:
        for p in result:
            print(p)
    return 0 if table.all_pass() else 3


if __name__ == "__main__":
    raise SystemExit(main())
