"""Command line front end: point, sweep, trace and compare subcommands.

Exit codes: 0 success, 2 invalid configuration, 3 numeric degeneracy
(flagged records present), 4 I/O error.
"""

import argparse
import sys

from .experiment import (ConfigError, collect_sweep, config_from_mapping,
                         compare_summary, emit_trace, parse_config_file,
                         render_records, run_point, run_sweep, seed_offset,
                         sort_records)

_OVERRIDE_KEYS = (
    "n_tx", "m_s", "m_c", "n_symbols", "var_eta", "p_total", "snr_s_db",
    "snr_c_db_list", "seeds", "scheme", "dual_init", "grid_l", "tol", "eps",
    "curve_points", "jobs",
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cas",
        description="Transmit power allocation experiments for "
                    "communication-assisted sensing")
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "point": "solve one (seed, snr) point for the configured schemes",
        "sweep": "solve the full seed x snr grid and write records",
        "trace": "record per-iteration objectives of both dual warm starts",
        "compare": "sweep both schemes and print per-snr mean distortions",
    }
    for name, help_text in specs.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="flat key = value configuration file")
        p.add_argument("--output", help="output path (overrides output_path)")
        p.add_argument("--format", choices=("csv", "json"),
                       help="output format (overrides output_format)")
        for key in _OVERRIDE_KEYS:
            p.add_argument("--" + key.replace("_", "-"), dest=key,
                           metavar="V", help=argparse.SUPPRESS)
        if name in ("point", "trace"):
            p.add_argument("--seed", type=int,
                           help="channel seed (default: first configured seed)")
            p.add_argument("--snr-c-db", type=float, dest="snr_c_db",
                           help="forward-link SNR in dB (default: first configured)")
    return parser


def _build_config(args):
    mapping = {}
    if args.config:
        mapping.update(parse_config_file(args.config))
    explicit_output = args.output is not None or "output_path" in mapping
    for key in _OVERRIDE_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            mapping[key] = value
    if args.output is not None:
        mapping["output_path"] = args.output
    if args.format is not None:
        mapping["output_format"] = args.format
    if args.command == "compare":
        mapping["scheme"] = "both"
    if args.command == "trace" and not explicit_output:
        mapping["output_path"] = "trace.csv"
    return config_from_mapping(mapping)


def _cmd_point(cfg, args) -> int:
    seed = args.seed if args.seed is not None else cfg.seeds[0]
    snr = args.snr_c_db if args.snr_c_db is not None else cfg.snr_c_db_list[0]
    records = sort_records(run_point(cfg, seed + seed_offset(), snr))
    text = render_records(records, cfg.output_format)
    if args.output is not None:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 3 if any(r.flagged for r in records) else 0


def _cmd_sweep(cfg) -> int:
    path, flagged = run_sweep(cfg)
    print(f"wrote {path}" + (f" ({flagged} flagged records)" if flagged else ""))
    return 3 if flagged else 0


def _cmd_trace(cfg, args) -> int:
    seed = args.seed if args.seed is not None else cfg.seeds[0]
    snr = args.snr_c_db if args.snr_c_db is not None else cfg.snr_c_db_list[0]
    path = emit_trace(cfg, seed, snr)
    print(f"wrote {path}")
    return 0


def _cmd_compare(cfg) -> int:
    with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
        records = collect_sweep(cfg)
        fh.write(render_records(records, cfg.output_format))
    print(compare_summary(records))
    print(f"records written to {cfg.output_path}")
    return 3 if any(r.flagged for r in records) else 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _build_config(args)
        if args.command == "point":
            return _cmd_point(cfg, args)
        if args.command == "sweep":
            return _cmd_sweep(cfg)
        if args.command == "trace":
            return _cmd_trace(cfg, args)
        return _cmd_compare(cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    except RuntimeError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
