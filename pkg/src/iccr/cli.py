"""Command-line interface.

Subcommands: ``region``, ``simulate``, ``sweep``, ``table2``,
``cognitive-ic`` and ``verify``. Output goes to stdout unless ``--out`` is
given; a relative ``--out`` path is resolved against ``$ICCR_OUTPUT_DIR``
when that variable is set.

Exit codes: 0 on success, 1 when ``verify`` finds a mismatch, 2 on usage
errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import sys
from pathlib import Path

from .channel import AntennaConfig, FeedbackMode
from .montecarlo import (
    DEFAULT_SNR_GRID,
    DEFAULT_SWEEP_TRIALS,
    TrialBatchSpec,
    batch_csv,
    estimate_dof_sweep,
    run_batch,
)
from .regions import (
    achievable_region_no_cr_feedback,
    cognitive_ic_bounds,
    region_csi,
    region_for_mode,
    region_no,
    region_outer_delayed,
    region_output,
    region_perfect_siso,
    region_shannon,
    sum_dof_comparison,
)
from .schemes import build_scheme

OUTPUT_DIR_ENV = "ICCR_OUTPUT_DIR"

REGIONS = {
    "csi": region_csi,
    "output": region_output,
    "shannon": region_shannon,
    "no": region_no,
    "outer": region_outer_delayed,
    "no-cr-feedback": achievable_region_no_cr_feedback,
}


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _snr_list(text: str) -> tuple:
    try:
        return tuple(float(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad SNR list {text!r}") from None


def _add_config(p, required=True):
    p.add_argument("--mt", type=_positive, required=required, help="antennas per transmitter")
    p.add_argument("--mc", type=_positive, required=required, help="relay antennas")
    p.add_argument("--mr", type=_positive, required=required, help="antennas per receiver")


def _add_mode(p):
    p.add_argument("--mode", choices=["csit", "output", "shannon", "none"], default="csit")
    p.add_argument("--no-relay-feedback", action="store_true",
                   help="relay gets no feedback, only the transmitters do")


def _add_output(p):
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iccr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("region", help="exact DoF region for one configuration")
    _add_config(p, required=False)
    p.add_argument("--regime", choices=sorted(REGIONS) + ["perfect"], default="csi")
    _add_output(p)

    for name, helptext in (("simulate", "noiseless decodability batch"),
                           ("verify", "check scheme rate against the region's symmetric vertex")):
        p = sub.add_parser(name, help=helptext)
        _add_config(p)
        _add_mode(p)
        p.add_argument("--trials", type=_positive, default=1000 if name == "simulate" else 100)
        p.add_argument("--seed", type=int, default=0)
        _add_output(p)

    p = sub.add_parser("sweep", help="finite-SNR rate sweep and DoF slope")
    _add_config(p)
    _add_mode(p)
    p.add_argument("--trials", type=_positive, default=DEFAULT_SWEEP_TRIALS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--snr", type=_snr_list, default=DEFAULT_SNR_GRID, help="comma-separated dB values")
    _add_output(p)

    p = sub.add_parser("table2", help="broadcast / relay / interference channel sum DoF")
    _add_config(p, required=False)
    p.add_argument("--grid", action="store_true", help="the 20-configuration grid with even relay sizes")
    _add_output(p)

    p = sub.add_parser("cognitive-ic", help="cognitive interference channel bounds")
    p.add_argument("--mt", type=_positive, required=True)
    p.add_argument("--mcog", type=_positive, required=True, help="cognitive transmitter antennas")
    p.add_argument("--mr", type=_positive, required=True)
    _add_output(p)
    return parser


TABLE2_GRID = tuple(
    AntennaConfig(mt, mc, mr) for mt, mc, mr in itertools.product((1, 2), (2, 4), range(1, 6))
)


def _config(args) -> AntennaConfig:
    return AntennaConfig(args.mt, args.mc, args.mr)


def _mode(args) -> FeedbackMode:
    return FeedbackMode.parse(args.mode, not args.no_relay_feedback)


def _csv_text(rows: list) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _region_rows(poly) -> list:
    d = poly.to_dict()
    return [
        {"d_a": v[0], "d_b": v[1], "d_a_float": f[0], "d_b_float": f[1], "sum_dof": d["sum_dof"]}
        for v, f in zip(d["vertices"], d["vertices_float"])
    ]


def _cmd_region(args, parser):
    if args.regime == "perfect":
        poly = region_perfect_siso()
        cfg = None
    else:
        if None in (args.mt, args.mc, args.mr):
            parser.error("region needs --mt, --mc and --mr")
        cfg = _config(args)
        poly = REGIONS[args.regime](cfg)
    if args.format == "csv":
        return _csv_text(_region_rows(poly)), 0
    doc = {"config": None if cfg is None else str(cfg), "regime": args.regime, **poly.to_dict()}
    return json.dumps(doc, indent=2), 0


def _cmd_simulate(args, parser):
    stats = run_batch(TrialBatchSpec(_config(args), _mode(args), args.trials, args.seed))
    if args.format == "csv":
        return batch_csv([stats]), 0
    return json.dumps(stats.to_dict(), indent=2), 0


def _cmd_verify(args, parser):
    cfg, mode = _config(args), _mode(args)
    plan = build_scheme(cfg, mode)
    target = region_for_mode(cfg, mode).symmetric_point()[0]
    stats = run_batch(TrialBatchSpec(cfg, mode, args.trials, args.seed))
    ok = plan.per_user_dof == target and stats.decodable_count == stats.trials
    doc = {
        "config": str(cfg),
        "mode": str(mode),
        "scheme": plan.name,
        "symbols_per_user": plan.symbols_per_user,
        "frame_length": plan.frame_length,
        "per_user_dof": str(plan.per_user_dof),
        "region_symmetric_vertex": str(target),
        "decodable_trials": stats.decodable_count,
        "trials": stats.trials,
        "match": ok,
    }
    if args.format == "csv":
        return _csv_text([doc]), 0 if ok else 1
    return json.dumps(doc, indent=2), 0 if ok else 1


def _cmd_sweep(args, parser):
    if len(args.snr) < 1:
        parser.error("--snr needs at least one value")
    res = estimate_dof_sweep(TrialBatchSpec(_config(args), _mode(args), args.trials, args.seed, args.snr))
    return (res.to_csv() if args.format == "csv" else res.to_json()), 0


def _cmd_table2(args, parser):
    if args.grid:
        configs = TABLE2_GRID
    elif None in (args.mt, args.mc, args.mr):
        parser.error("table2 needs --mt, --mc and --mr, or --grid")
    else:
        configs = [_config(args)]
    rows = [sum_dof_comparison(c).to_dict() for c in configs]
    if args.format == "csv":
        return _csv_text(rows), 0
    return json.dumps(rows if args.grid else rows[0], indent=2), 0


def _cmd_cognitive(args, parser):
    if args.mcog <= args.mt:
        parser.error("--mcog must exceed --mt")
    lower, upper = cognitive_ic_bounds(args.mt, args.mcog, args.mr)
    if args.format == "csv":
        rows = [dict(bound=name, **r) for name, poly in (("lower", lower), ("upper", upper))
                for r in _region_rows(poly)]
        return _csv_text(rows), 0
    doc = {"m_t": args.mt, "m_cog": args.mcog, "m_r": args.mr,
           "lower": lower.to_dict(), "upper": upper.to_dict()}
    return json.dumps(doc, indent=2), 0


COMMANDS = {
    "region": _cmd_region,
    "simulate": _cmd_simulate,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
    "table2": _cmd_table2,
    "cognitive-ic": _cmd_cognitive,
}


def _write(text: str, out):
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    path = Path(out)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text if text.endswith("\n") else text + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = COMMANDS[args.command](args, parser)
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    _write(text, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
