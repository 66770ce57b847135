"""Command-line entry point.

Subcommands: simulate (value clouds), covariance (exact C(n) reports),
experiment (convergence runs from a config file), report (tables, plot
data and figures from summaries), plus a hidden `oracle` for manual
certification of the reference implementations.

Exit codes: 0 success, 1 runtime/IO failure, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from . import rng as rngmod
from .coeffmodels import make_model, sample_coefficients
from .covariance import FrequencyTuple, covariance_exact
from .rng import derive_stream
from .mclab import ConfigError, ExperimentConfig, run_convergence
from .oracles import oracle_covariance, oracle_fourier_sum, oracle_mmd_terms
from .report import (
    comparison_table,
    default_out_dir,
    render_covariance_figure,
    render_metric_figures,
    summary_table,
    write_gnuplot_script,
    write_series,
)
from .spectral import sample_value_cloud


class CliError(Exception):
    def __init__(self, message: str, code: int = 2):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class RunManifest:
    """Provenance record written next to every output set."""

    config_hash: str
    tool_version: str
    master_seed: int | None
    created_utc: str
    outputs: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "config_hash": self.config_hash,
            "tool_version": self.tool_version,
            "master_seed": self.master_seed,
            "created_utc": self.created_utc,
            "outputs": list(self.outputs),
        }


def canonical_config_bytes(config: dict) -> bytes:
    return json.dumps(config, sort_keys=True, separators=(",", ":")).encode()


def config_hash(config: dict) -> str:
    return hashlib.sha256(canonical_config_bytes(config)).hexdigest()


def _timestamp() -> str:
    # honors SOURCE_DATE_EPOCH so reruns can be byte-identical
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = int(epoch) if epoch else int(time.time())
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(t))


def write_manifest(out_dir: Path, config: dict, seed, outputs) -> Path:
    manifest = RunManifest(
        config_hash=config_hash(config),
        tool_version=__version__,
        master_seed=seed,
        created_utc=_timestamp(),
        outputs=tuple(str(p.name) for p in outputs),
    )
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest.to_dict(), indent=2, sort_keys=True) + "\n")
    return path


def _model_from_args(args):
    return make_model(args.model, args.dof)


def _parse_nus(text: str) -> FrequencyTuple:
    try:
        return FrequencyTuple(tuple(float(v) for v in text.split(",")))
    except ValueError as exc:
        raise CliError(f"--nus: {exc}")


def _parse_schedule(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",")]
    except ValueError:
        raise CliError("--n-schedule: expected a comma-separated integer list")
    if not values or any(v < 1 for v in values):
        raise CliError("--n-schedule: entries must be positive")
    return values


def cmd_simulate(args) -> int:
    try:
        model = _model_from_args(args)
    except ValueError as exc:
        raise CliError(str(exc))
    if args.n < 1:
        raise CliError("--n must be >= 1")
    if args.m < 1:
        raise CliError("--m must be >= 1")
    out_dir = default_out_dir(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    realization = sample_coefficients(
        model, args.n, args.seed, derive_stream(rngmod.COEFFICIENTS, args.stream)
    )
    nus, values = sample_value_cloud(
        realization, args.m, args.seed, derive_stream(rngmod.FREQUENCIES, args.stream)
    )
    csv_path = out_dir / "values.csv"
    with csv_path.open("w", newline="") as fh:
        fh.write("nu,re,im\n")
        for nu, v in zip(nus, values):
            fh.write(f"{nu:.17g},{v.real:.17g},{v.imag:.17g}\n")
    config = {
        "command": "simulate",
        "model": {"family": model.family, **({"dof": model.dof} if model.dof else {})},
        "n": args.n,
        "m": args.m,
        "seed": args.seed,
        "stream": args.stream,
    }
    write_manifest(out_dir, config, args.seed, [csv_path])
    print(f"wrote {csv_path}")
    return 0


def cmd_covariance(args) -> int:
    tup = _parse_nus(args.nus)
    schedule = _parse_schedule(args.n_schedule)
    try:
        reports = [
            covariance_exact(tup, n, strict=args.strict, method=args.method)
            for n in schedule
        ]
    except ValueError as exc:
        raise CliError(str(exc))
    out_dir = default_out_dir(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    records = [r.to_dict() for r in reports]
    json_path = out_dir / "covariance.json"
    json_path.write_text(json.dumps(records, indent=2) + "\n")
    outputs = [json_path]
    if args.plot_data:
        series = out_dir / "covariance_deviation.csv"
        with series.open("w", newline="") as fh:
            fh.write("n,deviation,bound\n")
            for rec in records:
                bound = "" if rec["bound"] is None else f"{rec['bound']:.17g}"
                fh.write(f"{rec['n']},{rec['deviation']:.17g},{bound}\n")
        outputs.append(series)
        outputs.append(render_covariance_figure(records, out_dir))
    config = {
        "command": "covariance",
        "nus": list(tup.nus),
        "n_schedule": schedule,
        "strict": args.strict,
        "method": args.method,
    }
    write_manifest(out_dir, config, None, outputs)
    print(f"wrote {json_path}")
    return 0


def cmd_experiment(args) -> int:
    path = Path(args.config)
    try:
        raw = json.loads(path.read_text())
    except OSError as exc:
        raise CliError(f"cannot read config: {exc}", code=1)
    except json.JSONDecodeError as exc:
        raise CliError(
            f"config is not valid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}"
        )
    try:
        config = ExperimentConfig.from_dict(raw)
    except ConfigError as exc:
        raise CliError("invalid config:\n  " + "\n  ".join(exc.errors))
    report = run_convergence(config, workers=args.workers)
    out_dir = default_out_dir(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "distances.csv"
    with csv_path.open("w", newline="") as fh:
        fh.write("n,metric,replicate,distance,is_baseline\n")
        for n, metric, r, d, is_base in report.rows:
            fh.write(f"{n},{metric},{r},{d:.17g},{int(is_base)}\n")
    summary = dict(report.summary)
    summary["config_hash"] = config_hash(config.to_dict())
    summary["tool_version"] = __version__
    summary_path = out_dir / "summary.json"
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    write_manifest(out_dir, config.to_dict(), config.master_seed, [csv_path, summary_path])
    print(f"wrote {csv_path} and {summary_path}")
    return 0


def _load_summary(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", code=1)
    try:
        summary = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(
            f"{path}: invalid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}"
            f" (char {exc.pos})",
            code=1,
        )
    if not isinstance(summary, dict) or "metrics" not in summary:
        raise CliError(f"{path}: not an experiment summary (missing 'metrics')", code=1)
    return summary


def cmd_report(args) -> int:
    summary = _load_summary(args.summary)
    out_dir = default_out_dir(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = []
    if args.compare:
        other = _load_summary(args.compare)
        table = comparison_table(summary, other, labels=(args.summary, args.compare))
    else:
        table = summary_table(summary)
    table_path = out_dir / "report.txt"
    table_path.write_text(table)
    outputs.append(table_path)
    sys.stdout.write(table)
    if not args.compare:
        outputs += write_series(summary, out_dir)
        outputs.append(write_gnuplot_script(summary, out_dir))
        if args.figures:
            outputs += render_metric_figures(summary, out_dir)
    config = {"command": "report", "inputs": [args.summary] + ([args.compare] if args.compare else [])}
    write_manifest(out_dir, config, summary.get("master_seed"), outputs)
    return 0


def cmd_oracle(args) -> int:
    if args.kind == "fourier":
        rng = np.random.default_rng(args.seed)
        coeffs = rng.standard_normal(args.n)
        res = oracle_fourier_sum(coeffs, args.nu)
        payload = {
            "method": res.method,
            "value": [res.value.real, res.value.imag],
            "error_estimate": res.error_estimate,
        }
    elif args.kind == "mmd":
        rng = np.random.default_rng(args.seed)
        xs = rng.standard_normal((4, 2))
        res = oracle_mmd_terms(args.bandwidth, xs, n_draws=args.draws, seed=args.seed)
        (tv, te), (t0, t0e) = res.value
        payload = {
            "method": res.method,
            "t0": t0,
            "t0_stderr": t0e,
            "t_values": tv.tolist(),
            "t_stderrs": te.tolist(),
        }
    else:
        tup = _parse_nus(args.nus)
        res = oracle_covariance(tup.nus, args.n)
        payload = {"method": res.method, "c": res.value.tolist()}
    print(json.dumps(payload, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="randfourier",
        description="Random-coefficient Fourier sums: simulation, covariance, convergence experiments.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(
        dest="command", metavar="{simulate,covariance,experiment,report}"
    )

    p = sub.add_parser("simulate", help="sample the value cloud of one realization")
    p.add_argument("--model", required=True, help="rademacher|uniform|gaussian|exponential|student")
    p.add_argument("--dof", type=float, default=None, help="degrees of freedom (student only)")
    p.add_argument("--n", type=int, required=True, help="coefficient count")
    p.add_argument("--m", type=int, required=True, help="frequency sample count")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--stream", type=int, default=0)
    p.add_argument("--out", default=None, help="output directory (default: $RANDFOURIER_OUT or .)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("covariance", help="exact covariance reports for a frequency tuple")
    p.add_argument("--nus", required=True, help="comma list, e.g. 0.13,0.31")
    p.add_argument("--n-schedule", required=True, help="comma list of n values")
    p.add_argument("--method", choices=("closed", "direct"), default="closed")
    p.add_argument("--no-strict", dest="strict", action="store_false")
    p.add_argument("--plot-data", action="store_true", help="emit deviation series and figure")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_covariance)

    p = sub.add_parser("experiment", help="run a convergence experiment from a config file")
    p.add_argument("config", help="JSON config path (see README for the schema)")
    p.add_argument("--workers", type=int, default=1, help="parallel replicate workers")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("report", help="render tables, plot data and figures from a summary")
    p.add_argument("summary", help="summary.json from an experiment run")
    p.add_argument("--compare", default=None, help="second summary for a side-by-side table")
    p.add_argument("--no-figures", dest="figures", action="store_false")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_report)

    # hidden: manual certification of the reference implementations
    p = sub.add_parser("oracle")
    psub = p.add_subparsers(dest="kind", required=True)
    pf = psub.add_parser("fourier")
    pf.add_argument("--n", type=int, default=256)
    pf.add_argument("--nu", type=float, default=0.137)
    pf.add_argument("--seed", type=int, default=0)
    pm = psub.add_parser("mmd")
    pm.add_argument("--bandwidth", type=float, default=1.0)
    pm.add_argument("--draws", type=int, default=10**6)
    pm.add_argument("--seed", type=int, default=0)
    pc = psub.add_parser("covariance")
    pc.add_argument("--nus", required=True)
    pc.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
