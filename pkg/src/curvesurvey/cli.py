"""Command-line surface.

Subcommands: estimate, bands, montecarlo, oracle-check.  All randomness
flows from --seed; when it is absent a fresh seed is generated and recorded
in the output metadata so every run can be reproduced.

Exit codes: 0 success, 2 validation error, 3 numerical degeneracy,
4 oracle failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import secrets
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bands import build_band
from .config import (
    RunConfig,
    build_design,
    build_population,
    campaign_sizes,
    estimator_floor,
    load_config,
)
from .covariance import ma_covariance_estimate
from .designs import Sample, SamplingDesign, draw, replicate_rng
from .errors import (
    NumericalError,
    OracleFailure,
    ValidationError,
)
from .estimators import (
    difference_mean,
    hajek_mean,
    ht_mean,
    model_assisted_mean,
)
from .io import (
    read_sample_indices,
    write_covariance_csv,
    write_curve_csv,
    write_metadata,
)
from .montecarlo import run_campaign
from .oracle import default_fixture, format_report, oracle_check


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return secrets.randbits(32)


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_inputs(cfg: RunConfig, seed: int):
    pop, labels = build_population(cfg, seed)
    design = build_design(cfg, pop.N, labels)
    return pop, design


def _get_sample(cfg: RunConfig, design: SamplingDesign, seed: int) -> Sample:
    path = cfg.design.get("sample_file")
    if path:
        return Sample(read_sample_indices(path, design.N), design)
    return draw(design, replicate_rng(seed, 0, 0))


def _point_estimate(cfg, pop, sample, a):
    kind = cfg.estimator.get("kind", "ma")
    if kind == "ht":
        return ht_mean(pop, sample)
    if kind == "hajek":
        return hajek_mean(pop, sample)
    if kind == "difference":
        return difference_mean(pop, sample)
    return model_assisted_mean(pop, sample, a=a)


def cmd_estimate(args) -> int:
    cfg = load_config(args.config)
    seed = _resolve_seed(args)
    out = _out_dir(args)
    pop, design = _load_inputs(cfg, seed)
    sample = _get_sample(cfg, design, seed)
    estimate = _point_estimate(cfg, pop, sample, estimator_floor(cfg))
    write_curve_csv(out / "estimate.csv", pop.grid, {"estimate": estimate.curve})
    write_metadata(
        out / "estimate.meta.json",
        {
            "estimator_kind": estimate.estimator_kind,
            "a": estimate.a_used,
            "sample_indices": sample.indices.tolist(),
            "seed": seed,
            "n": design.n,
            "N": design.N,
        },
    )
    print(f"wrote {out / 'estimate.csv'}")
    return 0


def cmd_bands(args) -> int:
    cfg = load_config(args.config)
    seed = _resolve_seed(args)
    out = _out_dir(args)
    pop, design = _load_inputs(cfg, seed)
    sample = _get_sample(cfg, design, seed)
    a = estimator_floor(cfg)
    estimate = model_assisted_mean(pop, sample, a=a)
    gamma = ma_covariance_estimate(pop, sample, a=a)
    alpha = float(cfg.band.get("alpha", 0.05))
    n_sims = int(cfg.band.get("n_sims", 10_000))
    band = build_band(
        estimate, gamma, n=design.n, alpha=alpha, n_sims=n_sims,
        seed=replicate_rng(seed, 0, 1),
    )
    sigma_hat = band.half_width * np.sqrt(design.n) / band.c_alpha
    write_curve_csv(
        out / "band.csv",
        pop.grid,
        {
            "center": band.center,
            "lower": band.center - band.half_width,
            "upper": band.center + band.half_width,
            "sigma_hat": sigma_hat,
        },
    )
    write_covariance_csv(out / "covariance.csv", pop.grid, gamma.matrix)
    write_metadata(
        out / "band.meta.json",
        {
            "c_alpha": band.c_alpha,
            "alpha": alpha,
            "n_sims": n_sims,
            "seed": seed,
            "n": design.n,
            "sample_indices": sample.indices.tolist(),
        },
    )
    print(f"wrote {out / 'band.csv'} (c_alpha = {band.c_alpha:.4f})")
    return 0


_REPORT_COLUMNS = (
    "n", "replicates", "rmse", "rb_squared", "vr",
    "q5", "q25", "median", "q75", "q95", "coverage", "errors",
)


def _report_row(report):
    vals = {
        "n": report.n,
        "replicates": report.replicates,
        "rmse": report.rmse,
        "rb_squared": report.rb_squared,
        "vr": report.vr,
        **report.er_quantiles,
        "coverage": report.coverage,
        "errors": report.n_errors,
    }
    return [vals[c] for c in _REPORT_COLUMNS]


def _fmt_cell(v):
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def cmd_montecarlo(args) -> int:
    cfg = load_config(args.config)
    seed = _resolve_seed(args)
    out = _out_dir(args)
    pop, design = _load_inputs(cfg, seed)
    estimator = cfg.estimator.get("kind", "ma")
    if estimator == "difference":
        raise ValidationError("campaigns support estimators ht, hajek, ma")
    a = estimator_floor(cfg)
    replicates = int(cfg.campaign.get("replicates", 1000))
    coverage = str(cfg.campaign.get("coverage", "false")).lower() in (
        "1", "true", "yes", "on",
    )
    alpha = float(cfg.band.get("alpha", 0.05)) if cfg.band else 0.05
    band_sims = int(cfg.band.get("n_sims", 5000)) if cfg.band else 5000
    rows = []
    for n in campaign_sizes(cfg):
        design_n = dataclasses.replace(design, n=n) if design.kind == "srswor" \
            else design
        report = run_campaign(
            pop,
            design_n,
            replicates=replicates,
            estimator=estimator,
            a=a,
            compute_coverage=coverage,
            alpha=alpha,
            band_sims=band_sims,
            master_seed=seed,
            workers=args.workers,
        )
        rows.append(_report_row(report))
        write_covariance_csv(
            out / f"gamma_emp_n{n}.csv", pop.grid, report.gamma_emp.matrix
        )
    header = list(_REPORT_COLUMNS)
    text_lines = ["  ".join(f"{h:>10}" for h in header)]
    for row in rows:
        text_lines.append("  ".join(f"{_fmt_cell(v):>10}" for v in row))
    text_lines.append(f"seed = {seed}")
    (out / "report.txt").write_text("\n".join(text_lines) + "\n", encoding="utf-8")
    csv_lines = [",".join(header + ["seed"])]
    for row in rows:
        csv_lines.append(
            ",".join(
                ("" if v is None else repr(v) if isinstance(v, float) else str(v))
                for v in row
            )
            + f",{seed}"
        )
    (out / "report.csv").write_text("\n".join(csv_lines) + "\n", encoding="utf-8")
    print((out / "report.txt").read_text(encoding="utf-8"))
    return 0


def cmd_oracle_check(args) -> int:
    cfg = load_config(args.config) if args.config else RunConfig()
    o = cfg.oracle
    n_units = int(o.get("n_units", 5))
    if n_units > 8:
        raise ValidationError("oracle-check requires N <= 8")
    seed = _resolve_seed(args)
    pop, design = default_fixture(
        n_units=n_units,
        n=int(o.get("n", 2)),
        n_points=int(o.get("n_points", 4)),
        seed=int(o.get("seed", seed)),
    )
    results = oracle_check(
        pop,
        design,
        tol=float(o.get("tol", 1e-10)),
        pi2_perturbation=float(o.get("corrupt_pi2", 0.0)),
    )
    print(format_report(results))
    if any(not r.passed for r in results):
        raise OracleFailure("one or more enumeration identities failed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curvesurvey",
        description="Model-assisted mean-curve estimation from survey samples",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "estimate": cmd_estimate,
        "bands": cmd_bands,
        "montecarlo": cmd_montecarlo,
        "oracle-check": cmd_oracle_check,
    }
    for name, handler in specs.items():
        p = sub.add_parser(name)
        p.add_argument(
            "--config", required=(name != "oracle-check"), help="config file path"
        )
        p.add_argument("--seed", type=int, default=None, help="master RNG seed")
        p.add_argument("--workers", type=int, default=1, help="parallel workers")
        p.add_argument("--out", default=".", help="output directory")
        p.set_defaults(handler=handler)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except OracleFailure as exc:
        print(f"oracle failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
