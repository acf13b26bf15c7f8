"""Command-line pipeline: sample, estimate, sweep, fit, report, embed.

Every command that writes a primary output also writes a JSON manifest
(``<output>.manifest.json`` or ``manifest.json`` in the output directory)
recording the command, all parameters, the seed and the tool version;
rerunning with those parameters reproduces the primary outputs byte for
byte. Tables are plain CSV with a one-line header and fixed column order;
no graphics are rendered -- the emitted data feeds any plotting tool.

Exit status: 0 success (degeneracy flags are results, not failures),
1 usage error, 2 data/domain error, 3 search timeout / not found.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .annealer import (
    AnnealJob,
    Perturbation,
    TimeModel,
    ingest_samples,
    load_profile,
    model_teff,
    physical_coupling,
    plan_shots,
    simulate_job,
    write_samples,
)
from .embedding import find_ring_embedding, load_graph, verify_embedding, write_embedding
from .errors import EmbeddingNotFoundError, RingThermError
from .ising import RingSpec
from .sampling import empirical_histogram
from .scaling import SweepPoint, aggregate_over_sizes, fit_teff_scaling
from .thermometry import EstimatorOptions, estimate_temperature

USAGE_ERROR, DATA_ERROR, NOT_FOUND_ERROR = 1, 2, 3

SWEEP_COLUMNS = ["n_qb", "j_enc", "tau_us", "shots", "seed", "t_eff", "epsilon", "iterations", "flags"]
FIT_COLUMNS = [
    "tau_us", "abscissa", "tbar", "alpha", "stderr_tbar", "stderr_alpha",
    "r_squared", "points_used", "points_excluded",
]


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on usage errors; we reserve 2 for data."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(self.exit_on_error_code) from None

    exit_on_error_code = USAGE_ERROR


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _write_csv(path, columns, rows) -> None:
    lines = [",".join(columns)]
    lines.extend(",".join(_fmt(row[c]) for c in columns) for row in rows)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _read_csv(path):
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise RingThermError(f"cannot read table {path}: {exc}") from exc
    if not lines:
        raise RingThermError(f"empty table {path}")
    header = lines[0].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[1:] if line]


def _write_manifest(path, command, params, outputs) -> None:
    manifest = {
        "command": command,
        "parameters": params,
        "outputs": [str(o) for o in outputs],
        "tool_version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _parse_grid(text, cast):
    values = [cast(tok) for tok in str(text).split(",") if tok.strip() != ""]
    if not values:
        raise RingThermError(f"empty grid specification {text!r}")
    return values


def _flags_str(flags) -> str:
    return "|".join(sorted(flags)) if flags else "-"


def _parse_flags(text) -> frozenset:
    return frozenset() if text in ("-", "") else frozenset(text.split("|"))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_sample(args) -> int:
    profile = load_profile(args.profile)
    job = AnnealJob(RingSpec(args.n_qb), args.j_enc, args.tau_us, args.shots)
    samples = simulate_job(profile, job, Perturbation.parse(args.perturb), seed=args.seed)
    out = Path(args.out)
    write_samples(out, samples)
    _write_manifest(
        out.with_name(out.name + ".manifest.json"),
        "sample",
        {
            "profile": args.profile,
            "n_qb": args.n_qb,
            "j_enc": args.j_enc,
            "tau_us": args.tau_us,
            "shots": args.shots,
            "perturb": args.perturb,
            "seed": args.seed,
            "t_model": samples.metadata["t_model"],
        },
        [out],
    )
    print(f"wrote {samples.shots} shots to {out}")
    return 0


def _estimator_options(args) -> EstimatorOptions:
    return EstimatorOptions(
        t_min=args.t_min,
        t_max=args.t_max,
        max_iterations=args.max_iterations,
        poor_fit_threshold=args.poor_fit_threshold,
    )


def cmd_estimate(args) -> int:
    samples = ingest_samples(args.samples)
    result = estimate_temperature(empirical_histogram(samples), options=_estimator_options(args))
    record = {
        "t_eff": result.t_eff,
        "epsilon": result.epsilon,
        "iterations": result.iterations,
        "flags": sorted(result.flags),
        "n_qb": samples.ring.n_qb,
        "shots": samples.shots,
    }
    text = json.dumps(record, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_sweep(args) -> int:
    profile = load_profile(args.profile)
    n_grid = _parse_grid(args.n_qb, int)
    j_grid = _parse_grid(args.j_enc, float)
    tau_grid = _parse_grid(args.tau_us, float)
    jobs = [
        AnnealJob(RingSpec(n), j, tau)
        for n in n_grid
        for j in j_grid
        for tau in tau_grid
    ]
    time_model = TimeModel(args.readout_us, args.programming_us, args.thermalization_us)
    plan = plan_shots(jobs, args.min_shots, args.max_shots, time_model)
    seeds = [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(args.seed).spawn(len(jobs))]

    out_dir = Path(args.out)
    samples_dir = out_dir / "samples"
    samples_dir.mkdir(parents=True, exist_ok=True)
    opts = _estimator_options(args)
    perturbation = Perturbation.parse(args.perturb)
    rows = []
    for idx, job in enumerate(jobs):
        shots = plan.shot_targets[idx]
        row = {
            "n_qb": job.ring.n_qb,
            "j_enc": job.j_enc,
            "tau_us": job.tau_us,
            "shots": shots,
            "seed": seeds[idx],
        }
        try:
            samples = simulate_job(
                profile,
                AnnealJob(job.ring, job.j_enc, job.tau_us, shots),
                perturbation,
                seed=seeds[idx],
            )
            write_samples(samples_dir / f"point_{idx:04d}.samples", samples)
            result = estimate_temperature(empirical_histogram(samples), options=opts)
            row.update(
                t_eff=result.t_eff,
                epsilon=result.epsilon,
                iterations=result.iterations,
                flags=_flags_str(result.flags),
            )
        except RingThermError as exc:
            print(f"point {idx} ({job.ring.n_qb}, {job.j_enc}, {job.tau_us}) failed: {exc}",
                  file=sys.stderr)
            row.update(t_eff=float("nan"), epsilon=float("nan"), iterations=0, flags="failed")
        rows.append(row)
    table = out_dir / "sweep.csv"
    _write_csv(table, SWEEP_COLUMNS, rows)
    _write_manifest(
        out_dir / "manifest.json",
        "sweep",
        {
            "profile": args.profile,
            "n_qb": args.n_qb,
            "j_enc": args.j_enc,
            "tau_us": args.tau_us,
            "min_shots": args.min_shots,
            "max_shots": args.max_shots,
            "perturb": args.perturb,
            "seed": args.seed,
            "readout_us": args.readout_us,
            "programming_us": args.programming_us,
            "thermalization_us": args.thermalization_us,
        },
        [table],
    )
    print(f"wrote {len(rows)} grid points to {table}")
    return 0


def _sweep_points(rows, profile, abscissa):
    points = []
    for row in rows:
        if row["flags"] == "failed" or row["t_eff"] == "nan":
            continue
        j_enc = float(row["j_enc"])
        if abscissa == "inv-j-enc":
            x = 1.0 / j_enc
        else:
            x = profile.t_machine_kelvin / physical_coupling(profile, j_enc)
        points.append(
            SweepPoint(
                x=x,
                t_eff=float(row["t_eff"]),
                epsilon=float(row["epsilon"]),
                flags=_parse_flags(row["flags"]),
                n_qb=int(row["n_qb"]),
                tau_us=float(row["tau_us"]),
            )
        )
    return points


def cmd_fit(args) -> int:
    profile = load_profile(args.profile)
    rows = _read_csv(args.sweep)
    taus = sorted({float(r["tau_us"]) for r in rows})
    fit_rows = []
    for tau in taus:
        tau_rows = [r for r in rows if float(r["tau_us"]) == tau]
        try:
            points = _sweep_points(tau_rows, profile, args.abscissa)
            aggregated = aggregate_over_sizes(points, min_size=args.min_size)
            fit = fit_teff_scaling(aggregated)
        except RingThermError as exc:
            print(f"tau = {tau}: fit skipped: {exc}", file=sys.stderr)
            continue
        fit_rows.append(
            {
                "tau_us": tau,
                "abscissa": args.abscissa,
                "tbar": fit.tbar,
                "alpha": fit.alpha,
                "stderr_tbar": fit.stderr_tbar,
                "stderr_alpha": fit.stderr_alpha,
                "r_squared": fit.r_squared,
                "points_used": fit.points_used,
                "points_excluded": fit.points_excluded,
            }
        )
    out = Path(args.out)
    _write_csv(out, FIT_COLUMNS, fit_rows)
    _write_manifest(
        out.with_name(out.name + ".manifest.json"),
        "fit",
        {
            "sweep": str(args.sweep),
            "profile": args.profile,
            "min_size": args.min_size,
            "abscissa": args.abscissa,
        },
        [out],
    )
    print(f"wrote {len(fit_rows)} fits to {out}")
    return 0


def cmd_report(args) -> int:
    profile = load_profile(args.profile)
    sweep_rows = _read_csv(args.sweep)
    fit_rows = _read_csv(args.fits) if args.fits else []
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    surface = out_dir / "surface.csv"
    _write_csv(
        surface,
        ["n_qb", "j_enc", "tau_us", "t_eff", "epsilon", "flags"],
        [
            {k: row[k] for k in ("n_qb", "j_enc", "tau_us", "t_eff", "epsilon", "flags")}
            for row in sweep_rows
        ],
    )

    lines_rows = []
    for tau in sorted({float(r["tau_us"]) for r in sweep_rows}):
        tau_rows = [r for r in sweep_rows if float(r["tau_us"]) == tau]
        try:
            aggregated = aggregate_over_sizes(
                _sweep_points(tau_rows, profile, args.abscissa), min_size=args.min_size
            )
        except RingThermError as exc:
            print(f"tau = {tau}: line skipped: {exc}", file=sys.stderr)
            continue
        for point in aggregated:
            lines_rows.append(
                {
                    "tau_us": tau,
                    "x": point.x,
                    "t_eff_mean": point.t_eff,
                    "t_eff_min": point.t_eff_min,
                    "t_eff_max": point.t_eff_max,
                    "spread": point.spread,
                    "n_sizes": point.n_sizes,
                }
            )
    lines = out_dir / "lines.csv"
    _write_csv(
        lines,
        ["tau_us", "x", "t_eff_mean", "t_eff_min", "t_eff_max", "spread", "n_sizes"],
        lines_rows,
    )

    params = out_dir / "params.csv"
    _write_csv(params, FIT_COLUMNS, fit_rows)

    summary = out_dir / "summary.txt"
    text = [
        f"sweep points: {len(sweep_rows)}",
        f"aggregated line points: {len(lines_rows)} (abscissa = {args.abscissa})",
    ]
    if fit_rows:
        for row in fit_rows:
            text.append(
                "tau = {tau_us} us: tbar = {tbar} +- {stderr_tbar}, "
                "alpha = {alpha} +- {stderr_alpha}, r^2 = {r_squared}".format(**row)
            )
    else:
        text.append("no fits")
    summary.write_text("\n".join(text) + "\n", encoding="utf-8")
    _write_manifest(
        out_dir / "manifest.json",
        "report",
        {
            "sweep": str(args.sweep),
            "fits": str(args.fits) if args.fits else None,
            "profile": args.profile,
            "min_size": args.min_size,
            "abscissa": args.abscissa,
        },
        [surface, lines, params, summary],
    )
    print(f"wrote report bundle to {out_dir}")
    return 0


def cmd_embed(args) -> int:
    graph = load_graph(args.graph)
    embedding = find_ring_embedding(
        graph, args.length, timeout=args.timeout, seed=args.seed, max_steps=args.max_steps
    )
    report = verify_embedding(graph, embedding, args.length)
    if not report:
        raise RingThermError(f"internal error: found cycle fails verification: {report.violation}")
    out = Path(args.out)
    write_embedding(out, embedding)
    _write_manifest(
        out.with_name(out.name + ".manifest.json"),
        "embed",
        {
            "graph": str(args.graph),
            "length": args.length,
            "timeout": args.timeout,
            "seed": args.seed,
            "max_steps": args.max_steps,
        },
        [out],
    )
    print(f"wrote {args.length}-node cycle to {out}")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_estimator_flags(p):
    p.add_argument("--t-min", type=float, default=1e-3, help="search lower bound")
    p.add_argument("--t-max", type=float, default=1e6, help="search upper bound")
    p.add_argument("--max-iterations", type=int, default=100, help="refinement cap")
    p.add_argument("--poor-fit-threshold", type=float, default=0.05,
                   help="flag fits whose TVD exceeds this")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ringtherm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sample", help="synthesize an annealer run and write a sample file")
    p.add_argument("--profile", required=True, help="bundled profile name or JSON path")
    p.add_argument("--n-qb", type=int, required=True)
    p.add_argument("--j-enc", type=float, required=True)
    p.add_argument("--tau-us", type=float, required=True)
    p.add_argument("--shots", type=int, required=True)
    p.add_argument("--perturb", default="none",
                   help="none | readout_flip:<p> | ground_state_mix:<w>")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("estimate", help="extract t_eff from a sample file")
    p.add_argument("samples")
    p.add_argument("--out", default=None, help="write the JSON record here instead of stdout")
    _add_estimator_flags(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("sweep", help="run a seeded grid of synthetic jobs and estimates")
    p.add_argument("--profile", required=True)
    p.add_argument("--n-qb", required=True, help="comma-separated ring sizes")
    p.add_argument("--j-enc", required=True, help="comma-separated couplings")
    p.add_argument("--tau-us", required=True, help="comma-separated annealing times")
    p.add_argument("--min-shots", type=int, default=10_000)
    p.add_argument("--max-shots", type=int, default=100_000)
    p.add_argument("--perturb", default="none")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--readout-us", type=float, default=150.0)
    p.add_argument("--programming-us", type=float, default=10_000.0)
    p.add_argument("--thermalization-us", type=float, default=10.0)
    p.add_argument("--out", required=True, help="output directory")
    _add_estimator_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit", help="fit the offset scaling law per annealing time")
    p.add_argument("sweep", help="sweep.csv from the sweep command")
    p.add_argument("--profile", required=True)
    p.add_argument("--min-size", type=int, default=100,
                   help="smallest ring size included in size averaging")
    p.add_argument("--abscissa", choices=["inv-j-enc", "machine-over-phys"],
                   default="machine-over-phys")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("report", help="emit plot-ready CSV bundles and a text summary")
    p.add_argument("--sweep", required=True)
    p.add_argument("--fits", default=None)
    p.add_argument("--profile", required=True)
    p.add_argument("--min-size", type=int, default=100)
    p.add_argument("--abscissa", choices=["inv-j-enc", "machine-over-phys"],
                   default="machine-over-phys")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("embed", help="find an odd ring embedding in a hardware graph")
    p.add_argument("--graph", required=True, help="edge-list file")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--timeout", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_embed)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        return args.func(args)
    except EmbeddingNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return NOT_FOUND_ERROR
    except RingThermError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
