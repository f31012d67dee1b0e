"""Deterministic command-line harness.

Subcommands: gen, transform, omega, counterexample, probe,
recover-masses1d, recover-intervals, recover-2d, roundtrip. Reports go to
stdout (or --out) as JSON or CSV with full-precision numbers; diagnostics
go to stderr. Exit codes: 0 all passed, 1 a recovery failed, 2 usage or
I/O error. A fixed --seed makes every run byte-reproducible; per-trial
wall time is only included with --timing since it is inherently
nondeterministic.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

import numpy as np

from .errors import RecoveryError
from .instances import (
    gen_random_instance,
    random_fiber_counts,
    random_interval_union,
    random_measure1d,
    random_measure2d,
    trial_rng,
)
from .intervals import (
    enumerate_arrangements,
    figure_arrangement,
    gen_polygon_counterexample,
    recover_intervals_extended,
    recover_intervals_minimal,
)
from .masses2d import (
    OmegaSet,
    build_omega,
    recover_max_k,
    recover_peeling,
    recover_search,
    sufficiency_probe,
)
from .prony import prony_recover
from .torus import (
    CoeffTable1D,
    CoeffTable2D,
    IntervalUnion,
    Measure1D,
    Measure2D,
    ToleranceConfig,
    forward_coeffs_1d,
    forward_coeffs_2d,
    forward_coeffs_intervals,
    interval_distance,
    measure_distance,
)

ROUNDTRIP_KINDS = (
    "masses1d",
    "intervals-extended",
    "intervals-minimal",
    "masses2d-maxk",
    "masses2d-peeling",
    "masses2d-search",
)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write_output(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _read_json(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _tolerances(args) -> ToleranceConfig:
    return ToleranceConfig(
        root_tol=args.tol_root,
        residual_tol=args.tol_residual,
        match_tol=args.tol_match,
        rank_tol=args.tol_rank,
    )


def _add_tolerance_flags(parser: argparse.ArgumentParser) -> None:
    defaults = ToleranceConfig()
    parser.add_argument("--tol-root", type=float, default=defaults.root_tol)
    parser.add_argument(
        "--tol-residual", type=float, default=defaults.residual_tol
    )
    parser.add_argument("--tol-match", type=float, default=defaults.match_tol)
    parser.add_argument("--tol-rank", type=float, default=defaults.rank_tol)


def _omega_from_args(args) -> OmegaSet:
    if getattr(args, "omega_file", None):
        return OmegaSet.from_json_obj(_read_json(args.omega_file))
    return build_omega(args.omega_kind, args.n, getattr(args, "k", None))


def cmd_gen(args) -> int:
    instance = gen_random_instance(args.kind, args.n, args.seed, args.separation)
    _write_output(_dump_json(instance.to_json_obj()), args.out)
    return 0


def cmd_transform(args) -> int:
    obj = _read_json(args.infile)
    if args.kind == "masses1d":
        mu = Measure1D.from_json_obj(obj)
        table = forward_coeffs_1d(mu, range(args.min, args.max + 1))
    elif args.kind == "intervals":
        union = IntervalUnion.from_json_obj(obj)
        table = forward_coeffs_intervals(union, range(args.min, args.max + 1))
    elif args.kind == "masses2d":
        mu = Measure2D.from_json_obj(obj)
        table = forward_coeffs_2d(mu, _omega_from_args(args))
    else:
        raise ValueError(f"unknown kind {args.kind!r}")
    _write_output(_dump_json(table.to_json_obj()), args.out)
    return 0


def cmd_omega(args) -> int:
    omega = build_omega(args.omega_kind, args.n, args.k)
    _write_output(_dump_json(omega.to_json_obj()), args.out)
    return 0


def cmd_counterexample(args) -> int:
    n = args.n
    theta = args.theta if args.theta is not None else np.pi / (2 * n)
    if args.arrangement_index is None:
        arrangement = figure_arrangement(n)
    else:
        arrangements = enumerate_arrangements(n)
        if not (0 <= args.arrangement_index < len(arrangements)):
            raise ValueError(
                f"arrangement index out of range 0..{len(arrangements) - 1}"
            )
        arrangement = arrangements[args.arrangement_index]
    first, second = gen_polygon_counterexample(n, theta, arrangement)
    freqs = range(0, 2 * n + 1)
    t_first = forward_coeffs_intervals(first, freqs)
    t_second = forward_coeffs_intervals(second, freqs)
    low = max(
        abs(t_first[nu] - t_second[nu]) for nu in range(1, 2 * n)
    )
    top = abs(t_first[2 * n] - t_second[2 * n])
    report = {
        "n": n,
        "theta": theta,
        "arrangement": list(arrangement.labels),
        "first": first.to_json_obj(),
        "second": second.to_json_obj(),
        "max_coefficient_gap_below_2n": low,
        "coefficient_gap_at_2n": top,
    }
    _write_output(_dump_json(report), args.out)
    return 0


def cmd_probe(args) -> int:
    omega = _omega_from_args(args)
    rng = trial_rng(args.seed)
    report = sufficiency_probe(omega, args.n, args.trials, rng, _tolerances(args))
    obj = report.to_json_obj()
    obj["omega_kind"] = omega.kind
    obj["omega_size"] = len(omega)
    _write_output(_dump_json(obj), args.out)
    return 0 if (report.all_passed and not report.insufficient) else 1


def cmd_recover_masses1d(args) -> int:
    table = CoeffTable1D.from_json_obj(_read_json(args.infile))
    mu = prony_recover(table, args.n, _tolerances(args))
    _write_output(_dump_json(mu.to_json_obj()), args.out)
    return 0


def cmd_recover_intervals(args) -> int:
    table = CoeffTable1D.from_json_obj(_read_json(args.infile))
    tol = _tolerances(args)
    if args.mode == "extended":
        union = recover_intervals_extended(table, args.n, tol)
    else:
        union = recover_intervals_minimal(
            table, args.n, tol, budget=args.budget, rng=trial_rng(args.seed)
        )
    _write_output(_dump_json(union.to_json_obj()), args.out)
    return 0


def cmd_recover_2d(args) -> int:
    table = CoeffTable2D.from_json_obj(_read_json(args.infile))
    tol = _tolerances(args)
    if args.method == "max-k":
        if args.k is None:
            raise ValueError("--k is required for method max-k")
        mu = recover_max_k(table, args.n, args.k, tol)
    elif args.method == "peeling":
        if args.profile is None:
            raise ValueError("--profile is required for method peeling")
        profile = {
            float(x): int(t) for x, t in _read_json(args.profile).items()
        }
        mu = recover_peeling(table, args.n, profile, tol)
    else:
        mu = recover_search(table, args.n, tol, budget=args.budget)
    _write_output(_dump_json(mu.to_json_obj()), args.out)
    return 0


def _table_residual_1d(table: CoeffTable1D, rebuilt: CoeffTable1D) -> float:
    return max(abs(rebuilt[f] - table[f]) for f in table.freqs())


def _table_residual_2d(table: CoeffTable2D, rebuilt: CoeffTable2D) -> float:
    return max(abs(rebuilt[f] - table[f]) for f in table.freqs())


def _roundtrip_trial(kind: str, n: int, k: int, seed: int, trial: int,
                     separation: float, budget: int, tol: ToleranceConfig):
    """Generate, transform, recover and compare one instance.

    Returns (distance to the true object, forward residual of the result).
    """
    rng = trial_rng(seed, trial)
    if kind == "masses1d":
        mu = random_measure1d(rng, int(rng.integers(1, n + 1)), separation)
        table = forward_coeffs_1d(mu, range(-n, n + 1))
        rec = prony_recover(table, n, tol)
        residual = _table_residual_1d(table, forward_coeffs_1d(rec, table.freqs()))
        return measure_distance(mu, rec), residual
    if kind == "intervals-extended":
        union = random_interval_union(rng, int(rng.integers(1, n + 1)), separation)
        table = forward_coeffs_intervals(union, range(0, 2 * n + 1))
        rec = recover_intervals_extended(table, n, tol)
        residual = _table_residual_1d(
            table, forward_coeffs_intervals(rec, table.freqs())
        )
        return interval_distance(union, rec), residual
    if kind == "intervals-minimal":
        union = random_interval_union(rng, int(rng.integers(1, n + 1)), separation)
        table = forward_coeffs_intervals(union, range(0, n + 1))
        rec = recover_intervals_minimal(table, n, tol, budget=budget, rng=rng)
        residual = _table_residual_1d(
            table, forward_coeffs_intervals(rec, table.freqs())
        )
        return interval_distance(union, rec), residual
    if kind == "masses2d-maxk":
        counts = random_fiber_counts(rng, n, k)
        mu = random_measure2d(rng, counts, separation)
        table = forward_coeffs_2d(mu, build_omega("max_k", n, k))
        rec = recover_max_k(table, n, k, tol)
        residual = _table_residual_2d(table, forward_coeffs_2d(rec, table.freqs()))
        return measure_distance(mu, rec), residual
    if kind == "masses2d-peeling":
        counts = random_fiber_counts(rng, n, min(3, n))
        mu = random_measure2d(rng, counts, separation)
        from .masses2d import profile_rows_omega

        table = forward_coeffs_2d(mu, profile_rows_omega(n))
        profile = {}
        for x, _, _ in mu.masses:
            profile[x] = profile.get(x, 0) + 1
        rec = recover_peeling(table, n, profile, tol)
        residual = _table_residual_2d(table, forward_coeffs_2d(rec, table.freqs()))
        return measure_distance(mu, rec), residual
    if kind == "masses2d-search":
        counts = random_fiber_counts(rng, n, n)
        mu = random_measure2d(rng, counts, separation)
        table = forward_coeffs_2d(mu, build_omega("sufficient", n))
        rec = recover_search(table, n, tol, budget=budget)
        residual = _table_residual_2d(table, forward_coeffs_2d(rec, table.freqs()))
        return measure_distance(mu, rec), residual
    raise ValueError(f"unknown roundtrip kind {kind!r}")


def cmd_roundtrip(args) -> int:
    tol = _tolerances(args)
    results = []
    all_ok = True
    for trial in range(args.trials):
        instance_id = f"{args.kind}-n{args.n}-seed{args.seed}-t{trial}"
        started = time.perf_counter()
        status = "ok"
        distance = None
        residual = None
        try:
            distance, residual = _roundtrip_trial(
                args.kind, args.n, args.k, args.seed, trial,
                args.separation, args.budget, tol,
            )
            if distance > args.max_distance:
                status = "fail:distance"
        except RecoveryError as exc:
            status = f"fail:{type(exc).__name__}"
        elapsed = time.perf_counter() - started
        record = {
            "trial": trial,
            "instance_id": instance_id,
            "status": status,
            "distance": distance,
            "residual": residual,
            "max_distance": args.max_distance,
        }
        if args.timing:
            record["wall_time"] = elapsed
        if status != "ok":
            all_ok = False
            print(f"{instance_id}: {status}", file=sys.stderr)
        results.append(record)
    report = {
        "command": "roundtrip",
        "kind": args.kind,
        "n": args.n,
        "k": args.k,
        "seed": args.seed,
        "trials": args.trials,
        "separation": args.separation,
        "budget": args.budget,
        "tolerances": {
            "root_tol": tol.root_tol,
            "residual_tol": tol.residual_tol,
            "match_tol": tol.match_tol,
            "rank_tol": tol.rank_tol,
        },
        "results": results,
        "passed": all_ok,
    }
    if args.format == "json":
        _write_output(_dump_json(report), args.out)
    else:
        buffer = io.StringIO()
        columns = ["trial", "instance_id", "status", "distance", "max_distance"]
        if args.timing:
            columns.append("wall_time")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for record in results:
            writer.writerow(
                [
                    record[c] if record.get(c) is not None else ""
                    for c in columns
                ]
            )
        _write_output(buffer.getvalue(), args.out)
    return 0 if all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torusrec",
        description=(
            "Recover interval unions and sparse point masses on the torus "
            "from small fixed sets of Fourier coefficients."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--kind", required=True,
                   choices=("masses1d", "intervals", "masses2d"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--separation", type=float, default=0.05)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("transform", help="forward Fourier transform of an instance")
    p.add_argument("--kind", required=True,
                   choices=("masses1d", "intervals", "masses2d"))
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--min", type=int, default=0)
    p.add_argument("--max", type=int, default=0)
    p.add_argument("--omega-kind", default="sufficient",
                   choices=("max_k", "sufficient", "triangle"))
    p.add_argument("--omega-file", default=None)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("omega", help="emit a frequency set")
    p.add_argument("--omega-kind", "--kind", dest="omega_kind", required=True,
                   choices=("max_k", "sufficient", "triangle"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser(
        "counterexample",
        help="two distinct unions with matching coefficients at 1..2n-1",
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theta", type=float, default=None,
                   help="rotation in radians, default pi/(2n)")
    p.add_argument("--arrangement-index", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("probe", help="empirical interpolation probe of a frequency set")
    p.add_argument("--omega-kind", default="triangle",
                   choices=("max_k", "sufficient", "triangle"))
    p.add_argument("--omega-file", default=None)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    _add_tolerance_flags(p)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("recover-masses1d", help="recover 1-d point masses")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", default=None)
    _add_tolerance_flags(p)
    p.set_defaults(func=cmd_recover_masses1d)

    p = sub.add_parser("recover-intervals", help="recover an interval union")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", default="minimal", choices=("minimal", "extended"))
    p.add_argument("--budget", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    _add_tolerance_flags(p)
    p.set_defaults(func=cmd_recover_intervals)

    p = sub.add_parser("recover-2d", help="recover 2-d point masses")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", default="search",
                   choices=("max-k", "peeling", "search"))
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--profile", default=None,
                   help="JSON file mapping x position to mass count")
    p.add_argument("--budget", type=int, default=200)
    p.add_argument("--out", default=None)
    _add_tolerance_flags(p)
    p.set_defaults(func=cmd_recover_2d)

    p = sub.add_parser("roundtrip", help="seeded generate/transform/recover runs")
    p.add_argument("--kind", required=True, choices=ROUNDTRIP_KINDS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--separation", type=float, default=0.05)
    p.add_argument("--budget", type=int, default=50)
    p.add_argument("--max-distance", type=float, default=1e-6)
    p.add_argument("--format", default="json", choices=("json", "csv"))
    p.add_argument("--timing", action="store_true",
                   help="include wall time per trial (breaks byte reproducibility)")
    p.add_argument("--out", default=None)
    _add_tolerance_flags(p)
    p.set_defaults(func=cmd_roundtrip)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RecoveryError as exc:
        print(f"recovery failed: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
