"""Command-line surface: fit-dist, fit-pl, simulate, plotdata, calibrate.

Exit codes: 0 success, 2 input/schema error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import io, link_budget, montecarlo
from .dists import Family, cdf as dist_cdf, pdf as dist_pdf
from .errors import (
    DegenerateGeometry,
    InsufficientData,
    NonConvergence,
    RcsKitError,
    SchemaError,
)
from .gof import DEFAULT_FAMILIES, rank_fits
from .nf_rcs import ModelOrder, fit_pl_all, predict_pl
from .geometry import (
    SPEED_OF_LIGHT,
    BistaticGeometry,
    bistatic_angle_deg,
    bistatic_distance,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3

PL_CURVE_SPAN = (2.0, 10.0)  # target-offset span (m) for pl-curve grids


def _fail(code: int, message: str) -> int:
    print(f"rcskit: {message}", file=sys.stderr)
    return code


def _parse_families(raw: str) -> tuple[Family, ...]:
    if raw == "all":
        return DEFAULT_FAMILIES
    families = []
    for token in raw.split(","):
        token = token.strip()
        try:
            families.append(Family(token))
        except ValueError:
            raise SchemaError(f"unknown family {token!r}") from None
    if not families:
        raise SchemaError("empty family list")
    return tuple(families)


def cmd_fit_dist(args: argparse.Namespace) -> int:
    try:
        families = _parse_families(args.families)
        groups = io.ingest_rcs_csv(args.input)
        if not groups:
            raise SchemaError(f"{args.input} contains no data rows")
    except (SchemaError, ValueError) as exc:
        return _fail(EXIT_INPUT, str(exc))

    body_groups = []
    for key in sorted(groups):
        sample_set = groups[key]
        reports = rank_fits(sample_set, families)
        if not reports:
            return _fail(EXIT_NUMERIC, f"no family could be fitted for group {key}")
        body_groups.append(
            {
                "target_id": key[0],
                "frequency_ghz": key[1],
                "theta_b_deg": key[2],
                "n": len(sample_set),
                "sample_min": float(sample_set.values.min()),
                "sample_max": float(sample_set.values.max()),
                "fits": [io.gof_report_to_dict(r) for r in reports],
            }
        )
    bundle = io.report_bundle({Path(args.input).name: args.input}, {"groups": body_groups})
    io.write_json(args.out, bundle)
    return EXIT_OK


def _parse_y_span(raw: str) -> tuple[float, float] | None:
    if raw.strip().lower() == "none":
        return None
    try:
        lo, hi = (float(v) for v in raw.split(","))
    except ValueError:
        raise SchemaError(f"--y-span expects 'lo,hi' or 'none', got {raw!r}") from None
    if not lo < hi:
        raise SchemaError(f"--y-span requires lo < hi, got {raw!r}")
    return lo, hi


def cmd_fit_pl(args: argparse.Namespace) -> int:
    try:
        observations = io.load_pl_csv(args.input, y_span=_parse_y_span(args.y_span))
    except (SchemaError, ValueError) as exc:
        return _fail(EXIT_INPUT, str(exc))

    by_freq: dict[float, list] = {}
    for obs in observations:
        by_freq.setdefault(obs.frequency_hz, []).append(obs)

    records = []
    for freq in sorted(by_freq):
        try:
            if args.model == "all":
                fits = fit_pl_all(by_freq[freq], args.geom_a)
            else:
                fits = fit_pl_all(by_freq[freq], args.geom_a, up_to=ModelOrder(args.model))[-1:]
        except (DegenerateGeometry, InsufficientData, NonConvergence) as exc:
            return _fail(EXIT_NUMERIC, f"{freq / 1e9} GHz: {exc}")
        except ValueError as exc:
            return _fail(EXIT_INPUT, str(exc))
        records.extend(io.pl_fit_to_dict(fit) for fit in fits)
    bundle = io.report_bundle({Path(args.input).name: args.input}, {"fits": records})
    io.write_json(args.out, bundle)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        spec = io.scenario_spec_from_dict(io.read_json(args.spec))
        if args.seed is not None:
            spec = montecarlo.ScenarioSpec(
                geometry=spec.geometry,
                link=spec.link,
                rcs_process=spec.rcs_process,
                n_snapshots=spec.n_snapshots,
                noise_power=spec.noise_power,
                seed=args.seed,
                target_id=spec.target_id,
            )
    except SchemaError as exc:
        return _fail(EXIT_INPUT, str(exc))

    run = montecarlo.run_scenario(spec)
    positive = run.recovered_sigma[run.recovered_sigma > 0.0]
    dropped = int(run.recovered_sigma.size - positive.size)
    if dropped:
        print(
            f"rcskit: dropping {dropped} nonpositive recovered values from the sample CSV",
            file=sys.stderr,
        )
    io.emit_rcs_csv(
        args.out_samples,
        [
            (spec.target_id, run.frequency_ghz, run.theta_b_deg, float(v))
            for v in positive
        ],
    )
    bundle = io.report_bundle(
        {Path(args.spec).name: args.spec},
        {
            "scenario": io.scenario_spec_to_dict(spec),
            "clamped_count": run.clamped_count,
            "fits": [io.gof_report_to_dict(r) for r in run.gof_reports],
        },
    )
    io.write_json(args.out_report, bundle)
    return EXIT_OK


def _write_plot_csv(path: str, header: list[str], columns: list[np.ndarray]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in zip(*columns):
            writer.writerow([repr(float(v)) for v in row])


def cmd_plotdata(args: argparse.Namespace) -> int:
    try:
        report = io.read_json(args.report)
        if args.grid < 1:
            raise SchemaError(f"grid must be >= 1, got {args.grid}")
        if args.kind in ("pdf", "cdf"):
            groups = report.get("groups")
            if not groups:
                raise SchemaError("report has no distribution-fit groups")
            group = groups[0]
            fits = group.get("fits")
            if not fits:
                raise SchemaError("first group has no fits")
            params = io.dist_params_from_dict(fits[0]["params"])
            x = np.linspace(float(group["sample_min"]), float(group["sample_max"]), args.grid)
            curve = (dist_pdf if args.kind == "pdf" else dist_cdf)(params, x)
            _write_plot_csv(args.out, ["x", args.kind], [x, np.atleast_1d(curve)])
        elif args.kind == "pl-curve":
            fits = report.get("fits")
            if not fits:
                raise SchemaError("report has no path-loss fit records")
            y = np.linspace(PL_CURVE_SPAN[0], PL_CURVE_SPAN[1], args.grid)
            columns = [y]
            header = ["y_m"]
            for record in fits:
                alpha, n, model, freq_hz, geom_a = io.pl_fit_from_dict(record)
                lam = SPEED_OF_LIGHT / freq_hz
                curve = []
                for yj in y:
                    geom = BistaticGeometry(geom_a, float(yj))
                    curve.append(
                        predict_pl(
                            alpha, n, model, bistatic_distance(geom), lam, bistatic_angle_deg(geom)
                        )
                    )
                header.append(f"pl_db_{record['model']}_{record['frequency_ghz']}GHz")
                columns.append(np.array(curve))
            _write_plot_csv(args.out, header, columns)
        else:  # pragma: no cover - argparse restricts choices
            raise SchemaError(f"unknown kind {args.kind}")
    except (SchemaError, KeyError, TypeError) as exc:
        return _fail(EXIT_INPUT, str(exc))
    except RcsKitError as exc:
        return _fail(EXIT_NUMERIC, str(exc))
    return EXIT_OK


def cmd_calibrate(args: argparse.Namespace) -> int:
    try:
        cal = link_budget.calibrate(args.p_rx_w, args.distance_m, args.wavelength_m)
    except ValueError as exc:
        return _fail(EXIT_INPUT, str(exc))
    io.write_json(
        args.out,
        {
            "k_value": cal.k_value,
            "wavelength_m": cal.wavelength,
            "distance_m": cal.distance,
        },
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rcskit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit-dist", help="fit and rank RCS amplitude distributions")
    p.add_argument("--input", required=True, help="RCS sample CSV")
    p.add_argument("--families", default="all", help="'all' or comma-separated family names")
    p.add_argument("--out", required=True, help="output report JSON")
    p.set_defaults(func=cmd_fit_dist)

    p = sub.add_parser("fit-pl", help="fit near-field path-loss models per frequency")
    p.add_argument("--input", required=True, help="path-loss observation CSV")
    p.add_argument("--geom-a", type=float, required=True, help="half baseline (m)")
    p.add_argument("--model", default="all", choices=["sigma1", "sigma2", "sigma3", "all"])
    p.add_argument(
        "--y-span", default="2,10",
        help="accepted target-offset span 'lo,hi' in m, or 'none' (default 2,10)",
    )
    p.add_argument("--out", required=True, help="output report JSON")
    p.set_defaults(func=cmd_fit_pl)

    p = sub.add_parser("simulate", help="run a synthetic measurement scenario")
    p.add_argument("--spec", required=True, help="scenario spec JSON")
    p.add_argument("--out-samples", required=True, help="output RCS sample CSV")
    p.add_argument("--out-report", required=True, help="output report JSON")
    p.add_argument("--seed", type=int, default=None, help="override the spec seed")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("plotdata", help="emit plot-ready curve columns from a report")
    p.add_argument("--report", required=True, help="fit-dist or fit-pl report JSON")
    p.add_argument("--kind", required=True, choices=["pdf", "cdf", "pl-curve"])
    p.add_argument("--grid", type=int, default=200, help="number of grid points")
    p.add_argument("--out", required=True, help="output CSV")
    p.set_defaults(func=cmd_plotdata)

    p = sub.add_parser("calibrate", help="compute the system calibration factor")
    p.add_argument("--p-rx-w", type=float, required=True, help="free-space received power (W)")
    p.add_argument("--distance-m", type=float, required=True)
    p.add_argument("--wavelength-m", type=float, required=True)
    p.add_argument("--out", required=True, help="output JSON")
    p.set_defaults(func=cmd_calibrate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
