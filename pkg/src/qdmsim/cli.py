"""Command-line interface: run scenarios, sweep parameters, export
phase-space snapshots, and validate against the Fock oracle.

Exit codes: 0 success, 2 scenario parse error, 3 validation/physics error,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from itertools import product

from .circuits import Topology, build_circuit, stage_snapshots
from .exceptions import NumericalError, ScenarioParseError, ValidationError
from .fock import FockConfig, compare_with_gaussian
from .metrology import (
    channel_report,
    dsui_output_noise,
    dsui_snr,
    split_snr,
    su2_snr,
    sui_output_noise,
    sui_snr_amplitude,
    sui_snr_phase,
)
from .scenario import (
    RunOptions,
    SweepAxis,
    apply_axis_value,
    load_scenario,
    spec_to_dict,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_NUMERICAL = 4


def _monitor_labels(spec, options: RunOptions) -> list[str]:
    if options.outputs is not None:
        return list(options.outputs)
    return [mon.label for mon in build_circuit(spec).monitors]


def _analytic_counterparts(spec) -> dict:
    """Closed-form values matching the topology, for side-by-side reporting."""
    i_ps = None
    out: dict = {}
    if spec.topology is Topology.DIRECT_HOMODYNE:
        i_ps = abs(spec.alpha) ** 2
        snr_d, snr_e = split_snr(spec.splitters[0].T, i_ps, spec.delta, spec.epsilon)
        out = {"phase_snr": snr_d, "amplitude_snr": snr_e, "noise": 1.0}
    elif spec.topology is Topology.MZI:
        i_ps = spec.splitters[0].R * abs(spec.alpha) ** 2
        T = spec.splitters[0].T
        snr_d = su2_snr(T, i_ps, spec.delta)
        snr_e = su2_snr(T, i_ps, spec.epsilon)
        if len(spec.splitters) == 3:
            t3 = spec.splitters[2].T
            snr_d, snr_e = snr_d * t3, snr_e * (1.0 - t3)
        out = {"phase_snr": snr_d, "amplitude_snr": snr_e, "noise": 1.0}
    elif spec.topology is Topology.NESTED_SUI:
        i_ps = spec.splitters[0].R * abs(spec.alpha) ** 2
        g1, g2 = spec.gains
        out = {
            "phase_snr": sui_snr_phase(g1, g2, i_ps, spec.delta, spec.phi),
            "amplitude_snr": sui_snr_amplitude(g1, g2, i_ps, spec.epsilon, spec.phi),
            "noise": sui_output_noise(g1, g2, spec.phi),
        }
    else:
        i_ps = spec.splitters[0].R * abs(spec.alpha) ** 2
        g1, g2 = spec.gains
        snr_x, snr_y = dsui_snr(g1, i_ps, spec.delta, spec.epsilon, g2.phase)
        noise_x, noise_y = dsui_output_noise(g1, g2)
        out = {
            "mix_minus_snr": snr_x,
            "mix_plus_snr": snr_y,
            "mix_minus_noise": noise_x,
            "mix_plus_noise": noise_y,
        }
    out["i_ps"] = i_ps
    return out

_SNR_KEY_BY_LABEL = {
    "phase": "phase_snr",
    "amplitude": "amplitude_snr",
    "mix_minus": "mix_minus_snr",
    "mix_plus": "mix_plus_snr",
}


def _relative_error(numeric: float, analytic: float) -> float:
    if analytic == 0.0:
        return 0.0 if numeric == 0.0 else math.inf
    return abs(numeric - analytic) / abs(analytic)


def _cmd_run(args) -> int:
    spec, options = load_scenario(args.scenario)
    labels = _monitor_labels(spec, options)
    reports = {label: channel_report(spec, label) for label in labels}
    analytic = _analytic_counterparts(spec)
    rel = {}
    for label, rep in reports.items():
        key = _SNR_KEY_BY_LABEL[label]
        if key in analytic:
            rel[key] = _relative_error(rep.snr, analytic[key])
    document = {
        "spec": spec_to_dict(spec),
        "outputs": labels,
        "seed": options.seed,
        "reports": {
            label: {
                "quadrature": rep.quadrature,
                "parameter": rep.parameter,
                "value": rep.value,
                "signal_slope": rep.signal_slope,
                "signal": rep.signal,
                "noise_var": rep.noise_var,
                "snr": rep.snr,
                "i_ps": rep.i_ps,
                "enhancement": rep.enhancement,
            }
            for label, rep in reports.items()
        },
        "analytic": analytic,
        "relative_error": rel,
    }
    text = json.dumps(document, indent=2, sort_keys=True, allow_nan=True)
    _write_output(args.out, text + "\n")
    return EXIT_OK


def _parse_axis_flag(flag: str) -> SweepAxis:
    try:
        name, rng = flag.split("=", 1)
        raw_start, raw_stop, raw_count = rng.split(":")
        start, stop, count = float(raw_start), float(raw_stop), int(raw_count)
    except ValueError:
        raise ValidationError(
            f"--axis expects name=start:stop:count, got {flag!r}"
        ) from None
    return SweepAxis(name, start, stop, count)


def _sweep_row(payload):
    spec, axes_names, values, labels = payload
    for name, value in zip(axes_names, values):
        spec = apply_axis_value(spec, name, value)
    row = list(values)
    for label in labels:
        rep = channel_report(spec, label)
        row.extend([rep.noise_var, rep.snr, rep.enhancement])
    return row


def _cmd_sweep(args) -> int:
    spec, options = load_scenario(args.scenario)
    axes = tuple(_parse_axis_flag(flag) for flag in args.axis) if args.axis else options.axes
    if not 1 <= len(axes) <= 2:
        raise ValidationError("sweep needs 1 or 2 axes (scenario 'sweep' block or --axis)")
    labels = _monitor_labels(spec, options)
    axis_names = [ax.name for ax in axes]
    grids = [ax.values() for ax in axes]
    payloads = [(spec, axis_names, values, labels) for values in product(*grids)]

    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_sweep_row, payloads, chunksize=32))
    else:
        rows = [_sweep_row(p) for p in payloads]

    header = list(axis_names)
    for label in labels:
        header.extend([f"noise_var[{label}]", f"snr[{label}]", f"enhancement[{label}]"])
    fmt = args.format or options.fmt or "csv"
    if fmt == "json":
        records = [dict(zip(header, row)) for row in rows]
        _write_output(args.out, json.dumps(records, indent=2, sort_keys=True) + "\n")
    else:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([f"{v:.12g}" for v in row])
        _write_output(args.out, buffer.getvalue())
    return EXIT_OK


def _cmd_export_states(args) -> int:
    spec, _ = load_scenario(args.scenario)
    snapshots = stage_snapshots(spec)
    document = [
        {
            "label": snap.label,
            "center": [snap.center_x, snap.center_y],
            "major_variance": snap.major_variance,
            "minor_variance": snap.minor_variance,
            "orientation": snap.orientation,
        }
        for snap in snapshots
    ]
    _write_output(args.out, json.dumps(document, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _cmd_validate(args) -> int:
    spec, _ = load_scenario(args.scenario)
    circuit = build_circuit(spec)
    config = FockConfig(cutoff=args.cutoff, modes=max(circuit.n_modes, 1))
    report = compare_with_gaussian(spec, config, tolerance=args.tolerance)
    lines = []
    for row in report.deviations:
        lines.append(
            f"{row.label}: mean {row.gaussian_mean:.9g} vs {row.fock_mean:.9g}, "
            f"var {row.gaussian_var:.9g} vs {row.fock_var:.9g}"
        )
    verdict = "PASS" if report.passed else "FAIL"
    lines.append(
        f"{verdict}: max deviation {report.max_abs_deviation:.3e} "
        f"(tolerance {report.tolerance:.1e})"
    )
    _write_output(args.out, "\n".join(lines) + "\n")
    if not report.passed:
        raise NumericalError(
            f"engines deviate by {report.max_abs_deviation:.3e} > {report.tolerance:.1e}"
        )
    return EXIT_OK


def _write_output(path, text: str) -> None:
    if path:
        with open(path, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdmsim",
        description="Gaussian interferometer simulator: homodyne signal/noise/SNR",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate one scenario and write a JSON report")
    run.add_argument("scenario")
    run.add_argument("--out", default=None)

    sweep = sub.add_parser("sweep", help="sweep 1-2 scalar parameters, stream CSV")
    sweep.add_argument("scenario")
    sweep.add_argument("--axis", action="append", metavar="name=start:stop:count")
    sweep.add_argument("--out", default=None)
    sweep.add_argument("--format", choices=("json", "csv"), default=None)
    sweep.add_argument("--workers", type=int, default=1)

    export = sub.add_parser("export-states", help="stage-by-stage phase-space snapshots")
    export.add_argument("scenario")
    export.add_argument("--out", default=None)

    validate = sub.add_parser("validate", help="cross-check against the Fock oracle")
    validate.add_argument("scenario")
    validate.add_argument("--cutoff", type=int, default=30)
    validate.add_argument("--tolerance", type=float, default=1e-4)
    validate.add_argument("--out", default=None)
    return parser


_COMMANDS = {
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "export-states": _cmd_export_states,
    "validate": _cmd_validate,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ScenarioParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
