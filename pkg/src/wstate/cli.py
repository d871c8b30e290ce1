"""Command-line entry point: ``wstate {protocol,spectrum,sweep,trace}``.

Exit codes: 0 success, 2 bad config or arguments, 3 dimension cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import RunConfig, format_report, load_config, write_atomic
from .dynamics import (
    apply_step,
    build_schedule,
    population_trace,
    prepare_initial,
    run_protocol,
)
from .effective_model import (
    EffectiveModel,
    Variant,
    analytic_spectrum,
    build_star_hamiltonian,
    entangling_time,
)
from .errors import ConfigError, ResourceLimitError
from .numerics import DEFAULT_DIM_CAP, hermitian_eig

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CAP = 3


def _csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _fmt(x: float) -> str:
    return format(float(x), ".10g")


def _run_config(args) -> RunConfig:
    cfg = load_config(args.config)
    if getattr(args, "variant", None):
        cfg = replace(cfg, variant=Variant.parse(args.variant))
    return cfg


def _protocol_kwargs(cfg: RunConfig) -> dict:
    return dict(
        variant=cfg.variant,
        start=cfg.start,
        qubit=cfg.excited_qubit,
        transfer_duration=cfg.transfer_duration_ns,
        entangle_duration=cfg.entangle_duration_ns,
    )


def cmd_protocol(args) -> int:
    cfg = _run_config(args)
    report = run_protocol(cfg.device, cap=args.cap, **_protocol_kwargs(cfg))
    out = args.out or f"{Path(args.config).stem}_report.txt"
    write_atomic(out, format_report(report))

    print(f"variant      {report.variant.value}  (N={report.n_qubits}, start={report.start})")
    for name, value in report.durations.items():
        if name != "flip":
            print(f"{name:<12} {value:.4f} ns")
    print(f"fidelity     {report.fidelity:.4f}")
    print(f"leakage      {report.leakage:.4f}")
    labels = ["r"] + [f"q{q}" for q in range(report.n_qubits, 0, -1)]
    for label, amp in zip(labels, report.amplitudes):
        print(f"amp {label:<8} {amp.real:+.4f} {amp.imag:+.4f}i")
    print(f"report       {out}")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    model = EffectiveModel.from_ghz(args.n, args.g, args.variant or "WN")
    analytic = analytic_spectrum(model).eigenvalues
    numeric = hermitian_eig(build_star_hamiltonian(model)).eigenvalues
    dev = np.abs(analytic - numeric)
    rows = [
        [k, _fmt(a), _fmt(b), format(d, ".3e")]
        for k, (a, b, d) in enumerate(zip(analytic, numeric, dev))
    ]
    _emit(_csv_text(["index", "analytic_rad_per_ns", "numeric_rad_per_ns", "deviation"], rows), args.out)
    print(f"max deviation {dev.max():.3e} rad/ns", file=sys.stderr)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _run_config(args)
    if args.n_min < 1 or args.n_max < args.n_min:
        raise ConfigError(f"invalid range {args.n_min}..{args.n_max}")
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        device = cfg.device_for(n)
        t_ent = cfg.entangle_duration_ns
        if t_ent is None:
            g = math.sqrt(sum(x * x for x in device.couplings) / n)
            t_ent = entangling_time(EffectiveModel.from_ghz(n, g, cfg.variant))
        if args.cap is not None and device.dim > args.cap:
            print(f"warning: N={n} needs dimension {device.dim} > cap {args.cap}; sweep truncated",
                  file=sys.stderr)
            rows.append([n, _fmt(t_ent), "", "", "", "cap_exceeded"])
            break
        t0 = time.perf_counter()
        kwargs = _protocol_kwargs(cfg)
        kwargs["entangle_duration"] = t_ent
        if kwargs["qubit"] is not None and kwargs["qubit"] > n:
            kwargs["qubit"] = None
        report = run_protocol(device, cap=args.cap, **kwargs)
        rows.append([n, _fmt(t_ent), _fmt(report.fidelity), _fmt(report.leakage),
                     format(time.perf_counter() - t0, ".4f"), "ok"])
    header = ["N", "t_entangle_ns", "fidelity", "leakage", "wallclock_s", "status"]
    _emit(_csv_text(header, rows), args.out)
    return EXIT_OK


def cmd_trace(args) -> int:
    cfg = _run_config(args)
    points = args.points if args.points is not None else (cfg.trace_points or 101)
    steps = build_schedule(cfg.device, **_protocol_kwargs(cfg))
    t_max = args.t_max if args.t_max is not None else steps[-1].duration
    if points < 2:
        raise ConfigError("points must be at least 2", field="points")
    if not (t_max > 0 and math.isfinite(t_max)):
        raise ConfigError("t_max must be positive; a zero-length grid is degenerate", field="t_max")

    n = cfg.device.n_qubits
    psi = prepare_initial("ground" if cfg.start == "full_protocol" else "bus_excited", n)
    for step in steps[:-1]:
        psi = apply_step(psi, step, cap=args.cap)
    trace = population_trace(cfg.device, psi, np.linspace(0.0, t_max, points), cap=args.cap)

    header = ["time_ns", "pop_r"] + [f"pop_q{q}" for q in range(n, 0, -1)] + ["leakage"]
    rows = [
        [_fmt(t), *(_fmt(p) for p in pops), _fmt(leak)]
        for t, pops, leak in zip(trace.times, trace.populations, trace.leakage)
    ]
    _emit(_csv_text(header, rows), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wstate", description="W-state generation on a qutrit network with a resonator bus."
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default: stdout, or <config>_report.txt)")
    common.add_argument("--variant", type=str.upper, choices=["WN", "WN1"],
                        help="override the variant (wn or wn1)")
    common.add_argument("--cap", type=int, default=DEFAULT_DIM_CAP,
                        help=f"largest Hilbert-space dimension (default {DEFAULT_DIM_CAP})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("protocol", parents=[common], help="run one protocol and write a report")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_protocol)

    p = sub.add_parser("spectrum", parents=[common], help="analytic vs numeric star spectrum")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--g", type=float, default=0.1, help="coupling in GHz")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sweep", parents=[common], help="protocol over a range of N")
    p.add_argument("--config", required=True)
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("trace", parents=[common], help="populations during the entangling pulse")
    p.add_argument("--config", required=True)
    p.add_argument("--t-max", type=float, help="end time in ns (default: entangle duration)")
    p.add_argument("--points", type=int, help="grid points (default: trace_points or 101)")
    p.set_defaults(func=cmd_trace)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "n", 1) < 1:
        print("error: --n must be at least 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
